use super::*;
use crate::exploration::{build_tree, exp_runtime_bounds, Limits, SeriesWalker};
use crate::rational::{int, Rational};
use crate::scheduling::{constant, parity};
use crate::semantics::{Direction, ExecState};
use crate::syntax::parse;

fn limits() -> Limits {
    Limits::new(200_000)
}

#[test]
fn knievel_recognition() {
    assert!(is_knievel(&parse("{ skip } <1/2> { exit }").unwrap()));
    assert!(!is_knievel(&parse("x := 1; while (x != 0) { x := x + 1 <1/2> x := x - 1 }").unwrap()));
    assert!(!is_knievel(&parse("{ exit } <1/2> { skip }").unwrap()));
    assert!(is_knievel(&parse("{ y := 0 } [] { y := 1 }").unwrap()));
    assert!(is_knievel(&emit_tree_reduction(&TreeSpec::root_only()).unwrap()));
}

#[test]
fn tree_ordinals() {
    let t = |ws: &[&[u64]]| match TreeSpec::explicit(ws.iter().map(|w| w.to_vec())).unwrap() {
        TreeSpec::Explicit(s) => ord_of_tree(&s),
        TreeSpec::Rule(_) => unreachable!(),
    };
    assert_eq!(t(&[&[]]), Ordinal::zero());
    assert_eq!(t(&[&[], &[0]]), Ordinal::one());
    assert_eq!(t(&[&[], &[0], &[0, 0], &[0, 0, 0]]), Ordinal::from_natural(3u32));
    assert_eq!(t(&[&[], &[0], &[5], &[5, 1]]), Ordinal::from_natural(2u32));
}

#[test]
fn tree_spec_json() {
    let s = TreeSpec::from_json_str(r#"{"explicit": [[], [0], [0,0]]}"#).unwrap();
    assert!(s.contains(&[0, 0]) && !s.contains(&[1]));
    assert_eq!(TreeSpec::from_json_str(&s.to_json().to_string()).unwrap(), s);
    let r = TreeSpec::from_json_str(r#"{"rule": "bounded-depth(2)"}"#).unwrap();
    assert_eq!(r, TreeSpec::Rule(TreeRule::BoundedDepth(2)));
    assert_eq!(TreeSpec::from_json_str(&r.to_json().to_string()).unwrap(), r);
    assert!(TreeSpec::from_json_str(r#"{"explicit": [[0]]}"#).is_err());
    assert!(TreeSpec::from_json_str(r#"{"explicit": [[], [0, 1]]}"#).is_err());
    assert!(TreeSpec::from_json_str(r#"{"rule": "sparse"}"#).is_err());
}

#[test]
fn pairing_is_injective_per_length() {
    let mut seen = std::collections::HashSet::new();
    for a in 0..6u64 {
        for b in 0..6u64 {
            for c in 0..6u64 {
                assert!(seen.insert(pair_code(&[a, b, c])));
            }
        }
    }
    assert_eq!(pair_code(&[0, 0, 0]), pair_code(&[]));
    // <0, 1> = 1 * 2 / 2 + 0, then <1, 2> = 3 * 4 / 2 + 1
    assert_eq!(pair_code(&[1]), 1u32.into());
    assert_eq!(pair_code(&[1, 2]), 7u32.into());
}

#[test]
fn control_graph_shapes() {
    let g = control_graph(&parse("x := 1; x := 2").unwrap()).unwrap();
    // assign, concat, assign
    assert_eq!(g.locations.len(), 3);
    let g = control_graph(&parse("while (true) { skip }").unwrap()).unwrap();
    assert!(g.locations.len() <= 4);
    assert!(matches!(
        control_graph(&parse("{ skip } <x> { exit }").unwrap()),
        Err(TransformError::NonConstantProbability(_))
    ));
}

#[test]
fn width_checks() {
    let p = parse("{ x := 1 } <1/2> { x := 2 }; { y := 1 } <1/2> { y := 2 }; { z := 1 } <1/2> { z := 2 }").unwrap();
    assert_eq!(
        to_knievel(&p, KnievelPolicy { width: 4, cheer: 1 }),
        Err(TransformError::WidthExceeded { needed: 8, width: 4 })
    );
    assert!(to_knievel(&p, KnievelPolicy { width: 8, cheer: 1 }).is_ok());
    assert!(to_knievel(&p, KnievelPolicy { width: 0, cheer: 1 }).is_err());
}

/// Every normally-terminating run of the output ends with `kc` equal to the
/// exact expected runtime of the source.
fn final_kc(out: &Program, depth: usize) -> Vec<Rational> {
    let tree = build_tree(out, &mut constant(Direction::Ln), depth, limits()).unwrap();
    assert!(tree.frontier().is_empty(), "output did not finish within {depth} steps");
    tree.terminal_leaves()
        .into_iter()
        .map(|i| &tree.nodes[i].state)
        .filter(|s| s.valuation.get("run") == int(0) && s.valuation.get("ovf") == int(0))
        .map(|s| s.valuation.get("kc"))
        .collect()
}

#[test]
fn knievel_tracks_source_runtime() {
    for src in ["x := 1", "x := 1; x := 2", "{ x := 1 } <1/3> { skip; skip }; y := x", "if (x = 0) { skip } else { exit }"] {
        let p = parse(src).unwrap();
        let exact = exp_runtime_bounds(&p, &mut constant(Direction::Ln), 100, limits()).unwrap().exact.unwrap();
        let out = to_knievel(&p, KnievelPolicy { width: 4, cheer: 1 }).unwrap();
        assert!(is_knievel(&out));
        let kcs = final_kc(&out, 4000);
        assert!(!kcs.is_empty(), "{src}");
        assert!(kcs.iter().all(|k| *k == exact), "{src}: {kcs:?} vs {exact}");
    }
}

#[test]
fn knievel_terminating_is_closed() {
    let out = to_knievel(&parse("x := 1").unwrap(), KnievelPolicy::default()).unwrap();
    let b = exp_runtime_bounds(&out, &mut parity(), 2000, limits()).unwrap();
    assert!(b.closed);
}

#[test]
fn knievel_divergent_grows() {
    let out = to_knievel(&parse("while (true) { skip }").unwrap(), KnievelPolicy::default()).unwrap();
    let mut w = SeriesWalker::termination(ExecState::initial(&out), limits());
    let mut f = constant(Direction::Ln);
    let target = int(50);
    let mut steps = 0;
    while *w.lower() <= target {
        w.advance(&mut f).unwrap();
        steps += 1;
        assert!(steps < 20_000, "lower bound stuck at {}", w.lower());
    }
    assert!(w.max_live_per_depth() <= 1);
}

#[test]
fn ordinal_program_is_knievel() {
    for spec in [TreeSpec::root_only(), TreeSpec::Rule(TreeRule::AllZeros), TreeSpec::Rule(TreeRule::BoundedDepth(2))] {
        let p = emit_ordinal_program(&spec).unwrap();
        assert!(is_knievel(&p));
        assert!(is_knievel(&emit_tree_reduction(&spec).unwrap()));
    }
    assert!(is_knievel(&inc_program()));
    assert!(!is_knievel(&unsoundness_program()));
}

#[test]
fn explicit_tree_too_large() {
    let nodes = std::iter::once(vec![]).chain((0..300u64).map(|i| vec![i]));
    let spec = TreeSpec::explicit(nodes).unwrap();
    assert!(matches!(emit_tree_reduction(&spec), Err(TransformError::TreeTooLarge(301))));
}
