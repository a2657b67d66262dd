use super::*;
use crate::rational::ratio;

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).unwrap()
}

fn survivor(outs: &[RoundOutcome]) -> &RoundOutcome {
    outs.iter().find(|o| o.survived).unwrap()
}

#[test]
fn t_examples() {
    assert_eq!(HydraState::parse("()").unwrap().t(), Ordinal::zero());
    assert_eq!(line_hydra().t(), Ordinal::omega());
    // two depth-2 chains and three direct leaves
    let h = HydraState::parse("((())(())()()())").unwrap();
    assert_eq!(h.t(), o("w^(1)*2 + 3"));
}

#[test]
fn text_round_trip() {
    for s in ["()", "(())", "(()())", "((())())", "(((()))(()))"] {
        assert_eq!(HydraState::parse(s).unwrap().to_text(), s);
    }
    for bad in ["", "(", "())", "()()", "(x)", ")("] {
        assert!(HydraState::parse(bad).is_err(), "{bad}");
    }
}

#[test]
fn json_round_trip() {
    let h = HydraState::parse("((())())").unwrap();
    let j = h.to_json();
    let back = HydraState::from_json_str(&j.to_string()).unwrap();
    assert_eq!(back.to_text(), h.to_text());
    assert_eq!(back.n, h.n);
    assert!(HydraState::from_json_str(r#"{"n":"4","nodes":[{"id":0,"parent":1},{"id":1,"parent":0}]}"#).is_err());
}

#[test]
fn line_round_e0() {
    let h = line_hydra();
    let leaf = h.heads()[0];
    let outs = play_round(&h, leaf, 0).unwrap();
    assert_eq!(outs.len(), 1);
    let s = survivor(&outs);
    assert_eq!(s.prob, ratio(1, 1));
    let r = s.result.as_ref().unwrap();
    assert_eq!(r.n, BigUint::from(4u32));
    // mid stays, three new leaves beside it
    assert!(r.isomorphic(&HydraState::parse("(()()()())").unwrap()));
    assert_eq!(r.t(), Ordinal::from_natural(4u32));
}

#[test]
fn line_round_e1() {
    let h = line_hydra();
    let outs = play_round(&h, h.heads()[0], 1).unwrap();
    assert_eq!(outs.len(), 2);
    assert!(!outs[0].survived);
    assert_eq!(outs[0].prob, ratio(1, 2));
    let s = survivor(&outs);
    assert_eq!(s.prob, ratio(1, 2));
    let r = s.result.as_ref().unwrap();
    assert_eq!(r.n, BigUint::from(16u32));
    assert_eq!(r.t(), Ordinal::from_natural(16u32));
    assert_eq!(r.heads().len(), 16);
}

#[test]
fn no_grandparent_round() {
    let h = HydraState::parse("(())").unwrap();
    let leaf = h.heads()[0];
    let outs = play_round(&h, leaf, 0).unwrap();
    let r = survivor(&outs).result.as_ref().unwrap();
    assert!(r.is_empty());
    assert_eq!(r.t(), Ordinal::zero());
    assert_eq!(play_round(&h, leaf, 1), Err(HydraError::NoGrandparent));
    assert_eq!(play_round(&h, h.root(), 0), Err(HydraError::NotAHead(0)));
}

#[test]
fn successors_examples() {
    let h = line_hydra();
    let got = successors_t(&h, h.heads()[0], 3).unwrap();
    let want: Vec<Ordinal> = [4u32, 16, 64, 256].iter().map(|&k| Ordinal::from_natural(k)).collect();
    assert_eq!(got, want);
    let two = HydraState::parse("((())(()))").unwrap();
    assert_eq!(two.t(), o("w^(1)*2"));
    let leaf = *two.heads().first().unwrap();
    let got = successors_t(&two, leaf, 2).unwrap();
    assert_eq!(got, vec![o("w + 4"), o("w + 16"), o("w + 64")]);
    assert!(got.iter().all(|t| *t < two.t()));
}

#[test]
fn strategies() {
    let h = line_hydra();
    let deepest = hercules_choose(&h, &HerculesStrategy::LeftmostDeepest, 0).unwrap();
    assert_eq!(deepest, h.heads()[0]);
    assert_eq!(h.depth(deepest), 2);
    assert_eq!(hercules_choose(&h, &HerculesStrategy::Scripted(vec![deepest]), 0).unwrap(), deepest);
    assert!(hercules_choose(&h, &HerculesStrategy::Scripted(vec![0]), 0).is_err());
    let big = HydraState::parse("((()())(()()())()()((())))").unwrap();
    let a: Vec<_> = (0..10).map(|r| hercules_choose(&big, &HerculesStrategy::Random(7), r).unwrap()).collect();
    let b: Vec<_> = (0..10).map(|r| hercules_choose(&big, &HerculesStrategy::Random(7), r).unwrap()).collect();
    assert_eq!(a, b);
    // deepest first, then by sibling-group size
    let order = canonical_heads(&big);
    assert_eq!(big.depth(order[0]), 3);
    assert_eq!(big.child_count(big.parent(order[1]).unwrap()), 3);
}

#[test]
fn star_counts_and_decode() {
    let h = HydraState::parse("((()())(())()())").unwrap();
    let c = star_counts(&h).unwrap();
    let as_u: Vec<u32> = c.iter().map(|x| x.try_into().unwrap()).collect();
    assert_eq!(as_u, vec![2, 1, 1]);
    assert!(star_counts(&line_hydra()).is_ok());
    assert!(matches!(star_counts(&HydraState::parse("(((())))").unwrap()), Err(CompileError::TooDeep(3))));
    let env = Valuation::new()
        .set("n", crate::rational::int(4))
        .set("c0", crate::rational::int(2))
        .set("c1", crate::rational::int(1))
        .set("c2", crate::rational::int(1));
    assert!(decode_counts(&env, 3).unwrap().isomorphic(&h));
}

use crate::semantics::Valuation;
