use super::*;
use crate::exploration::collapse_to_state_graph;
use crate::rational::{int, ratio};
use crate::syntax::parse;

fn graph(json: &str) -> StateGraph {
    StateGraph::from_json_str(json).unwrap()
}

fn chain() -> StateGraph {
    graph(r#"{"initial":"s0","nodes":[{"key":"s0","terminal":false},{"key":"s1","terminal":true}],
        "edges":[{"from":"s0","to":"s1","kind":"det"}]}"#)
}

fn rsm(pairs: &[(&str, Rational)], eps: Rational) -> RsmCert {
    RsmCert { h: pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(), epsilon: eps }
}

fn prob_graph() -> StateGraph {
    graph(r#"{"initial":"s","nodes":[{"key":"s","terminal":false},{"key":"t","terminal":true},{"key":"a","terminal":false}],
        "edges":[{"from":"s","to":"t","kind":"prob-left","p":"1/2"},{"from":"s","to":"a","kind":"prob-right","p":"1/2"},
                 {"from":"a","to":"t","kind":"det"}]}"#)
}

#[test]
fn rsm_examples() {
    let v = check_rsm(&chain(), &rsm(&[("s0", int(1)), ("s1", int(0))], int(1))).unwrap();
    assert!(v.ok);
    let g = prob_graph();
    let bad = check_rsm(&g, &rsm(&[("s", int(2)), ("t", int(0)), ("a", int(4))], int(1))).unwrap();
    assert!(!bad.ok);
    assert_eq!(bad.violations.len(), 1);
    assert_eq!(bad.violations[0].condition, "prob");
    assert_eq!(bad.violations[0].lhs, "3");
    assert_eq!(bad.violations[0].rhs, "2");
    let good = check_rsm(&g, &rsm(&[("s", int(3)), ("t", int(0)), ("a", int(4))], int(1))).unwrap();
    assert!(good.ok);
    assert!(matches!(check_rsm(&g, &rsm(&[("s", int(3))], int(1))), Err(CertError::MissingNode(_))));
    assert!(matches!(check_rsm(&chain(), &rsm(&[("s0", int(1)), ("s1", int(0))], int(0))), Err(CertError::BadEpsilon)));
}

#[test]
fn bound_examples() {
    assert_eq!(rsm_bound(&rsm(&[("s", int(3))], int(1)), "s").unwrap(), int(3));
    assert_eq!(rsm_bound(&rsm(&[("s", int(3))], ratio(1, 2)), "s").unwrap(), int(6));
}

fn ranks(pairs: &[(&str, u32)]) -> BTreeMap<String, Ordinal> {
    pairs.iter().map(|(k, v)| (k.to_string(), Ordinal::from_natural(*v))).collect()
}

#[test]
fn lower_set_examples() {
    let g = graph(r#"{"initial":"a","nodes":[{"key":"a","terminal":false},{"key":"b","terminal":false},{"key":"c","terminal":true}],
        "edges":[{"from":"a","to":"b","kind":"det"},{"from":"b","to":"c","kind":"det"}]}"#);
    let r = ranks(&[("a", 2), ("b", 1), ("c", 0)]);
    assert_eq!(lower_set(&g, &r, 0).unwrap(), vec![1, 2]);
    assert!(lower_set(&g, &r, 2).unwrap().is_empty());
    for s in 0..3 {
        assert!(!lower_set(&g, &r, s).unwrap().contains(&s));
    }
}

#[test]
fn proof_rule_examples() {
    let g = chain();
    let mut cert = RuleCert { g: ranks(&[("s0", 1), ("s1", 0)]), k: BTreeMap::new() };
    cert.k.insert("s0".into(), rsm(&[("s0", int(1)), ("s1", int(0))], int(1)));
    assert!(check_proof_rule(&g, &cert).unwrap().ok);
    let mut bad = cert.clone();
    bad.g.insert("s1".into(), Ordinal::from_natural(1u32));
    let v = check_proof_rule(&g, &bad).unwrap();
    assert!(!v.ok);
    assert!(v.violations.iter().any(|x| x.condition == "rank-zero-iff-terminal"));
    // zero-set must be exact: positive value on a lower node is rejected
    let mut wrong = cert.clone();
    wrong.k.insert("s0".into(), rsm(&[("s0", int(2)), ("s1", int(1))], int(1)));
    assert!(!check_proof_rule(&g, &wrong).unwrap().ok);
    let j = cert.to_json().to_string();
    assert_eq!(RuleCert::from_json_str(&j).unwrap(), cert);
}

#[test]
fn in_loop_examples() {
    let g = collapse_to_state_graph(&parse("while (true) { { skip } <1/2> { exit } }").unwrap(), 50).unwrap();
    let region: Vec<bool> = (0..g.len()).map(|s| !g.is_terminal(s)).collect();
    let c = in_loop_rsm_from_bound(&g, &region, &int(100)).unwrap();
    // geometric oracle: exit at step 4i+3 with probability 2^-(i+1)
    let oracle: Rational = (0..200u32).map(|i| ratio(4 * i as i64 + 3, 1) * crate::rational::half_pow(i + 1)).sum();
    let h0 = c.h[g.key(g.initial)].clone();
    assert!(h0 >= oracle && &h0 - &oracle < ratio(1, 1_000_000));
    assert_eq!(h0, int(7));
    assert!(check_rsm(&g, &c).unwrap().ok);
    assert!(matches!(in_loop_rsm_from_bound(&g, &region, &int(6)), Err(CertError::BoundExceeded { .. })));

    let g = collapse_to_state_graph(&parse("skip").unwrap(), 10).unwrap();
    let region: Vec<bool> = (0..g.len()).map(|s| !g.is_terminal(s)).collect();
    let c = in_loop_rsm_from_bound(&g, &region, &int(10)).unwrap();
    assert_eq!(c.h[g.key(g.initial)], int(1));

    let g = collapse_to_state_graph(&parse("while (true) { skip }").unwrap(), 10).unwrap();
    let region: Vec<bool> = (0..g.len()).map(|s| !g.is_terminal(s)).collect();
    assert!(matches!(in_loop_rsm_from_bound(&g, &region, &int(10)), Err(CertError::NotExitBounded(_))));
}

#[test]
fn nondet_worst_case() {
    // left arm takes one extra step
    let g = collapse_to_state_graph(&parse("{ skip; skip } [] { skip }").unwrap(), 20).unwrap();
    let region: Vec<bool> = (0..g.len()).map(|s| !g.is_terminal(s)).collect();
    let v = worst_case_exit_time(&g, &region).unwrap();
    // choice, skip, concat2, skip
    assert_eq!(v[g.initial], int(4));
}
