use std::cmp::Ordering;

use super::*;

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).unwrap()
}

fn n(k: u32) -> Ordinal {
    Ordinal::from_natural(k)
}

#[test]
fn compare_examples() {
    assert_eq!(compare(&Ordinal::omega(), &n(5)), Ordering::Greater);
    assert_eq!(compare(&o("w + 1"), &o("w + 1")), Ordering::Equal);
    assert_eq!(compare(&o("w^(w)*1"), &o("w^(1)*1000 + 999")), Ordering::Greater);
    assert!(n(0) < n(1));
}

#[test]
fn natural_sum_examples() {
    assert_eq!(natural_sum(&o("w + 1"), &Ordinal::omega()), o("w^(1)*2 + 1"));
    assert_eq!(natural_sum(&Ordinal::zero(), &o("w^(w)*3")), o("w^(w)*3"));
    assert_eq!(natural_sum(&o("w^(w) + w"), &o("w^(1)*2")), o("w^(w)*1 + w^(1)*3"));
}

#[test]
fn omega_pow_examples() {
    assert_eq!(omega_pow(Ordinal::zero()), n(1));
    assert_eq!(omega_pow(n(1)), Ordinal::omega());
    assert_eq!(omega_pow(Ordinal::omega()), o("w^(w)"));
}

#[test]
fn misc_examples() {
    assert_eq!(Ordinal::from_natural(0u32), Ordinal::zero());
    assert_eq!(Ordinal::omega().successor(), o("w + 1"));
    assert!(!Ordinal::omega().is_finite());
    assert!(n(7).is_finite());
    assert_eq!(n(7).as_natural(), Some(7u32.into()));
}

#[test]
fn text_forms() {
    assert_eq!(o("w^(w)*1 + w^(1)*3 + 2").to_text(), "w^(w)*1 + w^(1)*3 + 2");
    assert_eq!(Ordinal::omega().to_text(), "w");
    assert_eq!(Ordinal::zero().to_text(), "0");
    assert_eq!(o("ω^(ω) + 1"), o("w^(w) + 1"));
    for bad in ["", "w^", "w^(", "x", "1 +", "w^(1)*"] {
        assert!(Ordinal::parse(bad).is_err(), "{bad}");
    }
    let deep = format!("{}0{}", "w^(".repeat(200), ")".repeat(200));
    assert!(Ordinal::parse(&deep).is_err());
}
