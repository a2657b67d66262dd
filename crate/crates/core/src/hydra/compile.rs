//! pGCL encoding of a Hydra game for hydras of height at most 2.
//!
//! Such a hydra is determined up to isomorphism by its star counts: `c_s`
//! is the number of root children carrying exactly `s` leaves (`c_0`
//! counts heads attached directly to the root). Chopping a head in a star
//! of size `s ≥ 1` turns that star and all `n' - 1` copies into stars of
//! size `s - 1`; chopping a root head has no grandparent and no regrowth.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::strategy::{random_table, HerculesStrategy, RANDOM_TABLE_LEN};
use super::{HydraError, HydraState, MAX_NODES};
use crate::rational::ratio;
use crate::semantics::Valuation;
use crate::syntax::{AExpr, BExpr, CmpOp, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("tree too large for configured encoding width: height {0} exceeds 2")]
    TooDeep(usize),
    #[error("scripted strategies name node ids and cannot be compiled to counts")]
    Scripted,
}

fn class_var(s: usize) -> String {
    format!("c{s}")
}

/// Star counts `c_0..c_S` of a hydra of height at most 2.
pub fn star_counts(h: &HydraState) -> Result<Vec<BigUint>, CompileError> {
    let height = h.height();
    if height > 2 {
        return Err(CompileError::TooDeep(height));
    }
    let mut counts: Vec<BigUint> = vec![BigUint::zero()];
    for c in h.children(h.root()) {
        let s = h.child_count(c);
        if counts.len() <= s {
            counts.resize(s + 1, BigUint::zero());
        }
        counts[s] += 1u32;
    }
    Ok(counts)
}

/// Rebuilds a hydra from the class counters `c0..c{width-1}` and `n` of a
/// valuation produced by the encoding.
pub fn decode_counts(env: &Valuation, width: usize) -> Result<HydraState, HydraError> {
    let mut h = HydraState::root_only();
    let bad = |what: &str| HydraError::Json(format!("counter {what} is not a natural number"));
    let nat = |name: &str| -> Result<BigUint, HydraError> {
        let v = env.get(name);
        if !v.is_integer() || v.numer() < &num_bigint::BigInt::zero() {
            return Err(bad(name));
        }
        Ok(v.to_integer().to_biguint().expect("non-negative"))
    };
    h.n = nat("n")?;
    let root = h.root();
    for s in 0..width {
        let c = nat(&class_var(s))?.to_usize().ok_or(HydraError::TooLarge)?;
        if c.saturating_mul(s + 1).saturating_add(h.parent.len()) > MAX_NODES {
            return Err(HydraError::TooLarge);
        }
        for _ in 0..c {
            let star = h.add_child(root);
            for _ in 0..s {
                h.add_child(star);
            }
        }
    }
    Ok(h)
}

fn v(name: &str) -> AExpr {
    AExpr::var(name)
}

fn int(n: i64) -> AExpr {
    AExpr::int(n)
}

fn nat(n: &BigUint) -> AExpr {
    AExpr::Lit(crate::rational::Rational::from_integer(n.clone().into()))
}

fn cmp(op: CmpOp, a: AExpr, b: AExpr) -> BExpr {
    BExpr::cmp(op, a, b)
}

fn evolve_choice() -> Program {
    Program::nondet(Program::assign("ev", int(0)), Program::assign("ev", int(1)))
}

/// Chop a head of class `s`, then let the Hydra evolve and regrow.
fn round_body(s: usize) -> Program {
    let c = class_var(s);
    let chop = Program::assign(&c, AExpr::sub(v(&c), int(1)));
    if s == 0 {
        return chop;
    }
    let below = class_var(s - 1);
    Program::seq_all([
        chop,
        evolve_choice(),
        Program::while_loop(
            cmp(CmpOp::Eq, v("ev"), int(1)),
            Program::seq_all([
                Program::halt_with(AExpr::Lit(ratio(1, 2))),
                Program::assign("n", AExpr::mul(v("n"), int(4))),
                evolve_choice(),
            ]),
        ),
        Program::assign(&below, AExpr::add(v(&below), v("n"))),
    ])
}

fn leftmost_deepest(width: usize) -> Program {
    let mut acc = round_body(0);
    for s in 1..width {
        acc = Program::if_else(cmp(CmpOp::Gt, v(&class_var(s)), int(0)), round_body(s), acc);
    }
    acc
}

fn sum_of(terms: Vec<AExpr>) -> AExpr {
    terms.into_iter().reduce(AExpr::add).unwrap_or_else(|| int(0))
}

/// Picks the `k`-th head in canonical order, `k < total heads`.
fn indexed_choice(width: usize) -> Program {
    let mut acc = round_body(0);
    for s in 1..width {
        let block = AExpr::mul(int(s as i64), v(&class_var(s)));
        acc = Program::if_else(
            cmp(CmpOp::Lt, v("k"), block.clone()),
            round_body(s),
            Program::seq(Program::assign("k", AExpr::sub(v("k"), block)), acc),
        );
    }
    acc
}

fn random_choice(seed: u64, width: usize) -> Program {
    let table = random_table(seed);
    let mut lookup: Vec<Program> = table
        .iter()
        .enumerate()
        .map(|(r, &u)| Program::if_then(cmp(CmpOp::Eq, v("r"), int(r as i64)), Program::assign("u", int(u as i64))))
        .collect();
    let heads = sum_of(
        (0..width)
            .map(|s| if s == 0 { v("c0") } else { AExpr::mul(int(s as i64), v(&class_var(s))) })
            .collect(),
    );
    lookup.push(Program::assign("hh", heads));
    lookup.push(Program::assign("k", v("u")));
    lookup.push(Program::while_loop(
        cmp(CmpOp::Ge, v("k"), v("hh")),
        Program::assign("k", AExpr::sub(v("k"), v("hh"))),
    ));
    lookup.push(indexed_choice(width));
    Program::if_else(
        cmp(CmpOp::Lt, v("r"), int(RANDOM_TABLE_LEN as i64)),
        Program::seq_all(lookup),
        leftmost_deepest(width),
    )
}

/// Emits the game as a Knievel-form program. Evolution decisions are the
/// program's nondeterministic choices; deaths are `skip <1/2> exit`.
pub fn compile_to_pgcl(h: &HydraState, hercules: &HerculesStrategy) -> Result<Program, CompileError> {
    let counts = star_counts(h)?;
    let width = counts.len();
    let choose = match hercules {
        HerculesStrategy::LeftmostDeepest => leftmost_deepest(width),
        HerculesStrategy::Random(seed) => random_choice(*seed, width),
        HerculesStrategy::Scripted(_) => return Err(CompileError::Scripted),
    };
    let mut init = vec![Program::assign("n", nat(&h.n))];
    for (s, c) in counts.iter().enumerate() {
        if !c.is_zero() {
            init.push(Program::assign(&class_var(s), nat(c)));
        }
    }
    let empty = cmp(CmpOp::Eq, sum_of((0..width).map(|s| v(&class_var(s))).collect()), int(0));
    let game = Program::while_loop(
        BExpr::Lit(true),
        Program::seq_all([
            Program::if_then(empty, Program::Exit),
            choose,
            Program::assign("r", AExpr::add(v("r"), int(1))),
        ]),
    );
    init.push(game);
    Ok(Program::seq_all(init))
}
