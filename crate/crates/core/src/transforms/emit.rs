//! Emitters for the tree reduction (number generator plus tree walk), the
//! ordinal program built on `inc`, and the non-Knievel unsoundness example.
//!
//! Sequences are stored in `node` via iterated pairing
//! `<a, b> = (a + b)(a + b + 1)/2 + a` together with a length counter
//! `len`, so the root is `node = 0, len = 0`.

use num_bigint::BigUint;

use super::{TransformError, TreeRule, TreeSpec, MAX_EXPLICIT_NODES};
use crate::syntax::{parse, Program};

/// Pairing code of a sequence, as computed by the emitted programs.
pub fn pair_code(w: &[u64]) -> BigUint {
    let mut code = BigUint::from(0u32);
    for &x in w {
        let s = &code + BigUint::from(x);
        code = (&s * (&s + 1u32)) / 2u32 + code;
    }
    code
}

fn emitted(src: &str) -> Program {
    parse(src).unwrap_or_else(|e| panic!("emitter produced unparsable code: {e}\n{src}"))
}

fn append(var: &str) -> String {
    format!("node := (node + {var}) * (node + {var} + 1) * 1/2 + node; len := len + 1")
}

/// Boolean guard true exactly when `(len, node)` encodes a member.
fn membership_checks(spec: &TreeSpec) -> Result<Vec<String>, TransformError> {
    match spec {
        TreeSpec::Explicit(set) => {
            if set.len() > MAX_EXPLICIT_NODES {
                return Err(TransformError::TreeTooLarge(set.len()));
            }
            Ok(set.iter().map(|w| format!("len = {} and node = {}", w.len(), pair_code(w))).collect())
        }
        TreeSpec::Rule(TreeRule::Full) => Ok(vec!["true".into()]),
        TreeSpec::Rule(TreeRule::AllZeros) => Ok(vec!["node = 0".into()]),
        TreeSpec::Rule(TreeRule::BoundedDepth(d)) => Ok(vec![format!("len <= {d}")]),
    }
}

/// Inline membership test setting `z` to 1 or 0.
fn membership(spec: &TreeSpec) -> Result<String, TransformError> {
    let checks = membership_checks(spec)?;
    let mut out = String::from("z := 0");
    for c in checks {
        out.push_str(&format!(";\n if ({c}) {{ z := 1 }}"));
    }
    Ok(out)
}

/// The number generator, leaving its result in `out`. `s` and the cheer
/// counter persist across calls.
fn num_gen(out: &str) -> String {
    format!(
        "x := 0; y := 0; w := 0;
         while (y = 0) {{
           x := x + 1;
           {{ y := 0 }} [] {{ y := 1 }};
           if (y = 0) {{ {{ skip }} <1/2> {{ exit }}; s := 2 * s }}
         }};
         while (w < s) {{ w := w + 1 }};
         {out} := x - 1"
    )
}

/// Reduction from an ω-tree to a Knievel-form program that is PAST exactly
/// when the tree is well-founded. Once a candidate child is rejected and the
/// disconnected-subtree check passes, the program stops.
pub fn emit_tree_reduction(spec: &TreeSpec) -> Result<Program, TransformError> {
    let member = membership(spec)?;
    let src = format!(
        "node := 0; len := 0; s := 1;
         while (true) {{
           {gen_a};
           {append_a};
           {member};
           if (z = 0) {{
             {gen_n};
             while (n > 0) {{
               n := n - 1;
               {gen_a};
               {append_a}
             }};
             {member};
             if (z = 1) {{ while (true) {{ skip }} }};
             exit
           }}
         }}",
        gen_a = num_gen("a"),
        gen_n = num_gen("n"),
        append_a = append("a"),
    );
    Ok(emitted(&src))
}

fn inc_source(cap: Option<u64>) -> String {
    let guard = match cap {
        Some(c) => format!("y = 0 and x < {c}"),
        None => "y = 0".into(),
    };
    format!(
        "x := 1; y := 0;
         while ({guard}) {{
           x := 2 * x;
           {{ y := 0 }} [] {{ y := 1 }};
           {{ skip }} <1/2> {{ exit }}
         }};
         while (x > 0) {{ x := x - 1 }}"
    )
}

/// `inc`: the scheduler picks a power of two, then the program busy-waits
/// that many iterations. Every doubling round is also a fair coin for
/// stopping, so the expected runtime is at most 24 under every scheduler.
pub fn inc_program() -> Program {
    emitted(&inc_source(None))
}

/// `inc` with the doubling loop forced to stop once `x` reaches `cap`, so
/// its state graph is finite.
pub fn inc_program_capped(cap: u64) -> Program {
    emitted(&inc_source(Some(cap)))
}

/// Machine loop: one candidate node per step, each step guarded by a
/// halving choice.
fn machine(spec: &TreeSpec) -> Result<String, TransformError> {
    let checks = membership_checks(spec)?;
    let mut body = String::new();
    for (i, c) in checks.iter().enumerate() {
        body.push_str(&format!("if (m = {i} and ({c})) {{ z := 1 }};\n"));
    }
    Ok(format!(
        "m := 0; z := 0;
         while (m < {steps}) {{
           {body}
           m := m + 1;
           {{ skip }} <1/2> {{ exit }}
         }}",
        steps = checks.len()
    ))
}

/// Ordinal program: walks a scheduler-chosen branch, validates each node
/// with a stepwise simulated membership machine and runs `inc` per
/// accepted node. Child indices are `x - 1` so that child 0 is reachable.
pub fn emit_ordinal_program(spec: &TreeSpec) -> Result<Program, TransformError> {
    let src = format!(
        "node := 0; len := 0;
         while (true) {{
           x := 0; y := 0;
           while (y = 0) {{
             x := x + 1;
             {{ y := 0 }} [] {{ y := 1 }};
             {{ skip }} <1/2> {{ exit }}
           }};
           a := x - 1;
           {append_a};
           {machine};
           if (z = 0) {{ exit }};
           {inc}
         }}",
        append_a = append("a"),
        machine = machine(spec)?,
        inc = inc_source(None),
    );
    Ok(emitted(&src))
}

fn unsoundness_source(cap: Option<u64>) -> String {
    let guard = match cap {
        Some(c) => format!("y = 0 and x < {c}"),
        None => "y = 0".into(),
    };
    format!(
        "x := 0; y := 0;
         while ({guard}) {{
           x := x + 1;
           {{ y := 0 }} <1/2> {{ y := 1 }}
         }};
         y := 1;
         while (x > 0) {{ y := 4 * y; x := x - 1 }};
         while (y > 0) {{ y := y - 1 }}"
    )
}

/// Not PAST and not in Knievel form: the loop exits after `x` rounds with
/// probability `2^-x`, then counts down from `4^x`.
pub fn unsoundness_program() -> Program {
    emitted(&unsoundness_source(None))
}

/// The same program with at most `cap` loop rounds.
pub fn unsoundness_program_capped(cap: u64) -> Program {
    emitted(&unsoundness_source(Some(cap)))
}
