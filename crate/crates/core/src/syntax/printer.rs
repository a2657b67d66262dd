use num_traits::Signed;

use super::ast::{AExpr, ArithOp, BExpr, Program};
use crate::rational::to_text;

const INLINE_WIDTH: usize = 56;

/// Canonical multi-line rendering; reparses to a structurally equal AST.
pub fn print(p: &Program) -> String {
    let mut out = String::new();
    top(p, &mut out, Some(0));
    out
}

/// Canonical single-line rendering, used for state keys.
pub fn print_compact(p: &Program) -> String {
    let mut out = String::new();
    top(p, &mut out, None);
    out
}

fn top(p: &Program, out: &mut String, level: Option<usize>) {
    if p.is_empty() {
        out.push_str("{ }");
        return;
    }
    chain(p, out, level);
}

fn spine(p: &Program) -> Vec<&Program> {
    let mut items = Vec::new();
    let mut cur = p;
    while let Program::Seq(a, b) = cur {
        items.push(a.as_ref());
        cur = b.as_ref();
    }
    items.push(cur);
    items
}

fn pad(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn chain(p: &Program, out: &mut String, level: Option<usize>) {
    for (i, s) in spine(p).into_iter().enumerate() {
        if i > 0 {
            match level {
                Some(l) => {
                    out.push_str(";\n");
                    pad(out, l);
                }
                None => out.push_str("; "),
            }
        }
        stmt(s, out, level);
    }
}

/// `{ ... }` around a program; pretty mode keeps short blocks on one line.
fn block(p: &Program, out: &mut String, level: Option<usize>) {
    if p.is_empty() {
        out.push_str("{ }");
        return;
    }
    if let Some(l) = level {
        let flat = print_compact(p);
        if flat.len() > INLINE_WIDTH || flat.contains('{') {
            out.push_str("{\n");
            pad(out, l + 1);
            chain(p, out, Some(l + 1));
            out.push('\n');
            pad(out, l);
            out.push('}');
            return;
        }
    }
    out.push_str("{ ");
    chain(p, out, None);
    out.push_str(" }");
}

fn stmt(p: &Program, out: &mut String, level: Option<usize>) {
    match p {
        Program::Empty | Program::Seq(..) => block(p, out, level),
        Program::Skip => out.push_str("skip"),
        Program::Exit => out.push_str("exit"),
        Program::Assign(v, e) => {
            out.push_str(v);
            out.push_str(" := ");
            aexpr(e, 1, out);
        }
        Program::While(g, body) => {
            out.push_str("while (");
            bexpr(g, 1, out);
            out.push_str(") ");
            block(body, out, level);
        }
        Program::If(g, then, other) => {
            out.push_str("if (");
            bexpr(g, 1, out);
            out.push_str(") ");
            block(then, out, level);
            if !other.is_empty() {
                out.push_str(" else ");
                block(other, out, level);
            }
        }
        Program::ProbChoice(a, e, b) => {
            arm(a, out, level);
            out.push_str(" <");
            aexpr(e, 1, out);
            out.push_str("> ");
            arm(b, out, level);
        }
        Program::NondetChoice(a, b) => {
            arm(a, out, level);
            out.push_str(" [] ");
            arm(b, out, level);
        }
    }
}

/// Choice arms are always braced so the operators never need precedence.
fn arm(p: &Program, out: &mut String, level: Option<usize>) {
    block(p, out, level);
}

fn aexpr_prec(e: &AExpr) -> u8 {
    match e {
        AExpr::Bin(ArithOp::Add | ArithOp::Sub, ..) => 1,
        AExpr::Bin(ArithOp::Mul, ..) => 2,
        AExpr::Neg(_) => 3,
        AExpr::Lit(r) if r.is_negative() => 3,
        AExpr::Lit(_) | AExpr::Var(_) => 4,
    }
}

fn aexpr(e: &AExpr, min: u8, out: &mut String) {
    let prec = aexpr_prec(e);
    if prec < min {
        out.push('(');
        aexpr(e, 1, out);
        out.push(')');
        return;
    }
    match e {
        AExpr::Lit(r) => out.push_str(&to_text(r)),
        AExpr::Var(v) => out.push_str(v),
        AExpr::Neg(inner) => {
            out.push('-');
            match inner.as_ref() {
                // `-1` would read back as a literal, so keep the negation explicit.
                AExpr::Lit(r) if !r.is_negative() => {
                    out.push('(');
                    out.push_str(&to_text(r));
                    out.push(')');
                }
                other => aexpr(other, 3, out),
            }
        }
        AExpr::Bin(op, a, b) => {
            let (sym, lp, rp) = match op {
                ArithOp::Add => (" + ", 1, 2),
                ArithOp::Sub => (" - ", 1, 2),
                ArithOp::Mul => (" * ", 2, 3),
            };
            aexpr(a, lp, out);
            out.push_str(sym);
            aexpr(b, rp, out);
        }
    }
}

fn bexpr_prec(b: &BExpr) -> u8 {
    match b {
        BExpr::Or(..) => 1,
        BExpr::And(..) => 2,
        BExpr::Not(_) => 3,
        BExpr::Lit(_) | BExpr::Cmp(..) => 4,
    }
}

fn bexpr(b: &BExpr, min: u8, out: &mut String) {
    if bexpr_prec(b) < min {
        out.push('(');
        bexpr(b, 1, out);
        out.push(')');
        return;
    }
    match b {
        BExpr::Lit(v) => out.push_str(if *v { "true" } else { "false" }),
        BExpr::Cmp(op, l, r) => {
            aexpr(l, 1, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            aexpr(r, 1, out);
        }
        BExpr::Not(inner) => {
            out.push_str("not ");
            bexpr(inner, 3, out);
        }
        BExpr::And(l, r) => {
            bexpr(l, 2, out);
            out.push_str(" and ");
            bexpr(r, 3, out);
        }
        BExpr::Or(l, r) => {
            bexpr(l, 1, out);
            out.push_str(" or ");
            bexpr(r, 2, out);
        }
    }
}

pub fn print_aexpr(e: &AExpr) -> String {
    let mut out = String::new();
    aexpr(e, 1, &mut out);
    out
}

pub fn print_bexpr(b: &BExpr) -> String {
    let mut out = String::new();
    bexpr(b, 1, &mut out);
    out
}
