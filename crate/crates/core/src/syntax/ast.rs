use std::sync::Arc;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Arithmetic expression over rational-valued variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AExpr {
    Lit(Rational),
    Var(String),
    Neg(Box<AExpr>),
    Bin(ArithOp, Box<AExpr>, Box<AExpr>),
}

impl AExpr {
    pub fn lit(r: Rational) -> Self {
        AExpr::Lit(r)
    }

    pub fn int(n: i64) -> Self {
        AExpr::Lit(crate::rational::int(n))
    }

    pub fn var(name: &str) -> Self {
        AExpr::Var(name.to_string())
    }

    pub fn add(a: AExpr, b: AExpr) -> Self {
        AExpr::Bin(ArithOp::Add, Box::new(a), Box::new(b))
    }

    pub fn sub(a: AExpr, b: AExpr) -> Self {
        AExpr::Bin(ArithOp::Sub, Box::new(a), Box::new(b))
    }

    pub fn mul(a: AExpr, b: AExpr) -> Self {
        AExpr::Bin(ArithOp::Mul, Box::new(a), Box::new(b))
    }

    pub fn neg(a: AExpr) -> Self {
        AExpr::Neg(Box::new(a))
    }

    /// True when the expression mentions no variable.
    pub fn is_constant(&self) -> bool {
        match self {
            AExpr::Lit(_) => true,
            AExpr::Var(_) => false,
            AExpr::Neg(a) => a.is_constant(),
            AExpr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn collect_vars(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            AExpr::Lit(_) => {}
            AExpr::Var(v) => {
                out.insert(v.clone());
            }
            AExpr::Neg(a) => a.collect_vars(out),
            AExpr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// Boolean guard expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BExpr {
    Lit(bool),
    Cmp(CmpOp, AExpr, AExpr),
    Not(Box<BExpr>),
    And(Box<BExpr>, Box<BExpr>),
    Or(Box<BExpr>, Box<BExpr>),
}

impl BExpr {
    pub fn cmp(op: CmpOp, a: AExpr, b: AExpr) -> Self {
        BExpr::Cmp(op, a, b)
    }

    pub fn and(a: BExpr, b: BExpr) -> Self {
        BExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BExpr, b: BExpr) -> Self {
        BExpr::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: BExpr) -> Self {
        BExpr::Not(Box::new(a))
    }

    pub fn collect_vars(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            BExpr::Lit(_) => {}
            BExpr::Cmp(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            BExpr::Not(a) => a.collect_vars(out),
            BExpr::And(a, b) | BExpr::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// A pGCL program. Sub-programs are reference counted so that execution
/// states share structure with the source program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Program {
    Empty,
    Skip,
    Exit,
    Assign(String, AExpr),
    Seq(Arc<Program>, Arc<Program>),
    ProbChoice(Arc<Program>, AExpr, Arc<Program>),
    NondetChoice(Arc<Program>, Arc<Program>),
    While(BExpr, Arc<Program>),
    If(BExpr, Arc<Program>, Arc<Program>),
}

impl Program {
    pub fn assign(var: &str, e: AExpr) -> Self {
        Program::Assign(var.to_string(), e)
    }

    pub fn seq(a: Program, b: Program) -> Self {
        Program::Seq(Arc::new(a), Arc::new(b))
    }

    /// Right-nested sequence of the given statements; `Empty` when none.
    pub fn seq_all<I: IntoIterator<Item = Program>>(items: I) -> Self {
        let mut items: Vec<Program> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Program::Empty;
        };
        while let Some(prev) = items.pop() {
            acc = Program::seq(prev, acc);
        }
        acc
    }

    pub fn prob(a: Program, p: AExpr, b: Program) -> Self {
        Program::ProbChoice(Arc::new(a), p, Arc::new(b))
    }

    pub fn nondet(a: Program, b: Program) -> Self {
        Program::NondetChoice(Arc::new(a), Arc::new(b))
    }

    pub fn while_loop(guard: BExpr, body: Program) -> Self {
        Program::While(guard, Arc::new(body))
    }

    pub fn if_then(guard: BExpr, then: Program) -> Self {
        Program::If(guard, Arc::new(then), Arc::new(Program::Empty))
    }

    pub fn if_else(guard: BExpr, then: Program, other: Program) -> Self {
        Program::If(guard, Arc::new(then), Arc::new(other))
    }

    /// `skip <p> exit`: continue with probability `p`, stop otherwise.
    pub fn halt_with(p: AExpr) -> Self {
        Program::prob(Program::Skip, p, Program::Exit)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Program::Empty)
    }

    /// Number of AST nodes, expressions excluded.
    pub fn size(&self) -> usize {
        match self {
            Program::Empty | Program::Skip | Program::Exit | Program::Assign(..) => 1,
            Program::Seq(a, b) | Program::ProbChoice(a, _, b) | Program::NondetChoice(a, b) => {
                1 + a.size() + b.size()
            }
            Program::While(_, b) => 1 + b.size(),
            Program::If(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Visits every sub-program in pre-order.
    pub fn visit(&self, f: &mut dyn FnMut(&Program)) {
        f(self);
        match self {
            Program::Empty | Program::Skip | Program::Exit | Program::Assign(..) => {}
            Program::Seq(a, b) | Program::ProbChoice(a, _, b) | Program::NondetChoice(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Program::While(_, b) => b.visit(f),
            Program::If(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// All variables mentioned anywhere in the program.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.visit(&mut |p| match p {
            Program::Assign(v, e) => {
                out.insert(v.clone());
                e.collect_vars(&mut out);
            }
            Program::ProbChoice(_, e, _) => e.collect_vars(&mut out),
            Program::While(g, _) | Program::If(g, _, _) => g.collect_vars(&mut out),
            _ => {}
        });
        out
    }
}
