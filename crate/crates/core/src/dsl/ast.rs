use std::fmt;

use crate::number::Rational;

/// Source position, 1-based. Positions never take part in equality, so two
/// trees differing only in layout compare equal.
#[derive(Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub column: u32,
}

impl Span {
    pub fn new(line: u32, column: u32) -> Self {
        Span { line, column }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Debug for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefAst {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Item {
    Algebra(AlgebraDef),
    Space(SpaceDef),
}

impl Item {
    pub fn name(&self) -> &Ident {
        match self {
            Item::Algebra(a) => &a.name,
            Item::Space(s) => &s.name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDef {
    pub name: Ident,
    pub carrier: Option<CarrierSpec>,
    pub zero: Option<Expr>,
    pub half: Option<Expr>,
    pub one: Option<Expr>,
    pub two: Option<Expr>,
    pub params: Vec<Param>,
    pub op: Option<OpDef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDef {
    pub name: Ident,
    pub over: Ident,
    pub carrier: Option<CarrierSpec>,
    pub params: Vec<Param>,
    pub op: Option<OpDef>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseCarrier {
    Q,
    QI,
    R64,
    Zmod(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierSpec {
    /// Factors `base^power` joined by `x`.
    pub factors: Vec<(BaseCarrier, u32)>,
    /// Conjunction of comparisons over `c1, .., ck`.
    pub constraint: Vec<Comparison>,
    pub span: Span,
}

impl CarrierSpec {
    pub fn leaves(&self) -> Vec<BaseCarrier> {
        self.factors
            .iter()
            .flat_map(|(b, k)| std::iter::repeat_n(*b, *k as usize))
            .collect()
    }

    pub fn arity(&self) -> usize {
        self.factors.iter().map(|(_, k)| *k as usize).sum()
    }

    pub fn has(&self, base: fn(&BaseCarrier) -> bool) -> bool {
        self.factors.iter().any(|(b, _)| base(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: Ident,
    pub carrier: CarrierSpec,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Var(Ident),
    Tuple(Vec<Ident>, Span),
}

impl Pattern {
    pub fn vars(&self) -> Vec<&Ident> {
        match self {
            Pattern::Var(v) => vec![v],
            Pattern::Tuple(vs, _) => vs.iter().collect(),
        }
    }
}

/// `p(a, b, c) = body` or `q(x, a, y) = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpDef {
    pub name: Ident,
    pub args: Vec<Pattern>,
    pub body: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// A nonnegative rational literal.
    Num(Rational, Span),
    Imag(Span),
    Var(Ident),
    Neg(Box<Expr>, Span),
    Bin(BinOp, Box<Expr>, Box<Expr>, Span),
    Pow(Box<Expr>, u32, Span),
    Exp(Box<Expr>, Span),
    Tuple(Vec<Expr>, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Num(_, s)
            | Expr::Imag(s)
            | Expr::Neg(_, s)
            | Expr::Bin(_, _, _, s)
            | Expr::Pow(_, _, s)
            | Expr::Exp(_, s)
            | Expr::Tuple(_, s) => *s,
            Expr::Var(id) => id.span,
        }
    }
}
