use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use super::ast::*;
use super::parser::{check_space_with, component_names, parse_expression};
use super::print;
use super::{parse_definitions, Diagnostic, DiagnosticKind};
use crate::algebra::MobiAlgebra;
use crate::carrier::{Carrier, Element};
use crate::catalog::{self, InstanceParams, Structure};
use crate::error::EvalError;
use crate::number::imag_unit;
use crate::space::MobiSpace;

#[derive(Clone, Debug)]
pub enum Definition {
    Algebra(MobiAlgebra),
    Space(MobiSpace),
}

impl Definition {
    pub fn name(&self) -> &str {
        match self {
            Definition::Algebra(a) => &a.name,
            Definition::Space(s) => &s.name,
        }
    }
}

/// Parse and elaborate in one step.
pub fn load(text: &str) -> Result<Vec<Definition>, Diagnostic> {
    elaborate(&parse_definitions(text)?)
}

/// Turn parsed items into structures, in file order. `over` names an
/// algebra defined earlier in the file or a catalog algebra (default
/// parameters).
pub fn elaborate(ast: &DefAst) -> Result<Vec<Definition>, Diagnostic> {
    let mut out = Vec::new();
    let mut algebras: HashMap<String, MobiAlgebra> = HashMap::new();
    for item in &ast.items {
        let def = match item {
            Item::Algebra(a) => {
                let algebra = elaborate_algebra(a)?;
                algebras.insert(algebra.name.clone(), algebra.clone());
                Definition::Algebra(algebra)
            }
            Item::Space(s) => {
                let algebra = match algebras.get(&s.over.name) {
                    Some(a) => a.clone(),
                    None => catalog_algebra(&s.over)?,
                };
                Definition::Space(elaborate_space(s, algebra)?)
            }
        };
        out.push(def);
    }
    Ok(out)
}

/// Evaluate a closed expression into `carrier`, checking membership.
pub fn parse_value(text: &str, carrier: &Carrier) -> Result<Element, Diagnostic> {
    constant(&parse_expression(text)?, &Env::new(), carrier, "value")
}

fn catalog_algebra(name: &Ident) -> Result<MobiAlgebra, Diagnostic> {
    // catalog names use hyphens, which identifiers spell as underscores
    let catalog_name = name.name.replace('_', "-");
    match catalog::build(&catalog_name, &InstanceParams::new()) {
        Ok(Structure::Algebra(a)) => Ok(a),
        _ => Err(Diagnostic::new(
            DiagnosticKind::UnknownAlgebra,
            name.span,
            format!(
                "no algebra named `{}` in this file or the catalog",
                name.name
            ),
        )),
    }
}

fn missing(item: &Ident, field: &str) -> Diagnostic {
    Diagnostic::new(
        DiagnosticKind::MissingField,
        item.span,
        format!("`{}` has no `{field}`", item.name),
    )
}

fn invalid(span: Span, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Invalid, span, message)
}

// ---------------------------------------------------------------------------
// compiled expressions

enum Code {
    Const(Element),
    Slot(usize),
    Neg(Box<Code>),
    Bin(BinOp, Box<Code>, Box<Code>),
    Pow(Box<Code>, u32),
    Exp(Box<Code>),
    Tuple(Vec<Code>),
}

enum Binding {
    Slot(usize),
    Value(Element),
}

type Env = HashMap<String, Binding>;

fn compile(e: &Expr, env: &Env) -> Code {
    match e {
        Expr::Num(r, _) => Code::Const(Element::Rat(r.clone())),
        Expr::Imag(_) => Code::Const(Element::Gauss(imag_unit())),
        Expr::Var(id) => match env.get(&id.name) {
            Some(Binding::Slot(i)) => Code::Slot(*i),
            Some(Binding::Value(v)) => Code::Const(v.clone()),
            None => unreachable!("identifiers are resolved by the parser"),
        },
        Expr::Neg(inner, _) => Code::Neg(Box::new(compile(inner, env))),
        Expr::Bin(op, l, r, _) => {
            Code::Bin(*op, Box::new(compile(l, env)), Box::new(compile(r, env)))
        }
        Expr::Pow(base, k, _) => Code::Pow(Box::new(compile(base, env)), *k),
        Expr::Exp(arg, _) => Code::Exp(Box::new(compile(arg, env))),
        Expr::Tuple(items, _) => Code::Tuple(items.iter().map(|x| compile(x, env)).collect()),
    }
}

fn run(code: &Code, slots: &[Element]) -> Result<Element, EvalError> {
    Ok(match code {
        Code::Const(v) => v.clone(),
        Code::Slot(i) => slots[*i].clone(),
        Code::Neg(inner) => run(inner, slots)?.neg()?,
        Code::Bin(op, l, r) => {
            let (a, b) = (run(l, slots)?, run(r, slots)?);
            match op {
                BinOp::Add => a.add(&b)?,
                BinOp::Sub => a.sub(&b)?,
                BinOp::Mul => a.mul(&b)?,
                BinOp::Div => a.div(&b)?,
            }
        }
        Code::Pow(base, k) => run(base, slots)?.pow(*k)?,
        Code::Exp(arg) => run(arg, slots)?.exp()?,
        Code::Tuple(items) => Element::Tuple(
            items
                .iter()
                .map(|x| run(x, slots))
                .collect::<Result<_, _>>()?,
        ),
    })
}

/// Evaluate a closed expression and convert it into `carrier`.
fn constant(e: &Expr, env: &Env, carrier: &Carrier, what: &str) -> Result<Element, Diagnostic> {
    let value = run(&compile(e, env), &[])
        .and_then(|v| carrier.coerce(v))
        .map_err(|err| invalid(e.span(), format!("{what}: {err}")))?;
    if !carrier.contains(&value) {
        return Err(invalid(
            e.span(),
            format!("{what} = {value} is not in {carrier}"),
        ));
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// carriers

fn leaf(base: BaseCarrier) -> Carrier {
    match base {
        BaseCarrier::Q => Carrier::Rational,
        BaseCarrier::QI => Carrier::GaussianRational,
        BaseCarrier::R64 => Carrier::float(),
        BaseCarrier::Zmod(n) => Carrier::ModularInt(n),
    }
}

fn order(a: &Element, b: &Element) -> Option<Ordering> {
    match (a, b) {
        (Element::Rat(x), Element::Rat(y)) => Some(x.cmp(y)),
        (Element::Float(_) | Element::Rat(_), Element::Float(_) | Element::Rat(_)) => {
            a.as_float().ok()?.partial_cmp(&b.as_float().ok()?)
        }
        (Element::Residue { value: x, .. }, Element::Residue { value: y, .. }) => Some(x.cmp(y)),
        _ => (a == b).then_some(Ordering::Equal),
    }
}

fn holds(cmp: &CmpOp, o: Option<Ordering>) -> bool {
    match (cmp, o) {
        (_, None) => false,
        (CmpOp::Lt, Some(o)) => o == Ordering::Less,
        (CmpOp::Le, Some(o)) => o != Ordering::Greater,
        (CmpOp::Gt, Some(o)) => o == Ordering::Greater,
        (CmpOp::Ge, Some(o)) => o != Ordering::Less,
        (CmpOp::Eq, Some(o)) => o == Ordering::Equal,
    }
}

fn build_carrier(spec: &CarrierSpec) -> Carrier {
    let leaves = spec.leaves();
    let base = if leaves.len() == 1 {
        leaf(leaves[0])
    } else if leaves.iter().all(|b| *b == leaves[0]) {
        Carrier::vector(leaf(leaves[0]), leaves.len())
    } else {
        Carrier::Product(leaves.into_iter().map(leaf).collect())
    };
    if spec.constraint.is_empty() {
        return base;
    }
    let arity = spec.arity();
    let env: Env = component_names(arity)
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n, Binding::Slot(i)))
        .collect();
    let checks: Vec<(Code, CmpOp, Code)> = spec
        .constraint
        .iter()
        .map(|c| (compile(&c.lhs, &env), c.op, compile(&c.rhs, &env)))
        .collect();
    let name = print::carrier(&CarrierSpec {
        factors: Vec::new(),
        ..spec.clone()
    });
    let name = name.trim_start_matches(" where ").to_string();
    Carrier::restricted(base, name, move |e| {
        let slots: Vec<Element> = if arity == 1 {
            vec![e.clone()]
        } else {
            match e.as_tuple(arity) {
                Ok(items) => items.to_vec(),
                Err(_) => return false,
            }
        };
        checks
            .iter()
            .all(|(l, op, r)| match (run(l, &slots), run(r, &slots)) {
                (Ok(a), Ok(b)) => holds(op, order(&a, &b)),
                _ => false,
            })
    })
}

fn has_leaf(c: &Carrier, pred: &dyn Fn(&Carrier) -> bool) -> bool {
    match c {
        Carrier::Product(parts) => parts.iter().any(|p| has_leaf(p, pred)),
        Carrier::Vector(base, _) | Carrier::Restricted(base, _) => has_leaf(base, pred),
        leaf => pred(leaf),
    }
}

// ---------------------------------------------------------------------------
// items

fn param_env(params: &[Param]) -> Result<Env, Diagnostic> {
    let mut env = Env::new();
    for p in params {
        let carrier = build_carrier(&p.carrier);
        let value = constant(
            &p.value,
            &env,
            &carrier,
            &format!("parameter `{}`", p.name.name),
        )?;
        env.insert(p.name.name.clone(), Binding::Value(value));
    }
    Ok(env)
}

/// Slot layout for the three argument patterns, in order.
fn bind(op: &OpDef, env: &mut Env) -> Vec<Option<usize>> {
    let mut next = 0;
    op.args
        .iter()
        .map(|pattern| {
            let width = match pattern {
                Pattern::Var(v) => {
                    env.insert(v.name.clone(), Binding::Slot(next));
                    None
                }
                Pattern::Tuple(vars, _) => {
                    for (j, v) in vars.iter().enumerate() {
                        env.insert(v.name.clone(), Binding::Slot(next + j));
                    }
                    Some(vars.len())
                }
            };
            next += width.unwrap_or(1);
            width
        })
        .collect()
}

fn destructure(args: [&Element; 3], layout: &[Option<usize>]) -> Result<Vec<Element>, EvalError> {
    let mut slots = Vec::new();
    for (arg, width) in args.iter().zip(layout) {
        match width {
            None | Some(1) => slots.push((*arg).clone()),
            Some(k) => slots.extend(arg.as_tuple(*k)?.iter().cloned()),
        }
    }
    Ok(slots)
}

type Ternary =
    Arc<dyn Fn(&Element, &Element, &Element) -> Result<Element, EvalError> + Send + Sync>;

fn operation(op: &OpDef, mut env: Env, target: Carrier) -> Ternary {
    let layout = bind(op, &mut env);
    let code = compile(&op.body, &env);
    Arc::new(move |a, b, c| {
        let slots = destructure([a, b, c], &layout)?;
        target.coerce(run(&code, &slots)?)
    })
}

fn elaborate_algebra(a: &AlgebraDef) -> Result<MobiAlgebra, Diagnostic> {
    let spec = a
        .carrier
        .as_ref()
        .ok_or_else(|| missing(&a.name, "carrier"))?;
    let carrier = build_carrier(spec);
    let env = param_env(&a.params)?;
    let mut constants = Vec::new();
    for (label, e) in [("zero", &a.zero), ("half", &a.half), ("one", &a.one)] {
        let e = e.as_ref().ok_or_else(|| missing(&a.name, label))?;
        constants.push(constant(e, &env, &carrier, label)?);
    }
    let two = match &a.two {
        Some(e) => Some(constant(e, &env, &carrier, "two")?),
        None => None,
    };
    let op = a.op.as_ref().ok_or_else(|| missing(&a.name, "p"))?;
    let p = operation(op, env, carrier.clone());
    let [zero, half, one]: [Element; 3] = constants.try_into().expect("three constants");
    let algebra = MobiAlgebra::new(
        a.name.name.clone(),
        carrier,
        move |x, y, z| p(x, y, z),
        zero,
        half,
        one,
    )
    .map_err(|err| invalid(a.name.span, err.to_string()))?;
    Ok(match two {
        Some(t) => algebra.with_two(t),
        None => algebra,
    })
}

fn elaborate_space(s: &SpaceDef, algebra: MobiAlgebra) -> Result<MobiSpace, Diagnostic> {
    let scalars = &algebra.carrier;
    check_space_with(
        s,
        Some(scalars.arity()),
        Some((
            has_leaf(scalars, &|c| matches!(c, Carrier::GaussianRational)),
            has_leaf(scalars, &|c| matches!(c, Carrier::Float64(_))),
        )),
    )?;
    let spec = s
        .carrier
        .as_ref()
        .ok_or_else(|| missing(&s.name, "carrier"))?;
    let points = build_carrier(spec);
    let env = param_env(&s.params)?;
    let op = s.op.as_ref().ok_or_else(|| missing(&s.name, "q"))?;
    let q = operation(op, env, points.clone());
    Ok(MobiSpace::new(
        s.name.name.clone(),
        algebra,
        points,
        move |x, a, y| q(x, a, y),
    ))
}
