use std::fmt::Write;

use itertools::Itertools;
use num_traits::One;

use super::ast::*;

/// Render definitions in the concrete syntax; the output parses back to an
/// equal tree.
pub fn print_definitions(ast: &DefAst) -> String {
    let mut out = String::new();
    for (i, item) in ast.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match item {
            Item::Algebra(a) => print_algebra(&mut out, a),
            Item::Space(s) => print_space(&mut out, s),
        }
    }
    out
}

fn print_algebra(out: &mut String, a: &AlgebraDef) {
    writeln!(out, "algebra {} {{", a.name.name).unwrap();
    if let Some(c) = &a.carrier {
        writeln!(out, "  carrier: {}", carrier(c)).unwrap();
    }
    for (label, e) in [
        ("zero", &a.zero),
        ("half", &a.half),
        ("one", &a.one),
        ("two", &a.two),
    ] {
        if let Some(e) = e {
            writeln!(out, "  {label}: {}", expr(e)).unwrap();
        }
    }
    print_params(out, &a.params);
    if let Some(op) = &a.op {
        writeln!(out, "  {}", op_def(op)).unwrap();
    }
    out.push_str("}\n");
}

fn print_space(out: &mut String, s: &SpaceDef) {
    writeln!(out, "space {} over {} {{", s.name.name, s.over.name).unwrap();
    if let Some(c) = &s.carrier {
        writeln!(out, "  carrier: {}", carrier(c)).unwrap();
    }
    print_params(out, &s.params);
    if let Some(op) = &s.op {
        writeln!(out, "  {}", op_def(op)).unwrap();
    }
    out.push_str("}\n");
}

fn print_params(out: &mut String, params: &[Param]) {
    for p in params {
        writeln!(
            out,
            "  param {}: {} = {}",
            p.name.name,
            carrier(&p.carrier),
            expr(&p.value)
        )
        .unwrap();
    }
}

fn op_def(op: &OpDef) -> String {
    let args = op.args.iter().map(|p| match p {
        Pattern::Var(v) => v.name.clone(),
        Pattern::Tuple(vs, _) => format!("({})", vs.iter().map(|v| &v.name).join(", ")),
    });
    format!(
        "{}({}) = {}",
        op.name.name,
        args.format(", "),
        expr(&op.body)
    )
}

pub(crate) fn carrier(c: &CarrierSpec) -> String {
    let mut s = c
        .factors
        .iter()
        .map(|(base, power)| {
            let b = match base {
                BaseCarrier::Q => "Q".to_string(),
                BaseCarrier::QI => "QI".to_string(),
                BaseCarrier::R64 => "R64".to_string(),
                BaseCarrier::Zmod(n) => format!("Zmod({n})"),
            };
            if *power == 1 {
                b
            } else {
                format!("{b}^{power}")
            }
        })
        .join(" x ");
    if !c.constraint.is_empty() {
        let cmps = c.constraint.iter().map(|cmp| {
            let op = match cmp.op {
                CmpOp::Lt => "<",
                CmpOp::Le => "<=",
                CmpOp::Gt => ">",
                CmpOp::Ge => ">=",
                CmpOp::Eq => "==",
            };
            format!("{} {op} {}", expr(&cmp.lhs), expr(&cmp.rhs))
        });
        write!(s, " where {}", cmps.format(" and ")).unwrap();
    }
    s
}

// Binding strength: sums 1, products 2, negation 3, powers 4, atoms 5.
fn strength(e: &Expr) -> u8 {
    match e {
        Expr::Bin(op, ..) => op.precedence(),
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn wrap(e: &Expr, parens: bool) -> String {
    if parens {
        format!("({})", expr(e))
    } else {
        expr(e)
    }
}

pub(crate) fn expr(e: &Expr) -> String {
    match e {
        Expr::Num(r, _) => {
            if r.denom().is_one() {
                r.numer().to_string()
            } else {
                // glued, so it lexes back as one literal
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        Expr::Imag(_) => "i".to_string(),
        Expr::Var(id) => id.name.clone(),
        Expr::Neg(inner, _) => format!("-{}", wrap(inner, strength(inner) < 3)),
        Expr::Pow(base, k, _) => format!("{}^{k}", wrap(base, strength(base) < 5)),
        Expr::Exp(arg, _) => format!("exp({})", expr(arg)),
        Expr::Tuple(items, _) => format!("({})", items.iter().map(expr).join(", ")),
        Expr::Bin(op, l, r, _) => {
            let p = op.precedence();
            format!(
                "{} {} {}",
                wrap(l, strength(l) < p),
                op.symbol(),
                wrap(r, strength(r) <= p)
            )
        }
    }
}
