use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{Diagnostic, DiagnosticKind};

/// Parse a definition file, then resolve identifiers and check shapes item
/// by item. A space over an algebra defined earlier in the same file is
/// checked against that algebra's carrier; other scalar shapes are checked
/// at elaboration.
pub fn parse_definitions(text: &str) -> Result<DefAst, Diagnostic> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let ast = parser.file()?;
    let mut scalars: HashMap<&str, &CarrierSpec> = HashMap::new();
    for item in &ast.items {
        match item {
            Item::Algebra(a) => {
                check_algebra(a)?;
                if let Some(c) = &a.carrier {
                    scalars.insert(&a.name.name, c);
                }
            }
            Item::Space(s) => check_space(s, scalars.get(s.over.name.as_str()).copied())?,
        }
    }
    Ok(ast)
}

/// A closed expression such as `(0, 1/2)`, for values given on the command line.
pub(crate) fn parse_expression(text: &str) -> Result<Expr, Diagnostic> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let e = parser.expr()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.unexpected("end of input"));
    }
    let open = Features {
        imaginary: None,
        exponential: None,
    };
    shape_of(&e, &Scope::new(), open)?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn syntax(span: Span, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Syntax, span, message)
}

const BASES: [&str; 4] = ["Q", "QI", "R64", "Zmod"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        syntax(
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Span, Diagnostic> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn ident(&mut self, wanted: &str) -> Result<Ident, Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<Span, Diagnostic> {
        if self.is_word(word) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    fn positive_int(&mut self, wanted: &str) -> Result<u64, Diagnostic> {
        match self.peek().clone() {
            Tok::Number(r) if r.is_integer() => {
                let span = self.span();
                let n = r.to_integer().to_u64().filter(|n| *n >= 1);
                self.bump();
                n.ok_or_else(|| syntax(span, format!("expected {wanted}")))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn file(&mut self) -> Result<DefAst, Diagnostic> {
        let mut items = Vec::new();
        while *self.peek() != Tok::Eof {
            items.push(self.item()?);
        }
        Ok(DefAst { items })
    }

    fn item(&mut self) -> Result<Item, Diagnostic> {
        if self.is_word("algebra") {
            self.bump();
            let name = self.ident("an algebra name")?;
            self.algebra_block(name).map(Item::Algebra)
        } else if self.is_word("space") {
            self.bump();
            let name = self.ident("a space name")?;
            self.keyword("over")?;
            let over = self.ident("an algebra name")?;
            self.space_block(name, over).map(Item::Space)
        } else {
            Err(self.unexpected("`algebra` or `space`"))
        }
    }

    fn field_name(&mut self) -> Result<Ident, Diagnostic> {
        self.ident("a field or `}`")
    }

    fn algebra_block(&mut self, name: Ident) -> Result<AlgebraDef, Diagnostic> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut def = AlgebraDef {
            name,
            carrier: None,
            zero: None,
            half: None,
            one: None,
            two: None,
            params: Vec::new(),
            op: None,
        };
        while *self.peek() != Tok::RBrace {
            let field = self.field_name()?;
            match field.name.as_str() {
                "carrier" => {
                    self.expect(Tok::Colon, "`:`")?;
                    set_once(&mut def.carrier, self.carrier()?, &field)?;
                }
                "zero" | "half" | "one" | "two" => {
                    self.expect(Tok::Colon, "`:`")?;
                    let e = self.expr()?;
                    let slot = match field.name.as_str() {
                        "zero" => &mut def.zero,
                        "half" => &mut def.half,
                        "one" => &mut def.one,
                        _ => &mut def.two,
                    };
                    set_once(slot, e, &field)?;
                }
                "param" => def.params.push(self.param()?),
                "p" => {
                    let op = self.op(field)?;
                    let f = op.name.clone();
                    set_once(&mut def.op, op, &f)?;
                }
                other => {
                    return Err(syntax(
                        field.span,
                        format!("unknown algebra field `{other}`"),
                    ))
                }
            }
            if *self.peek() == Tok::Semi {
                self.bump();
            }
        }
        self.bump();
        Ok(def)
    }

    fn space_block(&mut self, name: Ident, over: Ident) -> Result<SpaceDef, Diagnostic> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut def = SpaceDef {
            name,
            over,
            carrier: None,
            params: Vec::new(),
            op: None,
        };
        while *self.peek() != Tok::RBrace {
            let field = self.field_name()?;
            match field.name.as_str() {
                "carrier" => {
                    self.expect(Tok::Colon, "`:`")?;
                    set_once(&mut def.carrier, self.carrier()?, &field)?;
                }
                "param" => def.params.push(self.param()?),
                "q" => {
                    let op = self.op(field)?;
                    let f = op.name.clone();
                    set_once(&mut def.op, op, &f)?;
                }
                other => return Err(syntax(field.span, format!("unknown space field `{other}`"))),
            }
            if *self.peek() == Tok::Semi {
                self.bump();
            }
        }
        self.bump();
        Ok(def)
    }

    fn param(&mut self) -> Result<Param, Diagnostic> {
        let name = self.ident("a parameter name")?;
        self.expect(Tok::Colon, "`:`")?;
        let carrier = self.carrier()?;
        self.expect(Tok::Assign, "`=`")?;
        let value = self.expr()?;
        Ok(Param {
            name,
            carrier,
            value,
        })
    }

    fn op(&mut self, name: Ident) -> Result<OpDef, Diagnostic> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.pattern()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.pattern()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        if args.len() != 3 {
            return Err(syntax(
                name.span,
                format!("`{}` takes three arguments", name.name),
            ));
        }
        self.expect(Tok::Assign, "`=`")?;
        let body = self.expr()?;
        Ok(OpDef { name, args, body })
    }

    fn pattern(&mut self) -> Result<Pattern, Diagnostic> {
        if *self.peek() == Tok::LParen {
            let span = self.bump().span;
            let mut vars = vec![self.ident("a pattern variable")?];
            while *self.peek() == Tok::Comma {
                self.bump();
                vars.push(self.ident("a pattern variable")?);
            }
            self.expect(Tok::RParen, "`)`")?;
            Ok(Pattern::Tuple(vars, span))
        } else {
            Ok(Pattern::Var(self.ident("a pattern")?))
        }
    }

    fn carrier(&mut self) -> Result<CarrierSpec, Diagnostic> {
        let span = self.span();
        let mut factors = vec![self.factor()?];
        while self.is_word("x")
            && matches!(self.peek_at(1), Tok::Ident(b) if BASES.contains(&b.as_str()))
        {
            self.bump();
            factors.push(self.factor()?);
        }
        let mut constraint = Vec::new();
        if self.is_word("where") {
            self.bump();
            constraint.push(self.comparison()?);
            while self.is_word("and") {
                self.bump();
                constraint.push(self.comparison()?);
            }
        }
        Ok(CarrierSpec {
            factors,
            constraint,
            span,
        })
    }

    fn factor(&mut self) -> Result<(BaseCarrier, u32), Diagnostic> {
        let id = self.ident("a carrier (Q, QI, R64 or Zmod(n))")?;
        let base = match id.name.as_str() {
            "Q" => BaseCarrier::Q,
            "QI" => BaseCarrier::QI,
            "R64" => BaseCarrier::R64,
            "Zmod" => {
                self.expect(Tok::LParen, "`(`")?;
                let n = self.positive_int("a modulus")?;
                self.expect(Tok::RParen, "`)`")?;
                BaseCarrier::Zmod(n)
            }
            other => {
                return Err(syntax(
                    id.span,
                    format!("expected a carrier (Q, QI, R64 or Zmod(n)), found `{other}`"),
                ))
            }
        };
        let power = if *self.peek() == Tok::Caret {
            self.bump();
            let span = self.span();
            let n = self.positive_int("a positive power")?;
            u32::try_from(n).map_err(|_| syntax(span, "power too large"))?
        } else {
            1
        };
        Ok((base, power))
    }

    fn comparison(&mut self) -> Result<Comparison, Diagnostic> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::EqEq => CmpOp::Eq,
            _ => return Err(self.unexpected("a comparison (<, <=, >, >=, ==)")),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Comparison { lhs, op, rhs })
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), span);
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), span);
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if *self.peek() == Tok::Minus {
            let span = self.bump().span;
            Ok(Expr::Neg(Box::new(self.unary()?), span))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            let span = self.bump().span;
            let exponent = match self.peek().clone() {
                Tok::Number(r) if r.is_integer() => r.to_integer().to_u32(),
                _ => None,
            }
            .ok_or_else(|| self.unexpected("a nonnegative integer exponent"))?;
            self.bump();
            base = Expr::Pow(Box::new(base), exponent, span);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number(r) => {
                self.bump();
                Ok(Expr::Num(r, span))
            }
            Tok::Ident(name) if name == "exp" && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Exp(Box::new(arg), span))
            }
            Tok::Ident(name) if name == "i" => {
                self.bump();
                Ok(Expr::Imag(span))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident("an identifier")?)),
            Tok::LParen => {
                self.bump();
                let mut items = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    items.push(self.expr()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(if items.len() == 1 {
                    items.pop().expect("one item")
                } else {
                    Expr::Tuple(items, span)
                })
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, field: &Ident) -> Result<(), Diagnostic> {
    if slot.is_some() {
        return Err(syntax(
            field.span,
            format!("field `{}` given twice", field.name),
        ));
    }
    *slot = Some(value);
    Ok(())
}

// ---------------------------------------------------------------------------
// resolution and shapes

/// What the enclosing carriers allow: `i` needs a Gaussian leaf, `exp` a
/// float leaf. `None` when the carrier is not known yet.
#[derive(Clone, Copy)]
struct Features {
    imaginary: Option<bool>,
    exponential: Option<bool>,
}

impl Features {
    fn of(specs: &[Option<&CarrierSpec>]) -> Self {
        if specs.iter().any(Option::is_none) {
            return Features {
                imaginary: None,
                exponential: None,
            };
        }
        let any = |f: fn(&BaseCarrier) -> bool| Some(specs.iter().flatten().any(|c| c.has(f)));
        Features {
            imaginary: any(|b| *b == BaseCarrier::QI),
            exponential: any(|b| *b == BaseCarrier::R64),
        }
    }
}

type Scope<'a> = HashMap<&'a str, Option<usize>>;

fn mismatch(span: Span, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::ShapeMismatch, span, message)
}

fn describe(shape: usize) -> String {
    if shape == 1 {
        "a scalar".to_string()
    } else {
        format!("a {shape}-tuple")
    }
}

fn shape_of(e: &Expr, scope: &Scope, features: Features) -> Result<Option<usize>, Diagnostic> {
    let scalar = |inner: &Expr, what: &str| -> Result<(), Diagnostic> {
        match shape_of(inner, scope, features)? {
            Some(k) if k != 1 => Err(mismatch(
                inner.span(),
                format!("{what} needs a scalar, found {}", describe(k)),
            )),
            _ => Ok(()),
        }
    };
    Ok(match e {
        Expr::Num(..) => Some(1),
        Expr::Imag(span) => {
            if features.imaginary == Some(false) {
                return Err(Diagnostic::new(
                    DiagnosticKind::CarrierFeature,
                    *span,
                    "`i` is only available over QI",
                ));
            }
            Some(1)
        }
        Expr::Exp(arg, span) => {
            if features.exponential == Some(false) {
                return Err(Diagnostic::new(
                    DiagnosticKind::CarrierFeature,
                    *span,
                    "`exp` is only available over R64",
                ));
            }
            scalar(arg, "exp")?;
            Some(1)
        }
        Expr::Var(id) => *scope.get(id.name.as_str()).ok_or_else(|| {
            Diagnostic::new(
                DiagnosticKind::UnboundIdentifier,
                id.span,
                format!("`{}` is not bound", id.name),
            )
        })?,
        Expr::Neg(inner, _) => shape_of(inner, scope, features)?,
        Expr::Pow(base, _, _) => {
            scalar(base, "a power")?;
            Some(1)
        }
        Expr::Tuple(items, _) => {
            for item in items {
                scalar(item, "a tuple component")?;
            }
            Some(items.len())
        }
        Expr::Bin(op, l, r, span) => {
            let (a, b) = (shape_of(l, scope, features)?, shape_of(r, scope, features)?);
            match (op, a, b) {
                (_, None, _) | (_, _, None) => None,
                (BinOp::Add | BinOp::Sub, Some(a), Some(b)) if a != b => {
                    return Err(mismatch(
                        *span,
                        format!("cannot {} {} and {}", op.symbol(), describe(a), describe(b)),
                    ))
                }
                (BinOp::Mul, Some(a), Some(b)) if a != 1 && b != 1 => {
                    return Err(mismatch(
                        *span,
                        "a product needs at least one scalar factor",
                    ))
                }
                (BinOp::Div, _, Some(b)) if b != 1 => {
                    return Err(mismatch(*span, "a divisor must be a scalar"))
                }
                (_, Some(a), Some(b)) => Some(a.max(b)),
            }
        }
    })
}

fn expect_shape(
    e: &Expr,
    scope: &Scope,
    features: Features,
    wanted: Option<usize>,
    what: &str,
) -> Result<(), Diagnostic> {
    if let (Some(found), Some(wanted)) = (shape_of(e, scope, features)?, wanted) {
        if found != wanted {
            return Err(mismatch(
                e.span(),
                format!(
                    "{what} should be {}, found {}",
                    describe(wanted),
                    describe(found)
                ),
            ));
        }
    }
    Ok(())
}

fn check_params<'a>(params: &'a [Param], scope: &mut Scope<'a>) -> Result<(), Diagnostic> {
    for p in params {
        let features = Features::of(&[Some(&p.carrier)]);
        expect_shape(
            &p.value,
            scope,
            features,
            Some(p.carrier.arity()),
            &format!("parameter `{}`", p.name.name),
        )?;
        check_constraint(&p.carrier)?;
        scope.insert(&p.name.name, Some(p.carrier.arity()));
    }
    Ok(())
}

pub(crate) fn component_names(arity: usize) -> Vec<String> {
    (1..=arity).map(|i| format!("c{i}")).collect()
}

fn check_constraint(c: &CarrierSpec) -> Result<(), Diagnostic> {
    let names = component_names(c.arity());
    let scope: Scope = names.iter().map(|n| (n.as_str(), Some(1))).collect();
    let features = Features::of(&[Some(c)]);
    for cmp in &c.constraint {
        expect_shape(&cmp.lhs, &scope, features, Some(1), "a comparison side")?;
        expect_shape(&cmp.rhs, &scope, features, Some(1), "a comparison side")?;
    }
    Ok(())
}

fn bind_patterns<'a>(
    op: &'a OpDef,
    arities: [Option<usize>; 3],
    scope: &mut Scope<'a>,
) -> Result<(), Diagnostic> {
    let mut seen: Vec<&str> = Vec::new();
    for (pattern, arity) in op.args.iter().zip(arities) {
        for v in pattern.vars() {
            if seen.contains(&v.name.as_str()) {
                return Err(syntax(v.span, format!("variable `{}` bound twice", v.name)));
            }
            seen.push(&v.name);
        }
        match pattern {
            Pattern::Var(v) => {
                scope.insert(&v.name, arity);
            }
            Pattern::Tuple(vars, span) => {
                if let Some(k) = arity {
                    if vars.len() != k {
                        return Err(mismatch(
                            *span,
                            format!(
                                "pattern binds {} components but the carrier has {k}",
                                vars.len()
                            ),
                        ));
                    }
                }
                for v in vars {
                    scope.insert(&v.name, Some(1));
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn check_algebra(a: &AlgebraDef) -> Result<(), Diagnostic> {
    let arity = a.carrier.as_ref().map(CarrierSpec::arity);
    let mut scope = Scope::new();
    check_params(&a.params, &mut scope)?;
    let mut specs: Vec<Option<&CarrierSpec>> = vec![a.carrier.as_ref()];
    specs.extend(a.params.iter().map(|p| Some(&p.carrier)));
    let features = Features::of(&specs);
    if let Some(c) = &a.carrier {
        check_constraint(c)?;
    }
    for (label, e) in [
        ("zero", &a.zero),
        ("half", &a.half),
        ("one", &a.one),
        ("two", &a.two),
    ] {
        if let Some(e) = e {
            expect_shape(e, &scope, features, arity, &format!("constant `{label}`"))?;
        }
    }
    if let Some(op) = &a.op {
        bind_patterns(op, [arity; 3], &mut scope)?;
        expect_shape(&op.body, &scope, features, arity, "the body of p")?;
    }
    Ok(())
}

/// `scalars` is the carrier of the base algebra when it is known.
pub(crate) fn check_space(s: &SpaceDef, scalars: Option<&CarrierSpec>) -> Result<(), Diagnostic> {
    check_space_with(
        s,
        scalars.map(CarrierSpec::arity),
        scalars.map(Features::scalar_info),
    )
}

impl Features {
    fn scalar_info(c: &CarrierSpec) -> (bool, bool) {
        (
            c.has(|b| *b == BaseCarrier::QI),
            c.has(|b| *b == BaseCarrier::R64),
        )
    }
}

/// Space check with a scalar arity and `(has QI, has R64)` for the scalars.
pub(crate) fn check_space_with(
    s: &SpaceDef,
    scalar_arity: Option<usize>,
    scalar_features: Option<(bool, bool)>,
) -> Result<(), Diagnostic> {
    let arity = s.carrier.as_ref().map(CarrierSpec::arity);
    let mut scope = Scope::new();
    check_params(&s.params, &mut scope)?;
    if let Some(c) = &s.carrier {
        check_constraint(c)?;
    }
    let mut specs: Vec<Option<&CarrierSpec>> = vec![s.carrier.as_ref()];
    specs.extend(s.params.iter().map(|p| Some(&p.carrier)));
    let mut features = Features::of(&specs);
    if let Some((qi, r64)) = scalar_features {
        features.imaginary = features.imaginary.map(|f| f || qi);
        features.exponential = features.exponential.map(|f| f || r64);
    }
    if let Some(op) = &s.op {
        bind_patterns(op, [arity, scalar_arity, arity], &mut scope)?;
        expect_shape(&op.body, &scope, features, arity, "the body of q")?;
    }
    Ok(())
}
