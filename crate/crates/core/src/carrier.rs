//! Value domains: elements, carriers, equality, enumeration and seeded sampling.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CarrierError, EvalError};
use crate::number::{
    format_gaussian, format_rational, gauss, mod_inverse, rat, rational_to_f64,
    rational_to_residue, Gaussian, Rational,
};

/// Rejections tolerated in a row before a restricted sampler gives up.
pub const MAX_REJECTIONS: usize = 10_000;
const NUMERATOR_BOUND: i64 = 12;
const DENOMINATOR_BOUND: i64 = 8;
/// Float draws stay in `[-2, 2]`: exponential weights such as
/// `e^{a (t - s)}` overflow at the rational range once scalars compose.
const FLOAT_BOUND: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Rat(Rational),
    Gauss(Gaussian),
    Residue { value: u64, modulus: u64 },
    Float(f64),
    Tuple(Vec<Element>),
}

impl Element {
    pub fn residue(value: u64, modulus: u64) -> Self {
        Element::Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn rats(values: impl IntoIterator<Item = Rational>) -> Self {
        Element::Tuple(values.into_iter().map(Element::Rat).collect())
    }

    pub fn floats(values: impl IntoIterator<Item = f64>) -> Self {
        Element::Tuple(values.into_iter().map(Element::Float).collect())
    }

    pub fn as_rat(&self) -> Result<&Rational, EvalError> {
        match self {
            Element::Rat(r) => Ok(r),
            other => Err(EvalError::Shape(format!(
                "expected a rational, got {other}"
            ))),
        }
    }

    pub fn as_gauss(&self) -> Result<Gaussian, EvalError> {
        match self {
            Element::Gauss(g) => Ok(g.clone()),
            Element::Rat(r) => Ok(gauss(r.clone(), Rational::zero())),
            other => Err(EvalError::Shape(format!(
                "expected a gaussian rational, got {other}"
            ))),
        }
    }

    pub fn as_float(&self) -> Result<f64, EvalError> {
        match self {
            Element::Float(f) => Ok(*f),
            Element::Rat(r) => Ok(rational_to_f64(r)),
            other => Err(EvalError::Shape(format!("expected a float, got {other}"))),
        }
    }

    pub fn as_residue(&self) -> Result<(u64, u64), EvalError> {
        match self {
            Element::Residue { value, modulus } => Ok((*value, *modulus)),
            other => Err(EvalError::Shape(format!("expected a residue, got {other}"))),
        }
    }

    pub fn as_tuple(&self, len: usize) -> Result<&[Element], EvalError> {
        match self {
            Element::Tuple(items) if items.len() == len => Ok(items),
            other => Err(EvalError::Shape(format!(
                "expected a {len}-tuple, got {other}"
            ))),
        }
    }

    /// Rational components of a tuple of rationals.
    pub fn rat_components(&self, len: usize) -> Result<Vec<Rational>, EvalError> {
        self.as_tuple(len)?
            .iter()
            .map(|e| e.as_rat().cloned())
            .collect()
    }

    pub fn float_components(&self, len: usize) -> Result<Vec<f64>, EvalError> {
        self.as_tuple(len)?.iter().map(Element::as_float).collect()
    }

    /// Leaves of the element in order; Gaussian leaves count as one component.
    pub fn components(&self) -> Vec<&Element> {
        match self {
            Element::Tuple(items) => items.iter().flat_map(Element::components).collect(),
            leaf => vec![leaf],
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, EvalError> {
        self.arith(other, ArithOp::Add)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, EvalError> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &Element) -> Result<Element, EvalError> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn div(&self, other: &Element) -> Result<Element, EvalError> {
        self.arith(other, ArithOp::Div)
    }

    pub fn neg(&self) -> Result<Element, EvalError> {
        Ok(match self {
            Element::Rat(r) => Element::Rat(-r.clone()),
            Element::Gauss(g) => Element::Gauss(-g.clone()),
            Element::Residue { value, modulus } => Element::residue(modulus - value, *modulus),
            Element::Float(f) => Element::Float(-f),
            Element::Tuple(items) => {
                Element::Tuple(items.iter().map(Element::neg).collect::<Result<_, _>>()?)
            }
        })
    }

    pub fn pow(&self, exponent: u32) -> Result<Element, EvalError> {
        let mut acc = self.unit_like()?;
        for _ in 0..exponent {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn unit_like(&self) -> Result<Element, EvalError> {
        Ok(match self {
            Element::Rat(_) => Element::Rat(Rational::one()),
            Element::Gauss(_) => Element::Gauss(gauss(Rational::one(), Rational::zero())),
            Element::Residue { modulus, .. } => Element::residue(1, *modulus),
            Element::Float(_) => Element::Float(1.0),
            Element::Tuple(_) => {
                return Err(EvalError::Shape("power of a tuple".to_string()));
            }
        })
    }

    pub fn exp(&self) -> Result<Element, EvalError> {
        match self {
            Element::Float(_) | Element::Rat(_) => Ok(Element::Float(self.as_float()?.exp())),
            other => Err(EvalError::Unsupported(format!("exp of {other}"))),
        }
    }

    /// Multiply every leaf by the rational `t`.
    pub fn scale(&self, t: &Rational) -> Result<Element, EvalError> {
        match self {
            Element::Tuple(items) => Ok(Element::Tuple(
                items.iter().map(|e| e.scale(t)).collect::<Result<_, _>>()?,
            )),
            leaf => leaf.mul(&Element::Rat(t.clone())),
        }
    }

    fn arith(&self, other: &Element, op: ArithOp) -> Result<Element, EvalError> {
        use Element::*;
        match (self, other) {
            (Tuple(a), Tuple(b)) => {
                if a.len() != b.len() || matches!(op, ArithOp::Mul | ArithOp::Div) {
                    return Err(EvalError::Shape(format!(
                        "cannot {} {self} and {other}",
                        op.verb()
                    )));
                }
                Ok(Tuple(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x.arith(y, op))
                        .collect::<Result<_, _>>()?,
                ))
            }
            (Tuple(a), scalar) if matches!(op, ArithOp::Mul | ArithOp::Div) => Ok(Tuple(
                a.iter()
                    .map(|x| x.arith(scalar, op))
                    .collect::<Result<_, _>>()?,
            )),
            (scalar, Tuple(b)) if op == ArithOp::Mul => Ok(Tuple(
                b.iter()
                    .map(|y| scalar.arith(y, op))
                    .collect::<Result<_, _>>()?,
            )),
            (Tuple(_), _) | (_, Tuple(_)) => Err(EvalError::Shape(format!(
                "cannot {} {self} and {other}",
                op.verb()
            ))),
            (Rat(a), Rat(b)) => op.rational(a, b).map(Rat),
            (Float(_), Float(_) | Rat(_)) | (Rat(_), Float(_)) => {
                Ok(Float(op.float(self.as_float()?, other.as_float()?)))
            }
            (Gauss(_), Gauss(_) | Rat(_)) | (Rat(_), Gauss(_)) => op
                .gaussian(&self.as_gauss()?, &other.as_gauss()?)
                .map(Gauss),
            (Residue { .. }, _) | (_, Residue { .. }) => {
                let modulus = match (self, other) {
                    (Residue { modulus, .. }, _) | (_, Residue { modulus, .. }) => *modulus,
                    _ => unreachable!(),
                };
                let a = to_residue(self, modulus)?;
                let b = to_residue(other, modulus)?;
                op.residue(a, b, modulus)
                    .map(|value| Element::residue(value, modulus))
            }
            _ => Err(EvalError::Shape(format!(
                "cannot {} {self} and {other}",
                op.verb()
            ))),
        }
    }
}

fn to_residue(e: &Element, modulus: u64) -> Result<u64, EvalError> {
    match e {
        Element::Residue { value, modulus: m } if *m == modulus => Ok(*value),
        Element::Rat(r) => rational_to_residue(r, modulus).ok_or_else(|| {
            EvalError::Unsupported(format!(
                "{} has no residue modulo {modulus}",
                format_rational(r)
            ))
        }),
        other => Err(EvalError::Shape(format!(
            "{other} is not a residue modulo {modulus}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    fn verb(self) -> &'static str {
        match self {
            ArithOp::Add => "add",
            ArithOp::Sub => "subtract",
            ArithOp::Mul => "multiply",
            ArithOp::Div => "divide",
        }
    }

    fn rational(self, a: &Rational, b: &Rational) -> Result<Rational, EvalError> {
        Ok(match self {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => {
                if b.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                a / b
            }
        })
    }

    fn float(self, a: f64, b: f64) -> f64 {
        match self {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => a / b,
        }
    }

    fn gaussian(self, a: &Gaussian, b: &Gaussian) -> Result<Gaussian, EvalError> {
        Ok(match self {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => {
                if b.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                a / b
            }
        })
    }

    fn residue(self, a: u64, b: u64, m: u64) -> Result<u64, EvalError> {
        let (a, b, m128) = (a as u128, b as u128, m as u128);
        Ok(match self {
            ArithOp::Add => ((a + b) % m128) as u64,
            ArithOp::Sub => ((a + m128 - b) % m128) as u64,
            ArithOp::Mul => ((a * b) % m128) as u64,
            ArithOp::Div => {
                let inv = mod_inverse(b as u64, m).ok_or(EvalError::DivisionByZero)?;
                ((a * inv as u128) % m128) as u64
            }
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Rat(r) => write!(f, "{}", format_rational(r)),
            Element::Gauss(g) => write!(f, "{}", format_gaussian(g)),
            Element::Residue { value, .. } => write!(f, "{value}"),
            Element::Float(x) => write!(f, "{x}"),
            Element::Tuple(items) => write!(f, "({})", items.iter().join(", ")),
        }
    }
}

/// Absolute and relative tolerance for floating-point comparisons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance {
        atol: 0.0,
        rtol: 0.0,
    };

    pub fn close(&self, x: f64, y: f64) -> bool {
        if x == y {
            return true;
        }
        (x - y).abs() <= self.atol + self.rtol * x.abs().max(y.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            atol: 1e-9,
            rtol: 1e-9,
        }
    }
}

/// Named membership predicate of a restricted carrier.
#[derive(Clone)]
pub struct Membership {
    pub name: String,
    predicate: Arc<dyn Fn(&Element) -> bool + Send + Sync>,
}

impl Membership {
    pub fn new(
        name: impl Into<String>,
        predicate: impl Fn(&Element) -> bool + Send + Sync + 'static,
    ) -> Self {
        Membership {
            name: name.into(),
            predicate: Arc::new(predicate),
        }
    }

    pub fn holds(&self, e: &Element) -> bool {
        (self.predicate)(e)
    }
}

impl fmt::Debug for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Membership({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Carrier {
    Rational,
    GaussianRational,
    ModularInt(u64),
    Float64(Tolerance),
    Product(Vec<Carrier>),
    Vector(Box<Carrier>, usize),
    Restricted(Box<Carrier>, Membership),
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Rational => write!(f, "Q"),
            Carrier::GaussianRational => write!(f, "QI"),
            Carrier::ModularInt(n) => write!(f, "Zmod({n})"),
            Carrier::Float64(_) => write!(f, "R64"),
            Carrier::Product(parts) => write!(f, "{}", parts.iter().join(" x ")),
            Carrier::Vector(base, dim) => write!(f, "{base}^{dim}"),
            Carrier::Restricted(base, m) => write!(f, "{base} where {}", m.name),
        }
    }
}

impl Carrier {
    pub fn float() -> Self {
        Carrier::Float64(Tolerance::default())
    }

    pub fn vector(base: Carrier, dim: usize) -> Self {
        Carrier::Vector(Box::new(base), dim)
    }

    pub fn restricted(
        base: Carrier,
        name: impl Into<String>,
        predicate: impl Fn(&Element) -> bool + Send + Sync + 'static,
    ) -> Self {
        Carrier::Restricted(Box::new(base), Membership::new(name, predicate))
    }

    /// Rationals in the closed unit interval.
    pub fn unit_interval() -> Self {
        Carrier::restricted(Carrier::Rational, "0 <= c1 <= 1", |e| match e {
            Element::Rat(r) => !r.is_negative() && r <= &Rational::one(),
            _ => false,
        })
    }

    /// Largest tolerance over the float leaves; exact kinds report zero.
    pub fn tolerance(&self) -> Tolerance {
        match self {
            Carrier::Float64(t) => *t,
            Carrier::Rational | Carrier::GaussianRational | Carrier::ModularInt(_) => {
                Tolerance::EXACT
            }
            Carrier::Product(parts) => {
                parts
                    .iter()
                    .map(Carrier::tolerance)
                    .fold(Tolerance::EXACT, |acc, t| Tolerance {
                        atol: acc.atol.max(t.atol),
                        rtol: acc.rtol.max(t.rtol),
                    })
            }
            Carrier::Vector(base, _) | Carrier::Restricted(base, _) => base.tolerance(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.tolerance() == Tolerance::EXACT
    }

    /// Number of elements, when finite and small enough to count.
    pub fn cardinality(&self) -> Option<u128> {
        match self {
            Carrier::ModularInt(n) => Some(u128::from(*n)),
            Carrier::Rational | Carrier::GaussianRational | Carrier::Float64(_) => None,
            Carrier::Product(parts) => parts
                .iter()
                .try_fold(1u128, |acc, c| acc.checked_mul(c.cardinality()?)),
            Carrier::Vector(base, dim) => base.cardinality()?.checked_pow(*dim as u32),
            Carrier::Restricted(..) => self.enumerate().ok().map(|v| v.len() as u128),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Carrier::ModularInt(_) => true,
            Carrier::Rational | Carrier::GaussianRational | Carrier::Float64(_) => false,
            Carrier::Product(parts) => parts.iter().all(Carrier::is_finite),
            Carrier::Vector(base, _) | Carrier::Restricted(base, _) => base.is_finite(),
        }
    }

    /// Shape and membership test.
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (Carrier::Rational, Element::Rat(_)) => true,
            (Carrier::GaussianRational, Element::Gauss(_)) => true,
            (Carrier::ModularInt(n), Element::Residue { value, modulus }) => {
                modulus == n && value < n
            }
            (Carrier::Float64(_), Element::Float(x)) => x.is_finite(),
            (Carrier::Product(parts), Element::Tuple(items)) => {
                parts.len() == items.len() && parts.iter().zip(items).all(|(c, x)| c.contains(x))
            }
            (Carrier::Vector(base, dim), Element::Tuple(items)) => {
                items.len() == *dim && items.iter().all(|x| base.contains(x))
            }
            (Carrier::Restricted(base, m), e) => base.contains(e) && m.holds(e),
            _ => false,
        }
    }

    fn fits(&self, e: &Element) -> bool {
        match (self, e) {
            (Carrier::Rational, Element::Rat(_))
            | (Carrier::GaussianRational, Element::Gauss(_))
            | (Carrier::ModularInt(_), Element::Residue { .. })
            | (Carrier::Float64(_), Element::Float(_)) => true,
            (Carrier::Product(parts), Element::Tuple(items)) => {
                parts.len() == items.len() && parts.iter().zip(items).all(|(c, x)| c.fits(x))
            }
            (Carrier::Vector(base, dim), Element::Tuple(items)) => {
                items.len() == *dim && items.iter().all(|x| base.fits(x))
            }
            (Carrier::Restricted(base, _), e) => base.fits(e),
            _ => false,
        }
    }

    /// Equality under the carrier's semantics: canonical for exact kinds,
    /// `|x - y| <= atol + rtol * max(|x|, |y|)` for floats, componentwise for tuples.
    pub fn eq(&self, x: &Element, y: &Element) -> Result<bool, CarrierError> {
        if !self.fits(x) || !self.fits(y) {
            let bad = if self.fits(x) { y } else { x };
            return Err(CarrierError::ShapeMismatch {
                element: bad.to_string(),
                carrier: self.to_string(),
            });
        }
        Ok(self.eq_unchecked(x, y))
    }

    fn eq_unchecked(&self, x: &Element, y: &Element) -> bool {
        match (self, x, y) {
            (Carrier::Float64(tol), Element::Float(a), Element::Float(b)) => tol.close(*a, *b),
            (Carrier::Product(parts), Element::Tuple(a), Element::Tuple(b)) => parts
                .iter()
                .zip(a.iter().zip(b))
                .all(|(c, (p, q))| c.eq_unchecked(p, q)),
            (Carrier::Vector(base, _), Element::Tuple(a), Element::Tuple(b)) => {
                a.iter().zip(b).all(|(p, q)| base.eq_unchecked(p, q))
            }
            (Carrier::Restricted(base, _), _, _) => base.eq_unchecked(x, y),
            _ => x == y,
        }
    }

    /// Every element exactly once. Products and vectors are listed in
    /// lexicographic order with the last component varying fastest.
    pub fn enumerate(&self) -> Result<Vec<Element>, CarrierError> {
        match self {
            Carrier::ModularInt(n) => Ok((0..*n).map(|v| Element::residue(v, *n)).collect()),
            Carrier::Rational | Carrier::GaussianRational | Carrier::Float64(_) => {
                Err(CarrierError::NotEnumerable(self.to_string()))
            }
            Carrier::Product(parts) => {
                let lists = parts
                    .iter()
                    .map(Carrier::enumerate)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(cartesian(&lists))
            }
            Carrier::Vector(base, dim) => {
                let list = base.enumerate()?;
                Ok(cartesian(&vec![list; *dim]))
            }
            Carrier::Restricted(base, m) => {
                let mut all = base.enumerate()?;
                all.retain(|e| m.holds(e));
                Ok(all)
            }
        }
    }

    /// One random element; finite carriers pick uniformly.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Element, CarrierError> {
        match self {
            Carrier::Rational => Ok(Element::Rat(draw_rational(rng))),
            Carrier::GaussianRational => Ok(Element::Gauss(gauss(
                draw_rational(rng),
                draw_rational(rng),
            ))),
            Carrier::ModularInt(n) => Ok(Element::residue(rng.random_range(0..*n), *n)),
            Carrier::Float64(_) => Ok(Element::Float(rng.random_range(-FLOAT_BOUND..=FLOAT_BOUND))),
            Carrier::Product(parts) => Ok(Element::Tuple(
                parts
                    .iter()
                    .map(|c| c.draw(rng))
                    .collect::<Result<_, _>>()?,
            )),
            Carrier::Vector(base, dim) => Ok(Element::Tuple(
                (0..*dim)
                    .map(|_| base.draw(rng))
                    .collect::<Result<_, _>>()?,
            )),
            Carrier::Restricted(base, m) => {
                for _ in 0..MAX_REJECTIONS {
                    let candidate = base.draw(rng)?;
                    if m.holds(&candidate) {
                        return Ok(candidate);
                    }
                }
                Err(CarrierError::SamplingExhausted(self.to_string()))
            }
        }
    }

    /// Deterministic list of `n` members. Finite carriers cycle their
    /// enumeration from a seed-dependent offset; infinite ones draw from a
    /// ChaCha stream seeded with `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Result<Vec<Element>, CarrierError> {
        if n == 0 {
            return Ok(Vec::new());
        }
        if self.is_finite() {
            let all = self.enumerate()?;
            if all.is_empty() {
                return Err(CarrierError::SamplingExhausted(self.to_string()));
            }
            let offset = (seed % all.len() as u64) as usize;
            return Ok(all.iter().cycle().skip(offset).take(n).cloned().collect());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }

    /// Convert a value into this carrier's representation (rationals are
    /// promoted to gaussian, float or residue leaves). Membership is not checked.
    pub fn coerce(&self, value: Element) -> Result<Element, EvalError> {
        match (self, value) {
            (Carrier::Rational, v @ Element::Rat(_)) => Ok(v),
            (Carrier::GaussianRational, v @ (Element::Rat(_) | Element::Gauss(_))) => {
                Ok(Element::Gauss(v.as_gauss()?))
            }
            (Carrier::Float64(_), v @ (Element::Rat(_) | Element::Float(_))) => {
                Ok(Element::Float(v.as_float()?))
            }
            (Carrier::ModularInt(n), v @ (Element::Rat(_) | Element::Residue { .. })) => {
                Ok(Element::residue(to_residue(&v, *n)?, *n))
            }
            (Carrier::Restricted(base, _), v) => base.coerce(v),
            (Carrier::Product(parts), Element::Tuple(items)) if parts.len() == items.len() => {
                Ok(Element::Tuple(
                    parts
                        .iter()
                        .zip(items)
                        .map(|(c, x)| c.coerce(x))
                        .collect::<Result<_, _>>()?,
                ))
            }
            (Carrier::Vector(base, dim), Element::Tuple(items)) if items.len() == *dim => {
                Ok(Element::Tuple(
                    items
                        .into_iter()
                        .map(|x| base.coerce(x))
                        .collect::<Result<_, _>>()?,
                ))
            }
            (carrier, v) => Err(EvalError::Shape(format!("{v} does not fit {carrier}"))),
        }
    }

    /// Number of leaves in an element of this carrier.
    pub fn arity(&self) -> usize {
        match self {
            Carrier::Product(parts) => parts.iter().map(Carrier::arity).sum(),
            Carrier::Vector(base, dim) => base.arity() * dim,
            Carrier::Restricted(base, _) => base.arity(),
            _ => 1,
        }
    }
}

fn draw_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.random_range(-NUMERATOR_BOUND..=NUMERATOR_BOUND);
    let den = rng.random_range(1..=DENOMINATOR_BOUND);
    rat(num, den)
}

fn cartesian(lists: &[Vec<Element>]) -> Vec<Element> {
    if lists.is_empty() {
        return vec![Element::Tuple(Vec::new())];
    }
    lists
        .iter()
        .map(|l| l.iter().cloned())
        .multi_cartesian_product()
        .map(Element::Tuple)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    #[test]
    fn rational_equality_is_canonical() {
        let c = Carrier::Rational;
        assert!(c
            .eq(&Element::Rat(rat(1, 2)), &Element::Rat(rat(2, 4)))
            .unwrap());
    }

    #[test]
    fn residue_equality() {
        let c = Carrier::ModularInt(3);
        assert!(c
            .eq(&Element::residue(4, 3), &Element::residue(1, 3))
            .unwrap());
    }

    #[test]
    fn float_tolerance() {
        let c = Carrier::float();
        assert!(c
            .eq(&Element::Float(1.0), &Element::Float(1.0 + 1e-12))
            .unwrap());
        assert!(!c
            .eq(&Element::Float(1.0), &Element::Float(1.0 + 1e-6))
            .unwrap());
        // atol + rtol * max = 1e-9 + 1e-9 * 1e6, about 1.000001e-3
        assert!(c
            .eq(&Element::Float(1e6), &Element::Float(1e6 + 9e-4))
            .unwrap());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let c = Carrier::vector(Carrier::Rational, 2);
        let err = c.eq(&Element::Rat(int(1)), &Element::rats([int(1), int(2)]));
        assert!(matches!(err, Err(CarrierError::ShapeMismatch { .. })));
    }

    #[test]
    fn enumerate_residues_and_vectors() {
        let z3 = Carrier::ModularInt(3);
        assert_eq!(
            z3.enumerate().unwrap(),
            vec![
                Element::residue(0, 3),
                Element::residue(1, 3),
                Element::residue(2, 3)
            ]
        );
        let v = Carrier::vector(z3, 2);
        let all = v.enumerate().unwrap();
        assert_eq!(all.len(), 9);
        assert_eq!(
            all[1],
            Element::Tuple(vec![Element::residue(0, 3), Element::residue(1, 3)])
        );
        assert_eq!(v.cardinality(), Some(9));
    }

    #[test]
    fn rationals_are_not_enumerable() {
        assert!(matches!(
            Carrier::Rational.enumerate(),
            Err(CarrierError::NotEnumerable(_))
        ));
    }

    #[test]
    fn finite_samples_cycle() {
        let s = Carrier::ModularInt(3).sample(7, 5).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.iter().all(|e| Carrier::ModularInt(3).contains(e)));
        assert_eq!(s[0], s[3]);
    }

    #[test]
    fn restricted_samples_are_members() {
        let c = Carrier::unit_interval();
        let s = c.sample(42, 100).unwrap();
        assert_eq!(s.len(), 100);
        assert!(s.iter().all(|e| c.contains(e)));
    }

    #[test]
    fn sampling_is_reproducible_and_bounded() {
        let c = Carrier::vector(Carrier::Rational, 3);
        let a = c.sample(5, 50).unwrap();
        assert_eq!(a, c.sample(5, 50).unwrap());
        for e in &a {
            for leaf in e.components() {
                let r = leaf.as_rat().unwrap();
                assert!(r.numer().abs() <= 12.into() && r.denom() <= &8.into());
            }
        }
        assert!(c.sample(5, 0).unwrap().is_empty());
    }

    #[test]
    fn impossible_restriction_exhausts() {
        let c = Carrier::restricted(Carrier::Rational, "never", |_| false);
        assert!(matches!(
            c.sample(0, 1),
            Err(CarrierError::SamplingExhausted(_))
        ));
    }

    #[test]
    fn arithmetic_promotes() {
        let half = Element::Rat(rat(1, 2));
        let i = Element::Gauss(crate::number::imag_unit());
        assert_eq!(
            half.add(&i).unwrap(),
            Element::Gauss(gauss(rat(1, 2), int(1)))
        );
        let r = Element::residue(2, 5);
        assert_eq!(r.mul(&half).unwrap(), Element::residue(1, 5));
        let v = Element::rats([int(1), int(2)]);
        assert_eq!(half.mul(&v).unwrap(), Element::rats([rat(1, 2), int(1)]));
        assert_eq!(
            Element::Rat(int(1)).div(&Element::Rat(int(0))),
            Err(EvalError::DivisionByZero)
        );
    }
}
