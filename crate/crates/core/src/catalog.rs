//! Every structure of the examples, built over the most exact carrier that
//! carries its formulas, plus a by-name registry used by the CLI.
//!
//! Point sets of the form `R^n x R` are stored flat: an element is a tuple
//! `(x1, .., xn, s)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{algebra_from_ring, AlgebraError, MobiAlgebra};
use crate::carrier::{Carrier, Element};
use crate::error::EvalError;
use crate::functor::MorphismPair;
use crate::number::{gauss, imag_unit, int, parse_rational, rat, Rational};
use crate::ring::{RModule, RingError, RingWithHalf};
use crate::space::{transport_space, MobiSpace, PointedMobiSpace, SpaceError};
use crate::UnaryOp;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("parameter {name}: {message}")]
    InvalidParam { name: String, message: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

fn invalid(name: &str, message: impl Into<String>) -> CatalogError {
    CatalogError::InvalidParam {
        name: name.to_string(),
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// element helpers

fn q(r: Rational) -> Element {
    Element::Rat(r)
}

fn one_minus(a: &Element) -> Result<Element, EvalError> {
    Element::Rat(Rational::one()).sub(a)
}

/// `a + b (c - a)`, valid for leaves and for tuples with a leaf `b`.
fn lerp(a: &Element, b: &Element, c: &Element) -> Result<Element, EvalError> {
    a.add(&b.mul(&c.sub(a)?)?)
}

/// Split `(x1, .., xn, s)` into `((x1, .., xn), s)`.
fn split(e: &Element, len: usize) -> Result<(Element, Element), EvalError> {
    let items = e.as_tuple(len)?;
    Ok((
        Element::Tuple(items[..len - 1].to_vec()),
        items[len - 1].clone(),
    ))
}

fn join(x: Element, s: Element) -> Element {
    match x {
        Element::Tuple(mut items) => {
            items.push(s);
            Element::Tuple(items)
        }
        leaf => Element::Tuple(vec![leaf, s]),
    }
}

fn zeros(n: usize) -> Element {
    Element::rats(std::iter::repeat_n(Rational::zero(), n))
}

fn polynomial(coefficients: &[Rational], s: &Element) -> Result<Element, EvalError> {
    // Horner, highest degree first
    let mut acc = Element::Rat(Rational::zero());
    for c in coefficients.iter().rev() {
        acc = acc.mul(s)?.add(&Element::Rat(c.clone()))?;
    }
    Ok(acc)
}

fn id_map() -> UnaryOp {
    Arc::new(|x: &Element| Ok(x.clone()))
}

// ---------------------------------------------------------------------------
// scalar structures

fn affine_p(a: &Element, b: &Element, c: &Element) -> Result<Element, EvalError> {
    lerp(a, b, c)
}

/// `p(a,b,c) = a - b a + b c` on the rationals of `[0, 1]`.
pub fn canonical_interval_algebra() -> MobiAlgebra {
    MobiAlgebra::new(
        "canonical-interval-algebra",
        Carrier::unit_interval(),
        affine_p,
        q(int(0)),
        q(rat(1, 2)),
        q(int(1)),
    )
    .expect("constants lie in [0, 1]")
}

/// The canonical operation on all rationals, with 2 declared.
pub fn rational_line_algebra() -> MobiAlgebra {
    MobiAlgebra::new(
        "rational-line-algebra",
        Carrier::Rational,
        affine_p,
        q(int(0)),
        q(rat(1, 2)),
        q(int(1)),
    )
    .expect("rational constants")
    .with_two(q(int(2)))
}

/// The canonical operation on doubles (tolerance 1e-9).
pub fn float_line_algebra() -> MobiAlgebra {
    MobiAlgebra::new(
        "float-line-algebra",
        Carrier::float(),
        affine_p,
        Element::Float(0.0),
        Element::Float(0.5),
        Element::Float(1.0),
    )
    .expect("float constants")
    .with_two(Element::Float(2.0))
}

fn leaf_ring(
    name: &str,
    carrier: Carrier,
    zero: Element,
    one: Element,
    half: Element,
) -> Result<RingWithHalf, RingError> {
    RingWithHalf::new(
        name,
        carrier,
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
        zero,
        one,
        half,
    )
}

pub fn rational_ring() -> RingWithHalf {
    leaf_ring(
        "rational-ring",
        Carrier::Rational,
        q(int(0)),
        q(int(1)),
        q(rat(1, 2)),
    )
    .expect("1/2 + 1/2 = 1")
}

pub fn float_ring() -> RingWithHalf {
    leaf_ring(
        "float-ring",
        Carrier::float(),
        Element::Float(0.0),
        Element::Float(1.0),
        Element::Float(0.5),
    )
    .expect("0.5 + 0.5 = 1")
}

/// Integers modulo `m`, with one half found by scanning `x + x = 1`.
pub fn zmod_ring(m: u64) -> Result<RingWithHalf, RingError> {
    if m == 0 {
        return Err(RingError::NoHalf("Zmod(0)".to_string()));
    }
    let half = (0..m).find(|x| (2 * x) % m == 1 % m).unwrap_or(0);
    leaf_ring(
        &format!("zmod-ring({m})"),
        Carrier::ModularInt(m),
        Element::residue(0, m),
        Element::residue(1, m),
        Element::residue(half, m),
    )
}

/// `Z_m` with an arbitrary claimed half, not checked.
pub fn zmod_ring_with_half(m: u64, half: u64) -> RingWithHalf {
    RingWithHalf::new_unchecked(
        format!("zmod-ring({m})"),
        Carrier::ModularInt(m),
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
        Element::residue(0, m),
        Element::residue(1, m),
        Element::residue(half, m),
    )
}

fn check_modulus(m: u64) -> Result<(), CatalogError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(invalid(
            "m",
            format!("modulus must be odd and at least 3, got {m}"),
        ));
    }
    Ok(())
}

/// The algebra `a + b c - b a` of `Z_m`, `m` odd.
pub fn zmod_algebra(m: u64) -> Result<MobiAlgebra, CatalogError> {
    check_modulus(m)?;
    Ok(algebra_from_ring(&zmod_ring(m)?)?.renamed(format!("zmod-algebra({m})")))
}

fn lozenge_p(
    k: Rational,
) -> impl Fn(&Element, &Element, &Element) -> Result<Element, EvalError> + Clone {
    let k = q(k);
    move |a, b, c| {
        let (a, b, c) = (a.as_tuple(2)?, b.as_tuple(2)?, c.as_tuple(2)?);
        let d1 = c[0].sub(&a[0])?;
        let d2 = c[1].sub(&a[1])?;
        Ok(Element::Tuple(vec![
            a[0].add(&b[0].mul(&d1)?)?.add(&k.mul(&b[1])?.mul(&d2)?)?,
            a[1].add(&b[0].mul(&d2)?)?.add(&b[1].mul(&d1)?)?,
        ]))
    }
}

fn pair(a: Rational, b: Rational) -> Element {
    Element::rats([a, b])
}

/// The set `sqrt_k |a2| <= a1 <= 1 - sqrt_k |a2|` with the plane operation for `k = sqrt_k^2`.
pub fn lozenge_algebra(sqrt_k: Rational) -> Result<MobiAlgebra, CatalogError> {
    if sqrt_k.is_negative() {
        return Err(invalid("sqrt_k", "must be nonnegative"));
    }
    let bound = sqrt_k.clone();
    let carrier = Carrier::restricted(
        Carrier::vector(Carrier::Rational, 2),
        format!("{} |c2| <= c1 <= 1 - {} |c2|", sqrt_k, sqrt_k),
        move |e| match e.rat_components(2) {
            Ok(c) => {
                let w = &bound * c[1].abs();
                w <= c[0] && c[0] <= Rational::one() - w
            }
            Err(_) => false,
        },
    );
    Ok(MobiAlgebra::new(
        format!("lozenge-algebra({sqrt_k})"),
        carrier,
        lozenge_p(&sqrt_k * &sqrt_k),
        pair(int(0), int(0)),
        pair(rat(1, 2), int(0)),
        pair(int(1), int(0)),
    )?)
}

/// The plane `Q^2` with the lozenge operation for any `k`; products are
/// those of complex (`k = -1`), dual (`k = 0`) and split-complex (`k = 1`) numbers.
pub fn plane_algebra(k: Rational) -> MobiAlgebra {
    MobiAlgebra::new(
        format!("plane-algebra({k})"),
        Carrier::vector(Carrier::Rational, 2),
        lozenge_p(k),
        pair(int(0), int(0)),
        pair(rat(1, 2), int(0)),
        pair(int(1), int(0)),
    )
    .expect("plane constants")
    .with_two(pair(int(2), int(0)))
}

/// `(a1 + h a2)(x1 + h x2)` with `h^2 = k`.
fn hyper_mul(k: &Rational, a: &[Rational], x: &[Rational]) -> Element {
    pair(
        &a[0] * &x[0] + k * &a[1] * &x[1],
        &a[0] * &x[1] + &a[1] * &x[0],
    )
}

fn componentwise_add(a: &Element, b: &Element) -> Result<Element, EvalError> {
    a.add(b)
}

fn componentwise_neg(a: &Element) -> Result<Element, EvalError> {
    a.neg()
}

pub fn plane_ring(k: Rational) -> RingWithHalf {
    RingWithHalf::new(
        format!("plane-ring({k})"),
        Carrier::vector(Carrier::Rational, 2),
        componentwise_add,
        move |a, b| Ok(hyper_mul(&k, &a.rat_components(2)?, &b.rat_components(2)?)),
        componentwise_neg,
        pair(int(0), int(0)),
        pair(int(1), int(0)),
        pair(rat(1, 2), int(0)),
    )
    .expect("(1/2, 0) doubles to (1, 0)")
}

fn triple(a: Rational, b: Rational, c: Rational) -> Element {
    Element::rats([a, b, c])
}

/// `Q^3` with the non-commutative product `(a1 b1, a1 b2 + a2 b3, a3 b3)`.
pub fn tri_algebra() -> MobiAlgebra {
    MobiAlgebra::new(
        "tri-algebra",
        Carrier::vector(Carrier::Rational, 3),
        |a, b, c| {
            let (a, b, c) = (
                a.rat_components(3)?,
                b.rat_components(3)?,
                c.rat_components(3)?,
            );
            Ok(triple(
                &a[0] + &b[0] * (&c[0] - &a[0]),
                &a[1] + &b[0] * (&c[1] - &a[1]) + &b[1] * (&c[2] - &a[2]),
                &a[2] + &b[2] * (&c[2] - &a[2]),
            ))
        },
        triple(int(0), int(0), int(0)),
        triple(rat(1, 2), int(0), rat(1, 2)),
        triple(int(1), int(0), int(1)),
    )
    .expect("tri constants")
    .with_two(triple(int(2), int(0), int(2)))
}

pub fn tri_ring() -> RingWithHalf {
    RingWithHalf::new(
        "tri-ring",
        Carrier::vector(Carrier::Rational, 3),
        componentwise_add,
        |a, b| {
            let (a, b) = (a.rat_components(3)?, b.rat_components(3)?);
            Ok(triple(
                &a[0] * &b[0],
                &a[0] * &b[1] + &a[1] * &b[2],
                &a[2] * &b[2],
            ))
        },
        componentwise_neg,
        triple(int(0), int(0), int(0)),
        triple(int(1), int(0), int(1)),
        triple(rat(1, 2), int(0), rat(1, 2)),
    )
    .expect("(1/2, 0, 1/2) doubles to the unit")
}

fn intro_p(a: &Element, b: &Element, c: &Element) -> Result<Element, EvalError> {
    let (a, b, c) = (a.as_rat()?, b.as_rat()?, c.as_rat()?);
    Ok(q((c + int(5) * a) / int(6) + b * (c - a) / int(6)))
}

fn six_t_minus_one() -> UnaryOp {
    Arc::new(|t: &Element| Ok(q(int(6) * t.as_rat()? - int(1))))
}

/// `f(t) = 6t - 1` from the unit interval onto `[-1, 5]` with
/// `p'(a,b,c) = (c + 5a)/6 + b (c - a)/6` and constants `-1, 2, 5`.
pub fn intro_morphism() -> (MobiAlgebra, MobiAlgebra, UnaryOp) {
    let carrier = Carrier::restricted(Carrier::Rational, "-1 <= c1 <= 5", |e| match e {
        Element::Rat(r) => r >= &int(-1) && r <= &int(5),
        _ => false,
    });
    let target = MobiAlgebra::new(
        "intro-target-algebra",
        carrier,
        intro_p,
        q(int(-1)),
        q(int(2)),
        q(int(5)),
    )
    .expect("constants lie in [-1, 5]");
    (canonical_interval_algebra(), target, six_t_minus_one())
}

/// The same operation on all rationals; its 2 is 11.
pub fn intro_line_algebra() -> MobiAlgebra {
    MobiAlgebra::new(
        "intro-line-algebra",
        Carrier::Rational,
        intro_p,
        q(int(-1)),
        q(int(2)),
        q(int(5)),
    )
    .expect("rational constants")
    .with_two(q(int(11)))
}

/// The canonical line space and the space `x + ((a + 1)/6)(y - x)` over
/// [`intro_line_algebra`], both at origin 0, with the pair `(6t - 1, id)`.
pub fn intro_line_spaces() -> (PointedMobiSpace, PointedMobiSpace, MorphismPair) {
    let source = canonical_space(1, Scalars::Line);
    let target = MobiSpace::new(
        "intro-line-space",
        intro_line_algebra(),
        Carrier::vector(Carrier::Rational, 1),
        |x, a, y| {
            let t = q((a.as_rat()? + int(1)) / int(6));
            lerp(x, &t, y)
        },
    );
    let target = PointedMobiSpace::new(target, zeros(1)).expect("origin");
    let pair = MorphismPair {
        scalar: six_t_minus_one(),
        point: id_map(),
    };
    (source, target, pair)
}

// ---------------------------------------------------------------------------
// spaces

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scalars {
    Line,
    Interval,
}

fn scalar_algebra(scalars: Scalars) -> MobiAlgebra {
    match scalars {
        Scalars::Line => rational_line_algebra(),
        Scalars::Interval => canonical_interval_algebra(),
    }
}

fn pointed(space: MobiSpace, origin: Element) -> PointedMobiSpace {
    PointedMobiSpace::new(space, origin).expect("catalog origins are members")
}

/// `q(x,a,y) = x + a (y - x)` on `Q^n`.
pub fn canonical_space(n: usize, scalars: Scalars) -> PointedMobiSpace {
    let space = MobiSpace::new(
        format!("canonical-space({n})"),
        scalar_algebra(scalars),
        Carrier::vector(Carrier::Rational, n),
        lerp,
    );
    pointed(space, zeros(n))
}

/// The canonical space on `Z_m^dim` over the algebra of `Z_m`.
pub fn zmod_space(m: u64, dim: usize) -> Result<PointedMobiSpace, CatalogError> {
    let space = MobiSpace::new(
        format!("zmod-space({m},{dim})"),
        zmod_algebra(m)?,
        Carrier::vector(Carrier::ModularInt(m), dim),
        lerp,
    );
    Ok(pointed(
        space,
        Element::Tuple(vec![Element::residue(0, m); dim]),
    ))
}

fn k_vector(k: &[Rational], n: usize) -> Element {
    if k.len() == 1 && n > 1 {
        Element::rats(std::iter::repeat_n(k[0].clone(), n))
    } else {
        Element::rats(k.iter().cloned())
    }
}

fn check_k(k: &[Rational], n: usize) -> Result<(), CatalogError> {
    if k.len() == n || k.len() == 1 {
        Ok(())
    } else {
        Err(invalid(
            "k",
            format!("expected 1 or {n} components, got {}", k.len()),
        ))
    }
}

/// `((x + a(y - x) + a(1 - a)(t - s)^2 k, s + a(t - s))` on `Q^(n+1)`. A
/// single `k` component is repeated over all `n` coordinates.
pub fn projectile_space(n: usize, k: &[Rational]) -> PointedMobiSpace {
    let kv = k_vector(k, n);
    let len = n + 1;
    let space = MobiSpace::new(
        format!("projectile-space({n})"),
        rational_line_algebra(),
        Carrier::vector(Carrier::Rational, len),
        move |xs, a, yt| {
            let ((x, s), (y, t)) = (split(xs, len)?, split(yt, len)?);
            let d = t.sub(&s)?;
            let bend = a.mul(&one_minus(a)?)?.mul(&d.mul(&d)?)?.mul(&kv)?;
            Ok(join(lerp(&x, a, &y)?.add(&bend)?, lerp(&s, a, &t)?))
        },
    );
    pointed(space, zeros(len))
}

/// `((1-a) x e^{alpha a (t-s)} + a y e^{alpha (1-a)(s-t)}, s + a(t-s))` on doubles.
pub fn damped_space(n: usize, alpha: f64) -> PointedMobiSpace {
    let len = n + 1;
    let alpha = Element::Float(alpha);
    let space = MobiSpace::new(
        format!("damped-space({n})"),
        float_line_algebra(),
        Carrier::vector(Carrier::float(), len),
        move |xs, a, yt| {
            let ((x, s), (y, t)) = (split(xs, len)?, split(yt, len)?);
            let b = one_minus(a)?;
            let d = t.sub(&s)?;
            let left = b.mul(&alpha.mul(a)?.mul(&d)?.exp()?)?.mul(&x)?;
            let right = a.mul(&alpha.mul(&b)?.mul(&d.neg()?)?.exp()?)?.mul(&y)?;
            Ok(join(left.add(&right)?, lerp(&s, a, &t)?))
        },
    );
    pointed(space, Element::floats(std::iter::repeat_n(0.0, len)))
}

/// The canonical space on `Q^(n+1)` moved along `F(x,s) = (lambda(s) x - K(s), s)`,
/// with `lambda` and `K` polynomials given by coefficients, constant term
/// first; `K(s)` is added to every coordinate. `lambda` must not vanish at
/// the sampled abscissae, otherwise evaluation reports a division by zero.
pub fn transported_space(
    n: usize,
    lambda: &[Rational],
    k_poly: &[Rational],
) -> Result<PointedMobiSpace, CatalogError> {
    if lambda.iter().all(Zero::is_zero) {
        return Err(invalid("lambda", "must not be the zero polynomial"));
    }
    let len = n + 1;
    let canonical = canonical_space(len, Scalars::Line);
    let (lam, kp) = (lambda.to_vec(), k_poly.to_vec());
    let forward: UnaryOp = Arc::new(move |e: &Element| {
        let (x, s) = split(e, len)?;
        let shift = polynomial(&kp, &s)?;
        let moved = polynomial(&lam, &s)?
            .mul(&x)?
            .sub(&Element::Tuple(vec![shift; n]))?;
        Ok(join(moved, s))
    });
    let (lam, kp) = (lambda.to_vec(), k_poly.to_vec());
    let inverse: UnaryOp = Arc::new(move |e: &Element| {
        let (u, s) = split(e, len)?;
        let shift = polynomial(&kp, &s)?;
        let back = u
            .add(&Element::Tuple(vec![shift; n]))?
            .div(&polynomial(&lam, &s)?)?;
        Ok(join(back, s))
    });
    let space = transport_space(
        &canonical.space,
        format!("transported-space({n})"),
        canonical.space.points.clone(),
        forward,
        inverse,
    )?;
    Ok(pointed(space, zeros(len)))
}

/// The canonical float space moved along `F(x,s) = (e^{alpha s} x, s)`.
pub fn transported_exp_space(n: usize, alpha: f64) -> Result<PointedMobiSpace, CatalogError> {
    let len = n + 1;
    let points = Carrier::vector(Carrier::float(), len);
    let canonical = MobiSpace::new(
        format!("canonical-float-space({len})"),
        float_line_algebra(),
        points.clone(),
        lerp,
    );
    let scale = move |sign: f64| -> UnaryOp {
        Arc::new(move |e: &Element| {
            let (x, s) = split(e, len)?;
            let factor = Element::Float(sign * alpha).mul(&s)?.exp()?;
            Ok(join(factor.mul(&x)?, s))
        })
    };
    let space = transport_space(
        &canonical,
        format!("transported-exp-space({n})"),
        points,
        scale(1.0),
        scale(-1.0),
    )?;
    Ok(pointed(
        space,
        Element::floats(std::iter::repeat_n(0.0, len)),
    ))
}

fn positive_last(len: usize) -> impl Fn(&Element) -> bool + Send + Sync + 'static {
    move |e| match e.as_tuple(len) {
        Ok(items) => matches!(&items[len - 1], Element::Rat(s) if s.is_positive()),
        Err(_) => false,
    }
}

fn halfplane_points(n: usize) -> Carrier {
    let len = n + 1;
    Carrier::restricted(
        Carrier::vector(Carrier::Rational, len),
        format!("c{len} > 0"),
        positive_last(len),
    )
}

/// `(x + (y - x) a t / (s + a(t - s)), s + a(t - s))` on `Q^n x Q+`, over the
/// unit interval.
pub fn halfplane_space(n: usize) -> PointedMobiSpace {
    let len = n + 1;
    let space = MobiSpace::new(
        format!("halfplane-space({n})"),
        canonical_interval_algebra(),
        halfplane_points(n),
        move |xs, a, yt| {
            let ((x, s), (y, t)) = (split(xs, len)?, split(yt, len)?);
            let u = lerp(&s, a, &t)?;
            let w = a.mul(&t)?.div(&u)?;
            Ok(join(lerp(&x, &w, &y)?, u))
        },
    );
    let mut origin = vec![Rational::zero(); n];
    origin.push(Rational::one());
    pointed(space, Element::rats(origin))
}

/// The canonical space on `Q^n x Q+` over the unit interval, and the pair
/// `F(x,s) = (x/s, s)`, `F^-1(x,s) = (x s, s)` that carries it to
/// [`halfplane_space`].
pub fn halfplane_straightening(n: usize) -> (MobiSpace, UnaryOp, UnaryOp) {
    let len = n + 1;
    let canonical = MobiSpace::new(
        format!("canonical-halfplane({n})"),
        canonical_interval_algebra(),
        halfplane_points(n),
        lerp,
    );
    let forward: UnaryOp = Arc::new(move |e: &Element| {
        let (x, s) = split(e, len)?;
        Ok(join(x.div(&s)?, s))
    });
    let inverse: UnaryOp = Arc::new(move |e: &Element| {
        let (x, s) = split(e, len)?;
        Ok(join(x.mul(&s)?, s))
    });
    (canonical, forward, inverse)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

/// `q(x, a, y) = x + (a1 +- sqrt_k a2)(y - x)` on `[0, 1]` over the lozenge.
/// The sign is not fixed by the construction; both branches are built.
pub fn lozenge_space(sqrt_k: Rational, sign: Sign) -> Result<PointedMobiSpace, CatalogError> {
    let algebra = lozenge_algebra(sqrt_k.clone())?;
    let w = match sign {
        Sign::Plus => sqrt_k,
        Sign::Minus => -sqrt_k,
    };
    let space = MobiSpace::new(
        format!("lozenge-space({}, {sign})", algebra.name),
        algebra,
        Carrier::unit_interval(),
        move |x, a, y| {
            let a = a.rat_components(2)?;
            lerp(x, &q(&a[0] + &w * &a[1]), y)
        },
    );
    Ok(pointed(space, q(int(0))))
}

/// `q(x, a, y) = x + (a1 + h a2)(y - x)` on `x1 + h x2`, `h^2 = k`.
pub fn plane_space(k: Rational) -> PointedMobiSpace {
    let kk = k.clone();
    let space = MobiSpace::new(
        format!("plane-space({k})"),
        plane_algebra(k),
        Carrier::vector(Carrier::Rational, 2),
        move |x, a, y| {
            let d = y.sub(x)?.rat_components(2)?;
            x.add(&hyper_mul(&kk, &a.rat_components(2)?, &d))
        },
    );
    pointed(space, pair(int(0), int(0)))
}

pub fn tri_space() -> PointedMobiSpace {
    let space = MobiSpace::new(
        "tri-space",
        tri_algebra(),
        Carrier::vector(Carrier::Rational, 2),
        |x, a, y| {
            let (x, a, y) = (
                x.rat_components(2)?,
                a.rat_components(3)?,
                y.rat_components(2)?,
            );
            Ok(pair(
                &x[0] + &a[0] * (&y[0] - &x[0]) + &a[1] * (&y[1] - &x[1]),
                &x[1] + &a[2] * (&y[1] - &x[1]),
            ))
        },
    );
    pointed(space, pair(int(0), int(0)))
}

fn complex_points(n: usize) -> Carrier {
    let mut parts = vec![Carrier::GaussianRational; n];
    parts.push(Carrier::Rational);
    Carrier::Product(parts)
}

fn complex_point(x: Vec<Rational>, s: Rational) -> Element {
    let mut items: Vec<Element> = x
        .into_iter()
        .map(|r| Element::Gauss(gauss(r, Rational::zero())))
        .collect();
    items.push(q(s));
    Element::Tuple(items)
}

/// `(x + (y - x) a ((2 - a) s + a t + i)/(s + t + i), s + a(t - s))` on
/// `QI^n x Q` over the rational line. Not affine: the assignment
/// `x1 = 0, y1 = (0, 1), x2 = (1, 0), y2 = 0, a = -1/2` is attached as a
/// probe and is tried before any sampled one.
pub fn nonaffine_complex_space(n: usize) -> PointedMobiSpace {
    let len = n + 1;
    let i = Element::Gauss(imag_unit());
    let two = q(int(2));
    let space = MobiSpace::new(
        format!("nonaffine-complex-space({n})"),
        rational_line_algebra(),
        complex_points(n),
        move |xs, a, yt| {
            let ((x, s), (y, t)) = (split(xs, len)?, split(yt, len)?);
            let num = two.sub(a)?.mul(&s)?.add(&a.mul(&t)?)?.add(&i)?;
            let den = s.add(&t)?.add(&i)?;
            let factor = a.mul(&num)?.div(&den)?;
            Ok(join(lerp(&x, &factor, &y)?, lerp(&s, a, &t)?))
        },
    );
    let zero_x = || vec![Rational::zero(); n];
    let mut unit_x = zero_x();
    unit_x[0] = Rational::one();
    let probe = vec![
        complex_point(zero_x(), int(0)),
        complex_point(zero_x(), int(1)),
        complex_point(unit_x, int(0)),
        complex_point(zero_x(), int(0)),
        q(rat(-1, 2)),
    ];
    let space = space.with_probe("affine", probe);
    pointed(space, complex_point(zero_x(), int(0)))
}

/// `(x + a (y - x) (3 s^2 + 3 s (t - s) a + (t - s)^2 a^2 + 1)/(s^2 + s t + t^2 + 1), s + a(t - s))`
/// on `Q^(n+1)` over the rational line. Not affine.
pub fn nonaffine_poly_space(n: usize) -> PointedMobiSpace {
    let len = n + 1;
    let space = MobiSpace::new(
        format!("nonaffine-poly-space({n})"),
        rational_line_algebra(),
        Carrier::vector(Carrier::Rational, len),
        move |xs, a, yt| {
            let ((x, s), (y, t)) = (split(xs, len)?, split(yt, len)?);
            let (a_, s_, t_) = (a.as_rat()?, s.as_rat()?, t.as_rat()?);
            let d = t_ - s_;
            let num = int(3) * s_ * s_ + int(3) * s_ * &d * a_ + &d * &d * a_ * a_ + int(1);
            let den = s_ * s_ + s_ * t_ + t_ * t_ + int(1);
            let w = q(a_ * num / den);
            Ok(join(lerp(&x, &w, &y)?, lerp(&s, a, &t)?))
        },
    );
    pointed(space, zeros(len))
}

// ---------------------------------------------------------------------------
// modules

/// `Q^n` over the rationals.
pub fn canonical_module(n: usize) -> RModule {
    RModule::new(
        format!("canonical-module({n})"),
        rational_ring(),
        Carrier::vector(Carrier::Rational, n),
        componentwise_add,
        zeros(n),
        |a, x| a.mul(x),
    )
    .with_neg(componentwise_neg)
}

/// `Z_m^dim` over `Z_m`, `m` odd.
pub fn zmod_module(m: u64, dim: usize) -> Result<RModule, CatalogError> {
    check_modulus(m)?;
    Ok(RModule::new(
        format!("zmod-module({m},{dim})"),
        zmod_ring(m)?,
        Carrier::vector(Carrier::ModularInt(m), dim),
        componentwise_add,
        Element::Tuple(vec![Element::residue(0, m); dim]),
        |a, x| a.mul(x),
    )
    .with_neg(componentwise_neg))
}

/// `(x,s) + (y,t) = (x + y - 2 s t k, s + t)`,
/// `phi_a(x,s) = (a x + a(1 - a) s^2 k, a s)`.
pub fn projectile_module(n: usize, k: &[Rational]) -> RModule {
    let len = n + 1;
    let kv = k_vector(k, n);
    let (k_add, k_phi, k_neg) = (kv.clone(), kv.clone(), kv);
    RModule::new(
        format!("projectile-module({n})"),
        rational_ring(),
        Carrier::vector(Carrier::Rational, len),
        move |xs, yt| {
            let ((x, s), (y, t)) = (split(xs, len)?, split(yt, len)?);
            let cross = q(int(2)).mul(&s)?.mul(&t)?.mul(&k_add)?;
            Ok(join(x.add(&y)?.sub(&cross)?, s.add(&t)?))
        },
        zeros(len),
        move |a, xs| {
            let (x, s) = split(xs, len)?;
            let bend = a.mul(&one_minus(a)?)?.mul(&s.mul(&s)?)?.mul(&k_phi)?;
            Ok(join(a.mul(&x)?.add(&bend)?, a.mul(&s)?))
        },
    )
    .with_neg(move |xs| {
        let (x, s) = split(xs, len)?;
        let shift = q(int(2)).mul(&s)?.mul(&s)?.mul(&k_neg)?;
        Ok(join(x.neg()?.sub(&shift)?, s.neg()?))
    })
}

/// `(x,s) + (y,t) = (x e^{alpha t} + y e^{alpha s}, s + t)`,
/// `phi_a(x,s) = (a x e^{-alpha (1-a) s}, a s)` on doubles.
pub fn damped_module(n: usize, alpha: f64) -> RModule {
    let len = n + 1;
    let al = Element::Float(alpha);
    let (al_add, al_phi, al_neg) = (al.clone(), al.clone(), al);
    RModule::new(
        format!("damped-module({n})"),
        float_ring(),
        Carrier::vector(Carrier::float(), len),
        move |xs, yt| {
            let ((x, s), (y, t)) = (split(xs, len)?, split(yt, len)?);
            let left = al_add.mul(&t)?.exp()?.mul(&x)?;
            let right = al_add.mul(&s)?.exp()?.mul(&y)?;
            Ok(join(left.add(&right)?, s.add(&t)?))
        },
        Element::floats(std::iter::repeat_n(0.0, len)),
        move |a, xs| {
            let (x, s) = split(xs, len)?;
            let decay = al_phi.mul(&one_minus(a)?)?.mul(&s)?.neg()?.exp()?;
            Ok(join(a.mul(&decay)?.mul(&x)?, a.mul(&s)?))
        },
    )
    .with_neg(move |xs| {
        let (x, s) = split(xs, len)?;
        let decay = Element::Float(-2.0).mul(&al_neg)?.mul(&s)?.exp()?;
        Ok(join(decay.mul(&x)?.neg()?, s.neg()?))
    })
}

/// `Q^2` as `x1 + h x2` over the plane ring, `phi_a(x) = (a1 + h a2) x`.
pub fn plane_module(k: Rational) -> RModule {
    let kk = k.clone();
    RModule::new(
        format!("plane-module({k})"),
        plane_ring(k),
        Carrier::vector(Carrier::Rational, 2),
        componentwise_add,
        pair(int(0), int(0)),
        move |a, x| Ok(hyper_mul(&kk, &a.rat_components(2)?, &x.rat_components(2)?)),
    )
    .with_neg(componentwise_neg)
}

/// `Q^2` over the triangular ring, `phi_a(x) = (a1 x1 + a2 x2, a3 x2)`.
pub fn tri_module() -> RModule {
    RModule::new(
        "tri-module",
        tri_ring(),
        Carrier::vector(Carrier::Rational, 2),
        componentwise_add,
        pair(int(0), int(0)),
        |a, x| {
            let (a, x) = (a.rat_components(3)?, x.rat_components(2)?);
            Ok(pair(&a[0] * &x[0] + &a[1] * &x[1], &a[2] * &x[1]))
        },
    )
    .with_neg(componentwise_neg)
}

/// `(id, F)` with `F(x,s) = (x + s(1 - s) k, s)`, from the canonical module
/// on `Q^(n+1)` to [`projectile_module`].
pub fn projectile_straightening(n: usize, k: &[Rational]) -> (MorphismPair, RModule, RModule) {
    let len = n + 1;
    let kv = k_vector(k, n);
    let point: UnaryOp = Arc::new(move |e: &Element| {
        let (x, s) = split(e, len)?;
        let bend = s.mul(&one_minus(&s)?)?.mul(&kv)?;
        Ok(join(x.add(&bend)?, s))
    });
    let pair = MorphismPair {
        scalar: id_map(),
        point,
    };
    (pair, canonical_module(len), projectile_module(n, k))
}

// ---------------------------------------------------------------------------
// registry

/// Which part of the theory an entry illustrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Scalar structures: algebras and rings with one half.
    ScalarStructure,
    /// The worked examples of mobi spaces.
    SpaceExample,
    /// Modules read off the affine examples with 2.
    DerivedModule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Algebra,
    Space,
    Ring,
    Module,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Algebra => "algebra",
            Kind::Space => "space",
            Kind::Ring => "ring",
            Kind::Module => "module",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: Kind,
    pub params: Vec<ParamSpec>,
    pub source: Source,
    pub summary: &'static str,
}

/// name, kind, parameter defaults, source, summary
type Row = (
    &'static str,
    Kind,
    &'static [(&'static str, &'static str)],
    Source,
    &'static str,
);

const ENTRIES: &[Row] = &[
    (
        "canonical-interval-algebra",
        Kind::Algebra,
        &[],
        Source::ScalarStructure,
        "a - b a + b c on [0, 1]",
    ),
    (
        "rational-line-algebra",
        Kind::Algebra,
        &[],
        Source::ScalarStructure,
        "a - b a + b c on Q, 2 = 2",
    ),
    (
        "float-line-algebra",
        Kind::Algebra,
        &[],
        Source::ScalarStructure,
        "a - b a + b c on doubles",
    ),
    (
        "rational-ring",
        Kind::Ring,
        &[],
        Source::ScalarStructure,
        "Q with 1/2",
    ),
    (
        "zmod-ring",
        Kind::Ring,
        &[("m", "3")],
        Source::ScalarStructure,
        "Z_m, m odd",
    ),
    (
        "zmod-algebra",
        Kind::Algebra,
        &[("m", "3")],
        Source::ScalarStructure,
        "a + b c - b a on Z_m, m odd",
    ),
    (
        "lozenge-algebra",
        Kind::Algebra,
        &[("sqrt_k", "1")],
        Source::ScalarStructure,
        "plane operation on the lozenge sqrt_k|a2| <= a1 <= 1 - sqrt_k|a2|",
    ),
    (
        "plane-algebra",
        Kind::Algebra,
        &[("k", "-1")],
        Source::ScalarStructure,
        "complex (k=-1), dual (k=0), split-complex (k=1) plane",
    ),
    (
        "plane-ring",
        Kind::Ring,
        &[("k", "-1")],
        Source::ScalarStructure,
        "ring of the plane algebra",
    ),
    (
        "tri-algebra",
        Kind::Algebra,
        &[],
        Source::ScalarStructure,
        "non-commutative algebra on Q^3",
    ),
    (
        "tri-ring",
        Kind::Ring,
        &[],
        Source::ScalarStructure,
        "upper triangular 2x2 matrices as Q^3",
    ),
    (
        "intro-target-algebra",
        Kind::Algebra,
        &[],
        Source::ScalarStructure,
        "[-1, 5] with (c + 5a)/6 + b(c - a)/6",
    ),
    (
        "intro-line-algebra",
        Kind::Algebra,
        &[],
        Source::ScalarStructure,
        "Q with (c + 5a)/6 + b(c - a)/6, 2 = 11",
    ),
    (
        "canonical-space",
        Kind::Space,
        &[("n", "2"), ("scalars", "line")],
        Source::SpaceExample,
        "x + a(y - x) on Q^n",
    ),
    (
        "zmod-space",
        Kind::Space,
        &[("m", "3"), ("dim", "2")],
        Source::SpaceExample,
        "x + a(y - x) on Z_m^dim",
    ),
    (
        "projectile-space",
        Kind::Space,
        &[("n", "1"), ("k", "1")],
        Source::SpaceExample,
        "projectile paths on Q^(n+1)",
    ),
    (
        "damped-space",
        Kind::Space,
        &[("n", "1"), ("alpha", "1")],
        Source::SpaceExample,
        "critically damped paths on doubles",
    ),
    (
        "transported-space",
        Kind::Space,
        &[("n", "1"), ("lambda", "1"), ("K", "0,0,1"), ("alpha", "1")],
        Source::SpaceExample,
        "canonical space moved by (lambda(s) x - K(s), s); lambda=exp uses e^(alpha s)",
    ),
    (
        "halfplane-space",
        Kind::Space,
        &[("n", "1")],
        Source::SpaceExample,
        "Q^n x Q+ over the unit interval",
    ),
    (
        "lozenge-space",
        Kind::Space,
        &[("sqrt_k", "1"), ("sign", "plus")],
        Source::SpaceExample,
        "[0, 1] over the lozenge, a1 +- sqrt_k a2",
    ),
    (
        "plane-space",
        Kind::Space,
        &[("k", "-1")],
        Source::SpaceExample,
        "x + (a1 + h a2)(y - x), h^2 = k",
    ),
    (
        "tri-space",
        Kind::Space,
        &[],
        Source::SpaceExample,
        "Q^2 over the non-commutative algebra",
    ),
    (
        "nonaffine-complex-space",
        Kind::Space,
        &[("n", "1")],
        Source::SpaceExample,
        "QI^n x Q, not affine (known probe)",
    ),
    (
        "nonaffine-poly-space",
        Kind::Space,
        &[("n", "1")],
        Source::SpaceExample,
        "Q^(n+1) with a rational weight, not affine",
    ),
    (
        "intro-line-space",
        Kind::Space,
        &[],
        Source::SpaceExample,
        "x + ((a + 1)/6)(y - x) over intro-line-algebra",
    ),
    (
        "canonical-module",
        Kind::Module,
        &[("n", "2")],
        Source::DerivedModule,
        "Q^n over Q",
    ),
    (
        "zmod-module",
        Kind::Module,
        &[("m", "3"), ("dim", "2")],
        Source::DerivedModule,
        "Z_m^dim over Z_m",
    ),
    (
        "projectile-module",
        Kind::Module,
        &[("n", "1"), ("k", "1")],
        Source::DerivedModule,
        "module of the projectile space at origin 0",
    ),
    (
        "damped-module",
        Kind::Module,
        &[("n", "1"), ("alpha", "1")],
        Source::DerivedModule,
        "module of the damped space at origin 0",
    ),
    (
        "plane-module",
        Kind::Module,
        &[("k", "-1")],
        Source::DerivedModule,
        "x1 + h x2 over the plane ring",
    ),
    (
        "tri-module",
        Kind::Module,
        &[],
        Source::DerivedModule,
        "Q^2 over the triangular ring",
    ),
];

/// All entries in a fixed order: scalar structures, spaces, modules.
pub fn list_catalog() -> Vec<CatalogEntry> {
    ENTRIES
        .iter()
        .map(|(name, kind, params, source, summary)| CatalogEntry {
            name,
            kind: *kind,
            params: params
                .iter()
                .map(|(name, default)| ParamSpec { name, default })
                .collect(),
            source: *source,
            summary,
        })
        .collect()
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    list_catalog().into_iter().find(|e| e.name == name)
}

/// `key=value` parameters; values are parsed on demand by the typed getters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceParams {
    values: BTreeMap<String, String>,
}

impl InstanceParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse<S: AsRef<str>>(pairs: &[S]) -> Result<Self, CatalogError> {
        let mut params = Self::new();
        for p in pairs {
            let (k, v) = p
                .as_ref()
                .split_once('=')
                .ok_or_else(|| invalid(p.as_ref(), "expected key=value"))?;
            params
                .values
                .insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(params)
    }

    pub fn set(mut self, key: &str, value: &str) -> Self {
        self.values.insert(key.to_string(), value.to_string());
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    fn raw<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.values.get(key).map(String::as_str).unwrap_or(default)
    }

    pub fn rational(&self, key: &str, default: &str) -> Result<Rational, CatalogError> {
        let raw = self.raw(key, default);
        parse_rational(raw).ok_or_else(|| invalid(key, format!("not a rational: {raw:?}")))
    }

    /// Comma-separated rationals.
    pub fn rationals(&self, key: &str, default: &str) -> Result<Vec<Rational>, CatalogError> {
        self.raw(key, default)
            .split(',')
            .map(|part| {
                parse_rational(part)
                    .ok_or_else(|| invalid(key, format!("not a rational: {part:?}")))
            })
            .collect()
    }

    pub fn float(&self, key: &str, default: &str) -> Result<f64, CatalogError> {
        let raw = self.raw(key, default);
        match raw.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(invalid(key, format!("not a finite number: {raw:?}"))),
        }
    }

    pub fn count(&self, key: &str, default: &str) -> Result<usize, CatalogError> {
        let raw = self.raw(key, default);
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(invalid(
                key,
                format!("expected a positive integer, got {raw:?}"),
            )),
        }
    }

    pub fn modulus(&self, key: &str, default: &str) -> Result<u64, CatalogError> {
        let raw = self.raw(key, default);
        raw.parse::<u64>()
            .map_err(|_| invalid(key, format!("expected a positive integer, got {raw:?}")))
    }

    pub fn text<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key, default)
    }
}

#[derive(Clone, Debug)]
pub enum Structure {
    Algebra(MobiAlgebra),
    Space(PointedMobiSpace),
    Ring(RingWithHalf),
    Module(RModule),
}

impl Structure {
    pub fn kind(&self) -> Kind {
        match self {
            Structure::Algebra(_) => Kind::Algebra,
            Structure::Space(_) => Kind::Space,
            Structure::Ring(_) => Kind::Ring,
            Structure::Module(_) => Kind::Module,
        }
    }
}

/// Build a catalog entry by name. Parameters not declared by the entry are
/// rejected; missing ones take the listed defaults.
pub fn build(name: &str, params: &InstanceParams) -> Result<Structure, CatalogError> {
    let spec = entry(name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    for key in params.keys() {
        if !spec.params.iter().any(|p| p.name == key) {
            return Err(invalid(key, format!("not a parameter of {name}")));
        }
    }
    let default = |key: &str| {
        spec.params
            .iter()
            .find(|p| p.name == key)
            .map(|p| p.default)
            .unwrap_or("")
    };
    let n = || params.count("n", default("n"));
    let m = || params.modulus("m", default("m"));
    let k = || params.rational("k", default("k"));
    let alpha = || params.float("alpha", default("alpha"));
    let sqrt_k = || params.rational("sqrt_k", default("sqrt_k"));
    use Structure::*;
    Ok(match name {
        "canonical-interval-algebra" => Algebra(canonical_interval_algebra()),
        "rational-line-algebra" => Algebra(rational_line_algebra()),
        "float-line-algebra" => Algebra(float_line_algebra()),
        "rational-ring" => Ring(rational_ring()),
        "zmod-ring" => {
            let m = m()?;
            check_modulus(m)?;
            Ring(zmod_ring(m)?)
        }
        "zmod-algebra" => Algebra(zmod_algebra(m()?)?),
        "lozenge-algebra" => Algebra(lozenge_algebra(sqrt_k()?)?),
        "plane-algebra" => Algebra(plane_algebra(k()?)),
        "plane-ring" => Ring(plane_ring(k()?)),
        "tri-algebra" => Algebra(tri_algebra()),
        "tri-ring" => Ring(tri_ring()),
        "intro-target-algebra" => Algebra(intro_morphism().1),
        "intro-line-algebra" => Algebra(intro_line_algebra()),
        "canonical-space" => {
            let scalars = match params.text("scalars", default("scalars")) {
                "line" => Scalars::Line,
                "interval" => Scalars::Interval,
                other => {
                    return Err(invalid(
                        "scalars",
                        format!("expected line or interval, got {other:?}"),
                    ))
                }
            };
            Space(canonical_space(n()?, scalars))
        }
        "zmod-space" => Space(zmod_space(m()?, params.count("dim", default("dim"))?)?),
        "projectile-space" => {
            let n = n()?;
            let k = params.rationals("k", default("k"))?;
            check_k(&k, n)?;
            Space(projectile_space(n, &k))
        }
        "damped-space" => Space(damped_space(n()?, alpha()?)),
        "transported-space" => {
            let n = n()?;
            if params.text("lambda", default("lambda")) == "exp" {
                Space(transported_exp_space(n, alpha()?)?)
            } else {
                let lambda = params.rationals("lambda", default("lambda"))?;
                let kp = params.rationals("K", default("K"))?;
                Space(transported_space(n, &lambda, &kp)?)
            }
        }
        "halfplane-space" => Space(halfplane_space(n()?)),
        "lozenge-space" => {
            let sign = match params.text("sign", default("sign")) {
                "plus" | "+" => Sign::Plus,
                "minus" | "-" => Sign::Minus,
                other => {
                    return Err(invalid(
                        "sign",
                        format!("expected plus or minus, got {other:?}"),
                    ))
                }
            };
            Space(lozenge_space(sqrt_k()?, sign)?)
        }
        "plane-space" => Space(plane_space(k()?)),
        "tri-space" => Space(tri_space()),
        "nonaffine-complex-space" => Space(nonaffine_complex_space(n()?)),
        "nonaffine-poly-space" => Space(nonaffine_poly_space(n()?)),
        "intro-line-space" => Space(intro_line_spaces().1),
        "canonical-module" => Module(canonical_module(n()?)),
        "zmod-module" => Module(zmod_module(m()?, params.count("dim", default("dim"))?)?),
        "projectile-module" => {
            let n = n()?;
            let k = params.rationals("k", default("k"))?;
            check_k(&k, n)?;
            Module(projectile_module(n, &k))
        }
        "damped-module" => Module(damped_module(n()?, alpha()?)),
        "plane-module" => Module(plane_module(k()?)),
        "tri-module" => Module(tri_module()),
        other => return Err(CatalogError::UnknownName(other.to_string())),
    })
}
