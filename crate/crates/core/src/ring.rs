//! Unitary rings with a designated one half, and modules over them.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::carrier::{Carrier, Element};
use crate::check::{check_law, compare, CheckReport, Outcome, Strategy};
use crate::error::EvalError;
use crate::{BinaryOp, UnaryOp};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RingError {
    #[error("claimed half {half} gives half + half = {sum}, not 1")]
    HalfNotSolution { half: String, sum: String },
    #[error("x + x = 1 has no solution in {0}")]
    NoHalf(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone)]
pub struct RingWithHalf {
    pub name: String,
    pub carrier: Carrier,
    add: BinaryOp,
    mul: BinaryOp,
    neg: UnaryOp,
    pub zero: Element,
    pub one: Element,
    pub half: Element,
}

impl fmt::Debug for RingWithHalf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingWithHalf")
            .field("name", &self.name)
            .field("carrier", &self.carrier.to_string())
            .field("half", &self.half.to_string())
            .finish()
    }
}

impl RingWithHalf {
    /// Builds the ring after checking `half + half = one`. On a finite carrier
    /// a failed check scans for any solution of `x + x = 1` to tell a wrong
    /// claim apart from a ring that has no half at all.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        carrier: Carrier,
        add: impl Fn(&Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        mul: impl Fn(&Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        neg: impl Fn(&Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        zero: Element,
        one: Element,
        half: Element,
    ) -> Result<Self, RingError> {
        let ring = Self::new_unchecked(name, carrier, add, mul, neg, zero, one, half);
        let sum = ring.add(&ring.half, &ring.half)?;
        if ring.carrier.eq(&sum, &ring.one).map_err(EvalError::from)? {
            return Ok(ring);
        }
        if ring.carrier.is_finite() {
            let any = ring
                .carrier
                .enumerate()
                .map_err(EvalError::from)?
                .into_iter()
                .map(|x| ring.add(&x, &x))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .any(|d| ring.carrier.eq(&d, &ring.one).unwrap_or(false));
            if !any {
                return Err(RingError::NoHalf(ring.carrier.to_string()));
            }
        }
        Err(RingError::HalfNotSolution {
            half: ring.half.to_string(),
            sum: sum.to_string(),
        })
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new_unchecked(
        name: impl Into<String>,
        carrier: Carrier,
        add: impl Fn(&Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        mul: impl Fn(&Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        neg: impl Fn(&Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        zero: Element,
        one: Element,
        half: Element,
    ) -> Self {
        RingWithHalf {
            name: name.into(),
            carrier,
            add: Arc::new(add),
            mul: Arc::new(mul),
            neg: Arc::new(neg),
            zero,
            one,
            half,
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, EvalError> {
        (self.add)(a, b)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, EvalError> {
        (self.mul)(a, b)
    }

    pub fn neg(&self, a: &Element) -> Result<Element, EvalError> {
        (self.neg)(a)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element, EvalError> {
        self.add(a, &self.neg(b)?)
    }
}

#[derive(Clone)]
pub struct RModule {
    pub name: String,
    pub ring: RingWithHalf,
    pub points: Carrier,
    add: BinaryOp,
    neg: Option<UnaryOp>,
    pub zero_point: Element,
    phi: BinaryOp,
}

impl fmt::Debug for RModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RModule")
            .field("name", &self.name)
            .field("ring", &self.ring.name)
            .field("points", &self.points.to_string())
            .field("zero_point", &self.zero_point.to_string())
            .finish()
    }
}

impl RModule {
    pub fn new(
        name: impl Into<String>,
        ring: RingWithHalf,
        points: Carrier,
        add: impl Fn(&Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        zero_point: Element,
        phi: impl Fn(&Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
    ) -> Self {
        RModule {
            name: name.into(),
            ring,
            points,
            add: Arc::new(add),
            neg: None,
            zero_point,
            phi: Arc::new(phi),
        }
    }

    pub fn with_neg(
        mut self,
        neg: impl Fn(&Element) -> Result<Element, EvalError> + Send + Sync + 'static,
    ) -> Self {
        self.neg = Some(Arc::new(neg));
        self
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element, EvalError> {
        (self.add)(x, y)
    }

    /// Scalar action `phi_a(x)`.
    pub fn phi(&self, a: &Element, x: &Element) -> Result<Element, EvalError> {
        (self.phi)(a, x)
    }

    /// Declared additive inverse, or one found by scanning a finite carrier.
    pub fn neg(&self, x: &Element) -> Result<Option<Element>, EvalError> {
        if let Some(neg) = &self.neg {
            return neg(x).map(Some);
        }
        if !self.points.is_finite() {
            return Ok(None);
        }
        for y in self.points.enumerate()? {
            if self.points.eq(&self.add(x, &y)?, &self.zero_point)? {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }
}

fn binary_law(
    id: &str,
    carrier: &Carrier,
    vars: &[&'static str],
    strategy: Strategy,
    sides: impl Fn(&[Element]) -> Result<Vec<(Element, Element)>, EvalError>,
) -> CheckReport {
    let vars: Vec<(&str, &Carrier)> = vars.iter().map(|v| (*v, carrier)).collect();
    check_law(id, &vars, strategy, &[], &[], |v| {
        compare(carrier, sides(v)?)
    })
}

/// Abelian group laws of `+`, associativity and units of `*`, both
/// distributive laws and `half + half = one`. Commutativity of `*` is
/// reported as informational.
pub fn check_ring(r: &RingWithHalf, strategy: Strategy) -> Vec<CheckReport> {
    let c = &r.carrier;
    vec![
        binary_law("add-assoc", c, &["a", "b", "c"], strategy, |v| {
            Ok(vec![(
                r.add(&r.add(&v[0], &v[1])?, &v[2])?,
                r.add(&v[0], &r.add(&v[1], &v[2])?)?,
            )])
        }),
        binary_law("add-comm", c, &["a", "b"], strategy, |v| {
            Ok(vec![(r.add(&v[0], &v[1])?, r.add(&v[1], &v[0])?)])
        }),
        binary_law("add-identity", c, &["a"], strategy, |v| {
            Ok(vec![
                (r.add(&v[0], &r.zero)?, v[0].clone()),
                (r.add(&r.zero, &v[0])?, v[0].clone()),
            ])
        }),
        binary_law("add-inverse", c, &["a"], strategy, |v| {
            Ok(vec![(r.add(&v[0], &r.neg(&v[0])?)?, r.zero.clone())])
        }),
        binary_law("mul-assoc", c, &["a", "b", "c"], strategy, |v| {
            Ok(vec![(
                r.mul(&r.mul(&v[0], &v[1])?, &v[2])?,
                r.mul(&v[0], &r.mul(&v[1], &v[2])?)?,
            )])
        }),
        binary_law("mul-unit", c, &["a"], strategy, |v| {
            Ok(vec![
                (r.mul(&r.one, &v[0])?, v[0].clone()),
                (r.mul(&v[0], &r.one)?, v[0].clone()),
            ])
        }),
        binary_law("left-distrib", c, &["a", "b", "c"], strategy, |v| {
            Ok(vec![(
                r.mul(&v[0], &r.add(&v[1], &v[2])?)?,
                r.add(&r.mul(&v[0], &v[1])?, &r.mul(&v[0], &v[2])?)?,
            )])
        }),
        binary_law("right-distrib", c, &["a", "b", "c"], strategy, |v| {
            Ok(vec![(
                r.mul(&r.add(&v[0], &v[1])?, &v[2])?,
                r.add(&r.mul(&v[0], &v[2])?, &r.mul(&v[1], &v[2])?)?,
            )])
        }),
        binary_law("half", c, &[], strategy, |_| {
            Ok(vec![(r.add(&r.half, &r.half)?, r.one.clone())])
        }),
        binary_law("mul-comm", c, &["a", "b"], strategy, |v| {
            Ok(vec![(r.mul(&v[0], &v[1])?, r.mul(&v[1], &v[0])?)])
        })
        .informational(),
    ]
}

/// Abelian group laws of the points and the ring-homomorphism laws of `phi`.
pub fn check_module(m: &RModule, strategy: Strategy) -> Vec<CheckReport> {
    let pts = &m.points;
    let sc = &m.ring.carrier;
    let e = &m.zero_point;
    let r = &m.ring;
    type Sides<'a> = dyn Fn(&[Element]) -> Result<Vec<(Element, Element)>, EvalError> + 'a;
    let law = |id: &str, vars: &[(&'static str, &Carrier)], sides: &Sides<'_>| {
        check_law(id, vars, strategy, &[], &[], |v| compare(pts, sides(v)?))
    };
    vec![
        law("add-assoc", &[("x", pts), ("y", pts), ("z", pts)], &|v| {
            Ok(vec![(
                m.add(&m.add(&v[0], &v[1])?, &v[2])?,
                m.add(&v[0], &m.add(&v[1], &v[2])?)?,
            )])
        }),
        law("add-comm", &[("x", pts), ("y", pts)], &|v| {
            Ok(vec![(m.add(&v[0], &v[1])?, m.add(&v[1], &v[0])?)])
        }),
        law("add-identity", &[("x", pts)], &|v| {
            Ok(vec![
                (m.add(e, &v[0])?, v[0].clone()),
                (m.add(&v[0], e)?, v[0].clone()),
            ])
        }),
        check_law(
            "add-inverse",
            &[("x", pts)],
            strategy,
            &[],
            &[],
            |v| match m.neg(&v[0])? {
                Some(y) => compare(pts, [(m.add(&v[0], &y)?, e.clone())]),
                None => Ok(Outcome::Violated {
                    lhs: v[0].clone(),
                    rhs: None,
                }),
            },
        ),
        law("phi-additive", &[("a", sc), ("x", pts), ("y", pts)], &|v| {
            let (a, x, y) = (&v[0], &v[1], &v[2]);
            Ok(vec![(
                m.phi(a, &m.add(x, y)?)?,
                m.add(&m.phi(a, x)?, &m.phi(a, y)?)?,
            )])
        }),
        law(
            "phi-scalar-add",
            &[("a", sc), ("b", sc), ("x", pts)],
            &|v| {
                let (a, b, x) = (&v[0], &v[1], &v[2]);
                Ok(vec![(
                    m.phi(&r.add(a, b)?, x)?,
                    m.add(&m.phi(a, x)?, &m.phi(b, x)?)?,
                )])
            },
        ),
        law(
            "phi-scalar-mul",
            &[("a", sc), ("b", sc), ("x", pts)],
            &|v| {
                let (a, b, x) = (&v[0], &v[1], &v[2]);
                Ok(vec![(m.phi(&r.mul(a, b)?, x)?, m.phi(a, &m.phi(b, x)?)?)])
            },
        ),
        law("phi-unit", &[("x", pts)], &|v| {
            Ok(vec![(m.phi(&r.one, &v[0])?, v[0].clone())])
        }),
        law("phi-zero", &[("x", pts)], &|v| {
            Ok(vec![(m.phi(&r.zero, &v[0])?, e.clone())])
        }),
    ]
}

/// Check that no sampled point other than `zero_point` acts as an additive
/// identity for the sampled points.
pub fn check_identity_unique(m: &RModule, strategy: Strategy) -> CheckReport {
    let pts = &m.points;
    check_law(
        "identity-unique",
        &[("u", pts), ("x", pts)],
        strategy,
        &[],
        &[],
        |v| {
            let (u, x) = (&v[0], &v[1]);
            if pts.eq(u, &m.zero_point)? {
                return Ok(Outcome::Vacuous);
            }
            // u is not e, so u + x = x must fail for this x
            let sum = m.add(u, x)?;
            if pts.eq(&sum, x)? {
                return Ok(Outcome::Violated {
                    lhs: sum,
                    rhs: Some(x.clone()),
                });
            }
            Ok(Outcome::Holds)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::check::{all_pass, Verdict};

    #[test]
    fn zmod3_ring_passes() {
        let r = catalog::zmod_ring(3).unwrap();
        assert_eq!(r.half, Element::residue(2, 3));
        let reports = check_ring(&r, Strategy::Exhaustive);
        assert!(reports.iter().all(|r| r.passed()), "{reports:#?}");
    }

    #[test]
    fn tri_ring_is_not_commutative() {
        let r = catalog::tri_ring();
        let reports = check_ring(&r, Strategy::sampled(300, 0));
        assert!(all_pass(&reports), "{reports:#?}");
        let comm = reports.iter().find(|r| r.law == "mul-comm").unwrap();
        assert_eq!(comm.verdict, Verdict::Fail);
        assert!(!comm.required);
    }

    #[test]
    fn zmod4_has_no_half() {
        assert!(matches!(catalog::zmod_ring(4), Err(RingError::NoHalf(_))));
        let z4 = catalog::zmod_ring_with_half(4, 2);
        assert_eq!(z4.add(&z4.half, &z4.half).unwrap(), Element::residue(0, 4));
    }

    #[test]
    fn zmod3_square_module_passes_exhaustively() {
        let m = catalog::zmod_module(3, 2).unwrap();
        let reports = check_module(&m, Strategy::Exhaustive);
        assert!(all_pass(&reports), "{reports:#?}");
        let additive = reports.iter().find(|r| r.law == "phi-additive").unwrap();
        assert_eq!(additive.strategy.samples, 3 * 9 * 9);
        assert!(check_identity_unique(&m, Strategy::Exhaustive).passed());
    }

    #[test]
    fn projectile_module_passes_sampled() {
        let m = catalog::projectile_module(1, &[crate::number::int(1)]);
        let reports = check_module(&m, Strategy::sampled(500, 0));
        assert!(all_pass(&reports), "{reports:#?}");
    }

    #[test]
    fn inverse_by_scan_on_finite_points() {
        let base = catalog::zmod_module(3, 2).unwrap();
        let (b1, b2) = (base.clone(), base.clone());
        let m = RModule::new(
            "scan",
            base.ring.clone(),
            base.points.clone(),
            move |x, y| b1.add(x, y),
            base.zero_point.clone(),
            move |a, x| b2.phi(a, x),
        );
        let x = Element::Tuple(vec![Element::residue(1, 3), Element::residue(2, 3)]);
        let y = m.neg(&x).unwrap().unwrap();
        assert_eq!(
            y,
            Element::Tuple(vec![Element::residue(2, 3), Element::residue(1, 3)])
        );
    }
}
