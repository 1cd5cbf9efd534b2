//! Mobi spaces `(X, q)` over a mobi algebra: axioms X1–X5, the affine
//! condition, the derived identities Y1–Y10, morphisms, transport of
//! structure along a bijection and geodesic tracing.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::MobiAlgebra;
use crate::carrier::{Carrier, Element};
use crate::check::{
    check_cancellation, check_law, compare, probes_for, CheckReport, Constructors, Outcome, Probe,
    Strategy,
};
use crate::error::EvalError;
use crate::number::{rat, sub_seed, Rational};
use crate::{TernaryOp, UnaryOp};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("origin {0} is not a member of the point carrier")]
    NonMemberOrigin(String),
    #[error("transport maps are not mutually inverse at {0}")]
    NotInverse(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone)]
pub struct MobiSpace {
    pub name: String,
    pub algebra: MobiAlgebra,
    pub points: Carrier,
    q: TernaryOp,
    pub probes: Vec<Probe>,
}

impl fmt::Debug for MobiSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MobiSpace")
            .field("name", &self.name)
            .field("algebra", &self.algebra.name)
            .field("points", &self.points.to_string())
            .finish()
    }
}

impl MobiSpace {
    pub fn new(
        name: impl Into<String>,
        algebra: MobiAlgebra,
        points: Carrier,
        q: impl Fn(&Element, &Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
    ) -> Self {
        MobiSpace {
            name: name.into(),
            algebra,
            points,
            q: Arc::new(q),
            probes: Vec::new(),
        }
    }

    pub fn with_probe(mut self, law: &str, assignment: Vec<Element>) -> Self {
        self.probes.push(Probe {
            law: law.to_string(),
            assignment,
        });
        self
    }

    /// `q(x, a, y)` without membership checks.
    pub fn q(&self, x: &Element, a: &Element, y: &Element) -> Result<Element, EvalError> {
        (self.q)(x, a, y)
    }

    pub fn operation(&self) -> TernaryOp {
        self.q.clone()
    }

    pub fn eval_q(&self, x: &Element, a: &Element, y: &Element) -> Result<Element, EvalError> {
        for (label, v, c) in [
            ("x", x, &self.points),
            ("a", a, &self.algebra.carrier),
            ("y", y, &self.points),
        ] {
            if !c.contains(v) {
                return Err(EvalError::NonMember {
                    what: label.to_string(),
                    value: v.to_string(),
                });
            }
        }
        let out = self.q(x, a, y)?;
        if !self.points.contains(&out) {
            return Err(EvalError::NonMember {
                what: "q(x,a,y)".to_string(),
                value: out.to_string(),
            });
        }
        Ok(out)
    }

    fn law(
        &self,
        id: &str,
        vars: &[(&'static str, Kind)],
        strategy: Strategy,
        constructors: &Constructors<'_>,
        eval: impl Fn(&[Element]) -> Result<Outcome, EvalError>,
    ) -> CheckReport {
        let vars: Vec<(&str, &Carrier)> = vars
            .iter()
            .map(|(n, k)| {
                let c = match k {
                    Kind::Point => &self.points,
                    Kind::Scalar => &self.algebra.carrier,
                };
                (*n, c)
            })
            .collect();
        check_law(
            id,
            &vars,
            strategy,
            &probes_for(&self.probes, id),
            constructors,
            eval,
        )
    }

    fn equation(
        &self,
        id: &str,
        vars: &[(&'static str, Kind)],
        strategy: Strategy,
        sides: impl Fn(&[Element]) -> Result<(Element, Element), EvalError>,
    ) -> CheckReport {
        self.law(id, vars, strategy, &[], |v| {
            compare(&self.points, [sides(v)?])
        })
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Point,
    Scalar,
}
use Kind::{Point as P, Scalar as S};

#[derive(Clone, Debug)]
pub struct PointedMobiSpace {
    pub space: MobiSpace,
    pub origin: Element,
}

impl PointedMobiSpace {
    pub fn new(space: MobiSpace, origin: Element) -> Result<Self, SpaceError> {
        if !space.points.contains(&origin) {
            return Err(SpaceError::NonMemberOrigin(origin.to_string()));
        }
        Ok(PointedMobiSpace { space, origin })
    }

    pub fn name(&self) -> &str {
        &self.space.name
    }
}

/// Closure of `q` and the axioms X1–X5.
pub fn check_space(s: &MobiSpace, strategy: Strategy) -> Vec<CheckReport> {
    let a = &s.algebra;
    let (zero, half, one) = (&a.zero, &a.half, &a.one);
    vec![
        s.law(
            "closure",
            &[("x", P), ("a", S), ("y", P)],
            strategy,
            &[],
            |v| {
                let out = s.q(&v[0], &v[1], &v[2])?;
                Ok(if s.points.contains(&out) {
                    Outcome::Holds
                } else {
                    Outcome::Violated {
                        lhs: out,
                        rhs: None,
                    }
                })
            },
        ),
        s.equation("X1", &[("x", P), ("y", P)], strategy, |v| {
            Ok((s.q(&v[0], zero, &v[1])?, v[0].clone()))
        }),
        s.equation("X2", &[("y", P), ("x", P)], strategy, |v| {
            Ok((s.q(&v[0], one, &v[1])?, v[1].clone()))
        }),
        s.equation("X3", &[("x", P), ("a", S)], strategy, |v| {
            Ok((s.q(&v[0], &v[1], &v[0])?, v[0].clone()))
        }),
        check_cancellation(
            "X4",
            &[("x", &s.points)],
            ("y", &s.points),
            &s.points,
            strategy,
            |o, y| s.q(&o[0], half, y),
        ),
        s.equation(
            "X5",
            &[("x", P), ("a", S), ("b", S), ("c", S), ("y", P)],
            strategy,
            |v| {
                let (x, a_, b, c, y) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
                let lhs = s.q(&s.q(x, a_, y)?, b, &s.q(x, c, y)?)?;
                let rhs = s.q(x, &a.p(a_, b, c)?, y)?;
                Ok((lhs, rhs))
            },
        ),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineMode {
    /// The condition with `1/2` as the outer scalar.
    Half,
    /// The outer `1/2` replaced by a second scalar `b` on both sides.
    General,
}

impl AffineMode {
    pub fn law_id(self) -> &'static str {
        match self {
            AffineMode::Half => "affine",
            AffineMode::General => "affine-general",
        }
    }
}

/// A violating assignment of the affine condition.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineWitness {
    pub x1: Element,
    pub y1: Element,
    pub x2: Element,
    pub y2: Element,
    pub a: Element,
    pub b: Option<Element>,
    pub lhs: Element,
    pub rhs: Element,
    pub difference: Option<Element>,
}

/// Check `q(q(x1,a,y1),b,q(x2,a,y2)) = q(q(x1,b,x2),a,q(y1,b,y2))` with
/// `b = 1/2` or `b` sampled. Variables are ordered `x1, y1, x2, y2, a[, b]`.
pub fn check_affine(
    s: &MobiSpace,
    strategy: Strategy,
    mode: AffineMode,
) -> (CheckReport, Option<AffineWitness>) {
    let half = &s.algebra.half;
    let mut vars = vec![("x1", P), ("y1", P), ("x2", P), ("y2", P), ("a", S)];
    if mode == AffineMode::General {
        vars.push(("b", S));
    }
    let report = s.law(mode.law_id(), &vars, strategy, &[], |v| {
        let (x1, y1, x2, y2, a) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
        let b = v.get(5).unwrap_or(half);
        let lhs = s.q(&s.q(x1, a, y1)?, b, &s.q(x2, a, y2)?)?;
        let rhs = s.q(&s.q(x1, b, x2)?, a, &s.q(y1, b, y2)?)?;
        compare(&s.points, [(lhs, rhs)])
    });
    let witness = report.witness.as_ref().map(|w| {
        let get = |n: &str| w.input(n).cloned().expect("affine witness input");
        AffineWitness {
            x1: get("x1"),
            y1: get("y1"),
            x2: get("x2"),
            y2: get("y2"),
            a: get("a"),
            b: w.input("b").cloned(),
            lhs: w.lhs.clone(),
            rhs: w.rhs.clone().expect("affine witness has both sides"),
            difference: w.difference.clone(),
        }
    });
    (report, witness)
}

/// The identities Y1–Y10 that hold in every mobi space. Y9 and Y10 are
/// implications; their premises are forced on extra assignments with
/// `y := x`, `a := 1/2` (Y9) and `y := x`, `b := a` (Y10).
pub fn check_y_properties(s: &MobiSpace, strategy: Strategy) -> Vec<CheckReport> {
    let alg = &s.algebra;
    let half = &alg.half;
    let xay = [("x", P), ("a", S), ("y", P)];
    let xaby = [("x", P), ("a", S), ("b", S), ("y", P)];
    let mut reports = vec![
        s.equation("Y1", &xay, strategy, |v| {
            let (x, a, y) = (&v[0], &v[1], &v[2]);
            Ok((s.q(y, a, x)?, s.q(x, &alg.complement(a)?, y)?))
        }),
        s.equation("Y2", &[("x", P), ("y", P)], strategy, |v| {
            Ok((s.q(&v[1], half, &v[0])?, s.q(&v[0], half, &v[1])?))
        }),
        s.equation("Y3", &xaby, strategy, |v| {
            let (x, a, b, y) = (&v[0], &v[1], &v[2], &v[3]);
            Ok((s.q(x, a, &s.q(x, b, y)?)?, s.q(x, &alg.product(a, b)?, y)?))
        }),
        s.equation("Y4", &xaby, strategy, |v| {
            let (x, a, b, y) = (&v[0], &v[1], &v[2], &v[3]);
            Ok((s.q(&s.q(x, a, y)?, b, y)?, s.q(x, &alg.circ(a, b)?, y)?))
        }),
        s.equation("Y5", &xaby, strategy, |v| {
            let (x, a, b, y) = (&v[0], &v[1], &v[2], &v[3]);
            Ok((
                s.q(&s.q(x, a, y)?, half, &s.q(x, b, y)?)?,
                s.q(x, &alg.oplus(a, b)?, y)?,
            ))
        }),
        s.equation("Y6", &xay, strategy, |v| {
            let (x, a, y) = (&v[0], &v[1], &v[2]);
            Ok((s.q(x, half, &s.q(x, a, y)?)?, s.q(x, a, &s.q(x, half, y)?)?))
        }),
        s.equation("Y7", &xay, strategy, |v| {
            let (x, a, y) = (&v[0], &v[1], &v[2]);
            Ok((s.q(&s.q(x, a, y)?, half, &s.q(y, a, x)?)?, s.q(x, half, y)?))
        }),
        s.equation(
            "Y8",
            &[("x", P), ("a", S), ("b", S), ("c", S), ("y", P)],
            strategy,
            |v| {
                let (x, a, b, c, y) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
                let lhs = s.q(
                    &s.q(&s.q(x, a, y)?, b, x)?,
                    half,
                    &s.q(x, b, &s.q(x, c, y)?)?,
                )?;
                let rhs = s.q(x, half, &s.q(x, &alg.p(a, b, c)?, y)?)?;
                Ok((lhs, rhs))
            },
        ),
    ];
    {
        let same = |v: &mut Vec<Element>| v[2] = v[0].clone();
        let halve = |v: &mut Vec<Element>| v[1] = half.clone();
        reports.push(s.law("Y9", &xay, strategy, &[&same, &halve], |v| {
            let (x, a, y) = (&v[0], &v[1], &v[2]);
            let forward = s.q(x, a, y)?;
            if !s.points.eq(&forward, &s.q(y, a, x)?)? {
                return Ok(Outcome::Vacuous);
            }
            compare(&s.points, [(forward, s.q(x, half, y)?)])
        }));
    }
    {
        let vars = [("x", P), ("a", S), ("b", S), ("t", S), ("y", P)];
        let same = |v: &mut Vec<Element>| v[4] = v[0].clone();
        let equal = |v: &mut Vec<Element>| v[2] = v[1].clone();
        reports.push(s.law("Y10", &vars, strategy, &[&same, &equal], |v| {
            let (x, a, b, t, y) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
            let at_a = s.q(x, a, y)?;
            if !s.points.eq(&at_a, &s.q(x, b, y)?)? {
                return Ok(Outcome::Vacuous);
            }
            compare(&s.points, [(s.q(x, &alg.p(a, t, b)?, y)?, at_a)])
        }));
    }
    reports
}

/// `g(q(x,a,y)) = q'(g x, f a, g y)`.
pub fn check_space_morphism(
    f: &UnaryOp,
    g: &UnaryOp,
    source: &MobiSpace,
    target: &MobiSpace,
    strategy: Strategy,
) -> CheckReport {
    let vars = [
        ("x", &source.points),
        ("a", &source.algebra.carrier),
        ("y", &source.points),
    ];
    check_law("preserves-q", &vars, strategy, &[], &[], |v| {
        let (x, a, y) = (&v[0], &v[1], &v[2]);
        let lhs = g(&source.q(x, a, y)?)?;
        let rhs = target.q(&g(x)?, &f(a)?, &g(y)?)?;
        compare(&target.points, [(lhs, rhs)])
    })
}

const TRANSPORT_SPOT_CHECKS: usize = 50;

/// The space `q'(u,a,v) = F(q(F^-1 u, a, F^-1 v))` on `points`, after
/// spot-checking that `F` and `F^-1` are mutually inverse on samples from
/// both sides.
pub fn transport_space(
    s: &MobiSpace,
    name: impl Into<String>,
    points: Carrier,
    forward: UnaryOp,
    inverse: UnaryOp,
) -> Result<MobiSpace, SpaceError> {
    let spot = |carrier: &Carrier, there: &UnaryOp, back: &UnaryOp, label: &str| {
        let samples = carrier
            .sample(sub_seed(0, label), TRANSPORT_SPOT_CHECKS)
            .map_err(EvalError::from)?;
        for x in samples {
            let round = back(&there(&x)?)?;
            if !carrier.eq(&round, &x).map_err(EvalError::from)? {
                return Err(SpaceError::NotInverse(x.to_string()));
            }
        }
        Ok(())
    };
    spot(&s.points, &forward, &inverse, "transport/source")?;
    spot(&points, &inverse, &forward, "transport/target")?;
    let q = s.operation();
    Ok(MobiSpace::new(
        name,
        s.algebra.clone(),
        points,
        move |u, a, v| forward(&q(&inverse(u)?, a, &inverse(v)?)?),
    ))
}

/// Scalars `k/N`, `k = 0..=N`, embedded as `(k/N) * 1` in the algebra's
/// carrier and kept only when they are members.
pub fn default_grid(steps: usize, algebra: &MobiAlgebra) -> Vec<Element> {
    labelled_grid(steps, algebra)
        .into_iter()
        .map(|(_, e)| e)
        .collect()
}

/// [`default_grid`] with each scalar's parameter `k/N` alongside.
pub fn labelled_grid(steps: usize, algebra: &MobiAlgebra) -> Vec<(Rational, Element)> {
    if steps == 0 {
        return vec![(Rational::zero(), algebra.zero.clone())];
    }
    (0..=steps)
        .filter_map(|k| {
            let t = rat(k as i64, steps as i64);
            let value = if t.is_zero() {
                algebra.zero.clone()
            } else {
                algebra.carrier.coerce(algebra.one.scale(&t).ok()?).ok()?
            };
            algebra.carrier.contains(&value).then_some((t, value))
        })
        .collect()
}

/// Rows `(t, q(x, t, y))` in grid order.
pub fn trace_geodesic(
    s: &MobiSpace,
    x: &Element,
    y: &Element,
    grid: &[Element],
) -> Result<Vec<(Element, Element)>, EvalError> {
    grid.iter()
        .map(|t| Ok((t.clone(), s.eval_q(x, t, y)?)))
        .collect()
}
