//! The constructions between modules over a ring with one half and pointed
//! affine mobi spaces over a mobi algebra with 2, their round trips, and the
//! action of both constructions on morphisms.

use thiserror::Error;

use crate::algebra::{algebra_from_ring, check_algebra_morphism, AlgebraError, TwoElement};
use crate::carrier::{Carrier, Element};
use crate::check::{check_law, compare, CheckReport, Outcome, Strategy};
use crate::error::EvalError;
use crate::ring::RModule;
use crate::space::{check_space_morphism, MobiSpace, PointedMobiSpace, SpaceError};
use crate::UnaryOp;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctorError {
    #[error("the scalar ring has no verified one half: {0}")]
    NoHalf(#[from] AlgebraError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `q(x,a,y) = phi_{1-a}(x) + phi_a(y)` over the algebra `a + b*c - b*a`
/// of the module's ring, with the module's zero as origin.
pub fn module_to_space(m: &RModule) -> Result<PointedMobiSpace, FunctorError> {
    let algebra = algebra_from_ring(&m.ring)?;
    let module = m.clone();
    let space = MobiSpace::new(
        format!("space({})", m.name),
        algebra,
        m.points.clone(),
        move |x, a, y| {
            let r = &module.ring;
            let complement = r.sub(&r.one, a)?;
            module.add(&module.phi(&complement, x)?, &module.phi(a, y)?)
        },
    );
    Ok(PointedMobiSpace::new(space, m.zero_point.clone())?)
}

/// The module at origin `e`: `x + y = q(e,2,q(x,1/2,y))`, `phi_a(x) = q(e,a,x)`,
/// `-x = q(x,2,e)`, over the ring read off the algebra with `two`.
///
/// Affineness is not required; on a non-affine space the result is simply
/// not a module, which [`crate::ring::check_module`] then reports.
pub fn space_to_module(s: &PointedMobiSpace, two: &TwoElement) -> RModule {
    let ring = crate::algebra::ring_from_algebra(&s.space.algebra, two);
    let q = s.space.operation();
    let (e, half, two) = (
        s.origin.clone(),
        s.space.algebra.half.clone(),
        two.0.clone(),
    );
    let add = {
        let (q, e, half, two) = (q.clone(), e.clone(), half.clone(), two.clone());
        move |x: &Element, y: &Element| q(&e, &two, &q(x, &half, y)?)
    };
    let phi = {
        let (q, e) = (q.clone(), e.clone());
        move |a: &Element, x: &Element| q(&e, a, x)
    };
    let neg = {
        let (q, e, two) = (q.clone(), e.clone(), two.clone());
        move |x: &Element| q(x, &two, &e)
    };
    RModule::new(
        format!("module({})", s.space.name),
        ring,
        s.space.points.clone(),
        add,
        s.origin.clone(),
        phi,
    )
    .with_neg(neg)
}

/// Module -> space -> module reproduces `+` and `phi` pointwise.
pub fn roundtrip_module(m: &RModule, strategy: Strategy) -> CheckReport {
    const LAW: &str = "roundtrip-module";
    let back = module_to_space(m).and_then(|s| {
        let two = m.ring.add(&m.ring.one, &m.ring.one)?;
        Ok(space_to_module(&s, &TwoElement(two)))
    });
    let back = match back {
        Ok(b) => b,
        Err(e) => return error_report(LAW, e.to_string()),
    };
    let vars = [("a", &m.ring.carrier), ("x", &m.points), ("y", &m.points)];
    check_law(LAW, &vars, strategy, &[], &[], |v| {
        let (a, x, y) = (&v[0], &v[1], &v[2]);
        compare(
            &m.points,
            [
                (back.add(x, y)?, m.add(x, y)?),
                (back.phi(a, x)?, m.phi(a, x)?),
            ],
        )
    })
}

/// Space -> module -> space reproduces `q` pointwise.
pub fn roundtrip_space(s: &PointedMobiSpace, two: &TwoElement, strategy: Strategy) -> CheckReport {
    const LAW: &str = "roundtrip-space";
    let back = match module_to_space(&space_to_module(s, two)) {
        Ok(b) => b,
        Err(e) => return error_report(LAW, e.to_string()),
    };
    let sp = &s.space;
    let vars = [
        ("x", &sp.points),
        ("a", &sp.algebra.carrier),
        ("y", &sp.points),
    ];
    check_law(LAW, &vars, strategy, &[], &[], |v| {
        let (x, a, y) = (&v[0], &v[1], &v[2]);
        compare(&sp.points, [(back.space.q(x, a, y)?, sp.q(x, a, y)?)])
    })
}

fn error_report(law: &str, message: String) -> CheckReport {
    check_law(law, &[], Strategy::sampled(1, 0), &[], &[], |_| {
        Err(EvalError::Unsupported(message.clone()))
    })
}

/// A morphism: `scalar` acts on the rings or algebras, `point` on the
/// modules or spaces.
#[derive(Clone)]
pub struct MorphismPair {
    pub scalar: UnaryOp,
    pub point: UnaryOp,
}

impl MorphismPair {
    pub fn identity() -> Self {
        let id: UnaryOp = std::sync::Arc::new(|x: &Element| Ok(x.clone()));
        MorphismPair {
            scalar: id.clone(),
            point: id,
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &MorphismPair) -> MorphismPair {
        let (f1, f2) = (self.scalar.clone(), next.scalar.clone());
        let (g1, g2) = (self.point.clone(), next.point.clone());
        MorphismPair {
            scalar: std::sync::Arc::new(move |x: &Element| f2(&f1(x)?)),
            point: std::sync::Arc::new(move |x: &Element| g2(&g1(x)?)),
        }
    }
}

/// Ring homomorphism laws of `f`, and `g(e) = e`, additivity and
/// equivariance `g(phi_a x) = phi'_{f a}(g x)` of `g`.
pub fn check_module_morphism(
    pair: &MorphismPair,
    source: &RModule,
    target: &RModule,
    strategy: Strategy,
) -> Vec<CheckReport> {
    let (f, g) = (&pair.scalar, &pair.point);
    let (r, r2) = (&source.ring, &target.ring);
    let (sc, tc) = (&r.carrier, &r2.carrier);
    let (pts, tpts) = (&source.points, &target.points);
    vec![
        check_law(
            "f-additive",
            &[("a", sc), ("b", sc)],
            strategy,
            &[],
            &[],
            |v| {
                compare(
                    tc,
                    [(f(&r.add(&v[0], &v[1])?)?, r2.add(&f(&v[0])?, &f(&v[1])?)?)],
                )
            },
        ),
        check_law(
            "f-multiplicative",
            &[("a", sc), ("b", sc)],
            strategy,
            &[],
            &[],
            |v| {
                compare(
                    tc,
                    [(f(&r.mul(&v[0], &v[1])?)?, r2.mul(&f(&v[0])?, &f(&v[1])?)?)],
                )
            },
        ),
        check_law("f-unit", &[], strategy, &[], &[], |_| {
            compare(tc, [(f(&r.one)?, r2.one.clone())])
        }),
        check_law("g-origin", &[], strategy, &[], &[], |_| {
            compare(tpts, [(g(&source.zero_point)?, target.zero_point.clone())])
        }),
        check_law(
            "g-additive",
            &[("x", pts), ("y", pts)],
            strategy,
            &[],
            &[],
            |v| {
                compare(
                    tpts,
                    [(
                        g(&source.add(&v[0], &v[1])?)?,
                        target.add(&g(&v[0])?, &g(&v[1])?)?,
                    )],
                )
            },
        ),
        check_law(
            "g-equivariant",
            &[("a", sc), ("x", pts)],
            strategy,
            &[],
            &[],
            |v| {
                compare(
                    tpts,
                    [(
                        g(&source.phi(&v[0], &v[1])?)?,
                        target.phi(&f(&v[0])?, &g(&v[1])?)?,
                    )],
                )
            },
        ),
    ]
}

/// The two directions of the correspondence, with their endpoints.
pub enum Endpoints<'a> {
    /// A module morphism, checked as a morphism of the induced spaces.
    ModulesToSpaces {
        source: &'a RModule,
        target: &'a RModule,
    },
    /// A morphism of pointed spaces, checked as a morphism of the induced
    /// modules; the scalar map must also send 2 to 2.
    SpacesToModules {
        source: &'a PointedMobiSpace,
        source_two: &'a TwoElement,
        target: &'a PointedMobiSpace,
        target_two: &'a TwoElement,
    },
}

/// Check that `pair` is a morphism between the transported structures.
pub fn transport_morphism(
    pair: &MorphismPair,
    endpoints: Endpoints<'_>,
    strategy: Strategy,
) -> Vec<CheckReport> {
    match endpoints {
        Endpoints::ModulesToSpaces { source, target } => {
            let spaces = module_to_space(source).and_then(|s| Ok((s, module_to_space(target)?)));
            let (s, t) = match spaces {
                Ok(st) => st,
                Err(e) => return vec![error_report("transport", e.to_string())],
            };
            let mut reports =
                check_algebra_morphism(&pair.scalar, &s.space.algebra, &t.space.algebra, strategy);
            reports.push(check_space_morphism(
                &pair.scalar,
                &pair.point,
                &s.space,
                &t.space,
                strategy,
            ));
            reports
        }
        Endpoints::SpacesToModules {
            source,
            source_two,
            target,
            target_two,
        } => {
            let m = space_to_module(source, source_two);
            let m2 = space_to_module(target, target_two);
            let f = &pair.scalar;
            let tc = &target.space.algebra.carrier;
            let mut reports = check_module_morphism(pair, &m, &m2, strategy);
            reports.push(check_law("f-two", &[], strategy, &[], &[], |_| {
                compare(tc, [(f(&source_two.0)?, target_two.0.clone())])
            }));
            reports
        }
    }
}

/// Verdicts of the two module laws that fail off affine spaces, for one origin.
#[derive(Clone, Debug)]
pub struct OriginVerdict {
    pub origin: Element,
    pub associativity: CheckReport,
    pub phi_additive: CheckReport,
}

/// For each candidate origin, build the module at that origin and check
/// associativity of `+` and additivity of `phi`.
pub fn origin_scan(
    s: &MobiSpace,
    two: &TwoElement,
    origins: &[Element],
    strategy: Strategy,
) -> Result<Vec<OriginVerdict>, FunctorError> {
    origins
        .iter()
        .map(|e| {
            let pointed = PointedMobiSpace::new(s.clone(), e.clone())?;
            let m = space_to_module(&pointed, two);
            let pts: &Carrier = &m.points;
            let sc = &m.ring.carrier;
            let associativity = check_law(
                "add-assoc",
                &[("x", pts), ("y", pts), ("z", pts)],
                strategy,
                &[],
                &[],
                |v| {
                    compare(
                        pts,
                        [(
                            m.add(&m.add(&v[0], &v[1])?, &v[2])?,
                            m.add(&v[0], &m.add(&v[1], &v[2])?)?,
                        )],
                    )
                },
            );
            let phi_additive = check_law(
                "phi-additive",
                &[("a", sc), ("x", pts), ("y", pts)],
                strategy,
                &[],
                &[],
                |v| {
                    let (a, x, y) = (&v[0], &v[1], &v[2]);
                    let lhs = m.phi(a, &m.add(x, y)?)?;
                    let rhs = m.add(&m.phi(a, x)?, &m.phi(a, y)?)?;
                    if pts.eq(&lhs, &rhs)? {
                        Ok(Outcome::Holds)
                    } else {
                        Ok(Outcome::Violated {
                            lhs,
                            rhs: Some(rhs),
                        })
                    }
                },
            );
            Ok(OriginVerdict {
                origin: e.clone(),
                associativity,
                phi_additive,
            })
        })
        .collect()
}
