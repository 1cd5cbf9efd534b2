//! Mobi algebras: a carrier with a ternary operation `p` and constants
//! `0`, `1/2`, `1`, their derived operations, axiom and property checks,
//! the element `2` and the correspondence with rings that contain one half.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::carrier::{Carrier, Element};
use crate::check::{
    check_cancellation, check_law, compare, probes_for, CheckReport, Outcome, Probe, Strategy,
    Verdict, Witness,
};
use crate::error::EvalError;
use crate::ring::RingWithHalf;
use crate::{TernaryOp, UnaryOp};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("constant {name} = {value} is not a member of {carrier}")]
    NonMemberConstant {
        name: &'static str,
        value: String,
        carrier: String,
    },
    #[error("p(0,1/2,x) = 1 has several solutions ({0}); cancellation is suspect")]
    AmbiguousTwo(String),
    #[error("1/2 + 1/2 = {0}, not 1")]
    HalfNotSolution(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone)]
pub struct MobiAlgebra {
    pub name: String,
    pub carrier: Carrier,
    p: TernaryOp,
    pub zero: Element,
    pub half: Element,
    pub one: Element,
    /// A declared solution of `p(0,1/2,x) = 1`, verified by [`solve_two`].
    pub two: Option<Element>,
    pub probes: Vec<Probe>,
}

impl fmt::Debug for MobiAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MobiAlgebra")
            .field("name", &self.name)
            .field("carrier", &self.carrier.to_string())
            .field("zero", &self.zero.to_string())
            .field("half", &self.half.to_string())
            .field("one", &self.one.to_string())
            .finish()
    }
}

/// The solution of `p(0,1/2,x) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoElement(pub Element);

impl TwoElement {
    pub fn value(&self) -> &Element {
        &self.0
    }
}

/// Outcome of looking for the element 2.
#[derive(Clone, Debug, PartialEq)]
pub enum TwoSearch {
    Found(TwoElement),
    /// Finite carrier, every element tried.
    ProvenAbsent,
    /// Infinite carrier, no declared value and none among the scanned samples.
    NotFound {
        searched: usize,
    },
}

impl TwoSearch {
    pub fn found(self) -> Option<TwoElement> {
        match self {
            TwoSearch::Found(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivedOp {
    /// `p(1, a, 0)`
    Complement,
    /// `p(0, a, b)`
    Product,
    /// `p(a, 1/2, b)`
    Oplus,
    /// `p(a, b, 1)`
    Circ,
}

impl MobiAlgebra {
    pub fn new(
        name: impl Into<String>,
        carrier: Carrier,
        p: impl Fn(&Element, &Element, &Element) -> Result<Element, EvalError> + Send + Sync + 'static,
        zero: Element,
        half: Element,
        one: Element,
    ) -> Result<Self, AlgebraError> {
        for (label, value) in [("0", &zero), ("1/2", &half), ("1", &one)] {
            if !carrier.contains(value) {
                return Err(AlgebraError::NonMemberConstant {
                    name: label,
                    value: value.to_string(),
                    carrier: carrier.to_string(),
                });
            }
        }
        Ok(MobiAlgebra {
            name: name.into(),
            carrier,
            p: Arc::new(p),
            zero,
            half,
            one,
            two: None,
            probes: Vec::new(),
        })
    }

    pub fn with_two(mut self, two: Element) -> Self {
        self.two = Some(two);
        self
    }

    pub fn with_probe(mut self, law: &str, assignment: Vec<Element>) -> Self {
        self.probes.push(Probe {
            law: law.to_string(),
            assignment,
        });
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `p` without membership checks on the inputs.
    pub fn p(&self, a: &Element, b: &Element, c: &Element) -> Result<Element, EvalError> {
        (self.p)(a, b, c)
    }

    pub fn operation(&self) -> TernaryOp {
        self.p.clone()
    }

    pub fn eval_p(&self, a: &Element, b: &Element, c: &Element) -> Result<Element, EvalError> {
        for (label, x) in [("a", a), ("b", b), ("c", c)] {
            self.require_member(label, x)?;
        }
        self.p(a, b, c)
    }

    fn require_member(&self, label: &str, x: &Element) -> Result<(), EvalError> {
        if self.carrier.contains(x) {
            Ok(())
        } else {
            Err(EvalError::NonMember {
                what: label.to_string(),
                value: x.to_string(),
            })
        }
    }

    pub fn eval_derived(&self, op: DerivedOp, args: &[Element]) -> Result<Element, EvalError> {
        let arity = if op == DerivedOp::Complement { 1 } else { 2 };
        if args.len() != arity {
            return Err(EvalError::Shape(format!(
                "{op:?} takes {arity} argument(s), got {}",
                args.len()
            )));
        }
        for x in args {
            self.require_member("argument", x)?;
        }
        match op {
            DerivedOp::Complement => self.complement(&args[0]),
            DerivedOp::Product => self.product(&args[0], &args[1]),
            DerivedOp::Oplus => self.oplus(&args[0], &args[1]),
            DerivedOp::Circ => self.circ(&args[0], &args[1]),
        }
    }

    pub fn complement(&self, a: &Element) -> Result<Element, EvalError> {
        self.p(&self.one, a, &self.zero)
    }

    pub fn product(&self, a: &Element, b: &Element) -> Result<Element, EvalError> {
        self.p(&self.zero, a, b)
    }

    pub fn oplus(&self, a: &Element, b: &Element) -> Result<Element, EvalError> {
        self.p(a, &self.half, b)
    }

    pub fn circ(&self, a: &Element, b: &Element) -> Result<Element, EvalError> {
        self.p(a, b, &self.one)
    }

    fn law(
        &self,
        id: &str,
        vars: &[&'static str],
        strategy: Strategy,
        eval: impl Fn(&[Element]) -> Result<Outcome, EvalError>,
    ) -> CheckReport {
        let vars: Vec<(&str, &Carrier)> = vars.iter().map(|v| (*v, &self.carrier)).collect();
        check_law(
            id,
            &vars,
            strategy,
            &probes_for(&self.probes, id),
            &[],
            eval,
        )
    }

    fn equation(
        &self,
        id: &str,
        vars: &[&'static str],
        strategy: Strategy,
        sides: impl Fn(&[Element]) -> Result<(Element, Element), EvalError>,
    ) -> CheckReport {
        self.law(id, vars, strategy, |v| compare(&self.carrier, [sides(v)?]))
    }
}

/// Closure of `p` and the eight axioms A1–A8, one report each.
pub fn check_algebra(a: &MobiAlgebra, strategy: Strategy) -> Vec<CheckReport> {
    let (zero, half, one) = (&a.zero, &a.half, &a.one);
    let mut reports = vec![
        a.law("closure", &["a", "b", "c"], strategy, |v| {
            let out = a.p(&v[0], &v[1], &v[2])?;
            Ok(if a.carrier.contains(&out) {
                Outcome::Holds
            } else {
                Outcome::Violated {
                    lhs: out,
                    rhs: None,
                }
            })
        }),
        a.equation("A1", &[], strategy, |_| {
            Ok((a.p(one, half, zero)?, half.clone()))
        }),
        a.equation("A2", &["a"], strategy, |v| {
            Ok((a.p(zero, &v[0], one)?, v[0].clone()))
        }),
        a.equation("A3", &["a", "b"], strategy, |v| {
            Ok((a.p(&v[0], &v[1], &v[0])?, v[0].clone()))
        }),
        a.equation("A4", &["a", "b"], strategy, |v| {
            Ok((a.p(&v[0], zero, &v[1])?, v[0].clone()))
        }),
        a.equation("A5", &["a", "b"], strategy, |v| {
            Ok((a.p(&v[1], one, &v[0])?, v[0].clone()))
        }),
    ];
    reports.push(check_cancellation(
        "A6",
        &[("a", &a.carrier)],
        ("b", &a.carrier),
        &a.carrier,
        strategy,
        |outer, b| a.p(&outer[0], half, b),
    ));
    reports.push(
        a.equation("A7", &["a", "b1", "b2", "b3", "c"], strategy, |v| {
            let (x, b1, b2, b3, c) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
            let lhs = a.p(x, &a.p(b1, b2, b3)?, c)?;
            let rhs = a.p(&a.p(x, b1, c)?, b2, &a.p(x, b3, c)?)?;
            Ok((lhs, rhs))
        }),
    );
    reports.push(
        a.equation("A8", &["a1", "b", "c1", "a2", "c2"], strategy, |v| {
            let (a1, b, c1, a2, c2) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
            let lhs = a.p(&a.p(a1, b, c1)?, half, &a.p(a2, b, c2)?)?;
            let rhs = a.p(&a.p(a1, half, a2)?, b, &a.p(c1, half, c2)?)?;
            Ok((lhs, rhs))
        }),
    );
    reports
}

/// Derived identities (6)–(14) and the complement involution.
pub fn check_properties(a: &MobiAlgebra, strategy: Strategy) -> Vec<CheckReport> {
    let (zero, half) = (&a.zero, &a.half);
    let c = &a.carrier;
    let mut reports = vec![
        a.equation("involution", &["a"], strategy, |v| {
            Ok((a.complement(&a.complement(&v[0])?)?, v[0].clone()))
        }),
        a.equation("eq(6)", &[], strategy, |_| {
            Ok((a.complement(half)?, half.clone()))
        }),
        a.law("eq(7)", &["a"], strategy, |v| {
            let x = &v[0];
            let right = a.product(half, x)?;
            compare(
                c,
                [
                    (a.product(x, half)?, right.clone()),
                    (right, a.oplus(zero, x)?),
                ],
            )
        }),
    ];
    reports.push(check_cancellation(
        "eq(8)",
        &[],
        ("a", c),
        c,
        strategy,
        |_, x| a.product(x, half),
    ));
    reports.push(a.equation("eq(9)", &["a"], strategy, |v| {
        Ok((a.p(&a.complement(&v[0])?, half, &v[0])?, half.clone()))
    }));
    {
        let vars = [("a", c)];
        let force_half = |v: &mut Vec<Element>| v[0] = half.clone();
        reports.push(check_law(
            "eq(10)",
            &vars,
            strategy,
            &probes_for(&a.probes, "eq(10)"),
            &[&force_half],
            |v| {
                let x = &v[0];
                if !c.eq(&a.complement(x)?, x)? {
                    return Ok(Outcome::Vacuous);
                }
                compare(c, [(x.clone(), half.clone())])
            },
        ));
    }
    reports.push(a.equation("eq(11)", &["a", "b", "c"], strategy, |v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        Ok((
            a.complement(&a.p(x, y, z)?)?,
            a.p(&a.complement(x)?, y, &a.complement(z)?)?,
        ))
    }));
    reports.push(a.equation("eq(12)", &["a", "b", "c"], strategy, |v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        Ok((a.p(z, y, x)?, a.p(x, &a.complement(y)?, z)?))
    }));
    reports.push(a.equation("eq(13)", &["a", "b"], strategy, |v| {
        let (x, y) = (&v[0], &v[1]);
        Ok((
            a.complement(&a.circ(x, y)?)?,
            a.product(&a.complement(y)?, &a.complement(x)?)?,
        ))
    }));
    reports.push(a.equation("eq(14)", &["a", "b", "c"], strategy, |v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let lhs = a.product(half, &a.p(x, y, z)?)?;
        let rhs = a.oplus(&a.product(&a.complement(y)?, x)?, &a.product(y, z)?)?;
        Ok((lhs, rhs))
    }));
    reports
}

/// `p(0,a,b) = p(0,b,a)`: the product is commutative.
pub fn check_commutativity_condition(a: &MobiAlgebra, strategy: Strategy) -> CheckReport {
    a.equation("commutativity", &["a", "b"], strategy, |v| {
        Ok((a.product(&v[0], &v[1])?, a.product(&v[1], &v[0])?))
    })
}

const TWO_SCAN: usize = 500;

/// Find the element 2 with `p(0,1/2,2) = 1`.
pub fn solve_two(a: &MobiAlgebra) -> Result<TwoSearch, AlgebraError> {
    let solves = |x: &Element| -> Result<bool, AlgebraError> {
        Ok(a.carrier
            .eq(&a.p(&a.zero, &a.half, x)?, &a.one)
            .map_err(EvalError::from)?)
    };
    if a.carrier.is_finite() {
        let mut found = Vec::new();
        for x in a.carrier.enumerate().map_err(EvalError::from)? {
            if solves(&x)? {
                found.push(x);
            }
        }
        return match found.len() {
            0 => Ok(TwoSearch::ProvenAbsent),
            1 => Ok(TwoSearch::Found(TwoElement(found.remove(0)))),
            _ => Err(AlgebraError::AmbiguousTwo(
                found
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", "),
            )),
        };
    }
    if let Some(two) = &a.two {
        if a.carrier.contains(two) && solves(two)? {
            return Ok(TwoSearch::Found(TwoElement(two.clone())));
        }
    }
    let candidates = a
        .carrier
        .sample(crate::number::sub_seed(0, "two"), TWO_SCAN)
        .map_err(EvalError::from)?;
    for x in &candidates {
        if solves(x)? {
            return Ok(TwoSearch::Found(TwoElement(x.clone())));
        }
    }
    Ok(TwoSearch::NotFound {
        searched: candidates.len(),
    })
}

/// Ring with `a + b = p(0,2,p(a,1/2,b))`, `a * b = p(0,a,b)` and
/// `-a = p(a,2,0)`.
pub fn ring_from_algebra(a: &MobiAlgebra, two: &TwoElement) -> RingWithHalf {
    let p = a.operation();
    let (zero, half, two) = (a.zero.clone(), a.half.clone(), two.0.clone());
    let add = {
        let (p, zero, half, two) = (p.clone(), zero.clone(), half.clone(), two.clone());
        move |x: &Element, y: &Element| p(&zero, &two, &p(x, &half, y)?)
    };
    let mul = {
        let (p, zero) = (p.clone(), zero.clone());
        move |x: &Element, y: &Element| p(&zero, x, y)
    };
    let neg = {
        let (p, zero, two) = (p.clone(), zero.clone(), two.clone());
        move |x: &Element| p(x, &two, &zero)
    };
    RingWithHalf::new_unchecked(
        format!("ring({})", a.name),
        a.carrier.clone(),
        add,
        mul,
        neg,
        a.zero.clone(),
        a.one.clone(),
        a.half.clone(),
    )
}

/// Algebra with `p(a,b,c) = a + b*c - b*a` and constants `(0, 1/2, 1)`.
/// The ring's `1 + 1` is declared as the algebra's 2.
pub fn algebra_from_ring(r: &RingWithHalf) -> Result<MobiAlgebra, AlgebraError> {
    let sum = r.add(&r.half, &r.half)?;
    if !r.carrier.eq(&sum, &r.one).map_err(EvalError::from)? {
        return Err(AlgebraError::HalfNotSolution(sum.to_string()));
    }
    let ring = r.clone();
    let two = r.add(&r.one, &r.one)?;
    let alg = MobiAlgebra::new(
        format!("algebra({})", r.name),
        r.carrier.clone(),
        move |a, b, c| {
            let bc = ring.mul(b, c)?;
            let ba = ring.mul(b, a)?;
            ring.add(&ring.add(a, &bc)?, &ring.neg(&ba)?)
        },
        r.zero.clone(),
        r.half.clone(),
        r.one.clone(),
    )?;
    Ok(alg.with_two(two))
}

/// Preservation of `0`, `1/2`, `1` and `p` by `f: A -> B`, plus the check
/// that, when `p` is preserved, preserving `{0, 1}` and preserving `1/2`
/// agree.
pub fn check_algebra_morphism(
    f: &UnaryOp,
    source: &MobiAlgebra,
    target: &MobiAlgebra,
    strategy: Strategy,
) -> Vec<CheckReport> {
    let tc = &target.carrier;
    let constant = |id: &str, x: &Element, y: &Element| {
        check_law(id, &[], strategy, &[], &[], |_| {
            compare(tc, [(f(x)?, y.clone())])
        })
    };
    let zero = constant("preserves-0", &source.zero, &target.zero);
    let half = constant("preserves-1/2", &source.half, &target.half);
    let one = constant("preserves-1", &source.one, &target.one);
    let vars = [
        ("a", &source.carrier),
        ("b", &source.carrier),
        ("c", &source.carrier),
    ];
    let preserves_p = check_law("preserves-p", &vars, strategy, &[], &[], |v| {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        compare(
            tc,
            [(f(&source.p(a, b, c)?)?, target.p(&f(a)?, &f(b)?, &f(c)?)?)],
        )
    });
    let record = preserves_p.strategy.clone();
    let equivalence = if preserves_p.passed() {
        let ends = zero.passed() && one.passed();
        if ends == half.passed() {
            CheckReport::pass(
                "constant-equivalence",
                record,
                Some(format!(
                    "0 and 1 preserved: {ends}; 1/2 preserved: {}",
                    half.passed()
                )),
            )
        } else {
            CheckReport::fail(
                "constant-equivalence",
                record,
                Witness {
                    inputs: vec![("1/2".to_string(), source.half.clone())],
                    lhs: f(&source.half).unwrap_or_else(|_| source.half.clone()),
                    rhs: Some(target.half.clone()),
                    difference: None,
                },
            )
        }
    } else {
        CheckReport::pass(
            "constant-equivalence",
            record,
            Some("p is not preserved; nothing to compare".to_string()),
        )
    };
    debug_assert!(equivalence.verdict != Verdict::Error);
    vec![zero, half, one, preserves_p, equivalence]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::check::all_pass;
    use crate::number::{int, rat};

    fn q(r: crate::number::Rational) -> Element {
        Element::Rat(r)
    }

    fn z3(v: u64) -> Element {
        Element::residue(v, 3)
    }

    fn line() -> MobiAlgebra {
        catalog::rational_line_algebra()
    }

    #[test]
    fn eval_p_examples() {
        let a = line();
        assert_eq!(
            a.eval_p(&q(int(1)), &q(rat(1, 2)), &q(int(0))).unwrap(),
            q(rat(1, 2))
        );
        assert_eq!(
            a.eval_p(&q(rat(3, 7)), &q(int(0)), &q(int(9))).unwrap(),
            q(rat(3, 7))
        );
        let z = catalog::zmod_algebra(3).unwrap();
        assert_eq!(z.eval_p(&z3(1), &z3(2), &z3(2)).unwrap(), z3(0));
    }

    #[test]
    fn eval_p_rejects_non_members() {
        let a = catalog::canonical_interval_algebra();
        assert!(matches!(
            a.eval_p(&q(int(2)), &q(int(0)), &q(int(0))),
            Err(EvalError::NonMember { .. })
        ));
    }

    #[test]
    fn derived_examples() {
        let a = line();
        let h = q(rat(1, 2));
        assert_eq!(
            a.eval_derived(DerivedOp::Complement, std::slice::from_ref(&h))
                .unwrap(),
            h
        );
        assert_eq!(
            a.eval_derived(DerivedOp::Product, &[q(int(1)), q(rat(5, 3))])
                .unwrap(),
            q(rat(5, 3))
        );
        assert_eq!(
            a.eval_derived(DerivedOp::Circ, &[h.clone(), h.clone()])
                .unwrap(),
            q(rat(3, 4))
        );
        assert!(a.eval_derived(DerivedOp::Oplus, &[h]).is_err());
    }

    #[test]
    fn zmod3_passes_exhaustively() {
        let z = catalog::zmod_algebra(3).unwrap();
        assert_eq!(z.half, z3(2));
        let reports = check_algebra(&z, Strategy::Exhaustive);
        assert_eq!(reports.len(), 9);
        assert!(all_pass(&reports), "{reports:#?}");
        assert!(reports.iter().all(|r| r.strategy.kind == "exhaustive"));
        let a7 = reports.iter().find(|r| r.law == "A7").unwrap();
        assert_eq!(a7.strategy.samples, 243);
    }

    #[test]
    fn unit_interval_passes_sampled() {
        let a = catalog::canonical_interval_algebra();
        let reports = check_algebra(&a, Strategy::sampled(500, 0));
        assert!(all_pass(&reports), "{reports:#?}");
    }

    #[test]
    fn wrong_half_breaks_a1() {
        let line = line();
        let p = line.operation();
        let bad = MobiAlgebra::new(
            "bad-half",
            Carrier::Rational,
            move |a, b, c| p(a, b, c),
            q(int(0)),
            q(rat(1, 4)),
            q(int(1)),
        )
        .unwrap();
        let reports = check_algebra(&bad, Strategy::sampled(100, 0));
        let a1 = reports.iter().find(|r| r.law == "A1").unwrap();
        assert_eq!(a1.verdict, Verdict::Fail);
        let w = a1.witness.as_ref().unwrap();
        assert_eq!(w.lhs, q(rat(3, 4)));
        assert_eq!(w.rhs, Some(q(rat(1, 4))));
    }

    #[test]
    fn property_14_at_quarter_half_three_quarters() {
        let a = line();
        let (x, y, z) = (q(rat(1, 4)), q(rat(1, 2)), q(rat(3, 4)));
        let lhs = a.product(&a.half, &a.p(&x, &y, &z).unwrap()).unwrap();
        let rhs = a
            .oplus(
                &a.product(&a.complement(&y).unwrap(), &x).unwrap(),
                &a.product(&y, &z).unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, q(rat(1, 4)));
        assert_eq!(rhs, q(rat(1, 4)));
    }

    #[test]
    fn zmod3_properties_and_complement_fixed_point() {
        let z = catalog::zmod_algebra(3).unwrap();
        let reports = check_properties(&z, Strategy::Exhaustive);
        assert!(all_pass(&reports), "{reports:#?}");
        let fixed: Vec<Element> = Carrier::ModularInt(3)
            .enumerate()
            .unwrap()
            .into_iter()
            .filter(|x| z.complement(x).unwrap() == *x)
            .collect();
        assert_eq!(fixed, vec![z3(2)]);
    }

    #[test]
    fn property_9_at_half_is_idempotency() {
        let a = line();
        let h = a.half.clone();
        assert_eq!(a.p(&a.complement(&h).unwrap(), &h, &h).unwrap(), h);
    }

    #[test]
    fn two_on_line_zmod_and_interval() {
        assert_eq!(solve_two(&line()).unwrap().found().unwrap().0, q(int(2)));
        let z = catalog::zmod_algebra(3).unwrap();
        assert_eq!(solve_two(&z).unwrap().found().unwrap().0, z3(2));
        let interval = catalog::canonical_interval_algebra();
        assert!(matches!(
            solve_two(&interval).unwrap(),
            TwoSearch::NotFound { .. }
        ));
    }

    #[test]
    fn ring_round_trip_on_zmod3() {
        let z = catalog::zmod_algebra(3).unwrap();
        let two = solve_two(&z).unwrap().found().unwrap();
        let ring = ring_from_algebra(&z, &two);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(ring.add(&z3(a), &z3(b)).unwrap(), z3((a + b) % 3));
                assert_eq!(ring.mul(&z3(a), &z3(b)).unwrap(), z3((a * b) % 3));
            }
        }
    }

    #[test]
    fn algebra_from_ring_rejects_missing_half() {
        let r = catalog::zmod_ring_with_half(4, 2);
        assert!(matches!(
            algebra_from_ring(&r),
            Err(AlgebraError::HalfNotSolution(_))
        ));
    }

    #[test]
    fn commutativity_condition() {
        assert!(check_commutativity_condition(&line(), Strategy::sampled(200, 0)).passed());
        let z = catalog::zmod_algebra(3).unwrap();
        let r = check_commutativity_condition(&z, Strategy::Exhaustive);
        assert!(r.passed());
        assert_eq!(r.strategy.samples, 9);
        let tri = catalog::tri_algebra();
        let r = check_commutativity_condition(&tri, Strategy::sampled(200, 0));
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn identity_is_a_morphism() {
        let a = line();
        let id: UnaryOp = Arc::new(|x: &Element| Ok(x.clone()));
        let reports = check_algebra_morphism(&id, &a, &a, Strategy::sampled(100, 0));
        assert!(all_pass(&reports), "{reports:#?}");
    }

    #[test]
    fn intro_morphism_spot_value() {
        let (source, target, f) = catalog::intro_morphism();
        let image = f(&source.p(&q(int(0)), &q(rat(1, 2)), &q(int(1))).unwrap()).unwrap();
        assert_eq!(image, q(int(2)));
        let rhs = target.p(&q(int(-1)), &q(int(2)), &q(int(5))).unwrap();
        assert_eq!(rhs, q(int(2)));
        let reports = check_algebra_morphism(&f, &source, &target, Strategy::sampled(500, 0));
        assert!(all_pass(&reports), "{reports:#?}");
    }

    #[test]
    fn constant_equivalence_flags_disagreement() {
        // x -> 1 - x fixes 1/2 but does not preserve p; the equivalence is then vacuous.
        let a = line();
        let flip: UnaryOp = Arc::new(|x: &Element| Element::Rat(int(1)).sub(x));
        let reports = check_algebra_morphism(&flip, &a, &a, Strategy::sampled(100, 0));
        let by = |id: &str| reports.iter().find(|r| r.law == id).unwrap().clone();
        assert_eq!(by("preserves-p").verdict, Verdict::Fail);
        assert_eq!(by("constant-equivalence").verdict, Verdict::Pass);
    }
}
