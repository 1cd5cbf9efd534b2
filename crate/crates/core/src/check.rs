//! Law checking over finite enumerations or seeded samples.
//!
//! Every law gets its own random stream derived from `(seed, law id)`, so a
//! report does not depend on which other laws ran or in which order.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::carrier::{Carrier, Element};
use crate::error::EvalError;
use crate::number::sub_seed;

pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl Strategy {
    pub fn sampled(samples: usize, seed: u64) -> Self {
        Strategy::Sampled { samples, seed }
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::sampled(DEFAULT_SAMPLES, DEFAULT_SEED)
    }
}

/// How a report was actually produced: `samples` counts evaluated assignments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyRecord {
    pub kind: &'static str,
    pub samples: usize,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// An operation could not be evaluated (division by zero, non-member
    /// result feeding a later step, exhausted sampler).
    Error,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub inputs: Vec<(String, Element)>,
    pub lhs: Element,
    pub rhs: Option<Element>,
    pub difference: Option<Element>,
}

impl Witness {
    pub fn input(&self, name: &str) -> Option<&Element> {
        self.inputs.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Input<'a> {
            name: &'a str,
            value: String,
        }
        let n = if self.difference.is_some() { 4 } else { 3 };
        let mut s = serializer.serialize_struct("Witness", n)?;
        let inputs: Vec<Input> = self
            .inputs
            .iter()
            .map(|(name, value)| Input {
                name,
                value: value.to_string(),
            })
            .collect();
        s.serialize_field("inputs", &inputs)?;
        s.serialize_field("lhs", &self.lhs.to_string())?;
        s.serialize_field("rhs", &self.rhs.as_ref().map(ToString::to_string))?;
        if let Some(d) = &self.difference {
            s.serialize_field("difference", &d.to_string())?;
        }
        s.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub law: String,
    pub strategy: StrategyRecord,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Informational laws (e.g. commutativity of a ring product) do not
    /// count towards overall success.
    #[serde(skip_serializing_if = "is_true")]
    pub required: bool,
}

fn is_true(b: &bool) -> bool {
    *b
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn informational(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn about(mut self, subject: impl Into<String>) -> Self {
        self.subject = Some(subject.into());
        self
    }

    pub(crate) fn pass(law: &str, strategy: StrategyRecord, note: Option<String>) -> Self {
        CheckReport {
            subject: None,
            law: law.to_string(),
            strategy,
            verdict: Verdict::Pass,
            witness: None,
            note,
            required: true,
        }
    }

    pub(crate) fn fail(law: &str, strategy: StrategyRecord, witness: Witness) -> Self {
        CheckReport {
            subject: None,
            law: law.to_string(),
            strategy,
            verdict: Verdict::Fail,
            witness: Some(witness),
            note: None,
            required: true,
        }
    }

    pub(crate) fn error(law: &str, strategy: StrategyRecord, message: String) -> Self {
        CheckReport {
            subject: None,
            law: law.to_string(),
            strategy,
            verdict: Verdict::Error,
            witness: None,
            note: Some(message),
            required: true,
        }
    }
}

/// A fixed assignment evaluated before generated ones for a given law,
/// typically a known counterexample.
#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    pub law: String,
    pub assignment: Vec<Element>,
}

pub(crate) fn probes_for(probes: &[Probe], law: &str) -> Vec<Vec<Element>> {
    probes
        .iter()
        .filter(|p| p.law == law)
        .map(|p| p.assignment.clone())
        .collect()
}

/// True when no required law failed or errored.
pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed() || !r.required)
}

/// Result of evaluating one assignment.
#[allow(clippy::large_enum_variant)]
pub(crate) enum Outcome {
    Holds,
    /// An implication whose premise did not hold.
    Vacuous,
    Violated {
        lhs: Element,
        rhs: Option<Element>,
    },
}

/// Builders that extend a sampled assignment with derived variables.
pub(crate) type Constructors<'a> = [&'a dyn Fn(&mut Vec<Element>)];

/// Compare sides in order and report the first unequal pair.
pub(crate) fn compare(
    carrier: &Carrier,
    pairs: impl IntoIterator<Item = (Element, Element)>,
) -> Result<Outcome, EvalError> {
    for (lhs, rhs) in pairs {
        if !carrier.eq(&lhs, &rhs)? {
            return Ok(Outcome::Violated {
                lhs,
                rhs: Some(rhs),
            });
        }
    }
    Ok(Outcome::Holds)
}

pub(crate) type Vars<'a> = [(&'a str, &'a Carrier)];

/// Assignments for `vars` under `strategy`. Exhaustive mode falls back to
/// default sampling when some carrier is infinite; the returned record says
/// which mode ran.
fn assignments(
    law: &str,
    vars: &Vars<'_>,
    strategy: Strategy,
) -> (StrategyRecord, Result<Vec<Vec<Element>>, EvalError>) {
    let exhaustive_possible = vars.iter().all(|(_, c)| c.is_finite());
    match strategy {
        Strategy::Exhaustive if exhaustive_possible => {
            let lists: Result<Vec<Vec<Element>>, _> =
                vars.iter().map(|(_, c)| c.enumerate()).collect();
            let tuples = lists.map_err(EvalError::from).map(|lists| {
                if lists.is_empty() {
                    vec![Vec::new()]
                } else {
                    lists
                        .into_iter()
                        .map(|l| l.into_iter())
                        .multi_cartesian_product()
                        .collect()
                }
            });
            let count = tuples.as_ref().map(Vec::len).unwrap_or(0);
            (
                StrategyRecord {
                    kind: "exhaustive",
                    samples: count,
                    seed: None,
                },
                tuples,
            )
        }
        Strategy::Exhaustive => assignments(law, vars, Strategy::default()),
        Strategy::Sampled { samples, seed } => {
            let count = if vars.is_empty() { 1 } else { samples };
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, law));
            let tuples = (0..count)
                .map(|_| {
                    vars.iter()
                        .map(|(_, c)| c.draw(&mut rng).map_err(EvalError::from))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>();
            (
                StrategyRecord {
                    kind: "sampled",
                    samples: count,
                    seed: Some(seed),
                },
                tuples,
            )
        }
    }
}

fn witness(vars: &Vars<'_>, values: &[Element], lhs: Element, rhs: Option<Element>) -> Witness {
    let difference = rhs.as_ref().and_then(|r| lhs.sub(r).ok());
    Witness {
        inputs: vars
            .iter()
            .map(|(n, _)| n.to_string())
            .zip(values.iter().cloned())
            .collect(),
        lhs,
        rhs,
        difference,
    }
}

/// Check a law that must hold on every assignment. `probes` are evaluated
/// before the generated assignments; `constructors` rewrite each generated
/// assignment into an extra one (used to force premises of implications).
pub(crate) fn check_law<F>(
    law: &str,
    vars: &Vars<'_>,
    strategy: Strategy,
    probes: &[Vec<Element>],
    constructors: &Constructors<'_>,
    eval: F,
) -> CheckReport
where
    F: Fn(&[Element]) -> Result<Outcome, EvalError>,
{
    let (record, generated) = assignments(law, vars, strategy);
    let generated = match generated {
        Ok(g) => g,
        Err(e) => return CheckReport::error(law, record, e.to_string()),
    };
    let mut premises = 0usize;
    let mut evaluated = 0usize;
    let implication = !constructors.is_empty();
    let extra = generated.iter().flat_map(|values| {
        constructors.iter().map(move |build| {
            let mut v = values.clone();
            build(&mut v);
            v
        })
    });
    for values in probes
        .iter()
        .cloned()
        .chain(generated.iter().cloned())
        .chain(extra)
    {
        evaluated += 1;
        match eval(&values) {
            Ok(Outcome::Holds) => premises += 1,
            Ok(Outcome::Vacuous) => {}
            Ok(Outcome::Violated { lhs, rhs }) => {
                return CheckReport::fail(law, record, witness(vars, &values, lhs, rhs));
            }
            Err(e) => {
                let shown = vars
                    .iter()
                    .zip(&values)
                    .map(|((n, _), v)| format!("{n}={v}"))
                    .join(", ");
                return CheckReport::error(law, record, format!("{e} at {shown}"));
            }
        }
    }
    let note =
        implication.then(|| format!("premise held in {premises} of {evaluated} assignments"));
    CheckReport::pass(law, record, note)
}

/// Check that `inner -> f(outer, inner)` is injective for every tested
/// `outer`: among all evaluated inner values, equal images require equal
/// inputs. Sampled mode uses about sqrt(n) outer assignments, each against a
/// shared pool of inner values, for about n evaluations in total.
pub(crate) fn check_cancellation<F>(
    law: &str,
    outer: &Vars<'_>,
    inner: (&str, &Carrier),
    image: &Carrier,
    strategy: Strategy,
    f: F,
) -> CheckReport
where
    F: Fn(&[Element], &Element) -> Result<Element, EvalError>,
{
    let inner_carrier = inner.1;
    let finite = inner_carrier.is_finite() && outer.iter().all(|(_, c)| c.is_finite());
    let (record, outer_values, pool) = match strategy {
        Strategy::Exhaustive if finite => {
            let (_, outer_values) = assignments(law, outer, Strategy::Exhaustive);
            let pool = inner_carrier.enumerate().map_err(EvalError::from);
            let (outer_values, pool) = match (outer_values, pool) {
                (Ok(o), Ok(p)) => (o, p),
                (Err(e), _) | (_, Err(e)) => {
                    let record = StrategyRecord {
                        kind: "exhaustive",
                        samples: 0,
                        seed: None,
                    };
                    return CheckReport::error(law, record, e.to_string());
                }
            };
            let record = StrategyRecord {
                kind: "exhaustive",
                samples: outer_values.len() * pool.len(),
                seed: None,
            };
            (record, outer_values, pool)
        }
        Strategy::Exhaustive => {
            return check_cancellation(law, outer, inner, image, Strategy::default(), f)
        }
        Strategy::Sampled { samples, seed } => {
            let outer_count = if outer.is_empty() {
                1
            } else {
                ((samples as f64).sqrt().ceil() as usize).max(1)
            };
            let pool_size = samples.div_ceil(outer_count).max(2);
            let (_, outer_values) = assignments(law, outer, Strategy::sampled(outer_count, seed));
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, &format!("{law}/pool")));
            let pool: Result<Vec<Element>, EvalError> = (0..pool_size)
                .map(|_| inner_carrier.draw(&mut rng).map_err(EvalError::from))
                .collect();
            let record = StrategyRecord {
                kind: "sampled",
                samples: outer_count * pool_size,
                seed: Some(seed),
            };
            match (outer_values, pool) {
                (Ok(o), Ok(p)) => (record, o, p),
                (Err(e), _) | (_, Err(e)) => return CheckReport::error(law, record, e.to_string()),
            }
        }
    };
    let mut collisions = 0usize;
    for values in &outer_values {
        let mut images: Vec<(&Element, Element)> = Vec::with_capacity(pool.len());
        for candidate in &pool {
            let img = match f(values, candidate) {
                Ok(v) => v,
                Err(e) => return CheckReport::error(law, record, e.to_string()),
            };
            for (earlier, earlier_img) in &images {
                let same_image = match image.eq(earlier_img, &img) {
                    Ok(b) => b,
                    Err(e) => return CheckReport::error(law, record, e.to_string()),
                };
                if !same_image {
                    continue;
                }
                collisions += 1;
                let same_input = inner_carrier.eq(earlier, candidate).unwrap_or(false);
                if !same_input {
                    let mut inputs: Vec<(String, Element)> = outer
                        .iter()
                        .map(|(n, _)| n.to_string())
                        .zip(values.iter().cloned())
                        .collect();
                    inputs.push((inner.0.to_string(), (*earlier).clone()));
                    inputs.push((format!("{}'", inner.0), candidate.clone()));
                    let lhs = (*earlier).clone();
                    let rhs = candidate.clone();
                    let difference = lhs.sub(&rhs).ok();
                    return CheckReport::fail(
                        law,
                        record,
                        Witness {
                            inputs,
                            lhs,
                            rhs: Some(rhs),
                            difference,
                        },
                    );
                }
            }
            images.push((candidate, img));
        }
    }
    let note = format!("{collisions} equal-image pairs, all with equal inputs");
    CheckReport::pass(law, record, Some(note))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    #[test]
    fn exhaustive_counts_every_tuple() {
        let z3 = Carrier::ModularInt(3);
        let vars = [("a", &z3), ("b", &z3)];
        let r = check_law("comm", &vars, Strategy::Exhaustive, &[], &[], |v| {
            compare(&z3, [(v[0].add(&v[1])?, v[1].add(&v[0])?)])
        });
        assert!(r.passed());
        assert_eq!(r.strategy.samples, 9);
        assert_eq!(r.strategy.kind, "exhaustive");
    }

    #[test]
    fn failing_law_carries_a_witness() {
        let q = Carrier::Rational;
        let vars = [("a", &q), ("b", &q)];
        let r = check_law("sub-comm", &vars, Strategy::sampled(50, 1), &[], &[], |v| {
            compare(&q, [(v[0].sub(&v[1])?, v[1].sub(&v[0])?)])
        });
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.unwrap();
        assert_eq!(w.inputs.len(), 2);
        assert_ne!(Some(w.lhs), w.rhs);
    }

    #[test]
    fn exhaustive_on_infinite_falls_back_to_sampling() {
        let q = Carrier::Rational;
        let vars = [("a", &q)];
        let r = check_law("refl", &vars, Strategy::Exhaustive, &[], &[], |v| {
            compare(&q, [(v[0].clone(), v[0].clone())])
        });
        assert_eq!(r.strategy.kind, "sampled");
        assert_eq!(r.strategy.samples, DEFAULT_SAMPLES);
    }

    #[test]
    fn probes_run_first() {
        let q = Carrier::Rational;
        let vars = [("a", &q)];
        let probe = vec![vec![Element::Rat(int(1000))]];
        let r = check_law("small", &vars, Strategy::sampled(10, 0), &probe, &[], |v| {
            let a = v[0].as_rat()?.clone();
            if a > int(100) {
                Ok(Outcome::Violated {
                    lhs: v[0].clone(),
                    rhs: None,
                })
            } else {
                Ok(Outcome::Holds)
            }
        });
        assert_eq!(r.witness.unwrap().lhs, Element::Rat(int(1000)));
    }

    #[test]
    fn cancellation_detects_collisions() {
        let z4 = Carrier::ModularInt(4);
        let r = check_cancellation(
            "double",
            &[],
            ("x", &z4),
            &z4,
            Strategy::Exhaustive,
            |_, x| x.add(x),
        );
        assert_eq!(r.verdict, Verdict::Fail);
        let z5 = Carrier::ModularInt(5);
        let r = check_cancellation(
            "double",
            &[],
            ("x", &z5),
            &z5,
            Strategy::Exhaustive,
            |_, x| x.add(x),
        );
        assert!(r.passed());
    }

    #[test]
    fn sub_seeding_is_order_independent() {
        let q = Carrier::Rational;
        let vars = [("a", &q)];
        let run = |law: &str| {
            let (_, values) = assignments(law, &vars, Strategy::sampled(5, 3));
            values.unwrap()
        };
        let first = run("L1");
        let _ = run("L2");
        assert_eq!(first, run("L1"));
        assert_ne!(first, run("L2"));
    }
}
