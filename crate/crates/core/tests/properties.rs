use mobi::algebra::check_algebra;
use mobi::carrier::{Carrier, Element};
use mobi::catalog;
use mobi::check::{all_pass, Strategy as Checks};
use mobi::dsl::{parse_definitions, print_definitions};
use mobi::functor::{roundtrip_module, space_to_module};
use mobi::number::{rat, Rational};
use mobi::space::check_space;
use proptest::prelude::*;

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b", "c"]).prop_map(str::to_string),
        (0u32..20).prop_map(|n| n.to_string()),
        (1u32..9, 2u32..9).prop_map(|(n, d)| format!("{n}/{d}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (
                inner.clone(),
                prop::sample::select(vec!["+", "-", "*", "/"]),
                inner.clone()
            )
                .prop_map(|(l, op, r)| format!("({l}) {op} ({r})")),
            inner.clone().prop_map(|e| format!("-({e})")),
            (inner, 1u32..4).prop_map(|(e, k)| format!("({e})^{k}")),
        ]
    })
}

fn algebra_with(body: &str) -> String {
    format!("algebra gen {{\n  carrier: Q\n  zero: 0\n  half: 1/2\n  one: 1\n  p(a, b, c) = {body}\n}}\n")
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn parse_print_parse_is_stable(body in expr()) {
        let first = parse_definitions(&algebra_with(&body)).unwrap();
        let printed = print_definitions(&first);
        let second = parse_definitions(&printed).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(print_definitions(&second), printed);
    }

    #[test]
    fn line_algebra_identities_hold_pointwise(a in small_rational(), b in small_rational(), c in small_rational()) {
        let line = catalog::rational_line_algebra();
        let (ea, eb, ec) = (Element::Rat(a.clone()), Element::Rat(b.clone()), Element::Rat(c.clone()));
        let value = line.p(&ea, &eb, &ec).unwrap();
        prop_assert_eq!(value, Element::Rat(&a + &b * (&c - &a)));
        // the midpoint of a and c is reached with b = 1/2 from either end
        let half = Element::Rat(rat(1, 2));
        prop_assert_eq!(line.p(&ea, &half, &ec).unwrap(), line.p(&ec, &half, &ea).unwrap());
    }

    #[test]
    fn reports_are_deterministic_in_the_seed(seed in any::<u64>()) {
        let s = catalog::projectile_space(1, &[rat(1, 1)]).space;
        let strategy = Checks::sampled(20, seed);
        let a = check_space(&s, strategy);
        let b = check_space(&s, strategy);
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        prop_assert!(all_pass(&a));
    }

    #[test]
    fn sampling_is_deterministic_and_in_carrier(seed in any::<u64>()) {
        for carrier in [Carrier::Rational, Carrier::float(), Carrier::GaussianRational, Carrier::ModularInt(7)] {
            let first = carrier.sample(seed, 16).unwrap();
            prop_assert_eq!(&first, &carrier.sample(seed, 16).unwrap());
            prop_assert!(first.iter().all(|e| carrier.contains(e)));
        }
    }

    #[test]
    fn projectile_module_roundtrips(seed in 0u64..64, k in small_rational()) {
        let m = catalog::projectile_module(1, &[k]);
        prop_assert!(roundtrip_module(&m, Checks::sampled(20, seed)).passed());
    }
}

#[test]
fn zmod_algebras_satisfy_the_axioms_exhaustively() {
    for m in [3, 5, 7, 9] {
        let a = catalog::zmod_algebra(m).unwrap();
        assert!(all_pass(&check_algebra(&a, Checks::default())), "Z/{m}");
    }
}

#[test]
fn derived_module_of_canonical_space_is_a_module() {
    let pointed = catalog::canonical_space(2, catalog::Scalars::Line);
    let two = mobi::algebra::solve_two(&pointed.space.algebra)
        .unwrap()
        .found()
        .unwrap();
    let m = space_to_module(&pointed, &two);
    assert!(all_pass(&mobi::ring::check_module(&m, Checks::default())));
}
