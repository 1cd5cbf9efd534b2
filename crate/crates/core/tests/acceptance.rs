//! The ten acceptance criteria, one line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use mobi::algebra::{
    check_algebra, check_algebra_morphism, check_commutativity_condition, check_properties,
    solve_two, TwoElement,
};
use mobi::carrier::{Carrier, Element, Tolerance};
use mobi::catalog::{self, InstanceParams, Kind, Structure};
use mobi::check::{CheckReport, Strategy, Verdict};
use mobi::dsl::{self, Definition};
use mobi::functor::{
    module_to_space, roundtrip_module, roundtrip_space, space_to_module, transport_morphism,
    Endpoints, MorphismPair,
};
use mobi::number::{gauss, int, rat, Gaussian, Rational};
use mobi::ring::check_module;
use mobi::search::{search_finite, FiniteModel};
use mobi::space::{check_affine, check_y_properties, AffineMode};

type Outcome = Result<String, String>;

fn failures(reports: &[CheckReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| r.required && !r.passed())
        .map(|r| {
            format!(
                "{} {}: {:?} {}",
                r.subject.as_deref().unwrap_or(""),
                r.law,
                r.verdict,
                r.note.as_deref().unwrap_or("")
            )
        })
        .collect()
}

fn require(reports: &[CheckReport], what: &str) -> Result<(), String> {
    let bad = failures(reports);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(format!("{what}: {}", bad.join("; ")))
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn two(a: &mobi::MobiAlgebra) -> Result<TwoElement, String> {
    solve_two(a)
        .map_err(|e| e.to_string())?
        .found()
        .ok_or_else(|| format!("{} has no 2", a.name))
}

// ---------------------------------------------------------------------------

fn exhaustive_axioms() -> Outcome {
    let start = Instant::now();
    let mut laws = 0;
    for m in [3, 5] {
        let a = catalog::zmod_algebra(m).map_err(|e| e.to_string())?;
        let mut reports = check_algebra(&a, Strategy::Exhaustive);
        reports.extend(check_properties(&a, Strategy::Exhaustive));
        if reports.iter().any(|r| r.strategy.kind != "exhaustive") {
            return Err(format!("Z{m}: some law was not enumerated"));
        }
        require(&reports, &format!("Z{m}"))?;
        laws += reports.len();
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{laws} laws exhaustive in {:?}", start.elapsed()))
}

/// `q` of the non-affine example written out independently.
fn ex9_q(x: &(Gaussian, Rational), a: &Rational, y: &(Gaussian, Rational)) -> (Gaussian, Rational) {
    let i = gauss(int(0), int(1));
    let g = |r: &Rational| gauss(r.clone(), int(0));
    let (s, t) = (g(&x.1), g(&y.1));
    let a_ = g(a);
    let factor = a_.clone()
        * ((g(&int(2)) - a_.clone()) * s.clone() + a_.clone() * t.clone() + i.clone())
        / (s.clone() + t.clone() + i);
    (
        x.0.clone() + (y.0.clone() - x.0.clone()) * factor,
        &x.1 + a * (&y.1 - &x.1),
    )
}

fn nonaffine_counterexample() -> Outcome {
    let space = catalog::nonaffine_complex_space(1).space;
    let (report, witness) = check_affine(&space, Strategy::default(), AffineMode::Half);
    if report.verdict != Verdict::Fail {
        return Err(format!("affine check gave {:?}", report.verdict));
    }
    let w = witness.ok_or("no witness")?;
    let pt = |re: i64, im: i64, s: i64| {
        Element::Tuple(vec![
            Element::Gauss(gauss(int(re), int(im))),
            Element::Rat(int(s)),
        ])
    };
    // points (x, s) with x complex: x1=(0,0), y1=(0,1), x2=(1,0), y2=(0,0)
    let expected_inputs = [pt(0, 0, 0), pt(0, 0, 1), pt(1, 0, 0), pt(0, 0, 0)];
    if [&w.x1, &w.y1, &w.x2, &w.y2] != expected_inputs.each_ref() || w.a != Element::Rat(rat(-1, 2))
    {
        return Err(format!(
            "unexpected witness {:?}",
            (&w.x1, &w.y1, &w.x2, &w.y2, &w.a)
        ));
    }
    let expected = Element::Tuple(vec![
        Element::Gauss(gauss(rat(3, 20), int(0))),
        Element::Rat(int(0)),
    ]);
    let difference = w.difference.clone().ok_or("no difference")?;
    if difference != expected {
        return Err(format!("difference {difference} != (3/20, 0)"));
    }
    // independent evaluation of both sides
    let z = |re: i64, s: i64| (gauss(int(re), int(0)), int(s));
    let (x1, y1, x2, y2, a, h) = (z(0, 0), z(0, 1), z(1, 0), z(0, 0), rat(-1, 2), rat(1, 2));
    let lhs = ex9_q(&ex9_q(&x1, &a, &y1), &h, &ex9_q(&x2, &a, &y2));
    let rhs = ex9_q(&ex9_q(&x1, &h, &x2), &a, &ex9_q(&y1, &h, &y2));
    let diff = (lhs.0 - rhs.0, lhs.1 - rhs.1);
    if diff != (gauss(rat(3, 20), int(0)), int(0)) {
        return Err(format!("oracle difference {diff:?}"));
    }
    Ok(format!("difference {difference} (exact)"))
}

fn closed_forms() -> Outcome {
    let n = 500;
    // projectile, k = 1, origin (0, 0), exact
    let pointed = catalog::projectile_space(1, &[int(1)]);
    if pointed.origin != Element::rats([int(0), int(0)]) {
        return Err("projectile origin is not (0, 0)".into());
    }
    let module = space_to_module(&pointed, &two(&pointed.space.algebra)?);
    let pts = pointed
        .space
        .points
        .sample(31, 2 * n)
        .map_err(|e| e.to_string())?;
    let scalars = Carrier::Rational.sample(32, n).map_err(|e| e.to_string())?;
    for (k, a) in scalars.iter().enumerate() {
        let (p, r) = (&pts[2 * k], &pts[2 * k + 1]);
        let (x, s) = (p.rat_components(2).unwrap(), r.rat_components(2).unwrap());
        let (x, s, y, t) = (x[0].clone(), x[1].clone(), s[0].clone(), s[1].clone());
        let a = a.as_rat().unwrap().clone();
        let sum = Element::rats([&x + &y - int(2) * &s * &t, &s + &t]);
        let scaled = Element::rats([&a * &x + &a * (int(1) - &a) * &s * &s, &a * &s]);
        let got_sum = module.add(p, r).map_err(|e| e.to_string())?;
        let got_phi = module
            .phi(&Element::Rat(a.clone()), p)
            .map_err(|e| e.to_string())?;
        if got_sum != sum || got_phi != scaled {
            return Err(format!(
                "projectile at {p}, {r}, {a}: {got_sum} vs {sum}, {got_phi} vs {scaled}"
            ));
        }
    }
    // damped, alpha = 1, tolerance 1e-9
    let pointed = catalog::damped_space(1, 1.0);
    let module = space_to_module(&pointed, &two(&pointed.space.algebra)?);
    let tol = Tolerance::default();
    let pts = pointed
        .space
        .points
        .sample(33, 2 * n)
        .map_err(|e| e.to_string())?;
    let scalars = Carrier::float().sample(34, n).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (k, a) in scalars.iter().enumerate() {
        let (p, r) = (&pts[2 * k], &pts[2 * k + 1]);
        let u = p.float_components(2).unwrap();
        let v = r.float_components(2).unwrap();
        let (x, s, y, t, a) = (u[0], u[1], v[0], v[1], a.as_float().unwrap());
        let sum = [x * t.exp() + y * s.exp(), s + t];
        let scaled = [a * x * (-(1.0 - a) * s).exp(), a * s];
        let got_sum = module
            .add(p, r)
            .map_err(|e| e.to_string())?
            .float_components(2)
            .unwrap();
        let got_phi = module
            .phi(&Element::Float(a), p)
            .map_err(|e| e.to_string())?
            .float_components(2)
            .unwrap();
        for (g, w) in got_sum
            .iter()
            .chain(&got_phi)
            .zip(sum.iter().chain(&scaled))
        {
            if !tol.close(*g, *w) {
                return Err(format!("damped at {p}, {r}, {a}: {g} vs {w}"));
            }
            worst = worst.max((g - w).abs() / w.abs().max(1.0));
        }
    }
    Ok(format!(
        "{n} exact projectile samples; {n} damped samples, worst scaled error {worst:.1e}"
    ))
}

fn roundtrips() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    let z3 = catalog::zmod_module(3, 2).map_err(|e| e.to_string())?;
    reports.push(roundtrip_module(&z3, Strategy::Exhaustive).about("Z3^2"));
    let induced = module_to_space(&z3).map_err(|e| e.to_string())?;
    reports.push(
        roundtrip_space(
            &induced,
            &two(&induced.space.algebra)?,
            Strategy::Exhaustive,
        )
        .about("space of Z3^2"),
    );
    if reports.iter().any(|r| r.strategy.kind != "exhaustive") {
        return Err("Z3 round trips were not enumerated".into());
    }
    let mut spaces = vec![
        catalog::canonical_space(2, catalog::Scalars::Line),
        catalog::projectile_space(1, &[int(1)]),
        catalog::tri_space(),
    ];
    spaces.extend([-1, 0, 1].map(|k| catalog::plane_space(int(k))));
    for s in &spaces {
        reports
            .push(roundtrip_space(s, &two(&s.space.algebra)?, Strategy::default()).about(s.name()));
    }
    require(&reports, "round trip")?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "{} round trips in {:?}",
        reports.len(),
        start.elapsed()
    ))
}

fn derived_laws() -> Outcome {
    let (mut spaces, mut algebras) = (0, 0);
    for entry in catalog::list_catalog() {
        match catalog::build(entry.name, &InstanceParams::new()).map_err(|e| e.to_string())? {
            Structure::Space(s) if entry.kind == Kind::Space => {
                require(
                    &check_y_properties(&s.space, Strategy::default()),
                    entry.name,
                )?;
                spaces += 1;
            }
            Structure::Algebra(a) => {
                require(&check_properties(&a, Strategy::default()), entry.name)?;
                algebras += 1;
            }
            _ => {}
        }
    }
    // the second branch of the lozenge space is not a default entry
    let minus = catalog::lozenge_space(int(1), catalog::Sign::Minus).map_err(|e| e.to_string())?;
    require(
        &check_y_properties(&minus.space, Strategy::default()),
        "lozenge minus",
    )?;
    Ok(format!(
        "Y1-Y10 on {} spaces, (6)-(14) on {algebras} algebras",
        spaces + 1
    ))
}

fn witnesses() -> Outcome {
    let comm = check_commutativity_condition(&catalog::tri_algebra(), Strategy::default());
    let comm_witness = comm
        .witness
        .as_ref()
        .filter(|_| comm.verdict == Verdict::Fail)
        .ok_or("tri-algebra commutes")?;
    let pointed = catalog::nonaffine_complex_space(1);
    let module = space_to_module(&pointed, &two(&pointed.space.algebra)?);
    let reports = check_module(&module, Strategy::default());
    let assoc = reports
        .iter()
        .find(|r| r.law == "add-assoc")
        .ok_or("no add-assoc report")?;
    let w = assoc
        .witness
        .as_ref()
        .filter(|_| assoc.verdict == Verdict::Fail)
        .ok_or("derived + is associative on 500 samples")?;
    for law in ["add-comm", "add-identity", "add-inverse"] {
        let r = reports.iter().find(|r| r.law == law).ok_or(law)?;
        if !r.passed() {
            return Err(format!("{law} should hold: {:?}", r.verdict));
        }
    }
    Ok(format!(
        "tri: a*b != b*a at {}; + not associative at {}",
        comm_witness
            .inputs
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(" "),
        w.inputs
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    ))
}

fn finite_search() -> Outcome {
    let start = Instant::now();
    let one = search_finite(1, false, None).map_err(|e| e.to_string())?;
    let two = search_finite(2, true, None).map_err(|e| e.to_string())?;
    let three = search_finite(3, true, None).map_err(|e| e.to_string())?;
    if one.len() != 1 || !two.is_empty() {
        return Err(format!("sizes 1/2 gave {}/{} models", one.len(), two.len()));
    }
    let z3 = FiniteModel::from_fn(3, (0, 2, 1), |a, b, c| (a + b * c + 2 * b * a) % 3);
    if !three.contains(&z3) {
        return Err(format!("Z3 table missing from {three:?}"));
    }
    for m in one.iter().chain(&three) {
        require(
            &check_algebra(&m.to_algebra(), Strategy::Exhaustive),
            "emitted model",
        )?;
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "1 / 0 / {} models, Z3 present, in {:?}",
        three.len(),
        start.elapsed()
    ))
}

fn morphisms() -> Outcome {
    let (source, target, f) = catalog::intro_morphism();
    let reports = check_algebra_morphism(&f, &source, &target, Strategy::default());
    if !reports.iter().any(|r| r.law == "constant-equivalence") {
        return Err("no constant-equivalence report".into());
    }
    require(&reports, "6t-1")?;
    let id = MorphismPair::identity();
    let mut all = Vec::new();
    let z3 = catalog::zmod_module(3, 2).map_err(|e| e.to_string())?;
    let canon = catalog::canonical_module(2);
    for m in [&z3, &canon] {
        all.extend(transport_morphism(
            &id,
            Endpoints::ModulesToSpaces {
                source: m,
                target: m,
            },
            Strategy::Exhaustive,
        ));
    }
    let z3_space = catalog::zmod_space(3, 2).map_err(|e| e.to_string())?;
    let canon_space = catalog::canonical_space(2, catalog::Scalars::Line);
    for s in [&z3_space, &canon_space] {
        let t = two(&s.space.algebra)?;
        all.extend(transport_morphism(
            &id,
            Endpoints::SpacesToModules {
                source: s,
                source_two: &t,
                target: s,
                target_two: &t,
            },
            Strategy::Exhaustive,
        ));
    }
    require(&all, "identity transport")?;
    Ok(format!("{} + {} morphism laws", reports.len(), all.len()))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn mobi(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mobi"))
        .args(args)
        .output()
        .expect("run mobi")
}

fn dsl_golden() -> Outcome {
    let text = std::fs::read_to_string(data("golden.mobi")).map_err(|e| e.to_string())?;
    let defs = dsl::load(&text).map_err(|e| e.to_string())?;
    let (Definition::Algebra(line), Definition::Space(proj)) = (&defs[0], &defs[1]) else {
        return Err("expected an algebra then a space".into());
    };
    let reference_p = catalog::rational_line_algebra();
    let reference_q = catalog::projectile_space(1, &[int(1)]).space;
    let scalars = Carrier::Rational
        .sample(91, 600)
        .map_err(|e| e.to_string())?;
    let pts = reference_q
        .points
        .sample(92, 400)
        .map_err(|e| e.to_string())?;
    for k in 0..200 {
        let (a, b, c) = (&scalars[3 * k], &scalars[3 * k + 1], &scalars[3 * k + 2]);
        if line.eval_p(a, b, c) != reference_p.eval_p(a, b, c) {
            return Err(format!("p differs at {a}, {b}, {c}"));
        }
        let (x, y) = (&pts[2 * k], &pts[2 * k + 1]);
        if proj.eval_q(x, a, y) != reference_q.eval_q(x, a, y) {
            return Err(format!("q differs at {x}, {a}, {y}"));
        }
    }
    let mut positions = Vec::new();
    for (file, kind, at) in [
        ("syntax_error.mobi", "syntax error", "6:26"),
        ("unbound.mobi", "unbound identifier", "6:28"),
        ("shape_mismatch.mobi", "shape mismatch", "11:26"),
    ] {
        let path = data(file);
        let out = mobi(&["check", path.to_str().unwrap()]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        if out.status.code() != Some(2)
            || !stderr.contains(kind)
            || !stderr.contains(&format!(":{at}:"))
        {
            return Err(format!(
                "{file}: exit {:?}, stderr {stderr:?}",
                out.status.code()
            ));
        }
        positions.push(at);
    }
    Ok(format!(
        "200 shared samples match; diagnostics at {}",
        positions.join(", ")
    ))
}

fn determinism() -> Outcome {
    let path = data("golden.mobi");
    let args = [
        "check",
        path.to_str().unwrap(),
        "--samples",
        "300",
        "--seed",
        "7",
        "--properties",
        "--affine",
    ];
    let (first, second) = (mobi(&args), mobi(&args));
    if first.status.code() != Some(0) {
        return Err(format!(
            "check exited {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        ));
    }
    if first.stdout != second.stdout || first.stdout.is_empty() {
        return Err("reports differ between runs".into());
    }
    let other = mobi(&[
        "check",
        path.to_str().unwrap(),
        "--samples",
        "300",
        "--seed",
        "8",
        "--properties",
        "--affine",
    ]);
    let note = if other.stdout != first.stdout {
        "seed changes the report"
    } else {
        "seed-insensitive"
    };
    Ok(format!("{} identical bytes ({note})", first.stdout.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("exhaustive axiom suite on Z3 and Z5", exhaustive_axioms),
        ("bit-exact non-affine counterexample", nonaffine_counterexample),
        ("closed forms of the derived modules", closed_forms),
        ("round trips", roundtrips),
        ("derived laws on every catalog structure", derived_laws),
        (
            "non-commutativity and non-associativity witnesses",
            witnesses,
        ),
        ("finite model search", finite_search),
        ("morphism suite", morphisms),
        ("definition language", dsl_golden),
        ("determinism of check reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
