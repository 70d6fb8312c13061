//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jetarc::contact::{change_of_variable_probe, cylinder_codim, fiber_dim_formula, fiber_dimension, ContactMode, TargetCondition};
use jetarc::groebner::{Groebner, IdealPresentation};
use jetarc::jetcalc::{arc_substitution_check, jet_ideal, JetPoint};
use jetarc::lifting::{evaluate_at, lift_step, liftable, smith_form, SeriesMatrix, SeriesVector};
use jetarc::mldjets::{ioa_check, mld_jet_estimate, Ambient, PairSpec, SearchBounds, WeightedIdeal};
use jetarc::mldres::{
    cusp_resolution, mld_from_divisors, mld_via_contact, node_resolution, smooth_point_resolution, DivisorRecord,
    MldValue, ResolutionData,
};
use jetarc::polycore::rational::{frac, int};
use jetarc::polycore::{parse_polynomial, Rational, TruncatedSeries, VariableUniverse};
use jetarc::singloci::{generic_ci_reduction, residue_inclusion_check, EmbeddedVariety};
use jetarc::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<std::result::Result<String, String>>;
type Criterion<'a> = (&'static str, u64, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, detail: String) -> std::result::Result<String, String> {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn universe(names: &[&str]) -> VariableUniverse {
    VariableUniverse::new(names).unwrap()
}

fn ideal(u: &VariableUniverse, gens: &[&str]) -> IdealPresentation {
    IdealPresentation::parse(u, gens).unwrap()
}

fn origin(u: &VariableUniverse) -> IdealPresentation {
    IdealPresentation::parse(u, u.names()).unwrap()
}

fn cusp_cylinders(engine: &Groebner) -> Outcome {
    let u = universe(&["x", "y"]);
    let x = EmbeddedVariety::new(ideal(&u, &["x^2 - y^3"]), 1)?;
    let mut worst = Duration::ZERO;
    let mut got = Vec::new();
    for e in [3, 6] {
        let t = Instant::now();
        got.push(cylinder_codim(&x, e, e, engine)?);
        worst = worst.max(t.elapsed());
    }
    let ok = got == [Some(2), Some(4)] && worst < Duration::from_secs(60);
    Ok(check(ok, format!("codims at e = 3, 6: {got:?}")))
}

fn node_fibers(engine: &Groebner) -> Outcome {
    let u = universe(&["x", "y"]);
    let node = ideal(&u, &["x*y"]);
    let zero = JetPoint::new(2, 0, vec![int(0), int(0)])?;
    let mut got = Vec::new();
    for m in 1..=4 {
        let (ring, j) = jet_ideal(&node, m)?;
        got.push(fiber_dimension(&ring, &j, &zero, engine)?);
    }
    let want: Vec<_> = (1..=4).map(|m| Some(m + 1)).collect();
    Ok(check(got == want, format!("fiber dims for m = 1..4: {got:?}")))
}

fn affine_jets(engine: &Groebner) -> Outcome {
    let names = ["x", "y", "z"];
    let mut bad = Vec::new();
    for n in 1..=3 {
        let u = universe(&names[..n]);
        for m in 0..=4 {
            let (_, j) = jet_ideal(&IdealPresentation::zero(u.clone()), m)?;
            if engine.krull_dimension(&j)? != Some((m + 1) * n) {
                bad.push(format!("A^{n}, m = {m}"));
            }
        }
    }
    let u = universe(&["x", "y"]);
    let circle = ideal(&u, &["x^2 + y^2 - 1"]);
    for m in 0..=4 {
        let (_, j) = jet_ideal(&circle, m)?;
        if engine.krull_dimension(&j)? != Some(m + 1) {
            bad.push(format!("circle, m = {m}"));
        }
    }
    Ok(check(bad.is_empty(), if bad.is_empty() { "A^n for n ≤ 3 and the circle".into() } else { bad.join(", ") }))
}

fn random_polynomial(rng: &mut ChaCha8Rng, names: &[&str]) -> String {
    let mut text = String::new();
    for k in 0..rng.gen_range(1..=4) {
        let c: i64 = rng.gen_range(-5..=5);
        let sign = if c < 0 { "-" } else { "+" };
        if k > 0 {
            text.push_str(&format!(" {sign} "));
        } else if c < 0 {
            text.push('-');
        }
        text.push_str(&c.abs().to_string());
        for _ in 0..rng.gen_range(0..=3) {
            text.push('*');
            text.push_str(names[rng.gen_range(0..names.len())]);
        }
    }
    text
}

fn substitution_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let names = ["x", "y", "z"];
    let mut failures = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let u = universe(&names[..n]);
        let f = parse_polynomial(&random_polynomial(&mut rng, &names[..n]), &u)?;
        let m = rng.gen_range(0..=4);
        let coords = (0..n * (m + 1)).map(|_| frac(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
        let a = JetPoint::new(n, m, coords)?;
        if !arc_substitution_check(&f, &u, &a)? {
            failures += 1;
        }
    }
    Ok(check(failures == 0, format!("{failures} failures in 100 random cases")))
}

fn lifting_criterion() -> Outcome {
    let u = universe(&["x", "y"]);
    let f = vec![parse_polynomial("x^2 - y^3", &u)?];
    let exact = SeriesVector::from_ints(&[&[0, 0, 0, 1], &[0, 0, 1]], 4);
    let perturbed = SeriesVector::from_ints(&[&[0, 0, 0, 1], &[0, 0, 1, 1]], 4);
    let stuck = SeriesVector::from_ints(&[&[0], &[0, 0, 1]], 5);
    let got = [liftable(&f, &exact, 3, 3)?, liftable(&f, &perturbed, 3, 3)?, liftable(&f, &stuck, 4, 4)?];
    let mut w = perturbed;
    for m in 3..7 {
        w = lift_step(&f, &w, m, 3, None)?;
    }
    let vanishes = w.truncation() == 8 && evaluate_at(&f, &w)?.entries().iter().all(TruncatedSeries::is_zero);
    let ok = got == [true, true, false] && vanishes;
    Ok(check(ok, format!("liftable: {got:?}; F(lift) ≡ 0 mod t^{}: {vanishes}", w.truncation())))
}

fn fiber_formula(engine: &Groebner) -> Outcome {
    let u = universe(&["x", "y"]);
    let (ring, j) = jet_ideal(&ideal(&u, &["x^2 - y^3"]), 6)?;
    let gamma = JetPoint::from_series(
        &[TruncatedSeries::from_ints(&[0, 0, 0, 1], 4), TruncatedSeries::from_ints(&[0, 0, 1], 4)],
        3,
    )?;
    let got = fiber_dimension(&ring, &j, &gamma, engine)?;
    let want = fiber_dim_formula(3, 6, 3, 1)?;
    Ok(check(got == Some(want) && want == 6, format!("fiber dim {got:?}, formula {want}")))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> SeriesMatrix {
    let rows = rng.gen_range(1..=3);
    let cols = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=6);
    let entries = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let lead = rng.gen_range(0..=k);
                    let coeffs: Vec<Rational> =
                        (0..k).map(|j| if j < lead { int(0) } else { int(rng.gen_range(-3..=3)) }).collect();
                    TruncatedSeries::from_slice(&coeffs, k)
                })
                .collect()
        })
        .collect();
    SeriesMatrix::new(entries).unwrap()
}

fn smith_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for case in 0..50 {
        let a = random_matrix(&mut rng);
        let s = smith_form(&a);
        let k = a.truncation();
        let mut sum = 0;
        let diag_ok = s.u.mul(&a)?.mul(&s.v)? == s.diagonal()
            && s.u.determinant()?.is_unit()
            && s.v.determinant()?.is_unit();
        let mut minors_ok = true;
        for (i, o) in s.orders.iter().enumerate() {
            sum += o;
            if sum.min(k) != a.minor_ideal_order(i + 1) {
                minors_ok = false;
            }
        }
        if !(diag_ok && minors_ok) {
            failures.push(case);
        }
    }
    Ok(check(failures.is_empty(), format!("50 random matrices, failing cases {failures:?}")))
}

fn quadric_cone_resolutions() -> (ResolutionData, ResolutionData) {
    let cone = ResolutionData::new(2, 1, vec![], vec![DivisorRecord::new("E", int(0), 1, vec![], true, true)], &[])
        .unwrap();
    let ambient = ResolutionData::new(
        3,
        1,
        vec![int(1)],
        vec![
            DivisorRecord::new("E", int(2), 0, vec![2], true, true),
            DivisorRecord::new("X~", int(0), 0, vec![1], false, true),
        ],
        &[vec![0, 1]],
    )
    .unwrap();
    (cone, ambient)
}

fn dual_routes() -> Outcome {
    let fin = MldValue::Finite;
    let mut corpus = vec![("smooth point".to_string(), smooth_point_resolution(), fin(int(2)))];
    let cusp = [(frac(0, 1), fin(int(2))), (frac(1, 2), fin(int(1))), (frac(3, 4), fin(frac(1, 2))), (frac(5, 6), fin(int(0))), (int(1), MldValue::NegInfinity)];
    for (q, v) in cusp {
        corpus.push((format!("cusp q={q}"), cusp_resolution(q), v));
    }
    for (q, v) in [(frac(1, 2), fin(int(1))), (int(1), fin(int(0)))] {
        corpus.push((format!("node q={q}"), node_resolution(q), v));
    }
    let (cone, ambient) = quadric_cone_resolutions();
    corpus.push(("quadric cone".into(), cone, fin(int(1))));
    corpus.push(("quadric cone in A^3".into(), ambient, fin(int(1))));
    let mut bad = Vec::new();
    for (name, data, want) in &corpus {
        let a = mld_from_divisors(data)?;
        let b = mld_via_contact(data, 3)?.value;
        if a != b || &a != want {
            bad.push(format!("{name}: {a} vs {b}, expected {want}"));
        }
    }
    let detail = if bad.is_empty() { format!("{} cases agree", corpus.len()) } else { bad.join("; ") };
    Ok(check(bad.is_empty(), detail))
}

fn jets_vs_resolution(engine: &Groebner) -> Outcome {
    let u = universe(&["x", "y"]);
    let bounds = SearchBounds::new(vec![8], 8, 0, 0);
    let mut parts = Vec::new();
    let mut ok = true;
    for (q, want) in [(frac(1, 2), int(1)), (frac(5, 6), int(0))] {
        let y = WeightedIdeal { ideal: ideal(&u, &["x^2 - y^3"]), q: q.clone() };
        let pair = PairSpec::new(Ambient::Smooth(u.clone()), vec![y], origin(&u))?;
        let est = mld_jet_estimate(&pair, &bounds, engine)?;
        let oracle = mld_from_divisors(&cusp_resolution(q.clone()))?;
        ok &= est.value == MldValue::Finite(want.clone()) && est.value == oracle && !est.upper_bound_only;
        let w = est.witness.map(|c| c.w).unwrap_or_default();
        if q == frac(5, 6) {
            ok &= w == [6];
        }
        parts.push(format!("q={q}: {} (witness w = {w:?})", est.value));
    }
    Ok(check(ok, parts.join(", ")))
}

fn inversion_of_adjunction(engine: &Groebner) -> Outcome {
    let u = universe(&["x", "y", "z"]);
    let mut parts = Vec::new();
    let mut ok = true;
    for g in ["x*y - z^2", "x^2 + y^2 + z^2"] {
        let x = EmbeddedVariety::new(ideal(&u, &[g]), 2)?;
        let r = ioa_check(&x, vec![], origin(&u), &SearchBounds::new(vec![], 4, 2, 0), engine)?;
        let one = MldValue::Finite(int(1));
        ok &= r.agree && r.left.value == one && r.right.value == one;
        parts.push(format!("{g}: left {} right {}", r.left.value, r.right.value));
    }
    Ok(check(ok, parts.join(", ")))
}

fn change_of_variable(engine: &Groebner) -> Outcome {
    let u = universe(&["x", "y"]);
    let f = vec![parse_polynomial("x", &u)?, parse_polynomial("x*y", &u)?];
    let target = [TargetCondition { subscheme: origin(&u), order: 1, mode: ContactMode::AtLeast }];
    let r = change_of_variable_probe(&f, &target, 2, 3, engine)?;
    let ok = r.agree && r.direct_codim == Some(2) && r.transformed_min == Some(2) && r.argmin == Some(1);
    Ok(check(ok, format!("direct {:?}, transformed {:?} at e = {:?}", r.direct_codim, r.transformed_min, r.argmin)))
}

fn appendix_inclusion(engine: &Groebner) -> Outcome {
    let u = universe(&["x0", "x1", "x2", "x3"]);
    let x = EmbeddedVariety::new(ideal(&u, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]), 2)?;
    let r = generic_ci_reduction(&x, 0, engine)?;
    let ok = residue_inclusion_check(&r, engine)?;
    Ok(check(ok, format!("residue inclusion with seed {}: {ok}", r.seed)))
}

fn main() -> ExitCode {
    let engine = Groebner::default();
    let criteria: Vec<Criterion> = vec![
        ("cusp cylinder codimensions", 120, Box::new(|| cusp_cylinders(&engine))),
        ("node fiber dimension", 30, Box::new(|| node_fibers(&engine))),
        ("affine-space jets", 30, Box::new(|| affine_jets(&engine))),
        ("substitution identity", 60, Box::new(substitution_identity)),
        ("lifting criterion", 10, Box::new(lifting_criterion)),
        ("fiber formula", 60, Box::new(|| fiber_formula(&engine))),
        ("Smith-form invariants", 30, Box::new(smith_invariants)),
        ("mld dual-route agreement", 30, Box::new(dual_routes)),
        ("jet-vs-resolution agreement", 300, Box::new(|| jets_vs_resolution(&engine))),
        ("inversion of adjunction", 300, Box::new(|| inversion_of_adjunction(&engine))),
        ("change-of-variable probe", 60, Box::new(|| change_of_variable(&engine))),
        ("residue inclusion", 120, Box::new(|| appendix_inclusion(&engine))),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(Ok(d)) if secs < *limit as f64 => (true, d),
            Ok(Ok(d)) => (false, format!("{d}; took {secs:.1}s, limit {limit}s")),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("[{}] {:>2}. {name} ({secs:.2}s): {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
