mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jetarc::contact::{
    change_of_variable_probe, constructible_dimension, contact_locus, cylinder_codim, ContactSpec,
};
use jetarc::groebner::{Dimension, Groebner};
use jetarc::jetcalc::jet_ideal;
use jetarc::lifting::{in_image, lift_step, liftable, SeriesVector};
use jetarc::mldjets::{ioa_check, lc_check, mld_jet_estimate, Ambient, Cell, MldEstimate, PairFile};
use jetarc::mldres::{
    contact_codim_combinatorial, minimizing_divisor, mld_from_divisors, mld_via_contact, ResolutionData,
};
use jetarc::polycore::rational::parse_rational;
use jetarc::polycore::Rational;
use jetarc::singloci::{generic_ci_reduction, jacobian_ideal, residue_inclusion_check, singular_locus_dimension};
use jetarc::{Error, Result};
use serde_json::{json, Value};

use input::{in_file, load_series, IdealFile, ProbeFile};

#[derive(Parser)]
#[command(name = "jetarc", version, about = "Exact computations with jet schemes, contact loci and minimal log discrepancies")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Pair-reduction budget of each Groebner basis computation
    #[arg(long, global = true, default_value_t = 50_000)]
    max_pairs: usize,

    /// Seed for the random combinations used by `jacobian`
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generators of the jet ideal of X at level m
    JetEqs(IdealLevel),
    /// Dimension of the jet scheme J_m(X)
    JetDim(IdealLevel),
    /// Jacobian ideal, singular locus and a certified complete intersection
    Jacobian(IdealOnly),
    /// Dimension of the contact locus Cont^{≥e}(Z)_m (or Cont^e with --exact)
    ContactDim(ContactArgs),
    /// Codimension of the arcs on X with Jacobian order e
    CylinderCodim(CylinderArgs),
    /// Lifting criterion and one lift step for an m-jet
    Lift(LiftArgs),
    /// Is a p-jet in the image of J_m(X) → J_p(X)?
    InImage(ImageArgs),
    /// mld from log-resolution data, by divisors and by contact loci
    MldRes(MldResArgs),
    /// mld from dimensions of jet-level contact loci
    MldJets(PairArgs),
    /// Log canonicity near W within search bounds
    LcCheck(PairArgs),
    /// Compare mld(W; X, Y|X) with mld(W; A, cX + Y)
    IoaCheck(PairArgs),
    /// Compare a contact codimension with its change-of-variable transform
    CovProbe(ProbeArgs),
}

#[derive(Args)]
struct IdealOnly {
    #[arg(long)]
    ideal: PathBuf,
}

#[derive(Args)]
struct IdealLevel {
    #[arg(long)]
    ideal: PathBuf,
    #[arg(long)]
    m: usize,
}

#[derive(Args)]
struct ContactArgs {
    /// Z in `gens`; the optional `ambient` field restricts to jets of X
    #[arg(long)]
    ideal: PathBuf,
    #[arg(long)]
    order: usize,
    #[arg(long)]
    m: usize,
    /// Exact order instead of "at least"
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct CylinderArgs {
    #[arg(long)]
    ideal: PathBuf,
    #[arg(long = "jac-order")]
    jac_order: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Args)]
struct LiftArgs {
    /// Complete intersection F = 0
    #[arg(long)]
    ideal: PathBuf,
    /// The jet as `{"series": [[c0, c1, ...], ...]}`
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long = "jac-order")]
    jac_order: usize,
}

#[derive(Args)]
struct ImageArgs {
    #[arg(long)]
    ideal: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: usize,
    #[arg(long = "jac-order")]
    jac_order: usize,
}

#[derive(Args)]
struct MldResArgs {
    #[arg(long)]
    data: PathBuf,
    /// Override the weights q_i (repeat once per component)
    #[arg(long)]
    q: Vec<String>,
    /// Also report the contact codimension at these orders w_i
    #[arg(long)]
    w: Vec<u64>,
    /// Order ℓ along the Nash subscheme for --w
    #[arg(long, default_value_t = 0)]
    ell: u64,
    /// Radius Σν_j of the multiplicity search
    #[arg(long, default_value_t = 3)]
    nu_max: u64,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    pair: PathBuf,
    /// Override the weights q_i (repeat once per component)
    #[arg(long)]
    q: Vec<String>,
    /// Override the order bounds w_i (repeat once per component)
    #[arg(long)]
    w: Vec<usize>,
    /// Override the largest jet level
    #[arg(long)]
    m: Option<usize>,
    /// Override the largest Jacobian order
    #[arg(long = "jac-order")]
    jac_order: Option<usize>,
}

#[derive(Args)]
struct ProbeArgs {
    /// `{"vars", "map", "target": [{"gens", "order", "exact"}]}`
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    m: usize,
    /// Largest order of the Jacobian determinant (default m)
    #[arg(long = "jac-order")]
    jac_order: Option<usize>,
}

/// A command result: the JSON report and its text rendering.
struct Report {
    json: Value,
    text: String,
}

fn dim_json(d: Dimension) -> Value {
    d.map_or(json!("empty"), |d| json!(d))
}

fn dim_text(d: Dimension) -> String {
    d.map_or("empty".to_string(), |d| d.to_string())
}

fn parse_weights(qs: &[String]) -> Result<Vec<Rational>> {
    qs.iter()
        .map(|q| parse_rational(q).map_err(|_| Error::Invalid(format!("--q {q}: expected a rational a/b"))))
        .collect()
}

fn series_json(v: &SeriesVector) -> Value {
    Value::Array(
        v.entries()
            .iter()
            .map(|s| Value::Array(s.coeffs().iter().map(|c| json!(c.to_string())).collect()))
            .collect(),
    )
}

fn jet_eqs(a: &IdealLevel) -> Result<Report> {
    let f = IdealFile::load(&a.ideal)?;
    let (ring, j) = in_file(&a.ideal, jet_ideal(&f.ideal, a.m))?;
    let gens = j.display();
    let text = gens.iter().map(|g| format!("{g}\n")).collect::<String>();
    Ok(Report {
        json: json!({"command": "jet-eqs", "m": a.m, "vars": ring.universe().names(), "generators": gens}),
        text,
    })
}

fn jet_dim(a: &IdealLevel, engine: &Groebner) -> Result<Report> {
    let f = IdealFile::load(&a.ideal)?;
    let (_, j) = in_file(&a.ideal, jet_ideal(&f.ideal, a.m))?;
    let d = engine.krull_dimension(&j)?;
    Ok(Report {
        json: json!({"command": "jet-dim", "m": a.m, "dimension": dim_json(d)}),
        text: format!("dim J_{}(X) = {}\n", a.m, dim_text(d)),
    })
}

fn jacobian(a: &IdealOnly, seed: u64, engine: &Groebner) -> Result<Report> {
    let f = IdealFile::load(&a.ideal)?;
    let x = in_file(&a.ideal, f.variety())?;
    let jac = jacobian_ideal(&x)?;
    let sing = singular_locus_dimension(&x, engine)?;
    let mut json = json!({
        "command": "jacobian",
        "jacobian_ideal": jac.display(),
        "singular_locus_dimension": dim_json(sing),
    });
    let mut text = format!("Jacobian ideal: {}\nsingular locus dimension: {}\n", jac.display().join(", "), dim_text(sing));
    if x.ideal().generators().len() > x.codim() && x.codim() > 0 {
        let r = generic_ci_reduction(&x, seed, engine)?;
        let ok = residue_inclusion_check(&r, engine)?;
        json["ci_reduction"] = json!({
            "seed": r.seed,
            "generators": r.ci_ideal.display(),
            "residue_ideal": r.residue_ideal.display(),
            "residue_inclusion": ok,
        });
        text.push_str(&format!(
            "complete intersection (seed {}): {}\nresidue ideal: {}\nminors inside residue + I_X: {ok}\n",
            r.seed,
            r.ci_ideal.display().join(", "),
            r.residue_ideal.display().join(", ")
        ));
    }
    Ok(Report { json, text })
}

fn contact_dim(a: &ContactArgs, engine: &Groebner) -> Result<Report> {
    let f = IdealFile::load(&a.ideal)?;
    let spec = if a.exact {
        ContactSpec::exactly(f.ideal.clone(), a.order, a.m)
    } else {
        ContactSpec::at_least(f.ideal.clone(), a.order, a.m)
    };
    let locus = in_file(&a.ideal, contact_locus(&spec, f.ambient.as_ref()))?;
    let d = constructible_dimension(&locus, engine)?;
    let rel = if a.exact { "=" } else { "≥" };
    Ok(Report {
        json: json!({"command": "contact-dim", "order": a.order, "exact": a.exact, "m": a.m, "dimension": dim_json(d)}),
        text: format!("dim {{ord {rel} {}}} at level {} = {}\n", a.order, a.m, dim_text(d)),
    })
}

fn cylinder(a: &CylinderArgs, engine: &Groebner) -> Result<Report> {
    let f = IdealFile::load(&a.ideal)?;
    let x = in_file(&a.ideal, f.variety())?;
    let c = cylinder_codim(&x, a.jac_order, a.m, engine)?;
    Ok(Report {
        json: json!({"command": "cylinder-codim", "jac_order": a.jac_order, "m": a.m, "codim": dim_json(c)}),
        text: format!("{}\n", dim_text(c)),
    })
}

fn lift(a: &LiftArgs) -> Result<Report> {
    let f = IdealFile::load(&a.ideal)?;
    let fs = f.ideal.generators().to_vec();
    let u = load_series(&a.data, f.universe.len(), a.m + 1)?;
    let ok = liftable(&fs, &u, a.m, a.jac_order)?;
    let mut json = json!({"command": "lift", "m": a.m, "jac_order": a.jac_order, "liftable": ok});
    let mut text = format!("liftable: {ok}\n");
    if ok {
        let w = lift_step(&fs, &u, a.m, a.jac_order, None)?;
        text.push_str(&format!("lift to level {}: {}\n", a.m + 1, w.display()));
        json["lift"] = series_json(&w);
    }
    Ok(Report { json, text })
}

fn image(a: &ImageArgs) -> Result<Report> {
    let f = IdealFile::load(&a.ideal)?;
    let fs = f.ideal.generators().to_vec();
    let u = load_series(&a.data, f.universe.len(), a.p + 1)?;
    let ok = in_image(&fs, &u, a.m, a.p, a.jac_order)?;
    Ok(Report {
        json: json!({"command": "in-image", "m": a.m, "p": a.p, "jac_order": a.jac_order, "in_image": ok}),
        text: format!("in image of J_{} → J_{}: {ok}\n", a.m, a.p),
    })
}

fn mld_res(a: &MldResArgs) -> Result<Report> {
    let text = input::read(&a.data)?;
    let mut data = in_file(&a.data, ResolutionData::from_json_str(&text))?;
    if !a.q.is_empty() {
        data = data.with_weights(parse_weights(&a.q)?)?;
    }
    let by_div = in_file(&a.data, mld_from_divisors(&data))?;
    let witness = minimizing_divisor(&data).map(|j| data.divisors[j].name.clone());
    let by_contact = mld_via_contact(&data, a.nu_max)?;
    let cw = by_contact.witness.as_ref();
    let mut json = json!({
        "command": "mld-res",
        "weights": data.weights.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "mld": by_div.to_json(),
        "witness_divisor": witness,
        "mld_via_contact": by_contact.value.to_json(),
        "contact_witness": cw.map(|c| json!({"w": c.w, "ell": c.ell, "codim": c.codim.to_string()})),
        "agree": by_div == by_contact.value,
    });
    let mut text = format!("mld = {by_div}\n");
    if let Some(name) = &witness {
        text.push_str(&format!("witness divisor: {name}\n"));
    }
    text.push_str(&format!("via contact loci: {}", by_contact.value));
    if let Some(c) = cw {
        text.push_str(&format!(" (w = {:?}, ell = {}, codim {})", c.w, c.ell, c.codim));
    }
    text.push('\n');
    if !a.w.is_empty() {
        let c = contact_codim_combinatorial(&data, &a.w, a.ell)?;
        json["contact_codim"] = c.as_ref().map_or(json!("empty"), |c| json!(c.codim.to_string()));
        text.push_str(&format!(
            "codim at w = {:?}, ell = {}: {}\n",
            a.w,
            a.ell,
            c.map_or("empty".to_string(), |c| c.codim.to_string())
        ));
    }
    Ok(Report { json, text })
}

fn load_pair(a: &PairArgs) -> Result<PairFile> {
    let text = input::read(&a.pair)?;
    let mut pf = in_file(&a.pair, PairFile::from_json_str(&text))?;
    if !a.q.is_empty() {
        let qs = parse_weights(&a.q)?;
        if qs.len() != pf.pair.y.len() {
            return Err(Error::Invalid(format!("--q given {} times for {} components of Y", qs.len(), pf.pair.y.len())));
        }
        for (yi, q) in pf.pair.y.iter_mut().zip(qs) {
            yi.q = q;
        }
    }
    if !a.w.is_empty() {
        pf.bounds.w_max = a.w.clone();
    }
    if let Some(m) = a.m {
        pf.bounds.m_max = m;
    }
    if let Some(e) = a.jac_order {
        pf.bounds.e_max = e;
    }
    Ok(pf)
}

fn cell_json(c: &Cell) -> Value {
    json!({"w": c.w, "e": c.e, "eprime": c.eprime, "m": c.m, "dim": c.dim, "value": c.value.to_string()})
}

fn estimate_json(e: &MldEstimate) -> Value {
    json!({
        "value": e.value.to_json(),
        "upper_bound_only": e.upper_bound_only,
        "witness": e.witness.as_ref().map(cell_json),
        "cells": e.cells,
    })
}

fn estimate_text(e: &MldEstimate) -> String {
    let mut s = e.value.to_string();
    if e.upper_bound_only {
        s.push_str(" (upper bound only)");
    }
    if let Some(c) = &e.witness {
        s.push_str(&format!(" at w = {:?}, e = {}, e' = {}, m = {}", c.w, c.e, c.eprime, c.m));
    }
    s
}

fn mld_jets(a: &PairArgs, engine: &Groebner) -> Result<Report> {
    let pf = load_pair(a)?;
    let est = in_file(&a.pair, mld_jet_estimate(&pf.pair, &pf.bounds, engine))?;
    let mut json = estimate_json(&est);
    json["command"] = json!("mld-jets");
    Ok(Report { json, text: format!("mld = {}\n", estimate_text(&est)) })
}

fn lc(a: &PairArgs, engine: &Groebner) -> Result<Report> {
    let pf = load_pair(a)?;
    let r = in_file(&a.pair, lc_check(&pf.pair, &pf.bounds, engine))?;
    let cert = r.certificate.as_ref().map(|c| {
        json!({"cell": cell_json(&c.cell), "codim": c.codim, "ell": c.ell, "threshold": c.threshold.to_string()})
    });
    let mut text = format!("log canonical within bounds: {}\n", r.log_canonical);
    if let Some(c) = &r.certificate {
        text.push_str(&format!(
            "violated at w = {:?}, ell = {}: codim {} < {}\n",
            c.cell.w, c.ell, c.codim, c.threshold
        ));
    }
    Ok(Report {
        json: json!({"command": "lc-check", "log_canonical": r.log_canonical, "certificate": cert, "cells": r.cells}),
        text,
    })
}

fn ioa(a: &PairArgs, engine: &Groebner) -> Result<Report> {
    let pf = load_pair(a)?;
    let Ambient::Variety(x) = &pf.pair.ambient else {
        return Err(Error::Invalid(format!("{}: ioa-check needs a `variety` block", a.pair.display())));
    };
    if pf.pair.jr.is_some() {
        return Err(Error::Invalid(format!("{}: ioa-check handles complete intersections only, drop `jr`", a.pair.display())));
    }
    let r = in_file(&a.pair, ioa_check(x, pf.pair.y.clone(), pf.pair.w.clone(), &pf.bounds, engine))?;
    Ok(Report {
        json: json!({
            "command": "ioa-check",
            "left": estimate_json(&r.left),
            "right": estimate_json(&r.right),
            "agree": r.agree,
        }),
        text: format!(
            "mld(W; X, Y|X) = {}\nmld(W; A, cX + Y) = {}\nagree: {}\n",
            estimate_text(&r.left),
            estimate_text(&r.right),
            r.agree
        ),
    })
}

fn probe(a: &ProbeArgs, engine: &Groebner) -> Result<Report> {
    let p = ProbeFile::load(&a.data)?;
    let e_max = a.jac_order.unwrap_or(a.m);
    let r = in_file(&a.data, change_of_variable_probe(&p.map, &p.target, e_max, a.m, engine))?;
    let per_e: Vec<Value> = r.per_e.iter().map(|&(e, c)| json!({"e": e, "codim": dim_json(c)})).collect();
    let mut text = format!("direct codim: {}\n", dim_text(r.direct_codim));
    for &(e, c) in &r.per_e {
        text.push_str(&format!("  e = {e}: codim {}\n", dim_text(c)));
    }
    text.push_str(&format!(
        "transformed minimum: {} (e = {})\nagree: {}\n",
        dim_text(r.transformed_min),
        r.argmin.map_or("-".to_string(), |e| e.to_string()),
        r.agree
    ));
    Ok(Report {
        json: json!({
            "command": "cov-probe",
            "direct_codim": dim_json(r.direct_codim),
            "per_e": per_e,
            "transformed_min": dim_json(r.transformed_min),
            "argmin": r.argmin,
            "agree": r.agree,
        }),
        text,
    })
}

fn run(cli: &Cli) -> Result<Report> {
    let engine = Groebner::new(cli.max_pairs);
    match &cli.command {
        Command::JetEqs(a) => jet_eqs(a),
        Command::JetDim(a) => jet_dim(a, &engine),
        Command::Jacobian(a) => jacobian(a, cli.seed, &engine),
        Command::ContactDim(a) => contact_dim(a, &engine),
        Command::CylinderCodim(a) => cylinder(a, &engine),
        Command::Lift(a) => lift(a),
        Command::InImage(a) => image(a),
        Command::MldRes(a) => mld_res(a),
        Command::MldJets(a) => mld_jets(a, &engine),
        Command::LcCheck(a) => lc(a, &engine),
        Command::IoaCheck(a) => ioa(a, &engine),
        Command::CovProbe(a) => probe(a, &engine),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Invariant(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("report serializes"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                let kind = match exit_code(&e) {
                    3 => "budget",
                    4 => "invariant",
                    _ => "validation",
                };
                println!("{}", serde_json::to_string_pretty(&json!({"error": e.to_string(), "kind": kind})).unwrap());
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
