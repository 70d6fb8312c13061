//! Minimal log discrepancies from dimensions of jet-level contact loci,
//! log canonicity checks, and the inversion-of-adjunction comparison for
//! complete intersections.

use num_traits::{Signed, Zero};
use serde::Deserialize;
use serde_json::Value;

use crate::contact::{ConstructibleLocus, ContactMode};
use crate::error::{invalid, Error, Result};
use crate::groebner::{Groebner, IdealPresentation};
use crate::jetcalc::JetRing;
use crate::mldres::{rational_from_json, MldValue};
use crate::polycore::rational::int;
use crate::polycore::{Rational, VariableUniverse};
use crate::singloci::{jacobian_minors, singular_locus_dimension, EmbeddedVariety};

/// The space X of the pair: a smooth affine space or a subvariety of one.
#[derive(Clone, Debug)]
pub enum Ambient {
    Smooth(VariableUniverse),
    Variety(EmbeddedVariety),
}

impl Ambient {
    pub fn universe(&self) -> &VariableUniverse {
        match self {
            Ambient::Smooth(u) => u,
            Ambient::Variety(x) => x.ideal().universe(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Ambient::Smooth(u) => u.len(),
            Ambient::Variety(x) => x.dim(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightedIdeal {
    pub ideal: IdealPresentation,
    pub q: Rational,
}

/// (X, Σ q_i Y_i) along W, with the non-lci ideal J_r (unit when absent).
#[derive(Clone, Debug)]
pub struct PairSpec {
    pub ambient: Ambient,
    pub y: Vec<WeightedIdeal>,
    pub w: IdealPresentation,
    pub jr: Option<IdealPresentation>,
    pub r: u64,
}

impl PairSpec {
    pub fn new(ambient: Ambient, y: Vec<WeightedIdeal>, w: IdealPresentation) -> Result<Self> {
        let spec = Self { ambient, y, w, jr: None, r: 1 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let u = self.ambient.universe();
        if self.r == 0 {
            return invalid("the index r must be positive");
        }
        for yi in &self.y {
            if yi.q.is_negative() {
                return invalid("weights q_i must be nonnegative");
            }
            if yi.ideal.universe() != u {
                return invalid("Y_i lives in a different ring");
            }
        }
        if self.w.universe() != u || self.jr.as_ref().is_some_and(|j| j.universe() != u) {
            return invalid("W and J_r must live in the ambient ring");
        }
        if self.w.generators().iter().all(|g| g.is_zero()) {
            return invalid("W must be a proper closed subset");
        }
        Ok(())
    }

    fn jr_is_unit(&self, engine: &Groebner) -> Result<bool> {
        match &self.jr {
            None => Ok(true),
            Some(j) => Ok(engine.krull_dimension(j)?.is_none()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub w_max: Vec<usize>,
    pub m_max: usize,
    pub e_max: usize,
    pub eprime_max: usize,
}

impl SearchBounds {
    pub fn new(w_max: Vec<usize>, m_max: usize, e_max: usize, eprime_max: usize) -> Self {
        Self { w_max, m_max, e_max, eprime_max }
    }

    fn validate(&self, s: usize) -> Result<()> {
        if self.w_max.len() != s {
            return invalid(format!("{} order bounds for {s} components of Y", self.w_max.len()));
        }
        let w = self.w_max.iter().copied().max().unwrap_or(0);
        let need = (2 * self.e_max).max(self.e_max + self.eprime_max).max(self.e_max + w);
        if self.m_max < need {
            return invalid(format!("m_max = {} is below max(2e, e+e', e+w) = {need}", self.m_max));
        }
        Ok(())
    }
}

/// One evaluated cell (w, e, e', m) of the jet-level formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub w: Vec<usize>,
    pub e: usize,
    pub eprime: usize,
    pub m: usize,
    pub dim: usize,
    /// (m+1)·dim X + e'/r − Σ q_i w_i − dim
    pub value: Rational,
    pub on_boundary: bool,
}

fn w_vectors(max: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in max {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |k| {
                    let mut v = v.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

/// dim of Cont^{≥w}(Y)_m ∩ Cont^e(Jac_X)_m ∩ Cont^{e'}(J_r)_m ∩ Cont^{≥1}(W)_m
/// inside J_m(X); `None` when empty.
pub fn cell_dimension(
    pair: &PairSpec,
    w: &[usize],
    e: usize,
    eprime: usize,
    m: usize,
    engine: &Groebner,
) -> Result<Option<usize>> {
    let ring = JetRing::new(pair.ambient.universe(), m)?;
    let mut locus = ConstructibleLocus::full(ring);
    if let Ambient::Variety(x) = &pair.ambient {
        let j = locus.ring.jet_ideal(x.ideal())?;
        locus.add_closed(j.generators().iter().cloned());
        let minors = IdealPresentation::new(
            x.ideal().universe().clone(),
            jacobian_minors(x.ideal().generators(), x.codim(), x.ambient_dim()),
        )?;
        locus.add_contact(&minors, e, ContactMode::Exactly)?;
    }
    if let Some(jr) = &pair.jr {
        locus.add_contact(jr, eprime, ContactMode::Exactly)?;
    }
    for (yi, &wi) in pair.y.iter().zip(w) {
        if wi > 0 {
            locus.add_contact(&yi.ideal, wi, ContactMode::AtLeast)?;
        }
    }
    locus.add_contact(&pair.w, 1, ContactMode::AtLeast)?;
    locus.projected_dimension(m, engine)
}

/// Evaluates every admissible cell within the bounds. For smooth X only
/// e = e' = 0 occurs; when J_r is the unit ideal only e' = 0 does. For each
/// (w, e, e') the value is computed at every m in the admissible window and
/// must not depend on m.
pub fn scan_cells(pair: &PairSpec, bounds: &SearchBounds, engine: &Groebner) -> Result<Vec<Cell>> {
    pair.validate()?;
    let smooth = matches!(pair.ambient, Ambient::Smooth(_));
    let jr_unit = pair.jr_is_unit(engine)?;
    let e_top = if smooth { 0 } else { bounds.e_max };
    let ep_top = if smooth || jr_unit { 0 } else { bounds.eprime_max };
    let effective = SearchBounds { e_max: e_top, eprime_max: ep_top, ..bounds.clone() };
    effective.validate(pair.y.len())?;
    let n = pair.ambient.dim();
    let unit_free = PairSpec { jr: if jr_unit { None } else { pair.jr.clone() }, ..pair.clone() };
    let mut cells = Vec::new();
    for w in w_vectors(&bounds.w_max) {
        for e in 0..=e_top {
            for eprime in 0..=ep_top {
                let wmax = w.iter().copied().max().unwrap_or(0);
                let lo = (2 * e).max(e + eprime).max(e + wmax);
                let on_boundary = w.iter().zip(&bounds.w_max).any(|(a, b)| a == b)
                    || (!smooth && e == e_top)
                    || (!smooth && !jr_unit && eprime == ep_top);
                let mut first: Option<Cell> = None;
                for m in lo..=bounds.m_max {
                    let dim = cell_dimension(&unit_free, &w, e, eprime, m, engine)?;
                    let cell = dim.map(|d| {
                        let mut value = int(((m + 1) * n) as i64) + Rational::new(eprime.into(), pair.r.into())
                            - int(d as i64);
                        for (yi, &wi) in pair.y.iter().zip(&w) {
                            value -= &yi.q * int(wi as i64);
                        }
                        Cell { w: w.clone(), e, eprime, m, dim: d, value, on_boundary }
                    });
                    match (&first, cell) {
                        (None, Some(c)) if m == lo => first = Some(c),
                        (None, None) if m == lo => break,
                        (Some(f), Some(c)) if f.value == c.value => {}
                        (f, c) => {
                            return Err(Error::Invariant(format!(
                                "value for w = {w:?}, e = {e}, e' = {eprime} moved with m: {:?} vs {:?} at m = {m}",
                                f.as_ref().map(|x| x.value.to_string()),
                                c.map(|x| x.value.to_string())
                            )))
                        }
                    }
                }
                cells.extend(first);
            }
        }
    }
    Ok(cells)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MldEstimate {
    pub value: MldValue,
    /// The minimum was only attained on the boundary of the search box, so
    /// the true value may be smaller.
    pub upper_bound_only: bool,
    pub witness: Option<Cell>,
    pub cells: usize,
}

/// The least value of the jet-level formula over the bounded grid; any
/// negative value means −∞.
pub fn mld_jet_estimate(pair: &PairSpec, bounds: &SearchBounds, engine: &Groebner) -> Result<MldEstimate> {
    let cells = scan_cells(pair, bounds, engine)?;
    let Some(min) = cells.iter().map(|c| &c.value).min().cloned() else {
        return invalid("every cell is empty: W does not meet X within the bounds");
    };
    let minimizers: Vec<&Cell> = cells.iter().filter(|c| c.value == min).collect();
    let witness = minimizers.iter().find(|c| !c.on_boundary).or(minimizers.first()).map(|c| (*c).clone());
    if min.is_negative() {
        return Ok(MldEstimate { value: MldValue::NegInfinity, upper_bound_only: false, witness, cells: cells.len() });
    }
    let upper_bound_only = witness.as_ref().is_some_and(|c| c.on_boundary);
    Ok(MldEstimate { value: MldValue::Finite(min), upper_bound_only, witness, cells: cells.len() })
}

/// A cell where codim < ℓ/r + Σ q_i w_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcCertificate {
    pub cell: Cell,
    pub codim: usize,
    pub ell: i64,
    pub threshold: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcReport {
    pub log_canonical: bool,
    pub certificate: Option<LcCertificate>,
    pub cells: usize,
}

/// Log canonicity of the pair near W within the bounds: checks
/// codim ≥ ℓ/r + Σ q_i w_i on every cell, where codim = (m+1)·dim X + e − dim
/// and ℓ = r·e − e'. Reports the most violated cell.
pub fn lc_check(pair: &PairSpec, bounds: &SearchBounds, engine: &Groebner) -> Result<LcReport> {
    let cells = scan_cells(pair, bounds, engine)?;
    let n = pair.ambient.dim();
    let mut worst: Option<&Cell> = None;
    for c in &cells {
        if c.value.is_negative() && worst.is_none_or(|w| c.value < w.value) {
            worst = Some(c);
        }
    }
    let certificate = worst.map(|c| {
        let ell = pair.r as i64 * c.e as i64 - c.eprime as i64;
        let mut threshold = Rational::new(ell.into(), pair.r.into());
        for (yi, &wi) in pair.y.iter().zip(&c.w) {
            threshold += &yi.q * int(wi as i64);
        }
        LcCertificate { cell: c.clone(), codim: (c.m + 1) * n + c.e - c.dim, ell, threshold }
    });
    Ok(LcReport { log_canonical: certificate.is_none(), certificate, cells: cells.len() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoaReport {
    pub left: MldEstimate,
    pub right: MldEstimate,
    pub agree: bool,
}

/// Compares mld(W; X, Y|_X) with mld(W; A, c·X + Y) for a normal complete
/// intersection X of codimension c in A = A^N. The ambient-side search takes
/// orders along X up to m_max.
pub fn ioa_check(
    x: &EmbeddedVariety,
    y: Vec<WeightedIdeal>,
    w: IdealPresentation,
    bounds: &SearchBounds,
    engine: &Groebner,
) -> Result<IoaReport> {
    if x.ideal().generators().len() != x.codim() {
        return invalid(format!(
            "X is given by {} equations in codimension {}, not as a complete intersection",
            x.ideal().generators().len(),
            x.codim()
        ));
    }
    x.verify_dimension(engine)?;
    if let Some(d) = singular_locus_dimension(x, engine)? {
        if d + 2 > x.dim() {
            return invalid(format!(
                "the singular locus of X has dimension {d} = dim X - {}, so X is not normal",
                x.dim() - d
            ));
        }
    }
    let left_pair = PairSpec::new(Ambient::Variety(x.clone()), y.clone(), w.clone())?;
    let left = mld_jet_estimate(&left_pair, bounds, engine)?;
    let mut right_y = vec![WeightedIdeal { ideal: x.ideal().clone(), q: int(x.codim() as i64) }];
    right_y.extend(y);
    let mut w_max = vec![bounds.m_max];
    w_max.extend(bounds.w_max.iter().copied());
    let right_bounds = SearchBounds { w_max, m_max: bounds.m_max, e_max: 0, eprime_max: 0 };
    let right_pair = PairSpec::new(Ambient::Smooth(x.ideal().universe().clone()), right_y, w)?;
    let right = mld_jet_estimate(&right_pair, &right_bounds, engine)?;
    let agree = left.value == right.value;
    Ok(IoaReport { left, right, agree })
}

#[derive(Deserialize)]
struct RawVariety {
    gens: Vec<String>,
    expected_dim: usize,
}

#[derive(Deserialize)]
struct RawWeighted {
    gens: Vec<String>,
    q: Value,
}

#[derive(Deserialize)]
struct RawBounds {
    #[serde(default)]
    w_max: Vec<usize>,
    m_max: usize,
    #[serde(default)]
    e_max: usize,
    #[serde(default)]
    eprime_max: usize,
}

#[derive(Deserialize)]
struct RawPair {
    vars: Vec<String>,
    #[serde(default)]
    variety: Option<RawVariety>,
    #[serde(default, rename = "Y")]
    y: Vec<RawWeighted>,
    #[serde(rename = "W")]
    w: Vec<String>,
    #[serde(default)]
    jr: Option<Vec<String>>,
    #[serde(default = "one")]
    r: u64,
    bounds: RawBounds,
}

fn one() -> u64 {
    1
}

/// A pair read from JSON, with its search bounds.
#[derive(Clone, Debug)]
pub struct PairFile {
    pub pair: PairSpec,
    pub bounds: SearchBounds,
}

impl PairFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawPair = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("pair data: {e}")))?;
        let u = VariableUniverse::new(&raw.vars)?;
        let ambient = match raw.variety {
            None => Ambient::Smooth(u.clone()),
            Some(v) => Ambient::Variety(EmbeddedVariety::new(IdealPresentation::parse(&u, &v.gens)?, v.expected_dim)?),
        };
        let y = raw
            .y
            .iter()
            .map(|yi| Ok(WeightedIdeal { ideal: IdealPresentation::parse(&u, &yi.gens)?, q: rational_from_json(&yi.q)? }))
            .collect::<Result<Vec<_>>>()?;
        let w = IdealPresentation::parse(&u, &raw.w)?;
        let jr = raw.jr.map(|g| IdealPresentation::parse(&u, &g)).transpose()?;
        let pair = PairSpec { ambient, y, w, jr, r: raw.r };
        pair.validate()?;
        let mut w_max = raw.bounds.w_max;
        if w_max.is_empty() {
            w_max = vec![raw.bounds.m_max; pair.y.len()];
        }
        let bounds = SearchBounds::new(w_max, raw.bounds.m_max, raw.bounds.e_max, raw.bounds.eprime_max);
        Ok(Self { pair, bounds })
    }
}

/// The sum Σ q_i w_i of a cell.
pub fn weighted_order(pair: &PairSpec, w: &[usize]) -> Rational {
    pair.y.iter().zip(w).fold(Rational::zero(), |acc, (yi, &wi)| acc + &yi.q * int(wi as i64))
}
