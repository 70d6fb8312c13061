//! Minimal log discrepancies from the numerical data of a log resolution:
//! discrepancies κ_j, multiplicities α_{i,j} of the Y_i, orders z_j of the
//! Nash subscheme, and the incidence of the exceptional divisors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::polycore::rational::{int, parse_rational};
use crate::polycore::Rational;

/// A minimal log discrepancy: a rational number or −∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MldValue {
    NegInfinity,
    Finite(Rational),
}

impl MldValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MldValue::Finite(q) => Some(q),
            MldValue::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, MldValue::NegInfinity)
    }

    pub fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl PartialOrd for MldValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MldValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MldValue::NegInfinity, MldValue::NegInfinity) => Ordering::Equal,
            (MldValue::NegInfinity, _) => Ordering::Less,
            (_, MldValue::NegInfinity) => Ordering::Greater,
            (MldValue::Finite(a), MldValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for MldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MldValue::NegInfinity => write!(f, "-inf"),
            MldValue::Finite(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorRecord {
    pub name: String,
    pub kappa: Rational,
    pub z: u64,
    pub alpha: Vec<u64>,
    pub in_w: bool,
    pub meets_w: bool,
}

impl DivisorRecord {
    pub fn new(name: &str, kappa: Rational, z: u64, alpha: Vec<u64>, in_w: bool, meets_w: bool) -> Self {
        Self { name: name.to_string(), kappa, z, alpha, in_w, meets_w }
    }
}

/// Numerical data of a log resolution of (X, Σ q_i Y_i) along W.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    pub ambient_dim: usize,
    pub r: u64,
    pub weights: Vec<Rational>,
    pub divisors: Vec<DivisorRecord>,
    faces: BTreeSet<Vec<usize>>,
}

#[derive(Deserialize, Serialize)]
struct RawDivisor {
    name: String,
    kappa: Value,
    #[serde(default)]
    z: u64,
    #[serde(default)]
    alpha: Vec<u64>,
    #[serde(rename = "in_W")]
    in_w: bool,
    #[serde(rename = "meets_W")]
    meets_w: bool,
}

#[derive(Deserialize, Serialize)]
struct RawResolution {
    ambient_dim: usize,
    #[serde(default = "one")]
    r: u64,
    #[serde(default)]
    weights: Vec<Value>,
    divisors: Vec<RawDivisor>,
    #[serde(default)]
    faces: Vec<Vec<String>>,
}

fn one() -> u64 {
    1
}

/// Reads a rational given either as a JSON number or as a string "a/b".
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(int(k)),
            None => invalid(format!("{n} is not an integer; write fractions as \"a/b\"")),
        },
        other => invalid(format!("expected a rational, got {other}")),
    }
}

fn subsets_of(face: &[usize]) -> Vec<Vec<usize>> {
    let k = face.len();
    (1u64..(1 << k))
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).map(|i| face[i]).collect())
        .collect()
}

impl ResolutionData {
    /// Validates the records and closes `faces` (given by divisor index)
    /// under taking subsets; singletons are always faces.
    pub fn new(
        ambient_dim: usize,
        r: u64,
        weights: Vec<Rational>,
        divisors: Vec<DivisorRecord>,
        faces: &[Vec<usize>],
    ) -> Result<Self> {
        if r == 0 {
            return invalid("the index r must be positive");
        }
        if weights.iter().any(|q| q.is_negative()) {
            return invalid("weights q_i must be nonnegative");
        }
        let mut names = BTreeSet::new();
        for d in &divisors {
            if !names.insert(d.name.as_str()) {
                return invalid(format!("duplicate divisor name `{}`", d.name));
            }
            if d.alpha.len() != weights.len() {
                return invalid(format!(
                    "divisor `{}` has {} multiplicities for {} weights",
                    d.name,
                    d.alpha.len(),
                    weights.len()
                ));
            }
            if d.in_w && !d.meets_w {
                return invalid(format!("divisor `{}` lies over W but is marked as not meeting it", d.name));
            }
            if !(&d.kappa * int(r as i64)).is_integer() {
                return invalid(format!("r·κ is not integral for divisor `{}`", d.name));
            }
        }
        let mut closed = BTreeSet::new();
        for j in 0..divisors.len() {
            closed.insert(vec![j]);
        }
        for face in faces {
            let mut f = face.clone();
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&j| j >= divisors.len()) {
                return invalid("face refers to an unknown divisor");
            }
            closed.extend(subsets_of(&f));
        }
        for face in &closed {
            if face.iter().any(|&j| divisors[j].in_w) {
                if let Some(&j) = face.iter().find(|&&j| !divisors[j].meets_w) {
                    return invalid(format!(
                        "divisor `{}` meets a divisor over W but is marked as not meeting W",
                        divisors[j].name
                    ));
                }
            }
        }
        Ok(Self { ambient_dim, r, weights, divisors, faces: closed })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: RawResolution =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(format!("resolution data: {e}")))?;
        let weights = raw.weights.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
        let mut index = BTreeMap::new();
        let mut divisors = Vec::new();
        for (j, d) in raw.divisors.into_iter().enumerate() {
            index.insert(d.name.clone(), j);
            let kappa = rational_from_json(&d.kappa)?;
            divisors.push(DivisorRecord { name: d.name, kappa, z: d.z, alpha: d.alpha, in_w: d.in_w, meets_w: d.meets_w });
        }
        let faces = raw
            .faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|name| index.get(name).copied().ok_or_else(|| Error::Invalid(format!("unknown divisor `{name}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.ambient_dim, raw.r, weights, divisors, &faces)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("resolution data: {e}")))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let divisors = self
            .divisors
            .iter()
            .map(|d| RawDivisor {
                name: d.name.clone(),
                kappa: Value::String(d.kappa.to_string()),
                z: d.z,
                alpha: d.alpha.clone(),
                in_w: d.in_w,
                meets_w: d.meets_w,
            })
            .collect();
        let raw = RawResolution {
            ambient_dim: self.ambient_dim,
            r: self.r,
            weights: self.weights.iter().map(|q| Value::String(q.to_string())).collect(),
            divisors,
            faces: self
                .maximal_faces()
                .iter()
                .map(|f| f.iter().map(|&j| self.divisors[j].name.clone()).collect())
                .collect(),
        };
        serde_json::to_value(raw).expect("resolution data serializes")
    }

    /// The same data with new weights.
    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != self.weights.len() {
            return invalid("number of weights changed");
        }
        if weights.iter().any(|q| q.is_negative()) {
            return invalid("weights q_i must be nonnegative");
        }
        Ok(Self { weights, ..self.clone() })
    }

    pub fn faces(&self) -> &BTreeSet<Vec<usize>> {
        &self.faces
    }

    pub fn is_face(&self, support: &[usize]) -> bool {
        support.is_empty() || self.faces.contains(support)
    }

    pub fn maximal_faces(&self) -> Vec<Vec<usize>> {
        self.faces
            .iter()
            .filter(|f| {
                !self.faces.iter().any(|g| g.len() > f.len() && f.iter().all(|j| g.contains(j)))
            })
            .cloned()
            .collect()
    }

    /// a(E_j) = κ_j + 1 − Σ_i q_i α_{i,j}.
    pub fn log_discrepancy(&self, j: usize) -> Rational {
        let d = &self.divisors[j];
        let mut a = &d.kappa + int(1);
        for (q, &al) in self.weights.iter().zip(&d.alpha) {
            a -= q * int(al as i64);
        }
        a
    }

    fn check_has_w(&self) -> Result<()> {
        if self.divisors.iter().any(|d| d.in_w) {
            Ok(())
        } else {
            invalid("no divisor lies over W")
        }
    }

    fn check_well_posed(&self) -> Result<()> {
        for d in &self.divisors {
            let unconstrained = d.z == 0 && d.alpha.iter().all(|&a| a == 0);
            if unconstrained && (&d.kappa + int(1)).is_negative() {
                return invalid(format!("ill-posed data: divisor `{}` has κ + 1 < 0 and no constraint", d.name));
            }
        }
        Ok(())
    }
}

/// −∞ if some divisor meeting W has negative log discrepancy, otherwise the
/// least log discrepancy of a divisor over W.
pub fn mld_from_divisors(data: &ResolutionData) -> Result<MldValue> {
    data.check_has_w()?;
    let mut best: Option<Rational> = None;
    for (j, d) in data.divisors.iter().enumerate() {
        let a = data.log_discrepancy(j);
        if d.meets_w && a.is_negative() {
            return Ok(MldValue::NegInfinity);
        }
        if d.in_w && best.as_ref().is_none_or(|b| a < *b) {
            best = Some(a);
        }
    }
    Ok(MldValue::Finite(best.expect("some divisor lies over W")))
}

/// The divisor that decides `mld_from_divisors`: a divisor meeting W with
/// negative log discrepancy if there is one, else the divisor over W with
/// the least log discrepancy (first by index on ties).
pub fn minimizing_divisor(data: &ResolutionData) -> Option<usize> {
    let negative = (0..data.divisors.len())
        .find(|&j| data.divisors[j].meets_w && data.log_discrepancy(j).is_negative());
    negative.or_else(|| {
        (0..data.divisors.len())
            .filter(|&j| data.divisors[j].in_w)
            .min_by(|&a, &b| data.log_discrepancy(a).cmp(&data.log_discrepancy(b)).then(a.cmp(&b)))
    })
}

/// A minimizing multiplicity vector ν and the minimum Σ(κ_j+1)ν_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactMinimum {
    pub codim: Rational,
    pub nu: Vec<u64>,
}

/// codim(Cont^w(Y) ∩ Cont^ℓ(Z_r) ∩ Cont^{≥1}(W)) = ℓ/r + min_ν Σ(κ_j+1)ν_j;
/// `None` when no admissible ν exists.
pub fn contact_codim_combinatorial(data: &ResolutionData, w: &[u64], ell: u64) -> Result<Option<ContactMinimum>> {
    if w.len() != data.weights.len() {
        return invalid(format!("expected {} orders, got {}", data.weights.len(), w.len()));
    }
    data.check_well_posed()?;
    let d = data.divisors.len();
    let bounds: Vec<u64> = data
        .divisors
        .iter()
        .map(|dv| {
            let mut b = u64::MAX;
            for (i, &a) in dv.alpha.iter().enumerate() {
                if let Some(q) = w[i].checked_div(a) {
                    b = b.min(q);
                }
            }
            if let Some(q) = ell.checked_div(dv.z) {
                b = b.min(q);
            }
            // an unconstrained ν_j only matters through its support
            if b == u64::MAX {
                1
            } else {
                b
            }
        })
        .collect();
    let mut search = Search { data, bounds, nu: vec![0; d], best: None };
    let mut rest = w.to_vec();
    search.rec(0, &mut rest, ell);
    Ok(search.best.map(|(v, nu)| ContactMinimum { codim: v + Rational::new(ell.into(), data.r.into()), nu }))
}

struct Search<'a> {
    data: &'a ResolutionData,
    bounds: Vec<u64>,
    nu: Vec<u64>,
    best: Option<(Rational, Vec<u64>)>,
}

impl Search<'_> {
    fn rec(&mut self, j: usize, rest: &mut [u64], ell: u64) {
        if j == self.nu.len() {
            if ell != 0 || rest.iter().any(|&x| x != 0) {
                return;
            }
            let support: Vec<usize> = (0..j).filter(|&k| self.nu[k] > 0).collect();
            if !support.iter().any(|&k| self.data.divisors[k].in_w) || !self.data.is_face(&support) {
                return;
            }
            let value = support.iter().fold(Rational::zero(), |acc, &k| {
                acc + (&self.data.divisors[k].kappa + int(1)) * int(self.nu[k] as i64)
            });
            if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
                self.best = Some((value, self.nu.clone()));
            }
            return;
        }
        let dv = &self.data.divisors[j];
        // keep the partial support a face
        let partial: Vec<usize> = (0..j).filter(|&k| self.nu[k] > 0).collect();
        for v in 0..=self.bounds[j] {
            if dv.alpha.iter().zip(rest.iter()).any(|(&a, &r)| a * v > r) || dv.z * v > ell {
                break;
            }
            if v == 1 {
                let mut s = partial.clone();
                s.push(j);
                if !self.data.is_face(&s) {
                    break;
                }
            }
            for (r, &a) in rest.iter_mut().zip(&dv.alpha) {
                *r -= a * v;
            }
            self.nu[j] = v;
            self.rec(j + 1, rest, ell - dv.z * v);
            for (r, &a) in rest.iter_mut().zip(&dv.alpha) {
                *r += a * v;
            }
        }
        self.nu[j] = 0;
    }
}

/// One evaluated (w, ℓ) candidate of the contact-locus formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactCandidate {
    pub w: Vec<u64>,
    pub ell: u64,
    pub codim: Rational,
    pub value: Rational,
}

fn evaluate_candidate(data: &ResolutionData, w: &[u64], ell: u64) -> Result<Option<ContactCandidate>> {
    let Some(min) = contact_codim_combinatorial(data, w, ell)? else {
        return Ok(None);
    };
    let mut value = &min.codim - Rational::new(ell.into(), data.r.into());
    for (q, &wi) in data.weights.iter().zip(w) {
        value -= q * int(wi as i64);
    }
    Ok(Some(ContactCandidate { w: w.to_vec(), ell, codim: min.codim, value }))
}

/// Result of the contact-locus computation with the minimizing candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactMld {
    pub value: MldValue,
    pub witness: Option<ContactCandidate>,
    pub candidates: usize,
}

fn nu_ball(d: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; d];
    fn rec(j: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if j == cur.len() {
            if cur.iter().any(|&x| x > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left {
            cur[j] = v;
            rec(j + 1, left - v, cur, out);
        }
        cur[j] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out
}

/// Minimizes codim(Cont^w(Y) ∩ Cont^ℓ(Z_r) ∩ Cont^{≥1}(W)) − ℓ/r − Σ q_i w_i
/// over the orders (α_{·,j}, z_j) of divisors over W and the orders of all
/// admissible ν with Σν_j ≤ `nu_max`, plus the rays e_j + t·e_k through a
/// negative divisor k on a face with a divisor j over W. A negative value
/// that keeps decreasing when (w, ℓ) is doubled yields −∞.
pub fn mld_via_contact(data: &ResolutionData, nu_max: u64) -> Result<ContactMld> {
    data.check_has_w()?;
    data.check_well_posed()?;
    let d = data.divisors.len();
    let s = data.weights.len();
    let orders_of = |nu: &[u64]| -> (Vec<u64>, u64) {
        let w = (0..s).map(|i| (0..d).map(|j| data.divisors[j].alpha[i] * nu[j]).sum()).collect();
        let ell = (0..d).map(|j| data.divisors[j].z * nu[j]).sum();
        (w, ell)
    };
    let mut grid: BTreeSet<(Vec<u64>, u64)> = BTreeSet::new();
    for (j, dv) in data.divisors.iter().enumerate() {
        if dv.in_w {
            let mut nu = vec![0; d];
            nu[j] = 1;
            grid.insert(orders_of(&nu));
        }
    }
    for nu in nu_ball(d, nu_max) {
        let support: Vec<usize> = (0..d).filter(|&j| nu[j] > 0).collect();
        if data.is_face(&support) && support.iter().any(|&j| data.divisors[j].in_w) {
            grid.insert(orders_of(&nu));
        }
    }
    for face in data.faces.iter().filter(|f| f.len() == 2) {
        for (&j, &k) in [(&face[0], &face[1]), (&face[1], &face[0])] {
            let ak = data.log_discrepancy(k);
            if !data.divisors[j].in_w || !ak.is_negative() {
                continue;
            }
            let aj = data.log_discrepancy(j);
            let steps = (aj / -ak).floor().to_integer();
            let t: u64 = u64::try_from(steps).unwrap_or(0) + 1;
            let mut nu = vec![0; d];
            nu[j] = 1;
            nu[k] = t;
            grid.insert(orders_of(&nu));
        }
    }
    let mut best: Option<ContactCandidate> = None;
    let mut count = 0;
    for (w, ell) in &grid {
        if let Some(c) = evaluate_candidate(data, w, *ell)? {
            count += 1;
            if best.as_ref().is_none_or(|b| c.value < b.value) {
                best = Some(c);
            }
        }
    }
    let Some(best) = best else {
        return Err(Error::Invariant("no admissible contact locus meets W".into()));
    };
    if best.value.is_negative() {
        let scaled = |k: u64| -> Result<Option<Rational>> {
            let w: Vec<u64> = best.w.iter().map(|x| x * k).collect();
            Ok(evaluate_candidate(data, &w, best.ell * k)?.map(|c| c.value))
        };
        let (v2, v4) = (scaled(2)?, scaled(4)?);
        return match (v2, v4) {
            (Some(a), Some(b)) if a < best.value && b < a => {
                Ok(ContactMld { value: MldValue::NegInfinity, witness: Some(best), candidates: count })
            }
            _ => Err(Error::Invariant("negative contact value does not decrease under scaling".into())),
        };
    }
    Ok(ContactMld { value: MldValue::Finite(best.value.clone()), witness: Some(best), candidates: count })
}

/// Resolution data of (A², q·{x² = y³}) along the origin: the three
/// exceptional curves of the minimal log resolution and the strict
/// transform.
pub fn cusp_resolution(q: Rational) -> ResolutionData {
    let divisors = vec![
        DivisorRecord::new("E1", int(1), 0, vec![2], true, true),
        DivisorRecord::new("E2", int(2), 0, vec![3], true, true),
        DivisorRecord::new("E3", int(4), 0, vec![6], true, true),
        DivisorRecord::new("C", int(0), 0, vec![1], false, true),
    ];
    ResolutionData::new(2, 1, vec![q], divisors, &[vec![0, 2], vec![1, 2], vec![2, 3]])
        .expect("cusp data is well formed")
}

/// (A², q·{xy = 0}) along the origin: one blow-up.
pub fn node_resolution(q: Rational) -> ResolutionData {
    let divisors = vec![
        DivisorRecord::new("E", int(1), 0, vec![2], true, true),
        DivisorRecord::new("L1", int(0), 0, vec![1], false, true),
        DivisorRecord::new("L2", int(0), 0, vec![1], false, true),
    ];
    ResolutionData::new(2, 1, vec![q], divisors, &[vec![0, 1], vec![0, 2]]).expect("node data is well formed")
}

/// A smooth surface point with empty Y, blown up once.
pub fn smooth_point_resolution() -> ResolutionData {
    let divisors = vec![DivisorRecord::new("E", int(1), 0, vec![], true, true)];
    ResolutionData::new(2, 1, vec![], divisors, &[]).expect("smooth data is well formed")
}
