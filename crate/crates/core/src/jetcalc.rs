//! Jet rings, the total derivative D and jet ideals, together with arc
//! substitution, the torus action on jets and the zero section.
//!
//! The jet variable x_i^(j) of a ring over n base variables has id
//! `j * n + i`. The level-p variables therefore form a prefix of the
//! level-m universe for every p ≤ m, x_i^(0) keeps the id of x_i, and D
//! sends id v to v + n.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::groebner::IdealPresentation;
use crate::polycore::rational::{factorial, pow};
use crate::polycore::{evaluate_series, Polynomial, Rational, TruncatedSeries, VariableUniverse};

#[derive(Clone, Debug, PartialEq)]
pub struct JetRing {
    base: VariableUniverse,
    level: usize,
    universe: VariableUniverse,
}

impl JetRing {
    /// Jet variables are named `<base>_<order>`.
    pub fn new(base: &VariableUniverse, level: usize) -> Result<Self> {
        let mut names = Vec::with_capacity(base.len() * (level + 1));
        for j in 0..=level {
            for name in base.names() {
                names.push(format!("{name}_{j}"));
            }
        }
        let universe = VariableUniverse::new(&names)?;
        Ok(Self { base: base.clone(), level, universe })
    }

    pub fn base(&self) -> &VariableUniverse {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn var(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n() && j <= self.level);
        j * self.n() + i
    }

    pub fn var_poly(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::var(self.var(i, j))
    }

    /// (base index, order) of a jet variable id.
    pub fn split(&self, id: usize) -> (usize, usize) {
        (id % self.n(), id / self.n())
    }

    /// All jet variable ids of order exactly j.
    pub fn order_block(&self, j: usize) -> std::ops::Range<usize> {
        j * self.n()..(j + 1) * self.n()
    }

    /// Highest order of a jet variable in f, `None` for constants.
    pub fn order_of(&self, f: &Polynomial) -> Option<usize> {
        f.variables().into_iter().map(|v| self.split(v).1).max()
    }

    /// D(f), required to live at `target` ≤ the ring level.
    pub fn total_derivative(&self, f: &Polynomial, target: usize) -> Result<Polynomial> {
        f.check_universe(&self.universe)?;
        if target > self.level {
            return invalid(format!("target level {target} exceeds ring level {}", self.level));
        }
        if let Some(o) = self.order_of(f) {
            if o >= target {
                return invalid(format!("D of an order-{o} polynomial does not live at level {target}"));
            }
        }
        Ok(self.d(f))
    }

    fn d(&self, f: &Polynomial) -> Polynomial {
        let n = self.n();
        let mut acc = Polynomial::zero();
        for v in f.variables() {
            let partial = f.derivative(v);
            acc = &acc + &(&partial * &Polynomial::var(v + n));
        }
        acc
    }

    /// f, D f, ..., D^k f for a base polynomial f, k ≤ level.
    pub fn derivatives(&self, f: &Polynomial, k: usize) -> Result<Vec<Polynomial>> {
        f.check_universe(&self.base)?;
        if k > self.level {
            return invalid(format!("order {k} exceeds ring level {}", self.level));
        }
        let mut out = vec![f.clone()];
        for _ in 0..k {
            let next = self.d(out.last().expect("nonempty"));
            out.push(next);
        }
        Ok(out)
    }

    /// Generators f_i^(j), j outer and i inner, so that the level-p
    /// generators of this ideal form a prefix for p < m.
    pub fn jet_ideal(&self, ideal: &IdealPresentation) -> Result<IdealPresentation> {
        if ideal.universe() != &self.base {
            return invalid("ideal is not over the jet ring's base variables");
        }
        let per_gen: Vec<Vec<Polynomial>> = ideal
            .generators()
            .iter()
            .map(|f| self.derivatives(f, self.level))
            .collect::<Result<_>>()?;
        let mut gens = Vec::new();
        for j in 0..=self.level {
            for ders in &per_gen {
                gens.push(ders[j].clone());
            }
        }
        IdealPresentation::new(self.universe.clone(), gens)
    }
}

/// Jet ideal of I at level m together with its ring.
pub fn jet_ideal(ideal: &IdealPresentation, m: usize) -> Result<(JetRing, IdealPresentation)> {
    let ring = JetRing::new(ideal.universe(), m)?;
    let j = ring.jet_ideal(ideal)?;
    Ok((ring, j))
}

/// A point of the level-m jet space, in divided-power coordinates: the
/// associated arc is x_i(t) = Σ_j a_i^(j) t^j / j!.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoint {
    n: usize,
    level: usize,
    coords: Vec<Rational>,
}

impl JetPoint {
    /// `coords` indexed by jet variable id.
    pub fn new(n: usize, level: usize, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != n * (level + 1) {
            return invalid(format!("expected {} coordinates, got {}", n * (level + 1), coords.len()));
        }
        Ok(Self { n, level, coords })
    }

    /// From per-variable divided-power coordinate lists a_i^(0..=level).
    pub fn from_divided(per_var: &[Vec<Rational>], level: usize) -> Result<Self> {
        let n = per_var.len();
        let mut coords = vec![Rational::zero(); n * (level + 1)];
        for (i, a) in per_var.iter().enumerate() {
            if a.len() > level + 1 {
                return invalid("more coordinates than the level allows");
            }
            for (j, c) in a.iter().enumerate() {
                coords[j * n + i] = c.clone();
            }
        }
        Self::new(n, level, coords)
    }

    /// From raw series coefficients c_i,j of t^j: a_i^(j) = j! c_i,j.
    pub fn from_series(series: &[TruncatedSeries], level: usize) -> Result<Self> {
        let per_var: Vec<Vec<Rational>> = series
            .iter()
            .map(|s| (0..=level).map(|j| s.coeff(j) * factorial(j)).collect())
            .collect();
        Self::from_divided(&per_var, level)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coordinate(&self, i: usize, j: usize) -> &Rational {
        &self.coords[j * self.n + i]
    }

    pub fn base_point(&self) -> Vec<Rational> {
        self.coords[..self.n].to_vec()
    }

    /// Raw series of the arc, truncated at t^big_n.
    pub fn to_series(&self, big_n: usize) -> Vec<TruncatedSeries> {
        (0..self.n)
            .map(|i| {
                let c: Vec<Rational> = (0..=self.level)
                    .map(|j| self.coordinate(i, j) / factorial(j))
                    .collect();
                TruncatedSeries::from_slice(&c, big_n)
            })
            .collect()
    }

    pub fn truncate(&self, p: usize) -> Result<Self> {
        if p > self.level {
            return invalid("cannot truncate to a higher level");
        }
        Self::new(self.n, p, self.coords[..self.n * (p + 1)].to_vec())
    }

    /// Does the point satisfy every generator (over the jet universe)?
    pub fn satisfies(&self, ideal: &IdealPresentation) -> Result<bool> {
        for g in ideal.generators() {
            if !g.evaluate(&self.coords)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Compares the coefficients of f along the arc of `a` with the values of
/// the f^(j) at a divided by j!; these must always agree.
pub fn arc_substitution_check(f: &Polynomial, base: &VariableUniverse, a: &JetPoint) -> Result<bool> {
    if a.n() != base.len() {
        return Err(Error::UniverseMismatch { id: a.n(), size: base.len() });
    }
    let m = a.level();
    let ring = JetRing::new(base, m)?;
    let ders = ring.derivatives(f, m)?;
    let arcs: BTreeMap<usize, TruncatedSeries> = a.to_series(m + 1).into_iter().enumerate().collect();
    let series = evaluate_series(f, &arcs, m + 1)?;
    for (j, fj) in ders.iter().enumerate() {
        let lhs = series.coeff(j);
        let rhs = fj.evaluate(a.coords())? / factorial(j);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Torus action t ↦ c t: a_i^(j) ↦ c^j a_i^(j).
pub fn scale_jet(a: &JetPoint, c: &Rational) -> JetPoint {
    let coords = a
        .coords
        .iter()
        .enumerate()
        .map(|(id, x)| x * pow(c, (id / a.n) as u32))
        .collect();
    JetPoint { n: a.n, level: a.level, coords }
}

/// The constant jet over x.
pub fn constant_jet(x: &[Rational], m: usize) -> JetPoint {
    let mut coords = vec![Rational::zero(); x.len() * (m + 1)];
    coords[..x.len()].clone_from_slice(x);
    JetPoint { n: x.len(), level: m, coords }
}
