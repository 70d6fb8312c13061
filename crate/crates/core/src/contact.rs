//! Contact loci at finite level, dimensions of constructible jet loci,
//! codimensions of Jacobian-stratified cylinders, and a numeric check of the
//! change-of-variable formula for polynomial maps.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{invalid, Result};
use crate::groebner::{Dimension, Groebner, IdealPresentation};
use crate::jetcalc::{JetPoint, JetRing};
use crate::polycore::{Polynomial, VariableUniverse};
use crate::singloci::{jacobian_minors, EmbeddedVariety};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContactMode {
    AtLeast,
    Exactly,
}

/// ord_γ(Z) ≥ e or = e, at jet level m.
#[derive(Clone, Debug)]
pub struct ContactSpec {
    pub subscheme: IdealPresentation,
    pub order: usize,
    pub mode: ContactMode,
    pub level: usize,
}

impl ContactSpec {
    pub fn at_least(subscheme: IdealPresentation, order: usize, level: usize) -> Self {
        Self { subscheme, order, mode: ContactMode::AtLeast, level }
    }

    pub fn exactly(subscheme: IdealPresentation, order: usize, level: usize) -> Self {
        Self { subscheme, order, mode: ContactMode::Exactly, level }
    }

    fn validate(&self) -> Result<()> {
        match self.mode {
            ContactMode::AtLeast if self.order > self.level + 1 => {
                invalid(format!("order ≥ {} is not visible at level {}", self.order, self.level))
            }
            ContactMode::Exactly if self.order > self.level => {
                invalid(format!("order = {} is not visible at level {}", self.order, self.level))
            }
            _ => Ok(()),
        }
    }
}

/// V(closed) minus the common zeros of each witness ideal, inside a jet
/// space. A point belongs to the locus when some generator of every
/// witness is nonzero there.
#[derive(Clone, Debug)]
pub struct ConstructibleLocus {
    pub ring: JetRing,
    pub closed: IdealPresentation,
    pub open_witnesses: Vec<IdealPresentation>,
}

impl ConstructibleLocus {
    /// The whole jet space of the ring.
    pub fn full(ring: JetRing) -> Self {
        let closed = IdealPresentation::zero(ring.universe().clone());
        Self { ring, closed, open_witnesses: Vec::new() }
    }

    pub fn add_closed(&mut self, gens: impl IntoIterator<Item = Polynomial>) {
        self.closed = self.closed.with(gens);
    }

    pub fn add_witness(&mut self, gens: Vec<Polynomial>) -> Result<()> {
        self.open_witnesses.push(IdealPresentation::new(self.ring.universe().clone(), gens)?);
        Ok(())
    }

    /// Adds the conditions "ord ≥ e" (all g^(j), j < e, vanish) and, for
    /// `exactly`, the witness {g^(e)} for the base ideal `z`.
    pub fn add_contact(&mut self, z: &IdealPresentation, order: usize, mode: ContactMode) -> Result<()> {
        let m = self.ring.level();
        let top = match mode {
            ContactMode::AtLeast => order.saturating_sub(1).min(m),
            ContactMode::Exactly => order,
        };
        if (mode == ContactMode::AtLeast && order > m + 1) || (mode == ContactMode::Exactly && order > m) {
            return invalid(format!("order {order} is not visible at level {m}"));
        }
        let ders: Vec<Vec<Polynomial>> = z
            .generators()
            .iter()
            .map(|g| self.ring.derivatives(g, top))
            .collect::<Result<_>>()?;
        for d in &ders {
            self.add_closed(d.iter().take(order).cloned());
        }
        if mode == ContactMode::Exactly {
            let w: Vec<Polynomial> = ders.iter().map(|d| d[order].clone()).collect();
            self.add_witness(w)?;
        }
        Ok(())
    }

    /// Dimension of the closure of the image in the level-p jet space.
    pub fn projected_dimension(&self, p: usize, engine: &Groebner) -> Result<Dimension> {
        if p > self.ring.level() {
            return invalid("projection level exceeds the ring level");
        }
        let keep: BTreeSet<usize> = (0..self.ring.n() * (p + 1)).collect();
        engine.constructible_dimension(&self.closed, &self.open_witnesses, Some(&keep))
    }
}

/// Cont^{≥e}(Z)_m or Cont^e(Z)_m, intersected with J_m(X) when an ambient
/// ideal is supplied.
pub fn contact_locus(spec: &ContactSpec, ambient: Option<&IdealPresentation>) -> Result<ConstructibleLocus> {
    spec.validate()?;
    let ring = JetRing::new(spec.subscheme.universe(), spec.level)?;
    let mut locus = ConstructibleLocus::full(ring);
    if let Some(x) = ambient {
        let j = locus.ring.jet_ideal(x)?;
        locus.add_closed(j.generators().iter().cloned());
    }
    locus.add_contact(&spec.subscheme, spec.order, spec.mode)?;
    Ok(locus)
}

/// dim of the locus: a point lies in it iff it lies in V(closed) and off
/// V(g_1 ⋯ g_k) for some choice of one generator g_i per witness, so the
/// dimension is the largest dimension of V(closed + (1 - t g_1 ⋯ g_k)).
pub fn constructible_dimension(locus: &ConstructibleLocus, engine: &Groebner) -> Result<Dimension> {
    locus.projected_dimension(locus.ring.level(), engine)
}

/// The same dimension through V(closed : J^∞) for each witness in turn.
pub fn constructible_dimension_by_saturation(locus: &ConstructibleLocus, engine: &Groebner) -> Result<Dimension> {
    let mut cur = locus.closed.clone();
    loop {
        let before = cur.clone();
        for w in &locus.open_witnesses {
            cur = engine.saturation(&cur, w)?;
        }
        if engine.equal(&before, &cur)? {
            break;
        }
    }
    engine.krull_dimension(&cur)
}

/// Codimension (m+1)·dim X − dim ψ_m(C) of the cylinder C of arcs on X
/// whose order along the Jacobian ideal is exactly e. Its level-m image is
/// the projection of the corresponding locus at level m + e. The value is
/// recomputed at m + 1 and an error is raised if it moves. `None` means C
/// is empty.
pub fn cylinder_codim(x: &EmbeddedVariety, e: usize, m: usize, engine: &Groebner) -> Result<Option<usize>> {
    if m < e {
        return invalid(format!("level {m} must be at least the Jacobian order {e}"));
    }
    let a = cylinder_codim_at(x, e, m, engine)?;
    let b = cylinder_codim_at(x, e, m + 1, engine)?;
    if a != b {
        return Err(crate::Error::Invariant(format!(
            "cylinder codimension changed from {a:?} at level {m} to {b:?} at level {}",
            m + 1
        )));
    }
    Ok(a)
}

pub fn cylinder_codim_at(x: &EmbeddedVariety, e: usize, m: usize, engine: &Groebner) -> Result<Option<usize>> {
    let ring = JetRing::new(x.ideal().universe(), m + e)?;
    let mut locus = ConstructibleLocus::full(ring);
    let j = locus.ring.jet_ideal(x.ideal())?;
    locus.add_closed(j.generators().iter().cloned());
    let minors = IdealPresentation::new(
        x.ideal().universe().clone(),
        jacobian_minors(x.ideal().generators(), x.codim(), x.ambient_dim()),
    )?;
    locus.add_contact(&minors, e, ContactMode::Exactly)?;
    let d = locus.projected_dimension(m, engine)?;
    Ok(d.map(|d| (m + 1) * x.dim() - d))
}

/// Dimension e + (m - p)·n of the fibres of π_{m,p} over the image of a
/// Jacobian-order-e stratum, valid when 2p ≥ m ≥ e + p.
pub fn fiber_dim_formula(e: usize, m: usize, p: usize, n: usize) -> Result<usize> {
    if 2 * p < m || m < e + p {
        return invalid(format!("need 2p ≥ m ≥ e + p, got e={e}, m={m}, p={p}"));
    }
    Ok(e + (m - p) * n)
}

/// The ideal of the fibre of J_m → J_p over a level-p jet, in the jet
/// variables of order p+1..m (the other variables are set to constants).
pub fn fiber_ideal(ring: &JetRing, ideal: &IdealPresentation, point: &JetPoint) -> Result<IdealPresentation> {
    let p = point.level();
    if p > ring.level() || point.n() != ring.n() {
        return invalid("jet point does not fit the ring");
    }
    let fixed = ring.n() * (p + 1);
    let mut assignment: BTreeMap<usize, Polynomial> = BTreeMap::new();
    for id in 0..ring.universe().len() {
        let v = if id < fixed {
            Polynomial::constant(point.coords()[id].clone())
        } else {
            Polynomial::var(id)
        };
        assignment.insert(id, v);
    }
    let gens = ideal
        .generators()
        .iter()
        .map(|g| g.substitute(&assignment))
        .collect::<Result<Vec<_>>>()?;
    IdealPresentation::new(ideal.universe().clone(), gens)
}

/// Dimension of that fibre, counted in the free variables only.
pub fn fiber_dimension(ring: &JetRing, ideal: &IdealPresentation, point: &JetPoint, engine: &Groebner) -> Result<Dimension> {
    let f = fiber_ideal(ring, ideal, point)?;
    let fixed = ring.n() * (point.level() + 1);
    let block: BTreeSet<usize> = (0..fixed).collect();
    engine.projected_dimension(&f, &block)
}

/// A condition ord(Z) ≥ e or = e on arcs of the target.
#[derive(Clone, Debug)]
pub struct TargetCondition {
    pub subscheme: IdealPresentation,
    pub order: usize,
    pub mode: ContactMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub direct_codim: Option<usize>,
    /// (e, codim of the pulled-back locus with ord det Jac = e, or `None`
    /// when empty)
    pub per_e: Vec<(usize, Option<usize>)>,
    pub transformed_min: Option<usize>,
    pub argmin: Option<usize>,
    pub agree: bool,
}

/// Compares codim(B) with min_e codim(f^{-1}(B) ∩ {ord det Jac_f = e}) + e
/// for a map f: A^N → A^N given by N polynomials in the same universe.
pub fn change_of_variable_probe(
    f: &[Polynomial],
    target: &[TargetCondition],
    e_max: usize,
    m: usize,
    engine: &Groebner,
) -> Result<ProbeReport> {
    let Some(first) = target.first() else {
        return invalid("at least one target condition is required");
    };
    let universe: VariableUniverse = first.subscheme.universe().clone();
    let n = universe.len();
    if f.len() != n {
        return invalid(format!("the map needs {n} components, got {}", f.len()));
    }
    if e_max > m {
        return invalid("e_max must not exceed the level");
    }
    let ring = JetRing::new(&universe, m)?;
    let total = (m + 1) * n;

    let mut direct = ConstructibleLocus::full(ring.clone());
    for c in target {
        direct.add_contact(&c.subscheme, c.order, c.mode)?;
    }
    let direct_codim = constructible_dimension(&direct, engine)?.map(|d| total - d);

    let subst: BTreeMap<usize, Polynomial> = f.iter().cloned().enumerate().collect();
    let jac: Vec<Vec<Polynomial>> = f.iter().map(|fi| (0..n).map(|v| fi.derivative(v)).collect()).collect();
    let det = crate::singloci::determinant(&jac);
    if det.is_zero() {
        return invalid("the Jacobian determinant of the map vanishes identically");
    }
    let det_ideal = IdealPresentation::new(universe.clone(), vec![det])?;
    let mut per_e = Vec::new();
    for e in 0..=e_max {
        let mut locus = ConstructibleLocus::full(ring.clone());
        for c in target {
            let pulled = c
                .subscheme
                .generators()
                .iter()
                .map(|g| g.substitute(&subst))
                .collect::<Result<Vec<_>>>()?;
            locus.add_contact(&IdealPresentation::new(universe.clone(), pulled)?, c.order, c.mode)?;
        }
        locus.add_contact(&det_ideal, e, ContactMode::Exactly)?;
        let codim = constructible_dimension(&locus, engine)?.map(|d| total - d);
        per_e.push((e, codim));
    }
    let best = per_e
        .iter()
        .filter_map(|&(e, c)| c.map(|c| (c + e, e)))
        .min();
    let transformed_min = best.map(|b| b.0);
    Ok(ProbeReport {
        direct_codim,
        agree: transformed_min == direct_codim,
        transformed_min,
        argmin: best.map(|b| b.1),
        per_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_polynomial;

    fn xy() -> VariableUniverse {
        VariableUniverse::new(&["x", "y"]).unwrap()
    }

    fn ideal(u: &VariableUniverse, g: &[&str]) -> IdealPresentation {
        IdealPresentation::parse(u, g).unwrap()
    }

    #[test]
    fn contact_locus_examples() {
        let e = Groebner::default();
        let u = xy();
        let l = contact_locus(&ContactSpec::at_least(ideal(&u, &["y"]), 2, 3), None).unwrap();
        assert_eq!(l.closed.generators().len(), 2);
        assert_eq!(constructible_dimension(&l, &e).unwrap(), Some(6));
        let l = contact_locus(&ContactSpec::at_least(ideal(&u, &["x", "y"]), 1, 3), None).unwrap();
        assert_eq!(constructible_dimension(&l, &e).unwrap(), Some(6));
        let l = contact_locus(&ContactSpec::exactly(ideal(&u, &["x^2 - y^3"]), 6, 6), None).unwrap();
        assert_eq!(l.closed.generators().len(), 6);
        assert_eq!(l.open_witnesses.len(), 1);
        assert_eq!(constructible_dimension(&l, &e).unwrap(), Some(9));
        assert!(contact_locus(&ContactSpec::exactly(ideal(&u, &["x"]), 4, 3), None).is_err());
        assert!(contact_locus(&ContactSpec::at_least(ideal(&u, &["x"]), 5, 3), None).is_err());
    }

    #[test]
    fn constructible_examples() {
        let e = Groebner::default();
        let u = VariableUniverse::new(&["x"]).unwrap();
        let ring = JetRing::new(&u, 1).unwrap();
        let x0 = parse_polynomial("x_0", ring.universe()).unwrap();
        let mut l = ConstructibleLocus::full(ring.clone());
        l.add_closed([x0.clone()]);
        assert_eq!(constructible_dimension(&l, &e).unwrap(), Some(1));
        l.add_witness(vec![x0]).unwrap();
        assert_eq!(constructible_dimension(&l, &e).unwrap(), None);

        let node = ideal(&xy(), &["x*y"]);
        let l = contact_locus(&ContactSpec::at_least(ideal(&xy(), &["x", "y"]), 1, 3), Some(&node)).unwrap();
        assert_eq!(constructible_dimension(&l, &e).unwrap(), Some(4));
    }

    #[test]
    fn both_dimension_routes_agree() {
        let e = Groebner::default();
        let u = xy();
        let cusp = ideal(&u, &["x^2 - y^3"]);
        for (z, ord, m) in [(&["x", "y"][..], 2, 3), (&["x"][..], 2, 3), (&["y"][..], 1, 2)] {
            let spec = ContactSpec::exactly(ideal(&u, z), ord, m);
            let l = contact_locus(&spec, Some(&cusp)).unwrap();
            assert_eq!(
                constructible_dimension(&l, &e).unwrap(),
                constructible_dimension_by_saturation(&l, &e).unwrap()
            );
        }
    }

    #[test]
    fn cusp_contact_codims() {
        // codim of Cont^{≥w}(cusp) in J_m(A^2) is w - ⌊w/6⌋
        let e = Groebner::default();
        let u = xy();
        for w in 1..=7 {
            let l = contact_locus(&ContactSpec::at_least(ideal(&u, &["x^2 - y^3"]), w, w - 1), None).unwrap();
            let dim = constructible_dimension(&l, &e).unwrap().unwrap();
            assert_eq!(2 * w - dim, w - w / 6, "w = {w}");
        }
    }

    #[test]
    fn cylinder_examples() {
        let e = Groebner::default();
        let u = xy();
        let cusp = EmbeddedVariety::new(ideal(&u, &["x^2 - y^3"]), 1).unwrap();
        assert_eq!(cylinder_codim(&cusp, 3, 3, &e).unwrap(), Some(2));
        let circle = EmbeddedVariety::new(ideal(&u, &["x^2 + y^2 - 1"]), 1).unwrap();
        for m in 0..=3 {
            assert_eq!(cylinder_codim(&circle, 0, m, &e).unwrap(), Some(0));
        }
        assert_eq!(cylinder_codim_at(&cusp, 2, 2, &e).unwrap(), None);
        assert!(cylinder_codim(&cusp, 3, 2, &e).is_err());
    }

    #[test]
    fn fiber_formula_examples() {
        assert_eq!(fiber_dim_formula(3, 6, 3, 1).unwrap(), 6);
        assert_eq!(fiber_dim_formula(0, 6, 3, 2).unwrap(), 6);
        assert_eq!(fiber_dim_formula(1, 3, 2, 2).unwrap(), 3);
        assert!(fiber_dim_formula(2, 6, 2, 1).is_err());
    }

    #[test]
    fn cusp_fiber_over_level_three() {
        let e = Groebner::default();
        let u = xy();
        let (ring, j) = crate::jetcalc::jet_ideal(&ideal(&u, &["x^2 - y^3"]), 6).unwrap();
        let gamma = JetPoint::from_series(
            &[
                crate::polycore::TruncatedSeries::from_ints(&[0, 0, 0, 1], 4),
                crate::polycore::TruncatedSeries::from_ints(&[0, 0, 1], 4),
            ],
            3,
        )
        .unwrap();
        assert_eq!(fiber_dimension(&ring, &j, &gamma, &e).unwrap(), Some(6));
    }

    #[test]
    fn blow_up_chart_probe() {
        let e = Groebner::default();
        let u = xy();
        let f = vec![parse_polynomial("x", &u).unwrap(), parse_polynomial("x*y", &u).unwrap()];
        let b = [TargetCondition { subscheme: ideal(&u, &["x", "y"]), order: 1, mode: ContactMode::AtLeast }];
        let r = change_of_variable_probe(&f, &b, 2, 3, &e).unwrap();
        assert_eq!(r.direct_codim, Some(2));
        assert_eq!(r.transformed_min, Some(2));
        assert_eq!(r.argmin, Some(1));
        assert!(r.agree);
    }

    #[test]
    fn identity_and_square_probes() {
        let e = Groebner::default();
        let u = xy();
        let f = vec![parse_polynomial("x", &u).unwrap(), parse_polynomial("y", &u).unwrap()];
        let b = [TargetCondition { subscheme: ideal(&u, &["y"]), order: 2, mode: ContactMode::AtLeast }];
        let r = change_of_variable_probe(&f, &b, 2, 3, &e).unwrap();
        assert!(r.agree);
        assert_eq!(r.argmin, Some(0));

        let u1 = VariableUniverse::new(&["x"]).unwrap();
        let f = vec![parse_polynomial("x^2", &u1).unwrap()];
        let b = [TargetCondition { subscheme: ideal(&u1, &["x"]), order: 2, mode: ContactMode::AtLeast }];
        let r = change_of_variable_probe(&f, &b, 3, 4, &e).unwrap();
        assert_eq!(r.direct_codim, Some(2));
        assert_eq!(r.transformed_min, Some(2));
        assert_eq!(r.argmin, Some(1));
        assert!(r.agree);
    }
}
