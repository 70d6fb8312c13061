//! Gröbner bases over Q and the ideal operations built on them: normal
//! forms, Krull dimension, quotients, saturation and elimination.

mod buchberger;
mod coeff;
mod dimension;
mod order;
mod split;

use std::collections::BTreeSet;

use buchberger::{buchberger, from_ordered, reduce, to_ordered, Outcome, Term};
pub use dimension::brute_force_dimension;
use dimension::independent_dimension;
pub use order::{BaseOrder, MonomialOrder};

use crate::error::{invalid, Error, Result};
use crate::polycore::{parse_polynomial, Monomial, Polynomial, VariableUniverse};

/// Generators of an ideal together with the universe they live in. Zero
/// generators are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealPresentation {
    universe: VariableUniverse,
    generators: Vec<Polynomial>,
}

impl IdealPresentation {
    pub fn new(universe: VariableUniverse, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            g.check_universe(&universe)?;
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Self { universe, generators })
    }

    pub fn parse<S: AsRef<str>>(universe: &VariableUniverse, gens: &[S]) -> Result<Self> {
        let g = gens
            .iter()
            .map(|s| parse_polynomial(s.as_ref(), universe))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe.clone(), g)
    }

    pub fn zero(universe: VariableUniverse) -> Self {
        Self { universe, generators: Vec::new() }
    }

    pub fn unit(universe: VariableUniverse) -> Self {
        Self { universe, generators: vec![Polynomial::one()] }
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// The same generators plus `extra`.
    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> Self {
        let mut generators = self.generators.clone();
        generators.extend(extra.into_iter().filter(|g| !g.is_zero()));
        Self { universe: self.universe.clone(), generators }
    }

    /// Reinterprets the generators in a larger universe sharing a prefix.
    pub fn widen(&self, universe: &VariableUniverse) -> Result<Self> {
        Self::new(universe.clone(), self.generators.clone())
    }

    pub fn display(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.display(&self.universe)).collect()
    }

    fn same_universe(&self, other: &Self) -> Result<()> {
        if self.universe != other.universe {
            return invalid("ideals live in different universes");
        }
        Ok(())
    }
}

/// A Gröbner basis. When `reduced` holds it is the unique reduced basis
/// for its ideal and order; the unit ideal is represented by `{1}`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    universe: VariableUniverse,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    ordered: Vec<Vec<Term>>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    /// Leading monomials with respect to the basis order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.ordered.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn leading_term(&self, f: &Polynomial) -> Option<Monomial> {
        to_ordered(f, &self.order).first().map(|t| t.0.clone())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        f.check_universe(&self.universe)?;
        let red: Vec<(&[Term], u64)> = self.ordered.iter().map(|g| (g.as_slice(), g[0].0.divmask())).collect();
        Ok(from_ordered(reduce(to_ordered(f, &self.order), &red, &self.order)))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Checks Buchberger's criterion on every pair of basis elements.
    pub fn verify_s_pairs(&self) -> bool {
        let red: Vec<(&[Term], u64)> = self.ordered.iter().map(|g| (g.as_slice(), g[0].0.divmask())).collect();
        for i in 0..self.ordered.len() {
            for j in i + 1..self.ordered.len() {
                let (a, b) = (&self.ordered[i], &self.ordered[j]);
                let l = a[0].0.lcm(&b[0].0);
                let fa = from_ordered(a.clone()).mul_monomial(&a[0].0.quotient_of(&l), &a[0].1.recip().to_rational());
                let fb = from_ordered(b.clone()).mul_monomial(&b[0].0.quotient_of(&l), &b[0].1.recip().to_rational());
                let s = &fa - &fb;
                if !reduce(to_ordered(&s, &self.order), &red, &self.order).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Division with quotients: returns (q, r) with f = Σ q_k g_k + r and
    /// no term of r divisible by a leading monomial.
    pub fn divide(&self, f: &Polynomial) -> Result<(Vec<Polynomial>, Polynomial)> {
        f.check_universe(&self.universe)?;
        let gs: Vec<Polynomial> = self.ordered.iter().map(|g| from_ordered(g.clone())).collect();
        let mut q = vec![Polynomial::zero(); gs.len()];
        let mut r = Polynomial::zero();
        let mut p = f.clone();
        while let Some((m, c)) = to_ordered(&p, &self.order).into_iter().next() {
            match self.ordered.iter().position(|g| g[0].0.divides(&m)) {
                Some(k) => {
                    let t = Polynomial::monomial(self.ordered[k][0].0.quotient_of(&m), c.div(&self.ordered[k][0].1).to_rational());
                    q[k] = &q[k] + &t;
                    p = &p - &(&t * &gs[k]);
                }
                None => {
                    let t = Polynomial::monomial(m, c.to_rational());
                    r = &r + &t;
                    p = &p - &t;
                }
            }
        }
        Ok((q, r))
    }
}

/// Dimension of a vanishing locus; `None` is the empty set.
pub type Dimension = Option<usize>;

/// Gröbner engine with a budget on the number of S-pairs it will reduce.
#[derive(Clone, Copy, Debug)]
pub struct Groebner {
    pub max_pairs: usize,
}

impl Default for Groebner {
    fn default() -> Self {
        Self { max_pairs: 50_000 }
    }
}

impl Groebner {
    pub fn new(max_pairs: usize) -> Self {
        Self { max_pairs }
    }

    fn compute(&self, ideal: &IdealPresentation, order: &MonomialOrder, radical: bool) -> Result<GroebnerBasis> {
        let universe = ideal.universe.clone();
        let (ordered, basis) = match buchberger(&ideal.generators, order, radical, self.max_pairs)? {
            Outcome::Unit => {
                let one = Polynomial::one();
                (vec![to_ordered(&one, order)], vec![one])
            }
            Outcome::Basis(b) => {
                let polys = b.iter().map(|t| from_ordered(t.clone())).collect();
                (b, polys)
            }
        };
        Ok(GroebnerBasis { universe, order: order.clone(), basis, ordered, reduced: true })
    }

    /// Reduced Gröbner basis. Each input generator is checked to reduce to
    /// zero against the result.
    pub fn basis(&self, ideal: &IdealPresentation, order: &MonomialOrder) -> Result<GroebnerBasis> {
        let gb = self.compute(ideal, order, false)?;
        for g in &ideal.generators {
            if !gb.contains(g)? {
                return Err(Error::Invariant("input generator does not reduce to zero".into()));
            }
        }
        Ok(gb)
    }

    pub fn normal_form(&self, f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
        gb.normal_form(f)
    }

    /// Dimension of V(I) over the algebraic closure, through the splitting
    /// pre-pass of [`Groebner::constructible_dimension`].
    pub fn krull_dimension(&self, ideal: &IdealPresentation) -> Result<Dimension> {
        split::locus_dimension(self, ideal, &[], None)
    }

    /// The same dimension from one grevlex basis.
    ///
    /// Monomial basis elements are replaced by their squarefree parts while
    /// the basis is built; this keeps the vanishing set, and so the answer,
    /// while keeping bases of jet ideals small.
    pub fn krull_dimension_direct(&self, ideal: &IdealPresentation) -> Result<Dimension> {
        let gb = self.compute(ideal, &MonomialOrder::GrevLex, true)?;
        if gb.is_unit() {
            return Ok(None);
        }
        let vars: Vec<usize> = (0..ideal.universe.len()).collect();
        Ok(Some(independent_dimension(&gb.leading_monomials(), &vars)))
    }

    /// Dimension of the closure of the projection of V(I) forgetting the
    /// `block` coordinates.
    pub fn projected_dimension(&self, ideal: &IdealPresentation, block: &BTreeSet<usize>) -> Result<Dimension> {
        if block.is_empty() {
            return self.krull_dimension_direct(ideal);
        }
        let order = MonomialOrder::elimination(block);
        let gb = self.compute(ideal, &order, true)?;
        if gb.is_unit() {
            return Ok(None);
        }
        let rest: Vec<usize> = (0..ideal.universe.len()).filter(|v| !block.contains(v)).collect();
        let lms: Vec<Monomial> = gb
            .leading_monomials()
            .into_iter()
            .filter(|m| m.iter().all(|(v, _)| !block.contains(&v)))
            .collect();
        Ok(Some(independent_dimension(&lms, &rest)))
    }

    /// Dimension of the closure of the projection onto the `keep`
    /// coordinates (all of them when `None`) of the set of points where
    /// `closed` vanishes and each witness ideal does not.
    pub fn constructible_dimension(
        &self,
        closed: &IdealPresentation,
        witnesses: &[IdealPresentation],
        keep: Option<&BTreeSet<usize>>,
    ) -> Result<Dimension> {
        for w in witnesses {
            closed.same_universe(w)?;
        }
        split::locus_dimension(self, closed, witnesses, keep)
    }

    /// The same dimension computed by Gröbner bases alone, without the
    /// splitting pre-pass. Slow on jet loci; kept as a reference.
    pub fn constructible_dimension_direct(
        &self,
        closed: &IdealPresentation,
        witnesses: &[IdealPresentation],
        keep: Option<&BTreeSet<usize>>,
    ) -> Result<Dimension> {
        for w in witnesses {
            closed.same_universe(w)?;
        }
        let all: BTreeSet<usize> = (0..closed.universe.len()).collect();
        split::direct_dimension(self, closed, witnesses, keep.unwrap_or(&all))
    }

    /// I ∩ Q[variables outside `block`].
    pub fn eliminate(&self, ideal: &IdealPresentation, block: &BTreeSet<usize>) -> Result<IdealPresentation> {
        if let Some(&v) = block.iter().find(|&&v| v >= ideal.universe.len()) {
            return Err(Error::UniverseMismatch { id: v, size: ideal.universe.len() });
        }
        if block.is_empty() {
            let gb = self.basis(ideal, &MonomialOrder::GrevLex)?;
            return IdealPresentation::new(ideal.universe.clone(), gb.basis);
        }
        let gb = self.basis(ideal, &MonomialOrder::elimination(block))?;
        let kept = gb
            .basis
            .into_iter()
            .filter(|g| g.variables().is_disjoint(block))
            .collect();
        IdealPresentation::new(ideal.universe.clone(), kept)
    }

    pub fn intersection(&self, a: &IdealPresentation, b: &IdealPresentation) -> Result<IdealPresentation> {
        a.same_universe(b)?;
        let (wide, t) = a.universe.with_fresh("t");
        let tv = Polynomial::var(t);
        let one_minus_t = &Polynomial::one() - &tv;
        let mut gens: Vec<Polynomial> = a.generators.iter().map(|f| &tv * f).collect();
        gens.extend(b.generators.iter().map(|g| &one_minus_t * g));
        let big = IdealPresentation::new(wide, gens)?;
        let elim = self.eliminate(&big, &BTreeSet::from([t]))?;
        IdealPresentation::new(a.universe.clone(), elim.generators)
    }

    /// I : J = { f : f J ⊆ I }.
    pub fn ideal_quotient(&self, i: &IdealPresentation, j: &IdealPresentation) -> Result<IdealPresentation> {
        i.same_universe(j)?;
        if j.is_zero() {
            return Ok(IdealPresentation::unit(i.universe.clone()));
        }
        let mut acc: Option<IdealPresentation> = None;
        for g in &j.generators {
            let q = self.quotient_principal(i, g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => self.intersection(&a, &q)?,
            });
        }
        Ok(acc.expect("nonempty"))
    }

    fn quotient_principal(&self, i: &IdealPresentation, g: &Polynomial) -> Result<IdealPresentation> {
        if g.is_constant() {
            return Ok(i.clone());
        }
        let principal = IdealPresentation::new(i.universe.clone(), vec![g.clone()])?;
        let meet = self.intersection(i, &principal)?;
        let mut gens = Vec::with_capacity(meet.generators.len());
        for h in &meet.generators {
            match divide_exact(h, g) {
                Some(q) => gens.push(q),
                None => return Err(Error::Invariant("intersection element not divisible".into())),
            }
        }
        IdealPresentation::new(i.universe.clone(), gens)
    }

    /// I : J^∞. Each generator g of J is handled by eliminating t from
    /// I + (1 - t g); the results are intersected.
    pub fn saturation(&self, i: &IdealPresentation, j: &IdealPresentation) -> Result<IdealPresentation> {
        i.same_universe(j)?;
        if j.is_zero() {
            return Ok(IdealPresentation::unit(i.universe.clone()));
        }
        let mut acc: Option<IdealPresentation> = None;
        for g in &j.generators {
            let s = self.saturate_principal(i, g)?;
            acc = Some(match acc {
                None => s,
                Some(a) => self.intersection(&a, &s)?,
            });
        }
        Ok(acc.expect("nonempty"))
    }

    fn saturate_principal(&self, i: &IdealPresentation, g: &Polynomial) -> Result<IdealPresentation> {
        if g.is_constant() {
            return Ok(i.clone());
        }
        let (wide, t) = i.universe.with_fresh("t");
        let rab = &Polynomial::one() - &(&Polynomial::var(t) * g);
        let big = IdealPresentation::new(wide, i.generators.iter().cloned().chain([rab]).collect())?;
        let elim = self.eliminate(&big, &BTreeSet::from([t]))?;
        IdealPresentation::new(i.universe.clone(), elim.generators)
    }

    /// I : J^∞ as the stabilised chain I ⊆ I:J ⊆ (I:J):J ⊆ ...
    pub fn saturation_iterated(&self, i: &IdealPresentation, j: &IdealPresentation) -> Result<IdealPresentation> {
        let mut cur = i.clone();
        loop {
            let next = self.ideal_quotient(&cur, j)?;
            if self.equal(&cur, &next)? {
                return Ok(next);
            }
            cur = next;
        }
    }

    /// Does `a` contain every generator of `b`?
    pub fn contains(&self, a: &IdealPresentation, b: &IdealPresentation) -> Result<bool> {
        a.same_universe(b)?;
        let gb = self.basis(a, &MonomialOrder::GrevLex)?;
        for g in &b.generators {
            if !gb.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal(&self, a: &IdealPresentation, b: &IdealPresentation) -> Result<bool> {
        a.same_universe(b)?;
        let ga = self.basis(a, &MonomialOrder::GrevLex)?;
        let gb = self.basis(b, &MonomialOrder::GrevLex)?;
        Ok(ga.basis == gb.basis)
    }
}

/// f / g when g divides f exactly.
pub fn divide_exact(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    let (lm, lc) = g.terms().first()?.clone();
    let mut q = Polynomial::zero();
    let mut p = f.clone();
    while let Some((m, c)) = p.terms().first().cloned() {
        if !lm.divides(&m) {
            return None;
        }
        let t = Polynomial::monomial(lm.quotient_of(&m), &c / &lc);
        q = &q + &t;
        p = &p - &(&t * g);
    }
    Some(q)
}

/// Reduced basis with the default engine.
pub fn groebner_basis(ideal: &IdealPresentation, order: &MonomialOrder) -> Result<GroebnerBasis> {
    Groebner::default().basis(ideal, order)
}

pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    gb.normal_form(f)
}

pub fn krull_dimension(ideal: &IdealPresentation) -> Result<Dimension> {
    Groebner::default().krull_dimension(ideal)
}

pub fn ideal_quotient(i: &IdealPresentation, j: &IdealPresentation) -> Result<IdealPresentation> {
    Groebner::default().ideal_quotient(i, j)
}

pub fn saturation(i: &IdealPresentation, j: &IdealPresentation) -> Result<IdealPresentation> {
    Groebner::default().saturation(i, j)
}

pub fn eliminate(ideal: &IdealPresentation, block: &BTreeSet<usize>) -> Result<IdealPresentation> {
    Groebner::default().eliminate(ideal, block)
}
