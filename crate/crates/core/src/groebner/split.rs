//! Dimension of a constructible set
//!
//!   { p : every closed generator vanishes at p, and every witness ideal has
//!         a generator not vanishing at p }
//!
//! projected onto a set of kept coordinates. Before any Gröbner basis is
//! formed the set is split into pieces on which some variable can be
//! solved for:
//!
//! * a generator c·u + b with c a nonzero constant lets u be substituted
//!   away;
//! * a generator a·u + b with a a monomial splits into {a ≠ 0}, where u is
//!   substituted, and the pieces {v = 0} for the variables v of a;
//! * a monomial generator splits into the pieces {v = 0}.
//!
//! Each piece loses at least one variable, so the recursion is finite. The
//! leaves go to the Gröbner engine. Jet ideals are linear in their
//! top-order variables, which makes them split well.

use std::collections::BTreeSet;

use super::{Dimension, Groebner, IdealPresentation};
use crate::error::Result;
use num_traits::One;

use crate::polycore::{Monomial, Polynomial, Rational, VariableUniverse};

#[derive(Clone)]
struct Piece {
    closed: Vec<Polynomial>,
    witnesses: Vec<Vec<Polynomial>>,
    /// variables known to be nonzero on the piece
    nonzero: BTreeSet<usize>,
    /// variables not yet substituted away
    alive: BTreeSet<usize>,
}

struct Solver<'a> {
    engine: &'a Groebner,
    universe: &'a VariableUniverse,
    keep: &'a BTreeSet<usize>,
    best: Dimension,
}

/// `keep = None` measures the locus itself.
pub(crate) fn locus_dimension(
    engine: &Groebner,
    closed: &IdealPresentation,
    witnesses: &[IdealPresentation],
    keep: Option<&BTreeSet<usize>>,
) -> Result<Dimension> {
    let universe = closed.universe();
    let all: BTreeSet<usize> = (0..universe.len()).collect();
    let keep = keep.cloned().unwrap_or_else(|| all.clone());
    let piece = Piece {
        closed: closed.generators().to_vec(),
        witnesses: witnesses.iter().map(|w| w.generators().to_vec()).collect(),
        nonzero: BTreeSet::new(),
        alive: all,
    };
    let mut s = Solver { engine, universe, keep: &keep, best: None };
    s.solve(piece)?;
    Ok(s.best)
}

fn is_monomial(p: &Polynomial) -> bool {
    p.len() == 1
}

/// p with x_u replaced by -b/a, multiplied by a^deg_u(p).
fn substitute(p: &Polynomial, u: usize, a: &Polynomial, minus_b: &Polynomial, powers: &mut Vec<Polynomial>) -> Polynomial {
    let d = p.degree_in(u) as usize;
    if d == 0 {
        return p.clone();
    }
    let parts = p.coefficients_in(u);
    while powers.len() <= d {
        let next = &powers[powers.len() - 1] * minus_b;
        powers.push(next);
    }
    let mut acc = Polynomial::zero();
    for (k, c) in parts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &(c * &powers[k]) * &a.pow((d - k) as u32);
        acc = &acc + &term;
    }
    acc.monic()
}

fn set_zero(p: &Polynomial, v: usize) -> Polynomial {
    if p.degree_in(v) == 0 {
        return p.clone();
    }
    Polynomial::from_terms(p.terms().iter().filter(|(m, _)| m.exponent(v) == 0).cloned())
}

impl Piece {
    fn kill(&mut self, v: usize) {
        self.closed = self.closed.iter().map(|g| set_zero(g, v)).collect();
        for w in &mut self.witnesses {
            *w = w.iter().map(|g| set_zero(g, v)).collect();
        }
        self.alive.remove(&v);
    }

    fn solve_for(&mut self, u: usize, a: &Polynomial, b: &Polynomial) {
        let minus_b = -b;
        let mut powers = vec![Polynomial::one()];
        self.closed = self.closed.iter().map(|g| substitute(g, u, a, &minus_b, &mut powers)).collect();
        for w in &mut self.witnesses {
            *w = w.iter().map(|g| substitute(g, u, a, &minus_b, &mut powers)).collect();
        }
        self.alive.remove(&u);
        if self.nonzero.remove(&u) {
            self.witnesses.push(vec![b.clone()]);
        }
    }

    /// Drops trivial data. Returns false when the piece is empty.
    fn normalize(&mut self) -> bool {
        self.closed.retain(|g| !g.is_zero());
        if self.closed.iter().any(|g| g.is_constant()) {
            return false;
        }
        self.closed.sort_by_key(|g| g.len());
        self.closed.dedup();
        let mut kept = Vec::new();
        for w in std::mem::take(&mut self.witnesses) {
            let w: Vec<Polynomial> = w.into_iter().filter(|g| !g.is_zero()).collect();
            if w.is_empty() {
                return false;
            }
            if w.iter().any(|g| g.is_constant()) {
                continue;
            }
            if w.len() == 1 && is_monomial(&w[0]) {
                self.nonzero.extend(w[0].terms()[0].0.support());
                continue;
            }
            kept.push(w);
        }
        self.witnesses = kept;
        true
    }
}

impl Solver<'_> {
    fn upper_bound(&self, piece: &Piece) -> usize {
        piece.alive.intersection(self.keep).count()
    }

    fn solve(&mut self, mut piece: Piece) -> Result<()> {
        loop {
            if !piece.normalize() {
                return Ok(());
            }
            let ub = self.upper_bound(&piece);
            if self.best.is_some_and(|b| b >= ub) {
                return Ok(());
            }
            if piece.closed.is_empty() && piece.witnesses.is_empty() {
                self.best = Some(ub);
                return Ok(());
            }
            if let Some(g) = piece.closed.iter().find(|g| is_monomial(g)) {
                let vars: Vec<usize> = g.terms()[0].0.support().into_iter().filter(|v| !piece.nonzero.contains(v)).collect();
                match vars.len() {
                    0 => return Ok(()),
                    1 => {
                        piece.kill(vars[0]);
                        continue;
                    }
                    _ => return self.branch_zero(&piece, &vars),
                }
            }
            match self.pick_linear(&piece) {
                Some((u, a, b)) if a.is_constant() => {
                    piece.solve_for(u, &a, &b);
                    continue;
                }
                Some((u, a, b)) => {
                    let mono = a.terms()[0].0.support();
                    let mut open = piece.clone();
                    open.nonzero.extend(mono.iter().copied());
                    open.solve_for(u, &a, &b);
                    self.solve(open)?;
                    let vars: Vec<usize> = mono.into_iter().filter(|v| !piece.nonzero.contains(v)).collect();
                    return self.branch_zero(&piece, &vars);
                }
                None => return self.leaf(&piece),
            }
        }
    }

    /// The pieces {v_k = 0, v_1 ≠ 0, ..., v_{k-1} ≠ 0}.
    fn branch_zero(&mut self, piece: &Piece, vars: &[usize]) -> Result<()> {
        for (k, &v) in vars.iter().enumerate() {
            let mut child = piece.clone();
            child.nonzero.extend(vars[..k].iter().copied());
            child.kill(v);
            self.solve(child)?;
        }
        Ok(())
    }

    /// A generator a·u + b with a constant or a monomial and u not in a or
    /// b; u must be a dropped coordinate unless a and b only involve kept
    /// ones. Prefers constant a, then low-degree a, then short generators.
    fn pick_linear(&self, piece: &Piece) -> Option<(usize, Polynomial, Polynomial)> {
        let mut best: Option<((u32, usize), usize, Polynomial, Polynomial)> = None;
        for g in &piece.closed {
            for u in g.variables() {
                if g.degree_in(u) != 1 {
                    continue;
                }
                let parts = g.coefficients_in(u);
                let (b, a) = (&parts[0], &parts[1]);
                if !is_monomial(a) {
                    continue;
                }
                if self.keep.contains(&u) && !(a.variables().is_subset(self.keep) && b.variables().is_subset(self.keep)) {
                    continue;
                }
                let key = (a.total_degree(), g.len());
                if best.as_ref().is_none_or(|(k, ..)| key < *k) {
                    best = Some((key, u, a.clone(), b.clone()));
                }
            }
        }
        best.map(|(_, u, a, b)| (u, a, b))
    }

    fn leaf(&mut self, piece: &Piece) -> Result<()> {
        let mut witnesses = piece.witnesses.clone();
        if !piece.nonzero.is_empty() {
            let m = Monomial::from_pairs(piece.nonzero.iter().map(|&v| (v, 1)));
            witnesses.push(vec![Polynomial::monomial(m, Rational::one())]);
        }
        let closed = IdealPresentation::new(self.universe.clone(), piece.closed.clone())?;
        let witnesses = witnesses
            .into_iter()
            .map(|w| IdealPresentation::new(self.universe.clone(), w))
            .collect::<Result<Vec<_>>>()?;
        let keep: BTreeSet<usize> = piece.alive.intersection(self.keep).copied().collect();
        let d = direct_dimension(self.engine, &closed, &witnesses, &keep)?;
        self.best = self.best.max(d);
        Ok(())
    }
}

/// The locus dimension from Gröbner bases alone: the largest projected
/// dimension of V(closed + (1 - t g_1 ⋯ g_k)) over the choices of one
/// generator g_i per witness.
pub(crate) fn direct_dimension(
    engine: &Groebner,
    closed: &IdealPresentation,
    witnesses: &[IdealPresentation],
    keep: &BTreeSet<usize>,
) -> Result<Dimension> {
    let universe = closed.universe();
    let (wide, t) = universe.with_fresh("t");
    let block: BTreeSet<usize> = (0..wide.len()).filter(|v| !keep.contains(v)).collect();
    let closed = closed.widen(&wide)?;
    if witnesses.is_empty() {
        return engine.projected_dimension(&closed, &block);
    }
    let gens: Vec<Vec<Polynomial>> = witnesses.iter().map(|w| w.generators().to_vec()).collect();
    let mut best: Dimension = None;
    for choice in choices(&gens) {
        let prod = choice.iter().fold(Polynomial::one(), |acc, g| &acc * *g);
        let rab = &Polynomial::one() - &(&Polynomial::var(t) * &prod);
        let d = engine.projected_dimension(&closed.with([rab]), &block)?;
        best = best.max(d);
        if best == Some(keep.len()) {
            break;
        }
    }
    Ok(best)
}

fn choices(witnesses: &[Vec<Polynomial>]) -> Vec<Vec<&Polynomial>> {
    let mut out: Vec<Vec<&Polynomial>> = vec![Vec::new()];
    for w in witnesses {
        let mut next = Vec::with_capacity(out.len() * w.len());
        for prefix in &out {
            for g in w {
                let mut c = prefix.clone();
                c.push(g);
                next.push(c);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rational::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> Polynomial {
        let terms = rng.gen_range(1..=3);
        let t = (0..terms).map(|_| {
            let m = Monomial::from_exponents((0..n).map(|_| rng.gen_range(0..=2) * rng.gen_range(0..=1)).collect());
            (m, int(rng.gen_range(-2..=2)))
        });
        Polynomial::from_terms(t)
    }

    #[test]
    fn splitting_matches_direct_route() {
        let u = VariableUniverse::new(&["a", "b", "c", "d"]).unwrap();
        let e = Groebner::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let closed: Vec<Polynomial> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, 4)).collect();
            let witnesses: Vec<IdealPresentation> = (0..rng.gen_range(0..=1))
                .map(|_| {
                    let g = (0..rng.gen_range(1..=2)).map(|_| random_poly(&mut rng, 4)).collect();
                    IdealPresentation::new(u.clone(), g).unwrap()
                })
                .collect();
            let keep: BTreeSet<usize> = (0..4).filter(|_| rng.gen_bool(0.7)).collect();
            let closed = IdealPresentation::new(u.clone(), closed).unwrap();
            let a = e.constructible_dimension(&closed, &witnesses, Some(&keep)).unwrap();
            let b = e.constructible_dimension_direct(&closed, &witnesses, Some(&keep)).unwrap();
            assert_eq!(a, b, "closed {:?} witnesses {:?} keep {keep:?}", closed.display(), witnesses.iter().map(|w| w.display()).collect::<Vec<_>>());
        }
    }
}
