//! Buchberger's algorithm with the Gebauer–Möller pair update and sugar
//! selection. Polynomials here are term vectors sorted by the working
//! order, kept monic.

use std::cmp::Ordering;

use super::coeff::Coeff;
use super::order::MonomialOrder;
use crate::error::{Error, Result};
use crate::polycore::{Monomial, Polynomial};

pub(crate) type Term = (Monomial, Coeff);

pub(crate) fn to_ordered(f: &Polynomial, order: &MonomialOrder) -> Vec<Term> {
    let mut t: Vec<Term> = f.terms().iter().map(|(m, c)| (m.clone(), Coeff::from_rational(c))).collect();
    if *order != MonomialOrder::GrevLex {
        t.sort_by(|a, b| order.compare(&b.0, &a.0));
    }
    t
}

pub(crate) fn from_ordered(t: Vec<Term>) -> Polynomial {
    let mut t: Vec<_> = t.into_iter().map(|(m, c)| (m, c.to_rational())).collect();
    t.sort_by(|a, b| b.0.cmp_grevlex(&a.0));
    Polynomial::from_sorted_unchecked(t)
}

fn make_monic(p: &mut [Term]) {
    if let Some((_, c)) = p.first() {
        if !c.is_one() {
            let inv = c.recip();
            for (_, k) in p.iter_mut() {
                *k = k.mul(&inv);
            }
        }
    }
}

/// a - c * q * b, all sorted by `order`.
fn sub_mul(a: &[Term], b: &[Term], q: &Monomial, c: &Coeff, order: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(m, k)| (m.mul(q), k.mul(c))).peekable();
    while i < a.len() {
        let Some((bm, _)) = bi.peek() else { break };
        match order.compare(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (m, k) = bi.next().expect("peeked");
                out.push((m, k.neg()));
            }
            Ordering::Equal => {
                let (m, k) = bi.next().expect("peeked");
                let s = a[i].1.sub(&k);
                if !s.is_zero() {
                    out.push((m, s));
                }
                i += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(bi.map(|(m, k)| (m, k.neg())));
    out
}

/// Full reduction of `p` by the monic polynomials `reducers` (given with
/// their divisibility masks).
pub(crate) fn reduce(p: Vec<Term>, reducers: &[(&[Term], u64)], order: &MonomialOrder) -> Vec<Term> {
    let mut rem: Vec<Term> = Vec::new();
    let mut p = p;
    let mut idx = 0;
    while idx < p.len() {
        let m = &p[idx].0;
        let mask = m.divmask();
        let hit = reducers
            .iter()
            .find(|(g, gm)| gm & !mask == 0 && g[0].0.divides(m));
        match hit {
            Some((g, _)) => {
                let q = g[0].0.quotient_of(m);
                let c = p[idx].1.clone();
                p = sub_mul(&p[idx + 1..], &g[1..], &q, &c, order);
                idx = 0;
            }
            None => {
                let t = std::mem::take(&mut p[idx]);
                rem.push(t);
                idx += 1;
            }
        }
    }
    rem
}

struct Element {
    poly: Vec<Term>,
    mask: u64,
    sugar: u32,
}

impl Element {
    fn lm(&self) -> &Monomial {
        &self.poly[0].0
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Engine<'a> {
    order: &'a MonomialOrder,
    elems: Vec<Element>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    radical: bool,
    max_pairs: usize,
    processed: usize,
}

pub(crate) enum Outcome {
    Unit,
    Basis(Vec<Vec<Term>>),
}

impl<'a> Engine<'a> {
    fn reducers(&self) -> Vec<(&[Term], u64)> {
        self.elems
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(e, _)| (e.poly.as_slice(), e.mask))
            .collect()
    }

    fn full_reduce(&self, p: Vec<Term>) -> Vec<Term> {
        let red = self.reducers();
        reduce(p, &red, self.order)
    }

    /// Inserts a nonzero reduced polynomial; returns true when it is a
    /// constant (the ideal is the unit ideal).
    fn insert(&mut self, mut p: Vec<Term>, sugar: u32) -> bool {
        if self.radical && p.len() == 1 {
            p[0].0 = p[0].0.squarefree_part();
        }
        make_monic(&mut p);
        if p[0].0.is_one() {
            return true;
        }
        let mask = p[0].0.divmask();
        let h = self.elems.len();
        self.elems.push(Element { poly: p, mask, sugar });
        self.active.push(false);
        self.update(h);
        self.active[h] = true;
        false
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let (a, b) = (&self.elems[i], &self.elems[j]);
        let d = lcm.degree();
        (a.sugar + d - a.lm().degree()).max(b.sugar + d - b.lm().degree())
    }

    fn update(&mut self, h: usize) {
        let lm_h = self.elems[h].lm().clone();
        let cand: Vec<(usize, Monomial, bool)> = (0..h)
            .filter(|&g| self.active[g])
            .map(|g| {
                let lm_g = self.elems[g].lm();
                (g, lm_h.lcm(lm_g), lm_h.is_coprime(lm_g))
            })
            .collect();
        // 0: still in C, 1: kept (D), 2: dropped
        let mut state = vec![0u8; cand.len()];
        for k in 0..cand.len() {
            let keep = cand[k].2
                || !(0..cand.len()).any(|l| {
                    l != k && (state[l] == 1 || (state[l] == 0 && l > k)) && cand[l].1.divides(&cand[k].1)
                });
            state[k] = if keep { 1 } else { 2 };
        }
        let elems = &self.elems;
        self.pairs.retain(|p| {
            !(lm_h.divides(&p.lcm)
                && elems[p.i].lm().lcm(&lm_h) != p.lcm
                && elems[p.j].lm().lcm(&lm_h) != p.lcm)
        });
        for (k, (g, lcm, coprime)) in cand.into_iter().enumerate() {
            if state[k] == 1 && !coprime {
                let sugar = self.pair_sugar(g, h, &lcm);
                self.pairs.push(Pair { i: g, j: h, lcm, sugar });
            }
        }
        for g in 0..h {
            if self.active[g] && lm_h.divides(self.elems[g].lm()) {
                self.active[g] = false;
            }
        }
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.sugar.cmp(&b.sugar).then_with(|| order.compare(&a.lcm, &b.lcm)))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn s_poly(&self, p: &Pair) -> Vec<Term> {
        let (a, b) = (&self.elems[p.i].poly, &self.elems[p.j].poly);
        let qa = a[0].0.quotient_of(&p.lcm);
        let qb = b[0].0.quotient_of(&p.lcm);
        let left: Vec<Term> = a[1..].iter().map(|(m, c)| (m.mul(&qa), c.clone())).collect();
        sub_mul(&left, &b[1..], &qb, &Coeff::one(), self.order)
    }

    fn run(mut self, gens: &[Polynomial]) -> Result<Outcome> {
        let mut inputs: Vec<Vec<Term>> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| to_ordered(g, self.order))
            .collect();
        inputs.sort_by(|a, b| self.order.compare(&a[0].0, &b[0].0));
        for g in inputs {
            let sugar = g.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
            let r = self.full_reduce(g);
            if !r.is_empty() && self.insert(r, sugar) {
                return Ok(Outcome::Unit);
            }
        }
        while let Some(p) = self.next_pair() {
            self.processed += 1;
            if self.processed > self.max_pairs {
                return Err(Error::BudgetExceeded { limit: self.max_pairs });
            }
            let s = self.s_poly(&p);
            let r = self.full_reduce(s);
            if !r.is_empty() && self.insert(r, p.sugar) {
                return Ok(Outcome::Unit);
            }
        }
        // The active elements form a minimal basis; reduce tails.
        let idx: Vec<usize> = (0..self.elems.len()).filter(|&k| self.active[k]).collect();
        let mut out = Vec::with_capacity(idx.len());
        for &k in &idx {
            let others: Vec<(&[Term], u64)> = idx
                .iter()
                .filter(|&&l| l != k)
                .map(|&l| (self.elems[l].poly.as_slice(), self.elems[l].mask))
                .collect();
            let mut r = reduce(self.elems[k].poly.clone(), &others, self.order);
            make_monic(&mut r);
            out.push(r);
        }
        out.sort_by(|a, b| self.order.compare(&a[0].0, &b[0].0));
        Ok(Outcome::Basis(out))
    }
}

pub(crate) fn buchberger(
    gens: &[Polynomial],
    order: &MonomialOrder,
    radical: bool,
    max_pairs: usize,
) -> Result<Outcome> {
    let engine = Engine {
        order,
        elems: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        radical,
        max_pairs,
        processed: 0,
    };
    engine.run(gens)
}
