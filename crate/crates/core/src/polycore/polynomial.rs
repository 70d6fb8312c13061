use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::rational::{int, Rational};
use super::universe::VariableUniverse;
use crate::error::{Error, Result};

/// Sparse polynomial over Q. Terms are kept sorted by decreasing grevlex
/// order with no zero coefficients, so structural equality is ideal-free
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Polynomial {
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn var(id: usize) -> Self {
        Self { terms: vec![(Monomial::var(id), Rational::one())] }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    /// Collects like terms and sorts.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp_grevlex(&a.0));
        Self { terms }
    }

    /// Wraps terms already sorted by decreasing grevlex with nonzero
    /// coefficients and distinct monomials.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0.cmp_grevlex(&w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Self { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No terms, the same as `is_zero`.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, c)] if m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// One past the largest variable id that occurs.
    pub fn width(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.width()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.iter().flat_map(|(m, _)| m.support()).collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn check_universe(&self, universe: &VariableUniverse) -> Result<()> {
        let w = self.width();
        if w > universe.len() {
            return Err(Error::UniverseMismatch { id: w - 1, size: universe.len() });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(mm, k)| (mm.mul(m), k * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => Self::zero(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients c_k with self = Σ c_k x_v^k.
    pub fn coefficients_in(&self, v: usize) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(v);
            let rest = if k == 0 { m.clone() } else { Monomial::var_pow(v, k).quotient_of(m) };
            parts[k as usize].push((rest, c.clone()));
        }
        parts.into_iter().map(Polynomial::from_terms).collect()
    }

    /// Formal partial derivative with respect to variable id `v`.
    pub fn derivative(&self, v: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| m.derive(v).map(|(e, mm)| (mm, c * int(e as i64))));
        Self::from_terms(terms)
    }

    /// Evaluates at a rational point; missing coordinates are an error.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let x = point.get(v).ok_or(Error::MissingAssignment(v))?;
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Image under the ring homomorphism x_v -> assignment[v].
    pub fn substitute(&self, assignment: &BTreeMap<usize, Polynomial>) -> Result<Self> {
        let mut acc = Polynomial::zero();
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone());
            for (v, e) in m.iter() {
                let base = assignment.get(&v).ok_or(Error::MissingAssignment(v))?;
                let p = powers.entry((v, e)).or_insert_with(|| base.pow(e));
                t = &t * &*p;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Renders with the universe's names, e.g. `3/2*x*y^2 - y + 1`.
    pub fn display(&self, universe: &VariableUniverse) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (v, e) in m.iter() {
                let name = universe.names().get(v).map(String::as_str).unwrap_or("?");
                if e == 1 {
                    factors.push(name.to_string());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn merge_add(a: &[(Monomial, Rational)], b: &[(Monomial, Rational)], negate_b: bool) -> Vec<(Monomial, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp_grevlex(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -b[j].1.clone() } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (m, c) in &b[j..] {
        out.push((m.clone(), if negate_b { -c.clone() } else { c.clone() }));
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial { terms: merge_add(&self.terms, &rhs.terms, false) }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial { terms: merge_add(&self.terms, &rhs.terms, true) }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(m, c);
        }
        Polynomial::from_terms(
            self.terms
                .iter()
                .flat_map(|(ma, ca)| rhs.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        )
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rational::frac;

    fn x() -> Polynomial {
        Polynomial::var(0)
    }
    fn y() -> Polynomial {
        Polynomial::var(1)
    }

    #[test]
    fn arithmetic_collects_terms() {
        let f = &(&x() + &y()) * &(&x() - &y());
        let g = &x().pow(2) - &y().pow(2);
        assert_eq!(f, g);
        assert!((&f - &g).is_zero());
    }

    #[test]
    fn derivative_power_rule() {
        let f = &x().pow(2) - &y().pow(3);
        assert_eq!(f.derivative(0), x().scale(&int(2)));
        assert_eq!(f.derivative(1), y().pow(2).scale(&int(-3)));
        assert!(Polynomial::constant(int(7)).derivative(0).is_zero());
    }

    #[test]
    fn display_forms() {
        let u = VariableUniverse::new(&["x", "y"]).unwrap();
        let f = &(&x().pow(2).scale(&frac(3, 2)) - &y()) + &Polynomial::one();
        assert_eq!(f.display(&u), "3/2*x^2 - y + 1");
        assert_eq!((-&x()).display(&u), "-x");
        assert_eq!(Polynomial::zero().display(&u), "0");
    }

    #[test]
    fn substitution_cusp() {
        // x -> t^3, y -> t^2 annihilates x^2 - y^3.
        let f = &x().pow(2) - &y().pow(3);
        let t = Polynomial::var(2);
        let mut a = BTreeMap::new();
        a.insert(0, t.pow(3));
        a.insert(1, t.pow(2));
        assert!(f.substitute(&a).unwrap().is_zero());
        let mut missing = BTreeMap::new();
        missing.insert(0, t.clone());
        assert_eq!(f.substitute(&missing), Err(Error::MissingAssignment(1)));
    }
}
