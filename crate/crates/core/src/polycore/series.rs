use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::polynomial::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// An element of Q[t]/(t^N): exactly N coefficients, index j holding the
/// coefficient of t^j.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    /// Builds from the first `n` entries of `coeffs`, zero-padding.
    pub fn from_slice(coeffs: &[Rational], n: usize) -> Self {
        let mut v: Vec<Rational> = coeffs.iter().take(n).cloned().collect();
        v.resize(n, Rational::zero());
        Self { coeffs: v }
    }

    pub fn from_ints(coeffs: &[i64], n: usize) -> Self {
        let c: Vec<Rational> = coeffs.iter().map(|&k| Rational::from_integer(k.into())).collect();
        Self::from_slice(&c, n)
    }

    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); n] }
    }

    pub fn constant(c: Rational, n: usize) -> Self {
        let mut s = Self::zero(n);
        if n > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// c * t^k, truncated.
    pub fn monomial(c: Rational, k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k < n {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set_coeff(&mut self, j: usize, c: Rational) {
        if j < self.coeffs.len() {
            self.coeffs[j] = c;
        }
    }

    /// Least j with a nonzero coefficient; `None` stands for infinite order
    /// (the zero class).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Order with the zero class reported as the truncation N.
    pub fn order_capped(&self) -> usize {
        self.order().unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::from_slice(&self.coeffs, n)
    }

    /// Same coefficients viewed in a longer truncation (padding with zeros).
    pub fn extend(&self, n: usize) -> Self {
        Self::from_slice(&self.coeffs, n)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self { coeffs: (0..n).map(|j| &self.coeffs[j] + &other.coeffs[j]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self { coeffs: (0..n).map(|j| &self.coeffs[j] - &other.coeffs[j]).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|k| k * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rational::one(), self.truncation());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let n = self.truncation();
        let inv0 = Rational::one() / &self.coeffs[0];
        let mut out = vec![Rational::zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -(s * &inv0);
        }
        Some(Self { coeffs: out })
    }

    /// Multiplication by t^k within the same truncation.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.truncation();
        let mut out = vec![Rational::zero(); n];
        if k < n {
            out[k..].clone_from_slice(&self.coeffs[..n - k]);
        }
        Self { coeffs: out }
    }

    /// Division by t^k, dropping the first k coefficients (which the caller
    /// guarantees vanish); the result has truncation N - k.
    pub fn shift_down(&self, k: usize) -> Self {
        Self { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    /// Renders as a polynomial in `t`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{j}"),
            })
            .collect();
        if parts.is_empty() {
            format!("0 mod t^{}", self.truncation())
        } else {
            format!("{} mod t^{}", parts.join(" + "), self.truncation())
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Evaluates `f` in Q[t]/(t^n) at the given series assignment.
pub fn evaluate_series(
    f: &Polynomial,
    assignment: &BTreeMap<usize, TruncatedSeries>,
    n: usize,
) -> Result<TruncatedSeries> {
    for s in assignment.values() {
        if s.truncation() < n {
            return Err(Error::TruncationTooShort { have: s.truncation(), need: n });
        }
    }
    let mut acc = TruncatedSeries::zero(n);
    let mut powers: HashMap<(usize, u32), TruncatedSeries> = HashMap::new();
    for (m, c) in f.terms() {
        let mut term = TruncatedSeries::constant(c.clone(), n);
        for (v, e) in m.iter() {
            let base = assignment.get(&v).ok_or(Error::MissingAssignment(v))?;
            let p = powers
                .entry((v, e))
                .or_insert_with(|| base.truncate(n).pow(e));
            term = term.mul(p);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Convenience: evaluation with assignment given positionally by variable id.
pub fn evaluate_series_vec(f: &Polynomial, values: &[TruncatedSeries], n: usize) -> Result<TruncatedSeries> {
    let map: BTreeMap<usize, TruncatedSeries> = values.iter().cloned().enumerate().collect();
    evaluate_series(f, &map, n)
}
