use std::cmp::Ordering;
use std::fmt;

/// A power product. Exponents are stored densely by variable id with
/// trailing zeros trimmed, so equality and hashing do not depend on the
/// size of the surrounding universe. `iter` yields only nonzero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(id: usize) -> Self {
        Self::var_pow(id, 1)
    }

    pub fn var_pow(id: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut exps = vec![0; id + 1];
        exps[id] = e;
        Self { exps, degree: e }
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let degree = exps.iter().sum();
        Self { exps, degree }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut exps = Vec::new();
        for (v, e) in pairs {
            if exps.len() <= v {
                exps.resize(v + 1, 0);
            }
            exps[v] += e;
        }
        Self::from_exponents(exps)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.exps.get(v).copied().unwrap_or(0)
    }

    /// One past the largest variable id with nonzero exponent.
    pub fn width(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Nonzero `(variable, exponent)` pairs in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| (v, e))
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter().map(|(v, _)| v).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (e, s) in exps.iter_mut().zip(&short.exps) {
            *e += s;
        }
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.degree > other.degree || self.exps.len() > other.exps.len() {
            return false;
        }
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let mut exps = other.exps.clone();
        for (e, s) in exps.iter_mut().zip(&self.exps) {
            *e -= s;
        }
        Monomial::from_exponents(exps)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|i| self.exponent(i).max(other.exponent(i)))
            .collect();
        Monomial::from_exponents(exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Product of the distinct variables occurring in `self`.
    pub fn squarefree_part(&self) -> Monomial {
        Monomial::from_exponents(self.exps.iter().map(|&e| e.min(1)).collect())
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn involves_any(&self, mask: &[bool]) -> bool {
        self.iter().any(|(v, _)| mask.get(v).copied().unwrap_or(false))
    }

    /// Differentiates once with respect to `v`: returns the exponent that
    /// becomes the coefficient factor and the lowered monomial.
    pub fn derive(&self, v: usize) -> Option<(u32, Monomial)> {
        let e = self.exponent(v);
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[v] -= 1;
        Some((e, Monomial::from_exponents(exps)))
    }

    /// Degree-reverse-lexicographic comparison with x_0 > x_1 > ...
    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let n = self.exps.len().max(other.exps.len());
        for i in (0..n).rev() {
            let (a, b) = (self.exponent(i), other.exponent(i));
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }

    /// Pure lexicographic comparison with x_0 > x_1 > ...
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let n = self.exps.len().max(other.exps.len());
        for i in 0..n {
            let (a, b) = (self.exponent(i), other.exponent(i));
            if a != b {
                return a.cmp(&b);
            }
        }
        Ordering::Equal
    }

    /// Bit `v mod 64` set for every variable present; a cheap necessary
    /// condition for divisibility.
    pub fn divmask(&self) -> u64 {
        self.iter().fold(0u64, |m, (v, _)| m | (1u64 << (v % 64)))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(v, e)| if e == 1 { format!("v{v}") } else { format!("v{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn trailing_zeros_do_not_matter() {
        assert_eq!(m(&[1, 0, 0]), m(&[1]));
        assert_eq!(m(&[0, 0]), Monomial::one());
    }

    #[test]
    fn grevlex_basics() {
        // x^2 > xy > y^2 > xz > yz > z^2 in grevlex with x > y > z.
        let seq = [m(&[2]), m(&[1, 1]), m(&[0, 2]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        for w in seq.windows(2) {
            assert_eq!(w[0].cmp_grevlex(&w[1]), Ordering::Greater, "{:?} vs {:?}", w[0], w[1]);
        }
        assert_eq!(m(&[0, 0, 1]).cmp_grevlex(&m(&[2])), Ordering::Less);
    }

    #[test]
    fn lex_basics() {
        assert_eq!(m(&[1]).cmp_lex(&m(&[0, 5])), Ordering::Greater);
        assert_eq!(m(&[1, 1]).cmp_lex(&m(&[1, 0, 3])), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[1, 2]);
        let b = m(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), m(&[1, 0, 1]));
        assert_eq!(m(&[3, 0, 1]).lcm(&m(&[1, 2])), m(&[3, 2, 1]));
        assert!(m(&[1]).is_coprime(&m(&[0, 4])));
        assert_eq!(m(&[3, 0, 2]).squarefree_part(), m(&[1, 0, 1]));
    }
}
