//! Rational coefficients with an inline fast path for numerators and
//! denominators that fit in i64; anything larger falls back to bignums.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polycore::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Coeff {
    /// numerator, denominator > 0, coprime
    Small(i64, i64),
    Big(Box<Rational>),
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::Small(0, 1)
    }
}

fn from_i128(n: i128, d: i128) -> Coeff {
    debug_assert!(d != 0);
    let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
    let g = n.gcd(&d);
    if g > 1 {
        n /= g;
        d /= g;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Coeff::Small(a, b),
        _ => Coeff::Big(Box::new(Rational::new(BigInt::from(n), BigInt::from(d)))),
    }
}

fn shrink(q: Rational) -> Coeff {
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(a), Some(b)) => Coeff::Small(a, b),
        _ => Coeff::Big(Box::new(q)),
    }
}

impl Coeff {
    pub fn from_rational(q: &Rational) -> Self {
        shrink(q.clone())
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Coeff::Small(a, b) => Rational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Coeff::Big(q) => (**q).clone(),
        }
    }

    fn big(&self) -> Rational {
        self.to_rational()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Small(a, _) => *a == 0,
            Coeff::Big(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Small(a, b) => *a == 1 && *b == 1,
            Coeff::Big(q) => q.is_one(),
        }
    }

    pub fn one() -> Self {
        Coeff::Small(1, 1)
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                if b == d {
                    return from_i128(*a as i128 + *c as i128, *b as i128);
                }
                from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => shrink(self.big() + o.big()),
        }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(a, b) if *a != i64::MIN => Coeff::Small(-a, *b),
            _ => shrink(-self.big()),
        }
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => shrink(self.big() * o.big()),
        }
    }

    pub fn recip(&self) -> Coeff {
        match self {
            Coeff::Small(a, b) => from_i128(*b as i128, *a as i128),
            Coeff::Big(q) => shrink(q.recip()),
        }
    }

    pub fn div(&self, o: &Coeff) -> Coeff {
        self.mul(&o.recip())
    }

    #[allow(dead_code)]
    pub fn cmp_zero(&self) -> Ordering {
        match self {
            Coeff::Small(a, _) => a.cmp(&0),
            Coeff::Big(q) => {
                if q.is_negative() {
                    Ordering::Less
                } else if q.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rational::frac;

    #[test]
    fn matches_rational_arithmetic() {
        let vals = [frac(3, 4), frac(-7, 5), frac(1, 1), frac(0, 1), frac(i64::MAX, 3), frac(5, i64::MAX)];
        for a in &vals {
            for b in &vals {
                let (ca, cb) = (Coeff::from_rational(a), Coeff::from_rational(b));
                assert_eq!(ca.add(&cb).to_rational(), a + b);
                assert_eq!(ca.sub(&cb).to_rational(), a - b);
                assert_eq!(ca.mul(&cb).to_rational(), a * b);
                if !b.is_zero() {
                    assert_eq!(ca.div(&cb).to_rational(), a / b);
                }
            }
        }
    }
}
