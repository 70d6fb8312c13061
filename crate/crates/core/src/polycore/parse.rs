//! Recursive-descent reader for the expression grammar
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' posint)?
//! base     := rational | identifier | '(' expr ')'
//! rational := int ('/' posint)?
//! ```
//!
//! Whitespace is insignificant and implicit multiplication is rejected.
//! A single leading minus is accepted so that printed negative
//! polynomials read back.

use num_bigint::BigInt;
use num_traits::Zero;

use super::polynomial::Polynomial;
use super::rational::Rational;
use super::universe::VariableUniverse;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    universe: &'a VariableUniverse,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { position: self.pos, message: message.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.digits()?;
            let e: u32 = e
                .parse()
                .map_err(|_| Error::Syntax { position: start, message: "exponent too large".into() })?;
            if e == 0 {
                return Err(Error::Syntax { position: start, message: "exponent must be positive".into() });
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.syntax("expected digits");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits()?.parse().expect("digits parse");
                let mut den = BigInt::from(1);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let start = self.pos;
                    den = self.digits()?.parse().expect("digits parse");
                    if den.is_zero() {
                        return Err(Error::ZeroDenominator { position: start });
                    }
                }
                Ok(Polynomial::constant(Rational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.universe.index_of(name) {
                    Some(id) => Ok(Polynomial::var(id)),
                    None => Err(Error::UnknownVariable { name: name.to_string(), position: start }),
                }
            }
            Some(_) => self.syntax("unexpected character"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

pub fn parse_polynomial(text: &str, universe: &VariableUniverse) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, universe };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.syntax("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::monomial::Monomial;
    use crate::polycore::rational::{frac, int};

    fn xy() -> VariableUniverse {
        VariableUniverse::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn cusp_terms() {
        let f = parse_polynomial("x^2 - y^3", &xy()).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coefficient(&Monomial::var_pow(0, 2)), int(1));
        assert_eq!(f.coefficient(&Monomial::var_pow(1, 3)), int(-1));
    }

    #[test]
    fn zero_literal() {
        assert!(parse_polynomial("0", &xy()).unwrap().is_zero());
    }

    #[test]
    fn like_terms_collect() {
        let f = parse_polynomial("(1/2)*x*y + x*y", &xy()).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.coefficient(&Monomial::from_exponents(vec![1, 1])), frac(3, 2));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_polynomial("x + z", &xy()),
            Err(Error::UnknownVariable { name: "z".into(), position: 4 })
        );
        assert_eq!(parse_polynomial("x/0", &xy()).unwrap_err(), Error::Syntax {
            position: 1,
            message: "unexpected trailing input".into()
        });
        assert_eq!(parse_polynomial("3/0*x", &xy()), Err(Error::ZeroDenominator { position: 2 }));
        assert!(matches!(parse_polynomial("2x", &xy()), Err(Error::Syntax { position: 1, .. })));
        assert!(matches!(parse_polynomial("(x + y", &xy()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("x^0", &xy()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn nested_powers_and_signs() {
        let f = parse_polynomial("-(x - y)^2 + 2*x*y", &xy()).unwrap();
        let g = parse_polynomial("4*x*y - x^2 - y^2", &xy()).unwrap();
        assert_eq!(f, g);
    }
}
