//! Exact sparse multivariate polynomials over Q, the expression reader,
//! and truncated power series.

mod monomial;
mod parse;
mod polynomial;
pub mod rational;
mod series;
mod universe;

use std::collections::BTreeMap;

pub use monomial::Monomial;
pub use parse::parse_polynomial;
pub use polynomial::Polynomial;
pub use rational::Rational;
pub use series::{evaluate_series, evaluate_series_vec, TruncatedSeries};
pub use universe::VariableUniverse;

use crate::error::{Error, Result};

/// Formal partial derivative, checking `v` against the universe.
pub fn partial_derivative(f: &Polynomial, v: usize, universe: &VariableUniverse) -> Result<Polynomial> {
    if v >= universe.len() {
        return Err(Error::UniverseMismatch { id: v, size: universe.len() });
    }
    f.check_universe(universe)?;
    Ok(f.derivative(v))
}

/// Image of `f` under the homomorphism extending `assignment`.
pub fn substitute(f: &Polynomial, assignment: &BTreeMap<usize, Polynomial>) -> Result<Polynomial> {
    f.substitute(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_checks_universe() {
        let u = VariableUniverse::new(&["x", "y"]).unwrap();
        let f = parse_polynomial("x^2 - y^3", &u).unwrap();
        assert_eq!(partial_derivative(&f, 0, &u).unwrap(), parse_polynomial("2*x", &u).unwrap());
        assert_eq!(partial_derivative(&f, 1, &u).unwrap(), parse_polynomial("-3*y^2", &u).unwrap());
        assert!(matches!(partial_derivative(&f, 2, &u), Err(Error::UniverseMismatch { .. })));
    }

    #[test]
    fn substitute_examples() {
        let u = VariableUniverse::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &u).unwrap();
        let ident: BTreeMap<usize, Polynomial> = [(0, p("x")), (1, p("y"))].into();
        assert_eq!(substitute(&p("x*y"), &ident).unwrap(), p("x*y"));
        let swap: BTreeMap<usize, Polynomial> = [(0, p("y")), (1, p("x"))].into();
        assert_eq!(substitute(&p("x + y"), &swap).unwrap(), p("x + y"));
    }
}
