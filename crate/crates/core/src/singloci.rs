//! Jacobian ideals, reduction of an embedded variety to a generic complete
//! intersection containing it, and the residual-ideal inclusion check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::groebner::{Dimension, Groebner, IdealPresentation, MonomialOrder};
use crate::polycore::rational::int;
use crate::polycore::{Polynomial, Rational};

/// Coefficients are drawn from [-COEFF_BOUND, COEFF_BOUND].
pub const COEFF_BOUND: i64 = 7;
pub const MAX_ATTEMPTS: usize = 8;

/// A closed subvariety of A^N cut out by `ideal`, of pure dimension
/// `expected_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedVariety {
    ideal: IdealPresentation,
    expected_dim: usize,
}

impl EmbeddedVariety {
    pub fn new(ideal: IdealPresentation, expected_dim: usize) -> Result<Self> {
        if expected_dim > ideal.universe().len() {
            return invalid(format!(
                "expected dimension {expected_dim} exceeds ambient dimension {}",
                ideal.universe().len()
            ));
        }
        Ok(Self { ideal, expected_dim })
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn ambient_dim(&self) -> usize {
        self.ideal.universe().len()
    }

    pub fn dim(&self) -> usize {
        self.expected_dim
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.expected_dim
    }

    /// Checks that the ideal is proper and of the stated dimension.
    pub fn verify_dimension(&self, engine: &Groebner) -> Result<()> {
        match engine.krull_dimension(&self.ideal)? {
            None => invalid("the ideal is the unit ideal"),
            Some(d) if d != self.expected_dim => {
                invalid(format!("ideal has dimension {d}, expected {}", self.expected_dim))
            }
            Some(_) => Ok(()),
        }
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        k => {
            let mut acc = Polynomial::zero();
            for col in 0..k {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][col] * &determinant(&minor);
                acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Increasing k-subsets of 0..n.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All nonzero c × c minors of the Jacobian matrix (∂f_i/∂x_j) over the
/// first `n_vars` variables.
pub fn jacobian_minors(fs: &[Polynomial], c: usize, n_vars: usize) -> Vec<Polynomial> {
    let jac: Vec<Vec<Polynomial>> = fs.iter().map(|f| (0..n_vars).map(|v| f.derivative(v)).collect()).collect();
    let mut out = Vec::new();
    for rows in subsets(fs.len(), c) {
        for cols in subsets(n_vars, c) {
            let sub: Vec<Vec<Polynomial>> =
                rows.iter().map(|&r| cols.iter().map(|&k| jac[r][k].clone()).collect()).collect();
            let d = determinant(&sub);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// The codim-size minors of the Jacobian together with the generators of
/// I_X, so that the ideal is read modulo X.
pub fn jacobian_ideal(x: &EmbeddedVariety) -> Result<IdealPresentation> {
    let minors = jacobian_minors(x.ideal.generators(), x.codim(), x.ambient_dim());
    let mut gens = minors;
    gens.extend(x.ideal.generators().iter().cloned());
    IdealPresentation::new(x.ideal.universe().clone(), gens)
}

/// Dimension of the singular locus of X; `None` when X is smooth.
pub fn singular_locus_dimension(x: &EmbeddedVariety, engine: &Groebner) -> Result<Dimension> {
    engine.krull_dimension(&jacobian_ideal(x)?)
}

#[derive(Clone, Debug)]
pub struct CIReduction {
    pub source: EmbeddedVariety,
    pub matrix: Vec<Vec<Rational>>,
    pub ci_ideal: IdealPresentation,
    pub residue_ideal: IdealPresentation,
    pub certified: bool,
    pub seed: u64,
}

impl CIReduction {
    /// The c × c Jacobian minors of F_1, ..., F_c.
    pub fn ci_minors(&self) -> Vec<Polynomial> {
        jacobian_minors(self.ci_ideal.generators(), self.source.codim(), self.source.ambient_dim())
    }
}

fn combine(matrix: &[Vec<Rational>], fs: &[Polynomial]) -> Vec<Polynomial> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(fs)
                .fold(Polynomial::zero(), |acc, (a, f)| &acc + &f.scale(a))
        })
        .collect()
}

/// Takes c general combinations F_i = Σ a_ij f_j of the generators and
/// certifies: V(F) has dimension n; I_X : (I_M : I_X)^∞ = I_X, so that M
/// agrees with X at the generic point of each component of X; and the
/// minors of Jac(F) saturate I_X to itself, so they vanish identically on
/// no component. Seeds seed, seed+1, ... are tried in turn.
pub fn generic_ci_reduction(x: &EmbeddedVariety, seed: u64, engine: &Groebner) -> Result<CIReduction> {
    let c = x.codim();
    let fs = x.ideal.generators();
    if fs.len() < c {
        return invalid(format!("{} generators cannot cut out codimension {c}", fs.len()));
    }
    let universe = x.ideal.universe().clone();
    for attempt in 0..MAX_ATTEMPTS as u64 {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let matrix: Vec<Vec<Rational>> = (0..c)
            .map(|_| (0..fs.len()).map(|_| int(rng.gen_range(-COEFF_BOUND..=COEFF_BOUND))).collect())
            .collect();
        let big_f = combine(&matrix, fs);
        if big_f.iter().any(Polynomial::is_zero) {
            continue;
        }
        let ci = IdealPresentation::new(universe.clone(), big_f)?;
        if engine.krull_dimension(&ci)? != Some(x.dim()) {
            continue;
        }
        if !engine.contains(&x.ideal, &ci)? {
            return Err(Error::Invariant("combination of generators left the ideal".into()));
        }
        let residue = engine.ideal_quotient(&ci, &x.ideal)?;
        if !engine.equal(&engine.saturation(&x.ideal, &residue)?, &x.ideal)? {
            continue;
        }
        let minors = IdealPresentation::new(universe.clone(), jacobian_minors(ci.generators(), c, x.ambient_dim()))?;
        if !engine.equal(&engine.saturation(&x.ideal, &minors)?, &x.ideal)? {
            continue;
        }
        return Ok(CIReduction {
            source: x.clone(),
            matrix,
            ci_ideal: ci,
            residue_ideal: residue,
            certified: true,
            seed: s,
        });
    }
    invalid(format!("no certified complete intersection after {MAX_ATTEMPTS} attempts"))
}

/// Every c-minor of Jac(F) lies in (I_M : I_X) + I_X.
pub fn residue_inclusion_check(r: &CIReduction, engine: &Groebner) -> Result<bool> {
    let sum = r.residue_ideal.with(r.source.ideal.generators().iter().cloned());
    let gb = engine.basis(&sum, &MonomialOrder::GrevLex)?;
    for m in r.ci_minors() {
        if !gb.contains(&m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::VariableUniverse;

    fn variety(names: &[&str], gens: &[&str], dim: usize) -> EmbeddedVariety {
        let u = VariableUniverse::new(names).unwrap();
        EmbeddedVariety::new(IdealPresentation::parse(&u, gens).unwrap(), dim).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let e = Groebner::default();
        let cusp = variety(&["x", "y"], &["x^2 - y^3"], 1);
        let j = jacobian_ideal(&cusp).unwrap();
        let expected = IdealPresentation::parse(cusp.ideal().universe(), &["x", "y^2"]).unwrap();
        assert!(e.equal(&j, &expected).unwrap());

        let line = variety(&["x", "y"], &["y"], 1);
        let j = jacobian_ideal(&line).unwrap();
        assert!(e.basis(&j, &MonomialOrder::GrevLex).unwrap().is_unit());

        let node = variety(&["x", "y"], &["x*y"], 1);
        let j = jacobian_ideal(&node).unwrap();
        let expected = IdealPresentation::parse(node.ideal().universe(), &["x", "y"]).unwrap();
        assert!(e.equal(&j, &expected).unwrap());
    }

    #[test]
    fn singular_loci_of_corpus() {
        let e = Groebner::default();
        let cases = [
            (variety(&["x", "y"], &["y"], 1), None),
            (variety(&["x", "y"], &["x^2 + y^2 - 1"], 1), None),
            (variety(&["x", "y"], &["x^2 - y^3"], 1), Some(0)),
            (variety(&["x", "y"], &["x*y"], 1), Some(0)),
            (variety(&["x", "y", "z"], &["x^2 - y^2*z"], 2), Some(1)),
        ];
        for (x, dim) in cases {
            assert_eq!(singular_locus_dimension(&x, &e).unwrap(), dim);
        }
    }

    #[test]
    fn cusp_reduction() {
        let e = Groebner::default();
        let cusp = variety(&["x", "y"], &["x^2 - y^3"], 1);
        let r = generic_ci_reduction(&cusp, 1, &e).unwrap();
        assert!(r.certified);
        assert!(e.equal(&r.ci_ideal, cusp.ideal()).unwrap());
        assert!(e.basis(&r.residue_ideal, &MonomialOrder::GrevLex).unwrap().is_unit());
        assert!(residue_inclusion_check(&r, &e).unwrap());
    }

    #[test]
    fn twisted_cubic_cone() {
        let e = Groebner::default();
        let cone = variety(&["x", "y", "z", "w"], &["x*z - y^2", "x*w - y*z", "y*w - z^2"], 2);
        cone.verify_dimension(&e).unwrap();
        let r = generic_ci_reduction(&cone, 7, &e).unwrap();
        assert!(r.certified);
        // the residual component is a proper, nontrivial piece
        assert!(!e.basis(&r.residue_ideal, &MonomialOrder::GrevLex).unwrap().is_unit());
        assert!(!e.contains(&r.residue_ideal, cone.ideal()).unwrap());
        assert_eq!(e.krull_dimension(&r.residue_ideal).unwrap(), Some(2));
        assert_eq!(r.ci_minors().len(), 6);
        assert!(residue_inclusion_check(&r, &e).unwrap());
    }

    #[test]
    fn too_few_generators() {
        let x = variety(&["x", "y", "z"], &["x"], 1);
        assert!(generic_ci_reduction(&x, 0, &Groebner::default()).is_err());
    }

    #[test]
    fn determinant_three_by_three() {
        let m: Vec<Vec<Polynomial>> = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&k| Polynomial::constant(int(k))).collect())
            .collect();
        assert_eq!(determinant(&m), Polynomial::constant(int(0)));
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
