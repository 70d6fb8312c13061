//! Lifting jets along truncation maps: the adjugate criterion for complete
//! intersections, explicit lift steps, Smith normal form over Q[t]/(t^K) and
//! the image test for pi_{m,p}.

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::polycore::{evaluate_series_vec, Polynomial, Rational, TruncatedSeries};
use crate::singloci::subsets;

/// A column of truncated series sharing one truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesVector {
    entries: Vec<TruncatedSeries>,
    truncation: usize,
}

impl SeriesVector {
    pub fn new(entries: Vec<TruncatedSeries>) -> Result<Self> {
        let truncation = entries.first().map_or(0, TruncatedSeries::truncation);
        if entries.iter().any(|s| s.truncation() != truncation) {
            return invalid("series vector entries must share one truncation");
        }
        Ok(Self { entries, truncation })
    }

    /// Integer coefficient lists, all read mod t^n.
    pub fn from_ints(rows: &[&[i64]], n: usize) -> Self {
        Self { entries: rows.iter().map(|c| TruncatedSeries::from_ints(c, n)).collect(), truncation: n }
    }

    pub fn zero(len: usize, n: usize) -> Self {
        Self { entries: vec![TruncatedSeries::zero(n); len], truncation: n }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn entries(&self) -> &[TruncatedSeries] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &TruncatedSeries {
        &self.entries[i]
    }

    /// Re-reads every entry mod t^n (padding with zeros when n grows).
    pub fn with_truncation(&self, n: usize) -> Self {
        Self { entries: self.entries.iter().map(|s| s.extend(n)).collect(), truncation: n }
    }

    /// Least order among the entries; `None` when all vanish.
    pub fn order(&self) -> Option<usize> {
        self.entries.iter().filter_map(TruncatedSeries::order).min()
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(TruncatedSeries::display).collect();
        format!("({})", parts.join(", "))
    }
}

/// A rectangular matrix of truncated series with a common truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    truncation: usize,
    entries: Vec<TruncatedSeries>,
}

impl SeriesMatrix {
    pub fn new(rows: Vec<Vec<TruncatedSeries>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return invalid("matrix rows must have equal length");
        }
        let truncation = rows.first().and_then(|row| row.first()).map_or(0, TruncatedSeries::truncation);
        let entries: Vec<TruncatedSeries> = rows.into_iter().flatten().collect();
        if entries.iter().any(|s| s.truncation() != truncation) {
            return invalid("matrix entries must share one truncation");
        }
        Ok(Self { rows: r, cols: c, truncation, entries })
    }

    pub fn zero(rows: usize, cols: usize, n: usize) -> Self {
        Self { rows, cols, truncation: n, entries: vec![TruncatedSeries::zero(n); rows * cols] }
    }

    pub fn identity(size: usize, n: usize) -> Self {
        let mut m = Self::zero(size, size, n);
        for i in 0..size {
            m.set(i, i, TruncatedSeries::constant(Rational::one(), n));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: TruncatedSeries) {
        self.entries[i * self.cols + j] = s.extend(self.truncation);
    }

    pub fn with_truncation(&self, n: usize) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            truncation: n,
            entries: self.entries.iter().map(|s| s.extend(n)).collect(),
        }
    }

    pub fn mul(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let n = self.truncation.min(other.truncation);
        let mut out = Self::zero(self.rows, other.cols, n);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TruncatedSeries::zero(n);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vector(&self, v: &SeriesVector) -> Result<SeriesVector> {
        if self.cols != v.len() {
            return invalid("matrix and vector dimensions differ");
        }
        let n = self.truncation.min(v.truncation());
        let entries = (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(TruncatedSeries::zero(n), |acc, k| acc.add(&self.get(i, k).mul(v.entry(k))))
            })
            .collect();
        Ok(SeriesVector { entries, truncation: n })
    }

    /// The square submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SeriesMatrix {
        let mut out = Self::zero(rows.len(), cols.len(), self.truncation);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn determinant(&self) -> Result<TruncatedSeries> {
        if self.rows != self.cols {
            return invalid("determinant of a non-square matrix");
        }
        Ok(self.det_rec(&(0..self.rows).collect::<Vec<_>>(), 0))
    }

    fn det_rec(&self, cols: &[usize], row: usize) -> TruncatedSeries {
        if cols.is_empty() {
            return TruncatedSeries::constant(Rational::one(), self.truncation);
        }
        let mut acc = TruncatedSeries::zero(self.truncation);
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.mul(&self.det_rec(&rest, row + 1));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// Classical adjoint: adj(A)·A = det(A)·Id.
    pub fn adjugate(&self) -> Result<SeriesMatrix> {
        if self.rows != self.cols {
            return invalid("adjugate of a non-square matrix");
        }
        let k = self.rows;
        let mut out = Self::zero(k, k, self.truncation);
        if k == 1 {
            out.set(0, 0, TruncatedSeries::constant(Rational::one(), self.truncation));
            return Ok(out);
        }
        for i in 0..k {
            for j in 0..k {
                let rows: Vec<usize> = (0..k).filter(|&x| x != j).collect();
                let cols: Vec<usize> = (0..k).filter(|&x| x != i).collect();
                let d = self.submatrix(&rows, &cols).determinant()?;
                out.set(i, j, if (i + j) % 2 == 0 { d } else { d.neg() });
            }
        }
        Ok(out)
    }

    /// Least order of a k × k minor, capped at the truncation.
    pub fn minor_ideal_order(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        let mut best = self.truncation;
        for rows in subsets(self.rows, k) {
            for cols in subsets(self.cols, k) {
                let d = self.submatrix(&rows, &cols).det_rec(&(0..k).collect::<Vec<_>>(), 0);
                best = best.min(d.order_capped());
            }
        }
        best
    }

    pub fn display(&self) -> String {
        (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).display()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// The matrix (∂F_i/∂x_j (u)) read mod the truncation of `u`.
pub fn jacobian_at(fs: &[Polynomial], u: &SeriesVector) -> Result<SeriesMatrix> {
    let n_vars = u.len();
    for f in fs {
        if let Some(&v) = f.variables().iter().next_back() {
            if v >= n_vars {
                return Err(Error::UniverseMismatch { id: v, size: n_vars });
            }
        }
    }
    let n = u.truncation();
    let mut out = SeriesMatrix::zero(fs.len(), n_vars, n);
    for (i, f) in fs.iter().enumerate() {
        for j in 0..n_vars {
            out.set(i, j, evaluate_series_vec(&f.derivative(j), u.entries(), n)?);
        }
    }
    Ok(out)
}

/// F evaluated at `u`, mod the truncation of `u`.
pub fn evaluate_at(fs: &[Polynomial], u: &SeriesVector) -> Result<SeriesVector> {
    let entries = fs
        .iter()
        .map(|f| evaluate_series_vec(f, u.entries(), u.truncation()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesVector { entries, truncation: u.truncation() })
}

/// The data attached to an m-jet on a complete intersection: the chosen
/// columns of the Jacobian, its adjugate and R*·F(ũ) mod t^{m+e+2}.
#[derive(Clone, Debug)]
pub struct LiftData {
    pub m: usize,
    pub e: usize,
    pub columns: Vec<usize>,
    pub jacobian: SeriesMatrix,
    pub adjugate: SeriesMatrix,
    pub adjusted: SeriesVector,
    lifted: SeriesVector,
}

impl LiftData {
    /// Checks the preconditions and assembles the adjugate data.
    pub fn prepare(fs: &[Polynomial], u: &SeriesVector, m: usize, e: usize) -> Result<Self> {
        let r = fs.len();
        if r == 0 || r > u.len() {
            return invalid(format!("need 1 ≤ r ≤ N equations, got r = {r}, N = {}", u.len()));
        }
        if m < e {
            return invalid(format!("level m = {m} must be at least the Jacobian order e = {e}"));
        }
        if u.truncation() < m + 1 {
            return Err(Error::TruncationTooShort { have: u.truncation(), need: m + 1 });
        }
        // ũ: the lift of degree ≤ m, read far enough to see the order m+e+1 terms
        let big = m + e + 2;
        let lifted = u.with_truncation(m + 1).with_truncation(big);
        let values = evaluate_at(fs, &lifted)?;
        if values.entries().iter().any(|s| s.order_capped() < m + 1) {
            return invalid(format!("u is not a {m}-jet on the scheme: F(u) ≢ 0 mod t^{}", m + 1));
        }
        let jacobian = jacobian_at(fs, &lifted)?;
        let ord = jacobian.minor_ideal_order(r);
        if ord != e {
            return invalid(format!("the {r}-minors of the Jacobian have order {ord}, not e = {e}"));
        }
        let rows: Vec<usize> = (0..r).collect();
        let columns = subsets(u.len(), r)
            .into_iter()
            .find(|cols| {
                jacobian.submatrix(&rows, cols).determinant().map(|d| d.order_capped()).ok() == Some(e)
            })
            .ok_or_else(|| Error::Invalid(format!("no {r} columns give a minor of order exactly {e}")))?;
        let adjugate = jacobian.submatrix(&rows, &columns).adjugate()?;
        let adjusted = adjugate.mul_vector(&values)?;
        Ok(Self { m, e, columns, jacobian, adjugate, adjusted, lifted })
    }

    /// ord(R*(ũ)·F(ũ)) ≥ m+e+1.
    pub fn criterion_holds(&self) -> bool {
        self.adjusted.entries().iter().all(|s| s.order_capped() > self.m + self.e)
    }

    /// Coordinates outside the chosen columns, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.lifted.len()).filter(|j| !self.columns.contains(j)).collect()
    }

    /// The linear system c + M·v = 0 for the first correction v = v^(0):
    /// c is the t^{m+e+1} coefficient of R*F(ũ), M the t^e coefficient of
    /// R*·J(ũ).
    pub fn linear_system(&self) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
        let prod = self.adjugate.mul(&self.jacobian)?;
        let matrix = (0..prod.rows())
            .map(|i| (0..prod.cols()).map(|j| prod.get(i, j).coeff(self.e)).collect())
            .collect();
        let rhs = self.adjusted.entries().iter().map(|s| -s.coeff(self.m + self.e + 1)).collect();
        Ok((matrix, rhs))
    }
}

/// Can the m-jet `u` on the complete intersection F = 0, with Jacobian order
/// e, be lifted to an (m+e)-jet (equivalently, to an arc)?
pub fn liftable(fs: &[Polynomial], u: &SeriesVector, m: usize, e: usize) -> Result<bool> {
    Ok(LiftData::prepare(fs, u, m, e)?.criterion_holds())
}

/// An affine subspace of Q^N: `point + span(basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub point: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
}

impl AffineSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Solves A·x = b exactly; `None` when inconsistent.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Option<AffineSubspace> {
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = Rational::one() / &rows[rank][col];
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut point = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        point[c] = rows[i][n].clone();
    }
    let basis = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][free].clone();
            }
            v
        })
        .collect();
    Some(AffineSubspace { point, basis })
}

/// All first-order corrections v^(0) for which ũ + t^{m+1}v extends to an
/// arc; an affine space of dimension N − r when `u` is liftable.
pub fn admissible_directions(fs: &[Polynomial], u: &SeriesVector, m: usize, e: usize) -> Result<AffineSubspace> {
    let data = LiftData::prepare(fs, u, m, e)?;
    if !data.criterion_holds() {
        return invalid("jet does not satisfy the lifting criterion");
    }
    let (a, b) = data.linear_system()?;
    solve_linear(&a, &b, u.len()).ok_or_else(|| Error::Invariant("lifting system is inconsistent".into()))
}

/// One lift step: w = ũ + t^{m+1}v^(0) mod t^{m+2}. The coordinates outside
/// the selected columns take `free_choice` (zero by default); the others
/// are solved for.
pub fn lift_step(
    fs: &[Polynomial],
    u: &SeriesVector,
    m: usize,
    e: usize,
    free_choice: Option<&[Rational]>,
) -> Result<SeriesVector> {
    let data = LiftData::prepare(fs, u, m, e)?;
    if !data.criterion_holds() {
        return invalid("jet cannot be lifted: ord(R*·F(u)) ≤ m+e");
    }
    let free = data.free_columns();
    let choice: Vec<Rational> = match free_choice {
        Some(c) if c.len() == free.len() => c.to_vec(),
        Some(c) => return invalid(format!("expected {} free values, got {}", free.len(), c.len())),
        None => vec![Rational::zero(); free.len()],
    };
    let (a, b) = data.linear_system()?;
    let n = u.len();
    let mut v = vec![Rational::zero(); n];
    for (&j, c) in free.iter().zip(&choice) {
        v[j] = c.clone();
    }
    // M restricted to the chosen columns is lead(det R)·Id
    for (i, &col) in data.columns.iter().enumerate() {
        let mut rhs = b[i].clone();
        for &j in &free {
            rhs -= &a[i][j] * &v[j];
        }
        let d = &a[i][col];
        if d.is_zero() {
            return Err(Error::Invariant("adjugate product has a zero diagonal".into()));
        }
        v[col] = rhs / d;
    }
    let mut entries = Vec::with_capacity(n);
    for (j, s) in u.entries().iter().enumerate() {
        let mut w = s.truncate(m + 1).extend(m + 2);
        w.set_coeff(m + 1, v[j].clone());
        entries.push(w);
    }
    let w = SeriesVector::new(entries)?;
    if evaluate_at(fs, &w)?.entries().iter().any(|s| !s.is_zero()) {
        return Err(Error::Invariant("lift step did not solve F ≡ 0 mod t^{m+2}".into()));
    }
    Ok(w)
}

/// U·A·V = (diag(t^{a_1}, …) | 0) over Q[t]/(t^K), with U, V invertible.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// a_1 ≤ a_2 ≤ …; the value K marks the zero class.
    pub orders: Vec<usize>,
    pub u: SeriesMatrix,
    pub v: SeriesMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> SeriesMatrix {
        let k = self.u.truncation();
        let mut d = SeriesMatrix::zero(self.u.rows(), self.v.cols(), k);
        for (i, &a) in self.orders.iter().enumerate() {
            d.set(i, i, TruncatedSeries::monomial(Rational::one(), a, k));
        }
        d
    }
}

fn row_axpy(m: &mut SeriesMatrix, target: usize, src: usize, q: &TruncatedSeries) {
    for j in 0..m.cols {
        let v = m.get(target, j).sub(&q.mul(m.get(src, j)));
        m.set(target, j, v);
    }
}

fn col_axpy(m: &mut SeriesMatrix, target: usize, src: usize, q: &TruncatedSeries) {
    for i in 0..m.rows {
        let v = m.get(i, target).sub(&m.get(i, src).mul(q));
        m.set(i, target, v);
    }
}

fn swap_rows(m: &mut SeriesMatrix, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols {
            m.entries.swap(a * m.cols + j, b * m.cols + j);
        }
    }
}

fn swap_cols(m: &mut SeriesMatrix, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows {
            m.entries.swap(i * m.cols + a, i * m.cols + b);
        }
    }
}

/// Smith normal form over Q[t]/(t^K) where K is the matrix truncation.
/// Pivots on an entry of least order (first by row, then by column).
pub fn smith_form(a: &SeriesMatrix) -> SmithForm {
    let k = a.truncation();
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = SeriesMatrix::identity(rows, k);
    let mut v = SeriesMatrix::identity(cols, k);
    let mut orders = Vec::new();
    for s in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in s..rows {
            for j in s..cols {
                if let Some(o) = d.get(i, j).order() {
                    if best.is_none_or(|(b, _, _)| o < b) {
                        best = Some((o, i, j));
                    }
                }
            }
        }
        let Some((ord, pi, pj)) = best else {
            orders.extend(std::iter::repeat_n(k, rows.min(cols) - s));
            break;
        };
        swap_rows(&mut d, s, pi);
        swap_rows(&mut u, s, pi);
        swap_cols(&mut d, s, pj);
        swap_cols(&mut v, s, pj);
        // the pivot is t^ord times a unit; scale the row so it is t^ord exactly
        let unit = d.get(s, s).shift_down(ord).extend(k);
        let inv = unit.inverse().expect("pivot quotient is a unit");
        for j in 0..cols {
            let x = inv.mul(d.get(s, j));
            d.set(s, j, x);
        }
        for j in 0..rows {
            let x = inv.mul(u.get(s, j));
            u.set(s, j, x);
        }
        for i in 0..rows {
            if i != s && !d.get(i, s).is_zero() {
                let q = d.get(i, s).shift_down(ord).extend(k);
                row_axpy(&mut d, i, s, &q);
                row_axpy(&mut u, i, s, &q);
            }
        }
        for j in 0..cols {
            if j != s && !d.get(s, j).is_zero() {
                let q = d.get(s, j).shift_down(ord).extend(k);
                col_axpy(&mut d, j, s, &q);
                col_axpy(&mut v, j, s, &q);
            }
        }
        orders.push(ord);
    }
    SmithForm { orders, u, v }
}

/// Does the p-jet `u` lie in the image of J_m → J_p for the scheme F = 0,
/// with 2p ≥ m ≥ p + e and e the order of the r-minors of the Jacobian?
pub fn in_image(fs: &[Polynomial], u: &SeriesVector, m: usize, p: usize, e: usize) -> Result<bool> {
    if !(2 * p >= m && m >= p + e) {
        return invalid(format!("need 2p ≥ m ≥ p + e, got m = {m}, p = {p}, e = {e}"));
    }
    if u.truncation() < p + 1 {
        return Err(Error::TruncationTooShort { have: u.truncation(), need: p + 1 });
    }
    let r = fs.len();
    if r == 0 || r > u.len() {
        return invalid(format!("need 1 ≤ r ≤ N equations, got r = {r}, N = {}", u.len()));
    }
    let lifted = u.with_truncation(p + 1).with_truncation(m + 1);
    let values = evaluate_at(fs, &lifted)?;
    if values.entries().iter().any(|s| s.order_capped() < p + 1) {
        return invalid(format!("u is not a {p}-jet on the scheme"));
    }
    let jac = jacobian_at(fs, &lifted)?;
    let ord = jac.minor_ideal_order(r);
    if ord != e {
        return invalid(format!("the {r}-minors of the Jacobian have order {ord}, not e = {e}"));
    }
    let k = m - p;
    // F(ũ + t^{p+1}v) ≡ F(ũ) + t^{p+1}J(ũ)v mod t^{m+1} since m ≤ 2p+1
    let g = SeriesVector::new(values.entries().iter().map(|s| s.shift_down(p + 1).truncate(k)).collect())?;
    let smith = smith_form(&jac.with_truncation(k));
    let h = smith.u.mul_vector(&g)?;
    Ok(h.entries().iter().enumerate().all(|(i, hi)| {
        let a = smith.orders.get(i).copied().unwrap_or(k);
        hi.order_capped() >= a
    }))
}
