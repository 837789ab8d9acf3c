//! Small dense matrix kernel: real symmetric matrices, a cyclic Jacobi
//! eigensolver, positive-definite square roots and inverses, and monomials
//! in the upper-triangular entries of a symmetric matrix.
//!
//! Everything here targets desk-scale dimensions (`n <= 8`).

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest matrix dimension accepted by the kernel.
pub const MAX_DIM: usize = 8;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the full Frobenius norm.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// `Y` is positive definite iff `mu_min > POSITIVITY_TOL * (1 + mu_max)`.
pub const POSITIVITY_TOL: f64 = 1e-12;

const SYMMETRY_TOL: f64 = 1e-12;

/// A real symmetric matrix. Symmetry is exact: the lower triangle is always
/// a copy of the upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

/// Eigen-decomposition `Y = Q diag(values) Q^T`, eigenvalues decreasing.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.values));
        &self.vectors * d * self.vectors.transpose()
    }

    /// `Q diag(f(mu)) Q^T`, symmetrized.
    fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&mu| f(mu)),
        ));
        SymMatrix::symmetrize(&self.vectors * d * self.vectors.transpose())
    }
}

impl SymMatrix {
    /// Accepts a square matrix that is symmetric up to `1e-12` relative
    /// asymmetry and copies the upper triangle onto the lower one.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || m.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if n > MAX_DIM {
            return Err(Error::InvalidInput(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        let scale = 1.0 + m.amax();
        let asymmetry = (&m - m.transpose()).amax();
        if !(asymmetry <= SYMMETRY_TOL * scale) {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(Self::symmetrize(m))
    }

    fn symmetrize(mut m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        for i in 0..n {
            for j in 0..i {
                m[(i, j)] = m[(j, i)];
            }
        }
        SymMatrix { m }
    }

    /// Builds from the upper triangle given row by row: `y11, y12, .., y1n, y22, ..`.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n * (n + 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: n * (n + 1) / 2,
                got: upper.len(),
            });
        }
        let mut m = DMatrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i..n {
                let v = *it.next().unwrap();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SymMatrix::new(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("rows of unequal length".into()));
        }
        SymMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix { m: DMatrix::identity(n, n) }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix { m: DMatrix::zeros(n, n) }
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        SymMatrix { m: DMatrix::identity(n, n) * c }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        SymMatrix {
            m: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn to_complex(&self) -> CMatrix {
        self.m.map(|v| Complex64::new(v, 0.0))
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| self.m.row(i).iter().copied().collect())
            .collect()
    }

    /// Upper-triangular entries row by row.
    pub fn upper(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    pub fn scale(&self, c: f64) -> Self {
        SymMatrix { m: &self.m * c }
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        SymMatrix { m: &self.m + &other.m }
    }

    pub fn sub(&self, other: &SymMatrix) -> Self {
        SymMatrix { m: &self.m - &other.m }
    }

    /// `U Y U^T` for a square `U` of matching size.
    pub fn congruence(&self, u: &DMatrix<f64>) -> Self {
        SymMatrix::symmetrize(u * &self.m * u.transpose())
    }

    /// `Tr(S Y)`.
    pub fn trace_product(&self, other: &SymMatrix) -> f64 {
        self.m.component_mul(&other.m).sum()
    }

    pub fn eigen(&self) -> Result<SymEigen> {
        let (values, vectors) = jacobi_eigen(&self.m)?;
        Ok(SymEigen { values, vectors })
    }

    /// Eigenvalues `mu_1 >= mu_2 >= .. >= mu_n`.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigen()?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().unwrap())
    }

    pub fn is_positive_definite(&self) -> Result<bool> {
        let mu = self.eigenvalues()?;
        Ok(is_positive_spectrum(&mu))
    }

    /// Eigen-decomposition, failing unless the spectrum is positive.
    pub fn posdef_eigen(&self) -> Result<SymEigen> {
        let e = self.eigen()?;
        if !is_positive_spectrum(&e.values) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: *e.values.last().unwrap(),
            });
        }
        Ok(e)
    }

    /// The unique positive-definite `R` with `R R = Y`.
    pub fn sqrt_posdef(&self) -> Result<SymMatrix> {
        Ok(self.posdef_eigen()?.map_spectrum(f64::sqrt))
    }

    /// `Y^{-1/2}`.
    pub fn inv_sqrt_posdef(&self) -> Result<SymMatrix> {
        Ok(self.posdef_eigen()?.map_spectrum(|mu| 1.0 / mu.sqrt()))
    }

    /// Spectral inverse for positive-definite input, Gaussian elimination
    /// with partial pivoting otherwise.
    pub fn inverse(&self) -> Result<SymMatrix> {
        let e = self.eigen()?;
        if is_positive_spectrum(&e.values) {
            return Ok(e.map_spectrum(|mu| 1.0 / mu));
        }
        gauss_inverse(&self.m)
            .map(SymMatrix::symmetrize)
            .ok_or(Error::SingularMatrix)
    }

    /// `max_{i,j} |y_ij|`.
    pub fn max_abs_entry(&self) -> f64 {
        self.m.amax()
    }

    /// `[V]^beta`, the product of `v_ij^{b_ij}` over `i <= j`, with `0^0 = 1`.
    pub fn monomial(&self, beta: &MultiIndex) -> Result<f64> {
        if beta.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: beta.dim(),
            });
        }
        Ok(beta
            .entries()
            .filter(|&(_, _, b)| b > 0)
            .map(|(i, j, b)| self.m[(i, j)].powi(b as i32))
            .product())
    }

    /// Whether `Y >= delta I`, i.e. the minimal eigenvalue is at least
    /// `delta` up to `1e-12 (1 + delta)`.
    pub fn in_v_delta(&self, delta: f64) -> Result<bool> {
        let mu_min = self.min_eigenvalue()?;
        Ok(mu_min >= delta - 1e-12 * (1.0 + delta.abs()))
    }
}

pub fn is_positive_spectrum(values: &[f64]) -> bool {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    min > POSITIVITY_TOL * (1.0 + max)
}

/// Cyclic Jacobi eigensolver for a real symmetric matrix. Returns the
/// eigenvalues in decreasing order and the matching eigenvectors as columns.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence { sweeps: 0 });
    }
    let mut a = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let total = a.norm();
    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_DIAGONAL_TOL * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- R^T A R with R the (p, q) plane rotation.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Gauss-Jordan inversion with partial pivoting. `None` when a pivot is
/// negligible relative to the largest entry.
pub fn gauss_inverse<T>(m: &DMatrix<T>) -> Option<DMatrix<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "gauss_inverse needs a square matrix");
    let scale = m.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    let mut a = m.clone();
    let mut inv = DMatrix::<T>::identity(n, n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[(i, col)].modulus().total_cmp(&a[(j, col)].modulus()))
            .unwrap();
        if a[(pivot, col)].modulus() <= 1e-14 * scale {
            return None;
        }
        a.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        let p = a[(col, col)];
        for k in 0..n {
            a[(col, k)] /= p;
            inv[(col, k)] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[(r, col)];
            if f == T::zero() {
                continue;
            }
            for k in 0..n {
                let ack = a[(col, k)];
                let ick = inv[(col, k)];
                a[(r, k)] -= f * ack;
                inv[(r, k)] -= f * ick;
            }
        }
    }
    Some(inv)
}

/// Determinant of a complex square matrix by elimination with partial pivoting.
pub fn complex_determinant(m: &CMatrix) -> Complex64 {
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
            .unwrap();
        if a[(pivot, col)].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap_rows(col, pivot);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for r in col + 1..n {
            let f = a[(r, col)] / p;
            for k in col..n {
                let ack = a[(col, k)];
                a[(r, k)] -= f * ack;
            }
        }
    }
    det
}

/// Largest singular value of a complex matrix, via the Jacobi solver applied
/// to the real symmetric embedding `[[Re H, -Im H], [Im H, Re H]]` of
/// `H = M^* M`.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    let h = m.adjoint() * m;
    let n = h.nrows();
    let emb = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let emb = SymMatrix::symmetrize(emb);
    let (values, _) = jacobi_eigen(emb.as_matrix())?;
    Ok(values[0].max(0.0).sqrt())
}

/// Exponents `b_ij >= 0` indexed by pairs `i <= j`, packed row by row over
/// the upper triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    n: usize,
    exps: Vec<u32>,
}

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex { n, exps: vec![0; n * (n + 1) / 2] }
    }

    /// From `((i, j), b)` pairs with zero-based `i <= j`.
    pub fn from_pairs(n: usize, pairs: &[((usize, usize), u32)]) -> Result<Self> {
        let mut beta = MultiIndex::zero(n);
        for &((i, j), b) in pairs {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            if j >= n {
                return Err(Error::InvalidInput(format!(
                    "index ({}, {}) out of range for n = {n}",
                    i + 1,
                    j + 1
                )));
            }
            let slot = Self::slot(n, i, j);
            beta.exps[slot] += b;
        }
        Ok(beta)
    }

    fn slot(n: usize, i: usize, j: usize) -> usize {
        // rows 0..i contribute n + (n-1) + .. + (n-i+1) entries
        i * n - i * (i.saturating_sub(1)) / 2 + (j - i)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.exps[Self::slot(self.n, i, j)]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `(i, j, b_ij)` for all `i <= j`, zero-based.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i..n).map(move |j| (i, j)))
            .zip(self.exps.iter())
            .map(|((i, j), &b)| (i, j, b))
    }

    /// Every multi-index of total degree at most `p`.
    pub fn all_up_to(n: usize, p: u32) -> Vec<MultiIndex> {
        let slots = n * (n + 1) / 2;
        let mut out = Vec::new();
        let mut current = vec![0u32; slots];
        fn rec(k: usize, left: u32, current: &mut Vec<u32>, n: usize, out: &mut Vec<MultiIndex>) {
            if k == current.len() {
                out.push(MultiIndex { n, exps: current.clone() });
                return;
            }
            for b in 0..=left {
                current[k] = b;
                rec(k + 1, left - b, current, n, out);
            }
            current[k] = 0;
        }
        rec(0, p, &mut current, n, &mut out);
        out
    }

    /// `|T_n^p| = binom(p + n(n+1)/2, p)`.
    pub fn count_up_to(n: usize, p: u32) -> u64 {
        let slots = (n * (n + 1) / 2) as u64;
        let mut c: u64 = 1;
        for i in 1..=p as u64 {
            c = c * (slots + i) / i;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym2(a: f64, b: f64, c: f64) -> SymMatrix {
        SymMatrix::from_upper(2, &[a, b, c]).unwrap()
    }

    #[test]
    fn eigenvalues_examples() {
        assert_eq!(SymMatrix::diagonal(&[4.0, 1.0]).eigenvalues().unwrap(), vec![4.0, 1.0]);
        assert_eq!(SymMatrix::diagonal(&[1.0, 4.0]).eigenvalues().unwrap(), vec![4.0, 1.0]);
        assert_eq!(SymMatrix::identity(3).eigenvalues().unwrap(), vec![1.0; 3]);
        let mu = sym2(2.0, 1.0, 2.0).eigenvalues().unwrap();
        assert!((mu[0] - 3.0).abs() < 1e-14 && (mu[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_rejects_non_finite() {
        let y = SymMatrix { m: DMatrix::from_row_slice(2, 2, &[f64::NAN, 0.0, 0.0, 1.0]) };
        assert!(matches!(y.eigen(), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let r = SymMatrix::diagonal(&[4.0, 9.0]).sqrt_posdef().unwrap();
        assert!((r.as_matrix() - DMatrix::from_diagonal(&nalgebra::dvector![2.0, 3.0])).amax() < 1e-15);
        assert_eq!(SymMatrix::identity(2).sqrt_posdef().unwrap(), SymMatrix::identity(2));
        let y = sym2(2.0, 1.0, 2.0);
        let r = y.sqrt_posdef().unwrap();
        assert!((r.as_matrix() * r.as_matrix() - y.as_matrix()).amax() <= 1e-10);
        assert!(matches!(
            sym2(1.0, 2.0, 1.0).sqrt_posdef(),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn max_abs_entry_examples() {
        assert_eq!(SymMatrix::diagonal(&[0.5, 0.5]).max_abs_entry(), 0.5);
        assert_eq!(sym2(1.0, -3.0, 2.0).max_abs_entry(), 3.0);
        assert_eq!(SymMatrix::zeros(2).max_abs_entry(), 0.0);
    }

    #[test]
    fn monomial_examples() {
        let beta = MultiIndex::from_pairs(2, &[((0, 0), 1), ((1, 1), 2)]).unwrap();
        assert_eq!(SymMatrix::diagonal(&[0.5, 3.0]).monomial(&beta).unwrap(), 4.5);
        assert_eq!(sym2(0.0, 0.0, 0.0).monomial(&MultiIndex::zero(2)).unwrap(), 1.0);
        let beta = MultiIndex::from_pairs(2, &[((0, 1), 3)]).unwrap();
        assert_eq!(sym2(2.0, 1.0, 2.0).monomial(&beta).unwrap(), 1.0);
        assert!(SymMatrix::identity(3).monomial(&beta).is_err());
    }

    #[test]
    fn v_delta_examples() {
        assert!(SymMatrix::scalar(2, 2.0).in_v_delta(1.0).unwrap());
        assert!(!SymMatrix::diagonal(&[3.0, 0.5]).in_v_delta(1.0).unwrap());
        assert!(SymMatrix::scalar(3, 0.7).in_v_delta(0.7).unwrap());
    }

    #[test]
    fn multi_index_layout() {
        let beta = MultiIndex::from_pairs(3, &[((0, 0), 1), ((0, 2), 2), ((1, 2), 3), ((2, 2), 4)])
            .unwrap();
        assert_eq!(beta.get(0, 0), 1);
        assert_eq!(beta.get(2, 0), 2);
        assert_eq!(beta.get(1, 2), 3);
        assert_eq!(beta.get(2, 2), 4);
        assert_eq!(beta.get(1, 1), 0);
        assert_eq!(beta.degree(), 10);
        let all = MultiIndex::all_up_to(2, 2);
        assert_eq!(all.len() as u64, MultiIndex::count_up_to(2, 2));
        assert_eq!(all.len(), 10);
        assert_eq!(MultiIndex::count_up_to(1, 1), 2);
    }

    #[test]
    fn inverse_paths() {
        let y = sym2(2.0, 1.0, 2.0);
        let inv = y.inverse().unwrap();
        assert!((inv.as_matrix() * y.as_matrix() - DMatrix::identity(2, 2)).amax() < 1e-14);
        // indefinite: Gaussian elimination
        let y = sym2(1.0, 2.0, 1.0);
        let inv = y.inverse().unwrap();
        assert!((inv.as_matrix() * y.as_matrix() - DMatrix::identity(2, 2)).amax() < 1e-14);
        assert!(matches!(sym2(1.0, 1.0, 1.0).inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&nalgebra::dvector![
            Complex64::new(0.0, 3.0),
            Complex64::new(1.0, 1.0)
        ]);
        assert!((operator_norm(&m).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 1.0]);
        assert!(matches!(SymMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }
}
