//! Rational representations `Sym^j(C^n) ⊗ det^k` of `GL_n(C)`, realized on
//! degree-`j` monomials in `n` variables, with the `U(n)`-invariant inner
//! product induced from the `j`-fold tensor power.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{complex_determinant, gauss_inverse, CMatrix, MAX_DIM};

/// A highest weight `lambda_1 >= .. >= lambda_n >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeight(Vec<u32>);

impl HighestWeight {
    pub fn new(lambda: Vec<u32>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidInput("empty highest weight".into()));
        }
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "highest weight {lambda:?} is not non-increasing"
            )));
        }
        Ok(HighestWeight(lambda))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn lambda1(&self) -> u32 {
        self.0[0]
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Upper bound `prod mu_i^{lambda_i}` for `||rho(Y) v|| / ||v||`, given the
    /// eigenvalues of `Y` in decreasing order.
    pub fn upper_factor(&self, mu: &[f64]) -> f64 {
        mu.iter().zip(&self.0).map(|(m, &l)| m.powi(l as i32)).product()
    }

    /// Lower bound `prod mu_i^{lambda_{n+1-i}}`.
    pub fn lower_factor(&self, mu: &[f64]) -> f64 {
        mu.iter().zip(self.0.iter().rev()).map(|(m, &l)| m.powi(l as i32)).product()
    }
}

struct RepInner {
    n: usize,
    j: u32,
    k: u32,
    /// Exponent tuples of the monomial basis; the first is `(j, 0, .., 0)`.
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// `<m_a, m_a> = prod(a_i!) / j!`
    norms_sqr: Vec<f64>,
}

/// The representation `Sym^j ⊗ det^k` of `GL_n(C)`. Cheap to clone.
#[derive(Clone)]
pub struct Rep(Arc<RepInner>);

impl PartialEq for Rep {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.key() == other.key()
    }
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep(n={}, Sym^{} ⊗ det^{})", self.0.n, self.0.j, self.0.k)
    }
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

fn compositions(n: usize, j: u32) -> Vec<Vec<u32>> {
    fn rec(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            out.push(cur.clone());
            return;
        }
        for b in (0..=left).rev() {
            cur[slot] = b;
            rec(slot + 1, left - b, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, j, &mut vec![0; n], &mut out);
    out
}

impl Rep {
    pub fn new(n: usize, j: u32, k: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedWeight(format!("degree n = {n} out of range")));
        }
        let basis = compositions(n, j);
        let index = basis.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let jf = factorial(j);
        let norms_sqr = basis
            .iter()
            .map(|a| a.iter().map(|&e| factorial(e)).product::<f64>() / jf)
            .collect();
        Ok(Rep(Arc::new(RepInner { n, j, k, basis, index, norms_sqr })))
    }

    /// Realizes a highest weight of the shape `(j + k, k, .., k)`.
    pub fn from_highest_weight(lambda: &HighestWeight) -> Result<Self> {
        let l = lambda.as_slice();
        let k = *l.last().unwrap();
        if l[1..].iter().any(|&x| x != k) {
            return Err(Error::UnsupportedWeight(format!(
                "highest weight {l:?} is not of the form (j+k, k, .., k)"
            )));
        }
        Rep::new(l.len(), l[0] - k, k)
    }

    fn key(&self) -> (usize, u32, u32) {
        (self.0.n, self.0.j, self.0.k)
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn sym_power(&self) -> u32 {
        self.0.j
    }

    pub fn det_power(&self) -> u32 {
        self.0.k
    }

    /// `d_rho = binom(n + j - 1, j)`.
    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    /// `(j + k, k, .., k)`.
    pub fn highest_weight(&self) -> HighestWeight {
        let mut l = vec![self.0.k; self.0.n];
        l[0] += self.0.j;
        HighestWeight(l)
    }

    pub fn basis_exponents(&self, i: usize) -> &[u32] {
        &self.0.basis[i]
    }

    /// Weight of the `i`-th basis vector: its exponents shifted by `k`.
    pub fn weight(&self, i: usize) -> Vec<u32> {
        self.0.basis[i].iter().map(|&a| a + self.0.k).collect()
    }

    pub fn basis_norm_sqr(&self, i: usize) -> f64 {
        self.0.norms_sqr[i]
    }

    pub fn vector(&self, coords: Vec<Complex64>) -> Result<RepVector> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        Ok(RepVector { rep: self.clone(), coords })
    }

    pub fn zero(&self) -> RepVector {
        RepVector {
            rep: self.clone(),
            coords: vec![Complex64::new(0.0, 0.0); self.dim()],
        }
    }

    pub fn basis_vector(&self, i: usize) -> RepVector {
        let mut v = self.zero();
        v.coords[i] = Complex64::new(1.0, 0.0);
        v
    }

    /// The monomial `e_1^j`, of norm one.
    pub fn highest_weight_vector(&self) -> RepVector {
        self.basis_vector(0)
    }

    fn check_matrix(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.0.n || m.ncols() != self.0.n {
            return Err(Error::DimensionMismatch {
                expected: self.0.n,
                got: m.nrows(),
            });
        }
        Ok(())
    }

    /// The matrix of `rho(M)` in the monomial basis: column `a` holds
    /// `det(M)^k prod_i (M e_i)^{a_i}` expanded in monomials.
    pub fn matrix(&self, m: &CMatrix) -> Result<CMatrix> {
        self.check_matrix(m)?;
        let det = complex_determinant(m);
        if self.0.k > 0 && det.norm() == 0.0 {
            return Err(Error::SingularMatrix);
        }
        let scale = det.powu(self.0.k);
        let n = self.0.n;
        let d = self.dim();
        if n == 1 {
            return Ok(CMatrix::from_element(1, 1, m[(0, 0)].powu(self.0.j) * scale));
        }
        let mut out = CMatrix::zeros(d, d);
        for (col, a) in self.0.basis.iter().enumerate() {
            let mut poly: HashMap<Vec<u32>, Complex64> = HashMap::new();
            poly.insert(vec![0; n], Complex64::new(1.0, 0.0));
            for (i, &ai) in a.iter().enumerate() {
                for _ in 0..ai {
                    let mut next: HashMap<Vec<u32>, Complex64> = HashMap::new();
                    for (mono, c) in &poly {
                        for r in 0..n {
                            let coef = m[(r, i)];
                            if coef == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            let mut e = mono.clone();
                            e[r] += 1;
                            *next.entry(e).or_default() += c * coef;
                        }
                    }
                    poly = next;
                }
            }
            for (mono, c) in poly {
                out[(self.0.index[&mono], col)] = c * scale;
            }
        }
        Ok(out)
    }

    fn check_vector(&self, v: &RepVector) -> Result<()> {
        if &v.rep != self {
            return Err(Error::MismatchedRep);
        }
        Ok(())
    }

    /// `rho(M) v`.
    pub fn apply(&self, m: &CMatrix, v: &RepVector) -> Result<RepVector> {
        self.check_vector(v)?;
        let r = self.matrix(m)?;
        let x = nalgebra::DVector::from_column_slice(&v.coords);
        Ok(RepVector {
            rep: self.clone(),
            coords: (r * x).iter().copied().collect(),
        })
    }

    /// `rho(M)^{-1} v`, computed as `rho(M^{-1}) v`.
    pub fn apply_inverse(&self, m: &CMatrix, v: &RepVector) -> Result<RepVector> {
        self.check_matrix(m)?;
        let inv = gauss_inverse(m).ok_or(Error::SingularMatrix)?;
        self.apply(&inv, v)
    }

    /// `<v, w>`: linear in `v`, conjugate-linear in `w`.
    pub fn inner(&self, v: &RepVector, w: &RepVector) -> Result<Complex64> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        Ok(v.coords
            .iter()
            .zip(&w.coords)
            .zip(&self.0.norms_sqr)
            .map(|((a, b), &s)| a * b.conj() * s)
            .sum())
    }
}

/// A vector of a [`Rep`], in coordinates of the monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RepVector {
    rep: Rep,
    coords: Vec<Complex64>,
}

impl RepVector {
    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn inner(&self, other: &RepVector) -> Result<Complex64> {
        self.rep.inner(self, other)
    }

    pub fn norm(&self) -> f64 {
        self.coords
            .iter()
            .zip(&self.rep.0.norms_sqr)
            .map(|(c, &s)| c.norm_sqr() * s)
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, c: Complex64) -> RepVector {
        RepVector {
            rep: self.rep.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &RepVector) -> Result<RepVector> {
        self.rep.check_vector(other)?;
        Ok(RepVector {
            rep: self.rep.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &RepVector) -> Result<RepVector> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &RepVector, c: Complex64) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b * c;
        }
    }
}
