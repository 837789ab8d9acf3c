//! The real symplectic group `Sp_2n(R)`, its action on the Siegel upper half
//! space, automorphy factors `J(g, Z) = CZ + D`, the group norm, and
//! reduction of points into an approximate fundamental domain for
//! `Sp_2n(Z)` when `n` is 1 or 2.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    complex_determinant, gauss_inverse, is_positive_spectrum, CMatrix, SymMatrix, MAX_DIM,
};

/// Absolute tolerance on `g^T J g = J` when constructing a [`SymplecticMatrix`].
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Default step budget for [`reduce_to_fundamental`].
pub const REDUCTION_STEP_BUDGET: usize = 10_000;

/// An inversion is only applied when it raises `det Im Z` by more than this factor.
pub const INVERSION_GAIN: f64 = 1.0 + 1e-9;

/// Height `delta(n)` such that the reduced domain lies in `V_delta`.
///
/// For `n = 1` this is the classical `sqrt(3)/2`. For `n = 2` a reduced
/// point has `y11 >= sqrt(3)/2` and Minkowski-reduced `Y`, whose minimal
/// eigenvalue is then at least `y11/2 >= sqrt(3)/4`; `0.4` sits below that.
pub fn fundamental_delta(n: usize) -> f64 {
    match n {
        1 => 3f64.sqrt() / 2.0,
        _ => 0.4,
    }
}

/// A point `Z = X + iY` of the Siegel upper half space.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPoint {
    x: SymMatrix,
    y: SymMatrix,
}

impl SiegelPoint {
    pub fn new(x: SymMatrix, y: SymMatrix) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                got: y.dim(),
            });
        }
        let mu = y.eigenvalues()?;
        if !is_positive_spectrum(&mu) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: mu[mu.len() - 1],
            });
        }
        Ok(SiegelPoint { x, y })
    }

    /// `i I_n`.
    pub fn i_identity(n: usize) -> Self {
        SiegelPoint {
            x: SymMatrix::zeros(n),
            y: SymMatrix::identity(n),
        }
    }

    pub fn scalar(z: Complex64) -> Result<Self> {
        SiegelPoint::new(SymMatrix::diagonal(&[z.re]), SymMatrix::diagonal(&[z.im]))
    }

    /// Splits a complex matrix into real and imaginary parts; both must be symmetric.
    pub fn from_complex(z: &CMatrix) -> Result<Self> {
        SiegelPoint::new(
            SymMatrix::new(z.map(|c| c.re))?,
            SymMatrix::new(z.map(|c| c.im))?,
        )
    }

    pub fn degree(&self) -> usize {
        self.x.dim()
    }

    pub fn real(&self) -> &SymMatrix {
        &self.x
    }

    pub fn imag(&self) -> &SymMatrix {
        &self.y
    }

    pub fn to_complex(&self) -> CMatrix {
        let x = self.x.as_matrix();
        let y = self.y.as_matrix();
        CMatrix::from_fn(self.degree(), self.degree(), |i, j| {
            Complex64::new(x[(i, j)], y[(i, j)])
        })
    }

    /// Entry-wise maximum distance to another point.
    pub fn distance(&self, other: &SiegelPoint) -> f64 {
        (self.to_complex() - other.to_complex())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// A real `2n x 2n` matrix `(A, B; C, D)` with `g^T J g = J`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    m: DMatrix<f64>,
}

/// `max |g^T J g - J|` for `J = (0, I; -I, 0)`; `None` if the shape is wrong.
pub fn symplectic_defect(m: &DMatrix<f64>) -> Option<f64> {
    let size = m.nrows();
    if size == 0 || !size.is_multiple_of(2) || m.ncols() != size {
        return None;
    }
    let j = standard_form(size / 2);
    Some((m.transpose() * &j * m - j).amax())
}

fn standard_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// Whether a square even-dimensional array satisfies the symplectic
/// relations within `tol`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> bool {
    symplectic_defect(m).is_some_and(|d| d <= tol)
}

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let defect = symplectic_defect(&m).ok_or_else(|| {
            Error::InvalidInput(format!(
                "expected a square matrix of even size, got {}x{}",
                m.nrows(),
                m.ncols()
            ))
        })?;
        if m.nrows() / 2 > MAX_DIM {
            return Err(Error::InvalidInput(format!("degree exceeds {MAX_DIM}")));
        }
        if !(defect <= SYMPLECTIC_TOL) {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(SymplecticMatrix { m })
    }

    pub fn from_blocks(
        a: &DMatrix<f64>,
        b: &DMatrix<f64>,
        c: &DMatrix<f64>,
        d: &DMatrix<f64>,
    ) -> Result<Self> {
        let n = a.nrows();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, n)).copy_from(b);
        m.view_mut((n, 0), (n, n)).copy_from(c);
        m.view_mut((n, n), (n, n)).copy_from(d);
        SymplecticMatrix::new(m)
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix { m: DMatrix::identity(2 * n, 2 * n) }
    }

    /// `(0, -I; I, 0)`, acting as `Z -> -Z^{-1}`.
    pub fn inversion(n: usize) -> Self {
        SymplecticMatrix { m: -standard_form(n) }
    }

    /// The `SL_2` inversion embedded in coordinate `i`; acts as
    /// `z_ii -> -1/z_ii` when `n = 1`.
    pub fn embedded_inversion(n: usize, i: usize) -> Self {
        let mut m = DMatrix::identity(2 * n, 2 * n);
        m[(i, i)] = 0.0;
        m[(n + i, n + i)] = 0.0;
        m[(i, n + i)] = -1.0;
        m[(n + i, i)] = 1.0;
        SymplecticMatrix { m }
    }

    /// `(I, B; 0, I)`, acting as `Z -> Z + B`.
    pub fn translation(b: &SymMatrix) -> Self {
        let n = b.dim();
        let mut m = DMatrix::identity(2 * n, 2 * n);
        m.view_mut((0, n), (n, n)).copy_from(b.as_matrix());
        SymplecticMatrix { m }
    }

    /// `(U, 0; 0, U^{-T})` for invertible `U`, acting as `Z -> U Z U^T`.
    pub fn from_gl(u: &DMatrix<f64>) -> Result<Self> {
        let n = u.nrows();
        let mut uinv = gauss_inverse(u).ok_or(Error::SingularMatrix)?;
        if u.iter().all(|v| v.fract() == 0.0) && (u.determinant().abs() - 1.0).abs() < 1e-9 {
            // unimodular: the inverse is integral
            uinv = uinv.map(f64::round);
        }
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(u);
        m.view_mut((n, n), (n, n)).copy_from(&uinv.transpose());
        Ok(SymplecticMatrix { m })
    }

    /// `(Y0^{1/2}, 0; 0, Y0^{-1/2})`.
    pub fn dilation(y0: &SymMatrix) -> Result<Self> {
        let n = y0.dim();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(y0.sqrt_posdef()?.as_matrix());
        m.view_mut((n, n), (n, n)).copy_from(y0.inv_sqrt_posdef()?.as_matrix());
        Ok(SymplecticMatrix { m })
    }

    /// The element `(A, B; -B, A)` of the standard maximal compact subgroup
    /// attached to a unitary `U = A + iB`.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let a = u.map(|c| c.re);
        let b = u.map(|c| c.im);
        SymplecticMatrix::from_blocks(&a, &b, &(-&b), &a)
    }

    pub fn degree(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.m.nrows())
            .map(|i| self.m.row(i).iter().copied().collect())
            .collect()
    }

    fn block(&self, r: usize, c: usize) -> DMatrix<f64> {
        let n = self.degree();
        self.m.view((r * n, c * n), (n, n)).into_owned()
    }

    pub fn a(&self) -> DMatrix<f64> {
        self.block(0, 0)
    }

    pub fn b(&self) -> DMatrix<f64> {
        self.block(0, 1)
    }

    pub fn c(&self) -> DMatrix<f64> {
        self.block(1, 0)
    }

    pub fn d(&self) -> DMatrix<f64> {
        self.block(1, 1)
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix { m: &self.m * &other.m }
    }

    /// `(D^T, -B^T; -C^T, A^T)`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let n = self.degree();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.d().transpose());
        m.view_mut((0, n), (n, n)).copy_from(&(-self.b().transpose()));
        m.view_mut((n, 0), (n, n)).copy_from(&(-self.c().transpose()));
        m.view_mut((n, n), (n, n)).copy_from(&self.a().transpose());
        SymplecticMatrix { m }
    }

    /// Largest distance of an entry to the nearest integer.
    pub fn integrality_defect(&self) -> f64 {
        self.m.iter().map(|v| (v - v.round()).abs()).fold(0.0, f64::max)
    }

    pub fn is_integral(&self) -> bool {
        self.integrality_defect() <= 1e-9
    }
}

/// `J(g, Z) = CZ + D`.
pub fn automorphy_factor(g: &SymplecticMatrix, z: &SiegelPoint) -> CMatrix {
    let c = g.c().map(|v| Complex64::new(v, 0.0));
    let d = g.d().map(|v| Complex64::new(v, 0.0));
    c * z.to_complex() + d
}

/// `g Z = (AZ + B)(CZ + D)^{-1}`.
pub fn act(g: &SymplecticMatrix, z: &SiegelPoint) -> Result<SiegelPoint> {
    if g.degree() != z.degree() {
        return Err(Error::DimensionMismatch {
            expected: g.degree(),
            got: z.degree(),
        });
    }
    let zc = z.to_complex();
    let a = g.a().map(|v| Complex64::new(v, 0.0));
    let b = g.b().map(|v| Complex64::new(v, 0.0));
    let factor = automorphy_factor(g, z);
    let inv = gauss_inverse(&factor).ok_or(Error::SingularFactor)?;
    let w = (a * zc + b) * inv;
    let sym = (&w + w.transpose()) * Complex64::new(0.5, 0.0);
    SiegelPoint::from_complex(&sym)
}

/// The standard section `(I, X; 0, I)(Y^{1/2}, 0; 0, Y^{-1/2})`, which maps
/// `i I_n` to `Z`.
pub fn from_point(z: &SiegelPoint) -> Result<SymplecticMatrix> {
    let n = z.degree();
    let r = z.imag().sqrt_posdef()?;
    let rinv = z.imag().inv_sqrt_posdef()?;
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(r.as_matrix());
    m.view_mut((0, n), (n, n)).copy_from(&(z.real().as_matrix() * rinv.as_matrix()));
    m.view_mut((n, n), (n, n)).copy_from(rinv.as_matrix());
    SymplecticMatrix::new(m)
}

/// `||g|| = Tr(g^T g)^{1/2}`.
pub fn group_norm(g: &SymplecticMatrix) -> f64 {
    g.m.norm()
}

/// Whether an integral `g` is congruent to the identity modulo `level`.
pub fn is_in_principal_congruence(g: &SymplecticMatrix, level: u64) -> Result<bool> {
    let distance = g.integrality_defect();
    if distance > 1e-9 {
        return Err(Error::NonIntegral { distance });
    }
    if level == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    let size = g.m.nrows();
    Ok((0..size).all(|i| {
        (0..size).all(|j| {
            let target = if i == j { 1 } else { 0 };
            (g.m[(i, j)].round() as i64 - target).rem_euclid(level as i64) == 0
        })
    }))
}

/// Outcome of [`reduce_to_fundamental`]: `gamma` is integral and symplectic
/// and `act(gamma, Z) = point`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub gamma: SymplecticMatrix,
    pub point: SiegelPoint,
    /// Number of inversions applied.
    pub steps: usize,
}

pub fn reduce_to_fundamental(z: &SiegelPoint) -> Result<Reduction> {
    reduce_with_budget(z, REDUCTION_STEP_BUDGET)
}

/// Highest-point reduction: repeatedly reduce `Y` by unimodular congruence,
/// translate `X` into `[-1/2, 1/2]`, and apply whichever candidate inversion
/// raises `det Y` the most, until none raises it by more than
/// [`INVERSION_GAIN`].
pub fn reduce_with_budget(z: &SiegelPoint, budget: usize) -> Result<Reduction> {
    let n = z.degree();
    if n > 2 {
        return Err(Error::InvalidInput(format!(
            "reduction is implemented for degree 1 and 2, got {n}"
        )));
    }
    let mut gamma = SymplecticMatrix::identity(n);
    let mut current = z.clone();
    let mut steps = 0;
    let mut passes = 0;
    let candidates: Vec<SymplecticMatrix> = if n == 1 {
        vec![SymplecticMatrix::inversion(1)]
    } else {
        std::iter::once(SymplecticMatrix::inversion(n))
            .chain((0..n).map(|i| SymplecticMatrix::embedded_inversion(n, i)))
            .collect()
    };
    loop {
        if passes >= budget {
            return Err(Error::NonTermination { steps: passes });
        }
        passes += 1;
        if n == 2 {
            let u = lagrange_reduce(current.imag());
            if u != DMatrix::identity(2, 2) {
                let step = SymplecticMatrix::from_gl(&u)?;
                current = act(&step, &current)?;
                gamma = step.mul(&gamma);
            }
        }
        let shift = current.real().as_matrix().map(|v| -v.round());
        if shift.iter().any(|&v| v != 0.0) {
            let step = SymplecticMatrix::translation(&SymMatrix::new(shift)?);
            current = act(&step, &current)?;
            gamma = step.mul(&gamma);
        }
        let mut best: Option<(f64, &SymplecticMatrix)> = None;
        for cand in &candidates {
            let det = complex_determinant(&automorphy_factor(cand, &current)).norm_sqr();
            if det == 0.0 {
                continue;
            }
            let gain = 1.0 / det;
            if gain > INVERSION_GAIN && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, cand));
            }
        }
        match best {
            Some((_, step)) => {
                current = act(step, &current)?;
                gamma = step.mul(&gamma);
                steps += 1;
            }
            None => break,
        }
    }
    let point = act(&gamma, z)?;
    Ok(Reduction { gamma, point, steps })
}

/// Unimodular `U` (det +-1) with `U Y U^T` Lagrange reduced:
/// `0 <= 2 y12 <= y11 <= y22`.
fn lagrange_reduce(y: &SymMatrix) -> DMatrix<f64> {
    let (mut a, mut b, mut c) = (y.get(0, 0), y.get(0, 1), y.get(1, 1));
    let mut u = DMatrix::<f64>::identity(2, 2);
    for _ in 0..10_000 {
        if a > c {
            std::mem::swap(&mut a, &mut c);
            u.swap_rows(0, 1);
        }
        let ratio = b / a;
        let m = if ratio.abs() <= 0.5 { 0.0 } else { ratio.round() };
        if m == 0.0 {
            break;
        }
        // second basis vector -= m * first
        c = c - 2.0 * m * b + m * m * a;
        b -= m * a;
        let r0 = u.row(0).into_owned();
        let mut r1 = u.row_mut(1);
        r1 -= r0 * m;
    }
    if b < 0.0 {
        u.row_mut(1).neg_mut();
    }
    u
}
