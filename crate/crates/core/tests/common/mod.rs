#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siegel_growth::growth::{random_orthogonal, random_unitary};
use siegel_growth::linalg::{CMatrix, SymMatrix};
use siegel_growth::rep::{Rep, RepVector};
use siegel_growth::symplectic::{SiegelPoint, SymplecticMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..=hi.ln()).exp()
}

/// `Q diag(mu) Q^T` with `mu` log-uniform in `[lo, hi]`.
pub fn random_spd<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> SymMatrix {
    let mu: Vec<f64> = (0..n).map(|_| log_uniform(rng, lo, hi)).collect();
    SymMatrix::diagonal(&mu).congruence(&random_orthogonal(rng, n))
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, a: f64) -> SymMatrix {
    let upper: Vec<f64> = (0..n * (n + 1) / 2).map(|_| rng.random_range(-a..=a)).collect();
    SymMatrix::from_upper(n, &upper).unwrap()
}

/// `delta I + A^T A` with `A` of random height, so `Y` often touches `V_delta`'s boundary.
pub fn random_in_v_delta<R: Rng>(rng: &mut R, n: usize, delta: f64) -> SymMatrix {
    let rows = rng.random_range(0..=n);
    let a = DMatrix::from_fn(rows, n, |_, _| rng.random_range(-2.0..2.0));
    SymMatrix::new(a.transpose() * a).unwrap().add(&SymMatrix::scalar(n, delta))
}

/// Positive semidefinite `B^T B`, possibly singular.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize) -> SymMatrix {
    let rows = rng.random_range(0..=n);
    let b = DMatrix::from_fn(rows, n, |_, _| rng.random_range(-3.0..3.0));
    SymMatrix::new(b.transpose() * b).unwrap()
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

pub fn random_rep_vector<R: Rng>(rng: &mut R, rep: &Rep) -> RepVector {
    rep.vector((0..rep.dim()).map(|_| random_complex(rng)).collect()).unwrap()
}

pub fn random_siegel_point<R: Rng>(rng: &mut R, n: usize) -> SiegelPoint {
    let x = random_symmetric(rng, n, 2.0);
    SiegelPoint::new(x, random_spd(rng, n, 0.1, 10.0)).unwrap()
}

/// One random generator: integral translation, (embedded) inversion,
/// unimodular `diag(U, U^{-T})`, real dilation or maximal-compact element.
pub fn random_generator<R: Rng>(rng: &mut R, n: usize) -> SymplecticMatrix {
    match rng.random_range(0..6) {
        0 => {
            let upper: Vec<f64> =
                (0..n * (n + 1) / 2).map(|_| rng.random_range(-2i32..=2) as f64).collect();
            SymplecticMatrix::translation(&SymMatrix::from_upper(n, &upper).unwrap())
        }
        1 => SymplecticMatrix::inversion(n),
        2 => SymplecticMatrix::embedded_inversion(n, rng.random_range(0..n)),
        3 => {
            let mut u = DMatrix::identity(n, n);
            if n > 1 {
                let (i, j) = (rng.random_range(0..n), rng.random_range(0..n - 1));
                let j = if j >= i { j + 1 } else { j };
                u[(i, j)] = rng.random_range(-2i32..=2) as f64;
            }
            SymplecticMatrix::from_gl(&u).unwrap()
        }
        4 => SymplecticMatrix::dilation(&random_spd(rng, n, 0.5, 2.0)).unwrap(),
        _ => SymplecticMatrix::from_unitary(&random_unitary(rng, n)).unwrap(),
    }
}

pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> SymplecticMatrix {
    let len = rng.random_range(1..=max_len);
    (0..len).fold(SymplecticMatrix::identity(n), |g, _| g.mul(&random_generator(rng, n)))
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

pub fn max_abs_c(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.norm()))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
