//! Bundled sample forms: a constant form, the zero form, truncated
//! Eisenstein series `E4`, `E6`, the nearly holomorphic `E2*`, and a
//! synthetic degree-2 coefficient set for structural tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::forms::{CoefficientSpec, FormPackage, FourierExpansion, GrowthParams};
use crate::linalg::{MultiIndex, SymMatrix};
use crate::rep::{Rep, RepVector};
use crate::symplectic::SymplecticMatrix;

/// `sigma_k(m) = sum of d^k over divisors d of m`.
pub fn divisor_sigma(m: u64, k: u32) -> f64 {
    (1..=m)
        .filter(|&d| m.is_multiple_of(d))
        .map(|d| (d as f64).powi(k as i32))
        .sum()
}

/// `T = (1, 1; 0, 1)` and `S = (0, -1; 1, 0)`, which generate `SL_2(Z)`.
pub fn sl2_generators() -> Vec<SymplecticMatrix> {
    vec![
        SymplecticMatrix::translation(&SymMatrix::diagonal(&[1.0])),
        SymplecticMatrix::inversion(1),
    ]
}

fn scalar_rep_vector(rep: &Rep, c: f64) -> RepVector {
    rep.vector(vec![Complex64::new(c, 0.0)]).unwrap()
}

/// Degree-one holomorphic Eisenstein-type series with `a(0) = 1`,
/// `a(m) = factor * sigma_{k-1}(m)`.
fn eisenstein(weight: u32, factor: f64, t_max: u64, growth: GrowthParams) -> Result<FormPackage> {
    let rep = Rep::new(1, 0, weight)?;
    let coefficients = (0..=t_max)
        .map(|m| CoefficientSpec {
            beta: MultiIndex::zero(1),
            scaled_s: vec![vec![m as i64]],
            value: scalar_rep_vector(
                &rep,
                if m == 0 { 1.0 } else { factor * divisor_sigma(m, weight - 1) },
            ),
        })
        .collect();
    let exp = FourierExpansion::new(1, 0, 1, t_max as f64, rep, coefficients)?;
    FormPackage::new(exp, sl2_generators(), vec![], growth)
}

/// `E4 = 1 + 240 sum sigma_3(m) q^m`, truncated at `Tr S <= t_max`.
/// Growth `240 sigma_3(m) <= 240 zeta(3) m^3 <= 300 (1 + m)^3`.
pub fn eisenstein_e4(t_max: u64) -> Result<FormPackage> {
    eisenstein(4, 240.0, t_max, GrowthParams { a: 300.0, kappa: 3.0 })
}

/// `E6 = 1 - 504 sum sigma_5(m) q^m`; `504 zeta(5) < 600`.
pub fn eisenstein_e6(t_max: u64) -> Result<FormPackage> {
    eisenstein(6, -504.0, t_max, GrowthParams { a: 600.0, kappa: 5.0 })
}

/// `E2*(z) = 1 - 3/(pi y) - 24 sum sigma_1(m) q^m`, weight 2 and `p = 1`.
/// The `1/y` term is stored with `beta = {b11 = 1}` at `S = 0`.
pub fn e2_star(t_max: u64) -> Result<FormPackage> {
    let rep = Rep::new(1, 0, 2)?;
    let mut coefficients: Vec<CoefficientSpec> = (0..=t_max)
        .map(|m| CoefficientSpec {
            beta: MultiIndex::zero(1),
            scaled_s: vec![vec![m as i64]],
            value: scalar_rep_vector(
                &rep,
                if m == 0 { 1.0 } else { -24.0 * divisor_sigma(m, 1) },
            ),
        })
        .collect();
    coefficients.push(CoefficientSpec {
        beta: MultiIndex::from_pairs(1, &[((0, 0), 1)])?,
        scaled_s: vec![vec![0]],
        value: scalar_rep_vector(&rep, -3.0 / PI),
    });
    let exp = FourierExpansion::new(1, 1, 1, t_max as f64, rep, coefficients)?;
    // sigma_1(m) <= m (m + 1) / 2
    FormPackage::new(exp, sl2_generators(), vec![], GrowthParams { a: 24.0, kappa: 2.0 })
}

/// The constant function `v0`. Its test set holds the unit translations,
/// plus the inversion when `rho` is trivial.
pub fn constant(rep: Rep, v0: RepVector) -> Result<FormPackage> {
    let n = rep.degree();
    let exp = FourierExpansion::new(
        n,
        0,
        1,
        0.0,
        rep.clone(),
        vec![CoefficientSpec {
            beta: MultiIndex::zero(n),
            scaled_s: vec![vec![0; n]; n],
            value: v0.clone(),
        }],
    )?;
    let mut tests: Vec<SymplecticMatrix> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            SymplecticMatrix::translation(&SymMatrix::diagonal(&e))
        })
        .collect();
    if rep.sym_power() == 0 && rep.det_power() == 0 {
        tests.push(SymplecticMatrix::inversion(n));
    }
    FormPackage::new(exp, tests, vec![], GrowthParams { a: v0.norm(), kappa: 0.0 })
}

pub fn zero_form(n: usize, rep: Rep) -> Result<FormPackage> {
    let exp = FourierExpansion::new(n, 0, 1, 0.0, rep, vec![])?;
    FormPackage::new(exp, vec![], vec![], GrowthParams { a: 0.0, kappa: 0.0 })
}

/// Synthetic degree-2 data in `Sym^2 ⊗ det^2` at level 2 with `p = 1`:
/// every psd `S` with `Tr S <= 3` carries a pseudo-random holomorphic
/// coefficient, and `S = 0` also carries `[Y^{-1}]^beta` terms for each
/// `beta` of degree one. Not modular; exercises evaluation, slash and
/// reduction only.
pub fn synthetic_degree_two() -> Result<FormPackage> {
    let rep = Rep::new(2, 2, 2)?;
    let level = 2i64;
    let t_max = 3.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let random_value = |rng: &mut ChaCha8Rng, scale: f64| {
        let coords = (0..rep.dim())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale)
            .collect();
        rep.vector(coords).unwrap()
    };
    let mut coefficients = Vec::new();
    let limit = (t_max as i64) * level;
    for a in 0..=limit {
        for c in 0..=(limit - a) {
            for b in -limit..=limit {
                if b * b > a * c {
                    continue;
                }
                let trace = (a + c) as f64 / level as f64;
                coefficients.push(CoefficientSpec {
                    beta: MultiIndex::zero(2),
                    scaled_s: vec![vec![a, b], vec![b, c]],
                    value: random_value(&mut rng, 1.0 + trace),
                });
            }
        }
    }
    for beta in MultiIndex::all_up_to(2, 1).into_iter().filter(|b| b.degree() == 1) {
        coefficients.push(CoefficientSpec {
            beta,
            scaled_s: vec![vec![0, 0], vec![0, 0]],
            value: random_value(&mut rng, 0.5),
        });
    }
    let exp = FourierExpansion::new(2, 1, level as u64, t_max, rep, coefficients)?;
    // |coords| <= sqrt(2)(1 + Tr S) each and basis norms are <= 1
    let growth = GrowthParams { a: 6f64.sqrt(), kappa: 1.0 };
    FormPackage::new(exp, vec![], vec![], growth)
}

/// Every bundled form under its file stem.
pub fn bundled() -> Result<Vec<(&'static str, FormPackage)>> {
    let trivial = Rep::new(1, 0, 0)?;
    let v0 = trivial.vector(vec![Complex64::new(2.0, -1.0)])?;
    Ok(vec![
        ("constant", constant(trivial, v0)?),
        ("e4", eisenstein_e4(20)?),
        ("e6", eisenstein_e6(20)?),
        ("e2star", e2_star(20)?),
        ("synthetic_n2", synthetic_degree_two()?),
    ])
}
