//! Growth bounds for nearly holomorphic forms and their lifts to the group.
//!
//! For a form `F` of highest weight `lambda` the quantity
//! `phi(Z) = ||rho(Y^{1/2}) F(Z)||` is bounded by
//!
//! ```text
//! C_F prod_i (mu_i(Y)^{lambda_1/2} + mu_i(Y)^{-lambda_1/2})        (theorem)
//! C_F (1 + Tr Y)^{n lambda_1} (det Y)^{-lambda_1/2}                 (corollary)
//! ```
//!
//! and the lift `Phi(g) = <rho(J(g, iI))^{-1} F(g iI), w0>` is slowly
//! increasing: `|Phi(g)| <= C Tr(g^T g)^r` for any `r >= n lambda_1 / 2`.
//!
//! `C_F` is estimated as a safety-inflated supremum over fundamental-domain
//! samples, then checked against fresh adversarial samples anywhere in `H_n`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{phi_from_value, slash, FormPackage, VectorForm};
use crate::linalg::{CMatrix, SymMatrix};
use crate::rep::{HighestWeight, RepVector};
use crate::symplectic::{
    act, automorphy_factor, fundamental_delta, reduce_to_fundamental, SiegelPoint,
    SymplecticMatrix,
};

/// Samples are generated in shards of this size, each from its own ChaCha stream.
pub const SHARD_SIZE: usize = 1024;

pub const DEFAULT_SAFETY_FACTOR: f64 = 1.25;
pub const DEFAULT_RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Theorem,
    Corollary,
    ModerateGrowth,
}

/// How `F` is evaluated away from the fundamental domain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    /// The truncated series itself.
    #[default]
    Direct,
    /// Pull back from the reduced point through the automorphy factor
    /// (full-level forms only).
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    /// Eigenvalues of `Y` are log-uniform in this range.
    pub eigenvalue_range: (f64, f64),
    /// Entries of `X` are uniform in `[-x_range, x_range]`.
    pub x_range: f64,
    pub safety_factor: f64,
    pub tolerance: f64,
    pub mode: EvalMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 10_000,
            seed: 0,
            eigenvalue_range: (1e-2, 1e2),
            x_range: 5.0,
            safety_factor: DEFAULT_SAFETY_FACTOR,
            tolerance: DEFAULT_RATIO_TOLERANCE,
            mode: EvalMode::Direct,
        }
    }
}

type RhsFn = fn(&SymMatrix, u32) -> Result<f64>;

/// `prod_i (mu_i^{lambda_1/2} + mu_i^{-lambda_1/2})`.
pub fn sturm_rhs(y: &SymMatrix, lambda1: u32) -> Result<f64> {
    let half = lambda1 as f64 / 2.0;
    Ok(y.eigenvalues()?
        .iter()
        .map(|&mu| mu.powf(half) + mu.powf(-half))
        .product())
}

/// `(1 + Tr Y)^{n lambda_1} (det Y)^{-lambda_1/2}`, with `det Y` taken as
/// the product of eigenvalues.
pub fn corollary_rhs(y: &SymMatrix, lambda1: u32) -> Result<f64> {
    let mu = y.eigenvalues()?;
    let n = mu.len() as f64;
    let det: f64 = mu.iter().product();
    let l = lambda1 as f64;
    Ok((1.0 + y.trace()).powf(n * l) * det.powf(-l / 2.0))
}

/// `det(Y)^{lambda_1/2} delta^{(1/2) sum_j (lambda_j - lambda_1)}`, the
/// fundamental-domain majorant for `prod_j mu_j(Y^{1/2})^{lambda_j}` when
/// `Y >= delta I`.
#[doc(hidden)]
pub fn fundamental_domain_bound(y: &SymMatrix, weight: &HighestWeight, delta: f64) -> Result<f64> {
    let l = weight.as_slice();
    let det: f64 = y.eigenvalues()?.iter().product();
    let excess: f64 = l[1..].iter().map(|&lj| lj as f64 - l[0] as f64).sum();
    Ok(det.powf(l[0] as f64 / 2.0) * delta.powf(excess / 2.0))
}

fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

fn sharded<T: Send>(
    count: usize,
    seed: u64,
    draw: impl Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let shards = count.div_ceil(SHARD_SIZE);
    let parts: Vec<Vec<T>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = shard_rng(seed, s);
            let len = SHARD_SIZE.min(count - s * SHARD_SIZE);
            (0..len).map(|_| draw(&mut rng)).collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Random orthogonal matrix: the Q factor of a uniform random matrix.
pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    loop {
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let q = m.qr().q();
        if q.iter().all(|v: &f64| v.is_finite()) {
            return q;
        }
    }
}

/// Random unitary matrix by QR of a matrix with uniform complex entries.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    m.qr().q()
}

/// `Z = X + iY` with `Y = Q diag(mu) Q^T`, `mu` log-uniform over
/// `cfg.eigenvalue_range`, and `X` uniform in `[-x_range, x_range]`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize, cfg: &SweepConfig) -> Result<SiegelPoint> {
    let (lo, hi) = cfg.eigenvalue_range;
    let mu: Vec<f64> = (0..n)
        .map(|_| rng.random_range(lo.ln()..=hi.ln()).exp())
        .collect();
    let q = random_orthogonal(rng, n);
    let y = SymMatrix::diagonal(&mu).congruence(&q);
    let upper: Vec<f64> = (0..n * (n + 1) / 2)
        .map(|_| rng.random_range(-cfg.x_range..=cfg.x_range))
        .collect();
    SiegelPoint::new(SymMatrix::from_upper(n, &upper)?, y)
}

/// `cfg.samples` random points anywhere in `H_n`.
pub fn adversarial_points(n: usize, cfg: &SweepConfig) -> Result<Vec<SiegelPoint>> {
    sharded(cfg.samples, cfg.seed, |rng| random_point(rng, n, cfg))
}

/// Random points pushed into the fundamental domain.
pub fn fundamental_points(n: usize, cfg: &SweepConfig) -> Result<Vec<SiegelPoint>> {
    sharded(cfg.samples, cfg.seed, |rng| {
        Ok(reduce_to_fundamental(&random_point(rng, n, cfg)?)?.point)
    })
}

/// `g = from_point(Z) k` with `Z` as in [`random_point`] and `k` a random
/// element of the standard maximal compact subgroup.
pub fn random_group_elements(n: usize, cfg: &SweepConfig) -> Result<Vec<SymplecticMatrix>> {
    sharded(cfg.samples, cfg.seed, |rng| {
        let z = random_point(rng, n, cfg)?;
        let k = SymplecticMatrix::from_unitary(&random_unitary(rng, n))?;
        Ok(crate::symplectic::from_point(&z)?.mul(&k))
    })
}

/// `diag(t I_n, t^{-1} I_n)` for each `t`.
pub fn ray_elements(n: usize, ts: &[f64]) -> Result<Vec<SymplecticMatrix>> {
    ts.iter()
        .map(|&t| {
            let mut d = vec![t; n];
            d.extend(std::iter::repeat_n(1.0 / t, n));
            SymplecticMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)))
        })
        .collect()
}

fn evaluate(form: &FormPackage, z: &SiegelPoint, mode: EvalMode) -> Result<RepVector> {
    match mode {
        EvalMode::Direct => form.expansion().evaluate(z),
        EvalMode::Reduced => form.evaluate_reduced(z),
    }
}

/// `phi(Z)` under the given evaluation mode.
pub fn phi_with_mode(form: &FormPackage, z: &SiegelPoint, mode: EvalMode) -> Result<f64> {
    phi_from_value(form.rep(), z, &evaluate(form, z, mode)?)
}

fn lambda1(form: &FormPackage) -> u32 {
    form.rep().highest_weight().lambda1()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantEstimate {
    /// `safety_factor * raw_sup`
    pub constant: f64,
    pub raw_sup: f64,
    pub witness: Option<SamplePoint>,
    pub coset_index: usize,
    pub samples: usize,
    /// Fundamental-domain samples whose imaginary part fell outside `V_delta`.
    pub outside_v_delta: usize,
}

/// Estimates `C_F` as `safety * sup phi(F|gamma_r, Z) / sturm_rhs(Im Z)` over
/// reduced random points `Z` and coset representatives `gamma_r`.
pub fn estimate_constant(form: &FormPackage, cfg: &SweepConfig) -> Result<ConstantEstimate> {
    let n = form.degree();
    let l1 = lambda1(form);
    let delta = fundamental_delta(n);
    let points = fundamental_points(n, cfg)?;
    let rows: Vec<(f64, usize, bool)> = points
        .par_iter()
        .map(|z| {
            let rhs = sturm_rhs(z.imag(), l1)?;
            let inside = z.imag().in_v_delta(delta)?;
            let mut best = (0.0f64, 0usize);
            for (r, gamma) in form.coset_reps().iter().enumerate() {
                let sl = slash(form, gamma.clone());
                let ratio = crate::forms::phi(&sl, z)? / rhs;
                if ratio > best.0 {
                    best = (ratio, r);
                }
            }
            Ok((best.0, best.1, inside))
        })
        .collect::<Result<_>>()?;
    let mut raw_sup = 0.0;
    let mut witness = None;
    let mut coset_index = 0;
    for (i, &(ratio, r, _)) in rows.iter().enumerate() {
        if ratio > raw_sup {
            raw_sup = ratio;
            witness = Some(i);
            coset_index = r;
        }
    }
    Ok(ConstantEstimate {
        constant: cfg.safety_factor * raw_sup,
        raw_sup,
        witness: witness.map(|i| SamplePoint::from(&points[i])),
        coset_index,
        samples: points.len(),
        outside_v_delta: rows.iter().filter(|r| !r.2).count(),
    })
}

/// A sample location in a report: a point of `H_n` or a group element.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SamplePoint {
    Siegel { x: Vec<Vec<f64>>, y: Vec<Vec<f64>> },
    Group { g: Vec<Vec<f64>> },
}

impl From<&SiegelPoint> for SamplePoint {
    fn from(z: &SiegelPoint) -> Self {
        SamplePoint::Siegel { x: z.real().rows(), y: z.imag().rows() }
    }
}

impl From<&SymplecticMatrix> for SamplePoint {
    fn from(g: &SymplecticMatrix) -> Self {
        SamplePoint::Group { g: g.rows() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub point: SamplePoint,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / (constant * rhs)`
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportConfig {
    pub delta: f64,
    pub t_max: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub safety_factor: f64,
    pub mode: EvalMode,
}

/// Only the first this-many violating samples are listed in a report.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub kind: BoundKind,
    pub constant: f64,
    pub exponent_r: f64,
    pub samples: usize,
    pub violations: usize,
    pub worst_ratio: f64,
    pub worst_point: Option<SamplePoint>,
    pub config: ReportConfig,
    pub violating_samples: Vec<SampleRow>,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn ratio(lhs: f64, scaled_rhs: f64) -> f64 {
    if scaled_rhs > 0.0 {
        lhs / scaled_rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn assemble(
    kind: BoundKind,
    constant: f64,
    exponent_r: f64,
    rows: Vec<SampleRow>,
    config: ReportConfig,
) -> GrowthReport {
    let limit = 1.0 + config.tolerance;
    let violating: Vec<&SampleRow> = rows.iter().filter(|r| !(r.ratio <= limit)).collect();
    let worst = rows
        .iter()
        .fold(None::<&SampleRow>, |acc, r| match acc {
            Some(a) if !(r.ratio > a.ratio) => Some(a),
            _ => Some(r),
        });
    GrowthReport {
        kind,
        constant,
        exponent_r,
        samples: rows.len(),
        violations: violating.len(),
        worst_ratio: worst.map_or(0.0, |r| r.ratio),
        worst_point: worst.map(|r| r.point.clone()),
        violating_samples: violating.into_iter().take(MAX_LISTED_VIOLATIONS).cloned().collect(),
        config,
        rows,
    }
}

fn check_constant(c: f64) -> Result<()> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidInput(format!("bound constant {c} must be finite and >= 0")));
    }
    Ok(())
}

/// Checks `phi(Z) <= C * rhs(Im Z)` at every sample, where `rhs` is
/// [`sturm_rhs`] or [`corollary_rhs`]. Violations are reported, not raised.
pub fn verify_growth_bound(
    form: &FormPackage,
    constant: f64,
    kind: BoundKind,
    samples: &[SiegelPoint],
    cfg: &SweepConfig,
) -> Result<GrowthReport> {
    check_constant(constant)?;
    let l1 = lambda1(form);
    let n = form.degree();
    let (rhs_fn, exponent): (RhsFn, f64) = match kind {
        BoundKind::Theorem => (sturm_rhs, l1 as f64 / 2.0),
        BoundKind::Corollary => (corollary_rhs, (n as u32 * l1) as f64),
        BoundKind::ModerateGrowth => {
            return Err(Error::InvalidInput(
                "use verify_moderate_growth for the moderate-growth bound".into(),
            ))
        }
    };
    let rows = samples
        .par_iter()
        .enumerate()
        .map(|(index, z)| {
            let lhs = phi_with_mode(form, z, cfg.mode)?;
            let rhs = rhs_fn(z.imag(), l1)?;
            Ok(SampleRow {
                index,
                point: SamplePoint::from(z),
                lhs,
                rhs,
                ratio: ratio(lhs, constant * rhs),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(kind, constant, exponent, rows, report_config(form, cfg)))
}

fn report_config(form: &FormPackage, cfg: &SweepConfig) -> ReportConfig {
    ReportConfig {
        delta: fundamental_delta(form.degree()),
        t_max: form.expansion().t_max(),
        tolerance: cfg.tolerance,
        seed: cfg.seed,
        safety_factor: cfg.safety_factor,
        mode: cfg.mode,
    }
}

/// `Phi_F(g) = rho(J(g, iI))^{-1} F(g iI)`.
pub fn lift(form: &FormPackage, g: &SymplecticMatrix) -> Result<RepVector> {
    lift_with_mode(form, g, EvalMode::Direct)
}

pub fn lift_with_mode(form: &FormPackage, g: &SymplecticMatrix, mode: EvalMode) -> Result<RepVector> {
    let base = SiegelPoint::i_identity(g.degree());
    let gz = act(g, &base)?;
    let value = evaluate(form, &gz, mode)?;
    form.rep().apply_inverse(&automorphy_factor(g, &base), &value)
}

/// Checks `|<lift(g), w0>| <= C Tr(g^T g)^r` with
/// `C = ||w0|| * c_form * safety_factor`, where `c_form` is a constant for
/// which the theorem bound holds.
pub fn verify_moderate_growth(
    form: &FormPackage,
    w0: &RepVector,
    r: f64,
    c_form: f64,
    samples: &[SymplecticMatrix],
    cfg: &SweepConfig,
) -> Result<GrowthReport> {
    check_constant(c_form)?;
    let minimum = form.degree() as f64 * lambda1(form) as f64 / 2.0;
    if !(r >= minimum) {
        return Err(Error::InvalidExponent { r, minimum });
    }
    if w0.rep() != form.rep() {
        return Err(Error::MismatchedRep);
    }
    let constant = w0.norm() * c_form * cfg.safety_factor;
    let rows = samples
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let lhs = lift_with_mode(form, g, cfg.mode)?.inner(w0)?.norm();
            let rhs = g.as_matrix().norm_squared().powf(r);
            Ok(SampleRow {
                index,
                point: SamplePoint::from(g),
                lhs,
                rhs,
                ratio: ratio(lhs, constant * rhs),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(BoundKind::ModerateGrowth, constant, r, rows, report_config(form, cfg)))
}
