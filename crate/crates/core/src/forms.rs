//! Nearly holomorphic vector-valued forms stored as truncated Fourier
//! expansions
//!
//! ```text
//! F(Z) = sum_beta sum_S a_beta(S) e^{2 pi i Tr(SZ)} [Y^{-1}]^beta
//! ```
//!
//! over positive semidefinite `S` in `(1/N) M_n^sym(Z)` with `Tr S <= T_max`,
//! together with pointwise slash operators, invariance checks against a
//! finite test set of `Sp_2n(Z)` elements, and explicit truncation-tail bounds.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, CMatrix, MultiIndex, SymMatrix};
use crate::rep::{Rep, RepVector};
use crate::symplectic::{act, automorphy_factor, reduce_to_fundamental, SiegelPoint, SymplecticMatrix};

/// A stored `S` is accepted as positive semidefinite down to this eigenvalue.
pub const PSD_TOL: f64 = 1e-12;

/// Floating-point allowance added to every invariance threshold.
pub const ROUNDING_SLACK: f64 = 1e-10;

/// One Fourier coefficient `a_beta(F, S)`; `S` is stored as the integer
/// matrix `N S`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    beta: MultiIndex,
    scaled: Vec<Vec<i64>>,
    s: SymMatrix,
    value: RepVector,
}

impl Coefficient {
    pub fn beta(&self) -> &MultiIndex {
        &self.beta
    }

    /// `N S`.
    pub fn scaled_s(&self) -> &[Vec<i64>] {
        &self.scaled
    }

    pub fn s(&self) -> &SymMatrix {
        &self.s
    }

    pub fn value(&self) -> &RepVector {
        &self.value
    }
}

/// Anything that can be evaluated as a `V`-valued function on `H_n`.
pub trait VectorForm {
    fn rep(&self) -> &Rep;
    fn eval(&self, z: &SiegelPoint) -> Result<RepVector>;
}

impl<F: VectorForm + ?Sized> VectorForm for &F {
    fn rep(&self) -> &Rep {
        (**self).rep()
    }

    fn eval(&self, z: &SiegelPoint) -> Result<RepVector> {
        (**self).eval(z)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierExpansion {
    n: usize,
    p: u32,
    level: u64,
    t_max: f64,
    rep: Rep,
    coefficients: Vec<Coefficient>,
}

/// Input record for [`FourierExpansion::new`].
#[derive(Clone, Debug)]
pub struct CoefficientSpec {
    pub beta: MultiIndex,
    /// `N S` as a full symmetric integer matrix.
    pub scaled_s: Vec<Vec<i64>>,
    pub value: RepVector,
}

impl FourierExpansion {
    /// Validates every record: symmetric integral `N S`, `S >= 0`,
    /// `deg(beta) <= p`, `Tr S <= T_max`, value in `rep`. Errors name the
    /// offending record by index.
    pub fn new(
        n: usize,
        p: u32,
        level: u64,
        t_max: f64,
        rep: Rep,
        coefficients: Vec<CoefficientSpec>,
    ) -> Result<Self> {
        if rep.degree() != n {
            return Err(Error::InvalidInput(format!(
                "representation has degree {} but the form has degree {n}",
                rep.degree()
            )));
        }
        if level == 0 {
            return Err(Error::InvalidInput("level must be positive".into()));
        }
        if !(t_max >= 0.0) || !t_max.is_finite() {
            return Err(Error::InvalidInput(format!("T_max = {t_max} must be finite and >= 0")));
        }
        let mut stored = Vec::with_capacity(coefficients.len());
        for (idx, spec) in coefficients.into_iter().enumerate() {
            let bad = |msg: String| Error::InvalidInput(format!("coefficient #{idx}: {msg}"));
            if spec.beta.dim() != n {
                return Err(bad(format!("beta has dimension {}", spec.beta.dim())));
            }
            if spec.beta.degree() > p {
                return Err(bad(format!("deg(beta) = {} exceeds p = {p}", spec.beta.degree())));
            }
            if spec.scaled_s.len() != n || spec.scaled_s.iter().any(|r| r.len() != n) {
                return Err(bad(format!("S must be {n}x{n}")));
            }
            let m = DMatrix::from_fn(n, n, |i, j| spec.scaled_s[i][j] as f64 / level as f64);
            let s = SymMatrix::new(m).map_err(|e| bad(format!("S: {e}")))?;
            let mu_min = s.min_eigenvalue()?;
            if mu_min < -PSD_TOL {
                return Err(bad(format!(
                    "S is not positive semidefinite (min eigenvalue {mu_min:e})"
                )));
            }
            if s.trace() > t_max * (1.0 + 1e-12) {
                return Err(bad(format!("Tr S = {} exceeds T_max = {t_max}", s.trace())));
            }
            if spec.value.rep() != &rep {
                return Err(bad("value lies in a different representation".into()));
            }
            stored.push(Coefficient {
                beta: spec.beta,
                scaled: spec.scaled_s,
                s,
                value: spec.value,
            });
        }
        Ok(FourierExpansion { n, p, level, t_max, rep, coefficients: stored })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn representation(&self) -> &Rep {
        &self.rep
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coefficients
    }

    /// Keeps only the terms with `Tr S <= t_max`; `t_max` may not exceed the
    /// current truncation.
    pub fn truncated(&self, t_max: f64) -> Result<Self> {
        if t_max > self.t_max {
            return Err(Error::InvalidInput(format!(
                "cannot raise T_max from {} to {t_max}",
                self.t_max
            )));
        }
        let mut out = self.clone();
        out.t_max = t_max;
        out.coefficients.retain(|c| c.s.trace() <= t_max * (1.0 + 1e-12));
        Ok(out)
    }

    /// Evaluates the stored finite sum at `Z`.
    pub fn evaluate(&self, z: &SiegelPoint) -> Result<RepVector> {
        if z.degree() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.degree(),
            });
        }
        let x = z.real();
        let y = z.imag();
        let y_inv = if self.p > 0 { Some(y.inverse()?) } else { None };
        let mut monomials: BTreeMap<&MultiIndex, f64> = BTreeMap::new();
        let mut total = self.rep.zero();
        let level = self.level as f64;
        for c in &self.coefficients {
            let mono = match &y_inv {
                Some(inv) if c.beta.degree() > 0 => match monomials.get(&c.beta) {
                    Some(&v) => v,
                    None => {
                        let v = inv.monomial(&c.beta)?;
                        monomials.insert(&c.beta, v);
                        v
                    }
                },
                _ => 1.0,
            };
            // Tr(N S X), reduced mod N before scaling keeps integer translates exact.
            let mut phase = 0.0;
            for i in 0..self.n {
                for j in 0..self.n {
                    phase += c.scaled[i][j] as f64 * x.get(i, j);
                }
            }
            let phase = phase.rem_euclid(level) / level;
            let decay = (-2.0 * PI * c.s.trace_product(y)).exp();
            let weight = Complex64::from_polar(decay * mono, 2.0 * PI * phase);
            total.add_scaled_assign(&c.value, weight);
        }
        Ok(total)
    }

    /// `R_beta(Y) = sum_S ||a_beta(S)|| e^{-2 pi Tr(SY)}` over stored terms.
    pub fn majorant(&self, beta: &MultiIndex, y: &SymMatrix) -> f64 {
        self.coefficients
            .iter()
            .filter(|c| &c.beta == beta)
            .map(|c| c.value.norm() * (-2.0 * PI * c.s.trace_product(y)).exp())
            .sum()
    }
}

impl VectorForm for FourierExpansion {
    fn rep(&self) -> &Rep {
        &self.rep
    }

    fn eval(&self, z: &SiegelPoint) -> Result<RepVector> {
        self.evaluate(z)
    }
}

/// Declared coefficient growth `||a_beta(S)|| <= A (1 + Tr S)^kappa`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthParams {
    pub a: f64,
    pub kappa: f64,
}

/// A truncated expansion together with the data used to test it as a
/// modular form.
#[derive(Clone, Debug, PartialEq)]
pub struct FormPackage {
    expansion: FourierExpansion,
    gamma_test_set: Vec<SymplecticMatrix>,
    coset_reps: Vec<SymplecticMatrix>,
    growth: GrowthParams,
}

impl FormPackage {
    /// `coset_reps` empty means `Gamma = Sp_2n(Z)` with the identity as the
    /// only representative.
    pub fn new(
        expansion: FourierExpansion,
        gamma_test_set: Vec<SymplecticMatrix>,
        coset_reps: Vec<SymplecticMatrix>,
        growth: GrowthParams,
    ) -> Result<Self> {
        let n = expansion.degree();
        for (label, set) in [("gamma_test_set", &gamma_test_set), ("coset_reps", &coset_reps)] {
            for (i, g) in set.iter().enumerate() {
                if g.degree() != n {
                    return Err(Error::InvalidInput(format!(
                        "{label}[{i}] has degree {} but the form has degree {n}",
                        g.degree()
                    )));
                }
                if !g.is_integral() {
                    return Err(Error::InvalidInput(format!("{label}[{i}] is not integral")));
                }
            }
        }
        if !(growth.a >= 0.0 && growth.a.is_finite() && growth.kappa.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "growth parameters A = {}, kappa = {} are invalid",
                growth.a, growth.kappa
            )));
        }
        for (idx, c) in expansion.coefficients().iter().enumerate() {
            let allowed = growth.a * (1.0 + c.s.trace()).powf(growth.kappa);
            let norm = c.value.norm();
            if norm > allowed * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "coefficient #{idx}: norm {norm} exceeds declared growth A(1+Tr S)^kappa = {allowed}"
                )));
            }
        }
        let coset_reps = if coset_reps.is_empty() {
            vec![SymplecticMatrix::identity(n)]
        } else {
            coset_reps
        };
        Ok(FormPackage { expansion, gamma_test_set, coset_reps, growth })
    }

    pub fn expansion(&self) -> &FourierExpansion {
        &self.expansion
    }

    pub fn gamma_test_set(&self) -> &[SymplecticMatrix] {
        &self.gamma_test_set
    }

    pub fn coset_reps(&self) -> &[SymplecticMatrix] {
        &self.coset_reps
    }

    pub fn growth(&self) -> GrowthParams {
        self.growth
    }

    pub fn degree(&self) -> usize {
        self.expansion.degree()
    }

    /// Replaces the expansion by its truncation at `t_max`.
    pub fn truncated(&self, t_max: f64) -> Result<Self> {
        Ok(FormPackage {
            expansion: self.expansion.truncated(t_max)?,
            ..self.clone()
        })
    }

    /// Whether the package describes a form for the full group `Sp_2n(Z)`.
    pub fn is_full_level(&self) -> bool {
        self.coset_reps.len() == 1
            && self.coset_reps[0] == SymplecticMatrix::identity(self.degree())
    }

    /// Evaluates through the fundamental domain: with `gamma Z = Z_red`,
    /// `F(Z) = rho(J(gamma, Z))^{-1} F(Z_red)`. Only valid for full level,
    /// where it sidesteps the truncation error of the raw series near the
    /// real boundary.
    pub fn evaluate_reduced(&self, z: &SiegelPoint) -> Result<RepVector> {
        if !self.is_full_level() {
            return Err(Error::InvalidInput(
                "reduced evaluation needs a full-level form".into(),
            ));
        }
        let red = reduce_to_fundamental(z)?;
        let value = self.expansion.evaluate(&red.point)?;
        self.expansion
            .rep
            .apply_inverse(&automorphy_factor(&red.gamma, z), &value)
    }

    /// Upper bound for the discarded part of the series at `Y`:
    ///
    /// ```text
    /// |T_n^p| max(1, d^-p) sum_{m > N T_max} (2m+1)^{n(n+1)/2} A (1 + m/N)^kappa e^{-2 pi d m / N}
    /// ```
    ///
    /// with `d` the minimal eigenvalue of `Y`. The series is summed past its
    /// peak until terms vanish relative to the sum, and the remainder is
    /// bounded geometrically.
    pub fn tail_bound(&self, y: &SymMatrix) -> Result<f64> {
        let d = y.min_eigenvalue()?;
        if !(d > 0.0) {
            return Err(Error::Divergence(d));
        }
        let GrowthParams { a, kappa } = self.growth;
        if a == 0.0 {
            return Ok(0.0);
        }
        let n = self.degree();
        let p = self.expansion.p;
        let level = self.expansion.level as f64;
        let dims = (n * (n + 1) / 2) as f64;
        let log_term = |m: f64| {
            dims * (2.0 * m + 1.0).ln() + a.ln() + kappa * (1.0 + m / level).ln()
                - 2.0 * PI * d * m / level
        };
        let start = (level * self.expansion.t_max + 1e-9).floor() + 1.0;
        // log_term is concave, maximal near this point
        let peak = level * (dims + kappa.max(0.0)) / (2.0 * PI * d);
        let mut sum = 0.0;
        let mut m = start;
        loop {
            let t = log_term(m).exp();
            sum += t;
            if m > peak {
                if t == 0.0 {
                    break;
                }
                let next = log_term(m + 1.0).exp();
                let ratio = next / t;
                if ratio < 1.0 && t < 1e-18 * sum {
                    sum += next / (1.0 - ratio);
                    break;
                }
            }
            m += 1.0;
            if m - start > 1e8 {
                return Err(Error::Divergence(d));
            }
        }
        let mono = if p == 0 { 1.0 } else { d.powi(-(p as i32)).max(1.0) };
        Ok(sum * mono * MultiIndex::count_up_to(n, p) as f64)
    }
}

impl VectorForm for FormPackage {
    fn rep(&self) -> &Rep {
        &self.expansion.rep
    }

    fn eval(&self, z: &SiegelPoint) -> Result<RepVector> {
        self.expansion.evaluate(z)
    }
}

/// The pointwise slash `(F|g)(Z) = rho(J(g, Z))^{-1} F(gZ)`.
#[derive(Clone, Debug)]
pub struct Slashed<F> {
    form: F,
    g: SymplecticMatrix,
}

pub fn slash<F: VectorForm>(form: F, g: SymplecticMatrix) -> Slashed<F> {
    Slashed { form, g }
}

impl<F: VectorForm> VectorForm for Slashed<F> {
    fn rep(&self) -> &Rep {
        self.form.rep()
    }

    fn eval(&self, z: &SiegelPoint) -> Result<RepVector> {
        let gz = act(&self.g, z)?;
        let value = self.form.eval(&gz)?;
        self.form
            .rep()
            .apply_inverse(&automorphy_factor(&self.g, z), &value)
    }
}

/// `phi(Z) = ||rho(Y^{1/2}) F(Z)||`.
pub fn phi<F: VectorForm + ?Sized>(form: &F, z: &SiegelPoint) -> Result<f64> {
    let value = form.eval(z)?;
    phi_from_value(form.rep(), z, &value)
}

pub(crate) fn phi_from_value(rep: &Rep, z: &SiegelPoint, value: &RepVector) -> Result<f64> {
    let root = z.imag().sqrt_posdef()?.to_complex();
    Ok(rep.apply(&root, value)?.norm())
}

/// `||rho(M)||` for `rho = Sym^j ⊗ det^k`: `||M||^j |det M|^k`.
pub fn rep_operator_norm(rep: &Rep, m: &CMatrix) -> Result<f64> {
    let det = crate::linalg::complex_determinant(m).norm();
    Ok(operator_norm(m)?.powi(rep.sym_power() as i32) * det.powi(rep.det_power() as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceRecord {
    pub gamma_index: usize,
    pub sample_index: usize,
    /// `||(F|gamma)(Z) - F(Z)|| / (1 + ||F(Z)||)`
    pub deviation: f64,
    /// Truncation tails at `Z` and `gamma Z`, relative, plus [`ROUNDING_SLACK`].
    pub threshold: f64,
}

#[derive(Clone, Debug, Default)]
pub struct InvarianceReport {
    pub records: Vec<InvarianceRecord>,
    pub max_deviation: f64,
    pub max_threshold: f64,
    pub failures: usize,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Compares `F|gamma` with `F` for every `gamma` in the test set at every sample.
pub fn check_invariance(form: &FormPackage, samples: &[SiegelPoint]) -> Result<InvarianceReport> {
    let rep = form.rep();
    let mut report = InvarianceReport::default();
    for (gi, gamma) in form.gamma_test_set().iter().enumerate() {
        for (si, z) in samples.iter().enumerate() {
            let f = form.expansion.evaluate(z)?;
            let gz = act(gamma, z)?;
            let j = automorphy_factor(gamma, z);
            let slashed = rep.apply_inverse(&j, &form.expansion.evaluate(&gz)?)?;
            let scale = 1.0 + f.norm();
            let deviation = slashed.sub(&f)?.norm() / scale;
            let j_inv = crate::linalg::gauss_inverse(&j).ok_or(Error::SingularFactor)?;
            let tails = form.tail_bound(z.imag())?
                + rep_operator_norm(rep, &j_inv)? * form.tail_bound(gz.imag())?;
            let threshold = tails / scale + ROUNDING_SLACK;
            if deviation > threshold {
                report.failures += 1;
            }
            report.max_deviation = report.max_deviation.max(deviation);
            report.max_threshold = report.max_threshold.max(threshold);
            report.records.push(InvarianceRecord {
                gamma_index: gi,
                sample_index: si,
                deviation,
                threshold,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z1(x: f64, y: f64) -> SiegelPoint {
        SiegelPoint::scalar(Complex64::new(x, y)).unwrap()
    }

    #[test]
    fn constant_form_is_constant() {
        let rep = Rep::new(2, 2, 1).unwrap();
        let v0 = rep
            .vector(vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.0)])
            .unwrap();
        let f = catalog::constant(rep.clone(), v0.clone()).unwrap();
        for z in [
            SiegelPoint::i_identity(2),
            SiegelPoint::new(
                SymMatrix::from_upper(2, &[0.3, -2.0, 7.0]).unwrap(),
                SymMatrix::from_upper(2, &[0.5, 0.1, 2.0]).unwrap(),
            )
            .unwrap(),
        ] {
            assert_eq!(f.expansion().evaluate(&z).unwrap(), v0);
        }
    }

    #[test]
    fn single_q_term() {
        let rep = Rep::new(1, 0, 4).unwrap();
        let a = Complex64::new(2.0, -1.0);
        let f = FourierExpansion::new(
            1,
            0,
            1,
            1.0,
            rep.clone(),
            vec![CoefficientSpec {
                beta: MultiIndex::zero(1),
                scaled_s: vec![vec![1]],
                value: rep.vector(vec![a]).unwrap(),
            }],
        )
        .unwrap();
        let got = f.evaluate(&z1(0.0, 1.0)).unwrap().coords()[0];
        let want = a * (-2.0 * PI).exp();
        assert!((got - want).norm() < 1e-18);
    }

    #[test]
    fn construction_rejects_bad_records() {
        let rep = Rep::new(2, 0, 0).unwrap();
        let one = rep.vector(vec![Complex64::new(1.0, 0.0)]).unwrap();
        let spec = |s: Vec<Vec<i64>>, beta: MultiIndex| CoefficientSpec {
            beta,
            scaled_s: s,
            value: one.clone(),
        };
        // not psd
        let err = FourierExpansion::new(
            2,
            0,
            1,
            5.0,
            rep.clone(),
            vec![
                spec(vec![vec![1, 0], vec![0, 0]], MultiIndex::zero(2)),
                spec(vec![vec![1, 2], vec![2, 1]], MultiIndex::zero(2)),
            ],
        )
        .unwrap_err();
        assert!(err.to_string().contains("coefficient #1"), "{err}");
        assert!(err.to_string().contains("positive semidefinite"));
        // degree of beta
        let beta = MultiIndex::from_pairs(2, &[((0, 1), 2)]).unwrap();
        assert!(FourierExpansion::new(2, 1, 1, 5.0, rep.clone(), vec![spec(vec![vec![0, 0], vec![0, 0]], beta)]).is_err());
        // trace above T_max
        assert!(FourierExpansion::new(
            2,
            0,
            1,
            1.0,
            rep.clone(),
            vec![spec(vec![vec![1, 0], vec![0, 1]], MultiIndex::zero(2))]
        )
        .is_err());
        // asymmetric S
        assert!(FourierExpansion::new(
            2,
            0,
            2,
            5.0,
            rep,
            vec![spec(vec![vec![2, 1], vec![0, 2]], MultiIndex::zero(2))]
        )
        .is_err());
    }

    #[test]
    fn growth_declaration_is_validated() {
        let f = catalog::eisenstein_e4(20).unwrap();
        let exp = f.expansion().clone();
        let low = GrowthParams { a: 100.0, kappa: 3.0 };
        assert!(FormPackage::new(exp, vec![], vec![], low).is_err());
    }

    #[test]
    fn slash_identity_and_inversion_of_e4() {
        let f = catalog::eisenstein_e4(20).unwrap();
        let z = z1(0.1, 1.2);
        let id = slash(&f, SymplecticMatrix::identity(1));
        assert_eq!(id.eval(&z).unwrap(), f.eval(&z).unwrap());
        let inv = slash(&f, SymplecticMatrix::inversion(1));
        let at_i = inv.eval(&z1(0.0, 1.0)).unwrap().coords()[0];
        let f_i = f.eval(&z1(0.0, 1.0)).unwrap().coords()[0];
        assert!((at_i - f_i).norm() <= 1e-8);
    }

    #[test]
    fn tail_bound_examples() {
        let zero = catalog::zero_form(1, Rep::new(1, 0, 4).unwrap()).unwrap();
        assert_eq!(zero.tail_bound(&SymMatrix::identity(1)).unwrap(), 0.0);
        let f = catalog::eisenstein_e4(20).unwrap();
        let y = SymMatrix::identity(1);
        let b1 = f.tail_bound(&y).unwrap();
        let b2 = f.tail_bound(&y.scale(2.0)).unwrap();
        assert!(b2 <= b1 && b1 > 0.0);
        assert_eq!(f.tail_bound(&SymMatrix::diagonal(&[1e3])).unwrap(), 0.0);
        assert!(f.tail_bound(&SymMatrix::diagonal(&[10.0])).unwrap() < 1e-200);
        assert!(matches!(
            f.tail_bound(&SymMatrix::diagonal(&[-1.0])),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn truncation() {
        let f = catalog::eisenstein_e4(20).unwrap();
        let g = f.truncated(5.0).unwrap();
        assert_eq!(g.expansion().coefficients().len(), 6);
        assert!(f.truncated(30.0).is_err());
    }

    #[test]
    fn reduced_evaluation_matches_direct_where_series_is_accurate() {
        let f = catalog::eisenstein_e6(20).unwrap();
        let z = z1(0.37, 1.9);
        let moved = act(&SymplecticMatrix::inversion(1), &z).unwrap();
        // moved has y ~ 0.5; the reduced route recovers F(moved) from F(z)
        let direct = f.expansion().evaluate(&moved).unwrap();
        let reduced = f.evaluate_reduced(&moved).unwrap();
        assert!(direct.sub(&reduced).unwrap().norm() < 1e-9 * (1.0 + direct.norm()));
    }
}
