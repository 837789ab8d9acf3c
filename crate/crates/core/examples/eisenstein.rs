// Truncated E4 and E2*: evaluation, the transformation law under SL_2(Z)
// and boundedness high in the cusp.

use num_complex::Complex64;
use siegel_growth::catalog::{e2_star, eisenstein_e4};
use siegel_growth::forms::{check_invariance, phi, slash, VectorForm};
use siegel_growth::linalg::SymMatrix;
use siegel_growth::symplectic::{SiegelPoint, SymplecticMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e4 = eisenstein_e4(20)?;
    let i = SiegelPoint::scalar(Complex64::new(0.0, 1.0))?;
    let value = e4.eval(&i)?.coords()[0];
    let gamma_quarter = 3.625_609_908_221_908_f64;
    let closed = 3.0 * gamma_quarter.powi(8) / (2.0 * std::f64::consts::PI).powi(6);
    println!("E4(i) = {:.15} (closed form {closed:.15})", value.re);

    let z = SiegelPoint::scalar(Complex64::new(0.1, 1.2))?;
    let slashed = slash(&e4, SymplecticMatrix::inversion(1));
    let diff = slashed.eval(&z)?.sub(&e4.eval(&z)?)?.norm();
    println!("|E4|S - E4| at 0.1+1.2i = {diff:.2e}, tail bound {:.2e}", e4.tail_bound(z.imag())?);

    let samples: Vec<SiegelPoint> = (0..20)
        .map(|k| {
            let x = -0.5 + k as f64 / 19.0;
            SiegelPoint::new(SymMatrix::scalar(1, x), SymMatrix::scalar(1, 0.9 + 0.05 * k as f64))
        })
        .collect::<Result<_, _>>()?;
    let report = check_invariance(&e4, &samples)?;
    println!("invariance: max deviation {:.2e}, failures {}", report.max_deviation, report.failures);

    let e2 = e2_star(20)?;
    let high = SiegelPoint::scalar(Complex64::new(0.5, 12.0))?;
    println!("phi(E2*, 0.5+12i) = {:.6}", phi(&e2, &high)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
