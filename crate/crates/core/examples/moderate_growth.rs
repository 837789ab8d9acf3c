// The lift g -> rho(J(g, iI))^{-1} F(g iI) and its moderate growth
// |<lift(g), w0>| <= C Tr(g^T g)^r.

use num_complex::Complex64;
use siegel_growth::catalog::eisenstein_e4;
use siegel_growth::forms::phi;
use siegel_growth::growth::{
    estimate_constant, lift, random_group_elements, ray_elements, verify_moderate_growth,
    SweepConfig,
};
use siegel_growth::symplectic::{from_point, SiegelPoint};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e4 = eisenstein_e4(20)?;
    let z = SiegelPoint::scalar(Complex64::new(-0.2, 0.7))?;
    let g = from_point(&z)?;
    println!("|lift(from_point(Z))| = {:.12}", lift(&e4, &g)?.norm());
    println!("phi(Z)                = {:.12}", phi(&e4, &z)?);

    let cfg = SweepConfig { samples: 2000, seed: 5, ..SweepConfig::default() };
    let c_form = estimate_constant(&e4, &cfg)?.constant;
    let mut gs = random_group_elements(1, &SweepConfig { seed: 6, ..cfg.clone() })?;
    gs.extend(ray_elements(1, &[2.0, 4.0, 8.0, 16.0, 32.0, 64.0])?);
    let w0 = e4.expansion().representation().highest_weight_vector();
    let report = verify_moderate_growth(&e4, &w0, 2.0, c_form, &gs, &cfg)?;
    println!(
        "r = 2: C = {:.4}, {} violations over {} elements, worst ratio {:.6}",
        report.constant, report.violations, report.samples, report.worst_ratio
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
