// Estimating C_F on the fundamental domain and verifying
// |rho(Y^{1/2}) F(Z)| <= C_F prod (mu^{l/2} + mu^{-l/2}) on fresh samples.

use siegel_growth::catalog::eisenstein_e6;
use siegel_growth::growth::{
    adversarial_points, estimate_constant, verify_growth_bound, BoundKind, SweepConfig,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e6 = eisenstein_e6(20)?;
    let cfg = SweepConfig { samples: 2000, seed: 11, ..SweepConfig::default() };
    let est = estimate_constant(&e6, &cfg)?;
    println!("sup ratio {:.6}, C_F = {:.6}", est.raw_sup, est.constant);

    let fresh = adversarial_points(1, &SweepConfig { seed: 12, ..cfg.clone() })?;
    for kind in [BoundKind::Theorem, BoundKind::Corollary] {
        let report = verify_growth_bound(&e6, est.constant, kind, &fresh, &cfg)?;
        println!(
            "{kind:?}: {} violations over {} samples, worst ratio {:.6}",
            report.violations, report.samples, report.worst_ratio
        );
    }
    let control = verify_growth_bound(&e6, 1e-6, BoundKind::Theorem, &fresh, &cfg)?;
    println!("C = 1e-6: {} violations", control.violations);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
