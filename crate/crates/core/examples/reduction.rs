// Reduction of points of H_1 and H_2 into the region Im(Z) >= delta(n) I_n.

use num_complex::Complex64;
use siegel_growth::linalg::SymMatrix;
use siegel_growth::symplectic::{act, fundamental_delta, reduce_to_fundamental, SiegelPoint};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let z = SiegelPoint::scalar(Complex64::new(0.3, 0.2))?;
    let red = reduce_to_fundamental(&z)?;
    println!(
        "0.3+0.2i -> {:.6} after {} steps, gamma rows {:?}",
        red.point.to_complex()[0],
        red.steps,
        red.gamma.rows()
    );

    let z = SiegelPoint::new(
        SymMatrix::from_upper(2, &[0.41, -0.37, 0.12])?,
        SymMatrix::from_upper(2, &[0.03, 0.011, 0.02])?,
    )?;
    let red = reduce_to_fundamental(&z)?;
    let delta = fundamental_delta(2);
    println!("degree 2: {} steps, Im eigenvalues {:?}", red.steps, red.point.imag().eigenvalues()?);
    println!("in V_{delta}: {}", red.point.imag().in_v_delta(delta)?);
    println!("residual |gamma Z - Z_red| = {:.2e}", act(&red.gamma, &z)?.distance(&red.point));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
