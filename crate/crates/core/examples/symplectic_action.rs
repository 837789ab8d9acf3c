// The action Z -> (AZ + B)(CZ + D)^{-1}, the automorphy cocycle and the
// section from_point(Z) carrying i I_n to Z.

use num_complex::Complex64;
use siegel_growth::linalg::SymMatrix;
use siegel_growth::symplectic::{
    act, automorphy_factor, from_point, group_norm, SiegelPoint, SymplecticMatrix,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let z = SiegelPoint::new(
        SymMatrix::from_upper(2, &[0.3, -0.1, 0.2])?,
        SymMatrix::from_upper(2, &[1.5, 0.4, 0.9])?,
    )?;
    let g = SymplecticMatrix::translation(&SymMatrix::from_upper(2, &[1.0, 0.0, -1.0])?)
        .mul(&SymplecticMatrix::inversion(2));
    let h = SymplecticMatrix::embedded_inversion(2, 1)
        .mul(&SymplecticMatrix::dilation(&SymMatrix::diagonal(&[2.0, 0.5]))?);

    let gz = act(&g, &z)?;
    println!("Im(gZ) eigenvalues {:?}", gz.imag().eigenvalues()?);

    let lhs = automorphy_factor(&g.mul(&h), &z);
    let rhs = automorphy_factor(&g, &act(&h, &z)?) * automorphy_factor(&h, &z);
    println!("cocycle defect     {:.2e}", (lhs - rhs).norm());

    let section = from_point(&z)?;
    let back = act(&section, &SiegelPoint::i_identity(2))?;
    println!("from_point(Z) iI   distance {:.2e}", back.distance(&z));
    println!("group norm         {:.6}", group_norm(&section));

    let w = SiegelPoint::scalar(Complex64::new(0.25, 2.0))?;
    println!("S acting on 0.25+2i = {:?}", act(&SymplecticMatrix::inversion(1), &w)?.to_complex()[0]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
