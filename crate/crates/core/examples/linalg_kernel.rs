// Symmetric eigen-decomposition, positive square roots and the entry bound
// for inverses of matrices in V_delta.

use siegel_growth::linalg::{MultiIndex, SymMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let y = SymMatrix::from_rows(&[
        vec![4.0, 1.0, 0.5],
        vec![1.0, 3.0, -0.2],
        vec![0.5, -0.2, 2.0],
    ])?;
    let eig = y.eigen()?;
    println!("eigenvalues        {:?}", eig.values);
    let residual = (eig.reconstruct() - y.as_matrix()).norm() / y.as_matrix().norm();
    println!("reconstruction     {residual:.2e}");

    let root = y.sqrt_posdef()?;
    let square = root.as_matrix() * root.as_matrix();
    println!("sqrt residual      {:.2e}", (square - y.as_matrix()).norm());

    // Y >= delta I forces every entry of Y^{-1} below 1/delta.
    let delta = y.min_eigenvalue()?;
    let inv = y.inverse()?;
    println!("max |Y^-1 entry|   {:.6} <= 1/delta = {:.6}", inv.max_abs_entry(), 1.0 / delta);

    let beta = MultiIndex::from_pairs(3, &[((0, 0), 1), ((1, 2), 2)])?;
    println!("[Y^-1]^beta        {:.6e} (degree {})", inv.monomial(&beta)?, beta.degree());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
