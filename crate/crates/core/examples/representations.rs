// rho = Sym^j ⊗ det^k on its monomial basis: the homomorphism property,
// unitarity on U(n) and the eigenvalue bounds for rho(Y).

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use siegel_growth::growth::random_unitary;
use siegel_growth::linalg::SymMatrix;
use siegel_growth::rep::Rep;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rep = Rep::new(2, 2, 1)?;
    println!("{rep:?}: dim {}, highest weight {:?}", rep.dim(), rep.highest_weight().as_slice());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random_unitary(&mut rng, 2);
    let m = SymMatrix::from_upper(2, &[2.0, 0.3, 1.0])?.to_complex();
    let lhs = rep.matrix(&(&m * &u))?;
    let rhs = rep.matrix(&m)? * rep.matrix(&u)?;
    println!("homomorphism defect {:.2e}", (lhs - rhs).norm());

    let v = rep.vector(vec![
        Complex64::new(1.0, -0.5),
        Complex64::new(0.2, 0.0),
        Complex64::new(-0.7, 1.1),
    ])?;
    println!("|rho(U) v| - |v| = {:.2e}", rep.apply(&u, &v)?.norm() - v.norm());

    let y = SymMatrix::from_upper(2, &[3.0, 0.5, 0.6])?;
    let mu = y.eigenvalues()?;
    let w = rep.apply(&y.to_complex(), &v)?;
    let hw = rep.highest_weight();
    println!(
        "{:.4} <= |rho(Y) v| = {:.4} <= {:.4}",
        hw.lower_factor(&mu) * v.norm(),
        w.norm(),
        hw.upper_factor(&mu) * v.norm()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
