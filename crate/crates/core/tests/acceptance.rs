//! Acceptance gate: runs the twelve end-to-end criteria at their stated
//! tolerances and prints one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use rand::Rng;
use siegel_growth::catalog::{e2_star, eisenstein_e4, eisenstein_e6, synthetic_degree_two};
use siegel_growth::forms::{check_invariance, phi, FormPackage, VectorForm};
use siegel_growth::growth::{
    adversarial_points, estimate_constant, lift, random_group_elements, ray_elements,
    verify_growth_bound, verify_moderate_growth, BoundKind, EvalMode, SweepConfig,
};
use siegel_growth::linalg::{MultiIndex, SymMatrix};
use siegel_growth::rep::Rep;
use siegel_growth::symplectic::{
    act, automorphy_factor, from_point, fundamental_delta, group_norm, reduce_to_fundamental,
    SiegelPoint, SymplecticMatrix,
};

type Outcome = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut Vec<Certified>) -> Outcome>;

const REPS: [(usize, u32, u32); 4] = [(1, 0, 4), (2, 2, 0), (2, 2, 1), (2, 0, 10)];

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: f64, detail: String) -> Outcome {
    let secs = elapsed.as_secs_f64();
    ensure(secs < limit, format!("{detail}; {secs:.2} s (limit {limit} s)"))
}

fn c1_linalg() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let (mut worst_eig, mut worst_sqrt) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let n = 1 + i % 4;
        let y = random_spd(&mut rng, n, 1e-2, 1e2);
        let scale = 1.0 + max_abs(y.as_matrix());
        let eig = y.eigen().map_err(|e| e.to_string())?;
        worst_eig = worst_eig.max(max_abs(&(eig.reconstruct() - y.as_matrix())) / scale);
        let s = y.sqrt_posdef().map_err(|e| e.to_string())?;
        if !s.is_positive_definite().map_err(|e| e.to_string())? {
            return Err(format!("sqrt of sample {i} is not positive definite"));
        }
        let sq = s.as_matrix() * s.as_matrix();
        worst_sqrt = worst_sqrt.max(max_abs(&(sq - y.as_matrix())) / scale);

        let sym = random_symmetric(&mut rng, n, 10.0);
        let eig = sym.eigen().map_err(|e| e.to_string())?;
        let scale = 1.0 + max_abs(sym.as_matrix());
        worst_eig = worst_eig.max(max_abs(&(eig.reconstruct() - sym.as_matrix())) / scale);
    }
    let detail = format!("max eigen residual {worst_eig:.1e}, max sqrt residual {worst_sqrt:.1e}");
    if worst_eig > 1e-10 || worst_sqrt > 1e-10 {
        return Err(detail);
    }
    within(start.elapsed(), 5.0, detail)
}

fn c2_bounded_inverse() -> Outcome {
    let mut rng = rng(2);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for delta in [0.1, 1.0, 3.0] {
        for i in 0..1000 {
            let n = 1 + i % 4;
            let y = random_in_v_delta(&mut rng, n, delta);
            let inv = y.inverse().map_err(|e| e.to_string())?;
            let entry = inv.max_abs_entry();
            worst = worst.max(entry * delta);
            if !y.in_v_delta(delta).map_err(|e| e.to_string())? || entry > 1.0 / delta + 1e-12 {
                failures += 1;
            }
            if delta <= 1.0 {
                let p = 3;
                for beta in MultiIndex::all_up_to(n, p) {
                    let m = inv.monomial(&beta).map_err(|e| e.to_string())?.abs();
                    if m > delta.powi(-(p as i32)) * (1.0 + 1e-12) {
                        failures += 1;
                    }
                }
            }
        }
    }
    ensure(failures == 0, format!("{failures} failures; max delta*|Y^-1|_max = {worst:.12}"))
}

fn c3_representations() -> Outcome {
    let mut rng = rng(3);
    let (mut hom, mut uni, mut adj) = (0.0f64, 0.0f64, 0.0f64);
    for (n, j, k) in REPS {
        let rep = Rep::new(n, j, k).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let m1 = random_complex_matrix(&mut rng, n);
            let m2 = random_complex_matrix(&mut rng, n);
            let v = random_rep_vector(&mut rng, &rep);
            let w = random_rep_vector(&mut rng, &rep);
            let lhs = rep.apply(&(&m1 * &m2), &v).map_err(|e| e.to_string())?;
            let rhs = rep
                .apply(&m1, &rep.apply(&m2, &v).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            hom = hom.max(lhs.sub(&rhs).unwrap().norm() / lhs.norm().max(rhs.norm()));

            let u = siegel_growth::growth::random_unitary(&mut rng, n);
            let uv = rep.apply(&u, &v).map_err(|e| e.to_string())?;
            uni = uni.max(rel_err(uv.norm(), v.norm()));

            let mv = rep.apply(&m1, &v).map_err(|e| e.to_string())?;
            let mstar_w = rep.apply(&m1.adjoint(), &w).map_err(|e| e.to_string())?;
            let a = mv.inner(&w).unwrap();
            let b = v.inner(&mstar_w).unwrap();
            let scale = (mv.norm() * w.norm()).max(v.norm() * mstar_w.norm());
            adj = adj.max((a - b).norm() / scale);
        }
    }
    ensure(
        hom <= 1e-9 && uni <= 1e-9 && adj <= 1e-9,
        format!("homomorphism {hom:.1e}, unitarity {uni:.1e}, adjoint {adj:.1e}"),
    )
}

fn c4_weight_inequality() -> Outcome {
    let mut rng = rng(4);
    let mut failures = 0;
    let mut scalar_err = 0.0f64;
    for (n, j, k) in REPS {
        let rep = Rep::new(n, j, k).map_err(|e| e.to_string())?;
        let hw = rep.highest_weight();
        for _ in 0..1000 {
            let y = random_spd(&mut rng, n, 0.1, 10.0);
            let v = random_rep_vector(&mut rng, &rep);
            let mu = y.eigenvalues().map_err(|e| e.to_string())?;
            let img = rep.apply(&y.to_complex(), &v).map_err(|e| e.to_string())?.norm();
            let slack = 1.0 + 1e-9;
            if hw.lower_factor(&mu) * v.norm() > img * slack || img > hw.upper_factor(&mu) * v.norm() * slack {
                failures += 1;
            }

            let c = rng.random_range(0.5..2.0);
            let cy = SymMatrix::scalar(n, c);
            let mu = cy.eigenvalues().map_err(|e| e.to_string())?;
            let img = rep.apply(&cy.to_complex(), &v).map_err(|e| e.to_string())?.norm();
            let total: u32 = hw.as_slice().iter().sum();
            let exact = c.powi(total as i32) * v.norm();
            scalar_err = scalar_err
                .max(rel_err(img, exact))
                .max(rel_err(hw.lower_factor(&mu) * v.norm(), exact))
                .max(rel_err(hw.upper_factor(&mu) * v.norm(), exact));
        }
    }
    ensure(
        failures == 0 && scalar_err <= 1e-12,
        format!("{failures} failures; scalar-Y equality error {scalar_err:.1e}"),
    )
}

fn c5_symplectic() -> Outcome {
    let mut rng = rng(5);
    let (mut cocycle, mut kinv) = (0.0f64, 0.0f64);
    let mut left_h = 0;
    for i in 0..1000 {
        let n = 1 + i % 2;
        let g1 = random_symplectic(&mut rng, n, 4);
        let g2 = random_symplectic(&mut rng, n, 4);
        let z = random_siegel_point(&mut rng, n);
        let g2z = act(&g2, &z);
        let g1z = act(&g1, &z);
        let (Ok(g2z), Ok(_)) = (g2z, g1z) else {
            left_h += 1;
            continue;
        };
        let lhs = automorphy_factor(&g1.mul(&g2), &z);
        let rhs = automorphy_factor(&g1, &g2z) * automorphy_factor(&g2, &z);
        cocycle = cocycle.max(max_abs_c(&(lhs - rhs)));

        let k = SymplecticMatrix::from_unitary(&siegel_growth::growth::random_unitary(&mut rng, n))
            .map_err(|e| e.to_string())?;
        kinv = kinv.max(rel_err(group_norm(&g1.mul(&k)), group_norm(&g1)));
    }
    ensure(
        cocycle <= 1e-9 && kinv <= 1e-9 && left_h == 0,
        format!("cocycle {cocycle:.1e}, K-invariance {kinv:.1e}, {left_h} images outside H_n"),
    )
}

fn c6_reduction() -> Outcome {
    let start = Instant::now();
    let mut residual = 0.0f64;
    let mut outside = 0;
    let mut max_steps = 0;
    for n in [1usize, 2] {
        let delta = if n == 1 { fundamental_delta(1) - 1e-9 } else { fundamental_delta(2) };
        let cfg = SweepConfig { seed: 6, ..SweepConfig::default() };
        let points = adversarial_points(n, &cfg).map_err(|e| e.to_string())?;
        for z in &points {
            let red = reduce_to_fundamental(z).map_err(|e| e.to_string())?;
            if !red.gamma.is_integral() {
                return Err("non-integral reducing matrix".into());
            }
            let image = act(&red.gamma, z).map_err(|e| e.to_string())?;
            residual = residual.max(image.distance(&red.point));
            max_steps = max_steps.max(red.steps);
            if !red.point.imag().in_v_delta(delta).map_err(|e| e.to_string())? {
                outside += 1;
            }
        }
    }
    let detail = format!(
        "2 x 10^4 points, max residual {residual:.1e}, {outside} outside V_delta, max {max_steps} steps"
    );
    if residual > 1e-9 || outside > 0 {
        return Err(detail);
    }
    within(start.elapsed(), 60.0, detail)
}

/// `x` on `cols` evenly spaced values in `[-1/2, 1/2]`, `y` on `rows`
/// log-spaced values in `[1, y_max]`.
fn grid(cols: usize, rows: usize, y_max: f64) -> Vec<SiegelPoint> {
    let mut out = Vec::with_capacity(cols * rows);
    for r in 0..rows {
        let y = y_max.powf(r as f64 / (rows - 1) as f64);
        for c in 0..cols {
            let x = -0.5 + c as f64 / (cols - 1) as f64;
            out.push(SiegelPoint::scalar(Complex64::new(x, y)).unwrap());
        }
    }
    out
}

fn sup_norm(form: &FormPackage, points: &[SiegelPoint]) -> Result<f64, String> {
    points.iter().try_fold(0.0f64, |m, z| {
        Ok(m.max(form.eval(z).map_err(|e| e.to_string())?.norm()))
    })
}

fn c7_koecher() -> Outcome {
    let coarse = grid(41, 25, 20.0);
    let fine = grid(161, 73, 20.0);
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, form) in [("E4", eisenstein_e4(20)), ("E2*", e2_star(20))] {
        let form = form.map_err(|e| e.to_string())?;
        let s0 = sup_norm(&form, &coarse)?;
        let s1 = sup_norm(&form, &fine)?;
        ok &= s0.is_finite() && s1 - s0 < 1e-6;
        parts.push(format!("{name} sup {s0:.9} -> {s1:.9}"));
    }
    let e4 = eisenstein_e4(20).map_err(|e| e.to_string())?;
    let mut rng = rng(7);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let y = if i == 0 { 10.0 } else { log_uniform(&mut rng, 10.0, 1e3) };
        let z = SiegelPoint::scalar(Complex64::new(rng.random_range(-0.5..=0.5), y)).unwrap();
        let dev = (e4.eval(&z).map_err(|e| e.to_string())?.coords()[0] - 1.0).norm();
        let certified = dev + e4.tail_bound(z.imag()).map_err(|e| e.to_string())?;
        worst = worst.max(certified);
    }
    ok &= worst <= 1e-8;
    parts.push(format!("max |E4 - 1| + tail for y >= 10: {worst:.1e}"));
    ensure(ok, parts.join("; "))
}

fn c8_invariance() -> Outcome {
    let e4 = eisenstein_e4(20).map_err(|e| e.to_string())?;
    let mut rng = rng(8);
    let y0 = 3f64.sqrt() / 2.0;
    let points: Vec<SiegelPoint> = (0..100)
        .map(|i| {
            let x = rng.random_range(-64i32..=64) as f64 / 128.0;
            let y = if i == 0 { y0 } else { y0 * log_uniform(&mut rng, 1.0, 4.0) };
            SiegelPoint::scalar(Complex64::new(x, y)).unwrap()
        })
        .collect();
    let report = check_invariance(&e4, &points).map_err(|e| e.to_string())?;
    let worst = |idx: usize| {
        report
            .records
            .iter()
            .filter(|r| r.gamma_index == idx)
            .fold(0.0f64, |m, r| m.max(r.deviation))
    };
    let (t, s) = (worst(0), worst(1));
    ensure(
        t == 0.0 && s <= 1e-6,
        format!("translation max deviation {t:e}, inversion max deviation {s:.1e}"),
    )
}

struct Certified {
    name: &'static str,
    constant: f64,
    points: Vec<SiegelPoint>,
    form: FormPackage,
}

fn forms_for_bounds() -> Result<Vec<(&'static str, FormPackage)>, String> {
    Ok(vec![
        ("E4", eisenstein_e4(20).map_err(|e| e.to_string())?),
        ("E6", eisenstein_e6(20).map_err(|e| e.to_string())?),
        ("E2*", e2_star(20).map_err(|e| e.to_string())?),
    ])
}

fn c9_theorem(certified: &mut Vec<Certified>) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (i, (name, form)) in forms_for_bounds()?.into_iter().enumerate() {
        let start = Instant::now();
        let seed = 900 + 2 * i as u64;
        let mut c_direct = 0.0;
        let mut fresh_direct = Vec::new();
        for mode in [EvalMode::Direct, EvalMode::Reduced] {
            let cfg = SweepConfig { seed, mode, ..SweepConfig::default() };
            let est = estimate_constant(&form, &cfg).map_err(|e| e.to_string())?;
            let fresh = adversarial_points(1, &SweepConfig { seed: seed + 1, ..cfg.clone() })
                .map_err(|e| e.to_string())?;
            let report = verify_growth_bound(&form, est.constant, BoundKind::Theorem, &fresh, &cfg)
                .map_err(|e| e.to_string())?;
            let control = verify_growth_bound(&form, 1e-6, BoundKind::Theorem, &fresh, &cfg)
                .map_err(|e| e.to_string())?;
            ok &= report.violations == 0 && control.violations > 0;
            parts.push(format!(
                "{name} {mode:?}: C_F {:.6}, {} violations, control {}",
                est.constant, report.violations, control.violations
            ));
            if mode == EvalMode::Direct {
                c_direct = est.constant;
                fresh_direct = fresh;
            }
        }
        let secs = start.elapsed().as_secs_f64();
        ok &= secs < 120.0;
        parts.push(format!("{name} {secs:.1} s"));
        certified.push(Certified { name, constant: c_direct, points: fresh_direct, form });
    }
    ensure(ok, parts.join("; "))
}

fn c10_corollary(certified: &[Certified]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = !certified.is_empty();
    for c in certified {
        let cfg = SweepConfig::default();
        let report = verify_growth_bound(&c.form, c.constant, BoundKind::Corollary, &c.points, &cfg)
            .map_err(|e| e.to_string())?;
        ok &= report.violations == 0;
        parts.push(format!("{} {} violations", c.name, report.violations));
    }
    let mut rng = rng(10);
    let mut failures = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=4usize);
        let lambda = rng.random_range(1..=6i32);
        let ys: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-3, 1e3)).collect();
        let lhs: f64 = ys.iter().map(|y| 1.0 + y.powi(lambda)).product();
        let rhs = (1.0 + ys.iter().sum::<f64>()).powi(n as i32 * lambda);
        if lhs > rhs * (1.0 + 1e-12) {
            failures += 1;
        }
    }
    ok &= failures == 0;
    parts.push(format!("elementary inequality {failures} failures over 10^4 tuples"));
    ensure(ok, parts.join("; "))
}

fn c11_moderate(certified: &[Certified]) -> Outcome {
    let e4 = certified.iter().find(|c| c.name == "E4").ok_or("criterion 9 did not certify E4")?;
    let cfg = SweepConfig { seed: 1100, ..SweepConfig::default() };
    let mut gs = random_group_elements(1, &cfg).map_err(|e| e.to_string())?;
    let ts: Vec<f64> = (1..=6).map(|e| 2f64.powi(e)).collect();
    gs.extend(ray_elements(1, &ts).map_err(|e| e.to_string())?);
    let w0 = e4.form.rep().highest_weight_vector();
    let report = verify_moderate_growth(&e4.form, &w0, 2.0, e4.constant, &gs, &cfg)
        .map_err(|e| e.to_string())?;
    ensure(
        report.violations == 0,
        format!(
            "{} violations over {} elements, C {:.6}, worst ratio {:.6}",
            report.violations, report.samples, report.constant, report.worst_ratio
        ),
    )
}

fn c12_lift() -> Outcome {
    let mut worst = 0.0f64;
    let forms = [
        eisenstein_e4(20).map_err(|e| e.to_string())?,
        synthetic_degree_two().map_err(|e| e.to_string())?,
    ];
    for form in &forms {
        let cfg = SweepConfig { samples: 500, seed: 12, ..SweepConfig::default() };
        for z in adversarial_points(form.degree(), &cfg).map_err(|e| e.to_string())? {
            let g = from_point(&z).map_err(|e| e.to_string())?;
            let l = lift(form, &g).map_err(|e| e.to_string())?.norm();
            let p = phi(form, &z).map_err(|e| e.to_string())?;
            worst = worst.max(rel_err(l, p));
        }
    }
    ensure(worst <= 1e-9, format!("10^3 points (n = 1, 2), max relative error {worst:.1e}"))
}

fn main() {
    let mut certified = Vec::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("linear-algebra kernel", Box::new(|_| c1_linalg())),
        ("bounded inverse on V_delta", Box::new(|_| c2_bounded_inverse())),
        ("representation identities", Box::new(|_| c3_representations())),
        ("weight inequality", Box::new(|_| c4_weight_inequality())),
        ("symplectic identities", Box::new(|_| c5_symplectic())),
        ("reduction", Box::new(|_| c6_reduction())),
        ("Koecher boundedness", Box::new(|_| c7_koecher())),
        ("E4 invariance", Box::new(|_| c8_invariance())),
        ("eigenvalue growth bound", Box::new(c9_theorem)),
        ("trace/determinant bound", Box::new(|c| c10_corollary(c))),
        ("moderate growth", Box::new(|c| c11_moderate(c))),
        ("lift consistency", Box::new(|_| c12_lift())),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut certified);
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] criterion {:>2}: {title} ({secs:.2} s): {detail}", i + 1);
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
