// Writing the bundled forms as JSON form files and loading them back.

use siegel_growth::catalog;
use siegel_growth::formfile::{load_form, save_form};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("siegel-growth-forms-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    for (name, form) in catalog::bundled()? {
        let path = dir.join(format!("{name}.json"));
        save_form(&form, Some(name), &path)?;
        let back = load_form(&path)?;
        let exp = back.expansion();
        println!(
            "{name:>13}: n={} p={} level={} T_max={} {} coefficients, equal after reload: {}",
            exp.degree(),
            exp.p(),
            exp.level(),
            exp.t_max(),
            exp.coefficients().len(),
            back == form
        );
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
