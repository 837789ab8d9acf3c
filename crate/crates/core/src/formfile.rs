//! JSON form files.
//!
//! ```json
//! {
//!   "n": 1, "p": 0, "level": 1, "T_max": 20,
//!   "rep": {"j": 0, "k": 4},
//!   "growth": {"A": 300, "kappa": 3},
//!   "gamma_test_set": [[[1, 1], [0, 1]], [[0, -1], [1, 0]]],
//!   "coefficients": [{"beta": {}, "S": [[1]], "value": [[240, 0]]}]
//! }
//! ```
//!
//! `S` holds the integer matrix `N S`, `beta` maps one-based `"i,j"` keys
//! (`i <= j`) to exponents, and `value` lists `[re, im]` pairs in the
//! monomial basis of the representation. `coset_reps` is optional.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{CoefficientSpec, FormPackage, FourierExpansion, GrowthParams};
use crate::linalg::MultiIndex;
use crate::rep::Rep;
use crate::symplectic::SymplecticMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub j: u32,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSpec {
    #[serde(rename = "A")]
    pub a: f64,
    pub kappa: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRecord {
    #[serde(default)]
    pub beta: BTreeMap<String, u32>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<i64>>,
    pub value: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub p: u32,
    pub level: u64,
    #[serde(rename = "T_max")]
    pub t_max: f64,
    pub rep: RepSpec,
    pub growth: GrowthSpec,
    #[serde(default)]
    pub gamma_test_set: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coset_reps: Vec<Vec<Vec<i64>>>,
    pub coefficients: Vec<CoefficientRecord>,
}

fn parse_beta(n: usize, map: &BTreeMap<String, u32>) -> Result<MultiIndex> {
    let mut pairs = Vec::with_capacity(map.len());
    for (key, &b) in map {
        let parsed: Option<(usize, usize)> = key.split_once(',').and_then(|(i, j)| {
            Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
        });
        match parsed {
            Some((i, j)) if i >= 1 && i <= j && j <= n => pairs.push(((i - 1, j - 1), b)),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "beta key {key:?} is not \"i,j\" with 1 <= i <= j <= {n}"
                )))
            }
        }
    }
    MultiIndex::from_pairs(n, &pairs)
}

fn beta_to_map(beta: &MultiIndex) -> BTreeMap<String, u32> {
    beta.entries()
        .filter(|&(_, _, b)| b > 0)
        .map(|(i, j, b)| (format!("{},{}", i + 1, j + 1), b))
        .collect()
}

fn integer_matrix(rows: &[Vec<i64>]) -> Result<SymplecticMatrix> {
    let size = rows.len();
    if rows.iter().any(|r| r.len() != size) {
        return Err(Error::InvalidInput("matrix rows of unequal length".into()));
    }
    SymplecticMatrix::new(DMatrix::from_fn(size, size, |i, j| rows[i][j] as f64))
}

fn integer_rows(g: &SymplecticMatrix) -> Vec<Vec<i64>> {
    g.rows()
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.round() as i64).collect())
        .collect()
}

impl FormFile {
    pub fn to_package(&self) -> Result<FormPackage> {
        let wrap = |ctx: String| move |e: Error| Error::FormFile(format!("{ctx}: {e}"));
        let rep = Rep::new(self.n, self.rep.j, self.rep.k).map_err(wrap("rep".into()))?;
        let mut specs = Vec::with_capacity(self.coefficients.len());
        for (idx, rec) in self.coefficients.iter().enumerate() {
            let ctx = format!("coefficient #{idx}");
            let beta = parse_beta(self.n, &rec.beta).map_err(wrap(ctx.clone()))?;
            let value = rep
                .vector(rec.value.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .map_err(wrap(ctx))?;
            specs.push(CoefficientSpec { beta, scaled_s: rec.s.clone(), value });
        }
        let exp = FourierExpansion::new(self.n, self.p, self.level, self.t_max, rep, specs)
            .map_err(|e| Error::FormFile(e.to_string()))?;
        let gammas = self
            .gamma_test_set
            .iter()
            .enumerate()
            .map(|(i, g)| integer_matrix(g).map_err(wrap(format!("gamma_test_set[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        let cosets = self
            .coset_reps
            .iter()
            .enumerate()
            .map(|(i, g)| integer_matrix(g).map_err(wrap(format!("coset_reps[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        FormPackage::new(
            exp,
            gammas,
            cosets,
            GrowthParams { a: self.growth.a, kappa: self.growth.kappa },
        )
        .map_err(|e| Error::FormFile(e.to_string()))
    }

    pub fn from_package(form: &FormPackage, name: Option<&str>) -> Self {
        let exp = form.expansion();
        let rep = exp.representation();
        let coset_reps = if form.is_full_level() {
            vec![]
        } else {
            form.coset_reps().iter().map(integer_rows).collect()
        };
        FormFile {
            name: name.map(str::to_owned),
            n: exp.degree(),
            p: exp.p(),
            level: exp.level(),
            t_max: exp.t_max(),
            rep: RepSpec { j: rep.sym_power(), k: rep.det_power() },
            growth: GrowthSpec { a: form.growth().a, kappa: form.growth().kappa },
            gamma_test_set: form.gamma_test_set().iter().map(integer_rows).collect(),
            coset_reps,
            coefficients: exp
                .coefficients()
                .iter()
                .map(|c| CoefficientRecord {
                    beta: beta_to_map(c.beta()),
                    s: c.scaled_s().to_vec(),
                    value: c.value().coords().iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
    }
}

pub fn parse_form(json: &str) -> Result<FormPackage> {
    let file: FormFile =
        serde_json::from_str(json).map_err(|e| Error::FormFile(format!("malformed JSON: {e}")))?;
    file.to_package()
}

pub fn load_form(path: &Path) -> Result<FormPackage> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::FormFile(format!("{}: {e}", path.display())))?;
    parse_form(&text)
}

pub fn form_to_json(form: &FormPackage, name: Option<&str>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&FormFile::from_package(form, name))?)
}

pub fn save_form(form: &FormPackage, name: Option<&str>, path: &Path) -> Result<()> {
    std::fs::write(path, form_to_json(form, name)? + "\n")?;
    Ok(())
}
