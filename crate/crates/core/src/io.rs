//! JSON formats for density matrices and bound reports.
//!
//! A density matrix is stored as
//! `{"dims": [2, K], "re": [[...], ...], "im": [[...], ...]}`
//! with `re` and `im` the row-major real and imaginary parts.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, Exactness, PptVerdict, ReportDiagnostics};
use crate::error::Error;
use crate::linalg::{BipartiteDims, ComplexMatrix};
use crate::scalar::Real;
use crate::states::DensityMatrix;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFile {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityFile {
    pub fn from_density<T: Real>(rho: &DensityMatrix<T>) -> Self {
        let m = rho.matrix();
        let dims = rho.dims();
        let rows = |f: fn(&Complex<T>) -> T| -> Vec<Vec<f64>> {
            (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| f(&m[(r, c)]).as_f64()).collect())
                .collect()
        };
        DensityFile {
            dims: [dims.n(), dims.k()],
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    /// Validates shape and the density-matrix conditions.
    pub fn to_density<T: Real>(&self) -> Result<DensityMatrix<T>, Error> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1])?;
        let d = dims.total();
        let shape_ok = self.re.len() == d
            && self.im.len() == d
            && self.re.iter().chain(&self.im).all(|row| row.len() == d);
        if !shape_ok {
            return Err(Error::DimensionMismatch(format!(
                "expected {d}x{d} real and imaginary parts for dims {dims}"
            )));
        }
        let data = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&a, &b)| Complex::new(T::lit(a), T::lit(b)))
            .collect();
        DensityMatrix::new(ComplexMatrix::from_row_major(d, d, data)?, dims)
    }
}

pub fn parse_density<T: Real>(json: &str) -> Result<DensityMatrix<T>, IoError> {
    let file: DensityFile = serde_json::from_str(json)?;
    Ok(file.to_density()?)
}

pub fn load_density<T: Real>(path: &Path) -> Result<DensityMatrix<T>, IoError> {
    parse_density(&fs::read_to_string(path)?)
}

pub fn density_to_json<T: Real>(rho: &DensityMatrix<T>) -> String {
    serde_json::to_string_pretty(&DensityFile::from_density(rho)).expect("plain data serializes")
}

pub fn save_density<T: Real>(rho: &DensityMatrix<T>, path: &Path) -> Result<(), IoError> {
    fs::write(path, density_to_json(rho))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstateJson {
    pub pair: [usize; 2],
    pub concurrence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundJson {
    pub value: f64,
    pub substates: Vec<SubstateJson>,
    pub basis_re: Vec<Vec<f64>>,
    pub basis_im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionElementJson {
    pub weight: f64,
    pub concurrence: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundJson {
    pub value: f64,
    pub length: usize,
    pub rank: usize,
    pub decomposition: Vec<DecompositionElementJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptJson {
    pub min_eigenvalue: f64,
    pub verdict: PptVerdict,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExactnessJson {
    Certified {
        value: f64,
        pair: [usize; 2],
        remainder_min_eigenvalue: f64,
        remainder_pt_min_eigenvalue: f64,
        witness_re: Vec<f64>,
        witness_im: Vec<f64>,
    },
    NotApplicable {
        entangled_substates: Option<usize>,
    },
    Undecided {
        best_margin: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub dims: [usize; 2],
    pub lb_standard: LowerBoundJson,
    pub lb_optimized: LowerBoundJson,
    pub ub: UpperBoundJson,
    pub gap: f64,
    pub numerically_coincident: bool,
    pub eof_lb: f64,
    pub ppt: PptJson,
    pub exactness: ExactnessJson,
    pub diagnostics: ReportDiagnostics,
}

fn split<T: Real>(z: &[Complex<T>]) -> (Vec<f64>, Vec<f64>) {
    z.iter().map(|c| (c.re.as_f64(), c.im.as_f64())).unzip()
}

fn lower_json<T: Real>(lb: &crate::bounds::LowerBound<T>) -> LowerBoundJson {
    let u = lb.basis();
    let (basis_re, basis_im) = (0..u.rows())
        .map(|r| split(&(0..u.cols()).map(|c| u[(r, c)]).collect::<Vec<_>>()))
        .unzip();
    LowerBoundJson {
        value: lb.value.as_f64(),
        substates: lb
            .substates
            .substates
            .iter()
            .map(|s| SubstateJson {
                pair: [s.pair.0, s.pair.1],
                concurrence: s.concurrence.as_f64(),
            })
            .collect(),
        basis_re,
        basis_im,
    }
}

impl ReportJson {
    pub fn from_report<T: Real>(dims: BipartiteDims, report: &BoundReport<T>) -> Self {
        let ub = &report.ub;
        let decomposition = ub
            .decomposition
            .elements()
            .iter()
            .map(|(w, psi)| {
                let (re, im) = split(psi.amplitudes());
                DecompositionElementJson {
                    weight: w.as_f64(),
                    concurrence: crate::concurrence::pure_concurrence(psi).as_f64(),
                    re,
                    im,
                }
            })
            .collect();
        let exactness = match &report.exactness {
            Exactness::Certified(c) => {
                let (witness_re, witness_im) = split(c.witness.amplitudes());
                ExactnessJson::Certified {
                    value: c.value.as_f64(),
                    pair: [c.pair.0, c.pair.1],
                    remainder_min_eigenvalue: c.remainder_min_eigenvalue.as_f64(),
                    remainder_pt_min_eigenvalue: c.remainder_pt_min_eigenvalue.as_f64(),
                    witness_re,
                    witness_im,
                }
            }
            Exactness::NotApplicable {
                entangled_substates,
            } => ExactnessJson::NotApplicable {
                entangled_substates: *entangled_substates,
            },
            Exactness::Undecided { best_margin } => ExactnessJson::Undecided {
                best_margin: best_margin.as_f64(),
            },
        };
        ReportJson {
            dims: [dims.n(), dims.k()],
            lb_standard: lower_json(&report.lb_standard),
            lb_optimized: lower_json(&report.lb_optimized),
            ub: UpperBoundJson {
                value: ub.value.as_f64(),
                length: ub.length,
                rank: ub.rank,
                decomposition,
            },
            gap: report.gap().as_f64(),
            numerically_coincident: report.numerically_coincident(),
            eof_lb: report.eof_lb.as_f64(),
            ppt: PptJson {
                min_eigenvalue: report.ppt.min_eigenvalue.as_f64(),
                verdict: report.ppt.verdict,
                label: report.ppt.verdict.label().to_string(),
            },
            exactness,
            diagnostics: report.diagnostics.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::random_induced_state;

    #[test]
    fn density_round_trip() {
        let dims = BipartiteDims::qubit_by(3).unwrap();
        let rho = random_induced_state::<f64>(4, dims, 5).unwrap();
        let back: DensityMatrix<f64> = parse_density(&density_to_json(&rho)).unwrap();
        assert_eq!(back.dims(), dims);
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("concurrence-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rho.json");
        let rho = DensityMatrix::<f64>::maximally_mixed(BipartiteDims::qubit_by(2).unwrap());
        save_density(&rho, &path).unwrap();
        let back: DensityMatrix<f64> = load_density(&path).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn rejects_bad_inputs() {
        let wrong_shape = r#"{"dims":[2,2],"re":[[1,0],[0,0]],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(
            parse_density::<f64>(wrong_shape),
            Err(IoError::Invalid(Error::DimensionMismatch(_)))
        ));
        let not_psd = r#"{"dims":[2,2],
            "re":[[1,0,0,0],[0,1,0,0],[0,0,-0.5,0],[0,0,0,-0.5]],
            "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
        assert!(matches!(
            parse_density::<f64>(not_psd),
            Err(IoError::Invalid(Error::NotPsd { .. }))
        ));
        assert!(matches!(parse_density::<f64>("{"), Err(IoError::Json(_))));
    }
}
