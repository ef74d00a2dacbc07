//! Text file formats for states, density matrices and witnesses.
//!
//! Every object is a JSON document with named fields:
//!
//! ```text
//! state:    {"dims": [2, 2], "amps_re": [...], "amps_im": [...]}
//! density:  {"dims": [2, 2], "mat_re": [...], "mat_im": [...]}
//! witness:  {"dims": [2, 2], "mat_re": [...], "mat_im": [...],
//!            "kind": "pure_optimal", "lambda_param": 0.5}
//! ```
//!
//! Amplitudes use the crate's subsystem ordering; matrices are flattened row-major.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{CMatrix, CVector};
use crate::states::{DensityMatrix, StateVector};
use crate::witness::{matrix_entries, WitnessKind, WitnessOperator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amps_re: Vec<f64>,
    pub amps_im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub dims: Vec<usize>,
    pub mat_re: Vec<f64>,
    pub mat_im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub dims: Vec<usize>,
    pub mat_re: Vec<f64>,
    pub mat_im: Vec<f64>,
    pub kind: String,
    pub lambda_param: f64,
}

fn complex_entries(re: &[f64], im: &[f64]) -> Result<Vec<Complex64>> {
    if re.len() != im.len() {
        return Err(invalid(format!(
            "real and imaginary parts have different lengths ({} vs {})",
            re.len(),
            im.len()
        )));
    }
    Ok(re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect())
}

fn square_matrix(re: &[f64], im: &[f64]) -> Result<CMatrix> {
    let entries = complex_entries(re, im)?;
    let d = (entries.len() as f64).sqrt().round() as usize;
    if d * d != entries.len() {
        return Err(invalid(format!("{} matrix entries do not form a square", entries.len())));
    }
    Ok(CMatrix::from_row_iterator(d, d, entries))
}

impl From<&StateVector> for StateFile {
    fn from(psi: &StateVector) -> Self {
        Self {
            dims: psi.dims().to_vec(),
            amps_re: psi.amps().iter().map(|z| z.re).collect(),
            amps_im: psi.amps().iter().map(|z| z.im).collect(),
        }
    }
}

impl StateFile {
    /// Validates and converts; the state must already be normalized.
    pub fn into_state(self) -> Result<StateVector> {
        let amps = complex_entries(&self.amps_re, &self.amps_im)?;
        StateVector::new(self.dims, CVector::from_vec(amps))
    }
}

impl From<&DensityMatrix> for DensityFile {
    fn from(rho: &DensityMatrix) -> Self {
        let (mat_re, mat_im) = matrix_entries(rho.matrix());
        Self {
            dims: rho.dims().to_vec(),
            mat_re,
            mat_im,
        }
    }
}

impl DensityFile {
    pub fn into_density(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.dims, square_matrix(&self.mat_re, &self.mat_im)?)
    }
}

impl From<&WitnessOperator> for WitnessFile {
    fn from(w: &WitnessOperator) -> Self {
        let (mat_re, mat_im) = matrix_entries(w.matrix());
        Self {
            dims: w.dims().to_vec(),
            mat_re,
            mat_im,
            kind: w.kind().to_string(),
            lambda_param: w.lambda_param(),
        }
    }
}

impl WitnessFile {
    /// Operator and metadata; the source state is not stored in the file.
    pub fn into_parts(self) -> Result<(Vec<usize>, CMatrix, WitnessKind, f64)> {
        let kind = self.kind.parse()?;
        let m = square_matrix(&self.mat_re, &self.mat_im)?;
        let total: usize = self.dims.iter().product();
        if m.nrows() != total {
            return Err(invalid(format!("witness matrix size {} does not match dims {:?}", m.nrows(), self.dims)));
        }
        Ok((self.dims, m, kind, self.lambda_param))
    }
}

pub fn state_to_json(psi: &StateVector) -> String {
    serde_json::to_string_pretty(&StateFile::from(psi)).expect("state serializes")
}

pub fn state_from_json(text: &str) -> Result<StateVector> {
    serde_json::from_str::<StateFile>(text)?.into_state()
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&DensityFile::from(rho)).expect("density serializes")
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<DensityFile>(text)?.into_density()
}

pub fn witness_to_json(w: &WitnessOperator) -> String {
    serde_json::to_string_pretty(&WitnessFile::from(w)).expect("witness serializes")
}

pub fn read_state(path: impl AsRef<Path>) -> Result<StateVector> {
    state_from_json(&fs::read_to_string(path)?)
}

pub fn write_state(path: impl AsRef<Path>, psi: &StateVector) -> Result<()> {
    fs::write(path, state_to_json(psi) + "\n")?;
    Ok(())
}

pub fn read_density(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    density_from_json(&fs::read_to_string(path)?)
}

pub fn write_density(path: impl AsRef<Path>, rho: &DensityMatrix) -> Result<()> {
    fs::write(path, density_to_json(rho) + "\n")?;
    Ok(())
}

pub fn write_witness(path: impl AsRef<Path>, w: &WitnessOperator) -> Result<()> {
    fs::write(path, witness_to_json(w) + "\n")?;
    Ok(())
}
