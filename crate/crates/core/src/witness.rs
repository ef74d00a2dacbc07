//! Entanglement witnesses built from overlap estimates.
//!
//! Two constructions are supported:
//!
//! - `W = Λ² I − |ψ⟩⟨ψ|` for a pure target, with `⟨ψ|W|ψ⟩ = −E_GME`;
//! - `W′ = I − ρ/λ_min` for a mixed target, where `λ_min = max_{σ∈S_k} Tr(ρσ)`,
//!   with `−Tr(W′ρ) = Tr(ρ²)/λ_min − 1`.
//!
//! Both satisfy `W ≤ I`, so `−Tr(Wρ)` is a lower bound on the generalized
//! robustness as long as `W` is nonnegative on every product state.
//! [`certify_witness`] checks that last condition by minimizing over product
//! states with the overlap ascent. The minimization is non-convex, so a
//! passing certificate is heuristic.

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::linalg::{eigh, hermiticity_error, CMatrix};
use crate::overlap::{max_product_expectation, OptConfig};
use crate::states::{DensityMatrix, PartitionSpec, ProductState, StateVector};

/// Largest admissible eigenvalue above 1 for membership in `{M ≤ I}`.
pub const UNIT_BOUND_TOL: f64 = 1e-10;
/// Product-state expectations below `-VIOLATION_TOL` count as violations.
pub const VIOLATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    PureOptimal,
    Lemma1Normalized,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::PureOptimal => "pure_optimal",
            WitnessKind::Lemma1Normalized => "lemma1_normalized",
        })
    }
}

impl std::str::FromStr for WitnessKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure_optimal" => Ok(WitnessKind::PureOptimal),
            "lemma1_normalized" => Ok(WitnessKind::Lemma1Normalized),
            other => Err(invalid(format!("unknown witness kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum WitnessSource {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

#[derive(Debug, Clone)]
pub struct WitnessOperator {
    matrix: CMatrix,
    kind: WitnessKind,
    lambda_param: f64,
    source: WitnessSource,
    partition: PartitionSpec,
}

impl WitnessOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    /// `Λ²` for the pure construction, `λ_min` for the mixed one.
    pub fn lambda_param(&self) -> f64 {
        self.lambda_param
    }

    pub fn source(&self) -> &WitnessSource {
        &self.source
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }

    pub fn dims(&self) -> &[usize] {
        match &self.source {
            WitnessSource::Pure(psi) => psi.dims(),
            WitnessSource::Mixed(rho) => rho.dims(),
        }
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(eigh(&self.matrix)?.max_eigenvalue())
    }

    /// `⟨ψ|W|ψ⟩`.
    pub fn expectation_pure(&self, psi: &StateVector) -> f64 {
        psi.amps().dotc(&(&self.matrix * psi.amps())).re
    }

    /// `Tr(Wρ)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        rho.expectation(&self.matrix).re
    }

    /// `−Tr(Wρ)`; a lower bound on `R_g(ρ)` when the witness is certified.
    pub fn robustness_lower_bound(&self, rho: &DensityMatrix) -> f64 {
        -self.expectation(rho)
    }

    fn check(self) -> Result<Self> {
        let herm = hermiticity_error(&self.matrix);
        if herm > 1e-12 {
            return Err(invalid(format!("witness is not Hermitian (deviation {herm:e})")));
        }
        let top = self.max_eigenvalue()?;
        if top > 1.0 + UNIT_BOUND_TOL {
            return Err(invalid(format!("witness has eigenvalue {top} above 1")));
        }
        Ok(self)
    }
}

fn check_partition(dims: &[usize], partition: &PartitionSpec) -> Result<()> {
    if partition.n() != dims.len() {
        return Err(invalid(format!(
            "partition over {} subsystems does not match dims {:?}",
            partition.n(),
            dims
        )));
    }
    Ok(())
}

/// `W = Λ² I − |ψ⟩⟨ψ|`.
pub fn build_pure_witness(psi: &StateVector, lambda_sq: f64, partition: &PartitionSpec) -> Result<WitnessOperator> {
    if !(lambda_sq > 0.0 && lambda_sq <= 1.0) {
        return Err(invalid(format!("squared overlap must lie in (0, 1], got {lambda_sq}")));
    }
    check_partition(psi.dims(), partition)?;
    let d = psi.dim();
    let matrix = CMatrix::identity(d, d).scale(lambda_sq) - psi.amps() * psi.amps().adjoint();
    WitnessOperator {
        matrix,
        kind: WitnessKind::PureOptimal,
        lambda_param: lambda_sq,
        source: WitnessSource::Pure(psi.clone()),
        partition: partition.clone(),
    }
    .check()
}

/// `W′ = I − ρ/λ_min`.
pub fn build_lemma1_witness(
    rho: &DensityMatrix,
    lambda_min: f64,
    partition: &PartitionSpec,
) -> Result<WitnessOperator> {
    if !(lambda_min > 0.0 && lambda_min.is_finite()) {
        return Err(invalid(format!("lambda_min must be positive, got {lambda_min}")));
    }
    check_partition(rho.dims(), partition)?;
    let d = rho.dim();
    let matrix = CMatrix::identity(d, d) - rho.matrix().unscale(lambda_min);
    WitnessOperator {
        matrix,
        kind: WitnessKind::Lemma1Normalized,
        lambda_param: lambda_min,
        source: WitnessSource::Mixed(rho.clone()),
        partition: partition.clone(),
    }
    .check()
}

#[derive(Debug, Clone)]
pub struct Certification {
    /// Smallest `⟨φ|W|φ⟩` found over product states.
    pub min_product_expectation: f64,
    /// Product state with `⟨φ|W|φ⟩ < −1e-8`, if one was found. Its presence
    /// means the witness's `lambda_param` underestimates the true overlap.
    pub violator: Option<ProductState>,
    pub converged: bool,
}

impl Certification {
    pub fn is_witness(&self) -> bool {
        self.violator.is_none()
    }

    /// The inner minimization is a local search, never a proof.
    pub fn label(&self) -> &'static str {
        if self.is_witness() {
            "heuristic-certified"
        } else {
            "violated"
        }
    }
}

/// Minimizes `⟨φ|W|φ⟩` over product states of the witness's partition.
pub fn certify_witness(w: &WitnessOperator, cfg: &OptConfig) -> Result<Certification> {
    let top = w.max_eigenvalue()?;
    let d = w.matrix.nrows();
    // Maximizing ⟨φ|(λ_max I − W)|φ⟩ minimizes ⟨φ|W|φ⟩ with a PSD objective.
    let shifted = CMatrix::identity(d, d).scale(top) - &w.matrix;
    let best = max_product_expectation(&shifted, w.dims(), &w.partition, cfg)?;
    let phi = best.maximizer.to_state(w.dims())?;
    let min = w.expectation_pure(&phi);
    Ok(Certification {
        min_product_expectation: min,
        violator: (min < -VIOLATION_TOL).then_some(best.maximizer),
        converged: best.converged,
    })
}

pub(crate) fn matrix_entries(m: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let (rows, cols) = m.shape();
    let entries: Vec<Complex64> = (0..rows * cols).map(|i| m[(i / cols, i % cols)]).collect();
    (
        entries.iter().map(|z| z.re).collect(),
        entries.iter().map(|z| z.im).collect(),
    )
}
