//! Maximal overlap with product states.
//!
//! For a pure state `ψ` and a partition into `k` blocks this estimates
//! `Λ² = max_φ |⟨φ|ψ⟩|²` over product vectors `φ = ⊗_j φ_j`; for a mixed
//! state (or any Hermitian operator `A`) it estimates `max_φ ⟨φ|A|φ⟩`. Both
//! use alternating ascent: every block update is the exact maximizer over that
//! block with the others held fixed, so the objective never decreases within a
//! restart. Independent restarts run in parallel; the best one is reported.
//!
//! Returned values are attained by the reported maximizer and are therefore
//! certified lower bounds on the true maximum. [`grid_oracle`] gives a
//! brute-force check on up to three qubits.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh, BlockLayout, CMatrix, CVector};
use crate::states::{
    enumerate_partitions, random_unit_vector, rng_stream, DensityMatrix, PartitionSpec, ProductState,
    StateVector,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Absolute change of the objective over one full sweep that counts as converged.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_sweeps: 500,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl OptConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(invalid("restarts must be at least 1"));
        }
        if self.max_sweeps == 0 {
            return Err(invalid("max_sweeps must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(invalid(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OverlapResult {
    /// Objective attained by `maximizer`.
    pub value: f64,
    /// Best product state found, phase-normalized per block.
    pub maximizer: ProductState,
    pub partition_used: PartitionSpec,
    pub restarts: usize,
    /// Index of the restart that produced `maximizer`.
    pub best_restart: usize,
    /// Sweeps run by the best restart.
    pub sweeps: usize,
    /// Whether the best restart met the tolerance before `max_sweeps`.
    pub converged: bool,
    /// Objective after every full sweep, one trace per restart.
    pub traces: Vec<Vec<f64>>,
}

enum Target<'a> {
    Pure(&'a CVector),
    Operator(&'a CMatrix),
}

struct Restart {
    locals: Vec<CVector>,
    value: f64,
    trace: Vec<f64>,
    converged: bool,
}

struct Ascent<'a> {
    layout: BlockLayout,
    target: Target<'a>,
}

impl Ascent<'_> {
    fn objective(&self, locals: &[CVector]) -> f64 {
        let phi = self.layout.product_vector(locals);
        match self.target {
            Target::Pure(psi) => phi.dotc(psi).norm_sqr(),
            Target::Operator(op) => phi.dotc(&(op * &phi)).re,
        }
    }

    /// Replaces block `j` by its exact maximizer; returns the new objective.
    fn update(&self, locals: &mut [CVector], j: usize) -> Result<f64> {
        match self.target {
            Target::Pure(psi) => {
                let env = self.layout.environment(psi, locals, j);
                let norm = env.norm();
                if norm > 0.0 {
                    locals[j] = env.unscale(norm);
                    Ok(norm * norm)
                } else {
                    Ok(0.0)
                }
            }
            Target::Operator(op) => {
                let reduced = self.layout.environment_operator(op, locals, j);
                let dec = eigh(&reduced)?;
                locals[j] = dec.top_eigenvector().clone();
                Ok(dec.max_eigenvalue())
            }
        }
    }

    /// Basis product state at the largest amplitude (or diagonal entry).
    fn dominant_start(&self) -> Vec<CVector> {
        let total = self.layout.total_dim();
        let weight = |idx: usize| match self.target {
            Target::Pure(psi) => psi[idx].norm_sqr(),
            Target::Operator(op) => op[(idx, idx)].re,
        };
        let best = (0..total).fold(0, |b, idx| if weight(idx) > weight(b) { idx } else { b });
        self.layout
            .block_dims()
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let mut v = CVector::zeros(d);
                v[self.layout.coord(best, j)] = Complex64::new(1.0, 0.0);
                v
            })
            .collect()
    }

    fn initial(&self, restart: usize, seed: u64) -> Vec<CVector> {
        if restart == 0 {
            return self.dominant_start();
        }
        let mut rng = rng_stream(seed, restart as u64);
        self.layout
            .block_dims()
            .iter()
            .map(|&d| random_unit_vector(d, &mut rng))
            .collect()
    }

    fn run(&self, mut locals: Vec<CVector>, cfg: &OptConfig) -> Result<Restart> {
        let mut prev = self.objective(&locals);
        let mut trace = Vec::new();
        let mut converged = false;
        for _ in 0..cfg.max_sweeps {
            let mut value = prev;
            for j in 0..self.layout.num_blocks() {
                value = self.update(&mut locals, j)?;
            }
            trace.push(value);
            if (value - prev).abs() < cfg.tol {
                converged = true;
                break;
            }
            prev = value;
        }
        Ok(Restart {
            value: self.objective(&locals),
            locals,
            trace,
            converged,
        })
    }

    fn solve(&self, partition: &PartitionSpec, cfg: &OptConfig) -> Result<OverlapResult> {
        cfg.validate()?;
        let runs = (0..cfg.restarts)
            .into_par_iter()
            .map(|r| self.run(self.initial(r, cfg.seed), cfg))
            .collect::<Result<Vec<_>>>()?;
        // Lowest index wins ties.
        let best_restart = runs
            .iter()
            .enumerate()
            .fold(0, |b, (i, r)| if r.value > runs[b].value { i } else { b });
        let best = &runs[best_restart];
        let maximizer =
            ProductState::from_parts_unchecked(partition.clone(), best.locals.clone()).gauge_fixed();
        Ok(OverlapResult {
            value: self.objective(maximizer.locals()),
            maximizer,
            partition_used: partition.clone(),
            restarts: cfg.restarts,
            best_restart,
            sweeps: best.trace.len(),
            converged: best.converged,
            traces: runs.into_iter().map(|r| r.trace).collect(),
        })
    }
}

fn clamp_unit(mut result: OverlapResult) -> Result<OverlapResult> {
    if result.value.is_nan() || result.value <= 0.0 {
        return Err(Error::Numerical(format!(
            "optimizer returned non-positive overlap {}",
            result.value
        )));
    }
    result.value = result.value.min(1.0);
    Ok(result)
}

/// `Λ²` for a fixed partition.
pub fn lambda_sq_pure(psi: &StateVector, partition: &PartitionSpec, cfg: &OptConfig) -> Result<OverlapResult> {
    let ascent = Ascent {
        layout: BlockLayout::new(psi.dims(), partition)?,
        target: Target::Pure(psi.amps()),
    };
    clamp_unit(ascent.solve(partition, cfg)?)
}

/// `Λ_k²` maximized over every partition into `k` blocks.
pub fn lambda_sq_over_partitions(psi: &StateVector, k: usize, cfg: &OptConfig) -> Result<OverlapResult> {
    let mut best: Option<OverlapResult> = None;
    for partition in enumerate_partitions(psi.n(), k)? {
        let r = lambda_sq_pure(psi, &partition, cfg)?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one partition"))
}

/// `max_φ ⟨φ|ρ|φ⟩` over product vectors, which equals `max_{σ∈S_k} Tr(ρσ)`.
pub fn max_overlap_mixed(rho: &DensityMatrix, partition: &PartitionSpec, cfg: &OptConfig) -> Result<OverlapResult> {
    let ascent = Ascent {
        layout: BlockLayout::new(rho.dims(), partition)?,
        target: Target::Operator(rho.matrix()),
    };
    clamp_unit(ascent.solve(partition, cfg)?)
}

/// `max_φ ⟨φ|A|φ⟩` for an arbitrary Hermitian `A`; the value may have any sign.
pub fn max_product_expectation(
    op: &CMatrix,
    dims: &[usize],
    partition: &PartitionSpec,
    cfg: &OptConfig,
) -> Result<OverlapResult> {
    let layout = BlockLayout::new(dims, partition)?;
    if op.nrows() != layout.total_dim() || op.ncols() != layout.total_dim() {
        return Err(invalid(format!(
            "operator is {}x{} but dims {:?} require {}",
            op.nrows(),
            op.ncols(),
            dims,
            layout.total_dim()
        )));
    }
    Ascent {
        layout,
        target: Target::Operator(op),
    }
    .solve(partition, cfg)
}

/// Objective handed to [`grid_oracle`].
#[derive(Debug, Clone, Copy)]
pub enum OracleTarget<'a> {
    /// Maximize `|⟨φ|ψ⟩|²`.
    Pure(&'a StateVector),
    /// Maximize `⟨φ|A|φ⟩` for Hermitian `A`.
    Operator { dims: &'a [usize], matrix: &'a CMatrix },
}

impl<'a> From<&'a StateVector> for OracleTarget<'a> {
    fn from(psi: &'a StateVector) -> Self {
        OracleTarget::Pure(psi)
    }
}

impl<'a> From<&'a DensityMatrix> for OracleTarget<'a> {
    fn from(rho: &'a DensityMatrix) -> Self {
        OracleTarget::Operator {
            dims: rho.dims(),
            matrix: rho.matrix(),
        }
    }
}

pub const MAX_ORACLE_QUBITS: usize = 3;
pub const MAX_ORACLE_RESOLUTION: usize = 200;

/// Brute-force maximum over a Bloch-angle grid of single-qubit product states.
///
/// Each qubit ranges over `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` with `resolution`
/// values of `θ ∈ [0, π]` (endpoints included) and `resolution` values of
/// `φ ∈ [0, 2π)`. The last qubit is maximized in closed form (vector norm, or
/// top eigenvalue of a 2×2 Hermitian matrix) rather than gridded. The result
/// is a lower bound that converges to the true maximum as the grid refines.
pub fn grid_oracle<'a>(
    target: impl Into<OracleTarget<'a>>,
    partition: &PartitionSpec,
    resolution: usize,
) -> Result<f64> {
    let target = target.into();
    let dims = match target {
        OracleTarget::Pure(psi) => psi.dims(),
        OracleTarget::Operator { dims, .. } => dims,
    };
    let n = dims.len();
    if n > MAX_ORACLE_QUBITS || dims.iter().any(|&d| d != 2) {
        return Err(invalid(format!(
            "grid oracle supports at most {MAX_ORACLE_QUBITS} qubits, got dims {dims:?}"
        )));
    }
    if partition.n() != n || !partition.is_finest() {
        return Err(invalid("grid oracle needs one single-qubit block per subsystem"));
    }
    if !(2..=MAX_ORACLE_RESOLUTION).contains(&resolution) {
        return Err(invalid(format!(
            "grid resolution must lie in 2..={MAX_ORACLE_RESOLUTION}, got {resolution}"
        )));
    }
    let grid = bloch_grid(resolution);
    Ok(match target {
        OracleTarget::Pure(psi) => {
            let amps: Vec<Complex64> = psi.amps().iter().copied().collect();
            grid_max_pure(&amps, &grid)
        }
        OracleTarget::Operator { matrix, .. } => {
            if matrix.nrows() != 1 << n || matrix.ncols() != 1 << n {
                return Err(invalid("operator size does not match dims"));
            }
            let dim = matrix.nrows();
            let flat: Vec<Complex64> = (0..dim * dim).map(|i| matrix[(i / dim, i % dim)]).collect();
            grid_max_operator(&flat, dim, &grid)
        }
    })
}

fn bloch_grid(resolution: usize) -> Vec<[Complex64; 2]> {
    let mut grid = Vec::with_capacity(resolution * resolution);
    for a in 0..resolution {
        let theta = std::f64::consts::PI * a as f64 / (resolution - 1) as f64;
        let (s, c) = (theta / 2.0).sin_cos();
        for b in 0..resolution {
            let phi = std::f64::consts::TAU * b as f64 / resolution as f64;
            grid.push([Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]);
        }
    }
    grid
}

fn grid_max_pure(amps: &[Complex64], grid: &[[Complex64; 2]]) -> f64 {
    if amps.len() == 2 {
        return amps[0].norm_sqr() + amps[1].norm_sqr();
    }
    let half = amps.len() / 2;
    let mut reduced = vec![Complex64::new(0.0, 0.0); half];
    let mut best = f64::NEG_INFINITY;
    for v in grid {
        let (c0, c1) = (v[0].conj(), v[1].conj());
        for (r, slot) in reduced.iter_mut().enumerate() {
            *slot = c0 * amps[r] + c1 * amps[half + r];
        }
        best = best.max(grid_max_pure(&reduced, grid));
    }
    best
}

fn grid_max_operator(op: &[Complex64], dim: usize, grid: &[[Complex64; 2]]) -> f64 {
    if dim == 2 {
        let (a, d, b) = (op[0].re, op[3].re, op[1]);
        let mid = 0.5 * (a + d);
        let half_gap = 0.5 * (a - d);
        return mid + (half_gap * half_gap + b.norm_sqr()).sqrt();
    }
    let half = dim / 2;
    let mut reduced = vec![Complex64::new(0.0, 0.0); half * half];
    let mut best = f64::NEG_INFINITY;
    for v in grid {
        for r in 0..half {
            for s in 0..half {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, va) in v.iter().enumerate() {
                    for (b, vb) in v.iter().enumerate() {
                        acc += va.conj() * op[(a * half + r) * dim + b * half + s] * vb;
                    }
                }
                reduced[r * half + s] = acc;
            }
        }
        best = best.max(grid_max_operator(&reduced, half, grid));
    }
    best
}
