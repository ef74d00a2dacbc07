//! Entanglement quantifiers and the bounds that connect them.
//!
//! Exact values are only available for bipartite pure states, where
//! everything follows from the Schmidt coefficients `c_i`:
//!
//! - generalized robustness `R_g = (Σ c_i)² − 1`,
//! - logarithmic robustness `LR_g = log₂(1 + R_g)`,
//! - relative entropy of entanglement, equal to the entropy of entanglement
//!   `−Σ c_i² log₂ c_i²`.
//!
//! For everything else the crate reports lower bounds derived from the
//! maximal product overlap `Λ²`:
//!
//! - `R_g ≥ 1/Λ² − 1 = E_GME / (1 − E_GME) ≥ E_GME`,
//! - `LR_g ≥ −log₂ Λ²`,
//! - for mixed `ρ`, `R_g ≥ Tr(ρ²) / max_{σ∈S_k} Tr(ρσ) − 1`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{svd, BlockLayout, CMatrix, CVector};
use crate::overlap::{lambda_sq_over_partitions, max_overlap_mixed, OptConfig, OverlapResult};
use crate::states::{binomial, DensityMatrix, PartitionSpec, StateVector};

/// Schmidt coefficients at or below this are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-13;
/// Slack allowed above 1 for an overlap produced by floating-point arithmetic.
const LAMBDA_SLACK: f64 = 1e-9;
/// Slack used when checking `R_g ≥ E_GME` and `R_g ≥ 1/Λ² − 1`.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    coefficients: Vec<f64>,
    left_basis: Vec<CVector>,
    right_basis: Vec<CVector>,
}

impl SchmidtDecomposition {
    /// Sorted descending, strictly positive.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn left_basis(&self) -> &[CVector] {
        &self.left_basis
    }

    pub fn right_basis(&self) -> &[CVector] {
        &self.right_basis
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients[0]
    }

    /// `Σ c_i l_i ⊗ r_i` in block-major order (left block index most significant).
    pub fn reconstruct_blocks(&self) -> CVector {
        let (dl, dr) = (self.left_basis[0].len(), self.right_basis[0].len());
        let mut out = CVector::zeros(dl * dr);
        for ((c, l), r) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            for a in 0..dl {
                for b in 0..dr {
                    out[a * dr + b] += l[a] * r[b] * *c;
                }
            }
        }
        out
    }
}

/// Schmidt decomposition across a two-block partition.
pub fn schmidt(psi: &StateVector, bipartition: &PartitionSpec) -> Result<SchmidtDecomposition> {
    if bipartition.k() != 2 {
        return Err(invalid(format!(
            "Schmidt decomposition needs exactly 2 blocks, got {}",
            bipartition.k()
        )));
    }
    let layout = BlockLayout::new(psi.dims(), bipartition)?;
    let (dl, dr) = (layout.block_dims()[0], layout.block_dims()[1]);
    let mut m = CMatrix::zeros(dl, dr);
    for (idx, amp) in psi.amps().iter().enumerate() {
        m[(layout.coord(idx, 0), layout.coord(idx, 1))] = *amp;
    }
    let dec = svd(&m)?;
    let keep: Vec<usize> = (0..dec.singular_values.len())
        .filter(|&i| dec.singular_values[i] > SCHMIDT_CUTOFF)
        .collect();
    Ok(SchmidtDecomposition {
        coefficients: keep.iter().map(|&i| dec.singular_values[i]).collect(),
        left_basis: keep.iter().map(|&i| dec.u.column(i).into_owned()).collect(),
        right_basis: keep.iter().map(|&i| dec.v.column(i).map(|z| z.conj())).collect(),
    })
}

/// Schmidt form of `√p|00⟩ + √(1−p)|11⟩`, read off directly.
pub fn schmidt_psi_p(p: f64) -> Result<SchmidtDecomposition> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p must lie in [0, 1], got {p}")));
    }
    let basis = |i: usize| {
        let mut v = CVector::zeros(2);
        v[i] = Complex64::new(1.0, 0.0);
        v
    };
    let mut terms = vec![(p.sqrt(), 0), ((1.0 - p).sqrt(), 1)];
    terms.sort_by(|a, b| b.0.total_cmp(&a.0));
    terms.retain(|t| t.0 > SCHMIDT_CUTOFF);
    Ok(SchmidtDecomposition {
        coefficients: terms.iter().map(|t| t.0).collect(),
        left_basis: terms.iter().map(|t| basis(t.1)).collect(),
        right_basis: terms.iter().map(|t| basis(t.1)).collect(),
    })
}

fn check_lambda(lambda_sq: f64) -> Result<()> {
    if lambda_sq > 0.0 && lambda_sq <= 1.0 + LAMBDA_SLACK {
        Ok(())
    } else {
        Err(invalid(format!("squared overlap must lie in (0, 1], got {lambda_sq}")))
    }
}

/// `E_GME = 1 − Λ²`.
pub fn e_gme_of_lambda(lambda_sq: f64) -> Result<f64> {
    check_lambda(lambda_sq)?;
    Ok(1.0 - lambda_sq)
}

/// `R_g = (Σ c_i)² − 1` for a bipartite pure state.
pub fn rg_bipartite_pure(sd: &SchmidtDecomposition) -> f64 {
    let sum: f64 = sd.coefficients.iter().sum();
    (sum * sum - 1.0).max(0.0)
}

/// `Tr(ρ²) / max_overlap − 1`, unclamped.
pub fn lemma1_lower_bound(purity: f64, max_overlap: f64) -> Result<f64> {
    if !(max_overlap > 0.0 && max_overlap <= 1.0 + LAMBDA_SLACK) {
        return Err(invalid(format!("max overlap must lie in (0, 1], got {max_overlap}")));
    }
    if !(purity > 0.0 && purity <= 1.0 + LAMBDA_SLACK) {
        return Err(invalid(format!("purity must lie in (0, 1], got {purity}")));
    }
    Ok(purity / max_overlap - 1.0)
}

/// `R_g ≥ 1/Λ² − 1`.
pub fn rg_lower_from_lambda(lambda_sq: f64) -> Result<f64> {
    check_lambda(lambda_sq)?;
    Ok(1.0 / lambda_sq - 1.0)
}

/// `LR_g = log₂(1 + R_g)`.
pub fn log_robustness(r_g: f64) -> Result<f64> {
    if r_g.is_nan() || r_g < 0.0 {
        return Err(invalid(format!("robustness must be nonnegative, got {r_g}")));
    }
    Ok((1.0 + r_g).log2())
}

/// `LR_g ≥ −log₂ Λ²`.
pub fn lr_lower_from_lambda(lambda_sq: f64) -> Result<f64> {
    check_lambda(lambda_sq)?;
    Ok(-lambda_sq.log2())
}

/// Shannon entropy (bits) of a probability vector, with `0·log 0 = 0`.
pub fn shannon_entropy(probs: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Entropy of entanglement `−Σ c_i² log₂ c_i²`.
pub fn entropy_of_entanglement(sd: &SchmidtDecomposition) -> f64 {
    shannon_entropy(sd.coefficients.iter().map(|c| c * c))
}

pub const MAX_DICKE_N: usize = 20;

/// Closed-form `Λ²` of the Dicke state with `zeros` zeros on `n` qubits:
/// `C(n,k) (k/n)^k ((n−k)/n)^(n−k)`.
pub fn dicke_lambda_sq_closed_form(n: usize, zeros: usize) -> Result<f64> {
    if n == 0 || n > MAX_DICKE_N {
        return Err(invalid(format!("n must lie in 1..={MAX_DICKE_N}, got {n}")));
    }
    if zeros > n {
        return Err(invalid(format!("number of zeros {zeros} exceeds n = {n}")));
    }
    if zeros == 0 || zeros == n {
        return Ok(1.0);
    }
    let (nf, kf) = (n as f64, zeros as f64);
    let ones = nf - kf;
    Ok(binomial(n as u64, zeros as u64) * (kf / nf).powi(zeros as i32) * (ones / nf).powi((n - zeros) as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// Bipartite pure state; `r_g`, `lr_g` and `e_r` are exact.
    ExactBipartitePure,
    /// Only the overlap-derived lower bounds are available.
    BoundsOnly,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::ExactBipartitePure => "exact_bipartite_pure",
            MeasureKind::BoundsOnly => "bounds_only",
        })
    }
}

#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub lambda_sq: f64,
    pub e_gme: f64,
    pub r_g: Option<f64>,
    pub r_g_lower: f64,
    pub lr_g: Option<f64>,
    pub lr_g_lower: f64,
    pub e_r: Option<f64>,
    pub kind: MeasureKind,
    pub k: usize,
    /// Partition that attained `lambda_sq`.
    pub partition: PartitionSpec,
    /// Whether the optimizer's best restart converged.
    pub converged: bool,
}

/// Shortest round-trip decimal, with `-0` printed as `0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

impl MeasureReport {
    /// Flat `key=value` record, one field per line; absent values print as `none`.
    pub fn to_record(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), format_number);
        let fields = [
            ("lambda_sq", format_number(self.lambda_sq)),
            ("e_gme", format_number(self.e_gme)),
            ("r_g", opt(self.r_g)),
            ("r_g_lower", format_number(self.r_g_lower)),
            ("lr_g", opt(self.lr_g)),
            ("lr_g_lower", format_number(self.lr_g_lower)),
            ("e_r", opt(self.e_r)),
            ("kind", self.kind.to_string()),
            ("k", self.k.to_string()),
            ("partition", self.partition.to_string()),
        ];
        fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

/// Computes every quantifier available for `psi` at separability level `k`.
///
/// `Λ_k²` is maximized over all `k`-block partitions. Exact robustness and
/// relative entropy are filled in only for two-subsystem states with `k = 2`.
pub fn report(psi: &StateVector, k: usize, cfg: &OptConfig) -> Result<MeasureReport> {
    let n = psi.n();
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n = {n}, got k = {k}")));
    }
    let opt = lambda_sq_over_partitions(psi, k, cfg)?;
    let lambda_sq = opt.value;
    let e_gme = e_gme_of_lambda(lambda_sq)?;
    let r_g_lower = rg_lower_from_lambda(lambda_sq)?;
    let lr_g_lower = lr_lower_from_lambda(lambda_sq)?;

    let mut out = MeasureReport {
        lambda_sq,
        e_gme,
        r_g: None,
        r_g_lower,
        lr_g: None,
        lr_g_lower,
        e_r: None,
        kind: MeasureKind::BoundsOnly,
        k,
        partition: opt.partition_used.clone(),
        converged: opt.converged,
    };
    if n == 2 && k == 2 {
        let sd = schmidt(psi, &PartitionSpec::finest(2))?;
        let r_g = rg_bipartite_pure(&sd);
        if r_g < e_gme - BOUND_SLACK {
            return Err(Error::InvariantViolation(format!(
                "generalized robustness {r_g} is below the geometric measure {e_gme}"
            )));
        }
        if r_g < r_g_lower - BOUND_SLACK {
            return Err(Error::InvariantViolation(format!(
                "generalized robustness {r_g} is below its overlap bound {r_g_lower}"
            )));
        }
        out.r_g = Some(r_g);
        out.lr_g = Some(log_robustness(r_g)?);
        out.e_r = Some(entropy_of_entanglement(&sd));
        out.kind = MeasureKind::ExactBipartitePure;
    }
    Ok(out)
}

/// Purity-over-overlap lower bound on the generalized robustness of `rho`.
#[derive(Debug, Clone)]
pub struct Lemma1Bound {
    pub purity: f64,
    /// `max_{σ∈S_k} Tr(ρσ)`, attained by `overlap.maximizer`.
    pub max_overlap: f64,
    pub raw: f64,
    /// `max(0, raw)`.
    pub clamped: f64,
    pub overlap: OverlapResult,
}

pub fn lemma1_bound(rho: &DensityMatrix, partition: &PartitionSpec, cfg: &OptConfig) -> Result<Lemma1Bound> {
    let overlap = max_overlap_mixed(rho, partition, cfg)?;
    let purity = rho.purity();
    let raw = lemma1_lower_bound(purity, overlap.value)?;
    Ok(Lemma1Bound {
        purity,
        max_overlap: overlap.value,
        raw,
        clamped: raw.max(0.0),
        overlap,
    })
}
