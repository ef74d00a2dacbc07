//! States, partitions and product states.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, all_finite, BlockLayout, CMatrix, CVector};

/// Normalization tolerance for state vectors and local factors.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and unit-trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue of a density matrix.
pub const PSD_TOL: f64 = -1e-10;
/// Largest subsystem count for which partitions are enumerated.
pub const MAX_PARTITION_N: usize = 6;

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(invalid("dims must list at least one subsystem"));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(invalid(format!("subsystem dimension {d} is below 2 in dims {dims:?}")));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::SizeLimit(format!("dims {dims:?} overflow the state dimension")))
}

/// A normalized pure state on a composite system.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: CVector,
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amps.len() != total {
            return Err(invalid(format!(
                "amplitude vector has length {} but dims {:?} require {}",
                amps.len(),
                dims,
                total
            )));
        }
        if !all_finite(amps.iter()) {
            return Err(invalid("amplitudes contain non-finite values"));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!(
                "state is not normalized: norm is {norm}, the normalization invariant requires |norm - 1| <= {NORM_TOL:e}"
            )));
        }
        Ok(Self { dims, amps })
    }

    /// Normalizes `amps` before validating.
    pub fn normalized(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Self::new(dims, amps.unscale(norm))
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = check_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(a, d)| a >= d) {
            return Err(invalid(format!("basis digits {digits:?} do not fit dims {dims:?}")));
        }
        let idx = digits.iter().zip(&dims).fold(0, |acc, (a, d)| acc * d + a);
        let mut amps = CVector::zeros(total);
        amps[idx] = Complex64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        to_density(self)
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if mat.nrows() != total || mat.ncols() != total {
            return Err(invalid(format!(
                "density matrix is {}x{} but dims {:?} require {}x{}",
                mat.nrows(),
                mat.ncols(),
                dims,
                total,
                total
            )));
        }
        if !all_finite(mat.iter()) {
            return Err(invalid("density matrix has non-finite entries"));
        }
        let herm = linalg::hermiticity_error(&mat);
        if herm > DENSITY_TOL {
            return Err(invalid(format!(
                "density matrix is not Hermitian: deviation {herm:e} exceeds {DENSITY_TOL:e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(invalid(format!(
                "density matrix trace is {tr}, the unit-trace invariant requires |Tr - 1| <= {DENSITY_TOL:e}"
            )));
        }
        let min_eig = linalg::eigh(&mat)?.min_eigenvalue();
        if min_eig < PSD_TOL {
            return Err(invalid(format!(
                "density matrix is not positive semidefinite: smallest eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { dims, mat })
    }

    /// Convex mixture `Σ w_i ρ_i`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| invalid("empty mixture"))?.1;
        let mut mat = CMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(invalid("mixture components have different dims"));
            }
            if *w < 0.0 {
                return Err(invalid(format!("negative mixture weight {w}")));
            }
            mat += rho.mat.scale(*w);
        }
        Self::new(first.dims.clone(), mat)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&dims)?;
        Self::new(dims, CMatrix::identity(total, total).unscale(total as f64))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Tr(Aρ)` for an operator on the same space.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        (op * &self.mat).trace()
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn to_density(psi: &StateVector) -> DensityMatrix {
    DensityMatrix {
        dims: psi.dims.clone(),
        mat: psi.amps() * psi.amps().adjoint(),
    }
}

/// A grouping of subsystems `0..n` into disjoint nonempty blocks.
///
/// Blocks are stored canonically: members ascending, blocks ordered by their
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl PartitionSpec {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("partition needs at least one subsystem"));
        }
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(invalid("partition contains an empty block"));
            }
            block.sort_unstable();
            for &s in block.iter() {
                if s >= n {
                    return Err(invalid(format!("subsystem {s} out of range for n = {n}")));
                }
                if std::mem::replace(&mut seen[s], true) {
                    return Err(invalid(format!("subsystem {s} appears in more than one block")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(invalid(format!("subsystem {missing} is not covered by the partition")));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    /// Every subsystem in its own block.
    pub fn finest(n: usize) -> Self {
        Self {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// A single block holding everything.
    pub fn whole(n: usize) -> Self {
        Self {
            n,
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_finest(&self) -> bool {
        self.blocks.len() == self.n
    }
}

impl fmt::Display for PartitionSpec {
    /// Blocks separated by `|`, members by `,`, e.g. `0|1,2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let members: Vec<String> = block.iter().map(|s| s.to_string()).collect();
            f.write_str(&members.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for PartitionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let blocks = s
            .split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|m| {
                        m.trim()
                            .parse::<usize>()
                            .map_err(|_| invalid(format!("bad partition member {m:?} in {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = blocks.iter().map(Vec::len).sum();
        Self::new(n, blocks)
    }
}

/// All set partitions of `{0..n-1}` into exactly `k` blocks, in canonical order.
pub fn enumerate_partitions(n: usize, k: usize) -> Result<Vec<PartitionSpec>> {
    if n > MAX_PARTITION_N {
        return Err(Error::SizeLimit(format!(
            "partition enumeration supports n <= {MAX_PARTITION_N}, got n = {n}"
        )));
    }
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    // Restricted growth strings: label[i] <= 1 + max(label[..i]).
    fn grow(labels: &mut Vec<usize>, used: usize, n: usize, k: usize, out: &mut Vec<PartitionSpec>) {
        let i = labels.len();
        if i == n {
            if used == k {
                let mut blocks = vec![Vec::new(); k];
                for (s, &l) in labels.iter().enumerate() {
                    blocks[l].push(s);
                }
                out.push(PartitionSpec { n, blocks });
            }
            return;
        }
        // Not enough subsystems left to open the remaining blocks.
        if used + (n - i) < k {
            return;
        }
        for l in 0..=used.min(k - 1) {
            labels.push(l);
            grow(labels, used.max(l + 1), n, k, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), 0, n, k, &mut out);
    Ok(out)
}

/// One normalized local vector per block of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    partition: PartitionSpec,
    locals: Vec<CVector>,
}

impl ProductState {
    pub fn new(partition: PartitionSpec, locals: Vec<CVector>) -> Result<Self> {
        if locals.len() != partition.k() {
            return Err(invalid(format!(
                "{} local vectors supplied for {} blocks",
                locals.len(),
                partition.k()
            )));
        }
        for (j, v) in locals.iter().enumerate() {
            if !all_finite(v.iter()) || (v.norm() - 1.0).abs() > NORM_TOL {
                return Err(invalid(format!("local vector for block {j} is not normalized")));
            }
        }
        Ok(Self { partition, locals })
    }

    pub(crate) fn from_parts_unchecked(partition: PartitionSpec, locals: Vec<CVector>) -> Self {
        Self { partition, locals }
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }

    pub fn locals(&self) -> &[CVector] {
        &self.locals
    }

    /// Full product vector in the original subsystem ordering.
    pub fn to_state(&self, dims: &[usize]) -> Result<StateVector> {
        let layout = BlockLayout::new(dims, &self.partition)?;
        if self.locals.iter().zip(layout.block_dims()).any(|(v, &d)| v.len() != d) {
            return Err(invalid("local vector lengths do not match the block dimensions"));
        }
        StateVector::normalized(dims.to_vec(), layout.product_vector(&self.locals))
    }

    /// Copy with each local vector's first nonzero entry made real and positive.
    pub fn gauge_fixed(&self) -> Self {
        let locals = self
            .locals
            .iter()
            .map(|v| {
                match v.iter().find(|z| z.norm() > 1e-14) {
                    Some(z) => v * (z.conj() / z.norm()),
                    None => v.clone(),
                }
            })
            .collect();
        Self {
            partition: self.partition.clone(),
            locals,
        }
    }
}

/// Seeded ChaCha8 generator; `stream` selects an independent sequence.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Unit vector with i.i.d. standard complex Gaussian entries before normalization.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

/// Haar-random pure state, deterministic in `seed`.
pub fn random_state(dims: &[usize], seed: u64) -> Result<StateVector> {
    let total = check_dims(dims)?;
    let mut rng = rng_stream(seed, 0);
    random_state_with(dims, total, &mut rng)
}

pub fn random_state_from_rng<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<StateVector> {
    let total = check_dims(dims)?;
    random_state_with(dims, total, rng)
}

fn random_state_with<R: Rng + ?Sized>(dims: &[usize], total: usize, rng: &mut R) -> Result<StateVector> {
    StateVector::normalized(dims.to_vec(), random_unit_vector(total, rng))
}

/// `√p|00⟩ + √(1−p)|11⟩`.
pub fn make_psi_p(p: f64) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p must lie in [0, 1], got {p}")));
    }
    let amps = CVector::from_vec(vec![
        Complex64::new(p.sqrt(), 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new((1.0 - p).sqrt(), 0.0),
    ]);
    StateVector::normalized(vec![2, 2], amps)
}

pub(crate) fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dicke state on `n` qubits: equal superposition of all basis strings with
/// exactly `zeros` zeros.
pub fn make_dicke(n: usize, zeros: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(invalid(format!("Dicke states need n >= 2, got {n}")));
    }
    if zeros > n {
        return Err(invalid(format!("number of zeros {zeros} exceeds n = {n}")));
    }
    if n > 24 {
        return Err(Error::SizeLimit(format!("{n} qubits is beyond desk scale")));
    }
    let amp = Complex64::new(binomial(n as u64, zeros as u64).sqrt().recip(), 0.0);
    let amps = CVector::from_fn(1 << n, |idx, _| {
        if n - idx.count_ones() as usize == zeros {
            amp
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    StateVector::normalized(vec![2; n], amps)
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn make_ghz(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(invalid(format!("GHZ states need n >= 2, got {n}")));
    }
    let mut amps = CVector::zeros(1 << n);
    amps[0] = Complex64::new(1.0, 0.0);
    amps[(1 << n) - 1] = Complex64::new(1.0, 0.0);
    StateVector::normalized(vec![2; n], amps)
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn make_bell() -> StateVector {
    make_ghz(2).expect("two-qubit GHZ")
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn make_w3() -> StateVector {
    make_dicke(3, 2).expect("three-qubit Dicke")
}
