//! Randomized checks of the inequalities between the quantifiers.
//!
//! Every check records a margin `lhs − rhs` that must be nonnegative up to
//! the check's slack. Hard checks fail the run; the `LR_g ≥ E_R` check is an
//! open conjecture and is only reported.

use std::fmt::Write as _;

use entq_core::measures::{
    e_gme_of_lambda, entropy_of_entanglement, format_number, log_robustness, lr_lower_from_lambda,
    rg_bipartite_pure, rg_lower_from_lambda, schmidt,
};
use entq_core::overlap::{lambda_sq_over_partitions, OptConfig};
use entq_core::states::{random_state_from_rng, rng_stream, PartitionSpec, StateVector};

use crate::error::{CliError, Result};

#[derive(Debug, Clone)]
pub struct PropcheckConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    /// Evaluate this state on every trial instead of sampling.
    pub fixed_state: Option<StateVector>,
    pub opt: OptConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckTally {
    pub name: &'static str,
    pub hard: bool,
    pub slack: f64,
    pub passed: usize,
    pub total: usize,
    /// Smallest margin seen; `+∞` when the check never ran.
    pub worst_margin: f64,
}

impl CheckTally {
    fn new(name: &'static str, hard: bool, slack: f64) -> Self {
        Self {
            name,
            hard,
            slack,
            passed: 0,
            total: 0,
            worst_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, margin: f64) {
        self.total += 1;
        if margin >= -self.slack {
            self.passed += 1;
        }
        self.worst_margin = self.worst_margin.min(margin);
    }

    pub fn failed(&self) -> bool {
        self.passed < self.total
    }
}

#[derive(Debug, Clone)]
pub struct PropcheckReport {
    pub trials: usize,
    pub checks: Vec<CheckTally>,
}

impl PropcheckReport {
    pub fn hard_failure(&self) -> bool {
        self.checks.iter().any(|c| c.hard && c.failed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "trials={}", self.trials).unwrap();
        for c in self.checks.iter().filter(|c| c.total > 0) {
            let status = match (c.failed(), c.hard) {
                (false, _) => "pass",
                (true, true) => "FAIL",
                (true, false) => "violated (finding)",
            };
            writeln!(
                out,
                "{} kind={} passed={}/{} worst_margin={} status={}",
                c.name,
                if c.hard { "hard" } else { "conjecture" },
                c.passed,
                c.total,
                format_number(c.worst_margin),
                status
            )
            .unwrap();
        }
        writeln!(out, "result={}", if self.hard_failure() { "fail" } else { "pass" }).unwrap();
        out
    }
}

pub const RG_GE_EGME: &str = "rg_ge_egme";
pub const RG_GE_LAMBDA_BOUND: &str = "rg_ge_lambda_bound";
pub const ER_GE_LR_LOWER: &str = "er_ge_lr_lower";
pub const OPT_MATCHES_SCHMIDT: &str = "optimizer_matches_schmidt";
pub const BOUND_GE_EGME: &str = "rg_lower_ge_egme";
pub const NESTING: &str = "nesting_lambda_k_le_lambda_k_minus_1";
pub const CONJECTURE: &str = "conjecture_lrg_ge_er";

pub fn run(cfg: &PropcheckConfig) -> Result<PropcheckReport> {
    if cfg.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let n = cfg.fixed_state.as_ref().map_or(cfg.dims.len(), StateVector::n);
    if cfg.k == 0 || cfg.k > n {
        return Err(CliError::Usage(format!("k must lie in 1..={n}, got {}", cfg.k)));
    }
    let mut checks = vec![
        CheckTally::new(RG_GE_EGME, true, 1e-9),
        CheckTally::new(RG_GE_LAMBDA_BOUND, true, 1e-9),
        CheckTally::new(ER_GE_LR_LOWER, true, 1e-9),
        CheckTally::new(OPT_MATCHES_SCHMIDT, true, 1e-8),
        CheckTally::new(BOUND_GE_EGME, true, 1e-9),
        CheckTally::new(NESTING, true, 1e-10),
        CheckTally::new(CONJECTURE, false, 1e-9),
    ];
    let mut rng = rng_stream(cfg.seed, 0);
    for _ in 0..cfg.trials {
        let psi = match &cfg.fixed_state {
            Some(psi) => psi.clone(),
            None => random_state_from_rng(&cfg.dims, &mut rng)?,
        };
        let lambda = lambda_sq_over_partitions(&psi, cfg.k, &cfg.opt)?.value;
        let e_gme = e_gme_of_lambda(lambda)?;
        checks[4].record(rg_lower_from_lambda(lambda)? - e_gme);
        if cfg.k >= 2 {
            let coarser = lambda_sq_over_partitions(&psi, cfg.k - 1, &cfg.opt)?.value;
            checks[5].record(coarser - lambda);
        }
        if psi.n() == 2 && cfg.k == 2 {
            let sd = schmidt(&psi, &PartitionSpec::finest(2))?;
            let top = sd.max_coefficient() * sd.max_coefficient();
            let r_g = rg_bipartite_pure(&sd);
            let e_r = entropy_of_entanglement(&sd);
            checks[0].record(r_g - (1.0 - top));
            checks[1].record(r_g - rg_lower_from_lambda(top)?);
            checks[2].record(e_r - lr_lower_from_lambda(top)?);
            checks[3].record(-(lambda - top).abs());
            checks[6].record(log_robustness(r_g)? - e_r);
        }
    }
    Ok(PropcheckReport {
        trials: cfg.trials,
        checks,
    })
}
