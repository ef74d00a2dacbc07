//! Closed-form sweep over `√p|00⟩ + √(1−p)|11⟩`.

use entq_core::measures::{
    entropy_of_entanglement, format_number, log_robustness, lr_lower_from_lambda, rg_bipartite_pure,
    schmidt_psi_p,
};

use crate::error::{CliError, Result};

pub const HEADER: &str = "p,e_r,lr_g,lr_lower";
const ORDER_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub e_r: f64,
    pub lr_g: f64,
    pub lr_lower: f64,
}

impl SweepRow {
    pub fn at(p: f64) -> Result<Self> {
        let sd = schmidt_psi_p(p)?;
        let top = sd.max_coefficient();
        Ok(Self {
            p,
            e_r: entropy_of_entanglement(&sd),
            lr_g: log_robustness(rg_bipartite_pure(&sd))?,
            lr_lower: lr_lower_from_lambda(top * top)?,
        })
    }

    /// `lr_g ≥ e_r ≥ lr_lower`, each up to `1e-9`.
    pub fn is_ordered(&self) -> bool {
        self.lr_g >= self.e_r - ORDER_SLACK && self.e_r >= self.lr_lower - ORDER_SLACK
    }

    pub fn to_csv_line(&self) -> String {
        [self.p, self.e_r, self.lr_g, self.lr_lower]
            .map(format_number)
            .join(",")
    }
}

/// `steps` rows on the uniform grid `p = i/(steps−1)`.
pub fn sweep(steps: usize) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(CliError::Usage(format!("steps must be at least 2, got {steps}")));
    }
    let rows = (0..steps)
        .map(|i| SweepRow::at(i as f64 / (steps - 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = rows.iter().find(|r| !r.is_ordered()) {
        return Err(CliError::Violation(format!(
            "row at p = {} breaks lr_g >= e_r >= lr_lower: {:?}",
            bad.p, bad
        )));
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}
