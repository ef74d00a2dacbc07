//! Optimizer against the Dicke closed form for every excitation number.

use entq_core::measures::{dicke_lambda_sq_closed_form, e_gme_of_lambda, format_number, rg_lower_from_lambda};
use entq_core::overlap::{lambda_sq_over_partitions, OptConfig};
use entq_core::states::make_dicke;

use crate::error::{CliError, Result};

pub const HEADER: &str = "n,zeros,lambda_sq,lambda_sq_closed_form,e_gme,r_g_lower";
pub const CLOSED_FORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DickeRow {
    pub n: usize,
    pub zeros: usize,
    pub lambda_sq: f64,
    pub closed_form: f64,
    pub e_gme: f64,
    pub r_g_lower: f64,
}

impl DickeRow {
    pub fn to_csv_line(&self) -> String {
        let nums = [self.lambda_sq, self.closed_form, self.e_gme, self.r_g_lower].map(format_number);
        format!("{},{},{}", self.n, self.zeros, nums.join(","))
    }
}

pub fn row(n: usize, zeros: usize, cfg: &OptConfig) -> Result<DickeRow> {
    let psi = make_dicke(n, zeros)?;
    let opt = lambda_sq_over_partitions(&psi, n, cfg)?;
    if !opt.converged {
        return Err(CliError::NonConvergence(format!("S({n},{zeros}) after {} sweeps", opt.sweeps)));
    }
    let closed_form = dicke_lambda_sq_closed_form(n, zeros)?;
    if (opt.value - closed_form).abs() > CLOSED_FORM_TOL {
        return Err(CliError::Violation(format!(
            "S({n},{zeros}): optimizer {} vs closed form {closed_form}",
            opt.value
        )));
    }
    Ok(DickeRow {
        n,
        zeros,
        lambda_sq: opt.value,
        closed_form,
        e_gme: e_gme_of_lambda(opt.value)?,
        r_g_lower: rg_lower_from_lambda(opt.value)?,
    })
}

/// One row per `zeros` in `only`, or in `0..=n` when `only` is `None`.
pub fn table(n: usize, only: Option<usize>, cfg: &OptConfig) -> Result<Vec<DickeRow>> {
    if n < 2 {
        return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
    }
    match only {
        Some(z) => Ok(vec![row(n, z, cfg)?]),
        None => (0..=n).map(|z| row(n, z, cfg)).collect(),
    }
}

pub fn to_csv(rows: &[DickeRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_qubits() {
        let rows = table(4, None, &OptConfig::default()).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].lambda_sq, 1.0);
        assert!((rows[2].lambda_sq - 0.375).abs() < 1e-9);
        assert_eq!(to_csv(&rows).lines().count(), 6);
    }

    #[test]
    fn single_row_and_validation() {
        let rows = table(3, Some(2), &OptConfig::default()).unwrap();
        assert!((rows[0].e_gme - 5.0 / 9.0).abs() < 1e-9);
        assert!(table(1, None, &OptConfig::default()).is_err());
        assert!(table(3, Some(4), &OptConfig::default()).is_err());
    }
}
