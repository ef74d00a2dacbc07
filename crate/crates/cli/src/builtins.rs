//! Named states and the `--dims` syntax.

use std::path::Path;

use entq_core::io::read_state;
use entq_core::states::{make_bell, make_dicke, make_ghz, make_psi_p, make_w3, StateVector};

use crate::error::{CliError, Result};

pub const BUILTIN_NAMES: &str = "bell, ghz3, ghz4, w3, dicke-<n>-<zeros>, psi-p-<p>, product-<dims>";

/// Parses `2x2x3` into `[2, 2, 3]`.
pub fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let dims = text
        .split('x')
        .map(|d| {
            d.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad dimension {d:?} in dims {text:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if dims.iter().any(|&d| d < 2) {
        return Err(CliError::Usage(format!("every dimension must be at least 2, got {text:?}")));
    }
    Ok(dims)
}

fn builtin(name: &str) -> Option<Result<StateVector>> {
    let state = match name {
        "bell" => Ok(make_bell()),
        "ghz3" => make_ghz(3).map_err(Into::into),
        "ghz4" => make_ghz(4).map_err(Into::into),
        "w3" => Ok(make_w3()),
        _ => {
            if let Some(rest) = name.strip_prefix("dicke-") {
                let parts: Vec<&str> = rest.split('-').collect();
                let parsed = match parts.as_slice() {
                    [n, k] => n.parse::<usize>().ok().zip(k.parse::<usize>().ok()),
                    _ => None,
                };
                return Some(match parsed {
                    Some((n, k)) => make_dicke(n, k).map_err(Into::into),
                    None => Err(CliError::Usage(format!("expected dicke-<n>-<zeros>, got {name:?}"))),
                });
            }
            if let Some(p) = name.strip_prefix("psi-p-") {
                return Some(match p.parse::<f64>() {
                    Ok(p) => make_psi_p(p).map_err(Into::into),
                    Err(_) => Err(CliError::Usage(format!("bad p value in {name:?}"))),
                });
            }
            if let Some(dims) = name.strip_prefix("product-") {
                return Some(parse_dims(dims).and_then(|dims| {
                    let zeros = vec![0; dims.len()];
                    StateVector::basis(dims, &zeros).map_err(Into::into)
                }));
            }
            return None;
        }
    };
    Some(state)
}

/// A builtin state name, or else a path to a state file.
pub fn resolve_state(source: &str) -> Result<StateVector> {
    if let Some(state) = builtin(source) {
        return state;
    }
    if Path::new(source).exists() {
        return Ok(read_state(source)?);
    }
    Err(CliError::Usage(format!(
        "{source:?} is neither a builtin state ({BUILTIN_NAMES}) nor an existing file"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_syntax() {
        assert_eq!(parse_dims("2x2x3").unwrap(), vec![2, 2, 3]);
        assert_eq!(parse_dims("4").unwrap(), vec![4]);
        assert!(parse_dims("2x1").is_err());
        assert!(parse_dims("2xa").is_err());
    }

    #[test]
    fn builtin_states() {
        assert_eq!(resolve_state("bell").unwrap(), make_bell());
        assert_eq!(resolve_state("ghz3").unwrap().n(), 3);
        assert_eq!(resolve_state("ghz4").unwrap().n(), 4);
        assert_eq!(resolve_state("w3").unwrap(), make_w3());
        assert_eq!(resolve_state("dicke-4-2").unwrap(), make_dicke(4, 2).unwrap());
        assert_eq!(resolve_state("psi-p-0.25").unwrap(), make_psi_p(0.25).unwrap());
        assert_eq!(resolve_state("product-2x3").unwrap().dims(), &[2, 3]);
        assert!(resolve_state("dicke-4").is_err());
        assert!(resolve_state("psi-p-2").is_err());
        assert!(resolve_state("no-such-thing").is_err());
    }
}
