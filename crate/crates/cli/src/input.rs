use clap::Args;
use hgsp_core::cyclotomic::{factorization_from_parameters, factorization_from_poly};
use hgsp_core::fixtures::table_a_row;
use hgsp_core::{CycloFactorization, IntPoly, ParameterList, QualifiedPair};

use crate::CliError;

/// One of: parameters, factorizations, coefficients (per side), or a row of
/// the unipotent table.
#[derive(Args, Debug, Clone, Default)]
pub struct PairInput {
    /// Parameters for f, e.g. 0,0,0,0,0,0
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Parameters for g, e.g. 1/3,1/3,2/3,2/3,1/6,5/6
    #[arg(long, value_name = "LIST")]
    beta: Option<String>,
    /// Cyclotomic factorization of f, e.g. 1^6
    #[arg(long, value_name = "FACTORS")]
    f: Option<String>,
    /// Cyclotomic factorization of g, e.g. 3^2,6
    #[arg(long, value_name = "FACTORS")]
    g: Option<String>,
    /// Ascending coefficients of f, e.g. 1,-6,15,-20,15,-6,1
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    f_coeffs: Option<String>,
    /// Ascending coefficients of g
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    g_coeffs: Option<String>,
    /// Row of the built-in unipotent table (f = (x-1)^6)
    #[arg(long, value_name = "ROW")]
    table_a: Option<usize>,
}

fn side(
    name: &str,
    params: &Option<String>,
    factors: &Option<String>,
    coeffs: &Option<String>,
) -> Result<Option<CycloFactorization>, CliError> {
    let bad = |e: &dyn std::fmt::Display| CliError::Input(format!("{name}: {e}"));
    match (params, factors, coeffs) {
        (None, None, None) => Ok(None),
        (Some(p), None, None) => {
            let list: ParameterList = p.parse().map_err(|e| bad(&e))?;
            factorization_from_parameters(&list)
                .map(Some)
                .map_err(|e| bad(&e))
        }
        (None, Some(f), None) => f.parse().map(Some).map_err(|e| bad(&e)),
        (None, None, Some(c)) => {
            let poly: IntPoly = c.parse().map_err(|e| bad(&e))?;
            factorization_from_poly(&poly)
                .map(Some)
                .map_err(|e| bad(&e))
        }
        _ => Err(CliError::Input(format!("{name} given more than one way"))),
    }
}

impl PairInput {
    pub fn resolve(&self) -> Result<QualifiedPair, CliError> {
        let f = side("f", &self.alpha, &self.f, &self.f_coeffs)?;
        let g = side("g", &self.beta, &self.g, &self.g_coeffs)?;
        let (f, g) = match (self.table_a, f, g) {
            (Some(row), None, None) => {
                let row = table_a_row(row)
                    .ok_or_else(|| CliError::Input(format!("no table row {row}")))?;
                return Ok(row.pair());
            }
            (Some(_), _, _) => {
                return Err(CliError::Input(
                    "--table-a cannot be combined with f or g".into(),
                ))
            }
            (None, Some(f), Some(g)) => (f, g),
            _ => return Err(CliError::Input(
                "need both sides: --alpha/--f/--f-coeffs and --beta/--g/--g-coeffs, or --table-a"
                    .into(),
            )),
        };
        QualifiedPair::new(f, g).map_err(|e| CliError::Input(e.to_string()))
    }
}
