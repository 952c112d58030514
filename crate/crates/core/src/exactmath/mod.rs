//! Exact scalar and linear algebra layer: the cyclotomic field Q(ζ_n),
//! prime-field images of it, dense matrices and polynomials.

mod cyclotomic;
mod matrix;
mod poly;
mod prime_field;
mod scalar;

use thiserror::Error;

pub use cyclotomic::{cyc_conj, cyc_mul, cyclotomic_polynomial, CycScalar, CyclotomicField};
pub use matrix::{rank_and_solve, Matrix, PivotOrder, RankSolve};
pub use poly::Poly;
pub use prime_field::{powmod, CyclotomicReduction, Fp};
pub use scalar::Scalar;

/// Matrices over Q(ζ_n).
pub type CycMatrix = Matrix<CycScalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("cannot combine elements of Q(zeta_{left}) and Q(zeta_{right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("invalid cyclotomic order {0}")]
    InvalidOrder(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("denominator vanishes modulo {0}")]
    BadReduction(u64),
}

/// JSON array of rows, each entry a scalar array of "num/den" strings.
pub fn matrix_to_json(m: &CycMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows())
            .map(|i| serde_json::Value::Array(m.row(i).iter().map(|x| x.to_json()).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(
    field: &std::sync::Arc<CyclotomicField>,
    v: &serde_json::Value,
) -> Result<CycMatrix, ExactError> {
    let rows = v
        .as_array()
        .ok_or_else(|| ExactError::Parse("matrix must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| ExactError::Parse("row must be an array".into()))?
                .iter()
                .map(|x| CycScalar::from_json(field, x))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let width = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != width) {
        return Err(ExactError::Parse("ragged matrix".into()));
    }
    Ok(Matrix::from_rows(rows, &CycScalar::zero(field)))
}
