//! JSON monad files.
//!
//! ```json
//! { "ambient_n": 3, "field": "Q", "v": 1, "w": 4, "v_prime": 1,
//!   "alpha": [A_0, ..., A_n], "beta": [B_0, ..., B_n] }
//! ```
//!
//! Each `A_t` / `B_t` is the coefficient matrix of `x_t`, written as an
//! array of rows of strings (reduced rationals, or residues in `[0, p)`).

use serde::{Deserialize, Serialize};

use super::{AnyMonad, SpecialMonad};
use crate::error::{Error, Result};
use crate::exactlin::{DenseMatrix, Field, FieldKind, LinearFormMatrix, PrimeField, Rationals};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonadFile {
    ambient_n: usize,
    field: String,
    v: usize,
    w: usize,
    v_prime: usize,
    alpha: Vec<Vec<Vec<String>>>,
    beta: Vec<Vec<Vec<String>>>,
}

/// Canonical serialization; `decode(encode(m)) == m` and re-encoding is byte-identical.
pub fn encode<F: Field>(m: &SpecialMonad<F>) -> String {
    let f = m.field();
    let dump = |l: &LinearFormMatrix<F>| -> Vec<Vec<Vec<String>>> {
        l.coeffs()
            .iter()
            .map(|a| {
                (0..a.rows())
                    .map(|i| a.row(i).iter().map(|x| f.format(x)).collect())
                    .collect()
            })
            .collect()
    };
    let file = MonadFile {
        ambient_n: m.ambient(),
        field: f.kind().to_string(),
        v: m.v(),
        w: m.w(),
        v_prime: m.v_prime(),
        alpha: dump(m.alpha()),
        beta: dump(m.beta()),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("monad files always serialize");
    s.push('\n');
    s
}

/// Parse a monad file, reporting the position of the first problem.
pub fn decode(bytes: &[u8]) -> Result<AnyMonad> {
    let file: MonadFile = serde_json::from_slice(bytes).map_err(|e| Error::Malformed {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let kind: FieldKind = file.field.parse().map_err(|e: Error| Error::Malformed {
        location: "field".into(),
        message: e.to_string(),
    })?;
    match kind {
        FieldKind::Rational => Ok(AnyMonad::Rational(build(&file, &Rationals)?)),
        FieldKind::Prime(p) => Ok(AnyMonad::Prime(build(&file, &PrimeField::new(p)?)?)),
    }
}

fn build<F: Field>(file: &MonadFile, field: &F) -> Result<SpecialMonad<F>> {
    if !(2..=3).contains(&file.ambient_n) {
        return Err(Error::Malformed {
            location: "ambient_n".into(),
            message: format!("must be 2 or 3, got {}", file.ambient_n),
        });
    }
    let vars = file.ambient_n + 1;
    let alpha = parse_map(field, "alpha", &file.alpha, vars, file.w, file.v)?;
    let beta = parse_map(field, "beta", &file.beta, vars, file.v_prime, file.w)?;
    SpecialMonad::new(file.ambient_n, alpha, beta)
}

fn parse_map<F: Field>(
    field: &F,
    name: &str,
    raw: &[Vec<Vec<String>>],
    vars: usize,
    rows: usize,
    cols: usize,
) -> Result<LinearFormMatrix<F>> {
    let malformed = |location: String, message: String| Error::Malformed { location, message };
    if raw.len() != vars {
        return Err(malformed(
            name.to_string(),
            format!("expected {vars} coefficient matrices, found {}", raw.len()),
        ));
    }
    let mut coeffs = Vec::with_capacity(vars);
    for (t, mat) in raw.iter().enumerate() {
        if mat.len() != rows {
            return Err(malformed(
                format!("{name}[{t}]"),
                format!("expected {rows} rows, found {}", mat.len()),
            ));
        }
        let mut parsed = Vec::with_capacity(rows);
        for (i, row) in mat.iter().enumerate() {
            if row.len() != cols {
                return Err(malformed(
                    format!("{name}[{t}][{i}]"),
                    format!("expected {cols} columns, found {}", row.len()),
                ));
            }
            let entries = row
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    field
                        .parse(s)
                        .map_err(|e| malformed(format!("{name}[{t}][{i}][{j}]"), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            parsed.push(entries);
        }
        coeffs.push(DenseMatrix::from_rows(field, parsed, cols)?);
    }
    LinearFormMatrix::new(field, rows, cols, coeffs)
}
