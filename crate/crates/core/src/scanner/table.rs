//! Prime-power congruences for seven quotients of Eisenstein series along
//! the progressions `n = 2 mod 3` and `n = 4 mod 8`.

use serde::{Deserialize, Serialize};

use crate::eisenstein::eisenstein_product;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    /// Quotient as written in the table, e.g. `E2^2/E6`.
    pub name: String,
    /// Exponents of `E2`, `E4`, `E6` (the `E2` exponent may be negative).
    pub exponents: (i64, i64, i64),
    pub step: u64,
    pub residue: u64,
    pub modulus: u64,
}

impl TableRow {
    pub fn new(
        name: &str,
        exponents: (i64, i64, i64),
        step: u64,
        residue: u64,
        modulus: u64,
    ) -> Self {
        Self {
            name: name.to_string(),
            exponents,
            step,
            residue,
            modulus,
        }
    }
}

pub const ROW_NAMES: [&str; 7] = ["1/E2", "1/E4", "1/E6", "E2/E4", "E2/E6", "E4/E6", "E2^2/E6"];

/// Every entry of the table; `1/E6` and `E2/E6` carry two entries each.
pub fn table_rows() -> Vec<TableRow> {
    vec![
        TableRow::new("1/E2", (-1, 0, 0), 3, 2, 81),
        TableRow::new("1/E4", (0, -1, 0), 3, 2, 9),
        TableRow::new("1/E6", (0, 0, -1), 3, 2, 27),
        TableRow::new("1/E6", (0, 0, -1), 8, 4, 49),
        TableRow::new("E2/E4", (1, -1, 0), 3, 2, 27),
        TableRow::new("E2/E6", (1, 0, -1), 3, 2, 9),
        TableRow::new("E2/E6", (1, 0, -1), 8, 4, 49),
        TableRow::new("E4/E6", (0, 1, -1), 3, 2, 27),
        TableRow::new("E2^2/E6", (2, 0, -1), 3, 2, 243),
    ]
}

/// Entries for a row name, or all of them for `"all"`.
pub fn rows_named(name: &str) -> Result<Vec<TableRow>> {
    let rows = table_rows();
    if name == "all" {
        return Ok(rows);
    }
    let picked: Vec<_> = rows.into_iter().filter(|r| r.name == name).collect();
    if picked.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "unknown row {name:?}; expected one of {} or all",
            ROW_NAMES.join(", ")
        )));
    }
    Ok(picked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub row: TableRow,
    /// Coefficients `a(0), ..., a(terms - 1)` were expanded.
    pub terms: u64,
    /// How many of them lie in the progression.
    pub checked: u64,
}

/// First index in the row's progression whose coefficient is nonzero.
pub fn first_counterexample(row: &TableRow, terms: u64) -> Result<Option<(u64, u64)>> {
    let (a, b, c) = row.exponents;
    let f = eisenstein_product(a, b, c, row.modulus, terms as i64)?;
    Ok((row.residue..terms)
        .step_by(row.step as usize)
        .map(|n| (n, f.coeff(n as i64).unwrap_or(0)))
        .find(|&(_, v)| v != 0))
}

/// Checks every row through `terms` coefficients, stopping at the first
/// counterexample.
pub fn verify_table(rows: &[TableRow], terms: u64) -> Result<Vec<TableCheck>> {
    if terms < 100 {
        return Err(Error::InvalidArgument(format!(
            "table verification needs at least 100 terms, got {terms}"
        )));
    }
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        if let Some((index, value)) = first_counterexample(row, terms)? {
            return Err(Error::TableCounterexample {
                row: row.name.clone(),
                index,
                value,
                modulus: row.modulus,
            });
        }
        let checked = (row.residue..terms).step_by(row.step as usize).count() as u64;
        out.push(TableCheck {
            row: row.clone(),
            terms,
            checked,
        });
    }
    Ok(out)
}
