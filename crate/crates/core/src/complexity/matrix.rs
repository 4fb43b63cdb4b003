use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::sample::LabeledSample;

/// Schema tag written into serialized loss matrices.
pub const LOSS_MATRIX_SCHEMA: &str = "marginbound.loss-matrix.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeTag {
    Binary,
    UnitInterval,
    Real,
}

/// `m × P` table of per-point values for a finite pool: row `i` is sample
/// point `z_i`, column `j` is pool member `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct LossMatrix {
    rows: usize,
    cols: usize,
    /// column-major
    values: Vec<f64>,
    range: RangeTag,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    schema: String,
    range: RangeTag,
    rows: usize,
    cols: usize,
    values: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for LossMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.schema != LOSS_MATRIX_SCHEMA {
            return Err(Error::input(format!(
                "unsupported loss-matrix schema {:?}, expected {LOSS_MATRIX_SCHEMA:?}",
                r.schema
            )));
        }
        let m = LossMatrix::from_rows(r.values, r.range)?;
        if m.rows != r.rows || m.cols != r.cols {
            return Err(Error::input(format!(
                "declared shape {}x{} does not match data {}x{}",
                r.rows, r.cols, m.rows, m.cols
            )));
        }
        Ok(m)
    }
}

impl From<LossMatrix> for MatrixRepr {
    fn from(m: LossMatrix) -> Self {
        MatrixRepr {
            schema: LOSS_MATRIX_SCHEMA.to_string(),
            range: m.range,
            rows: m.rows,
            cols: m.cols,
            values: m.to_rows(),
        }
    }
}

impl LossMatrix {
    /// Build from rows (one per sample point).
    pub fn from_rows(rows: Vec<Vec<f64>>, range: RangeTag) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::input("loss matrix needs at least one row"));
        }
        let p = rows[0].len();
        if p == 0 || rows.iter().any(|r| r.len() != p) {
            return Err(Error::input("loss matrix rows must share a nonzero length"));
        }
        let mut values = vec![0.0; m * p];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                values[j * m + i] = v;
            }
        }
        Self::checked(m, p, values, range)
    }

    /// Build from columns (one per pool member).
    pub fn from_columns(cols: Vec<Vec<f64>>, range: RangeTag) -> Result<Self> {
        let p = cols.len();
        if p == 0 {
            return Err(Error::input("loss matrix needs at least one column"));
        }
        let m = cols[0].len();
        if m == 0 || cols.iter().any(|c| c.len() != m) {
            return Err(Error::input("loss matrix columns must share a nonzero length"));
        }
        Self::checked(m, p, cols.concat(), range)
    }

    fn checked(rows: usize, cols: usize, values: Vec<f64>, range: RangeTag) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Data(format!("loss matrix entry {v} is not finite")));
        }
        match range {
            RangeTag::Binary => {
                if let Some(v) = values.iter().find(|&&v| v != 0.0 && v != 1.0) {
                    return Err(Error::input(format!("binary matrix has entry {v}")));
                }
            }
            RangeTag::UnitInterval => {
                if let Some(v) = values.iter().find(|&&v| !(0.0..=1.0).contains(&v)) {
                    return Err(Error::input(format!("unit-interval matrix has entry {v}")));
                }
            }
            RangeTag::Real => {}
        }
        Ok(LossMatrix {
            rows,
            cols,
            values,
            range,
        })
    }

    /// Evaluate `f(y_i h_j(x_i))` for every point and pool member.
    pub fn from_margins(
        pool: &[Hypothesis],
        sample: &LabeledSample,
        f: impl Fn(f64) -> f64,
        range: RangeTag,
    ) -> Result<Self> {
        let cols = pool
            .iter()
            .map(|h| Ok(h.margins(sample)?.into_iter().map(&f).collect()))
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Self::from_columns(cols, range)
    }

    /// Raw outputs `h_j(x_i)`.
    pub fn from_outputs(pool: &[Hypothesis], sample: &LabeledSample) -> Result<Self> {
        let cols = pool
            .iter()
            .map(|h| (0..sample.len()).map(|i| h.evaluate_at(sample, i)).collect())
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Self::from_columns(cols, RangeTag::Real)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn range(&self) -> RangeTag {
        self.range
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Sub-matrix on the given columns; `None` when `idx` is empty.
    pub fn select_columns(&self, idx: &[usize]) -> Option<LossMatrix> {
        if idx.is_empty() {
            return None;
        }
        let values = idx.iter().flat_map(|&j| self.column(j).iter().copied()).collect();
        Some(LossMatrix {
            rows: self.rows,
            cols: idx.len(),
            values,
            range: self.range,
        })
    }

    pub(crate) fn require_binary(&self, what: &str) -> Result<()> {
        if self.range != RangeTag::Binary {
            return Err(Error::input(format!("{what} requires a binary loss matrix")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// CSV with a header `c0,c1,...`; one row per sample point.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record((0..self.cols).map(|j| format!("c{j}")))?;
        for row in self.to_rows() {
            out.write_record(row.iter().map(|v| v.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R, range: RangeTag) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::input(format!("bad matrix entry {f:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows, range)
    }
}
