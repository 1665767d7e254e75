//! Tabulated optical constants on the real frequency axis.
//!
//! CSV schema: header `omega_rad_s,eps1,eps2`, rows ascending in `omega`,
//! `#`-prefixed lines are comments.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalRow {
    #[serde(rename = "omega_rad_s")]
    pub omega: f64,
    pub eps1: f64,
    pub eps2: f64,
}

/// Complex permittivity samples ε(ω) = eps1 + i·eps2 with strictly increasing
/// positive `omega` and non-negative `eps2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    rows: Vec<OpticalRow>,
}

impl OpticalDataTable {
    pub fn new(rows: Vec<OpticalRow>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::invalid(format!(
                "optical table needs at least 2 rows, got {}",
                rows.len()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if !(r.omega.is_finite() && r.omega > 0.0) {
                return Err(Error::invalid(format!(
                    "row {i}: omega must be positive, got {}",
                    r.omega
                )));
            }
            if !(r.eps2.is_finite() && r.eps2 >= 0.0) {
                return Err(Error::invalid(format!("row {i}: eps2 must be >= 0, got {}", r.eps2)));
            }
            if !r.eps1.is_finite() {
                return Err(Error::invalid(format!("row {i}: eps1 is not finite")));
            }
        }
        if let Some(i) = rows.windows(2).position(|w| w[1].omega <= w[0].omega) {
            return Err(Error::invalid(format!(
                "omega not strictly increasing at row {}",
                i + 1
            )));
        }
        Ok(Self { rows })
    }

    pub fn from_triples(data: impl IntoIterator<Item = (f64, f64, f64)>) -> Result<Self> {
        Self::new(
            data.into_iter()
                .map(|(omega, eps1, eps2)| OpticalRow { omega, eps1, eps2 })
                .collect(),
        )
    }

    pub fn rows(&self) -> &[OpticalRow] {
        &self.rows
    }

    pub fn omega_min(&self) -> f64 {
        self.rows[0].omega
    }

    pub fn omega_max(&self) -> f64 {
        self.rows[self.rows.len() - 1].omega
    }

    /// eps2 at `omega`, linearly interpolated; `omega` must lie in the table range.
    pub(crate) fn eps2_interp(&self, omega: f64) -> f64 {
        let rows = &self.rows;
        let i = rows.partition_point(|r| r.omega <= omega);
        if i == 0 {
            return rows[0].eps2;
        }
        if i >= rows.len() {
            return rows[rows.len() - 1].eps2;
        }
        let (lo, hi) = (&rows[i - 1], &rows[i]);
        let t = (omega - lo.omega) / (hi.omega - lo.omega);
        lo.eps2 + t * (hi.eps2 - lo.eps2)
    }

    pub fn read_csv<R: Read>(reader: R, source: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| csv_error(e, source))?.clone();
        let expected = ["omega_rad_s", "eps1", "eps2"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Parse {
                path: source.to_string(),
                line: 1,
                message: format!("expected header `{}`", expected.join(",")),
            });
        }
        let mut rows = Vec::new();
        for rec in rdr.deserialize::<OpticalRow>() {
            rows.push(rec.map_err(|e| csv_error(e, source))?);
        }
        Self::new(rows).map_err(|e| Error::Parse {
            path: source.to_string(),
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file, &path.display().to_string())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.rows {
            w.serialize(r).map_err(|e| csv_error(e, "<output>"))?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_error(e: csv::Error, source: &str) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse {
        path: source.to_string(),
        line,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(OpticalDataTable::from_triples([(1.0, 1.0, 0.0)]).is_err());
        assert!(OpticalDataTable::from_triples([(2.0, 1.0, 0.0), (1.0, 1.0, 0.0)]).is_err());
        assert!(OpticalDataTable::from_triples([(1.0, 1.0, 0.0), (1.0, 1.0, 0.0)]).is_err());
        assert!(OpticalDataTable::from_triples([(0.0, 1.0, 0.0), (1.0, 1.0, 0.0)]).is_err());
        assert!(OpticalDataTable::from_triples([(1.0, 1.0, -0.1), (2.0, 1.0, 0.0)]).is_err());
    }

    #[test]
    fn csv_with_comments_parses() {
        let text = "# silicon sample\nomega_rad_s,eps1,eps2\n1e14,11.7,0.0\n# mid\n2e14,11.8,0.01\n";
        let t = OpticalDataTable::read_csv(text.as_bytes(), "mem").unwrap();
        assert_eq!(t.rows().len(), 2);
        assert_eq!(t.rows()[1].eps2, 0.01);
    }

    #[test]
    fn csv_error_reports_line() {
        let text = "omega_rad_s,eps1,eps2\n1e14,11.7,0.0\n2e14,abc,0.01\n";
        match OpticalDataTable::read_csv(text.as_bytes(), "mem") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_wrong_header() {
        let text = "w,e1,e2\n1,1,0\n2,1,0\n";
        assert!(matches!(
            OpticalDataTable::read_csv(text.as_bytes(), "mem"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn interpolation_is_linear() {
        let t = OpticalDataTable::from_triples([(1.0, 1.0, 0.0), (3.0, 1.0, 2.0)]).unwrap();
        assert_eq!(t.eps2_interp(2.0), 1.0);
        assert_eq!(t.eps2_interp(3.0), 2.0);
    }
}
