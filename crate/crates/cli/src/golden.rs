//! Tolerance-based comparison of CSV outputs against checked-in files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Default tolerance for golden comparisons.
pub const GOLDEN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnDeviation {
    pub column: String,
    /// `max |a − b| / max(1, |b|)` over rows; infinite for a text mismatch.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenReport {
    pub tolerance: f64,
    pub columns: Vec<ColumnDeviation>,
    /// One entry per offending cell or structural difference.
    pub failures: Vec<String>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.columns {
            let _ = writeln!(s, "{:<36} max deviation {:.3e}", c.column, c.max_deviation);
        }
        for f in &self.failures {
            let _ = writeln!(s, "FAIL {f}");
        }
        let _ = write!(
            s,
            "{} (tolerance {:e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.tolerance
        );
        s
    }
}

struct Parsed {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn parse(path: &Path) -> CliResult<Parsed> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    let comments = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(str::to_owned)
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let header = reader.headers().map_err(bad)?.iter().map(str::to_owned).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_owned).collect()).map_err(bad))
        .collect::<CliResult<_>>()?;
    Ok(Parsed {
        comments,
        header,
        rows,
    })
}

/// Compares `produced` with `golden` cell by cell. Numeric cells match when
/// `|a − b| ≤ tolerance · max(1, |b|)`; other cells must be identical.
pub fn compare_golden(produced: &Path, golden: &Path, tolerance: f64) -> CliResult<GoldenReport> {
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::Config(format!("tolerance must be non-negative, got {tolerance}")));
    }
    let a = parse(produced)?;
    let b = parse(golden)?;
    let mut report = GoldenReport {
        tolerance,
        columns: Vec::new(),
        failures: Vec::new(),
    };
    if a.comments != b.comments {
        report.failures.push(format!(
            "schema line differs: produced {:?}, golden {:?}",
            a.comments, b.comments
        ));
    }
    if a.header != b.header {
        let missing: Vec<_> = b.header.iter().filter(|c| !a.header.contains(c)).collect();
        let extra: Vec<_> = a.header.iter().filter(|c| !b.header.contains(c)).collect();
        report.failures.push(format!(
            "column schema differs: missing {missing:?}, unexpected {extra:?}, produced order {:?}",
            a.header
        ));
        return Ok(report);
    }
    if a.rows.len() != b.rows.len() {
        report.failures.push(format!(
            "row count differs: produced {}, golden {}",
            a.rows.len(),
            b.rows.len()
        ));
    }
    report.columns = b
        .header
        .iter()
        .map(|c| ColumnDeviation {
            column: c.clone(),
            max_deviation: 0.0,
        })
        .collect();
    for (i, (ra, rb)) in a.rows.iter().zip(&b.rows).enumerate() {
        for (j, col) in report.columns.iter_mut().enumerate() {
            let (x, y) = (ra[j].as_str(), rb[j].as_str());
            let dev = match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(p), Ok(q)) => (p - q).abs() / q.abs().max(1.0),
                _ if x == y => 0.0,
                _ => f64::INFINITY,
            };
            col.max_deviation = col.max_deviation.max(dev);
            if dev.is_nan() || dev > tolerance {
                report.failures.push(format!(
                    "row {} column `{}`: produced {x}, golden {y} (deviation {dev:.3e})",
                    i + 1,
                    col.column
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    const BASE: &str = "# schema_version=1 table=t\nn,branch,value\n1,minus,1.0e0\n2,plus,2.5e9\n";

    #[test]
    fn identical_files_pass() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", BASE);
        let r = compare_golden(&a, &a, 0.0).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn perturbation_beyond_tolerance_names_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", BASE);
        let b = write(dir.path(), "b.csv", &BASE.replace("1.0e0", "1.00001e0"));
        let r = compare_golden(&b, &a, 1e-6).unwrap();
        assert!(!r.passed());
        assert!(r.failures[0].contains("row 1 column `value`"), "{:?}", r.failures);
        assert!(compare_golden(&b, &a, 1e-4).unwrap().passed());
    }

    #[test]
    fn large_values_compare_relatively() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", BASE);
        let b = write(dir.path(), "b.csv", &BASE.replace("2.5e9", "2.500001e9"));
        assert!(compare_golden(&b, &a, 1e-6).unwrap().passed());
    }

    #[test]
    fn text_cells_must_match_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", BASE);
        let b = write(dir.path(), "b.csv", &BASE.replace("minus", "plus"));
        assert!(!compare_golden(&b, &a, 1.0).unwrap().passed());
    }

    #[test]
    fn schema_mismatch_reports_column_diff() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", BASE);
        let b = write(dir.path(), "b.csv", &BASE.replace("value", "energy"));
        let r = compare_golden(&b, &a, 1e-6).unwrap();
        assert!(!r.passed());
        let msg = &r.failures[0];
        assert!(msg.contains("missing [\"value\"]") && msg.contains("unexpected [\"energy\"]"), "{msg}");
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", BASE);
        let err = compare_golden(&dir.path().join("nope.csv"), &a, 1e-6).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::exit::IO);
    }
}
