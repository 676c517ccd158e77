//! Serializable result rows and writers for verification and spectrum
//! reports, emitted as JSON lines or CSV with a header row.

use serde::Serialize;

/// Schema tag stamped on every emitted row.
pub const SCHEMA: &str = "ncspin/1";

/// Outcome row of a single named verification check.
#[derive(Serialize, Clone, Debug)]
pub struct CheckRow {
    pub schema: &'static str,
    pub suite: String,
    pub check: String,
    pub anchor: String,
    pub backend: String,
    pub status: String,
    pub deviation: f64,
}

/// One eigenvalue cluster of a reported operator, or a warning row when the
/// spectrum is empty at the requested cutoff.
#[derive(Serialize, Clone, Debug)]
pub struct SpectrumRow {
    pub schema: &'static str,
    pub operator: String,
    pub backend: String,
    pub n: usize,
    pub cutoff: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl SpectrumRow {
    pub fn cluster(
        operator: &str,
        backend: &str,
        n: usize,
        cutoff: u32,
        eigenvalue: f64,
        multiplicity: usize,
    ) -> SpectrumRow {
        SpectrumRow {
            schema: SCHEMA,
            operator: operator.to_string(),
            backend: backend.to_string(),
            n,
            cutoff,
            eigenvalue: Some(round_eigenvalue(eigenvalue)),
            multiplicity: Some(multiplicity),
            note: String::new(),
        }
    }

    pub fn warning(operator: &str, backend: &str, n: usize, cutoff: u32, note: &str) -> SpectrumRow {
        SpectrumRow {
            schema: SCHEMA,
            operator: operator.to_string(),
            backend: backend.to_string(),
            n,
            cutoff,
            eigenvalue: None,
            multiplicity: None,
            note: note.to_string(),
        }
    }
}

/// One entry of the curvature report: a component of the table, the scalar
/// curvature, or the echoed status of a symmetry relation.
#[derive(Serialize, Clone, Debug)]
pub struct CurvatureRow {
    pub schema: &'static str,
    pub kind: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices: Option<[usize; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

/// Rounds spectral values so that emitted reports are stable across runs.
pub fn round_eigenvalue(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// Serializes rows as newline-terminated JSON objects, one per line.
pub fn json_lines<T: Serialize>(rows: &[T]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("report rows serialize"));
        out.push('\n');
    }
    out
}

/// Row types that know their CSV header and field encoding.
pub trait CsvRow {
    fn header() -> &'static str;
    fn record(&self) -> String;
}

/// Serializes rows as CSV with a header line.
pub fn csv<T: CsvRow>(rows: &[T]) -> String {
    let mut out = String::from(T::header());
    out.push('\n');
    for row in rows {
        out.push_str(&row.record());
        out.push('\n');
    }
    out
}

fn opt_num<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl CsvRow for CheckRow {
    fn header() -> &'static str {
        "suite,check,anchor,backend,status,deviation"
    }

    fn record(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.suite, self.check, self.anchor, self.backend, self.status, self.deviation
        )
    }
}

impl CsvRow for SpectrumRow {
    fn header() -> &'static str {
        "operator,backend,n,cutoff,eigenvalue,multiplicity,note"
    }

    fn record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.operator,
            self.backend,
            self.n,
            self.cutoff,
            opt_num(&self.eigenvalue),
            opt_num(&self.multiplicity),
            self.note
        )
    }
}

impl CsvRow for CurvatureRow {
    fn header() -> &'static str {
        "kind,n,i,j,k,l,value,relation,status"
    }

    fn record(&self) -> String {
        let idx = match &self.indices {
            Some([i, j, k, l]) => format!("{i},{j},{k},{l}"),
            None => ",,,".to_string(),
        };
        format!(
            "{},{},{},{},{},{}",
            self.kind,
            self.n,
            idx,
            self.value.clone().unwrap_or_default(),
            self.relation.clone().unwrap_or_default(),
            self.status.clone().unwrap_or_default()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_lines_are_one_object_per_line() {
        let rows = vec![
            SpectrumRow::cluster("dirac", "peter-weyl", 2, 1, -1.0000000000000004, 2),
            SpectrumRow::warning("dirac", "peter-weyl", 2, 0, "empty spectrum"),
        ];
        let text = json_lines(&rows);
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["schema"], "ncspin/1");
        assert_eq!(first["eigenvalue"], -1.0);
        assert_eq!(first["multiplicity"], 2);
        let second: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert!(second.get("eigenvalue").is_none());
        assert_eq!(second["note"], "empty spectrum");
    }

    #[test]
    fn csv_has_header_and_blank_fields_for_warnings() {
        let rows = vec![
            SpectrumRow::cluster("dirac", "peter-weyl", 2, 1, 1.0, 2),
            SpectrumRow::warning("dirac", "peter-weyl", 2, 0, "empty spectrum"),
        ];
        let text = csv(&rows);
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines[0], "operator,backend,n,cutoff,eigenvalue,multiplicity,note");
        assert_eq!(lines[1], "dirac,peter-weyl,2,1,1,2,");
        assert_eq!(lines[2], "dirac,peter-weyl,2,0,,,empty spectrum");
    }

    #[test]
    fn eigenvalue_rounding_is_stable() {
        assert_eq!(round_eigenvalue(0.9999999999999998), 1.0);
        assert_eq!(round_eigenvalue(-2.0000000000000013), -2.0);
        assert_eq!(round_eigenvalue(0.5), 0.5);
    }
}
