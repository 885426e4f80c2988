//! Result records and their CSV / JSON serialization.
//!
//! CSV: header row, then one line per record, floats as `{:.16e}` (17
//! significant digits, lossless for `f64`). Scalars are not part of the
//! table; in CSV mode they go to stderr as `# name = value` lines. JSON
//! carries both under the same field names.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format '{other}' (csv | json)")),
        }
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Quote a text cell when it contains a separator, quote or line break.
pub fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub trait CsvRow {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub command: String,
    /// `None` for scalars that do not apply (serialized as `null`).
    pub scalars: BTreeMap<String, Option<f64>>,
    pub rows: Vec<R>,
}

impl<R: CsvRow + Serialize> Report<R> {
    pub fn new(command: &str, rows: Vec<R>) -> Self {
        Self { command: command.to_string(), scalars: BTreeMap::new(), rows }
    }

    pub fn scalar(mut self, name: &str, value: impl Into<Option<f64>>) -> Self {
        self.scalars.insert(name.to_string(), value.into());
        self
    }

    pub fn to_csv(&self) -> String {
        let mut s = R::header().join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.cells().join(","));
            s.push('\n');
        }
        s
    }

    pub fn scalars_block(&self) -> String {
        self.scalars
            .iter()
            .map(|(k, v)| format!("# {k} = {}\n", v.map_or_else(|| "n/a".to_string(), fmt_f64)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|mut s| {
            s.push('\n');
            s
        })
    }

    /// Write the table to `out`; in CSV mode the scalars go to `diag`.
    pub fn emit(&self, format: Format, out: &mut dyn Write, diag: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                diag.write_all(self.scalars_block().as_bytes())?;
                out.write_all(self.to_csv().as_bytes())
            }
            Format::Json => out.write_all(self.to_json().map_err(std::io::Error::other)?.as_bytes()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoRow {
    pub lambda: f64,
    pub rho: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub eps: f64,
}

impl CsvRow for ThermoRow {
    fn header() -> &'static [&'static str] {
        &["lambda", "rho", "Z", "eps"]
    }
    fn cells(&self) -> Vec<String> {
        [self.lambda, self.rho, self.z, self.eps].map(fmt_f64).to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub m: f64,
    pub const_term: f64,
    pub power_term: f64,
    pub osc_term: f64,
    pub total: f64,
}

impl CsvRow for CorrelationRow {
    fn header() -> &'static [&'static str] {
        &["m", "const_term", "power_term", "osc_term", "total"]
    }
    fn cells(&self) -> Vec<String> {
        [self.m, self.const_term, self.power_term, self.osc_term, self.total].map(fmt_f64).to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingRow {
    pub m: f64,
    /// Σ_σ over the three shifts β + 2πiσ.
    pub g_re: f64,
    pub g_im: f64,
    /// The σ = 0 term alone.
    pub g0_re: f64,
    pub g0_im: f64,
}

impl CsvRow for GeneratingRow {
    fn header() -> &'static [&'static str] {
        &["m", "g_re", "g_im", "g0_re", "g0_im"]
    }
    fn cells(&self) -> Vec<String> {
        [self.m, self.g_re, self.g_im, self.g0_re, self.g0_im].map(fmt_f64).to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GskRow {
    pub m: f64,
    pub exact_logdet_re: f64,
    pub exact_logdet_im: f64,
    pub w0_re: f64,
    pub w0_im: f64,
    pub w0_wosc_re: f64,
    pub w0_wosc_im: f64,
    pub residual_w0: f64,
    pub residual_full: f64,
}

impl CsvRow for GskRow {
    fn header() -> &'static [&'static str] {
        &[
            "m",
            "exact_logdet_re",
            "exact_logdet_im",
            "w0_re",
            "w0_im",
            "w0_wosc_re",
            "w0_wosc_im",
            "residual_w0",
            "residual_full",
        ]
    }
    fn cells(&self) -> Vec<String> {
        [
            self.m,
            self.exact_logdet_re,
            self.exact_logdet_im,
            self.w0_re,
            self.w0_im,
            self.w0_wosc_re,
            self.w0_wosc_im,
            self.residual_w0,
            self.residual_full,
        ]
        .map(fmt_f64)
        .to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CsvRow for CheckRow {
    fn header() -> &'static [&'static str] {
        &["name", "residual", "tolerance", "passed"]
    }
    fn cells(&self) -> Vec<String> {
        vec![csv_text(&self.name), fmt_f64(self.residual), fmt_f64(self.tolerance), self.passed.to_string()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let r = Report::new("thermo", vec![ThermoRow { lambda: -0.5, rho: 0.25, z: 1.0, eps: -1.0 / 3.0 }]).scalar("q", 0.5);
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("lambda,rho,Z,eps"));
        assert_eq!(
            lines.next(),
            Some("-5.0000000000000000e-1,2.5000000000000000e-1,1.0000000000000000e0,-3.3333333333333331e-1")
        );
        assert_eq!(r.scalars_block(), "# q = 5.0000000000000000e-1\n");
    }

    #[test]
    fn text_cells_are_quoted() {
        assert_eq!(csv_text("plain"), "plain");
        assert_eq!(csv_text("a, b"), "\"a, b\"");
        assert_eq!(csv_text("say \"x\""), "\"say \"\"x\"\"\"");
    }

    #[test]
    fn csv_is_lossless() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_round_trip_with_missing_scalar() {
        let r = Report::new("jj", vec![CorrelationRow { m: 3.0, const_term: 0.1, power_term: -0.01, osc_term: 1e-3, total: 0.091 }])
            .scalar("F_sigma_sq", None)
            .scalar("D", 0.3);
        let back: Report<CorrelationRow> = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn thermo_json_uses_capital_z() {
        let r = Report::new("thermo", vec![ThermoRow { lambda: 0.0, rho: 0.3, z: 1.1, eps: -2.0 }]);
        assert!(r.to_json().unwrap().contains("\"Z\": 1.1"));
    }
}
