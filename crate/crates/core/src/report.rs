//! Machine-readable suite results: CSV, JSON and an SVG pass/fail summary.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::{Result, VexError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Informational => write!(f, "informational"),
        }
    }
}

impl std::str::FromStr for Verdict {
    type Err = VexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "informational" => Ok(Verdict::Informational),
            other => Err(VexError::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub wall_ms: u64,
}

impl SuiteResult {
    /// Pass/fail from a comparison that already encodes its tolerance.
    pub fn check(suite: &str, case: &str, lhs: f64, rhs: f64, tolerance: f64, ok: bool) -> Self {
        SuiteResult {
            suite: suite.to_string(),
            case: case.to_string(),
            lhs,
            rhs,
            ratio: if rhs != 0.0 { lhs / rhs } else { 0.0 },
            tolerance,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            wall_ms: 0,
        }
    }

    pub fn informational(suite: &str, case: &str, lhs: f64, rhs: f64) -> Self {
        SuiteResult {
            suite: suite.to_string(),
            case: case.to_string(),
            lhs,
            rhs,
            ratio: if rhs != 0.0 { lhs / rhs } else { 0.0 },
            tolerance: 0.0,
            verdict: Verdict::Informational,
            wall_ms: 0,
        }
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.12e}")
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    match s {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        other => other
            .parse()
            .map_err(|e| VexError::Parse(format!("bad number {other:?}: {e}"))),
    }
}

pub const CSV_HEADER: &str = "suite,case,lhs,rhs,ratio,tolerance,verdict,wall_ms";

pub fn emit_csv(results: &[SuiteResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.suite,
            r.case,
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.ratio),
            fmt_f64(r.tolerance),
            r.verdict,
            r.wall_ms
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SuiteResult>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(VexError::Parse(format!("bad CSV header: {other:?}"))),
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(VexError::Parse(format!(
                "line {}: expected 8 columns, got {}",
                lineno + 2,
                cols.len()
            )));
        }
        out.push(SuiteResult {
            suite: cols[0].to_string(),
            case: cols[1].to_string(),
            lhs: parse_f64(cols[2])?,
            rhs: parse_f64(cols[3])?,
            ratio: parse_f64(cols[4])?,
            tolerance: parse_f64(cols[5])?,
            verdict: cols[6].parse()?,
            wall_ms: cols[7]
                .parse()
                .map_err(|e| VexError::Parse(format!("line {}: {e}", lineno + 2)))?,
        });
    }
    Ok(out)
}

pub fn emit_json(results: &[SuiteResult]) -> String {
    serde_json::to_string_pretty(results).expect("suite results serialize")
}

pub fn parse_json(text: &str) -> Result<Vec<SuiteResult>> {
    serde_json::from_str(text).map_err(|e| VexError::Parse(e.to_string()))
}

/// One bar per suite showing pass/fail/informational counts.
pub fn emit_svg_summary(results: &[SuiteResult]) -> String {
    let mut suites: Vec<String> = Vec::new();
    for r in results {
        if !suites.contains(&r.suite) {
            suites.push(r.suite.clone());
        }
    }
    let row_h = 26;
    let width = 640;
    let height = 40 + row_h * suites.len();
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         font-family=\"monospace\" font-size=\"12\">\n"
    );
    svg.push_str("<text x=\"10\" y=\"20\">suite verification summary</text>\n");
    for (k, suite) in suites.iter().enumerate() {
        let pass = results.iter().filter(|r| &r.suite == suite && r.verdict == Verdict::Pass).count();
        let fail = results.iter().filter(|r| &r.suite == suite && r.verdict == Verdict::Fail).count();
        let info = results
            .iter()
            .filter(|r| &r.suite == suite && r.verdict == Verdict::Informational)
            .count();
        let total = (pass + fail + info).max(1);
        let y = 34 + row_h * k;
        let bar_x = 150;
        let bar_w = 380.0;
        let pw = bar_w * pass as f64 / total as f64;
        let fw = bar_w * fail as f64 / total as f64;
        let iw = bar_w * info as f64 / total as f64;
        svg.push_str(&format!("<text x=\"10\" y=\"{}\">{}</text>\n", y + 14, suite));
        svg.push_str(&format!(
            "<rect x=\"{bar_x}\" y=\"{y}\" width=\"{pw:.1}\" height=\"18\" fill=\"#2e7d32\"/>\n"
        ));
        svg.push_str(&format!(
            "<rect x=\"{:.1}\" y=\"{y}\" width=\"{fw:.1}\" height=\"18\" fill=\"#c62828\"/>\n",
            bar_x as f64 + pw
        ));
        svg.push_str(&format!(
            "<rect x=\"{:.1}\" y=\"{y}\" width=\"{iw:.1}\" height=\"18\" fill=\"#9e9e9e\"/>\n",
            bar_x as f64 + pw + fw
        ));
        svg.push_str(&format!(
            "<text x=\"540\" y=\"{}\">{}p/{}f/{}i</text>\n",
            y + 14,
            pass,
            fail,
            info
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    SvgSummary,
}

impl std::str::FromStr for ReportFormat {
    type Err = VexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "svg-summary" => Ok(ReportFormat::SvgSummary),
            other => Err(VexError::Parse(format!("unknown report format {other:?}"))),
        }
    }
}

/// Writes results in the requested format; empty result lists are rejected.
pub fn emit_report(results: &[SuiteResult], format: ReportFormat, path: &Path) -> Result<()> {
    if results.is_empty() {
        return Err(VexError::Domain("cannot emit an empty result list".into()));
    }
    let text = match format {
        ReportFormat::Csv => emit_csv(results),
        ReportFormat::Json => emit_json(results),
        ReportFormat::SvgSummary => emit_svg_summary(results),
    };
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<SuiteResult> {
        vec![
            SuiteResult::check("identities", "case-a", 1.0, 1.0, 1e-8, true),
            SuiteResult::check("identities", "case-b", 2.0, 1.0, 1e-8, false),
            SuiteResult::informational("convolution", "ratio", 3.5, 1.0),
        ]
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let rs = sample();
        let text = emit_csv(&rs);
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(rs, parsed);
        assert_eq!(text, emit_csv(&parsed));
        assert!(text.starts_with(CSV_HEADER));
    }

    #[test]
    fn json_round_trips() {
        let rs = sample();
        let parsed = parse_json(&emit_json(&rs)).unwrap();
        assert_eq!(rs, parsed);
    }

    #[test]
    fn empty_results_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        assert!(emit_report(&[], ReportFormat::Csv, &path).is_err());
        assert!(emit_report(&sample(), ReportFormat::Csv, &path).is_ok());
    }

    #[test]
    fn svg_contains_suite_rows() {
        let svg = emit_svg_summary(&sample());
        assert!(svg.contains("identities"));
        assert!(svg.contains("convolution"));
        assert!(svg.contains("1p/1f/0i"));
    }

    #[test]
    fn single_pass_result_is_one_row() {
        let rs = vec![SuiteResult::check("s", "c", 1.0, 1.0, 0.0, true)];
        let text = emit_csv(&rs);
        assert_eq!(text.lines().count(), 2);
    }
}
