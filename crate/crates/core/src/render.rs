//! Output formatting: upward rounding, markdown / CSV / JSON tables and the
//! run manifest embedded in JSON output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::classic::BoundReport;
use crate::error::{params, Error, Result};
use crate::optimize::SearchConfig;

/// Slack subtracted before rounding up, so values such as `0.192` that are
/// exact up to representation error keep their printed digits.
pub const ROUNDING_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" | "markdown" => Ok(Self::Markdown),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(params(format!("unknown format `{other}` (md, csv, json)"))),
        }
    }
}

pub fn check_precision(digits: usize) -> Result<()> {
    if (1..=15).contains(&digits) {
        Ok(())
    } else {
        Err(params(format!("precision must lie in [1, 15], got {digits}")))
    }
}

/// `x` rounded up to `digits` decimals, in units of `10^-digits`.
pub fn round_up_units(x: f64, digits: usize) -> i64 {
    let scale = 10f64.powi(digits as i32);
    (x * scale - ROUNDING_SLACK).ceil() as i64
}

pub fn round_up(x: f64, digits: usize) -> f64 {
    round_up_units(x, digits) as f64 / 10f64.powi(digits as i32)
}

/// `x` rounded up and printed with exactly `digits` decimals.
pub fn format_up(x: f64, digits: usize) -> String {
    let units = round_up_units(x, digits);
    let scale = 10i64.pow(digits as u32);
    let sign = if units < 0 { "-" } else { "" };
    let u = units.unsigned_abs() as i64;
    format!("{sign}{}.{:0width$}", u / scale, u % scale, width = digits)
}

/// Distance in units of the last printed decimal between `x` rounded up and
/// a printed value.
pub fn unit_distance(x: f64, printed: f64, digits: usize) -> i64 {
    let scale = 10f64.powi(digits as i32);
    (round_up_units(x, digits) - (printed * scale).round() as i64).abs()
}

/// One table cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cell {
    Text { text: String },
    /// A recomputed bound; `expected` is the published value when there is one.
    Computed {
        value: f64,
        expected: Option<f64>,
        mismatch: bool,
        note: Option<String>,
    },
    /// A stored published value that is not recomputed.
    Reference { value: f64 },
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text { text: s.into() }
    }

    fn display(&self, digits: usize, format: OutputFormat) -> String {
        match self {
            Cell::Text { text } => text.clone(),
            Cell::Computed {
                value,
                mismatch,
                note,
                expected,
            } => {
                let mut s = format_up(*value, digits);
                if let Some(n) = note {
                    write!(s, " ({n})").expect("string write");
                }
                if *mismatch {
                    let e = expected.map(|e| format!("{e:.5}")).unwrap_or_default();
                    s.push_str(&match format {
                        OutputFormat::Markdown => format!(" **MISMATCH {e}**"),
                        _ => format!(" MISMATCH {e}"),
                    });
                }
                s
            }
            Cell::Reference { value } => match format {
                OutputFormat::Markdown => format!("_{value:.5}_"),
                _ => format!("ref:{value:.5}"),
            },
        }
    }
}

/// A titled table of cells.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub footnotes: Vec<String>,
}

impl Table {
    pub fn mismatches(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .filter(|c| matches!(c, Cell::Computed { mismatch: true, .. }))
            .count()
    }

    pub fn render(&self, format: OutputFormat, digits: usize, manifest: &Manifest) -> String {
        match format {
            OutputFormat::Markdown => {
                let mut out = format!("### {}\n\n", self.title);
                writeln!(out, "| {} |", self.columns.join(" | ")).expect("string write");
                writeln!(out, "|{}", "---|".repeat(self.columns.len())).expect("string write");
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| c.display(digits, format)).collect();
                    writeln!(out, "| {} |", cells.join(" | ")).expect("string write");
                }
                for f in &self.footnotes {
                    write!(out, "\n{f}\n").expect("string write");
                }
                out
            }
            OutputFormat::Csv => {
                let mut out = String::new();
                writeln!(out, "{}", self.columns.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))
                    .expect("string write");
                for row in &self.rows {
                    let cells: Vec<String> =
                        row.iter().map(|c| csv_field(&c.display(digits, format))).collect();
                    writeln!(out, "{}", cells.join(",")).expect("string write");
                }
                out
            }
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (col, cell) in self.columns.iter().zip(row) {
                            let mut v = serde_json::to_value(cell).expect("cell serializes");
                            if let Cell::Computed { value, .. } = cell {
                                v["rounded"] = json!(format_up(*value, digits));
                            }
                            obj.insert(col.clone(), v);
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "manifest": manifest,
                    "title": self.title,
                    "columns": self.columns,
                    "rows": rows,
                    "footnotes": self.footnotes,
                    "mismatches": self.mismatches(),
                });
                serde_json::to_string_pretty(&doc).expect("json") + "\n"
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Provenance attached to every JSON document.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: u64,
    pub search: SearchConfig,
    pub precision: usize,
    pub rounding: &'static str,
}

impl Manifest {
    pub fn new(command: &str, arguments: Vec<String>, search: &SearchConfig, precision: usize) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            arguments,
            seed: search.seed,
            search: search.clone(),
            precision,
            rounding: "upward",
        }
    }
}

/// A JSON document: the manifest plus a payload under `result`.
pub fn json_document(manifest: &Manifest, result: &impl Serialize) -> String {
    let doc = json!({ "manifest": manifest, "result": result });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}

/// Bound reports as a table, one row per report.
///
/// JSON keeps full precision and adds a `rounded` string per report; the
/// text formats print rounded values, with intermediates and notes as
/// footnotes when `verbose` is set.
pub fn render_reports(
    title: &str,
    reports: &[BoundReport],
    format: OutputFormat,
    digits: usize,
    manifest: &Manifest,
    verbose: bool,
) -> String {
    if format == OutputFormat::Json {
        let items: Vec<Value> = reports
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("report serializes");
                v["rounded"] = json!(format_up(r.value, digits));
                v
            })
            .collect();
        return json_document(manifest, &items);
    }
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                Cell::text(r.method.short_name()),
                Cell::text(r.params.b.to_string()),
                Cell::text(r.params.k.to_string()),
                Cell::text(r.params.j.map(|j| j.to_string()).unwrap_or_default()),
                Cell::text(r.epsilon.map(|e| format!("{e}")).unwrap_or_default()),
                Cell::Computed {
                    value: r.value,
                    expected: None,
                    mismatch: false,
                    note: r.is_conjecture().then(|| "CONJECTURE".to_string()),
                },
            ]
        })
        .collect();
    let mut footnotes = Vec::new();
    for r in reports {
        for n in &r.notes {
            if verbose || r.is_conjecture() {
                footnotes.push(format!("{} ({},{}): {n}", r.method, r.params.b, r.params.k));
            }
        }
        if verbose {
            for (key, v) in &r.intermediates {
                let shown = match v {
                    Value::Number(x) => x.to_string(),
                    Value::String(x) => x.clone(),
                    other => other.to_string(),
                };
                footnotes.push(format!("{} ({},{}) {key} = {shown}", r.method, r.params.b, r.params.k));
            }
        }
    }
    let table = Table {
        title: title.to_string(),
        columns: ["method", "b", "k", "j", "eps", "bound"].map(String::from).to_vec(),
        rows,
        footnotes: if format == OutputFormat::Markdown { footnotes.clone() } else { Vec::new() },
    };
    let mut out = table.render(format, digits, manifest);
    if format == OutputFormat::Csv && !footnotes.is_empty() {
        for f in footnotes {
            writeln!(out, "# {f}").expect("string write");
        }
    }
    out
}
