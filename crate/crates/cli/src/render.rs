//! Output records and their pretty, JSON and CSV renderings.
//!
//! Exact values are always decimal integer or `p/q` strings. Floating-point
//! approximations appear only in fields and columns named `*_approx`.

use std::fmt::Write as _;
use std::io;

use clap::ValueEnum;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use pathcount::asymptotics::{BValue, LimitReport, Provenance};
use pathcount::identities::IdentityReport;
use pathcount::{Integer, MultiIndex, ParamVec, Rational, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOut {
    pub c: Vec<u32>,
    pub i: Vec<u32>,
    pub method: String,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BValueOut {
    pub c: Vec<u32>,
    pub prefix: Vec<u32>,
    pub value: String,
    pub value_approx: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRowOut {
    pub h: u32,
    pub ratio: String,
    pub error: String,
    pub error_approx: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitOut {
    pub c: Vec<u32>,
    pub prefix: Vec<u32>,
    pub limit: String,
    pub tolerance: String,
    pub rows: Vec<LimitRowOut>,
    pub final_error: String,
    pub pass: bool,
    pub decay_factor: Option<String>,
    pub expected_decay: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowOut {
    pub index: u32,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableOut {
    pub kind: String,
    pub rows: Vec<TableRowOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyOut {
    pub kind: String,
    pub k: u64,
    /// `n` for Gamma and Delta, `a` for thm1.
    pub n: u64,
    /// Constant term first.
    pub coefficients: Vec<String>,
    pub polynomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaOut {
    pub n: u32,
    pub c_last: u32,
    /// `alpha_{i,n}` for `i = 0..=n`.
    pub alphas: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Count(CountOut),
    BValue(BValueOut),
    Limit(LimitOut),
    Table(TableOut),
    Poly(PolyOut),
    Alpha(AlphaOut),
    Reports {
        reports: Vec<IdentityReport>,
        single: bool,
    },
}

fn approx(r: &Rational) -> String {
    match r.to_f64() {
        Some(f) => format!("{f:.6e}"),
        None => "nan".into(),
    }
}

pub fn count(c: &ParamVec, i: &MultiIndex, method: &str, value: &Integer) -> Output {
    Output::Count(CountOut {
        c: c.as_slice().to_vec(),
        i: i.as_slice().to_vec(),
        method: method.into(),
        count: value.to_string(),
    })
}

pub fn bvalue(c: &ParamVec, prefix: &[u32], b: &BValue) -> Output {
    Output::BValue(BValueOut {
        c: c.as_slice().to_vec(),
        prefix: prefix.to_vec(),
        value: b.value.to_string(),
        value_approx: approx(&b.value),
        provenance: b.provenance.clone(),
    })
}

pub fn limit(c: &ParamVec, prefix: &[u32], report: &LimitReport) -> Output {
    Output::Limit(LimitOut {
        c: c.as_slice().to_vec(),
        prefix: prefix.to_vec(),
        limit: report.limit.value.to_string(),
        tolerance: report.tolerance.to_string(),
        rows: report
            .rows
            .iter()
            .map(|r| LimitRowOut {
                h: r.h,
                ratio: r.ratio.to_string(),
                error: r.error.to_string(),
                error_approx: approx(&r.error),
            })
            .collect(),
        final_error: report.final_error.to_string(),
        pass: report.pass,
        decay_factor: report.decay_factor.as_ref().map(|d| d.to_string()),
        expected_decay: report.expected_decay.to_string(),
    })
}

pub fn table(kind: &str, rows: &[(u32, Vec<Integer>)]) -> Output {
    Output::Table(TableOut {
        kind: kind.into(),
        rows: rows
            .iter()
            .map(|(index, values)| TableRowOut {
                index: *index,
                values: values.iter().map(|v| v.to_string()).collect(),
            })
            .collect(),
    })
}

pub fn poly(kind: &str, k: u64, n: u64, p: &UniPoly) -> Output {
    let mut coefficients = p.coeff_strings();
    if coefficients.is_empty() {
        coefficients.push("0".into());
    }
    Output::Poly(PolyOut {
        kind: kind.into(),
        k,
        n,
        coefficients,
        polynomial: p.to_string(),
    })
}

pub fn alpha(n: u32, c_last: u32, alphas: &[Rational]) -> Output {
    Output::Alpha(AlphaOut {
        n,
        c_last,
        alphas: alphas.iter().map(|a| a.to_string()).collect(),
    })
}

pub fn reports(reports: &[IdentityReport], single: bool) -> Output {
    Output::Reports {
        reports: reports.to_vec(),
        single,
    }
}

fn tuple(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn range_text(r: &IdentityReport) -> String {
    r.range
        .iter()
        .map(|(name, pr)| format!("{name}={}..{}", pr.min, pr.max))
        .collect::<Vec<_>>()
        .join(" ")
}

fn params_text(r: &IdentityReport) -> String {
    r.counterexample
        .as_ref()
        .map(|ce| {
            ce.params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_default()
}

impl Output {
    pub fn render(&self, format: Format) -> io::Result<String> {
        match format {
            Format::Pretty => Ok(self.pretty()),
            Format::Json => {
                let mut s = self.json()?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.csv(),
        }
    }

    fn json(&self) -> serde_json::Result<String> {
        match self {
            Output::Count(o) => serde_json::to_string_pretty(o),
            Output::BValue(o) => serde_json::to_string_pretty(o),
            Output::Limit(o) => serde_json::to_string_pretty(o),
            Output::Table(o) => serde_json::to_string_pretty(o),
            Output::Poly(o) => serde_json::to_string_pretty(o),
            Output::Alpha(o) => serde_json::to_string_pretty(o),
            Output::Reports {
                reports,
                single: true,
            } => serde_json::to_string_pretty(&reports[0]),
            Output::Reports {
                reports,
                single: false,
            } => serde_json::to_string_pretty(reports),
        }
    }

    fn pretty(&self) -> String {
        let mut s = String::new();
        match self {
            Output::Count(o) => writeln!(s, "{}", o.count),
            Output::BValue(o) => {
                writeln!(s, "{}  ({}, ~{})", o.value, o.provenance, o.value_approx)
            }
            Output::Limit(o) => {
                writeln!(s, "B = {}  (closed_form)", o.limit).unwrap();
                writeln!(s, "{:>5}  {:>14}  ratio", "h", "error_approx").unwrap();
                for r in &o.rows {
                    writeln!(s, "{:>5}  {:>14}  {}", r.h, r.error_approx, r.ratio).unwrap();
                }
                writeln!(s, "final error = {}", o.final_error).unwrap();
                if let Some(d) = &o.decay_factor {
                    writeln!(s, "decay factor = {d}  (tends to {})", o.expected_decay).unwrap();
                }
                writeln!(
                    s,
                    "{}: final error {} tolerance {}",
                    if o.pass { "PASS" } else { "FAIL" },
                    if o.pass { "<" } else { ">=" },
                    o.tolerance
                )
            }
            Output::Table(o) => {
                for row in &o.rows {
                    writeln!(s, "{:>3}: {}", row.index, row.values.join(" ")).unwrap();
                }
                Ok(())
            }
            Output::Poly(o) => {
                writeln!(s, "{}", o.coefficients.join(" ")).unwrap();
                writeln!(s, "{}", o.polynomial)
            }
            Output::Alpha(o) => {
                for (i, a) in o.alphas.iter().enumerate() {
                    writeln!(s, "alpha_{{{i},{}}}({}) = {a}", o.n, o.c_last).unwrap();
                }
                Ok(())
            }
            Output::Reports { reports, .. } => {
                for r in reports {
                    writeln!(
                        s,
                        "{:<14} {}  cases={} {} ({} ms)",
                        r.identity.name(),
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.cases,
                        range_text(r),
                        r.elapsed_ms
                    )
                    .unwrap();
                    if let Some(ce) = &r.counterexample {
                        writeln!(s, "    counterexample at {}", params_text(r)).unwrap();
                        writeln!(s, "    lhs = {}", ce.lhs).unwrap();
                        writeln!(s, "    rhs = {}", ce.rhs).unwrap();
                    }
                    for note in &r.notes {
                        writeln!(s, "    note: {note}").unwrap();
                    }
                }
                Ok(())
            }
        }
        .unwrap();
        s
    }

    fn csv(&self) -> io::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match self {
            Output::Count(o) => {
                w.write_record(["c", "i", "method", "count"])?;
                w.write_record([tuple(&o.c), tuple(&o.i), o.method.clone(), o.count.clone()])?;
            }
            Output::BValue(o) => {
                w.write_record(["c", "prefix", "value", "value_approx", "provenance"])?;
                w.write_record([
                    tuple(&o.c),
                    tuple(&o.prefix),
                    o.value.clone(),
                    o.value_approx.clone(),
                    o.provenance.to_string(),
                ])?;
            }
            Output::Limit(o) => {
                w.write_record(["h", "ratio", "error", "error_approx"])?;
                for r in &o.rows {
                    w.write_record([
                        r.h.to_string(),
                        r.ratio.clone(),
                        r.error.clone(),
                        r.error_approx.clone(),
                    ])?;
                }
            }
            Output::Table(o) => {
                w.write_record(["row", "col", "value"])?;
                for row in &o.rows {
                    for (col, v) in row.values.iter().enumerate() {
                        let col = if o.kind == "eulerian" { col } else { col + 1 };
                        w.write_record([row.index.to_string(), col.to_string(), v.clone()])?;
                    }
                }
            }
            Output::Poly(o) => {
                w.write_record(["power", "coefficient"])?;
                for (p, v) in o.coefficients.iter().enumerate() {
                    w.write_record([p.to_string(), v.clone()])?;
                }
            }
            Output::Alpha(o) => {
                w.write_record(["i", "alpha"])?;
                for (i, a) in o.alphas.iter().enumerate() {
                    w.write_record([i.to_string(), a.clone()])?;
                }
            }
            Output::Reports { reports, .. } => {
                w.write_record([
                    "identity",
                    "status",
                    "cases",
                    "range",
                    "elapsed_ms",
                    "counterexample",
                    "lhs",
                    "rhs",
                ])?;
                for r in reports {
                    let (lhs, rhs) = r
                        .counterexample
                        .as_ref()
                        .map(|ce| (ce.lhs.clone(), ce.rhs.clone()))
                        .unwrap_or_default();
                    w.write_record([
                        r.identity.name().to_string(),
                        if r.passed() { "pass" } else { "fail" }.to_string(),
                        r.cases.to_string(),
                        range_text(r),
                        r.elapsed_ms.to_string(),
                        params_text(r),
                        lhs,
                        rhs,
                    ])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
    }
}
