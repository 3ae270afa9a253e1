//! Per-permutation result rows as CSV or JSON Lines (`schema = 1`).
//!
//! CSV columns: `schema,instance,method,perm_id,outcome,distance,gap_pct,time_s,max_front`.
//! JSONL objects carry the same keys. `distance` is empty/null for infeasible
//! rows and `gap_pct` is only present when the exact decoder solved the same
//! permutation. Floats are written with 12 significant digits and rows are
//! ordered by `(instance, method, perm_id)`.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 9] = [
    "schema",
    "instance",
    "method",
    "perm_id",
    "outcome",
    "distance",
    "gap_pct",
    "time_s",
    "max_front",
];

/// Decoder identifiers, ordered from most to least exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Exact joint split-and-charge decoder.
    Joint,
    /// Optimal split, then optimal multi-stop charging.
    FixedRoute,
    /// Optimal split, then at most one charger per gap.
    SingleStop,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Joint, Method::FixedRoute, Method::SingleStop];

    pub fn id(self) -> &'static str {
        match self {
            Method::Joint => "fp",
            Method::FixedRoute => "fr",
            Method::SingleStop => "ss",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fp" | "fp-fla" => Ok(Method::Joint),
            "fr" | "fr-fla" => Ok(Method::FixedRoute),
            "ss" | "ss-fr-fla" => Ok(Method::SingleStop),
            other => Err(format!("unknown method `{other}` (expected fp, fr or ss)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub method: Method,
    pub perm_id: usize,
    /// `None` when the method found no feasible decoding.
    pub distance: Option<f64>,
    pub gap_pct: Option<f64>,
    pub time_s: f64,
    pub max_front: usize,
}

impl ResultRow {
    pub fn solved(&self) -> bool {
        self.distance.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Error)]
pub enum ResultsError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("row {row}: {message}")]
    Field { row: usize, message: String },
}

/// `%.{digits}g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros trimmed.
pub fn fmt_sig(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value == 0.0 {
            "0".into()
        } else {
            value.to_string()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{value:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The value that `fmt_sig(value, 12)` denotes.
fn round12(value: f64) -> f64 {
    fmt_sig(value, 12).parse().expect("formatted float parses")
}

fn sorted(rows: &[ResultRow]) -> Vec<&ResultRow> {
    let mut rows: Vec<&ResultRow> = rows.iter().collect();
    rows.sort_by(|a, b| {
        a.instance
            .cmp(&b.instance)
            .then(a.method.cmp(&b.method))
            .then(a.perm_id.cmp(&b.perm_id))
    });
    rows
}

pub fn write_results<W: Write>(rows: &[ResultRow], format: Format, out: W) -> Result<(), ResultsError> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Jsonl => write_jsonl(rows, out),
    }
}

fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), ResultsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |v: Option<f64>| v.map(|x| fmt_sig(x, 12)).unwrap_or_default();
    for r in sorted(rows) {
        w.write_record([
            SCHEMA_VERSION.to_string(),
            r.instance.clone(),
            r.method.id().to_string(),
            r.perm_id.to_string(),
            outcome_str(r).to_string(),
            opt(r.distance),
            opt(r.gap_pct),
            fmt_sig(r.time_s, 12),
            r.max_front.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn outcome_str(r: &ResultRow) -> &'static str {
    if r.solved() {
        "solved"
    } else {
        "infeasible"
    }
}

fn write_jsonl<W: Write>(rows: &[ResultRow], mut out: W) -> Result<(), ResultsError> {
    for r in sorted(rows) {
        let obj = json!({
            "schema": SCHEMA_VERSION,
            "instance": r.instance,
            "method": r.method.id(),
            "perm_id": r.perm_id,
            "outcome": outcome_str(r),
            "distance": r.distance.map(round12),
            "gap_pct": r.gap_pct.map(round12),
            "time_s": round12(r.time_s),
            "max_front": r.max_front,
        });
        serde_json::to_writer(&mut out, &obj)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn field_err(row: usize, message: impl Into<String>) -> ResultsError {
    ResultsError::Field {
        row,
        message: message.into(),
    }
}

pub fn read_results_csv<R: io::Read>(input: R) -> Result<Vec<ResultRow>, ResultsError> {
    let mut reader = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != CSV_HEADER.len() {
            return Err(field_err(i, "wrong column count"));
        }
        let float = |s: &str| -> Result<Option<f64>, ResultsError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| field_err(i, format!("bad float `{s}`")))
            }
        };
        rows.push(ResultRow {
            instance: rec[1].to_string(),
            method: rec[2].parse().map_err(|e: String| field_err(i, e))?,
            perm_id: rec[3].parse().map_err(|_| field_err(i, "bad perm_id"))?,
            distance: float(&rec[5])?,
            gap_pct: float(&rec[6])?,
            time_s: float(&rec[7])?.ok_or_else(|| field_err(i, "missing time"))?,
            max_front: rec[8].parse().map_err(|_| field_err(i, "bad max_front"))?,
        });
    }
    Ok(rows)
}

pub fn read_results_jsonl<R: BufRead>(input: R) -> Result<Vec<ResultRow>, ResultsError> {
    let mut rows = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line)?;
        let text = |k: &str| v[k].as_str().ok_or_else(|| field_err(i, format!("missing {k}")));
        let uint = |k: &str| {
            v[k].as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| field_err(i, format!("missing {k}")))
        };
        rows.push(ResultRow {
            instance: text("instance")?.to_string(),
            method: text("method")?.parse().map_err(|e: String| field_err(i, e))?,
            perm_id: uint("perm_id")?,
            distance: v["distance"].as_f64(),
            gap_pct: v["gap_pct"].as_f64(),
            time_s: v["time_s"]
                .as_f64()
                .ok_or_else(|| field_err(i, "missing time_s"))?,
            max_front: uint("max_front")?,
        });
    }
    Ok(rows)
}
