//! Plain-text run report.
//!
//! Schema version 1. Lines are `key: value`, in this fixed order:
//!
//! ```text
//! # cuckoo-threshold segmentation report
//! schema_version: 1
//! levels: <x>
//! classes: <x + 1>
//! thresholds: <t1>,<t2>,...
//! representatives: <r0>,<r1>,...
//! correlation: <real>
//! mse: <real>
//! psnr: <real> | inf
//! seed: <u64>
//! nests: <n>
//! generations: <g>
//! pa: <real>
//! beta: <real>
//! alpha: <real>
//! evaluations: <count>
//! input_sha256: <hex> | none
//! trace_columns: generation,best_fitness
//! trace:
//! 1,<real>
//! ...
//! ```
//!
//! Reals use scientific notation with 17 significant digits, which
//! round-trips every `f64`. The trace block holds one row per generation
//! and runs to the end of the document.

use std::fmt::Write as _;

use crate::cuckoo::SearchReport;
use crate::error::{Error, Result};
use crate::metrics::{Psnr, QualityReport};

pub const SCHEMA_VERSION: u32 = 1;

const TRACE_COLUMNS: &str = "generation,best_fitness";

/// 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Renders the report document. `input_sha256` identifies the input file.
pub fn write_report(
    report: &SearchReport,
    quality: &QualityReport,
    input_sha256: Option<&str>,
) -> Vec<u8> {
    let p = &report.params;
    let mut out = String::new();
    out.push_str("# cuckoo-threshold segmentation report\n");
    let mut kv = |key: &str, value: String| {
        writeln!(out, "{key}: {value}").expect("writing to a String");
    };
    kv("schema_version", SCHEMA_VERSION.to_string());
    kv("levels", p.levels.to_string());
    kv("classes", report.best.class_map.classes().to_string());
    kv("thresholds", join(report.best.thresholds.as_slice()));
    kv(
        "representatives",
        join(report.best.class_map.representatives()),
    );
    kv("correlation", format_real(quality.correlation));
    kv("mse", format_real(quality.mse));
    kv(
        "psnr",
        match quality.psnr {
            Psnr::Finite(db) => format_real(db),
            Psnr::Infinite => "inf".into(),
        },
    );
    kv("seed", p.seed.to_string());
    kv("nests", p.nests.to_string());
    kv("generations", p.generations.to_string());
    kv("pa", format_real(p.pa));
    kv("beta", format_real(p.levy.beta()));
    kv("alpha", format_real(p.levy.alpha()));
    kv("evaluations", report.evaluations.to_string());
    kv("input_sha256", input_sha256.unwrap_or("none").to_string());
    kv("trace_columns", TRACE_COLUMNS.to_string());
    out.push_str("trace:\n");
    out.push_str(&trace_rows(&report.trace));
    out.into_bytes()
}

fn trace_rows(trace: &[f64]) -> String {
    let mut out = String::new();
    for (g, f) in trace.iter().enumerate() {
        writeln!(out, "{},{}", g + 1, format_real(*f)).expect("writing to a String");
    }
    out
}

/// Standalone CSV of the best-fitness trace, with a header row.
pub fn write_trace_csv(trace: &[f64]) -> Vec<u8> {
    let mut out = format!("{TRACE_COLUMNS}\n");
    out.push_str(&trace_rows(trace));
    out.into_bytes()
}

/// Report document read back into typed fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedReport {
    pub schema_version: u32,
    pub levels: usize,
    pub classes: usize,
    pub thresholds: Vec<u8>,
    pub representatives: Vec<u8>,
    pub correlation: f64,
    pub mse: f64,
    pub psnr: Psnr,
    pub seed: u64,
    pub nests: usize,
    pub generations: usize,
    pub pa: f64,
    pub beta: f64,
    pub alpha: f64,
    pub evaluations: u64,
    pub input_sha256: Option<String>,
    pub trace: Vec<f64>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::MalformedReport(msg.into())
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| bad(format!("{key}: cannot parse {v:?}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<u8>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| parse_num(key, s.trim())).collect()
}

pub fn parse_report(bytes: &[u8]) -> Result<ParsedReport> {
    let text = std::str::from_utf8(bytes).map_err(|_| bad("not UTF-8"))?;
    let mut lines = text.lines();
    let mut fields = std::collections::HashMap::new();
    for line in lines.by_ref() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if line == "trace:" {
            break;
        }
        let (k, v) = line
            .split_once(": ")
            .ok_or_else(|| bad(format!("not a key-value line: {line:?}")))?;
        fields.insert(k.to_string(), v.to_string());
    }
    let get = |key: &str| {
        fields
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| bad(format!("missing {key}")))
    };

    let schema_version: u32 = parse_num("schema_version", get("schema_version")?)?;
    if schema_version != SCHEMA_VERSION {
        return Err(bad(format!("unsupported schema_version {schema_version}")));
    }
    let mut trace = Vec::new();
    for (k, row) in lines.enumerate() {
        let (gen, value) = row
            .split_once(',')
            .ok_or_else(|| bad(format!("bad trace row {row:?}")))?;
        if parse_num::<usize>("generation", gen)? != k + 1 {
            return Err(bad(format!("trace row {row:?} out of order")));
        }
        trace.push(parse_num("best_fitness", value)?);
    }
    let psnr = match get("psnr")? {
        "inf" => Psnr::Infinite,
        v => Psnr::Finite(parse_num("psnr", v)?),
    };
    Ok(ParsedReport {
        schema_version,
        levels: parse_num("levels", get("levels")?)?,
        classes: parse_num("classes", get("classes")?)?,
        thresholds: parse_list("thresholds", get("thresholds")?)?,
        representatives: parse_list("representatives", get("representatives")?)?,
        correlation: parse_num("correlation", get("correlation")?)?,
        mse: parse_num("mse", get("mse")?)?,
        psnr,
        seed: parse_num("seed", get("seed")?)?,
        nests: parse_num("nests", get("nests")?)?,
        generations: parse_num("generations", get("generations")?)?,
        pa: parse_num("pa", get("pa")?)?,
        beta: parse_num("beta", get("beta")?)?,
        alpha: parse_num("alpha", get("alpha")?)?,
        evaluations: parse_num("evaluations", get("evaluations")?)?,
        input_sha256: match get("input_sha256")? {
            "none" => None,
            h => Some(h.to_string()),
        },
        trace,
    })
}
