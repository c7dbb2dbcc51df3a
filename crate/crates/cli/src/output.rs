//! Flat key/value records rendered as CSV rows or JSON lines.

use std::fmt::Write as _;

use ramsey_cosets::checker::Witness;
use ramsey_cosets::{BoundsReport, CheckOutcome, FourierProfile, SearchRecord};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    UInt(u128),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::UInt(n) => n.to_string(),
            Value::Float(x) => format_sig(*x, 12),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::UInt(n) => n.to_string(),
            Value::Float(x) if x.is_finite() => {
                let s = x.to_string();
                if s.contains(['.', 'e', 'E']) {
                    s
                } else {
                    format!("{s}.0")
                }
            }
            Value::Float(_) | Value::Null => "null".into(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("string serializes"),
        }
    }
}

/// Ordered key/value rendering of one result row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputRecord {
    pub fields: Vec<(String, Value)>,
}

impl OutputRecord {
    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn header(&self) -> String {
        self.fields.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(",")
    }

    pub fn csv_row(&self) -> String {
        self.fields.iter().map(|(_, v)| v.csv()).collect::<Vec<_>>().join(",")
    }

    pub fn json_line(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}:{}", serde_json::to_string(k).expect("key"), v.json());
        }
        out.push('}');
        out
    }

    /// Inverse of [`OutputRecord::json_line`].
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_json_line(line: &str) -> Result<Self, String> {
        let parsed: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let obj = parsed.as_object().ok_or("expected a JSON object")?;
        let fields = obj
            .iter()
            .map(|(k, v)| {
                let value = match v {
                    serde_json::Value::Null => Value::Null,
                    serde_json::Value::Bool(b) => Value::Bool(*b),
                    serde_json::Value::String(s) => Value::Text(s.clone()),
                    serde_json::Value::Number(n) => {
                        let text = n.to_string();
                        if text.contains(['.', 'e', 'E']) {
                            Value::Float(text.parse().map_err(|_| format!("bad float {text}"))?)
                        } else {
                            Value::UInt(text.parse().map_err(|_| format!("bad integer {text}"))?)
                        }
                    }
                    other => return Err(format!("unsupported value {other}")),
                };
                Ok((k.clone(), value))
            })
            .collect::<Result<_, String>>()?;
        Ok(Self { fields })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Renders records as CSV (with header, even when empty) or JSON lines.
pub fn render(records: &[OutputRecord], format: Format, empty_header: &str) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            let header = records.first().map(OutputRecord::header);
            out.push_str(header.as_deref().unwrap_or(empty_header));
            out.push('\n');
            for r in records {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
        }
        Format::Json => {
            for r in records {
                out.push_str(&r.json_line());
                out.push('\n');
            }
        }
    }
    out
}

/// `%.{digits}g`-style formatting, independent of locale.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const SEARCH_HEADER: &str = "m,smallest_p,cap,candidates,pruned,elapsed_ms";
pub const FOURIER_HEADER: &str = "p,delta,alpha_max,delta_sq,certified,solutions";

pub fn search_record(r: &SearchRecord, stable: bool) -> OutputRecord {
    let elapsed = if stable { 0 } else { r.elapsed.as_millis() };
    OutputRecord::default()
        .with("m", Value::UInt(r.m.into()))
        .with("smallest_p", Value::UInt(r.smallest_p.into()))
        .with("cap", Value::UInt(r.cap_used.into()))
        .with("candidates", Value::UInt(r.candidates_tested.into()))
        .with("pruned", Value::UInt(r.pruned_by_formal_sum.into()))
        .with("elapsed_ms", Value::UInt(elapsed))
}

pub fn fourier_record(f: &FourierProfile) -> OutputRecord {
    OutputRecord::default()
        .with("p", Value::UInt(f.p.into()))
        .with("delta", Value::Float(f.delta))
        .with("alpha_max", Value::Float(f.alpha_max))
        .with("delta_sq", Value::Float(f.threshold))
        .with("certified", Value::Bool(f.certified_not_sumfree))
        .with("solutions", Value::UInt(f.solutions_exact.into()))
}

pub fn bounds_record(b: &BoundsReport, with_applicable: bool) -> OutputRecord {
    let rec = OutputRecord::default()
        .with("m", Value::UInt(b.m.into()))
        .with("lower", Value::UInt(b.lower.into()))
        .with("upper", Value::UInt(b.upper.into()))
        .with("ramsey", b.ramsey.map_or(Value::Null, Value::UInt));
    if with_applicable {
        rec.with("applicable", Value::Bool(b.applicable))
    } else {
        rec
    }
}

pub fn check_record(p: u64, m: u64, g: u64, method: &str, outcome: &CheckOutcome) -> OutputRecord {
    let (kind, detail) = match outcome.witness() {
        None => (Value::Null, Value::Null),
        Some(w) => {
            let kind = match w {
                Witness::SumFreeViolation { .. } => "sum_free_violation",
                Witness::CoverageGap { .. } => "coverage_gap",
                Witness::ConditionViolation { .. } => "condition_violation",
            };
            (Value::Text(kind.into()), Value::Text(w.to_string()))
        }
    };
    OutputRecord::default()
        .with("p", Value::UInt(p.into()))
        .with("m", Value::UInt(m.into()))
        .with("g", Value::UInt(g.into()))
        .with("method", Value::Text(method.into()))
        .with("verdict", Value::Bool(outcome.verdict()))
        .with("witness", kind)
        .with("detail", detail)
}
