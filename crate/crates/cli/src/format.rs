//! JSON and CSV file formats.
//!
//! Matrices are `{rows, cols, data}` with `data` a row-major list of
//! `[re, im]` pairs. Output JSON is canonical: sorted keys, two-space
//! indentation and every float written with 17 significant digits.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use stinespring_core::{ComplexMatrix, CurveTrace, TraceSource, C64};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = CliError;

    fn try_from(m: &MatrixJson) -> Result<Self, CliError> {
        if m.data.len() != m.rows * m.cols {
            return Err(CliError::Validation(format!(
                "matrix declares {}x{} but carries {} entries",
                m.rows,
                m.cols,
                m.data.len()
            )));
        }
        if m.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Validation("matrix entries must be finite".into()));
        }
        let data = m.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(ComplexMatrix::new(m.rows, m.cols, data)?)
    }
}

/// A channel in one of its representations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "representation", rename_all = "lowercase")]
pub enum ChannelFile {
    Choi {
        in_dim: usize,
        out_dim: usize,
        choi: MatrixJson,
    },
    Kraus {
        operators: Vec<MatrixJson>,
    },
    Stinespring {
        in_dim: usize,
        out_dim: usize,
        unitary: MatrixJson,
    },
    /// `V = Σ_i K_i ⊗ |i⟩`, emitted when no unitary dilation exists.
    Isometry {
        in_dim: usize,
        out_dim: usize,
        isometry: MatrixJson,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LindbladFile {
    pub h0: MatrixJson,
    #[serde(default)]
    pub jumps: Vec<MatrixJson>,
}

/// `(n, H, ω)`; the ancilla dimension is `ω.rows`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub n: usize,
    pub h: MatrixJson,
    pub omega: MatrixJson,
}

pub fn matrices(list: &[MatrixJson]) -> Result<Vec<ComplexMatrix>, CliError> {
    list.iter().map(ComplexMatrix::try_from).collect()
}

pub fn matrix_list(list: &[ComplexMatrix]) -> Vec<MatrixJson> {
    list.iter().map(MatrixJson::from).collect()
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("invalid {what} JSON: {e}")))
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

/// Float formatting used in every output file.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes `value` canonically. Objects keep serde_json's sorted key
/// order.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => write!(out, "{u}").unwrap(),
            (None, Some(i)) => write!(out, "{i}").unwrap(),
            _ => out.push_str(&format_float(n.as_f64().expect("finite JSON number"))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // numeric leaves such as [re, im] pairs stay on one line
            if items.iter().all(|v| v.is_number()) {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, v, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, v, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push_str(": ");
                write_value(out, v, indent + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn entry_label(prefix: &str, i: usize, j: usize, dim: usize) -> String {
    if dim <= 10 {
        format!("{prefix}_{i}{j}")
    } else {
        format!("{prefix}_{i}_{j}")
    }
}

/// CSV trace: `t`, then `re_ij, im_ij` over superoperator entries in
/// row-major order, then the trace-preservation residual.
pub fn write_trace_csv(trace: &CurveTrace) -> Result<String, CliError> {
    let dim = trace.dim() * trace.dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    for i in 0..dim {
        for j in 0..dim {
            header.push(entry_label("re", i, j, dim));
            header.push(entry_label("im", i, j, dim));
        }
    }
    header.push("tp_residual".into());
    w.write_record(&header)?;
    for (t, phi) in trace.grid().iter().zip(trace.channels()) {
        let mut row = Vec::with_capacity(header.len());
        row.push(format_float(*t));
        for z in phi.superop().as_slice() {
            row.push(format_float(z.re));
            row.push(format_float(z.im));
        }
        row.push(format_float(phi.trace_preservation_deviation()));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII numbers"))
}

/// Reads a trace written by [`write_trace_csv`].
pub fn read_trace_csv(text: &str, source: TraceSource) -> Result<CurveTrace, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    let entry_cols = header.len().saturating_sub(2);
    let dim = ((entry_cols / 2) as f64).sqrt().round() as usize;
    let n = (dim as f64).sqrt().round() as usize;
    if header.get(0) != Some("t")
        || header.get(header.len() - 1) != Some("tp_residual")
        || n * n != dim
        || 2 * dim * dim != entry_cols
        || n == 0
    {
        return Err(CliError::Validation(
            "trace CSV header does not describe a square superoperator".into(),
        ));
    }
    let mut grid = Vec::new();
    let mut channels = Vec::new();
    for record in r.records() {
        let record = record?;
        let nums = record
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Validation(format!("bad number {s:?} in trace CSV")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        grid.push(nums[0]);
        let data = (0..dim * dim)
            .map(|k| C64::new(nums[1 + 2 * k], nums[2 + 2 * k]))
            .collect();
        let superop = ComplexMatrix::new(dim, dim, data)?;
        channels.push(stinespring_core::Channel::from_superop(n, n, superop)?);
    }
    Ok(CurveTrace::new(grid, channels, source)?)
}
