//! JSON conventions shared by all subcommands: complex numbers as [re, im]
//! (bare numbers allowed on input as real shorthand), infinity as "inf",
//! matrices row-major.

use h2_core::hyperelliptic::BranchPoint;
use h2_core::symplectic::IntMat4;
use h2_core::theta::SiegelPoint;
use h2_core::Complex64;
use serde_json::{json, Value};

pub fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn parse_complex(v: &Value) -> Result<Complex64, String> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().ok_or("bad number")?, 0.0)),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or("complex entries must be numbers")?;
            let im = a[1].as_f64().ok_or("complex entries must be numbers")?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(format!("expected number or [re, im], got {v}")),
    }
}

pub fn parse_branch_point(v: &Value) -> Result<BranchPoint, String> {
    if let Value::String(s) = v {
        if s == "inf" {
            return Ok(BranchPoint::Infinity);
        }
        return Err(format!("unknown branch point literal {s:?} (use \"inf\")"));
    }
    Ok(BranchPoint::Finite(parse_complex(v)?))
}

pub fn parse_lambdas(text: &str) -> Result<Vec<BranchPoint>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let arr = v.as_array().ok_or("lambdas must be a JSON array")?;
    arr.iter().map(parse_branch_point).collect()
}

pub fn branch_point_to_json(bp: &BranchPoint) -> Value {
    match bp {
        BranchPoint::Finite(z) => complex_to_json(*z),
        BranchPoint::Infinity => json!("inf"),
    }
}

pub fn parse_int_mat4(text: &str) -> Result<IntMat4, String> {
    serde_json::from_str(text).map_err(|e| format!("matrix must be a 4x4 integer array: {e}"))
}

pub fn parse_complex_vec(text: &str) -> Result<Vec<Complex64>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let arr = v.as_array().ok_or("expected a JSON array")?;
    arr.iter().map(parse_complex).collect()
}

/// Parse a g x g complex matrix given as rows of [re, im] pairs.
pub fn parse_siegel(text: &str) -> Result<SiegelPoint, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let rows = v.as_array().ok_or("sigma must be a JSON array of rows")?;
    let g = rows.len();
    let mut entries = Vec::with_capacity(g * g);
    for row in rows {
        let cols = row.as_array().ok_or("sigma rows must be arrays")?;
        if cols.len() != g {
            return Err("sigma must be square".into());
        }
        for cell in cols {
            entries.push(parse_complex(cell)?);
        }
    }
    SiegelPoint::new(g, entries).map_err(|e| e.to_string())
}

pub fn siegel_to_json(p: &SiegelPoint) -> Value {
    Value::Array(
        p.rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(complex_to_json).collect()))
            .collect(),
    )
}

pub fn parse_int_list(text: &str) -> Result<Vec<i64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|e| e.to_string()))
        .collect()
}
