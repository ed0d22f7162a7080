//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! so the page needs no generated TypeScript types. The `*_json` functions
//! hold the logic and are what the host-side tests call.

use blocknorm::blockpos::{sample_random, SampleKind};
use blocknorm::ellwidth::{delta2_estimate, delta2_upper_bound};
use blocknorm::linalg::SchattenP;
use blocknorm::numrange::range_summary;
use blocknorm::verify::{verify_cor22, verify_reverse, verify_thm11, verify_thm21};
use blocknorm::{ComplexMatrix, C64};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest dimension the page accepts; the estimators are cubic or worse.
pub const MAX_DIM: usize = 12;

/// Parses a square matrix written row by row: rows separated by `;` or
/// newlines, entries by whitespace or commas, each entry like `1`, `-2i`
/// or `0.5+1.5i`.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, String> {
    let rows: Vec<Vec<C64>> = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<C64>().map_err(|_| format!("cannot read entry {t:?}")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if n == 0 {
        return Err("empty matrix".into());
    }
    if n > MAX_DIM {
        return Err(format!("at most {MAX_DIM} rows"));
    }
    if let Some(r) = rows.iter().position(|r| r.len() != n) {
        return Err(format!("row {} has {} entries, expected {n}", r + 1, rows[r].len()));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn range_geometry_json(text: &str, grid: usize) -> Result<String, String> {
    let x = parse_matrix(text)?;
    let s = range_summary(&x, grid.clamp(16, 4096)).map_err(|e| e.to_string())?;
    Ok(json!({
        "boundary": s.boundary_points.iter().copied().map(pair).collect::<Vec<_>>(),
        "width": s.width,
        "inradius": s.inradius,
        "indiameter": s.indiameter,
        "center": pair(s.chebyshev_center),
        "dist_zero": s.dist_zero,
    })
    .to_string())
}

pub fn elliptical_width_json(text: &str, restarts: usize, seed: u64) -> Result<String, String> {
    let x = parse_matrix(text)?;
    if x.rows() < 2 {
        return Err("need at least a 2x2 matrix".into());
    }
    let est = delta2_estimate(&x, restarts.clamp(1, 256), seed).map_err(|e| e.to_string())?;
    let upper = delta2_upper_bound(&x).map_err(|e| e.to_string())?;
    let best = est
        .certificates
        .iter()
        .max_by(|a, b| a.delta2_bound().total_cmp(&b.delta2_bound()))
        .map(|c| json!({ "name": c.name, "bound": c.delta2_bound() }));
    Ok(json!({
        "estimate": est.value,
        "upper_bound": upper,
        "best_certificate": best,
    })
    .to_string())
}

pub fn check_block_json(kind: &str, n: usize, seed: u64, p: &str) -> Result<String, String> {
    if n == 0 || n > MAX_DIM {
        return Err(format!("n must be in 1..={MAX_DIM}"));
    }
    let p: SchattenP = p.parse().map_err(|e: blocknorm::Error| e.to_string())?;
    let kind = SampleKind::from_name(kind, 1.0, C64::new(0.0, 0.0)).map_err(|e| e.to_string())?;
    let bp = sample_random(n, kind, seed).map_err(|e| e.to_string())?;
    let err = |e: blocknorm::Error| e.to_string();
    let mut reports = vec![verify_thm11(&bp, p).map_err(err)?, verify_reverse(&bp, p).map_err(err)?];
    reports.extend(verify_thm21(&bp, None).map_err(err)?);
    reports.extend(verify_cor22(&bp).map_err(err)?);
    let rows: Vec<_> = reports
        .iter()
        .map(|r| {
            json!({
                "statement": r.statement_id.name(),
                "j": r.j,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "slack": r.slack,
                "sound": r.sound,
                "violation": r.is_violation(),
            })
        })
        .collect();
    Ok(json!({ "n": n, "seed": seed, "reports": rows }).to_string())
}

/// Boundary of `W(X)` and its width, inradius and Chebyshev center.
#[wasm_bindgen]
pub fn range_geometry(matrix: &str, grid: usize) -> Result<String, JsValue> {
    range_geometry_json(matrix, grid).map_err(|e| JsValue::from_str(&e))
}

/// Elliptical width estimate with its best certificate and upper bound.
#[wasm_bindgen]
pub fn elliptical_width(matrix: &str, restarts: usize, seed: u64) -> Result<String, JsValue> {
    elliptical_width_json(matrix, restarts, seed).map_err(|e| JsValue::from_str(&e))
}

/// Samples a positive block matrix and checks the block inequalities on it.
#[wasm_bindgen]
pub fn check_block(kind: &str, n: usize, seed: u64, p: &str) -> Result<String, JsValue> {
    check_block_json(kind, n, seed, p).map_err(|e| JsValue::from_str(&e))
}
