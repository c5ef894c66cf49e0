//! Browser bindings: three operations taking a lattice as JSON text and
//! returning JSON text. The plain functions are usable natively; the
//! `wasm_*` wrappers are exported to JavaScript.

use repdense::exact::{fmt_rat, parse_rat};
use repdense::lambda::lambda_closed;
use repdense::lattice::{DiagLattice, LatticeSpec};
use repdense::yang::yang_beta;
use repdense::zeta::{zeta2_closed, zeta_closed};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn lattice(text: &str) -> Result<DiagLattice, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("lattice JSON: {e}"))?;
    LatticeSpec::from_json(&v).and_then(|s| s.to_diag()).map_err(|e| e.to_string())
}

/// `beta(L + H^s, <q>)` as a polynomial in `X = p^-s`.
pub fn density(lattice_json: &str, q: &str, k_max: Option<u32>) -> Result<String, String> {
    let l = lattice(lattice_json)?;
    let q = parse_rat(q).map_err(|e| e.to_string())?;
    let y = yang_beta(&l, &q, k_max).map_err(|e| e.to_string())?;
    Ok(json!({ "lattice": l.to_string(), "q": fmt_rat(&q), "result": y.to_json() }).to_string())
}

/// `lambda(L; s)` with `vol SO'(L)` at `s = 0`.
pub fn volume(lattice_json: &str) -> Result<String, String> {
    let l = lattice(lattice_json)?;
    let lam = lambda_closed(&l).map_err(|e| e.to_string())?;
    let zero = lam.at_zero().map_err(|e| e.to_string())?;
    Ok(json!({ "lattice": l.to_string(), "result": lam.to_json(), "vol_so_prime": zero.to_string() }).to_string())
}

/// Local zeta function in `X = p^-s`.
pub fn local_zeta(lattice_json: &str) -> Result<String, String> {
    let l = lattice(lattice_json)?;
    let z = if l.dim() == 2 { zeta2_closed(&l) } else { zeta_closed(&l) };
    let z = z.map_err(|e| e.to_string())?;
    Ok(json!({ "lattice": l.to_string(), "result": z.to_json() }).to_string())
}

#[wasm_bindgen(js_name = yangBeta)]
pub fn wasm_yang_beta(lattice_json: &str, q: &str, k_max: Option<u32>) -> Result<String, JsValue> {
    density(lattice_json, q, k_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = lambda)]
pub fn wasm_lambda(lattice_json: &str) -> Result<String, JsValue> {
    volume(lattice_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = zeta)]
pub fn wasm_zeta(lattice_json: &str) -> Result<String, JsValue> {
    local_zeta(lattice_json).map_err(|e| JsValue::from_str(&e))
}
