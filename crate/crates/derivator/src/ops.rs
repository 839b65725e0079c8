//! Named operations on parsed JSON values, shared by the command line and
//! the C interface.

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::jsonio;
use crate::{derops, kan};
use serde_json::{json, Value};
use std::path::Path;

pub fn homology_json(c: &ChainComplex) -> Value {
    let mut m = serde_json::Map::new();
    for (n, d) in c.homology_dims() {
        m.insert(n.to_string(), json!(d));
    }
    Value::Object(m)
}

fn complex_result(c: &ChainComplex) -> Value {
    json!({ "complex": jsonio::complex_to_json(c), "homology": homology_json(c) })
}

/// Apply one named operation to a parsed JSON input. `base` resolves
/// category file references, `window` parameterizes Barratt-Puppe windows,
/// `k` the degree shift.
pub fn compute_value(op: &str, v: &Value, base: Option<&Path>, window: u32, k: i32) -> Result<Value> {
    let cap = kan::DEFAULT_CAP;
    Ok(match op {
        "homology" => {
            let c = jsonio::complex_from_json(v)?;
            json!({ "homology": homology_json(&c) })
        }
        "shift" => {
            let c = jsonio::complex_from_json(v)?;
            complex_result(&c.shift(k))
        }
        "cone" => {
            let f = jsonio::chain_map_from_json(v)?;
            complex_result(&derops::cone_d(&f, cap)?.complex)
        }
        "fiber" => {
            let f = jsonio::chain_map_from_json(v)?;
            complex_result(&derops::fiber_d(&f, cap)?.complex)
        }
        "susp" => {
            let c = jsonio::complex_from_json(v)?;
            complex_result(&derops::susp_d(&c, cap)?.complex)
        }
        "loop" => {
            let c = jsonio::complex_from_json(v)?;
            complex_result(&derops::loop_d(&c, cap)?.complex)
        }
        "quasi-iso" => {
            let f = jsonio::chain_map_from_json(v)?;
            json!({ "quasi_iso": f.is_quasi_iso() })
        }
        "hocolim" => {
            let d = jsonio::diagram_from_json(v, base)?;
            complex_result(&kan::hocolim(&d, cap)?.complex)
        }
        "holim" => {
            let d = jsonio::diagram_from_json(v, base)?;
            complex_result(&kan::holim(&d, cap)?.complex)
        }
        "tcof" => {
            let d = jsonio::diagram_from_json(v, base)?;
            complex_result(&derops::total_cofiber(&d, cap)?)
        }
        "tfib" => {
            let d = jsonio::diagram_from_json(v, base)?;
            complex_result(&derops::total_fiber(&d, cap)?)
        }
        "iterated-cone-1" | "iterated-cone-2" => {
            let d = jsonio::diagram_from_json(v, base)?;
            let dir = if op.ends_with('1') { 1 } else { 2 };
            complex_result(&derops::iterated_cone(&d, dir, cap)?)
        }
        "cocartesian" => {
            let d = jsonio::diagram_from_json(v, base)?;
            json!({ "cocartesian": kan::is_cocartesian(&d, cap)? })
        }
        "cartesian" => {
            let d = jsonio::diagram_from_json(v, base)?;
            json!({ "cartesian": kan::is_cartesian(&d, cap)? })
        }
        "seven-conditions" => {
            let d = jsonio::diagram_from_json(v, base)?;
            let a = derops::analyze_square(&d, cap)?;
            let conds = a.seven_conditions()?;
            json!({
                "bicartesian": conds[0],
                "partial_cone_1_invertible": conds[1],
                "partial_cone_2_invertible": conds[2],
                "total_cofiber_trivial": conds[3],
                "partial_fiber_1_invertible": conds[4],
                "partial_fiber_2_invertible": conds[5],
                "total_fiber_trivial": conds[6],
                "all_equal": conds.iter().all(|&c| c == conds[0]),
            })
        }
        "figure-witness" => {
            let d = jsonio::diagram_from_json(v, base)?;
            let w = derops::figure1_witness(&d, cap)?;
            json!({ "flags": w.flags, "corner_homology": homology_json(&w.corner) })
        }
        "sigma-grid" => {
            let f = jsonio::chain_map_from_json(v)?;
            let g = derops::sigma_f_grid(&f, cap)?;
            json!({
                "sigma_f_to_c_quasi_iso": g.sigma_f_to_c.is_quasi_iso(),
                "f_to_omega_c_quasi_iso": g.f_to_omega_c.is_quasi_iso(),
                "fiber_homology": homology_json(g.f_to_omega_c.source()),
                "cone_homology": homology_json(g.sigma_f_to_c.target()),
            })
        }
        "bp-window" => {
            let f = jsonio::chain_map_from_json(v)?;
            let bp = derops::barratt_puppe(&f, window)?;
            let mut entries = serde_json::Map::new();
            let w = bp.window;
            for j in -2 * w..=2 * w + 1 {
                entries.insert(j.to_string(), homology_json(bp.entry(j).unwrap()));
            }
            json!({ "window": w, "entry_homology": Value::Object(entries) })
        }
        "cof-square" => {
            let f = jsonio::chain_map_from_json(v)?;
            jsonio::diagram_to_json(&derops::cof_square(&f, cap)?, "square")
        }
        "fib-square" => {
            let f = jsonio::chain_map_from_json(v)?;
            jsonio::diagram_to_json(&derops::fib_square(&f, cap)?, "square")
        }
        "check-functoriality" => {
            let d = jsonio::diagram_from_json(v, base)?;
            match d.check_functoriality() {
                Ok(()) => json!({ "functorial": true }),
                Err(Error::Functoriality { g, f }) => {
                    json!({ "functorial": false, "failing_pair": [g, f] })
                }
                Err(e) => return Err(e),
            }
        }
        "strictly-homotopy-finite" => {
            let c = jsonio::category_from_json(v)?;
            match c.strictly_homotopy_finite() {
                Ok(()) => json!({ "strictly_homotopy_finite": true }),
                Err(e) => json!({ "strictly_homotopy_finite": false, "reason": e.to_string() }),
            }
        }
        "vect-colim" => {
            let d = jsonio::vect_from_json(v, base)?;
            json!({ "dim": crate::repmodel::colim_vect(&d)?.dim })
        }
        "vect-lim" => {
            let d = jsonio::vect_from_json(v, base)?;
            json!({ "dim": crate::repmodel::lim_vect(&d)?.dim })
        }
        "nerve" => {
            let c = jsonio::category_from_json(v)?;
            let n = c.nerve()?;
            let strings: Vec<Vec<Value>> = n
                .by_dim
                .iter()
                .map(|dim| {
                    dim.iter()
                        .map(|s| {
                            json!({
                                "start": c.object_label(s.start),
                                "arrows": s.arrows.iter().map(|&m| c.morphism_name(m)).collect::<Vec<_>>(),
                            })
                        })
                        .collect()
                })
                .collect();
            json!({ "counts": n.counts(), "strings": strings })
        }
        _ => return Err(Error::UnknownOp(op.to_string())),
    })
}

