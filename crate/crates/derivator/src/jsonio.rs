//! File formats: categories (with the poset shorthand), complexes, chain
//! maps, diagrams in both models. Output is bit-stable: serde_json's default
//! map is ordered, matrices are emitted row-major in a fixed order.

use crate::complex::{ChainComplex, ChainMap};
use crate::diagram::{Diagram, MapComponents};
use crate::error::{Error, Result};
use crate::fincat::FinCat;
use crate::matrix::FpMatrix;
use crate::repmodel::VectDiagram;
use crate::shapes;
use serde_json::{json, Map, Value};
use std::path::Path;

fn as_str(v: &Value, what: &str) -> Result<String> {
    v.as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| Error::Input(format!("expected string for {}", what)))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::Input(format!("expected integer for {}", what)))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Input(format!("expected integer for {}", what)))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Input(format!("missing field `{}`", name)))
}

// ---------------------------------------------------------------------------
// Categories
// ---------------------------------------------------------------------------

pub fn category_from_json(v: &Value) -> Result<FinCat> {
    if v.get("elements").is_some() {
        // poset shorthand
        let elements = field(v, "elements")?
            .as_array()
            .ok_or_else(|| Error::Input("elements must be an array".into()))?
            .iter()
            .map(|e| as_str(e, "element"))
            .collect::<Result<Vec<_>>>()?;
        let mut leq = Vec::new();
        if let Some(pairs) = v.get("leq") {
            for pair in pairs
                .as_array()
                .ok_or_else(|| Error::Input("leq must be an array".into()))?
            {
                let p = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Input("leq entries must be pairs".into()))?;
                leq.push((as_str(&p[0], "leq")?, as_str(&p[1], "leq")?));
            }
        }
        return FinCat::from_poset(elements, &leq);
    }
    let objects = field(v, "objects")?
        .as_array()
        .ok_or_else(|| Error::Input("objects must be an array".into()))?
        .iter()
        .map(|e| as_str(e, "object"))
        .collect::<Result<Vec<_>>>()?;
    let mut morphisms = Vec::new();
    if let Some(ms) = v.get("morphisms") {
        for m in ms
            .as_array()
            .ok_or_else(|| Error::Input("morphisms must be an array".into()))?
        {
            morphisms.push((
                as_str(field(m, "id")?, "morphism id")?,
                as_str(field(m, "src")?, "morphism src")?,
                as_str(field(m, "dst")?, "morphism dst")?,
            ));
        }
    }
    let mut compose = Vec::new();
    if let Some(cs) = v.get("compose") {
        for c in cs
            .as_array()
            .ok_or_else(|| Error::Input("compose must be an array".into()))?
        {
            let t = c
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::Input("compose entries must be triples".into()))?;
            compose.push((
                as_str(&t[0], "compose g")?,
                as_str(&t[1], "compose f")?,
                as_str(&t[2], "compose gf")?,
            ));
        }
    }
    FinCat::new(objects, morphisms, compose)
}

pub fn category_to_json(c: &FinCat) -> Value {
    let morphisms: Vec<Value> = c
        .nonidentity_morphisms()
        .map(|m| {
            json!({
                "id": c.morphism_name(m),
                "src": c.object_label(c.src(m)),
                "dst": c.object_label(c.dst(m)),
            })
        })
        .collect();
    let mut compose = Vec::new();
    for g in c.nonidentity_morphisms() {
        for f in c.nonidentity_morphisms() {
            if let Some(gf) = c.compose(g, f) {
                compose.push(json!([c.morphism_name(g), c.morphism_name(f), c.morphism_name(gf)]));
            }
        }
    }
    json!({
        "objects": c.object_labels(),
        "morphisms": morphisms,
        "compose": compose,
    })
}

/// Resolve a category reference: a catalogued shape name, else a path
/// relative to `base`.
pub fn resolve_category(reference: &str, base: Option<&Path>) -> Result<FinCat> {
    if let Ok(c) = shapes::standard_shape(reference) {
        return Ok(c);
    }
    let path = match base {
        Some(b) => b.join(reference),
        None => Path::new(reference).to_path_buf(),
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Input(format!("cannot read category `{}`: {}", path.display(), e)))?;
    category_from_json(&serde_json::from_str(&text)?)
}

// ---------------------------------------------------------------------------
// Matrices, complexes, chain maps
// ---------------------------------------------------------------------------

fn matrix_from_json(v: &Value, p: u32, rows: usize, cols: usize, what: &str) -> Result<FpMatrix> {
    let data = v
        .as_array()
        .ok_or_else(|| Error::Input(format!("{}: matrix must be an array of rows", what)))?;
    if data.len() != rows {
        return Err(Error::Input(format!(
            "{}: expected {} rows, got {}",
            what,
            rows,
            data.len()
        )));
    }
    let mut out = Vec::with_capacity(rows);
    for r in data {
        let row = r
            .as_array()
            .ok_or_else(|| Error::Input(format!("{}: row must be an array", what)))?;
        if row.len() != cols {
            return Err(Error::Input(format!(
                "{}: expected {} columns, got {}",
                what,
                cols,
                row.len()
            )));
        }
        out.push(
            row.iter()
                .map(|e| as_u64(e, what).map(|x| x as u32))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    FpMatrix::from_rows(p, &out, cols)
}

fn matrix_to_json(m: &FpMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(|x| json!(x)).collect()))
            .collect(),
    )
}

pub fn complex_from_json(v: &Value) -> Result<ChainComplex> {
    let p = as_u64(field(v, "p")?, "p")? as u32;
    let lo = as_i64(field(v, "lo")?, "lo")? as i32;
    let dims = field(v, "dims")?
        .as_array()
        .ok_or_else(|| Error::Input("dims must be an array".into()))?
        .iter()
        .map(|d| as_u64(d, "dim").map(|x| x as usize))
        .collect::<Result<Vec<_>>>()?;
    if let Some(hi) = v.get("hi") {
        let hi = as_i64(hi, "hi")? as i32;
        if !dims.is_empty() && hi != lo + dims.len() as i32 - 1 {
            return Err(Error::Input("hi does not match lo and dims".into()));
        }
    }
    let mut diffs = Vec::new();
    let empty = Map::new();
    let dmap = v.get("d").and_then(Value::as_object).unwrap_or(&empty);
    for i in 1..dims.len() {
        let n = lo + i as i32;
        let key = n.to_string();
        let rows = dims[i - 1];
        let cols = dims[i];
        match dmap.get(&key) {
            Some(m) => diffs.push(matrix_from_json(m, p, rows, cols, &format!("d[{}]", key))?),
            None => diffs.push(FpMatrix::zeros(p, rows, cols)),
        }
    }
    ChainComplex::new(p, lo, dims, diffs)
}

pub fn complex_to_json(c: &ChainComplex) -> Value {
    let dims: Vec<usize> = c.degrees().map(|n| c.dim(n)).collect();
    let mut d = Map::new();
    for n in c.lo() + 1..=c.hi() {
        let m = c.d(n);
        if !m.is_zero() {
            d.insert(n.to_string(), matrix_to_json(&m));
        }
    }
    json!({
        "p": c.p(),
        "lo": c.lo(),
        "hi": c.hi(),
        "dims": dims,
        "d": Value::Object(d),
    })
}

fn components_from_json(
    v: &Value,
    p: u32,
    src: &ChainComplex,
    tgt: &ChainComplex,
    what: &str,
) -> Result<MapComponents> {
    let mut comps = MapComponents::new();
    let Some(obj) = v.as_object() else {
        return Err(Error::Input(format!("{}: components must be an object", what)));
    };
    for (k, m) in obj {
        let n: i32 = k
            .parse()
            .map_err(|_| Error::Input(format!("{}: bad degree key `{}`", what, k)))?;
        comps.insert(n, matrix_from_json(m, p, tgt.dim(n), src.dim(n), what)?);
    }
    Ok(comps)
}

fn components_to_json(src: &ChainComplex, comps: &MapComponents) -> Value {
    let _ = src;
    let mut out = Map::new();
    for (n, m) in comps {
        if !m.is_zero() {
            out.insert(n.to_string(), matrix_to_json(m));
        }
    }
    Value::Object(out)
}

pub fn chain_map_from_json(v: &Value) -> Result<ChainMap> {
    let source = complex_from_json(field(v, "source")?)?;
    let target = complex_from_json(field(v, "target")?)?;
    let p = source.p();
    let comps = match v.get("components") {
        Some(c) => components_from_json(c, p, &source, &target, "chain map")?,
        None => MapComponents::new(),
    };
    ChainMap::new(source, target, comps)
}

pub fn chain_map_to_json(f: &ChainMap) -> Value {
    json!({
        "p": f.p(),
        "source": complex_to_json(f.source()),
        "target": complex_to_json(f.target()),
        "components": components_to_json(f.source(), f.components()),
    })
}

// ---------------------------------------------------------------------------
// Diagrams
// ---------------------------------------------------------------------------

pub fn diagram_from_json(v: &Value, base: Option<&Path>) -> Result<Diagram> {
    let p = as_u64(field(v, "p")?, "p")? as u32;
    let shape = resolve_category(&as_str(field(v, "category")?, "category")?, base)?;
    let objs = field(v, "objects")?
        .as_object()
        .ok_or_else(|| Error::Input("objects must be a map".into()))?;
    let mut values = Vec::new();
    for o in 0..shape.n_objects() {
        let label = shape.object_label(o);
        match objs.get(label) {
            Some(c) => values.push(complex_from_json(c)?),
            None => values.push(ChainComplex::zero(p)),
        }
    }
    let empty = Map::new();
    let mors = v.get("morphisms").and_then(Value::as_object).unwrap_or(&empty);
    let mut trans = Vec::new();
    for m in shape.nonidentity_morphisms() {
        let name = shape.morphism_name(m);
        let (a, b) = (shape.src(m), shape.dst(m));
        match mors.get(name) {
            Some(c) => trans.push(components_from_json(c, p, &values[a], &values[b], name)?),
            None => trans.push(MapComponents::new()),
        }
    }
    Diagram::new(shape, p, values, trans)
}

pub fn diagram_to_json(d: &Diagram, category_ref: &str) -> Value {
    let shape = d.shape();
    let mut objects = Map::new();
    for o in 0..shape.n_objects() {
        objects.insert(shape.object_label(o).to_string(), complex_to_json(d.value(o)));
    }
    let mut morphisms = Map::new();
    for m in shape.nonidentity_morphisms() {
        let a = shape.src(m);
        let comps: MapComponents = d
            .value(a)
            .degrees()
            .map(|n| (n, d.transition_comp(m, n)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        if !comps.is_empty() {
            morphisms.insert(
                shape.morphism_name(m).to_string(),
                components_to_json(d.value(a), &comps),
            );
        }
    }
    json!({
        "category": category_ref,
        "p": d.p(),
        "objects": Value::Object(objects),
        "morphisms": Value::Object(morphisms),
    })
}

pub fn vect_from_json(v: &Value, base: Option<&Path>) -> Result<VectDiagram> {
    let p = as_u64(field(v, "p")?, "p")? as u32;
    let shape = resolve_category(&as_str(field(v, "category")?, "category")?, base)?;
    let dims_map = field(v, "dims")?
        .as_object()
        .ok_or_else(|| Error::Input("dims must be a map".into()))?;
    let mut dims = Vec::new();
    for o in 0..shape.n_objects() {
        let label = shape.object_label(o);
        dims.push(match dims_map.get(label) {
            Some(d) => as_u64(d, "dim")? as usize,
            None => 0,
        });
    }
    let empty = Map::new();
    let maps_map = v.get("maps").and_then(Value::as_object).unwrap_or(&empty);
    let mut maps = Vec::new();
    for m in shape.nonidentity_morphisms() {
        let name = shape.morphism_name(m);
        let (a, b) = (shape.src(m), shape.dst(m));
        match maps_map.get(name) {
            Some(mat) => maps.push(matrix_from_json(mat, p, dims[b], dims[a], name)?),
            None => maps.push(FpMatrix::zeros(p, dims[b], dims[a])),
        }
    }
    VectDiagram::new(shape, p, dims, maps)
}

pub fn vect_to_json(d: &VectDiagram, category_ref: &str) -> Value {
    let shape = d.shape();
    let mut dims = Map::new();
    for o in 0..shape.n_objects() {
        dims.insert(shape.object_label(o).to_string(), json!(d.dim(o)));
    }
    let mut maps = Map::new();
    for m in shape.nonidentity_morphisms() {
        let mat = d.map_of(m);
        if !mat.is_zero() {
            maps.insert(shape.morphism_name(m).to_string(), matrix_to_json(&mat));
        }
    }
    json!({
        "category": category_ref,
        "p": d.p(),
        "dims": Value::Object(dims),
        "maps": Value::Object(maps),
    })
}

/// Canonical serialization: pretty JSON with sorted keys and a trailing
/// newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random_diagram;

    #[test]
    fn poset_shorthand_roundtrip() {
        let v = json!({"elements": ["a", "b", "c"], "leq": [["a","b"], ["b","c"]]});
        let c = category_from_json(&v).unwrap();
        assert_eq!(c.n_objects(), 3);
        assert_eq!(c.n_morphisms(), 6);
        let back = category_to_json(&c);
        let c2 = category_from_json(&back).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn explicit_category_validation_fails_on_bad_table() {
        let v = json!({
            "objects": ["a", "b"],
            "morphisms": [{"id": "f", "src": "a", "dst": "b"}],
            "compose": [["f", "f", "f"]],
        });
        assert!(category_from_json(&v).is_err());
    }

    #[test]
    fn complex_roundtrip() {
        let v = json!({"p": 7, "lo": 0, "hi": 1, "dims": [1, 1], "d": {"1": [[3]]}});
        let c = complex_from_json(&v).unwrap();
        assert_eq!(c.dim(0), 1);
        let back = complex_to_json(&c);
        assert_eq!(complex_from_json(&back).unwrap(), c);
    }

    #[test]
    fn complex_rejects_bad_d_squared() {
        let v = json!({"p": 7, "lo": 0, "dims": [1, 1, 1], "d": {"1": [[1]], "2": [[1]]}});
        assert!(complex_from_json(&v).is_err());
    }

    #[test]
    fn diagram_roundtrip_with_builtin_shape() {
        let d = random_diagram(&shapes::square(), 3, 4, 14).unwrap();
        let v = diagram_to_json(&d, "square");
        let d2 = diagram_from_json(&v, None).unwrap();
        for o in 0..4 {
            assert_eq!(d.value(o), d2.value(o));
        }
        // canonical output is stable
        assert_eq!(to_canonical_string(&v), to_canonical_string(&diagram_to_json(&d2, "square")));
    }

    #[test]
    fn vect_roundtrip() {
        let d = VectDiagram::random(&shapes::square(), 3, 9, 8).unwrap();
        let v = vect_to_json(&d, "square");
        let d2 = vect_from_json(&v, None).unwrap();
        assert_eq!(d.dims(), d2.dims());
    }
}
