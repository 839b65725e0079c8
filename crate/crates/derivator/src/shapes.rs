//! The catalogue of index shapes and structural functors used throughout:
//! chains, the square and its punctured corners, the cocone on the square,
//! the [2]x[1] grid and its stages, the figure category for the total
//! cofiber comparison, cubes, and the staircase band.
//!
//! All catalogued shapes are posets built with `FinCat::from_poset`, so
//! non-identity morphisms are named "src->dst" uniformly and inclusions can
//! be recovered by name.

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor};

fn poset(elements: Vec<String>, leq: Vec<(String, String)>) -> FinCat {
    FinCat::from_poset(elements, &leq).expect("catalogued shape must be a valid poset")
}

/// Functor between thin categories given by source-label -> target-label
/// pairs, independent of the internal object order.
pub fn thin_functor(src: &FinCat, dst: &FinCat, map: &[(&str, &str)]) -> Result<Functor> {
    let mut images = Vec::with_capacity(src.n_objects());
    for l in src.object_labels() {
        let img = map
            .iter()
            .find(|(s, _)| *s == l.as_str())
            .ok_or_else(|| Error::UnknownObject(l.clone()))?
            .1;
        images.push(img);
    }
    Functor::between_thin(src, dst, &images)
}

pub fn empty() -> FinCat {
    FinCat::empty()
}

pub fn point() -> FinCat {
    poset(vec!["*".into()], vec![])
}

pub fn discrete(n: usize) -> FinCat {
    poset((0..n).map(|i| i.to_string()).collect(), vec![])
}

/// The poset [n] = (0 < 1 < ... < n).
pub fn chain(n: usize) -> FinCat {
    let elements: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let leq = (0..n).map(|i| (i.to_string(), (i + 1).to_string())).collect();
    poset(elements, leq)
}

pub fn interval() -> FinCat {
    chain(1)
}

fn grid_elements(w: usize, h: usize) -> (Vec<String>, Vec<(String, String)>) {
    let lab = |i: usize, j: usize| format!("({},{})", i, j);
    let mut elements = Vec::new();
    let mut leq = Vec::new();
    for i in 0..=w {
        for j in 0..=h {
            elements.push(lab(i, j));
            if i < w {
                leq.push((lab(i, j), lab(i + 1, j)));
            }
            if j < h {
                leq.push((lab(i, j), lab(i, j + 1)));
            }
        }
    }
    (elements, leq)
}

/// The commutative square [1]x[1] with objects (i,j).
pub fn square() -> FinCat {
    let (e, l) = grid_elements(1, 1);
    poset(e, l)
}

/// The span (0,1) <- (0,0) -> (1,0): the square without its terminal corner.
pub fn span() -> FinCat {
    poset(
        vec!["(0,0)".into(), "(1,0)".into(), "(0,1)".into()],
        vec![("(0,0)".into(), "(1,0)".into()), ("(0,0)".into(), "(0,1)".into())],
    )
}

/// The cospan (1,0) -> (1,1) <- (0,1): the square without its initial corner.
pub fn cospan() -> FinCat {
    poset(
        vec!["(1,0)".into(), "(0,1)".into(), "(1,1)".into()],
        vec![("(1,0)".into(), "(1,1)".into()), ("(0,1)".into(), "(1,1)".into())],
    )
}

/// The cocone on the square: the square plus a new terminal object "inf".
pub fn cocone_square() -> FinCat {
    let (mut e, mut l) = grid_elements(1, 1);
    e.push("inf".into());
    l.push(("(1,1)".into(), "inf".into()));
    poset(e, l)
}

/// The fiber-cofiber grid [2]x[1], objects (i,j) with i in 0..=2, j in 0..=1.
pub fn grid() -> FinCat {
    let (e, l) = grid_elements(2, 1);
    poset(e, l)
}

/// Inclusion of the span into the square.
pub fn span_inclusion() -> Functor {
    Functor::by_names(&span(), &square()).expect("span inclusion")
}

/// Inclusion of the cospan into the square.
pub fn cospan_inclusion() -> Functor {
    Functor::by_names(&cospan(), &square()).expect("cospan inclusion")
}

/// Source-square inclusion s : square -> cocone_square (corner to (1,1)).
pub fn source_square_inclusion() -> Functor {
    Functor::by_names(&square(), &cocone_square()).expect("source square inclusion")
}

/// Target-square inclusion t : square -> cocone_square (corner to inf).
pub fn target_square_inclusion() -> Functor {
    thin_functor(
        &square(),
        &cocone_square(),
        &[("(0,0)", "(0,0)"), ("(1,0)", "(1,0)"), ("(0,1)", "(0,1)"), ("(1,1)", "inf")],
    )
    .expect("target square inclusion")
}

/// j : [1] -> cocone_square classifying (1,1) -> inf.
pub fn cocone_edge() -> Functor {
    Functor::between_thin(&interval(), &cocone_square(), &["(1,1)", "inf"]).expect("cocone edge")
}

/// The endpoint functors 0, 1 : point -> [1].
pub fn endpoint(i: usize) -> Functor {
    Functor::between_thin(&point(), &interval(), &[&i.to_string()]).expect("endpoint")
}

/// [1] -> span classifying the horizontal morphism (0,0) -> (1,0). A sieve.
pub fn horizontal_into_span() -> Functor {
    Functor::between_thin(&interval(), &span(), &["(0,0)", "(1,0)"]).expect("horizontal into span")
}

/// [1] -> cospan classifying (1,0) -> (1,1). A cosieve.
pub fn vertical_into_cospan() -> Functor {
    Functor::between_thin(&interval(), &cospan(), &["(1,0)", "(1,1)"]).expect("vertical into cospan")
}

/// k' : [1] -> square classifying the right vertical (1,0) -> (1,1).
pub fn right_vertical_edge() -> Functor {
    Functor::between_thin(&interval(), &square(), &["(1,0)", "(1,1)"]).expect("right vertical")
}

/// [1] -> square classifying the top horizontal (0,0) -> (1,0).
pub fn top_horizontal_edge() -> Functor {
    Functor::between_thin(&interval(), &square(), &["(0,0)", "(1,0)"]).expect("top horizontal")
}

/// The coordinate flip of the square.
pub fn square_flip() -> Functor {
    thin_functor(
        &square(),
        &square(),
        &[("(0,0)", "(0,0)"), ("(1,0)", "(0,1)"), ("(0,1)", "(1,0)"), ("(1,1)", "(1,1)")],
    )
    .expect("square flip")
}

// ---------------------------------------------------------------------------
// Figure category for the total-cofiber comparison: the full subposet B of
// [1]x[2]x[2] on fifteen vertices, reached from the square through the
// stages B1..B5.
// ---------------------------------------------------------------------------

fn t3(i: usize, j: usize, k: usize) -> String {
    format!("({},{},{})", i, j, k)
}

fn figure_vertices() -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for k in 0..=1 {
        for j in 0..=2 {
            for i in 0..=1 {
                v.push((i, j, k));
            }
        }
    }
    v.push((1, 0, 2));
    v.push((1, 1, 2));
    v.push((1, 2, 2));
    v
}

fn subposet_3d(vertices: &[(usize, usize, usize)]) -> FinCat {
    let elements: Vec<String> = vertices.iter().map(|&(i, j, k)| t3(i, j, k)).collect();
    let mut leq = Vec::new();
    for &(i1, j1, k1) in vertices {
        for &(i2, j2, k2) in vertices {
            if (i1, j1, k1) != (i2, j2, k2) && i1 <= i2 && j1 <= j2 && k1 <= k2 {
                leq.push((t3(i1, j1, k1), t3(i2, j2, k2)));
            }
        }
    }
    poset(elements, leq)
}

/// The full figure category B (15 objects).
pub fn figure_b() -> FinCat {
    subposet_3d(&figure_vertices())
}

fn figure_stage_vertices(stage: usize) -> Vec<(usize, usize, usize)> {
    let mut v = vec![(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 2, 0)];
    let additions: [&[(usize, usize, usize)]; 6] = [
        &[(1, 1, 0)],
        &[(0, 2, 0)],
        &[(0, 0, 1), (0, 1, 1), (0, 2, 1)],
        &[(1, 0, 1), (1, 1, 1), (1, 2, 1)],
        &[(1, 0, 2), (1, 1, 2)],
        &[(1, 2, 2)],
    ];
    for a in additions.iter().take(stage) {
        v.extend_from_slice(a);
    }
    v
}

/// Stage k of the figure category, for k in 1..=5 (stage 6 is `figure_b`).
pub fn figure_stage(stage: usize) -> Result<FinCat> {
    if !(1..=5).contains(&stage) {
        return Err(Error::UnknownShape(format!("figure-b{}", stage)));
    }
    Ok(subposet_3d(&figure_stage_vertices(stage)))
}

/// The fully faithful functor square -> B1 sending the square corner to
/// (1,2,0), the first step of the figure construction.
pub fn figure_square_embedding() -> Result<Functor> {
    thin_functor(
        &square(),
        &figure_stage(1)?,
        &[("(0,0)", "(0,0,0)"), ("(1,0)", "(1,0,0)"), ("(0,1)", "(0,1,0)"), ("(1,1)", "(1,2,0)")],
    )
}

/// The stage inclusion i_k for k in 2..=6 (stage 6 includes B5 into B).
pub fn figure_stage_inclusion(k: usize) -> Result<Functor> {
    let (src, dst) = match k {
        2..=5 => (figure_stage(k - 1)?, figure_stage(k)?),
        6 => (figure_stage(5)?, figure_b()),
        _ => return Err(Error::UnknownShape(format!("figure stage inclusion {}", k))),
    };
    Functor::by_names(&src, &dst)
}

// ---------------------------------------------------------------------------
// Stages for the fiber-cofiber grid: [1] -> A1 -> A2 -> A3 -> grid, adding
// (2,0), (2,1), (0,1), (0,0) in turn.
// ---------------------------------------------------------------------------

fn grid_sub(labels: &[&str]) -> FinCat {
    let g = grid();
    let ids: Vec<_> = labels.iter().map(|l| g.object_id(l).unwrap()).collect();
    g.full_subcategory(&ids).0
}

pub fn grid_stage(stage: usize) -> Result<FinCat> {
    match stage {
        1 => Ok(grid_sub(&["(1,0)", "(1,1)", "(2,0)"])),
        2 => Ok(grid_sub(&["(1,0)", "(1,1)", "(2,0)", "(2,1)"])),
        3 => Ok(grid_sub(&["(1,0)", "(1,1)", "(2,0)", "(2,1)", "(0,1)"])),
        _ => Err(Error::UnknownShape(format!("sigma-a{}", stage))),
    }
}

/// [1] -> A1 classifying the middle vertical morphism (1,0) -> (1,1).
pub fn grid_middle_embedding() -> Result<Functor> {
    Functor::between_thin(&interval(), &grid_stage(1)?, &["(1,0)", "(1,1)"])
}

/// Stage inclusions A1 -> A2 -> A3 -> grid.
pub fn grid_stage_inclusion(k: usize) -> Result<Functor> {
    let (src, dst) = match k {
        2 | 3 => (grid_stage(k - 1)?, grid_stage(k)?),
        4 => (grid_stage(3)?, grid()),
        _ => return Err(Error::UnknownShape(format!("grid stage inclusion {}", k))),
    };
    Functor::by_names(&src, &dst)
}

/// The composite square inside the grid: (0,0), (2,0), (0,1), (2,1).
pub fn grid_outer_square() -> Functor {
    thin_functor(
        &square(),
        &grid(),
        &[("(0,0)", "(0,0)"), ("(1,0)", "(2,0)"), ("(0,1)", "(0,1)"), ("(1,1)", "(2,1)")],
    )
    .expect("outer square of the grid")
}

// ---------------------------------------------------------------------------
// Prisms for the partial cone and partial fiber cubes: the square (the
// cofiber or fiber pattern, coordinates (i,j)) times the interval of the
// remaining original direction (coordinate v), with labels (i,j,v).
// ---------------------------------------------------------------------------

/// square x interval, vertices (i,j,v).
pub fn square_prism() -> FinCat {
    let mut v = Vec::new();
    for i in 0..=1 {
        for j in 0..=1 {
            for k in 0..=1 {
                v.push((i, j, k));
            }
        }
    }
    subposet_3d(&v)
}

/// span x interval: the square_prism without the (1,1,v) vertices.
pub fn span_prism() -> FinCat {
    let v = vec![(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1), (0, 1, 0), (0, 1, 1)];
    subposet_3d(&v)
}

/// cospan x interval: the square_prism without the (0,0,v) vertices.
pub fn cospan_prism() -> FinCat {
    let v = vec![(1, 0, 0), (1, 0, 1), (0, 1, 0), (0, 1, 1), (1, 1, 0), (1, 1, 1)];
    subposet_3d(&v)
}

pub fn span_prism_inclusion() -> Functor {
    Functor::by_names(&span_prism(), &square_prism()).expect("span prism inclusion")
}

pub fn cospan_prism_inclusion() -> Functor {
    Functor::by_names(&cospan_prism(), &square_prism()).expect("cospan prism inclusion")
}

/// The input square sits in the span prism along (h, v) -> (h, 0, v);
/// a sieve, so the remaining vertices can be filled with genuine zeros.
pub fn square_into_span_prism() -> Functor {
    thin_functor(
        &square(),
        &span_prism(),
        &[("(0,0)", "(0,0,0)"), ("(1,0)", "(1,0,0)"), ("(0,1)", "(0,0,1)"), ("(1,1)", "(1,0,1)")],
    )
    .expect("square into span prism")
}

/// The input square sits in the cospan prism along (h, v) -> (1, h, v);
/// a cosieve.
pub fn square_into_cospan_prism() -> Functor {
    thin_functor(
        &square(),
        &cospan_prism(),
        &[("(0,0)", "(1,0,0)"), ("(1,0)", "(1,1,0)"), ("(0,1)", "(1,0,1)"), ("(1,1)", "(1,1,1)")],
    )
    .expect("square into cospan prism")
}

/// The partial-cone edge (1,1,0) -> (1,1,1) of the square prism.
pub fn prism_cone_edge() -> Functor {
    Functor::between_thin(&interval(), &square_prism(), &["(1,1,0)", "(1,1,1)"]).expect("prism cone edge")
}

/// The partial-fiber edge (0,0,0) -> (0,0,1) of the square prism.
pub fn prism_fiber_edge() -> Functor {
    Functor::between_thin(&interval(), &square_prism(), &["(0,0,0)", "(0,0,1)"]).expect("prism fiber edge")
}

// ---------------------------------------------------------------------------
// Cubes
// ---------------------------------------------------------------------------

fn bits(n: usize, dim: u32) -> String {
    (0..dim).map(|b| ((n >> b) & 1).to_string()).collect()
}

/// The cube [1]^n with bitstring labels, n in {2, 3}.
pub fn cube(n: u32) -> Result<FinCat> {
    if !(2..=3).contains(&n) {
        return Err(Error::CubeDimension(n));
    }
    let elements: Vec<String> = (0..(1usize << n)).map(|v| bits(v, n)).collect();
    let mut leq = Vec::new();
    for v in 0..(1usize << n) {
        for b in 0..n {
            if (v >> b) & 1 == 0 {
                leq.push((bits(v, n), bits(v | (1 << b), n)));
            }
        }
    }
    Ok(poset(elements, leq))
}

/// The subposet of the n-cube on vertices of weight <= 1.
pub fn cube_spider(n: u32) -> Result<FinCat> {
    let c = cube(n)?;
    let ids: Vec<_> = (0..c.n_objects())
        .filter(|&o| c.object_label(o).chars().filter(|&ch| ch == '1').count() <= 1)
        .collect();
    Ok(c.full_subcategory(&ids).0)
}

pub fn cube_spider_inclusion(n: u32) -> Result<Functor> {
    Functor::by_names(&cube_spider(n)?, &cube(n)?)
}

/// The face of the 3-cube in which coordinate `axis` is fixed to `value`,
/// as a functor from the square.
pub fn cube3_face(axis: usize, value: usize) -> Result<Functor> {
    if axis > 2 || value > 1 {
        return Err(Error::Input(format!("no face axis={} value={}", axis, value)));
    }
    let lab = |i: usize, j: usize| -> String {
        let mut coords = [0usize; 3];
        coords[axis] = value;
        let free: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
        coords[free[0]] = i;
        coords[free[1]] = j;
        coords.iter().map(|c| c.to_string()).collect()
    };
    let labels = [lab(0, 0), lab(1, 0), lab(0, 1), lab(1, 1)];
    thin_functor(
        &square(),
        &cube(3)?,
        &[
            ("(0,0)", labels[0].as_str()),
            ("(1,0)", labels[1].as_str()),
            ("(0,1)", labels[2].as_str()),
            ("(1,1)", labels[3].as_str()),
        ],
    )
}

// ---------------------------------------------------------------------------
// The staircase band for Barratt-Puppe windows: vertices (c, r) with
// r in -w..=w and c in r..=r+3, ordered componentwise.
// ---------------------------------------------------------------------------

pub fn band_label(c: i32, r: i32) -> String {
    format!("({},{})", c, r)
}

pub fn bp_band(w: u32) -> FinCat {
    let w = w as i32;
    let mut elements = Vec::new();
    let mut pairs = Vec::new();
    for r in -w..=w {
        for c in r..=r + 3 {
            elements.push(band_label(c, r));
            pairs.push((c, r));
        }
    }
    let mut leq = Vec::new();
    for &(c1, r1) in &pairs {
        for &(c2, r2) in &pairs {
            if (c1, r1) != (c2, r2) && c1 <= c2 && r1 <= r2 {
                leq.push((band_label(c1, r1), band_label(c2, r2)));
            }
        }
    }
    poset(elements, leq)
}

/// Named shape lookup for the CLI and the JSON loader.
pub fn standard_shape(name: &str) -> Result<FinCat> {
    if let Some(rest) = name.strip_prefix("chain-") {
        let n: usize = rest.parse().map_err(|_| Error::UnknownShape(name.into()))?;
        return Ok(chain(n));
    }
    if let Some(rest) = name.strip_prefix("discrete-") {
        let n: usize = rest.parse().map_err(|_| Error::UnknownShape(name.into()))?;
        return Ok(discrete(n));
    }
    if let Some(rest) = name.strip_prefix("cube-") {
        let n: u32 = rest.parse().map_err(|_| Error::UnknownShape(name.into()))?;
        return cube(n);
    }
    if let Some(rest) = name.strip_prefix("figure-b") {
        if rest.is_empty() {
            return Ok(figure_b());
        }
        let k: usize = rest.parse().map_err(|_| Error::UnknownShape(name.into()))?;
        return figure_stage(k);
    }
    if let Some(rest) = name.strip_prefix("sigma-a") {
        let k: usize = rest.parse().map_err(|_| Error::UnknownShape(name.into()))?;
        return grid_stage(k);
    }
    if let Some(rest) = name.strip_prefix("bp-band-") {
        let w: u32 = rest.parse().map_err(|_| Error::UnknownShape(name.into()))?;
        return Ok(bp_band(w));
    }
    match name {
        "empty" => Ok(empty()),
        "point" => Ok(point()),
        "interval" => Ok(interval()),
        "square" => Ok(square()),
        "span" => Ok(span()),
        "cospan" => Ok(cospan()),
        "cocone-square" => Ok(cocone_square()),
        "grid" => Ok(grid()),
        _ => Err(Error::UnknownShape(name.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cocone_square_shape() {
        let p = cocone_square();
        assert_eq!(p.n_objects(), 5);
        // (1,1) -> inf is the unique non-identity arrow out of (1,1)
        let c = p.object_id("(1,1)").unwrap();
        let outs: Vec<_> = p
            .nonidentity_morphisms()
            .filter(|&m| p.src(m) == c)
            .collect();
        assert_eq!(outs.len(), 1);
        assert_eq!(p.object_label(p.dst(outs[0])), "inf");
    }

    #[test]
    fn figure_b_objects() {
        let b = figure_b();
        assert_eq!(b.n_objects(), 15);
        for k in 1..=5 {
            figure_stage(k).unwrap().validate().unwrap();
        }
        assert_eq!(figure_stage(1).unwrap().n_objects(), 5);
        assert_eq!(figure_stage(2).unwrap().n_objects(), 6);
        assert_eq!(figure_stage(3).unwrap().n_objects(), 9);
        assert_eq!(figure_stage(4).unwrap().n_objects(), 12);
        assert_eq!(figure_stage(5).unwrap().n_objects(), 14);
        // stage 2 is a 2x3 grid
        assert!(figure_stage(2).unwrap().is_isomorphic_to(&grid()));
    }

    #[test]
    fn figure_slice_for_second_stage_is_interval() {
        // the slice of B1 -> B2 at the new object (0,2,0) is the poset [1]
        let i2 = figure_stage_inclusion(2).unwrap();
        let b2 = i2.target().clone();
        let o = b2.object_id("(0,2,0)").unwrap();
        let s = i2.slice(o).unwrap();
        assert!(s.cat.is_isomorphic_to(&interval()));
    }

    #[test]
    fn grid_stages() {
        assert_eq!(grid_stage(1).unwrap().n_objects(), 3);
        assert_eq!(grid_stage(2).unwrap().n_objects(), 4);
        assert_eq!(grid_stage(3).unwrap().n_objects(), 5);
        grid_middle_embedding().unwrap();
        for k in 2..=4 {
            grid_stage_inclusion(k).unwrap();
        }
        // the first stage inclusion is a sieve, the third is a cosieve
        assert!(grid_middle_embedding().unwrap().is_sieve().unwrap());
        assert!(grid_stage_inclusion(3).unwrap().is_cosieve().unwrap());
    }

    #[test]
    fn cubes_and_faces() {
        let c3 = cube(3).unwrap();
        assert_eq!(c3.n_objects(), 8);
        assert!(cube(4).is_err());
        assert_eq!(cube_spider(3).unwrap().n_objects(), 4);
        for axis in 0..3 {
            for value in 0..2 {
                cube3_face(axis, value).unwrap();
            }
        }
    }

    #[test]
    fn band_poset() {
        let b = bp_band(1);
        assert_eq!(b.n_objects(), 12);
        b.validate().unwrap();
        assert!(b.is_strictly_homotopy_finite());
    }

    #[test]
    fn shape_lookup() {
        for name in [
            "empty", "point", "interval", "square", "span", "cospan", "cocone-square", "grid",
            "figure-b", "figure-b3", "sigma-a2", "cube-3", "chain-4", "discrete-2", "bp-band-2",
        ] {
            standard_shape(name).unwrap();
        }
        assert!(standard_shape("nope").is_err());
        assert!(standard_shape("cube-4").is_err());
    }
}
