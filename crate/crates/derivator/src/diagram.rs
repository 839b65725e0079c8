//! Strict diagrams of chain complexes over a finite category, and strict
//! maps between them. These are the artifact's representatives of coherent
//! diagrams.

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, MorId, ObjId};
use crate::matrix::FpMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Exhaustive functoriality and chain-map validation is always on below this
/// total dimension; above it the structural checks (shapes, d^2 of values)
/// still run and `check_functoriality` can be called explicitly.
pub const FULL_CHECK_DIM_LIMIT: usize = 500;

pub type MapComponents = BTreeMap<i32, FpMatrix>;

#[derive(Clone)]
pub struct Diagram {
    shape: FinCat,
    p: u32,
    values: Vec<ChainComplex>,
    /// transition components per non-identity morphism, indexed by
    /// `m - shape.n_objects()`
    trans: Vec<MapComponents>,
}

impl std::fmt::Debug for Diagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Diagram(p={}, shape {:?}, total dim {})",
            self.p,
            self.shape,
            self.total_dim()
        )
    }
}

impl Diagram {
    /// Fully validated constructor.
    pub fn new(shape: FinCat, p: u32, values: Vec<ChainComplex>, trans: Vec<MapComponents>) -> Result<Self> {
        let d = Self::assemble(shape, p, values, trans)?;
        d.check_transitions()?;
        d.check_functoriality()?;
        Ok(d)
    }

    /// Constructor for engine outputs whose transitions are functorial by
    /// construction; exhaustive checks still run below `FULL_CHECK_DIM_LIMIT`.
    pub fn from_engine(shape: FinCat, p: u32, values: Vec<ChainComplex>, trans: Vec<MapComponents>) -> Result<Self> {
        let d = Self::assemble(shape, p, values, trans)?;
        if d.total_dim() <= FULL_CHECK_DIM_LIMIT {
            d.check_transitions()?;
            d.check_functoriality()?;
        }
        Ok(d)
    }

    fn assemble(shape: FinCat, p: u32, values: Vec<ChainComplex>, trans: Vec<MapComponents>) -> Result<Self> {
        if values.len() != shape.n_objects() {
            return Err(Error::InvalidDiagram("one complex per object required".into()));
        }
        for v in &values {
            if v.p() != p {
                return Err(Error::PrimeMismatch(p, v.p()));
            }
        }
        let n_nonid = shape.n_morphisms() - shape.n_objects();
        if trans.len() != n_nonid {
            return Err(Error::InvalidDiagram(
                "one transition per non-identity morphism required".into(),
            ));
        }
        Ok(Diagram { shape, p, values, trans })
    }

    /// Chain-map property (shape and d-commutation) of every stored
    /// transition.
    pub fn check_transitions(&self) -> Result<()> {
        for m in self.shape.nonidentity_morphisms() {
            self.transition_map(m).map_err(|e| {
                Error::InvalidDiagram(format!(
                    "transition `{}`: {}",
                    self.shape.morphism_name(m),
                    e
                ))
            })?;
        }
        Ok(())
    }

    /// Exhaustive check over the composition table; reports the failing
    /// composable pair.
    pub fn check_functoriality(&self) -> Result<()> {
        for g in self.shape.nonidentity_morphisms() {
            for f in self.shape.nonidentity_morphisms() {
                let Some(c) = self.shape.compose(g, f) else { continue };
                let lo = self.values[self.shape.src(f)].lo();
                let hi = self.values[self.shape.src(f)].hi();
                for n in lo..=hi {
                    let gf = self
                        .transition_comp(g, n)
                        .mul(&self.transition_comp(f, n))
                        .map_err(|e| Error::InvalidDiagram(e.to_string()))?;
                    if gf != self.transition_comp(c, n) {
                        return Err(Error::Functoriality {
                            g: self.shape.morphism_name(g).to_string(),
                            f: self.shape.morphism_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &FinCat {
        &self.shape
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn value(&self, o: ObjId) -> &ChainComplex {
        &self.values[o]
    }
    pub fn values(&self) -> &[ChainComplex] {
        &self.values
    }
    pub fn total_dim(&self) -> usize {
        self.values.iter().map(|v| v.total_dim()).sum()
    }

    /// Degree-n matrix of the transition along any morphism (identity
    /// matrices for identities, zero-padded outside stored support).
    pub fn transition_comp(&self, m: MorId, n: i32) -> FpMatrix {
        let (s, d) = (self.shape.src(m), self.shape.dst(m));
        if self.shape.is_identity(m) {
            return FpMatrix::identity(self.p, self.values[s].dim(n));
        }
        let comps = &self.trans[m - self.shape.n_objects()];
        comps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(self.p, self.values[d].dim(n), self.values[s].dim(n)))
    }

    pub fn transition_map(&self, m: MorId) -> Result<ChainMap> {
        let (s, d) = (self.shape.src(m), self.shape.dst(m));
        let comps = self.values[s]
            .degrees()
            .map(|n| (n, self.transition_comp(m, n)))
            .collect();
        ChainMap::new(self.values[s].clone(), self.values[d].clone(), comps)
    }

    /// Restriction along a functor into this diagram's shape (u^*).
    pub fn restrict(&self, u: &Functor) -> Result<Diagram> {
        if u.target() != &self.shape {
            return Err(Error::ShapeMismatch(
                "restriction functor must land in the diagram shape".into(),
            ));
        }
        let src = u.source().clone();
        let values: Vec<ChainComplex> = (0..src.n_objects())
            .map(|o| self.values[u.apply_ob(o)].clone())
            .collect();
        let mut trans = Vec::new();
        for m in src.nonidentity_morphisms() {
            let im = u.apply_mor(m);
            let lo = values[src.src(m)].lo();
            let hi = values[src.src(m)].hi();
            let comps: MapComponents = (lo..=hi).map(|n| (n, self.transition_comp(im, n))).collect();
            trans.push(comps);
        }
        Diagram::from_engine(src, self.p, values, trans)
    }

    /// Constant diagram: every object carries `x`, every morphism the
    /// identity.
    pub fn constant(shape: FinCat, x: ChainComplex) -> Diagram {
        let p = x.p();
        let n_nonid = shape.n_morphisms() - shape.n_objects();
        let id_comps: MapComponents = x
            .degrees()
            .map(|n| (n, FpMatrix::identity(p, x.dim(n))))
            .collect();
        let values = vec![x; shape.n_objects()];
        Diagram { shape, p, values, trans: vec![id_comps; n_nonid] }
    }

    pub fn zero(shape: FinCat, p: u32) -> Diagram {
        Diagram::constant(shape, ChainComplex::zero(p))
    }

    /// Diagram with a single complex at one object and zeros elsewhere
    /// (valid over any shape with no non-identity endomorphisms into the
    /// chosen object from itself).
    pub fn point_at(shape: FinCat, at: ObjId, x: ChainComplex) -> Result<Diagram> {
        let p = x.p();
        let values: Vec<ChainComplex> = (0..shape.n_objects())
            .map(|o| if o == at { x.clone() } else { ChainComplex::zero(p) })
            .collect();
        let trans = shape
            .nonidentity_morphisms()
            .map(|_| MapComponents::new())
            .collect();
        Diagram::new(shape, p, values, trans)
    }
}

/// A strict map of diagrams over a common shape: per-object chain maps whose
/// naturality squares commute on the nose.
#[derive(Clone)]
pub struct DiagramMap {
    source: Diagram,
    target: Diagram,
    comps: Vec<MapComponents>,
}

impl std::fmt::Debug for DiagramMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DiagramMap({:?} -> {:?})", self.source, self.target)
    }
}

impl DiagramMap {
    pub fn new(source: Diagram, target: Diagram, comps: Vec<MapComponents>) -> Result<Self> {
        let m = Self::assemble(source, target, comps)?;
        m.check_components()?;
        m.check_naturality()?;
        Ok(m)
    }

    pub fn from_engine(source: Diagram, target: Diagram, comps: Vec<MapComponents>) -> Result<Self> {
        let m = Self::assemble(source, target, comps)?;
        if m.source.total_dim() + m.target.total_dim() <= FULL_CHECK_DIM_LIMIT {
            m.check_components()?;
            m.check_naturality()?;
        }
        Ok(m)
    }

    fn assemble(source: Diagram, target: Diagram, comps: Vec<MapComponents>) -> Result<Self> {
        if source.shape() != target.shape() {
            return Err(Error::ShapeMismatch("diagram map requires a common shape".into()));
        }
        if source.p() != target.p() {
            return Err(Error::PrimeMismatch(source.p(), target.p()));
        }
        if comps.len() != source.shape().n_objects() {
            return Err(Error::InvalidDiagram("one component per object required".into()));
        }
        Ok(DiagramMap { source, target, comps })
    }

    fn check_components(&self) -> Result<()> {
        for o in 0..self.source.shape().n_objects() {
            self.component(o)?;
        }
        Ok(())
    }

    pub fn check_naturality(&self) -> Result<()> {
        let shape = self.source.shape();
        for m in shape.nonidentity_morphisms() {
            let (a, b) = (shape.src(m), shape.dst(m));
            let lo = self.source.value(a).lo().min(self.target.value(a).lo());
            let hi = self.source.value(a).hi().max(self.target.value(a).hi());
            for n in lo..=hi {
                let lhs = self.comp_at(b, n).mul(&self.source.transition_comp(m, n))?;
                let rhs = self.target.transition_comp(m, n).mul(&self.comp_at(a, n))?;
                if lhs != rhs {
                    return Err(Error::Naturality(shape.morphism_name(m).to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn comp_at(&self, o: ObjId, n: i32) -> FpMatrix {
        self.comps[o].get(&n).cloned().unwrap_or_else(|| {
            FpMatrix::zeros(
                self.source.p(),
                self.target.value(o).dim(n),
                self.source.value(o).dim(n),
            )
        })
    }

    pub fn component(&self, o: ObjId) -> Result<ChainMap> {
        let comps = self
            .source
            .value(o)
            .degrees()
            .map(|n| (n, self.comp_at(o, n)))
            .collect();
        ChainMap::new(self.source.value(o).clone(), self.target.value(o).clone(), comps)
    }

    pub fn source(&self) -> &Diagram {
        &self.source
    }
    pub fn target(&self) -> &Diagram {
        &self.target
    }

    pub fn is_pointwise_quasi_iso(&self) -> Result<bool> {
        for o in 0..self.source.shape().n_objects() {
            if !self.component(o)?.is_quasi_iso() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Read a diagram map over the point or re-index: component list.
    pub fn components(&self) -> &[MapComponents] {
        &self.comps
    }
}

// ---------------------------------------------------------------------------
// Seeded random diagrams: finite direct sums of degree-shifted
// corepresentable cells plus one random differential layer between two cell
// groups, so that d^2 = 0 and strict functoriality hold by construction.
// A random change of basis at every object and degree densifies the
// matrices without changing the isomorphism type.
// ---------------------------------------------------------------------------

struct Cell {
    base: ObjId,
    degree: i32,
    layer: usize, // 0 or 1; layer-1 cells sit one degree above their targets
}

pub fn random_diagram(shape: &FinCat, p: u32, seed: u64, budget: usize) -> Result<Diagram> {
    shape.strictly_homotopy_finite()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_obj = shape.n_objects();
    if n_obj == 0 || budget == 0 {
        return Ok(Diagram::zero(shape.clone(), p));
    }
    let homs: Vec<Vec<Vec<MorId>>> = (0..n_obj)
        .map(|a| (0..n_obj).map(|b| shape.hom(a, b)).collect())
        .collect();
    let cell_weight = |b: ObjId| -> usize { (0..n_obj).map(|a| homs[b][a].len()).sum() };

    let mut cells: Vec<Cell> = Vec::new();
    let mut used = 0usize;
    for _ in 0..4 * budget {
        let base = rng.gen_range(0..n_obj);
        let w = cell_weight(base);
        if used + w > budget {
            continue;
        }
        let layer = rng.gen_range(0..2usize);
        let degree = rng.gen_range(0..2i32) + layer as i32;
        cells.push(Cell { base, degree, layer });
        used += w;
        if used >= budget {
            break;
        }
    }
    if cells.is_empty() {
        return Ok(Diagram::zero(shape.clone(), p));
    }

    // random Yoneda coefficients for the differential layer
    let mut coeffs: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
    for (j, cj) in cells.iter().enumerate() {
        if cj.layer != 1 {
            continue;
        }
        for (i, ci) in cells.iter().enumerate() {
            if ci.layer != 0 || cj.degree != ci.degree + 1 {
                continue;
            }
            let hom_bc = &homs[ci.base][cj.base];
            if hom_bc.is_empty() {
                continue;
            }
            coeffs.insert((j, i), hom_bc.iter().map(|_| rng.gen_range(0..p)).collect());
        }
    }

    // per-object complexes
    let mut values = Vec::new();
    for a in 0..n_obj {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for c in &cells {
            if !homs[c.base][a].is_empty() {
                lo = lo.min(c.degree);
                hi = hi.max(c.degree);
            }
        }
        if lo > hi {
            values.push(ChainComplex::zero(p));
            continue;
        }
        let dims: Vec<usize> = (lo..=hi)
            .map(|n| {
                cells
                    .iter()
                    .filter(|c| c.degree == n)
                    .map(|c| homs[c.base][a].len())
                    .sum()
            })
            .collect();
        // block offsets of each cell inside degree n
        let offset = |cell_idx: usize, a: ObjId| -> usize {
            let deg = cells[cell_idx].degree;
            cells[..cell_idx]
                .iter()
                .filter(|c| c.degree == deg)
                .map(|c| homs[c.base][a].len())
                .sum()
        };
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let rows: usize = dims[(n - 1 - lo) as usize];
            let cols: usize = dims[(n - lo) as usize];
            let mut m = FpMatrix::zeros(p, rows, cols);
            for (j, cj) in cells.iter().enumerate() {
                if cj.layer != 1 || cj.degree != n {
                    continue;
                }
                for (i, ci) in cells.iter().enumerate() {
                    let Some(lambda) = coeffs.get(&(j, i)) else { continue };
                    let hom_bc = &homs[ci.base][cj.base];
                    let hom_ca = &homs[cj.base][a];
                    let hom_ba = &homs[ci.base][a];
                    for (gc, &g) in hom_ca.iter().enumerate() {
                        for (hc, &h) in hom_bc.iter().enumerate() {
                            let gh = shape.compose(g, h).expect("composable");
                            let row = hom_ba.iter().position(|&x| x == gh).expect("closed under composition");
                            m.add_at(offset(i, a) + row, offset(j, a) + gc, lambda[hc]);
                        }
                    }
                }
            }
            diffs.push(m);
        }
        values.push(ChainComplex::new(p, lo, dims, diffs)?);
    }

    // transitions by the corepresentable pushforward
    let mut trans = Vec::new();
    for mor in shape.nonidentity_morphisms() {
        let (a, b) = (shape.src(mor), shape.dst(mor));
        let mut comps = MapComponents::new();
        for n in values[a].lo()..=values[a].hi() {
            let mut m = FpMatrix::zeros(p, values[b].dim(n), values[a].dim(n));
            let mut col_off = 0usize;
            let mut row_offsets: BTreeMap<usize, usize> = BTreeMap::new();
            let mut acc = 0usize;
            for (ci, c) in cells.iter().enumerate() {
                if c.degree == n {
                    row_offsets.insert(ci, acc);
                    acc += homs[c.base][b].len();
                }
            }
            for (ci, c) in cells.iter().enumerate() {
                if c.degree != n {
                    continue;
                }
                let hom_ba = &homs[c.base][a];
                let hom_bb = &homs[c.base][b];
                for (fc, &f) in hom_ba.iter().enumerate() {
                    let mf = shape.compose(mor, f).expect("composable");
                    let row = hom_bb.iter().position(|&x| x == mf).expect("closed");
                    m.set(row_offsets[&ci] + row, col_off + fc, 1);
                }
                col_off += hom_ba.len();
            }
            if !m.is_zero() {
                comps.insert(n, m);
            }
        }
        trans.push(comps);
    }

    let plain = Diagram::new(shape.clone(), p, values, trans)?;
    conjugate_random(&plain, &mut rng)
}

/// Apply a random change of basis at every object and degree; the result is
/// isomorphic to the input but with dense matrices.
fn conjugate_random(d: &Diagram, rng: &mut impl Rng) -> Result<Diagram> {
    let p = d.p();
    let shape = d.shape().clone();
    let mut bases: Vec<BTreeMap<i32, (FpMatrix, FpMatrix)>> = Vec::new(); // (P, P^{-1})
    for o in 0..shape.n_objects() {
        let mut per = BTreeMap::new();
        for n in d.value(o).degrees() {
            let k = d.value(o).dim(n);
            let m = FpMatrix::random_invertible(p, k, rng);
            let inv = m.right_inverse().expect("invertible");
            per.insert(n, (m, inv));
        }
        bases.push(per);
    }
    let pmat = |o: ObjId, n: i32, inv: bool| -> FpMatrix {
        match bases[o].get(&n) {
            Some((m, mi)) => {
                if inv {
                    mi.clone()
                } else {
                    m.clone()
                }
            }
            None => FpMatrix::identity(p, d.value(o).dim(n)),
        }
    };
    let mut values = Vec::new();
    for o in 0..shape.n_objects() {
        let v = d.value(o);
        let dims: Vec<usize> = v.degrees().map(|n| v.dim(n)).collect();
        let mut diffs = Vec::new();
        for n in v.lo() + 1..=v.hi() {
            diffs.push(pmat(o, n - 1, false).mul(&v.d(n))?.mul(&pmat(o, n, true))?);
        }
        values.push(ChainComplex::new(p, v.lo(), dims, diffs)?);
    }
    let mut trans = Vec::new();
    for m in shape.nonidentity_morphisms() {
        let (a, b) = (shape.src(m), shape.dst(m));
        let mut comps = MapComponents::new();
        for n in d.value(a).lo()..=d.value(a).hi() {
            let c = pmat(b, n, false).mul(&d.transition_comp(m, n))?.mul(&pmat(a, n, true))?;
            if !c.is_zero() {
                comps.insert(n, c);
            }
        }
        trans.push(comps);
    }
    Diagram::new(shape, p, values, trans)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn constant_restrict() {
        let x = ChainComplex::point(7, 0);
        let d = Diagram::constant(shapes::square(), x.clone());
        d.check_functoriality().unwrap();
        let r = d.restrict(&shapes::span_inclusion()).unwrap();
        assert_eq!(r.shape(), &shapes::span());
        assert_eq!(r.value(0), &x);
        // restricting a constant diagram along any functor is constant
        let r2 = d.restrict(&shapes::right_vertical_edge()).unwrap();
        for o in 0..2 {
            assert_eq!(r2.value(o), &x);
        }
    }

    #[test]
    fn restrict_composes() {
        let d = random_diagram(&shapes::square(), 3, 11, 20).unwrap();
        let u = shapes::span_inclusion(); // span -> square
        let v = shapes::horizontal_into_span(); // interval -> span
        let uv = |x: &Diagram| x.restrict(&u).unwrap().restrict(&v).unwrap();
        let w = u.compose(&v).unwrap();
        let direct = d.restrict(&w).unwrap();
        let two_step = uv(&d);
        for o in 0..2 {
            assert_eq!(direct.value(o), two_step.value(o));
        }
    }

    #[test]
    fn random_diagrams_are_functorial() {
        for seed in 0..100u64 {
            let p = [2u32, 3, 7][(seed % 3) as usize];
            let shape = match seed % 4 {
                0 => shapes::square(),
                1 => shapes::span(),
                2 => shapes::grid(),
                _ => shapes::cube(3).unwrap(),
            };
            let d = random_diagram(&shape, p, seed, 24).unwrap();
            d.check_functoriality().unwrap();
            d.check_transitions().unwrap();
        }
    }

    #[test]
    fn random_diagram_budget_zero() {
        let d = random_diagram(&shapes::square(), 7, 3, 0).unwrap();
        assert_eq!(d.total_dim(), 0);
    }

    #[test]
    fn random_diagram_deterministic() {
        let a = random_diagram(&shapes::square(), 7, 42, 30).unwrap();
        let b = random_diagram(&shapes::square(), 7, 42, 30).unwrap();
        for o in 0..4 {
            assert_eq!(a.value(o), b.value(o));
        }
    }

    #[test]
    fn corrupted_square_fails_functoriality() {
        let d = random_diagram(&shapes::square(), 7, 5, 24).unwrap();
        // corrupt one transition entry of a composite edge
        let shape = d.shape().clone();
        let m = shape.morphism_id("(0,0)->(1,1)").unwrap();
        let mut trans: Vec<MapComponents> = shape
            .nonidentity_morphisms()
            .map(|mm| {
                let mut comps = MapComponents::new();
                for n in d.value(shape.src(mm)).degrees() {
                    comps.insert(n, d.transition_comp(mm, n));
                }
                comps
            })
            .collect();
        let idx = m - shape.n_objects();
        let n0 = d.value(shape.src(m)).lo();
        let mat = trans[idx].get_mut(&n0).unwrap();
        if mat.rows() > 0 && mat.cols() > 0 {
            let v = mat.get(0, 0);
            mat.set(0, 0, (v + 1) % 7);
            let values = (0..4).map(|o| d.value(o).clone()).collect();
            let err = Diagram::new(shape.clone(), 7, values, trans);
            assert!(err.is_err());
            match err {
                Err(Error::Functoriality { .. }) | Err(Error::InvalidDiagram(_)) => {}
                other => panic!("expected functoriality-type failure, got {:?}", other.err()),
            }
        }
    }

    #[test]
    fn point_at_square() {
        let d = Diagram::point_at(shapes::square(), 0, ChainComplex::point(7, 0)).unwrap();
        assert_eq!(d.value(0).total_dim(), 1);
        assert_eq!(d.total_dim(), 1);
    }
}
