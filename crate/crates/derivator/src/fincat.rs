//! Finite categories with explicit composition tables, functors between
//! them, slices, nerves, and the sieve/cosieve predicates.
//!
//! Morphisms are indexed with identities first: morphism `i` for
//! `i < n_objects()` is the identity of object `i`.

use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
struct MorData {
    name: String,
    src: ObjId,
    dst: ObjId,
}

#[derive(Clone)]
pub struct FinCat {
    objects: Vec<String>,
    mors: Vec<MorData>,
    /// comp[g * n_mors + f] = g ∘ f when src(g) == dst(f)
    comp: Vec<Option<MorId>>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.mors == other.mors && self.comp == other.comp
    }
}
impl Eq for FinCat {}

impl std::fmt::Debug for FinCat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FinCat({} objects {:?}, {} morphisms)",
            self.objects.len(),
            self.objects,
            self.mors.len()
        )
    }
}

pub fn identity_name(label: &str) -> String {
    format!("id:{}", label)
}

impl FinCat {
    /// Build a category from explicit objects, non-identity morphisms
    /// `(name, src, dst)` and composition entries `(g, f, g∘f)` for the
    /// composable non-identity pairs. Identities are added automatically;
    /// compositions with identities are implied. Associativity and unitality
    /// are checked exhaustively.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        compose: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::InvalidCategory(format!("duplicate object label `{}`", o)));
            }
        }
        let mut mors: Vec<MorData> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| MorData { name: identity_name(o), src: i, dst: i })
            .collect();
        let mut mor_index: HashMap<String, MorId> =
            mors.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
        for (name, src, dst) in morphisms {
            let s = *obj_index
                .get(&src)
                .ok_or_else(|| Error::UnknownObject(src.clone()))?;
            let d = *obj_index
                .get(&dst)
                .ok_or_else(|| Error::UnknownObject(dst.clone()))?;
            if mor_index.insert(name.clone(), mors.len()).is_some() {
                return Err(Error::InvalidCategory(format!("duplicate morphism name `{}`", name)));
            }
            mors.push(MorData { name, src: s, dst: d });
        }
        let nm = mors.len();
        let mut comp: Vec<Option<MorId>> = vec![None; nm * nm];
        // identity rules
        for g in 0..nm {
            comp[g * nm + mors[g].src] = Some(g); // g ∘ id_src = g
            comp[mors[g].dst * nm + g] = Some(g); // id_dst ∘ g = g
        }
        for (gn, fn_, gfn) in compose {
            let g = *mor_index
                .get(&gn)
                .ok_or_else(|| Error::UnknownMorphism(gn.clone()))?;
            let f = *mor_index
                .get(&fn_)
                .ok_or_else(|| Error::UnknownMorphism(fn_.clone()))?;
            let gf = *mor_index
                .get(&gfn)
                .ok_or_else(|| Error::UnknownMorphism(gfn.clone()))?;
            if mors[g].src != mors[f].dst {
                return Err(Error::InvalidCategory(format!("`{}` and `{}` are not composable", gn, fn_)));
            }
            if let Some(prev) = comp[g * nm + f] {
                if prev != gf {
                    return Err(Error::InvalidCategory(format!(
                        "conflicting composites for ({} ∘ {})",
                        gn, fn_
                    )));
                }
            }
            comp[g * nm + f] = Some(gf);
        }
        let cat = FinCat { objects, mors, comp, obj_index, mor_index };
        cat.validate()?;
        Ok(cat)
    }

    /// Checks totality on composable pairs, source/target compatibility of
    /// composites, unitality and associativity, all by exhaustive enumeration.
    pub fn validate(&self) -> Result<()> {
        let nm = self.mors.len();
        for g in 0..nm {
            for f in 0..nm {
                let composable = self.mors[g].src == self.mors[f].dst;
                match self.comp[g * nm + f] {
                    None if composable => {
                        return Err(Error::InvalidCategory(format!(
                            "missing composite {} ∘ {}",
                            self.mors[g].name, self.mors[f].name
                        )))
                    }
                    Some(_) if !composable => {
                        return Err(Error::InvalidCategory(format!(
                            "composite declared for non-composable {} ∘ {}",
                            self.mors[g].name, self.mors[f].name
                        )))
                    }
                    Some(gf)
                        if self.mors[gf].src != self.mors[f].src
                            || self.mors[gf].dst != self.mors[g].dst =>
                    {
                        return Err(Error::InvalidCategory(format!(
                            "composite {} ∘ {} has wrong endpoints",
                            self.mors[g].name, self.mors[f].name
                        )))
                    }
                    Some(_) => {}
                    None => {}
                }
            }
        }
        for o in 0..self.objects.len() {
            let id = o;
            if self.mors[id].src != o || self.mors[id].dst != o {
                return Err(Error::InvalidCategory("identity indexing broken".into()));
            }
        }
        for f in 0..nm {
            if self.compose(f, self.mors[f].src) != Some(f) || self.compose(self.mors[f].dst, f) != Some(f) {
                return Err(Error::InvalidCategory(format!("unit law fails at {}", self.mors[f].name)));
            }
        }
        for h in 0..nm {
            for g in 0..nm {
                if self.mors[h].src != self.mors[g].dst {
                    continue;
                }
                for f in 0..nm {
                    if self.mors[g].src != self.mors[f].dst {
                        continue;
                    }
                    let hg_f = self.compose(self.compose(h, g).unwrap(), f);
                    let h_gf = self.compose(h, self.compose(g, f).unwrap());
                    if hg_f != h_gf {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails on ({}, {}, {})",
                            self.mors[h].name, self.mors[g].name, self.mors[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Finite poset presented by elements and a `leq` relation (any relation;
    /// the reflexive-transitive closure is taken, antisymmetry is checked).
    /// Non-identity morphisms are named "src->dst".
    pub fn from_poset(elements: Vec<String>, leq: &[(String, String)]) -> Result<Self> {
        let n = elements.len();
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidCategory(format!("duplicate element `{}`", e)));
            }
        }
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (a, b) in leq {
            let i = *index.get(a).ok_or_else(|| Error::UnknownObject(a.clone()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownObject(b.clone()))?;
            le[i * n + j] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i * n + j] && le[j * n + i] {
                    return Err(Error::InvalidCategory(format!(
                        "antisymmetry fails: {} <= {} <= {}",
                        elements[i], elements[j], elements[i]
                    )));
                }
            }
        }
        let mut morphisms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i * n + j] {
                    morphisms.push((
                        format!("{}->{}", elements[i], elements[j]),
                        elements[i].clone(),
                        elements[j].clone(),
                    ));
                }
            }
        }
        let mut compose = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j && j != k && i != k && le[i * n + j] && le[j * n + k] {
                        compose.push((
                            format!("{}->{}", elements[j], elements[k]),
                            format!("{}->{}", elements[i], elements[j]),
                            format!("{}->{}", elements[i], elements[k]),
                        ));
                    }
                }
            }
        }
        FinCat::new(elements, morphisms, compose)
    }

    pub fn empty() -> Self {
        FinCat::new(vec![], vec![], vec![]).expect("empty category")
    }

    pub fn discrete(labels: &[&str]) -> Self {
        FinCat::from_poset(labels.iter().map(|s| s.to_string()).collect(), &[]).expect("discrete category")
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn n_morphisms(&self) -> usize {
        self.mors.len()
    }
    pub fn object_label(&self, o: ObjId) -> &str {
        &self.objects[o]
    }
    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }
    pub fn morphism_name(&self, m: MorId) -> &str {
        &self.mors[m].name
    }
    pub fn object_id(&self, label: &str) -> Result<ObjId> {
        self.obj_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownObject(label.to_string()))
    }
    pub fn morphism_id(&self, name: &str) -> Result<MorId> {
        self.mor_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }
    pub fn src(&self, m: MorId) -> ObjId {
        self.mors[m].src
    }
    pub fn dst(&self, m: MorId) -> ObjId {
        self.mors[m].dst
    }
    pub fn identity_of(&self, o: ObjId) -> MorId {
        o
    }
    pub fn is_identity(&self, m: MorId) -> bool {
        m < self.objects.len()
    }
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g * self.mors.len() + f]
    }
    pub fn nonidentity_morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        self.objects.len()..self.mors.len()
    }
    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        (0..self.mors.len())
            .filter(|&m| self.mors[m].src == a && self.mors[m].dst == b)
            .collect()
    }

    /// At most one morphism between any two objects.
    pub fn is_thin(&self) -> bool {
        let mut seen = HashSet::new();
        (0..self.mors.len()).all(|m| seen.insert((self.mors[m].src, self.mors[m].dst)))
    }

    pub fn unique_morphism(&self, a: ObjId, b: ObjId) -> Option<MorId> {
        let h = self.hom(a, b);
        if h.len() == 1 {
            Some(h[0])
        } else {
            None
        }
    }

    /// Finite, skeletal, and with no non-trivial endomorphisms.
    pub fn strictly_homotopy_finite(&self) -> Result<()> {
        for m in self.nonidentity_morphisms() {
            if self.mors[m].src == self.mors[m].dst {
                return Err(Error::NotStrictlyHomotopyFinite(format!(
                    "non-trivial endomorphism `{}`",
                    self.mors[m].name
                )));
            }
        }
        for a in 0..self.objects.len() {
            for b in 0..self.objects.len() {
                if a != b && !self.hom(a, b).is_empty() && !self.hom(b, a).is_empty() {
                    // with no non-trivial endomorphisms this forces an isomorphism pair
                    return Err(Error::NotStrictlyHomotopyFinite(format!(
                        "distinct isomorphic objects `{}` and `{}`",
                        self.objects[a], self.objects[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_strictly_homotopy_finite(&self) -> bool {
        self.strictly_homotopy_finite().is_ok()
    }

    pub fn terminal_object(&self) -> Option<ObjId> {
        (0..self.objects.len()).find(|&t| (0..self.objects.len()).all(|a| self.hom(a, t).len() == 1))
    }

    pub fn initial_object(&self) -> Option<ObjId> {
        (0..self.objects.len()).find(|&i| (0..self.objects.len()).all(|a| self.hom(i, a).len() == 1))
    }

    /// Product category: objects and morphisms are pairs, composition is
    /// componentwise. Labels are "(a,b)".
    pub fn product(&self, other: &FinCat) -> FinCat {
        let mut objects = Vec::new();
        for a in &self.objects {
            for b in &other.objects {
                objects.push(format!("({},{})", a, b));
            }
        }
        let pair_name = |f: MorId, g: MorId| -> String {
            format!("({},{})", self.mors[f].name, other.mors[g].name)
        };
        let mut morphisms = Vec::new();
        for f in 0..self.mors.len() {
            for g in 0..other.mors.len() {
                if self.is_identity(f) && other.is_identity(g) {
                    continue;
                }
                morphisms.push((
                    pair_name(f, g),
                    format!("({},{})", self.objects[self.mors[f].src], other.objects[other.mors[g].src]),
                    format!("({},{})", self.objects[self.mors[f].dst], other.objects[other.mors[g].dst]),
                ));
            }
        }
        // name including identity pairs (the identity of "(a,b)")
        let full_name = |f: MorId, g: MorId| -> String {
            if self.is_identity(f) && other.is_identity(g) {
                identity_name(&format!(
                    "({},{})",
                    self.objects[self.mors[f].src], other.objects[other.mors[g].src]
                ))
            } else {
                pair_name(f, g)
            }
        };
        let mut compose = Vec::new();
        for f2 in 0..self.mors.len() {
            for g2 in 0..other.mors.len() {
                if self.is_identity(f2) && other.is_identity(g2) {
                    continue;
                }
                for f1 in 0..self.mors.len() {
                    for g1 in 0..other.mors.len() {
                        if self.is_identity(f1) && other.is_identity(g1) {
                            continue;
                        }
                        let (Some(fc), Some(gc)) = (self.compose(f2, f1), other.compose(g2, g1)) else {
                            continue;
                        };
                        compose.push((full_name(f2, g2), full_name(f1, g1), full_name(fc, gc)));
                    }
                }
            }
        }
        FinCat::new(objects, morphisms, compose).expect("product of valid categories is valid")
    }

    /// Full subcategory on the given objects together with its inclusion.
    pub fn full_subcategory(&self, objs: &[ObjId]) -> (FinCat, Functor) {
        let labels: Vec<String> = objs.iter().map(|&o| self.objects[o].clone()).collect();
        let inset: HashSet<ObjId> = objs.iter().copied().collect();
        let mut morphisms = Vec::new();
        for m in self.nonidentity_morphisms() {
            if inset.contains(&self.mors[m].src) && inset.contains(&self.mors[m].dst) {
                morphisms.push((
                    self.mors[m].name.clone(),
                    self.objects[self.mors[m].src].clone(),
                    self.objects[self.mors[m].dst].clone(),
                ));
            }
        }
        let mut compose = Vec::new();
        for m in self.nonidentity_morphisms() {
            for f in self.nonidentity_morphisms() {
                if let Some(c) = self.compose(m, f) {
                    let all_in = [m, f, c].iter().all(|&x| {
                        inset.contains(&self.mors[x].src) && inset.contains(&self.mors[x].dst)
                    });
                    if all_in && !self.is_identity(c) {
                        compose.push((
                            self.mors[m].name.clone(),
                            self.mors[f].name.clone(),
                            self.mors[c].name.clone(),
                        ));
                    }
                }
            }
        }
        let sub = FinCat::new(labels, morphisms, compose).expect("full subcategory is valid");
        let incl = Functor::by_names(&sub, self).expect("inclusion of full subcategory");
        (sub, incl)
    }

    /// Isomorphism test by backtracking on an object bijection compatible
    /// with hom-set cardinalities, then (for thin categories) composition is
    /// forced; for non-thin categories a morphism-level check runs on top.
    pub fn is_isomorphic_to(&self, other: &FinCat) -> bool {
        if self.objects.len() != other.objects.len() || self.mors.len() != other.mors.len() {
            return false;
        }
        let n = self.objects.len();
        let mut assigned: Vec<Option<ObjId>> = vec![None; n];
        let mut used = vec![false; n];
        fn compatible(a: &FinCat, b: &FinCat, assigned: &[Option<ObjId>]) -> bool {
            for (i, ai) in assigned.iter().enumerate() {
                let Some(ii) = *ai else { continue };
                for (j, aj) in assigned.iter().enumerate() {
                    let Some(jj) = *aj else { continue };
                    if a.hom(i, j).len() != b.hom(ii, jj).len() {
                        return false;
                    }
                }
            }
            true
        }
        fn backtrack(a: &FinCat, b: &FinCat, assigned: &mut Vec<Option<ObjId>>, used: &mut Vec<bool>, i: usize) -> bool {
            let n = a.n_objects();
            if i == n {
                return if a.is_thin() && b.is_thin() { true } else { mor_check(a, b, assigned) };
            }
            for cand in 0..n {
                if used[cand] {
                    continue;
                }
                assigned[i] = Some(cand);
                used[cand] = true;
                if compatible(a, b, assigned) && backtrack(a, b, assigned, used, i + 1) {
                    return true;
                }
                assigned[i] = None;
                used[cand] = false;
            }
            false
        }
        fn mor_check(a: &FinCat, b: &FinCat, assigned: &[Option<ObjId>]) -> bool {
            // try to extend the object bijection to morphisms hom-set by
            // hom-set, checking composition (exponential only in parallel
            // morphism counts, which stay tiny here)
            let obj: Vec<ObjId> = assigned.iter().map(|x| x.unwrap()).collect();
            let mut mor_map: Vec<Option<MorId>> = vec![None; a.n_morphisms()];
            for o in 0..a.n_objects() {
                mor_map[o] = Some(obj[o]);
            }
            fn extend(a: &FinCat, b: &FinCat, obj: &[ObjId], mor_map: &mut Vec<Option<MorId>>, m: MorId) -> bool {
                if m == a.n_morphisms() {
                    // check composition table
                    for g in 0..a.n_morphisms() {
                        for f in 0..a.n_morphisms() {
                            if let Some(c) = a.compose(g, f) {
                                let bg = mor_map[g].unwrap();
                                let bf = mor_map[f].unwrap();
                                if b.compose(bg, bf) != Some(mor_map[c].unwrap()) {
                                    return false;
                                }
                            }
                        }
                    }
                    return true;
                }
                if mor_map[m].is_some() {
                    return extend(a, b, obj, mor_map, m + 1);
                }
                let (s, d) = (obj[a.src(m)], obj[a.dst(m)]);
                for cand in b.hom(s, d) {
                    if b.is_identity(cand) || mor_map.contains(&Some(cand)) {
                        continue;
                    }
                    mor_map[m] = Some(cand);
                    if extend(a, b, obj, mor_map, m + 1) {
                        return true;
                    }
                    mor_map[m] = None;
                }
                false
            }
            extend(a, b, &obj, &mut mor_map, 0)
        }
        backtrack(self, other, &mut assigned, &mut used, 0)
    }
}

/// A composable string of non-identity morphisms; `arrows` is empty for a
/// 0-simplex, which is just the object `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex {
    pub start: ObjId,
    pub arrows: Vec<MorId>,
}

impl Simplex {
    pub fn object(o: ObjId) -> Self {
        Simplex { start: o, arrows: vec![] }
    }
    pub fn dim(&self) -> usize {
        self.arrows.len()
    }
    pub fn end(&self, cat: &FinCat) -> ObjId {
        self.arrows.last().map(|&m| cat.dst(m)).unwrap_or(self.start)
    }
}

/// The nondegenerate simplices of the nerve, listed per dimension in a
/// deterministic order.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub by_dim: Vec<Vec<Simplex>>,
}

impl Nerve {
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(|v| v.len()).collect()
    }
    pub fn total(&self) -> usize {
        self.by_dim.iter().map(|v| v.len()).sum()
    }
}

impl FinCat {
    /// Nondegenerate simplices (composable strings of non-identity
    /// morphisms) per dimension. Terminates because strings cannot cycle in
    /// a strictly homotopy finite category.
    pub fn nerve(&self) -> Result<Nerve> {
        self.strictly_homotopy_finite()?;
        let mut by_dim: Vec<Vec<Simplex>> = vec![(0..self.objects.len()).map(Simplex::object).collect()];
        loop {
            let last = by_dim.last().unwrap();
            let mut next = Vec::new();
            for s in last {
                let end = s.end(self);
                for m in self.nonidentity_morphisms() {
                    if self.src(m) == end {
                        let mut arrows = s.arrows.clone();
                        arrows.push(m);
                        next.push(Simplex { start: s.start, arrows });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            by_dim.push(next);
        }
        Ok(Nerve { by_dim })
    }
}

#[derive(Clone)]
pub struct Functor {
    source: FinCat,
    target: FinCat,
    ob_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl std::fmt::Debug for Functor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Functor({:?} -> {:?})", self.source, self.target)
    }
}

impl Functor {
    pub fn new(source: FinCat, target: FinCat, ob_map: Vec<ObjId>, mor_map: Vec<MorId>) -> Result<Self> {
        if ob_map.len() != source.n_objects() || mor_map.len() != source.n_morphisms() {
            return Err(Error::InvalidFunctor("assignment length mismatch".into()));
        }
        for &o in &ob_map {
            if o >= target.n_objects() {
                return Err(Error::InvalidFunctor("object out of range".into()));
            }
        }
        for (m, &fm) in mor_map.iter().enumerate() {
            if fm >= target.n_morphisms() {
                return Err(Error::InvalidFunctor("morphism out of range".into()));
            }
            if target.src(fm) != ob_map[source.src(m)] || target.dst(fm) != ob_map[source.dst(m)] {
                return Err(Error::InvalidFunctor(format!(
                    "image of `{}` has wrong endpoints",
                    source.morphism_name(m)
                )));
            }
        }
        for o in 0..source.n_objects() {
            if mor_map[source.identity_of(o)] != target.identity_of(ob_map[o]) {
                return Err(Error::InvalidFunctor(format!(
                    "identity of `{}` not preserved",
                    source.object_label(o)
                )));
            }
        }
        for g in 0..source.n_morphisms() {
            for f in 0..source.n_morphisms() {
                if let Some(c) = source.compose(g, f) {
                    if target.compose(mor_map[g], mor_map[f]) != Some(mor_map[c]) {
                        return Err(Error::InvalidFunctor(format!(
                            "composition not preserved on ({}, {})",
                            source.morphism_name(g),
                            source.morphism_name(f)
                        )));
                    }
                }
            }
        }
        Ok(Functor { source, target, ob_map, mor_map })
    }

    pub fn identity(cat: &FinCat) -> Self {
        Functor {
            source: cat.clone(),
            target: cat.clone(),
            ob_map: (0..cat.n_objects()).collect(),
            mor_map: (0..cat.n_morphisms()).collect(),
        }
    }

    /// Functor determined by matching object labels and morphism names
    /// (inclusions of subcategories built from the same naming scheme).
    pub fn by_names(source: &FinCat, target: &FinCat) -> Result<Self> {
        let ob_map = source
            .object_labels()
            .iter()
            .map(|l| target.object_id(l))
            .collect::<Result<Vec<_>>>()?;
        let mor_map = (0..source.n_morphisms())
            .map(|m| target.morphism_id(source.morphism_name(m)))
            .collect::<Result<Vec<_>>>()?;
        Functor::new(source.clone(), target.clone(), ob_map, mor_map)
    }

    /// Functor between thin categories determined by its object assignment
    /// (labels in the target).
    pub fn between_thin(source: &FinCat, target: &FinCat, ob_labels: &[&str]) -> Result<Self> {
        if !source.is_thin() || !target.is_thin() {
            return Err(Error::InvalidFunctor("between_thin requires thin categories".into()));
        }
        let ob_map = ob_labels
            .iter()
            .map(|l| target.object_id(l))
            .collect::<Result<Vec<_>>>()?;
        if ob_map.len() != source.n_objects() {
            return Err(Error::InvalidFunctor("object assignment length mismatch".into()));
        }
        let mor_map = (0..source.n_morphisms())
            .map(|m| {
                target
                    .unique_morphism(ob_map[source.src(m)], ob_map[source.dst(m)])
                    .ok_or_else(|| {
                        Error::InvalidFunctor(format!(
                            "no image for `{}` in thin target",
                            source.morphism_name(m)
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Functor::new(source.clone(), target.clone(), ob_map, mor_map)
    }

    pub fn source(&self) -> &FinCat {
        &self.source
    }
    pub fn target(&self) -> &FinCat {
        &self.target
    }
    pub fn apply_ob(&self, o: ObjId) -> ObjId {
        self.ob_map[o]
    }
    pub fn apply_mor(&self, m: MorId) -> MorId {
        self.mor_map[m]
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Functor) -> Result<Functor> {
        if other.target != self.source {
            return Err(Error::InvalidFunctor("compose: middle categories differ".into()));
        }
        Functor::new(
            other.source.clone(),
            self.target.clone(),
            other.ob_map.iter().map(|&o| self.ob_map[o]).collect(),
            other.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        )
    }

    /// u × v : A×B -> A'×B'.
    pub fn product(u: &Functor, v: &Functor) -> Functor {
        let source = u.source.product(&v.source);
        let target = u.target.product(&v.target);
        let mut ob_map = Vec::with_capacity(source.n_objects());
        for a in 0..u.source.n_objects() {
            for b in 0..v.source.n_objects() {
                let label = format!(
                    "({},{})",
                    u.target.object_label(u.ob_map[a]),
                    v.target.object_label(v.ob_map[b])
                );
                ob_map.push(target.object_id(&label).expect("product object"));
            }
        }
        // morphism map by name reconstruction
        let mut mor_map = Vec::with_capacity(source.n_morphisms());
        for m in 0..source.n_morphisms() {
            let (f, g) = split_product_mor(&u.source, &v.source, &source, m);
            let (uf, vg) = (u.mor_map[f], v.mor_map[g]);
            let name = if u.target.is_identity(uf) && v.target.is_identity(vg) {
                identity_name(&format!(
                    "({},{})",
                    u.target.object_label(u.target.src(uf)),
                    v.target.object_label(v.target.src(vg))
                ))
            } else {
                format!("({},{})", u.target.morphism_name(uf), v.target.morphism_name(vg))
            };
            mor_map.push(target.morphism_id(&name).expect("product morphism"));
        }
        Functor::new(source, target, ob_map, mor_map).expect("product functor")
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = HashSet::new();
        self.ob_map.iter().all(|&o| seen.insert(o))
    }

    pub fn is_fully_faithful(&self) -> bool {
        for a in 0..self.source.n_objects() {
            for b in 0..self.source.n_objects() {
                let h = self.source.hom(a, b);
                let images: HashSet<MorId> = h.iter().map(|&m| self.mor_map[m]).collect();
                if images.len() != h.len()
                    || images.len() != self.target.hom(self.ob_map[a], self.ob_map[b]).len()
                {
                    return false;
                }
            }
        }
        true
    }

    fn check_subcategory_inclusion(&self) -> Result<()> {
        if !self.is_fully_faithful() || !self.is_injective_on_objects() {
            return Err(Error::InvalidFunctor(
                "sieve/cosieve test requires a fully faithful functor injective on objects".into(),
            ));
        }
        Ok(())
    }

    /// Closed under morphisms into the image.
    pub fn is_sieve(&self) -> Result<bool> {
        self.check_subcategory_inclusion()?;
        let image: HashSet<ObjId> = self.ob_map.iter().copied().collect();
        for m in 0..self.target.n_morphisms() {
            if image.contains(&self.target.dst(m)) && !image.contains(&self.target.src(m)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Closed under morphisms out of the image.
    pub fn is_cosieve(&self) -> Result<bool> {
        self.check_subcategory_inclusion()?;
        let image: HashSet<ObjId> = self.ob_map.iter().copied().collect();
        for m in 0..self.target.n_morphisms() {
            if image.contains(&self.target.src(m)) && !image.contains(&self.target.dst(m)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn split_product_mor(a: &FinCat, b: &FinCat, prod: &FinCat, m: MorId) -> (MorId, MorId) {
    // Morphisms of a product, in construction order: identities come first
    // (indexed like objects, i.e. pairs (oa*|B|+ob)), then non-identity pairs
    // in (f, g) lexicographic order skipping (id, id).
    if prod.is_identity(m) {
        let oa = m / b.n_objects();
        let ob = m % b.n_objects();
        return (a.identity_of(oa), b.identity_of(ob));
    }
    let mut idx = prod.n_objects(); // first non-identity index
    for f in 0..a.n_morphisms() {
        for g in 0..b.n_morphisms() {
            if a.is_identity(f) && b.is_identity(g) {
                continue;
            }
            if idx == m {
                return (f, g);
            }
            idx += 1;
        }
    }
    unreachable!("morphism index out of range in product")
}

/// Factor a product-category morphism into its two components.
pub fn product_components(a: &FinCat, b: &FinCat, prod: &FinCat, m: MorId) -> (MorId, MorId) {
    split_product_mor(a, b, prod, m)
}

/// Object id in a product category from factor object ids.
pub fn product_object(a: &FinCat, b: &FinCat, prod: &FinCat, oa: ObjId, ob: ObjId) -> ObjId {
    let _ = (a, prod);
    oa * b.n_objects() + ob
}

/// Morphism id in a product category from factor morphism ids.
pub fn product_morphism(a: &FinCat, b: &FinCat, prod: &FinCat, f: MorId, g: MorId) -> MorId {
    let name = if a.is_identity(f) && b.is_identity(g) {
        identity_name(&format!(
            "({},{})",
            a.object_label(a.src(f)),
            b.object_label(b.src(g))
        ))
    } else {
        format!("({},{})", a.morphism_name(f), b.morphism_name(g))
    };
    prod.morphism_id(&name).expect("product morphism lookup")
}

/// The slice category (u/b): objects are pairs (a, f: u(a) -> b).
pub struct Slice {
    pub cat: FinCat,
    /// projection (u/b) -> source(u)
    pub projection: Functor,
    /// slice objects as (a, f) pairs
    pub objects: Vec<(ObjId, MorId)>,
    /// (g, s1, s2) -> morphism id in `cat`
    pub mor_lookup: HashMap<(MorId, usize, usize), MorId>,
}

/// The coslice category (b/u): objects are pairs (a, f: b -> u(a)).
pub struct Coslice {
    pub cat: FinCat,
    pub projection: Functor,
    pub objects: Vec<(ObjId, MorId)>,
    pub mor_lookup: HashMap<(MorId, usize, usize), MorId>,
}

fn comma_objects_label(u: &Functor, a: ObjId, f: MorId) -> String {
    format!("{}|{}", u.source().object_label(a), u.target().morphism_name(f))
}

impl Functor {
    /// The slice (u/b) with its projection to the source of u.
    pub fn slice(&self, b: ObjId) -> Result<Slice> {
        let (src, tgt) = (&self.source, &self.target);
        let mut objects = Vec::new();
        for a in 0..src.n_objects() {
            for f in tgt.hom(self.ob_map[a], b) {
                objects.push((a, f));
            }
        }
        let labels: Vec<String> = objects.iter().map(|&(a, f)| comma_objects_label(self, a, f)).collect();
        // non-identity slice morphisms: (g: a -> a', s1, s2) with f2 ∘ u(g) = f1
        let mut morphisms = Vec::new();
        let mut triples = Vec::new();
        for (i1, &(a1, f1)) in objects.iter().enumerate() {
            for (i2, &(a2, f2)) in objects.iter().enumerate() {
                for g in src.hom(a1, a2) {
                    if src.is_identity(g) && i1 == i2 {
                        continue;
                    }
                    if tgt.compose(f2, self.mor_map[g]) == Some(f1) {
                        morphisms.push((
                            format!("{}:{}=>{}", src.morphism_name(g), labels[i1], labels[i2]),
                            labels[i1].clone(),
                            labels[i2].clone(),
                        ));
                        triples.push((g, i1, i2));
                    }
                }
            }
        }
        let name_of = |g: MorId, i1: usize, i2: usize| -> String {
            if src.is_identity(g) && i1 == i2 {
                identity_name(&labels[i1])
            } else {
                format!("{}:{}=>{}", src.morphism_name(g), labels[i1], labels[i2])
            }
        };
        let mut compose = Vec::new();
        for &(g2, j1, j2) in &triples {
            for &(g1, i1, i2) in &triples {
                if i2 != j1 {
                    continue;
                }
                let gc = src.compose(g2, g1).expect("composable in source");
                compose.push((name_of(g2, j1, j2), name_of(g1, i1, i2), name_of(gc, i1, j2)));
            }
        }
        let cat = FinCat::new(labels.clone(), morphisms, compose)?;
        let mut mor_lookup = HashMap::new();
        for &(g, i1, i2) in &triples {
            mor_lookup.insert((g, i1, i2), cat.morphism_id(&name_of(g, i1, i2))?);
        }
        for (i, &(a, _)) in objects.iter().enumerate() {
            mor_lookup.insert((src.identity_of(a), i, i), cat.identity_of(i));
        }
        let ob_map: Vec<ObjId> = objects.iter().map(|&(a, _)| a).collect();
        let mor_map: Vec<MorId> = (0..cat.n_morphisms())
            .map(|m| {
                if cat.is_identity(m) {
                    src.identity_of(objects[m].0)
                } else {
                    triples[m - cat.n_objects()].0
                }
            })
            .collect();
        let projection = Functor::new(cat.clone(), src.clone(), ob_map, mor_map)?;
        Ok(Slice { cat, projection, objects, mor_lookup })
    }

    /// The coslice (b/u) with its projection to the source of u.
    pub fn coslice(&self, b: ObjId) -> Result<Coslice> {
        let (src, tgt) = (&self.source, &self.target);
        let mut objects = Vec::new();
        for a in 0..src.n_objects() {
            for f in tgt.hom(b, self.ob_map[a]) {
                objects.push((a, f));
            }
        }
        let labels: Vec<String> = objects.iter().map(|&(a, f)| comma_objects_label(self, a, f)).collect();
        // non-identity coslice morphisms: (g: a1 -> a2) with u(g) ∘ f1 = f2
        let mut morphisms = Vec::new();
        let mut triples = Vec::new();
        for (i1, &(a1, f1)) in objects.iter().enumerate() {
            for (i2, &(a2, f2)) in objects.iter().enumerate() {
                for g in src.hom(a1, a2) {
                    if src.is_identity(g) && i1 == i2 {
                        continue;
                    }
                    if tgt.compose(self.mor_map[g], f1) == Some(f2) {
                        morphisms.push((
                            format!("{}:{}=>{}", src.morphism_name(g), labels[i1], labels[i2]),
                            labels[i1].clone(),
                            labels[i2].clone(),
                        ));
                        triples.push((g, i1, i2));
                    }
                }
            }
        }
        let name_of = |g: MorId, i1: usize, i2: usize| -> String {
            if src.is_identity(g) && i1 == i2 {
                identity_name(&labels[i1])
            } else {
                format!("{}:{}=>{}", src.morphism_name(g), labels[i1], labels[i2])
            }
        };
        let mut compose = Vec::new();
        for &(g2, j1, j2) in &triples {
            for &(g1, i1, i2) in &triples {
                if i2 != j1 {
                    continue;
                }
                let gc = src.compose(g2, g1).expect("composable in source");
                compose.push((name_of(g2, j1, j2), name_of(g1, i1, i2), name_of(gc, i1, j2)));
            }
        }
        let cat = FinCat::new(labels.clone(), morphisms, compose)?;
        let mut mor_lookup = HashMap::new();
        for &(g, i1, i2) in &triples {
            mor_lookup.insert((g, i1, i2), cat.morphism_id(&name_of(g, i1, i2))?);
        }
        for (i, &(a, _)) in objects.iter().enumerate() {
            mor_lookup.insert((src.identity_of(a), i, i), cat.identity_of(i));
        }
        let ob_map: Vec<ObjId> = objects.iter().map(|&(a, _)| a).collect();
        let mor_map: Vec<MorId> = (0..cat.n_morphisms())
            .map(|m| {
                if cat.is_identity(m) {
                    src.identity_of(objects[m].0)
                } else {
                    triples[m - cat.n_objects()].0
                }
            })
            .collect();
        let projection = Functor::new(cat.clone(), src.clone(), ob_map, mor_map)?;
        Ok(Coslice { cat, projection, objects, mor_lookup })
    }
}

impl Slice {
    pub fn object_index(&self, a: ObjId, f: MorId) -> Option<usize> {
        self.objects.iter().position(|&x| x == (a, f))
    }
}

impl Coslice {
    pub fn object_index(&self, a: ObjId, f: MorId) -> Option<usize> {
        self.objects.iter().position(|&x| x == (a, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn poset_interval() {
        let c = shapes::chain(1);
        assert_eq!(c.n_objects(), 2);
        assert_eq!(c.n_morphisms(), 3);
        assert!(c.is_thin());
        c.validate().unwrap();
    }

    #[test]
    fn product_square() {
        let i = shapes::chain(1);
        let sq = i.product(&i);
        assert_eq!(sq.n_objects(), 4);
        assert_eq!(sq.n_morphisms() - sq.n_objects(), 5);
        sq.validate().unwrap();
        assert!(sq.is_thin());
        // product with the point is isomorphic to the original
        let pt = shapes::point();
        assert!(pt.product(&i).is_isomorphic_to(&i));
    }

    #[test]
    fn grid_is_six_objects() {
        let g = shapes::chain(2).product(&shapes::chain(1));
        assert_eq!(g.n_objects(), 6);
    }

    #[test]
    fn nerve_counts() {
        assert_eq!(shapes::chain(1).nerve().unwrap().counts(), vec![2, 1]);
        assert_eq!(shapes::span().nerve().unwrap().counts(), vec![3, 2]);
        assert_eq!(shapes::chain(2).nerve().unwrap().counts(), vec![3, 3, 1]);
        assert_eq!(shapes::square().nerve().unwrap().counts(), vec![4, 5, 2]);
    }

    #[test]
    fn strictly_homotopy_finite_checks() {
        assert!(shapes::chain(1).product(&shapes::chain(2)).is_strictly_homotopy_finite());
        // one object with a non-identity idempotent endomorphism
        let idem = FinCat::new(
            vec!["*".into()],
            vec![("e".into(), "*".into(), "*".into())],
            vec![("e".into(), "e".into(), "e".into())],
        )
        .unwrap();
        assert!(!idem.is_strictly_homotopy_finite());
        // two distinct isomorphic objects
        let iso = FinCat::new(
            vec!["a".into(), "b".into()],
            vec![("f".into(), "a".into(), "b".into()), ("g".into(), "b".into(), "a".into())],
            vec![
                ("g".into(), "f".into(), "id:a".into()),
                ("f".into(), "g".into(), "id:b".into()),
            ],
        )
        .unwrap();
        assert!(!iso.is_strictly_homotopy_finite());
    }

    #[test]
    fn sieve_and_cosieve() {
        let i = shapes::chain(1);
        let pt = shapes::point();
        let one = Functor::between_thin(&pt, &i, &["1"]).unwrap();
        let zero = Functor::between_thin(&pt, &i, &["0"]).unwrap();
        assert!(one.is_cosieve().unwrap());
        assert!(!one.is_sieve().unwrap());
        assert!(zero.is_sieve().unwrap());
        assert!(!zero.is_cosieve().unwrap());
        let ispan = shapes::span_inclusion();
        assert!(ispan.is_sieve().unwrap());
        assert!(!ispan.is_cosieve().unwrap());
        let icospan = shapes::cospan_inclusion();
        assert!(icospan.is_cosieve().unwrap());
        assert!(!icospan.is_sieve().unwrap());
    }

    #[test]
    fn slices_of_catalogued_functors() {
        // slice of the span inclusion at the missing corner is the span itself
        let u = shapes::span_inclusion();
        let corner = u.target().object_id("(1,1)").unwrap();
        let s = u.slice(corner).unwrap();
        assert!(s.cat.is_isomorphic_to(&shapes::span()));
        // slice of the identity at any object has a terminal object
        let idf = Functor::identity(&shapes::square());
        for b in 0..4 {
            let s = idf.slice(b).unwrap();
            assert!(s.cat.terminal_object().is_some());
        }
        // slice over the identity on the point
        let idp = Functor::identity(&shapes::point());
        assert!(idp.slice(0).unwrap().cat.is_isomorphic_to(&shapes::point()));
    }

    #[test]
    fn sieve_test_requires_an_inclusion() {
        // the fold functor is not injective on objects, so the sieve and
        // cosieve predicates refuse it
        let fold = Functor::new(shapes::discrete(2), shapes::point(), vec![0, 0], vec![0, 0]).unwrap();
        assert!(fold.is_sieve().is_err());
        assert!(fold.is_cosieve().is_err());
    }

    #[test]
    fn slice_object_counts_and_terminal_pairs() {
        // slice objects are exactly the pairs (a, f: u(a) -> b); for a
        // cosieve the pair (b, id) is terminal in the slice at an image
        // object
        let u = shapes::cospan_inclusion(); // a cosieve into the square
        for b in 0..u.target().n_objects() {
            let s = u.slice(b).unwrap();
            let expected: usize = (0..u.source().n_objects())
                .map(|a| u.target().hom(u.apply_ob(a), b).len())
                .sum();
            assert_eq!(s.cat.n_objects(), expected);
        }
        for a in 0..u.source().n_objects() {
            let b = u.apply_ob(a);
            let s = u.slice(b).unwrap();
            let idx = s.object_index(a, u.target().identity_of(b)).unwrap();
            assert_eq!(s.cat.terminal_object(), Some(idx));
        }
    }

    #[test]
    fn coslice_duals() {
        let u = shapes::cospan_inclusion();
        let corner = u.target().object_id("(0,0)").unwrap();
        let s = u.coslice(corner).unwrap();
        assert!(s.cat.is_isomorphic_to(&shapes::cospan()));
    }

    #[test]
    fn terminal_initial() {
        let sq = shapes::square();
        assert_eq!(sq.terminal_object(), Some(sq.object_id("(1,1)").unwrap()));
        assert_eq!(sq.initial_object(), Some(sq.object_id("(0,0)").unwrap()));
        assert!(shapes::span().terminal_object().is_none());
        assert!(shapes::cospan().initial_object().is_none());
    }

    #[test]
    fn empty_category() {
        let e = FinCat::empty();
        assert_eq!(e.n_objects(), 0);
        assert!(e.is_strictly_homotopy_finite());
        assert_eq!(e.nerve().unwrap().counts(), vec![0]);
    }
}
