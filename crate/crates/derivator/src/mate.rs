//! The canonical mate measuring whether a left and a right Kan extension
//! commute, at chain level.
//!
//! Kan extensions along product functors u x id and id x v are computed by
//! the reduced pointwise formulas (the slices of u x id ignore the second
//! coordinate), so both composites totalize the same string-indexed triple
//! complex: bar over the slices of u of cobar over the coslices of v, in the
//! two nesting orders. The mate is the explicit isomorphism of string-indexed
//! bases, with the Koszul sign (-1)^(|s| |t|) on the (s, t) summand.

use crate::bar::{bar, bar_map, cobar, cobar_map, BarComplex};
use crate::complex::ChainComplex;
use crate::diagram::{Diagram, DiagramMap, MapComponents};
use crate::error::{Error, Result};
use crate::fincat::{product_morphism, product_object, Functor, ObjId};
use crate::kan;
use crate::matrix::FpMatrix;
use std::collections::BTreeMap;

/// The per-object machinery behind one value of a staged Kan extension.
pub struct StageData {
    /// the slice- or coslice-shaped diagram whose totalization is the value
    pub inner: Diagram,
    pub bar: BarComplex,
    /// slice/coslice objects as (object, structure morphism) pairs
    pub pairs: Vec<(ObjId, usize)>,
}

pub struct StagedKan {
    pub diagram: Diagram,
    pub data: Vec<StageData>,
}

/// (u x id_B)_! for u : A -> A', pointwise via bar over the slices (u/a').
pub fn lan_first(u: &Functor, b_cat: &crate::fincat::FinCat, x: &Diagram, cap: usize) -> Result<StagedKan> {
    let a_cat = u.source();
    let ab = a_cat.product(b_cat);
    if x.shape() != &ab {
        return Err(Error::ShapeMismatch("lan_first: diagram must live over A x B".into()));
    }
    let a2_cat = u.target();
    let target = a2_cat.product(b_cat);
    let p = x.p();

    let slices: Vec<_> = (0..a2_cat.n_objects())
        .map(|a2| u.slice(a2))
        .collect::<Result<Vec<_>>>()?;

    let mut data = Vec::new();
    let mut values = Vec::new();
    for s in &slices {
        for b in 0..b_cat.n_objects() {
            // inner diagram over the slice: (a, f) |-> X(a, b)
            let ob_map: Vec<ObjId> = s
                .objects
                .iter()
                .map(|&(a, _)| product_object(a_cat, b_cat, &ab, a, b))
                .collect();
            let mor_map: Vec<usize> = (0..s.cat.n_morphisms())
                .map(|m| {
                    let g = s.projection.apply_mor(m);
                    product_morphism(a_cat, b_cat, &ab, g, b_cat.identity_of(b))
                })
                .collect();
            let into_ab = Functor::new(s.cat.clone(), ab.clone(), ob_map, mor_map)?;
            let inner = x.restrict(&into_ab)?;
            let bc = bar(&inner, cap)?;
            values.push(bc.complex.clone());
            data.push(StageData { inner, bar: bc, pairs: s.objects.clone() });
        }
    }

    let nb = b_cat.n_objects();
    let mut trans = Vec::new();
    for m in target.nonidentity_morphisms() {
        let (alpha, beta) = crate::fincat::product_components(a2_cat, b_cat, &target, m);
        let (src_a2, dst_a2) = (a2_cat.src(alpha), a2_cat.dst(alpha));
        let (src_b, dst_b) = (b_cat.src(beta), b_cat.dst(beta));
        let from = &data[src_a2 * nb + src_b];
        let to = &data[dst_a2 * nb + dst_b];
        let f = slice_transition_pub(&slices[src_a2], &slices[dst_a2], u, alpha)?;
        let comps = bar_map(
            &f,
            &from.inner,
            &|o, k| {
                let (a, _) = slices[src_a2].objects[o];
                let step = product_morphism(a_cat, b_cat, &ab, a_cat.identity_of(a), beta);
                x.transition_comp(step, k)
            },
            &from.bar,
            &to.bar,
        );
        trans.push(comps);
    }
    let diagram = Diagram::from_engine(target, p, values, trans)?;
    Ok(StagedKan { diagram, data })
}

/// (id_A x v)_* for v : B -> B', pointwise via cobar over the coslices (b'/v).
pub fn ran_second(a_cat: &crate::fincat::FinCat, v: &Functor, x: &Diagram, cap: usize) -> Result<StagedKan> {
    let b_cat = v.source();
    let ab = a_cat.product(b_cat);
    if x.shape() != &ab {
        return Err(Error::ShapeMismatch("ran_second: diagram must live over A x B".into()));
    }
    let b2_cat = v.target();
    let target = a_cat.product(b2_cat);
    let p = x.p();

    let coslices: Vec<_> = (0..b2_cat.n_objects())
        .map(|b2| v.coslice(b2))
        .collect::<Result<Vec<_>>>()?;

    let mut data = Vec::new();
    let mut values = Vec::new();
    for a in 0..a_cat.n_objects() {
        for t in &coslices {
            let ob_map: Vec<ObjId> = t
                .objects
                .iter()
                .map(|&(b, _)| product_object(a_cat, b_cat, &ab, a, b))
                .collect();
            let mor_map: Vec<usize> = (0..t.cat.n_morphisms())
                .map(|m| {
                    let g = t.projection.apply_mor(m);
                    product_morphism(a_cat, b_cat, &ab, a_cat.identity_of(a), g)
                })
                .collect();
            let into_ab = Functor::new(t.cat.clone(), ab.clone(), ob_map, mor_map)?;
            let inner = x.restrict(&into_ab)?;
            let bc = cobar(&inner, cap)?;
            values.push(bc.complex.clone());
            data.push(StageData { inner, bar: bc, pairs: t.objects.clone() });
        }
    }

    let nb2 = b2_cat.n_objects();
    let mut trans = Vec::new();
    for m in target.nonidentity_morphisms() {
        let (alpha, beta) = crate::fincat::product_components(a_cat, b2_cat, &target, m);
        let (src_a, dst_a) = (a_cat.src(alpha), a_cat.dst(alpha));
        let (src_b2, dst_b2) = (b2_cat.src(beta), b2_cat.dst(beta));
        let from = &data[src_a * nb2 + src_b2];
        let to = &data[dst_a * nb2 + dst_b2];
        // (dst_b2 / v) -> (src_b2 / v) by precomposition with beta
        let f = coslice_transition_pub(&coslices[dst_b2], &coslices[src_b2], v, beta)?;
        let comps = cobar_map(
            &f,
            &to.inner,
            &|o, k| {
                let (b, _) = coslices[dst_b2].objects[o];
                let step = product_morphism(a_cat, b_cat, &ab, alpha, b_cat.identity_of(b));
                x.transition_comp(step, k)
            },
            &from.bar,
            &to.bar,
        );
        trans.push(comps);
    }
    let diagram = Diagram::from_engine(target, p, values, trans)?;
    Ok(StagedKan { diagram, data })
}

// re-exports of the slice transition builders from kan (kept private there)
fn slice_transition_pub(
    from: &crate::fincat::Slice,
    to: &crate::fincat::Slice,
    u: &Functor,
    beta: usize,
) -> Result<Functor> {
    kan::slice_transition(from, to, u, beta)
}

fn coslice_transition_pub(
    from: &crate::fincat::Coslice,
    to: &crate::fincat::Coslice,
    u: &Functor,
    beta: usize,
) -> Result<Functor> {
    kan::coslice_transition(from, to, u, beta)
}

pub struct MateResult {
    pub lr: Diagram,
    pub rl: Diagram,
    pub mate: DiagramMap,
}

/// The canonical mate (u x id)_! (id x v)_* X -> (id x v)_* (u x id)_! X as
/// the explicit signed isomorphism of string-indexed bases.
pub fn canonical_mate(u: &Functor, v: &Functor, x: &Diagram, cap: usize) -> Result<MateResult> {
    let (a_cat, b_cat) = (u.source(), v.source());
    let ab = a_cat.product(b_cat);
    if x.shape() != &ab {
        return Err(Error::ShapeMismatch("canonical_mate: diagram must live over A x B".into()));
    }
    let p = x.p();
    let rx = ran_second(a_cat, v, x, cap)?;
    let lr = lan_first(u, v.target(), &rx.diagram, cap)?;
    let wx = lan_first(u, b_cat, x, cap)?;
    let rl = ran_second(u.target(), v, &wx.diagram, cap)?;

    let (a2_cat, b2_cat) = (u.target(), v.target());
    let (nb, nb2) = (b_cat.n_objects(), b2_cat.n_objects());
    let target = a2_cat.product(b2_cat);

    let mut comps = Vec::new();
    for a2 in 0..a2_cat.n_objects() {
        for b2 in 0..b2_cat.n_objects() {
            let o2 = a2 * nb2 + b2;
            let lr_stage = &lr.data[o2];
            let rl_stage = &rl.data[o2];
            let lr_val = lr.diagram.value(o2);
            let rl_val = rl.diagram.value(o2);
            let mut per_obj = MapComponents::new();
            for m in lr_val.lo()..=lr_val.hi() {
                let mut mat = FpMatrix::zeros(p, rl_val.dim(m), lr_val.dim(m));
                let empty = Vec::new();
                for su in lr_stage.bar.summands.get(&m).unwrap_or(&empty) {
                    let sigma = &lr_stage.bar.simplices[su.simplex];
                    let (a, _) = lr_stage.pairs[sigma.start];
                    // inner cobar of rx at (a, b2)
                    let inner_lr = &rx.data[a * nb2 + b2];
                    let inner_summands = inner_lr.bar.summands.get(&su.internal).unwrap_or(&empty);
                    for isu in inner_summands {
                        let tau = &inner_lr.bar.simplices[isu.simplex];
                        let k = isu.internal;
                        let col = su.offset + isu.offset;
                        // target: outer cobar summand at tau with internal
                        // degree k + |sigma|, then inner bar offset of sigma
                        let tau_end_pair = inner_lr.pairs[tau.end(&inner_lr.inner.shape().clone())];
                        let b = tau_end_pair.0;
                        let Some((tm, touter, _)) =
                            rl_stage.bar.block_of(tau, k + sigma.dim() as i32)
                        else {
                            continue;
                        };
                        debug_assert_eq!(tm, m);
                        let inner_rl = &wx.data[a2 * nb + b];
                        let Some((im, tinner, tdim)) = inner_rl.bar.block_of(sigma, k) else {
                            continue;
                        };
                        debug_assert_eq!(im, k + sigma.dim() as i32);
                        debug_assert_eq!(tdim, isu.dim);
                        let row = touter + tinner;
                        let sign = if (sigma.dim() * tau.dim()) % 2 == 0 { 1 } else { p - 1 };
                        mat.add_block(row, col, &FpMatrix::identity(p, isu.dim), sign);
                    }
                }
                if !mat.is_zero() {
                    per_obj.insert(m, mat);
                }
            }
            comps.push(per_obj);
        }
    }
    debug_assert_eq!(lr.diagram.shape(), &target);
    let mate = DiagramMap::from_engine(lr.diagram.clone(), rl.diagram.clone(), comps)?;
    Ok(MateResult { lr: lr.diagram, rl: rl.diagram, mate })
}

pub type DimTables = Vec<BTreeMap<i32, usize>>;

/// Graded homology dimension tables of both composites, for dimension-only
/// comparison.
pub fn commute_dims(u: &Functor, v: &Functor, x: &Diagram, cap: usize) -> Result<(DimTables, DimTables)> {
    let (a_cat, b_cat) = (u.source(), v.source());
    let rx = ran_second(a_cat, v, x, cap)?;
    let lr = lan_first(u, v.target(), &rx.diagram, cap)?;
    let wx = lan_first(u, b_cat, x, cap)?;
    let rl = ran_second(u.target(), v, &wx.diagram, cap)?;
    let lr_dims = lr.diagram.values().iter().map(ChainComplex::homology_dims).collect();
    let rl_dims = rl.diagram.values().iter().map(ChainComplex::homology_dims).collect();
    Ok((lr_dims, rl_dims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random_diagram;
    use crate::kan::DEFAULT_CAP;
    use crate::shapes;

    #[test]
    fn mate_for_identity_functors_is_signed_identity() {
        let idf = Functor::identity(&shapes::interval());
        let x = random_diagram(&shapes::interval().product(&shapes::interval()), 7, 2, 14).unwrap();
        let res = canonical_mate(&idf, &idf, &x, DEFAULT_CAP).unwrap();
        assert!(res.mate.is_pointwise_quasi_iso().unwrap());
        // each component is a bijection on the common string basis
        for o in 0..res.lr.shape().n_objects() {
            let c = res.mate.component(o).unwrap();
            for n in res.lr.value(o).degrees() {
                assert_eq!(c.comp(n).rank(), res.lr.value(o).dim(n));
            }
        }
    }

    #[test]
    fn mate_pushout_pullback_is_pointwise_qis() {
        // u = span inclusion (pushout), v = cospan inclusion (pullback)
        let u = shapes::span_inclusion();
        let v = shapes::cospan_inclusion();
        let ab = shapes::span().product(&shapes::cospan());
        for seed in 0..4u64 {
            let p = [2u32, 3, 7][(seed % 3) as usize];
            let x = random_diagram(&ab, p, seed, 16).unwrap();
            let res = canonical_mate(&u, &v, &x, DEFAULT_CAP).unwrap();
            assert!(res.mate.is_pointwise_quasi_iso().unwrap(), "seed {}", seed);
        }
    }

    #[test]
    fn commute_dims_tables_agree() {
        let u = shapes::endpoint(1); // cosieve into [1]
        let v = shapes::endpoint(0); // sieve into [1]
        let ab = shapes::point().product(&shapes::point());
        for seed in 0..6u64 {
            let x = random_diagram(&ab, 3, seed, 10).unwrap();
            let (lr, rl) = commute_dims(&u, &v, &x, DEFAULT_CAP).unwrap();
            assert_eq!(lr, rl, "seed {}", seed);
        }
    }

    #[test]
    fn empty_pair_pointedness() {
        // hoLan along (empty -> point) then hoRan vs the reverse: both are
        // the zero complex, the initial-vs-final comparison of a pointed
        // model
        let e = shapes::empty();
        let pt = shapes::point();
        let u = Functor::new(e.clone(), pt.clone(), vec![], vec![]).unwrap();
        let x = Diagram::zero(e.product(&e), 7);
        let res = canonical_mate(&u, &u, &x, DEFAULT_CAP).unwrap();
        assert!(res.lr.value(0).is_zero_complex());
        assert!(res.rl.value(0).is_zero_complex());
        assert!(res.mate.is_pointwise_quasi_iso().unwrap());
    }
}
