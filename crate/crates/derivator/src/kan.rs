//! Homotopy (co)limits and pointwise homotopy Kan extensions, with their
//! structural maps: units and counits, augmentations to cocones, extension
//! by zero along (co)sieves, and the comparison maps that detect cocartesian
//! and cartesian squares.

use crate::bar::{bar, bar_augment, bar_map, cobar, cobar_coaugment, cobar_map, include_vertex, project_vertex, BarComplex};
use crate::complex::{ChainComplex, ChainMap};
use crate::diagram::{Diagram, MapComponents};
use crate::error::{Error, Result};
use crate::fincat::{Coslice, Functor, MorId, ObjId, Slice};
use crate::matrix::FpMatrix;
use crate::shapes;
use std::collections::HashMap;

/// Default resource cap on the total dimension of any single bar or cobar
/// totalization.
pub const DEFAULT_CAP: usize = 1 << 15;

/// The homotopy colimit totalization (requires a strictly homotopy finite
/// shape).
pub fn hocolim(x: &Diagram, cap: usize) -> Result<BarComplex> {
    bar(x, cap)
}

/// The homotopy limit totalization.
pub fn holim(x: &Diagram, cap: usize) -> Result<BarComplex> {
    cobar(x, cap)
}

/// Augmentation of `bar(x)` to the value at an object `t` receiving a unique
/// morphism from every object of the (thin) shape.
pub fn bar_augment_to(x: &Diagram, bar_x: &BarComplex, t: ObjId) -> Result<ChainMap> {
    let shape = x.shape();
    let arrows: Vec<MorId> = (0..shape.n_objects())
        .map(|o| {
            shape
                .unique_morphism(o, t)
                .ok_or_else(|| Error::ShapeMismatch(format!(
                    "no unique morphism {} -> {}",
                    shape.object_label(o),
                    shape.object_label(t)
                )))
        })
        .collect::<Result<Vec<_>>>()?;
    let comps = bar_augment(x, bar_x, x.value(t), &|o, k| x.transition_comp(arrows[o], k));
    ChainMap::new(bar_x.complex.clone(), x.value(t).clone(), comps)
}

/// Coaugmentation from the value at an object `s` admitting a unique
/// morphism to every object.
pub fn cobar_coaugment_from(x: &Diagram, cobar_x: &BarComplex, s: ObjId) -> Result<ChainMap> {
    let shape = x.shape();
    let arrows: Vec<MorId> = (0..shape.n_objects())
        .map(|o| {
            shape
                .unique_morphism(s, o)
                .ok_or_else(|| Error::ShapeMismatch(format!(
                    "no unique morphism {} -> {}",
                    shape.object_label(s),
                    shape.object_label(o)
                )))
        })
        .collect::<Result<Vec<_>>>()?;
    let comps = cobar_coaugment(x, cobar_x, x.value(s), &|o, k| x.transition_comp(arrows[o], k));
    ChainMap::new(x.value(s).clone(), cobar_x.complex.clone(), comps)
}

/// A pointwise Kan extension: the extended diagram, the unit (left) or
/// counit (right) components at the source objects, and the slice sizes
/// used, for audit.
pub struct KanResult {
    pub extended: Diagram,
    /// hoLan: components X(a) -> extended(u a); hoRan: extended(u a) -> X(a)
    pub structural: Vec<MapComponents>,
    pub slice_sizes: Vec<usize>,
}

impl KanResult {
    /// The unit or counit component at a source object as a chain map.
    pub fn structural_map(&self, u: &Functor, x: &Diagram, a: ObjId, left: bool) -> Result<ChainMap> {
        let ext = self.extended.value(u.apply_ob(a)).clone();
        if left {
            ChainMap::new(x.value(a).clone(), ext, self.structural[a].clone())
        } else {
            ChainMap::new(ext, x.value(a).clone(), self.structural[a].clone())
        }
    }
}

pub(crate) fn slice_transition(s_from: &Slice, s_to: &Slice, u: &Functor, beta: MorId) -> Result<Functor> {
    let tgt_cat = u.target();
    let ob_map: Vec<ObjId> = s_from
        .objects
        .iter()
        .map(|&(a, f)| {
            let bf = tgt_cat.compose(beta, f).expect("composable with slice leg");
            s_to.object_index(a, bf).expect("slice transition object")
        })
        .collect();
    let mut mor_map = Vec::with_capacity(s_from.cat.n_morphisms());
    for m in 0..s_from.cat.n_morphisms() {
        let g = s_from.projection.apply_mor(m);
        let (i1, i2) = (s_from.cat.src(m), s_from.cat.dst(m));
        let target_m = *s_to
            .mor_lookup
            .get(&(g, ob_map[i1], ob_map[i2]))
            .expect("slice transition morphism");
        mor_map.push(target_m);
    }
    Functor::new(s_from.cat.clone(), s_to.cat.clone(), ob_map, mor_map)
}

pub(crate) fn coslice_transition(s_from: &Coslice, s_to: &Coslice, u: &Functor, beta: MorId) -> Result<Functor> {
    // beta : b -> b' induces (b'/u) -> (b/u) by precomposition
    let tgt_cat = u.target();
    let ob_map: Vec<ObjId> = s_from
        .objects
        .iter()
        .map(|&(a, f)| {
            let fb = tgt_cat.compose(f, beta).expect("composable with coslice leg");
            s_to.object_index(a, fb).expect("coslice transition object")
        })
        .collect();
    let mut mor_map = Vec::with_capacity(s_from.cat.n_morphisms());
    for m in 0..s_from.cat.n_morphisms() {
        let g = s_from.projection.apply_mor(m);
        let (i1, i2) = (s_from.cat.src(m), s_from.cat.dst(m));
        let target_m = *s_to
            .mor_lookup
            .get(&(g, ob_map[i1], ob_map[i2]))
            .expect("coslice transition morphism");
        mor_map.push(target_m);
    }
    Functor::new(s_from.cat.clone(), s_to.cat.clone(), ob_map, mor_map)
}

/// Pointwise homotopy left Kan extension along u: values are bar
/// totalizations over the slices (u/b), transitions are induced by the
/// slice functors, and the unit components embed each X(a) as the
/// 0-simplex at (a, id).
pub fn ho_lan(u: &Functor, x: &Diagram, cap: usize) -> Result<KanResult> {
    if u.source() != x.shape() {
        return Err(Error::ShapeMismatch("ho_lan: functor source must be the diagram shape".into()));
    }
    let target = u.target().clone();
    let p = x.p();
    let mut slices = Vec::new();
    let mut restricted = Vec::new();
    let mut bars = Vec::new();
    for b in 0..target.n_objects() {
        let s = u.slice(b)?;
        let r = x.restrict(&s.projection)?;
        let bc = bar(&r, cap)?;
        slices.push(s);
        restricted.push(r);
        bars.push(bc);
    }
    let values: Vec<ChainComplex> = bars.iter().map(|b| b.complex.clone()).collect();
    let mut trans = Vec::new();
    for m in target.nonidentity_morphisms() {
        let (b, b2) = (target.src(m), target.dst(m));
        let f = slice_transition(&slices[b], &slices[b2], u, m)?;
        let comps = bar_map(
            &f,
            &restricted[b],
            &|o, k| FpMatrix::identity(p, restricted[b].value(o).dim(k)),
            &bars[b],
            &bars[b2],
        );
        trans.push(comps);
    }
    let extended = Diagram::from_engine(target, p, values, trans)?;
    let mut structural = Vec::new();
    for a in 0..u.source().n_objects() {
        let b = u.apply_ob(a);
        let idx = slices[b]
            .object_index(a, u.target().identity_of(b))
            .expect("unit object (a, id)");
        structural.push(include_vertex(&restricted[b], &bars[b], idx));
    }
    let slice_sizes = bars.iter().map(|b| b.simplices.len()).collect();
    Ok(KanResult { extended, structural, slice_sizes })
}

/// Pointwise homotopy right Kan extension along u: cobar totalizations over
/// the coslices (b/u), with counit components projecting onto the 0-simplex
/// at (a, id).
pub fn ho_ran(u: &Functor, x: &Diagram, cap: usize) -> Result<KanResult> {
    if u.source() != x.shape() {
        return Err(Error::ShapeMismatch("ho_ran: functor source must be the diagram shape".into()));
    }
    let target = u.target().clone();
    let p = x.p();
    let mut coslices = Vec::new();
    let mut restricted = Vec::new();
    let mut cobars = Vec::new();
    for b in 0..target.n_objects() {
        let s = u.coslice(b)?;
        let r = x.restrict(&s.projection)?;
        let bc = cobar(&r, cap)?;
        coslices.push(s);
        restricted.push(r);
        cobars.push(bc);
    }
    let values: Vec<ChainComplex> = cobars.iter().map(|b| b.complex.clone()).collect();
    let mut trans = Vec::new();
    for m in target.nonidentity_morphisms() {
        let (b, b2) = (target.src(m), target.dst(m));
        // (b2/u) -> (b/u) by precomposition with m
        let f = coslice_transition(&coslices[b2], &coslices[b], u, m)?;
        let comps = cobar_map(
            &f,
            &restricted[b2],
            &|o, k| FpMatrix::identity(p, restricted[b2].value(o).dim(k)),
            &cobars[b],
            &cobars[b2],
        );
        trans.push(comps);
    }
    let extended = Diagram::from_engine(target, p, values, trans)?;
    let mut structural = Vec::new();
    for a in 0..u.source().n_objects() {
        let b = u.apply_ob(a);
        let idx = coslices[b]
            .object_index(a, u.target().identity_of(b))
            .expect("counit object (a, id)");
        structural.push(project_vertex(&restricted[b], &cobars[b], idx));
    }
    let slice_sizes = cobars.iter().map(|b| b.simplices.len()).collect();
    Ok(KanResult { extended, structural, slice_sizes })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZeroSide {
    /// left Kan extension along a cosieve
    Cosieve,
    /// right Kan extension along a sieve
    Sieve,
}

/// Extension by zero along a (co)sieve inclusion: values at objects outside
/// the image are genuine zero complexes, values inside are kept on the nose.
pub fn extend_by_zero(u: &Functor, x: &Diagram, side: ZeroSide) -> Result<Diagram> {
    if u.source() != x.shape() {
        return Err(Error::ShapeMismatch("extend_by_zero: functor source must be the diagram shape".into()));
    }
    let ok = match side {
        ZeroSide::Cosieve => u.is_cosieve()?,
        ZeroSide::Sieve => u.is_sieve()?,
    };
    if !ok {
        return Err(Error::InvalidFunctor(format!("extend_by_zero: functor is not a {:?}", side)));
    }
    let target = u.target().clone();
    let p = x.p();
    let obj_preimage: HashMap<ObjId, ObjId> =
        (0..u.source().n_objects()).map(|a| (u.apply_ob(a), a)).collect();
    let mor_preimage: HashMap<MorId, MorId> =
        (0..u.source().n_morphisms()).map(|m| (u.apply_mor(m), m)).collect();
    let values: Vec<ChainComplex> = (0..target.n_objects())
        .map(|b| match obj_preimage.get(&b) {
            Some(&a) => x.value(a).clone(),
            None => ChainComplex::zero(p),
        })
        .collect();
    let mut trans = Vec::new();
    for m in target.nonidentity_morphisms() {
        match mor_preimage.get(&m) {
            Some(&g) => {
                let a = u.source().src(g);
                let comps: MapComponents = x
                    .value(a)
                    .degrees()
                    .map(|n| (n, x.transition_comp(g, n)))
                    .collect();
                trans.push(comps);
            }
            None => trans.push(MapComponents::new()),
        }
    }
    Diagram::from_engine(target, p, values, trans)
}

/// The comparison map can(X) : hocolim(X | span) -> X(1,1) for a square
/// diagram; X is cocartesian exactly when this is a quasi-isomorphism.
pub fn can_map(x: &Diagram, cap: usize) -> Result<ChainMap> {
    if x.shape() != &shapes::square() {
        return Err(Error::ShapeMismatch("can_map requires the square shape".into()));
    }
    let incl = shapes::span_inclusion();
    let r = x.restrict(&incl)?;
    let b = bar(&r, cap)?;
    let corner = x.shape().object_id("(1,1)")?;
    let arrows: Vec<MorId> = (0..3)
        .map(|o| {
            x.shape()
                .unique_morphism(incl.apply_ob(o), corner)
                .expect("square is thin with terminal corner")
        })
        .collect();
    let comps = bar_augment(&r, &b, x.value(corner), &|o, k| x.transition_comp(arrows[o], k));
    ChainMap::new(b.complex, x.value(corner).clone(), comps)
}

/// The dual comparison cocan(X) : X(0,0) -> holim(X | cospan).
pub fn cocan_map(x: &Diagram, cap: usize) -> Result<ChainMap> {
    if x.shape() != &shapes::square() {
        return Err(Error::ShapeMismatch("cocan_map requires the square shape".into()));
    }
    let incl = shapes::cospan_inclusion();
    let r = x.restrict(&incl)?;
    let c = cobar(&r, cap)?;
    let init = x.shape().object_id("(0,0)")?;
    let arrows: Vec<MorId> = (0..3)
        .map(|o| {
            x.shape()
                .unique_morphism(init, incl.apply_ob(o))
                .expect("square is thin with initial corner")
        })
        .collect();
    let comps = cobar_coaugment(&r, &c, x.value(init), &|o, k| x.transition_comp(arrows[o], k));
    ChainMap::new(x.value(init).clone(), c.complex, comps)
}

pub fn is_cocartesian(x: &Diagram, cap: usize) -> Result<bool> {
    Ok(can_map(x, cap)?.is_quasi_iso())
}

pub fn is_cartesian(x: &Diagram, cap: usize) -> Result<bool> {
    Ok(cocan_map(x, cap)?.is_quasi_iso())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random_diagram;
    use crate::shapes;

    const CAP: usize = DEFAULT_CAP;

    #[test]
    fn lan_along_endpoint_one_is_left_extension_by_zero() {
        for p in [2u32, 3, 7] {
            let x = random_diagram(&shapes::point(), p, 17, 8).unwrap();
            let one = shapes::endpoint(1);
            let res = ho_lan(&one, &x, CAP).unwrap();
            // value at 0 is the genuine zero complex, value at 1 is X itself
            assert!(res.extended.value(0).is_zero_complex());
            assert_eq!(res.extended.value(1), x.value(0));
            // agrees with literal extension by zero
            let ext = extend_by_zero(&one, &x, ZeroSide::Cosieve).unwrap();
            assert_eq!(ext.value(0), res.extended.value(0));
            assert_eq!(ext.value(1), res.extended.value(1));
        }
    }

    #[test]
    fn ran_along_endpoint_zero_is_right_extension_by_zero() {
        let x = random_diagram(&shapes::point(), 7, 23, 8).unwrap();
        let zero = shapes::endpoint(0);
        let res = ho_ran(&zero, &x, CAP).unwrap();
        assert_eq!(res.extended.value(0), x.value(0));
        assert!(res.extended.value(1).is_zero_complex());
        let ext = extend_by_zero(&zero, &x, ZeroSide::Sieve).unwrap();
        assert_eq!(ext.value(1), res.extended.value(1));
    }

    #[test]
    fn lan_of_span_is_cocartesian() {
        for seed in 0..10u64 {
            let p = [2u32, 3, 7][(seed % 3) as usize];
            let x = random_diagram(&shapes::span(), p, seed, 20).unwrap();
            let res = ho_lan(&shapes::span_inclusion(), &x, CAP).unwrap();
            assert!(is_cocartesian(&res.extended, CAP).unwrap(), "seed {}", seed);
        }
    }

    #[test]
    fn ran_of_cospan_is_cartesian() {
        for seed in 0..10u64 {
            let p = [2u32, 3, 7][(seed % 3) as usize];
            let x = random_diagram(&shapes::cospan(), p, seed, 20).unwrap();
            let res = ho_ran(&shapes::cospan_inclusion(), &x, CAP).unwrap();
            assert!(is_cartesian(&res.extended, CAP).unwrap(), "seed {}", seed);
        }
    }

    #[test]
    fn units_are_pointwise_qis_for_fully_faithful() {
        for seed in 0..6u64 {
            let p = [3u32, 7][(seed % 2) as usize];
            let x = random_diagram(&shapes::span(), p, seed, 16).unwrap();
            let u = shapes::span_inclusion();
            let res = ho_lan(&u, &x, CAP).unwrap();
            for a in 0..3 {
                let unit = res.structural_map(&u, &x, a, true).unwrap();
                assert!(unit.is_quasi_iso(), "seed {} object {}", seed, a);
            }
            let y = random_diagram(&shapes::cospan(), p, seed, 16).unwrap();
            let v = shapes::cospan_inclusion();
            let resr = ho_ran(&v, &y, CAP).unwrap();
            for a in 0..3 {
                let counit = resr.structural_map(&v, &y, a, false).unwrap();
                assert!(counit.is_quasi_iso(), "seed {} object {}", seed, a);
            }
        }
    }

    #[test]
    fn unit_naturality_defect_is_a_boundary() {
        // the unit square along a source morphism commutes up to boundaries
        let p = 7;
        let x = random_diagram(&shapes::span(), p, 31, 14).unwrap();
        let u = shapes::span_inclusion();
        let res = ho_lan(&u, &x, CAP).unwrap();
        let shape = x.shape().clone();
        for m in shape.nonidentity_morphisms() {
            let (a, b) = (shape.src(m), shape.dst(m));
            let unit_a = res.structural_map(&u, &x, a, true).unwrap();
            let unit_b = res.structural_map(&u, &x, b, true).unwrap();
            let ext_trans = res.extended.transition_map(u.apply_mor(m)).unwrap();
            let via_ext = ext_trans.compose(&unit_a).unwrap();
            let via_x = unit_b.compose(&x.transition_map(m).unwrap()).unwrap();
            let ext_b = res.extended.value(u.apply_ob(b));
            for n in ext_b.lo()..=ext_b.hi() {
                let defect = via_ext.comp(n).sub(&via_x.comp(n)).unwrap();
                if !defect.is_zero() {
                    assert!(ext_b.d(n + 1).spans(&defect), "defect not a boundary at degree {}", n);
                }
            }
        }
    }

    #[test]
    fn pasting_in_homology_dims() {
        let p = 3;
        let x = random_diagram(&shapes::square(), p, 3, 12).unwrap();
        let i1 = shapes::figure_square_embedding().unwrap();
        let i2 = shapes::figure_stage_inclusion(2).unwrap();
        let step = ho_lan(&i2, &ho_lan(&i1, &x, CAP).unwrap().extended, CAP).unwrap();
        let direct = ho_lan(&i2.compose(&i1).unwrap(), &x, CAP).unwrap();
        for b in 0..step.extended.shape().n_objects() {
            assert_eq!(
                step.extended.value(b).homology_dims(),
                direct.extended.value(b).homology_dims(),
                "object {}",
                b
            );
        }
    }

    #[test]
    fn sieve_extension_agrees_with_kan_in_homology() {
        // hoRan along a sieve vs literal zero extension: pointwise qis
        let p = 7;
        let x = random_diagram(&shapes::interval(), p, 9, 14).unwrap();
        let u = shapes::horizontal_into_span(); // [1] -> span, a sieve
        let kan = ho_ran(&u, &x, CAP).unwrap();
        let lit = extend_by_zero(&u, &x, ZeroSide::Sieve).unwrap();
        for b in 0..3 {
            assert_eq!(kan.extended.value(b).homology_dims(), lit.value(b).homology_dims());
        }
        // dual: hoLan along a cosieve
        let y = random_diagram(&shapes::interval(), p, 10, 14).unwrap();
        let v = shapes::vertical_into_cospan(); // [1] -> cospan, a cosieve
        let kanl = ho_lan(&v, &y, CAP).unwrap();
        let litl = extend_by_zero(&v, &y, ZeroSide::Cosieve).unwrap();
        for b in 0..3 {
            assert_eq!(kanl.extended.value(b).homology_dims(), litl.value(b).homology_dims());
        }
    }

    #[test]
    fn constant_square_is_bicartesian() {
        let x = crate::complex::ChainComplex::point(7, 0);
        let d = Diagram::constant(shapes::square(), x);
        assert!(is_cocartesian(&d, CAP).unwrap());
        assert!(is_cartesian(&d, CAP).unwrap());
    }

    #[test]
    fn corner_point_square_is_neither() {
        // k at (0,0) only: comparison is Sigma k -> 0, not a qis
        let d = Diagram::point_at(shapes::square(), 0, crate::complex::ChainComplex::point(7, 0)).unwrap();
        assert!(!is_cocartesian(&d, CAP).unwrap());
        assert!(!is_cartesian(&d, CAP).unwrap());
    }

    #[test]
    fn hocolim_over_empty_shape() {
        let d = Diagram::zero(shapes::empty(), 7);
        assert!(hocolim(&d, CAP).unwrap().complex.is_zero_complex());
        assert!(holim(&d, CAP).unwrap().complex.is_zero_complex());
    }

    #[test]
    fn parallel_pair_hocolim_is_the_homotopy_coequalizer() {
        // a non-thin index: two parallel arrows a => b; the bar totalization
        // has the homology of the cone of the difference map
        let pp = crate::fincat::FinCat::new(
            vec!["a".into(), "b".into()],
            vec![
                ("f".into(), "a".into(), "b".into()),
                ("g".into(), "a".into(), "b".into()),
            ],
            vec![],
        )
        .unwrap();
        assert!(pp.is_strictly_homotopy_finite());
        assert!(!pp.is_thin());
        use crate::matrix::FpMatrix;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for p in [3u32, 7] {
            let x = crate::complex::ChainComplex::concentrated(p, 0, 3);
            let y = crate::complex::ChainComplex::concentrated(p, 0, 2);
            let fm = FpMatrix::random(p, 2, 3, &mut rng);
            let gm = FpMatrix::random(p, 2, 3, &mut rng);
            let d = Diagram::new(
                pp.clone(),
                p,
                vec![x.clone(), y.clone()],
                vec![[(0, fm.clone())].into(), [(0, gm.clone())].into()],
            )
            .unwrap();
            let b = hocolim(&d, CAP).unwrap();
            let diff = crate::complex::ChainMap::new(
                x.clone(),
                y.clone(),
                [(0, fm.sub(&gm).unwrap())].into(),
            )
            .unwrap();
            assert_eq!(b.complex.homology_dims(), diff.mapping_cone().homology_dims());
            // dually for the cobar over the opposite orientation
            let c = holim(&d, CAP).unwrap();
            assert_eq!(c.complex.homology_dims(), diff.mapping_fiber().homology_dims());
        }
        // Kan extension along a point inclusion: the slice at b is the
        // two-element hom-set, so the value there is the double
        let pt = shapes::point();
        let into_a = Functor::new(pt.clone(), pp.clone(), vec![0], vec![0]).unwrap();
        let xd = random_diagram(&pt, 7, 5, 6).unwrap();
        let res = ho_lan(&into_a, &xd, CAP).unwrap();
        let expected = xd.value(0).direct_sum(xd.value(0)).unwrap();
        assert_eq!(res.extended.value(1).homology_dims(), expected.homology_dims());
    }

    #[test]
    fn resource_cap_fires() {
        let x = random_diagram(&shapes::square(), 7, 3, 30).unwrap();
        let err = bar(&x, 4).unwrap_err();
        match err {
            Error::ResourceCap { .. } => {}
            other => panic!("expected resource cap, got {other:?}"),
        }
    }
}
