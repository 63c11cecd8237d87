mod common;

use std::sync::Arc;

use rand::Rng;

use common::*;
use regpow_core::asymptotics::{conjecture_sampler, epsilon_containment};
use regpow_core::field::Fe;
use regpow_core::geometry::{
    fiber_ideal, fiber_regularity, max_fiber_regularity, twovars_r, ClosedPoint, FiberSearchOptions, ProjectionSpec,
};
use regpow_core::groebner::{saturate, SaturationMode};
use regpow_core::{Field, Ideal, Polynomial, Ring};

fn twisted_cubic(p: u64) -> ProjectionSpec {
    let ring = Ring::indexed(p, 4).unwrap();
    let q = |t: &[(i64, &[u16])]| Polynomial::from_int_terms(&ring, t);
    let ix = Ideal::new(
        &ring,
        vec![
            q(&[(1, &[1, 0, 1, 0]), (-1, &[0, 2, 0, 0])]),
            q(&[(1, &[1, 0, 0, 1]), (-1, &[0, 1, 1, 0])]),
            q(&[(1, &[0, 1, 0, 1]), (-1, &[0, 0, 2, 0])]),
        ],
    )
    .unwrap();
    let forms = vec![q(&[(1, &[1, 0, 0, 0]), (1, &[0, 0, 0, 1])]), q(&[(1, &[0, 1, 0, 0]), (-1, &[0, 0, 1, 0])])];
    ProjectionSpec::new(ix, forms).unwrap()
}

/// The fiber as I_X plus all 2×2 minors of (ℓ; p), saturated by the general route.
fn fiber_by_minors(spec: &ProjectionSpec, point: &ClosedPoint) -> Ideal {
    let ring = spec.ring().with_field(point.field().clone());
    let forms: Vec<Polynomial> = spec.forms().iter().map(|f| f.base_change(&ring)).collect();
    let mut gens: Vec<Polynomial> = spec.ideal().generators().iter().map(|g| g.base_change(&ring)).collect();
    let c = point.coords();
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            gens.push(forms[i].scale(c[j]).sub(&forms[j].scale(c[i])));
        }
    }
    saturate(&Ideal::new(&ring, gens).unwrap(), SaturationMode::ByMaxIdeal).unwrap()
}

fn random_point(field: &Arc<Field>, len: usize, r: &mut rand_chacha::ChaCha8Rng) -> ClosedPoint {
    loop {
        let coords: Vec<Fe> = (0..len).map(|_| field.element(r.gen_range(0..field.order())).unwrap()).collect();
        if let Ok(p) = ClosedPoint::new(field, coords) {
            return p;
        }
    }
}

#[test]
fn fibers_agree_with_minors_and_general_saturation() {
    let mut r = rng(21);
    let spec = twisted_cubic(101);
    for k in [1, 2] {
        let field = if k == 1 { Field::prime(101).unwrap() } else { Field::extension(101, k).unwrap() };
        for _ in 0..8 {
            let pt = random_point(&field, 2, &mut r);
            let fast = fiber_ideal(&spec, &pt).unwrap().groebner().unwrap();
            let slow = fiber_by_minors(&spec, &pt).groebner().unwrap();
            assert_eq!(fast.elements(), slow.elements());
        }
    }
}

#[test]
fn random_projections_of_random_curves() {
    // complete intersections of two quadrics in P^3 (degree 4 curves), projected to P^1
    let mut r = rng(22);
    let ring = Ring::indexed(101, 4).unwrap();
    let mut checked = 0;
    while checked < 5 {
        let ix = Ideal::new(&ring, vec![random_form(&ring, 2, 5, &mut r), random_form(&ring, 2, 5, &mut r)]).unwrap();
        let forms = vec![random_form(&ring, 1, 4, &mut r), random_form(&ring, 1, 4, &mut r)];
        let Ok(spec) = ProjectionSpec::new(ix, forms) else { continue };
        let field = Field::prime(101).unwrap();
        for _ in 0..4 {
            let pt = random_point(&field, 2, &mut r);
            let Ok(fast) = fiber_ideal(&spec, &pt) else { continue };
            let slow = fiber_by_minors(&spec, &pt);
            assert_eq!(fast.groebner().unwrap().elements(), slow.groebner().unwrap().elements());
            if !fast.groebner().unwrap().is_unit() {
                let (deg, reg) = fiber_regularity(&fast).unwrap();
                assert!(deg <= 4 && reg as u64 <= deg);
            }
        }
        checked += 1;
    }
}

#[test]
fn conjugate_points_have_isomorphic_fibers() {
    let mut r = rng(23);
    let spec = twisted_cubic(31);
    let field = Field::extension(31, 3).unwrap();
    for _ in 0..6 {
        let pt = random_point(&field, 2, &mut r);
        let a = fiber_regularity(&fiber_ideal(&spec, &pt).unwrap()).unwrap();
        let b = fiber_regularity(&fiber_ideal(&spec, &pt.conjugate()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(pt.conjugate().conjugate().conjugate().coords(), pt.coords());
    }
}

#[test]
fn twisted_cubic_identity_small_field() {
    let spec = twisted_cubic(31);
    let eps = epsilon_containment(spec.ideal(), spec.forms(), 6).unwrap();
    assert_eq!(eps.epsilon, Some(1));
    let opts = FiberSearchOptions { ext_bound: 2, epsilon: eps.epsilon, ..Default::default() };
    let rep = max_fiber_regularity(&spec, &opts).unwrap();
    assert_eq!(rep.max_regularity, Some(2));
    assert_eq!(rep.equals_epsilon_plus_one, Some(true));
    assert!(!rep.budget_exceeded);
}

#[test]
fn budget_exhaustion_reports_a_lower_bound() {
    let spec = twisted_cubic(31);
    let opts = FiberSearchOptions { ext_bound: 2, point_budget: 100, ..Default::default() };
    let rep = max_fiber_regularity(&spec, &opts).unwrap();
    assert!(rep.budget_exceeded);
    assert_eq!(rep.levels.len(), 1);
    assert!(rep.warnings.iter().any(|w| w.contains("lower bound")));
}

#[test]
fn pencils_of_binary_forms_have_r_equal_d() {
    let mut r = rng(24);
    let ring = Ring::simple(101, &["x", "y"]).unwrap();
    let mut seen = 0;
    while seen < 10 {
        let d = r.gen_range(1..=5);
        let v = vec![random_form(&ring, d, 3, &mut r), random_form(&ring, d, 3, &mut r)];
        let Ok(rep) = twovars_r(&v, 1) else { continue };
        assert_eq!(rep.r, d);
        seen += 1;
    }
}

#[test]
fn sampler_is_reproducible() {
    let ring = Ring::simple(32003, &["x", "y", "z"]).unwrap();
    let c = Ideal::new(&ring, vec![Polynomial::from_int_terms(&ring, &[(1, &[1, 0, 1]), (-1, &[0, 2, 0])])]).unwrap();
    let a = conjecture_sampler(&c, 1, 6, 99, 5).unwrap();
    let b = conjecture_sampler(&c, 1, 6, 99, 5).unwrap();
    assert_eq!(a, b);
    let other = conjecture_sampler(&c, 1, 6, 100, 5).unwrap();
    assert_ne!(a.trials[0].forms, other.trials[0].forms);
}
