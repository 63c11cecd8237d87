mod common;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use regpow_core::groebner::hilbert_function;
use regpow_core::resolution::{
    betti_table, minimal_free_resolution, regularity, schreyer_resolution, RegularityOf,
};
use regpow_core::{Ideal, Polynomial, Ring};

fn small_rings() -> Vec<std::sync::Arc<Ring>> {
    vec![Ring::indexed(32003, 3).unwrap(), Ring::indexed(32003, 4).unwrap(), Ring::indexed(101, 3).unwrap()]
}

#[test]
fn hilbert_function_matches_linear_algebra() {
    let mut r = rng(11);
    for k in 0..20 {
        let ring = &small_rings()[k % 3];
        let ideal = random_ideal(ring, 4, 3, &mut r);
        let expected = hilbert_by_linear_algebra(&ideal, 6);
        let got = hilbert_function(&ideal, 6).unwrap().values;
        assert_eq!(got, expected, "ideal {:?}", ideal.generators());
    }
}

#[test]
fn reduced_basis_is_unique() {
    let mut r = rng(12);
    for k in 0..20 {
        let ring = &small_rings()[k % 3];
        let ideal = random_ideal(ring, 4, 3, &mut r);
        let reference = ideal.groebner().unwrap();
        let mut gens: Vec<Polynomial> =
            ideal.generators().iter().map(|g| g.scale(random_coeff(ring, &mut r))).collect();
        gens.shuffle(&mut r);
        // a redundant generator: a combination of two existing ones
        if let [a, b, ..] = gens.as_slice() {
            let (da, db) = (a.homogeneous_degree().unwrap(), b.homogeneous_degree().unwrap());
            let top = da.max(db);
            let fa = random_form(ring, top - da, 2, &mut r);
            let fb = random_form(ring, top - db, 2, &mut r);
            gens.push(a.mul(&fa).add(&b.mul(&fb)));
        }
        let other = Ideal::new(ring, gens).unwrap().groebner().unwrap();
        assert_eq!(reference.elements(), other.elements());
    }
}

#[test]
fn normal_form_is_linear_and_detects_membership() {
    let mut r = rng(13);
    for k in 0..15 {
        let ring = &small_rings()[k % 3];
        let ideal = random_ideal(ring, 3, 2, &mut r);
        let gb = ideal.groebner().unwrap();
        let d = 3;
        let f = random_form(ring, d, 4, &mut r);
        let g = random_form(ring, d, 4, &mut r);
        let c = random_coeff(ring, &mut r);
        let lhs = gb.normal_form(&f.add(&g.scale(c))).unwrap();
        let rhs = gb.normal_form(&f).unwrap().add(&gb.normal_form(&g).unwrap().scale(c));
        assert_eq!(lhs, rhs);
        // an explicit combination of generators is a member
        let mut member = Polynomial::zero(ring);
        for gen in ideal.generators() {
            let e = gen.homogeneous_degree().unwrap();
            if e <= d {
                member = member.add(&gen.mul(&random_form(ring, d - e, 2, &mut r)));
            }
        }
        assert!(gb.contains(&member).unwrap());
        assert_eq!(gb.contains(&f).unwrap(), gb.normal_form(&f).unwrap().is_zero());
        assert!(gb.contains(&f.sub(&gb.normal_form(&f).unwrap())).unwrap());
    }
}

#[test]
fn betti_numbers_match_koszul_homology() {
    let mut r = rng(14);
    for k in 0..12 {
        let ring = &small_rings()[k % 3];
        let ideal = random_ideal(ring, 4, 2, &mut r);
        let table = betti_table(&ideal).unwrap();
        let j_max = table.entries().keys().map(|&(_, j)| j).max().unwrap_or(0) + 2;
        let oracle = koszul_betti(&ideal, j_max);
        assert_eq!(table.entries(), &oracle, "ideal {:?}", ideal.generators());
    }
}

#[test]
fn known_betti_tables() {
    let ring = Ring::indexed(32003, 4).unwrap();
    let p = |t: &[(i64, &[u16])]| Polynomial::from_int_terms(&ring, t);
    let cubic = Ideal::new(
        &ring,
        vec![
            p(&[(1, &[1, 0, 1, 0]), (-1, &[0, 2, 0, 0])]),
            p(&[(1, &[1, 0, 0, 1]), (-1, &[0, 1, 1, 0])]),
            p(&[(1, &[0, 1, 0, 1]), (-1, &[0, 0, 2, 0])]),
        ],
    )
    .unwrap();
    let expected: BTreeMap<(usize, u32), u64> = [((0, 0), 1), ((1, 2), 3), ((2, 3), 2)].into_iter().collect();
    assert_eq!(betti_table(&cubic).unwrap().entries(), &expected);
    assert_eq!(koszul_betti(&cubic, 6), expected);
    assert_eq!(regularity(&cubic, RegularityOf::Ideal).unwrap(), 2);
}

#[test]
fn resolutions_are_complexes_with_the_right_euler_characteristic() {
    let mut r = rng(15);
    for k in 0..15 {
        let ring = &small_rings()[k % 3];
        let n = ring.nvars();
        let ideal = random_ideal(ring, 4, 3, &mut r);
        let hilbert = hilbert_function(&ideal, 8).unwrap().values;
        let schreyer = schreyer_resolution(&ideal).unwrap();
        let (minimal, table) = minimal_free_resolution(&ideal).unwrap();
        assert!(schreyer.is_complex());
        assert!(minimal.is_complex());
        assert!(minimal.has_no_units());
        assert!(schreyer.length() <= n && minimal.length() <= n);
        assert_eq!(&minimal.graded_ranks(), table.entries());
        for d in 0..=8 {
            assert_eq!(euler_characteristic(&schreyer.graded_ranks(), n, d), hilbert[d as usize] as i64);
            assert_eq!(euler_characteristic(table.entries(), n, d), hilbert[d as usize] as i64);
        }
    }
}

#[test]
fn betti_table_ignores_the_choice_of_generators() {
    let mut r = rng(16);
    for k in 0..10 {
        let ring = &small_rings()[k % 3];
        let ideal = random_ideal(ring, 4, 2, &mut r);
        let gens = ideal.generators();
        let mut mixed: Vec<Polynomial> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let e = g.homogeneous_degree().unwrap();
            let mut h = g.scale(random_coeff(ring, &mut r));
            for prev in &gens[..i] {
                let ep = prev.homogeneous_degree().unwrap();
                if ep <= e && r.gen_bool(0.7) {
                    h = h.add(&prev.mul(&random_form(ring, e - ep, 2, &mut r)));
                }
            }
            mixed.push(h);
        }
        mixed.shuffle(&mut r);
        let other = Ideal::new(ring, mixed).unwrap();
        assert_eq!(betti_table(&ideal).unwrap(), betti_table(&other).unwrap());
        assert_eq!(
            regularity(&ideal, RegularityOf::Ideal).unwrap(),
            regularity(&other, RegularityOf::Ideal).unwrap()
        );
    }
}

#[test]
fn regularity_conventions() {
    let ring = Ring::indexed(32003, 3).unwrap();
    let zero = Ideal::zero(&ring);
    assert_eq!(regularity(&zero, RegularityOf::Ideal).unwrap(), 1);
    assert_eq!(regularity(&zero, RegularityOf::Quotient).unwrap(), 0);
    let unit = Ideal::unit(&ring);
    assert_eq!(regularity(&unit, RegularityOf::Ideal).unwrap(), 0);
    assert!(regularity(&unit, RegularityOf::Quotient).is_err());
    let m = Ideal::maximal(&ring);
    assert_eq!(regularity(&m, RegularityOf::Ideal).unwrap(), 1);
}
