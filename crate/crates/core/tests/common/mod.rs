#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regpow_core::field::Fe;
use regpow_core::linalg;
use regpow_core::monomial::monomials_of_degree;
use regpow_core::{GroebnerBasis, Ideal, Monomial, Polynomial, Ring};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// dim_k S_d for S in `n` variables.
pub fn ring_dim(n: usize, d: i64) -> u64 {
    if d < 0 {
        0
    } else {
        binom(n as u64 - 1 + d as u64, n as u64 - 1)
    }
}

pub fn random_coeff(ring: &Arc<Ring>, rng: &mut ChaCha8Rng) -> Fe {
    ring.field().from_i64(rng.gen_range(1..ring.field().characteristic() as i64))
}

/// A random homogeneous form of degree `d` with at most `terms` terms.
pub fn random_form(ring: &Arc<Ring>, d: u32, terms: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let monos = monomials_of_degree(ring.nvars(), d);
    let picked: Vec<(Monomial, Fe)> =
        monos.choose_multiple(rng, terms.min(monos.len())).map(|m| (m.clone(), random_coeff(ring, rng))).collect();
    Polynomial::from_terms(ring, picked)
}

/// A random homogeneous ideal with 2..=max_gens generators of degree 1..=max_deg.
pub fn random_ideal(ring: &Arc<Ring>, max_gens: usize, max_deg: u32, rng: &mut ChaCha8Rng) -> Ideal {
    loop {
        let k = rng.gen_range(2..=max_gens);
        let gens: Vec<Polynomial> =
            (0..k).map(|_| random_form(ring, rng.gen_range(1..=max_deg), rng.gen_range(1..=3), rng)).collect();
        let ideal = Ideal::new(ring, gens).unwrap();
        if !ideal.is_zero() {
            return ideal;
        }
    }
}

/// A random m-primary ideal generated in the single degree d: pure powers plus random forms.
pub fn random_m_primary(ring: &Arc<Ring>, d: u32, extra: usize, rng: &mut ChaCha8Rng) -> Ideal {
    let n = ring.nvars();
    let mut gens: Vec<Polynomial> = (0..n)
        .map(|i| {
            let m = Monomial::var(n, i).checked_pow(d).unwrap();
            // perturb the pure power so the ideal is not monomial
            Polynomial::term(ring, m, ring.field().one()).add(&random_form(ring, d, 1, rng))
        })
        .collect();
    gens.extend((0..extra).map(|_| random_form(ring, d, 2, rng)));
    let ideal = Ideal::new(ring, gens).unwrap();
    if ideal.groebner().unwrap().is_finite_length() {
        ideal
    } else {
        random_m_primary(ring, d, extra + 1, rng)
    }
}

/// Coordinates of a degree-d form in the monomial basis of S_d.
fn coords(f: &Polynomial, index: &HashMap<Monomial, usize>, len: usize) -> Vec<Fe> {
    let mut v = vec![Fe::default(); len];
    for (m, c) in f.terms() {
        v[index[m]] = *c;
    }
    v
}

/// H(S/I, d) for d = 0..=d_max by ranking the spanning sets {m·g}: no Gröbner bases involved.
pub fn hilbert_by_linear_algebra(ideal: &Ideal, d_max: u32) -> Vec<u64> {
    let ring = ideal.ring();
    let n = ring.nvars();
    (0..=d_max)
        .map(|d| {
            let basis = monomials_of_degree(n, d);
            let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows = Vec::new();
            for g in ideal.generators() {
                let e = g.homogeneous_degree().unwrap();
                if e > d {
                    continue;
                }
                for m in monomials_of_degree(n, d - e) {
                    rows.push(coords(&g.mul_term(&m, ring.field().one()), &index, basis.len()));
                }
            }
            basis.len() as u64 - linalg::rank(ring.field(), rows) as u64
        })
        .collect()
}

fn standard_monomials(gb: &GroebnerBasis, n: usize, d: i64) -> Vec<Monomial> {
    if d < 0 {
        return Vec::new();
    }
    let leads = gb.lead_monomials();
    monomials_of_degree(n, d as u32).into_iter().filter(|m| !leads.iter().any(|l| l.divides(m))).collect()
}

/// Graded Betti numbers β_{i,j} of S/I for j ≤ j_max as dimensions of Koszul homology
/// H_i(x_1, …, x_n; S/I)_j, computed with normal forms and ranks.
pub fn koszul_betti(ideal: &Ideal, j_max: u32) -> BTreeMap<(usize, u32), u64> {
    let ring = ideal.ring();
    let field = ring.field();
    let n = ring.nvars();
    let gb = ideal.groebner().unwrap();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|i| subsets_of_size(n, i)).collect();
    // dims and ranks of d_i : K_{i,j} -> K_{i-1,j}
    let mut out = BTreeMap::new();
    for j in 0..=j_max {
        let mut dims = vec![0u64; n + 2];
        let mut ranks = vec![0u64; n + 2];
        let bases: Vec<Vec<(usize, Monomial)>> = (0..=n)
            .map(|i| {
                let std = standard_monomials(&gb, n, j as i64 - i as i64);
                (0..subsets[i].len()).flat_map(|a| std.iter().map(move |m| (a, m.clone()))).collect()
            })
            .collect();
        for i in 0..=n {
            dims[i] = bases[i].len() as u64;
        }
        for i in 1..=n {
            let target: HashMap<(Vec<usize>, Monomial), usize> = bases[i - 1]
                .iter()
                .enumerate()
                .map(|(k, (a, m))| ((subsets[i - 1][*a].clone(), m.clone()), k))
                .collect();
            let rows: Vec<Vec<Fe>> = bases[i]
                .iter()
                .map(|(a, m)| {
                    let set = &subsets[i][*a];
                    let mut row = vec![Fe::default(); target.len()];
                    for (pos, &v) in set.iter().enumerate() {
                        let rest: Vec<usize> = set.iter().copied().filter(|&w| w != v).collect();
                        let xm = Polynomial::term(ring, m.mul(&Monomial::var(n, v)), field.one());
                        let nf = gb.normal_form(&xm).unwrap();
                        for (mm, c) in nf.terms() {
                            let k = target[&(rest.clone(), mm.clone())];
                            let c = if pos % 2 == 0 { *c } else { field.neg(*c) };
                            row[k] = field.add(row[k], c);
                        }
                    }
                    row
                })
                .collect();
            ranks[i] = if target.is_empty() { 0 } else { linalg::rank(field, rows) as u64 };
        }
        for i in 0..=n {
            let b = dims[i] - ranks[i] - ranks[i + 1];
            if b > 0 {
                out.insert((i, j), b);
            }
        }
    }
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Σ_i (-1)^i Σ_j r_{i,j} dim S_{d-j}, the Hilbert function predicted by a graded free resolution.
pub fn euler_characteristic(ranks: &BTreeMap<(usize, u32), u64>, n: usize, d: i64) -> i64 {
    ranks
        .iter()
        .map(|(&(i, j), &r)| {
            let v = (r * ring_dim(n, d - j as i64)) as i64;
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum()
}
