//! Homogeneous ideals, reduced Gröbner bases and normal forms.
//!
//! The engine is Buchberger's algorithm with the Gebauer–Möller update and
//! sugar-degree pair selection. For homogeneous input sugar equals the lcm
//! degree, so pairs are handled degree by degree. The engine itself also
//! accepts inhomogeneous input, which the elimination-based ideal operations
//! rely on internally; the public entry points reject it.

mod hilbert;
mod ops;

pub use hilbert::{
    count_standard_monomials, hilbert_function, hilbert_series, m_power_containment, top_degree_finite,
    HilbertFunction, HilbertSeries,
};
pub use ops::{
    colon, ideal_combine, ideal_power, intersect, saturate, saturate_by_linear_form, CombineOp, SaturationMode,
};

pub(crate) use hilbert::{hilbert_function_of_basis, series_of_basis, top_degree_of_basis};
pub(crate) use ops::{random_linear_form, saturate_fast};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::echelonize;
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Ring};

/// Default ceiling on the degree of S-pairs.
pub const DEFAULT_DEGREE_CEILING: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbConfig {
    pub degree_ceiling: u32,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { degree_ceiling: DEFAULT_DEGREE_CEILING }
    }
}

/// An ideal given by homogeneous generators.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped; inhomogeneous ones are rejected.
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Self> {
        let mut kept = Vec::with_capacity(gens.len());
        for g in gens {
            Ring::check_same(ring, g.ring())?;
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous() {
                return Err(Error::usage(format!("generator {g} is not homogeneous")));
            }
            kept.push(g);
        }
        Ok(Ideal { ring: ring.clone(), gens: kept })
    }

    pub(crate) fn from_trusted(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Self {
        Ideal { ring: ring.clone(), gens }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new() }
    }

    pub fn unit(ring: &Arc<Ring>) -> Self {
        Ideal { ring: ring.clone(), gens: vec![Polynomial::one(ring)] }
    }

    /// The homogeneous maximal ideal (x_0, ..., x_n).
    pub fn maximal(ring: &Arc<Ring>) -> Self {
        Ideal { ring: ring.clone(), gens: (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect() }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.gens.iter().filter_map(|g| g.homogeneous_degree()).collect()
    }

    /// The common degree of all generators, if they share one.
    pub fn single_degree(&self) -> Option<u32> {
        let d = self.degrees();
        let first = *d.first()?;
        d.iter().all(|&x| x == first).then_some(first)
    }

    pub fn groebner(&self) -> Result<GroebnerBasis> {
        buchberger(self)
    }

    pub fn groebner_with(&self, config: &GbConfig) -> Result<GroebnerBasis> {
        buchberger_with(self, config)
    }
}

/// A reduced Gröbner basis: monic, auto-reduced, sorted by lead degree, then by descending lead monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    elements: Vec<Polynomial>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.elements == other.elements
    }
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().filter_map(|g| g.lead_monomial().cloned()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| g.is_constant())
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal::from_trusted(&self.ring, self.elements.clone())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        normal_form(f, self)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(normal_form(f, self)?.is_zero())
    }

    /// Variable lacking a pure power among the lead terms, if any.
    pub fn finite_length_witness(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let leads = self.lead_monomials();
        (0..self.ring.nvars())
            .find(|&v| !leads.iter().any(|m| m.pure_power_variable() == Some(v)))
    }

    pub fn is_finite_length(&self) -> bool {
        self.finite_length_witness().is_none()
    }
}

/// Remainder of `f` on division by `gb`.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    if !Ring::same(f.ring(), &gb.ring) {
        return Err(Error::usage("polynomial and Gröbner basis use different rings or orders"));
    }
    let reducer = Reducer::new(gb.elements.iter().collect());
    Ok(reducer.reduce_full(f.clone()))
}

pub fn buchberger(ideal: &Ideal) -> Result<GroebnerBasis> {
    buchberger_with(ideal, &GbConfig::default())
}

pub fn buchberger_with(ideal: &Ideal, config: &GbConfig) -> Result<GroebnerBasis> {
    if let Some(g) = ideal.gens.iter().find(|g| !g.is_homogeneous()) {
        return Err(Error::usage(format!("generator {g} is not homogeneous")));
    }
    let elements = groebner_engine(&ideal.ring, &ideal.gens, config)?;
    Ok(GroebnerBasis { ring: ideal.ring.clone(), elements })
}

/// Wraps an engine result that is already a reduced basis.
pub(crate) fn trusted_basis(ring: &Arc<Ring>, elements: Vec<Polynomial>) -> GroebnerBasis {
    GroebnerBasis { ring: ring.clone(), elements }
}

#[inline]
fn support_mask(m: &Monomial) -> u64 {
    m.exponents().iter().enumerate().fold(0u64, |acc, (i, &e)| if e > 0 { acc | 1 << (i % 64) } else { acc })
}

/// Division by a fixed list of monic polynomials.
pub(crate) struct Reducer<'a> {
    polys: Vec<&'a Polynomial>,
    masks: Vec<u64>,
}

impl<'a> Reducer<'a> {
    pub(crate) fn new(polys: Vec<&'a Polynomial>) -> Self {
        let masks = polys.iter().map(|p| support_mask(p.lead_monomial().unwrap())).collect();
        Reducer { polys, masks }
    }

    #[inline]
    fn find_divisor(&self, m: &Monomial) -> Option<usize> {
        let mask = support_mask(m);
        (0..self.polys.len())
            .find(|&i| self.masks[i] & !mask == 0 && self.polys[i].lead_monomial().unwrap().divides(m))
    }

    /// Fully reduces `f`: no remaining term is divisible by a lead monomial.
    pub(crate) fn reduce_full(&self, f: Polynomial) -> Polynomial {
        let ring = f.ring().clone();
        let field = ring.field().clone();
        let mut rest = f;
        let mut done: Vec<(Monomial, Fe)> = Vec::new();
        while let Some((m, c)) = rest.terms().first().cloned() {
            match self.find_divisor(&m) {
                Some(i) => {
                    let g = self.polys[i];
                    let q = g.lead_monomial().unwrap().quotient_of(&m).unwrap();
                    let factor = field.mul(c, field.inv_nonzero(g.lead_coeff().unwrap()));
                    rest = rest.sub_mul_term(factor, &q, g);
                }
                None => {
                    let mut terms = rest.into_terms();
                    let head = terms.remove(0);
                    done.push(head);
                    rest = Polynomial::from_sorted_terms(&ring, terms);
                }
            }
        }
        Polynomial::from_sorted_terms(&ring, done)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Buchberger's algorithm; returns the reduced basis sorted by lead degree, then descending lead.
pub(crate) fn groebner_engine(ring: &Arc<Ring>, gens: &[Polynomial], config: &GbConfig) -> Result<Vec<Polynomial>> {
    let order = ring.order().clone();
    let mut inputs: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if inputs.iter().any(|g| g.is_constant()) {
        return Ok(vec![Polynomial::one(ring)]);
    }
    if inputs.is_empty() {
        return Ok(Vec::new());
    }
    // Same-degree homogeneous inputs are replaced by an echelon basis of their span.
    if inputs.iter().all(|g| g.is_homogeneous()) {
        let mut by_degree: std::collections::BTreeMap<u32, Vec<Polynomial>> = Default::default();
        for g in inputs {
            by_degree.entry(g.homogeneous_degree().unwrap()).or_default().push(g);
        }
        inputs = by_degree.values().flat_map(|v| echelonize(ring, v)).collect();
    }
    let input_sugar: Vec<u32> = inputs.iter().map(|g| g.total_degree().unwrap()).collect();
    let mut pending: Vec<usize> = (0..inputs.len()).collect();

    let mut basis: Vec<Polynomial> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    loop {
        // Next item: smallest sugar; inputs win ties.
        let best_pair = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.sugar.cmp(&b.sugar).then_with(|| order.cmp(&a.lcm, &b.lcm)))
            .map(|(k, p)| (k, p.sugar));
        let best_input = pending.iter().enumerate().min_by_key(|(_, &g)| input_sugar[g]).map(|(k, &g)| (k, input_sugar[g]));
        let (h, h_sugar) = match (best_input, best_pair) {
            (None, None) => break,
            (Some((k, s)), bp) if bp.is_none_or(|(_, ps)| s <= ps) => {
                let g = pending.swap_remove(k);
                (inputs[g].clone(), s)
            }
            (_, Some((k, s))) => {
                let pair = pairs.swap_remove(k);
                if s > config.degree_ceiling {
                    return Err(Error::resource(format!(
                        "Gröbner basis computation exceeded the degree ceiling {}",
                        config.degree_ceiling
                    )));
                }
                (s_polynomial(&basis[pair.i], &basis[pair.j], &pair.lcm), s)
            }
            (Some(_), None) => unreachable!(),
        };
        let reducers: Vec<&Polynomial> = basis.iter().zip(&active).filter(|(_, &a)| a).map(|(g, _)| g).collect();
        let h = Reducer::new(reducers).reduce_full(h);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![Polynomial::one(ring)]);
        }
        let h = h.monic();
        let idx = basis.len();
        let lead_h = h.lead_monomial().unwrap().clone();
        basis.push(h);
        sugar.push(h_sugar);
        active.push(true);
        gebauer_moller_update(&basis, &sugar, &mut active, &mut pairs, idx, &lead_h);
    }

    let mut reduced: Vec<Polynomial> = Vec::new();
    let kept: Vec<&Polynomial> = basis.iter().zip(&active).filter(|(_, &a)| a).map(|(g, _)| g).collect();
    for (k, g) in kept.iter().enumerate() {
        let others: Vec<&Polynomial> = kept.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| *g).collect();
        let r = Reducer::new(others).reduce_full((*g).clone());
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| {
        let (la, lb) = (a.lead_monomial().unwrap(), b.lead_monomial().unwrap());
        la.degree().cmp(&lb.degree()).then_with(|| order.cmp(lb, la))
    });
    Ok(reduced)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, lcm: &Monomial) -> Polynomial {
    let qf = f.lead_monomial().unwrap().quotient_of(lcm).unwrap();
    let qg = g.lead_monomial().unwrap().quotient_of(lcm).unwrap();
    f.mul_term(&qf, Fe::ONE).sub_mul_term(Fe::ONE, &qg, g)
}

fn gebauer_moller_update(
    basis: &[Polynomial],
    sugar: &[u32],
    active: &mut [bool],
    pairs: &mut Vec<Pair>,
    h: usize,
    lead_h: &Monomial,
) {
    let lead = |i: usize| basis[i].lead_monomial().unwrap();
    let candidates: Vec<(usize, Monomial)> =
        (0..h).filter(|&i| active[i]).map(|i| (i, lead(i).lcm(lead_h))).collect();

    // Keep (i, h) if coprime, or if no other new pair's lcm divides its lcm.
    let mut kept: Vec<bool> = vec![true; candidates.len()];
    for a in 0..candidates.len() {
        if lead(candidates[a].0).is_coprime(lead_h) {
            continue;
        }
        let la = &candidates[a].1;
        for b in 0..candidates.len() {
            if a == b || !kept[b] {
                continue;
            }
            let lb = &candidates[b].1;
            if lb.divides(la) && (lb != la || b < a) {
                kept[a] = false;
                break;
            }
        }
    }
    // Existing pairs made redundant by h.
    pairs.retain(|p| {
        !(lead_h.divides(&p.lcm) && lead(p.i).lcm(lead_h) != p.lcm && lead(p.j).lcm(lead_h) != p.lcm)
    });
    for (k, (i, lcm)) in candidates.into_iter().enumerate() {
        if !kept[k] || lead(i).is_coprime(lead_h) {
            continue;
        }
        let si = sugar[i] + lcm.degree() - lead(i).degree();
        let sh = sugar[h] + lcm.degree() - lead_h.degree();
        pairs.push(Pair { i, j: h, lcm, sugar: si.max(sh) });
    }
    for i in 0..h {
        if active[i] && lead_h.divides(lead(i)) {
            active[i] = false;
        }
    }
}
