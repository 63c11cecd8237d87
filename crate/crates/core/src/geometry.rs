//! Linear projections X ⊂ P^n → P^s and their fibers, and the gcd invariant
//! r of a space of binary forms.
//!
//! Closed points are enumerated as Frobenius-orbit representatives over
//! GF(p^k) for k up to an extension bound K. A fiber over a point is cut out
//! by I_X and the s independent linear forms `ℓ_i - p_i ℓ_a` (a = first
//! nonzero coordinate, normalized to 1); those forms are used to eliminate s
//! variables before saturating, which leaves a zero-dimensional problem in
//! n + 1 - s variables.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{power_table_with, PowerOptions, PowerRegReport, Route, StabilityStatus};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::groebner::{
    hilbert_function_of_basis, ideal_combine, saturate_fast, series_of_basis, CombineOp, GbConfig, GroebnerBasis,
    Ideal,
};
use crate::linalg;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Ring};
use crate::unipoly::UniPoly;

pub const DEFAULT_EXTENSION_BOUND: u32 = 2;
/// Default cap on the number of projective points scanned by a search.
pub const DEFAULT_POINT_BUDGET: u64 = 4_000_000;
/// Maximizing points listed in a report; the full count is always given.
pub const ARGMAX_LIST_LIMIT: usize = 64;

pub fn k_bound_warning(k: u32) -> String {
    format!("closed points enumerated only over extensions of degree <= {k}; the maximum found is a lower bound")
}

pub const BUDGET_WARNING: &str = "point budget exhausted: partial results, the reported maximum is a lower bound";

/// A finite linear projection: X = V(I_X) ⊂ P^n and forms ℓ_0, ..., ℓ_s.
#[derive(Clone, Debug)]
pub struct ProjectionSpec {
    ix: Ideal,
    forms: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FiniteCheck {
    /// I_X + (V) has finite colength.
    Finite,
    /// The center meets X; the named variable has no pure power in the lead-term ideal.
    CenterMeetsX { witness: String },
}

impl ProjectionSpec {
    /// Validates that the forms are linear and linearly independent.
    pub fn new(ix: Ideal, forms: Vec<Polynomial>) -> Result<Self> {
        let ring = ix.ring().clone();
        if forms.is_empty() {
            return Err(Error::usage("a projection needs at least one linear form"));
        }
        for f in &forms {
            Ring::check_same(&ring, f.ring())?;
            if f.homogeneous_degree() != Some(1) {
                return Err(Error::usage(format!("{f} is not a linear form")));
            }
        }
        if linalg::rank(ring.field(), linear_rows(&forms)) < forms.len() {
            return Err(Error::usage("the projecting linear forms are linearly dependent"));
        }
        Ok(ProjectionSpec { ix, forms })
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ix
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.ix.ring()
    }

    /// s, the dimension of the target P^s.
    pub fn target_dimension(&self) -> usize {
        self.forms.len() - 1
    }
}

fn linear_rows(forms: &[Polynomial]) -> Vec<Vec<Fe>> {
    forms
        .iter()
        .map(|f| {
            let n = f.ring().nvars();
            (0..n).map(|i| f.coeff(&Monomial::var(n, i))).collect()
        })
        .collect()
}

pub fn check_finite(spec: &ProjectionSpec) -> Result<FiniteCheck> {
    check_finite_with(spec, &GbConfig::default())
}

pub fn check_finite_with(spec: &ProjectionSpec, config: &GbConfig) -> Result<FiniteCheck> {
    let v = Ideal::new(spec.ring(), spec.forms.clone())?;
    let gb = ideal_combine(&spec.ix, &v, CombineOp::Sum)?.groebner_with(config)?;
    Ok(match gb.finite_length_witness() {
        None => FiniteCheck::Finite,
        Some(i) => FiniteCheck::CenterMeetsX { witness: spec.ring().vars()[i].clone() },
    })
}

fn require_finite(spec: &ProjectionSpec, config: &GbConfig) -> Result<()> {
    match check_finite_with(spec, config)? {
        FiniteCheck::Finite => Ok(()),
        FiniteCheck::CenterMeetsX { witness } => Err(Error::Geometry {
            message: format!("the center of the projection meets X (no pure power of {witness} in I_X + (V))"),
            witness: Some(witness),
        }),
    }
}

/// A point of P^s with coordinates in GF(p^k), first nonzero coordinate 1.
#[derive(Clone, Debug)]
pub struct ClosedPoint {
    field: Arc<Field>,
    coords: Vec<Fe>,
}

impl ClosedPoint {
    /// Normalizes the coordinates; all-zero input is rejected.
    pub fn new(field: &Arc<Field>, coords: Vec<Fe>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()).copied() else {
            return Err(Error::usage("a projective point needs a nonzero coordinate"));
        };
        let inv = field.inv_nonzero(lead);
        Ok(ClosedPoint { field: field.clone(), coords: coords.iter().map(|&c| field.mul(c, inv)).collect() })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords
    }

    /// Degree of the field generated by the coordinates (the orbit size under Frobenius).
    pub fn degree(&self) -> u32 {
        orbit_size(&self.field, &self.coords)
    }

    /// The coordinatewise Frobenius image (a Galois conjugate).
    pub fn conjugate(&self) -> ClosedPoint {
        ClosedPoint { field: self.field.clone(), coords: frobenius(&self.field, &self.coords) }
    }

    pub fn format(&self, gen: &str) -> Vec<String> {
        self.coords.iter().map(|&c| self.field.format(c, gen)).collect()
    }
}

fn frobenius(field: &Field, coords: &[Fe]) -> Vec<Fe> {
    coords.iter().map(|&c| field.frobenius(c)).collect()
}

fn orbit_size(field: &Field, coords: &[Fe]) -> u32 {
    let mut cur = frobenius(field, coords);
    let mut size = 1;
    while cur != coords {
        cur = frobenius(field, &cur);
        size += 1;
    }
    size
}

/// True if `coords` generate GF(p^k) and are the least member of their orbit.
fn is_orbit_representative(field: &Field, coords: &[Fe], k: u32) -> bool {
    let mut cur = coords.to_vec();
    for i in 1..=k {
        cur = frobenius(field, &cur);
        if cur == coords {
            return i == k;
        }
        if cur.iter().map(|c| c.raw()).lt(coords.iter().map(|c| c.raw())) {
            return false;
        }
    }
    unreachable!("Frobenius has order dividing k")
}

fn projective_point_count(q: u64, s: usize) -> u64 {
    (0..=s as u32).map(|e| q.saturating_pow(e)).fold(0u64, |a, b| a.saturating_add(b))
}

/// Orbit representatives of points of P^s over GF(p^k) not defined over a smaller field.
fn orbit_representatives(field: &Field, s: usize, k: u32) -> Vec<Vec<Fe>> {
    let q = field.order();
    let mut out = Vec::new();
    for lead in 0..=s {
        let free = s - lead;
        let total = q.pow(free as u32);
        let mut coords = vec![Fe::ZERO; s + 1];
        coords[lead] = Fe::ONE;
        for idx in 0..total {
            let mut x = idx;
            for slot in coords[lead + 1..].iter_mut().rev() {
                *slot = Fe(x % q);
                x /= q;
            }
            if k == 1 || is_orbit_representative(field, &coords, k) {
                out.push(coords.clone());
            }
        }
    }
    out
}

/// Per-field data for computing fibers quickly.
struct FiberContext {
    ring: Arc<Ring>,
    ix: Vec<Polynomial>,
    forms: Vec<Polynomial>,
    config: GbConfig,
}

impl FiberContext {
    fn new(spec: &ProjectionSpec, field: Arc<Field>, config: &GbConfig) -> Self {
        let ring = spec.ring().with_field(field);
        FiberContext {
            ix: spec.ix.generators().iter().map(|g| g.base_change(&ring)).collect(),
            forms: spec.forms.iter().map(|f| f.base_change(&ring)).collect(),
            ring,
            config: *config,
        }
    }

    fn section_forms(&self, coords: &[Fe]) -> Vec<Polynomial> {
        let field = self.ring.field();
        let a = coords.iter().position(|c| !c.is_zero()).unwrap();
        (0..coords.len())
            .filter(|&i| i != a)
            .map(|i| self.forms[i].sub(&self.forms[a].scale(field.mul(coords[i], field.inv_nonzero(coords[a])))))
            .collect()
    }

    /// Restricts I_X to the linear subspace cut out by `section`, returning the
    /// ideal in the remaining variables and the substitution back.
    fn restrict(&self, section: &[Polynomial]) -> (Ideal, Vec<usize>) {
        let n = self.ring.nvars();
        let field = self.ring.field();
        let mut rows = linear_rows(section);
        let pivots = linalg::rref(field, &mut rows);
        let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let small = self.ring.with_vars(free.iter().map(|&i| self.ring.vars()[i].clone()).collect(), MonomialOrder::grevlex());
        let mut images: Vec<Polynomial> = vec![Polynomial::zero(&small); n];
        for (j, &v) in free.iter().enumerate() {
            images[v] = Polynomial::var(&small, j);
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            let mut img = Polynomial::zero(&small);
            for (j, &v) in free.iter().enumerate() {
                if !row[v].is_zero() {
                    img = img.sub(&Polynomial::var(&small, j).scale(row[v]));
                }
            }
            images[p] = img;
        }
        let gens: Vec<Polynomial> =
            self.ix.iter().map(|g| g.substitute(&small, &images)).filter(|g| !g.is_zero()).collect();
        (Ideal::from_trusted(&small, gens), free)
    }

    /// Saturated fiber restricted to the section, or `None` when empty.
    fn saturated_section(&self, coords: &[Fe]) -> Result<(GroebnerBasis, Vec<Polynomial>, Vec<usize>)> {
        let section = self.section_forms(coords);
        let (restricted, free) = self.restrict(&section);
        let gb = saturate_fast(&restricted, &self.config, 0)?;
        Ok((gb, section, free))
    }

    fn degree_and_regularity(&self, coords: &[Fe]) -> Result<Option<(u64, i64)>> {
        let (gb, _, _) = self.saturated_section(coords)?;
        if gb.is_unit() {
            return Ok(None);
        }
        zero_dim_invariants(&gb).map(Some)
    }
}

/// Degree and regularity of a saturated ideal of a zero-dimensional scheme.
fn zero_dim_invariants(gb: &GroebnerBasis) -> Result<(u64, i64)> {
    let series = series_of_basis(gb);
    let dim = series.dimension();
    if dim != 1 {
        return Err(Error::Dimension {
            message: format!("expected a zero-dimensional scheme (Krull dimension 1), found Krull dimension {dim}"),
            witness: None,
        });
    }
    let degree = series.degree() as u64;
    let h = hilbert_function_of_basis(gb, degree as usize);
    let first = h.values.iter().position(|&v| v == degree).expect("h reaches the degree by d = degree - 1");
    Ok((degree, first as i64 + 1))
}

/// The saturated fiber ideal over `point`, in the ring over the point's field.
pub fn fiber_ideal(spec: &ProjectionSpec, point: &ClosedPoint) -> Result<Ideal> {
    fiber_ideal_with(spec, point, &GbConfig::default())
}

pub fn fiber_ideal_with(spec: &ProjectionSpec, point: &ClosedPoint, config: &GbConfig) -> Result<Ideal> {
    if point.coords.len() != spec.forms.len() {
        return Err(Error::usage(format!(
            "point has {} coordinates but the target is P^{}",
            point.coords.len(),
            spec.target_dimension()
        )));
    }
    let base = spec.ring().field();
    if point.field.characteristic() != base.characteristic() || point.field.degree() % base.degree() != 0 {
        return Err(Error::usage(format!("{} does not contain {}", point.field.spec(), base.spec())));
    }
    if base.degree() != 1 && point.field.spec() != base.spec() {
        return Err(Error::usage("points over extensions of a non-prime base field are not supported"));
    }
    require_finite(spec, config)?;
    let ctx = FiberContext::new(spec, point.field.clone(), config);
    let (gb, section, free) = ctx.saturated_section(&point.coords)?;
    let ring = &ctx.ring;
    if gb.is_unit() {
        return Ok(Ideal::unit(ring));
    }
    let back: Vec<Polynomial> = free.iter().map(|&v| Polynomial::var(ring, v)).collect();
    let mut gens: Vec<Polynomial> = gb.elements().iter().map(|g| g.substitute(ring, &back)).collect();
    gens.extend(section);
    let full = Ideal::from_trusted(ring, gens).groebner_with(config)?;
    Ok(full.to_ideal())
}

/// (degree, regularity) of a saturated ideal Z defining a zero-dimensional
/// scheme: the eventual value of h and 1 + min{ε : h(ε) = degree}.
pub fn fiber_regularity(z: &Ideal) -> Result<(u64, i64)> {
    let gb = z.groebner()?;
    zero_dim_invariants(&gb)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    /// Degree of the field of definition.
    pub k: u32,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub point: PointReport,
    pub degree: u64,
    pub regularity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub k: u32,
    pub points: u64,
    pub empty_fibers: u64,
    pub max_regularity: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxFiberReport {
    pub ext_bound: u32,
    pub levels: Vec<LevelSummary>,
    pub max_regularity: Option<i64>,
    pub argmax_count: u64,
    /// At most [`ARGMAX_LIST_LIMIT`] maximizing fibers, in enumeration order.
    pub argmax: Vec<FiberReport>,
    pub epsilon: Option<i64>,
    pub equals_epsilon_plus_one: Option<bool>,
    pub k_possibly_insufficient: bool,
    pub budget_exceeded: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct FiberSearchOptions {
    pub ext_bound: u32,
    pub point_budget: u64,
    /// ε from the containment computation, to compare against.
    pub epsilon: Option<i64>,
    pub config: GbConfig,
}

impl Default for FiberSearchOptions {
    fn default() -> Self {
        FiberSearchOptions {
            ext_bound: DEFAULT_EXTENSION_BOUND,
            point_budget: DEFAULT_POINT_BUDGET,
            epsilon: None,
            config: GbConfig::default(),
        }
    }
}

fn extension_of(base: &Field, k: u32) -> Result<Arc<Field>> {
    if base.degree() != 1 {
        if k == 1 {
            return Field::from_spec(base.spec());
        }
        return Err(Error::usage("fiber enumeration over extensions of a non-prime field is not supported"));
    }
    if k == 1 {
        Field::prime(base.characteristic())
    } else {
        Field::extension(base.characteristic(), k)
    }
}

/// Maximum fiber regularity over closed points of P^s defined over GF(p^k), k ≤ K.
pub fn max_fiber_regularity(spec: &ProjectionSpec, opts: &FiberSearchOptions) -> Result<MaxFiberReport> {
    if opts.ext_bound == 0 {
        return Err(Error::usage("the extension bound K must be at least 1"));
    }
    require_finite(spec, &opts.config)?;
    let base = spec.ring().field();
    let s = spec.target_dimension();
    let deg_x = series_of_basis(&spec.ix.groebner_with(&opts.config)?).degree();
    let gen = spec.ring().generator_name().to_string();
    let mut levels = Vec::new();
    let mut best: Option<i64> = None;
    let mut argmax: Vec<FiberReport> = Vec::new();
    let mut argmax_count = 0u64;
    let mut scanned = 0u64;
    let mut budget_exceeded = false;
    for k in 1..=opts.ext_bound {
        let field = extension_of(base, k)?;
        let count = projective_point_count(field.order(), s);
        if scanned.saturating_add(count) > opts.point_budget {
            budget_exceeded = true;
            break;
        }
        scanned += count;
        let ctx = FiberContext::new(spec, field.clone(), &opts.config);
        let reps = orbit_representatives(&field, s, k);
        let results: Result<Vec<Option<(u64, i64)>>> =
            reps.par_iter().map(|c| ctx.degree_and_regularity(c)).collect();
        let results = results?;
        let mut level_max = None;
        let mut empty = 0;
        for (c, r) in reps.iter().zip(&results) {
            let Some((degree, reg)) = *r else {
                empty += 1;
                continue;
            };
            if degree < 1 || degree as i64 > deg_x || reg > degree as i64 {
                return Err(Error::SelfCheck(format!(
                    "fiber of degree {degree} and regularity {reg} over a scheme of degree {deg_x}"
                )));
            }
            level_max = level_max.max(Some(reg));
            let report = || FiberReport {
                point: PointReport { k, coords: c.iter().map(|&x| field.format(x, &gen)).collect() },
                degree,
                regularity: reg,
            };
            match best.cmp(&Some(reg)) {
                std::cmp::Ordering::Less => {
                    best = Some(reg);
                    argmax = vec![report()];
                    argmax_count = 1;
                }
                std::cmp::Ordering::Equal => {
                    argmax_count += 1;
                    if argmax.len() < ARGMAX_LIST_LIMIT {
                        argmax.push(report());
                    }
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        levels.push(LevelSummary { k, points: reps.len() as u64, empty_fibers: empty, max_regularity: level_max });
    }
    let equals = opts.epsilon.zip(best).map(|(e, m)| m == e + 1);
    let k_possibly_insufficient = opts.epsilon.zip(best).is_some_and(|(e, m)| m < e + 1);
    let mut warnings = vec![k_bound_warning(opts.ext_bound)];
    if budget_exceeded {
        warnings.push(BUDGET_WARNING.to_string());
    }
    if k_possibly_insufficient {
        warnings.push("maximum below ε + 1: the extension bound K is possibly insufficient".to_string());
    }
    Ok(MaxFiberReport {
        ext_bound: opts.ext_bound,
        levels,
        max_regularity: best,
        argmax_count,
        argmax,
        epsilon: opts.epsilon,
        equals_epsilon_plus_one: equals,
        k_possibly_insufficient,
        budget_exceeded,
        warnings,
    })
}

/// Coefficients c_0..c_d of a binary form Σ c_i x^i y^(d-i) in variables (x, y) = (0, 1).
fn binary_coeffs(f: &Polynomial) -> Vec<Fe> {
    let d = f.homogeneous_degree().unwrap_or(0) as usize;
    let mut c = vec![Fe::ZERO; d + 1];
    for (m, coef) in f.terms() {
        c[m.exponent(0) as usize] = *coef;
    }
    c
}

/// Degree and monic form of gcd of binary forms: y-adic valuations handled
/// apart from the dehomogenized gcd at y = 1.
fn binary_gcd(field: &Field, forms: &[Vec<Fe>]) -> (usize, UniPoly, usize) {
    let mut g = UniPoly::zero();
    let mut y_power = usize::MAX;
    for c in forms {
        let u = UniPoly::from_coeffs(field, c.clone());
        let Some(deg) = u.degree() else { continue };
        y_power = y_power.min(c.len() - 1 - deg);
        g = g.gcd(&u, field);
    }
    if y_power == usize::MAX {
        return (0, g, 0);
    }
    let x_part = g.degree().unwrap_or(0);
    (x_part + y_power, g, y_power)
}

fn format_binary(ring: &Ring, field: &Field, g: &UniPoly, y_power: usize, gen: &str) -> String {
    let x = &ring.vars()[0];
    let y = &ring.vars()[1];
    let d = g.degree().unwrap_or(0) + y_power;
    let mut parts = Vec::new();
    for (i, &c) in g.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let ye = d - i;
        let mut factors = Vec::new();
        let coef = field.format(c, gen);
        if coef != "1" || (i == 0 && ye == 0) {
            factors.push(if field.degree() > 1 && coef.contains('+') { format!("({coef})") } else { coef });
        }
        match i {
            0 => {}
            1 => factors.push(x.clone()),
            _ => factors.push(format!("{x}^{i}")),
        }
        match ye {
            0 => {}
            1 => factors.push(y.clone()),
            _ => factors.push(format!("{y}^{ye}")),
        }
        parts.push(factors.join("*"));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoVarsReport {
    pub d: u32,
    pub dim_v: usize,
    pub r: u32,
    /// The hyperplane of coefficient space defining the maximizing subspace.
    pub witness_hyperplane: PointReport,
    pub witness_basis: Vec<String>,
    pub witness_gcd: String,
    pub ext_bound: u32,
    pub warnings: Vec<String>,
}

/// r = max over codimension-1 subspaces V' ⊂ V (defined over GF(p^k), k ≤ K)
/// of deg gcd(V').
pub fn twovars_r(forms: &[Polynomial], ext_bound: u32) -> Result<TwoVarsReport> {
    let Some(first) = forms.first() else {
        return Err(Error::usage("V is empty"));
    };
    let ring = first.ring().clone();
    if ring.nvars() != 2 {
        return Err(Error::usage("binary forms need a ring in exactly two variables"));
    }
    if ext_bound == 0 {
        return Err(Error::usage("the extension bound K must be at least 1"));
    }
    let d = first.homogeneous_degree().ok_or_else(|| Error::usage(format!("{first} is not homogeneous")))?;
    for f in forms {
        Ring::check_same(&ring, f.ring())?;
        if f.homogeneous_degree() != Some(d) {
            return Err(Error::usage("the forms of V must be homogeneous of one degree"));
        }
    }
    if forms.len() < 2 {
        return Err(Error::usage("V must have dimension at least 2"));
    }
    let base = ring.field().clone();
    let coeffs: Vec<Vec<Fe>> = forms.iter().map(binary_coeffs).collect();
    if linalg::rank(&base, coeffs.clone()) < forms.len() {
        return Err(Error::usage("the forms of V are linearly dependent"));
    }
    let gen = ring.generator_name().to_string();
    let (g_deg, g, y_power) = binary_gcd(&base, &coeffs);
    if g_deg > 0 {
        let factor = format_binary(&ring, &base, &g, y_power, &gen);
        return Err(Error::Usage(format!("the forms of V have the common factor {factor}")));
    }
    let m = forms.len();
    let mut best: Option<(u32, u32, Vec<Fe>, Arc<Field>)> = None;
    for k in 1..=ext_bound {
        let field = extension_of(&base, k)?;
        let reps = orbit_representatives(&field, m - 1, k);
        let found = reps
            .par_iter()
            .map(|a| {
                let basis = hyperplane_basis(&field, &coeffs, a);
                (binary_gcd(&field, &basis).0 as u32, a)
            })
            .reduce_with(|x, y| if y.0 > x.0 { y } else { x });
        if let Some((r, a)) = found {
            if best.as_ref().is_none_or(|b| r > b.0) {
                best = Some((r, k, a.clone(), field.clone()));
            }
        }
        // a codimension-1 subspace g·W has dim W = m - 1 <= d - deg g + 1
        if best.as_ref().is_some_and(|b| b.0 as usize + m == d as usize + 2) {
            break;
        }
    }
    let (r, k, a, field) = best.expect("P^(m-1) has rational points");
    let basis = hyperplane_basis(&field, &coeffs, &a);
    let (_, g, y_power) = binary_gcd(&field, &basis);
    let ext_ring = ring.with_field(field.clone());
    let witness_basis = basis
        .iter()
        .map(|c| {
            let terms = c
                .iter()
                .enumerate()
                .map(|(i, &x)| (Monomial::from_exponents(&[i as u16, (d as usize - i) as u16]), x))
                .collect();
            Polynomial::from_terms(&ext_ring, terms).to_string()
        })
        .collect();
    Ok(TwoVarsReport {
        d,
        dim_v: m,
        r,
        witness_hyperplane: PointReport { k, coords: a.iter().map(|&x| field.format(x, &gen)).collect() },
        witness_basis,
        witness_gcd: format_binary(&ring, &field, &g, y_power, &gen),
        ext_bound,
        warnings: vec![format!(
            "subspaces enumerated only over extensions of degree <= {ext_bound}; r is a lower bound for its value over the algebraic closure"
        )],
    })
}

/// Basis {f_i - a_i f_j : i ≠ j} of the subspace {Σ c_i f_i : Σ a_i c_i = 0}, a_j = 1 the first nonzero entry.
fn hyperplane_basis(field: &Field, coeffs: &[Vec<Fe>], a: &[Fe]) -> Vec<Vec<Fe>> {
    let j = a.iter().position(|x| !x.is_zero()).unwrap();
    (0..coeffs.len())
        .filter(|&i| i != j)
        .map(|i| coeffs[i].iter().zip(&coeffs[j]).map(|(&x, &y)| field.sub(x, field.mul(a[i], y))).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoVarsRow {
    pub t: u32,
    pub reg_power: i64,
    pub predicted: i64,
    pub stabilized: bool,
    pub lower_bound_holds: bool,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoVarsVerdict {
    pub twovars: TwoVarsReport,
    pub powers: PowerRegReport,
    pub rows: Vec<TwoVarsRow>,
    /// Stabilized rows with reg I^t < dt + r - 1.
    pub violations: u32,
    /// Whether every stabilized row has reg I^t = dt + r - 1.
    pub equality_on_stable_rows: Option<bool>,
}

/// Compares dt + r - 1 with reg I^t, I = (V), on the stabilized rows of the power table.
pub fn twovars_verify(forms: &[Polynomial], t_max: u32, ext_bound: u32) -> Result<TwoVarsVerdict> {
    twovars_verify_with(forms, t_max, ext_bound, &PowerOptions::default())
}

pub fn twovars_verify_with(
    forms: &[Polynomial],
    t_max: u32,
    ext_bound: u32,
    opts: &PowerOptions,
) -> Result<TwoVarsVerdict> {
    let twovars = twovars_r(forms, ext_bound)?;
    let ring = forms[0].ring();
    let ideal = Ideal::new(ring, forms.to_vec())?;
    let powers = power_table_with(&ideal, t_max, Route::Both, opts)?;
    let stable_from = match powers.status {
        StabilityStatus::HeuristicallyStable => powers.stable_from_t,
        StabilityStatus::NotStabilized => None,
    };
    let d = twovars.d as i64;
    let r = twovars.r as i64;
    let rows: Vec<TwoVarsRow> = powers
        .rows
        .iter()
        .map(|row| {
            let reg = row.reg_power.expect("route both computes resolutions");
            let predicted = d * row.t as i64 + r - 1;
            TwoVarsRow {
                t: row.t,
                reg_power: reg,
                predicted,
                stabilized: stable_from.is_some_and(|s| row.t >= s),
                lower_bound_holds: predicted <= reg,
                equal: predicted == reg,
            }
        })
        .collect();
    let stable: Vec<&TwoVarsRow> = rows.iter().filter(|r| r.stabilized).collect();
    let violations = stable.iter().filter(|r| !r.lower_bound_holds).count() as u32;
    let equality_on_stable_rows = (!stable.is_empty()).then(|| stable.iter().all(|r| r.equal));
    Ok(TwoVarsVerdict { twovars, powers, rows, violations, equality_on_stable_rows })
}
