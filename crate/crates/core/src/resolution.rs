//! Graded free modules, module Gröbner bases, syzygies, free resolutions and
//! Betti tables.
//!
//! Resolutions of S/J are built with Schreyer's algorithm. Level 1 is the
//! reduced Gröbner basis of J, reindexed so that within a component lead
//! monomials ascend in lex order; each further level consists of the syzygies
//! of S-pairs whose lead quotients minimally generate the colon ideals
//! `(lt σ_a : a < b) : lt σ_b`. Those form a Gröbner basis for the induced
//! Schreyer order, so the next S-vectors reduce to zero and the recorded
//! quotients give the next differential. The ordering makes level k leads free
//! of the first k - 1 variables, which bounds the length by the number of
//! variables.
//!
//! Terms of a free module with basis weights `w_i` compare by `m * w_i` in the
//! ring order, ties going to the larger basis index.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::groebner::{GbConfig, GroebnerBasis, Ideal};
use crate::linalg;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Ring};

/// A graded free module ⊕ S(-a_i); `twists[i]` is the degree a_i of the i-th basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeModule {
    twists: Vec<u32>,
}

impl FreeModule {
    pub fn new(twists: Vec<u32>) -> Self {
        FreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[u32] {
        &self.twists
    }
}

/// A sparse element of a free module: (basis index, nonzero component) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    entries: Vec<(usize, Polynomial)>,
}

impl ModuleElement {
    /// Entries are sorted by index; zero components are dropped and repeated
    /// indices are summed.
    pub fn new(mut entries: Vec<(usize, Polynomial)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Polynomial)> = Vec::with_capacity(entries.len());
        for (i, p) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = last.1.add(&p),
                _ => out.push((i, p)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        ModuleElement { entries: out }
    }

    pub fn entries(&self) -> &[(usize, Polynomial)] {
        &self.entries
    }

    pub fn component(&self, i: usize) -> Option<&Polynomial> {
        self.entries.iter().find(|e| e.0 == i).map(|e| &e.1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Degree as an element of `module`, or `None` if not homogeneous.
    pub fn degree(&self, module: &FreeModule) -> Option<u32> {
        let mut deg = None;
        for (i, p) in &self.entries {
            let d = p.homogeneous_degree()? + *module.twists.get(*i)?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }
}

/// Schreyer-type order on a free module given by one weight monomial per basis
/// element; unit weights give term-over-position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    weights: Vec<Monomial>,
}

impl ModuleOrder {
    pub fn term_over_position(nvars: usize, rank: usize) -> Self {
        ModuleOrder { weights: vec![Monomial::one(nvars); rank] }
    }

    pub fn schreyer(weights: Vec<Monomial>) -> Self {
        ModuleOrder { weights }
    }

    pub fn weights(&self) -> &[Monomial] {
        &self.weights
    }
}

#[derive(Clone, Debug)]
struct Term {
    /// `mono * weight[comp]`
    key: Monomial,
    mono: Monomial,
    comp: usize,
    coef: Fe,
}

type Vector = Vec<Term>;

fn cmp_terms(order: &MonomialOrder, a: &Term, b: &Term) -> Ordering {
    order.cmp(&a.key, &b.key).then(a.comp.cmp(&b.comp))
}

/// `a + c * u * b` for vectors sorted descending.
fn axpy(order: &MonomialOrder, field: &Field, a: &[Term], c: Fe, u: &Monomial, b: &[Term]) -> Vector {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.iter().peekable();
    let mut ib = b
        .iter()
        .map(|t| Term { key: t.key.mul(u), mono: t.mono.mul(u), comp: t.comp, coef: field.mul(c, t.coef) })
        .peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(ia.next().unwrap().clone()),
            (None, Some(_)) => out.push(ib.next().unwrap()),
            (Some(x), Some(y)) => match cmp_terms(order, x, y) {
                Ordering::Greater => out.push(ia.next().unwrap().clone()),
                Ordering::Less => out.push(ib.next().unwrap()),
                Ordering::Equal => {
                    let mut t = ib.next().unwrap();
                    t.coef = field.add(t.coef, ia.next().unwrap().coef);
                    if !t.coef.is_zero() {
                        out.push(t);
                    }
                }
            },
        }
    }
    out
}

fn to_vector(ring: &Ring, weights: &[Monomial], el: &ModuleElement) -> Vector {
    let mut v: Vector = el
        .entries
        .iter()
        .flat_map(|(i, p)| {
            p.terms().iter().map(move |(m, c)| Term { key: m.mul(&weights[*i]), mono: m.clone(), comp: *i, coef: *c })
        })
        .collect();
    v.sort_by(|a, b| cmp_terms(ring.order(), b, a));
    v
}

fn to_element(ring: &Arc<Ring>, v: &[Term]) -> ModuleElement {
    let mut by_comp: BTreeMap<usize, Vec<(Monomial, Fe)>> = BTreeMap::new();
    for t in v {
        by_comp.entry(t.comp).or_default().push((t.mono.clone(), t.coef));
    }
    ModuleElement { entries: by_comp.into_iter().map(|(i, ts)| (i, Polynomial::from_terms(ring, ts))).collect() }
}

fn make_monic(field: &Field, v: &mut Vector) {
    if let Some(lc) = v.first().map(|t| t.coef) {
        let inv = field.inv_nonzero(lc);
        for t in v.iter_mut() {
            t.coef = field.mul(t.coef, inv);
        }
    }
}

/// Lead reducers grouped by lead component.
struct LeadIndex {
    by_comp: HashMap<usize, Vec<usize>>,
}

impl LeadIndex {
    fn new(elems: &[Vector]) -> Self {
        let mut by_comp: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, v) in elems.iter().enumerate() {
            by_comp.entry(v[0].comp).or_default().push(i);
        }
        LeadIndex { by_comp }
    }

    fn push(&mut self, idx: usize, v: &Vector) {
        self.by_comp.entry(v[0].comp).or_default().push(idx);
    }

    fn find(&self, elems: &[Vector], t: &Term) -> Option<usize> {
        self.by_comp.get(&t.comp)?.iter().copied().find(|&i| elems[i][0].mono.divides(&t.mono))
    }
}

/// Reduces `v` until no term is divisible by a lead; returns the remainder
/// and the quotient terms `(multiplier, element index, coefficient)`.
fn reduce_full(
    order: &MonomialOrder,
    field: &Field,
    elems: &[Vector],
    index: &LeadIndex,
    mut v: Vector,
) -> (Vector, Vec<(Monomial, usize, Fe)>) {
    let mut rem = Vec::new();
    let mut quot = Vec::new();
    let mut pos = 0;
    while pos < v.len() {
        let t = &v[pos];
        match index.find(elems, t) {
            Some(i) => {
                let g = &elems[i];
                let u = g[0].mono.quotient_of(&t.mono).unwrap();
                let c = field.mul(t.coef, field.inv_nonzero(g[0].coef));
                quot.push((u.clone(), i, c));
                let tail = v.split_off(pos);
                let reduced = axpy(order, field, &tail, field.neg(c), &u, g);
                v.extend(reduced);
            }
            None => {
                rem.push(t.clone());
                pos += 1;
            }
        }
    }
    (rem, quot)
}

/// A reduced Gröbner basis of a submodule of a free module.
#[derive(Clone, Debug)]
pub struct ModuleGb {
    ring: Arc<Ring>,
    module: FreeModule,
    order: ModuleOrder,
    elements: Vec<ModuleElement>,
}

impl ModuleGb {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn elements(&self) -> &[ModuleElement] {
        &self.elements
    }

    fn vectors(&self) -> Vec<Vector> {
        self.elements.iter().map(|e| to_vector(&self.ring, &self.order.weights, e)).collect()
    }

    /// Remainder of `el` on division by the basis.
    pub fn normal_form(&self, el: &ModuleElement) -> ModuleElement {
        let elems = self.vectors();
        let index = LeadIndex::new(&elems);
        let v = to_vector(&self.ring, &self.order.weights, el);
        let (rem, _) = reduce_full(self.ring.order(), self.ring.field(), &elems, &index, v);
        to_element(&self.ring, &rem)
    }

    pub fn contains(&self, el: &ModuleElement) -> bool {
        self.normal_form(el).is_zero()
    }
}

impl From<&GroebnerBasis> for ModuleGb {
    fn from(gb: &GroebnerBasis) -> Self {
        let ring = gb.ring().clone();
        let nv = ring.nvars();
        ModuleGb {
            module: FreeModule::new(vec![0]),
            order: ModuleOrder::term_over_position(nv, 1),
            elements: gb.elements().iter().map(|g| ModuleElement::new(vec![(0, g.clone())])).collect(),
            ring,
        }
    }
}

fn check_module_input(ring: &Arc<Ring>, module: &FreeModule, gens: &[ModuleElement], order: &ModuleOrder) -> Result<()> {
    if order.weights.len() != module.rank() {
        return Err(Error::usage("module order has the wrong number of weights"));
    }
    for g in gens {
        for (i, p) in &g.entries {
            Ring::check_same(ring, p.ring())?;
            if *i >= module.rank() {
                return Err(Error::usage(format!("component {i} out of range for a rank {} module", module.rank())));
            }
        }
        if !g.is_zero() && g.degree(module).is_none() {
            return Err(Error::usage("module element is not homogeneous"));
        }
    }
    Ok(())
}

/// Buchberger's algorithm for submodules of a graded free module.
pub fn module_groebner(
    ring: &Arc<Ring>,
    module: &FreeModule,
    gens: &[ModuleElement],
    order: &ModuleOrder,
) -> Result<ModuleGb> {
    module_groebner_with(ring, module, gens, order, &GbConfig::default())
}

pub fn module_groebner_with(
    ring: &Arc<Ring>,
    module: &FreeModule,
    gens: &[ModuleElement],
    order: &ModuleOrder,
    config: &GbConfig,
) -> Result<ModuleGb> {
    check_module_input(ring, module, gens, order)?;
    let mo = ring.order();
    let field = ring.field();
    let inputs: Vec<Vector> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_vector(ring, &order.weights, g)).collect();
    let term_degree = |t: &Term| t.mono.degree() + module.twists[t.comp];

    enum Item {
        Input(usize),
        Pair(usize, usize),
    }
    let mut heap: BinaryHeap<Reverse<(u32, usize, usize, usize)>> = BinaryHeap::new();
    let mut items = Vec::new();
    for (i, v) in inputs.iter().enumerate() {
        heap.push(Reverse((term_degree(&v[0]), 0, items.len(), 0)));
        items.push(Item::Input(i));
    }
    let mut basis: Vec<Vector> = Vec::new();
    let mut index = LeadIndex { by_comp: HashMap::new() };
    while let Some(Reverse((deg, _, item, _))) = heap.pop() {
        if deg > config.degree_ceiling {
            return Err(Error::resource(format!(
                "module Gröbner basis computation exceeded the degree ceiling {}",
                config.degree_ceiling
            )));
        }
        let v = match items[item] {
            Item::Input(i) => inputs[i].clone(),
            Item::Pair(i, j) => {
                let (a, b) = (&basis[i], &basis[j]);
                let l = a[0].mono.lcm(&b[0].mono);
                let ua = a[0].mono.quotient_of(&l).unwrap();
                let ub = b[0].mono.quotient_of(&l).unwrap();
                let sa = axpy(mo, field, &[], Fe::ONE, &ua, a);
                axpy(mo, field, &sa, field.neg(Fe::ONE), &ub, b)
            }
        };
        let (mut rem, _) = reduce_full(mo, field, &basis, &index, v);
        if rem.is_empty() {
            continue;
        }
        make_monic(field, &mut rem);
        let new = basis.len();
        for (j, g) in basis.iter().enumerate() {
            if g[0].comp == rem[0].comp {
                let l = g[0].mono.lcm(&rem[0].mono);
                heap.push(Reverse((l.degree() + module.twists[rem[0].comp], 1, items.len(), 0)));
                items.push(Item::Pair(j, new));
            }
        }
        index.push(new, &rem);
        basis.push(rem);
    }
    // Minimalize, then tail-reduce.
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| {
            !basis.iter().enumerate().any(|(j, g)| {
                j != i
                    && g[0].comp == basis[i][0].comp
                    && g[0].mono.divides(&basis[i][0].mono)
                    && (g[0].mono != basis[i][0].mono || j < i)
            })
        })
        .collect();
    let minimal: Vec<Vector> = basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, v) in minimal.iter().enumerate() {
        let others: Vec<Vector> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let idx = LeadIndex::new(&others);
        let (head, tail) = v.split_at(1);
        let (rem, _) = reduce_full(mo, field, &others, &idx, tail.to_vec());
        let mut r = head.to_vec();
        r.extend(rem);
        reduced.push(r);
    }
    reduced.sort_by(|a, b| cmp_terms(mo, &b[0], &a[0]));
    Ok(ModuleGb {
        ring: ring.clone(),
        module: module.clone(),
        order: order.clone(),
        elements: reduced.iter().map(|v| to_element(ring, v)).collect(),
    })
}

/// One Schreyer step: `elems` form a Gröbner basis (monic) of a submodule of a
/// free module ordered by `ambient_weights`. Returns the syzygies as vectors in
/// the free module with basis `elems`, ordered by the induced weights, with
/// unit lead coefficients. Pairs are taken only where the lead quotient is a
/// minimal generator of its colon ideal; generators of one colon ideal are
/// emitted in ascending lex order.
fn schreyer_step(ring: &Ring, elems: &[Vector]) -> Vec<Vector> {
    let order = ring.order();
    let field = ring.field();
    let index = LeadIndex::new(elems);
    let weights: Vec<Monomial> = elems.iter().map(|v| v[0].key.clone()).collect();
    let mut out = Vec::new();
    for b in 0..elems.len() {
        let mb = &elems[b][0].mono;
        let comp = elems[b][0].comp;
        // Minimal generators of (m_a : a < b, same component) : m_b, with a witness a.
        let mut gens: Vec<(Monomial, usize)> = Vec::new();
        for a in 0..b {
            if elems[a][0].comp != comp {
                continue;
            }
            let q = mb.quotient_of(&elems[a][0].mono.lcm(mb)).unwrap();
            if gens.iter().any(|(g, _)| g.divides(&q)) {
                continue;
            }
            gens.retain(|(g, _)| !q.divides(g));
            gens.push((q, a));
        }
        gens.sort_by(|x, y| x.0.exponents().cmp(y.0.exponents()));
        for (q, a) in gens {
            let ma = &elems[a][0].mono;
            let l = q.mul(mb);
            let p = ma.quotient_of(&l).unwrap();
            let s = axpy(order, field, &[], Fe::ONE, &q, &elems[b]);
            let s = axpy(order, field, &s, field.neg(Fe::ONE), &p, &elems[a]);
            let (rem, quot) = reduce_full(order, field, elems, &index, s);
            debug_assert!(rem.is_empty(), "S-vector of a Gröbner basis must reduce to zero");
            let mut syz: Vec<(Monomial, usize, Fe)> = vec![(q, b, Fe::ONE), (p, a, field.neg(Fe::ONE))];
            syz.extend(quot.into_iter().map(|(u, i, c)| (u, i, field.neg(c))));
            let mut v: Vector = Vec::with_capacity(syz.len());
            let mut terms: Vector =
                syz.into_iter().map(|(m, i, c)| Term { key: m.mul(&weights[i]), mono: m, comp: i, coef: c }).collect();
            terms.sort_by(|x, y| cmp_terms(order, y, x));
            for t in terms {
                match v.last_mut() {
                    Some(last) if cmp_terms(order, last, &t) == Ordering::Equal => {
                        last.coef = field.add(last.coef, t.coef);
                        if last.coef.is_zero() {
                            v.pop();
                        }
                    }
                    _ => v.push(t),
                }
            }
            debug_assert!(v[0].comp == b && v[0].coef == Fe::ONE);
            out.push(v);
        }
    }
    out
}

/// Generators of the syzygy module of a Gröbner basis (Schreyer's theorem),
/// as elements of the free module with one basis element per basis element of `gb`.
pub fn syzygies(gb: &ModuleGb) -> Vec<ModuleElement> {
    let elems = gb.vectors();
    if elems.is_empty() {
        return Vec::new();
    }
    schreyer_step(&gb.ring, &elems).iter().map(|v| to_element(&gb.ring, v)).collect()
}

/// A sparse matrix of polynomials stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    nrows: usize,
    cols: Vec<BTreeMap<usize, Polynomial>>,
}

impl PolyMatrix {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Polynomial> {
        self.cols[col].get(&row)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.cols[col].iter().map(|(r, p)| (*r, p))
    }

    fn mul_is_zero(&self, other: &PolyMatrix) -> bool {
        other.cols.iter().all(|col| {
            let mut acc: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (k, q) in col {
                for (r, p) in &self.cols[*k] {
                    let prod = p.mul(q);
                    let e = acc.entry(*r).or_insert_with(|| Polynomial::zero(p.ring()));
                    *e = e.add(&prod);
                }
            }
            acc.values().all(|p| p.is_zero())
        })
    }
}

/// A graded free resolution F_0 ← F_1 ← … of S/J; `differentials[i]` is d_{i+1}: F_{i+1} → F_i.
#[derive(Clone, Debug)]
pub struct Resolution {
    ring: Arc<Ring>,
    modules: Vec<FreeModule>,
    differentials: Vec<PolyMatrix>,
    minimal: bool,
}

impl Resolution {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn modules(&self) -> &[FreeModule] {
        &self.modules
    }

    pub fn differentials(&self) -> &[PolyMatrix] {
        &self.differentials
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// Checks d_i ∘ d_{i+1} = 0 for every i.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[0].mul_is_zero(&w[1]))
    }

    /// Number of basis elements of degree j in F_i, keyed by (i, j).
    pub fn graded_ranks(&self) -> BTreeMap<(usize, u32), u64> {
        let mut out = BTreeMap::new();
        for (i, f) in self.modules.iter().enumerate() {
            for &j in &f.twists {
                *out.entry((i, j)).or_insert(0) += 1;
            }
        }
        out
    }

    /// True when no differential has a nonzero constant entry.
    pub fn has_no_units(&self) -> bool {
        self.differentials.iter().all(|d| d.cols.iter().all(|c| c.values().all(|p| !p.is_constant())))
    }
}

/// Graded Betti numbers β_{i,j}.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, u32), u64>,
}

impl BettiTable {
    pub fn from_entries(entries: BTreeMap<(usize, u32), u64>) -> Self {
        BettiTable { entries: entries.into_iter().filter(|e| e.1 > 0).collect() }
    }

    pub fn get(&self, i: usize, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, u32), u64> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// max{j - i : β_{i,j} ≠ 0}
    pub fn regularity(&self) -> Option<i64> {
        self.entries.keys().map(|&(i, j)| j as i64 - i as i64).max()
    }

    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    /// Betti table of J from that of S/J: drop β_{0,0} and shift.
    pub fn of_ideal(&self) -> BettiTable {
        BettiTable {
            entries: self.entries.iter().filter(|e| e.0 .0 > 0).map(|(&(i, j), &b)| ((i - 1, j), b)).collect(),
        }
    }
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for ((i, j), b) in &self.entries {
            map.serialize_entry(&format!("{i},{j}"), b)?;
        }
        map.end()
    }
}

/// The usual grid: columns i, rows j - i, dots for zeros.
impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(pd) = self.projective_dimension() else {
            return writeln!(f, "(zero)");
        };
        let rows: Vec<i64> = self.entries.keys().map(|&(i, j)| j as i64 - i as i64).collect();
        let (lo, hi) = (*rows.iter().min().unwrap(), *rows.iter().max().unwrap());
        let cell = |i: usize, r: i64| -> String {
            let j = r + i as i64;
            if j < 0 {
                return ".".into();
            }
            match self.get(i, j as u32) {
                0 => ".".into(),
                b => b.to_string(),
            }
        };
        let totals: Vec<String> =
            (0..=pd).map(|i| self.entries.iter().filter(|e| e.0 .0 == i).map(|e| e.1).sum::<u64>().to_string()).collect();
        let width = totals
            .iter()
            .map(|s| s.len())
            .chain((0..=pd).map(|i| i.to_string().len()))
            .max()
            .unwrap_or(1);
        let label = format!("{hi}").len().max(format!("{lo}").len()).max(5) + 1;
        write!(f, "{:>label$}", "")?;
        for i in 0..=pd {
            write!(f, " {i:>width$}")?;
        }
        writeln!(f)?;
        write!(f, "{:>label$}", "total:")?;
        for t in &totals {
            write!(f, " {t:>width$}")?;
        }
        writeln!(f)?;
        for r in lo..=hi {
            write!(f, "{:>label$}", format!("{r}:"))?;
            for i in 0..=pd {
                write!(f, " {:>width$}", cell(i, r))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Schreyer frame of S/J: the levels of vectors and the degrees of their basis elements.
struct Frame {
    ring: Arc<Ring>,
    /// levels[k] holds the basis elements of F_{k+1} as vectors in F_k.
    levels: Vec<Vec<Vector>>,
    degrees: Vec<Vec<u32>>,
}

fn build_frame(ideal: &Ideal, config: &GbConfig) -> Result<Frame> {
    let ring = ideal.ring().clone();
    let gb = ideal.groebner_with(config)?;
    let mut first: Vec<Vector> = gb
        .elements()
        .iter()
        .map(|g| {
            g.terms().iter().map(|(m, c)| Term { key: m.clone(), mono: m.clone(), comp: 0, coef: *c }).collect()
        })
        .collect();
    first.sort_by(|a, b| a[0].mono.exponents().cmp(b[0].mono.exponents()));
    let mut degrees = vec![vec![0u32]];
    let mut levels = Vec::new();
    if first.is_empty() {
        return Ok(Frame { ring, levels, degrees });
    }
    degrees.push(first.iter().map(|v| v[0].mono.degree()).collect());
    levels.push(first);
    while levels.len() <= ring.nvars() {
        let next = schreyer_step(&ring, levels.last().unwrap());
        if next.is_empty() {
            break;
        }
        let prev = degrees.last().unwrap();
        let degs: Vec<u32> = next.iter().map(|v| v[0].mono.degree() + prev[v[0].comp]).collect();
        if degs.iter().any(|&d| d > config.degree_ceiling) {
            return Err(Error::resource(format!("resolution exceeded the degree ceiling {}", config.degree_ceiling)));
        }
        degrees.push(degs);
        levels.push(next);
    }
    Ok(Frame { ring, levels, degrees })
}

impl Frame {
    fn into_resolution(self) -> Resolution {
        let ring = self.ring;
        let modules: Vec<FreeModule> = self.degrees.iter().map(|d| FreeModule::new(d.clone())).collect();
        let differentials = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, level)| PolyMatrix {
                nrows: modules[k].rank(),
                cols: level.iter().map(|v| to_element(&ring, v).entries.into_iter().collect()).collect(),
            })
            .collect();
        Resolution { ring, modules, differentials, minimal: false }
    }

    /// β_{i,j} = r_{i,j} - rank(d_i ⊗ k)_j - rank(d_{i+1} ⊗ k)_j.
    fn betti(&self) -> BettiTable {
        let field = self.ring.field();
        // rank of the constant part of d_{k+1} in each degree
        let mut const_rank: Vec<BTreeMap<u32, usize>> = Vec::with_capacity(self.levels.len());
        for (k, level) in self.levels.iter().enumerate() {
            let row_deg = &self.degrees[k];
            let col_deg = &self.degrees[k + 1];
            let mut by_degree: BTreeMap<u32, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
            for (c, &d) in col_deg.iter().enumerate() {
                by_degree.entry(d).or_default().1.push(c);
            }
            for (r, &d) in row_deg.iter().enumerate() {
                if let Some(e) = by_degree.get_mut(&d) {
                    e.0.push(r);
                }
            }
            let mut ranks = BTreeMap::new();
            for (d, (rows, cols)) in by_degree {
                if rows.is_empty() {
                    continue;
                }
                let row_pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
                let matrix: Vec<Vec<Fe>> = cols
                    .iter()
                    .map(|&c| {
                        let mut line = vec![Fe::ZERO; rows.len()];
                        for t in level[c].iter().filter(|t| t.mono.is_one()) {
                            line[row_pos[&t.comp]] = t.coef;
                        }
                        line
                    })
                    .collect();
                let rk = linalg::rank(field, matrix);
                if rk > 0 {
                    ranks.insert(d, rk);
                }
            }
            const_rank.push(ranks);
        }
        let mut entries = BTreeMap::new();
        for (i, degs) in self.degrees.iter().enumerate() {
            let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
            for &d in degs {
                *counts.entry(d).or_insert(0) += 1;
            }
            for (j, r) in counts {
                let below = if i > 0 { const_rank[i - 1].get(&j).copied().unwrap_or(0) } else { 0 };
                let above = const_rank.get(i).and_then(|m| m.get(&j).copied()).unwrap_or(0);
                let b = r - below as u64 - above as u64;
                if b > 0 {
                    entries.insert((i, j), b);
                }
            }
        }
        BettiTable { entries }
    }
}

/// A (generally non-minimal) Schreyer resolution of S/J.
pub fn schreyer_resolution(ideal: &Ideal) -> Result<Resolution> {
    schreyer_resolution_with(ideal, &GbConfig::default())
}

pub fn schreyer_resolution_with(ideal: &Ideal, config: &GbConfig) -> Result<Resolution> {
    Ok(build_frame(ideal, config)?.into_resolution())
}

/// Graded Betti numbers of S/J.
pub fn betti_table(ideal: &Ideal) -> Result<BettiTable> {
    betti_table_with(ideal, &GbConfig::default())
}

pub fn betti_table_with(ideal: &Ideal, config: &GbConfig) -> Result<BettiTable> {
    Ok(build_frame(ideal, config)?.betti())
}

/// Minimal graded free resolution of S/J, obtained from the Schreyer resolution
/// by cancelling unit entries, together with its Betti table.
pub fn minimal_free_resolution(ideal: &Ideal) -> Result<(Resolution, BettiTable)> {
    minimal_free_resolution_with(ideal, &GbConfig::default())
}

pub fn minimal_free_resolution_with(ideal: &Ideal, config: &GbConfig) -> Result<(Resolution, BettiTable)> {
    let res = minimize(schreyer_resolution_with(ideal, config)?);
    let mut entries = BTreeMap::new();
    for (k, v) in res.graded_ranks() {
        entries.insert(k, v);
    }
    let betti = BettiTable::from_entries(entries);
    Ok((res, betti))
}

fn minimize(res: Resolution) -> Resolution {
    let Resolution { ring, modules, differentials, .. } = res;
    let field = ring.field().clone();
    let mut alive: Vec<Vec<bool>> = modules.iter().map(|m| vec![true; m.rank()]).collect();
    let mut ds: Vec<Vec<BTreeMap<usize, Polynomial>>> = differentials.into_iter().map(|d| d.cols).collect();
    loop {
        // d index k maps F_{k+1} -> F_k
        let found = ds.iter().enumerate().find_map(|(k, d)| {
            d.iter().enumerate().find_map(|(c, col)| {
                if !alive[k + 1][c] {
                    return None;
                }
                col.iter().find(|(_, p)| p.is_constant()).map(|(r, p)| (k, *r, c, p.lead_coeff().unwrap()))
            })
        });
        let Some((k, r, c, a)) = found else { break };
        let inv = field.inv_nonzero(a);
        let pivot_col = ds[k][c].clone();
        for (y, col) in ds[k].iter_mut().enumerate() {
            if y == c {
                continue;
            }
            let Some(ry) = col.get(&r).cloned() else { continue };
            let factor = ry.scale(inv);
            for (x, p) in &pivot_col {
                if *x == r {
                    continue;
                }
                let e = col.entry(*x).or_insert_with(|| Polynomial::zero(&ring));
                *e = e.sub(&p.mul(&factor));
                if e.is_zero() {
                    col.remove(x);
                }
            }
            col.remove(&r);
        }
        ds[k][c].clear();
        if k > 0 {
            ds[k - 1][r].clear();
        }
        if k + 1 < ds.len() {
            for col in ds[k + 1].iter_mut() {
                col.remove(&c);
            }
        }
        alive[k + 1][c] = false;
        alive[k][r] = false;
    }
    // Compact.
    let remap: Vec<Vec<Option<usize>>> = alive
        .iter()
        .map(|a| {
            let mut next = 0;
            a.iter()
                .map(|&x| {
                    x.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let new_modules: Vec<FreeModule> = modules
        .iter()
        .zip(&alive)
        .map(|(m, a)| FreeModule::new(m.twists.iter().zip(a).filter(|(_, &x)| x).map(|(&t, _)| t).collect()))
        .collect();
    let mut new_diffs: Vec<PolyMatrix> = ds
        .into_iter()
        .enumerate()
        .map(|(k, cols)| PolyMatrix {
            nrows: new_modules[k].rank(),
            cols: cols
                .into_iter()
                .enumerate()
                .filter(|(c, _)| alive[k + 1][*c])
                .map(|(_, col)| col.into_iter().map(|(r, p)| (remap[k][r].unwrap(), p)).collect())
                .collect(),
        })
        .collect();
    let mut new_modules = new_modules;
    while new_modules.len() > 1 && new_modules.last().unwrap().rank() == 0 {
        new_modules.pop();
        new_diffs.pop();
    }
    Resolution { ring, modules: new_modules, differentials: new_diffs, minimal: true }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularityOf {
    Ideal,
    Quotient,
}

/// Castelnuovo–Mumford regularity of J or of S/J. The zero ideal has
/// regularity 1 as an ideal (the convention for the whole projective space)
/// and 0 as a quotient.
pub fn regularity(ideal: &Ideal, of: RegularityOf) -> Result<i64> {
    regularity_with(ideal, of, &GbConfig::default())
}

pub fn regularity_with(ideal: &Ideal, of: RegularityOf, config: &GbConfig) -> Result<i64> {
    if ideal.is_zero() {
        return Ok(match of {
            RegularityOf::Ideal => 1,
            RegularityOf::Quotient => 0,
        });
    }
    let betti = betti_table_with(ideal, config)?;
    match (betti.regularity(), of) {
        (None, RegularityOf::Ideal) => Ok(0),
        (None, RegularityOf::Quotient) => Err(Error::usage("the unit ideal has a zero quotient")),
        (Some(r), RegularityOf::Quotient) => Ok(r),
        (Some(r), RegularityOf::Ideal) => Ok(r + 1),
    }
}
