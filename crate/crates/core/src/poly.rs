//! Polynomial rings and sparse polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::monomial::{Exponent, Monomial, MonomialOrder};

/// Variables, coefficient field and monomial order of a polynomial ring.
#[derive(Debug)]
pub struct Ring {
    vars: Vec<String>,
    field: Arc<Field>,
    order: MonomialOrder,
    /// Name used when printing elements of an extension field.
    generator_name: String,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.field == other.field && self.order == other.order
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn new(vars: Vec<String>, field: Arc<Field>, order: MonomialOrder) -> Result<Arc<Ring>> {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(Error::usage(format!("duplicate variable name {v}")));
            }
        }
        if let Some(p) = order.precedence() {
            if p.len() != vars.len() {
                return Err(Error::usage("variable precedence length differs from variable count"));
            }
        }
        Ok(Arc::new(Ring { vars, field, order, generator_name: "a".into() }))
    }

    /// Ring over GF(p) with grevlex order and the given variable names.
    pub fn simple(p: u64, vars: &[&str]) -> Result<Arc<Ring>> {
        Ring::new(vars.iter().map(|s| s.to_string()).collect(), Field::prime(p)?, MonomialOrder::grevlex())
    }

    /// Ring over GF(p) in variables `x0, ..., x{n-1}`.
    pub fn indexed(p: u64, n: usize) -> Result<Arc<Ring>> {
        Ring::new((0..n).map(|i| format!("x{i}")).collect(), Field::prime(p)?, MonomialOrder::grevlex())
    }

    pub fn with_generator_name(&self, name: &str) -> Arc<Ring> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            field: self.field.clone(),
            order: self.order.clone(),
            generator_name: name.to_string(),
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generator_name(&self) -> &str {
        &self.generator_name
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            field: self.field.clone(),
            order,
            generator_name: self.generator_name.clone(),
        })
    }

    /// Same variables and order over another field (normally an extension).
    pub fn with_field(&self, field: Arc<Field>) -> Arc<Ring> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            field,
            order: self.order.clone(),
            generator_name: self.generator_name.clone(),
        })
    }

    /// Same field and order kind with variables renamed/permuted.
    pub fn with_vars(&self, vars: Vec<String>, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring { vars, field: self.field.clone(), order, generator_name: self.generator_name.clone() })
    }

    pub fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub(crate) fn check_same(a: &Arc<Ring>, b: &Arc<Ring>) -> Result<()> {
        if Ring::same(a, b) {
            Ok(())
        } else {
            Err(Error::usage("operands belong to different rings"))
        }
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        parts.join("*")
    }
}

/// A polynomial: terms sorted strictly descending in the ring's order, no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Fe)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    /// Multiplies the first operand by the constant second operand.
    Scale,
}

/// Ring-checked polynomial arithmetic.
pub fn poly_arithmetic(f: &Polynomial, g: &Polynomial, op: PolyOp) -> Result<Polynomial> {
    Ring::check_same(&f.ring, &g.ring)?;
    Ok(match op {
        PolyOp::Add => f.add(g),
        PolyOp::Sub => f.sub(g),
        PolyOp::Mul => f.mul(g),
        PolyOp::Scale => {
            if g.terms.iter().any(|(m, _)| !m.is_one()) {
                return Err(Error::usage("scale factor must be a constant"));
            }
            f.scale(g.terms.first().map_or(Fe::ZERO, |t| t.1))
        }
    })
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Fe) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial::one(ring.nvars()), c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Fe::ONE)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::var(ring.nvars(), i), Fe::ONE)] }
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Fe) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds a canonical polynomial from arbitrary terms (combines duplicates, drops zeros).
    pub fn from_terms(ring: &Arc<Ring>, mut terms: Vec<(Monomial, Fe)>) -> Self {
        let order = ring.order();
        let field = ring.field();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Fe)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|t| t.1.is_zero()) {
            out.pop();
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    /// Builds from integer-coefficient exponent lists, e.g. `[(1, &[2, 0]), (-1, &[0, 2])]`.
    pub fn from_int_terms(ring: &Arc<Ring>, terms: &[(i64, &[Exponent])]) -> Self {
        let f = ring.field();
        Self::from_terms(
            ring,
            terms.iter().map(|(c, e)| (Monomial::from_exponents(e), f.from_i64(*c))).collect(),
        )
    }

    /// Wraps terms already sorted descending with no zeros or duplicates.
    pub(crate) fn from_sorted_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, Fe)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Fe)] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<(Monomial, Fe)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> Option<Fe> {
        self.terms.first().map(|t| t.1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    /// The common total degree of all terms, if there is one (`None` for zero).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|t| t.0.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coeff(&self, m: &Monomial) -> Fe {
        let order = self.ring.order();
        self.terms
            .binary_search_by(|t| order.cmp(m, &t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(Fe::ZERO)
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let field = self.ring.field();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let fix = |c: Fe| if negate_other { field.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), fix(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(a[i].1, fix(b[j].1));
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| (t.0.clone(), fix(t.1))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert!(Ring::same(&self.ring, &other.ring));
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        debug_assert!(Ring::same(&self.ring, &other.ring));
        self.merge(other, true)
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect(),
        }
    }

    pub fn scale(&self, c: Fe) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let f = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    /// Multiplies by the term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: Fe) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let f = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), f.mul(*a, c))).collect(),
        }
    }

    /// `self - c * m * g`, in one merge pass.
    pub fn sub_mul_term(&self, c: Fe, m: &Monomial, g: &Polynomial) -> Polynomial {
        let field = self.ring.field();
        let order = self.ring.order();
        let a = &self.terms;
        let b = &g.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let next_b = |j: usize| (b[j].0.mul(m), field.neg(field.mul(c, b[j].1)));
        let mut pending = if b.is_empty() { None } else { Some(next_b(0)) };
        while i < a.len() {
            let Some((bm, bc)) = pending.take() else { break };
            match order.cmp(&a[i].0, &bm) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                    pending = Some((bm, bc));
                }
                Ordering::Less => {
                    out.push((bm, bc));
                    j += 1;
                    pending = (j < b.len()).then(|| next_b(j));
                }
                Ordering::Equal => {
                    let s = field.add(a[i].1, bc);
                    if !s.is_zero() {
                        out.push((bm, s));
                    }
                    i += 1;
                    j += 1;
                    pending = (j < b.len()).then(|| next_b(j));
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        if let Some(t) = pending {
            out.push(t);
            j += 1;
            while j < b.len() {
                out.push(next_b(j));
                j += 1;
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert!(Ring::same(&self.ring, &other.ring));
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Polynomial::zero(&self.ring);
        let field = self.ring.field();
        for (m, c) in &small.terms {
            acc = acc.sub_mul_term(field.neg(*c), m, big);
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so the lead coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) if c == Fe::ONE => self.clone(),
            Some(c) => self.scale(self.ring.field().inv_nonzero(c)),
        }
    }

    /// Moves the polynomial into `ring`, which must have the same variables
    /// and a field containing this one's; re-sorts if the order differs.
    pub fn base_change(&self, ring: &Arc<Ring>) -> Polynomial {
        debug_assert_eq!(ring.nvars(), self.ring.nvars());
        if ring.order() == self.ring.order() {
            Polynomial { ring: ring.clone(), terms: self.terms.clone() }
        } else {
            Polynomial::from_terms(ring, self.terms.clone())
        }
    }

    /// Renames variables: `x_i` becomes `y_{perm[i]}` in `ring`.
    pub fn permute_vars(&self, ring: &Arc<Ring>, perm: &[usize]) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().map(|(m, c)| (m.permuted(perm), *c)).collect())
    }

    /// Substitutes `images[i]` for `x_i`; the result lives in the images' ring.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target)]; images.len()];
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, *c);
            for (i, &e) in m.exponents().iter().enumerate() {
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[i]);
                    cache.push(next);
                }
                if e > 0 {
                    t = t.mul(&cache[e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Exact division by `divisor`; `None` if it does not divide.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let lead = divisor.lead_monomial()?;
        let field = self.ring.field();
        let inv = field.inv_nonzero(divisor.lead_coeff()?);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = lead.quotient_of(&m)?;
            let qc = field.mul(c, inv);
            rem = rem.sub_mul_term(qc, &q, divisor);
            quot.push((q, qc));
        }
        Some(Polynomial::from_sorted_terms(&self.ring, quot))
    }

    /// Drops the highest power of `x_var` dividing every term.
    pub fn strip_variable(&self, var: usize) -> Polynomial {
        let Some(k) = self.terms.iter().map(|t| t.0.exponent(var)).min() else {
            return self.clone();
        };
        if k == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m.set_exponent(var, m.exponent(var) - k);
                (m, *c)
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field();
        let p = field.characteristic();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = if c.raw() < p {
                if c.raw() > p / 2 {
                    (true, (p - c.raw()).to_string())
                } else {
                    (false, c.raw().to_string())
                }
            } else {
                (false, format!("({})", field.format(*c, self.ring.generator_name())))
            };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", self.ring.format_monomial(m))?;
            } else {
                write!(f, "{mag}*{}", self.ring.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring2() -> Arc<Ring> {
        Ring::simple(7, &["x", "y"]).unwrap()
    }

    #[test]
    fn square_of_sum() {
        let r = ring2();
        let s = Polynomial::var(&r, 0).add(&Polynomial::var(&r, 1));
        let sq = s.mul(&s);
        assert_eq!(sq, Polynomial::from_int_terms(&r, &[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])]));
        assert_eq!(sq.homogeneous_degree(), Some(2));
        assert_eq!(format!("{sq}"), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn additive_inverse_and_zero() {
        let r = ring2();
        let f = Polynomial::from_int_terms(&r, &[(3, &[1, 0]), (5, &[0, 1])]);
        assert!(f.add(&f.neg()).is_zero());
        assert!(f.mul(&Polynomial::zero(&r)).is_zero());
        assert_eq!(format!("{}", f), "3*x - 2*y");
    }

    #[test]
    fn ring_mismatch_is_usage_error() {
        let a = Polynomial::var(&ring2(), 0);
        let b = Polynomial::var(&Ring::simple(11, &["x", "y"]).unwrap(), 0);
        assert!(matches!(poly_arithmetic(&a, &b, PolyOp::Add), Err(Error::Usage(_))));
        assert!(poly_arithmetic(&a, &a, PolyOp::Mul).is_ok());
    }

    #[test]
    fn exact_division() {
        let r = ring2();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.add(&y).mul(&x.sub(&y));
        assert_eq!(f.div_exact(&x.add(&y)).unwrap(), x.sub(&y));
        assert!(f.div_exact(&x).is_none());
    }

    #[test]
    fn substitution() {
        let r = ring2();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.mul(&y);
        let g = f.substitute(&r, &[x.add(&y), x.sub(&y)]);
        assert_eq!(g, x.mul(&x).sub(&y.mul(&y)));
    }

    fn arb_poly(r: Arc<Ring>) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((0i64..7, 0u16..4, 0u16..4, 0u16..4), 0..6).prop_map(move |ts| {
            Polynomial::from_terms(
                &r,
                ts.into_iter()
                    .map(|(c, a, b, d)| (Monomial::from_exponents(&[a, b, d]), r.field().from_i64(c)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(
            (f, g, h) in {
                let r = Ring::simple(7, &["x", "y", "z"]).unwrap();
                (arb_poly(r.clone()), arb_poly(r.clone()), arb_poly(r))
            }
        ) {
            prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
            let t = f.mul(&g);
            prop_assert!(t.terms().iter().all(|x| !x.1.is_zero()));
            if let (Some(a), Some(b)) = (f.homogeneous_degree(), g.homogeneous_degree()) {
                prop_assert!(t.is_zero() || t.homogeneous_degree() == Some(a + b));
            }
        }
    }
}
