//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Exponent = u16;

/// A monomial `x_0^{e_0} ... x_{n-1}^{e_{n-1}}` with cached total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[Exponent; 8]>,
    degree: u32,
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, nvars), degree: 0 }
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        Monomial { degree: exps.iter().map(|&e| e as u32).sum(), exps: SmallVec::from_slice(exps) }
    }

    /// The variable `x_i` in a ring with `nvars` variables.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> Exponent {
        self.exps[i]
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = self.exps.clone();
        for (e, &o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_add(o)?;
        }
        Some(Monomial { exps, degree: self.degree + other.degree })
    }

    /// Product; exponent overflow aborts rather than wrapping.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other)
            .unwrap_or_else(|| panic!("exponent overflow multiplying {self:?} by {other:?}"))
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        self.checked_mul(other)
            .ok_or_else(|| Error::usage(format!("exponent overflow multiplying {self:?} by {other:?}")))
    }

    pub fn checked_pow(&self, k: u32) -> Option<Monomial> {
        let mut exps = self.exps.clone();
        for e in exps.iter_mut() {
            let v = (*e as u32).checked_mul(k)?;
            *e = Exponent::try_from(v).ok()?;
        }
        Some(Monomial { exps, degree: self.degree * k })
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Some(Monomial { exps, degree: other.degree - self.degree })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[Exponent; 8]> =
            self.exps.iter().zip(other.exps.iter()).map(|(&a, &b)| a.max(b)).collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[Exponent; 8]> =
            self.exps.iter().zip(other.exps.iter()).map(|(&a, &b)| a.min(b)).collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Index of the only variable present, if this is a pure power.
    pub fn pure_power_variable(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Monomial with variables permuted: exponent of `x_i` moves to slot `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut exps = SmallVec::from_elem(0, self.exps.len());
        for (i, &e) in self.exps.iter().enumerate() {
            exps[perm[i]] = e;
        }
        Monomial { exps, degree: self.degree }
    }

    /// Embeds into a ring with `extra` new variables placed in front.
    pub fn prepend_vars(&self, extra: usize) -> Monomial {
        let mut exps = SmallVec::from_elem(0, extra);
        exps.extend_from_slice(&self.exps);
        Monomial { exps, degree: self.degree }
    }

    /// Drops the first `count` variables, which must have exponent zero.
    pub fn drop_leading_vars(&self, count: usize) -> Option<Monomial> {
        if self.exps[..count].iter().any(|&e| e != 0) {
            return None;
        }
        Some(Monomial { exps: SmallVec::from_slice(&self.exps[count..]), degree: self.degree })
    }

    pub(crate) fn set_exponent(&mut self, i: usize, e: Exponent) {
        self.degree = self.degree - self.exps[i] as u32 + e as u32;
        self.exps[i] = e;
    }
}

/// All monomials of total degree `d` in `nvars` variables, in lex-descending order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0 as Exponent; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<Exponent>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left as Exponent;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as Exponent;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Grevlex,
    Lex,
    Grlex,
    /// Block order eliminating the first `n` variables (grevlex inside each block).
    Elimination(usize),
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::Grevlex => write!(f, "grevlex"),
            OrderKind::Lex => write!(f, "lex"),
            OrderKind::Grlex => write!(f, "grlex"),
            OrderKind::Elimination(n) => write!(f, "elim{n}"),
        }
    }
}

/// A monomial order: a kind plus a variable precedence (largest variable first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    /// `None` means `x_0 > x_1 > ...`.
    precedence: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder { kind, precedence: None }
    }

    pub fn grevlex() -> Self {
        Self::new(OrderKind::Grevlex)
    }

    /// Order with an explicit variable precedence; `precedence[0]` is the largest variable.
    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; precedence.len()];
        for &v in &precedence {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::usage("variable precedence must be a permutation"));
            }
        }
        let identity = precedence.iter().enumerate().all(|(i, &v)| i == v);
        Ok(MonomialOrder { kind, precedence: (!identity).then_some(precedence) })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> Option<&[usize]> {
        self.precedence.as_deref()
    }

    #[inline]
    fn var(&self, rank: usize) -> usize {
        match &self.precedence {
            None => rank,
            Some(p) => p[rank],
        }
    }

    /// Compares two monomials with the same number of variables.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        let n = a.nvars();
        match self.kind {
            OrderKind::Grevlex => a.degree.cmp(&b.degree).then_with(|| self.revlex(a, b, 0, n)),
            OrderKind::Grlex => a.degree.cmp(&b.degree).then_with(|| self.lex(a, b, 0, n)),
            OrderKind::Lex => self.lex(a, b, 0, n),
            OrderKind::Elimination(k) => {
                let block = |m: &Monomial| -> u32 { (0..k).map(|r| m.exps[self.var(r)] as u32).sum() };
                let (ba, bb) = (block(a), block(b));
                ba.cmp(&bb)
                    .then_with(|| self.revlex(a, b, 0, k))
                    .then_with(|| (a.degree - ba).cmp(&(b.degree - bb)))
                    .then_with(|| self.revlex(a, b, k, n))
            }
        }
    }

    #[inline]
    fn lex(&self, a: &Monomial, b: &Monomial, from: usize, to: usize) -> Ordering {
        for r in from..to {
            let v = self.var(r);
            match a.exps[v].cmp(&b.exps[v]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    #[inline]
    fn revlex(&self, a: &Monomial, b: &Monomial, from: usize, to: usize) -> Ordering {
        for r in (from..to).rev() {
            let v = self.var(r);
            match a.exps[v].cmp(&b.exps[v]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        Self::grevlex()
    }
}

/// Checked comparison that rejects monomials from rings of different sizes.
pub fn monomial_compare(order: &MonomialOrder, a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::usage(format!(
            "monomials have {} and {} variables",
            a.nvars(),
            b.nvars()
        )));
    }
    Ok(order.cmp(a, b))
}
