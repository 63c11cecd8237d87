//! Dense univariate polynomials over a [`Field`].

use crate::field::{Fe, Field};

/// Coefficients from the constant term up, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Fe>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(_field: &Field, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        UniPoly { coeffs: vec![Fe::ZERO, Fe::ONE] }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Self, f: &Field) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_default();
                let b = other.coeffs.get(i).copied().unwrap_or_default();
                f.add(a, b)
            })
            .collect();
        UniPoly { coeffs }.trim()
    }

    pub fn sub(&self, other: &Self, f: &Field) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_default();
                let b = other.coeffs.get(i).copied().unwrap_or_default();
                f.sub(a, b)
            })
            .collect();
        UniPoly { coeffs }.trim()
    }

    pub fn mul(&self, other: &Self, f: &Field) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly { coeffs: out }.trim()
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self, f: &Field) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv_nonzero(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[i - dd] = factor;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(factor, d));
            }
        }
        (UniPoly { coeffs: quot }.trim(), UniPoly { coeffs: rem }.trim())
    }

    pub fn rem(&self, divisor: &Self, f: &Field) -> Self {
        self.divrem(divisor, f).1
    }

    pub fn monic(&self, f: &Field) -> Self {
        match self.coeffs.last() {
            None => UniPoly::zero(),
            Some(&lead) => {
                let inv = f.inv_nonzero(lead);
                UniPoly { coeffs: self.coeffs.iter().map(|&c| f.mul(c, inv)).collect() }
            }
        }
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self, f: &Field) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, mut e: u64, modulus: &Self, f: &Field) -> Self {
        let mut base = self.rem(modulus, f);
        let mut acc = UniPoly { coeffs: vec![Fe::ONE] }.rem(modulus, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(modulus, f);
            }
            base = base.mul(&base, f).rem(modulus, f);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or test: a polynomial of degree k is irreducible over GF(q) iff it
    /// shares no factor with `X^{q^i} - X` for every `i <= k/2`.
    pub fn is_irreducible(&self, f: &Field) -> bool {
        let Some(k) = self.degree() else { return false };
        if k == 0 {
            return false;
        }
        let q = f.order();
        let x = UniPoly::x();
        let mut h = x.rem(self, f);
        for _ in 0..k / 2 {
            h = h.powmod(q, self, f);
            let g = self.gcd(&h.sub(&x, f), f);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }
}
