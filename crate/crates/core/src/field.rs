//! Finite fields GF(p) and GF(p^k).
//!
//! Elements are packed into a single `u64`: an element of GF(p^k) is the
//! residue class of a polynomial `c_0 + c_1 X + ... + c_{k-1} X^{k-1}` modulo
//! the field's minimal polynomial, encoded as the integer `sum c_i p^i`.
//! The prime subfield is therefore the range `0..p` in every extension,
//! so base change from GF(p) to GF(p^k) leaves encodings untouched.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::unipoly::UniPoly;

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: u32 = 8;

/// Fields with at most this many elements get discrete-log tables.
const LOG_TABLE_LIMIT: u64 = 1 << 22;

/// A raw field element; only meaningful together with the [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer encoding.
    #[inline]
    pub fn raw(self) -> u64 {
        self.0
    }
}

/// Characteristic, extension degree and defining polynomial of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    /// Monic irreducible polynomial of degree `k`, coefficients from the
    /// constant term up. `None` when `k == 1`.
    pub minimal_poly: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Self {
        FieldSpec { p, k: 1, minimal_poly: None }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.k)
        }
    }
}

struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// Arithmetic context for GF(p^k).
pub struct Field {
    spec: FieldSpec,
    q: u64,
    /// Minimal polynomial coefficients (monic, length k + 1); empty for k = 1.
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_characteristic(p: u64) -> Result<()> {
    if !(2..(1u64 << 31)).contains(&p) {
        return Err(Error::usage(format!("characteristic {p} outside 2..2^31")));
    }
    if !is_prime(p) {
        return Err(Error::usage(format!("characteristic {p} is not prime")));
    }
    Ok(())
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Arc<Field>> {
        check_characteristic(p)?;
        Ok(Arc::new(Field { spec: FieldSpec::prime(p), q: p, modulus: Vec::new(), tables: None }))
    }

    /// GF(p^k) defined by the first monic irreducible polynomial of degree `k`
    /// in the enumeration order of [`find_irreducible`].
    pub fn extension(p: u64, k: u32) -> Result<Arc<Field>> {
        if k == 1 {
            return Field::prime(p);
        }
        check_characteristic(p)?;
        let base = Field::prime(p)?;
        let poly = find_irreducible(&base, k)?;
        Field::from_spec(&FieldSpec { p, k, minimal_poly: Some(poly) })
    }

    /// Builds a field from an explicit spec, verifying irreducibility.
    pub fn from_spec(spec: &FieldSpec) -> Result<Arc<Field>> {
        check_characteristic(spec.p)?;
        if spec.k == 0 || spec.k > MAX_EXTENSION_DEGREE {
            return Err(Error::usage(format!(
                "extension degree {} outside 1..={MAX_EXTENSION_DEGREE}",
                spec.k
            )));
        }
        if spec.k == 1 {
            if spec.minimal_poly.is_some() {
                return Err(Error::usage("prime field takes no minimal polynomial"));
            }
            return Field::prime(spec.p);
        }
        let q = spec
            .p
            .checked_pow(spec.k)
            .filter(|q| *q < (1u64 << 62))
            .ok_or_else(|| Error::usage(format!("field {spec} too large for packed elements")))?;
        let modulus = spec
            .minimal_poly
            .clone()
            .ok_or_else(|| Error::usage("extension field needs a minimal polynomial"))?;
        if modulus.len() != spec.k as usize + 1
            || modulus[spec.k as usize] != 1
            || modulus.iter().any(|&c| c >= spec.p)
        {
            return Err(Error::usage("minimal polynomial must be monic of degree k over GF(p)"));
        }
        let base = Field::prime(spec.p)?;
        let m = UniPoly::from_coeffs(&base, modulus.iter().map(|&c| Fe(c)).collect());
        if !m.is_irreducible(&base) {
            return Err(Error::usage(format!("minimal polynomial of {spec} is reducible")));
        }
        let mut field = Field { spec: spec.clone(), q, modulus, tables: None };
        if q <= LOG_TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(Arc::new(field))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.spec.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.spec.k
    }

    /// Number of elements, p^k.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.spec.k == 1
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The class of `X`, a generator of the extension over GF(p).
    pub fn generator(&self) -> Fe {
        if self.spec.k == 1 {
            Fe::ONE
        } else {
            Fe(self.spec.p)
        }
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_i64(&self, n: i64) -> Fe {
        let p = self.spec.p as i64;
        Fe(n.rem_euclid(p) as u64)
    }

    /// Element with the given packed encoding, if it is in range.
    pub fn element(&self, raw: u64) -> Option<Fe> {
        (raw < self.q).then_some(Fe(raw))
    }

    /// Coefficients of `a` over the power basis `1, X, ..., X^{k-1}`.
    pub fn digits(&self, a: Fe) -> Vec<u64> {
        let p = self.spec.p;
        let mut v = a.0;
        (0..self.spec.k)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Fe {
        let p = self.spec.p;
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * p + d % p;
        }
        Fe(v)
    }

    /// Iterates every element in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.spec.p;
        if self.spec.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.spec.k {
            let s = x % p + y % p;
            out += (if s >= p { s - p } else { s }) * scale;
            x /= p;
            y /= p;
            scale = scale.wrapping_mul(p);
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.spec.p;
        if self.spec.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.spec.k {
            let d = x % p;
            out += (if d == 0 { 0 } else { p - d }) * scale;
            x /= p;
            scale = scale.wrapping_mul(p);
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.spec.k == 1 {
            let p = self.spec.p;
            return Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.spec.k == 1 {
            return Fe(a.0 * b.0 % self.spec.p);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.q as usize - 1;
            let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return Fe(t.exp[if i >= n { i - n } else { i }] as u64);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.spec.p;
        let k = self.spec.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let sub = c * self.modulus[j] % p;
                let slot = &mut prod[i - k + j];
                *slot = (*slot + p - sub) % p;
            }
        }
        self.from_digits(&prod[..k])
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::Arithmetic("zero has no inverse".into()));
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element already known to be nonzero.
    #[inline]
    pub fn inv_nonzero(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        if self.spec.k == 1 {
            let p = self.spec.p as i64;
            let (mut r0, mut r1) = (p, a.0 as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let q = r0 / r1;
                (r0, r1) = (r1, r0 - q * r1);
                (s0, s1) = (s1, s0 - q * s1);
            }
            return Fe(s0.rem_euclid(p) as u64);
        }
        if let Some(t) = &self.tables {
            let n = self.q as usize - 1;
            let l = t.log[a.0 as usize] as usize;
            return Fe(t.exp[if l == 0 { 0 } else { n - l }] as u64);
        }
        self.pow(a, self.q - 2)
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The Frobenius map a -> a^p.
    pub fn frobenius(&self, a: Fe) -> Fe {
        if self.spec.k == 1 || a.is_zero() {
            return a;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let l = t.log[a.0 as usize] as u64;
            return Fe(t.exp[((l * self.spec.p) % n) as usize] as u64);
        }
        self.pow(a, self.spec.p)
    }

    fn build_tables(&self) -> LogTables {
        let n = self.q - 1;
        let factors = prime_factors(n);
        let g = (2..self.q)
            .map(Fe)
            .find(|&g| factors.iter().all(|&r| self.mul_pow_slow(g, n / r) != Fe::ONE))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = Fe::ONE;
        for i in 0..n as usize {
            exp[i] = x.0 as u32;
            log[x.0 as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        LogTables { log, exp }
    }

    fn mul_pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Formats an element as an expression in the generator name `gen`.
    pub fn format(&self, a: Fe, gen: &str) -> String {
        if self.spec.k == 1 {
            return a.0.to_string();
        }
        let digits = self.digits(a);
        let mut parts = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => gen.to_string(),
                _ => format!("{gen}^{i}"),
            };
            parts.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Smallest monic irreducible polynomial of degree `k` over GF(p), scanning
/// candidates `X^k + c` order by the packed value of the lower coefficients.
pub fn find_irreducible(base: &Field, k: u32) -> Result<Vec<u64>> {
    let p = base.characteristic();
    let limit = p.checked_pow(k).unwrap_or(u64::MAX);
    for code in 0..limit {
        let mut coeffs: Vec<u64> = Vec::with_capacity(k as usize + 1);
        let mut v = code;
        for _ in 0..k {
            coeffs.push(v % p);
            v /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        let poly = UniPoly::from_coeffs(base, coeffs.iter().map(|&c| Fe(c)).collect());
        if poly.is_irreducible(base) {
            return Ok(coeffs);
        }
    }
    Err(Error::usage(format!("no irreducible polynomial of degree {k} over GF({p})")))
}

/// A field element bound to its field, for checked standalone arithmetic.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<Field>,
    value: Fe,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec == other.field.spec && self.value == other.value
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: &Arc<Field>, value: Fe) -> Self {
        FieldElement { field: field.clone(), value }
    }

    pub fn from_i64(field: &Arc<Field>, n: i64) -> Self {
        FieldElement { field: field.clone(), value: field.from_i64(n) }
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Inverse of the first operand; the second is only checked for a matching field.
    Inv,
}

pub fn field_arithmetic(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    if a.field.spec != b.field.spec {
        return Err(Error::usage(format!(
            "operands live in different fields {} and {}",
            a.field.spec, b.field.spec
        )));
    }
    let f = &a.field;
    let value = match op {
        FieldOp::Add => f.add(a.value, b.value),
        FieldOp::Sub => f.sub(a.value, b.value),
        FieldOp::Mul => f.mul(a.value, b.value),
        FieldOp::Div => f.div(a.value, b.value)?,
        FieldOp::Inv => f.inv(a.value)?,
    };
    Ok(FieldElement { field: f.clone(), value })
}
