//! Hilbert functions and series of S/I read off from lead-term ideals.

use serde::Serialize;

use super::{Ideal, GroebnerBasis};
use crate::error::{Error, Result};
use crate::monomial::{monomials_of_degree, Monomial};

/// Values h(0), ..., h(d_max) of the Hilbert function of S/I.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertFunction {
    pub values: Vec<u64>,
}

impl HilbertFunction {
    pub fn computed_through(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, d: usize) -> Option<u64> {
        self.values.get(d).copied()
    }
}

/// Hilbert series of S/I as `numerator(t) / (1 - t)^nvars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub numerator: Vec<i64>,
    pub nvars: usize,
}

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

impl HilbertSeries {
    /// The coefficient of t^d.
    pub fn value(&self, d: u64) -> u64 {
        let n = self.nvars as i64;
        let d = d as i64;
        let v: i128 = if n == 0 {
            self.numerator.get(d as usize).copied().unwrap_or(0) as i128
        } else {
            self.numerator
                .iter()
                .enumerate()
                .map(|(j, &c)| c as i128 * binomial(d - j as i64 + n - 1, n - 1))
                .sum()
        };
        debug_assert!(v >= 0);
        v as u64
    }

    /// Numerator after cancelling all factors (1 - t), and the Krull dimension.
    pub fn reduced(&self) -> (Vec<i64>, usize) {
        let mut num = self.numerator.clone();
        let mut dim = self.nvars;
        while dim > 0 && !num.is_empty() && num.iter().sum::<i64>() == 0 {
            // divide by (1 - t): q_i = sum_{j<=i} num_j
            let mut q = Vec::with_capacity(num.len() - 1);
            let mut acc = 0;
            for &c in &num[..num.len() - 1] {
                acc += c;
                q.push(acc);
            }
            num = q;
            while num.last() == Some(&0) {
                num.pop();
            }
            dim -= 1;
        }
        (num, dim)
    }

    /// Krull dimension of S/I (0 for the zero module).
    pub fn dimension(&self) -> usize {
        if self.numerator.iter().all(|&c| c == 0) {
            return 0;
        }
        self.reduced().1
    }

    /// Multiplicity: the reduced numerator evaluated at 1.
    pub fn degree(&self) -> i64 {
        self.reduced().0.iter().sum()
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, &y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

/// Numerator K(t) with HS(S/I) = K(t) / (1 - t)^n for a monomial ideal I,
/// by recursive pivoting on a variable power.
pub(crate) fn monomial_numerator(gens: &[Monomial], nvars: usize) -> Vec<i64> {
    let gens = minimalize(gens.to_vec());
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return vec![0];
    }
    let pairwise_coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        let mut acc = vec![1i64];
        for g in &gens {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] = -1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    // Pivot on the variable occurring in the most non-pure-power generators.
    let mut counts = vec![0usize; nvars];
    for g in gens.iter().filter(|g| g.pure_power_variable().is_none()) {
        for (v, &e) in g.exponents().iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let var = (0..nvars).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).unwrap();
    let mut exps: Vec<u16> = gens
        .iter()
        .filter(|g| g.pure_power_variable().is_none())
        .map(|g| g.exponent(var))
        .filter(|&e| e > 0)
        .collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2].max(1);
    let mut pivot = Monomial::one(nvars);
    pivot.set_exponent(var, e);

    let mut with_pivot = gens.clone();
    with_pivot.push(pivot.clone());
    let mut result = monomial_numerator(&with_pivot, nvars);

    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut q = g.clone();
            q.set_exponent(var, g.exponent(var).saturating_sub(e));
            q
        })
        .collect();
    let colon_num = monomial_numerator(&colon, nvars);
    poly_add_shifted(&mut result, &colon_num, e as usize);
    while result.len() > 1 && result.last() == Some(&0) {
        result.pop();
    }
    result
}

pub fn hilbert_series(ideal: &Ideal) -> Result<HilbertSeries> {
    let gb = ideal.groebner()?;
    Ok(series_of_basis(&gb))
}

pub(crate) fn series_of_basis(gb: &GroebnerBasis) -> HilbertSeries {
    let n = gb.ring().nvars();
    HilbertSeries { numerator: monomial_numerator(&gb.lead_monomials(), n), nvars: n }
}

/// h(d) = number of standard monomials of degree d, for 0 <= d <= d_max.
pub fn hilbert_function(ideal: &Ideal, d_max: usize) -> Result<HilbertFunction> {
    let gb = ideal.groebner()?;
    Ok(hilbert_function_of_basis(&gb, d_max))
}

pub(crate) fn hilbert_function_of_basis(gb: &GroebnerBasis, d_max: usize) -> HilbertFunction {
    let hs = series_of_basis(gb);
    HilbertFunction { values: (0..=d_max as u64).map(|d| hs.value(d)).collect() }
}

/// Counts monomials of degree `d` outside the lead-term ideal by enumeration.
pub fn count_standard_monomials(gb: &GroebnerBasis, d: u32) -> u64 {
    let leads = gb.lead_monomials();
    monomials_of_degree(gb.ring().nvars(), d)
        .iter()
        .filter(|m| !leads.iter().any(|l| l.divides(m)))
        .count() as u64
}

/// Largest degree in which S/I is nonzero, for I of finite colength.
/// Returns -1 for the unit ideal.
pub fn top_degree_finite(ideal: &Ideal) -> Result<i64> {
    let gb = ideal.groebner()?;
    top_degree_of_basis(&gb)
}

pub(crate) fn top_degree_of_basis(gb: &GroebnerBasis) -> Result<i64> {
    if let Some(v) = gb.finite_length_witness() {
        return Err(Error::not_finite_length(&gb.ring().vars()[v]));
    }
    let hs = series_of_basis(gb);
    // Finite length: the series is a polynomial; find its degree.
    let n = gb.ring().nvars();
    let mut coeffs = hs.numerator.clone();
    for _ in 0..n {
        // multiply by 1/(1 - t) truncated: finite length guarantees exact division in the end.
        let mut acc = 0;
        for c in coeffs.iter_mut() {
            acc += *c;
            *c = acc;
        }
    }
    // After n prefix sums the sequence is the Hilbert function on 0..len; zeros past the top.
    let top = coeffs.iter().rposition(|&c| c != 0);
    Ok(top.map_or(-1, |t| t as i64))
}

/// Whether m^s is contained in I (I of finite colength).
pub fn m_power_containment(s: i64, ideal: &Ideal) -> Result<bool> {
    Ok(top_degree_finite(ideal)? < s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::tests::ring;
    use crate::poly::Polynomial;

    #[test]
    fn hilbert_function_examples() {
        let r = ring(7, &["x", "y"]);
        let sq = Ideal::new(
            &r,
            vec![
                Polynomial::from_int_terms(&r, &[(1, &[2, 0])]),
                Polynomial::from_int_terms(&r, &[(1, &[1, 1])]),
                Polynomial::from_int_terms(&r, &[(1, &[0, 2])]),
            ],
        )
        .unwrap();
        assert_eq!(hilbert_function(&sq, 4).unwrap().values, vec![1, 2, 0, 0, 0]);
        assert_eq!(hilbert_function(&Ideal::zero(&r), 4).unwrap().values, vec![1, 2, 3, 4, 5]);

        let r3 = ring(7, &["x", "y", "z"]);
        let conic = Ideal::new(&r3, vec![Polynomial::from_int_terms(&r3, &[(1, &[1, 0, 1]), (-1, &[0, 2, 0])])]).unwrap();
        let h = hilbert_function(&conic, 8).unwrap();
        for d in 0..=8 {
            assert_eq!(h.values[d], 2 * d as u64 + 1);
        }
        let hs = hilbert_series(&conic).unwrap();
        assert_eq!((hs.dimension(), hs.degree()), (2, 2));
    }

    #[test]
    fn top_degree_examples() {
        let r = ring(7, &["x", "y"]);
        let x2y2 = Ideal::new(
            &r,
            vec![Polynomial::from_int_terms(&r, &[(1, &[2, 0])]), Polynomial::from_int_terms(&r, &[(1, &[0, 2])])],
        )
        .unwrap();
        assert_eq!(top_degree_finite(&x2y2).unwrap(), 2);
        assert_eq!(top_degree_finite(&Ideal::maximal(&r)).unwrap(), 0);
        let x = Ideal::new(&r, vec![Polynomial::var(&r, 0)]).unwrap();
        let err = top_degree_finite(&x).unwrap_err();
        assert_eq!(err.witness(), Some("y"));
        assert!(m_power_containment(3, &x2y2).unwrap());
        assert!(!m_power_containment(2, &x2y2).unwrap());
        assert_eq!(top_degree_finite(&Ideal::unit(&r)).unwrap(), -1);
    }

    #[test]
    fn conic_plus_center_contains_m_squared() {
        let r = ring(7, &["x", "y", "z"]);
        let i = Ideal::new(
            &r,
            vec![
                Polynomial::var(&r, 0),
                Polynomial::var(&r, 2),
                Polynomial::from_int_terms(&r, &[(1, &[1, 0, 1]), (-1, &[0, 2, 0])]),
            ],
        )
        .unwrap();
        assert!(m_power_containment(2, &i).unwrap());
        assert!(!m_power_containment(1, &i).unwrap());
        let gb = i.groebner().unwrap();
        for m in monomials_of_degree(3, 2) {
            assert!(gb.contains(&Polynomial::term(&r, m, crate::field::Fe::ONE)).unwrap());
        }
    }

    #[test]
    fn numerator_matches_enumeration() {
        let r = ring(7, &["x", "y", "z"]);
        let gens = vec![
            Polynomial::from_int_terms(&r, &[(1, &[2, 1, 0])]),
            Polynomial::from_int_terms(&r, &[(1, &[0, 2, 1])]),
            Polynomial::from_int_terms(&r, &[(1, &[1, 0, 3])]),
            Polynomial::from_int_terms(&r, &[(1, &[1, 1, 1])]),
        ];
        let gb = Ideal::new(&r, gens).unwrap().groebner().unwrap();
        let hf = hilbert_function_of_basis(&gb, 10);
        for d in 0..=10 {
            assert_eq!(hf.values[d], count_standard_monomials(&gb, d as u32), "degree {d}");
        }
    }
}
