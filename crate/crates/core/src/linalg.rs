//! Dense Gaussian elimination over a finite field.

use std::collections::HashMap;
use std::sync::Arc;

use crate::field::{Fe, Field};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Ring};

/// Reduces `rows` in place to reduced row echelon form and returns the pivot columns.
/// Zero rows are removed.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Fe>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv_nonzero(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                if !p.is_zero() {
                    *x = field.sub(*x, field.mul(factor, p));
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

pub fn rank(field: &Field, mut rows: Vec<Vec<Fe>>) -> usize {
    rref(field, &mut rows).len()
}

/// Replaces a list of polynomials by a reduced echelon basis of their span:
/// distinct lead monomials, each lead absent from the other elements.
pub fn echelonize(ring: &Arc<Ring>, polys: &[Polynomial]) -> Vec<Polynomial> {
    let order = ring.order();
    let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().iter().map(|t| t.0.clone())).collect();
    monos.sort_by(|a, b| order.cmp(b, a));
    monos.dedup();
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<Fe>> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let mut row = vec![Fe::ZERO; monos.len()];
            for (m, c) in p.terms() {
                row[index[m]] = *c;
            }
            row
        })
        .collect();
    rref(ring.field(), &mut rows);
    rows.into_iter()
        .map(|row| {
            let terms = row
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (monos[i].clone(), c))
                .collect();
            Polynomial::from_sorted_terms(ring, terms)
        })
        .collect()
}
