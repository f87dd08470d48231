//! Reduced row echelon form over a field, with columns labelled by monomials.
//!
//! Columns follow the canonical monomial order and pivots are always the
//! leftmost nonzero entry, so the reduced form (and every normal form derived
//! from it) is deterministic.

use std::collections::HashMap;
use std::sync::Arc;

use crate::graded::{Algebra, GradedPoly, Monomial};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    field: Field,
    cols: Vec<Monomial>,
    col_index: HashMap<Monomial, usize>,
    // (pivot column, row) with row[pivot] == 1 and zeros in every other pivot column
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(field: Field, mut cols: Vec<Monomial>) -> Self {
        cols.sort();
        cols.dedup();
        let col_index = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self {
            field,
            cols,
            col_index,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.iter().map(|(p, _)| &self.cols[*p])
    }

    /// Coordinates of `p`, or `None` if it has a term outside the column set.
    pub fn vector(&self, p: &GradedPoly) -> Option<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(self.field); self.cols.len()];
        for (m, c) in p.terms() {
            let &i = self.col_index.get(m)?;
            v[i] = c.clone();
        }
        Some(v)
    }

    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        v
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn insert_poly(&mut self, p: &GradedPoly) -> bool {
        let v = self.vector(p).expect("polynomial outside the column set");
        self.insert(v)
    }

    pub fn to_poly(&self, alg: &Arc<Algebra>, v: &[Scalar]) -> GradedPoly {
        let mut out = GradedPoly::zero(alg);
        for (m, c) in self.cols.iter().zip(v) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}
