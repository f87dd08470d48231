//! Finitely presented graded-commutative rings over a field, studied one
//! degree at a time.
//!
//! In degree `d` the relation subspace is spanned by `m * r` for every relation
//! `r` and every monomial `m` of complementary degree. Everything else (graded
//! dimensions, indecomposables, membership, normal forms) is row reduction
//! inside the finite space of degree-`d` monomials.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{Algebra, GradedPoly, Monomial};
use crate::linalg::Echelon;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug)]
pub struct Presentation {
    alg: Arc<Algebra>,
    relations: Vec<GradedPoly>,
    degree_bound: u32,
}

/// Degree-`d` data of a presentation.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub degree: u32,
    /// Every admissible monomial of degree `d`, in canonical order.
    pub monomials: Vec<Monomial>,
    /// Monomials that are not pivots of the reduced relation subspace; their
    /// classes form a basis of the quotient.
    pub basis: Vec<Monomial>,
    pub relation_rank: usize,
    echelon: Echelon,
}

impl GradedBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len() - self.relation_rank
    }
}

/// All admissible monomials of total degree `d`, in canonical order.
pub fn monomials_of_degree(alg: &Algebra, d: u32) -> Vec<Monomial> {
    fn go(alg: &Algebra, i: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        if i == alg.len() {
            return;
        }
        let deg = alg.gen(i).degree;
        let max = if alg.anticommutes(i) { 1 } else { left / deg };
        for e in (0..=max.min(left / deg)).rev() {
            if e > 0 {
                cur.push((i, e));
            }
            go(alg, i + 1, left - e * deg, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(alg, 0, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

impl Presentation {
    pub fn new(alg: &Arc<Algebra>, relations: Vec<GradedPoly>, degree_bound: u32) -> Result<Self> {
        let mut rels = Vec::with_capacity(relations.len());
        for r in relations {
            if !Algebra::same(r.algebra(), alg) {
                return Err(Error::AmbientMismatch);
            }
            if !r.is_homogeneous() {
                return Err(Error::Inhomogeneous(r.to_string()));
            }
            if !r.is_zero() {
                rels.push(r);
            }
        }
        Ok(Self {
            alg: Arc::clone(alg),
            relations: rels,
            degree_bound,
        })
    }

    pub fn free(alg: &Arc<Algebra>, degree_bound: u32) -> Self {
        Self {
            alg: Arc::clone(alg),
            relations: Vec::new(),
            degree_bound,
        }
    }

    /// Parses relations written in the polynomial text syntax.
    pub fn parse(alg: &Arc<Algebra>, relations: &[&str], degree_bound: u32) -> Result<Self> {
        let rels = relations
            .iter()
            .map(|r| GradedPoly::parse(alg, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alg, rels, degree_bound)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn relations(&self) -> &[GradedPoly] {
        &self.relations
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn with_degree_bound(&self, degree_bound: u32) -> Self {
        Self {
            degree_bound,
            ..self.clone()
        }
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    fn check_bound(&self, d: u32) -> Result<()> {
        if d > self.degree_bound {
            Err(Error::DegreeBoundExceeded {
                degree: d,
                bound: self.degree_bound,
            })
        } else {
            Ok(())
        }
    }

    fn relation_echelon(&self, d: u32, monomials: &[Monomial]) -> Echelon {
        let mut ech = Echelon::new(self.field(), monomials.to_vec());
        for r in &self.relations {
            let Some(rd) = r.degree() else { continue };
            if rd > d {
                continue;
            }
            for m in monomials_of_degree(&self.alg, d - rd) {
                let mult = GradedPoly::term(&self.alg, m, Scalar::one(self.field()));
                let row = &mult * r;
                if !row.is_zero() {
                    ech.insert_poly(&row);
                }
            }
        }
        ech
    }

    pub fn basis(&self, d: u32) -> Result<GradedBasis> {
        self.check_bound(d)?;
        let monomials = monomials_of_degree(&self.alg, d);
        let echelon = self.relation_echelon(d, &monomials);
        let pivots: Vec<&Monomial> = echelon.pivot_columns().collect();
        let basis = monomials.iter().filter(|m| !pivots.contains(m)).cloned().collect();
        Ok(GradedBasis {
            degree: d,
            relation_rank: echelon.rank(),
            monomials,
            basis,
            echelon,
        })
    }

    /// Dimension of the degree-`d` piece of the quotient ring.
    pub fn graded_dim(&self, d: u32) -> Result<usize> {
        Ok(self.basis(d)?.dim())
    }

    /// Dimension of the indecomposables `Q^d`: degree-`d` classes modulo
    /// products of two positive-degree classes.
    pub fn indecomposables_dim(&self, d: u32) -> Result<usize> {
        self.check_bound(d)?;
        if d == 0 {
            return Ok(0);
        }
        let monomials = monomials_of_degree(&self.alg, d);
        let mut ech = self.relation_echelon(d, &monomials);
        for m in &monomials {
            if m.word_length() >= 2 {
                ech.insert_poly(&GradedPoly::term(&self.alg, m.clone(), Scalar::one(self.field())));
            }
        }
        Ok(monomials.len() - ech.rank())
    }

    /// Unique representative of `x` supported on the standard monomials.
    pub fn normal_form(&self, x: &GradedPoly) -> Result<GradedPoly> {
        if !Algebra::same(x.algebra(), &self.alg) {
            return Err(Error::AmbientMismatch);
        }
        let mut out = GradedPoly::zero(&self.alg);
        for d in x.degrees() {
            let basis = self.basis(d)?;
            let v = basis
                .echelon
                .vector(&x.homogeneous_component(d))
                .expect("degree-d monomials cover a degree-d component");
            let r = basis.echelon.reduce(v);
            out = &out + &basis.echelon.to_poly(&self.alg, &r);
        }
        Ok(out)
    }

    /// Whether the class of homogeneous `x` is nonzero in the quotient.
    pub fn is_nonzero(&self, x: &GradedPoly) -> Result<bool> {
        if x.is_zero() {
            return Ok(false);
        }
        if !x.is_homogeneous() {
            return Err(Error::Inhomogeneous(x.to_string()));
        }
        Ok(!self.normal_form(x)?.is_zero())
    }

    /// Reduction of an integral presentation (rational coefficients with
    /// `p`-integral denominators) to `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        let field = Field::prime(p)?;
        let alg = self.alg.with_field(field);
        let rels = self
            .relations
            .iter()
            .map(|r| r.reduce_coefficients(&alg))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&alg, rels, self.degree_bound)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .alg
            .gens()
            .iter()
            .map(|g| format!("{}({})", g.name, g.degree))
            .collect();
        write!(f, "{}[{}]", self.field(), gens.join(", "))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
            write!(f, " / ({})", rels.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GenSymbol;

    fn ring(field: Field, gens: &[(&str, u32)], rels: &[&str], bound: u32) -> Presentation {
        let alg = Algebra::new(field, gens.iter().map(|&(n, d)| GenSymbol::new(n, d)).collect()).unwrap();
        Presentation::parse(&alg, rels, bound).unwrap()
    }

    fn eiii() -> Presentation {
        ring(Field::Prime(2), &[("t", 2), ("w'", 8)], &["t w'^2", "t^12 + w'^3"], 40)
    }

    #[test]
    fn free_ring_dimension() {
        let bu2 = ring(Field::Rational, &[("c_1", 2), ("c_2", 4)], &[], 10);
        assert_eq!(bu2.graded_dim(4).unwrap(), 2);
        assert_eq!(bu2.graded_dim(3).unwrap(), 0);
    }

    #[test]
    fn truncated_ring_dimension() {
        let q7 = ring(Field::Prime(2), &[("t", 2), ("e", 8)], &["t^4", "e^2"], 20);
        assert_eq!(q7.graded_dim(8).unwrap(), 1);
    }

    #[test]
    fn eiii_low_degrees() {
        let r = eiii();
        // no relation lives below degree 18, so t^5 and t w' are both basis elements
        assert_eq!(r.graded_dim(10).unwrap(), 2);
        assert_eq!(r.indecomposables_dim(2).unwrap(), 1);
        assert_eq!(r.indecomposables_dim(8).unwrap(), 1);
        assert_eq!(r.indecomposables_dim(10).unwrap(), 0);
    }

    #[test]
    fn product_of_spheres_indecomposables() {
        let r = ring(Field::Prime(2), &[("a", 2), ("b", 4)], &["a^2", "b^2"], 10);
        assert_eq!(r.indecomposables_dim(6).unwrap(), 0);
        assert_eq!(r.indecomposables_dim(4).unwrap(), 1);
    }

    #[test]
    fn nonzero_classes() {
        let q = ring(Field::Prime(2), &[("t", 2), ("e", 8)], &["t^4", "e^2"], 20);
        let alg = q.algebra().clone();
        assert!(q.is_nonzero(&GradedPoly::parse(&alg, "t e").unwrap()).unwrap());
        assert!(!q.is_nonzero(&GradedPoly::parse(&alg, "e^2").unwrap()).unwrap());
        assert!(!q.is_nonzero(&GradedPoly::zero(&alg)).unwrap());
        let e = eiii();
        let ea = e.algebra().clone();
        assert!(e.is_nonzero(&GradedPoly::parse(&ea, "t w'").unwrap()).unwrap());
        // t^12 = w'^3 in degree 24
        assert!(!e.is_nonzero(&GradedPoly::parse(&ea, "t^12 + w'^3").unwrap()).unwrap());
    }

    #[test]
    fn degree_bound_enforced() {
        let r = eiii().with_degree_bound(8);
        assert!(matches!(
            r.graded_dim(9),
            Err(Error::DegreeBoundExceeded { degree: 9, bound: 8 })
        ));
        assert!(r.indecomposables_dim(12).is_err());
    }

    #[test]
    fn integral_reduction() {
        let q = ring(Field::Rational, &[("t", 2), ("e", 8)], &["t^4 - 2 e", "e^2"], 24);
        // over Q the Euler class is decomposable, mod 2 it is not
        assert_eq!(q.indecomposables_dim(8).unwrap(), 0);
        let q2 = q.reduce_mod(2).unwrap();
        assert_eq!(q2.indecomposables_dim(8).unwrap(), 1);
        let direct = ring(Field::Prime(2), &[("t", 2), ("e", 8)], &["t^4", "e^2"], 24);
        for d in 0..=24 {
            assert_eq!(q2.graded_dim(d).unwrap(), direct.graded_dim(d).unwrap(), "degree {d}");
        }
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let alg = Algebra::new(Field::Rational, vec![GenSymbol::new("x", 2)]).unwrap();
        let r = GradedPoly::parse(&alg, "x + x^2").unwrap();
        assert!(matches!(
            Presentation::new(&alg, vec![r], 4),
            Err(Error::Inhomogeneous(_))
        ));
    }

    #[test]
    fn normal_form_is_canonical() {
        let e = eiii();
        let a = e.algebra().clone();
        let x = GradedPoly::parse(&a, "w'^3").unwrap();
        let y = GradedPoly::parse(&a, "t^12").unwrap();
        assert_eq!(e.normal_form(&x).unwrap(), e.normal_form(&y).unwrap());
    }
}
