//! Free graded-commutative algebras with exact coefficients.
//!
//! Generators are kept in declaration order and every monomial is stored in
//! that order, so the Koszul sign is resolved once when a product is formed.
//! Over `Q` and `F_p` with `p` odd, odd-degree generators anticommute and square
//! to zero. Over `F_2` parity is ignored and the algebra is an ordinary
//! polynomial ring.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A named generator with a positive cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GenSymbol {
    pub name: String,
    pub degree: u32,
}

impl GenSymbol {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// The ambient free algebra: coefficient field plus ordered generators.
#[derive(Debug)]
pub struct Algebra {
    field: Field,
    gens: Vec<GenSymbol>,
    index: HashMap<String, usize>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.gens == other.gens
    }
}

impl Eq for Algebra {}

impl Algebra {
    pub fn new(field: Field, gens: Vec<GenSymbol>) -> Result<Arc<Self>> {
        let mut index = HashMap::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::invalid(format!("generator {} has degree 0", g.name)));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Arc::new(Self { field, gens, index }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn gens(&self) -> &[GenSymbol] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &GenSymbol {
        &self.gens[i]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Whether generator `i` anticommutes with other odd generators.
    pub fn anticommutes(&self, i: usize) -> bool {
        !self.field.ignores_parity() && self.gens[i].is_odd()
    }

    pub(crate) fn same(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    /// The same generators over another field.
    pub fn with_field(&self, field: Field) -> Arc<Algebra> {
        Algebra::new(field, self.gens.clone()).expect("generators already validated")
    }
}

/// A sparse exponent vector, sorted by generator index with no zero entries.
///
/// Ordering is lexicographic on dense exponent vectors with earlier generators
/// weighing more and higher powers first, so `c_1^2 < c_1 c_2 < c_2^2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(ga, ea)), Some(&(gb, eb))) => {
                    if ga != gb {
                        return ga.cmp(&gb);
                    }
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                }
            }
            i += 1;
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Self(vec![(i, 1)])
    }

    /// Normalizes an arbitrary list of `(generator, exponent)` pairs.
    pub fn from_exponents(mut exps: Vec<(usize, u32)>) -> Self {
        exps.sort_unstable_by_key(|&(i, _)| i);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(exps.len());
        for (i, e) in exps {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => out.push((i, e)),
            }
        }
        out.retain(|&(_, e)| e > 0);
        Self(out)
    }

    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.iter().find(|&&(g, _)| g == i).map_or(0, |&(_, e)| e)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree(&self, alg: &Algebra) -> u32 {
        self.0.iter().map(|&(i, e)| e * alg.gen(i).degree).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(i, e)| other.exponent(i) >= e)
    }

    /// Valid in `alg`: anticommuting generators appear at most once.
    pub fn is_admissible(&self, alg: &Algebra) -> bool {
        self.0.iter().all(|&(i, e)| !alg.anticommutes(i) || e <= 1)
    }

    pub fn display(&self, alg: &Algebra) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(i, e)| {
                let name = &alg.gen(i).name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Product of two canonical monomials with its Koszul sign.
///
/// Returns `None` when an anticommuting generator would appear twice, and
/// otherwise the product together with `true` when the sign is negative.
pub(crate) fn mul_monomials(alg: &Algebra, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
    let mut negative = false;
    for &(i, _) in &a.0 {
        if !alg.anticommutes(i) {
            continue;
        }
        for &(j, _) in &b.0 {
            if !alg.anticommutes(j) {
                continue;
            }
            if j == i {
                return None;
            }
            if j < i {
                negative = !negative;
            }
        }
    }
    let mut out = Vec::with_capacity(a.0.len() + b.0.len());
    let (mut x, mut y) = (a.0.iter().peekable(), b.0.iter().peekable());
    loop {
        match (x.peek(), y.peek()) {
            (Some(&&(i, e)), Some(&&(j, f))) => match i.cmp(&j) {
                Ordering::Less => {
                    out.push((i, e));
                    x.next();
                }
                Ordering::Greater => {
                    out.push((j, f));
                    y.next();
                }
                Ordering::Equal => {
                    out.push((i, e + f));
                    x.next();
                    y.next();
                }
            },
            (Some(&&t), None) => {
                out.push(t);
                x.next();
            }
            (None, Some(&&t)) => {
                out.push(t);
                y.next();
            }
            (None, None) => break,
        }
    }
    Some((Monomial(out), negative))
}

/// An element of a free graded-commutative algebra.
#[derive(Clone)]
pub struct GradedPoly {
    alg: Arc<Algebra>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        Algebra::same(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl GradedPoly {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Self {
            alg: Arc::clone(alg),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        Self::constant(alg, Scalar::one(alg.field()))
    }

    pub fn constant(alg: &Arc<Algebra>, c: Scalar) -> Self {
        Self::term(alg, Monomial::one(), c)
    }

    pub fn from_i64(alg: &Arc<Algebra>, n: i64) -> Self {
        Self::constant(alg, Scalar::from_i64(alg.field(), n))
    }

    /// `c * m`; zero if `m` is inadmissible in `alg`.
    pub fn term(alg: &Arc<Algebra>, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(alg);
        if m.is_admissible(alg) {
            p.add_term(m, c);
        }
        p
    }

    pub fn generator(alg: &Arc<Algebra>, name: &str) -> Result<Self> {
        let i = alg.require(name)?;
        Ok(Self::var(alg, i))
    }

    pub fn var(alg: &Arc<Algebra>, i: usize) -> Self {
        Self::term(alg, Monomial::var(i), Scalar::one(alg.field()))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
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

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.field()))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        if !Algebra::same(&self.alg, &other.alg) {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Graded-commutative product; rejects operands from different algebras.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.alg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = mul_monomials(&self.alg, ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -&c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.alg);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.alg);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Set of degrees of the monomials present.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.degree(&self.alg)).collect()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<u32> {
        let ds = self.degrees();
        if ds.len() == 1 {
            ds.into_iter().next()
        } else {
            None
        }
    }

    /// The zero polynomial counts as homogeneous of every degree.
    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        self.filter(|m| m.degree(&self.alg) == d)
    }

    /// Sum of the terms with exactly `len` generator factors.
    pub fn word_length_component(&self, len: u32) -> Self {
        self.filter(|m| m.word_length() == len)
    }

    pub fn linear_part(&self) -> Self {
        self.word_length_component(1)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self {
            alg: Arc::clone(&self.alg),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Generators (by index) that occur in some term.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|&(i, _)| i)).collect()
    }

    pub fn mentions(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(i) > 0)
    }

    /// Algebra map determined by `subst`, applied to `self`.
    pub fn substitute(&self, subst: &Substitution) -> Result<Self> {
        if !Algebra::same(&self.alg, &subst.source) {
            return Err(Error::AmbientMismatch);
        }
        let images = subst.resolved()?;
        let mut powers: HashMap<(usize, u32), GradedPoly> = HashMap::new();
        let mut out = Self::zero(&subst.target);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(&subst.target, c.reduce(subst.target.field())?);
            for &(i, e) in &m.0 {
                let p = powers.entry((i, e)).or_insert_with(|| images[i].pow(e)).clone();
                acc = &acc * &p;
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Moves `self` into `target`, matching generators by name.
    pub fn rehome(&self, target: &Arc<Algebra>) -> Result<Self> {
        if Algebra::same(&self.alg, target) {
            return Ok(self.clone());
        }
        let mut s = Substitution::new(&self.alg, target);
        for i in 0..self.alg.len() {
            if target.index_of(&self.alg.gen(i).name).is_none() && !self.mentions(i) {
                s.set_index(i, Self::zero(target))?;
            }
        }
        s.identity_rest()?;
        self.substitute(&s)
    }

    /// Same polynomial with coefficients reduced into `target`'s field.
    pub fn reduce_coefficients(&self, target: &Arc<Algebra>) -> Result<Self> {
        if self.alg.gens() != target.gens() {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            if m.is_admissible(target) {
                out.add_term(m.clone(), c.reduce(target.field())?);
            }
        }
        Ok(out)
    }

    pub fn parse(alg: &Arc<Algebra>, input: &str) -> Result<Self> {
        crate::parse::parse_poly(alg, input)
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_add(rhs).expect("addition across ambient algebras")
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self + &(-rhs)
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            alg: Arc::clone(&self.alg),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.multiply(rhs).expect("product across ambient algebras")
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(&self.alg))?;
            } else {
                write!(f, "{abs} {}", m.display(&self.alg))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly({self})")
    }
}

impl Serialize for GradedPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Images of the generators of `source` in `target`, defining an algebra map.
#[derive(Clone, Debug)]
pub struct Substitution {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    images: Vec<Option<GradedPoly>>,
}

impl Substitution {
    pub fn new(source: &Arc<Algebra>, target: &Arc<Algebra>) -> Self {
        Self {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images: vec![None; source.len()],
        }
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    /// Assigns `name ↦ image`; the image must be zero or homogeneous of the
    /// generator's degree.
    pub fn set(&mut self, name: &str, image: GradedPoly) -> Result<&mut Self> {
        let i = self.source.require(name)?;
        self.set_index(i, image)
    }

    pub fn set_index(&mut self, i: usize, image: GradedPoly) -> Result<&mut Self> {
        if !Algebra::same(image.algebra(), &self.target) {
            return Err(Error::AmbientMismatch);
        }
        let g = self.source.gen(i);
        if !image.is_zero() && image.degree() != Some(g.degree) {
            return Err(Error::DegreeMismatch {
                what: format!("image of {}", g.name),
                expected: g.degree,
                found: format!("{:?}", image.degrees()),
            });
        }
        self.images[i] = Some(image);
        Ok(self)
    }

    /// Sends every unassigned generator to the target generator of the same name.
    pub fn identity_rest(&mut self) -> Result<&mut Self> {
        for i in 0..self.images.len() {
            if self.images[i].is_none() {
                let name = &self.source.gen(i).name;
                let image = GradedPoly::generator(&self.target, name)?;
                self.set_index(i, image)?;
            }
        }
        Ok(self)
    }

    pub fn image(&self, name: &str) -> Option<&GradedPoly> {
        self.source.index_of(name).and_then(|i| self.images[i].as_ref())
    }

    fn resolved(&self) -> Result<Vec<&GradedPoly>> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.as_ref()
                    .ok_or_else(|| Error::UnknownGenerator(self.source.gen(i).name.clone()))
            })
            .collect()
    }

    /// The composite `next ∘ self`.
    pub fn then(&self, next: &Substitution) -> Result<Substitution> {
        if !Algebra::same(&self.target, &next.source) {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Substitution::new(&self.source, &next.target);
        for (i, p) in self.resolved()?.into_iter().enumerate() {
            out.set_index(i, p.substitute(next)?)?;
        }
        Ok(out)
    }
}
