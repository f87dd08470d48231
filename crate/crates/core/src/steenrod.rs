//! Steenrod operations on mod `p` cohomology.
//!
//! On `H^*(BU(m); F_p)` the action is computed from scratch: pull back to the
//! maximal torus, where every generator `t` has degree 2 and the total
//! operation is `t ↦ t + t^p` (`Sq = 1 + Sq^2` on `t` when `p = 2`), expand by
//! multiplicativity, then rewrite the symmetric answer in Chern classes. For
//! other rings the action is read from a table of known values and extended by
//! the Cartan formula only when every lower operation it needs is known.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graded::{Algebra, GenSymbol, GradedPoly, Monomial};
use crate::presented::Presentation;
use crate::scalar::{Field, Scalar};

/// A single Steenrod operation `Sq^k` (mod 2) or `P^k` (mod odd `p`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SteenrodOp {
    Sq(u32),
    P(u32),
}

impl SteenrodOp {
    pub fn index(self) -> u32 {
        match self {
            SteenrodOp::Sq(k) | SteenrodOp::P(k) => k,
        }
    }

    /// Degree by which the operation raises cohomological degree.
    pub fn degree(self, p: u64) -> u32 {
        match self {
            SteenrodOp::Sq(k) => k,
            SteenrodOp::P(k) => 2 * k * (p as u32 - 1),
        }
    }

    /// Checks that the operation exists over `field`.
    pub fn check_field(self, field: Field) -> Result<u64> {
        match (self, field) {
            (SteenrodOp::Sq(_), Field::Prime(2)) => Ok(2),
            (SteenrodOp::P(_), Field::Prime(p)) if p != 2 => Ok(p),
            _ => Err(Error::invalid(format!("{self} is not defined over {field}"))),
        }
    }

    /// The operation with index `i` in the same family.
    pub fn with_index(self, i: u32) -> Self {
        match self {
            SteenrodOp::Sq(_) => SteenrodOp::Sq(i),
            SteenrodOp::P(_) => SteenrodOp::P(i),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unknown Steenrod operation `{s}`"));
        let (family, index) = s.split_once('^').ok_or_else(bad)?;
        let k: u32 = index.trim().parse().map_err(|_| bad())?;
        match family.trim() {
            "Sq" => Ok(SteenrodOp::Sq(k)),
            "P" => Ok(SteenrodOp::P(k)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SteenrodOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SteenrodOp::Sq(k) => write!(f, "Sq^{k}"),
            SteenrodOp::P(k) => write!(f, "P^{k}"),
        }
    }
}

impl Serialize for SteenrodOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `t_1, ..., t_m`, all of degree 2.
pub fn splitting_algebra(m: usize, field: Field) -> Arc<Algebra> {
    Algebra::new(field, (1..=m).map(|i| GenSymbol::new(format!("t_{i}"), 2)).collect()).expect("distinct names")
}

/// `c_1, ..., c_m` with `|c_i| = 2i`.
pub fn chern_algebra(m: usize, field: Field) -> Arc<Algebra> {
    Algebra::new(
        field,
        (1..=m)
            .map(|i| GenSymbol::new(format!("c_{i}"), 2 * i as u32))
            .collect(),
    )
    .expect("distinct names")
}

/// `e_j` in all generators of `alg`.
pub fn elementary_symmetric(alg: &Arc<Algebra>, j: usize) -> GradedPoly {
    let n = alg.len();
    let mut out = GradedPoly::zero(alg);
    if j > n {
        return out;
    }
    let one = Scalar::one(alg.field());
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        out.add_term(
            Monomial::from_exponents(idx.iter().map(|&i| (i, 1)).collect()),
            one.clone(),
        );
        // next j-subset in lexicographic order
        let Some(pos) = (0..j).rev().find(|&k| idx[k] < n - j + k) else {
            return out;
        };
        idx[pos] += 1;
        for k in pos + 1..j {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// Total operation on a polynomial in degree-2 classes: `t ↦ t + t^p` on every
/// generator, extended multiplicatively. The result is inhomogeneous.
pub fn total_power(f: &GradedPoly, p: u64) -> GradedPoly {
    let alg = f.algebra();
    let field = alg.field();
    let mut out = GradedPoly::zero(alg);
    for (m, c) in f.terms() {
        let mut acc = GradedPoly::constant(alg, c.clone());
        for &(i, a) in m.exponents() {
            // (t + t^p)^a = Σ_r C(a, r) t^(a + r(p-1))
            let mut factor = GradedPoly::zero(alg);
            for r in 0..=a {
                let e = a + r * (p as u32 - 1);
                factor.add_term(
                    Monomial::from_exponents(vec![(i, e)]),
                    Scalar::from_bigint(field, &binomial(a, r)),
                );
            }
            acc = &acc * &factor;
        }
        out = &out + &acc;
    }
    out
}

/// The part of [`total_power`] raising degree by exactly `2k(p-1)`, computed
/// without expanding the other components.
pub fn total_power_component(f: &GradedPoly, p: u64, k: u32) -> GradedPoly {
    fn spread(
        exps: &[(usize, u32)],
        left: u32,
        p: u64,
        acc: &mut Vec<(usize, u32)>,
        weight: BigInt,
        out: &mut Vec<(Vec<(usize, u32)>, BigInt)>,
    ) {
        let Some((&(i, a), rest)) = exps.split_first() else {
            if left == 0 {
                out.push((acc.clone(), weight));
            }
            return;
        };
        for r in 0..=a.min(left) {
            acc.push((i, a + r * (p as u32 - 1)));
            spread(rest, left - r, p, acc, &weight * binomial(a, r), out);
            acc.pop();
        }
    }
    let alg = f.algebra();
    let mut out = GradedPoly::zero(alg);
    for (m, c) in f.terms() {
        let mut terms = Vec::new();
        spread(m.exponents(), k, p, &mut Vec::new(), BigInt::from(1), &mut terms);
        for (exps, w) in terms {
            out.add_term(
                Monomial::from_exponents(exps),
                c * &Scalar::from_bigint(alg.field(), &w),
            );
        }
    }
    out
}

/// A polynomial in `t_1, ..., t_m` claimed to be symmetric.
#[derive(Clone, Debug)]
pub struct SymmetricExpansion {
    vars: usize,
    poly: GradedPoly,
}

impl SymmetricExpansion {
    /// Wraps `poly`, whose algebra must be a splitting algebra.
    pub fn new(poly: GradedPoly) -> Result<Self> {
        let alg = poly.algebra();
        let expected = splitting_algebra(alg.len(), alg.field());
        if **alg != *expected {
            return Err(Error::invalid("expected a polynomial in t_1..t_m"));
        }
        Ok(Self { vars: alg.len(), poly })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn poly(&self) -> &GradedPoly {
        &self.poly
    }

    /// Invariance under every adjacent transposition `t_i <-> t_{i+1}`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.vars.saturating_sub(1)).all(|i| {
            self.poly.terms().all(|(m, c)| {
                let swapped = Monomial::from_exponents(
                    m.exponents()
                        .iter()
                        .map(|&(g, e)| match g {
                            g if g == i => (i + 1, e),
                            g if g == i + 1 => (i, e),
                            g => (g, e),
                        })
                        .collect(),
                );
                self.poly.coefficient(&swapped) == *c
            })
        })
    }

    /// Coefficients of the monomials `t^λ` with `λ` nonincreasing.
    fn partition_coefficients(&self) -> BTreeMap<Vec<u32>, Scalar> {
        self.poly
            .terms()
            .filter_map(|(m, c)| {
                let dense: Vec<u32> = (0..self.vars).map(|i| m.exponent(i)).collect();
                dense.windows(2).all(|w| w[0] >= w[1]).then(|| (dense, c.clone()))
            })
            .collect()
    }
}

/// A symmetric polynomial stored by the coefficients of its sorted monomials.
type Partitioned = BTreeMap<Vec<u32>, Scalar>;

/// Partitions of `n` with at most `len` parts, padded with zeros to `len`.
fn partitions(n: u32, len: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, len: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            let mut v = acc.clone();
            v.resize(len, 0);
            out.push(v);
            return;
        }
        if acc.len() == len {
            return;
        }
        for part in (1..=max.min(n)).rev() {
            acc.push(part);
            go(n - part, part, len, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, len, &mut Vec::new(), &mut out);
    out
}

/// `f · e_r` in `len` variables. The coefficient of `t^μ` is the sum of
/// `f(μ - 1_S)` over `r`-subsets `S` of the nonzero positions of `μ`; equal
/// parts of `μ` are grouped so each sorted result is visited once.
fn times_elementary(f: &Partitioned, r: usize, len: usize, field: Field) -> Partitioned {
    let Some(size) = f.keys().next().map(|k| k.iter().sum::<u32>()) else {
        return Partitioned::new();
    };
    let mut out = Partitioned::new();
    for mu in partitions(size + r as u32, len) {
        // (value, multiplicity) of each run of equal nonzero parts
        let mut groups: Vec<(u32, usize)> = Vec::new();
        for &x in mu.iter().filter(|&&x| x > 0) {
            match groups.last_mut() {
                Some(g) if g.0 == x => g.1 += 1,
                _ => groups.push((x, 1)),
            }
        }
        let mut total = Scalar::zero(field);
        let mut take = vec![0usize; groups.len()];
        loop {
            if take.iter().sum::<usize>() == r {
                let mut nu: Vec<u32> = Vec::with_capacity(len);
                let mut weight = BigInt::from(1);
                for (&(v, n), &s) in groups.iter().zip(&take) {
                    nu.extend(std::iter::repeat_n(v, n - s));
                    nu.extend(std::iter::repeat_n(v - 1, s));
                    weight *= binomial(n as u32, s as u32);
                }
                nu.sort_unstable_by(|a, b| b.cmp(a));
                nu.resize(len, 0);
                if let Some(c) = f.get(&nu) {
                    total = &total + &(c * &Scalar::from_bigint(field, &weight));
                }
            }
            // odometer over take[g] in 0..=multiplicity
            let Some(g) = (0..groups.len()).find(|&g| take[g] < groups[g].1) else {
                break;
            };
            take[g] += 1;
            for t in take.iter_mut().take(g) {
                *t = 0;
            }
        }
        if !total.is_zero() {
            out.insert(mu, total);
        }
    }
    out
}

/// Rewrites a symmetric polynomial in the elementary symmetric classes
/// `c_1..c_m` by repeatedly cancelling the lexicographically leading term.
pub fn symmetric_to_elementary(s: &SymmetricExpansion) -> Result<GradedPoly> {
    if !s.is_symmetric() {
        return Err(Error::NonSymmetric(s.poly.to_string()));
    }
    let field = s.poly.field();
    let m = s.vars;
    let calg = chern_algebra(m, field);
    let mut rem = s.partition_coefficients();
    let mut out = GradedPoly::zero(&calg);
    let mut one = Partitioned::new();
    one.insert(vec![0; m], Scalar::one(field));
    while let Some((lead, c)) = rem.pop_last() {
        if c.is_zero() {
            continue;
        }
        let mut exps = Vec::new();
        let mut product = one.clone();
        for i in 0..m {
            let e = lead[i] - lead.get(i + 1).copied().unwrap_or(0);
            if e > 0 {
                exps.push((i, e));
            }
            for _ in 0..e {
                product = times_elementary(&product, i + 1, m, field);
            }
        }
        // the product has leading term t^lead with coefficient 1
        for (mu, d) in product {
            if mu == lead {
                continue;
            }
            let entry = rem.entry(mu).or_insert_with(|| Scalar::zero(field));
            *entry = &*entry - &(&c * &d);
        }
        out.add_term(Monomial::from_exponents(exps), c);
    }
    Ok(out)
}

/// Result of applying `op` to `input`, in normal form in the ambient ring.
#[derive(Clone, Debug, Serialize)]
pub struct SteenrodExpansion {
    pub input: GradedPoly,
    pub op: SteenrodOp,
    pub result: GradedPoly,
    /// Word-length >= 2 part of `result`.
    pub decomposable: GradedPoly,
}

impl SteenrodExpansion {
    fn new(input: GradedPoly, op: SteenrodOp, result: GradedPoly) -> Self {
        let decomposable = result.filter(|m| m.word_length() >= 2);
        Self {
            input,
            op,
            result,
            decomposable,
        }
    }

    /// No indecomposable (single generator) terms.
    pub fn is_decomposable(&self) -> bool {
        self.result.filter(|m| m.word_length() < 2).is_zero()
    }

    /// Coefficient of the monomial `Π names` in the result.
    pub fn coefficient_of(&self, names: &[&str]) -> Result<Scalar> {
        let alg = self.result.algebra();
        let exps = names
            .iter()
            .map(|n| alg.require(n).map(|i| (i, 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.result.coefficient(&Monomial::from_exponents(exps)))
    }
}

impl fmt::Display for SteenrodExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} = {}", self.op, self.input, self.result)
    }
}

/// `θ(c_j)` in `H^*(BU(m); F_p)` with `θ = P^k` for odd `p` and `θ = Sq^{2k}`
/// for `p = 2`.
pub fn power_op_on_chern(m: usize, p: u64, k: u32, j: usize) -> Result<SteenrodExpansion> {
    if j == 0 || j > m {
        return Err(Error::invalid(format!("Chern class index {j} outside 1..={m}")));
    }
    let field = Field::prime(p)?;
    let talg = splitting_algebra(m, field);
    let sym = SymmetricExpansion::new(total_power_component(&elementary_symmetric(&talg, j), p, k))?;
    let result = symmetric_to_elementary(&sym)?;
    let calg = result.algebra().clone();
    let op = if p == 2 {
        SteenrodOp::Sq(2 * k)
    } else {
        SteenrodOp::P(k)
    };
    let input = GradedPoly::generator(&calg, &format!("c_{j}"))?;
    Ok(SteenrodExpansion::new(input, op, result))
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub value: GradedPoly,
    pub citation: String,
}

/// Known values `θ(g)` on generators of a presented ring.
#[derive(Clone, Debug)]
pub struct SteenrodTable {
    ring: Presentation,
    entries: BTreeMap<(SteenrodOp, usize), TableEntry>,
}

impl SteenrodTable {
    pub fn new(ring: Presentation) -> Self {
        Self {
            ring,
            entries: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &Presentation {
        &self.ring
    }

    pub fn insert(
        &mut self,
        op: SteenrodOp,
        generator: &str,
        value: GradedPoly,
        citation: impl Into<String>,
    ) -> Result<()> {
        let p = op.check_field(self.ring.field())?;
        let alg = self.ring.algebra();
        let i = alg.require(generator)?;
        if !Algebra::same(value.algebra(), alg) {
            return Err(Error::AmbientMismatch);
        }
        let expected = alg.gen(i).degree + op.degree(p);
        if !value.is_zero() && value.degree() != Some(expected) {
            return Err(Error::DegreeMismatch {
                what: format!("{op} {generator}"),
                expected,
                found: format!("{:?}", value.degrees()),
            });
        }
        self.entries.insert(
            (op, i),
            TableEntry {
                value,
                citation: citation.into(),
            },
        );
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (SteenrodOp, &GenSymbol, &TableEntry)> {
        self.entries
            .iter()
            .map(|(&(op, i), e)| (op, self.ring.algebra().gen(i), e))
    }

    pub fn lookup(&self, op: SteenrodOp, generator: &str) -> Option<&TableEntry> {
        let i = self.ring.algebra().index_of(generator)?;
        self.entries.get(&(op, i))
    }

    /// `θ^i(g)` from instability or the table.
    fn value(&self, op: SteenrodOp, i: usize, p: u64) -> Result<GradedPoly> {
        let alg = self.ring.algebra();
        let g = alg.gen(i);
        let k = op.index();
        // θ^k acts as the p-th power in this degree and vanishes above it
        let effective = match op {
            SteenrodOp::Sq(_) => k,
            SteenrodOp::P(_) => 2 * k,
        };
        if k == 0 {
            return Ok(GradedPoly::var(alg, i));
        }
        if effective > g.degree {
            return Ok(GradedPoly::zero(alg));
        }
        if effective == g.degree {
            return Ok(GradedPoly::var(alg, i).pow(p as u32));
        }
        self.entries
            .get(&(op, i))
            .map(|e| e.value.clone())
            .ok_or_else(|| Error::InsufficientData(format!("{op} {} is not tabled", g.name)))
    }

    /// Applies `op` to `x`, extending tabled values by linearity and, for
    /// products, by the Cartan formula when all lower operations are known.
    pub fn apply(&self, op: SteenrodOp, x: &GradedPoly) -> Result<SteenrodExpansion> {
        let p = op.check_field(self.ring.field())?;
        let alg = self.ring.algebra();
        if !Algebra::same(x.algebra(), alg) {
            return Err(Error::AmbientMismatch);
        }
        if !x.is_homogeneous() {
            return Err(Error::Inhomogeneous(x.to_string()));
        }
        let s = op.index();
        let mut result = GradedPoly::zero(alg);
        for (m, c) in x.terms() {
            // total operation truncated at index s, one factor at a time
            let mut total: Vec<GradedPoly> = vec![GradedPoly::zero(alg); s as usize + 1];
            total[0] = GradedPoly::one(alg);
            for &(i, e) in m.exponents() {
                for _ in 0..e {
                    let factor = (0..=s)
                        .map(|r| {
                            if m.word_length() == 1 && r < s && r > 0 {
                                // a lone generator only needs θ itself
                                Ok(GradedPoly::zero(alg))
                            } else {
                                self.value(op.with_index(r), i, p)
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let mut next = vec![GradedPoly::zero(alg); s as usize + 1];
                    for (a, ta) in total.iter().enumerate() {
                        if ta.is_zero() {
                            continue;
                        }
                        for (b, fb) in factor.iter().enumerate().take(s as usize + 1 - a) {
                            next[a + b] = &next[a + b] + &(ta * fb);
                        }
                    }
                    total = next;
                }
            }
            result = &result + &total[s as usize].scale(c);
        }
        let result = self.ring.normal_form(&result)?;
        Ok(SteenrodExpansion::new(x.clone(), op, result))
    }
}

/// Applies a tabled operation; see [`SteenrodTable::apply`].
pub fn table_apply(table: &SteenrodTable, op: SteenrodOp, x: &GradedPoly) -> Result<SteenrodExpansion> {
    table.apply(op, x)
}
