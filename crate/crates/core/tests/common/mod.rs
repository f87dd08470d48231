#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use loopcomm::catalog::{Action, Catalog, Factor, Selector, SpaceSpec};
use loopcomm::steenrod::{total_power_component, SteenrodOp, SteenrodTable};
use loopcomm::sullivan::SullivanModel;
use loopcomm::{Algebra, Field, GenSymbol, GradedPoly, Monomial, Presentation, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED_ENV: &str = "LOOPCOMM_SEED";
pub const DEFAULT_SEED: u64 = 0x10_0c_0c_0e;

pub fn seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

// ------------------------------------------------------------ primes

pub fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Primes in `(m/2, m]` by trial division.
pub fn interval_naive(m: u64) -> Vec<u64> {
    (m / 2 + 1..=m).filter(|&q| is_prime_naive(q)).collect()
}

// ------------------------------------------------------------ random polynomials

pub fn mixed_algebra(field: Field) -> Arc<Algebra> {
    Algebra::new(
        field,
        vec![
            GenSymbol::new("a", 1),
            GenSymbol::new("b", 2),
            GenSymbol::new("c", 3),
            GenSymbol::new("d", 4),
            GenSymbol::new("e", 5),
        ],
    )
    .unwrap()
}

pub fn random_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    let n = rng.gen_range(-4i64..=4);
    match field {
        Field::Rational if rng.gen_bool(0.3) => {
            let d = rng.gen_range(1i64..=3);
            Scalar::from_ratio(field, &n.into(), &d.into()).unwrap()
        }
        _ => Scalar::from_i64(field, n),
    }
}

pub fn random_monomial(rng: &mut ChaCha8Rng, alg: &Algebra, max_len: u32) -> Monomial {
    let len = rng.gen_range(0..=max_len);
    let exps = (0..len).map(|_| (rng.gen_range(0..alg.len()), 1)).collect();
    Monomial::from_exponents(exps)
}

pub fn random_poly(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>, terms: usize, max_len: u32) -> GradedPoly {
    let mut out = GradedPoly::zero(alg);
    for _ in 0..rng.gen_range(1..=terms) {
        let m = random_monomial(rng, alg, max_len);
        if m.is_admissible(alg) {
            out = &out + &GradedPoly::term(alg, m, random_scalar(rng, alg.field()));
        }
    }
    out
}

/// A random homogeneous element (possibly zero).
pub fn random_homogeneous(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>) -> (GradedPoly, u32) {
    let f = random_poly(rng, alg, 6, 3);
    let degrees: Vec<u32> = f.degrees().into_iter().collect();
    if degrees.is_empty() {
        return (f, 0);
    }
    let d = degrees[rng.gen_range(0..degrees.len())];
    (f.homogeneous_component(d), d)
}

// ------------------------------------------------------------ property checks

pub type Check = std::result::Result<(), String>;

/// `xy = (-1)^{|x||y|} yx` for random homogeneous `x, y`.
pub fn koszul(rng: &mut ChaCha8Rng) -> Check {
    let field = if rng.gen_bool(0.5) {
        Field::Rational
    } else {
        Field::Prime(3)
    };
    let alg = mixed_algebra(field);
    let (x, dx) = random_homogeneous(rng, &alg);
    let (y, dy) = random_homogeneous(rng, &alg);
    let xy = &x * &y;
    let yx = &y * &x;
    let expected = if dx % 2 == 1 && dy % 2 == 1 { -&yx } else { yx };
    (xy == expected)
        .then_some(())
        .ok_or_else(|| format!("Koszul sign fails for x = {x}, y = {y}"))
}

pub fn associativity(rng: &mut ChaCha8Rng) -> Check {
    let field = [Field::Rational, Field::Prime(2), Field::Prime(5)][rng.gen_range(0..3)];
    let alg = mixed_algebra(field);
    let x = random_poly(rng, &alg, 4, 2);
    let y = random_poly(rng, &alg, 4, 2);
    let z = random_poly(rng, &alg, 4, 2);
    let lhs = &(&x * &y) * &z;
    let rhs = &x * &(&y * &z);
    let dist = &x * &(&y + &z) == &(&x * &y) + &(&x * &z);
    (lhs == rhs && dist)
        .then_some(())
        .ok_or_else(|| format!("associativity/distributivity fails for {x}, {y}, {z}"))
}

/// `θ_k(fg) = Σ θ_i(f) θ_{k-i}(g)` for the total power on degree-2 classes.
pub fn cartan(rng: &mut ChaCha8Rng) -> Check {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let field = Field::Prime(p);
    let alg = Algebra::new(field, (1..=3).map(|i| GenSymbol::new(format!("t_{i}"), 2)).collect()).unwrap();
    let f = random_poly(rng, &alg, 3, 2);
    let g = random_poly(rng, &alg, 3, 2);
    let k = rng.gen_range(0..=3u32);
    let lhs = total_power_component(&(&f * &g), p, k);
    let mut rhs = GradedPoly::zero(&alg);
    for i in 0..=k {
        rhs = &rhs + &(&total_power_component(&f, p, i) * &total_power_component(&g, p, k - i));
    }
    (lhs == rhs)
        .then_some(())
        .ok_or_else(|| format!("Cartan fails mod {p} for k = {k}, f = {f}, g = {g}"))
}

/// `d(d w) = 0` and the Leibniz rule on random elements of a fixed model.
pub fn d_squared(rng: &mut ChaCha8Rng, model: &SullivanModel) -> Check {
    let alg = model.algebra();
    let w = random_poly(rng, alg, 4, 3);
    let v = random_poly(rng, alg, 3, 2);
    let dd = model
        .apply_d(&model.apply_d(&w).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    if !dd.is_zero() {
        return Err(format!("d^2 {w} = {dd}"));
    }
    let (h, dh) = random_homogeneous(rng, alg);
    let d = |x: &GradedPoly| model.apply_d(x).unwrap();
    let lhs = d(&(&h * &v));
    let sign = if dh % 2 == 1 { -&(&h * &d(&v)) } else { &h * &d(&v) };
    let rhs = &(&d(&h) * &v) + &sign;
    (lhs == rhs)
        .then_some(())
        .ok_or_else(|| format!("Leibniz fails for {h}, {v}"))
}

/// Cartan formula for a table-driven action on `F_2[t, e]/(t^4, e^2)`.
pub fn table_cartan(rng: &mut ChaCha8Rng, table: &SteenrodTable) -> Check {
    let alg = table.ring().algebra().clone();
    let x = random_poly(rng, &alg, 3, 3);
    let y = random_poly(rng, &alg, 3, 3);
    let x = x.homogeneous_component(*x.degrees().iter().next().unwrap_or(&0));
    let y = y.homogeneous_component(*y.degrees().iter().next().unwrap_or(&0));
    let ring = table.ring();
    let sq = |i: u32, z: &GradedPoly| table.apply(SteenrodOp::Sq(i), z).map(|e| e.result);
    for k in 0..=2 {
        let lhs = sq(k, &(&x * &y)).map_err(|e| e.to_string())?;
        let mut rhs = GradedPoly::zero(&alg);
        for i in 0..=k {
            rhs = &rhs + &(&sq(i, &x).map_err(|e| e.to_string())? * &sq(k - i, &y).map_err(|e| e.to_string())?);
        }
        let rhs = ring.normal_form(&rhs).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("table Cartan fails for Sq^{k}({x} * {y}): {lhs} vs {rhs}"));
        }
    }
    Ok(())
}

pub fn bdi_table(m: u32) -> SteenrodTable {
    let alg = Algebra::new(
        Field::Prime(2),
        vec![GenSymbol::new("t", 2), GenSymbol::new("e", 2 * m)],
    )
    .unwrap();
    let t4 = format!("t^{m}");
    let ring = Presentation::parse(&alg, &[&t4, "e^2"], 8 * m + 16).unwrap();
    let mut table = SteenrodTable::new(ring);
    let e = |s: &str| GradedPoly::parse(&alg, s).unwrap();
    table.insert(SteenrodOp::Sq(1), "t", e("0"), "integral class").unwrap();
    table.insert(SteenrodOp::Sq(1), "e", e("0"), "integral class").unwrap();
    table.insert(SteenrodOp::Sq(2), "e", e("t e"), "table").unwrap();
    table
}

// ------------------------------------------------------------ Steenrod oracle
//
// Independent of the library's symmetric-function rewriting: the integral lift
// F = Σ_i t_i^p e_{j-1}(t without t_i) of P^1 c_j (Sq^2 c_j for p = 2) is
// written in the basis of Chern monomials by interpolation at random points
// modulo a large prime, lifted to small integers and then reduced mod p.

const BIG: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % BIG as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    powmod(a, BIG - 2)
}

/// `e_0, ..., e_m` of `t` modulo `BIG`.
fn elementary_values(t: &[u64]) -> Vec<u64> {
    let mut e = vec![0u64; t.len() + 1];
    e[0] = 1;
    for (n, &x) in t.iter().enumerate() {
        for j in (1..=n + 1).rev() {
            e[j] = (e[j] + mulmod(e[j - 1], x)) % BIG;
        }
    }
    e
}

fn partitions(n: usize, max_part: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Integer coefficients of `θ c_j` in Chern monomials, keyed by the
/// partition `λ` of `c_λ = Π c_{λ_i}`.
pub fn chern_power_oracle(m: usize, p: u64, j: usize, rng: &mut ChaCha8Rng) -> BTreeMap<Vec<usize>, i64> {
    let weight = j - 1 + p as usize;
    let basis = partitions(weight, m);
    let n = basis.len();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n + 4);
    let mut rhs: Vec<u64> = Vec::with_capacity(n + 4);
    for _ in 0..n + 4 {
        let t: Vec<u64> = (0..m).map(|_| rng.gen_range(1..BIG)).collect();
        let e = elementary_values(&t);
        rows.push(
            basis
                .iter()
                .map(|lam| lam.iter().fold(1, |acc, &i| mulmod(acc, e[i])))
                .collect(),
        );
        let mut f = 0;
        for i in 0..m {
            let others: Vec<u64> = t.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            let eo = elementary_values(&others);
            f = (f + mulmod(powmod(t[i], p), eo[j - 1])) % BIG;
        }
        rhs.push(f);
    }
    let sol = solve_mod(rows[..n].to_vec(), rhs[..n].to_vec()).expect("random evaluation matrix is invertible");
    for (row, &f) in rows[n..].iter().zip(&rhs[n..]) {
        let v = row.iter().zip(&sol).fold(0, |acc, (&a, &x)| (acc + mulmod(a, x)) % BIG);
        assert_eq!(v, f, "interpolation inconsistent at a check point");
    }
    basis
        .into_iter()
        .zip(sol)
        .filter(|(_, x)| *x != 0)
        .map(|(lam, x)| {
            let v = if x > BIG / 2 { -((BIG - x) as i64) } else { x as i64 };
            (lam, v)
        })
        .collect()
}

fn solve_mod(mut a: Vec<Vec<u64>>, mut b: Vec<u64>) -> Option<Vec<u64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let iv = inv(a[col][col]);
        for x in a[col].iter_mut() {
            *x = mulmod(*x, iv);
        }
        b[col] = mulmod(b[col], iv);
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                let pivot = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot) {
                    *x = (*x + BIG - mulmod(f, y)) % BIG;
                }
                b[r] = (b[r] + BIG - mulmod(f, b[col])) % BIG;
            }
        }
    }
    Some(b)
}

/// The oracle's coefficient of `c_k c_l`, reduced mod `p` into `0..p`.
pub fn oracle_coefficient(oracle: &BTreeMap<Vec<usize>, i64>, k: usize, l: usize, p: u64) -> u64 {
    let mut key = vec![k, l];
    key.sort_unstable_by(|x, y| y.cmp(x));
    oracle.get(&key).copied().unwrap_or(0).rem_euclid(p as i64) as u64
}

/// Library polynomial in `c_i` as `{λ: coefficient mod p}`.
pub fn chern_poly_coefficients(f: &GradedPoly, p: u64) -> BTreeMap<Vec<usize>, u64> {
    let alg = f.algebra();
    f.terms()
        .map(|(mono, c)| {
            let mut lam = Vec::new();
            for &(i, e) in mono.exponents() {
                let idx: usize = alg.gen(i).name.strip_prefix("c_").unwrap().parse().unwrap();
                lam.extend(std::iter::repeat_n(idx, e as usize));
            }
            lam.sort_unstable_by(|x, y| y.cmp(x));
            (lam, residue(c, p))
        })
        .collect()
}

pub fn residue(c: &Scalar, p: u64) -> u64 {
    match c {
        Scalar::Mod { value, .. } => *value,
        Scalar::Rational(q) => {
            let n: i64 = q.numer().try_into().unwrap();
            n.rem_euclid(p as i64) as u64
        }
    }
}

pub fn reduce_oracle(oracle: &BTreeMap<Vec<usize>, i64>, p: u64) -> BTreeMap<Vec<usize>, u64> {
    oracle
        .iter()
        .map(|(k, &v)| (k.clone(), v.rem_euclid(p as i64) as u64))
        .filter(|(_, v)| *v != 0)
        .collect()
}

// ------------------------------------------------------------ corruptions

pub fn steenrod_specs() -> Vec<SpaceSpec> {
    let cat = Catalog::builtin().unwrap();
    [
        Selector::AIII { m: 2, n: 3 },
        Selector::AIII { m: 5, n: 5 },
        Selector::AIII { m: 6, n: 7 },
        Selector::AIII { m: 11, n: 12 },
        Selector::BDI { n: 3 },
        Selector::BDI { n: 7 },
        Selector::EIII,
    ]
    .iter()
    .map(|s| cat.space(s).unwrap())
    .collect()
}

/// Adds a generator `z` in degree `d` to the ring of the recipe.
pub fn with_extra_generator(spec: &mut SpaceSpec, d: u32) {
    let r = spec.steenrod.as_mut().unwrap();
    let old = r.ring.algebra().clone();
    let mut gens = old.gens().to_vec();
    gens.push(GenSymbol::new("z", d));
    let alg = Algebra::new(old.field(), gens).unwrap();
    let rels = r.ring.relations().iter().map(|x| x.rehome(&alg).unwrap()).collect();
    r.ring = Presentation::new(&alg, rels, r.ring.degree_bound()).unwrap();
    if let Action::Table(t) = &r.action {
        let mut fresh = SteenrodTable::new(r.ring.clone());
        for (op, g, e) in t.entries() {
            fresh
                .insert(op, &g.name, e.value.rehome(&alg).unwrap(), e.citation.clone())
                .unwrap();
        }
        r.action = Action::Table(fresh);
    }
}

pub type Corruption = (&'static str, fn(&mut SpaceSpec));

pub fn corruptions() -> Vec<Corruption> {
    vec![
        ("1-alpha", |s| {
            let r = s.steenrod.as_mut().unwrap();
            match r.a.chern_index {
                Some(_) => r.a.chern_index = Some(r.prime + 1),
                None => r.a.source = Factor::sphere(1),
            }
        }),
        ("1-beta", |s| {
            let r = s.steenrod.as_mut().unwrap();
            match r.b.chern_index {
                Some(_) => r.b.chern_index = Some(r.prime + 1),
                None => r.b.source = Factor::sphere(1),
            }
        }),
        ("1-disjunction", |s| {
            let r = s.steenrod.as_mut().unwrap();
            let alg = r.ring.algebra().clone();
            let deg = |n: &str| alg.gen(alg.require(n).unwrap()).degree;
            let (da, db) = (deg(&r.a.class), deg(&r.b.class));
            if r.prime == 2 {
                r.a.source.degrees.push(db);
                r.b.source.degrees.push(da);
                r.a.source.degrees.sort_unstable();
                r.b.source.degrees.sort_unstable();
            } else if da == db {
                r.b.map = format!("{}'", r.b.map);
            } else {
                // |a| != |b| at odd p imposes nothing; force equal degrees
                r.b = r.a.clone();
                r.b.map = format!("{}'", r.a.map);
            }
        }),
        ("2", |s| {
            let r = s.steenrod.as_mut().unwrap();
            let gens = r.ring.algebra().gens().to_vec();
            r.x = gens.iter().find(|g| g.name != r.x).unwrap().name.clone();
        }),
        ("3", |s| {
            let r = s.steenrod.as_ref().unwrap();
            let alg = r.ring.algebra().clone();
            let d = alg.gen(alg.require(&r.b.class).unwrap()).degree;
            with_extra_generator(s, d);
        }),
        ("4", |s| {
            let r = s.steenrod.as_mut().unwrap();
            let alg = r.ring.algebra().clone();
            let d = alg.gen(alg.require(&r.b.class).unwrap()).degree;
            let shift = r.op.degree(r.prime);
            let same = r.a.source == r.b.source;
            r.b.source.degrees.push(d + shift);
            if same {
                // keep A = B so that only condition (4) changes
                r.a.source = r.b.source.clone();
            }
        }),
    ]
}
