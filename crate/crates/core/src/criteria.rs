//! Decision engine: runs the rational and Steenrod routes on catalog entries
//! and assembles certificates.
//!
//! Both routes are one-sided. Computation alone can only ever conclude "not
//! homotopy commutative"; a positive verdict comes from a certified fact.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    Action, Catalog, Expectation, Fact, Factor, KnownResult, Repair, Route, Selector, SpaceSpec, SphericalClass,
    SteenrodRecipe,
};
use crate::error::{Error, Result};
use crate::graded::GradedPoly;
use crate::primes::PrimeChoice;
use crate::steenrod::{power_op_on_chern, SteenrodExpansion, SteenrodOp};
use crate::sullivan::{Elimination, SullivanModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotHomotopyCommutative,
    HomotopyCommutative,
    Inconclusive,
}

impl Verdict {
    pub fn is_definitive(self) -> bool {
        self != Verdict::Inconclusive
    }

    /// Whether the verdict is the one the catalog expects.
    pub fn matches(self, e: Expectation) -> bool {
        matches!(
            (self, e),
            (Verdict::NotHomotopyCommutative, Expectation::NotHomotopyCommutative)
                | (Verdict::HomotopyCommutative, Expectation::HomotopyCommutative)
        )
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NotHomotopyCommutative => "not homotopy commutative",
            Verdict::HomotopyCommutative => "homotopy commutative",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Checked,
    CertifiedFact,
    Failed,
    Unavailable,
}

impl Status {
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Checked | Status::CertifiedFact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub id: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fact: Option<String>,
}

impl Condition {
    fn new(id: &str, status: Status, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            status,
            detail: detail.into(),
            fact: None,
        }
    }

    fn checked(id: &str, detail: impl Into<String>) -> Self {
        Self::new(id, Status::Checked, detail)
    }

    fn fact(id: &str, fact: &str, detail: impl Into<String>) -> Self {
        Self {
            fact: Some(fact.into()),
            ..Self::new(id, Status::CertifiedFact, detail)
        }
    }

    fn from_result(id: &str, r: Result<Condition>) -> Self {
        r.unwrap_or_else(|e| Self::new(id, Status::Unavailable, e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticTerm {
    pub generator: String,
    pub degree: u32,
    pub differential: GradedPoly,
    pub quadratic_part: GradedPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct SteenrodWitness {
    pub prime: u64,
    pub ring: String,
    pub x: String,
    pub op: SteenrodOp,
    pub expansion: String,
    pub term: String,
    pub coefficient: String,
    pub a: String,
    pub b: String,
    pub degree_a: u32,
    pub degree_b: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_choice: Option<PrimeChoice>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    D2 {
        #[serde(flatten)]
        first: QuadraticTerm,
        generators: Vec<String>,
        eliminated: Vec<Elimination>,
        alternates: Vec<QuadraticTerm>,
    },
    Steenrod(SteenrodWitness),
    Fact {
        fact: String,
        commutative: bool,
        reasoning: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactRef {
    pub id: String,
    pub citation: String,
}

impl From<&Fact> for FactRef {
    fn from(f: &Fact) -> Self {
        Self {
            id: f.id.clone(),
            citation: f.citation.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nilpotency {
    pub lower: u32,
    pub upper: u32,
    pub justification: Vec<String>,
}

/// The first condition that kept a certificate from a definitive verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: String,
    pub status: Status,
    pub detail: String,
}

/// Outcome of the rational route on a space whose verdict comes from a fact.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub route: Route,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub space: String,
    pub name: String,
    pub verdict: Verdict,
    pub route: Route,
    pub witness: Option<Witness>,
    pub conditions: Vec<Condition>,
    pub facts: Vec<FactRef>,
    pub nilpotency: Option<Nilpotency>,
    pub repairs: Vec<Repair>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl Certificate {
    fn start(spec: &SpaceSpec, route: Route) -> Self {
        Self {
            space: spec.id.clone(),
            name: spec.space.clone(),
            verdict: Verdict::Inconclusive,
            route,
            witness: None,
            conditions: Vec::new(),
            facts: spec.facts.iter().map(FactRef::from).collect(),
            nilpotency: None,
            repairs: spec.repairs.clone(),
            notes: spec.notes.clone(),
            cross_check: None,
            failure: None,
        }
    }

    /// Settles the verdict: `positive` unless a condition is not ok or the
    /// witness is missing.
    fn finish(mut self, positive: Verdict) -> Self {
        self.failure = self.conditions.iter().find(|c| !c.status.is_ok()).map(|c| Failure {
            condition: c.id.clone(),
            status: c.status,
            detail: c.detail.clone(),
        });
        if self.failure.is_none() && self.witness.is_none() {
            self.failure = Some(Failure {
                condition: "witness".into(),
                status: Status::Unavailable,
                detail: "no witness".into(),
            });
        }
        self.verdict = if self.failure.is_some() {
            Verdict::Inconclusive
        } else {
            positive
        };
        if self.verdict == Verdict::Inconclusive {
            self.nilpotency = None;
        }
        self
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }

    /// Checks the structural invariants of a certificate.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::invalid(format!("{}: {msg}", self.space)));
        match self.verdict {
            Verdict::Inconclusive => {
                let Some(f) = &self.failure else {
                    return bad("inconclusive certificate without a failure");
                };
                if f.status.is_ok() {
                    return bad("failure recorded with a passing status");
                }
            }
            v => {
                if self.witness.is_none() {
                    return bad("definitive verdict without a witness");
                }
                if let Some(c) = self.conditions.iter().find(|c| !c.status.is_ok()) {
                    return bad(&format!("definitive verdict with condition {} {:?}", c.id, c.status));
                }
                if self.failure.is_some() {
                    return bad("definitive verdict with a failure");
                }
                if v == Verdict::HomotopyCommutative && !matches!(self.witness, Some(Witness::Fact { .. })) {
                    return bad("positive verdict not backed by a fact");
                }
            }
        }
        for c in &self.conditions {
            if c.status == Status::CertifiedFact {
                let Some(id) = &c.fact else {
                    return bad(&format!("condition {} certified without a fact", c.id));
                };
                if !self.facts.iter().any(|f| &f.id == id) {
                    return bad(&format!("condition {} cites unlisted fact {id}", c.id));
                }
            }
        }
        if self.nilpotency.is_some() && !self.space.starts_with("FLAG") {
            return bad("nilpotency bounds outside flag manifolds");
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificates serialize")
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        let _ = writeln!(s, "{} {}: {} [{}]", self.space, self.name, self.verdict, self.route);
        match &self.witness {
            Some(Witness::D2 { first, alternates, .. }) => {
                let _ = writeln!(s, "  witness: d{} = {}", first.generator, first.differential);
                let _ = writeln!(s, "  quadratic part: {}", first.quadratic_part);
                for a in alternates {
                    let _ = writeln!(
                        s,
                        "  alternate: d{} has quadratic part {}",
                        a.generator, a.quadratic_part
                    );
                }
            }
            Some(Witness::Steenrod(w)) => {
                let _ = writeln!(s, "  witness: {} (mod {})", w.expansion, w.prime);
                let _ = writeln!(s, "  term: {} with coefficient {}", w.term, w.coefficient);
            }
            Some(Witness::Fact { fact, reasoning, .. }) => {
                let _ = writeln!(s, "  fact: {fact}");
                for r in reasoning {
                    let _ = writeln!(s, "  because: {r}");
                }
            }
            None => {}
        }
        for c in &self.conditions {
            let fact = c.fact.as_deref().map(|f| format!(" [{f}]")).unwrap_or_default();
            let _ = writeln!(s, "  ({}) {:?}{fact}: {}", c.id, c.status, c.detail);
        }
        if let Some(n) = &self.nilpotency {
            let _ = writeln!(s, "  nilpotency: {} <= honil <= {}", n.lower, n.upper);
        }
        for r in &self.repairs {
            let _ = writeln!(s, "  repair {}: {} ({})", r.label, r.term, r.reason);
        }
        if let Some(c) = &self.cross_check {
            let _ = writeln!(s, "  cross-check ({}): {}", c.route, c.verdict);
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(s, "  failure: ({}) {}", f.condition, f.detail);
        }
        s
    }
}

fn quadratic_term(model: &SullivanModel, w: &crate::sullivan::D2Witness) -> QuadraticTerm {
    QuadraticTerm {
        generator: w.generator.name.clone(),
        degree: w.generator.degree,
        differential: model
            .differential(&w.generator.name)
            .expect("witness generator")
            .clone(),
        quadratic_part: w.quadratic_part.clone(),
    }
}

/// Fiber model, minimization and a search for a nonzero quadratic differential.
pub fn rational_route(spec: &SpaceSpec) -> Result<Certificate> {
    let data = spec
        .rational
        .as_ref()
        .ok_or_else(|| Error::InsufficientData(format!("{}: no rational data", spec.id)))?;
    let mut cert = Certificate::start(spec, Route::Rational);
    let model = SullivanModel::fiber_model(&data.base, &data.target, &data.pullback)?;
    if !model.check_d_squared() {
        return Err(Error::InvalidModel(format!("{}: d^2 != 0 in the fiber model", spec.id)));
    }
    cert.conditions.push(Condition::fact(
        "model",
        "borel-transgression",
        format!("fiber model on {} generators, pure, d^2 = 0", model.generators().len()),
    ));
    let (minimal, eliminated) = model.minimize_with_log()?;
    cert.conditions.push(Condition::checked(
        "minimal",
        format!(
            "{} contractible pair(s) removed; generator degrees {:?}",
            eliminated.len(),
            minimal.degree_profile()
        ),
    ));
    let witnesses = minimal.d2_witnesses()?;
    match witnesses.split_first() {
        Some((first, rest)) => {
            cert.conditions.push(Condition::fact(
                "d2",
                "quadratic-whitehead",
                format!(
                    "d{} has nonzero quadratic part {}",
                    first.generator.name, first.quadratic_part
                ),
            ));
            cert.witness = Some(Witness::D2 {
                first: quadratic_term(&minimal, first),
                generators: minimal.generators().iter().map(|g| g.name.clone()).collect(),
                eliminated,
                alternates: rest.iter().map(|w| quadratic_term(&minimal, w)).collect(),
            });
        }
        None => cert.conditions.push(Condition::new(
            "d2",
            Status::Failed,
            "every differential of the minimal model has word length >= 3",
        )),
    }
    if spec.family == crate::catalog::Family::FLAG && cert.witness.is_some() {
        cert.nilpotency = Some(flag_nilpotency());
    }
    Ok(cert.finish(Verdict::NotHomotopyCommutative))
}

fn flag_nilpotency() -> Nilpotency {
    Nilpotency {
        lower: 2,
        upper: 2,
        justification: vec![
            "lower: a nonzero quadratic differential makes the loop space non-commutative, so honil >= 2".into(),
            "upper: T is abelian, so honil(T) = 1 [honil-torus]".into(),
            "upper: honil(Omega(G/T)) <= honil(T) + 1 = 2 [honil-fiber]".into(),
        ],
    }
}

/// Degree `|θ|` of `Sq^i` or `P^i` at `p`.
fn op_degree(op: SteenrodOp, i: u32, p: u64) -> u32 {
    op.with_index(i).degree(p)
}

/// Whether `op_i` kills every class of degree `d` in a suspension whose
/// cohomology is concentrated in `degrees`.
fn vanishes_on(op: SteenrodOp, i: u32, p: u64, d: u32, degrees: &[u32]) -> bool {
    if i == 0 {
        return false;
    }
    let unstable = match op {
        SteenrodOp::Sq(_) => i > d,
        SteenrodOp::P(_) => 2 * i > d,
    };
    d == 0 || unstable || !degrees.contains(&(d + op_degree(op, i, p)))
}

/// Condition (4): every Cartan term `θ_i(u) × θ_{s-i}(v)` on
/// `H^*(ΣA × ΣB)` vanishes because one of its factors does.
pub fn factor_rule(op: SteenrodOp, p: u64, a: &Factor, b: &Factor) -> Condition {
    let s = op.index();
    for &du in &a.degrees {
        for &dv in &b.degrees {
            for i in 0..=s {
                if !vanishes_on(op, i, p, du, &a.degrees) && !vanishes_on(op, s - i, p, dv, &b.degrees) {
                    return Condition::new(
                        "4",
                        Status::Unavailable,
                        format!(
                            "degree rule cannot decide {} x {} on H^{du}({}) x H^{dv}({})",
                            op.with_index(i),
                            op.with_index(s - i),
                            a.name,
                            b.name
                        ),
                    );
                }
            }
        }
    }
    Condition::checked("4", format!("{op} vanishes on H^*({} x {}) by degrees", a.name, b.name))
}

fn spherical(c: &SphericalClass, p: u64, degree: u32, id: &str) -> Condition {
    if !c.source.degrees.contains(&degree) {
        return Condition::new(
            id,
            Status::Failed,
            format!("{} has degree {degree}, absent from {}", c.class, c.source.name),
        );
    }
    match c.chern_index {
        Some(i) if i > p => Condition::new(
            id,
            Status::Failed,
            format!("{}: sphericality needs {i} <= p = {p}", c.class),
        ),
        Some(i) => Condition::fact(
            id,
            &c.fact,
            format!(
                "{}^*({}) = ±{}! times a generator, a unit since {i} <= {p}",
                c.map,
                c.class,
                i - 1
            ),
        ),
        None => Condition::fact(id, &c.fact, format!("{}^*({}) != 0", c.map, c.class)),
    }
}

/// Condition (1), the disjunction part.
fn disjunction(r: &SteenrodRecipe, deg_a: u32, deg_b: u32) -> Condition {
    let (a, b) = (&r.a, &r.b);
    if r.prime == 2 {
        if !a.source.degrees.contains(&deg_b) {
            return Condition::checked(
                "1-disjunction",
                format!("{}^*({}) = 0: H^{deg_b}({}) = 0", a.map, b.class, a.source.name),
            );
        }
        if !b.source.degrees.contains(&deg_a) {
            return Condition::checked(
                "1-disjunction",
                format!("{}^*({}) = 0: H^{deg_a}({}) = 0", b.map, a.class, b.source.name),
            );
        }
        return Condition::new(
            "1-disjunction",
            Status::Unavailable,
            "neither alpha^*(b) = 0 nor beta^*(a) = 0 follows from degrees",
        );
    }
    if deg_a != deg_b {
        return Condition::checked(
            "1-disjunction",
            format!("|a| = {deg_a} != {deg_b} = |b|, p odd: nothing to check"),
        );
    }
    if a.class == b.class && a.map == b.map && a.source == b.source {
        Condition::checked(
            "1-disjunction",
            format!("|a| = |b|, p odd: a = b = {}, alpha = beta = {}", a.class, a.map),
        )
    } else {
        Condition::new(
            "1-disjunction",
            Status::Failed,
            format!(
                "|a| = |b| with p odd requires a = b and alpha = beta ({} vs {})",
                a.class, b.class
            ),
        )
    }
}

fn expansion(r: &SteenrodRecipe, x: &GradedPoly) -> Result<SteenrodExpansion> {
    let field = r.op.check_field(r.ring.field())?;
    match &r.action {
        Action::Table(t) => t.apply(r.op, x),
        Action::Chern { m } => {
            let j =
                r.x.strip_prefix("c_")
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::NotImplemented(format!("Chern action on {}", r.x)))?;
            let k = match r.op {
                SteenrodOp::Sq(i) if i % 2 == 0 => i / 2,
                SteenrodOp::P(i) => i,
                op => return Err(Error::NotImplemented(format!("{op} on Chern classes"))),
            };
            let e = power_op_on_chern(*m, field, k, j)?;
            let alg = r.ring.algebra();
            let result = r.ring.normal_form(&e.result.rehome(alg)?)?;
            Ok(SteenrodExpansion {
                input: x.clone(),
                op: r.op,
                decomposable: result.filter(|m| m.word_length() >= 2),
                result,
            })
        }
    }
}

/// Conditions (2) and (3) plus the witness.
fn compute_23(r: &SteenrodRecipe, cert: &mut Certificate) -> Result<(Condition, Condition)> {
    let alg = r.ring.algebra();
    let x = GradedPoly::generator(alg, &r.x)?;
    let a = GradedPoly::generator(alg, &r.a.class)?;
    let b = GradedPoly::generator(alg, &r.b.class)?;
    let (deg_a, deg_b) = (
        alg.gen(alg.require(&r.a.class)?).degree,
        alg.gen(alg.require(&r.b.class)?).degree,
    );
    let e = expansion(r, &x)?;
    let ab = r.ring.normal_form(&(&a * &b))?;
    let coefficient = e.coefficient_of(&[&r.a.class, &r.b.class])?;
    let term = ab.to_string();
    let c2 = if !e.is_decomposable() {
        Condition::new("2", Status::Failed, format!("{e} has an indecomposable term"))
    } else if ab.is_zero() {
        Condition::new(
            "2",
            Status::Failed,
            format!("{} {} = 0 in the ring", r.a.class, r.b.class),
        )
    } else if coefficient.is_zero() {
        Condition::new("2", Status::Failed, format!("{e} does not contain {term}"))
    } else {
        Condition::checked(
            "2",
            format!("{e}: decomposable, coefficient of {term} is {coefficient}"),
        )
    };
    let qa = r.ring.indecomposables_dim(deg_a)?;
    let qb = r.ring.indecomposables_dim(deg_b)?;
    let detail = format!("dim QH^{deg_a} = {qa}, dim QH^{deg_b} = {qb}");
    let c3 = if qa == 1 && qb == 1 {
        Condition::checked("3", detail)
    } else {
        Condition::new("3", Status::Failed, detail)
    };
    cert.witness = Some(Witness::Steenrod(SteenrodWitness {
        prime: r.prime,
        ring: format!("H^*({}; F_{})", r.ring_space, r.prime),
        x: r.x.clone(),
        op: r.op,
        expansion: e.to_string(),
        term,
        coefficient: coefficient.to_string(),
        a: r.a.class.clone(),
        b: r.b.class.clone(),
        degree_a: deg_a,
        degree_b: deg_b,
        prime_choice: r.prime_choice,
    }));
    Ok((c2, c3))
}

/// The Whitehead product criterion with the recipe's `(x, θ, a, b)`.
pub fn steenrod_route(spec: &SpaceSpec) -> Result<Certificate> {
    let r = spec
        .steenrod
        .as_ref()
        .ok_or_else(|| Error::InsufficientData(format!("{}: no Steenrod recipe", spec.id)))?;
    let mut cert = Certificate::start(spec, Route::Steenrod);
    let alg = r.ring.algebra();
    let degree = |name: &str| alg.require(name).map(|i| alg.gen(i).degree);
    let (c2, c3) = match compute_23(r, &mut cert) {
        Ok(pair) => pair,
        Err(e) => {
            cert.witness = None;
            let c = Condition::new("2", Status::Unavailable, e.to_string());
            (c, Condition::new("3", Status::Unavailable, "not reached"))
        }
    };
    let c1a = Condition::from_result(
        "1-alpha",
        degree(&r.a.class).map(|d| spherical(&r.a, r.prime, d, "1-alpha")),
    );
    let c1b = Condition::from_result(
        "1-beta",
        degree(&r.b.class).map(|d| spherical(&r.b, r.prime, d, "1-beta")),
    );
    let c1d = Condition::from_result(
        "1-disjunction",
        degree(&r.a.class).and_then(|da| Ok(disjunction(r, da, degree(&r.b.class)?))),
    );
    cert.conditions.extend([
        c1a,
        c1b,
        c1d,
        c2,
        c3,
        factor_rule(r.op, r.prime, &r.a.source, &r.b.source),
    ]);
    if spec.family == crate::catalog::Family::AIII {
        let m = spec.params.m.unwrap_or(0);
        cert.conditions.extend([
            Condition::fact(
                "lift-equivalence",
                "grassmannian-lift",
                format!("j: G_(m,n) -> BU({m}) is a {}-equivalence since m <= n", 2 * m + 1),
            ),
            Condition::fact(
                "lift-maps",
                "grassmannian-lift",
                "each g_i lifts to gbar_i with j gbar_i = g_i for i <= m",
            ),
            Condition::fact(
                "lift-naturality",
                "grassmannian-lift",
                "j [gbar_k, gbar_l] = [g_k, g_l], so [g_k, g_l] != 0 gives [gbar_k, gbar_l] != 0",
            ),
        ]);
    }
    cert.conditions.push(Condition::fact(
        "conclusion",
        "whitehead-criterion",
        format!(
            "[{}, {}] != 0, so the loop space is not homotopy commutative",
            r.a.map, r.b.map
        ),
    ));
    Ok(cert.finish(Verdict::NotHomotopyCommutative))
}

fn known_route(spec: &SpaceSpec, k: &KnownResult) -> Certificate {
    let mut cert = Certificate::start(spec, Route::KnownResult);
    cert.conditions
        .push(Condition::fact("known", &k.fact, k.reasoning.join("; ")));
    if spec.family == crate::catalog::Family::BDI {
        cert.conditions.push(Condition::fact(
            "transfer",
            "quadric-fibration",
            "SO(n+2)/SO(n) -> Q_n is injective on pi_* for * >= 2",
        ));
    }
    cert.witness = Some(Witness::Fact {
        fact: k.fact.clone(),
        commutative: k.commutative,
        reasoning: k.reasoning.clone(),
    });
    cert.finish(if k.commutative {
        Verdict::HomotopyCommutative
    } else {
        Verdict::NotHomotopyCommutative
    })
}

/// Dispatches on the route of `spec`.
pub fn classify(spec: &SpaceSpec) -> Result<Certificate> {
    let cert = match spec.route {
        Route::Rational => rational_route(spec)?,
        Route::Steenrod => steenrod_route(spec)?,
        Route::KnownResult => {
            let k = spec
                .known
                .as_ref()
                .ok_or_else(|| Error::InsufficientData(format!("{}: no known result", spec.id)))?;
            let mut cert = known_route(spec, k);
            if spec.rational.is_some() {
                let r = rational_route(spec)?;
                cert.cross_check = Some(CrossCheck {
                    route: Route::Rational,
                    verdict: r.verdict,
                    witness: r.witness,
                });
            }
            cert
        }
    };
    cert.validate()?;
    Ok(cert)
}

/// Certificates for `selectors`, computed in parallel and returned in input order.
pub fn classify_all(
    catalog: &Catalog,
    selectors: &[Selector],
    opts: &crate::catalog::BuildOptions,
) -> Vec<Result<Certificate>> {
    selectors
        .par_iter()
        .map(|s| catalog.space_with(s, opts).and_then(|spec| classify(&spec)))
        .collect()
}
