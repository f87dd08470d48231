//! Space families, their presentations and maps, and the external facts each
//! verdict rests on.
//!
//! Fixed data (facts, symbol degrees, the `E_7` pullback, mod 2 rings and
//! Steenrod tables) lives in `data/catalog.toml`, embedded at build time and
//! replaceable at run time through [`CATALOG_ENV`]. Parametric families are
//! built here from closed formulas and checked against the declared degrees.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Algebra, GenSymbol, GradedPoly, Substitution};
use crate::presented::Presentation;
use crate::primes::{choose_p, PrimeChoice};
use crate::scalar::{Field, Scalar};
use crate::steenrod::{elementary_symmetric, SteenrodOp, SteenrodTable};
use crate::sullivan::Pullback;

/// Environment variable naming a catalog file to use instead of the built-in one.
pub const CATALOG_ENV: &str = "LOOPCOMM_CATALOG";

pub const FORMAT_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../data/catalog.toml");

/// Largest rank accepted for flag manifolds.
pub const MAX_FLAG_RANK: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    AIII,
    BDI,
    CI,
    DIII,
    EIII,
    EVII,
    FLAG,
    CPn,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::AIII,
        Family::BDI,
        Family::CI,
        Family::DIII,
        Family::EIII,
        Family::EVII,
        Family::FLAG,
        Family::CPn,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Rational,
    Steenrod,
    KnownResult,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Rational => "rational",
            Route::Steenrod => "steenrod",
            Route::KnownResult => "known_result",
        })
    }
}

/// Classical Lie types for flag manifolds. Type `A` of rank `r` is `U(r+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
}

impl FromStr for LieType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(LieType::A),
            "B" => Ok(LieType::B),
            "C" => Ok(LieType::C),
            "D" => Ok(LieType::D),
            "E" | "F" | "G" => Err(Error::NotImplemented(format!("exceptional type {s}"))),
            _ => Err(Error::invalid(format!("unknown Lie type `{s}`"))),
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A single space: family plus parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    AIII { m: u64, n: u64 },
    BDI { n: u64 },
    CI { n: u64 },
    DIII { n: u64 },
    EIII,
    EVII,
    FLAG { lie_type: LieType, rank: u64 },
    CPn { n: u64 },
}

impl Selector {
    pub fn family(&self) -> Family {
        match self {
            Selector::AIII { .. } => Family::AIII,
            Selector::BDI { .. } => Family::BDI,
            Selector::CI { .. } => Family::CI,
            Selector::DIII { .. } => Family::DIII,
            Selector::EIII => Family::EIII,
            Selector::EVII => Family::EVII,
            Selector::FLAG { .. } => Family::FLAG,
            Selector::CPn { .. } => Family::CPn,
        }
    }

    /// Every space with parameters up to `max_param`, in canonical order.
    ///
    /// `AIII` starts at `m = 2` (`m = 1` is `CP^n`) and lists `m <= n` only.
    pub fn all(max_param: u64) -> Vec<Selector> {
        let mut out = Vec::new();
        for m in 2..=max_param {
            for n in m..=max_param {
                out.push(Selector::AIII { m, n });
            }
        }
        out.extend((3..=max_param).map(|n| Selector::BDI { n }));
        out.extend((4..=max_param).map(|n| Selector::CI { n }));
        out.extend((4..=max_param).map(|n| Selector::DIII { n }));
        out.push(Selector::EIII);
        out.push(Selector::EVII);
        for lie_type in [LieType::A, LieType::B, LieType::C, LieType::D] {
            let min = if lie_type == LieType::D { 2 } else { 1 };
            let max = max_param.min(MAX_FLAG_RANK);
            out.extend((min..=max).map(|rank| Selector::FLAG { lie_type, rank }));
        }
        out.extend((1..=max_param).map(|n| Selector::CPn { n }));
        out
    }

    /// Checks the parameter ranges of the family.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid(msg));
        match *self {
            Selector::AIII { m, n } if m == 0 || n == 0 => bad(format!("AIII needs m, n >= 1, got m={m}, n={n}")),
            Selector::BDI { n } if n < 3 => bad(format!("BDI needs n >= 3, got {n}")),
            Selector::CI { n } if n < 4 => bad(format!("CI needs n >= 4, got {n}")),
            Selector::DIII { n } if n < 4 => bad(format!("DIII needs n >= 4, got {n}")),
            Selector::FLAG { rank, .. } if rank == 0 || rank > MAX_FLAG_RANK => {
                bad(format!("FLAG rank must lie in 1..={MAX_FLAG_RANK}, got {rank}"))
            }
            Selector::FLAG {
                lie_type: LieType::D,
                rank: 1,
            } => bad("FLAG type D needs rank >= 2".into()),
            Selector::CPn { n: 0 } => bad("CPn needs n >= 1".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::AIII { m, n } => write!(f, "AIII(m={m},n={n})"),
            Selector::BDI { n } => write!(f, "BDI(n={n})"),
            Selector::CI { n } => write!(f, "CI(n={n})"),
            Selector::DIII { n } => write!(f, "DIII(n={n})"),
            Selector::EIII => f.write_str("EIII"),
            Selector::EVII => f.write_str("EVII"),
            Selector::FLAG { lie_type, rank } => write!(f, "FLAG({lie_type},{rank})"),
            Selector::CPn { n } => write!(f, "CPn(n={n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub id: String,
    pub statement: String,
    pub citation: String,
    pub role: String,
}

/// A documented change applied to input data while loading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repair {
    pub label: String,
    pub term: String,
    pub reason: String,
}

/// Degree of a parametric symbol: `a*i + b*m + c*n + d`, or supplied by data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeExpr {
    Linear { i: i64, m: i64, n: i64, constant: i64 },
    Data,
}

impl DegreeExpr {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "data" {
            return Ok(DegreeExpr::Data);
        }
        let bad = || Error::Catalog(format!("bad degree expression `{s}`"));
        let (mut i, mut m, mut n, mut constant) = (0, 0, 0, 0);
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = compact.as_str();
        if rest.is_empty() {
            return Err(bad());
        }
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if rest.len() == compact.len() => (1, rest),
                _ => return Err(bad()),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let digits = term.chars().take_while(char::is_ascii_digit).count();
            let (num, var) = term.split_at(digits);
            let coeff: i64 = if num.is_empty() {
                1
            } else {
                num.parse().map_err(|_| bad())?
            };
            let slot = match var {
                "" if !num.is_empty() => &mut constant,
                "i" => &mut i,
                "m" => &mut m,
                "n" => &mut n,
                _ => return Err(bad()),
            };
            *slot += sign * coeff;
        }
        Ok(DegreeExpr::Linear { i, m, n, constant })
    }

    pub fn eval(&self, i: Option<u64>, params: &Params, data: Option<u32>) -> Result<u32> {
        let value = match *self {
            DegreeExpr::Data => {
                return data.ok_or_else(|| Error::Catalog("degree declared as data but none supplied".into()));
            }
            DegreeExpr::Linear {
                i: a,
                m: b,
                n: c,
                constant,
            } => {
                let need = |coeff: i64, v: Option<u64>, what: &str| -> Result<i64> {
                    match (coeff, v) {
                        (0, _) => Ok(0),
                        (_, Some(v)) => Ok(coeff * v as i64),
                        (_, None) => Err(Error::Catalog(format!("degree needs `{what}`"))),
                    }
                };
                need(a, i, "i")? + need(b, params.m, "m")? + need(c, params.n, "n")? + constant
            }
        };
        u32::try_from(value)
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::Catalog(format!("nonpositive degree {value}")))
    }
}

/// Family parameters, as far as they apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lie_type: Option<LieType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    format_version: u32,
    fact: Vec<Fact>,
    family: Vec<RawFamily>,
    evii: RawEvii,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: Family,
    space: String,
    route: Route,
    parameters: BTreeMap<String, u64>,
    facts: Vec<String>,
    symbols: BTreeMap<String, String>,
    #[serde(default)]
    relations: Vec<String>,
    #[serde(default)]
    table: Vec<RawTableEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTableEntry {
    op: String,
    generator: String,
    value: String,
    fact: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGen {
    name: String,
    degree: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPullback {
    target: String,
    fiber: String,
    image: String,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvii {
    base: Vec<RawGen>,
    target: Vec<RawGen>,
    pullback: Vec<RawPullback>,
    repairs: Vec<Repair>,
}

/// A validated family entry.
#[derive(Clone, Debug)]
pub struct FamilyEntry {
    pub family: Family,
    pub space: String,
    pub route: Route,
    pub minimums: BTreeMap<String, u64>,
    pub facts: Vec<String>,
    symbols: BTreeMap<String, DegreeExpr>,
    relations: Vec<String>,
    table: Vec<RawTableEntry>,
}

impl FamilyEntry {
    /// Declared degree of generator `name`, matched exactly or by the prefix
    /// before a numeric `_i` suffix.
    pub fn degree(&self, name: &str, params: &Params, data: Option<u32>) -> Result<u32> {
        if let Some(e) = self.symbols.get(name) {
            return e.eval(None, params, data);
        }
        if let Some((prefix, index)) = name.rsplit_once('_') {
            if let (Some(e), Ok(i)) = (self.symbols.get(prefix), index.parse::<u64>()) {
                return e.eval(Some(i), params, data);
            }
        }
        Err(Error::Catalog(format!(
            "{}: symbol `{name}` has no declared degree",
            self.family
        )))
    }

    fn gen(&self, name: &str, params: &Params) -> Result<GenSymbol> {
        Ok(GenSymbol::new(name, self.degree(name, params, None)?))
    }

    /// Checks a generator whose degree comes from data against its declaration.
    fn check_gen(&self, g: &GenSymbol, params: &Params) -> Result<()> {
        let declared = self.degree(&g.name, params, Some(g.degree))?;
        if declared != g.degree {
            return Err(Error::Catalog(format!(
                "{}: {} has degree {} but is declared {declared}",
                self.family, g.name, g.degree
            )));
        }
        Ok(())
    }
}

/// Fixed data for `E_7/E_6 T^1` after repairs.
#[derive(Clone, Debug)]
pub struct EviiData {
    pub base: Presentation,
    pub target: Presentation,
    pub pullback: Pullback,
    pub repairs: Vec<Repair>,
}

#[derive(Clone, Debug)]
pub struct RationalData {
    pub base: Presentation,
    pub target: Presentation,
    pub pullback: Pullback,
}

/// A cohomology factor `Sigma A` or `Sigma B`, described by the degrees in
/// which its mod `p` cohomology is nonzero (including 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub name: String,
    pub degrees: Vec<u32>,
}

impl Factor {
    pub fn sphere(d: u32) -> Self {
        Self {
            name: format!("S^{d}"),
            degrees: vec![0, d],
        }
    }
}

/// A class `a` together with the map `alpha: Sigma A -> X` detecting it.
#[derive(Clone, Debug, Serialize)]
pub struct SphericalClass {
    pub class: String,
    pub map: String,
    pub source: Factor,
    /// Chern index `i`, when sphericality rests on `(i-1)!` being a unit mod `p`.
    pub chern_index: Option<u64>,
    pub fact: String,
}

#[derive(Clone, Debug)]
pub enum Action {
    /// Computed on `H^*(BU(m); F_p)` from the splitting principle.
    Chern { m: usize },
    /// Read from a table of known values.
    Table(SteenrodTable),
}

/// Everything the Steenrod route needs for one space.
#[derive(Clone, Debug)]
pub struct SteenrodRecipe {
    pub prime: u64,
    pub ring: Presentation,
    pub action: Action,
    pub op: SteenrodOp,
    pub x: String,
    pub a: SphericalClass,
    pub b: SphericalClass,
    pub prime_choice: Option<PrimeChoice>,
    /// Name of the space the ring computes, when it differs from the target.
    pub ring_space: String,
}

/// A verdict taken from a certified fact.
#[derive(Clone, Debug, Serialize)]
pub struct KnownResult {
    pub fact: String,
    pub commutative: bool,
    pub reasoning: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    NotHomotopyCommutative,
    HomotopyCommutative,
}

#[derive(Clone, Debug)]
pub struct SpaceSpec {
    pub id: String,
    pub selector: Selector,
    pub family: Family,
    pub space: String,
    pub params: Params,
    pub route: Route,
    pub rational: Option<RationalData>,
    pub steenrod: Option<SteenrodRecipe>,
    pub known: Option<KnownResult>,
    pub facts: Vec<Fact>,
    pub repairs: Vec<Repair>,
    pub notes: Vec<String>,
    pub expectation: Expectation,
}

/// Options applied while building specs.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Overrides the degree bound of mod `p` presentations.
    pub degree_bound: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    facts: Vec<Fact>,
    families: BTreeMap<Family, FamilyEntry>,
    evii: EviiData,
}

impl Catalog {
    pub fn builtin() -> Result<Self> {
        Self::parse(BUILTIN)
    }

    /// The file named by [`CATALOG_ENV`] if set, else the built-in catalog.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Self::builtin(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawCatalog = toml::from_str(text)?;
        if raw.format_version != FORMAT_VERSION {
            return Err(Error::Catalog(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                raw.format_version
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for f in &raw.fact {
            if !seen.insert(f.id.as_str()) {
                return Err(Error::Catalog(format!("duplicate fact `{}`", f.id)));
            }
            if f.citation.trim().is_empty() {
                return Err(Error::Catalog(format!("fact `{}` has no citation", f.id)));
            }
        }
        let mut families = BTreeMap::new();
        for rf in raw.family {
            for id in rf.facts.iter().chain(rf.table.iter().map(|t| &t.fact)) {
                if !seen.contains(id.as_str()) {
                    return Err(Error::Catalog(format!("{}: unknown fact `{id}`", rf.name)));
                }
            }
            let symbols = rf
                .symbols
                .iter()
                .map(|(k, v)| DegreeExpr::parse(v).map(|e| (k.clone(), e)))
                .collect::<Result<_>>()?;
            let entry = FamilyEntry {
                family: rf.name,
                space: rf.space,
                route: rf.route,
                minimums: rf.parameters,
                facts: rf.facts,
                symbols,
                relations: rf.relations,
                table: rf.table,
            };
            if families.insert(rf.name, entry).is_some() {
                return Err(Error::Catalog(format!("duplicate family {}", rf.name)));
            }
        }
        if let Some(missing) = Family::ALL.iter().find(|f| !families.contains_key(f)) {
            return Err(Error::Catalog(format!("family {missing} missing")));
        }
        let evii = load_evii(&raw.evii, &families[&Family::EVII])?;
        Ok(Self {
            facts: raw.fact,
            families,
            evii,
        })
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact(&self, id: &str) -> Result<&Fact> {
        self.facts
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::Catalog(format!("unknown fact `{id}`")))
    }

    pub fn family(&self, family: Family) -> &FamilyEntry {
        &self.families[&family]
    }

    pub fn families(&self) -> impl Iterator<Item = &FamilyEntry> {
        self.families.values()
    }

    pub fn evii(&self) -> &EviiData {
        &self.evii
    }

    pub fn spaces(&self, max_param: u64) -> Result<Vec<SpaceSpec>> {
        Selector::all(max_param).into_iter().map(|s| self.space(&s)).collect()
    }

    pub fn space(&self, selector: &Selector) -> Result<SpaceSpec> {
        self.space_with(selector, &BuildOptions::default())
    }

    pub fn space_with(&self, selector: &Selector, opts: &BuildOptions) -> Result<SpaceSpec> {
        selector.validate()?;
        let entry = self.family(selector.family());
        for (param, &min) in &entry.minimums {
            let value = match (param.as_str(), selector) {
                ("m", Selector::AIII { m, .. }) => *m,
                (
                    "n",
                    Selector::AIII { n, .. }
                    | Selector::BDI { n }
                    | Selector::CI { n }
                    | Selector::DIII { n }
                    | Selector::CPn { n },
                ) => *n,
                ("rank", Selector::FLAG { rank, .. }) => *rank,
                _ => return Err(Error::Catalog(format!("{}: unknown parameter `{param}`", entry.family))),
            };
            if value < min {
                return Err(Error::invalid(format!("{selector}: {param} must be >= {min}")));
            }
        }
        self.build(selector, opts)
    }

    /// Builds a spec without the family's parameter ranges, for probing the
    /// routes outside the cases they are meant for (`CI` with `n = 2`, say).
    pub fn space_unchecked(&self, selector: &Selector) -> Result<SpaceSpec> {
        self.build(selector, &BuildOptions::default())
    }

    fn build(&self, selector: &Selector, opts: &BuildOptions) -> Result<SpaceSpec> {
        let mut spec = match *selector {
            Selector::AIII { m, n } => self.aiii(m, n, opts)?,
            Selector::BDI { n } => self.bdi(n, opts)?,
            Selector::CI { n } => self.ci(n)?,
            Selector::DIII { n } => self.diii(n)?,
            Selector::EIII => self.eiii(opts)?,
            Selector::EVII => self.evii_spec()?,
            Selector::FLAG { lie_type, rank } => self.flag(lie_type, rank)?,
            Selector::CPn { n } => self.cpn(n)?,
        };
        // family facts first, then recipe facts, each once
        let mut ids: Vec<String> = self.family(spec.family).facts.clone();
        if let Some(r) = &spec.steenrod {
            ids.push("whitehead-criterion".into());
            ids.push(r.a.fact.clone());
            ids.push(r.b.fact.clone());
            if let Action::Table(_) = r.action {
                ids.extend(self.family(spec.family).table.iter().map(|t| t.fact.clone()));
            }
        }
        if let Some(k) = &spec.known {
            ids.push(k.fact.clone());
        }
        let mut facts: Vec<Fact> = Vec::new();
        for id in ids {
            if !facts.iter().any(|f| f.id == id) {
                facts.push(self.fact(&id)?.clone());
            }
        }
        spec.facts = facts;
        Ok(spec)
    }

    fn blank(&self, selector: Selector, params: Params, space: String, route: Route) -> SpaceSpec {
        SpaceSpec {
            id: selector.to_string(),
            selector,
            family: selector.family(),
            space,
            params,
            route,
            rational: None,
            steenrod: None,
            known: None,
            facts: Vec::new(),
            repairs: Vec::new(),
            notes: Vec::new(),
            expectation: Expectation::NotHomotopyCommutative,
        }
    }

    /// `BU(m)` over `field` with generators named and graded per `entry`.
    fn bu(&self, entry: &FamilyEntry, m: u64, params: &Params, field: Field) -> Result<Arc<Algebra>> {
        let gens = (1..=m)
            .map(|i| entry.gen(&format!("c_{i}"), params))
            .collect::<Result<Vec<_>>>()?;
        Algebra::new(field, gens)
    }

    fn aiii(&self, m: u64, n: u64, opts: &BuildOptions) -> Result<SpaceSpec> {
        let (lo, hi) = (m.min(n), m.max(n));
        if lo == 1 {
            let mut spec = self.cpn(hi)?;
            spec.id = Selector::AIII { m, n }.to_string();
            spec.notes.push(format!("U({}) / U(1) x U({hi}) is CP^{hi}", hi + 1));
            return Ok(spec);
        }
        let entry = self.family(Family::AIII);
        let params = Params {
            m: Some(lo),
            n: Some(hi),
            ..Params::default()
        };
        let sel = Selector::AIII { m, n };
        let mut spec = self.blank(
            sel,
            params,
            format!("U({})/U({lo}) x U({hi})", lo + hi),
            Route::Steenrod,
        );
        if m > n {
            spec.notes.push(format!("G_({m},{n}) is treated as G_({n},{m})"));
        }
        let m = lo;
        let (p, op, x, k, l, choice) = if m == 2 {
            (2, SteenrodOp::Sq(2), 2, 1, 2, None)
        } else {
            let c = choose_p(m)?;
            (c.p, SteenrodOp::P(1), m - c.p + 2, c.k, m - c.k + 1, Some(c))
        };
        let field = Field::prime(p)?;
        let alg = self.bu(entry, m, &params, field)?;
        let top = alg.gen(x as usize - 1).degree + op.degree(p);
        let ring = Presentation::free(&alg, opts.degree_bound.unwrap_or(top + 2));
        let class = |i: u64| -> Result<SphericalClass> {
            let d = entry.degree(&format!("c_{i}"), &params, None)?;
            Ok(SphericalClass {
                class: format!("c_{i}"),
                map: format!("g_{i}"),
                source: Factor::sphere(d),
                chern_index: Some(i),
                fact: "chern-spherical".into(),
            })
        };
        spec.steenrod = Some(SteenrodRecipe {
            prime: p,
            ring,
            action: Action::Chern { m: m as usize },
            op,
            x: format!("c_{x}"),
            a: class(k)?,
            b: class(l)?,
            prime_choice: choice,
            ring_space: format!("BU({m})"),
        });
        Ok(spec)
    }

    fn bdi(&self, n: u64, opts: &BuildOptions) -> Result<SpaceSpec> {
        let entry = self.family(Family::BDI);
        let sel = Selector::BDI { n };
        let space = format!("SO({})/SO(2) x SO({n})", n + 2);
        let power_of_two = (n + 1).is_power_of_two();
        if !power_of_two {
            let params = Params {
                n: Some(n),
                ..Params::default()
            };
            let mut spec = self.blank(sel, params, space, Route::KnownResult);
            let mut reasoning = Vec::new();
            if n.is_multiple_of(2) {
                reasoning.push(format!("n = {n} is even, so n+1 = {} is odd and greater than 1", n + 1));
            }
            reasoning.push(format!("n+1 = {} is not a power of 2", n + 1));
            spec.known = Some(KnownResult {
                fact: "oshima-whitehead".into(),
                commutative: false,
                reasoning,
            });
            return Ok(spec);
        }
        let m = n.div_ceil(2);
        let params = Params {
            m: Some(m),
            n: Some(n),
            ..Params::default()
        };
        let mut spec = self.blank(sel, params, space, Route::Steenrod);
        let gens = vec![entry.gen("t", &params)?, entry.gen("e", &params)?];
        let e_deg = gens[1].degree;
        let integral = Algebra::new(Field::Rational, gens)?;
        let rels: Vec<String> = entry
            .relations
            .iter()
            .map(|r| r.replace("{m}", &m.to_string()))
            .collect();
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        let bound = opts.degree_bound.unwrap_or(e_deg + 2 + 2);
        let ring = Presentation::parse(&integral, &rels, bound)?.reduce_mod(2)?;
        let table = self.table(entry, &ring)?;
        spec.notes.push(format!(
            "n = 2m - 1 with m = {m}; mod 2 reduction of Z[t, e]/({})",
            rels.join(", ")
        ));
        spec.steenrod = Some(SteenrodRecipe {
            prime: 2,
            ring,
            action: Action::Table(table),
            op: SteenrodOp::Sq(2),
            x: "e".into(),
            a: SphericalClass {
                class: "t".into(),
                map: "alpha".into(),
                source: Factor::sphere(2),
                chern_index: None,
                fact: "hurewicz-t".into(),
            },
            b: SphericalClass {
                class: "e".into(),
                map: "j".into(),
                source: Factor {
                    name: format!("Sigma(S^{} cup_2 e^{n})", n - 1),
                    degrees: vec![0, n as u32, n as u32 + 1],
                },
                chern_index: None,
                fact: "quadric-euler-spherical".into(),
            },
            prime_choice: None,
            ring_space: format!("Q_{n}"),
        });
        Ok(spec)
    }

    fn table(&self, entry: &FamilyEntry, ring: &Presentation) -> Result<SteenrodTable> {
        let mut table = SteenrodTable::new(ring.clone());
        for t in &entry.table {
            let value = GradedPoly::parse(ring.algebra(), &t.value)?;
            let citation = self.fact(&t.fact)?.citation.clone();
            table.insert(SteenrodOp::parse(&t.op)?, &t.generator, value, citation)?;
        }
        Ok(table)
    }

    fn eiii(&self, opts: &BuildOptions) -> Result<SpaceSpec> {
        let entry = self.family(Family::EIII);
        let params = Params::default();
        let mut spec = self.blank(Selector::EIII, params, entry.space.clone(), Route::Steenrod);
        let gens = vec![entry.gen("t", &params)?, entry.gen("w'", &params)?];
        let alg = Algebra::new(Field::Prime(2), gens)?;
        let rels: Vec<&str> = entry.relations.iter().map(String::as_str).collect();
        let bound = opts.degree_bound.unwrap_or(2 + 8 + 2);
        let ring = Presentation::parse(&alg, &rels, bound)?;
        let table = self.table(entry, &ring)?;
        spec.steenrod = Some(SteenrodRecipe {
            prime: 2,
            ring,
            action: Action::Table(table),
            op: SteenrodOp::Sq(2),
            x: "w'".into(),
            a: SphericalClass {
                class: "t".into(),
                map: "alpha".into(),
                source: Factor::sphere(2),
                chern_index: None,
                fact: "hurewicz-t".into(),
            },
            b: SphericalClass {
                class: "w'".into(),
                map: "beta".into(),
                source: Factor::sphere(8),
                chern_index: None,
                fact: "eiii-w-spherical".into(),
            },
            prime_choice: None,
            ring_space: entry.space.clone(),
        });
        Ok(spec)
    }

    fn ci(&self, n: u64) -> Result<SpaceSpec> {
        let entry = self.family(Family::CI);
        let params = Params {
            n: Some(n),
            ..Params::default()
        };
        let mut spec = self.blank(Selector::CI { n }, params, format!("Sp({n})/U({n})"), Route::Rational);
        let base = self.bu(entry, n, &params, Field::Rational)?;
        let target = Algebra::new(
            Field::Rational,
            (1..=n)
                .map(|i| entry.gen(&format!("q_{i}"), &params))
                .collect::<Result<_>>()?,
        )?;
        let mut pullback = Pullback::new();
        for i in 1..=n {
            let image = chern_square_sum(&base, n, 2 * i, |k| if (i + k) % 2 == 0 { 1 } else { -1 });
            let fiber = format!("r_{i}");
            entry.check_gen(&GenSymbol::new(fiber.clone(), 4 * i as u32 - 1), &params)?;
            pullback.push(format!("q_{i}"), fiber, image);
        }
        spec.rational = Some(RationalData {
            base: Presentation::free(&base, 0),
            target: Presentation::free(&target, 0),
            pullback,
        });
        Ok(spec)
    }

    fn diii(&self, n: u64) -> Result<SpaceSpec> {
        let entry = self.family(Family::DIII);
        let params = Params {
            n: Some(n),
            ..Params::default()
        };
        let mut spec = self.blank(
            Selector::DIII { n },
            params,
            format!("SO({})/U({n})", 2 * n),
            Route::Rational,
        );
        let base = self.bu(entry, n, &params, Field::Rational)?;
        let mut gens = (1..n)
            .map(|i| entry.gen(&format!("p_{i}"), &params))
            .collect::<Result<Vec<_>>>()?;
        gens.push(entry.gen("e", &params)?);
        let target = Algebra::new(Field::Rational, gens)?;
        let mut pullback = Pullback::new();
        for i in 1..n {
            let image = chern_square_sum(&base, n, 2 * i, |k| if k % 2 == 0 { 1 } else { -1 });
            let fiber = format!("r_{i}");
            entry.check_gen(&GenSymbol::new(fiber.clone(), 4 * i as u32 - 1), &params)?;
            pullback.push(format!("p_{i}"), fiber, image);
        }
        entry.check_gen(&GenSymbol::new("r_e", 2 * n as u32 - 1), &params)?;
        pullback.push("e", "r_e", GradedPoly::generator(&base, &format!("c_{n}"))?);
        spec.rational = Some(RationalData {
            base: Presentation::free(&base, 0),
            target: Presentation::free(&target, 0),
            pullback,
        });
        Ok(spec)
    }

    fn evii_spec(&self) -> Result<SpaceSpec> {
        let entry = self.family(Family::EVII);
        let mut spec = self.blank(Selector::EVII, Params::default(), entry.space.clone(), Route::Rational);
        spec.rational = Some(RationalData {
            base: self.evii.base.clone(),
            target: self.evii.target.clone(),
            pullback: self.evii.pullback.clone(),
        });
        spec.repairs = self.evii.repairs.clone();
        Ok(spec)
    }

    fn flag(&self, lie_type: LieType, rank: u64) -> Result<SpaceSpec> {
        let entry = self.family(Family::FLAG);
        let params = Params {
            lie_type: Some(lie_type),
            rank: Some(rank),
            ..Params::default()
        };
        let group = match lie_type {
            LieType::A => format!("U({})", rank + 1),
            LieType::B => format!("Spin({})", 2 * rank + 1),
            LieType::C => format!("Sp({rank})"),
            LieType::D => format!("Spin({})", 2 * rank),
        };
        let sel = Selector::FLAG { lie_type, rank };
        let mut spec = self.blank(sel, params, format!("{group}/T"), Route::Rational);
        let (base, invariants) = weyl_invariants(lie_type, rank as usize)?;
        for g in base.gens() {
            entry.check_gen(g, &params)?;
        }
        let mut target_gens = Vec::new();
        let mut pullback = Pullback::new();
        for (i, inv) in invariants.iter().enumerate() {
            let d = inv.degree().expect("invariants are homogeneous");
            let x = GenSymbol::new(format!("x_{}", i + 1), d);
            let y = GenSymbol::new(format!("y_{}", i + 1), d - 1);
            entry.check_gen(&x, &params)?;
            entry.check_gen(&y, &params)?;
            pullback.push(x.name.clone(), y.name, inv.clone());
            target_gens.push(x);
        }
        let target = Algebra::new(Field::Rational, target_gens)?;
        if lie_type == LieType::A {
            spec.notes
                .push("U(n) in place of SU(n): the linear invariant e_1 is eliminated by minimization".into());
        }
        spec.rational = Some(RationalData {
            base: Presentation::free(&base, 0),
            target: Presentation::free(&target, 0),
            pullback,
        });
        Ok(spec)
    }

    fn cpn(&self, n: u64) -> Result<SpaceSpec> {
        let entry = self.family(Family::CPn);
        let params = Params {
            n: Some(n),
            ..Params::default()
        };
        let mut spec = self.blank(Selector::CPn { n }, params, format!("CP^{n}"), Route::KnownResult);
        let x = entry.gen("x", &params)?;
        let y = entry.gen("y", &params)?;
        let base = Algebra::new(Field::Rational, vec![x])?;
        let target = Algebra::new(Field::Rational, vec![GenSymbol::new("s", y.degree + 1)])?;
        let mut pullback = Pullback::new();
        pullback.push(
            "s",
            y.name.clone(),
            GradedPoly::generator(&base, "x")?.pow(n as u32 + 1),
        );
        spec.rational = Some(RationalData {
            base: Presentation::free(&base, 0),
            target: Presentation::free(&target, 0),
            pullback,
        });
        let commutative = n == 3;
        spec.known = Some(KnownResult {
            fact: "ganea-cpn".into(),
            commutative,
            reasoning: vec![if commutative {
                "n = 3".to_string()
            } else {
                format!("n = {n} is not 3")
            }],
        });
        if commutative {
            spec.expectation = Expectation::HomotopyCommutative;
        }
        Ok(spec)
    }
}

/// `Σ_{k+l=s} sign(k) c_k c_l` over ordered pairs, with `c_0 = 1` and
/// `c_i = 0` for `i > n`.
fn chern_square_sum(alg: &Arc<Algebra>, n: u64, s: u64, sign: impl Fn(u64) -> i64) -> GradedPoly {
    let c = |i: u64| -> GradedPoly {
        match i {
            0 => GradedPoly::one(alg),
            i if i > n => GradedPoly::zero(alg),
            i => GradedPoly::var(alg, i as usize - 1),
        }
    };
    let mut out = GradedPoly::zero(alg);
    for k in 0..=s {
        let term = &c(k) * &c(s - k);
        out = &out + &term.scale(&Scalar::from_i64(Field::Rational, sign(k)));
    }
    out
}

fn load_evii(raw: &RawEvii, entry: &FamilyEntry) -> Result<EviiData> {
    let params = Params::default();
    let gens = |list: &[RawGen]| -> Result<Arc<Algebra>> {
        let gens: Vec<GenSymbol> = list.iter().map(|g| GenSymbol::new(g.name.clone(), g.degree)).collect();
        for g in &gens {
            entry.check_gen(g, &params)?;
        }
        Algebra::new(Field::Rational, gens)
    };
    let base = gens(&raw.base)?;
    let target = gens(&raw.target)?;
    let mut used = vec![false; raw.repairs.len()];
    let mut applied = Vec::new();
    let mut pullback = Pullback::new();
    for pb in &raw.pullback {
        let y = target.gen(target.require(&pb.target)?);
        let fiber = GenSymbol::new(pb.fiber.clone(), y.degree - 1);
        entry.check_gen(&fiber, &params)?;
        let label = pb.label.clone().unwrap_or_else(|| pb.fiber.clone());
        let raw_image = GradedPoly::parse(&base, &pb.image)?;
        let mut image = raw_image.homogeneous_component(y.degree);
        let stray = &raw_image - &image;
        for (mono, coeff) in stray.terms() {
            let term = GradedPoly::term(&base, mono.clone(), coeff.clone());
            let ledger = raw
                .repairs
                .iter()
                .enumerate()
                .find(|(_, r)| r.label == label && GradedPoly::parse(&base, &r.term).is_ok_and(|t| t == term));
            let Some((i, r)) = ledger else {
                return Err(Error::Inhomogeneous(format!(
                    "{label} = {}: term {term} has degree {} (expected {}) and no repair entry",
                    pb.image,
                    mono.degree(&base),
                    y.degree
                )));
            };
            used[i] = true;
            applied.push(r.clone());
        }
        if image.is_zero() {
            return Err(Error::Catalog(format!("{label} has no term of degree {}", y.degree)));
        }
        image = image.homogeneous_component(y.degree);
        pullback.push(pb.target.clone(), pb.fiber.clone(), image);
    }
    // entries naming a generator document a renaming rather than a dropped term
    for (i, r) in raw.repairs.iter().enumerate() {
        if used[i] {
            continue;
        }
        let Some(pb) = raw.pullback.iter().find(|p| p.fiber == r.label) else {
            return Err(Error::Catalog(format!(
                "repair entry for `{}` matches nothing",
                r.label
            )));
        };
        if r.term == pb.fiber {
            return Err(Error::Catalog(format!(
                "repair entry for `{}` renames to itself",
                r.label
            )));
        }
        used[i] = true;
        applied.push(r.clone());
    }
    Ok(EviiData {
        base: Presentation::free(&base, 0),
        target: Presentation::free(&target, 0),
        pullback,
        repairs: applied,
    })
}

/// Generators of `H^*(BG; Q) = H^*(BT; Q)^W` for the classical type `lie_type`
/// as polynomials in `t_1, ..., t_N`: elementary symmetric functions of `t`
/// (type `A`, `N = rank + 1`), of `t^2` (types `B`, `C`), or of `t^2` below
/// the top together with `t_1 ... t_N` (type `D`).
pub fn weyl_invariants(lie_type: LieType, rank: usize) -> Result<(Arc<Algebra>, Vec<GradedPoly>)> {
    Selector::FLAG {
        lie_type,
        rank: rank as u64,
    }
    .validate()?;
    let vars = if lie_type == LieType::A { rank + 1 } else { rank };
    let alg = Algebra::new(
        Field::Rational,
        (1..=vars).map(|i| GenSymbol::new(format!("t_{i}"), 2)).collect(),
    )?;
    if lie_type == LieType::A {
        let inv = (1..=vars).map(|j| elementary_symmetric(&alg, j)).collect();
        return Ok((alg, inv));
    }
    // e_j in auxiliary degree-4 classes s_i, then s_i -> t_i^2
    let squares = Algebra::new(
        Field::Rational,
        (1..=vars).map(|i| GenSymbol::new(format!("s_{i}"), 4)).collect(),
    )?;
    let mut sub = Substitution::new(&squares, &alg);
    for i in 0..vars {
        sub.set_index(i, GradedPoly::var(&alg, i).pow(2))?;
    }
    let top = if lie_type == LieType::D { vars - 1 } else { vars };
    let mut inv = (1..=top)
        .map(|j| elementary_symmetric(&squares, j).substitute(&sub))
        .collect::<Result<Vec<_>>>()?;
    if lie_type == LieType::D {
        let pfaffian = (0..vars).fold(GradedPoly::one(&alg), |acc, i| &acc * &GradedPoly::var(&alg, i));
        inv.push(pfaffian);
    }
    Ok((alg, inv))
}

/// Whether every invariant is fixed by the generators of the Weyl group:
/// adjacent transpositions, plus `t_1 -> -t_1` (types `B`, `C`) or
/// `(t_1, t_2) -> (-t_1, -t_2)` (type `D`).
pub fn check_weyl_invariance(lie_type: LieType, alg: &Arc<Algebra>, invariants: &[GradedPoly]) -> Result<bool> {
    let n = alg.len();
    let mut moves: Vec<Substitution> = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut s = Substitution::new(alg, alg);
        s.set_index(i, GradedPoly::var(alg, i + 1))?;
        s.set_index(i + 1, GradedPoly::var(alg, i))?;
        s.identity_rest()?;
        moves.push(s);
    }
    let flips: &[usize] = match lie_type {
        LieType::A => &[],
        LieType::B | LieType::C => &[0],
        LieType::D => &[0, 1],
    };
    if !flips.is_empty() {
        let mut s = Substitution::new(alg, alg);
        for &i in flips {
            s.set_index(i, -&GradedPoly::var(alg, i))?;
        }
        s.identity_rest()?;
        moves.push(s);
    }
    for s in &moves {
        for f in invariants {
            if f.substitute(s)? != *f {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `H^*(G_{m,n}; Z) = Z[c_1..c_m, cbar_1..cbar_n] / (Σ_{i+j=k} c_i cbar_j, k >= 1)`,
/// with rational coefficients (integral data, suitable for `reduce_mod`).
pub fn grassmannian(m: u64, n: u64, degree_bound: u32) -> Result<Presentation> {
    let mut gens: Vec<GenSymbol> = (1..=m)
        .map(|i| GenSymbol::new(format!("c_{i}"), 2 * i as u32))
        .collect();
    gens.extend((1..=n).map(|j| GenSymbol::new(format!("cbar_{j}"), 2 * j as u32)));
    let alg = Algebra::new(Field::Rational, gens)?;
    let c = |i: u64| match i {
        0 => GradedPoly::one(&alg),
        i if i > m => GradedPoly::zero(&alg),
        i => GradedPoly::var(&alg, i as usize - 1),
    };
    let cb = |j: u64| match j {
        0 => GradedPoly::one(&alg),
        j if j > n => GradedPoly::zero(&alg),
        j => GradedPoly::var(&alg, (m + j) as usize - 1),
    };
    let rels = (1..=m + n)
        .map(|k| (0..=k).fold(GradedPoly::zero(&alg), |acc, i| &acc + &(&c(i) * &cb(k - i))))
        .collect();
    Presentation::new(&alg, rels, degree_bound)
}
