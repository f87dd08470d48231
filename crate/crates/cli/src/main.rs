use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loopcomm::catalog::{BuildOptions, Catalog, Family, LieType, Selector, SpaceSpec};
use loopcomm::criteria::{classify_all, Certificate, Verdict};
use loopcomm::primes::{choose_p, primes_in_interval, single_prime_intervals, verify_r2};
use loopcomm::steenrod::power_op_on_chern;
use loopcomm::sullivan::SullivanModel;

const EXIT_FAILURE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "loopcomm",
    version,
    about = "Certificates of non-commutativity for loop spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one space or every space up to `--max-param`.
    Classify(ClassifyArgs),
    /// Dump the Sullivan model of the fiber used by the rational route.
    Model(ModelArgs),
    /// Expand a power operation on a Chern class of BU(m).
    Steenrod(SteenrodArgs),
    /// Prime interval queries.
    Primes(PrimesArgs),
    /// Inspect the catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// Families and facts with citations.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Stage {
    Fiber,
    Minimal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpKind {
    Sq,
    P,
}

#[derive(Args, Debug)]
struct SpaceArgs {
    /// Family: AIII, BDI, CI, DIII, EIII, EVII, FLAG, CPn.
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    /// Lie type for FLAG.
    #[arg(long = "type")]
    lie_type: Option<String>,
    /// Rank for FLAG.
    #[arg(long)]
    rank: Option<u64>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Every space with parameters up to `--max-param`.
    #[arg(long, conflicts_with = "space")]
    all: bool,
    #[arg(long, default_value_t = 8)]
    max_param: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Degree bound for mod p presentations.
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Largest m accepted by prime computations.
    #[arg(long, default_value_t = 10_000_000)]
    prime_cap: u64,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, value_enum, default_value_t = Stage::Minimal)]
    stage: Stage,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SteenrodArgs {
    /// Rank of BU(m).
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum)]
    op: OpKind,
    /// P^k for odd p, Sq^{2k} for p = 2.
    #[arg(long)]
    k: u32,
    /// Index j of the Chern class c_j.
    #[arg(long)]
    class: usize,
}

#[derive(Args, Debug)]
struct PrimesArgs {
    /// Check that (m/2, m] holds two primes for 11 <= m <= limit.
    #[arg(long, requires = "limit")]
    check_r2: bool,
    #[arg(long)]
    limit: Option<u64>,
    /// List the primes in (m/2, m].
    #[arg(long)]
    interval: Option<u64>,
    /// The prime used for AIII with this m.
    #[arg(long)]
    choose: Option<u64>,
    #[arg(long, default_value_t = 10_000_000)]
    prime_cap: u64,
}

/// Failure of a command, carrying its exit code.
struct Exit {
    code: u8,
    msg: String,
}

impl Exit {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<loopcomm::Error> for Exit {
    fn from(e: loopcomm::Error) -> Self {
        let code = if matches!(
            e,
            loopcomm::Error::InvalidArgument(_) | loopcomm::Error::NotImplemented(_) | loopcomm::Error::NotPrime(_)
        ) {
            EXIT_USAGE
        } else {
            EXIT_FAILURE
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_FAILURE,
            msg: e.to_string(),
        }
    }
}

type Run = Result<u8, Exit>;

fn selector(a: &SpaceArgs) -> Result<Selector, Exit> {
    let name = a.space.as_deref().ok_or_else(|| Exit::usage("--space is required"))?;
    let family: Family = name.parse()?;
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| Exit::usage(format!("{family} needs --{flag}")));
    let sel = match family {
        Family::AIII => Selector::AIII {
            m: need(a.m, "m")?,
            n: need(a.n, "n")?,
        },
        Family::BDI => Selector::BDI { n: need(a.n, "n")? },
        Family::CI => Selector::CI { n: need(a.n, "n")? },
        Family::DIII => Selector::DIII { n: need(a.n, "n")? },
        Family::EIII => Selector::EIII,
        Family::EVII => Selector::EVII,
        Family::CPn => Selector::CPn { n: need(a.n, "n")? },
        Family::FLAG => {
            let t = a.lie_type.as_deref().ok_or_else(|| Exit::usage("FLAG needs --type"))?;
            Selector::FLAG {
                lie_type: t.parse::<LieType>()?,
                rank: need(a.rank, "rank")?,
            }
        }
    };
    sel.validate()?;
    Ok(sel)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Exit> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs) -> Run {
    let catalog = Catalog::from_env()?;
    let selectors = if a.all {
        Selector::all(a.max_param)
    } else {
        vec![selector(&a.space)?]
    };
    let specs: Vec<SpaceSpec> = selectors
        .iter()
        .map(|s| catalog.space(s).map_err(Exit::from))
        .collect::<Result<_, _>>()?;
    if let Some(m) = specs
        .iter()
        .filter_map(|s| s.steenrod.as_ref()?.prime_choice.map(|c| c.m))
        .max()
    {
        if m > a.prime_cap {
            return Err(Exit::usage(format!("m = {m} exceeds --prime-cap {}", a.prime_cap)));
        }
    }
    let opts = BuildOptions {
        degree_bound: a.degree_bound,
    };
    let certs: Vec<Certificate> = classify_all(&catalog, &selectors, &opts)
        .into_iter()
        .collect::<Result<_, _>>()?;

    let text = match a.format {
        Format::Json => {
            let v = if a.all {
                serde_json::Value::Array(certs.iter().map(Certificate::to_json).collect())
            } else {
                certs[0].to_json()
            };
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Text => {
            let mut s: String = certs.iter().map(|c| c.to_text() + "\n").collect();
            let negative = certs
                .iter()
                .filter(|c| c.verdict == Verdict::NotHomotopyCommutative)
                .count();
            let positive = certs
                .iter()
                .filter(|c| c.verdict == Verdict::HomotopyCommutative)
                .count();
            let _ = writeln!(
                s,
                "{} spaces: {negative} not homotopy commutative, {positive} homotopy commutative, {} inconclusive",
                certs.len(),
                certs.len() - negative - positive
            );
            s
        }
    };
    emit(&a.output, &text)?;

    let specs_certs = specs.iter().zip(&certs);
    if certs.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        for c in certs.iter().filter(|c| c.verdict == Verdict::Inconclusive) {
            let why = c
                .failure
                .as_ref()
                .map(|f| format!("({}) {}", f.condition, f.detail))
                .unwrap_or_default();
            eprintln!("inconclusive: {} {why}", c.space);
        }
        return Ok(EXIT_INCONCLUSIVE);
    }
    let mut code = 0;
    for (spec, c) in specs_certs {
        if !c.verdict.matches(spec.expectation) {
            eprintln!("unexpected verdict for {}: {}", c.space, c.verdict);
            code = EXIT_FAILURE;
        }
    }
    Ok(code)
}

fn cmd_model(a: &ModelArgs) -> Run {
    let catalog = Catalog::from_env()?;
    let spec = catalog.space(&selector(&a.space)?)?;
    let r = spec
        .rational
        .as_ref()
        .ok_or_else(|| Exit::usage(format!("{} has no rational model", spec.id)))?;
    let mut model = SullivanModel::fiber_model(&r.base, &r.target, &r.pullback)?;
    if let Stage::Minimal = a.stage {
        model = model.minimize()?;
    }
    let stage = match a.stage {
        Stage::Fiber => "fiber",
        Stage::Minimal => "minimal",
    };
    let text = match a.format {
        Format::Text => format!("{} {stage}\n{}", spec.id, model.dump_text()),
        Format::Json => {
            let v = serde_json::json!({
                "space": spec.id,
                "stage": stage,
                "model": model.to_json(),
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    emit(&a.output, &text)?;
    Ok(0)
}

fn cmd_steenrod(a: &SteenrodArgs) -> Run {
    match (a.op, a.p) {
        (OpKind::Sq, 2) => {}
        (OpKind::P, p) if p != 2 => {}
        (op, p) => {
            return Err(Exit::usage(
                format!("--op {op:?} does not match --p {p}").to_lowercase(),
            ))
        }
    }
    let e = power_op_on_chern(a.m, a.p, a.k, a.class)?;
    println!("{e}");
    Ok(0)
}

fn cmd_primes(a: &PrimesArgs) -> Run {
    let cap = |m: u64| {
        if m > a.prime_cap {
            Err(Exit::usage(format!("{m} exceeds --prime-cap {}", a.prime_cap)))
        } else {
            Ok(m)
        }
    };
    let mut did = false;
    let mut code = 0;
    if a.check_r2 {
        did = true;
        let limit = cap(a.limit.expect("required by clap"))?;
        if verify_r2(limit)? {
            println!("OK");
        } else {
            let bad: Vec<String> = single_prime_intervals(limit)
                .iter()
                .filter(|&&m| m >= 11)
                .map(u64::to_string)
                .collect();
            println!("FAIL: single prime for m = {}", bad.join(", "));
            code = EXIT_FAILURE;
        }
    }
    if let Some(m) = a.interval {
        did = true;
        let ps: Vec<String> = primes_in_interval(cap(m)?)?.iter().map(u64::to_string).collect();
        println!("({}/2, {m}]: {}", m, ps.join(" "));
    }
    if let Some(m) = a.choose {
        did = true;
        let c = choose_p(cap(m)?)?;
        println!("m = {m}: p = {}, k = {}, {:?}", c.p, c.k, c.justification);
    }
    if !did {
        return Err(Exit::usage("primes needs --check-r2, --interval or --choose"));
    }
    Ok(code)
}

fn cmd_catalog_list() -> Run {
    let catalog = Catalog::from_env()?;
    let mut s = String::new();
    for f in catalog.families() {
        let mins: String = f.minimums.iter().map(|(k, v)| format!(", {k} >= {v}")).collect();
        let _ = writeln!(s, "{} {} [{}{mins}]", f.family, f.space, f.route);
        for id in &f.facts {
            let _ = writeln!(s, "  uses {id}");
        }
    }
    let _ = writeln!(s);
    for f in catalog.facts() {
        let _ = writeln!(s, "{}: {}", f.id, f.statement);
        let _ = writeln!(s, "  {}", f.citation);
    }
    print!("{s}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Model(a) => cmd_model(a),
        Command::Steenrod(a) => cmd_steenrod(a),
        Command::Primes(a) => cmd_primes(a),
        Command::Catalog {
            action: CatalogAction::List,
        } => cmd_catalog_list(),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
