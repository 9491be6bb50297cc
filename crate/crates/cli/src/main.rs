use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use finvic::io::{generator_entries, inputs_digest, parse_generators, GeneratorEntry, MorphismFile, Report};
use finvic::noether::{initial_module_to_degree, span_to_degree, CoefficientField};
use finvic::ordering::{iota, partial_leq, total_compare, DEFAULT_NODE_CAP};
use finvic::ovic::{
    compose_vic, count_ovic, enumerate_ovic, enumerate_vic, factor_vic, free_rows, is_column_adapted, s_function,
    HomCache, OvicMorphism,
};
use finvic::ring::{builtin, BuildOptions, FiniteRing, RingFile, RingSpec};
use finvic::selftest::{self, ExtraRing, Profile, SelftestConfig, DEFAULT_BUDGET};
use finvic::wedderburn::AwEmbedding;

#[derive(Parser)]
#[command(name = "finvic", version, about = "Finite rings, ordered VIC morphisms and truncated module spans")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect and build finite rings.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Check and factor VIC morphisms.
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// Total and insertion orders on ordered morphisms.
    #[command(subcommand)]
    Order(OrderCmd),
    /// List Hom sets between free modules.
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    /// Submodules of P(d) over a coefficient field.
    #[command(subcommand)]
    Noether(NoetherCmd),
    /// Run the acceptance suites.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum RingCmd {
    /// Radical, quotient and block structure of a ring.
    Describe {
        #[arg(long = "in")]
        input: String,
    },
    /// Full Artin-Wedderburn report with verified invariants.
    Wedderburn {
        #[arg(long = "in")]
        input: String,
    },
    /// Emit a ring file from a built-in name or a constructor spec.
    Build {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        builtin: Option<String>,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Also write the bare ring file here.
        #[arg(long)]
        ring_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MorphismArgs {
    #[arg(long)]
    ring: String,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum MorphismCmd {
    /// Column-adaptedness, S-function and row partition.
    Check(MorphismArgs),
    /// Factor as an automorphism followed by an ordered morphism.
    Factor(MorphismArgs),
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Compare two ordered morphisms: LT, EQ or GT, plus an insertion chain if one exists.
    Compare {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
    },
    /// The word of an ordered morphism.
    Iota(MorphismArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Report only the count.
    #[arg(long)]
    count_only: bool,
}

#[derive(Subcommand)]
enum EnumerateCmd {
    /// Hom_OVIC(R^d, R^n) in sorted order.
    Ovic(EnumerateArgs),
    /// Hom_VIC(R^d, R^n).
    Vic(EnumerateArgs),
}

#[derive(Subcommand)]
enum NoetherCmd {
    /// Degree-truncated span of generators in P(d).
    Span {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "F2")]
        k: String,
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(value_parser = ["quick", "full"], default_value = "quick")]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Extra ring file added to the ring-level suites.
    #[arg(long)]
    extra_ring: Vec<PathBuf>,
}

/// Outcome of a verb before it is wrapped into a [`Report`].
struct Outcome {
    verb: &'static str,
    inputs: Vec<Vec<u8>>,
    result: Value,
    verified: BTreeMap<String, bool>,
    success: bool,
}

impl Outcome {
    fn new(verb: &'static str, inputs: Vec<Vec<u8>>, result: Value) -> Self {
        Outcome { verb, inputs, result, verified: BTreeMap::new(), success: true }
    }

    fn verify(mut self, name: &str, ok: bool) -> Self {
        self.verified.insert(name.into(), ok);
        self
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn parse<T: serde::de::DeserializeOwned>(bytes: &[u8], path: &Path) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| finvic::Error::InvalidInput(format!("{}: {e}", path.display())).into())
}

/// Loads `builtin:NAME` or a ring file path; returns the ring and the bytes that identify it.
fn load_ring(arg: &str) -> Result<(FiniteRing, Vec<u8>)> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return Ok((builtin(name)?, arg.as_bytes().to_vec()));
    }
    let path = Path::new(arg);
    let bytes = read(path)?;
    let file: RingFile = parse(&bytes, path)?;
    Ok((FiniteRing::from_file(&file, &BuildOptions::default())?, bytes))
}

fn load_aw(arg: &str) -> Result<(AwEmbedding, Vec<u8>)> {
    let (ring, bytes) = load_ring(arg)?;
    Ok((AwEmbedding::new(Arc::new(ring))?, bytes))
}

fn load_morphism(path: &Path) -> Result<(MorphismFile, Vec<u8>)> {
    let bytes = read(path)?;
    Ok((parse(&bytes, path)?, bytes))
}

fn ring_describe(input: &str) -> Result<Outcome> {
    let (aw, bytes) = load_aw(input)?;
    let rep = aw.report();
    let checks = rep.checks.all_pass();
    let result = json!({
        "ring": rep.ring,
        "size": rep.size,
        "radical": rep.radical,
        "nilpotency_index": rep.nilpotency_index,
        "quotient_size": rep.quotient_size,
        "q": rep.q,
        "mu": rep.mu_blocks,
        "field_orders": rep.field_orders,
        "content_hash": aw.ring().content_hash(),
    });
    Ok(Outcome::new("ring.describe", vec![bytes], result).verify("aw_embedding", checks))
}

fn ring_wedderburn(input: &str) -> Result<Outcome> {
    let (aw, bytes) = load_aw(input)?;
    let rep = aw.report();
    let ok = rep.checks.all_pass();
    Ok(Outcome::new("ring.wedderburn", vec![bytes], serde_json::to_value(&rep)?).verify("aw_embedding", ok))
}

fn ring_build(builtin_name: Option<&str>, spec: Option<&Path>, ring_out: Option<&Path>) -> Result<Outcome> {
    let (ring, input) = match (builtin_name, spec) {
        (Some(name), _) => (builtin(name)?, name.as_bytes().to_vec()),
        (None, Some(path)) => {
            let bytes = read(path)?;
            let spec: RingSpec = parse(&bytes, path)?;
            (spec.build(&BuildOptions::default())?, bytes)
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let file = ring.to_file();
    let roundtrip = FiniteRing::from_file(&file, &BuildOptions::default())? == ring;
    if let Some(path) = ring_out {
        std::fs::write(path, serde_json::to_vec_pretty(&file)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let result = json!({ "content_hash": ring.content_hash(), "ring": file });
    Ok(Outcome::new("ring.build", vec![input], result).verify("roundtrip", roundtrip))
}

fn morphism_check(args: &MorphismArgs) -> Result<Outcome> {
    let (aw, ring_bytes) = load_aw(&args.ring)?;
    let (file, bytes) = load_morphism(&args.input)?;
    let vic = file.to_vic(&aw)?;
    let adapted = is_column_adapted(vic.f_dprime(), &aw);
    let s = s_function(vic.f_dprime(), &aw).ok();
    let mut result = json!({
        "d": vic.d(),
        "n": vic.n(),
        "column_adapted": adapted,
        "S": s.as_ref().map(|s| s.one_based()),
    });
    if adapted {
        let f = OvicMorphism::new(vic, &aw)?;
        let rows = free_rows(&f, &aw);
        result["free_rows"] = json!(rows.free);
        result["dependent_rows"] = json!(rows.dependent);
    }
    Ok(Outcome::new("morphism.check", vec![ring_bytes, bytes], result).verify("splitting", true))
}

fn morphism_factor(args: &MorphismArgs) -> Result<Outcome> {
    let (aw, ring_bytes) = load_aw(&args.ring)?;
    let (file, bytes) = load_morphism(&args.input)?;
    let f = file.to_vic(&aw)?;
    let fac = factor_vic(&f, &aw)?;
    let r = aw.ring();
    let inverse =
        r.is_identity(&r.mat_mul(&fac.g, &fac.g_inverse)?) && r.is_identity(&r.mat_mul(&fac.g_inverse, &fac.g)?);
    let composite = compose_vic(fac.f2.vic(), &fac.f1)? == f;
    let adapted = is_column_adapted(fac.f2.f_dprime(), &aw);
    let result = json!({
        "g": fac.g.to_rows(),
        "g_inverse": fac.g_inverse.to_rows(),
        "f1": MorphismFile::from_vic(&fac.f1),
        "f2": MorphismFile::from_vic(fac.f2.vic()),
        "f2_S": fac.f2.s().one_based(),
    });
    Ok(Outcome::new("morphism.factor", vec![ring_bytes, bytes], result)
        .verify("f_equals_f2_f1", composite)
        .verify("f1_invertible", inverse)
        .verify("f2_column_adapted", adapted))
}

fn order_compare(ring: &str, a: &Path, b: &Path, node_cap: usize) -> Result<Outcome> {
    let (aw, ring_bytes) = load_aw(ring)?;
    let (fa, ba) = load_morphism(a)?;
    let (fb, bb) = load_morphism(b)?;
    let f = fa.to_ovic(&aw)?;
    let g = fb.to_ovic(&aw)?;
    let ord = match total_compare(&f, &g)? {
        std::cmp::Ordering::Less => "LT",
        std::cmp::Ordering::Equal => "EQ",
        std::cmp::Ordering::Greater => "GT",
    };
    let chain = partial_leq(&f, &g, &aw, node_cap)?;
    let refines = chain.is_none() || ord != "GT";
    let chain_json = chain.map(|c| c.iter().map(|m| json!([m.a, m.b])).collect::<Vec<_>>());
    let result = json!({ "order": ord, "insertion_chain": chain_json });
    Ok(Outcome::new("order.compare", vec![ring_bytes, ba, bb], result).verify("insertion_refines_total", refines))
}

fn order_iota(args: &MorphismArgs) -> Result<Outcome> {
    let (aw, ring_bytes) = load_aw(&args.ring)?;
    let (file, bytes) = load_morphism(&args.input)?;
    let f = file.to_ovic(&aw)?;
    let word = iota(&f, &aw);
    Ok(Outcome::new("order.iota", vec![ring_bytes, bytes], json!({ "word": word.to_json() })))
}

fn enumerate(args: &EnumerateArgs, ovic: bool) -> Result<Outcome> {
    let (aw, ring_bytes) = load_aw(&args.ring)?;
    let verb = if ovic { "enumerate.ovic" } else { "enumerate.vic" };
    let params = format!("{} {} {}", args.d, args.n, args.count_only);
    let inputs = vec![ring_bytes, params.into_bytes()];
    if ovic && args.count_only {
        let count = count_ovic(&aw, args.d, args.n, args.budget)?;
        return Ok(Outcome::new(verb, inputs, json!({ "d": args.d, "n": args.n, "count": count.to_string() })));
    }
    let files: Vec<MorphismFile> = if ovic {
        enumerate_ovic(&aw, args.d, args.n, args.budget)?.iter().map(|f| MorphismFile::from_vic(f.vic())).collect()
    } else {
        enumerate_vic(&aw, args.d, args.n, args.budget)?.iter().map(MorphismFile::from_vic).collect()
    };
    let mut result = json!({ "d": args.d, "n": args.n, "count": files.len().to_string() });
    if !args.count_only {
        result["morphisms"] = serde_json::to_value(&files)?;
    }
    Ok(Outcome::new(verb, inputs, result))
}

fn noether_span(ring: &str, d: usize, k: &str, gens: &Path, horizon: usize, budget: u128) -> Result<Outcome> {
    let (aw, ring_bytes) = load_aw(ring)?;
    let field: CoefficientField = k.parse()?;
    let bytes = read(gens)?;
    let entries: Vec<GeneratorEntry> = parse(&bytes, gens)?;
    let generators = parse_generators(&entries, d, &field, &aw)?;
    let cache = HomCache::new(budget);
    let state = span_to_degree(&aw, field, d, &generators, horizon, &cache)?;
    let leading: Vec<Vec<MorphismFile>> = initial_module_to_degree(&state, horizon)
        .iter()
        .map(|l| l.iter().map(|f| MorphismFile::from_vic(f.vic())).collect())
        .collect();
    let mut members = true;
    for g in &generators {
        if g.degree() <= horizon {
            members &= finvic::noether::membership(&state, g)?.is_member();
        }
    }
    let result = json!({
        "d": d,
        "k": field.to_string(),
        "horizon": horizon,
        "generators": generator_entries(&generators, &field),
        "dims": state.dims(),
        "ambient_dims": state.ambient_dims(),
        "leading": leading,
    });
    let params = format!("{d} {field} {horizon}");
    Ok(Outcome::new("noether.span", vec![ring_bytes, bytes, params.into_bytes()], result)
        .verify("generators_are_members", members))
}

fn run_selftest(args: &SelftestArgs) -> Result<Outcome> {
    let profile: Profile = args.profile.parse()?;
    let mut cfg = SelftestConfig::new(profile);
    cfg.seed = args.seed;
    cfg.budget = args.budget;
    let mut inputs = vec![format!("{profile} {} {}", args.seed, args.budget).into_bytes()];
    for path in &args.extra_ring {
        let bytes = read(path)?;
        let file: RingFile = parse(&bytes, path)?;
        cfg.extra_rings.push(ExtraRing { label: path.display().to_string(), file });
        inputs.push(bytes);
    }
    let report = selftest::run(&cfg);
    for c in &report.criteria {
        eprintln!("{}", c.line());
        for note in &c.notes {
            eprintln!("    {note}");
        }
    }
    let mut out = Outcome::new("selftest", inputs, serde_json::to_value(&report)?);
    for c in &report.criteria {
        out.verified.insert(format!("criterion {}", c.id), c.passed);
    }
    out.success = report.passed;
    Ok(out)
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Ring(RingCmd::Describe { input }) => ring_describe(input),
        Command::Ring(RingCmd::Wedderburn { input }) => ring_wedderburn(input),
        Command::Ring(RingCmd::Build { builtin, spec, ring_out }) => {
            ring_build(builtin.as_deref(), spec.as_deref(), ring_out.as_deref())
        }
        Command::Morphism(MorphismCmd::Check(a)) => morphism_check(a),
        Command::Morphism(MorphismCmd::Factor(a)) => morphism_factor(a),
        Command::Order(OrderCmd::Compare { ring, a, b, node_cap }) => order_compare(ring, a, b, *node_cap),
        Command::Order(OrderCmd::Iota(a)) => order_iota(a),
        Command::Enumerate(EnumerateCmd::Ovic(a)) => enumerate(a, true),
        Command::Enumerate(EnumerateCmd::Vic(a)) => enumerate(a, false),
        Command::Noether(NoetherCmd::Span { ring, d, k, gens, horizon, budget }) => {
            noether_span(ring, *d, k, gens, *horizon, *budget)
        }
        Command::Selftest(a) => run_selftest(a),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.context("writing stdout"),
        },
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    if let Some(err) = e.downcast_ref::<finvic::Error>() {
        err.kind()
    } else if e.downcast_ref::<std::io::Error>().is_some() {
        "Io"
    } else {
        "Internal"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let report = Report {
                verb: outcome.verb.into(),
                inputs_digest: inputs_digest(outcome.inputs.iter().map(|b| b.as_slice())),
                result: outcome.result,
                verified: outcome.verified,
                wall_time_ms: start.elapsed().as_millis() as u64,
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Err(e) = emit(&text, cli.out.as_deref()) {
                eprintln!("error: Io: {e:#}");
                return ExitCode::from(1);
            }
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let kind = error_kind(&e);
            eprintln!("error: {kind}: {e:#}");
            println!("{}", json!({ "error": { "kind": kind, "message": format!("{e:#}") } }));
            ExitCode::from(1)
        }
    }
}
