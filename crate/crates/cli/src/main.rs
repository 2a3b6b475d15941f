use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;
use serde_json::{json, Value};

use ringwork::constructors::{FamilyName, RingFamily};
use ringwork::maps::{builtin_map, IdentityTag};
use ringwork::ring::{RingError, DEFAULT_MAX_SIZE};
use ringwork::search::{find_nonadditive_witness, DEFAULT_NODE_BUDGET};
use ringwork::verify::{verify_proposition1, TheoremOptions};
use ringwork::{
    check_identity, condition_report, enumerate_reverse_maps, find_idempotents, verify_theorem,
    AntiAutomorphism, Component, Elem, FiniteRing, InvolutionFamily, PeirceFrame, RingMap,
    SearchConfig, ValidateOptions, Verdict,
};

const SIZE_ENV: &str = "WORKBENCH_MAX_RING_SIZE";

#[derive(Parser)]
#[command(
    name = "ringwork",
    version,
    about = "Finite rings with involution: checks, search and verification"
)]
struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Indent JSON and print a short summary on stderr.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a ring document against every ring axiom.
    RingValidate(RingArg),
    /// Build a ring from a constructor family.
    RingMake(MakeArgs),
    /// Build a builtin anti-automorphism for a ring.
    InvMake(InvMakeArgs),
    /// Validate an involution document against a ring.
    InvValidate(RingInvArgs),
    /// List idempotents, optionally only those fixed by an involution.
    IdemFind(IdemArgs),
    /// Peirce decomposition relative to an idempotent.
    Peirce(PeirceArgs),
    /// Conditions M1-M3 and primality.
    Conditions(FrameArgs),
    /// Check a map against an identity for all pairs.
    MapCheck(MapCheckArgs),
    /// Enumerate every map satisfying the twisted reverse identity.
    MapSearch(SearchArgs),
    /// Run the full additivity verification on one instance.
    VerifyTheorem(TheoremArgs),
    /// One-shot summary of a ring, its symmetric idempotents and a map.
    Report(ReportArgs),
}

#[derive(Args)]
struct RingArg {
    #[arg(long)]
    ring: PathBuf,
}

#[derive(Args)]
struct MakeArgs {
    #[arg(long)]
    family: FamilyName,
    #[arg(long)]
    n: usize,
    /// Second modulus for zprod.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args)]
struct InvMakeArgs {
    #[arg(long)]
    ring: PathBuf,
    /// adjugate_m2, transpose_m2, neg_b_dual or identity.
    #[arg(long)]
    family: InvolutionFamily,
}

#[derive(Args)]
struct RingInvArgs {
    #[arg(long)]
    ring: PathBuf,
    #[arg(long)]
    inv: PathBuf,
}

#[derive(Args)]
struct IdemArgs {
    #[arg(long)]
    ring: PathBuf,
    #[arg(long)]
    inv: Option<PathBuf>,
    /// Keep only idempotents fixed by the involution.
    #[arg(long, requires = "inv")]
    symmetric: bool,
}

#[derive(Args)]
struct FrameArgs {
    #[arg(long)]
    ring: PathBuf,
    #[arg(long)]
    inv: Option<PathBuf>,
    /// Idempotent, by label or index.
    #[arg(long)]
    e: String,
}

#[derive(Args)]
struct PeirceArgs {
    #[command(flatten)]
    frame: FrameArgs,
    /// Project a single element instead of the whole ring.
    #[arg(long)]
    x: Option<String>,
}

#[derive(Args)]
struct MapCheckArgs {
    #[arg(long)]
    ring: PathBuf,
    #[arg(long)]
    inv: Option<PathBuf>,
    /// Map file, or one of example1, example2, zero.
    #[arg(long)]
    map: String,
    /// additive, derivation, reverse_derivation, star_reverse or sigma_reverse.
    #[arg(long)]
    identity: IdentityTag,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    ring: PathBuf,
    #[arg(long)]
    inv: PathBuf,
    /// Stop after this many maps (0: no limit).
    #[arg(long, default_value_t = 0)]
    limit: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Look only for a map that is not additive.
    #[arg(long)]
    nonadditive: bool,
}

#[derive(Args)]
struct TheoremArgs {
    #[command(flatten)]
    frame: FrameArgs,
    #[arg(long, default_value_t = 0)]
    limit: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Extra maps to check alongside the enumerated ones.
    #[arg(long)]
    map: Vec<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    ring: PathBuf,
    #[arg(long)]
    inv: PathBuf,
    #[arg(long)]
    map: Option<String>,
}

/// Bad input or a failed precondition: exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

type Run<T> = Result<T, InputError>;

struct Output {
    pretty: bool,
    lines: Vec<String>,
    summary: Vec<String>,
}

impl Output {
    fn emit<T: Serialize>(&mut self, value: &T) {
        let line = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        };
        self.lines.push(line.expect("output values serialize"));
    }

    /// Canonical documents are emitted verbatim so their content ids survive.
    fn emit_raw(&mut self, text: String) {
        if self.pretty {
            let v: Value = serde_json::from_str(&text).expect("documents are JSON");
            self.emit(&v);
        } else {
            self.lines.push(text);
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

fn options() -> Run<ValidateOptions> {
    let max_size = match std::env::var(SIZE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SIZE_ENV}={v:?} is not a size"))?,
        Err(_) => DEFAULT_MAX_SIZE,
    };
    Ok(ValidateOptions { max_size })
}

fn read(path: &Path) -> Run<String> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn load_ring(path: &Path) -> Run<FiniteRing> {
    let ring = FiniteRing::from_json(&read(path)?, &options()?)
        .with_context(|| format!("ring {}", path.display()))?;
    info!(
        "ring {} ({} elements) id {}",
        path.display(),
        ring.size(),
        ring.content_id()
    );
    Ok(ring)
}

fn load_inv(ring: &FiniteRing, path: &Path) -> Run<AntiAutomorphism> {
    let inv = AntiAutomorphism::from_json(ring, &read(path)?)
        .with_context(|| format!("involution {}", path.display()))?;
    info!("involution {} id {}", path.display(), inv.content_id());
    Ok(inv)
}

fn load_map(ring: &FiniteRing, spec: &str) -> Run<RingMap> {
    let map = match spec {
        "example1" | "example2" | "zero" => builtin_map(spec, ring)?,
        path => RingMap::from_json(ring, &read(Path::new(path))?)
            .with_context(|| format!("map {path}"))?,
    };
    info!("map {spec} ({} entries)", map.size());
    Ok(map)
}

fn element(ring: &FiniteRing, name: &str) -> Run<Elem> {
    Ok(ring
        .resolve(name)
        .with_context(|| format!("element {name:?}"))?)
}

fn image_indices(map: &RingMap) -> Vec<usize> {
    map.image().iter().map(|x| x.index()).collect()
}

fn labelled(ring: &FiniteRing, x: Elem) -> Value {
    json!({"index": x.index(), "label": ring.label(x)})
}

fn pair_json(ring: &FiniteRing, verdict: &Verdict<(Elem, Elem)>) -> Value {
    match verdict.witness() {
        None => json!({"pass": true, "witness": null}),
        Some(&(a, b)) => json!({
            "pass": false,
            "witness": [a.index(), b.index()],
            "witness_label": [ring.label(a), ring.label(b)],
        }),
    }
}

fn exit(pass: bool) -> u8 {
    if pass {
        0
    } else {
        1
    }
}

fn ring_validate(args: RingArg, out: &mut Output) -> Run<u8> {
    let text = read(&args.ring)?;
    match FiniteRing::from_json(&text, &options()?) {
        Ok(ring) => {
            info!("ring {} id {}", args.ring.display(), ring.content_id());
            out.emit(&json!({
                "valid": true,
                "ring_id": ring.content_id(),
                "size": ring.size(),
                "commutative": ring.is_commutative(),
                "unity": ring.unity().map(|u| u.index()),
            }));
            out.note(format!("valid ring of size {}", ring.size()));
            Ok(0)
        }
        Err(RingError::Axiom { law, witness }) => {
            out.emit(&json!({
                "valid": false,
                "law": law.to_string(),
                "witness": witness.iter().map(|x| x.index()).collect::<Vec<_>>(),
            }));
            out.note(format!("{law} fails at {witness:?}"));
            Ok(1)
        }
        Err(e) => Err(anyhow!(e)
            .context(format!("ring {}", args.ring.display()))
            .into()),
    }
}

fn ring_make(args: MakeArgs) -> Run<RingFamily> {
    Ok(match (args.family, args.m) {
        (FamilyName::ZMod, None) => RingFamily::ZMod(args.n),
        (FamilyName::M2, None) => RingFamily::M2(args.n),
        (FamilyName::Dual, None) => RingFamily::Dual(args.n),
        (FamilyName::Null, None) => RingFamily::Null(args.n),
        (FamilyName::ZProd, Some(m)) => RingFamily::ZProd(args.n, m),
        (FamilyName::ZProd, None) => return Err(anyhow!("zprod needs --m").into()),
        (_, Some(_)) => return Err(anyhow!("--m only applies to zprod").into()),
    })
}

fn inv_validate(args: RingInvArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.ring)?;
    let doc: ringwork::involution::InvolutionDocument =
        serde_json::from_str(&read(&args.inv)?).context("involution document")?;
    match AntiAutomorphism::validate(&ring, &doc.map, doc.involution) {
        Ok(inv) => {
            info!("involution {} id {}", args.inv.display(), inv.content_id());
            out.emit(&json!({
                "valid": true,
                "involution_id": inv.content_id(),
                "is_involution": inv.is_involution(),
            }));
            Ok(0)
        }
        Err(
            e @ (ringwork::involution::InvolutionError::Json(_)
            | ringwork::involution::InvolutionError::Length { .. }
            | ringwork::involution::InvolutionError::OutOfRange { .. }),
        ) => Err(anyhow!(e).into()),
        Err(e) => {
            out.emit(&json!({"valid": false, "error": e.to_string()}));
            out.note(e.to_string());
            Ok(1)
        }
    }
}

fn idem_find(args: IdemArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.ring)?;
    let inv = args
        .inv
        .as_deref()
        .map(|p| load_inv(&ring, p))
        .transpose()?;
    let sym = if args.symmetric { inv.as_ref() } else { None };
    let found = find_idempotents(&ring, sym);
    out.note(format!("{} nontrivial idempotents", found.len()));
    out.emit(&json!({
        "symmetric": args.symmetric,
        "idempotents": found.iter().map(|&x| labelled(&ring, x)).collect::<Vec<_>>(),
    }));
    Ok(0)
}

fn peirce(args: PeirceArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.frame.ring)?;
    let inv = args
        .frame
        .inv
        .as_deref()
        .map(|p| load_inv(&ring, p))
        .transpose()?;
    let e = element(&ring, &args.frame.e)?;
    let frame = PeirceFrame::new(&ring, e, inv.as_ref())?;
    let xs: Vec<Elem> = match &args.x {
        Some(x) => vec![element(&ring, x)?],
        None => ring.elements().collect(),
    };
    let sizes: serde_json::Map<String, Value> = Component::ALL
        .iter()
        .map(|&c| (c.to_string(), json!(frame.component_elements(c).len())))
        .collect();
    out.emit(&json!({"e": labelled(&ring, e), "component_sizes": sizes}));
    for x in xs {
        let split = frame.project(x);
        let parts: serde_json::Map<String, Value> = Component::ALL
            .iter()
            .map(|&c| (c.to_string(), labelled(&ring, split.get(c))))
            .collect();
        out.emit(&json!({"x": labelled(&ring, x), "parts": parts}));
    }
    Ok(0)
}

fn conditions(args: FrameArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.ring)?;
    let inv = args
        .inv
        .as_deref()
        .map(|p| load_inv(&ring, p))
        .transpose()?;
    let e = element(&ring, &args.e)?;
    // Validates idempotence, nontriviality and symmetry when an involution is given.
    PeirceFrame::new(&ring, e, inv.as_ref())?;
    let report = condition_report(&ring, e)?;
    for (name, entry) in [("M1", &report.m1), ("M2", &report.m2), ("M3", &report.m3)] {
        out.note(match &entry.witness_label {
            None => format!("{name} holds"),
            Some(w) => format!("{name} fails, witness {w}"),
        });
    }
    out.emit(&report);
    Ok(exit(report.hypotheses_hold()))
}

fn map_check(args: MapCheckArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.ring)?;
    let inv = args
        .inv
        .as_deref()
        .map(|p| load_inv(&ring, p))
        .transpose()?;
    let map = load_map(&ring, &args.map)?;
    let kind = args
        .identity
        .with_sigma(inv.as_ref())
        .ok_or_else(|| anyhow!("{} needs --inv", args.identity))?;
    let verdict = check_identity(&ring, &map, kind)?;
    let mut v = pair_json(&ring, &verdict);
    v["identity"] = json!(args.identity.to_string());
    out.note(format!(
        "{}: {}",
        args.identity,
        if verdict.passed() { "holds" } else { "fails" }
    ));
    out.emit(&v);
    Ok(exit(verdict.passed()))
}

fn map_search(args: SearchArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.ring)?;
    let inv = load_inv(&ring, &args.inv)?;
    if args.nonadditive {
        let found = find_nonadditive_witness(&ring, &inv, args.node_budget)?;
        if let Some(m) = &found.witness {
            out.emit_raw(m.to_json());
        }
        out.note(match &found.witness {
            Some(_) => "found a non-additive map".to_string(),
            None if found.exhausted => "every map is additive".to_string(),
            None => "budget exhausted without a verdict".to_string(),
        });
        out.emit(&json!({
            "count": usize::from(found.witness.is_some()),
            "exhausted": found.exhausted,
            "nodes": found.nodes,
        }));
        return Ok(0);
    }
    let mut config = SearchConfig::new(&inv);
    config.limit = args.limit;
    config.node_budget = args.node_budget;
    let outcome = enumerate_reverse_maps(&ring, &config)?;
    for m in &outcome.maps {
        out.emit_raw(m.to_json());
    }
    out.note(format!(
        "{} maps, {} nodes{}",
        outcome.maps.len(),
        outcome.nodes,
        if outcome.exhausted { "" } else { ", truncated" }
    ));
    out.emit(&json!({
        "count": outcome.maps.len(),
        "exhausted": outcome.exhausted,
        "nodes": outcome.nodes,
    }));
    Ok(0)
}

fn theorem(args: TheoremArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.frame.ring)?;
    let Some(inv_path) = args.frame.inv.as_deref() else {
        return Err(anyhow!("verify-theorem needs --inv").into());
    };
    let inv = load_inv(&ring, inv_path)?;
    let e = element(&ring, &args.frame.e)?;
    let supplied = args
        .map
        .iter()
        .map(|m| load_map(&ring, m))
        .collect::<Run<Vec<_>>>()?;
    let options = TheoremOptions {
        limit: args.limit,
        node_budget: args.node_budget,
    };
    let report = verify_theorem(&ring, &inv, e, &options, &supplied)?;
    for n in &report.notes {
        out.note(n.clone());
    }
    out.emit(&report);
    Ok(report.exit_code() as u8)
}

fn report(args: ReportArgs, out: &mut Output) -> Run<u8> {
    let ring = load_ring(&args.ring)?;
    let inv = load_inv(&ring, &args.inv)?;
    let map = args
        .map
        .as_deref()
        .map(|m| load_map(&ring, m))
        .transpose()?;
    let idempotents = find_idempotents(&ring, Some(&inv));
    let mut frames = Vec::new();
    for &e in &idempotents {
        let frame = PeirceFrame::new(&ring, e, Some(&inv))?;
        let conditions = condition_report(&ring, e)?;
        let swap = verify_proposition1(&frame)?;
        frames.push(json!({
            "e": labelled(&ring, e),
            "conditions": conditions,
            "proposition1": swap,
        }));
    }
    let identities = match &map {
        None => Value::Null,
        Some(m) => {
            let mut by_name = serde_json::Map::new();
            for tag in [
                IdentityTag::Additive,
                IdentityTag::Derivation,
                IdentityTag::ReverseDerivation,
                IdentityTag::StarReverse,
                IdentityTag::SigmaReverse,
            ] {
                let kind = tag.with_sigma(Some(&inv)).expect("sigma supplied");
                let verdict = match check_identity(&ring, m, kind) {
                    Ok(v) => pair_json(&ring, &v),
                    // star_reverse with a non-involutive anti-automorphism
                    Err(e) => json!({"pass": null, "error": e.to_string()}),
                };
                by_name.insert(tag.to_string(), verdict);
            }
            Value::Object(by_name)
        }
    };
    out.note(format!(
        "size {}, {} symmetric idempotents",
        ring.size(),
        idempotents.len()
    ));
    out.emit(&json!({
        "ring_id": ring.content_id(),
        "involution_id": inv.content_id(),
        "size": ring.size(),
        "commutative": ring.is_commutative(),
        "unity": ring.unity().map(|u| labelled(&ring, u)),
        "prime": pair_json(&ring, &ringwork::is_prime(&ring)),
        "frames": frames,
        "map": map.as_ref().map(image_indices),
        "identities": identities,
    }));
    Ok(0)
}

fn dispatch(command: Command, out: &mut Output) -> Run<u8> {
    match command {
        Command::RingValidate(a) => ring_validate(a, out),
        Command::RingMake(a) => {
            let family = ring_make(a)?;
            let ring = family.build(&options()?)?;
            info!("made {family} id {}", ring.content_id());
            out.note(format!("{family}: {} elements", ring.size()));
            out.emit_raw(ring.to_json());
            Ok(0)
        }
        Command::InvMake(a) => {
            let ring = load_ring(&a.ring)?;
            let inv = AntiAutomorphism::builtin(&ring, a.family)?;
            info!("made {} id {}", a.family, inv.content_id());
            out.emit_raw(inv.to_json());
            Ok(0)
        }
        Command::InvValidate(a) => inv_validate(a, out),
        Command::IdemFind(a) => idem_find(a, out),
        Command::Peirce(a) => peirce(a, out),
        Command::Conditions(a) => conditions(a, out),
        Command::MapCheck(a) => map_check(a, out),
        Command::MapSearch(a) => map_search(a, out),
        Command::VerifyTheorem(a) => theorem(a, out),
        Command::Report(a) => report(a, out),
    }
}

fn write_output(out: &Output, path: Option<&Path>) -> io::Result<()> {
    let mut text = String::new();
    for line in &out.lines {
        text.push_str(line);
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("global pool is built once");
    }
    let mut out = Output {
        pretty: cli.pretty,
        lines: Vec::new(),
        summary: Vec::new(),
    };
    let code = match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_output(&out, cli.out.as_deref()) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    if cli.pretty {
        for s in &out.summary {
            eprintln!("{s}");
        }
    }
    ExitCode::from(code)
}
