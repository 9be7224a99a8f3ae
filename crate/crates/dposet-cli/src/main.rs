//! Single-binary workbench: enumeration, Hasse export, formula evaluation,
//! automorphism checks, lemma verification, and the encode/decode demo.
//!
//! Exit status: 0 on success/pass, 1 on a verification failure, 2 on a
//! usage error. Output is deterministic given the flags (and seed, where
//! one applies); json is the machine format, `--pretty` renders tables.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dposet_core::catalog::{
    default_cache_dir, Catalog, ExportFormat, ExportWhat, OrderKind, DEFAULT_MAX_LEVEL,
    HARD_MAX_LEVEL,
};
use dposet_core::digraph::Digraph;
use dposet_core::families::SupportSpec;
use dposet_core::fo::{self, Universe};
use dposet_core::lemmas::{self, LemmaId};
use dposet_core::rules;

#[derive(Parser)]
#[command(name = "dposet", version, about = "finite digraph order workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Sub,
    Emb,
}

impl From<OrderArg> for OrderKind {
    fn from(value: OrderArg) -> OrderKind {
        match value {
            OrderArg::Sub => OrderKind::Sub,
            OrderArg::Emb => OrderKind::Emb,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate isomorphism types per level and print the census
    Enumerate(EnumerateArgs),
    /// Export a Hasse diagram of the stored universe
    Hasse(HasseArgs),
    /// Evaluate a formula over a bounded universe
    FoEval(FoEvalArgs),
    /// Closure, verification, and identity checks for the local rules
    Aut(AutArgs),
    /// Run one registered lemma verification
    VerifyLemma(VerifyLemmaArgs),
    /// Run the encode/decode pipeline for one source digraph
    MainTheorem(MainTheoremArgs),
    /// Canonical form, isomorphism, and order queries on DGF files
    Graph(GraphArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// largest vertex count to enumerate (5 needs --allow-level-5)
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
    max_n: usize,
    /// permit the expensive fifth level
    #[arg(long)]
    allow_level_5: bool,
    /// human-readable table instead of json
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct HasseArgs {
    #[arg(long, value_enum)]
    order: OrderArg,
    /// largest vertex count in the exported universe
    #[arg(long, default_value_t = 3)]
    max_level: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// reuse/populate a catalog cache directory (DPOSET_CACHE_DIR overrides
    /// the default ./.dposet-cache)
    #[arg(long)]
    cache: bool,
}

#[derive(Args)]
struct FoEvalArgs {
    /// file containing one formula
    #[arg(long)]
    formula: PathBuf,
    #[arg(long, default_value_t = 3)]
    universe_n: usize,
    #[arg(long, value_enum, default_value_t = OrderArg::Sub)]
    order: OrderArg,
    /// variable bindings, repeated: --bind x=O3 --bind y=#2:0000
    #[arg(long = "bind", value_name = "VAR=CONST")]
    bind: Vec<String>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AutAction {
    Closure,
    Verify,
    Identities,
}

#[derive(Args)]
struct AutArgs {
    #[arg(long, value_enum)]
    action: AutAction,
    /// catalog bound for `verify`
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    /// verify one named generator (default: all generators)
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct VerifyLemmaArgs {
    /// registry id, e.g. io-def or male-rel
    #[arg(long)]
    id: String,
    #[arg(long)]
    universe_n: Option<usize>,
    #[arg(long)]
    margin: Option<usize>,
    /// comma-separated overrides, e.g. i=4,j=5
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct MainTheoremArgs {
    /// DGF file with the source digraph
    #[arg(long)]
    graph: PathBuf,
    /// vertex-marking circle sizes, comma separated (default: smallest
    /// admissible)
    #[arg(long)]
    l_sizes: Option<String>,
    /// edge-marking circle sizes, comma separated
    #[arg(long)]
    d_sizes: Option<String>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphOp {
    Canon,
    Iso,
    Sub,
    Emb,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, value_enum)]
    op: GraphOp,
    /// first DGF file
    #[arg(long)]
    a: PathBuf,
    /// second DGF file (iso/sub/emb)
    #[arg(long)]
    b: Option<PathBuf>,
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("bad size `{s}`"))
        })
        .collect()
}

fn load_dgf(path: &PathBuf) -> Result<Digraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Digraph::parse_dgf(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate(args) => {
            let hard = if args.allow_level_5 {
                HARD_MAX_LEVEL
            } else {
                DEFAULT_MAX_LEVEL
            };
            if args.max_n > hard {
                bail!(
                    "--max-n {} exceeds the configured maximum of {hard}{}",
                    args.max_n,
                    if args.allow_level_5 { "" } else { " (pass --allow-level-5)" }
                );
            }
            let levels = dposet_core::catalog::enumerate_levels(args.max_n)?;
            if args.pretty {
                println!("{:>6} {:>10}", "level", "types");
                for level in &levels {
                    println!("{:>6} {:>10}", level.n, level.members.len());
                }
            } else {
                let value = serde_json::json!({
                    "levels": levels.iter().map(|l| serde_json::json!({
                        "n": l.n,
                        "count": l.members.len(),
                    })).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&value)?);
            }
            Ok(true)
        }
        Command::Hasse(args) => {
            let catalog = if args.cache {
                let dir = default_cache_dir();
                match Catalog::load_cache(&dir) {
                    Ok(c) if c.max_n() >= args.max_level => c,
                    _ => {
                        let c = Catalog::build(args.max_level)?;
                        c.save_cache(&dir)?;
                        c
                    }
                }
            } else {
                Catalog::build(args.max_level)?
            };
            let what = match args.order {
                OrderArg::Sub => ExportWhat::HasseSub,
                OrderArg::Emb => ExportWhat::HasseEmb,
            };
            let format = match args.format {
                FormatArg::Dot => ExportFormat::Dot,
                FormatArg::Json => ExportFormat::Json,
            };
            print!("{}", catalog.export(what, format));
            Ok(true)
        }
        Command::FoEval(args) => {
            let text = std::fs::read_to_string(&args.formula)
                .with_context(|| format!("cannot read {}", args.formula.display()))?;
            let formula = fo::parse(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
            let catalog = Catalog::build(args.universe_n)?;
            let universe = Universe::new(&catalog, args.universe_n, args.order.into());
            let mut binding = BTreeMap::new();
            for item in &args.bind {
                let (var, value) = item
                    .split_once('=')
                    .with_context(|| format!("--bind wants VAR=CONST, got `{item}`"))?;
                let g = dposet_core::families::resolve_constant(value)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                binding.insert(var.to_string(), g.canonical_form());
            }
            let free = formula.free_vars();
            let unbound: Vec<&String> =
                free.iter().filter(|v| !binding.contains_key(*v)).collect();
            if unbound.len() == 1 && free.len() == 1 {
                // one unbound free variable: print the defined set
                let set =
                    fo::defined_set(&formula, &universe).map_err(|e| anyhow::anyhow!("{e}"))?;
                if args.pretty {
                    for code in &set {
                        println!("{code}");
                    }
                } else {
                    let value = serde_json::json!({
                        "free": free,
                        "defined_set": set.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&value)?);
                }
                Ok(true)
            } else {
                let result = fo::evaluate(&formula, &universe, &binding)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                if args.pretty {
                    println!("{result}");
                } else {
                    println!("{}", serde_json::json!({ "value": result }));
                }
                Ok(true)
            }
        }
        Command::Aut(args) => match args.action {
            AutAction::Closure => {
                let generators: Vec<rules::LocalRule> = rules::all_generators()
                    .into_iter()
                    .map(|(_, rule)| rule)
                    .collect();
                let closure = rules::closure(&generators);
                let without: Vec<rules::LocalRule> = rules::all_generators()
                    .into_iter()
                    .filter(|(name, _)| name != "phi1")
                    .map(|(_, rule)| rule)
                    .collect();
                let sub = rules::closure(&without);
                if args.pretty {
                    println!("closure order: {}", closure.len());
                    println!("without phi1:  {}", sub.len());
                } else {
                    println!(
                        "{}",
                        serde_json::json!({
                            "order": closure.len(),
                            "order_without_phi1": sub.len(),
                        })
                    );
                }
                Ok(true)
            }
            AutAction::Verify => {
                let catalog = Catalog::build(args.max_n)?;
                let targets: Vec<(String, rules::LocalRule)> = match &args.rule {
                    Some(name) => vec![(
                        name.clone(),
                        rules::rule_of_generator(name).map_err(|e| anyhow::anyhow!("{e}"))?,
                    )],
                    None => rules::all_generators(),
                };
                let mut all_reports = Vec::new();
                let mut ok = true;
                for (name, rule) in targets {
                    let reports =
                        rules::verify_automorphism(&rule, catalog.relations(), args.max_n);
                    ok &= rules::all_passed(&reports);
                    all_reports.push(serde_json::json!({
                        "rule": name,
                        "checks": reports,
                    }));
                }
                emit_json(&all_reports, args.pretty)?;
                Ok(ok)
            }
            AutAction::Identities => {
                let reports = rules::verify_structure();
                let ok = rules::all_passed(&reports);
                let values: Vec<serde_json::Value> = reports
                    .iter()
                    .map(|r| serde_json::to_value(r).expect("serializable"))
                    .collect();
                emit_json(&values, args.pretty)?;
                Ok(ok)
            }
        },
        Command::VerifyLemma(args) => {
            let id: LemmaId = args.id.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut params = BTreeMap::new();
            if let Some(text) = &args.params {
                for item in text.split(',') {
                    let (k, v) = item
                        .split_once('=')
                        .with_context(|| format!("--params wants k=v pairs, got `{item}`"))?;
                    params.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
            let bound = args.universe_n.unwrap_or(DEFAULT_MAX_LEVEL);
            let catalog = Catalog::build(bound)?;
            let report = lemmas::verify(id, &catalog, args.universe_n, args.margin, &params)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let pass = report.passed() || report.status == "skipped";
            if args.pretty {
                println!(
                    "{} [{}] {} ({} ms)",
                    report.id, report.mode, report.status, report.elapsed_ms
                );
                for note in &report.notes {
                    println!("  note: {note}");
                }
                for c in &report.counterexamples {
                    println!("  counterexample: {}", c.join(", "));
                }
            } else {
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
            Ok(pass)
        }
        Command::MainTheorem(args) => {
            let g = load_dgf(&args.graph)?;
            let mut spec = SupportSpec::default_for(&g);
            if let Some(text) = &args.l_sizes {
                spec.l_sizes = parse_sizes(text)?;
            }
            if let Some(text) = &args.d_sizes {
                spec.d_sizes = parse_sizes(text)?;
            }
            let catalog = Catalog::build(DEFAULT_MAX_LEVEL)?;
            let report = lemmas::verify_main_theorem(&catalog, &g, &spec, args.samples, args.seed)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let pass = report.passed();
            if args.pretty {
                println!("main-theorem {} ({} ms)", report.status, report.elapsed_ms);
                for note in &report.notes {
                    println!("  note: {note}");
                }
                for c in &report.counterexamples {
                    println!("  counterexample: {}", c.join(", "));
                }
            } else {
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
            Ok(pass)
        }
        Command::Graph(args) => {
            let a = load_dgf(&args.a)?;
            let need_b = || {
                args.b
                    .as_ref()
                    .context("this operation needs --b FILE")
                    .and_then(load_dgf)
            };
            match args.op {
                GraphOp::Canon => println!("{}", a.canonical_form()),
                GraphOp::Iso => println!("{}", a.is_isomorphic(&need_b()?)),
                GraphOp::Sub => println!("{}", dposet_core::is_substructure(&a, &need_b()?)),
                GraphOp::Emb => println!("{}", dposet_core::is_embeddable(&a, &need_b()?)),
            }
            Ok(true)
        }
    }
}

fn emit_json(reports: &[serde_json::Value], pretty: bool) -> Result<()> {
    if pretty {
        for r in reports {
            println!("{}", serde_json::to_string(r)?);
        }
    } else {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
