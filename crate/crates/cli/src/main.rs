//! `ptkv` — batch CLI over the library: model checking (`check`),
//! satisfiability with certificates (`sat`), the randomized axiom validity
//! suite (`axioms`), and closure/type-space inspection (`closure`).
//!
//! Exit codes: 0 for a positive answer (true / SAT / no counterexamples),
//! 1 for a negative answer, 2 for any error. All output is JSON with exact
//! `a/b` rationals; identical inputs produce byte-identical output.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ptkv_core::axioms::{negative_control_suite, soundness_suite};
use ptkv_core::canonical::{
    brute_force_sat, decide_sat, materialize_replicas, BruteBounds, KSizePolicy, SatVerdict,
};
use ptkv_core::model::json::ModelFile;
use ptkv_core::syntax::{parse, print};
use ptkv_core::typespace::{enumerate_types, iterate_elimination, TypeLimits};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ptkv", version, about = "Exact model checking and satisfiability for probabilistic knowing-value logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a world of a model file.
    Check(CheckArgs),
    /// Decide satisfiability and emit a verdict with a certificate or an
    /// elimination trace.
    Sat(SatArgs),
    /// Run the randomized validity suite over every axiom schema.
    Axioms(AxiomsArgs),
    /// Inspect the finite closure and the type space of a formula.
    Closure(ClosureArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    /// World name inside the model.
    #[arg(long)]
    world: String,
    /// Formula text.
    #[arg(long)]
    formula: String,
    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SatArgs {
    /// Formula text.
    #[arg(long)]
    formula: String,
    /// Coordinate policy: `paper`, `plus-one`, or an explicit count.
    #[arg(long, env = "PTKV_K_SIZE", default_value = "plus-one", value_parser = parse_k_size)]
    k_size: KSizePolicy,
    /// Maximum closure core size.
    #[arg(long, default_value_t = 40)]
    closure_cap: usize,
    /// Maximum number of type candidates.
    #[arg(long, default_value_t = 1 << 20)]
    type_cap: usize,
    /// Cross-check the verdict against the bounded exhaustive search.
    #[arg(long)]
    cross_check: bool,
    /// Bounded-search world limit (with --cross-check).
    #[arg(long, default_value_t = 3)]
    bounds_worlds: usize,
    /// Bounded-search domain limit (with --cross-check).
    #[arg(long, default_value_t = 3)]
    bounds_domain: usize,
    /// Bounded-search denominator limit (with --cross-check).
    #[arg(long, default_value_t = 3)]
    bounds_denominator: i64,
    /// Expand each certificate world into N replicas with geometric masses.
    #[arg(long)]
    materialize_replicas: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AxiomsArgs {
    /// Suite seed.
    #[arg(long, env = "PTKV_SEED", default_value_t = 42)]
    seed: u64,
    /// Trials per schema (must be at least 1).
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Also run the deliberately corrupted schemata; they must be caught,
    /// and the exit code reflects the counterexamples found.
    #[arg(long)]
    negative_controls: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ClosureArgs {
    /// Formula text.
    #[arg(long)]
    formula: String,
    /// Coordinate policy: `paper`, `plus-one`, or an explicit count.
    #[arg(long, env = "PTKV_K_SIZE", default_value = "plus-one", value_parser = parse_k_size)]
    k_size: KSizePolicy,
    /// Maximum closure core size.
    #[arg(long, default_value_t = 40)]
    closure_cap: usize,
    /// Maximum number of type candidates.
    #[arg(long, default_value_t = 1 << 20)]
    type_cap: usize,
    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_k_size(text: &str) -> Result<KSizePolicy, String> {
    match text {
        "paper" => Ok(KSizePolicy::Paper),
        "plus-one" => Ok(KSizePolicy::PlusOne),
        n => {
            let count: usize = n
                .parse()
                .map_err(|_| format!("expected `paper`, `plus-one`, or a number, got `{n}`"))?;
            if count == 0 {
                return Err("explicit coordinate count must be at least 1".to_string());
            }
            Ok(KSizePolicy::Explicit(count))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let message = serde_json::json!({ "error": format!("{err:#}") });
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Check(args) => cmd_check(args),
        Command::Sat(args) => cmd_sat(args),
        Command::Axioms(args) => cmd_axioms(args),
        Command::Closure(args) => cmd_closure(args),
    }
}

/// Writes atomically when a path is given: temp file in the same directory,
/// then rename.
fn emit(output: &Option<PathBuf>, value: &serde_json::Value) -> Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    match output {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().unwrap_or_else(|| Path::new("."));
            let tmp = dir.join(format!(
                ".{}.tmp",
                path.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "ptkv-output".to_string())
            ));
            std::fs::write(&tmp, &text)
                .with_context(|| format!("writing {}", tmp.display()))?;
            std::fs::rename(&tmp, path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            Ok(())
        }
    }
}

fn cmd_check(args: CheckArgs) -> Result<u8> {
    let text = std::fs::read_to_string(&args.model)
        .with_context(|| format!("reading {}", args.model.display()))?;
    let file = ModelFile::from_json_str(&text).context("parsing model file")?;
    let model = file.build().context("validating model file")?;
    let formula = parse(&args.formula).map_err(|e| anyhow!("parsing formula: {e}"))?;
    let result = model
        .satisfies_named(&args.world, &formula)
        .map_err(|e| anyhow!("evaluating formula: {e}"))?;
    emit(&args.output, &serde_json::json!({ "result": result }))?;
    Ok(if result { 0 } else { 1 })
}

fn cmd_sat(args: SatArgs) -> Result<u8> {
    let formula = parse(&args.formula).map_err(|e| anyhow!("parsing formula: {e}"))?;
    let limits = TypeLimits {
        closure_cap: args.closure_cap,
        type_cap: args.type_cap,
    };
    let verdict = decide_sat(&formula, args.k_size, &limits)?;
    let mut json = verdict.to_json(args.k_size);

    if let (Some(n), SatVerdict::Sat { model, world, .. }) =
        (args.materialize_replicas, &verdict)
    {
        if n == 0 {
            bail!("--materialize-replicas must be at least 1");
        }
        let expanded = materialize_replicas(model, n);
        json["model"] = serde_json::from_str(&expanded.to_json_string())?;
        json["world"] = serde_json::json!(format!("{world}_r1"));
        json["replicas"] = serde_json::json!(n);
    }

    if args.cross_check {
        let bounds = BruteBounds {
            max_worlds: args.bounds_worlds,
            max_domain: args.bounds_domain,
            max_denominator: args.bounds_denominator,
        };
        let found = brute_force_sat(&formula, &bounds)?;
        json["cross_check"] = serde_json::json!({
            "bounds": {
                "worlds": bounds.max_worlds,
                "domain": bounds.max_domain,
                "denominator": bounds.max_denominator,
            },
            "model_found": found.is_some(),
        });
    }

    emit(&args.output, &json)?;
    Ok(if verdict.is_sat() { 0 } else { 1 })
}

fn cmd_axioms(args: AxiomsArgs) -> Result<u8> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let report = soundness_suite(args.seed, args.trials);
    let mut total = report.total_counterexamples();
    let mut json = report.to_json();
    if args.negative_controls {
        let controls = negative_control_suite(args.seed, args.trials);
        let control_json: serde_json::Value = controls
            .iter()
            .map(|(name, r)| {
                let counterexamples: Vec<serde_json::Value> = r
                    .counterexamples
                    .iter()
                    .map(|ce| {
                        serde_json::json!({
                            "formula": print(&ce.instance),
                            "world": ce.world,
                            "model": serde_json::from_str::<serde_json::Value>(
                                &ce.model.to_json_string()
                            )
                            .expect("model json"),
                        })
                    })
                    .collect();
                (
                    name.clone(),
                    serde_json::json!({
                        "checks": r.checks,
                        "counterexamples": counterexamples,
                    }),
                )
            })
            .collect::<serde_json::Map<String, serde_json::Value>>()
            .into();
        total += controls
            .values()
            .map(|r| r.counterexamples.len())
            .sum::<usize>();
        json["negative_controls"] = control_json;
    }
    emit(&args.output, &json)?;
    Ok(if total == 0 { 0 } else { 1 })
}

fn cmd_closure(args: ClosureArgs) -> Result<u8> {
    let formula = parse(&args.formula).map_err(|e| anyhow!("parsing formula: {e}"))?;
    let limits = TypeLimits {
        closure_cap: args.closure_cap,
        type_cap: args.type_cap,
    };
    let closure = formula.finite_closure();
    let k_size = args.k_size.resolve(&closure);
    let types = enumerate_types(&closure, &limits)?;
    let type_count = types.len();
    let outcome = iterate_elimination(&closure, types, k_size)?;
    let star_axioms = ptkv_core::typespace::emit_star_axioms(&closure, &outcome.trace);

    let json = serde_json::json!({
        "formula": print(&formula),
        "members": closure.members().iter().map(print).collect::<Vec<_>>(),
        "core": closure.core().iter().map(print).collect::<Vec<_>>(),
        "terms": closure.terms().iter().map(|t| t.name().to_string()).collect::<Vec<_>>(),
        "thresholds": closure
            .thresholds()
            .iter()
            .map(ptkv_core::rat::rat_to_frac_string)
            .collect::<Vec<_>>(),
        "agents": closure.agents().iter().map(|a| a.index()).collect::<Vec<_>>(),
        "k_size": k_size,
        "k_size_policy": args.k_size.label(),
        "type_count": type_count,
        "type_star_count": outcome.type_star.len(),
        "star_axioms": star_axioms.iter().map(print).collect::<Vec<_>>(),
        "trace_summary": {
            "stages": outcome.trace.stages.len(),
            "eliminated": outcome.trace.eliminated().count(),
        },
    });
    emit(&args.output, &json)?;
    Ok(0)
}
