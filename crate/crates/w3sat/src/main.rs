//! Command-line front end: solve, oracle, compare, mine, lemmas, bench, and
//! export-dot.
//!
//! Exit codes: 0 = satisfiable / saturated / report written, 10 = unsat or
//! refuted (solve, oracle), 20 = counterexample found (mine), 2 = usage
//! error, 1 = internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use w3sat::db_bound;
use w3sat::engine::{saturate, EngineOptions, Verdict};
use w3sat::harness::{
    bench_bounds, bench_csv, check_lemma_shape, compare, mine_counterexample, GenConfig, LemmaId,
    LemmaShapeReport, MineOutcome, MineParams,
};
use w3sat::io::{
    emit_dimacs, parse_dimacs, parse_paper_lists, sha256_hex, ParsedInstance, RunRecord,
};
use w3sat::oracle::{solve_dpll, solve_enumerate_with_limit, Status, ENUMERATE_MAX_N};
use w3sat::trace::{export_derivation_dag, write_trace};

#[derive(Parser)]
#[command(
    name = "w3sat",
    version,
    about = "Width-3 clause saturation for 3SAT, with ground-truth oracles and a falsification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the saturation engine on an instance.
    Solve(SolveArgs),
    /// Decide an instance with an independent oracle.
    Oracle(OracleArgs),
    /// Compare engine and oracle over seeded random instances.
    Compare(CompareArgs),
    /// Search for instances that are unsat yet saturate.
    Mine(MineArgs),
    /// Sample derivation-rearrangement shapes and test reduced-width
    /// derivability (claim ids: 5.11 5.12 5.17 5.18 5.19).
    Lemmas(LemmasArgs),
    /// Measure database size against the hard bound.
    Bench(BenchArgs),
    /// Export a refutation DAG in DOT format.
    ExportDot(ExportDotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    /// DIMACS CNF.
    Dimacs,
    /// Bracketed list of lists, e.g. [[-1, 2, 3], [1, 4, 5]].
    #[value(alias = "paper_lists")]
    Lists,
}

#[derive(Args)]
struct InputArgs {
    /// Input file.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "dimacs")]
    format: InputFormat,
    /// Variable count override for the list format. Variables that appear
    /// in no clause still count: they widen the expansion universe.
    #[arg(long)]
    vars: Option<u32>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Disable the expansion rule.
    #[arg(long)]
    no_expand: bool,
    /// Use the literal repeat-until-stable sweep instead of the worklist.
    #[arg(long)]
    conformance_sweep: bool,
    /// Experiment: resolve width-4 resolvents one extra step.
    #[arg(long)]
    reduce_width4: bool,
    /// Write the refutation trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write a JSON run record to this file.
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMethod {
    Enumerate,
    Dpll,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "enumerate")]
    method: OracleMethod,
    /// Variable cap for exhaustive enumeration.
    #[arg(long, env = "W3SAT_MAX_N", default_value_t = ENUMERATE_MAX_N)]
    max_n: u32,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Inclusive variable range, e.g. 6..14.
    #[arg(long, default_value = "6..14", value_parser = parse_range)]
    n: (u32, u32),
    /// Densities (clauses per variable), comma separated.
    #[arg(long, default_value = "3.0,4.27,5.5", value_parser = parse_f64_list)]
    densities: std::vec::Vec<f64>,
    /// Instances per (n, density) cell.
    #[arg(long, default_value_t = 50)]
    count: u32,
    #[arg(long, env = "W3SAT_SEED", default_value_t = 1)]
    seed: u64,
    /// CSV report path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct MineArgs {
    /// Inclusive variable range, e.g. 10..40.
    #[arg(long, default_value = "10..40", value_parser = parse_range)]
    n: (u32, u32),
    #[arg(long, default_value_t = 4.27)]
    density: f64,
    /// Maximum candidates to examine.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, env = "W3SAT_SEED", default_value_t = 1)]
    seed: u64,
    /// Directory for the mined DIMACS file and its JSON sidecar.
    #[arg(long)]
    out_dir: PathBuf,
    /// Also run the width-4 reduction variant on the minimized instance.
    #[arg(long)]
    probe_width4: bool,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct LemmasArgs {
    /// Claim id (5.11, 5.12, 5.17, 5.18, 5.19) or "all".
    #[arg(long, default_value = "all")]
    lemma: String,
    /// Widths k to exercise, comma separated.
    #[arg(long, default_value = "4,5", value_parser = parse_u32_list)]
    k: std::vec::Vec<u32>,
    #[arg(long, default_value_t = 10)]
    n: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, env = "W3SAT_SEED", default_value_t = 1)]
    seed: u64,
    /// Summary CSV path; failure witnesses go to <out>.failures.json.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Variable counts, comma separated.
    #[arg(long, default_value = "4,6,8,10,12,14", value_parser = parse_u32_list)]
    n: std::vec::Vec<u32>,
    /// Seeds, comma separated.
    #[arg(long, default_value = "1,2,3", value_parser = parse_u64_list)]
    seeds: std::vec::Vec<u64>,
    #[arg(long, default_value_t = 4.27)]
    density: f64,
    /// CSV report path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct ExportDotArgs {
    #[command(flatten)]
    input: InputArgs,
    /// DOT output path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    record: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range start '{lo}'"))?;
        let hi: u32 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range end '{hi}'"))?;
        if hi < lo {
            return Err(format!("empty range {lo}..{hi} (bounds are inclusive)"));
        }
        Ok((lo, hi))
    } else {
        let v: u32 = s.trim().parse().map_err(|_| format!("bad value '{s}'"))?;
        Ok((v, v))
    }
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad integer '{t}'")))
        .collect()
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad integer '{t}'")))
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad number '{t}'")))
        .collect()
}

const EXIT_OK: u8 = 0;
const EXIT_UNSAT: u8 = 10;
const EXIT_COUNTEREXAMPLE: u8 = 20;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Mine(args) => cmd_mine(args),
        Command::Lemmas(args) => cmd_lemmas(args),
        Command::Bench(args) => cmd_bench(args),
        Command::ExportDot(args) => cmd_export_dot(args),
    }
}

struct LoadedInstance {
    parsed: ParsedInstance,
    raw: Vec<u8>,
}

fn load_instance(args: &InputArgs) -> Result<LoadedInstance, String> {
    let raw =
        fs::read(&args.input).map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let text = String::from_utf8(raw.clone())
        .map_err(|_| format!("{} is not UTF-8 text", args.input.display()))?;
    let parsed = match args.format {
        InputFormat::Dimacs => parse_dimacs(&text).map_err(|e| e.to_string())?,
        InputFormat::Lists => parse_paper_lists(&text, args.vars).map_err(|e| e.to_string())?,
    };
    if parsed.tautologies_dropped > 0 {
        eprintln!(
            "note: dropped {} tautological clause(s)",
            parsed.tautologies_dropped
        );
    }
    Ok(LoadedInstance { parsed, raw })
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
        }
    }
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn write_record(
    path: &Option<PathBuf>,
    command: &str,
    input: Option<&[u8]>,
    payload: serde_json::Value,
) -> Result<(), String> {
    let Some(path) = path else { return Ok(()) };
    let mut record = RunRecord::new(command, std::env::args().skip(1).collect(), input);
    record.payload = payload;
    let text = serde_json::to_string_pretty(&record).expect("record serializes");
    write_file(path, &text)
}

fn cmd_solve(args: SolveArgs) -> Result<u8, String> {
    let loaded = load_instance(&args.input)?;
    let inst = &loaded.parsed.instance;
    let opts = EngineOptions {
        expansion: !args.no_expand,
        conformance_sweep: args.conformance_sweep,
        reduce_width4: args.reduce_width4,
        ..EngineOptions::default()
    };
    let verdict = saturate(inst, &opts).map_err(|e| e.to_string())?;
    let stats = verdict.stats();
    match &verdict {
        Verdict::Refuted { var, trace, .. } => {
            println!("refuted: contradicting units over variable {var}");
            if let Some(path) = &args.trace {
                write_file(path, &write_trace(trace))?;
                println!("trace: {} steps written to {}", trace.len(), path.display());
            }
        }
        Verdict::Saturated { .. } => println!("saturated: no contradicting unit pair"),
    }
    println!(
        "passes={} resolutions={} clauses_added={} db_size={} bound={}",
        stats.passes,
        stats.resolutions_attempted,
        stats.clauses_added,
        stats.db_size,
        db_bound(inst.n_vars() as u64)
    );
    write_record(
        &args.record,
        "solve",
        Some(&loaded.raw),
        serde_json::json!({ "verdict": verdict.kind_str(), "stats": stats }),
    )?;
    Ok(if verdict.is_refuted() {
        EXIT_UNSAT
    } else {
        EXIT_OK
    })
}

fn cmd_oracle(args: OracleArgs) -> Result<u8, String> {
    let loaded = load_instance(&args.input)?;
    let inst = &loaded.parsed.instance;
    let result = match args.method {
        OracleMethod::Enumerate => {
            solve_enumerate_with_limit(inst, args.max_n).map_err(|e| e.to_string())?
        }
        OracleMethod::Dpll => solve_dpll(inst),
    };
    let (code, status_str) = match &result.status {
        Status::Sat(witness) => {
            println!("SAT");
            println!("witness: {witness}");
            (EXIT_OK, "sat")
        }
        Status::Unsat => {
            println!("UNSAT");
            (EXIT_UNSAT, "unsat")
        }
    };
    println!("nodes_explored={}", result.nodes_explored);
    write_record(
        &args.record,
        "oracle",
        Some(&loaded.raw),
        serde_json::json!({ "status": status_str, "nodes_explored": result.nodes_explored }),
    )?;
    Ok(code)
}

fn cmd_compare(args: CompareArgs) -> Result<u8, String> {
    let mut cfgs = Vec::new();
    let mut seed = args.seed;
    for &density in &args.densities {
        for n in args.n.0..=args.n.1 {
            let m = (density * n as f64).round() as u32;
            for _ in 0..args.count {
                cfgs.push(GenConfig {
                    n_vars: n,
                    n_clauses: m,
                    seed,
                });
                seed += 1;
            }
        }
    }
    let report = compare(&cfgs).map_err(|e| e.to_string())?;
    write_file(&args.out, &report.to_csv())?;
    println!("{}", report.summary_line());
    write_record(
        &args.record,
        "compare",
        None,
        serde_json::json!({
            "instances": report.rows.len(),
            "agree_sat": report.aggregate.agree_sat,
            "agree_unsat": report.aggregate.agree_unsat,
            "disagreements": report.aggregate.disagreements,
            "soundness_violations": report.aggregate.soundness_violations,
            "report": args.out.display().to_string(),
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_mine(args: MineArgs) -> Result<u8, String> {
    let params = MineParams {
        n_lo: args.n.0,
        n_hi: args.n.1,
        density: args.density,
        seed_start: args.seed,
        budget: args.budget,
        probe_width4: args.probe_width4,
    };
    let outcome = mine_counterexample(&params).map_err(|e| e.to_string())?;
    match outcome {
        MineOutcome::Found(cex) => {
            let base = args
                .out_dir
                .join(format!("counterexample_seed{}_n{}", cex.seed, cex.n));
            let cnf_path = base.with_extension("cnf");
            let json_path = base.with_extension("json");
            let cnf_text = emit_dimacs(&cex.minimized);
            write_file(&cnf_path, &cnf_text)?;
            write_file(
                &json_path,
                &serde_json::to_string_pretty(&cex.sidecar_json()).unwrap(),
            )?;
            println!(
                "counterexample: seed={} n={} m={} (minimized from {}); unsat by dpll, saturated by the engine",
                cex.seed, cex.n, cex.m_minimized, cex.m_original
            );
            if let Some(refutes) = cex.width4_variant_refutes {
                println!("width-4 reduction variant refutes: {refutes}");
            }
            println!("wrote {} and {}", cnf_path.display(), json_path.display());
            write_record(
                &args.record,
                "mine",
                None,
                serde_json::json!({
                    "outcome": "found",
                    "seed": cex.seed,
                    "n": cex.n,
                    "m": cex.m_minimized,
                    "cnf": cnf_path.display().to_string(),
                    "digest": sha256_hex(cnf_text.as_bytes()),
                }),
            )?;
            Ok(EXIT_COUNTEREXAMPLE)
        }
        MineOutcome::NotFound { attempts } => {
            let report_path = args.out_dir.join("mine_notfound.json");
            let body = serde_json::json!({
                "outcome": "not_found",
                "attempts": attempts,
                "n_lo": params.n_lo,
                "n_hi": params.n_hi,
                "density": params.density,
                "seed_start": params.seed_start,
            });
            write_file(&report_path, &serde_json::to_string_pretty(&body).unwrap())?;
            println!("no counterexample in {attempts} candidates");
            println!("wrote {}", report_path.display());
            write_record(&args.record, "mine", None, body)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_lemmas(args: LemmasArgs) -> Result<u8, String> {
    let lemmas: Vec<LemmaId> = if args.lemma == "all" {
        LemmaId::ALL.to_vec()
    } else {
        vec![LemmaId::parse(&args.lemma)
            .ok_or_else(|| format!("unknown claim id '{}'", args.lemma))?]
    };
    let mut csv = String::from(LemmaShapeReport::csv_header());
    csv.push('\n');
    let mut witnesses = Vec::new();
    for &lemma in &lemmas {
        for &k in &args.k {
            let report = check_lemma_shape(lemma, k, args.n, args.trials, args.seed)
                .map_err(|e| e.to_string())?;
            println!("{}", report.csv_row());
            csv.push_str(&report.csv_row());
            csv.push('\n');
            for w in &report.failures {
                witnesses.push(serde_json::json!({
                    "lemma": lemma.label(),
                    "k": k,
                    "n": args.n,
                    "trial": w.trial,
                    "trial_seed": w.trial_seed,
                    "premises": w.premises.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "target": w.target.to_string(),
                }));
            }
        }
    }
    write_file(&args.out, &csv)?;
    let witness_path = args.out.with_extension("failures.json");
    write_file(
        &witness_path,
        &serde_json::to_string_pretty(&witnesses).unwrap(),
    )?;
    write_record(
        &args.record,
        "lemmas",
        None,
        serde_json::json!({
            "report": args.out.display().to_string(),
            "witnesses": witness_path.display().to_string(),
            "failure_count": witnesses.len(),
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_bench(args: BenchArgs) -> Result<u8, String> {
    let rows = bench_bounds(&args.n, &args.seeds, args.density).map_err(|e| e.to_string())?;
    write_file(&args.out, &bench_csv(&rows))?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    println!(
        "bench: {} rows, max db_size/bound ratio {max_ratio:.6}",
        rows.len()
    );
    write_record(
        &args.record,
        "bench",
        None,
        serde_json::json!({ "rows": rows.len(), "report": args.out.display().to_string() }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_export_dot(args: ExportDotArgs) -> Result<u8, String> {
    let loaded = load_instance(&args.input)?;
    let verdict =
        saturate(&loaded.parsed.instance, &EngineOptions::default()).map_err(|e| e.to_string())?;
    let dot = export_derivation_dag(&verdict)
        .map_err(|_| "instance saturated; there is no refutation DAG to export".to_string())?;
    write_file(&args.out, &dot)?;
    println!("wrote {}", args.out.display());
    write_record(
        &args.record,
        "export-dot",
        Some(&loaded.raw),
        serde_json::json!({ "out": args.out.display().to_string() }),
    )?;
    Ok(EXIT_OK)
}
