//! Command-line front end: run algorithm/source experiments, generate
//! traces, verify the counting identities, and print lower-bound values.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use omssc::adversaries::random_trace;
use omssc::harness::{
    read_trace, run, write_report, write_report_to, write_trace, OracleChoice, ReportFormat,
    RunConfig, Source,
};
use omssc::oracles::{average_access, count_perms_with_cost, theorem1_bound};
use omssc::{access_cost, factorial, PermTable, RequestSet};

#[derive(Parser)]
#[command(name = "omssc", version, about = "Online min-sum set cover laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm against a trace or adversary and report costs.
    Run(RunArgs),
    /// Generate a seeded uniform trace file.
    GenTrace(GenTraceArgs),
    /// Check the permutation counting identities exactly.
    VerifyIdentities(VerifyArgs),
    /// Print closed-form lower-bound values.
    Bound(BoundArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm id: mtf_first, mtf_last, mtf_all, mtf_random,
    /// mtf_relative, mtf_count, mae, lazy_rounding.
    #[arg(long)]
    alg: String,
    /// Algorithm parameter as key=value (repeatable), e.g. c=2.
    #[arg(long = "alg-param")]
    alg_param: Vec<String>,
    /// Request source: `trace:<path>` or `adv:<id>[,key=value...]`.
    #[arg(long)]
    source: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    /// Number of steps; defaults to the trace length for trace sources.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate the inequality audits: off, on, or strict
    /// (strict exits nonzero if any audit fails).
    #[arg(long, default_value = "on")]
    audits: String,
    /// Offline baseline: static, greedy, dynamic, scheduled, or none.
    #[arg(long, default_value = "none")]
    oracle: String,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct GenTraceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    n_max: usize,
}

#[derive(Args)]
struct BoundArgs {
    /// Print the deterministic lower bound (r+1)(1 - r/(n+1)) for `n r`.
    #[arg(long, num_args = 2, value_names = ["N", "R"])]
    theorem1: Vec<usize>,
}

fn parse_kv(raw: &str) -> Result<(String, String), String> {
    match raw.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("expected key=value, got `{raw}`")),
    }
}

fn parse_source(raw: &str) -> Result<Source, String> {
    match raw.split_once(':') {
        Some(("trace", path)) => {
            let trace = read_trace(path).map_err(|e| e.to_string())?;
            Ok(Source::Trace(trace))
        }
        Some(("adv", spec)) => {
            let mut parts = spec.split(',');
            let id = parts.next().unwrap_or_default().to_string();
            if id.is_empty() {
                return Err("adversary id missing".into());
            }
            let params = parts.map(parse_kv).collect::<Result<Vec<_>, _>>()?;
            Ok(Source::Adversary { id, params })
        }
        _ => Err(format!(
            "source must be `trace:<path>` or `adv:<id>[,k=v...]`, got `{raw}`"
        )),
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, String> {
    let source = parse_source(&args.source)?;
    let (audits, strict) = match args.audits.as_str() {
        "off" => (false, false),
        "on" => (true, false),
        "strict" => (true, true),
        other => return Err(format!("audits must be off, on, or strict, got `{other}`")),
    };
    let m = match (&source, args.m) {
        (_, Some(m)) => m,
        (Source::Trace(t), None) => t.len(),
        (Source::Adversary { .. }, None) => {
            return Err("adaptive sources need an explicit --m".into());
        }
    };
    let config = RunConfig {
        algorithm: args.alg,
        alg_params: args
            .alg_param
            .iter()
            .map(|p| parse_kv(p))
            .collect::<Result<Vec<_>, _>>()?,
        source,
        n: args.n,
        r: args.r,
        m,
        seed: args.seed,
        audits,
        oracle: OracleChoice::parse(&args.oracle).map_err(|e| e.to_string())?,
    };
    let report = run(&config).map_err(|e| e.to_string())?;
    let format = ReportFormat::parse(&args.format).map_err(|e| e.to_string())?;
    match &args.out {
        Some(path) => write_report(&report, path, format).map_err(|e| e.to_string())?,
        None => {
            write_report_to(&report, std::io::stdout().lock(), format)
                .map_err(|e| e.to_string())?;
        }
    }
    if strict && !report.audits_passed() {
        for audit in report.audits.iter().filter(|a| !a.passed) {
            eprintln!("audit failed: {} (margin {})", audit.name, audit.margin);
        }
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen_trace(args: GenTraceArgs) -> Result<ExitCode, String> {
    let trace = random_trace(args.n, args.r, args.m, args.seed).map_err(|e| e.to_string())?;
    write_trace(&trace, &args.out).map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    if args.n_max > 8 {
        return Err("n-max above 8 enumerates too many permutations".into());
    }
    let out = std::io::stdout();
    let mut out = out.lock();
    let mut ok = true;
    for n in 1..=args.n_max {
        let table = PermTable::new(n).map_err(|e| e.to_string())?;
        for r in 1..=n {
            let total: u64 = (1..=n - r + 1)
                .map(|i| count_perms_with_cost(n, r, i).unwrap())
                .sum();
            let counts_ok = total == factorial(n);

            let s = RequestSet::new((1..=r as u32).collect(), n).unwrap();
            let sum: u64 = table
                .perms()
                .iter()
                .map(|p| access_cost(p, &s).unwrap())
                .sum();
            let mean = average_access(n, r).unwrap();
            let mean_ok =
                sum as i64 * mean.denom() == mean.numer() * factorial(n) as i64;

            let verdict = if counts_ok && mean_ok { "ok" } else { "FAIL" };
            writeln!(out, "n={n} r={r} counts={total} mean={mean} {verdict}")
                .map_err(|e| e.to_string())?;
            ok &= counts_ok && mean_ok;
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode, String> {
    if args.theorem1.len() == 2 {
        let (n, r) = (args.theorem1[0], args.theorem1[1]);
        let bound = theorem1_bound(n, r).map_err(|e| e.to_string())?;
        println!(
            "theorem1(n={n}, r={r}) = {bound} ~= {:.6}",
            *bound.numer() as f64 / *bound.denom() as f64
        );
        Ok(ExitCode::SUCCESS)
    } else {
        Err("nothing to compute; pass --theorem1 N R".into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::GenTrace(args) => cmd_gen_trace(args),
        Command::VerifyIdentities(args) => cmd_verify(args),
        Command::Bound(args) => cmd_bound(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
