//! Experiment runner: wires an algorithm to a request source, keeps the
//! cost ledger, evaluates the inequality audits inline, compares against
//! the offline oracles, and serializes reports and traces.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adversaries::{
    scheduled_opt, Adversary, CountBad, FixedPlusLast, LastR, MaeDynamicLb, RelativeBad,
};
use crate::algorithms::{
    LazyRounding, Mae, MtfAll, MtfCount, MtfFirst, MtfLast, MtfRandom, MtfRelative,
    OnlineAlgorithm,
};
use crate::error::{Error, Result};
use crate::index::PermTable;
use crate::ledger::CostLedger;
use crate::oracles::{access_total, greedy_static, opt_dynamic_dp, opt_static_bruteforce};
use crate::perm::{kendall_tau, Permutation, RequestSet};
use crate::trace::Trace;

/// Where requests come from: a fixed trace or an adaptive adversary.
#[derive(Clone, Debug)]
pub enum Source {
    Trace(Trace),
    Adversary {
        id: String,
        params: Vec<(String, String)>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleChoice {
    Static,
    Greedy,
    Dynamic,
    Scheduled,
    None,
}

impl OracleChoice {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "static" => OracleChoice::Static,
            "greedy" => OracleChoice::Greedy,
            "dynamic" => OracleChoice::Dynamic,
            "scheduled" => OracleChoice::Scheduled,
            "none" => OracleChoice::None,
            other => {
                return Err(Error::InvalidInput(format!("unknown oracle `{other}`")));
            }
        })
    }

    fn label(&self) -> &'static str {
        match self {
            OracleChoice::Static => "static",
            OracleChoice::Greedy => "greedy",
            OracleChoice::Dynamic => "dynamic",
            OracleChoice::Scheduled => "scheduled",
            OracleChoice::None => "none",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algorithm: String,
    pub alg_params: Vec<(String, String)>,
    pub source: Source,
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub seed: u64,
    pub audits: bool,
    pub oracle: OracleChoice,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst slack observed: bound minus value; negative means violated.
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCost {
    pub name: String,
    pub cost: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub seed: u64,
    pub ledger: CostLedger,
    pub oracle: Option<OracleCost>,
    /// Total algorithm cost over the oracle cost, when the latter is positive.
    pub ratio: Option<f64>,
    pub audits: Vec<AuditOutcome>,
    /// The request sequence actually served; adaptive runs become replayable.
    pub realized: Vec<RequestSet>,
}

impl RunReport {
    pub fn audits_passed(&self) -> bool {
        self.audits.iter().all(|a| a.passed)
    }

    pub fn realized_trace(&self, n: usize, r: usize) -> Result<Trace> {
        let mut t = Trace::new(n, r)?;
        for s in &self.realized {
            t.push(s.clone())?;
        }
        Ok(t)
    }
}

enum Alg {
    MtfFirst(MtfFirst),
    MtfLast(MtfLast),
    MtfAll(MtfAll),
    MtfRandom(MtfRandom),
    MtfRelative(MtfRelative),
    MtfCount(MtfCount),
    Mae(Mae),
    Lazy(LazyRounding),
}

impl Alg {
    fn as_dyn(&mut self) -> &mut dyn OnlineAlgorithm {
        match self {
            Alg::MtfFirst(a) => a,
            Alg::MtfLast(a) => a,
            Alg::MtfAll(a) => a,
            Alg::MtfRandom(a) => a,
            Alg::MtfRelative(a) => a,
            Alg::MtfCount(a) => a,
            Alg::Mae(a) => a,
            Alg::Lazy(a) => a,
        }
    }

    fn current(&self) -> &Permutation {
        match self {
            Alg::MtfFirst(a) => a.current(),
            Alg::MtfLast(a) => a.current(),
            Alg::MtfAll(a) => a.current(),
            Alg::MtfRandom(a) => a.current(),
            Alg::MtfRelative(a) => a.current(),
            Alg::MtfCount(a) => a.current(),
            Alg::Mae(a) => a.current(),
            Alg::Lazy(a) => a.current(),
        }
    }
}

fn param<'a>(params: &'a [(String, String)], key: &str) -> Option<&'a str> {
    params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}

fn param_usize(params: &[(String, String)], key: &str, default: usize) -> Result<usize> {
    match param(params, key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::InvalidInput(format!("parameter {key}={v} is not an integer"))),
    }
}

fn build_algorithm(config: &RunConfig) -> Result<Alg> {
    let initial = Permutation::identity(config.n);
    let params = &config.alg_params;
    Ok(match config.algorithm.as_str() {
        "mtf_first" => Alg::MtfFirst(MtfFirst::new(initial)),
        "mtf_last" => Alg::MtfLast(MtfLast::new(initial)),
        "mtf_all" => Alg::MtfAll(MtfAll::new(initial)),
        "mtf_random" => Alg::MtfRandom(MtfRandom::new(initial, config.seed)),
        "mtf_relative" => {
            let c = param_usize(params, "c", 2)?;
            Alg::MtfRelative(MtfRelative::new(initial, c)?)
        }
        "mtf_count" => Alg::MtfCount(MtfCount::new(initial)),
        "mae" => Alg::Mae(Mae::new(initial)),
        "lazy_rounding" => {
            let table = Arc::new(PermTable::new(config.n)?);
            Alg::Lazy(LazyRounding::new(table, initial, config.r))
        }
        other => return Err(Error::UnknownAlgorithm(other.to_string())),
    })
}

enum Requests {
    Fixed(Vec<RequestSet>, usize),
    Adaptive(Box<dyn Adversary>),
    DynamicLb(MaeDynamicLb),
}

impl Requests {
    fn next(&mut self, current: &Permutation) -> Result<RequestSet> {
        match self {
            Requests::Fixed(sets, i) => {
                let s = sets
                    .get(*i)
                    .cloned()
                    .ok_or_else(|| Error::Trace("trace shorter than requested m".into()))?;
                *i += 1;
                Ok(s)
            }
            Requests::Adaptive(adv) => adv.next_request(current),
            Requests::DynamicLb(adv) => adv.next_request(current),
        }
    }
}

fn build_source(config: &RunConfig) -> Result<Requests> {
    match &config.source {
        Source::Trace(t) => {
            if t.n() != config.n || t.r() != config.r {
                return Err(Error::Trace(format!(
                    "trace is (n={}, r={}), run wants (n={}, r={})",
                    t.n(),
                    t.r(),
                    config.n,
                    config.r
                )));
            }
            Ok(Requests::Fixed(t.sets().to_vec(), 0))
        }
        Source::Adversary { id, params } => Ok(match id.as_str() {
            "last_r" => Requests::Adaptive(Box::new(LastR::new(config.r))),
            "fixed_plus_last" => {
                let fixed = param_usize(params, "fixed", 1)? as u32;
                Requests::Adaptive(Box::new(FixedPlusLast::new(fixed, config.r)?))
            }
            "relative_bad" => {
                let c = param_usize(params, "c", 2)?;
                Requests::Adaptive(Box::new(RelativeBad::new(c, config.r)?))
            }
            "count_bad" => Requests::Adaptive(Box::new(CountBad::new(config.n)?)),
            "mae_dynamic_lb" => {
                let k = param_usize(params, "k", 3)?;
                let adv = MaeDynamicLb::new(k, config.r)?;
                if adv.n() != config.n {
                    return Err(Error::InvalidInput(format!(
                        "mae_dynamic_lb with k={k}, r={} needs n={}, got n={}",
                        config.r,
                        adv.n(),
                        config.n
                    )));
                }
                Requests::DynamicLb(adv)
            }
            other => return Err(Error::UnknownAdversary(other.to_string())),
        }),
    }
}

pub fn run(config: &RunConfig) -> Result<RunReport> {
    if config.n == 0 || config.r == 0 || config.r > config.n || config.m == 0 {
        return Err(Error::InvalidInput(format!(
            "run needs 1 <= r <= n and m >= 1, got n={}, r={}, m={}",
            config.n, config.r, config.m
        )));
    }
    let mut alg = build_algorithm(config)?;
    let mut source = build_source(config)?;
    let initial = Permutation::identity(config.n);

    let mut ledger = CostLedger::new();
    let mut realized: Vec<RequestSet> = Vec::with_capacity(config.m);
    let mut prev = initial.clone();
    let mut moving_margin = f64::INFINITY;
    // lazy-rounding audit accumulators
    let mut expected_sum = 0.0f64;
    let mut phase_expected = 0.0f64;
    let mut phase_floor_margin = f64::INFINITY;
    let mut tv_margin = f64::INFINITY;

    for _ in 0..config.m {
        let s = source.next(alg.current())?;
        let (access, moving) = match &mut alg {
            Alg::Lazy(lazy) => {
                let stats = lazy.serve_detailed(&s)?;
                expected_sum += stats.expected_access;
                if stats.rounded {
                    // a completed phase accumulated at least n^2 expected cost
                    phase_floor_margin = phase_floor_margin
                        .min(phase_expected - (config.n * config.n) as f64);
                    phase_expected = 0.0;
                }
                phase_expected += stats.expected_access;
                let n3 = (config.n * config.n * config.n) as f64;
                tv_margin = tv_margin.min(stats.expected_access / n3 - stats.tv_step);
                (stats.access, stats.moving)
            }
            other => {
                let out = other.as_dyn().serve(&s)?;
                (out.access, out.moving)
            }
        };
        if config.audits {
            let recomputed = kendall_tau(&prev, alg.current())?;
            moving_margin = moving_margin.min(recomputed as f64 - moving as f64);
            if recomputed != moving {
                moving_margin = moving_margin.min(-1.0);
            }
            prev = alg.current().clone();
        }
        ledger.push(access, moving)?;
        realized.push(s);
    }

    let mut audits = Vec::new();
    if config.audits {
        audits.push(AuditOutcome {
            name: "moving-recompute".into(),
            passed: moving_margin >= 0.0,
            margin: moving_margin,
        });
        if let Alg::Lazy(_) = alg {
            audits.push(AuditOutcome {
                name: "tv-step-bound".into(),
                passed: tv_margin >= -1e-9,
                margin: tv_margin,
            });
            audits.push(AuditOutcome {
                name: "phase-access-floor".into(),
                passed: phase_floor_margin >= -1e-6,
                margin: phase_floor_margin,
            });
            let access_bound = 4.0 * config.r as f64 * expected_sum;
            audits.push(AuditOutcome {
                name: "lra-access-bound".into(),
                passed: ledger.total_access as f64 <= access_bound,
                margin: access_bound - ledger.total_access as f64,
            });
            audits.push(AuditOutcome {
                name: "lra-moving-bound".into(),
                passed: ledger.total_moving as f64 <= expected_sum,
                margin: expected_sum - ledger.total_moving as f64,
            });
        }
    }

    let mut realized_trace = Trace::new(config.n, config.r)?;
    for s in &realized {
        realized_trace.push(s.clone())?;
    }

    let oracle = match config.oracle {
        OracleChoice::None => None,
        OracleChoice::Static => Some(OracleCost {
            name: "static".into(),
            cost: opt_static_bruteforce(&realized_trace)?.cost,
        }),
        OracleChoice::Greedy => {
            let p = greedy_static(&realized_trace);
            Some(OracleCost {
                name: "greedy".into(),
                cost: access_total(&p, &realized_trace)?,
            })
        }
        OracleChoice::Dynamic => Some(OracleCost {
            name: "dynamic".into(),
            cost: opt_dynamic_dp(&realized_trace, &initial)?.cost,
        }),
        OracleChoice::Scheduled => match &source {
            Requests::DynamicLb(adv) => {
                let sched = scheduled_opt(
                    &realized_trace,
                    adv.pivots(),
                    adv.important().ok_or_else(|| {
                        Error::InvalidInput("adversary emitted no requests".into())
                    })?,
                    adv.round_len(),
                    &initial,
                )?;
                Some(OracleCost {
                    name: "scheduled".into(),
                    cost: sched.total_cost(),
                })
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "oracle `{}` needs the mae_dynamic_lb adversary",
                    config.oracle.label()
                )));
            }
        },
    };

    if config.audits {
        if let (Alg::Lazy(_), Some(oc)) = (&alg, &oracle) {
            if oc.name == "static" {
                let n = config.n as f64;
                let bound = (5 * config.r + 2) as f64 * oc.cost as f64
                    + 2.0 * (4 * config.r + 1) as f64 * n.powi(4) * n.ln();
                audits.push(AuditOutcome {
                    name: "lra-total-bound".into(),
                    passed: ledger.total_cost() as f64 <= bound,
                    margin: bound - ledger.total_cost() as f64,
                });
            }
        }
    }

    let ratio = oracle.as_ref().and_then(|oc| {
        if oc.cost > 0 {
            Some(ledger.total_cost() as f64 / oc.cost as f64)
        } else {
            None
        }
    });

    Ok(RunReport {
        algorithm: config.algorithm.clone(),
        n: config.n,
        r: config.r,
        m: config.m,
        seed: config.seed,
        ledger,
        oracle,
        ratio,
        audits,
        realized,
    })
}

#[derive(Serialize, Deserialize)]
struct TraceHeader {
    n: usize,
    r: usize,
}

#[derive(Serialize, Deserialize)]
struct TraceLine {
    set: Vec<u32>,
}

/// Reads the line-oriented trace format: a `{"n":..,"r":..}` header, then
/// one `{"set":[..]}` object per line.
pub fn read_trace_from(reader: impl Read) -> Result<Trace> {
    let mut lines = BufReader::new(reader).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Trace("empty trace file".into()))??;
    let header: TraceHeader =
        serde_json::from_str(&header).map_err(|e| Error::Trace(format!("bad header: {e}")))?;
    let mut trace = Trace::new(header.n, header.r)?;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: TraceLine =
            serde_json::from_str(&line).map_err(|e| Error::Trace(format!("bad line: {e}")))?;
        trace.push(RequestSet::new(parsed.set, header.n)?)?;
    }
    Ok(trace)
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Trace> {
    read_trace_from(std::fs::File::open(path)?)
}

pub fn write_trace_to(trace: &Trace, mut writer: impl Write) -> Result<()> {
    let header = serde_json::to_string(&TraceHeader {
        n: trace.n(),
        r: trace.r(),
    })
    .expect("header serialization cannot fail");
    writeln!(writer, "{header}")?;
    for s in trace.sets() {
        let line = serde_json::to_string(&TraceLine {
            set: s.elements().to_vec(),
        })
        .expect("line serialization cannot fail");
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

pub fn write_trace(trace: &Trace, path: impl AsRef<Path>) -> Result<()> {
    write_trace_to(trace, std::fs::File::create(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidInput(format!("unknown format `{other}`"))),
        }
    }
}

pub fn write_report_to(
    report: &RunReport,
    mut writer: impl Write,
    format: ReportFormat,
) -> Result<()> {
    match format {
        ReportFormat::Json => {
            let json = serde_json::to_string_pretty(report)
                .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
            writeln!(writer, "{json}")?;
        }
        ReportFormat::Csv => {
            writeln!(writer, "t,access,moving,cumAccess,cumMoving")?;
            let mut cum_access = 0u64;
            let mut cum_moving = 0u64;
            for step in &report.ledger.steps {
                cum_access += step.access;
                cum_moving += step.moving;
                writeln!(
                    writer,
                    "{},{},{},{},{}",
                    step.t, step.access, step.moving, cum_access, cum_moving
                )?;
            }
        }
    }
    Ok(())
}

pub fn write_report(
    report: &RunReport,
    path: impl AsRef<Path>,
    format: ReportFormat,
) -> Result<()> {
    write_report_to(report, std::fs::File::create(path)?, format)
}
