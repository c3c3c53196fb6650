//! `mgk`: batch front end. Reads a JSON run configuration, runs the selected
//! command and writes a JSON or Markdown report.

mod config;
mod report;

use clap::Parser;
use config::{Command, ConfigError, Format, RunConfig};
use mgk_core::cayley::agreement_radius;
use mgk_core::pipeline::assemble_construction;
use mgk_core::spectral::expander_table;
use mgk_core::suites::{named_group, run_suite, CheckRecord, CheckStatus, SuiteOptions, CATALOG};
use report::{AgreementRow, VerificationReport};
use serde_json::json;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "mgk",
    version,
    about = "Verify marked-group constructions and emit a report"
)]
struct Args {
    /// Run configuration (JSON).
    #[arg(long, required_unless_present = "list")]
    config: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Suites run in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Print every suite with its checks and exit.
    #[arg(long)]
    list: bool,
}

const CONFIG_ERROR: u8 = 2;

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        let mut out = std::io::stdout().lock();
        for (suite, checks) in CATALOG {
            let _ = writeln!(out, "{suite}");
            for (check, anchor) in *checks {
                let _ = writeln!(out, "  {check:<32} {anchor}");
            }
        }
        return ExitCode::SUCCESS;
    }
    let path = args.config.expect("clap enforces --config");
    let mut cfg = match RunConfig::load(&path) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    if let Some(f) = args.format {
        cfg.format = f;
    }
    if let Some(o) = args.out {
        cfg.output = Some(o);
    }
    let report = run(&cfg, args.jobs.max(1));
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
    };
    match &cfg.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("mgk: cannot write {}: {e}", p.display());
                print!("{text}");
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    let s = &report.summary;
    eprintln!(
        "mgk: pass {} fail {} inconclusive {} skipped {}",
        s.pass, s.fail, s.inconclusive, s.skipped
    );
    ExitCode::from(report.exit_code() as u8)
}

fn config_error(e: ConfigError) -> ExitCode {
    eprintln!("mgk: {e}");
    ExitCode::from(CONFIG_ERROR)
}

fn run(cfg: &RunConfig, jobs: usize) -> VerificationReport {
    match cfg.command {
        Command::Verify => verify(cfg, jobs),
        Command::Construct => construct(cfg),
        Command::Agreement => agreement(cfg),
        Command::Spectral => spectral(cfg),
    }
}

fn record(
    name: String,
    anchor: &str,
    status: CheckStatus,
    witness: serde_json::Value,
    exhausted: bool,
) -> CheckRecord {
    CheckRecord {
        name,
        anchor: anchor.into(),
        status,
        witness,
        runtime_ms: None,
        exhausted,
    }
}

fn status(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Suites run on up to `jobs` threads; results are ordered by suite name.
fn verify(cfg: &RunConfig, jobs: usize) -> VerificationReport {
    let opts = SuiteOptions {
        caps: cfg.caps,
        seed: cfg.seed,
        record_timings: cfg.record_timings,
        goursat_samples: cfg.goursat_samples,
        absorption_rmax: cfg.absorption_rmax,
    };
    let suites = cfg.selected_suites();
    let results: Mutex<Vec<(usize, Vec<CheckRecord>)>> = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(suites.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(name) = suites.get(i) else { break };
                let records = run_suite(name, &opts).unwrap_or_else(|e| {
                    vec![record(
                        name.clone(),
                        "plumbing",
                        CheckStatus::Fail,
                        json!({ "error": e.to_string() }),
                        false,
                    )]
                });
                results.lock().expect("results lock").push((i, records));
            });
        }
    });
    let mut results = results.into_inner().expect("results lock");
    results.sort_by_key(|(i, _)| *i);
    VerificationReport::new(
        cfg.clone(),
        results.into_iter().flat_map(|(_, r)| r).collect(),
    )
}

fn construct(cfg: &RunConfig) -> VerificationReport {
    let pc = cfg.pipeline_config();
    const ANCHOR: &str = "two dense diagonal products at a finite prefix";
    match assemble_construction(&pc) {
        Ok(rep) => {
            let mut records = Vec::new();
            for s in &rep.stages {
                let ok = s.full_wreath
                    && s.t_is_u_power
                    && s.hall_recovery_exact
                    && s.order_wt == s.order_wu;
                let witness = json!({
                    "l": s.l, "p": s.p, "p_prime": s.p_prime,
                    "order": s.order_wu.to_string(),
                    "t_is_u_power": s.t_is_u_power,
                    "hall_recovery_exact": s.hall_recovery_exact,
                });
                records.push(record(
                    format!("construct/stage-{}", s.m),
                    ANCHOR,
                    status(ok),
                    witness,
                    false,
                ));
            }
            for p in &rep.prefixes {
                let witness = json!({ "order": p.k_order.to_string(), "dense_wt": p.with_t.dense, "dense_wu": p.with_u.dense });
                records.push(record(
                    format!("construct/prefix-{}", p.n),
                    ANCHOR,
                    status(p.with_t.dense && p.with_u.dense),
                    witness,
                    false,
                ));
            }
            if let Some(e) = &rep.exhausted {
                records.push(record(
                    "construct/exhausted".into(),
                    "plumbing",
                    CheckStatus::Inconclusive,
                    json!({ "error": e }),
                    true,
                ));
            }
            let mut out = VerificationReport::new(cfg.clone(), records);
            out.construction = Some(rep);
            out
        }
        Err(e) => {
            let exhausted = e.is_resource();
            let st = if exhausted {
                CheckStatus::Inconclusive
            } else {
                CheckStatus::Fail
            };
            VerificationReport::new(
                cfg.clone(),
                vec![record(
                    "construct/assembly".into(),
                    ANCHOR,
                    st,
                    json!({ "error": e.to_string() }),
                    exhausted,
                )],
            )
        }
    }
}

fn agreement(cfg: &RunConfig) -> VerificationReport {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (a, b) in &cfg.agreement.pairs {
        let started = Instant::now();
        let result = named_group(a).and_then(|x| {
            named_group(b).and_then(|y| agreement_radius(&x, &y, cfg.agreement.rmax, &cfg.caps))
        });
        let name = format!("agreement/{a}~{b}");
        let mut rec = match &result {
            Ok(r) => record(
                name,
                "Cayley-topology agreement radius",
                CheckStatus::Pass,
                json!({ "radius": r }),
                false,
            ),
            Err(e) => {
                let ex = e.is_resource();
                let st = if ex {
                    CheckStatus::Inconclusive
                } else {
                    CheckStatus::Fail
                };
                record(
                    name,
                    "Cayley-topology agreement radius",
                    st,
                    json!({ "error": e.to_string() }),
                    ex,
                )
            }
        };
        rec.runtime_ms = cfg
            .record_timings
            .then(|| started.elapsed().as_millis() as u64);
        records.push(rec);
        let (radius, error) = match result {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        rows.push(AgreementRow {
            a: a.clone(),
            b: b.clone(),
            rmax: cfg.agreement.rmax,
            radius,
            error,
        });
    }
    let mut out = VerificationReport::new(cfg.clone(), records);
    out.agreement = Some(rows);
    out
}

fn spectral(cfg: &RunConfig) -> VerificationReport {
    let rows = expander_table(&cfg.spectral.blocks, &cfg.caps, cfg.record_timings);
    let records = rows
        .iter()
        .map(|r| {
            let name = format!("spectral/{}", r.label);
            const ANCHOR: &str = "spectral gap of block elementary Cayley graphs";
            match &r.error {
                None => {
                    let ok = r.gap.is_some_and(|g| g > 0.0) && r.residual.is_some_and(|x| x < 1e-9);
                    record(
                        name,
                        ANCHOR,
                        status(ok),
                        json!({ "gap": r.gap, "residual": r.residual }),
                        false,
                    )
                }
                Some(e) => {
                    let ex = e.contains("exceeded the limit");
                    let st = if ex {
                        CheckStatus::Inconclusive
                    } else {
                        CheckStatus::Fail
                    };
                    record(name, ANCHOR, st, json!({ "error": e }), ex)
                }
            }
        })
        .collect();
    let mut out = VerificationReport::new(cfg.clone(), records);
    out.spectral = Some(rows);
    out
}
