//! `antidist`: check ensembles from JSON files, reproduce the published
//! results, sweep the two-level probe family and run hierarchy trials.
//!
//! Exit codes: 0 for a positive outcome, 1 for a negative one, 2 on error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use antidist::constructions::FamilyTag;
use antidist::experiments::{
    check_states, check_unitaries, random_hierarchy, repro, repro_all, sweep_p, ReproOptions, ReproReport,
    TheoremId, UnitaryCheck,
};
use antidist::io::{parse_ensemble, parse_probe, parse_unitary_ensemble};
use antidist::unitary::ProbeMode;
use antidist::{Config, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "antidist", version, about = "Antidistinguishability of quantum states and unitaries")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Certified duality-gap target of the POVM solver.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol_gap: f64,
    /// A value at least 1 - tol counts as perfect antidistinguishability.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_decision: f64,
    /// Iteration cap of the POVM solver.
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    /// Independent starts of the probe search.
    #[arg(long, global = true)]
    starts: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Leave timestamps and wall times out of the report.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a state ensemble is perfectly antidistinguishable.
    CheckStates {
        /// Ensemble JSON file.
        path: PathBuf,
    },
    /// Evaluate a unitary ensemble with a given or optimized probe.
    CheckUnitaries {
        /// Unitary ensemble JSON file.
        #[arg(required_unless_present = "family", conflicts_with = "family")]
        path: Option<PathBuf>,
        /// Built-in family instead of a file.
        #[arg(long, value_parser = parse_family)]
        family: Option<FamilyTag>,
        /// Probe JSON file.
        #[arg(long, required_unless_present_any = ["optimize", "maxent"])]
        probe: Option<PathBuf>,
        /// Use the maximally entangled probe.
        #[arg(long, conflicts_with_all = ["probe", "optimize"])]
        maxent: bool,
        /// Search for the best probe of this kind.
        #[arg(long, value_enum, conflicts_with = "probe", requires = "seed")]
        optimize: Option<Mode>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reproduce one result (thm1..thm9, thm3-interval) or all of them.
    Repro {
        theorem: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Sweep the two-level probe family of the V ensemble over p.
    SweepP {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 0.01)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Monte Carlo comparison of probe and maximally entangled decisions on Haar qubit triples.
    RandomHierarchy {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Single,
    Entangled,
}

fn parse_family(s: &str) -> Result<FamilyTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn config(common: &Common, seed: Option<u64>) -> Config {
    let mut cfg = Config::default();
    cfg.solver.gap_tol = common.tol_gap;
    cfg.solver.decision_tol = common.tol_decision;
    if let Some(n) = common.max_iters {
        cfg.solver.max_iters = n;
    }
    if let Some(n) = common.starts {
        cfg.search.starts = n;
    }
    if let Some(s) = seed {
        cfg.search.seed = s;
    }
    cfg
}

fn stamp(mut v: Value, common: &Common) -> Value {
    if common.no_timestamp {
        return v;
    }
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    match &mut v {
        Value::Object(m) => {
            m.insert("timestamp".into(), now.into());
        }
        Value::Array(items) => {
            for item in items {
                if let Value::Object(m) = item {
                    m.insert("timestamp".into(), now.into());
                }
            }
        }
        _ => {}
    }
    v
}

fn emit_json(v: Value, common: &Common) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(&stamp(v, common)).expect("serializable") + "\n";
    match &common.json_out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_reports(reports: &[ReproReport], common: &Common) -> Result<(), Error> {
    for r in reports {
        print!("{}", r.table());
    }
    let v = match reports {
        [one] => serde_json::to_value(one),
        many => serde_json::to_value(many),
    }
    .expect("serializable");
    emit_json(v, common)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let common = &cli.common;
    match &cli.command {
        Command::CheckStates { path } => {
            let cfg = config(common, None);
            let e = parse_ensemble(&read(path)?, &cfg.tol)?;
            let (r, ok) = check_states(&e, &cfg)?;
            emit_reports(&[r], common)?;
            Ok(ok)
        }
        Command::CheckUnitaries {
            path,
            family,
            probe,
            maxent,
            optimize,
            seed,
        } => {
            let cfg = config(common, *seed);
            let u = match (family, path) {
                (Some(f), _) => f.build()?,
                (None, Some(p)) => parse_unitary_ensemble(&read(p)?)?,
                (None, None) => unreachable!("clap requires a path or a family"),
            };
            let how = match (probe, optimize) {
                (Some(p), _) => UnitaryCheck::Probe(parse_probe(&read(p)?)?),
                (None, Some(Mode::Single)) => UnitaryCheck::Optimize(ProbeMode::Single),
                (None, Some(Mode::Entangled)) => UnitaryCheck::Optimize(ProbeMode::Entangled),
                (None, None) => {
                    debug_assert!(*maxent);
                    UnitaryCheck::Probe(antidist::unitary::ProbeSpec::MaximallyEntangled)
                }
            };
            let (mut r, ok) = check_unitaries(&u, &how, &cfg)?;
            if let Some(f) = family {
                r.param("family", f.to_string());
            }
            emit_reports(&[r], common)?;
            Ok(ok)
        }
        Command::Repro {
            theorem,
            seed,
            d,
            p,
            trials,
        } => {
            let cfg = config(common, Some(*seed));
            let opts = ReproOptions {
                seed: *seed,
                d: *d,
                p: *p,
                trials: *trials,
                timing: !common.no_timestamp,
            };
            let reports = if theorem.eq_ignore_ascii_case("all") {
                repro_all(&opts, &cfg)?
            } else {
                vec![repro(theorem.parse::<TheoremId>()?, &opts, &cfg)?]
            };
            emit_reports(&reports, common)?;
            Ok(reports.iter().all(ReproReport::is_reproduced))
        }
        Command::SweepP {
            d,
            p_min,
            p_max,
            steps,
            csv_out,
        } => {
            let cfg = config(common, None);
            let s = sweep_p(*d, *p_min, *p_max, *steps, &cfg)?;
            let csv = s.to_csv();
            match csv_out {
                Some(path) => write(path, &csv)?,
                None => print!("{csv}"),
            }
            if common.json_out.is_some() {
                emit_json(serde_json::to_value(&s).expect("serializable"), common)?;
            }
            Ok(s.summary.internally_consistent)
        }
        Command::RandomHierarchy { trials, seed } => {
            let cfg = config(common, Some(*seed));
            let r = random_hierarchy(*trials, *seed, &cfg)?;
            emit_reports(std::slice::from_ref(&r), common)?;
            Ok(r.is_reproduced())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
