//! Command-line front end: argument parsing, run configuration and the five
//! commands. The binary only parses arguments and forwards here.

mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::attack::{analyze, detection_residuals, pe_numeric, AttackSpec, Case, HelstromStrategy};
use crate::error::{QssError, Result};
use crate::exploit::{full_attack_strategy, intercept_resend_strategy};
use crate::hbb::{run_session, AttackStrategy, SessionConfig};
use crate::optimizer::{maximize, objective, random_search, Eq6FamilyPoint, OptimizerConfig, C_MAX};
use crate::output::{fmt_num, to_json};
use crate::rng::seeded;

pub use verify::{cmd_verify, Fault, VerifyCheck, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackerKind {
    None,
    HbbCircuit,
    InterceptResend,
    /// Optimal measurement for the attack read from `--spec`.
    Spec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "hbb-qss", version, about = "Participant attacks on GHZ-based quantum secret sharing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Protocol rounds to simulate.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub rounds: usize,
    /// Probability that a kept round is used for checking.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub check_fraction: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = AttackerKind::None)]
    pub attacker: AttackerKind,
    /// Attack spec JSON file.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
}

#[derive(Debug, Clone, Subcommand)]
pub enum CommandArgs {
    /// Run the built-in consistency checks.
    Verify {
        /// Deliberately break one component to show that the checks notice.
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
    /// Simulate a protocol session and write its transcript.
    Simulate,
    /// Analyze the attack given by `--spec`.
    Analyze,
    /// Tabulate the undetectable family over a grid of `c = |a_00|`.
    Sweep {
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Maximize the attacker's information.
    Optimize {
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Verify { fault: Option<Fault> },
    Simulate,
    Analyze,
    Sweep { points: usize },
    Optimize { restarts: usize },
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub rounds: usize,
    pub check_fraction: f64,
    pub seed: u64,
    pub attacker: AttackerKind,
    pub spec_path: Option<PathBuf>,
    pub out_format: OutFormat,
    pub out_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let command = match cli.command {
            CommandArgs::Verify { inject_fault } => Command::Verify { fault: inject_fault },
            CommandArgs::Simulate => Command::Simulate,
            CommandArgs::Analyze => Command::Analyze,
            CommandArgs::Sweep { points } => Command::Sweep { points },
            CommandArgs::Optimize { restarts } => Command::Optimize { restarts },
        };
        let c = cli.common;
        let cfg = Self {
            command,
            rounds: c.rounds,
            check_fraction: c.check_fraction,
            seed: c.seed,
            attacker: c.attacker,
            spec_path: c.spec,
            out_format: c.format,
            out_path: c.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let uses_spec_attacker = self.attacker == AttackerKind::Spec;
        if uses_spec_attacker != self.spec_path.is_some() && self.command != Command::Analyze {
            return Err(QssError::InvalidArgument(
                "--spec is required with --attacker spec and not accepted otherwise".into(),
            ));
        }
        match &self.command {
            Command::Analyze if self.spec_path.is_none() => Err(QssError::InvalidArgument(
                "analyze needs --spec PATH".into(),
            )),
            Command::Analyze | Command::Optimize { .. } | Command::Verify { .. }
                if self.out_format == OutFormat::Csv =>
            {
                Err(QssError::InvalidArgument(
                    "this command writes JSON only; use --format json".into(),
                ))
            }
            Command::Simulate if self.rounds == 0 => {
                Err(QssError::InvalidArgument("--rounds must be positive".into()))
            }
            Command::Simulate if !(0.0..=1.0).contains(&self.check_fraction) => {
                Err(QssError::InvalidArgument(format!(
                    "--check-fraction must lie in [0, 1], got {}",
                    self.check_fraction
                )))
            }
            Command::Sweep { points } if *points < 2 => {
                Err(QssError::InvalidArgument("--points must be at least 2".into()))
            }
            Command::Optimize { restarts: 0 } => {
                Err(QssError::InvalidArgument("--restarts must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn session_config(&self) -> SessionConfig {
        SessionConfig {
            rounds: self.rounds,
            check_fraction: self.check_fraction,
            seed: self.seed,
        }
    }
}

/// What a command produced: the file contents, a one-line summary and
/// whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    pub summary: String,
    pub success: bool,
}

pub fn load_spec(path: &Path) -> Result<AttackSpec> {
    let text = fs::read_to_string(path).map_err(|e| {
        QssError::InvalidSpec(format!("cannot read {}: {e}", path.display()))
    })?;
    AttackSpec::from_json(&text)
        .map_err(|e| QssError::InvalidSpec(format!("{}: {e}", path.display())))
}

pub fn run(cfg: &RunConfig) -> Result<CommandOutput> {
    match &cfg.command {
        Command::Verify { fault } => {
            let report = cmd_verify(*fault)?;
            Ok(CommandOutput {
                body: to_json(&report)?,
                summary: report.summary(),
                success: report.passed,
            })
        }
        Command::Simulate => cmd_simulate(cfg),
        Command::Analyze => cmd_analyze(cfg),
        Command::Sweep { points } => cmd_sweep(cfg, *points),
        Command::Optimize { restarts } => cmd_optimize(cfg, *restarts),
    }
}

/// Runs the command and writes its body to `--out` when given.
pub fn execute(cfg: &RunConfig) -> Result<CommandOutput> {
    let output = run(cfg)?;
    if let Some(path) = &cfg.out_path {
        fs::write(path, &output.body)?;
    }
    Ok(output)
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<CommandOutput> {
    let strategy: Option<Box<dyn AttackStrategy>> = match cfg.attacker {
        AttackerKind::None => None,
        AttackerKind::HbbCircuit => Some(Box::new(full_attack_strategy())),
        AttackerKind::InterceptResend => Some(Box::new(intercept_resend_strategy())),
        AttackerKind::Spec => {
            let path = cfg.spec_path.as_deref().expect("validated");
            Some(Box::new(HelstromStrategy::new(&load_spec(path)?)?))
        }
    };
    let transcript = match strategy {
        Some(mut s) => run_session(&cfg.session_config(), Some(s.as_mut()))?,
        None => run_session(&cfg.session_config(), None)?,
    };
    let body = match cfg.out_format {
        OutFormat::Json => transcript.to_json()?,
        OutFormat::Csv => transcript.to_csv_string()?,
    };
    Ok(CommandOutput {
        body,
        summary: transcript.summary(),
        success: true,
    })
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<CommandOutput> {
    let path = cfg.spec_path.as_deref().expect("validated");
    let report = analyze(&load_spec(path)?)?;
    let summary = format!(
        "escape_ok={} nas_ok={} realizable={} info={:.4}",
        report.escape_ok, report.nas_ok, report.realizable, report.info
    );
    Ok(CommandOutput {
        body: report.to_json()?,
        summary,
        success: true,
    })
}

/// One grid point of the undetectable family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub s: f64,
    pub pe_closed: f64,
    /// The per-case Helstrom error farthest from the closed form.
    pub pe_numeric: f64,
    pub info: f64,
    pub max_residual: f64,
}

pub const SWEEP_HEADER: [&str; 6] = ["c", "s", "pe_closed", "pe_numeric", "info", "max_residual"];

/// Evenly spaced `c` values on `[0, 1/√2]`, with `½` added when missing.
pub fn sweep_grid(points: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..points)
        .map(|k| C_MAX * k as f64 / (points - 1) as f64)
        .collect();
    if !grid.iter().any(|&c| (c - 0.5).abs() < 1e-12) {
        grid.push(0.5);
        grid.sort_by(|a, b| a.total_cmp(b));
    }
    grid
}

pub fn sweep_rows(points: usize) -> Result<Vec<SweepRow>> {
    sweep_grid(points)
        .into_iter()
        .map(|c| {
            let point = Eq6FamilyPoint::plain(c)?;
            let spec = point.to_spec()?;
            let pe_closed = crate::attack::pe_closed_form(&spec)?;
            let mut farthest = pe_closed;
            for case in Case::ALL {
                let p = pe_numeric(&spec, case)?;
                if (p - pe_closed).abs() >= (farthest - pe_closed).abs() {
                    farthest = p;
                }
            }
            let residuals = detection_residuals(&spec);
            Ok(SweepRow {
                c: point.c,
                s: point.s,
                pe_closed,
                pe_numeric: farthest,
                info: objective(&point)?,
                max_residual: residuals.max_per_case().max(residuals.max_aggregate()),
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([r.c, r.s, r.pe_closed, r.pe_numeric, r.info, r.max_residual].map(fmt_num))?;
    }
    let bytes = w.into_inner().map_err(|e| QssError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn cmd_sweep(cfg: &RunConfig, points: usize) -> Result<CommandOutput> {
    let rows = sweep_rows(points)?;
    let best = rows
        .iter()
        .max_by(|a, b| a.info.total_cmp(&b.info))
        .expect("at least two rows");
    let summary = format!("rows={} best_c={:.6} best_info={:.6}", rows.len(), best.c, best.info);
    let body = match cfg.out_format {
        OutFormat::Json => to_json(&rows)?,
        OutFormat::Csv => sweep_csv(&rows)?,
    };
    Ok(CommandOutput {
        body,
        summary,
        success: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeOutput {
    #[serde(flatten)]
    pub result: crate::optimizer::OptimizationResult,
    /// Best information found by the projected random search over general
    /// undetectable attacks.
    pub random_search_best_info: f64,
    pub random_search_samples: usize,
}

pub const RANDOM_SEARCH_SAMPLES: usize = 200;

pub fn cmd_optimize(cfg: &RunConfig, restarts: usize) -> Result<CommandOutput> {
    let mut rng = seeded(cfg.seed);
    let result = maximize(
        &OptimizerConfig {
            restarts,
            ..OptimizerConfig::default()
        },
        &mut rng,
    )?;
    let search = random_search(RANDOM_SEARCH_SAMPLES, &mut rng)?;
    let summary = format!(
        "best_info={:.9} best_c={:.9} converged={} random_search_best={:.9}",
        result.best_info, result.best_point.c, result.converged, search.best_info
    );
    let out = OptimizeOutput {
        result,
        random_search_best_info: search.best_info,
        random_search_samples: search.samples,
    };
    Ok(CommandOutput {
        body: to_json(&out)?,
        summary,
        success: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        let cli = Cli::try_parse_from(std::iter::once("hbb-qss").chain(args.iter().copied()))
            .map_err(|e| QssError::InvalidArgument(e.to_string()))?;
        RunConfig::from_cli(cli)
    }

    #[test]
    fn defaults() {
        let cfg = parse(&["simulate"]).unwrap();
        assert_eq!(cfg.rounds, 10_000);
        assert_eq!(cfg.check_fraction, 0.5);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.attacker, AttackerKind::None);
        assert_eq!(cfg.out_format, OutFormat::Json);
    }

    #[test]
    fn flags_before_or_after_the_subcommand() {
        let a = parse(&["--rounds", "50", "simulate", "--attacker", "hbb-circuit"]).unwrap();
        assert_eq!(a.rounds, 50);
        assert_eq!(a.attacker, AttackerKind::HbbCircuit);
    }

    #[test]
    fn spec_flag_rules() {
        assert!(parse(&["simulate", "--attacker", "spec"]).is_err());
        assert!(parse(&["simulate", "--spec", "x.json"]).is_err());
        assert!(parse(&["analyze"]).is_err());
        assert!(parse(&["analyze", "--spec", "x.json"]).is_ok());
        assert!(parse(&["analyze", "--spec", "x.json", "--format", "csv"]).is_err());
        assert!(parse(&["simulate", "--check-fraction", "1.5"]).is_err());
        assert!(parse(&["sweep", "--points", "1"]).is_err());
    }

    #[test]
    fn grid_contains_the_optimum_and_endpoints() {
        let g = sweep_grid(10);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), C_MAX);
        assert!(g.contains(&0.5));
        assert_eq!(sweep_grid(3).len(), 4);
    }

    #[test]
    fn sweep_rows_agree() {
        let rows = sweep_rows(11).unwrap();
        for r in &rows {
            assert!((r.pe_closed - r.pe_numeric).abs() <= 1e-9, "{r:?}");
        }
        let half = rows.iter().find(|r| r.c == 0.5).unwrap();
        assert!((half.info - 1.0).abs() < 1e-12);
        assert!(rows.last().unwrap().info.abs() < 1e-12);
        let csv = sweep_csv(&rows).unwrap();
        assert!(csv.starts_with("c,s,pe_closed,pe_numeric,info,max_residual\n"));
    }
}
