//! `selector-lab`: command line front end.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::Value;

use selector_lab::fixed_point::{default_tol, sperner_point};
use selector_lab::iteration::identity_report;
use selector_lab::modules::module_by_cube;
use selector_lab::scalar::parse_rational;
use selector_lab::serial::{iterate_csv, iterate_report, module_report, FixpointJson};
use selector_lab::simulate::empirical_vs_theory;
use selector_lab::verify::run_verify;
use selector_lab::zermelo::{zermelo_game, FirstMover, ZermeloConfig};
use selector_lab::{Classification, DistributionModel, Error, SimConfig, SpernerFamily};

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "selector-lab",
    version,
    about = "Modules, Sperner points and limit laws of selectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Module h, Sperner polynomial g, profiles and endpoint slopes.
    Module {
        #[command(flatten)]
        family: FamilyArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Classification and certified Sperner point.
    Fixpoint {
        #[command(flatten)]
        family: FamilyArg,
        #[command(flatten)]
        tol: TolArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Iterated module against its limit, with the L1 distance.
    Iterate {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long = "N", default_value_t = 6)]
        depth: usize,
        #[command(flatten)]
        tol: TolArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Monte Carlo law of the iterated selector against theory.
    Simulate {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long = "N", default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value = "uniform", value_parser = parse_dist)]
        dist: DistributionModel,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// The randomized Zermelo game.
    Zermelo {
        #[arg(long = "N", default_value_t = 2)]
        depth: usize,
        /// Probability that a leaf is 0.
        #[arg(long)]
        p: f64,
        #[arg(long = "first-mover", value_enum, default_value_t = Mover::Alpha)]
        first_mover: Mover,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Full invariant suite with a fixed internal seed.
    Verify {
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// `n=4;{1,2},{3,4}` or `{"n":4,"sets":[[1,2],[3,4]]}`.
    #[arg(long, value_parser = parse_family)]
    family: SpernerFamily,
}

#[derive(Args, Debug)]
struct TolArg {
    /// Width of the certified bracket, as a decimal or `num/den`.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<BigRational>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    replicates: u64,
}

#[derive(Args, Debug)]
struct OutArg {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    out: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mover {
    Alpha,
    Beta,
    Coin,
}

impl From<Mover> for FirstMover {
    fn from(m: Mover) -> Self {
        match m {
            Mover::Alpha => FirstMover::Alpha,
            Mover::Beta => FirstMover::Beta,
            Mover::Coin => FirstMover::Coin,
        }
    }
}

fn parse_family(s: &str) -> Result<SpernerFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_dist(s: &str) -> Result<DistributionModel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_tol(s: &str) -> Result<BigRational, String> {
    let tol = parse_rational(s).map_err(|e| e.to_string())?;
    if tol <= BigRational::from_integer(0.into()) {
        return Err("tolerance must be positive".into());
    }
    Ok(tol)
}

/// What a subcommand produced: a JSON report plus an optional table used
/// for `--out csv`.
struct Outcome {
    report: Value,
    table: Option<String>,
    ok: bool,
}

impl Outcome {
    fn new(report: Value) -> Self {
        Outcome {
            report,
            table: None,
            ok: true,
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run(command: Command) -> Result<(Outcome, Format), Error> {
    let outcome = match &command {
        Command::Module { family, .. } => Outcome::new(to_value(&module_report(&family.family))),
        Command::Fixpoint { family, tol, .. } => {
            let tol = tol.tol.clone().unwrap_or_else(default_tol);
            let report = sperner_point(&family.family, &tol)?;
            Outcome::new(to_value(&FixpointJson::from(&report)))
        }
        Command::Iterate {
            family, depth, tol, ..
        } => {
            let tol = tol.tol.clone().unwrap_or_else(default_tol);
            let f = &family.family;
            let report = if f.is_projection() {
                identity_report()
            } else {
                sperner_point(f, &tol)?
            };
            let h = module_by_cube(f).h;
            let rep = iterate_report(&h, &report, *depth, 100, 10_000)?;
            let mut value = to_value(&rep);
            if report.classification == Classification::Identity {
                value["omega"] = Value::Null;
            }
            Outcome {
                table: Some(iterate_csv(&rep.rows)),
                report: value,
                ok: true,
            }
        }
        Command::Simulate {
            family,
            depth,
            dist,
            run,
            ..
        } => {
            let config = SimConfig {
                seed: run.seed,
                replicates: run.replicates,
                depth: *depth,
                family: family.family.clone(),
                dist: dist.clone(),
                threads: None,
            };
            let rep = empirical_vs_theory(&config)?;
            Outcome {
                table: Some(output::cdf_csv(&rep.points)),
                report: to_value(&rep),
                ok: true,
            }
        }
        Command::Zermelo {
            depth,
            p,
            first_mover,
            run,
            ..
        } => {
            let rep = zermelo_game(&ZermeloConfig {
                depth: *depth,
                p: *p,
                seed: run.seed,
                replicates: run.replicates,
                first_mover: (*first_mover).into(),
                threads: None,
            })?;
            Outcome::new(to_value(&rep))
        }
        Command::Verify { .. } => {
            let rep = run_verify();
            Outcome {
                ok: rep.passed,
                report: to_value(&rep),
                table: None,
            }
        }
    };
    let format = match command {
        Command::Module { out, .. }
        | Command::Fixpoint { out, .. }
        | Command::Iterate { out, .. }
        | Command::Simulate { out, .. }
        | Command::Zermelo { out, .. }
        | Command::Verify { out } => out.out,
    };
    Ok((outcome, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((outcome, format)) => {
            print!(
                "{}",
                output::render(&outcome.report, outcome.table.as_deref(), format)
            );
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", output::error_json(&e));
            ExitCode::from(1)
        }
    }
}
