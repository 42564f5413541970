mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tregular::acceptance::Backend;
use tregular::tregular::CheckOptions;
use tregular::{Rational, Sampler};

use args::{BackendArg, Cli, Command, Common, Format};
use commands::{CauchyArgs, CheckArgs, CmdResult};

const USAGE: u8 = 2;
const COUNTEREXAMPLE: u8 = 1;

macro_rules! by_backend {
    ($common:expr, $f:ident($($arg:expr),*)) => {
        match $common.backend {
            BackendArg::Rational => commands::$f::<Rational>($($arg),*),
            BackendArg::Float64 => commands::$f::<f64>($($arg),*),
        }
    };
}

fn warn_tolerance(common: &Common) {
    if common.tol.is_some() && common.backend == BackendArg::Rational {
        eprintln!("note: --tol has no effect with the rational backend; verdicts are exact");
    }
}

fn run(command: &Command) -> (CmdResult, &Common) {
    match command {
        Command::Table {
            family,
            maxdeg,
            common,
        } => {
            let format = common.format.unwrap_or(Format::Csv);
            (by_backend!(common, table(*family, *maxdeg, format)), common)
        }
        Command::Check {
            fan,
            input,
            grid,
            count,
            no_symbolic,
            slice_preserving,
            common,
        } => {
            warn_tolerance(common);
            let sampler = match count {
                Some(count) => Sampler::Random {
                    seed: common.seed,
                    count: *count,
                },
                None => Sampler::RationalGrid {
                    density: grid.unwrap_or(8),
                },
            };
            let mut opts = CheckOptions {
                symbolic: !no_symbolic,
                ..CheckOptions::default()
            };
            if let Some(tol) = common.tol {
                opts.tol = tol;
            }
            let args = CheckArgs {
                fan,
                input,
                sampler,
                opts,
                slice_preserving: *slice_preserving,
            };
            let format = common.format.unwrap_or(Format::Json);
            (by_backend!(common, check(&args, format)), common)
        }
        Command::Expand {
            input,
            center,
            maxdeg,
            common,
        } => {
            let format = common.format.unwrap_or(Format::Json);
            (
                by_backend!(common, expand(input, center, *maxdeg, format)),
                common,
            )
        }
        Command::Represent {
            input,
            count,
            common,
        } => {
            let format = common.format.unwrap_or(Format::Json);
            (
                by_backend!(common, represent(input, *count, common.seed, format)),
                common,
            )
        }
        Command::Stems { input, j, common } => {
            let format = common.format.unwrap_or(Format::Json);
            (by_backend!(common, stems(input, j, format)), common)
        }
        Command::CauchyDemo {
            input,
            count,
            orders,
            radius,
            spread,
            common,
        } => {
            if common.backend == BackendArg::Rational {
                eprintln!("note: cauchy-demo always runs in float64");
            }
            let args = CauchyArgs {
                input: input.as_deref(),
                count: *count,
                orders,
                radius: *radius,
                spread: *spread,
                seed: common.seed,
                tol: common.tol.unwrap_or(1e-7),
            };
            let format = common.format.unwrap_or(Format::Csv);
            (commands::cauchy_demo(&args, format), common)
        }
        Command::BasisVerify {
            input,
            fan,
            hat,
            common,
        } => {
            let format = common.format.unwrap_or(Format::Json);
            (
                by_backend!(
                    common,
                    basis_verify(input.as_deref(), fan.as_deref(), *hat, format)
                ),
                common,
            )
        }
        Command::Cone {
            algebra,
            element,
            input,
            common,
        } => {
            let format = common.format.unwrap_or(Format::Json);
            (
                by_backend!(
                    common,
                    cone(algebra, element.as_deref(), input.as_deref(), format)
                ),
                common,
            )
        }
        Command::Selftest {
            only,
            input,
            common,
        } => {
            let backend = match common.backend {
                BackendArg::Rational => Backend::Rational,
                BackendArg::Float64 => Backend::Float64,
            };
            let seed = (common.seed != 0).then_some(common.seed);
            let format = common.format.unwrap_or(Format::Text);
            (
                commands::selftest(backend, only.as_deref(), input.as_deref(), seed, format),
                common,
            )
        }
    }
}

fn emit(body: &str, common: &Common) -> Result<(), String> {
    match &common.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let (result, common) = run(&cli.command);
    match result.and_then(|report| emit(&report.body, common).map(|()| report.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(COUNTEREXAMPLE),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(USAGE)
        }
    }
}
