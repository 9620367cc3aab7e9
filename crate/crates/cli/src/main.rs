mod args;
mod commands;
mod config;
mod failure;
mod report;

use clap::error::ErrorKind;
use clap::Parser;
use iconv_core::Precision;

use args::{Cli, Command, Common};
use config::{default_tolerance, Defaults, RunConfig};
use failure::{Outcome, EXIT_OK, EXIT_USAGE};

fn defaults(command: &Command) -> Defaults {
    let base = Defaults {
        x_mode: "ws",
        w_mode: Some("ws"),
        size: "16",
        channels: 1,
        trials: 10,
        depth: 8,
        tolerance: default_tolerance,
    };
    match command {
        Command::Roundtrip(_) | Command::Convert(_) => base,
        Command::Table(_) => Defaults { trials: 25, ..base },
        // the input modes follow the kernel modes unless given
        Command::Spectrum(_) => Defaults {
            w_mode: None,
            ..base
        },
        Command::Stack(_) => Defaults {
            x_mode: "wa",
            w_mode: Some("wa"),
            channels: 2,
            tolerance: |_: Precision| 1e-6,
            ..base
        },
    }
}

fn run(cli: Cli) -> Outcome<i32> {
    let d = defaults(&cli.command);
    match &cli.command {
        Command::Roundtrip(a) => {
            let c = RunConfig::resolve("roundtrip", a, &d)?;
            commands::finish(&c, commands::roundtrip(&c)?)
        }
        Command::Table(a) => {
            let c = RunConfig::resolve("table", a, &d)?;
            commands::finish(&c, commands::table(&c)?)
        }
        Command::Spectrum(a) => {
            let a = Common {
                x_mode: a.x_mode.clone().or_else(|| a.w_mode.clone()),
                w_mode: a.w_mode.clone().or_else(|| a.x_mode.clone()),
                ..a.clone()
            };
            let c = RunConfig::resolve("spectrum", &a, &d)?;
            commands::finish(&c, commands::spectrum(&c)?)
        }
        Command::Stack(a) => {
            let c = RunConfig::resolve("stack", a, &d)?;
            commands::finish(&c, commands::stack(&c)?)
        }
        Command::Convert(a) => {
            let c = RunConfig::resolve("convert", a, &d)?;
            commands::finish(&c, commands::convert(&c, a)?)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    };
    std::process::exit(code);
}
