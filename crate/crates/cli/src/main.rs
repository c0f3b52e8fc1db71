//! Command-line front end: `steklov SUBCOMMAND --config PATH [--out DIR]`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 violated invariant (including failed verification checks).

mod config;
mod run;

use run::exit_code;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "usage: steklov {flow|evolve|map|verify} --config PATH [--out DIR]";

struct Cli {
    subcommand: String,
    config_path: PathBuf,
    out_dir: PathBuf,
}

fn parse_args(args: &[String]) -> Result<Cli, String> {
    let mut subcommand = None;
    let mut config_path = None;
    let mut out_dir = PathBuf::from(".");
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => {
                let v = it.next().ok_or("--config requires a path")?;
                config_path = Some(PathBuf::from(v));
            }
            "--out" => {
                let v = it.next().ok_or("--out requires a directory")?;
                out_dir = PathBuf::from(v);
            }
            flag if flag.starts_with('-') => return Err(format!("unknown flag `{flag}`")),
            name => {
                if subcommand.replace(name.to_string()).is_some() {
                    return Err(format!("unexpected extra argument `{name}`"));
                }
            }
        }
    }
    Ok(Cli {
        subcommand: subcommand.ok_or("missing subcommand")?,
        config_path: config_path.ok_or("missing --config PATH")?,
        out_dir,
    })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match parse_args(&args) {
        Ok(cli) => cli,
        Err(msg) => {
            eprintln!("{msg}\n{USAGE}");
            return ExitCode::from(1);
        }
    };
    let text = match std::fs::read_to_string(&cli.config_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("cannot read config {}: {e}", cli.config_path.display());
            return ExitCode::from(1);
        }
    };
    let cfg = match config::parse_config(&text) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    if cfg.subcommand.name() != cli.subcommand {
        eprintln!(
            "subcommand mismatch: command line says `{}`, config says `{}`",
            cli.subcommand,
            cfg.subcommand.name()
        );
        return ExitCode::from(1);
    }
    if let Err(e) = std::fs::create_dir_all(&cli.out_dir) {
        eprintln!("cannot create output directory: {e}");
        return ExitCode::from(2);
    }
    match run::run(&cfg, &cli.out_dir) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
