//! Command-line front end for the qutrit-ensemble open-system simulator.
//!
//! Four subcommands cover the standard experiments:
//!
//! * `run` — integrate one scenario and emit its time series as CSV;
//! * `scan-ratio` — sweep the coupling ratio Ω/(g√n) and report revival
//!   heights alongside the closed-form estimates;
//! * `compare` — exact evolution against the semiclassical rate model;
//! * `inspect-dark` — diagnostic dump of the master dark state.
//!
//! Scenarios are flat `key=value` files (see `config`); any key can be
//! overridden on the command line, so one base file drives many runs.
//! Output is deterministic byte-for-byte for a given configuration.

mod compare;
mod config;
mod inspect;
mod output;
mod revival;
mod runner;
mod scan;
mod states;

use config::{parse_file, parse_override, resolve, Assignment};

/// An error tagged with the process exit code: 1 for configuration or usage
/// problems, 2 for numerical-integrity aborts.
#[derive(Debug, Clone)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: String) -> Self {
        Self { code: 1, message }
    }

    pub fn numerical(message: String) -> Self {
        Self { code: 2, message }
    }
}

const USAGE: &str = "\
usage: lambdasim <run|scan-ratio|compare|inspect-dark> --config PATH [options]

options:
  --config PATH          scenario file (flat key=value lines, '#' comments)
  --out PATH             write output here instead of the scenario's
                         output_path (stdout if neither is set)
  --threads N            worker threads for scan-ratio (default 1)
  --override key=value   override one scenario key; repeatable, applied in
                         order after the file

exit codes: 0 success, 1 configuration error, 2 numerical-integrity abort
";

#[derive(Debug)]
struct Cli {
    command: String,
    config_path: Option<String>,
    out: Option<String>,
    threads: usize,
    overrides: Vec<Assignment>,
}

fn parse_args(args: &[String]) -> Result<Option<Cli>, CliError> {
    if args.iter().any(|a| a == "--help" || a == "-h") {
        return Ok(None);
    }
    let mut it = args.iter().peekable();
    let command = it
        .next()
        .ok_or_else(|| CliError::config("missing subcommand".into()))?
        .clone();
    if !matches!(command.as_str(), "run" | "scan-ratio" | "compare" | "inspect-dark") {
        return Err(CliError::config(format!("unknown subcommand `{command}`")));
    }

    let mut cli = Cli {
        command,
        config_path: None,
        out: None,
        threads: 1,
        overrides: Vec::new(),
    };
    while let Some(arg) = it.next() {
        let (flag, inline) = match arg.split_once('=') {
            Some((f, v)) => (f, Some(v.to_string())),
            None => (arg.as_str(), None),
        };
        let mut value = || -> Result<String, CliError> {
            match &inline {
                Some(v) => Ok(v.clone()),
                None => it
                    .next()
                    .cloned()
                    .ok_or_else(|| CliError::config(format!("{flag} expects a value"))),
            }
        };
        match flag {
            "--config" => cli.config_path = Some(value()?),
            "--out" => cli.out = Some(value()?),
            "--threads" => {
                let v = value()?;
                cli.threads = v.parse::<usize>().ok().filter(|&t| t >= 1).ok_or_else(|| {
                    CliError::config(format!("--threads expects a positive integer, got `{v}`"))
                })?;
            }
            "--override" => cli.overrides.push(parse_override(&value()?)?),
            other => {
                return Err(CliError::config(format!("unknown flag `{other}`")));
            }
        }
    }
    Ok(Some(cli))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config_path
        .as_ref()
        .ok_or_else(|| CliError::config("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read `{path}`: {e}")))?;
    let mut assignments = parse_file(&text, path)?;
    assignments.extend(cli.overrides.iter().cloned());
    let mut cfg = resolve(&assignments)?;
    if cli.out.is_some() {
        cfg.output_path = cli.out.clone();
    }
    match cli.command.as_str() {
        "run" => runner::cmd_run(&cfg),
        "scan-ratio" => scan::cmd_scan(&cfg, cli.threads),
        "compare" => compare::cmd_compare(&cfg),
        "inspect-dark" => inspect::cmd_inspect(&cfg),
        _ => unreachable!("subcommand validated during parsing"),
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match parse_args(&args) {
        Ok(None) => {
            print!("{USAGE}");
            0
        }
        Ok(Some(cli)) => match execute(&cli) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {}", e.message);
                e.code
            }
        },
        Err(e) => {
            eprintln!("error: {}", e.message);
            eprint!("{USAGE}");
            e.code
        }
    };
    std::process::exit(code);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_flags_in_both_spellings() {
        let cli = parse_args(&args(&[
            "run",
            "--config",
            "a.conf",
            "--out=b.csv",
            "--threads=4",
            "--override",
            "kappa=0.2",
            "--override=omega=0.3",
        ]))
        .unwrap()
        .unwrap();
        assert_eq!(cli.command, "run");
        assert_eq!(cli.config_path.as_deref(), Some("a.conf"));
        assert_eq!(cli.out.as_deref(), Some("b.csv"));
        assert_eq!(cli.threads, 4);
        assert_eq!(cli.overrides.len(), 2);
        assert_eq!(cli.overrides[1].key, "omega");
    }

    #[test]
    fn rejects_unknown_subcommands_flags_and_bad_threads() {
        assert_eq!(parse_args(&args(&["walk"])).unwrap_err().code, 1);
        assert_eq!(parse_args(&args(&["run", "--wat"])).unwrap_err().code, 1);
        assert_eq!(
            parse_args(&args(&["run", "--threads", "0"])).unwrap_err().code,
            1
        );
        assert!(parse_args(&args(&[])).is_err());
    }

    #[test]
    fn help_short_circuits() {
        assert!(parse_args(&args(&["--help"])).unwrap().is_none());
        assert!(parse_args(&args(&["run", "-h"])).unwrap().is_none());
    }
}
