use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dgtime::config::OUTPUT_DIR_ENV;
use dgtime::{load_config, run, CliError, OrderAssertion};

/// dG(q-1) time stepping for quasilinear parabolic problems: tableaux,
/// solves and convergence studies.
///
/// Settings come from defaults, then `--config`, then the DGTIME_OUTPUT_DIR
/// environment variable, then `--set` and the named flags.
#[derive(Parser, Debug)]
#[command(version)]
struct Cli {
    /// tableau, solve, converge, estimate, maxreg or interp-study
    command: Option<String>,
    /// Flat `key = value` config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override any config key
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Interior grid points
    #[arg(long)]
    m: Option<usize>,
    /// Interval count for `solve`
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated interval counts for studies
    #[arg(long = "n-list")]
    n_list: Option<String>,
    #[arg(long)]
    flux: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "output-dir")]
    output_dir: Option<PathBuf>,
    /// Run even if 2/p + 1/r >= 1
    #[arg(long)]
    allow_exponents: bool,
    /// Exit with status 2 unless the final observed order is within --tol of this
    #[arg(long)]
    assert_order: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    tol: f64,
    /// Study column checked by --assert-order (default: the first)
    #[arg(long)]
    assert_column: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got {s:?}"))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        let named = [
            ("command", self.command.clone()),
            ("q", self.q.map(|v| v.to_string())),
            ("p", self.p.map(|v| v.to_string())),
            ("r", self.r.map(|v| v.to_string())),
            ("m", self.m.map(|v| v.to_string())),
            ("n", self.n.map(|v| v.to_string())),
            ("n_list", self.n_list.clone()),
            ("flux", self.flux.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("output_dir", self.output_dir.as_ref().map(|p| p.display().to_string())),
        ];
        out.extend(named.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
        Ok(out)
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let overrides = match cli.overrides() {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("dgtime: {msg}");
            return Ok(1);
        }
    };
    let env_dir = std::env::var(OUTPUT_DIR_ENV).ok();
    let mut cfg = load_config(cli.config.as_deref(), env_dir.as_deref(), &overrides)?;
    cfg.allow_exponents = cli.allow_exponents;
    let assertion = cli.assert_order.map(|target| OrderAssertion { target, tol: cli.tol, column: cli.assert_column.clone() });
    let outcome = run(&cfg, assertion.as_ref())?;
    for w in &outcome.manifest.warnings {
        eprintln!("dgtime: warning: {w}");
    }
    for path in &outcome.manifest.artifacts {
        println!("{}", path.display());
    }
    if let Some(a) = &outcome.assertion {
        let target = assertion.as_ref().map_or(f64::NAN, |x| x.target);
        println!(
            "{} order {} = {:.4} (target {target} +- {})",
            if a.passed { "ok:" } else { "FAILED:" },
            a.column,
            a.observed,
            cli.tol
        );
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("dgtime: {e}");
            ExitCode::from(1)
        }
    }
}
