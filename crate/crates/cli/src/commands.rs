use std::collections::BTreeMap;
use std::time::Instant;

use dgtime_core::analysis::{
    aposteriori_study, convergence_study, interpolant_study, maxreg_probe, rhs_family, StudyReport,
    APOSTERIORI_COLUMNS, CONVERGENCE_COLUMNS, INTERPOLANT_COLUMNS,
};
use dgtime_core::norms::{continuous_norm, discrete_bd_seminorm, discrete_norm, discrete_norm_field, SpaceTimeNormSpec};
use dgtime_core::radau_tableau;
use dgtime_core::trajectory::{Derivative, Difference, FnField};
use dgtime_core::SpatialNorm;

use crate::config::{Command, ConfigError, RunConfig};
use crate::output::{fmt_f64, OutputDir, RunManifest};
use crate::CliError;

/// Threshold on a study's final observed order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderAssertion {
    pub target: f64,
    pub tol: f64,
    /// Defaults to the first column of the study.
    pub column: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssertionResult {
    pub column: String,
    pub observed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub assertion: Option<AssertionResult>,
}

impl RunOutcome {
    /// 0 on success, 2 if an order assertion failed.
    pub fn exit_code(&self) -> u8 {
        match &self.assertion {
            Some(a) if !a.passed => 2,
            _ => 0,
        }
    }
}

fn study_columns(command: Command) -> Option<&'static [&'static str]> {
    match command {
        Command::Converge => Some(&CONVERGENCE_COLUMNS),
        Command::Estimate => Some(&APOSTERIORI_COLUMNS),
        Command::InterpStudy => Some(&INTERPOLANT_COLUMNS),
        _ => None,
    }
}

/// Runs the configured command, writes its outputs and `manifest.json`.
pub fn run(cfg: &RunConfig, assertion: Option<&OrderAssertion>) -> Result<RunOutcome, CliError> {
    let command = cfg.require_command()?;
    cfg.validate()?;
    if let Some(a) = assertion {
        let columns = study_columns(command).ok_or(ConfigError::AssertionNotApplicable(command.name()))?;
        if let Some(c) = &a.column {
            if !columns.contains(&c.as_str()) {
                return Err(ConfigError::UnknownColumn { command: command.name(), column: c.clone() }.into());
            }
        }
    }
    let mut warnings = Vec::new();
    if cfg.exponent_sum() >= 1.0 {
        warnings.push(format!(
            "2/p + 1/r = {} >= 1: outside the hypothesis of the a priori estimate",
            cfg.exponent_sum()
        ));
    }
    let start = Instant::now();
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut summary = BTreeMap::new();
    let report = match command {
        Command::Tableau => {
            tableau(cfg, &mut out)?;
            None
        }
        Command::Solve => {
            solve(cfg, &mut out, &mut summary)?;
            None
        }
        Command::Converge => Some(convergence_study(&cfg.manufactured()?, cfg.q, &cfg.n_list, &cfg.study())?),
        Command::Estimate => Some(aposteriori_study(&cfg.manufactured()?, cfg.q, &cfg.n_list, &cfg.study())?),
        Command::Maxreg => {
            maxreg(cfg, &mut out, &mut summary)?;
            None
        }
        Command::InterpStudy => {
            let f = cfg.function;
            Some(interpolant_study(&|t| f.value(t), &|t| f.derivative(t), cfg.q, &cfg.n_list, cfg.p, cfg.horizon)?)
        }
    };
    let mut checked = None;
    if let Some(report) = &report {
        out.write_study(command.name(), report)?;
        record_orders(report, &mut summary);
        if let Some(reference) = report.metadata.reference_intervals {
            summary.insert("reference_intervals".into(), reference as f64);
        }
        if let Some(a) = assertion {
            let column = a.column.clone().unwrap_or_else(|| report.columns[0].clone());
            let observed = report.final_order(&column).unwrap_or(f64::NAN);
            let passed = (observed - a.target).abs() <= a.tol;
            checked = Some(AssertionResult { column, observed, passed });
        }
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.name().into(),
        config: cfg.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        artifacts: out.written().to_vec(),
        summary,
        warnings,
    };
    manifest.write(&out.root().join("manifest.json"))?;
    Ok(RunOutcome { manifest, assertion: checked })
}

fn record_orders(report: &StudyReport, summary: &mut BTreeMap<String, f64>) {
    for name in &report.columns {
        if let Some(order) = report.final_order(name) {
            summary.insert(format!("order_{name}"), order);
        }
    }
}

fn tableau(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let tab = radau_tableau(cfg.q)?;
    let q = tab.stages();
    let mut header = vec!["i".to_string(), "c".to_string()];
    header.extend((1..=q).map(|j| format!("a_{j}")));
    header.push("b".into());
    let rows: Vec<Vec<String>> = (0..q)
        .map(|i| {
            let mut row = vec![(i + 1).to_string(), fmt_f64(tab.nodes()[i])];
            row.extend((0..q).map(|j| fmt_f64(tab.a(i, j))));
            row.push(fmt_f64(tab.weights()[i]));
            row
        })
        .collect();
    out.write_csv("tableau.csv", &header, &rows)?;
    Ok(())
}

fn solve(cfg: &RunConfig, out: &mut OutputDir, summary: &mut BTreeMap<String, f64>) -> Result<(), CliError> {
    let problem = cfg.manufactured()?;
    problem.check()?;
    let grid = problem.grid;
    let sol = problem.solve(cfg.q, cfg.intervals, &cfg.newton)?;
    let partition = *sol.trajectory.partition();

    let mut rows = Vec::new();
    let u0 = problem.initial();
    for n in 0..=partition.intervals() {
        let values = if n == 0 { &u0[..] } else { sol.trajectory.end_value(n - 1) };
        let t = fmt_f64(partition.node(n));
        for (j, v) in values.iter().enumerate() {
            rows.push(vec![t.clone(), fmt_f64(grid.x(j)), fmt_f64(*v)]);
        }
    }
    out.write_csv("solution.csv", &["t", "x", "u"].map(String::from), &rows)?;

    let exact = FnField::new(partition, grid.points(), |t, buf: &mut [f64]| {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = problem.exact(grid.x(j), t);
        }
    });
    let exact_t = FnField::new(partition, grid.points(), |t, buf: &mut [f64]| {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = problem.exact_t(grid.x(j), t);
        }
    });
    let q = cfg.q;
    let radau = sol.trajectory.radau_nodes();
    let w2 = SpaceTimeNormSpec::new(cfg.p, SpatialNorm::W2r(cfg.r));
    let lr = SpaceTimeNormSpec::new(cfg.p, SpatialNorm::Lr(cfg.r));
    let g = Some(&grid);
    let dt = Derivative(&sol.reconstruction);
    let table = [
        ("U", "Lp(W2r)", continuous_norm(&sol.trajectory, &partition, q, &w2, g)?, Some(discrete_norm(&sol.trajectory, &w2, g)?)),
        ("Uhat", "Lp(W2r)", continuous_norm(&sol.reconstruction, &partition, q, &w2, g)?, Some(discrete_norm(&sol.reconstruction, &w2, g)?)),
        ("Uhat_t", "Lp(Lr)", continuous_norm(&dt, &partition, q, &lr, g)?, Some(discrete_bd_seminorm(&sol.reconstruction, &lr, g)?)),
        (
            "u-U",
            "Lp(W2r)",
            continuous_norm(&Difference(&exact, &sol.trajectory), &partition, q, &w2, g)?,
            Some(discrete_norm_field(&Difference(&exact, &sol.trajectory), &partition, radau, &w2, g)?),
        ),
        ("u_t-Uhat_t", "Lp(Lr)", continuous_norm(&Difference(&exact_t, &dt), &partition, q, &lr, g)?, None),
    ];
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|(field, norm, c, d)| vec![field.to_string(), norm.to_string(), fmt_f64(*c), d.map(fmt_f64).unwrap_or_default()])
        .collect();
    out.write_csv("norms.csv", &["field", "norm", "continuous", "discrete"].map(String::from), &rows)?;
    out.write_newton_log("newton.jsonl", &sol.diagnostics)?;

    summary.insert("error_U_W2r".into(), table[3].2);
    summary.insert("error_Uhat_t_Lr".into(), table[4].2);
    summary.insert("newton_iterations".into(), sol.diagnostics.iter().map(|d| d.iterations).sum::<usize>() as f64);
    Ok(())
}

fn maxreg(cfg: &RunConfig, out: &mut OutputDir, summary: &mut BTreeMap<String, f64>) -> Result<(), CliError> {
    let grid = cfg.grid()?;
    let (a, len) = (cfg.amplitude, cfg.length);
    let coeff = move |x: f64, t: f64| 1.0 + a * t.sin() * (1.0 + x / len);
    let family = rhs_family(cfg.seed, cfg.samples, cfg.modes, cfg.length, cfg.horizon);
    let report = maxreg_probe(&coeff, &family, &grid, cfg.horizon, cfg.q, cfg.p, cfg.r, &cfg.n_list)?;

    let mut rows = Vec::new();
    for row in &report.rows {
        for (s, ratio) in row.ratios.iter().enumerate() {
            rows.push(vec![row.intervals.to_string(), s.to_string(), ratio.map(fmt_f64).unwrap_or_default()]);
        }
    }
    out.write_csv("maxreg.csv", &["intervals", "sample", "ratio"].map(String::from), &rows)?;
    let rows: Vec<Vec<String>> = report.rows.iter().map(|r| vec![r.intervals.to_string(), fmt_f64(r.max)]).collect();
    out.write_csv("maxreg_max.csv", &["intervals", "max_ratio"].map(String::from), &rows)?;
    let plot: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec!["max_ratio".into(), fmt_f64((r.intervals as f64).log2()), fmt_f64(r.max.log2())])
        .collect();
    out.write_csv("maxreg_plot.csv", &["column", "log2_n", "log2_ratio"].map(String::from), &plot)?;

    summary.insert("variation".into(), report.variation());
    summary.insert("coefficient_min".into(), report.coefficient.min);
    summary.insert("coefficient_max".into(), report.coefficient.max);
    summary.insert("coefficient_lipschitz".into(), report.coefficient.lipschitz);
    Ok(())
}
