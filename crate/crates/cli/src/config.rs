//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Unknown and repeated keys
//! are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use dgtime_core::analysis::{ManufacturedProblem, Reference, SourceMode, SpaceProfile, StudyConfig, TimeProfile};
use dgtime_core::stepper::{Damping, NewtonConfig};
use dgtime_core::{FluxFunction, Grid1D};
use thiserror::Error;

/// Environment variable that overrides `output_dir` from a config file.
pub const OUTPUT_DIR_ENV: &str = "DGTIME_OUTPUT_DIR";

pub const KEYS: [&str; 25] = [
    "command",
    "problem",
    "flux",
    "flux_param",
    "m",
    "length",
    "horizon",
    "q",
    "n",
    "n_list",
    "p",
    "r",
    "newton_tol",
    "newton_max_iter",
    "damping",
    "source",
    "reference",
    "reference_factor",
    "sup_samples",
    "seed",
    "samples",
    "modes",
    "amplitude",
    "function",
    "output_dir",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("key {0:?} given twice")]
    DuplicateKey(String),
    #[error("invalid value {value:?} for {key}: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("no command given (expected one of {})", Command::NAMES.join(", "))]
    MissingCommand,
    #[error(
        "exponents p = {p}, r = {r} violate 2/p + d/r < 1 with d = 1 (2/p + 1/r = {sum}); pass --allow-exponents to run anyway"
    )]
    Exponents { p: f64, r: f64, sum: f64 },
    #[error("--assert-order does not apply to `{0}`")]
    AssertionNotApplicable(&'static str),
    #[error("unknown column {column:?} for `{command}`")]
    UnknownColumn { command: &'static str, column: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Tableau,
    Solve,
    Converge,
    Estimate,
    Maxreg,
    InterpStudy,
}

impl Command {
    pub const NAMES: [&'static str; 6] = ["tableau", "solve", "converge", "estimate", "maxreg", "interp-study"];

    pub fn name(self) -> &'static str {
        match self {
            Self::Tableau => "tableau",
            Self::Solve => "solve",
            Self::Converge => "converge",
            Self::Estimate => "estimate",
            Self::Maxreg => "maxreg",
            Self::InterpStudy => "interp-study",
        }
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "tableau" => Self::Tableau,
            "solve" => Self::Solve,
            "converge" => Self::Converge,
            "estimate" => Self::Estimate,
            "maxreg" => Self::Maxreg,
            "interp-study" => Self::InterpStudy,
            _ => return Err(invalid("command", s, format!("expected one of {}", Self::NAMES.join(", ")))),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Manufactured solution selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// `e^{-t} sin(pi x / X)`
    DecayingSine,
    /// `(1 + t)^{-1} x (X - x) sin(pi x / X)`
    RationalProduct,
}

impl Problem {
    fn name(self) -> &'static str {
        match self {
            Self::DecayingSine => "decaying-sine",
            Self::RationalProduct => "rational-product",
        }
    }
}

/// Scalar test function for `interp-study`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Sin,
    Cos,
    Exp,
}

impl TestFunction {
    fn name(self) -> &'static str {
        match self {
            Self::Sin => "sin",
            Self::Cos => "cos",
            Self::Exp => "exp",
        }
    }

    pub fn value(self, t: f64) -> f64 {
        match self {
            Self::Sin => t.sin(),
            Self::Cos => t.cos(),
            Self::Exp => t.exp(),
        }
    }

    pub fn derivative(self, t: f64) -> f64 {
        match self {
            Self::Sin => t.cos(),
            Self::Cos => -t.sin(),
            Self::Exp => t.exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub problem: Problem,
    pub flux: String,
    pub flux_param: f64,
    pub points: usize,
    pub length: f64,
    pub horizon: f64,
    pub q: usize,
    /// Interval count for `solve`.
    pub intervals: usize,
    pub n_list: Vec<usize>,
    pub p: f64,
    pub r: f64,
    pub newton: NewtonConfig,
    pub source: SourceMode,
    /// Measure against the manufactured solution instead of a temporal reference.
    pub exact_reference: bool,
    /// The temporal reference uses `reference_factor * max(n_list)` intervals.
    pub reference_factor: usize,
    pub sup_samples: usize,
    pub seed: u64,
    pub samples: usize,
    pub modes: usize,
    /// `a` in the maxreg coefficient `1 + a sin(t) (1 + x / X)`.
    pub amplitude: f64,
    pub function: TestFunction,
    pub output_dir: PathBuf,
    /// Run even if `2/p + 1/r >= 1`.
    pub allow_exponents: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            problem: Problem::DecayingSine,
            flux: "bounded-slope".into(),
            flux_param: 1.0,
            points: 128,
            length: 1.0,
            horizon: 1.0,
            q: 2,
            intervals: 32,
            n_list: vec![8, 16, 32, 64, 128],
            p: 8.0,
            r: 4.0,
            newton: NewtonConfig { tol: 1e-13, ..NewtonConfig::default() },
            source: SourceMode::Discrete,
            exact_reference: false,
            reference_factor: 16,
            sup_samples: 8,
            seed: 2024,
            samples: 8,
            modes: 5,
            amplitude: 0.4,
            function: TestFunction::Sin,
            output_dir: PathBuf::from("dgtime-out"),
            allow_exponents: false,
        }
    }
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue { key: key.into(), value: value.into(), reason: reason.into() }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| invalid(key, value, e.to_string()))
}

fn positive_float(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = number(key, value)?;
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid(key, value, "must be finite and positive"));
    }
    Ok(v)
}

fn positive_int(key: &str, value: &str) -> Result<usize, ConfigError> {
    let v: usize = number(key, value)?;
    if v == 0 {
        return Err(invalid(key, value, "must be at least 1"));
    }
    Ok(v)
}

/// Splits a config text into `(key, value)` pairs.
pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.into() });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.into() });
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Parses a config file's contents on top of the defaults.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_all(&parse_entries(text)?)?;
        Ok(cfg)
    }

    /// Applies entries in order; a key may appear only once per call.
    pub fn apply_all(&mut self, entries: &[(String, String)]) -> Result<(), ConfigError> {
        let mut seen = BTreeMap::new();
        for (k, v) in entries {
            if seen.insert(k.as_str(), ()).is_some() {
                return Err(ConfigError::DuplicateKey(k.clone()));
            }
            self.apply(k, v)?;
        }
        Ok(())
    }

    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "command" => self.command = Some(value.parse()?),
            "problem" => {
                self.problem = match value {
                    "decaying-sine" => Problem::DecayingSine,
                    "rational-product" => Problem::RationalProduct,
                    _ => return Err(invalid(key, value, "expected decaying-sine or rational-product")),
                }
            }
            "flux" => {
                if !FluxFunction::NAMES.contains(&value) {
                    return Err(invalid(key, value, format!("expected one of {}", FluxFunction::NAMES.join(", "))));
                }
                self.flux = value.into();
            }
            "flux_param" => {
                let v: f64 = number(key, value)?;
                if !v.is_finite() {
                    return Err(invalid(key, value, "must be finite"));
                }
                self.flux_param = v;
            }
            "m" => self.points = positive_int(key, value)?,
            "length" => self.length = positive_float(key, value)?,
            "horizon" => self.horizon = positive_float(key, value)?,
            "q" => self.q = positive_int(key, value)?,
            "n" => self.intervals = positive_int(key, value)?,
            "n_list" => {
                let list = value
                    .split(',')
                    .map(|s| positive_int(key, s.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                if list.len() < 2 || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid(key, value, "need at least two strictly increasing entries"));
                }
                self.n_list = list;
            }
            "p" => self.p = number(key, value)?,
            "r" => self.r = number(key, value)?,
            "newton_tol" => self.newton.tol = positive_float(key, value)?,
            "newton_max_iter" => self.newton.max_iter = positive_int(key, value)?,
            "damping" => {
                self.newton.damping = match value {
                    "line-halving" => Damping::LineHalving,
                    "none" => Damping::None,
                    _ => return Err(invalid(key, value, "expected line-halving or none")),
                }
            }
            "source" => {
                self.source = match value {
                    "discrete" => SourceMode::Discrete,
                    "continuous" => SourceMode::Continuous,
                    _ => return Err(invalid(key, value, "expected discrete or continuous")),
                }
            }
            "reference" => {
                self.exact_reference = match value {
                    "exact" => true,
                    "temporal" => false,
                    _ => return Err(invalid(key, value, "expected temporal or exact")),
                }
            }
            "reference_factor" => {
                let f = positive_int(key, value)?;
                if f < 2 {
                    return Err(invalid(key, value, "must be at least 2"));
                }
                self.reference_factor = f;
            }
            "sup_samples" => self.sup_samples = positive_int(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "samples" => self.samples = positive_int(key, value)?,
            "modes" => self.modes = positive_int(key, value)?,
            "amplitude" => {
                let v: f64 = number(key, value)?;
                if !v.is_finite() {
                    return Err(invalid(key, value, "must be finite"));
                }
                self.amplitude = v;
            }
            "function" => {
                self.function = match value {
                    "sin" => TestFunction::Sin,
                    "cos" => TestFunction::Cos,
                    "exp" => TestFunction::Exp,
                    _ => return Err(invalid(key, value, "expected sin, cos or exp")),
                }
            }
            "output_dir" => {
                if value.is_empty() {
                    return Err(invalid(key, value, "must not be empty"));
                }
                self.output_dir = PathBuf::from(value);
            }
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Checks cross-key conditions, including the exponent hypothesis.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, v) in [("p", self.p), ("r", self.r)] {
            if !(v.is_finite() && v > 1.0) {
                return Err(invalid(key, &v.to_string(), "must be finite and > 1"));
            }
        }
        if self.points < 2 {
            return Err(invalid("m", &self.points.to_string(), "need at least 2 interior points"));
        }
        if self.q > 12 {
            return Err(invalid("q", &self.q.to_string(), "supported stage counts are 1..=12"));
        }
        let sum = self.exponent_sum();
        if sum >= 1.0 && !self.allow_exponents {
            return Err(ConfigError::Exponents { p: self.p, r: self.r, sum });
        }
        Ok(())
    }

    pub fn exponent_sum(&self) -> f64 {
        2.0 / self.p + 1.0 / self.r
    }

    pub fn require_command(&self) -> Result<Command, ConfigError> {
        self.command.ok_or(ConfigError::MissingCommand)
    }

    pub fn flux_function(&self) -> FluxFunction {
        FluxFunction::from_name(&self.flux, Some(self.flux_param)).expect("flux name validated on input")
    }

    pub fn grid(&self) -> Result<Grid1D, dgtime_core::Error> {
        Grid1D::new(self.length, self.points)
    }

    pub fn manufactured(&self) -> Result<ManufacturedProblem, dgtime_core::Error> {
        let base = ManufacturedProblem::decaying_sine(self.flux_function(), self.grid()?)
            .with_horizon(self.horizon)
            .with_source_mode(self.source);
        Ok(match self.problem {
            Problem::DecayingSine => base,
            Problem::RationalProduct => ManufacturedProblem { time: TimeProfile::Rational, space: SpaceProfile::WeightedSine, ..base },
        })
    }

    pub fn study(&self) -> StudyConfig {
        StudyConfig {
            p: self.p,
            r: self.r,
            newton: self.newton,
            reference: if self.exact_reference {
                Reference::Exact
            } else {
                Reference::Temporal { factor: self.reference_factor }
            },
            sup_samples: self.sup_samples,
        }
    }

    /// Every key with its resolved value, in the config file syntax.
    pub fn entries(&self) -> BTreeMap<&'static str, String> {
        let list = |v: &[usize]| v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
        let mut out = BTreeMap::new();
        out.insert("command", self.command.map(|c| c.name().to_string()).unwrap_or_default());
        out.insert("problem", self.problem.name().into());
        out.insert("flux", self.flux.clone());
        out.insert("flux_param", self.flux_param.to_string());
        out.insert("m", self.points.to_string());
        out.insert("length", self.length.to_string());
        out.insert("horizon", self.horizon.to_string());
        out.insert("q", self.q.to_string());
        out.insert("n", self.intervals.to_string());
        out.insert("n_list", list(&self.n_list));
        out.insert("p", self.p.to_string());
        out.insert("r", self.r.to_string());
        out.insert("newton_tol", self.newton.tol.to_string());
        out.insert("newton_max_iter", self.newton.max_iter.to_string());
        out.insert(
            "damping",
            match self.newton.damping {
                Damping::LineHalving => "line-halving",
                Damping::None => "none",
            }
            .into(),
        );
        out.insert(
            "source",
            match self.source {
                SourceMode::Discrete => "discrete",
                SourceMode::Continuous => "continuous",
            }
            .into(),
        );
        out.insert("reference", if self.exact_reference { "exact" } else { "temporal" }.into());
        out.insert("reference_factor", self.reference_factor.to_string());
        out.insert("sup_samples", self.sup_samples.to_string());
        out.insert("seed", self.seed.to_string());
        out.insert("samples", self.samples.to_string());
        out.insert("modes", self.modes.to_string());
        out.insert("amplitude", self.amplitude.to_string());
        out.insert("function", self.function.name().into());
        out.insert("output_dir", self.output_dir.display().to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_is_echoed() {
        let entries = RunConfig::default().entries();
        assert_eq!(entries.len(), KEYS.len());
        assert!(KEYS.iter().all(|k| entries.contains_key(k)));
    }

    #[test]
    fn echo_round_trips() {
        let cfg = RunConfig { command: Some(Command::Maxreg), exact_reference: true, ..RunConfig::default() };
        let text: String = cfg
            .entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        assert_eq!(RunConfig::parse_str(&text).unwrap(), cfg);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = RunConfig::parse_str("# study\n\nq = 3  # stages\n").unwrap();
        assert_eq!(cfg.q, 3);
        assert!(matches!(RunConfig::parse_str("q 3"), Err(ConfigError::Syntax { line: 1, .. })));
    }
}
