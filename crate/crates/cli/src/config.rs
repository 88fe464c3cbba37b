//! Flat `key=value` scenario configuration.
//!
//! A scenario file is a plain-text list of assignments, one per line.  `#`
//! starts a comment that runs to the end of the line; blank lines are
//! ignored.  Keys may appear at most once per file.  Values given on the
//! command line via `--override key=value` are applied after the file and may
//! repeat (the last assignment wins), so a single base file can drive a whole
//! family of runs.

use std::collections::HashSet;

use lambdasim_core::basis::Representation;
use lambdasim_core::lindblad::default_step;
use lambdasim_core::operators::ModelParams;

use crate::states::{parse_population, parse_state, PopulationSpec, StateSpec};
use crate::CliError;

/// A fully resolved scenario: model parameters plus run controls.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub params: ModelParams,
    pub representation: Representation,
    pub initial_state: StateSpec,
    pub t_max: f64,
    /// Integrator step; `None` derives the default from the dynamical scale.
    pub dt: Option<f64>,
    pub record_every: usize,
    pub output_path: Option<String>,
    pub populations: Vec<PopulationSpec>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_step: f64,
}

impl ScenarioConfig {
    /// The integrator step this scenario will actually use.
    pub fn step(&self) -> f64 {
        self.dt.unwrap_or_else(|| default_step(&self.params))
    }
}

/// One `key=value` assignment tagged with where it came from, for error
/// messages (`file.conf:12` or `--override`).
#[derive(Debug, Clone)]
pub struct Assignment {
    pub key: String,
    pub value: String,
    pub location: String,
}

/// Splits a scenario file into assignments, rejecting malformed lines and
/// keys that repeat within the file.
pub fn parse_file(text: &str, name: &str) -> Result<Vec<Assignment>, CliError> {
    let mut out = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let location = format!("{}:{}", name, lineno + 1);
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!("{location}: expected `key = value`, got `{line}`"))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(CliError::config(format!("{location}: empty key")));
        }
        if !seen.insert(key.clone()) {
            return Err(CliError::config(format!(
                "{location}: duplicate key `{key}` (each key may appear once per file)"
            )));
        }
        out.push(Assignment { key, value, location });
    }
    Ok(out)
}

/// Parses one `--override key=value` argument.
pub fn parse_override(arg: &str) -> Result<Assignment, CliError> {
    let (key, value) = arg.split_once('=').ok_or_else(|| {
        CliError::config(format!("--override expects key=value, got `{arg}`"))
    })?;
    let key = key.trim().to_string();
    let value = value.trim().to_string();
    if key.is_empty() {
        return Err(CliError::config("--override has an empty key".into()));
    }
    Ok(Assignment {
        key,
        value,
        location: "--override".into(),
    })
}

fn parse_f64(a: &Assignment) -> Result<f64, CliError> {
    a.value.parse::<f64>().map_err(|_| {
        CliError::config(format!(
            "{}: `{}` is not a number for key `{}`",
            a.location, a.value, a.key
        ))
    })
}

fn parse_usize(a: &Assignment) -> Result<usize, CliError> {
    a.value.parse::<usize>().map_err(|_| {
        CliError::config(format!(
            "{}: `{}` is not a non-negative integer for key `{}`",
            a.location, a.value, a.key
        ))
    })
}

/// Folds assignments (file first, then overrides) into a validated scenario.
pub fn resolve(assignments: &[Assignment]) -> Result<ScenarioConfig, CliError> {
    let mut n: Option<usize> = None;
    let mut p: Option<usize> = None;
    let mut g = 1.0;
    let mut omega = 0.0;
    let mut delta = 0.0;
    let mut kappa = 0.0;
    let mut gamma0 = 0.0;
    let mut gamma2 = 0.0;
    let mut gamma10 = 0.0;
    let mut gamma12 = 0.0;
    let mut representation = Representation::Symmetric;
    let mut initial_state = StateSpec::ZeroEnergy { index: 0, p: None };
    let mut t_max = 100.0;
    let mut dt: Option<f64> = None;
    let mut record_every = 10usize;
    let mut output_path: Option<String> = None;
    let mut populations: Vec<PopulationSpec> = Vec::new();
    let mut ratio_min = 0.01;
    let mut ratio_max = 0.20;
    let mut ratio_step = 0.01;

    for a in assignments {
        match a.key.as_str() {
            "n" => n = Some(parse_usize(a)?),
            "p" => p = Some(parse_usize(a)?),
            "g" => g = parse_f64(a)?,
            "omega" => omega = parse_f64(a)?,
            "delta" => delta = parse_f64(a)?,
            "kappa" => kappa = parse_f64(a)?,
            "gamma0" => gamma0 = parse_f64(a)?,
            "gamma2" => gamma2 = parse_f64(a)?,
            "gamma10" => gamma10 = parse_f64(a)?,
            "gamma12" => gamma12 = parse_f64(a)?,
            "representation" => {
                representation = match a.value.as_str() {
                    "symmetric" => Representation::Symmetric,
                    "full" => Representation::Full,
                    other => {
                        return Err(CliError::config(format!(
                            "{}: representation must be `symmetric` or `full`, got `{other}`",
                            a.location
                        )))
                    }
                }
            }
            "initial_state" => {
                initial_state = parse_state(&a.value).map_err(|e| {
                    CliError::config(format!("{}: {e}", a.location))
                })?
            }
            "t_max" => t_max = parse_f64(a)?,
            "dt" => dt = Some(parse_f64(a)?),
            "record_every" => record_every = parse_usize(a)?,
            "output_path" => output_path = Some(a.value.clone()),
            "populations" => {
                populations = a
                    .value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        parse_population(s)
                            .map_err(|e| CliError::config(format!("{}: {e}", a.location)))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            "ratio_min" => ratio_min = parse_f64(a)?,
            "ratio_max" => ratio_max = parse_f64(a)?,
            "ratio_step" => ratio_step = parse_f64(a)?,
            other => {
                return Err(CliError::config(format!(
                    "{}: unknown key `{other}`",
                    a.location
                )))
            }
        }
    }

    let n = n.ok_or_else(|| CliError::config("missing required key `n`".into()))?;
    let p = p.ok_or_else(|| CliError::config("missing required key `p`".into()))?;

    let mut params = ModelParams::new(n, p);
    params.g = g;
    params.omega = omega;
    params.delta = delta;
    params.kappa = kappa;
    params.gamma0 = gamma0;
    params.gamma2 = gamma2;
    params.gamma10 = gamma10;
    params.gamma12 = gamma12;
    params
        .validate()
        .map_err(|e| CliError::config(format!("invalid model parameters: {e}")))?;

    if (gamma10 > 0.0 || gamma12 > 0.0) && representation != Representation::Full {
        return Err(CliError::config(
            "individual qutrit decay (gamma10/gamma12 > 0) breaks permutation \
             symmetry; set representation = full"
                .into(),
        ));
    }
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(CliError::config(format!(
            "t_max must be finite and non-negative, got {t_max}"
        )));
    }
    if let Some(step) = dt {
        if !step.is_finite() || step <= 0.0 {
            return Err(CliError::config(format!(
                "dt must be finite and positive, got {step}"
            )));
        }
    }
    if record_every == 0 {
        return Err(CliError::config("record_every must be at least 1".into()));
    }

    Ok(ScenarioConfig {
        params,
        representation,
        initial_state,
        t_max,
        dt,
        record_every,
        output_path,
        populations,
        ratio_min,
        ratio_max,
        ratio_step,
    })
}
