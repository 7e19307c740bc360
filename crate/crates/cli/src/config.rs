//! Command-line flags, the flat config file and their merge into a [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{CommandFactory, Parser, ValueEnum};
use serde::Serialize;

use dwell_core::spectrum::{SI_BOLTZMANN, SI_ELECTRON_MASS, SI_HBAR};
use dwell_core::{DensitySolverRegistry, ParticleSpec, PartitionRegistry, UnitMode};

use crate::error::CliError;

pub const DEFAULT_SPACINGS: usize = 101;
pub const DEFAULT_LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Wavefunction,
    DensityMatrix,
    Partition,
    MeanEnergy,
    HeatCapacity,
    Converge,
}

impl Command {
    fn sweeps(self) -> bool {
        matches!(
            self,
            Command::Partition | Command::MeanEnergy | Command::HeatCapacity
        )
    }

    fn needs_thermal(self) -> bool {
        matches!(
            self,
            Command::DensityMatrix
                | Command::Partition
                | Command::MeanEnergy
                | Command::HeatCapacity
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    Linear,
    Log,
}

/// `start:stop:points[:linear|log]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: SweepScale,
}

impl Sweep {
    /// Grid values in order, with both end points hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == last {
                    return self.stop;
                }
                let t = i as f64 / last as f64;
                match self.scale {
                    SweepScale::Linear => self.start + (self.stop - self.start) * t,
                    SweepScale::Log => {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp()
                    }
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!(
                "expected start:stop:points[:linear|log], got '{s}'"
            ));
        }
        let num = |p: &str, what: &str| -> Result<f64, String> {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad sweep {what} '{p}'"))
        };
        let start = num(parts[0], "start")?;
        let stop = num(parts[1], "stop")?;
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("bad sweep point count '{}'", parts[2]))?;
        let scale = match parts.get(3).map(|p| p.trim()) {
            None | Some("linear") => SweepScale::Linear,
            Some("log") => SweepScale::Log,
            Some(other) => return Err(format!("sweep scale must be linear or log, got '{other}'")),
        };
        if points < 2 {
            return Err(format!("sweep needs at least 2 points, got {points}"));
        }
        for (v, what) in [(start, "start"), (stop, "stop")] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("sweep {what} must be positive, got {v}"));
            }
        }
        Ok(Sweep {
            start,
            stop,
            points,
            scale,
        })
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = match self.scale {
            SweepScale::Linear => "linear",
            SweepScale::Log => "log",
        };
        write!(f, "{}:{}:{}:{}", self.start, self.stop, self.points, scale)
    }
}

/// Raw flags. Every field is optional so a config file can fill the gaps.
#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "dwell",
    version,
    about = "Spectra, density matrices and thermodynamics of a particle in a discretized infinite well",
    arg_required_else_help = true
)]
pub struct Flags {
    /// What to compute
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Number of lattice spacings (sites 0..=N)
    #[arg(long = "N")]
    pub spacings: Option<usize>,

    /// Lattice spacing
    #[arg(long, conflicts_with = "width")]
    pub a: Option<f64>,

    /// Well width; the spacing becomes L/N
    #[arg(long = "L")]
    pub width: Option<f64>,

    /// Natural units: hbar = m* = k_B = 1 (default)
    #[arg(long, conflicts_with = "si")]
    pub natural: bool,

    /// SI units
    #[arg(long = "SI")]
    pub si: bool,

    /// Effective mass in kg (SI only)
    #[arg(long = "m-star")]
    pub m_star: Option<f64>,

    /// Reduced Planck constant in J s (SI only)
    #[arg(long)]
    pub hbar: Option<f64>,

    /// Boltzmann constant in J/K (SI only)
    #[arg(long = "kB")]
    pub k_b: Option<f64>,

    /// Inverse temperature
    #[arg(long, conflicts_with = "temperature")]
    pub beta: Option<f64>,

    /// Temperature
    #[arg(long = "T")]
    pub temperature: Option<f64>,

    /// Grid over beta (partition, mean-energy) or T (heat-capacity): start:stop:points[:linear|log]
    #[arg(long)]
    pub sweep: Option<Sweep>,

    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Output file (default: standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Flat `key = value` file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Mode index for wavefunction
    #[arg(long = "n-e")]
    pub n_e: Option<usize>,

    /// Density-matrix strategy: spectral or propagate
    #[arg(long)]
    pub solver: Option<String>,

    /// Thermal steps for the propagate solver
    #[arg(long)]
    pub steps: Option<usize>,

    /// Divide the density matrix by the discrete partition function
    #[arg(long)]
    pub normalized: bool,

    /// Partition-function route: discrete_sum, continuum_sum, continuum_closed or theta
    #[arg(long)]
    pub method: Option<String>,

    /// Number of lattices in a converge run
    #[arg(long)]
    pub levels: Option<usize>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| CliError::config(format!("config key '{key}': cannot parse '{value}': {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::config(format!(
            "config key '{key}': expected true or false, got '{value}'"
        ))),
    }
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, false).map_err(|e| CliError::config(format!("config key '{key}': {e}")))
}

/// Reads `key = value` lines; `#` starts a comment. Keys mirror the long flag names.
pub fn parse_config_text(text: &str) -> Result<Flags, CliError> {
    let mut seen = BTreeMap::new();
    let mut f = Flags::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!("config line {}: expected key = value", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if seen.insert(key.to_owned(), lineno).is_some() {
            return Err(CliError::config(format!("config key '{key}' given twice")));
        }
        match key {
            "command" => f.command = Some(parse_enum(key, value)?),
            "N" => f.spacings = Some(parse_value(key, value)?),
            "a" => f.a = Some(parse_value(key, value)?),
            "L" => f.width = Some(parse_value(key, value)?),
            "natural" => f.natural = parse_bool(key, value)?,
            "SI" => f.si = parse_bool(key, value)?,
            "m-star" => f.m_star = Some(parse_value(key, value)?),
            "hbar" => f.hbar = Some(parse_value(key, value)?),
            "kB" => f.k_b = Some(parse_value(key, value)?),
            "beta" => f.beta = Some(parse_value(key, value)?),
            "T" => f.temperature = Some(parse_value(key, value)?),
            "sweep" => f.sweep = Some(parse_value(key, value)?),
            "format" => f.format = Some(parse_enum(key, value)?),
            "out" => f.out = Some(PathBuf::from(value)),
            "n-e" => f.n_e = Some(parse_value(key, value)?),
            "solver" => f.solver = Some(value.to_owned()),
            "steps" => f.steps = Some(parse_value(key, value)?),
            "normalized" => f.normalized = parse_bool(key, value)?,
            "method" => f.method = Some(value.to_owned()),
            "levels" => f.levels = Some(parse_value(key, value)?),
            _ => return Err(CliError::config(format!("unknown config key '{key}'"))),
        }
    }
    for (a, b) in [("beta", "T"), ("a", "L"), ("natural", "SI")] {
        if seen.contains_key(a) && seen.contains_key(b) {
            return Err(CliError::config(format!(
                "config keys '{a}' and '{b}' are mutually exclusive"
            )));
        }
    }
    Ok(f)
}

/// Flag values win; the paired inputs beta/T, a/L and natural/SI are each
/// taken as a unit from whichever source sets them, flags first.
pub fn merge(flags: Flags, file: Flags) -> Flags {
    let (beta, temperature) = if flags.beta.is_some() || flags.temperature.is_some() {
        (flags.beta, flags.temperature)
    } else {
        (file.beta, file.temperature)
    };
    let (a, width) = if flags.a.is_some() || flags.width.is_some() {
        (flags.a, flags.width)
    } else {
        (file.a, file.width)
    };
    let (natural, si) = if flags.natural || flags.si {
        (flags.natural, flags.si)
    } else {
        (file.natural, file.si)
    };
    Flags {
        command: flags.command.or(file.command),
        spacings: flags.spacings.or(file.spacings),
        a,
        width,
        natural,
        si,
        m_star: flags.m_star.or(file.m_star),
        hbar: flags.hbar.or(file.hbar),
        k_b: flags.k_b.or(file.k_b),
        beta,
        temperature,
        sweep: flags.sweep.or(file.sweep),
        format: flags.format.or(file.format),
        out: flags.out.or(file.out),
        config: flags.config,
        n_e: flags.n_e.or(file.n_e),
        solver: flags.solver.or(file.solver),
        steps: flags.steps.or(file.steps),
        normalized: flags.normalized || file.normalized,
        method: flags.method.or(file.method),
        levels: flags.levels.or(file.levels),
    }
}

/// Fully resolved, validated run description. Serialized as the `config` echo of JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "N")]
    pub spacings: usize,
    pub a: f64,
    #[serde(rename = "L")]
    pub width: f64,
    pub unit_mode: &'static str,
    #[serde(rename = "m-star")]
    pub m_star: f64,
    pub hbar: f64,
    #[serde(rename = "kB")]
    pub k_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    pub format: OutputFormat,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(rename = "n-e")]
    pub n_e: usize,
    pub solver: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    pub normalized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub levels: usize,
}

impl RunConfig {
    pub fn particle(&self) -> ParticleSpec {
        if self.unit_mode == UnitMode::Si.as_str() {
            ParticleSpec::si(self.m_star, self.hbar)
                .expect("validated when the config was resolved")
        } else {
            ParticleSpec::natural()
        }
    }

    /// Inverse temperature from `--beta` or `--T`.
    pub fn beta(&self) -> Option<f64> {
        self.beta.or(self.temperature.map(|t| 1.0 / (self.k_b * t)))
    }
}

fn positive(key: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::config(format!(
            "--{key} must be a positive number, got {value}"
        )))
    }
}

/// Validates merged flags and fills defaults.
pub fn resolve(f: Flags) -> Result<RunConfig, CliError> {
    let command = f
        .command
        .ok_or_else(|| CliError::config(format!("no command given\n\n{}", usage())))?;

    let spacings = f.spacings.unwrap_or(DEFAULT_SPACINGS);
    if spacings < 2 {
        return Err(CliError::config(format!(
            "--N must be at least 2, got {spacings}"
        )));
    }
    if f.a.is_some() && f.width.is_some() {
        return Err(CliError::config("--a and --L are mutually exclusive"));
    }
    if f.beta.is_some() && f.temperature.is_some() {
        return Err(CliError::config("--beta and --T are mutually exclusive"));
    }
    if f.natural && f.si {
        return Err(CliError::config(
            "--natural and --SI are mutually exclusive",
        ));
    }

    let unit_mode = if f.si {
        UnitMode::Si
    } else {
        UnitMode::Natural
    };
    let (m_star, hbar, k_b) = match unit_mode {
        UnitMode::Si => (
            positive("m-star", f.m_star.unwrap_or(SI_ELECTRON_MASS))?,
            positive("hbar", f.hbar.unwrap_or(SI_HBAR))?,
            positive("kB", f.k_b.unwrap_or(SI_BOLTZMANN))?,
        ),
        UnitMode::Natural => {
            for (key, v) in [("m-star", f.m_star), ("hbar", f.hbar), ("kB", f.k_b)] {
                if v.is_some() {
                    return Err(CliError::config(format!("--{key} only applies with --SI")));
                }
            }
            (1.0, 1.0, 1.0)
        }
    };

    let a = match (f.a, f.width) {
        (Some(a), _) => positive("a", a)?,
        (None, Some(l)) => positive("L", l)? / spacings as f64,
        (None, None) if unit_mode == UnitMode::Natural => 1.0,
        (None, None) => {
            return Err(CliError::config(
                "--SI needs the lattice size: give --a or --L",
            ))
        }
    };
    let width = f.width.unwrap_or(a * spacings as f64);

    let beta = f.beta.map(|b| positive("beta", b)).transpose()?;
    let temperature = f.temperature.map(|t| positive("T", t)).transpose()?;
    let thermal = beta.is_some() || temperature.is_some();

    if let Some(sweep) = f.sweep {
        if !command.sweeps() {
            return Err(CliError::config(
                "--sweep applies only to partition, mean-energy and heat-capacity",
            ));
        }
        if thermal {
            return Err(CliError::config(
                "--sweep replaces --beta/--T; give only one",
            ));
        }
        let _ = sweep;
    } else if command.needs_thermal() && !thermal {
        return Err(CliError::config(
            "this command needs --beta, --T or --sweep",
        ));
    }
    if command == Command::DensityMatrix && f.sweep.is_some() {
        return Err(CliError::config("density-matrix does not sweep"));
    }

    let solver = f.solver.unwrap_or_else(|| "spectral".to_owned());
    let solvers = DensitySolverRegistry::builtin();
    if solvers.get(&solver).is_none() {
        return Err(CliError::config(format!(
            "unknown --solver '{solver}' (available: {})",
            solvers.names().join(", ")
        )));
    }
    if let Some(method) = &f.method {
        let methods = PartitionRegistry::builtin();
        if methods.get(method).is_none() {
            return Err(CliError::config(format!(
                "unknown --method '{method}' (available: {})",
                methods.names().join(", ")
            )));
        }
    }
    if f.steps == Some(0) {
        return Err(CliError::config("--steps must be at least 1"));
    }
    let levels = f.levels.unwrap_or(DEFAULT_LEVELS);
    if levels == 0 {
        return Err(CliError::config("--levels must be at least 1"));
    }
    let n_e = f.n_e.unwrap_or(1);
    if n_e == 0 {
        return Err(CliError::config("--n-e must be at least 1"));
    }

    Ok(RunConfig {
        command,
        spacings,
        a,
        width,
        unit_mode: unit_mode.as_str(),
        m_star,
        hbar,
        k_b,
        beta,
        temperature,
        sweep: f.sweep,
        format: f.format.unwrap_or_default(),
        out: f.out,
        n_e,
        solver,
        steps: f.steps,
        normalized: f.normalized,
        method: f.method,
        levels,
    })
}

pub fn usage() -> String {
    Flags::command().render_help().to_string()
}

/// What the process should do after argument parsing.
#[derive(Debug)]
pub enum Invocation {
    Run(Box<RunConfig>),
    /// Help or version text for standard output.
    Info(String),
}

fn read_config_file(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    parse_config_text(&text)
}

/// Parses `argv` (program name first), reads `--config` if given and resolves the result.
pub fn parse_args<I, T>(args: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let flags = match Flags::try_parse_from(args) {
        Ok(f) => f,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Ok(Invocation::Info(e.to_string()))
                }
                _ => Err(CliError::config(e.to_string())),
            };
        }
    };
    let file = match &flags.config {
        Some(path) => read_config_file(path)?,
        None => Flags::default(),
    };
    resolve(merge(flags, file)).map(|c| Invocation::Run(Box::new(c)))
}
