//! Partition functions and thermodynamics of the ideal gas in the well.
//!
//! Four routes to `Z(beta)` are provided, each as a [`PartitionMethod`]:
//!
//! | name               | formula                                              |
//! |--------------------|------------------------------------------------------|
//! | `discrete_sum`     | `sum_{n_E=1}^{N-1} exp(-beta eps0 sin^2(pi n_E/N))`  |
//! | `continuum_sum`    | `sum_{n_E>=1} exp(-mu n_E^2)`                        |
//! | `continuum_closed` | `L sqrt(m*/(2 pi beta hbar^2)) = sqrt(pi/mu) / 2`    |
//! | `theta`            | `(theta3(mu) - 1) / 2`                               |
//!
//! with `mu = beta hbar^2 pi^2 / (2 m* L^2)`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{require_positive, Error, Result};
use crate::series::{sum_decaying, MAX_TERMS};
use crate::spectrum::{ParticleSpec, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionMethodKind {
    DiscreteSum,
    ContinuumSum,
    ContinuumClosed,
    Theta,
}

impl PartitionMethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PartitionMethodKind::DiscreteSum => "discrete_sum",
            PartitionMethodKind::ContinuumSum => "continuum_sum",
            PartitionMethodKind::ContinuumClosed => "continuum_closed",
            PartitionMethodKind::Theta => "theta",
        }
    }
}

impl fmt::Display for PartitionMethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A partition-function value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionResult {
    pub z: f64,
    pub method: PartitionMethodKind,
    pub beta: f64,
    /// `-ln Z / beta`; `None` at `beta = 0`.
    pub free_energy: Option<f64>,
    /// Theta argument, for the continuum methods.
    pub mu: Option<f64>,
}

impl PartitionResult {
    fn new(z: f64, method: PartitionMethodKind, beta: f64, mu: Option<f64>) -> Self {
        let free_energy = (beta > 0.0).then(|| -z.ln() / beta);
        Self {
            z,
            method,
            beta,
            free_energy,
            mu,
        }
    }
}

/// Truncation of the continuum level sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Cutoff {
    /// Stop once the next term drops below `1e-16` of the running sum.
    #[default]
    Auto,
    /// Sum exactly `n_E = 1..=terms`.
    Terms(usize),
}

/// `mu = beta hbar^2 pi^2 / (2 m* L^2)`.
pub fn theta_argument(width: f64, particle: &ParticleSpec, beta: f64) -> f64 {
    beta * particle.continuum_scale(width)
}

fn check_beta_nonnegative(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "beta",
            format!("must be finite and non-negative, got {beta}"),
        ))
    }
}

/// Direct sum over the `N - 1` lattice modes.
pub fn partition_discrete(spectrum: &Spectrum, beta: f64) -> Result<PartitionResult> {
    check_beta_nonnegative(beta)?;
    let z = spectrum
        .modes()
        .iter()
        .map(|m| (-beta * m.energy).exp())
        .sum();
    Ok(PartitionResult::new(
        z,
        PartitionMethodKind::DiscreteSum,
        beta,
        None,
    ))
}

/// Continuum levels summed directly.
pub fn partition_continuum_sum(
    width: f64,
    particle: &ParticleSpec,
    beta: f64,
    cutoff: Cutoff,
) -> Result<PartitionResult> {
    require_positive("beta", beta)?;
    require_positive("L", width)?;
    let mu = theta_argument(width, particle, beta);
    let z = match cutoff {
        Cutoff::Auto => sum_decaying(1, |n| (-mu * (n * n) as f64).exp())?.0,
        Cutoff::Terms(terms) => {
            if terms == 0 || terms > MAX_TERMS {
                return Err(Error::invalid(
                    "cutoff",
                    format!("must lie in 1..={MAX_TERMS}, got {terms}"),
                ));
            }
            (1..=terms as u64)
                .map(|n| (-mu * (n * n) as f64).exp())
                .sum()
        }
    };
    Ok(PartitionResult::new(
        z,
        PartitionMethodKind::ContinuumSum,
        beta,
        Some(mu),
    ))
}

/// Level sum replaced by its Gaussian integral, `L sqrt(m*/(2 pi beta hbar^2))`.
pub fn partition_continuum_closed(
    width: f64,
    particle: &ParticleSpec,
    beta: f64,
) -> Result<PartitionResult> {
    require_positive("beta", beta)?;
    require_positive("L", width)?;
    let mu = theta_argument(width, particle, beta);
    let hb2 = particle.hbar() * particle.hbar();
    let z = width * (particle.m_star() / (2.0 * PI * beta * hb2)).sqrt();
    Ok(PartitionResult::new(
        z,
        PartitionMethodKind::ContinuumClosed,
        beta,
        Some(mu),
    ))
}

/// Jacobi `theta3(0, mu) = sum_{n in Z} exp(-mu n^2)` by direct summation.
pub fn theta3(mu: f64) -> Result<f64> {
    require_positive("mu", mu)?;
    let (tail, _) = sum_decaying(1, |n| (-mu * (n * n) as f64).exp())?;
    Ok(1.0 + 2.0 * tail)
}

/// `theta3` through its Poisson-resummed form `sqrt(pi/mu) sum_{n in Z} exp(-pi^2 n^2 / mu)`.
pub fn theta3_resummed(mu: f64) -> Result<f64> {
    require_positive("mu", mu)?;
    let dual = PI * PI / mu;
    let (tail, _) = sum_decaying(1, |n| (-dual * (n * n) as f64).exp())?;
    Ok((PI / mu).sqrt() * (1.0 + 2.0 * tail))
}

/// `Z = (theta3(mu) - 1) / 2`.
///
/// Below the self-dual point `mu = pi` the resummed series is used; above it
/// the direct series is.
pub fn partition_theta(width: f64, particle: &ParticleSpec, beta: f64) -> Result<PartitionResult> {
    require_positive("beta", beta)?;
    require_positive("L", width)?;
    let mu = theta_argument(width, particle, beta);
    // above the self-dual point the tail is summed directly; (theta3 - 1) / 2 would cancel
    let z = if mu < PI {
        0.5 * (theta3_resummed(mu)? - 1.0)
    } else {
        sum_decaying(1, |n| (-mu * (n * n) as f64).exp())?.0
    };
    Ok(PartitionResult::new(
        z,
        PartitionMethodKind::Theta,
        beta,
        Some(mu),
    ))
}

/// `F = -ln Z / beta`.
pub fn free_energy(result: &PartitionResult) -> Result<f64> {
    require_positive("beta", result.beta)?;
    require_positive("Z", result.z)?;
    Ok(-result.z.ln() / result.beta)
}

/// Thermal mean energy `-d ln Z / d beta = sum E e^{-beta E} / sum e^{-beta E}` over the lattice modes.
pub fn mean_energy(spectrum: &Spectrum, beta: f64) -> Result<f64> {
    require_positive("beta", beta)?;
    // shift by the ground level so the weights cannot all underflow
    let e_min = spectrum
        .modes()
        .iter()
        .map(|m| m.energy)
        .fold(f64::INFINITY, f64::min);
    let (num, den) = spectrum.modes().iter().fold((0.0, 0.0), |(num, den), m| {
        let w = (-beta * (m.energy - e_min)).exp();
        (num + m.energy * w, den + w)
    });
    Ok(num / den)
}

/// Infinite-temperature limit of [`mean_energy`]: the plain average of the lattice levels.
pub fn mean_energy_unweighted(spectrum: &Spectrum) -> f64 {
    let modes = spectrum.modes();
    modes.iter().map(|m| m.energy).sum::<f64>() / modes.len() as f64
}

/// Mean energy of the continuum level sum, `sum E_n e^{-beta E_n} / sum e^{-beta E_n}`.
pub fn mean_energy_continuum(width: f64, particle: &ParticleSpec, beta: f64) -> Result<f64> {
    require_positive("beta", beta)?;
    require_positive("L", width)?;
    let scale = particle.continuum_scale(width);
    let mu = beta * scale;
    // shifted by the ground level n = 1
    let (num, _) = sum_decaying(1, |n| {
        let n2 = (n * n) as f64;
        n2 * (-mu * (n2 - 1.0)).exp()
    })?;
    let (den, _) = sum_decaying(1, |n| {
        let n2 = (n * n) as f64;
        (-mu * (n2 - 1.0)).exp()
    })?;
    Ok(scale * num / den)
}

/// Context a partition method evaluates against: the lattice spectrum (for
/// discrete routes) and its width and particle (for continuum routes).
pub type ThermoSystem = Spectrum;

/// A route to the partition function.
pub trait PartitionMethod: Send + Sync {
    fn name(&self) -> &'static str {
        self.kind().as_str()
    }

    fn kind(&self) -> PartitionMethodKind;

    fn partition(&self, system: &ThermoSystem, beta: f64) -> Result<PartitionResult>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DiscreteSum;

impl PartitionMethod for DiscreteSum {
    fn kind(&self) -> PartitionMethodKind {
        PartitionMethodKind::DiscreteSum
    }

    fn partition(&self, system: &ThermoSystem, beta: f64) -> Result<PartitionResult> {
        partition_discrete(system, beta)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ContinuumSum {
    pub cutoff: Cutoff,
}

impl PartitionMethod for ContinuumSum {
    fn kind(&self) -> PartitionMethodKind {
        PartitionMethodKind::ContinuumSum
    }

    fn partition(&self, system: &ThermoSystem, beta: f64) -> Result<PartitionResult> {
        partition_continuum_sum(
            system.lattice().width(),
            system.particle(),
            beta,
            self.cutoff,
        )
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ContinuumClosed;

impl PartitionMethod for ContinuumClosed {
    fn kind(&self) -> PartitionMethodKind {
        PartitionMethodKind::ContinuumClosed
    }

    fn partition(&self, system: &ThermoSystem, beta: f64) -> Result<PartitionResult> {
        partition_continuum_closed(system.lattice().width(), system.particle(), beta)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ThetaForm;

impl PartitionMethod for ThetaForm {
    fn kind(&self) -> PartitionMethodKind {
        PartitionMethodKind::Theta
    }

    fn partition(&self, system: &ThermoSystem, beta: f64) -> Result<PartitionResult> {
        partition_theta(system.lattice().width(), system.particle(), beta)
    }
}

/// Partition-function routes keyed by name, in registration order.
pub struct PartitionRegistry {
    methods: Vec<Box<dyn PartitionMethod>>,
}

impl PartitionRegistry {
    pub fn empty() -> Self {
        Self {
            methods: Vec::new(),
        }
    }

    /// `discrete_sum`, `continuum_sum`, `continuum_closed`, `theta`.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(DiscreteSum));
        r.register(Box::new(ContinuumSum::default()));
        r.register(Box::new(ContinuumClosed));
        r.register(Box::new(ThetaForm));
        r
    }

    /// Adds a method, replacing any existing one with the same name.
    pub fn register(&mut self, method: Box<dyn PartitionMethod>) {
        self.methods.retain(|m| m.name() != method.name());
        self.methods.push(method);
    }

    pub fn get(&self, name: &str) -> Option<&dyn PartitionMethod> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn PartitionMethod> {
        self.methods.iter().map(|m| m.as_ref())
    }
}

impl Default for PartitionRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl fmt::Debug for PartitionRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartitionRegistry")
            .field("methods", &self.names())
            .finish()
    }
}

/// `-d ln Z / d beta` for any partition route, by a central difference with
/// step `relative_step * beta`.
pub fn mean_energy_by_difference(
    method: &dyn PartitionMethod,
    system: &ThermoSystem,
    beta: f64,
    relative_step: f64,
) -> Result<f64> {
    require_positive("beta", beta)?;
    require_positive("relative_step", relative_step)?;
    let h = relative_step * beta;
    let up = method.partition(system, beta + h)?.z.ln();
    let down = method.partition(system, beta - h)?.z.ln();
    Ok(-(up - down) / (2.0 * h))
}

/// Lowest two lattice levels, for the two-level approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelModel {
    pub e1: f64,
    pub e2: f64,
    /// `E1 - E2` (negative).
    pub delta_e: f64,
    /// `|E1 - E2| / (2 k_B)`.
    pub theta_char: f64,
}

impl TwoLevelModel {
    pub fn from_spectrum(spectrum: &Spectrum, k_b: f64) -> Result<Self> {
        require_positive("k_B", k_b)?;
        let big_n = spectrum.lattice().spacings();
        if big_n < 5 {
            return Err(Error::invalid(
                "N",
                format!("the two-level model needs N >= 5 for distinct lowest levels, got {big_n}"),
            ));
        }
        let e1 = spectrum.mode(1)?.energy;
        let e2 = spectrum.mode(2)?.energy;
        let delta_e = e1 - e2;
        Ok(Self {
            e1,
            e2,
            delta_e,
            theta_char: delta_e.abs() / (2.0 * k_b),
        })
    }

    /// `exp(-beta E1) + exp(-beta E2)`.
    pub fn partition(&self, beta: f64) -> Result<f64> {
        check_beta_nonnegative(beta)?;
        Ok((-beta * self.e1).exp() + (-beta * self.e2).exp())
    }

    /// `C_V / R = (x / cosh x)^2` with `x = Theta / T`.
    pub fn heat_capacity(&self, temperature: f64) -> Result<f64> {
        require_positive("T", temperature)?;
        Ok(reduced_heat_capacity(self.theta_char / temperature))
    }
}

/// `(x / cosh x)^2`, even in `x` and finite for large `|x|`.
pub fn reduced_heat_capacity(x: f64) -> f64 {
    let x = x.abs();
    if x > 350.0 {
        // cosh overflows; use 2 x e^{-x} directly
        let v = 2.0 * x * (-x).exp();
        return v * v;
    }
    let r = x / x.cosh();
    r * r
}

/// `Z_2 = exp(-beta E1) + exp(-beta E2)` over the two lowest lattice levels.
pub fn two_level_partition(spectrum: &Spectrum, beta: f64) -> Result<f64> {
    TwoLevelModel::from_spectrum(spectrum, 1.0)?.partition(beta)
}

/// Two-level heat capacity in units of `R` at temperature `temperature`.
pub fn heat_capacity_two_level(spectrum: &Spectrum, temperature: f64, k_b: f64) -> Result<f64> {
    require_positive("T", temperature)?;
    TwoLevelModel::from_spectrum(spectrum, k_b)?.heat_capacity(temperature)
}

/// `Theta = |E1 - E2| / (2 k_B)`.
pub fn characteristic_temperature(spectrum: &Spectrum, k_b: f64) -> Result<f64> {
    Ok(TwoLevelModel::from_spectrum(spectrum, k_b)?.theta_char)
}
