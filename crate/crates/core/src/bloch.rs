//! Canonical density matrix of the ideal gas in the discrete well.
//!
//! Two independent routes produce `rho(n, n'; beta)`: the spectral sum over
//! the `N - 1` modes and explicit integration of the differential-difference
//! Bloch equation in the thermal variable `f = beta eps0`,
//!
//! ```text
//! d rho / df = (rho(n+2) - 2 rho(n) + rho(n-2)) / 4,   rho(f = 0) = delta_{nn'} / a.
//! ```
//!
//! Both are exposed as [`DensitySolver`] strategies and can be looked up by
//! name in a [`DensitySolverRegistry`].

use std::f64::consts::PI;
use std::fmt;

use ndarray::{Array1, Array2};

use crate::calculus::{definite_integral, LatticeFunction, LatticeSpec};
use crate::error::{require_positive, Error, Result};
use crate::spectrum::{ParticleSpec, Spectrum};

/// Inverse temperature together with the derived lattice thermal variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    beta: f64,
    k_b: f64,
    f_tilde: f64,
}

impl ThermalState {
    /// `beta = 0` is accepted for initial-condition work.
    pub fn from_beta(beta: f64, k_b: f64, spectrum: &Spectrum) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::invalid(
                "beta",
                format!("must be finite and non-negative, got {beta}"),
            ));
        }
        require_positive("k_B", k_b)?;
        Ok(Self {
            beta,
            k_b,
            f_tilde: beta * spectrum.energy_scale(),
        })
    }

    pub fn from_temperature(temperature: f64, k_b: f64, spectrum: &Spectrum) -> Result<Self> {
        require_positive("T", temperature)?;
        require_positive("k_B", k_b)?;
        Self::from_beta(1.0 / (k_b * temperature), k_b, spectrum)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    /// `f = beta hbar^2 / (2 m* a^2)`.
    pub fn f_tilde(&self) -> f64 {
        self.f_tilde
    }

    pub fn temperature(&self) -> f64 {
        1.0 / (self.k_b * self.beta)
    }
}

/// `(N+1) x (N+1)` grid of `rho(n, n'; beta)`, in units of 1/length.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub rho: Array2<f64>,
    pub lattice: LatticeSpec,
    pub beta: f64,
    pub normalized: bool,
}

impl DensityMatrix {
    pub fn get(&self, n: usize, n_prime: usize) -> f64 {
        self.rho[[n, n_prime]]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.rho.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest entry-wise difference from another matrix on the same lattice.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.rho
            .iter()
            .zip(other.rho.iter())
            .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
    }

    /// Block of interior sites `1..N-1`.
    pub fn interior(&self) -> Array2<f64> {
        let big_n = self.lattice.spacings();
        self.rho.slice(ndarray::s![1..big_n, 1..big_n]).to_owned()
    }

    pub fn diagonal(&self) -> LatticeFunction {
        LatticeFunction::from_fn(&self.lattice, |n| self.rho[[n, n]])
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "beta",
            format!("must be finite and non-negative, got {beta}"),
        ))
    }
}

/// Spectral sum `(2/L) sum_{n_E=1}^{N-1} exp(-beta E) sin(pi n_E n/N) sin(pi n_E n'/N)`.
///
/// Every mode carries the weight `2/L`, the middle mode of an even lattice included.
pub fn density_matrix_spectral(spectrum: &Spectrum, beta: f64) -> Result<DensityMatrix> {
    check_beta(beta)?;
    let lattice = *spectrum.lattice();
    let big_n = lattice.spacings();
    let prefactor = 2.0 / lattice.width();
    let mut rho = Array2::<f64>::zeros((big_n + 1, big_n + 1));

    for mode in spectrum.modes() {
        let weight = prefactor * (-beta * mode.energy).exp();
        if weight == 0.0 {
            continue;
        }
        let phase = PI * mode.n_e as f64 / big_n as f64;
        let s: Vec<f64> = (0..=big_n)
            .map(|n| {
                if n == 0 || n == big_n {
                    0.0
                } else {
                    (phase * n as f64).sin()
                }
            })
            .collect();
        for n in 1..big_n {
            let wn = weight * s[n];
            for m in n..big_n {
                rho[[n, m]] += wn * s[m];
            }
        }
    }
    for n in 1..big_n {
        for m in (n + 1)..big_n {
            rho[[m, n]] = rho[[n, m]];
        }
    }
    Ok(DensityMatrix {
        rho,
        lattice,
        beta,
        normalized: false,
    })
}

/// Divides every entry by the partition function `z`.
pub fn density_matrix_normalized(dm: &DensityMatrix, z: f64) -> Result<DensityMatrix> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::invalid(
            "Z",
            format!("partition function must be positive, got {z}"),
        ));
    }
    Ok(DensityMatrix {
        rho: &dm.rho / z,
        lattice: dm.lattice,
        beta: dm.beta,
        normalized: true,
    })
}

/// Discrete integral of the diagonal `rho(n, n)` over `[0, N]`.
pub fn trace_integral(dm: &DensityMatrix) -> f64 {
    let diag = dm.diagonal();
    definite_integral(&diag, 0, dm.lattice.spacings() as i64, dm.lattice.spacing())
        .expect("full-lattice limits are always valid")
}

/// Default number of thermal steps for propagating up to `f_target`.
pub fn default_steps(f_target: f64) -> usize {
    1000usize.max((1e3 * f_target).ceil() as usize)
}

/// Applies `v -> -M v`: the quarter second difference over two sites, with
/// zero boundary sites and odd-reflection ghosts at `-1` and `N+1`.
///
/// `v` holds the interior sites `1..N-1` (index `i` is site `i + 1`).
fn bloch_generator(v: &[f64], out: &mut [f64]) {
    let dim = v.len();
    // site value with boundary zeros and odd-reflected ghosts
    let site = |n: i64| -> f64 {
        let big_n = dim as i64 + 1;
        if n == 0 || n == big_n {
            0.0
        } else if n == -1 {
            -v[0]
        } else if n == big_n + 1 {
            -v[dim - 1]
        } else {
            v[(n - 1) as usize]
        }
    };
    for i in 0..dim {
        let n = i as i64 + 1;
        out[i] = 0.25 * (site(n + 2) - 2.0 * v[i] + site(n - 2));
    }
}

fn rk4_column(initial: &[f64], step: f64, steps: usize) -> Vec<f64> {
    let dim = initial.len();
    let mut y = initial.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    for _ in 0..steps {
        bloch_generator(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * step * k1[i];
        }
        bloch_generator(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * step * k2[i];
        }
        bloch_generator(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + step * k3[i];
        }
        bloch_generator(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Propagates an arbitrary initial grid (interior columns only) to the thermal variable `f_target`.
fn propagate_from(
    initial: &Array2<f64>,
    lattice: LatticeSpec,
    f_target: f64,
    steps: usize,
) -> Result<Array2<f64>> {
    if steps == 0 {
        return Err(Error::invalid("steps", "need at least one step"));
    }
    let step = f_target / steps as f64;
    if step > 1.0 {
        return Err(Error::UnstableStep(step));
    }
    let big_n = lattice.spacings();
    let mut rho = Array2::<f64>::zeros((big_n + 1, big_n + 1));
    for col in 1..big_n {
        let start: Vec<f64> = (1..big_n).map(|n| initial[[n, col]]).collect();
        let end = rk4_column(&start, step, steps);
        for (i, v) in end.into_iter().enumerate() {
            rho[[i + 1, col]] = v;
        }
    }
    Ok(rho)
}

/// Integrates the lattice Bloch equation from `rho = delta / a` at `f = 0` to
/// `f = beta_target eps0` with fixed-step classical RK4, column by column.
pub fn propagate_bloch(
    lattice: &LatticeSpec,
    particle: &ParticleSpec,
    beta_target: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    check_beta(beta_target)?;
    let f_target = beta_target * particle.energy_scale(lattice);
    let big_n = lattice.spacings();
    let mut initial = Array2::<f64>::zeros((big_n + 1, big_n + 1));
    for n in 1..big_n {
        initial[[n, n]] = 1.0 / lattice.spacing();
    }
    let rho = propagate_from(&initial, *lattice, f_target, steps)?;
    Ok(DensityMatrix {
        rho,
        lattice: *lattice,
        beta: beta_target,
        normalized: false,
    })
}

/// Free-particle kernel `sqrt(m*/(2 pi beta hbar^2)) exp(-m* (x-x')^2 / (2 beta hbar^2))`.
pub fn density_matrix_continuum(
    x: f64,
    x_prime: f64,
    beta: f64,
    particle: &ParticleSpec,
) -> Result<f64> {
    require_positive("beta", beta)?;
    let hb2 = particle.hbar() * particle.hbar();
    let m = particle.m_star();
    let d = x - x_prime;
    Ok((m / (2.0 * PI * beta * hb2)).sqrt() * (-m * d * d / (2.0 * beta * hb2)).exp())
}

/// Free-particle kernel divided by `Z = L sqrt(m*/(2 pi beta hbar^2))`; equals `1/L` on the diagonal.
pub fn density_matrix_continuum_normalized(
    x: f64,
    x_prime: f64,
    beta: f64,
    width: f64,
    particle: &ParticleSpec,
) -> Result<f64> {
    require_positive("beta", beta)?;
    require_positive("L", width)?;
    let hb2 = particle.hbar() * particle.hbar();
    let d = x - x_prime;
    Ok((-particle.m_star() * d * d / (2.0 * beta * hb2)).exp() / width)
}

/// Options shared by density-matrix strategies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Thermal steps for propagating strategies; `None` picks [`default_steps`].
    pub steps: Option<usize>,
}

/// A way of producing the canonical density matrix of a spectrum at `beta`.
pub trait DensitySolver: Send + Sync {
    fn name(&self) -> &'static str;

    fn solve(
        &self,
        spectrum: &Spectrum,
        beta: f64,
        options: &SolveOptions,
    ) -> Result<DensityMatrix>;
}

/// Closed spectral sum over the lattice modes.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpectralSolver;

impl DensitySolver for SpectralSolver {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn solve(
        &self,
        spectrum: &Spectrum,
        beta: f64,
        _options: &SolveOptions,
    ) -> Result<DensityMatrix> {
        density_matrix_spectral(spectrum, beta)
    }
}

/// Explicit integration of the Bloch equation.
#[derive(Debug, Clone, Copy, Default)]
pub struct PropagationSolver;

impl DensitySolver for PropagationSolver {
    fn name(&self) -> &'static str {
        "propagate"
    }

    fn solve(
        &self,
        spectrum: &Spectrum,
        beta: f64,
        options: &SolveOptions,
    ) -> Result<DensityMatrix> {
        let f_target = beta * spectrum.energy_scale();
        let steps = options.steps.unwrap_or_else(|| default_steps(f_target));
        propagate_bloch(spectrum.lattice(), spectrum.particle(), beta, steps)
    }
}

/// Density-matrix strategies keyed by name, in registration order.
pub struct DensitySolverRegistry {
    solvers: Vec<Box<dyn DensitySolver>>,
}

impl DensitySolverRegistry {
    pub fn empty() -> Self {
        Self {
            solvers: Vec::new(),
        }
    }

    /// `spectral` and `propagate`.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(SpectralSolver));
        r.register(Box::new(PropagationSolver));
        r
    }

    /// Adds a solver, replacing any existing one with the same name.
    pub fn register(&mut self, solver: Box<dyn DensitySolver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn DensitySolver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }
}

impl Default for DensitySolverRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl fmt::Debug for DensitySolverRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensitySolverRegistry")
            .field("solvers", &self.names())
            .finish()
    }
}

/// Applies the lattice Bloch generator `eps0 (rho(n+2) - 2 rho(n) + rho(n-2)) / 4`
/// to every interior column, i.e. the right-hand side of `d rho / d beta`.
pub fn bloch_rhs(dm: &DensityMatrix, energy_scale: f64) -> Array2<f64> {
    let big_n = dm.lattice.spacings();
    let mut out = Array2::<f64>::zeros((big_n + 1, big_n + 1));
    let mut buf = vec![0.0; big_n - 1];
    for col in 1..big_n {
        let v: Array1<f64> = (1..big_n).map(|n| dm.rho[[n, col]]).collect();
        bloch_generator(v.as_slice().expect("contiguous"), &mut buf);
        for (i, x) in buf.iter().enumerate() {
            out[[i + 1, col]] = energy_scale * x;
        }
    }
    out
}
