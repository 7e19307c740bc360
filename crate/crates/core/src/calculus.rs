//! Centered difference operators, translations and discrete (anti)integration
//! on the uniform lattice `x_n = a n`, `n = 0..=N`.
//!
//! Lattice functions vanish outside `[0, N]`. With that convention the
//! operator series for the inverse centered difference,
//! `(T_1 - T_-1)^-1 = -sum_k T_(2k+1)`, is a finite sum.

use crate::error::{require_positive, Error, Result};

/// `|sin|` below this value makes a closed-form antiderivative singular.
pub const SINGULARITY_TOLERANCE: f64 = 1e-12;

/// Lattice geometry: `N` spacings of width `a`, so `L = N a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    spacings: usize,
    spacing: f64,
}

impl LatticeSpec {
    pub fn new(spacings: usize, spacing: f64) -> Result<Self> {
        if spacings < 2 {
            return Err(Error::invalid(
                "N",
                format!("need at least 2 spacings, got {spacings}"),
            ));
        }
        require_positive("a", spacing)?;
        Ok(Self { spacings, spacing })
    }

    /// Lattice of total width `width` split into `spacings` cells.
    pub fn with_width(spacings: usize, width: f64) -> Result<Self> {
        require_positive("L", width)?;
        if spacings < 2 {
            return Err(Error::invalid(
                "N",
                format!("need at least 2 spacings, got {spacings}"),
            ));
        }
        Self::new(spacings, width / spacings as f64)
    }

    /// Number of spacings `N`; sites run over `0..=N`.
    pub fn spacings(&self) -> usize {
        self.spacings
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Well width `L = N a`.
    pub fn width(&self) -> f64 {
        self.spacings as f64 * self.spacing
    }

    /// Physical coordinate of site `n`.
    pub fn position(&self, n: usize) -> f64 {
        n as f64 * self.spacing
    }

    /// Site closest to the physical coordinate `x`, clamped to the lattice.
    pub fn nearest_site(&self, x: f64) -> usize {
        let n = (x / self.spacing).round();
        n.clamp(0.0, self.spacings as f64) as usize
    }

    /// Validates `0 <= n <= N`.
    pub fn check_site(&self, n: i64) -> Result<usize> {
        if n < 0 || n as usize > self.spacings {
            Err(Error::SiteOutOfRange {
                index: n,
                max: self.spacings,
            })
        } else {
            Ok(n as usize)
        }
    }
}

/// Real function sampled on sites `0..=N`, zero everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    values: Vec<f64>,
}

impl LatticeFunction {
    /// Wraps samples for sites `0..=N`; `values.len()` must be `N + 1`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::invalid(
                "values",
                format!("need samples for at least 3 sites, got {}", values.len()),
            ));
        }
        Ok(Self { values })
    }

    pub fn from_fn(lattice: &LatticeSpec, f: impl Fn(usize) -> f64) -> Self {
        Self {
            values: (0..=lattice.spacings()).map(f).collect(),
        }
    }

    pub fn zeros(lattice: &LatticeSpec) -> Self {
        Self::from_fn(lattice, |_| 0.0)
    }

    /// `N`, the index of the last site.
    pub fn last_site(&self) -> usize {
        self.values.len() - 1
    }

    /// Value at site `n`; 0 outside `[0, N]`.
    pub fn at(&self, n: i64) -> f64 {
        if n < 0 {
            0.0
        } else {
            self.values.get(n as usize).copied().unwrap_or(0.0)
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Site-wise product, e.g. `|Psi|^2` or overlap integrands.
    pub fn product(&self, other: &LatticeFunction) -> Result<LatticeFunction> {
        if self.values.len() != other.values.len() {
            return Err(Error::invalid(
                "other",
                "lattice functions live on different lattices",
            ));
        }
        Ok(LatticeFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x * y)
                .collect(),
        })
    }

    fn check_site(&self, n: i64) -> Result<()> {
        if n < 0 || n as usize > self.last_site() {
            Err(Error::SiteOutOfRange {
                index: n,
                max: self.last_site(),
            })
        } else {
            Ok(())
        }
    }
}

/// Centered first difference `(f(n+1) - f(n-1)) / 2a`.
pub fn centered_diff1(f: &LatticeFunction, n: i64, a: f64) -> Result<f64> {
    f.check_site(n)?;
    require_positive("a", a)?;
    Ok((f.at(n + 1) - f.at(n - 1)) / (2.0 * a))
}

/// Centered second difference with the doubled step, `(f(n+2) - 2f(n) + f(n-2)) / 4a^2`.
pub fn centered_diff2(f: &LatticeFunction, n: i64, a: f64) -> Result<f64> {
    f.check_site(n)?;
    require_positive("a", a)?;
    Ok((f.at(n + 2) - 2.0 * f.at(n) + f.at(n - 2)) / (4.0 * a * a))
}

/// `result(n) = f(n + m)`, with values shifted in from outside the support set to 0.
pub fn translate(f: &LatticeFunction, m: i64) -> LatticeFunction {
    let values = (0..=f.last_site() as i64).map(|n| f.at(n + m)).collect();
    LatticeFunction { values }
}

/// Antiderivative from the translation-operator series,
/// `F(n) = -2a sum_{k>=0} f(n + 2k + 1)`.
///
/// Any integer `n` is accepted; only sites inside the support contribute.
pub fn antiderivative_series(f: &LatticeFunction, n: i64, a: f64) -> f64 {
    let last = f.last_site() as i64;
    let mut m = n + 1;
    if m < 0 {
        // first site of the same parity that lies inside the support
        m += ((-m + 1) / 2) * 2;
    }
    let mut sum = 0.0;
    while m <= last {
        sum += f.at(m);
        m += 2;
    }
    -2.0 * a * sum
}

/// Discrete definite integral `F(n_max) - F(n_min)`.
///
/// Over `[0, N]` this telescopes to `2a` times the sum of `f` on odd sites.
pub fn definite_integral(f: &LatticeFunction, n_min: i64, n_max: i64, a: f64) -> Result<f64> {
    f.check_site(n_min)?;
    f.check_site(n_max)?;
    require_positive("a", a)?;
    if n_min > n_max {
        return Err(Error::invalid(
            "limits",
            format!("lower limit {n_min} exceeds upper limit {n_max}"),
        ));
    }
    Ok(antiderivative_series(f, n_max, a) - antiderivative_series(f, n_min, a))
}

/// Integrands with a tabulated antiderivative (unit spacing).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    One,
    Cos,
    Sin,
    SinSquared,
}

impl ClosedFormKind {
    /// The integrand `f(n)` this antiderivative belongs to.
    pub fn integrand(self, alpha: f64, n: f64) -> f64 {
        match self {
            ClosedFormKind::One => 1.0,
            ClosedFormKind::Cos => (n * alpha).cos(),
            ClosedFormKind::Sin => (n * alpha).sin(),
            ClosedFormKind::SinSquared => (n * alpha).sin().powi(2),
        }
    }
}

fn nonsingular_sine(angle: f64) -> Result<f64> {
    let s = angle.sin();
    if s.abs() < SINGULARITY_TOLERANCE {
        Err(Error::SingularQuadrature {
            value: s.abs(),
            tolerance: SINGULARITY_TOLERANCE,
        })
    } else {
        Ok(s)
    }
}

/// Tabulated antiderivatives of the centered difference at unit spacing:
///
/// ```text
/// 1        -> n
/// cos nα   -> sin nα / sin α
/// sin nα   -> -cos nα / sin α
/// sin² nα  -> n/2 - sin 2nα / (2 sin 2α)
/// ```
///
/// Each is fixed only up to a function of period 2 in `n`, so differences
/// agree with [`antiderivative_series`] between sites of equal parity.
pub fn closed_form_antiderivative(kind: ClosedFormKind, alpha: f64, n: i64) -> Result<f64> {
    let n = n as f64;
    match kind {
        ClosedFormKind::One => Ok(n),
        ClosedFormKind::Cos => Ok((n * alpha).sin() / nonsingular_sine(alpha)?),
        ClosedFormKind::Sin => Ok(-(n * alpha).cos() / nonsingular_sine(alpha)?),
        ClosedFormKind::SinSquared => {
            let s2 = nonsingular_sine(2.0 * alpha)?;
            Ok(0.5 * n - 0.5 * (2.0 * n * alpha).sin() / s2)
        }
    }
}
