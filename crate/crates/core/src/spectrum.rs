//! Eigenvalues and eigenfunctions of the discrete infinite square well.
//!
//! The interior problem on sites `1..N-1` has exactly `N - 1` modes,
//! `E = eps0 sin^2(pi n_E / N)` with `eps0 = hbar^2 / (2 m* a^2)`, and
//! eigenfunctions `sqrt(2/L) sin(pi n_E n / N)`.

use std::f64::consts::PI;

use ndarray::Array2;

use crate::calculus::{LatticeFunction, LatticeSpec};
use crate::eigen;
use crate::error::{require_positive, Error, Result};

/// Reduced Planck constant used for SI runs, J s.
pub const SI_HBAR: f64 = 1.054e-34;
/// Boltzmann constant used for SI runs, J/K.
pub const SI_BOLTZMANN: f64 = 1.38e-23;
/// Free-electron mass used for SI runs, kg.
pub const SI_ELECTRON_MASS: f64 = 9.1e-31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitMode {
    Natural,
    Si,
}

impl UnitMode {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitMode::Natural => "natural",
            UnitMode::Si => "SI",
        }
    }
}

/// Effective mass and Planck constant of the trapped particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    m_star: f64,
    hbar: f64,
    unit_mode: UnitMode,
}

impl ParticleSpec {
    /// `m* = hbar = 1`.
    pub fn natural() -> Self {
        Self {
            m_star: 1.0,
            hbar: 1.0,
            unit_mode: UnitMode::Natural,
        }
    }

    pub fn si(m_star: f64, hbar: f64) -> Result<Self> {
        require_positive("m_star", m_star)?;
        require_positive("hbar", hbar)?;
        Ok(Self {
            m_star,
            hbar,
            unit_mode: UnitMode::Si,
        })
    }

    /// Free electron with the SI constants above.
    pub fn electron() -> Self {
        Self {
            m_star: SI_ELECTRON_MASS,
            hbar: SI_HBAR,
            unit_mode: UnitMode::Si,
        }
    }

    pub fn m_star(&self) -> f64 {
        self.m_star
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn unit_mode(&self) -> UnitMode {
        self.unit_mode
    }

    /// Lattice energy scale `eps0 = hbar^2 / (2 m* a^2)`.
    pub fn energy_scale(&self, lattice: &LatticeSpec) -> f64 {
        let a = lattice.spacing();
        self.hbar * self.hbar / (2.0 * self.m_star * a * a)
    }

    /// Lowest continuum level of a well of width `width`, `hbar^2 pi^2 / (2 m* L^2)`.
    pub fn continuum_scale(&self, width: f64) -> f64 {
        self.hbar * self.hbar * PI * PI / (2.0 * self.m_star * width * width)
    }
}

/// One eigenmode of the discrete well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMode {
    pub n_e: usize,
    /// Dimensionless energy `sin^2(pi n_E / N)`.
    pub e_tilde: f64,
    pub energy: f64,
    /// Amplitude making the mode unit-normalized under [`crate::calculus::definite_integral`].
    pub norm_const: f64,
}

/// All `N - 1` modes of a lattice, ordered by `n_E`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lattice: LatticeSpec,
    particle: ParticleSpec,
    modes: Vec<SpectralMode>,
}

fn e_tilde(n_e: usize, spacings: usize) -> f64 {
    (PI * n_e as f64 / spacings as f64).sin().powi(2)
}

fn check_mode(n_e: usize, lattice: &LatticeSpec) -> Result<()> {
    let big_n = lattice.spacings();
    if n_e == 0 || n_e >= big_n {
        return Err(Error::invalid(
            "n_E",
            format!("mode index must lie in 1..={}, got {n_e}", big_n - 1),
        ));
    }
    Ok(())
}

impl Spectrum {
    pub fn new(lattice: LatticeSpec, particle: ParticleSpec) -> Self {
        let big_n = lattice.spacings();
        let eps0 = particle.energy_scale(&lattice);
        let width = lattice.width();
        let modes = (1..big_n)
            .map(|n_e| {
                let et = e_tilde(n_e, big_n);
                // the middle mode of an even lattice has |Psi|^2 = 1 on every odd site,
                // so its odd-site quadrature is aN instead of aN/2
                let norm_const = if 2 * n_e == big_n {
                    (1.0 / width).sqrt()
                } else {
                    (2.0 / width).sqrt()
                };
                SpectralMode {
                    n_e,
                    e_tilde: et,
                    energy: eps0 * et,
                    norm_const,
                }
            })
            .collect();
        Self {
            lattice,
            particle,
            modes,
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn particle(&self) -> &ParticleSpec {
        &self.particle
    }

    pub fn modes(&self) -> &[SpectralMode] {
        &self.modes
    }

    /// Mode with principal quantum number `n_e`.
    pub fn mode(&self, n_e: usize) -> Result<&SpectralMode> {
        check_mode(n_e, &self.lattice)?;
        Ok(&self.modes[n_e - 1])
    }

    pub fn energy_scale(&self) -> f64 {
        self.particle.energy_scale(&self.lattice)
    }
}

/// `eps0 sin^2(pi n_E / N)`.
pub fn energy_discrete(n_e: usize, lattice: &LatticeSpec, particle: &ParticleSpec) -> Result<f64> {
    check_mode(n_e, lattice)?;
    Ok(particle.energy_scale(lattice) * e_tilde(n_e, lattice.spacings()))
}

/// Parabolic continuum level `hbar^2 pi^2 n_E^2 / (2 m* L^2)`.
pub fn energy_continuum(n_e: usize, width: f64, particle: &ParticleSpec) -> Result<f64> {
    if n_e == 0 {
        return Err(Error::invalid("n_E", "continuum levels start at n_E = 1"));
    }
    require_positive("L", width)?;
    Ok(particle.continuum_scale(width) * (n_e * n_e) as f64)
}

/// Sampled eigenfunction `norm_const * sin(pi n_E n / N)` for `n = 0..=N`.
pub fn eigenfunction(mode: &SpectralMode, lattice: &LatticeSpec) -> LatticeFunction {
    let big_n = lattice.spacings();
    LatticeFunction::from_fn(lattice, |n| {
        if n == 0 || n == big_n {
            0.0
        } else {
            mode.norm_const * (PI * (mode.n_e * n) as f64 / big_n as f64).sin()
        }
    })
}

/// Dimensionless Hamiltonian on the interior sites `1..N-1` (row `i` is site `i + 1`).
///
/// Diagonal 1/2, coupling -1/4 between sites two apart. The ghost sites
/// `-1` and `N+1` are closed by odd reflection, adding 1/4 to the first and
/// last diagonal entries. Its eigenvalues are `sin^2(pi n_E / N)`.
pub fn build_hamiltonian_matrix(lattice: &LatticeSpec) -> Array2<f64> {
    let dim = lattice.spacings() - 1;
    let mut m = Array2::<f64>::zeros((dim, dim));
    for i in 0..dim {
        m[[i, i]] += 0.5;
        if i + 2 < dim {
            m[[i, i + 2]] = -0.25;
            m[[i + 2, i]] = -0.25;
        }
    }
    m[[0, 0]] += 0.25;
    m[[dim - 1, dim - 1]] += 0.25;
    m
}

/// Ascending eigenvalues of a symmetric matrix (cyclic Jacobi).
pub fn numeric_spectrum(m: &Array2<f64>) -> Result<Vec<f64>> {
    eigen::symmetric_eigenvalues(m)
}

/// `|E_discrete / E_continuum - 1| = 1 - (sin x / x)^2` with `x = pi n_E / N`.
pub fn continuum_limit_error(n_e: usize, spacings: usize) -> Result<f64> {
    if n_e == 0 || n_e >= spacings {
        return Err(Error::invalid(
            "n_E",
            format!("mode index must lie in 1..{spacings}, got {n_e}"),
        ));
    }
    let x = PI * n_e as f64 / spacings as f64;
    let sinc = x.sin() / x;
    Ok(1.0 - sinc * sinc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{centered_diff2, definite_integral};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn natural(n: usize) -> (LatticeSpec, ParticleSpec) {
        (LatticeSpec::new(n, 1.0).unwrap(), ParticleSpec::natural())
    }

    #[test]
    fn small_lattice_energies() {
        let (l2, p) = natural(2);
        assert_abs_diff_eq!(energy_discrete(1, &l2, &p).unwrap(), 0.5, epsilon = 1e-15);
        let (l4, _) = natural(4);
        let eps0 = p.energy_scale(&l4);
        assert_abs_diff_eq!(
            energy_discrete(1, &l4, &p).unwrap(),
            0.5 * eps0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn fine_lattice_ground_state() {
        let l = LatticeSpec::with_width(1000, 1.0).unwrap();
        let p = ParticleSpec::natural();
        let eps0 = p.energy_scale(&l);
        let e = energy_discrete(1, &l, &p).unwrap();
        // sin^2(pi/1000) evaluated independently
        assert_relative_eq!(e / eps0, 9.869571931439897e-6, max_relative = 1e-12);
        let ec = energy_continuum(1, 1.0, &p).unwrap();
        let rel = (e / ec - 1.0).abs();
        assert!(rel < 3.3e-6, "{rel}");
        assert!(rel > 3.2e-6, "{rel}");
    }

    #[test]
    fn energy_index_validation() {
        let (l, p) = natural(6);
        assert!(energy_discrete(0, &l, &p).is_err());
        assert!(energy_discrete(6, &l, &p).is_err());
        assert!(energy_discrete(5, &l, &p).is_ok());
        assert!(energy_continuum(0, 1.0, &p).is_err());
    }

    #[test]
    fn continuum_levels() {
        let p = ParticleSpec::natural();
        let e1 = energy_continuum(1, 1.0, &p).unwrap();
        assert_abs_diff_eq!(e1, 4.934802200544679, epsilon = 1e-12);
        assert_abs_diff_eq!(
            energy_continuum(2, 1.0, &p).unwrap(),
            4.0 * e1,
            epsilon = 1e-12
        );
    }

    #[test]
    fn degeneracy_and_band_bounds() {
        for big_n in [5usize, 8, 33, 100] {
            let l = LatticeSpec::with_width(big_n, 2.0).unwrap();
            let p = ParticleSpec::natural();
            let s = Spectrum::new(l, p);
            let eps0 = s.energy_scale();
            assert_eq!(s.modes().len(), big_n - 1);
            for m in s.modes() {
                let mirror = s.mode(big_n - m.n_e).unwrap();
                assert_abs_diff_eq!(m.energy, mirror.energy, epsilon = 1e-15 * eps0);
                assert!(m.e_tilde > 0.0 && m.e_tilde <= 1.0);
                assert!(m.energy <= eps0 * (1.0 + 1e-15));
                let ec = energy_continuum(m.n_e, l.width(), &p).unwrap();
                assert!(m.energy <= ec * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn eigenfunction_values_and_boundaries() {
        let l = LatticeSpec::new(2, 0.5).unwrap();
        let s = Spectrum::new(l, ParticleSpec::natural());
        let psi = eigenfunction(s.mode(1).unwrap(), &l);
        // N = 2 has a single mode, the middle one, with amplitude 1/sqrt(L)
        assert_abs_diff_eq!(psi.at(1), (1.0 / l.width()).sqrt(), epsilon = 1e-15);

        let l = LatticeSpec::new(9, 0.5).unwrap();
        let s = Spectrum::new(l, ParticleSpec::natural());
        for m in s.modes() {
            let psi = eigenfunction(m, &l);
            assert_eq!(psi.at(0), 0.0);
            assert_eq!(psi.at(9), 0.0);
        }
        let psi = eigenfunction(s.mode(1).unwrap(), &l);
        let expected = (2.0 / l.width()).sqrt() * (PI * 3.0 / 9.0).sin();
        assert_abs_diff_eq!(psi.at(3), expected, epsilon = 1e-15);
    }

    #[test]
    fn eigenfunctions_are_normalized() {
        for big_n in [2usize, 3, 4, 7, 10, 64, 65] {
            let l = LatticeSpec::with_width(big_n, 3.0).unwrap();
            let s = Spectrum::new(l, ParticleSpec::natural());
            for m in s.modes() {
                let psi = eigenfunction(m, &l);
                let sq = psi.product(&psi).unwrap();
                let norm = definite_integral(&sq, 0, big_n as i64, l.spacing()).unwrap();
                assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn schrodinger_residual() {
        for big_n in [6usize, 11, 40] {
            let l = LatticeSpec::new(big_n, 0.7).unwrap();
            let p = ParticleSpec::si(2.0, 1.3).unwrap();
            let s = Spectrum::new(l, p);
            for m in s.modes() {
                let psi = eigenfunction(m, &l);
                let peak = psi.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                for n in 2..=(big_n as i64 - 2) {
                    let lhs = centered_diff2(&psi, n, l.spacing()).unwrap();
                    let rhs = -2.0 * p.m_star() * m.energy / (p.hbar() * p.hbar()) * psi.at(n);
                    assert_abs_diff_eq!(
                        lhs,
                        rhs,
                        epsilon = 1e-12 * peak / (l.spacing() * l.spacing())
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonality_under_odd_site_quadrature() {
        for big_n in [8usize, 9, 16, 21] {
            let l = LatticeSpec::new(big_n, 1.0).unwrap();
            let s = Spectrum::new(l, ParticleSpec::natural());
            for j in s.modes() {
                for k in s.modes() {
                    if j.n_e == k.n_e {
                        continue;
                    }
                    let overlap = eigenfunction(j, &l).product(&eigenfunction(k, &l)).unwrap();
                    let value = definite_integral(&overlap, 0, big_n as i64, 1.0).unwrap();
                    if j.n_e + k.n_e == big_n {
                        // the mirror pair coincides on odd sites
                        assert!(value.abs() > 0.5, "N={big_n} ({}, {})", j.n_e, k.n_e);
                    } else {
                        assert_abs_diff_eq!(value, 0.0, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn hamiltonian_for_four_spacings() {
        let m = build_hamiltonian_matrix(&LatticeSpec::new(4, 1.0).unwrap());
        let expected = ndarray::array![[0.75, 0.0, -0.25], [0.0, 0.5, 0.0], [-0.25, 0.0, 0.75]];
        assert_eq!(m, expected);
        let ev = numeric_spectrum(&m).unwrap();
        assert_abs_diff_eq!(ev[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[2], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hamiltonian_for_two_spacings() {
        let m = build_hamiltonian_matrix(&LatticeSpec::new(2, 1.0).unwrap());
        assert_eq!(m.dim(), (1, 1));
        assert_eq!(numeric_spectrum(&m).unwrap(), vec![1.0]);
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        for big_n in [2usize, 3, 5, 50, 333, 1000] {
            let m = build_hamiltonian_matrix(&LatticeSpec::new(big_n, 1.0).unwrap());
            assert_eq!(eigen::max_asymmetry(&m), 0.0);
        }
    }

    #[test]
    fn numeric_spectrum_matches_closed_form() {
        let big_n = 101;
        let m = build_hamiltonian_matrix(&LatticeSpec::new(big_n, 1.0).unwrap());
        let numeric = numeric_spectrum(&m).unwrap();
        let mut exact: Vec<f64> = (1..big_n).map(|j| e_tilde(j, big_n)).collect();
        exact.sort_by(f64::total_cmp);
        for (x, y) in numeric.iter().zip(&exact) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-10);
        }
    }

    #[test]
    fn continuum_error_examples() {
        let e = continuum_limit_error(1, 100).unwrap();
        let taylor = (PI / 100.0).powi(2) / 3.0;
        assert!(((e - taylor) / taylor).abs() < 1e-3);
        assert_abs_diff_eq!(e, 3.2898e-4, epsilon = 1e-7);
        let e2 = continuum_limit_error(1, 200).unwrap();
        assert!((e / e2 - 4.0).abs() < 0.01);
        assert!(continuum_limit_error(1, 1_000_000).unwrap() < 1e-11);
        assert!(continuum_limit_error(0, 10).is_err());
        assert!(continuum_limit_error(10, 10).is_err());
    }
}
