//! Lattice calculus, spectrum, thermal density matrix and thermodynamics of a
//! particle in a one-dimensional infinite well discretized on `N + 1` sites.

pub mod bloch;
pub mod calculus;
pub mod eigen;
pub mod error;
pub mod series;
pub mod spectrum;
pub mod thermo;

pub use ndarray;

pub use bloch::{
    DensityMatrix, DensitySolver, DensitySolverRegistry, PropagationSolver, SolveOptions,
    SpectralSolver, ThermalState,
};
pub use calculus::{ClosedFormKind, LatticeFunction, LatticeSpec};
pub use error::{Error, Result};
pub use spectrum::{ParticleSpec, SpectralMode, Spectrum, UnitMode};
pub use thermo::{
    Cutoff, PartitionMethod, PartitionMethodKind, PartitionRegistry, PartitionResult, TwoLevelModel,
};
