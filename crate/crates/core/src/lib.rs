//! Multimode organic-microcavity polariton spectra.
//!
//! The crate builds single-excitation non-Hermitian dynamical matrices for `N`
//! dipoles coupled to `M` discrete cavity modes, diagonalizes them exactly, and
//! evaluates the closed-form high-finesse (adiabatic) and low-finesse
//! (perturbative) corrections so they can be compared with the exact spectra.
//! An independent time-propagation oracle checks solver output and sign
//! conventions without sharing code with the solvers.
//!
//! Units: energies and rates in eV, times in eV⁻¹ (`ħ = 1`).

pub mod adiabatic;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod perturbative;
pub mod presets;
pub mod spectra;

pub use error::{Error, Result};
pub use model::{
    build_dicke_matrix, build_effective_two_level, build_full_matrix, BasisLabel, CavityMode, CavityModeSet,
    CouplingMap, DynamicalMatrix, EmitterEnsemble, Frame, SystemSpec,
};
pub use spectra::{BranchLabel, ComplexEigenpair, PolaritonBranch};

pub use num_complex::Complex64;
