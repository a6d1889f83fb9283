//! Photon-statistics criteria for two-mode multiwave-mixing processes.
//!
//! The crate evaluates higher-order antibunching `d(l)` and higher-order
//! sub-Poissonian statistics `D(l-1)` from factorial moments, builds the
//! exchange Hamiltonian `g (a^dag^m b^n + h.c.)` on a truncated two-mode
//! Fock basis, evolves states exactly, and provides the second-order
//! short-time closed forms for five-wave mixing and third-harmonic
//! generation so they can be checked against the exact evolution.

pub mod closed_forms;
pub mod criteria;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod numeric;
pub mod oracles;
pub mod process;
pub mod stirling;
pub mod study;
pub mod sweep;

pub use closed_forms::{Criterion, ShortTimeInput};
pub use criteria::{hoa_d, hosps_d, hosps_d2_special, report, CriterionReport};
pub use error::{Error, Result};
pub use evolution::{evolve, EvolutionMethod, EvolutionPlan, Trajectory};
pub use fock::{
    factorial_moments, make_coherent_vacuum, make_fock, number_distribution, FactorialMoments,
    FockCutoffs, Mode, TwoModeState,
};
pub use process::{build_hamiltonian, conserved_charge, HamiltonianMatrix, Preset, ProcessSpec};
pub use stirling::{stirling2, StirlingTable};

pub use num_complex::Complex64;
