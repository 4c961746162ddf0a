//! Numerical side of the workbench: reference eigensolves, Newton refinement
//! with analytic Jacobians, total-degree homotopy continuation for full root
//! censuses, and the two scripted experiments.

mod eigen;
mod experiments;
mod homotopy;
mod newton;
mod report;

pub use eigen::{fci_eigensolve, Eigensystem};
pub use experiments::{
    accept_hamiltonian, build_ccs_hamiltonian, ccs_trajectory_experiment, census_hamiltonian_2in4,
    default_epsilon_grid, perturbation_experiment, random_hamiltonian_3in6,
    random_sector_hamiltonian, AcceptedInstance,
    Branch, BranchPoint, CcsTrajectory, PerturbationOutcome, PerturbationReport,
    PerturbationTrial,
};
pub use homotopy::{homotopy_solve_all, HomotopyConfig, RootCensus};
pub use newton::{classify_root, newton_solve, NewtonConfig, NewtonResult, RootClass, RootRecord};
pub use report::{config_hash, ExperimentReport};
