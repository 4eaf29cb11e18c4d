//! Reduced-order thermal models of battery cells built from Chebyshev
//! spectral-Galerkin expansions, with finite-difference and lumped
//! reference models and a mean-temperature controller.

pub mod cell;
pub mod chebyshev;
pub mod control;
pub mod error;
pub mod galerkin;
pub mod particular;
pub mod reference;
pub mod simulate;

pub use cell::{
    bernardi_q, cell_volume, resample_profile, BoundaryInput, CellSpec, CoolingConfig, Geometry, HeatProfile,
    ProfileKind, Scenario, Shape, Side, SideCooling,
};
pub use chebyshev::{build_basis, cheb_eval, gauss_quadrature, BasisSet, Quadrature, RobinCondition};
pub use control::{closed_loop_run, ControlSettings, ControlTrace, PiController};
pub use error::{Error, Result};
pub use galerkin::{assemble, project_initial_state, reassemble_cooling, steady_state, OutputSpec, ReducedModel};
pub use particular::{ParticularComponents, SideCoefficients};
pub use simulate::{
    compute_metrics, discretize, reconstruct_field, run, FieldGrid, RunOptions, SimResult, Stepper, ThermalMetrics,
};
