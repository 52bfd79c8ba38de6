//! Non-Hermitian dynamics of a lossy two-level Rabi system whose
//! dissipation is switched on and off as a square wave.
//!
//! The crate computes, in closed form wherever one exists:
//!
//! * the one-period (monodromy) propagator and its eigenvalues,
//! * Floquet quasienergies, decay rates and the symmetry-breaking
//!   degree `mu` ([`floquet`]),
//! * the static-dissipation spectrum, its strong-loss asymptotics and
//!   the pulsed-measurement decay rate it is equivalent to
//!   ([`static_analysis`]),
//! * piecewise-exact time propagation with lifetime extraction
//!   ([`evolve`]),
//! * frequency sweeps, phase diagrams, exceptional-point/resonance
//!   location and Zeno vs. anti-Zeno segmentation ([`sweep`]).
//!
//! All rates are in the same frequency units as the coupling `J0`;
//! nothing in the library is stochastic, so identical inputs produce
//! identical outputs.

pub mod error;
pub mod evolve;
pub mod floquet;
pub mod model;
pub mod numerics;
pub mod static_analysis;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use evolve::{fit_lifetime, propagate, rk4_reference, LifetimeFit, StateVec, Trajectory};
pub use floquet::{
    floquet_aux, floquet_spectrum, lambda_eigenvalues, monodromy_numeric, symmetry_discriminant,
    FloquetAux, FloquetSpectrum, Phase,
};
pub use model::{build_h_l, build_h_pt, gamma_of_t, DriveProtocol, StaticParams, SystemParams};
pub use numerics::{eig2, mat2_exp, Eig2, Mat2, C64};
pub use static_analysis::{
    measurement_decay_rate, projective_limit_rate, static_asymptotics, static_spectrum,
    MeasurementParams, StaticSpectrum,
};
pub use sweep::{
    classify_zeno, locate_features, omega_sweep, phase_diagram, Feature, FeatureKind, OmegaSweep,
    PhaseDiagram, PtbBlock, RegimeSegmentation, Segment, ZenoLabel,
};
