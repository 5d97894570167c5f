//! Thermometry of a one-dimensional Bose gas with a heavy mobile impurity.
//!
//! The impurity's momentum relaxes under a linear friction law
//! `F = -gamma P T^n`; its distribution stays Gaussian and carries
//! information about the bath temperature. The crate provides
//!
//! * [`params`] and [`friction`]: physical parameters, friction regimes,
//!   relaxation time, diffusion, and the quasiparticle friction integral;
//! * [`propagator`]: four independent ways to evolve the momentum
//!   distribution, plus multi-bath composition;
//! * [`fisher`]: temperature Fisher information (numeric, closed forms,
//!   asymptotic limits) and the two-temperature Fisher matrix;
//! * [`estimators`]: moment-based temperature estimators, their predicted
//!   errors, and Monte Carlo checks against the Cramér–Rao bound.

pub mod error;
pub mod estimators;
pub mod fisher;
pub mod fit;
pub mod friction;
pub mod params;
pub mod propagator;
pub mod quadrature;
pub mod stats;

pub use error::{Result, ThermoError};
pub use friction::{FrictionLaw, ReflectionModel};
pub use params::{PhysicalParams, Regime};
pub use propagator::{BathStage, GaussianMomentumState, GridDensity, MomentumGrid};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
