//! Lévy-frailty Marshall–Olkin models: sampling, exact formulas and large-n limit laws.

pub mod asymptotics;
pub mod error;
pub mod lfmo;
pub mod montecarlo;
pub mod numeric;
pub mod rng;
pub mod stable;
pub mod subordinator;
pub mod verification;

pub use asymptotics::{LimitKind, LimitLaw};
pub use error::{LfmoError, Result};
pub use lfmo::{Dimension, ExactOptions, LfmoModel};
pub use montecarlo::{Ecdf, ExperimentConfig, KsResult};
pub use stable::{Convention, StableParams};
pub use subordinator::{LaplaceExponent, Moments, StepDistribution, SubordinatorModel, TailRegime};
