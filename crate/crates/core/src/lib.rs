//! Joint antenna selection for a two-user downlink MIMO-NOMA link.
//!
//! The crate is organised bottom-up:
//!
//! * [`link_model`]: scenario parameters, NOMA/OMA achievable rates and Jain fairness.
//! * [`selection`]: exhaustive search, max-min-max (AIA), max-max-max (A3) and random
//!   antenna selection, with comparison/evaluation counting.
//! * [`specfun`]: negative-branch exponential integral, `chi`, signed binomial
//!   coefficients and the multinomial expansion used by the AIA closed form.
//! * [`analysis`]: order-statistic distributions of the selected strong gain and the
//!   high-SNR closed-form average sum-rates, plus a quadrature cross-check.
//! * [`montecarlo`]: reproducible, worker-count-invariant sweep engine.
//! * [`cli`]: config parsing, table emission and the built-in validation suite used by
//!   the `noma-as` binary.
//!
//! See the `examples/` directory of this crate for one runnable program per capability.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod link_model;
pub mod montecarlo;
pub mod quadrature;
pub mod selection;
pub mod specfun;

pub use error::{Error, Result};
pub use link_model::{ChannelRealization, GainMatrix, RateReport, ScenarioConfig, SystemParams};
pub use selection::{Algorithm, SelectionResult, User};
