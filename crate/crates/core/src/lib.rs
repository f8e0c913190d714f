//! Precedent-based reasoning over factor-based legal cases.
//!
//! Cases are sets of factors. An issue ADF decides them, the issues that
//! mattered are spotted from the factors on each side, and each issue is
//! justified by a preference drawn from precedent. Explanations come out in
//! IRAC form and can be probed further with a SO?/WHY? dialogue.

pub mod adf;
pub mod argument;
pub mod error;
pub mod explain;
pub mod magnitude;
pub mod model;
pub mod precedent;

pub use error::{Error, Result};
pub use model::{Case, CaseBase, FactorCatalogue, FactorId, FactorSet, Outcome, Side};
