//! Autler-Townes slow light in inhomogeneously broadened quantum-dot
//! ensembles: single-dot susceptibilities for the Ξ, V and Λ schemes,
//! ensemble averaging, group index and absorption, coupling-field
//! propagation, and named scenarios for batch runs.

pub mod config;
pub mod dressed;
pub mod ensemble;
pub mod error;
pub mod material;
pub mod optics;
pub mod parallel;
pub mod propagation;
pub mod quadrature;
pub mod scenario;
pub mod scheme;
pub mod structure;
pub mod susceptibility;
pub mod units;

pub use error::{Error, Result};
pub use scheme::{KernelFamily, SchemeKind};
