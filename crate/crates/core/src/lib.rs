//! Constraint-programming solver for kernel frequency assignment driven by
//! exact site availability.

pub mod model;
pub mod availability;
pub mod bench;
pub mod preprocess;
pub mod propagation;
pub mod search;

pub use model::{Frequency, FreqSet, Instance, InstanceBuilder, ModelError, PathId, SiteId, Spectrum};
