//! Sampling on Manhattan sets (unions of bi-step rectangular lattices) and
//! exact reconstruction of images bandlimited to the matching Manhattan
//! frequency region.
//!
//! The usual pipeline is [`reconstruct::bandlimit`] →
//! [`sampler::extract_samples`] → [`reconstruct::reconstruct`].

pub mod error;
pub mod formats;
pub mod freq;
pub mod grid;
pub mod lattice;
pub mod oracle;
pub mod reconstruct;
pub mod sampler;

pub use error::{Error, Result};
pub use freq::{AtomSpec, FreqMask};
pub use grid::{Domain, Grid};
pub use lattice::{BiStep, Collection, ManhattanParams};
pub use sampler::{Sample, SampleSet};
