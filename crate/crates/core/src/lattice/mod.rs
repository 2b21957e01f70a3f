//! Bi-step lattices and Manhattan sets.
//!
//! A bi-step lattice `L_b` has spacing `λ_i` along every dimension where
//! `b_i = 1` and `k_i λ_i` elsewhere. A Manhattan set is the union of the
//! lattices named by a [`Collection`].

mod bistep;
mod collection;
mod params;

pub use bistep::{bistep_algebra, BiStep, BiStepAlgebra, MAX_DIMS};
pub use collection::{lattice_contains, lattice_intersection, parse_members, v_class, Collection};
pub use params::ManhattanParams;
