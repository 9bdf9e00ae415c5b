//! Exact packings from the real Clifford group acting on `R^(2^i)`.
//!
//! Orbit elements are projection matrices with dyadic rational entries, so
//! orbits are deduplicated and distances computed without rounding.

mod counting;
mod exact;
mod extraspecial;
mod orbit;

pub use counting::{clifford_order, gaussian_binomial, theorem3_count};
pub use exact::ExactMatrix;
pub use extraspecial::{
    bilin_form, quad_form, singular_subspace_count, x_gate, y_gate, ExtraspecialElement, F2Vec,
};
pub use orbit::{
    clifford_orbit, group_generators, hadamard, orbit, partial_hadamard, permutation_gate,
    seventy_generators, seventy_orbit, seventy_packing_eq55, seventy_seeds, theorem3_packing,
    ExactPacking, ExactSubspace, SEVENTY_CAP,
};
