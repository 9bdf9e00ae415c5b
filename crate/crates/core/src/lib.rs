pub mod angles;
pub mod binocular;
pub mod bounds;
pub mod catalog;
pub mod clifford;
pub mod embedding;
pub mod error;
pub mod gpack;
pub mod numfmt;
pub mod optimizer;
pub mod packing;
pub mod subspace;
