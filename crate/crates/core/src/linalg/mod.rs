//! Exact integer linear algebra.

mod abgroup;
mod homology;
pub(crate) mod lattice;
mod matrix;
pub(crate) mod scalar;
mod snf;

pub use abgroup::{
    cokernel_structure, image_order, image_structure, invert_iso, is_injective, is_isomorphism, is_surjective,
    map_kernel, preimage, reduce_map, AbGroup,
};
pub(crate) use abgroup::cokernel_of_columns;
pub use homology::{homology_at, Homology};
pub(crate) use homology::{homology_presented, Piece};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};
