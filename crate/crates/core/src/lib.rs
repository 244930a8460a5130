//! h1jump-core: exact computer algebra for rank-three projective bundles
//! over the projective line.
//!
//! The crate builds a one-parameter family of vector bundles on P^1 from an
//! extension cocycle, cuts hypersurfaces in the associated projective
//! bundles, and certifies — with exact rational arithmetic throughout — the
//! splitting types, cohomology dimensions, smoothness and reducedness
//! witnesses, and the jump of h^1 of the structure sheaf at the special
//! parameter.

pub mod algebra;
pub mod bundle;
pub mod cohomology;
pub mod cox;
pub mod pipeline;
pub mod smooth;

pub use algebra::{LaurentPoly, MPoly, Rat, Var};
