//! Multi-indices, the canonical polynomial mapping and its lifting, finitely
//! supported lattice functions and their (vector-valued) ℓ^p norms.

mod function;
mod mapping;
mod multiindex;

pub use function::{square_function, FunctionFamily, LatticeFunction, Point};
pub use mapping::{lift, LinearMap, MappingSpec, PolynomialMapping, Term};
pub(crate) use multiindex::monomial_mod;
pub use multiindex::{
    canonical_eval, canonical_eval_i64, canonical_eval_with_limit, dilate, dilated_sup_norm, DegreeMatrix,
    MultiIndexSet, DEFAULT_MAGNITUDE_LIMIT,
};
