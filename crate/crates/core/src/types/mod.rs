//! Shimura types, their monomial crystals and the p-divisible groups they
//! determine.

pub mod count;
pub mod decomposition;
pub mod monomial;
pub mod ordinary;
pub mod spec;
pub mod tensor;

pub use count::{count_nu, count_nu_formula, count_nu_oracle};
pub use decomposition::{duality_exponents, minimal_decomposition, OrbitDecomposition, OrbitPiece};
pub use monomial::{
    circular_decomposition, CircularIndecomposable, MonomialCrystal, Orbit, PDivTypeMultiset,
};
pub use ordinary::{gl_block_adjoint_polygon, sh_ordinary_verdict, OrdinaryVerdict};
pub use spec::{validate, ShimuraType, ShimuraTypeSpec};
pub use tensor::{graded_p_rank, tensor_crystal, GradedFactor};
