//! Finite element spaces of polynomial differential forms on tetrahedral meshes.

pub mod basis;
pub mod functional;
pub mod reduced;
pub mod space;
pub mod spec;

pub use basis::{reference_basis_exact, reference_basis_f64, BasisScalar, LocalBasis};
pub use functional::Functional;
pub use reduced::{reduced_element, ReducedElement};
pub use space::{DofMap, ElementGeometry, FeSpace, LocalElement};
pub use spec::{Family, SpaceSpec};

use thiserror::Error;

use crate::mesh::MeshError;
use crate::polyform::FormError;

#[derive(Debug, Error)]
pub enum FeError {
    #[error("unsupported space: {0}")]
    Unsupported(String),
    #[error("{spec}: spanning set has dimension {space} but there are {dofs} degrees of freedom")]
    DimensionMismatch { spec: String, space: usize, dofs: usize },
    #[error("{0}: degrees of freedom are not unisolvent")]
    Singular(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Form(#[from] FormError),
}
