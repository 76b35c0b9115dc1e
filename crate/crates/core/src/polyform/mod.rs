//! Exact polynomial exterior calculus on R³.

pub mod algebra;
pub mod form;
pub mod matrix_field;
pub mod poly;
pub mod scalar;

pub use algebra::*;
pub use form::{form_basis, monomial_forms, AltForm, PolyForm, ValueSpace};
pub use matrix_field::{MatrixField, VectorField};
pub use poly::Poly;
pub use scalar::{int, ratio, Rational, Scalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("value spaces {0:?} and {1:?} have no wedge pairing")]
    IncompatibleValues(ValueSpace, ValueSpace),
    #[error("forms live on R^{0} and R^{1}")]
    DimensionMismatch(usize, usize),
    #[error("form degree {0} exceeds the ambient dimension")]
    DegreeOverflow(usize),
    #[error("operation needs form degree at least 1")]
    DegreeUnderflow,
    #[error("integration needs a top-degree form, got degree {0} in dimension {1}")]
    NotTopDegree(usize, usize),
    #[error("expected values in {expected:?}, found {found:?}")]
    WrongValues { expected: ValueSpace, found: ValueSpace },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
}
