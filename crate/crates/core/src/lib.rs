//! Contact Schwarzian derivatives of contactomorphisms of the flat contact
//! manifold `ℝ^{2n−1}`, the contact Hessian, contact projective curvature and
//! the three-dimensional contact path reduction.
//!
//! Everything is generic over the scalar type; the aliases at the bottom fix
//! `f64`, which is what the command-line tool uses.

pub mod algebra;
pub mod corpus;
pub mod curvature;
pub mod error;
pub mod flat_model;
pub mod hessian;
pub mod jets;
pub mod matrix;
pub mod pathgeom;
pub mod scalar;
pub mod schwarzian;
pub mod tensor;

pub use algebra::{Dimensions, IndexDirection, SpBlock, SpElement, SymplecticForm};
pub use error::{Error, Result};
pub use flat_model::{ContactMap, MapExpr};
pub use jets::{Jet, Poly1, Polynomial, ScalarField};
pub use matrix::Matrix;
pub use scalar::{Field, Real};
pub use tensor::Tensor;

pub type Jet64 = Jet<f64>;
pub type Form64 = SymplecticForm<f64>;
pub type ContactMap64 = ContactMap<f64>;
pub type Matrix64 = Matrix<f64>;
