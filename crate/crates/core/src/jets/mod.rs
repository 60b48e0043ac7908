//! Truncated Taylor jets, polynomial scalar fields and the flat contact frame.

mod field;
mod frame;
mod jet;
mod layout;
mod linalg;

pub use field::{FrameDerivativeField, Poly1, Polynomial, ScalarField};
pub use frame::FlatFrame;
pub use jet::{sum_jets, Jet};
pub use layout::{Layout, MAX_ORDER};
pub use linalg::{jet_matmul, jet_matrix_inverse, jet_matrix_values, JetMatrix};
