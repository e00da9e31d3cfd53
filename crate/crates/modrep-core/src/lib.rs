//! Exact computations with mod-p representations of `SL2(GF(q)((t)))`
//! and of its finite quotient `SL2(GF(q))`.

pub mod error;
pub mod fields;
pub mod finrep;
pub mod linalg;
pub mod cind;
pub mod smooth;
pub mod sl2;

pub use error::{Error, Result};
pub use fields::{GfElem, GfField, LSeries};
pub use sl2::{Mat2, Mat2k, Sl2};

/// Scalars of every representation space.
pub type Elem = GfElem;
/// Matrices over the residue field.
pub type Mat = linalg::Matrix<GfElem>;
