//! Exact computations in the twisted modified Ringel–Hall algebra of Z/2-graded
//! complexes over nilpotent quiver representations, the twisted extended Hall
//! algebra, and the Drinfeld double cross relation that links them.

pub mod double;
pub mod error;
pub mod exactnum;
pub mod fqlinalg;
pub mod heredcat;
pub mod mrh;
pub mod ztwo;

pub use error::{Error, Result};
pub use exactnum::Scalar;
