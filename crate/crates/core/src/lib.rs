//! Non-Hausdorff manifolds as adjunction systems of finite cell complexes.

pub mod adjunction;
pub mod cochain;
pub mod cohomology;
pub mod document;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod flavor;
pub mod linalg;
pub mod rational;
pub mod subdivide;
pub mod validation;

pub use error::{Error, Result};
