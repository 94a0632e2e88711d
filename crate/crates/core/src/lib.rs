//! Incomplete Lauricella matrix functions.

pub mod error;
pub mod linalg;
pub mod params;
pub mod quad;
pub mod verify;
pub mod scalar;
pub mod series;
pub mod special;

pub use error::{Error, Result};
