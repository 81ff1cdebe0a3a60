pub mod bigint_serde;
pub mod cli;
pub mod colimit;
pub mod error;
pub mod hk;
pub mod homology;
pub mod io;
pub mod ktheory;
pub mod linalg;
pub mod models;
pub mod options;
pub mod span;

pub use error::{Error, Result};
