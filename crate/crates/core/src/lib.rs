//! Computations around CA groups: p-adic division algebras, Lie algebras,
//! modular representations and Frattini extensions.

pub mod corpus;
pub mod division;
pub mod error;
pub mod ext;
pub mod gring;
pub mod group;
pub mod lie;
pub mod linalg;
pub mod modrep;
pub mod padic;
pub mod report;

pub use error::{Error, Result};

/// Version tag carried by every JSON report and cache file.
pub const SCHEMA: &str = "cagroups/1";
