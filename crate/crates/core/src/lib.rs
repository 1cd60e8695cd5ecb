//! Symbolic differential algebra for constructing and verifying
//! conservation laws of PDE systems by the method of nonlinear
//! self-adjointness, with the Kadomtsev-Petviashvili system as the
//! built-in corpus.

pub mod context;
pub mod error;
pub mod multiindex;
pub mod poly;

pub mod parser;

pub mod conslaw;
pub mod corpus;
pub mod selfadjoint;
pub mod symmetry;

pub use context::{Ctx, IndexConvention};
pub use error::{DiffAlgError, Result};
pub use multiindex::MultiIndex;
pub use poly::{DiffPoly, JetVar, Rat, SubstitutionRule};
