//! Harper operators and discrete magnetic Laplacians on graphs with a free
//! ℤ^d action: finite Dirichlet/Neumann restrictions along Følner windows,
//! their normalized eigenvalue counting functions, and independent
//! Bloch–Floquet ground truth for the integrated density of states.

pub mod error;
pub mod exhaustion;
pub mod experiments;
pub mod finite_spectra;
pub mod group_graph;
pub mod operators;
pub mod registry;
pub mod vn_oracle;

pub use error::{Error, Result};
