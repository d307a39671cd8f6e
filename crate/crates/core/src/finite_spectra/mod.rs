//! Finite restrictions A_m, eigenvalue counting, normalized spectral
//! density functions F_m, jumps D_m and the interior operators A′_m.

pub mod boundary;
pub mod counting;
pub mod density;
pub mod dimension;
pub mod inertia;
pub mod interior;
pub mod matrix;

pub use boundary::{assemble_dirichlet, assemble_neumann, boundary_conditions, BoundaryCondition};
pub use counting::{count_leq, counting_backends, Count, CountingBackend};
pub use density::{clusters, jump_dim, spectral_density, Jump, WindowSpectrum};
pub use dimension::subspace_dim_xk;
pub use inertia::{inertia, Inertia};
pub use interior::{interior_restriction, rect_kernel_dim, KernelSplit, RectangularRestriction};
pub use matrix::{FiniteHermitian, DENSE_LIMIT};
