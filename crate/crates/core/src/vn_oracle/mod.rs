//! Independent ground truth for F and D: Bloch–Floquet quadrature for
//! periodic (rational-flux) operators, exact block spectra, and moment
//! cross-checks against walk traces.

pub mod fiber;
pub mod ids;
pub mod jumps;
pub mod moments;

pub use fiber::{fiber_hermitian_residual, midpoint_grid, MagneticCell};
pub use ids::{band_edges, ids_oracle, merge_bands, spectrum_intervals, BandSample, IdsEstimate, OracleIds};
pub use jumps::{jump_at, jump_oracle};
pub use moments::{moment_crosscheck, quadrature_moments, MomentReport, MomentRow};
