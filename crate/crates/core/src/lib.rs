//! Higher-order photon correlation functions `g(k)(0)` and the lower bounds they
//! imply on the projection of a light field onto the sub-`k` photon space.
//!
//! The crate is organised around a single exact representation,
//! [`PhotonStatistics`], from which correlation functions and the sub-/super-`k`
//! split are computed. Given only a measured `g(k)` (and optionally the vacuum
//! fraction `p0`), the [`bounds`] module solves the implicit bound equation for
//! the largest super-`k` weight `Q_max` and derives the remaining bounds,
//! including the large-`k` Lambert-W limit.
//!
//! ```
//! use gkbound::{bounds, states};
//!
//! let s = states::two_point(2, 0.5).unwrap();
//! let g = s.g_k(2).unwrap();
//! assert!((g - 4.0 / 9.0).abs() < 1e-15);
//! let p = bounds::p_min(2, g).unwrap();
//! assert!((p - 0.5).abs() < 1e-10);
//! ```

pub mod bounds;
pub mod error;
pub mod fock;
pub mod io;
pub mod lambert;
pub mod sim;
pub mod states;
pub mod stats;
pub mod sweep;

pub use bounds::BoundReport;
pub use error::{Error, Result};
pub use fock::MixtureExtremum;
pub use sim::{EstimateReport, SampleBatch};
pub use states::StateSpec;
pub use stats::{CorrelationReport, PhotonStatistics, SplitSummary};
pub use sweep::SweepTable;
