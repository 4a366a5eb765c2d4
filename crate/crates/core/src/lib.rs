//! Cancellation-polynomial degree analysis for Gosper's algorithm on
//! integer-rooted inputs.
//!
//! The degree `beta` of the cancellation polynomial is computed three
//! independent ways and cross-checked:
//!
//! * [`walk::compute_walk`] — the random-walk representation (linear time),
//! * [`matching::stack_matching`] — the LIFO stack construction of a
//!   minimum-weight admissible ball matching,
//! * [`matching::brute_force_beta`] — exhaustive enumeration over all
//!   admissible matchings (small instances only).
//!
//! [`cancel`] builds the actual polynomial triple `(a, b, c)` from a matching
//! and verifies the defining identity exactly. [`samplers`] draws root
//! configurations from the urn and conditioned-IID input models, [`mc`] runs
//! seeded Monte Carlo experiments against the known asymptotic constants, and
//! [`brownian`] does the same for the continuum functional on discretized
//! Brownian paths.

pub mod brownian;
pub mod cancel;
pub mod matching;
pub mod mc;
pub mod rng;
pub mod samplers;
pub mod stats;
pub mod walk;

pub use cancel::{CancellationTriple, IntRootPoly};
pub use matching::Matching;
pub use samplers::{CountDistribution, Model};
pub use walk::{RootConfig, WalkStats};
