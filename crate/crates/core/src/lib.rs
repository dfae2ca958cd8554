//! Itinerary spaces of overlapping two-branch expanding interval maps.
//!
//! A [`MapSystem`] has branches `W₀: [0, a] → [0, 1]` and
//! `W₁: [1 − b, 1] → [0, 1]` with `a + b > 1`, and a threshold `ρ` in the
//! overlap that decides which branch applies. The crate computes
//! itineraries, finite-depth address spaces (three independent ways), the
//! projection back to `[0, 1]`, the threshold at which the address space is
//! invariant under the bit flip, and attractor/repeller structure of the
//! associated relation on words.
//!
//! Every routine is generic over [`Real`]: `BigRational` gives exact results
//! for affine branches, `f64` handles perturbed branches with explicit
//! reliability bookkeeping. Batch entry points run on rayon when the
//! `parallel` feature is enabled (default) and sequentially otherwise.

pub mod address_space;
pub mod config;
pub mod emit;
pub mod error;
pub mod map_model;
pub mod par;
pub mod projection;
pub mod real;
pub mod relation;
pub mod symbolic;
pub mod symmetry;

pub use address_space::{CriticalPair, OmegaMode, PrefixSet};
pub use config::{parse_system, AnySystem};
pub use error::{Error, ModelError, ReliabilityError, RelationError, SolveError};
pub use map_model::{BranchSpec, MapSystem, Variant};
pub use real::Real;
pub use relation::{ConleyReport, FiniteRelation, NodeSet};
pub use symbolic::{ItineraryResult, Word};
pub use symmetry::{solve_symmetric, verify_symmetry, SolveOptions, SymmetrySolution};
