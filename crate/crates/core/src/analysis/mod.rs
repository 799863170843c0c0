//! Ground-truth oracles for small codes: exhaustive distance and weight
//! spectrum, erasure recoverability, a peeling decoder, the double-root
//! check, and Monte-Carlo erasure simulation.

pub mod distance;
pub mod erasure;
pub mod roots;
pub mod sim;

pub use distance::{
    exhaustive_distance, exhaustive_distance_with, sampled_distance, WeightSpectrum, DEFAULT_BUDGET,
};
pub use erasure::{erasure_recoverable, peel_decode, ErasureMask, PeelOutcome};
pub use roots::double_root_check;
pub use sim::{simulate, MaskModel, SimStats};
