//! Instances with limited witnesses: deciding them by brute force or
//! through a circuit family, and the witness-splitting, padding and
//! speed-up arithmetic built on top.

pub mod bound;
pub mod decide;
pub mod instance;
pub mod tradeoff;
pub mod transform;
pub mod universe;

pub use bound::{BoundError, BoundExpr};
pub use decide::{
    decide_bruteforce, decide_via_circuits, BruteforceReport, CircuitReport, DecideError,
    ViaCircuitsReport,
};
pub use instance::{DtiwiInstance, InstanceError, InstanceKind};
pub use tradeoff::{
    parse_rational, required_base_alpha, required_k_for_epsilon, speedup_schedule, tradeoff_table,
    ScheduleStep, TradeoffError, TradeoffRow,
};
pub use transform::{padding_transform, translation_transform, PadCodec, TransformError};
pub use universe::{UniverseError, UniverseTemplate};
