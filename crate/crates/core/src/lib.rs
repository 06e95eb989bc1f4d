//! Lin-Kernighan style tour improvement for the symmetric traveling
//! salesman problem.
//!
//! The search grows alternating paths of deleted and added edges from each
//! starting vertex and closes them into improving k-opt moves. Whether an
//! added edge may extend the path is decided by a pluggable
//! [`GainPolicy`]: the classic positive gain criterion, a homogeneous
//! relaxation that tolerates one non-positive partial gain at a time, or a
//! tilted variant that further restricts the relaxation at move-depth
//! boundaries and carries the gain sign across moves.
//!
//! All arithmetic on costs and gains is exact integer arithmetic. The core
//! types are generic over the integer width through [`Weight`]; the aliases
//! below fix the common `i64` instantiation.

pub mod candidates;
pub mod engine;
pub mod gain;
pub mod instance;
pub mod oracle;
pub mod tour;
pub mod weight;

pub use candidates::{CandidateKind, CandidateSets};
pub use engine::{AlternatingPath, Engine, SearchConfig, SearchStats};
pub use gain::{GainKind, GainLedger, GainPolicy, GainState};
pub use instance::{Instance, OptimaRegistry, WeightKind};
pub use oracle::OracleResult;
pub use tour::{ExchangeMove, Tour};
pub use weight::Weight;

/// Vertex index, `0..n`. TSPLIB files number vertices from 1; the parser
/// shifts them down by one.
pub type Vertex = usize;

/// Default cost scalar.
pub type Cost = i64;

pub type Instance64 = Instance<i64>;
pub type Tour64 = Tour<i64>;
pub type ExchangeMove64 = ExchangeMove<i64>;
pub type Engine64<'a> = Engine<'a, i64>;
pub type OracleResult64 = OracleResult<i64>;

pub type Instance32 = Instance<i32>;
pub type Tour32 = Tour<i32>;
