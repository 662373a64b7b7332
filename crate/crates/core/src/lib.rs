//! Solvers for balanced task coverage and network-constrained team formation.
//!
//! Experts hold skill sets, tasks require skill sets. An assignment maps
//! experts to tasks; it is scored by `λ·C(A) − Lmax(A)` where `C` sums each
//! task's covered-skill fraction and `Lmax` is the largest expert workload.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod model;
pub mod nthreshold;
pub mod oracle;
pub mod pruning;
pub mod rng;
pub mod search;
pub mod skills;
pub mod threshold;

pub use error::{Error, Result};
pub use model::{Assignment, Coverage, Expert, Fraction, Instance, InstanceBuilder, Task};
pub use search::{SearchMode, Solution, ThresholdTrace, TraceEntry};
pub use skills::{SkillId, SkillSet};
pub use threshold::{lambda_sweep, threshold_greedy, threshold_greedy_with, ChainMode, ThresholdOptions};
