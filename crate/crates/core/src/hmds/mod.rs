//! Metric MDS by stochastic gradient descent in hyperbolic, spherical and
//! Euclidean geometry, with a full-gradient baseline.

mod alpha;
mod schedule;
mod sgd;
pub mod space;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::graph::GraphError;
use crate::layout::{Geometry, Layout, LayoutError};

pub use alpha::{resolve_alpha, search_alpha, AlphaSearch};
pub use schedule::{Schedule, ScheduleKind, EPSILON};
pub use sgd::{
    gd_iteration, init_layout, pair_order, run_gd, run_gd_with_distances, run_mds, run_mds_with_distances,
    sgd_iteration, sgd_step_pair, DEFAULT_TOLERANCE, SMART_INIT_ITERATIONS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HmdsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("unknown {0}")]
    UnknownOption(String),
    #[error("step {t} is past the end of the schedule ({t_max})")]
    StepOutOfRange { t: usize, t_max: usize },
    #[error("smart initialization is only defined for hyperbolic layouts, not {0}")]
    SmartInit(Geometry),
    #[error("Euclidean MDS is scale invariant; there is no scale factor to search for")]
    EuclideanSearch,
    #[error("need at least one iteration")]
    NoIterations,
}

/// Per-pair weight `w_ij` in the stress sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightRule {
    Unit,
    /// `w_ij = d_ij⁻²`
    #[default]
    InverseSquare,
}

impl WeightRule {
    pub fn weight(self, d: f64) -> f64 {
        match self {
            WeightRule::Unit => 1.0,
            WeightRule::InverseSquare => 1.0 / (d * d),
        }
    }
}

/// How pairs are visited within one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShuffleMode {
    /// `C(n, 2)` independent uniform draws.
    Replacement,
    /// Nodes permuted once per iteration, pairs read off in order.
    IndexShuffle,
    /// Every pair exactly once, in a fresh random order.
    #[default]
    Reshuffle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    #[default]
    Random,
    /// A few Euclidean SGD iterations, projected into the hyperbolic plane.
    Smart,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum AlphaMode {
    Fixed(f64),
    /// `10/d_max` hyperbolic, `π/d_max` spherical, `1` Euclidean.
    #[default]
    Heuristic,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Run exactly the schedule's `t_max` iterations.
    FixedIterations,
    /// Keep going, at the final learning rate once the schedule is spent,
    /// until no node moves more than `tolerance` in an iteration.
    Convergence { tolerance: f64, max_iterations: usize },
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule::FixedIterations
    }
}

macro_rules! named_enum {
    ($ty:ty, $what:literal, $($variant:path => $name:literal),+ $(,)?) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $ty {
            type Err = HmdsError;
            fn from_str(s: &str) -> Result<Self, HmdsError> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(HmdsError::UnknownOption(format!(concat!($what, " `{}`"), other))),
                }
            }
        }
    };
}

named_enum!(ShuffleMode, "shuffle mode",
    ShuffleMode::Replacement => "replacement",
    ShuffleMode::IndexShuffle => "index-shuffle",
    ShuffleMode::Reshuffle => "reshuffle",
);
named_enum!(InitMode, "init mode", InitMode::Random => "random", InitMode::Smart => "smart");
named_enum!(WeightRule, "weight rule", WeightRule::Unit => "unit", WeightRule::InverseSquare => "inverse-square");

#[derive(Debug, Clone, PartialEq)]
pub struct SgdParams {
    pub schedule: ScheduleKind,
    /// `t_max`: length of the learning-rate schedule.
    pub iterations: usize,
    pub shuffle: ShuffleMode,
    pub init: InitMode,
    pub alpha: AlphaMode,
    pub weight: WeightRule,
    pub stop: StopRule,
    pub seed: u64,
    pub record_trace: bool,
}

impl Default for SgdParams {
    fn default() -> Self {
        Self {
            schedule: ScheduleKind::Exponential,
            iterations: 20,
            shuffle: ShuffleMode::Reshuffle,
            init: InitMode::Random,
            alpha: AlphaMode::Heuristic,
            weight: WeightRule::InverseSquare,
            stop: StopRule::FixedIterations,
            seed: 0,
            record_trace: true,
        }
    }
}

impl SgdParams {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// One row of the per-iteration trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// 1-based iteration index.
    pub iteration: usize,
    pub stress: f64,
    pub max_displacement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdsRun {
    pub layout: Layout,
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub alpha: f64,
    pub wall_time: Duration,
}
