use std::fmt;
use std::str::FromStr;

use super::HmdsError;

/// Ratio between the final learning rate and `d_min²`.
pub const EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    /// `η_max e^{-bt}`
    Exponential,
    /// `a / (1 + bt)`
    InverseT,
    /// `a / sqrt(1 + bt)`
    InverseSqrtT,
}

impl ScheduleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::Exponential => "exponential",
            ScheduleKind::InverseT => "inverse-t",
            ScheduleKind::InverseSqrtT => "inverse-sqrt-t",
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScheduleKind {
    type Err = HmdsError;

    fn from_str(s: &str) -> Result<Self, HmdsError> {
        match s {
            "exponential" => Ok(ScheduleKind::Exponential),
            "inverse-t" => Ok(ScheduleKind::InverseT),
            "inverse-sqrt-t" => Ok(ScheduleKind::InverseSqrtT),
            other => Err(HmdsError::UnknownOption(format!("schedule `{other}`"))),
        }
    }
}

/// Learning-rate schedule running from `η_max = d_max²` down to
/// `η_min = ε d_min²` at `t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    kind: ScheduleKind,
    eta_max: f64,
    eta_min: f64,
    t_max: usize,
    a: f64,
    b: f64,
}

impl Schedule {
    pub fn new(kind: ScheduleKind, d_max: f64, d_min: f64, t_max: usize) -> Self {
        let eta_max = d_max * d_max;
        let eta_min = EPSILON * d_min * d_min;
        let (a, b) = match kind {
            ScheduleKind::Exponential => (eta_max, rate(t_max, (eta_max / eta_min).ln())),
            ScheduleKind::InverseT => {
                let a = d_min * d_min;
                (a, rate(t_max, a / eta_min - 1.0))
            }
            ScheduleKind::InverseSqrtT => {
                let a = d_min * d_min;
                (a, rate(t_max, (a / eta_min).powi(2) - 1.0))
            }
        };
        Self { kind, eta_max, eta_min, t_max, a, b }
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn eta_max(&self) -> f64 {
        self.eta_max
    }

    pub fn eta_min(&self) -> f64 {
        self.eta_min
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// Learning rate at step `t`, for `0 <= t <= t_max`.
    pub fn eta(&self, t: usize) -> Result<f64, HmdsError> {
        if t > self.t_max {
            return Err(HmdsError::StepOutOfRange { t, t_max: self.t_max });
        }
        Ok(self.eval(t))
    }

    /// Like [`eta`](Self::eta) but holds the final rate past `t_max`.
    pub fn eta_clamped(&self, t: usize) -> f64 {
        self.eval(t.min(self.t_max))
    }

    fn eval(&self, t: usize) -> f64 {
        let bt = self.b * t as f64;
        match self.kind {
            ScheduleKind::Exponential => self.a * (-bt).exp(),
            ScheduleKind::InverseT => self.a / (1.0 + bt),
            ScheduleKind::InverseSqrtT => self.a / (1.0 + bt).sqrt(),
        }
    }
}

fn rate(t_max: usize, total: f64) -> f64 {
    if t_max == 0 || !total.is_finite() {
        0.0
    } else {
        total / t_max as f64
    }
}
