//! Per-frame workloads: the proposal counts that drive stage-2 latency,
//! drawn from synthetic dataset profiles or replayed from trace files.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The work a single frame brings: its id and the number of RPN proposals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameWorkload {
    pub frame_id: u64,
    pub proposals: u32,
}

/// A log-normal model of a dataset's proposal-count distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub name: String,
    pub log_mean: f64,
    pub log_sigma: f64,
    pub p_cap: u32,
}

impl DatasetProfile {
    pub fn new(name: &str, log_mean: f64, log_sigma: f64, p_cap: u32) -> Result<Self, String> {
        if !(log_sigma > 0.0) {
            return Err("log_sigma must be > 0".to_string());
        }
        if p_cap < 1 {
            return Err("p_cap must be >= 1".to_string());
        }
        Ok(Self {
            name: name.to_string(),
            log_mean,
            log_sigma,
            p_cap,
        })
    }

    /// Street-scene style traffic imagery: moderate object counts.
    pub fn kitti_like() -> Self {
        Self::new("kitti-like", (150.0f64).ln(), 0.5, 1000).unwrap()
    }

    /// Aerial imagery dense with small objects, hence more proposals.
    pub fn visdrone_like() -> Self {
        Self::new("visdrone-like", (400.0f64).ln(), 0.6, 1000).unwrap()
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "kitti-like" => Some(Self::kitti_like()),
            "visdrone-like" => Some(Self::visdrone_like()),
            _ => None,
        }
    }
}

/// Draws one frame's workload: `P = min(round(lognormal), p_cap)`.
pub fn sample_workload<R: Rng + ?Sized>(
    profile: &DatasetProfile,
    frame_id: u64,
    rng: &mut R,
) -> FrameWorkload {
    let z: f64 = rng.sample(rand_distr::StandardNormal);
    let raw = (profile.log_mean + profile.log_sigma * z).exp();
    let proposals = if raw >= f64::from(profile.p_cap) {
        profile.p_cap
    } else {
        raw.round() as u32
    };
    FrameWorkload {
        frame_id,
        proposals,
    }
}

/// Parse failure for a workload trace, with a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for TraceError {}

pub const TRACE_HEADER: &str = "frame_id,proposals";

/// Parses a workload trace from CSV text with header `frame_id,proposals`.
/// Frame ids need not be contiguous; negative proposal counts are rejected.
pub fn parse_trace(text: &str) -> Result<Vec<FrameWorkload>, TraceError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRACE_HEADER => {}
        Some((_, header)) => {
            return Err(TraceError {
                line: 1,
                message: format!("expected header '{TRACE_HEADER}', got '{}'", header.trim()),
            })
        }
        None => {
            return Err(TraceError {
                line: 1,
                message: "empty file".to_string(),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (id_str, prop_str) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a.trim(), b.trim()),
            _ => {
                return Err(TraceError {
                    line: line_no,
                    message: format!("expected 2 fields, got '{line}'"),
                })
            }
        };
        let frame_id: u64 = id_str.parse().map_err(|_| TraceError {
            line: line_no,
            message: format!("bad frame_id '{id_str}'"),
        })?;
        let proposals: u32 = prop_str.parse().map_err(|_| TraceError {
            line: line_no,
            message: format!("bad proposal count '{prop_str}'"),
        })?;
        out.push(FrameWorkload {
            frame_id,
            proposals,
        });
    }
    Ok(out)
}

/// Formats workloads back into the CSV trace format; inverse of
/// [`parse_trace`].
pub fn format_trace(workloads: &[FrameWorkload]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for w in workloads {
        out.push_str(&format!("{},{}\n", w.frame_id, w.proposals));
    }
    out
}

/// Where a run's frame workloads come from: sampled from a profile or
/// replayed (cyclically) from a trace.
#[derive(Debug, Clone)]
pub enum WorkloadSource {
    Profile(DatasetProfile),
    Trace(Vec<FrameWorkload>),
}

impl WorkloadSource {
    pub fn next_frame<R: Rng + ?Sized>(&self, frame_id: u64, rng: &mut R) -> FrameWorkload {
        match self {
            WorkloadSource::Profile(p) => sample_workload(p, frame_id, rng),
            WorkloadSource::Trace(t) => {
                let w = t[(frame_id as usize) % t.len()];
                FrameWorkload {
                    frame_id,
                    proposals: w.proposals,
                }
            }
        }
    }
}
