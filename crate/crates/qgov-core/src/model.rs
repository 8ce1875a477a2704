//! Shared domain types: frequency tables, actions, observations and the
//! configuration knobs consumed by the reward, agent and bench modules.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Number of features produced by [`normalize_observation`].
pub const FEATURE_LEN: usize = 7;
/// Features visible to the narrow (frame-start) network path: everything but
/// the proposal count.
pub const NARROW_FEATURE_LEN: usize = 6;

/// Validation failure for a domain type or an index operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// A frequency list was empty, too short, non-increasing or contained zero.
    BadFrequencyTable(String),
    /// An action or flat index referenced a level outside the table.
    LevelOutOfRange { cpu_level: usize, gpu_level: usize },
    IndexOutOfRange { index: usize, len: usize },
    /// A scalar configuration field violated its invariant.
    BadConfig(String),
    /// Transition parity did not match the stored state's stage.
    ParityMismatch,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::BadFrequencyTable(msg) => write!(f, "bad frequency table: {msg}"),
            ModelError::LevelOutOfRange {
                cpu_level,
                gpu_level,
            } => write!(f, "level ({cpu_level}, {gpu_level}) outside frequency table"),
            ModelError::IndexOutOfRange { index, len } => {
                write!(f, "action index {index} outside [0, {len})")
            }
            ModelError::BadConfig(msg) => write!(f, "bad config: {msg}"),
            ModelError::ParityMismatch => write!(f, "transition parity does not match state stage"),
        }
    }
}

impl core::error::Error for ModelError {}

/// The discrete CPU and GPU frequency levels exposed by a device.
///
/// Levels are indexed from 0 (slowest) and strictly increase in MHz.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    cpu_levels_mhz: Vec<u32>,
    gpu_levels_mhz: Vec<u32>,
}

impl FrequencyTable {
    pub fn new(cpu_levels_mhz: Vec<u32>, gpu_levels_mhz: Vec<u32>) -> Result<Self, ModelError> {
        for (name, levels) in [("cpu", &cpu_levels_mhz), ("gpu", &gpu_levels_mhz)] {
            if levels.len() < 2 {
                return Err(ModelError::BadFrequencyTable(alloc::format!(
                    "{name} needs at least 2 levels, got {}",
                    levels.len()
                )));
            }
            if levels[0] == 0 {
                return Err(ModelError::BadFrequencyTable(alloc::format!(
                    "{name} frequencies must be positive"
                )));
            }
            if !levels.windows(2).all(|w| w[0] < w[1]) {
                return Err(ModelError::BadFrequencyTable(alloc::format!(
                    "{name} levels must strictly increase"
                )));
            }
        }
        Ok(Self {
            cpu_levels_mhz,
            gpu_levels_mhz,
        })
    }

    /// Number of CPU levels (M).
    pub fn cpu_count(&self) -> usize {
        self.cpu_levels_mhz.len()
    }

    /// Number of GPU levels (N).
    pub fn gpu_count(&self) -> usize {
        self.gpu_levels_mhz.len()
    }

    /// Size of the joint action space, M·N.
    pub fn action_count(&self) -> usize {
        self.cpu_count() * self.gpu_count()
    }

    pub fn cpu_mhz(&self, level: usize) -> u32 {
        self.cpu_levels_mhz[level]
    }

    pub fn gpu_mhz(&self, level: usize) -> u32 {
        self.gpu_levels_mhz[level]
    }

    pub fn cpu_ghz(&self, level: usize) -> f64 {
        f64::from(self.cpu_levels_mhz[level]) / 1000.0
    }

    pub fn gpu_ghz(&self, level: usize) -> f64 {
        f64::from(self.gpu_levels_mhz[level]) / 1000.0
    }

    pub fn max_action(&self) -> Action {
        Action {
            cpu_level: self.cpu_count() - 1,
            gpu_level: self.gpu_count() - 1,
        }
    }

    pub fn contains(&self, action: Action) -> bool {
        action.cpu_level < self.cpu_count() && action.gpu_level < self.gpu_count()
    }
}

/// A joint frequency decision: one CPU level and one GPU level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub cpu_level: usize,
    pub gpu_level: usize,
}

impl Action {
    pub const fn new(cpu_level: usize, gpu_level: usize) -> Self {
        Self {
            cpu_level,
            gpu_level,
        }
    }
}

/// Flattens an action onto `[0, M·N)` as `cpu_level · N + gpu_level`.
pub fn action_to_index(action: Action, table: &FrequencyTable) -> Result<usize, ModelError> {
    if !table.contains(action) {
        return Err(ModelError::LevelOutOfRange {
            cpu_level: action.cpu_level,
            gpu_level: action.gpu_level,
        });
    }
    Ok(action.cpu_level * table.gpu_count() + action.gpu_level)
}

/// Inverse of [`action_to_index`].
pub fn index_to_action(index: usize, table: &FrequencyTable) -> Result<Action, ModelError> {
    let len = table.action_count();
    if index >= len {
        return Err(ModelError::IndexOutOfRange { index, len });
    }
    Ok(Action {
        cpu_level: index / table.gpu_count(),
        gpu_level: index % table.gpu_count(),
    })
}

/// Which half of a frame an observation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Before any work on the frame has started.
    FrameStart,
    /// After stage 1 finished and the proposal count is known.
    AfterRpn,
}

/// The agent's view of the device and frame state at a decision point.
///
/// `slack_ms` is signed and unclamped: at `FrameStart` it is the previous
/// frame's remaining budget (`L - l_{i-1}`, or the full budget on the very
/// first frame), at `AfterRpn` it is the budget left for stage 2. Negative
/// values mean the deadline was (or already is) missed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub stage: Stage,
    pub cpu_temp_c: f64,
    pub gpu_temp_c: f64,
    pub cpu_level: usize,
    pub gpu_level: usize,
    pub slack_ms: f64,
    /// Present exactly when `stage == AfterRpn`.
    pub proposals: Option<u32>,
}

impl Observation {
    pub fn frame_start(
        cpu_temp_c: f64,
        gpu_temp_c: f64,
        cpu_level: usize,
        gpu_level: usize,
        slack_ms: f64,
    ) -> Self {
        Self {
            stage: Stage::FrameStart,
            cpu_temp_c,
            gpu_temp_c,
            cpu_level,
            gpu_level,
            slack_ms,
            proposals: None,
        }
    }

    pub fn after_rpn(
        cpu_temp_c: f64,
        gpu_temp_c: f64,
        cpu_level: usize,
        gpu_level: usize,
        slack_ms: f64,
        proposals: u32,
    ) -> Self {
        Self {
            stage: Stage::AfterRpn,
            cpu_temp_c,
            gpu_temp_c,
            cpu_level,
            gpu_level,
            slack_ms,
            proposals: Some(proposals),
        }
    }

    /// Checks the proposals-iff-AfterRpn invariant and that temps are finite.
    pub fn validate(&self) -> Result<(), ModelError> {
        let want_proposals = self.stage == Stage::AfterRpn;
        if self.proposals.is_some() != want_proposals {
            return Err(ModelError::BadConfig(String::from(
                "proposals must be present exactly at the after-RPN step",
            )));
        }
        if !self.cpu_temp_c.is_finite() || !self.gpu_temp_c.is_finite() {
            return Err(ModelError::BadConfig(String::from(
                "temperatures must be finite",
            )));
        }
        Ok(())
    }
}

/// Per-frame latency budget L in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyConstraint {
    pub budget_ms: f64,
}

impl LatencyConstraint {
    pub fn new(budget_ms: f64) -> Result<Self, ModelError> {
        if !(budget_ms > 0.0) {
            return Err(ModelError::BadConfig(String::from("budget_ms must be > 0")));
        }
        Ok(Self { budget_ms })
    }
}

/// Temperature limits: the soft threshold the agent is rewarded against and
/// the hard cap where hardware throttling engages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalConfig {
    /// Soft target the reward and cool-down exploration key on.
    pub threshold_c: f64,
    /// Hardware throttling cap.
    pub throttle_c: f64,
    /// A throttled processor is released once it cools below
    /// `throttle_c - hysteresis_c`.
    pub hysteresis_c: f64,
}

impl ThermalConfig {
    pub fn new(threshold_c: f64, throttle_c: f64, hysteresis_c: f64) -> Result<Self, ModelError> {
        if !(threshold_c < throttle_c) {
            return Err(ModelError::BadConfig(String::from(
                "threshold_c must be below throttle_c",
            )));
        }
        if !(hysteresis_c > 0.0) {
            return Err(ModelError::BadConfig(String::from(
                "hysteresis_c must be > 0",
            )));
        }
        Ok(Self {
            threshold_c,
            throttle_c,
            hysteresis_c,
        })
    }
}

/// Weights of the per-step reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardConfig {
    /// Weight on the temperature reward.
    pub lambda: f64,
    /// Penalty multiplier applied to deadline misses and overheating.
    pub penalty_p: f64,
    /// Number of recent frames the slack standard deviation is taken over.
    pub window_n: usize,
}

impl RewardConfig {
    pub fn new(lambda: f64, penalty_p: f64, window_n: usize) -> Result<Self, ModelError> {
        if !(lambda >= 0.0) {
            return Err(ModelError::BadConfig(String::from("lambda must be >= 0")));
        }
        if !(penalty_p > 0.0) {
            return Err(ModelError::BadConfig(String::from("penalty_p must be > 0")));
        }
        if window_n < 2 {
            return Err(ModelError::BadConfig(String::from("window_n must be >= 2")));
        }
        Ok(Self {
            lambda,
            penalty_p,
            window_n,
        })
    }
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            penalty_p: 2.0,
            window_n: 10,
        }
    }
}

/// Weights of the post-hoc benchmark objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl ObjectiveWeights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ModelError> {
        if !(alpha >= 0.0) || !(beta >= 0.0) {
            return Err(ModelError::BadConfig(String::from(
                "objective weights must be >= 0",
            )));
        }
        Ok(Self { alpha, beta })
    }
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        // 0.01 per ms of variance keeps the three objective terms within a
        // couple orders of magnitude of each other at realistic latencies.
        Self {
            alpha: 0.01,
            beta: 100.0,
        }
    }
}

/// Which replay buffer a transition belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// Frame-start transitions `<s_2i, a_2i, r_2i, s_2i+1>`.
    Even,
    /// Post-RPN transitions `<s_2i+1, a_2i+1, r_2i+1, s_2i+2>`.
    Odd,
}

/// One replayable experience step, parity-tagged for the dual buffers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state: Observation,
    pub action: Action,
    pub reward: f64,
    pub next_state: Observation,
    pub parity: Parity,
}

impl Transition {
    /// Builds a transition, deriving parity from the state's stage.
    pub fn new(
        state: Observation,
        action: Action,
        reward: f64,
        next_state: Observation,
    ) -> Result<Self, ModelError> {
        state.validate()?;
        next_state.validate()?;
        let parity = match state.stage {
            Stage::FrameStart => Parity::Even,
            Stage::AfterRpn => Parity::Odd,
        };
        Ok(Self {
            state,
            action,
            reward,
            next_state,
            parity,
        })
    }
}

/// Scaling context shared by every place that feeds observations to a network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub cpu_levels: usize,
    pub gpu_levels: usize,
    pub budget_ms: f64,
    pub p_max: u32,
}

impl Normalizer {
    pub fn new(table: &FrequencyTable, constraint: LatencyConstraint, p_max: u32) -> Self {
        Self {
            cpu_levels: table.cpu_count(),
            gpu_levels: table.gpu_count(),
            budget_ms: constraint.budget_ms,
            p_max,
        }
    }

    pub fn features(&self, obs: &Observation) -> [f64; FEATURE_LEN] {
        let stage = match obs.stage {
            Stage::FrameStart => 0.0,
            Stage::AfterRpn => 1.0,
        };
        let proposals = match obs.proposals {
            Some(p) => f64::from(p) / f64::from(self.p_max),
            None => 0.0,
        };
        [
            stage,
            obs.cpu_temp_c / 100.0,
            obs.gpu_temp_c / 100.0,
            obs.cpu_level as f64 / (self.cpu_levels - 1) as f64,
            obs.gpu_level as f64 / (self.gpu_levels - 1) as f64,
            obs.slack_ms / self.budget_ms,
            proposals,
        ]
    }
}

/// Scales an observation into the 7-feature network input
/// `[stage, cpu_temp/100, gpu_temp/100, cpu_level/(M-1), gpu_level/(N-1),
/// slack/L, proposals/p_max]`. Values are not clamped; slack keeps its sign.
pub fn normalize_observation(
    obs: &Observation,
    table: &FrequencyTable,
    constraint: LatencyConstraint,
    p_max: u32,
) -> [f64; FEATURE_LEN] {
    Normalizer::new(table, constraint, p_max).features(obs)
}

/// Default proposal-count normalization cap (a typical post-NMS limit).
pub const DEFAULT_P_MAX: u32 = 1000;

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table_4x3() -> FrequencyTable {
        FrequencyTable::new(vec![400, 800, 1200, 1600], vec![300, 600, 900]).unwrap()
    }

    #[test]
    fn table_rejects_bad_lists() {
        assert!(FrequencyTable::new(vec![400], vec![300, 600]).is_err());
        assert!(FrequencyTable::new(vec![400, 400], vec![300, 600]).is_err());
        assert!(FrequencyTable::new(vec![800, 400], vec![300, 600]).is_err());
        assert!(FrequencyTable::new(vec![0, 400], vec![300, 600]).is_err());
        assert!(FrequencyTable::new(vec![400, 800], vec![600]).is_err());
    }

    #[test]
    fn action_index_examples() {
        let t = table_4x3();
        assert_eq!(action_to_index(Action::new(0, 0), &t).unwrap(), 0);
        assert_eq!(action_to_index(Action::new(3, 2), &t).unwrap(), 11);
        assert_eq!(action_to_index(Action::new(2, 1), &t).unwrap(), 7);
        assert_eq!(index_to_action(0, &t).unwrap(), Action::new(0, 0));
        assert_eq!(index_to_action(11, &t).unwrap(), Action::new(3, 2));
        assert_eq!(index_to_action(7, &t).unwrap(), Action::new(2, 1));
    }

    #[test]
    fn action_index_rejects_out_of_bounds() {
        let t = table_4x3();
        assert!(action_to_index(Action::new(4, 0), &t).is_err());
        assert!(action_to_index(Action::new(0, 3), &t).is_err());
        assert!(index_to_action(12, &t).is_err());
    }

    #[test]
    fn action_index_roundtrip_exhaustive() {
        for m in 2..=32usize {
            for n in [2usize, 3, 17, 32] {
                let cpu: Vec<u32> = (1..=m as u32).map(|i| i * 100).collect();
                let gpu: Vec<u32> = (1..=n as u32).map(|i| i * 50).collect();
                let t = FrequencyTable::new(cpu, gpu).unwrap();
                for i in 0..t.action_count() {
                    let a = index_to_action(i, &t).unwrap();
                    assert_eq!(action_to_index(a, &t).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn normalize_zero_case() {
        let t = table_4x3();
        let c = LatencyConstraint::new(450.0).unwrap();
        let o = Observation::frame_start(0.0, 0.0, 0, 0, 0.0);
        assert_eq!(
            normalize_observation(&o, &t, c, 1000),
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn normalize_full_scale() {
        let t = table_4x3();
        let c = LatencyConstraint::new(450.0).unwrap();
        let o = Observation::after_rpn(50.0, 60.0, 3, 2, 450.0, 1000);
        assert_eq!(
            normalize_observation(&o, &t, c, 1000),
            [1.0, 0.5, 0.6, 1.0, 1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn normalize_keeps_slack_sign() {
        let t = table_4x3();
        let c = LatencyConstraint::new(450.0).unwrap();
        let o = Observation::frame_start(40.0, 40.0, 1, 1, -225.0);
        let f = normalize_observation(&o, &t, c, 1000);
        assert_eq!(f[5], -0.5);
    }

    #[test]
    fn normalize_monotone_per_field() {
        let t = table_4x3();
        let c = LatencyConstraint::new(450.0).unwrap();
        let base = Observation::after_rpn(50.0, 55.0, 1, 1, 100.0, 200);
        let f0 = normalize_observation(&base, &t, c, 1000);

        let mut hotter = base;
        hotter.cpu_temp_c += 5.0;
        assert!(normalize_observation(&hotter, &t, c, 1000)[1] > f0[1]);

        let mut faster = base;
        faster.gpu_level += 1;
        assert!(normalize_observation(&faster, &t, c, 1000)[4] > f0[4]);

        let mut more_slack = base;
        more_slack.slack_ms += 1.0;
        assert!(normalize_observation(&more_slack, &t, c, 1000)[5] > f0[5]);

        let mut more_props = base;
        more_props.proposals = Some(300);
        assert!(normalize_observation(&more_props, &t, c, 1000)[6] > f0[6]);
    }

    #[test]
    fn transition_parity_follows_stage() {
        let s0 = Observation::frame_start(40.0, 40.0, 0, 0, 450.0);
        let s1 = Observation::after_rpn(42.0, 44.0, 1, 1, 200.0, 150);
        let t = Transition::new(s0, Action::new(1, 1), 1.0, s1).unwrap();
        assert_eq!(t.parity, Parity::Even);
        let t = Transition::new(s1, Action::new(0, 0), -1.0, s0).unwrap();
        assert_eq!(t.parity, Parity::Odd);
    }

    #[test]
    fn transition_rejects_invalid_observation() {
        let mut s0 = Observation::frame_start(40.0, 40.0, 0, 0, 450.0);
        s0.proposals = Some(5); // proposals at frame start violate the invariant
        let s1 = Observation::after_rpn(42.0, 44.0, 1, 1, 200.0, 150);
        assert!(Transition::new(s0, Action::new(1, 1), 1.0, s1).is_err());
    }

    #[test]
    fn config_invariants() {
        assert!(LatencyConstraint::new(0.0).is_err());
        assert!(ThermalConfig::new(90.0, 87.0, 5.0).is_err());
        assert!(ThermalConfig::new(75.0, 87.0, 0.0).is_err());
        assert!(RewardConfig::new(-1.0, 2.0, 10).is_err());
        assert!(RewardConfig::new(1.0, 0.0, 10).is_err());
        assert!(RewardConfig::new(1.0, 2.0, 1).is_err());
        assert!(ObjectiveWeights::new(-0.1, 0.0).is_err());
    }
}
