//! Per-step reward: a latency term that favors fast, low-variance frames and
//! a temperature term that penalizes running hot.
//!
//! Slack and its windowed standard deviation are normalized by the latency
//! budget before entering the reward, so rewards are comparable across
//! budgets and the `tanh` stays in its responsive range.

use alloc::collections::VecDeque;

use num_traits::Float;

use crate::model::RewardConfig;

/// Latency reward on budget-normalized slack.
///
/// Positive slack earns `tanh(slack_norm) + 1/(1 + sigma_norm)`; a miss is
/// charged `p * slack_norm` (negative).
pub fn time_reward(slack_norm: f64, sigma_norm: f64, penalty_p: f64) -> f64 {
    if slack_norm > 0.0 {
        slack_norm.tanh() + 1.0 / (1.0 + sigma_norm)
    } else {
        penalty_p * slack_norm
    }
}

/// Temperature reward: +1 while both processors are at or below the
/// threshold, `-p` as soon as either exceeds it.
pub fn temp_reward(cpu_temp_c: f64, gpu_temp_c: f64, threshold_c: f64, penalty_p: f64) -> f64 {
    if cpu_temp_c <= threshold_c && gpu_temp_c <= threshold_c {
        1.0
    } else {
        -penalty_p
    }
}

/// `r = r_time + lambda * r_temp`, with slack and sigma given in raw
/// milliseconds and normalized by `budget_ms` internally.
pub fn combined_reward(
    slack_ms: f64,
    sigma_ms: f64,
    cpu_temp_c: f64,
    gpu_temp_c: f64,
    budget_ms: f64,
    threshold_c: f64,
    cfg: &RewardConfig,
) -> f64 {
    time_reward(slack_ms / budget_ms, sigma_ms / budget_ms, cfg.penalty_p)
        + cfg.lambda * temp_reward(cpu_temp_c, gpu_temp_c, threshold_c, cfg.penalty_p)
}

/// Ring buffer of the most recent per-frame slack values, one entry per
/// completed frame.
#[derive(Debug, Clone)]
pub struct SlackWindow {
    buf: VecDeque<f64>,
    capacity: usize,
}

impl SlackWindow {
    pub fn new(capacity: usize) -> Self {
        Self {
            buf: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn push(&mut self, slack_ms: f64) {
        if self.buf.len() == self.capacity {
            self.buf.pop_front();
        }
        self.buf.push_back(slack_ms);
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    /// Population standard deviation of the current contents; 0 with fewer
    /// than two entries.
    pub fn sigma(&self) -> f64 {
        let n = self.buf.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.buf.iter().sum::<f64>() / n as f64;
        let var = self
            .buf
            .iter()
            .map(|x| {
                let d = x - mean;
                d * d
            })
            .sum::<f64>()
            / n as f64;
        var.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn time_reward_positive_branch() {
        let r = time_reward(0.1, 0.0, 2.0);
        assert!((r - (0.1f64.tanh() + 1.0)).abs() < TOL);
        // supremum: tanh -> 1, second term -> 1
        assert!(time_reward(1e9, 0.0, 2.0) > 2.0 - 1e-9);
        assert!(time_reward(1e9, 0.0, 2.0) <= 2.0);
    }

    #[test]
    fn time_reward_miss_branch() {
        assert!((time_reward(-0.25, 0.0, 2.0) - (-0.5)).abs() < TOL);
        // slack = 0 falls on the penalty branch and yields 0
        assert_eq!(time_reward(0.0, 0.3, 2.0), 0.0);
    }

    #[test]
    fn time_reward_monotone_in_slack_and_sigma() {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..200 {
            let slack = -2.0 + i as f64 * 0.025;
            let r = time_reward(slack, 0.2, 2.0);
            if slack != 0.0 {
                assert!(r > prev || (slack > 0.0 && prev == f64::NEG_INFINITY));
            }
            prev = r;
            assert!(r <= 2.0);
        }
        assert!(time_reward(0.5, 0.1, 2.0) > time_reward(0.5, 0.2, 2.0));
    }

    #[test]
    fn temp_reward_two_values() {
        assert_eq!(temp_reward(50.0, 60.0, 70.0, 2.0), 1.0);
        assert_eq!(temp_reward(75.0, 60.0, 70.0, 2.0), -2.0);
        assert_eq!(temp_reward(60.0, 75.0, 70.0, 2.0), -2.0);
        // boundary is inclusive
        assert_eq!(temp_reward(70.0, 70.0, 70.0, 2.0), 1.0);
    }

    #[test]
    fn combined_sums_terms() {
        let cfg = RewardConfig::new(1.0, 2.0, 10).unwrap();
        let l = 100.0;
        let r = combined_reward(10.0, 0.0, 50.0, 60.0, l, 70.0, &cfg);
        assert!((r - (0.1f64.tanh() + 1.0 + 1.0)).abs() < TOL);

        let r = combined_reward(-25.0, 0.0, 75.0, 60.0, l, 70.0, &cfg);
        assert!((r - (-0.5 - 2.0)).abs() < TOL);

        let cfg0 = RewardConfig::new(0.0, 2.0, 10).unwrap();
        let r = combined_reward(10.0, 5.0, 95.0, 95.0, l, 70.0, &cfg0);
        assert_eq!(r, time_reward(0.1, 0.05, 2.0));
    }

    #[test]
    fn window_sigma() {
        let mut w = SlackWindow::new(4);
        assert_eq!(w.sigma(), 0.0);
        w.push(5.0);
        assert_eq!(w.sigma(), 0.0); // single entry
        w.push(5.0);
        w.push(5.0);
        w.push(5.0);
        assert_eq!(w.sigma(), 0.0); // identical entries
        w.push(9.0); // evicts one 5.0
        assert_eq!(w.len(), 4);
        // population sigma of [5, 5, 5, 9]: mean 6, var (1+1+1+9)/4 = 3
        assert!((w.sigma() - 3.0f64.sqrt()).abs() < TOL);
    }

    #[test]
    fn window_eviction_is_fifo() {
        let mut w = SlackWindow::new(2);
        w.push(1.0);
        w.push(2.0);
        w.push(3.0);
        // contents now [2, 3]: mean 2.5, var 0.25
        assert!((w.sigma() - 0.5).abs() < TOL);
    }
}
