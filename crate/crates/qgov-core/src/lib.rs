//! Core logic for `qgov`: a learned DVFS governor sandbox for two-stage
//! object-detector workloads.
//!
//! Everything in this crate is deterministic given a seed and free of I/O:
//! the device simulator (RC thermal network + cycle-based latency model),
//! the reward shaping, the slimmable Q-network with its Adam trainer, the
//! replay buffers and training loop, the baseline governors, the wire codec
//! and the benchmark metrics. File formats, sockets and the CLI live in the
//! companion `qgov` crate.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature is on
//! by default.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod agent;
pub mod bench;
pub mod link;
pub mod model;
pub mod protocol;
pub mod qnet;
pub mod reward;
pub mod sim;
pub mod workload;

pub use model::{Action, FrequencyTable, LatencyConstraint, Observation, Stage};
pub use sim::{DeviceProfile, DeviceSimState, FrameTrace};
