//! The agent-facing device abstraction: two decision points per frame.
//!
//! A frame proceeds as `frame_start -> apply_first -> apply_second`: the
//! first call yields the frame-start observation, the second runs stage 1
//! under the chosen frequencies and reveals the proposal count, the third
//! runs stage 2 and reports the finished frame. Both the in-process
//! simulator and the remote (socket) client implement this.

use alloc::string::String;
use core::fmt;

use crate::model::{Action, Observation};
use crate::sim::{DeviceProfile, FrameTrace, SimError};

#[derive(Debug, Clone, PartialEq)]
pub enum LinkError {
    Sim(SimError),
    /// The peer broke the message grammar or sent something undecodable.
    Protocol(String),
    /// Transport-level failure (socket closed, timeout, ...).
    Transport(String),
}

impl fmt::Display for LinkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkError::Sim(e) => write!(f, "simulator: {e}"),
            LinkError::Protocol(msg) => write!(f, "protocol: {msg}"),
            LinkError::Transport(msg) => write!(f, "transport: {msg}"),
        }
    }
}

impl core::error::Error for LinkError {}

impl From<SimError> for LinkError {
    fn from(e: SimError) -> Self {
        LinkError::Sim(e)
    }
}

pub trait DeviceLink {
    /// The device profile (announced in `hello` for remote links).
    fn profile(&self) -> &DeviceProfile;

    /// Observation at the start of the next frame.
    fn frame_start(&mut self) -> Result<Observation, LinkError>;

    /// Apply the frame-start decision, run stage 1, observe the post-RPN
    /// state (including the proposal count).
    fn apply_first(&mut self, action: Action) -> Result<Observation, LinkError>;

    /// Apply the post-RPN decision, run stage 2, get the finished frame.
    fn apply_second(&mut self, action: Action) -> Result<FrameTrace, LinkError>;
}
