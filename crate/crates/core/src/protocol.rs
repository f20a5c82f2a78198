//! Per-packet loop detection state machine.
//!
//! A packet carries a [`LoopHeader`] holding a tortoise node id and a hop
//! count. The origin stamps its own id as the tortoise. Every receiving node
//! bumps the hop count, reports a loop if the tortoise is its own id, and
//! otherwise replaces the tortoise with its own id whenever the new hop
//! count is a power of two. Nodes keep no per-packet state.

use std::fmt;

use thiserror::Error;

/// Identifier of a forwarding node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u64);

impl NodeId {
    pub const fn new(value: u64) -> Self {
        Self(value)
    }

    pub const fn get(self) -> u64 {
        self.0
    }
}

impl From<u64> for NodeId {
    fn from(value: u64) -> Self {
        Self(value)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl fmt::LowerHex for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Number of hops a packet has traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HopCount(pub u16);

impl HopCount {
    pub const ZERO: HopCount = HopCount(0);
    pub const MAX: HopCount = HopCount(u16::MAX);

    pub const fn get(self) -> u16 {
        self.0
    }

    pub fn checked_next(self) -> Option<HopCount> {
        self.0.checked_add(1).map(HopCount)
    }

    pub fn is_power_of_two(self) -> bool {
        is_power_of_two(self)
    }
}

impl fmt::Display for HopCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Loop detection state carried in every packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LoopHeader {
    pub tortoise: NodeId,
    pub hops: HopCount,
}

/// Result of processing a packet at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiveOutcome {
    /// The receiver's id matched the tortoise. The header is not advanced;
    /// what happens to the packet is up to the caller.
    LoopDetected,
    /// No loop seen; forward the packet with this header.
    Forward(LoopHeader),
}

impl ReceiveOutcome {
    pub fn loop_detected(&self) -> bool {
        matches!(self, ReceiveOutcome::LoopDetected)
    }

    pub fn updated_header(&self) -> Option<LoopHeader> {
        match self {
            ReceiveOutcome::LoopDetected => None,
            ReceiveOutcome::Forward(header) => Some(*header),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ProtocolError {
    /// The hop counter is saturated; the packet must be discarded as expired.
    #[error("hop counter overflow at {0} hops")]
    HopOverflow(HopCount),
}

/// Header a node stamps on a packet it originates.
pub fn initialize_packet(origin: NodeId) -> LoopHeader {
    LoopHeader {
        tortoise: origin,
        hops: HopCount::ZERO,
    }
}

/// Processes an incoming header at `receiver`.
///
/// The tortoise comparison happens before the snapshot update, so a node
/// sitting at a power-of-two hop still detects a tortoise equal to its own
/// id rather than silently overwriting it.
pub fn receive_packet(
    header: LoopHeader,
    receiver: NodeId,
) -> Result<ReceiveOutcome, ProtocolError> {
    let hops = header
        .hops
        .checked_next()
        .ok_or(ProtocolError::HopOverflow(header.hops))?;
    if header.tortoise == receiver {
        return Ok(ReceiveOutcome::LoopDetected);
    }
    let tortoise = if hops.is_power_of_two() {
        receiver
    } else {
        header.tortoise
    };
    Ok(ReceiveOutcome::Forward(LoopHeader { tortoise, hops }))
}

/// `h & (h - 1) == 0`, except that zero is not a power of two.
pub fn is_power_of_two(h: HopCount) -> bool {
    let h = h.0;
    h != 0 && h & (h - 1) == 0
}
