//! Forwarding loop detection with a two-field packet header.
//!
//! Each packet carries a tortoise node id and a hop count. Receivers compare
//! the tortoise with their own id and refresh it at power-of-two hop counts,
//! which runs Brent's cycle detection along the packet's path without any
//! per-packet state at the nodes.

pub mod analysis;
pub mod codec;
pub mod protocol;
pub mod reference;
pub mod simulator;
pub mod vid;

pub use codec::{decode, encode, CodecError, WIRE_LEN};
pub use protocol::{
    initialize_packet, is_power_of_two, receive_packet, HopCount, LoopHeader, NodeId,
    ProtocolError, ReceiveOutcome,
};
pub use reference::{
    brent_detect, floyd_detect, predict_detection_hop, visited_set_oracle, CycleStructure,
    ReferenceError,
};
pub use simulator::{
    build_rho, inject_duplicate, random_functional_graph, simulate, FunctionalGraph, IdSource,
    SimError, SimOutcome, SimStep, SimTrace,
};
pub use vid::{packet_digest, virtual_id, PacketDigest, RetransmissionNonce, TrueId};
