//! Per-packet virtual node ids.
//!
//! Two routers on a path that happen to share a node id cause a false loop
//! report on every packet that crosses them. Deriving the id compared in the
//! header from a packet digest that includes a retransmission nonce means a
//! retransmission sees a fresh set of ids. Every hop recomputes its own
//! virtual id from its true id and the packet, so the payload must not be
//! modified in flight.

use sha2::{Digest, Sha256};

use crate::protocol::NodeId;

/// Long-lived node identity, e.g. the SHA-256 of the node's public key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrueId(pub [u8; 32]);

impl TrueId {
    /// SHA-256 of arbitrary key material.
    pub fn from_key(key: &[u8]) -> Self {
        Self(Sha256::digest(key).into())
    }
}

/// Per-retransmission nonce. The origin must not reuse a nonce for
/// retransmissions of the same packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RetransmissionNonce(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PacketDigest(pub [u8; 32]);

/// SHA-256 over the big-endian nonce followed by the payload. The payload
/// must not include the loop header.
pub fn packet_digest(payload: &[u8], nonce: RetransmissionNonce) -> PacketDigest {
    let mut hasher = Sha256::new();
    hasher.update(nonce.0.to_be_bytes());
    hasher.update(payload);
    PacketDigest(hasher.finalize().into())
}

/// First 8 bytes, big-endian, of SHA-256(true id || packet digest).
pub fn virtual_id(true_id: &TrueId, digest: &PacketDigest) -> NodeId {
    let mut hasher = Sha256::new();
    hasher.update(true_id.0);
    hasher.update(digest.0);
    let hash = hasher.finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&hash[..8]);
    NodeId(u64::from_be_bytes(head))
}

/// Virtual ids for every node along a path for one packet.
pub fn virtual_ids(true_ids: &[TrueId], digest: &PacketDigest) -> Vec<NodeId> {
    true_ids.iter().map(|t| virtual_id(t, digest)).collect()
}
