//! Wire format of the loop header.
//!
//! ```text
//!  0                   8        10              14
//!  +-------------------+--------+---------------+
//!  | tortoise (u64 BE) | hops   | nonce (u32 BE)|
//!  |                   | u16 BE |               |
//!  +-------------------+--------+---------------+
//! ```
//!
//! Anything after byte 14 is payload and is left alone by [`decode`].

use thiserror::Error;

use crate::protocol::{HopCount, LoopHeader, NodeId};
use crate::vid::RetransmissionNonce;

pub const WIRE_LEN: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("header needs {WIRE_LEN} bytes, got {0}")]
    Truncated(usize),
}

pub fn encode(header: &LoopHeader, nonce: RetransmissionNonce) -> [u8; WIRE_LEN] {
    let mut out = [0u8; WIRE_LEN];
    out[0..8].copy_from_slice(&header.tortoise.get().to_be_bytes());
    out[8..10].copy_from_slice(&header.hops.get().to_be_bytes());
    out[10..14].copy_from_slice(&nonce.0.to_be_bytes());
    out
}

pub fn decode(wire: &[u8]) -> Result<(LoopHeader, RetransmissionNonce), CodecError> {
    let Some(bytes) = wire.get(..WIRE_LEN) else {
        return Err(CodecError::Truncated(wire.len()));
    };
    let tortoise = u64::from_be_bytes(bytes[0..8].try_into().unwrap());
    let hops = u16::from_be_bytes(bytes[8..10].try_into().unwrap());
    let nonce = u32::from_be_bytes(bytes[10..14].try_into().unwrap());
    Ok((
        LoopHeader {
            tortoise: NodeId(tortoise),
            hops: HopCount(hops),
        },
        RetransmissionNonce(nonce),
    ))
}
