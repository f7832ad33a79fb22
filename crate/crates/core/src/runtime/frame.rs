//! Wire frames: `length: u32 LE | msg_type: u8 | layer_id: u32 LE | payload`.
//!
//! `length` counts payload bytes only.

use std::io::{ErrorKind, Read};

use crate::error::{protocol, Error, Result};

pub const HEADER_LEN: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum MsgType {
    Hello = 0x01,
    InputShare = 0x02,
    LayerData = 0x03,
    OutputShare = 0x04,
    Done = 0x05,
}

impl TryFrom<u8> for MsgType {
    type Error = Error;

    fn try_from(b: u8) -> Result<Self> {
        Ok(match b {
            0x01 => MsgType::Hello,
            0x02 => MsgType::InputShare,
            0x03 => MsgType::LayerData,
            0x04 => MsgType::OutputShare,
            0x05 => MsgType::Done,
            other => return Err(protocol(format!("unknown msg_type 0x{other:02X}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub msg_type: MsgType,
    pub layer_id: u32,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(msg_type: MsgType, layer_id: u32, payload: Vec<u8>) -> Self {
        Self {
            msg_type,
            layer_id,
            payload,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        out.push(self.msg_type as u8);
        out.extend_from_slice(&self.layer_id.to_le_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Decodes exactly one frame occupying all of `bytes`.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(protocol(format!("frame of {} bytes is shorter than its header", bytes.len())));
        }
        let (len, msg_type, layer_id) = parse_header(bytes[..HEADER_LEN].try_into().expect("header slice"))?;
        if bytes.len() - HEADER_LEN != len {
            return Err(protocol(format!(
                "frame declares {len} payload bytes but carries {}",
                bytes.len() - HEADER_LEN
            )));
        }
        Ok(Self::new(msg_type, layer_id, bytes[HEADER_LEN..].to_vec()))
    }

    /// Reads one frame from a byte stream.
    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header).map_err(|e| {
            if e.kind() == ErrorKind::UnexpectedEof {
                Error::Connection(std::io::Error::new(ErrorKind::UnexpectedEof, "peer closed the connection"))
            } else {
                Error::Connection(e)
            }
        })?;
        let (len, msg_type, layer_id) = parse_header(&header)?;
        let mut payload = vec![0u8; len];
        r.read_exact(&mut payload)?;
        Ok(Self::new(msg_type, layer_id, payload))
    }
}

fn parse_header(h: &[u8; HEADER_LEN]) -> Result<(usize, MsgType, u32)> {
    let len = u32::from_le_bytes(h[..4].try_into().expect("4 bytes")) as usize;
    let msg_type = MsgType::try_from(h[4])?;
    let layer_id = u32::from_le_bytes(h[5..].try_into().expect("4 bytes"));
    Ok((len, msg_type, layer_id))
}
