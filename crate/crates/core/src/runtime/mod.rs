//! Two-party sessions, the wire protocol and the layered online-phase executor.

mod frame;
mod loopback;
mod payload;
mod session;
mod transport;

pub use frame::{Frame, MsgType, HEADER_LEN};
pub use loopback::{mask_rng, run_loopback, LoopbackConfig, LoopbackRun};
pub use payload::{decode_layer_payload, decode_values, encode_layer_payload, encode_values, LayerPayload};
pub use session::{beaver_finish, handshake, HelloParams, OnlineOutcome, Session, SessionOptions};
pub use transport::{Direction, MemTransport, Recording, TcpTransport, Transcript, Transport};
