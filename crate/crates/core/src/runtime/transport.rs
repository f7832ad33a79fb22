//! Blocking, ordered, reliable frame transports.

use std::io::{BufReader, ErrorKind, Write};
use std::net::{Shutdown, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::time::{Duration, Instant};

use super::frame::Frame;
use crate::error::{Error, Result};

/// FIFO per direction. `recv` blocks until a frame arrives. `send` must not
/// block on the peer for at least one full frame.
pub trait Transport: Send {
    fn send(&mut self, frame: &Frame) -> Result<()>;
    fn recv(&mut self) -> Result<Frame>;
    fn close(&mut self) -> Result<()> {
        Ok(())
    }
}

impl<T: Transport + ?Sized> Transport for &mut T {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        (**self).send(frame)
    }

    fn recv(&mut self) -> Result<Frame> {
        (**self).recv()
    }

    fn close(&mut self) -> Result<()> {
        (**self).close()
    }
}

fn closed() -> Error {
    Error::Connection(std::io::Error::new(ErrorKind::BrokenPipe, "peer endpoint dropped"))
}

/// In-memory duplex link for loopback runs. Frames cross as encoded bytes.
#[derive(Debug)]
pub struct MemTransport {
    tx: Option<Sender<Vec<u8>>>,
    rx: Receiver<Vec<u8>>,
}

impl MemTransport {
    pub fn pair() -> (MemTransport, MemTransport) {
        let (t0, r1) = channel();
        let (t1, r0) = channel();
        (
            MemTransport { tx: Some(t0), rx: r0 },
            MemTransport { tx: Some(t1), rx: r1 },
        )
    }

    /// Sends raw bytes as if they were a frame. For fault-injection tests.
    pub fn send_raw(&mut self, bytes: Vec<u8>) -> Result<()> {
        self.tx.as_ref().ok_or_else(closed)?.send(bytes).map_err(|_| closed())
    }
}

impl Transport for MemTransport {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        self.send_raw(frame.encode())
    }

    fn recv(&mut self) -> Result<Frame> {
        let bytes = self.rx.recv().map_err(|_| closed())?;
        Frame::decode(&bytes)
    }

    fn close(&mut self) -> Result<()> {
        self.tx = None;
        Ok(())
    }
}

/// One TCP connection. Party 1 listens, party 0 connects.
#[derive(Debug)]
pub struct TcpTransport {
    writer: TcpStream,
    reader: BufReader<TcpStream>,
}

impl TcpTransport {
    pub fn from_stream(stream: TcpStream) -> Result<Self> {
        stream.set_nodelay(true)?;
        let reader = BufReader::new(stream.try_clone()?);
        Ok(Self { writer: stream, reader })
    }

    /// Connects, retrying refused attempts until `timeout` elapses.
    pub fn connect(addr: impl ToSocketAddrs + Clone, timeout: Duration) -> Result<Self> {
        let deadline = Instant::now() + timeout;
        loop {
            match TcpStream::connect(addr.clone()) {
                Ok(s) => return Self::from_stream(s),
                Err(e) if Instant::now() < deadline && e.kind() == ErrorKind::ConnectionRefused => {
                    std::thread::sleep(Duration::from_millis(20));
                }
                Err(e) => return Err(Error::Connection(e)),
            }
        }
    }

    /// Accepts exactly one peer on `listener`.
    pub fn accept(listener: &TcpListener) -> Result<Self> {
        let (s, _) = listener.accept()?;
        Self::from_stream(s)
    }
}

impl Transport for TcpTransport {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        self.writer.write_all(&frame.encode())?;
        self.writer.flush()?;
        Ok(())
    }

    fn recv(&mut self) -> Result<Frame> {
        Frame::read_from(&mut self.reader)
    }

    fn close(&mut self) -> Result<()> {
        match self.writer.shutdown(Shutdown::Write) {
            Err(e) if e.kind() != ErrorKind::NotConnected => Err(e.into()),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Sent,
    Received,
}

/// Every frame that crossed a transport, as encoded bytes, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<(Direction, Vec<u8>)>,
}

impl Transcript {
    pub fn frames(&self, dir: Direction) -> impl Iterator<Item = Frame> + '_ {
        self.entries
            .iter()
            .filter(move |(d, _)| *d == dir)
            .map(|(_, b)| Frame::decode(b).expect("recorded frames are well formed"))
    }

    pub fn count(&self, dir: Direction) -> usize {
        self.entries.iter().filter(|(d, _)| *d == dir).count()
    }

    /// Total payload bytes in one direction.
    pub fn payload_bytes(&self, dir: Direction) -> usize {
        self.frames(dir).map(|f| f.payload.len()).sum()
    }
}

/// Wraps a transport and records every frame.
#[derive(Debug)]
pub struct Recording<T> {
    inner: T,
    transcript: Transcript,
}

impl<T: Transport> Recording<T> {
    pub fn new(inner: T) -> Self {
        Self {
            inner,
            transcript: Transcript::default(),
        }
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_parts(self) -> (T, Transcript) {
        (self.inner, self.transcript)
    }
}

impl<T: Transport> Transport for Recording<T> {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        self.inner.send(frame)?;
        self.transcript.entries.push((Direction::Sent, frame.encode()));
        Ok(())
    }

    fn recv(&mut self) -> Result<Frame> {
        let f = self.inner.recv()?;
        self.transcript.entries.push((Direction::Received, f.encode()));
        Ok(f)
    }

    fn close(&mut self) -> Result<()> {
        self.inner.close()
    }
}
