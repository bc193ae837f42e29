//! Frame carriers: UDP datagrams and an in-process loopback.

use std::net::{SocketAddr, ToSocketAddrs, UdpSocket};
use std::os::fd::AsRawFd;
use std::sync::mpsc;
use std::time::Duration;

use crate::error::{Error, Result};

/// Largest datagram payload over IPv4.
pub const MAX_DATAGRAM: usize = 65_507;

const RECV_BUFFER_BYTES: libc::c_int = 8 << 20;

pub trait FrameTx {
    fn send(&mut self, frame: &[u8]) -> Result<()>;
}

pub trait FrameRx {
    /// Blocks for the next frame; fails with [`Error::Timeout`] once the
    /// receive timeout elapses.
    fn recv(&mut self) -> Result<Vec<u8>>;
}

#[derive(Debug)]
pub struct UdpTx {
    sock: UdpSocket,
}

impl UdpTx {
    pub fn connect(peer: impl ToSocketAddrs) -> Result<Self> {
        let sock = UdpSocket::bind("0.0.0.0:0").map_err(|e| Error::io("bind sender", e))?;
        sock.connect(peer).map_err(|e| Error::io("connect to peer", e))?;
        Ok(Self { sock })
    }
}

impl FrameTx for UdpTx {
    fn send(&mut self, frame: &[u8]) -> Result<()> {
        if frame.len() > MAX_DATAGRAM {
            return Err(Error::InvalidArgument(format!("{}-byte frame exceeds one datagram", frame.len())));
        }
        self.sock.send(frame).map_err(|e| Error::io("send", e))?;
        Ok(())
    }
}

#[derive(Debug)]
pub struct UdpRx {
    sock: UdpSocket,
    buf: Vec<u8>,
}

impl UdpRx {
    pub fn bind(addr: impl ToSocketAddrs, timeout: Duration) -> Result<Self> {
        let sock = UdpSocket::bind(addr).map_err(|e| Error::io("bind receiver", e))?;
        sock.set_read_timeout(Some(timeout)).map_err(|e| Error::io("set timeout", e))?;
        // Best effort; the kernel caps it at net.core.rmem_max.
        unsafe {
            libc::setsockopt(
                sock.as_raw_fd(),
                libc::SOL_SOCKET,
                libc::SO_RCVBUF,
                &RECV_BUFFER_BYTES as *const _ as *const libc::c_void,
                std::mem::size_of::<libc::c_int>() as libc::socklen_t,
            );
        }
        Ok(Self { sock, buf: vec![0; MAX_DATAGRAM + 1] })
    }

    pub fn local_addr(&self) -> Result<SocketAddr> {
        self.sock.local_addr().map_err(|e| Error::io("local address", e))
    }
}

impl FrameRx for UdpRx {
    fn recv(&mut self) -> Result<Vec<u8>> {
        match self.sock.recv(&mut self.buf) {
            Ok(n) => Ok(self.buf[..n].to_vec()),
            Err(e) if matches!(e.kind(), std::io::ErrorKind::WouldBlock | std::io::ErrorKind::TimedOut) => {
                Err(Error::Timeout("no frame received".into()))
            }
            Err(e) => Err(Error::io("recv", e)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoopbackTx(mpsc::Sender<Vec<u8>>);

#[derive(Debug)]
pub struct LoopbackRx {
    rx: mpsc::Receiver<Vec<u8>>,
    timeout: Duration,
}

/// Unbounded in-process frame queue.
pub fn loopback(timeout: Duration) -> (LoopbackTx, LoopbackRx) {
    let (tx, rx) = mpsc::channel();
    (LoopbackTx(tx), LoopbackRx { rx, timeout })
}

impl FrameTx for LoopbackTx {
    fn send(&mut self, frame: &[u8]) -> Result<()> {
        self.0
            .send(frame.to_vec())
            .map_err(|_| Error::Io { context: "loopback send".into(), message: "receiver dropped".into() })
    }
}

impl FrameRx for LoopbackRx {
    fn recv(&mut self) -> Result<Vec<u8>> {
        self.rx.recv_timeout(self.timeout).map_err(|e| match e {
            mpsc::RecvTimeoutError::Timeout => Error::Timeout("no frame received".into()),
            mpsc::RecvTimeoutError::Disconnected => {
                Error::Io { context: "loopback recv".into(), message: "sender dropped".into() }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn udp_round_trip() {
        let mut rx = UdpRx::bind("127.0.0.1:0", Duration::from_secs(2)).unwrap();
        let mut tx = UdpTx::connect(rx.local_addr().unwrap()).unwrap();
        let big = vec![7u8; 61_464];
        tx.send(b"hello").unwrap();
        tx.send(&big).unwrap();
        assert_eq!(rx.recv().unwrap(), b"hello");
        assert_eq!(rx.recv().unwrap(), big);
        assert!(tx.send(&vec![0; MAX_DATAGRAM + 1]).is_err());
    }

    #[test]
    fn udp_timeout() {
        let mut rx = UdpRx::bind("127.0.0.1:0", Duration::from_millis(20)).unwrap();
        assert!(matches!(rx.recv(), Err(Error::Timeout(_))));
    }

    #[test]
    fn loopback_order_and_disconnect() {
        let (mut tx, mut rx) = loopback(Duration::from_millis(20));
        tx.send(&[1]).unwrap();
        tx.send(&[2]).unwrap();
        assert_eq!(rx.recv().unwrap(), vec![1]);
        assert_eq!(rx.recv().unwrap(), vec![2]);
        assert!(matches!(rx.recv(), Err(Error::Timeout(_))));
        drop(tx);
        assert!(matches!(rx.recv(), Err(Error::Io { .. })));
    }
}
