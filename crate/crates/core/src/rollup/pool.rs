//! In-memory FIFO transaction pool.

use std::collections::{HashSet, VecDeque};
use std::io::{BufRead, Write};
use std::sync::Mutex;

use super::tx::{Tx, TxRejection};
use super::RollupError;

pub type Ticket = u64;

#[derive(Debug, Default)]
struct Inner {
    queue: VecDeque<(Ticket, Tx)>,
    pending: HashSet<(usize, u64)>,
    next_ticket: Ticket,
}

/// Submissions may come from several threads; a mutex serializes them.
#[derive(Debug)]
pub struct Pool {
    capacity: usize,
    inner: Mutex<Inner>,
}

impl Pool {
    /// `capacity` is the number of accounts in the state tree, for index checks.
    pub fn new(capacity: usize) -> Self {
        Self { capacity, inner: Mutex::new(Inner::default()) }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn submit(&self, tx: Tx) -> Result<Ticket, RollupError> {
        tx.check_structure(self.capacity).map_err(RollupError::Rejected)?;
        let mut inner = self.lock();
        if !inner.pending.insert((tx.from, tx.nonce)) {
            return Err(RollupError::DuplicateNonce { from: tx.from, nonce: tx.nonce });
        }
        let ticket = inner.next_ticket;
        inner.next_ticket += 1;
        inner.queue.push_back((ticket, tx));
        Ok(ticket)
    }

    pub fn peek(&self) -> Option<Tx> {
        self.lock().queue.front().map(|(_, tx)| tx.clone())
    }

    pub fn pop(&self) -> Option<(Ticket, Tx)> {
        let mut inner = self.lock();
        let (ticket, tx) = inner.queue.pop_front()?;
        inner.pending.remove(&(tx.from, tx.nonce));
        Some((ticket, tx))
    }

    pub fn len(&self) -> usize {
        self.lock().queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reads one JSON object per line (`from`, `to`, `amount`, `nonce`, `secret`).
    /// Blank lines are skipped. Returns the ticket or rejection for every line.
    pub fn submit_json_lines(&self, reader: impl BufRead) -> Result<Vec<Result<Ticket, RollupError>>, RollupError> {
        let mut out = Vec::new();
        for line in reader.lines() {
            let line = line.map_err(|e| RollupError::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            out.push(
                serde_json::from_str::<Tx>(&line)
                    .map_err(|e| RollupError::Malformed(e.to_string()))
                    .and_then(|tx| self.submit(tx)),
            );
        }
        Ok(out)
    }

    /// Writes queued transactions as JSON lines, front first.
    pub fn snapshot_json_lines(&self, mut w: impl Write) -> Result<(), RollupError> {
        for (_, tx) in &self.lock().queue {
            let line = serde_json::to_string(tx).map_err(|e| RollupError::Malformed(e.to_string()))?;
            writeln!(w, "{line}").map_err(|e| RollupError::Io(e.to_string()))?;
        }
        Ok(())
    }
}

impl From<TxRejection> for RollupError {
    fn from(r: TxRejection) -> Self {
        RollupError::Rejected(r)
    }
}
