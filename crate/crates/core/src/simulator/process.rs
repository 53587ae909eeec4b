//! Slot-level state machine of the sense/transmit/feedback loop.
//!
//! A packet is sensed at the start of the slot in which it is first sent.
//! The ACK/NACK arrives at the end of the slot. On an ACK the receiver's age
//! drops to the number of slots the delivered packet spent in transmission.
//! On a NACK the packet is retransmitted unless it has already been sent
//! `M` times, in which case it is dropped and a fresh one is sensed in the
//! next slot.

/// What happened during one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotOutcome {
    /// A new packet was sensed at slot start.
    pub sensed: bool,
    pub delivered: bool,
    /// The packet hit the transmission limit and was dropped at slot end.
    pub abandoned: bool,
    pub age_start: u64,
    pub age_end: u64,
    /// Transmissions of the current packet including this slot.
    pub transmissions: u64,
}

#[derive(Clone, Debug)]
pub struct LinkState {
    max_tx: u64,
    age: u64,
    tx_count: u64,
}

impl LinkState {
    /// Fresh link at `t = 0`: receiver age 0, no packet in hand.
    pub fn new(max_tx: u64) -> Self {
        debug_assert!(max_tx >= 1);
        LinkState {
            max_tx,
            age: 0,
            tx_count: 0,
        }
    }

    pub fn age(&self) -> u64 {
        self.age
    }

    pub fn step(&mut self, failed: bool) -> SlotOutcome {
        let sensed = self.tx_count == 0;
        self.tx_count += 1;
        let age_start = self.age;
        let transmissions = self.tx_count;
        let mut abandoned = false;
        if failed {
            self.age += 1;
            if self.tx_count == self.max_tx {
                self.tx_count = 0;
                abandoned = true;
            }
        } else {
            self.age = self.tx_count;
            self.tx_count = 0;
        }
        SlotOutcome {
            sensed,
            delivered: !failed,
            abandoned,
            age_start,
            age_end: self.age,
            transmissions,
        }
    }
}

/// Per-cycle transmission count of the delivered packet and sensing count,
/// given a success cycle of `ytilde` slots: `((Ỹ - 1) mod M) + 1` and
/// `ceil(Ỹ / M)`.
pub fn cycle_counts(ytilde: u64, max_tx: u64) -> (u64, u64) {
    debug_assert!(ytilde >= 1 && max_tx >= 1);
    ((ytilde - 1) % max_tx + 1, ytilde.div_ceil(max_tx))
}
