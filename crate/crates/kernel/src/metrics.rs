//! Round, message, and bit accounting.

/// Quantities accounted over a run. `rounds` counts bandwidth-limited
/// physical rounds: a lockstep round in which the longest transmitted
/// payload needs `c` frames of `B` bits contributes `c` (at least 1).
/// Broadcast payloads count once in `total_bits`; per-receiver copies show
/// up in the received columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Metrics {
    pub rounds: u64,
    pub messages_sent: u64,
    pub total_bits: u64,
    pub max_received_bits: u64,
    pub sent_messages: Vec<u64>,
    pub received_messages: Vec<u64>,
    pub received_bits: Vec<u64>,
}

impl Metrics {
    pub fn new(n: usize) -> Self {
        Metrics {
            rounds: 0,
            messages_sent: 0,
            total_bits: 0,
            max_received_bits: 0,
            sent_messages: vec![0; n],
            received_messages: vec![0; n],
            received_bits: vec![0; n],
        }
    }

    pub fn finalize(&mut self) {
        self.max_received_bits = self.received_bits.iter().copied().max().unwrap_or(0);
    }

    pub fn merge(&mut self, other: &Metrics) {
        self.rounds += other.rounds;
        self.messages_sent += other.messages_sent;
        self.total_bits += other.total_bits;
        for (a, b) in self.sent_messages.iter_mut().zip(&other.sent_messages) {
            *a += b;
        }
        for (a, b) in self.received_messages.iter_mut().zip(&other.received_messages) {
            *a += b;
        }
        for (a, b) in self.received_bits.iter_mut().zip(&other.received_bits) {
            *a += b;
        }
        self.finalize();
    }

    pub const CSV_HEADER: &'static str =
        "rounds,messages_sent,total_bits,max_received_bits,max_sent_messages,max_received_messages";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.rounds,
            self.messages_sent,
            self.total_bits,
            self.max_received_bits,
            self.sent_messages.iter().copied().max().unwrap_or(0),
            self.received_messages.iter().copied().max().unwrap_or(0),
        )
    }
}
