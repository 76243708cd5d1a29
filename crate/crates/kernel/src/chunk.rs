//! Frame accounting for long logical payloads.

use crate::model::Bandwidth;

/// Rounds needed to push `payload_bits` through one `B`-bit slot:
/// `ceil(bits / B)`, zero for an empty payload.
pub fn charge_rounds(payload_bits: u64, bw: Bandwidth) -> u64 {
    payload_bits.div_ceil(bw.bits())
}
