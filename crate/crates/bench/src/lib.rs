//! Fixtures shared by the criterion benches.

use zedge::ks::build_loop_channel;
use zedge::{example_channel, peres_basis_set, Channel, KsBasisSet};

pub fn peres() -> KsBasisSet {
    peres_basis_set().expect("Peres rays form a KS basis set")
}

/// Loop-variant Peres channel: 24 inputs, 18 outputs.
pub fn peres_loop_channel() -> Channel {
    build_loop_channel(&peres(), 3).expect("loop decomposition exists")
}

/// Square of the 4-input, 6-output subset channel: 16 inputs, 36 outputs.
pub fn subset_channel_square() -> Channel {
    let n = example_channel();
    n.tensor(&n)
}
