//! Finite-blocklength random binning: bin maps, exact induced distributions,
//! MAP decoding and protocol runs.

mod decode;
mod joint;
mod params;
mod protocol;
mod realization;

pub use decode::{sw_decode, Decoder};
pub use joint::{
    induced_joint, split_joint, strategy_leakage, InducedJoint, KlDecomposition, LeakageValues, SplitJoint,
    UserPart,
};
pub use params::{bin_bits, BinCounts, ProtocolParams, Rates, MAX_BIN_BITS};
pub use protocol::{
    estimate_error, leakage_max, run_protocol, tv_uniform, user_tv, user_wf, ErrorEstimate, LeakageMax,
    ProtocolRun, StrategyLeakage,
};
pub use realization::{sample_binning, BinKind, BinningRealization};
