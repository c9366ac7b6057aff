//! Strong-secrecy rate regions for the two-user multiple-access wiretap
//! channel II and exact small-blocklength experiments with the random-binning
//! construction behind them.

pub mod adversary;
pub mod binning;
pub mod caps;
pub mod channels;
pub mod cli;
pub mod error;
pub mod info;
pub mod lemmas;
pub mod regions;
pub mod rng;
pub mod seq;
pub mod stats;

pub use caps::Caps;
pub use error::{Error, Result};
