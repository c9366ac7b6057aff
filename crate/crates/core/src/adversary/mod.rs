//! Wiretapper strategies and the observations they produce.

mod observation;
mod strategy;
mod zalphabet;

pub use observation::{observation_kernel, LetterChannel, ObservationModel, UserLetter};
pub use strategy::{binomial, enumerate_strategies, mu_for, strategy_count, Strategies, Strategy};
pub use zalphabet::{observe, Observation, ZAlphabet, ZSymbol};
