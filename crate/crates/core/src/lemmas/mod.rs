//! Numerical checks of the analytical steps behind the achievability proofs:
//! conditional entropies given the wiretapper, self-information sets, the two
//! binning lemmas, the Chernoff variant and the rate-constraint elimination.

mod checks;
mod chernoff;
mod dsets;
mod entropy;
mod params;
mod rates;

pub use checks::{
    lemma1_check, lemma1_rhs, lemma2_check, lemma2_ln_rhs, BoundStatus, DrawSetup, Lemma1Report, Lemma2Report,
};
pub use chernoff::{chernoff_bound, chernoff_variant_check, ChernoffReport, ChernoffSpec, Component};
pub use dsets::{
    atypical_decay, atypical_prob_by_types, dset_prob, source_set_prob, wiretap_set_probs, DSetKind, DecayProfile,
    TypicalReport,
};
pub use entropy::{
    brute_force, brute_force_auto, brute_force_split, closed_form, entropy_given_wiretap, full_tap_strategy,
    worst_closed_form, EntropyReport, EntropyValues, LetterEntropies, StrategyChoice,
};
pub use params::{eps_tilde_per_user, proof_params, slack_gammas, source_gammas, EpsConvention, LemmaParams};
pub use rates::{rate_constraint_report, RateConstraintReport, RateConstraints, AGREEMENT_TOL};
