//! Feedback coding over adversarial q-ary channels.
//!
//! The crate models discrete channels as bipartite graphs, implements
//! feedback encoders for the generalized Z, inverse Z and unidirectional
//! channels, certifies them by exhaustive search over every admissible
//! adversary, and evaluates the capacity-error-function bounds that go with
//! them.
//!
//! Module map:
//!
//! * [`channel`]: channel graphs, the unidirectional pair, direction state.
//! * [`codebook`]: strings avoiding a run `b^r`; counting, ranking, unranking.
//! * [`session`]: the [`Strategy`] contract, adversaries and single sessions.
//! * [`strategies`]: zero-error, modified rubber and unidirectional rubber.
//! * [`bounds`]: zero-error LP, `z_r`, rate curves and the sphere bound.
//! * [`verifier`]: exhaustive game-tree certification.
//! * [`curves`]: CSV emission of the bound curves.

pub mod bounds;
pub mod channel;
pub mod codebook;
pub mod curves;
pub mod error;
pub mod session;
pub mod strategies;
pub mod verifier;

pub use channel::{
    Alphabet, Channel, ChannelGraph, DirectionState, Symbol, UnidirectionalChannel, STAR,
};
pub use codebook::{CountTable, RunConstraint};
pub use error::{Error, Result};
pub use session::{
    encode_step, replay, run_session, Adversary, GreedyAdversary, PassiveAdversary, PathAdversary,
    Strategy, Transcript,
};
pub use strategies::{
    AnyStrategy, IdentityCode, ModifiedRubber, Side, UnidirectionalRubber, ZeroErrorUnidirectional,
};
pub use verifier::{max_errors_survived, verify_successful, Outcome, Verdict, VerifyOptions};
