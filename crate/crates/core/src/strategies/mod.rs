//! Feedback coding strategies.

mod identity;
mod rubber;
mod unidirectional;
mod zero_error;

use num_bigint::BigUint;

pub use identity::{IdentityCode, IdentityState};
pub use rubber::{ModifiedRubber, RubberAutomaton, RubberState, Side};
pub use unidirectional::{UniPhase, UniState, UnidirectionalRubber};
pub use zero_error::{ZeroErrorState, ZeroErrorUnidirectional};

use crate::channel::{Alphabet, Symbol};
use crate::error::Result;
use crate::session::Strategy;

/// Rate `(1 - tau) log_q(q-1)` of the rubber method with a single rubber
/// symbol, as a function of `tau`.
pub fn single_rubber_rate(q: usize) -> impl Fn(f64) -> f64 {
    let base = ((q - 1) as f64).ln() / (q as f64).ln();
    move |tau: f64| ((1.0 - tau) * base).max(0.0)
}

/// Any of the strategies, for callers that pick one at run time.
#[derive(Clone, Debug)]
pub enum AnyStrategy {
    Identity(IdentityCode),
    ZeroError(ZeroErrorUnidirectional),
    Rubber(ModifiedRubber),
    UniRubber(UnidirectionalRubber),
}

#[derive(Clone, Debug)]
pub enum AnyState {
    Identity(IdentityState),
    ZeroError(ZeroErrorState),
    Rubber(RubberState),
    UniRubber(UniState),
}

macro_rules! dispatch {
    ($self:expr, $s:ident => $body:expr) => {
        match $self {
            AnyStrategy::Identity($s) => $body,
            AnyStrategy::ZeroError($s) => $body,
            AnyStrategy::Rubber($s) => $body,
            AnyStrategy::UniRubber($s) => $body,
        }
    };
}

macro_rules! dispatch_state {
    ($self:expr, $state:expr, $s:ident, $st:ident => $body:expr) => {
        match ($self, $state) {
            (AnyStrategy::Identity($s), AnyState::Identity($st)) => $body,
            (AnyStrategy::ZeroError($s), AnyState::ZeroError($st)) => $body,
            (AnyStrategy::Rubber($s), AnyState::Rubber($st)) => $body,
            (AnyStrategy::UniRubber($s), AnyState::UniRubber($st)) => $body,
            _ => unreachable!("state built by a different strategy"),
        }
    };
}

impl Strategy for AnyStrategy {
    type State = AnyState;

    fn alphabet(&self) -> Alphabet {
        dispatch!(self, s => s.alphabet())
    }

    fn block_length(&self) -> usize {
        dispatch!(self, s => s.block_length())
    }

    fn message_count(&self) -> BigUint {
        dispatch!(self, s => s.message_count())
    }

    fn name(&self) -> String {
        dispatch!(self, s => s.name())
    }

    fn begin(&self, message: &BigUint) -> Result<AnyState> {
        Ok(match self {
            AnyStrategy::Identity(s) => AnyState::Identity(s.begin(message)?),
            AnyStrategy::ZeroError(s) => AnyState::ZeroError(s.begin(message)?),
            AnyStrategy::Rubber(s) => AnyState::Rubber(s.begin(message)?),
            AnyStrategy::UniRubber(s) => AnyState::UniRubber(s.begin(message)?),
        })
    }

    fn next_symbol(&self, state: &AnyState) -> Symbol {
        dispatch_state!(self, state, s, st => s.next_symbol(st))
    }

    fn observe(&self, state: &mut AnyState, sent: Symbol, received: Symbol) {
        dispatch_state!(self, state, s, st => s.observe(st, sent, received))
    }

    fn decode(&self, received: &[Symbol]) -> Option<BigUint> {
        dispatch!(self, s => s.decode(received))
    }

    fn audit(&self, state: &AnyState) -> std::result::Result<(), String> {
        dispatch_state!(self, state, s, st => s.audit(st))
    }
}

impl From<IdentityCode> for AnyStrategy {
    fn from(s: IdentityCode) -> Self {
        AnyStrategy::Identity(s)
    }
}

impl From<ZeroErrorUnidirectional> for AnyStrategy {
    fn from(s: ZeroErrorUnidirectional) -> Self {
        AnyStrategy::ZeroError(s)
    }
}

impl From<ModifiedRubber> for AnyStrategy {
    fn from(s: ModifiedRubber) -> Self {
        AnyStrategy::Rubber(s)
    }
}

impl From<UnidirectionalRubber> for AnyStrategy {
    fn from(s: UnidirectionalRubber) -> Self {
        AnyStrategy::UniRubber(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rubber_values() {
        let f = single_rubber_rate(5);
        assert!((f(0.5) - 0.5 * 4f64.ln() / 5f64.ln()).abs() < 1e-12);
        assert!((f(0.5) - 0.430_676_558).abs() < 1e-6);
        assert!((f(0.0) - 4f64.ln() / 5f64.ln()).abs() < 1e-15);
        let g = single_rubber_rate(2);
        for tau in [0.0, 0.3, 1.0] {
            assert_eq!(g(tau), 0.0);
        }
    }
}
