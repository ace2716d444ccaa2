//! One interactive transmission over a channel with noiseless feedback.
//!
//! A [`Strategy`] is a deterministic encoder driven by the received prefix
//! together with a decoder that sees only the received word. Encoders are
//! written as incremental automata: [`Strategy::begin`] builds the state for
//! a message, [`Strategy::next_symbol`] reads the next input symbol off the
//! state, and [`Strategy::observe`] folds the fed-back output into it. The
//! state is a pure function of the message and the received prefix, so
//! cloning it at a branch point is equivalent to replaying the prefix.

use num_bigint::BigUint;
use serde::Serialize;

use crate::channel::{Alphabet, Channel, DirectionState, Symbol};
use crate::error::{Error, Result};

pub trait Strategy: Sync {
    type State: Clone + Send;

    fn alphabet(&self) -> Alphabet;
    fn block_length(&self) -> usize;
    fn message_count(&self) -> BigUint;
    fn name(&self) -> String;

    /// Encoder state before the first symbol is sent.
    fn begin(&self, message: &BigUint) -> Result<Self::State>;

    /// The next input symbol, a function of the message and the received
    /// prefix only.
    fn next_symbol(&self, state: &Self::State) -> Symbol;

    /// Feeds back the output produced for the symbol just sent.
    fn observe(&self, state: &mut Self::State, sent: Symbol, received: Symbol);

    /// Decodes a full received word. `None` when the word is not one the
    /// strategy can produce under its channel.
    fn decode(&self, received: &[Symbol]) -> Option<BigUint>;

    /// Internal consistency checks run by the verifier after every step.
    fn audit(&self, _state: &Self::State) -> std::result::Result<(), String> {
        Ok(())
    }

    fn check_message(&self, message: &BigUint) -> Result<()> {
        let count = self.message_count();
        if message >= &count {
            return Err(Error::MessageOutOfRange {
                message: message.clone(),
                count,
            });
        }
        Ok(())
    }
}

/// The encoder function `c_i(m, y^{i-1})`, evaluated from scratch.
pub fn encode_step<S: Strategy>(
    strategy: &S,
    message: &BigUint,
    prefix: &[Symbol],
) -> Result<Symbol> {
    let n = strategy.block_length();
    if prefix.len() >= n {
        return Err(Error::LengthMismatch {
            got: prefix.len(),
            block: n,
        });
    }
    let mut state = strategy.begin(message)?;
    for &y in prefix {
        let x = strategy.next_symbol(&state);
        strategy.observe(&mut state, x, y);
    }
    Ok(strategy.next_symbol(&state))
}

/// Regenerates the sent symbols for a received prefix `y^i`: returns
/// `x^{i+1}` while the block is unfinished and `x^n` once `i = n`.
pub fn replay<S: Strategy>(
    strategy: &S,
    message: &BigUint,
    received: &[Symbol],
) -> Result<Vec<Symbol>> {
    let n = strategy.block_length();
    if received.len() > n {
        return Err(Error::LengthMismatch {
            got: received.len(),
            block: n,
        });
    }
    let mut state = strategy.begin(message)?;
    let mut sent = Vec::with_capacity(n);
    for &y in received {
        let x = strategy.next_symbol(&state);
        sent.push(x);
        strategy.observe(&mut state, x, y);
    }
    if sent.len() < n {
        sent.push(strategy.next_symbol(&state));
    }
    Ok(sent)
}

/// What an adversary sees when choosing the output for position `position`.
#[derive(Debug)]
pub struct AdversaryView<'a> {
    pub position: usize,
    pub sent: Symbol,
    pub sent_so_far: &'a [Symbol],
    pub received_so_far: &'a [Symbol],
    pub remaining_budget: usize,
    pub direction: DirectionState,
    /// Outputs admissible for `sent` under the current direction.
    pub admissible: &'a [Symbol],
}

pub trait Adversary {
    fn choose(&mut self, view: &AdversaryView<'_>) -> Symbol;
}

/// Never corrupts anything.
#[derive(Clone, Copy, Debug, Default)]
pub struct PassiveAdversary;

impl Adversary for PassiveAdversary {
    fn choose(&mut self, view: &AdversaryView<'_>) -> Symbol {
        view.sent
    }
}

/// Corrupts every symbol it can while budget lasts, picking the smallest
/// admissible output that differs from the input.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyAdversary;

impl Adversary for GreedyAdversary {
    fn choose(&mut self, view: &AdversaryView<'_>) -> Symbol {
        if view.remaining_budget == 0 {
            return view.sent;
        }
        view.admissible
            .iter()
            .copied()
            .find(|&y| y != view.sent)
            .unwrap_or(view.sent)
    }
}

/// Applies a fixed error vector `e_i = y_i - x_i`; positions past the end of
/// the vector are left intact. Offsets are applied blindly, so an offset the
/// channel cannot realize is reported by [`run_session`] as a fault.
#[derive(Clone, Debug, Default)]
pub struct PathAdversary {
    offsets: Vec<i64>,
}

impl PathAdversary {
    pub fn new(offsets: Vec<i64>) -> Self {
        PathAdversary { offsets }
    }

    /// Parses a comma-separated error vector such as `0,-1,0,+1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let offsets = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.trim_start_matches('+')
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidParameters(format!("bad error offset {s:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(PathAdversary { offsets })
    }
}

impl Adversary for PathAdversary {
    fn choose(&mut self, view: &AdversaryView<'_>) -> Symbol {
        let e = self.offsets.get(view.position).copied().unwrap_or(0);
        let y = view.sent as i64 + e;
        y.clamp(0, Symbol::MAX as i64 - 1) as Symbol
    }
}

/// Record of one transmission.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub x: Vec<Symbol>,
    pub y: Vec<Symbol>,
    #[serde(rename = "errors")]
    pub error_positions: Vec<usize>,
    pub direction: DirectionState,
    #[serde(serialize_with = "crate::session::serialize_opt_big")]
    pub decoded: Option<BigUint>,
}

impl Transcript {
    pub fn error_vector(&self) -> Vec<i64> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&x, &y)| y as i64 - x as i64)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }
}

pub(crate) fn serialize_opt_big<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub(crate) fn serialize_big<S: serde::Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Runs one block: the adversary sees each sent symbol before choosing the
/// output. Strategy or adversary misbehaviour is a hard error.
pub fn run_session<S: Strategy, A: Adversary + ?Sized>(
    strategy: &S,
    channel: &Channel,
    adversary: &mut A,
    message: &BigUint,
    budget: usize,
) -> Result<Transcript> {
    let n = strategy.block_length();
    let alphabet = strategy.alphabet();
    if channel.alphabet() != alphabet {
        return Err(Error::InvalidParameters(format!(
            "strategy alphabet {} does not match channel alphabet {}",
            alphabet.size(),
            channel.alphabet().size()
        )));
    }
    if budget > n {
        return Err(Error::InvalidParameters(format!(
            "error budget {budget} exceeds block length {n}"
        )));
    }
    strategy.check_message(message)?;
    let mut state = strategy.begin(message)?;
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut error_positions = Vec::new();
    let mut direction = DirectionState::Undecided;
    for position in 0..n {
        let sent = strategy.next_symbol(&state);
        if !alphabet.contains(sent) {
            return Err(Error::SymbolOutOfAlphabet {
                symbol: sent,
                q: alphabet.size(),
                position,
            });
        }
        let admissible = channel.admissible_outputs(sent, direction)?;
        let view = AdversaryView {
            position,
            sent,
            sent_so_far: &x,
            received_so_far: &y,
            remaining_budget: budget - error_positions.len(),
            direction,
            admissible: &admissible,
        };
        let received = adversary.choose(&view);
        direction = channel
            .step(direction, sent, received)
            .ok_or(Error::InadmissibleOutput {
                input: sent,
                output: received,
                position,
            })?;
        if received != sent {
            if error_positions.len() == budget {
                return Err(Error::BudgetExceeded { budget });
            }
            error_positions.push(position);
        }
        strategy.observe(&mut state, sent, received);
        x.push(sent);
        y.push(received);
    }
    let decoded = strategy.decode(&y);
    Ok(Transcript {
        x,
        y,
        error_positions,
        direction,
        decoded,
    })
}
