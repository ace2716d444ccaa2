//! The modified rubber method.
//!
//! The receiver keeps a stack of received symbols. A run of `r` rubber
//! symbols on top of the stack means "the symbol under this run arrived
//! corrupted": the run is popped and the symbol under it is moved one step
//! in the correction direction. On the Z-channel the rubber is `q-1` and the
//! correction is `+1`; on the inverse Z-channel the rubber is `0` and the
//! correction is `-1`. Neither channel can turn another symbol into the
//! rubber, so a corrupted symbol never needs to be retransmitted.
//!
//! The sender simulates the receiver stack from the feedback. While the
//! stack is a prefix of the information word it sends the next information
//! symbol; otherwise it sends the rubber symbol. Once the information word
//! is on the stack it pads with the symbol the channel cannot alter.

use num_bigint::BigUint;
use serde::Serialize;

use crate::channel::{Alphabet, Symbol};
use crate::codebook::{Codebook, RunConstraint};
use crate::error::{Error, Result};
use crate::session::Strategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Generalized Z-channel, errors decrement.
    Z,
    /// Generalized inverse Z-channel, errors increment.
    InvZ,
}

impl Side {
    pub fn rubber(self, alphabet: Alphabet) -> Symbol {
        match self {
            Side::Z => alphabet.top(),
            Side::InvZ => 0,
        }
    }

    /// The symbol the channel leaves untouched.
    pub fn fill(self, alphabet: Alphabet) -> Symbol {
        match self {
            Side::Z => 0,
            Side::InvZ => alphabet.top(),
        }
    }

    fn correct(self, s: Symbol, alphabet: Alphabet) -> Symbol {
        match self {
            Side::Z => (s + 1).min(alphabet.top()),
            Side::InvZ => s.saturating_sub(1),
        }
    }
}

/// Stack automaton shared by the sender simulation and the decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RubberAutomaton {
    alphabet: Alphabet,
    r: usize,
    side: Side,
}

impl RubberAutomaton {
    pub fn new(q: usize, r: usize, side: Side) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        if r == 0 {
            return Err(Error::InvalidParameters(
                "rubber length must be >= 1".into(),
            ));
        }
        Ok(RubberAutomaton { alphabet, r, side })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn run_length(&self) -> usize {
        self.r
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn rubber(&self) -> Symbol {
        self.side.rubber(self.alphabet)
    }

    pub fn fill(&self) -> Symbol {
        self.side.fill(self.alphabet)
    }

    /// Information words must avoid this run.
    pub fn constraint(&self) -> RunConstraint {
        RunConstraint::new(self.alphabet.size(), self.rubber(), self.r).expect("valid parameters")
    }

    /// Pushes one received symbol and collapses rubber runs. Returns the
    /// number of runs popped.
    pub fn push(&self, stack: &mut Vec<Symbol>, y: Symbol) -> usize {
        let b = self.rubber();
        stack.push(y);
        let mut pops = 0;
        while stack.len() >= self.r && stack[stack.len() - self.r..].iter().all(|&s| s == b) {
            stack.truncate(stack.len() - self.r);
            pops += 1;
            match stack.last_mut() {
                Some(top) => *top = self.side.correct(*top, self.alphabet),
                None => break,
            }
        }
        pops
    }

    pub fn run(&self, received: &[Symbol]) -> Vec<Symbol> {
        let mut stack = Vec::with_capacity(received.len());
        for &y in received {
            self.push(&mut stack, y);
        }
        stack
    }

    /// Sender rule for the next symbol given the simulated stack.
    pub fn next_symbol(&self, stack: &[Symbol], target: &[Symbol]) -> Symbol {
        let agreed = common_prefix(stack, target);
        if agreed == target.len() {
            self.fill()
        } else if agreed == stack.len() {
            target[agreed]
        } else {
            self.rubber()
        }
    }
}

pub(crate) fn common_prefix(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `A(r, b)` on one asymmetric channel: information length `k = n - r*t`,
/// messages are the information words avoiding `b^r`.
#[derive(Clone, Debug)]
pub struct ModifiedRubber {
    automaton: RubberAutomaton,
    n: usize,
    t: usize,
    book: Codebook,
}

#[derive(Clone, Debug)]
pub struct RubberState {
    target: Vec<Symbol>,
    stack: Vec<Symbol>,
    received: Vec<Symbol>,
    errors: usize,
    certified: usize,
    violation: Option<String>,
}

impl RubberState {
    pub fn stack(&self) -> &[Symbol] {
        &self.stack
    }

    pub fn errors(&self) -> usize {
        self.errors
    }
}

impl ModifiedRubber {
    pub fn new(q: usize, r: usize, side: Side, n: usize, t: usize) -> Result<Self> {
        let automaton = RubberAutomaton::new(q, r, side)?;
        let overhead = r.checked_mul(t).filter(|&o| o <= n).ok_or_else(|| {
            Error::InvalidParameters(format!("block length {n} is shorter than r*t = {r}*{t}"))
        })?;
        let book = Codebook::new(automaton.constraint(), n - overhead);
        Ok(ModifiedRubber {
            automaton,
            n,
            t,
            book,
        })
    }

    pub fn automaton(&self) -> &RubberAutomaton {
        &self.automaton
    }

    pub fn info_length(&self) -> usize {
        self.book.len()
    }

    pub fn design_errors(&self) -> usize {
        self.t
    }

    pub fn codebook(&self) -> &Codebook {
        &self.book
    }
}

impl Strategy for ModifiedRubber {
    type State = RubberState;

    fn alphabet(&self) -> Alphabet {
        self.automaton.alphabet
    }

    fn block_length(&self) -> usize {
        self.n
    }

    fn message_count(&self) -> BigUint {
        self.book.size()
    }

    fn name(&self) -> String {
        let side = match self.automaton.side {
            Side::Z => "z",
            Side::InvZ => "invz",
        };
        format!("rubber(r={},side={side})", self.automaton.r)
    }

    fn begin(&self, message: &BigUint) -> Result<RubberState> {
        self.check_message(message)?;
        Ok(RubberState {
            target: self.book.unrank(message)?,
            stack: Vec::with_capacity(self.n),
            received: Vec::with_capacity(self.n),
            errors: 0,
            certified: 0,
            violation: None,
        })
    }

    fn next_symbol(&self, state: &RubberState) -> Symbol {
        self.automaton.next_symbol(&state.stack, &state.target)
    }

    fn observe(&self, state: &mut RubberState, sent: Symbol, received: Symbol) {
        let k = state.target.len();
        let position = state.received.len() + 1;
        let working = state.certified < k;
        if working && state.violation.is_none() {
            let allowed = k + self.automaton.r * state.errors;
            if position > allowed {
                state.violation = Some(format!(
                    "working symbol at position {position} exceeds k + r*errors = {allowed}"
                ));
            }
        }
        if received != sent {
            state.errors += 1;
        }
        state.received.push(received);
        self.automaton.push(&mut state.stack, received);
        let agreed = common_prefix(&state.stack, &state.target);
        if agreed < state.certified && state.violation.is_none() {
            state.violation = Some(format!(
                "stack lost certified information: {} -> {agreed}",
                state.certified
            ));
        }
        state.certified = agreed;
    }

    fn decode(&self, received: &[Symbol]) -> Option<BigUint> {
        if received.len() != self.n {
            return None;
        }
        let stack = self.automaton.run(received);
        let k = self.book.len();
        if stack.len() < k {
            return None;
        }
        self.book.rank(&stack[..k]).ok()
    }

    fn audit(&self, state: &RubberState) -> std::result::Result<(), String> {
        if let Some(v) = &state.violation {
            return Err(v.clone());
        }
        let decoder_stack = self.automaton.run(&state.received);
        if decoder_stack != state.stack {
            return Err(format!(
                "sender stack {:?} differs from decoder stack {:?}",
                state.stack, decoder_stack
            ));
        }
        Ok(())
    }
}
