//! Non-adaptive control code: message `m` is sent as its base-q digits and
//! the feedback is ignored.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::channel::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::session::Strategy;

#[derive(Clone, Debug)]
pub struct IdentityCode {
    alphabet: Alphabet,
    n: usize,
    messages: BigUint,
}

impl IdentityCode {
    /// All `q^n` words.
    pub fn new(q: usize, n: usize) -> Result<Self> {
        Alphabet::new(q)?;
        Self::with_messages(q, n, BigUint::from(q).pow(n as u32))
    }

    /// The first `messages` words in lexicographic order.
    pub fn with_messages(q: usize, n: usize, messages: BigUint) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        if messages > BigUint::from(q).pow(n as u32) || messages.is_zero() {
            return Err(Error::InvalidParameters(format!(
                "identity code of length {n} over {q} symbols cannot hold {messages} messages"
            )));
        }
        Ok(IdentityCode {
            alphabet,
            n,
            messages,
        })
    }
}

#[derive(Clone, Debug)]
pub struct IdentityState {
    word: Vec<Symbol>,
    position: usize,
}

impl Strategy for IdentityCode {
    type State = IdentityState;

    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn block_length(&self) -> usize {
        self.n
    }

    fn message_count(&self) -> BigUint {
        self.messages.clone()
    }

    fn name(&self) -> String {
        "identity".into()
    }

    fn begin(&self, message: &BigUint) -> Result<IdentityState> {
        self.check_message(message)?;
        let q = BigUint::from(self.alphabet.size());
        let mut m = message.clone();
        let mut word = vec![0; self.n];
        for slot in word.iter_mut().rev() {
            let (quot, rem) = m.div_rem(&q);
            *slot = rem.to_u16().expect("digit below q");
            m = quot;
        }
        Ok(IdentityState { word, position: 0 })
    }

    fn next_symbol(&self, state: &IdentityState) -> Symbol {
        state.word[state.position]
    }

    fn observe(&self, state: &mut IdentityState, _sent: Symbol, _received: Symbol) {
        state.position += 1;
    }

    fn decode(&self, received: &[Symbol]) -> Option<BigUint> {
        if received.len() != self.n {
            return None;
        }
        let q = BigUint::from(self.alphabet.size());
        Some(
            received
                .iter()
                .fold(BigUint::zero(), |acc, &y| acc * &q + BigUint::from(y)),
        )
    }
}
