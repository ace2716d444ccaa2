//! Zero-error strategy for the unidirectional (Z, inverse Z) channel.
//!
//! The first `n-1` symbols carry the message using even symbols only. Even
//! symbols stay pairwise distinguishable under either channel once the
//! receiver knows which one was active, and the last symbol tells it: `0`
//! when nothing went wrong or the channel decremented, `q-1` when the
//! channel incremented. A received `1` in the last position means the flag
//! itself was the only thing corrupted.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::channel::{Alphabet, DirectionState, Symbol};
use crate::error::{Error, Result};
use crate::session::Strategy;

#[derive(Clone, Debug)]
pub struct ZeroErrorUnidirectional {
    alphabet: Alphabet,
    n: usize,
}

#[derive(Clone, Debug)]
pub struct ZeroErrorState {
    body: Vec<Symbol>,
    position: usize,
    direction: DirectionState,
}

impl ZeroErrorUnidirectional {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        if n == 0 {
            return Err(Error::InvalidParameters("block length must be >= 1".into()));
        }
        Ok(ZeroErrorUnidirectional { alphabet, n })
    }

    /// Number of even symbols, `ceil(q/2)`.
    pub fn radix(&self) -> usize {
        self.alphabet.size().div_ceil(2)
    }

    fn digits(&self, message: &BigUint) -> Vec<Symbol> {
        let radix = BigUint::from(self.radix());
        let mut m = message.clone();
        let mut out = vec![0; self.n - 1];
        for slot in out.iter_mut().rev() {
            let (quot, rem) = m.div_rem(&radix);
            *slot = 2 * rem.to_u16().expect("digit below radix");
            m = quot;
        }
        out
    }
}

impl Strategy for ZeroErrorUnidirectional {
    type State = ZeroErrorState;

    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn block_length(&self) -> usize {
        self.n
    }

    fn message_count(&self) -> BigUint {
        BigUint::from(self.radix()).pow((self.n - 1) as u32)
    }

    fn name(&self) -> String {
        "zero-error".into()
    }

    fn begin(&self, message: &BigUint) -> Result<ZeroErrorState> {
        self.check_message(message)?;
        Ok(ZeroErrorState {
            body: self.digits(message),
            position: 0,
            direction: DirectionState::Undecided,
        })
    }

    fn next_symbol(&self, state: &ZeroErrorState) -> Symbol {
        match state.body.get(state.position) {
            Some(&s) => s,
            None if state.direction == DirectionState::CommittedPositive => self.alphabet.top(),
            None => 0,
        }
    }

    fn observe(&self, state: &mut ZeroErrorState, sent: Symbol, received: Symbol) {
        if let Some(d) = state.direction.after(received as i64 - sent as i64) {
            state.direction = d;
        }
        state.position += 1;
    }

    fn decode(&self, received: &[Symbol]) -> Option<BigUint> {
        let (&flag, body) = received.split_last()?;
        if received.len() != self.n {
            return None;
        }
        let top = self.alphabet.top();
        let restore: fn(Symbol) -> Option<Symbol> = if flag == top {
            |y| Some(if y % 2 == 1 { y - 1 } else { y })
        } else if flag == 0 {
            |y| Some(if y % 2 == 1 { y + 1 } else { y })
        } else if flag == 1 {
            |y| (y % 2 == 0).then_some(y)
        } else {
            return None;
        };
        let radix = BigUint::from(self.radix());
        let mut m = BigUint::zero();
        for &y in body {
            let x = restore(y).filter(|&x| x <= top)?;
            m = m * &radix + BigUint::from(x / 2);
        }
        Some(m)
    }
}
