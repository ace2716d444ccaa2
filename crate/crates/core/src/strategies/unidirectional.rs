//! Rubber strategy for the unidirectional (Z, inverse Z) channel.
//!
//! Block layout: `n - 1` body symbols followed by one flag symbol.
//!
//! The sender starts with the Z-side rubber automaton (rubber `q-1`). The
//! first error tells it which half is active:
//!
//! * decrement: keep the Z-side automaton, pad the body with `0`, flag `0`;
//! * increment: mark the spot with a run of `q-1` symbols, then retransmit
//!   the information the receiver cannot certify with the inverse-Z
//!   automaton (rubber `0`) on symbols shifted by `k -> k+1 mod q`; pad with
//!   `q-1`, flag `q-1`.
//!
//! The receiver reads the flag. On `q-1` it locates the first run of `r`
//! copies of `q-1` in the body (or, if none is complete, the trailing block
//! of `q-1`), trusts everything before the symbol preceding that run, and
//! decodes the rest of the information from the symbols following the run.
//! Otherwise it runs the Z-side decoder on the whole body.
//!
//! When the corrupted symbol itself became `q-1` it merges with `q-1`
//! symbols already sent just before it, so the run can start up to `r-1`
//! positions before the error. The sender simulates this parse and sends
//! only as many marker symbols as the run still needs, then retransmits from
//! the first information symbol the receiver does not trust.
//!
//! Sizing: the first increment costs `r + 1` symbols (marker plus the
//! retransmitted symbol), every other error `r`, so `k = n - r*t - 2`.

use num_bigint::BigUint;
use serde::Serialize;

use super::rubber::RubberAutomaton;
use super::Side;
use crate::channel::{Alphabet, Symbol};
use crate::codebook::Codebook;
use crate::error::{Error, Result};
use crate::session::Strategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "phase")]
pub enum UniPhase {
    AssumeZ,
    CommittedZ {
        first_error: usize,
    },
    CommittedInvZ {
        first_error: usize,
        /// Body index where the receiver will find the marker run.
        run_start: usize,
        /// Information symbols the receiver trusts from before the run.
        certified: usize,
    },
}

#[derive(Clone, Debug)]
pub struct UnidirectionalRubber {
    alphabet: Alphabet,
    r: usize,
    n: usize,
    t: usize,
    z_side: RubberAutomaton,
    inv_side: RubberAutomaton,
    book: Codebook,
}

#[derive(Clone, Debug)]
pub struct UniState {
    target: Vec<Symbol>,
    shifted_target: Vec<Symbol>,
    received: Vec<Symbol>,
    phase: UniPhase,
    z_stack: Vec<Symbol>,
    inv_stack: Vec<Symbol>,
}

impl UniState {
    pub fn phase(&self) -> UniPhase {
        self.phase
    }
}

impl UnidirectionalRubber {
    pub fn new(q: usize, r: usize, n: usize, t: usize) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        if q < 3 {
            return Err(Error::InvalidParameters(
                "unidirectional rubber needs q >= 3: for q = 2 the flag values 1 and q-1 coincide"
                    .into(),
            ));
        }
        if r < 2 {
            return Err(Error::InvalidParameters(
                "unidirectional rubber needs r >= 2".into(),
            ));
        }
        let k = r
            .checked_mul(t)
            .and_then(|o| n.checked_sub(o + 2))
            .ok_or_else(|| {
                Error::InvalidParameters(format!(
                    "block length {n} is shorter than r*t + 2 = {}",
                    r * t + 2
                ))
            })?;
        let z_side = RubberAutomaton::new(q, r, Side::Z)?;
        let inv_side = RubberAutomaton::new(q, r, Side::InvZ)?;
        Ok(UnidirectionalRubber {
            alphabet,
            r,
            n,
            t,
            z_side,
            inv_side,
            book: Codebook::new(z_side.constraint(), k),
        })
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

    fn body_length(&self) -> usize {
        self.n - 1
    }

    fn shift(&self, s: Symbol) -> Symbol {
        ((s as usize + 1) % self.alphabet.size()) as Symbol
    }

    fn unshift(&self, s: Symbol) -> Symbol {
        let q = self.alphabet.size();
        ((s as usize + q - 1) % q) as Symbol
    }

    /// Where the receiver places the marker run: the first complete run of
    /// `r` copies of `q-1`, else the start of the trailing block of `q-1`.
    pub fn locate_marker(&self, body: &[Symbol]) -> usize {
        let top = self.alphabet.top();
        if let Some(p) = body
            .windows(self.r)
            .position(|w| w.iter().all(|&s| s == top))
        {
            return p;
        }
        body.len() - body.iter().rev().take_while(|&&s| s == top).count()
    }
}

impl Strategy for UnidirectionalRubber {
    type State = UniState;

    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn block_length(&self) -> usize {
        self.n
    }

    fn message_count(&self) -> BigUint {
        self.book.size()
    }

    fn name(&self) -> String {
        format!("uni-rubber(r={})", self.r)
    }

    fn begin(&self, message: &BigUint) -> Result<UniState> {
        self.check_message(message)?;
        Ok(UniState {
            target: self.book.unrank(message)?,
            shifted_target: Vec::new(),
            received: Vec::with_capacity(self.n),
            phase: UniPhase::AssumeZ,
            z_stack: Vec::with_capacity(self.n),
            inv_stack: Vec::new(),
        })
    }

    fn next_symbol(&self, state: &UniState) -> Symbol {
        let pos = state.received.len();
        let top = self.alphabet.top();
        if pos >= self.body_length() {
            return match state.phase {
                UniPhase::CommittedInvZ { .. } => top,
                _ => 0,
            };
        }
        match state.phase {
            UniPhase::AssumeZ | UniPhase::CommittedZ { .. } => {
                self.z_side.next_symbol(&state.z_stack, &state.target)
            }
            UniPhase::CommittedInvZ { run_start, .. } if pos < run_start + self.r => top,
            UniPhase::CommittedInvZ { .. } => self
                .inv_side
                .next_symbol(&state.inv_stack, &state.shifted_target),
        }
    }

    fn observe(&self, state: &mut UniState, sent: Symbol, received: Symbol) {
        let pos = state.received.len();
        let top = self.alphabet.top();
        if pos < self.body_length() {
            match state.phase {
                UniPhase::AssumeZ if received > sent => {
                    let run_start = if received == top {
                        pos - state
                            .received
                            .iter()
                            .rev()
                            .take_while(|&&s| s == top)
                            .count()
                    } else {
                        pos + 1
                    };
                    let certified = run_start.saturating_sub(1).min(state.target.len());
                    state.shifted_target = state.target[certified..]
                        .iter()
                        .map(|&s| self.shift(s))
                        .collect();
                    state.phase = UniPhase::CommittedInvZ {
                        first_error: pos,
                        run_start,
                        certified,
                    };
                }
                UniPhase::AssumeZ | UniPhase::CommittedZ { .. } => {
                    if received < sent && state.phase == UniPhase::AssumeZ {
                        state.phase = UniPhase::CommittedZ { first_error: pos };
                    }
                    self.z_side.push(&mut state.z_stack, received);
                }
                UniPhase::CommittedInvZ { run_start, .. } => {
                    if pos >= run_start + self.r {
                        self.inv_side.push(&mut state.inv_stack, received);
                    }
                }
            }
        }
        state.received.push(received);
    }

    fn decode(&self, received: &[Symbol]) -> Option<BigUint> {
        if received.len() != self.n {
            return None;
        }
        let (&flag, body) = received.split_last()?;
        let k = self.book.len();
        if flag != self.alphabet.top() {
            let stack = self.z_side.run(body);
            return self.book.rank(stack.get(..k)?).ok();
        }
        let run_start = self.locate_marker(body);
        let certified = run_start.saturating_sub(1).min(k);
        let mut info = body[..certified].to_vec();
        if certified < k {
            let suffix = body.get(run_start + self.r..).unwrap_or(&[]);
            let stack = self.inv_side.run(suffix);
            info.extend(stack.get(..k - certified)?.iter().map(|&s| self.unshift(s)));
        }
        self.book.rank(&info).ok()
    }

    fn audit(&self, state: &UniState) -> std::result::Result<(), String> {
        let body = &state.received[..state.received.len().min(self.body_length())];
        match state.phase {
            UniPhase::AssumeZ | UniPhase::CommittedZ { .. } => {
                let stack = self.z_side.run(body);
                if stack != state.z_stack {
                    return Err(format!(
                        "sender Z stack {:?} differs from decoder stack {stack:?}",
                        state.z_stack
                    ));
                }
            }
            UniPhase::CommittedInvZ { run_start, .. } => {
                if body.len() >= run_start + self.r {
                    let found = self.locate_marker(body);
                    if found != run_start {
                        return Err(format!(
                            "receiver finds the marker at {found}, sender placed it at {run_start}"
                        ));
                    }
                }
                let suffix = body.get(run_start + self.r..).unwrap_or(&[]);
                let stack = self.inv_side.run(suffix);
                if stack != state.inv_stack {
                    return Err(format!(
                        "sender inverse stack {:?} differs from decoder stack {stack:?}",
                        state.inv_stack
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::replay;

    #[test]
    fn shift_map() {
        let s = UnidirectionalRubber::new(3, 2, 6, 1).unwrap();
        assert_eq!(s.shift(2), 0);
        assert_eq!(s.shift(0), 1);
        assert_eq!(s.unshift(0), 2);
        for x in 0..3 {
            assert_eq!(s.unshift(s.shift(x)), x);
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(UnidirectionalRubber::new(2, 2, 8, 1).is_err());
        assert!(UnidirectionalRubber::new(3, 1, 8, 1).is_err());
        assert!(UnidirectionalRubber::new(3, 2, 3, 1).is_err());
        assert_eq!(
            UnidirectionalRubber::new(3, 2, 8, 2).unwrap().info_length(),
            2
        );
    }

    #[test]
    fn standard_increment_places_marker_after_error() {
        // q=4, r=2, n=7, t=1: k=3. Info (1,0,2); the channel raises 1 to 2.
        let s = UnidirectionalRubber::new(4, 2, 7, 1).unwrap();
        let m = s.codebook().rank(&[1, 0, 2]).unwrap();
        let x = replay(&s, &m, &[2, 3, 3, 2, 1, 3, 3]).unwrap();
        // marker 3,3 then f(1,0,2) = (2,1,3), flag 3
        assert_eq!(x, vec![1, 3, 3, 2, 1, 3, 3]);
        assert_eq!(s.decode(&[2, 3, 3, 2, 1, 3, 3]), Some(m));
    }

    #[test]
    fn towards_rubber_increment_merges_with_earlier_top_symbols() {
        // q=3, r=3, info (2,1,..): a 1 raised to 2 joins the preceding 2.
        let s = UnidirectionalRubber::new(3, 3, 10, 1).unwrap();
        assert_eq!(s.info_length(), 5);
        let info = [0, 2, 1, 0, 0];
        let m = s.codebook().rank(&info).unwrap();
        let mut y = vec![0, 2, 2];
        let x = replay(&s, &m, &y).unwrap();
        assert_eq!(x, vec![0, 2, 1, 2]);
        // run starts at body index 1, so the receiver trusts nothing past
        // index 0 and the sender retransmits from info index 0.
        y.push(2);
        let x = replay(&s, &m, &y).unwrap();
        assert_eq!(x[4], s.shift(0));
    }
}
