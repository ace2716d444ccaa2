//! Exhaustive certification of feedback strategies.
//!
//! For every message the verifier walks the whole adversary game tree: at
//! each position the adversary may pick any admissible output, with at most
//! `t` outputs differing from the input. On a unidirectional pair the
//! direction is left open until the first error. A strategy is successful
//! when every leaf decodes to the message that was sent.
//!
//! Messages are searched in parallel, each with its own node cap, and the
//! results are merged in message order. Outputs are tried in ascending
//! order, so the counterexample reported is the one with the smallest
//! message and, for that message, the lexicographically least received word.
//! Nothing depends on scheduling, so verdicts are reproducible.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{Channel, ChannelGraph, DirectionState, Symbol};
use crate::error::{Error, Result};
use crate::session::{serialize_big, serialize_opt_big, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Total node budget for the whole verification.
    pub budget: u64,
    /// Run [`Strategy::audit`] at every node.
    pub audit: bool,
    /// Search messages on the rayon pool.
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: 10_000_000,
            audit: true,
            parallel: true,
        }
    }
}

/// A message and an adversary path that fools the decoder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    #[serde(serialize_with = "serialize_big")]
    pub message: BigUint,
    pub x: Vec<Symbol>,
    pub y: Vec<Symbol>,
    /// Adversary choices as offsets `y_i - x_i`.
    pub errors: Vec<i64>,
    #[serde(serialize_with = "serialize_opt_big")]
    pub decoded: Option<BigUint>,
}

/// A node where the strategy's own consistency check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(serialize_with = "serialize_big")]
    pub message: BigUint,
    pub y: Vec<Symbol>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Counterexample(Counterexample),
    Inconclusive(String),
    InvariantViolation(Violation),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Counterexample(_) => "counterexample",
            Outcome::Inconclusive(_) => "inconclusive",
            Outcome::InvariantViolation(_) => "invariant-violation",
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub strategy: String,
    pub channel: String,
    pub n: usize,
    pub messages: BigUint,
    pub t: usize,
    pub outcome: Outcome,
    pub nodes: u64,
    pub max_depth: usize,
    pub elapsed: Duration,
}

/// Equality ignores the wall-clock time.
impl PartialEq for Verdict {
    fn eq(&self, other: &Self) -> bool {
        self.strategy == other.strategy
            && self.channel == other.channel
            && self.n == other.n
            && self.messages == other.messages
            && self.t == other.t
            && self.outcome == other.outcome
            && self.nodes == other.nodes
            && self.max_depth == other.max_depth
    }
}

#[derive(Serialize)]
struct Report<'a> {
    strategy: &'a str,
    channel: &'a str,
    n: usize,
    #[serde(rename = "M", serialize_with = "serialize_big")]
    messages: &'a BigUint,
    t: usize,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<&'a Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<&'a Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    nodes: u64,
    max_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<u64>,
}

impl Verdict {
    /// JSON report. Without the wall time the output is a pure function of
    /// the inputs.
    pub fn to_json(&self, with_time: bool) -> String {
        let report = Report {
            strategy: &self.strategy,
            channel: &self.channel,
            n: self.n,
            messages: &self.messages,
            t: self.t,
            outcome: self.outcome.label(),
            counterexample: match &self.outcome {
                Outcome::Counterexample(c) => Some(c),
                _ => None,
            },
            violation: match &self.outcome {
                Outcome::InvariantViolation(v) => Some(v),
                _ => None,
            },
            reason: match &self.outcome {
                Outcome::Inconclusive(r) => Some(r.as_str()),
                _ => None,
            },
            nodes: self.nodes,
            max_depth: self.max_depth,
            wall_time_ms: with_time.then_some(self.elapsed.as_millis() as u64),
        };
        serde_json::to_string_pretty(&report).expect("report serializes")
    }
}

/// Short name for the common channels, `custom(q=..)` otherwise.
pub fn channel_label(channel: &Channel) -> String {
    let q = channel.alphabet().size();
    let named = |g: &ChannelGraph| -> Option<&'static str> {
        [
            (ChannelGraph::z(q), "z"),
            (ChannelGraph::inverse_z(q), "invz"),
            (ChannelGraph::symmetric(q), "sym"),
            (ChannelGraph::gamma_star(q), "star"),
        ]
        .into_iter()
        .find_map(|(c, name)| (c.ok().as_ref() == Some(g)).then_some(name))
    };
    let name = match channel {
        Channel::Graph(g) => named(g).unwrap_or("custom"),
        Channel::Unidirectional(u) => {
            if named(u.positive()) == Some("invz") && named(u.negative()) == Some("z") {
                "unidirectional"
            } else {
                "custom-unidirectional"
            }
        }
    };
    format!("{name}(q={q})")
}

enum Failure {
    Counterexample(Counterexample),
    Violation(Violation),
}

struct MessageRun {
    nodes: u64,
    max_depth: usize,
    capped: bool,
    failure: Option<Failure>,
}

struct Search<'a, S: Strategy> {
    strategy: &'a S,
    channel: &'a Channel,
    message: &'a BigUint,
    n: usize,
    cap: u64,
    audit: bool,
    nodes: u64,
    max_depth: usize,
    x: Vec<Symbol>,
    y: Vec<Symbol>,
}

enum Stop {
    Capped,
    Failed(Failure),
}

impl<S: Strategy> Search<'_, S> {
    fn explore(
        &mut self,
        state: &S::State,
        dir: DirectionState,
        errors_left: usize,
    ) -> std::result::Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Stop::Capped);
        }
        let depth = self.y.len();
        self.max_depth = self.max_depth.max(depth);
        if self.audit {
            if let Err(detail) = self.strategy.audit(state) {
                return Err(Stop::Failed(Failure::Violation(Violation {
                    message: self.message.clone(),
                    y: self.y.clone(),
                    detail,
                })));
            }
        }
        if depth == self.n {
            let decoded = self.strategy.decode(&self.y);
            if decoded.as_ref() != Some(self.message) {
                return Err(Stop::Failed(Failure::Counterexample(Counterexample {
                    message: self.message.clone(),
                    errors: self
                        .x
                        .iter()
                        .zip(&self.y)
                        .map(|(&a, &b)| b as i64 - a as i64)
                        .collect(),
                    x: self.x.clone(),
                    y: self.y.clone(),
                    decoded,
                })));
            }
            return Ok(());
        }
        let sent = self.strategy.next_symbol(state);
        let outputs = match self.channel.admissible_outputs(sent, dir) {
            Ok(o) => o,
            Err(e) => {
                return Err(Stop::Failed(Failure::Violation(Violation {
                    message: self.message.clone(),
                    y: self.y.clone(),
                    detail: format!("strategy sent an unusable symbol: {e}"),
                })))
            }
        };
        self.x.push(sent);
        for received in outputs {
            let is_error = received != sent;
            if is_error && errors_left == 0 {
                continue;
            }
            let next_dir = self
                .channel
                .step(dir, sent, received)
                .expect("admissible outputs step");
            let mut child = state.clone();
            self.strategy.observe(&mut child, sent, received);
            self.y.push(received);
            let result = self.explore(&child, next_dir, errors_left - usize::from(is_error));
            self.y.pop();
            result?;
        }
        self.x.pop();
        Ok(())
    }
}

fn search_message<S: Strategy>(
    strategy: &S,
    channel: &Channel,
    t: usize,
    message: &BigUint,
    opts: &VerifyOptions,
) -> Result<MessageRun> {
    let state = strategy.begin(message)?;
    let n = strategy.block_length();
    let mut search = Search {
        strategy,
        channel,
        message,
        n,
        cap: opts.budget,
        audit: opts.audit,
        nodes: 0,
        max_depth: 0,
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
    };
    let (capped, failure) = match search.explore(&state, DirectionState::Undecided, t) {
        Ok(()) => (false, None),
        Err(Stop::Capped) => (true, None),
        Err(Stop::Failed(f)) => (false, Some(f)),
    };
    Ok(MessageRun {
        nodes: search.nodes.min(opts.budget),
        max_depth: search.max_depth,
        capped,
        failure,
    })
}

fn check_inputs<S: Strategy>(strategy: &S, channel: &Channel, t: usize) -> Result<u64> {
    let n = strategy.block_length();
    if t > n {
        return Err(Error::InvalidParameters(format!(
            "error budget {t} exceeds block length {n}"
        )));
    }
    if strategy.alphabet() != channel.alphabet() {
        return Err(Error::InvalidParameters(format!(
            "strategy alphabet {} does not match channel alphabet {}",
            strategy.alphabet().size(),
            channel.alphabet().size()
        )));
    }
    strategy
        .message_count()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameters("too many messages for exhaustive search".into()))
}

/// Decides whether `strategy` is successful on `channel` against every
/// adversary with at most `t` errors per block.
pub fn verify_successful<S: Strategy>(
    strategy: &S,
    channel: &Channel,
    t: usize,
    opts: &VerifyOptions,
) -> Result<Verdict> {
    let start = Instant::now();
    let count = check_inputs(strategy, channel, t)?;
    let run = |m: u64| search_message(strategy, channel, t, &BigUint::from(m), opts);
    let runs: Vec<MessageRun> = if opts.parallel {
        (0..count).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..count).map(run).collect::<Result<_>>()?
    };

    let nodes: u64 = runs.iter().map(|r| r.nodes).sum();
    let max_depth = runs.iter().map(|r| r.max_depth).max().unwrap_or(0);
    let first_failure = runs.into_iter().enumerate().find_map(|(m, r)| {
        if r.capped {
            Some(Err(m))
        } else {
            r.failure.map(Ok)
        }
    });
    let outcome = match first_failure {
        Some(Ok(Failure::Counterexample(c))) => Outcome::Counterexample(c),
        Some(Ok(Failure::Violation(v))) => Outcome::InvariantViolation(v),
        Some(Err(m)) => Outcome::Inconclusive(format!(
            "search for message {m} exceeded the node budget of {}",
            opts.budget
        )),
        None if nodes > opts.budget => Outcome::Inconclusive(format!(
            "{nodes} nodes explored, over the budget of {}",
            opts.budget
        )),
        None => Outcome::Success,
    };
    Ok(Verdict {
        strategy: strategy.name(),
        channel: channel_label(channel),
        n: strategy.block_length(),
        messages: strategy.message_count(),
        t,
        outcome,
        nodes,
        max_depth,
        elapsed: start.elapsed(),
    })
}

/// Largest `t' <= n` such that `message` decodes correctly under every
/// adversary with at most `t'` errors; `None` if it fails even without
/// errors. Errors with [`Error::BudgetExceeded`] when a search is cut off.
pub fn max_errors_survived<S: Strategy>(
    strategy: &S,
    channel: &Channel,
    message: &BigUint,
    opts: &VerifyOptions,
) -> Result<Option<usize>> {
    check_inputs(strategy, channel, 0)?;
    strategy.check_message(message)?;
    let n = strategy.block_length();
    let mut survived = None;
    for t in 0..=n {
        let run = search_message(strategy, channel, t, message, opts)?;
        if run.capped {
            return Err(Error::BudgetExceeded {
                budget: opts.budget as usize,
            });
        }
        if run.failure.is_some() {
            break;
        }
        survived = Some(t);
    }
    Ok(survived)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::UnidirectionalChannel;
    use crate::strategies::{IdentityCode, ModifiedRubber, Side, ZeroErrorUnidirectional};

    fn z(q: usize) -> Channel {
        ChannelGraph::z(q).unwrap().into()
    }

    #[test]
    fn identity_code_is_refuted() {
        let s = IdentityCode::new(2, 2).unwrap();
        let v = verify_successful(&s, &z(2), 1, &VerifyOptions::default()).unwrap();
        match &v.outcome {
            Outcome::Counterexample(c) => {
                assert_eq!(c.message, BigUint::from(1u32));
                assert_eq!(c.x, vec![0, 1]);
                assert_eq!(c.y, vec![0, 0]);
                assert_eq!(c.decoded, Some(BigUint::from(0u32)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn error_free_identity_succeeds() {
        let s = IdentityCode::new(3, 3).unwrap();
        let v = verify_successful(&s, &z(3), 0, &VerifyOptions::default()).unwrap();
        assert!(v.outcome.is_success());
        // One path per message, n + 1 nodes each.
        assert_eq!(v.nodes, 27 * 4);
    }

    #[test]
    fn rubber_small_case() {
        let s = ModifiedRubber::new(2, 2, Side::Z, 6, 1).unwrap();
        assert_eq!(s.message_count(), BigUint::from(8u32));
        let v = verify_successful(&s, &z(2), 1, &VerifyOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Success);
        let again = verify_successful(&s, &z(2), 1, &VerifyOptions::default()).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let s = ModifiedRubber::new(2, 2, Side::Z, 6, 1).unwrap();
        let opts = VerifyOptions {
            budget: 20,
            ..VerifyOptions::default()
        };
        let v = verify_successful(&s, &z(2), 1, &opts).unwrap();
        assert!(matches!(v.outcome, Outcome::Inconclusive(_)));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let s = IdentityCode::new(3, 3).unwrap();
        let par = verify_successful(&s, &z(3), 2, &VerifyOptions::default()).unwrap();
        let seq = verify_successful(
            &s,
            &z(3),
            2,
            &VerifyOptions {
                parallel: false,
                ..VerifyOptions::default()
            },
        )
        .unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn survival_diagnostics() {
        let zero = ZeroErrorUnidirectional::new(5, 3).unwrap();
        let pair: Channel = UnidirectionalChannel::z_pair(5).unwrap().into();
        let opts = VerifyOptions::default();
        for m in 0..9u32 {
            let m = BigUint::from(m);
            assert_eq!(
                max_errors_survived(&zero, &pair, &m, &opts).unwrap(),
                Some(3)
            );
        }
        let id = IdentityCode::new(2, 3).unwrap();
        let zero_word = BigUint::from(0u32);
        assert_eq!(
            max_errors_survived(&id, &z(2), &zero_word, &opts).unwrap(),
            Some(3)
        );
        let ones = BigUint::from(7u32);
        assert_eq!(
            max_errors_survived(&id, &z(2), &ones, &opts).unwrap(),
            Some(0)
        );
    }

    #[test]
    fn report_fields() {
        let s = IdentityCode::new(2, 2).unwrap();
        let v = verify_successful(&s, &z(2), 1, &VerifyOptions::default()).unwrap();
        let json: serde_json::Value = serde_json::from_str(&v.to_json(true)).unwrap();
        for key in [
            "strategy",
            "channel",
            "n",
            "M",
            "t",
            "outcome",
            "counterexample",
            "nodes",
            "wall_time_ms",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["channel"], "z(q=2)");
        let json: serde_json::Value = serde_json::from_str(&v.to_json(false)).unwrap();
        assert!(json.get("wall_time_ms").is_none());
    }
}
