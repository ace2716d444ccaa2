//! The work behind each subcommand, shared by the one-shot commands and
//! campaigns. Every job produces one artifact (CSV or JSON text) and a
//! status that feeds the exit code.

use std::path::Path;

use num_bigint::BigUint;
use serde_json::json;

use unichan_core::bounds::zero_error_capacity;
use unichan_core::curves::emit_curves;
use unichan_core::{
    run_session, verify_successful, Adversary, AnyStrategy, Channel, ChannelGraph, GreedyAdversary,
    IdentityCode, ModifiedRubber, Outcome, PassiveAdversary, PathAdversary, Side,
    UnidirectionalChannel, UnidirectionalRubber, Verdict, VerifyOptions, ZeroErrorUnidirectional,
    STAR,
};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Inconclusive,
    Counterexample,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Counterexample => 2,
            Status::Inconclusive => 3,
        }
    }
}

pub struct JobOutput {
    pub status: Status,
    pub artifact: String,
    pub summary: String,
}

impl JobOutput {
    fn plain(artifact: String, summary: String) -> Self {
        JobOutput {
            status: Status::Ok,
            artifact,
            summary,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StrategySpec {
    pub name: String,
    pub q: usize,
    pub n: usize,
    pub t: usize,
    pub r: Option<usize>,
    /// Message count override for the identity code.
    pub messages: Option<BigUint>,
}

pub const STRATEGY_NAMES: &[&str] = &[
    "identity",
    "zero-error",
    "rubber",
    "rubber-invz",
    "uni-rubber",
];

impl StrategySpec {
    /// The strategy and the channel it is meant for.
    pub fn build(&self) -> Result<(AnyStrategy, Channel), String> {
        let (q, n, t) = (self.q, self.n, self.t);
        let r = self.r.unwrap_or(2);
        if t > n {
            return Err(format!("t = {t} exceeds the block length n = {n}"));
        }
        if self.messages.is_some() && self.name != "identity" {
            return Err("`messages` only applies to the identity strategy".into());
        }
        let err = |e: unichan_core::Error| e.to_string();
        let z = || ChannelGraph::z(q).map(Channel::from).map_err(err);
        let pair = || {
            UnidirectionalChannel::z_pair(q)
                .map(Channel::from)
                .map_err(err)
        };
        Ok(match self.name.as_str() {
            "identity" => {
                let s = match &self.messages {
                    Some(m) => IdentityCode::with_messages(q, n, m.clone()),
                    None => IdentityCode::new(q, n),
                };
                (s.map_err(err)?.into(), z()?)
            }
            "zero-error" => (
                ZeroErrorUnidirectional::new(q, n).map_err(err)?.into(),
                pair()?,
            ),
            "rubber" => (
                ModifiedRubber::new(q, r, Side::Z, n, t)
                    .map_err(err)?
                    .into(),
                z()?,
            ),
            "rubber-invz" => {
                let g = ChannelGraph::inverse_z(q).map(Channel::from).map_err(err)?;
                (
                    ModifiedRubber::new(q, r, Side::InvZ, n, t)
                        .map_err(err)?
                        .into(),
                    g,
                )
            }
            "uni-rubber" => (
                UnidirectionalRubber::new(q, r, n, t).map_err(err)?.into(),
                pair()?,
            ),
            other => {
                return Err(format!(
                    "unknown strategy {other:?}; expected one of {}",
                    STRATEGY_NAMES.join(", ")
                ))
            }
        })
    }
}

pub fn curves(q: usize, step: f64) -> Result<JobOutput, String> {
    let csv = emit_curves(q, step).map_err(|e| e.to_string())?;
    let rows = csv.lines().count() - 1;
    Ok(JobOutput::plain(csv, format!("curves q={q}: {rows} rows")))
}

pub fn verify(spec: &StrategySpec, budget: u64, with_time: bool) -> Result<JobOutput, String> {
    let (strategy, channel) = spec.build()?;
    let opts = VerifyOptions {
        budget,
        ..VerifyOptions::default()
    };
    let verdict =
        verify_successful(&strategy, &channel, spec.t, &opts).map_err(|e| e.to_string())?;
    Ok(verdict_output(&verdict, with_time))
}

fn verdict_output(v: &Verdict, with_time: bool) -> JobOutput {
    let status = match v.outcome {
        Outcome::Success => Status::Ok,
        Outcome::Inconclusive(_) => Status::Inconclusive,
        Outcome::Counterexample(_) | Outcome::InvariantViolation(_) => Status::Counterexample,
    };
    JobOutput {
        status,
        artifact: v.to_json(with_time) + "\n",
        summary: format!(
            "verify {} on {} n={} M={} t={}: {} ({} nodes)",
            v.strategy,
            v.channel,
            v.n,
            v.messages,
            v.t,
            v.outcome.label(),
            v.nodes
        ),
    }
}

pub const CHANNEL_NAMES: &[&str] = &["z", "invz", "sym", "star"];

fn label(s: u16) -> serde_json::Value {
    if s == STAR {
        json!("*")
    } else {
        json!(s)
    }
}

pub fn zcap(channel: &str, q: usize) -> Result<JobOutput, String> {
    let graph = match channel {
        "z" => ChannelGraph::z(q),
        "invz" => ChannelGraph::inverse_z(q),
        "sym" => ChannelGraph::symmetric(q),
        "star" => ChannelGraph::gamma_star(q),
        other => {
            return Err(format!(
                "unknown channel {other:?}; expected one of {}",
                CHANNEL_NAMES.join(", ")
            ))
        }
    }
    .map_err(|e| e.to_string())?;
    let sol = zero_error_capacity(&graph);
    let distribution: serde_json::Map<String, serde_json::Value> = sol
        .distribution
        .inputs
        .iter()
        .zip(&sol.distribution.probabilities)
        .map(|(&i, p)| {
            let key = match label(i) {
                serde_json::Value::String(s) => s,
                v => v.to_string(),
            };
            (key, json!(p.to_string()))
        })
        .collect();
    let report = json!({
        "channel": channel,
        "q": q,
        "p_o": sol.p_o.to_string(),
        "capacity": sol.capacity,
        "distribution": distribution,
    });
    let summary = format!(
        "zcap {channel} q={q}: P_o = {}, capacity = {}",
        sol.p_o, sol.capacity
    );
    Ok(JobOutput::plain(
        serde_json::to_string_pretty(&report).expect("json") + "\n",
        summary,
    ))
}

pub fn parse_message(s: &str) -> Result<BigUint, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("message must be a nonnegative integer, got {s:?}"))
}

pub fn adversary(spec: &str) -> Result<Box<dyn Adversary>, String> {
    match spec {
        "greedy" => Ok(Box::new(GreedyAdversary)),
        "passive" => Ok(Box::new(PassiveAdversary)),
        _ => match spec.strip_prefix("path:") {
            Some(offsets) => PathAdversary::parse(offsets)
                .map(|a| Box::new(a) as Box<dyn Adversary>)
                .map_err(|e| e.to_string()),
            None => Err(format!(
                "unknown adversary {spec:?}; expected greedy, passive or path:<offsets>"
            )),
        },
    }
}

pub fn session(
    spec: &StrategySpec,
    message: &BigUint,
    adversary_spec: &str,
) -> Result<JobOutput, String> {
    let (strategy, channel) = spec.build()?;
    let mut adv = adversary(adversary_spec)?;
    let tr = run_session(&strategy, &channel, adv.as_mut(), message, spec.t)
        .map_err(|e| e.to_string())?;
    let ok = tr.decoded.as_ref() == Some(message);
    let summary = format!(
        "session {} m={message}: {} errors, decoded {}",
        spec.name,
        tr.error_positions.len(),
        if ok { "correctly" } else { "WRONG" }
    );
    Ok(JobOutput::plain(tr.to_json() + "\n", summary))
}

pub fn write_artifact(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}
