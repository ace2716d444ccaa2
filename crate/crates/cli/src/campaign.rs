//! Batch runs driven by a TOML file of `[[job]]` blocks:
//!
//! ```toml
//! [[job]]
//! kind = "verify"
//! strategy = "rubber"
//! q = 2
//! n = 6
//! t = 1
//! out = "reports/rubber-2-6-1.json"
//! ```
//!
//! Output paths are relative to the directory holding the config. Every job
//! is checked before any runs, so a bad config writes nothing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::de::IgnoredAny;
use serde::Deserialize;

use crate::jobs::{self, JobOutput, Status, StrategySpec, DEFAULT_BUDGET};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Message {
    Int(u64),
    Text(String),
}

// Each kind is its own struct so that serde errors keep their spans; the
// `kind` key is read first and then ignored.
#[derive(Debug, Deserialize)]
struct KindOnly {
    kind: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvesJob {
    #[serde(default, rename = "kind")]
    _kind: IgnoredAny,
    q: usize,
    #[serde(default = "default_step")]
    step: f64,
    out: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyJob {
    #[serde(default, rename = "kind")]
    _kind: IgnoredAny,
    strategy: String,
    q: usize,
    n: usize,
    t: usize,
    r: Option<usize>,
    messages: Option<Message>,
    budget: Option<u64>,
    out: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZcapJob {
    #[serde(default, rename = "kind")]
    _kind: IgnoredAny,
    channel: String,
    q: usize,
    out: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionJob {
    #[serde(default, rename = "kind")]
    _kind: IgnoredAny,
    strategy: String,
    q: usize,
    n: usize,
    t: usize,
    r: Option<usize>,
    message: Message,
    adversary: String,
    out: PathBuf,
}

#[derive(Debug)]
enum Job {
    Curves(CurvesJob),
    Verify(VerifyJob),
    Zcap(ZcapJob),
    Session(SessionJob),
}

fn default_step() -> f64 {
    0.01
}

/// A job that passed validation.
enum Task {
    Curves {
        q: usize,
        step: f64,
    },
    Verify {
        spec: StrategySpec,
        budget: u64,
    },
    Zcap {
        channel: String,
        q: usize,
    },
    Session {
        spec: StrategySpec,
        message: BigUint,
        adversary: String,
    },
}

struct Planned {
    index: usize,
    line: usize,
    task: Task,
    out: PathBuf,
}

fn message_value(m: &Message) -> Result<BigUint, String> {
    match m {
        Message::Int(v) => Ok(BigUint::from(*v)),
        Message::Text(s) => jobs::parse_message(s),
    }
}

/// 1-based line of each `[[job]]` header, in order.
fn job_lines(text: &str) -> Vec<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            l.starts_with("[[") && l.trim_start_matches('[').trim_end_matches(']').trim() == "job"
        })
        .map(|(i, _)| i + 1)
        .collect()
}

fn plan(job: Job) -> Result<(Task, PathBuf), (String, String)> {
    fn field(f: &'static str) -> impl Fn(String) -> (String, String) {
        move |e| (f.to_string(), e)
    }
    let check_q = |q: usize| {
        if q < 2 {
            Err((
                "q".to_string(),
                format!("alphabet size must be >= 2, got {q}"),
            ))
        } else {
            Ok(())
        }
    };
    Ok(match job {
        Job::Curves(CurvesJob { q, step, out, .. }) => {
            check_q(q)?;
            if !(step > 0.0 && step <= 0.5) {
                return Err(("step".into(), format!("must lie in (0, 0.5], got {step}")));
            }
            (Task::Curves { q, step }, out)
        }
        Job::Verify(VerifyJob {
            strategy,
            q,
            n,
            t,
            r,
            messages,
            budget,
            out,
            ..
        }) => {
            check_q(q)?;
            let messages = messages
                .as_ref()
                .map(message_value)
                .transpose()
                .map_err(field("messages"))?;
            let spec = StrategySpec {
                name: strategy,
                q,
                n,
                t,
                r,
                messages,
            };
            spec.build().map_err(field("strategy"))?;
            let budget = budget.unwrap_or(DEFAULT_BUDGET);
            if budget == 0 {
                return Err(("budget".into(), "must be positive".into()));
            }
            (Task::Verify { spec, budget }, out)
        }
        Job::Zcap(ZcapJob {
            channel, q, out, ..
        }) => {
            check_q(q)?;
            if !jobs::CHANNEL_NAMES.contains(&channel.as_str()) {
                return Err((
                    "channel".into(),
                    format!(
                        "expected one of {}, got {channel:?}",
                        jobs::CHANNEL_NAMES.join(", ")
                    ),
                ));
            }
            (Task::Zcap { channel, q }, out)
        }
        Job::Session(SessionJob {
            strategy,
            q,
            n,
            t,
            r,
            message,
            adversary,
            out,
            ..
        }) => {
            check_q(q)?;
            let spec = StrategySpec {
                name: strategy,
                q,
                n,
                t,
                r,
                messages: None,
            };
            let (s, _) = spec.build().map_err(field("strategy"))?;
            let message = message_value(&message).map_err(field("message"))?;
            unichan_core::Strategy::check_message(&s, &message)
                .map_err(|e| ("message".to_string(), e.to_string()))?;
            jobs::adversary(&adversary).map_err(field("adversary"))?;
            (
                Task::Session {
                    spec,
                    message,
                    adversary,
                },
                out,
            )
        }
    })
}

/// 1-based line containing byte `offset`.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// The key on the line holding byte `offset`, if it is a `key = value` line.
fn key_at(text: &str, offset: usize) -> Option<String> {
    let start = text[..offset.min(text.len())]
        .rfind('\n')
        .map_or(0, |i| i + 1);
    let line = text[start..].lines().next()?;
    let (key, _) = line.split_once('=')?;
    let key = key.trim().trim_matches('"');
    (!key.is_empty()).then(|| key.to_string())
}

/// Parses one job block. Each block is parsed on its own so that errors
/// keep their position; `offset` is where the block body starts in `text`.
fn parse_job(
    text: &str,
    offset: usize,
    end: usize,
) -> Result<Job, (usize, Option<String>, String)> {
    let body = &text[offset..end];
    let locate = |e: toml::de::Error| {
        let message = e.message().trim().to_string();
        match e.span() {
            Some(span) if span.end > span.start => {
                let at = offset + span.start;
                (line_of(text, at), key_at(text, at), message)
            }
            _ => (line_of(text, offset.saturating_sub(1)), None, message),
        }
    };
    let kind = toml::from_str::<KindOnly>(body).map_err(locate)?.kind;
    match kind.as_str() {
        "curves" => toml::from_str(body).map(Job::Curves),
        "verify" => toml::from_str(body).map(Job::Verify),
        "zcap" => toml::from_str(body).map(Job::Zcap),
        "session" => toml::from_str(body).map(Job::Session),
        other => {
            let at = offset + body.find("kind").unwrap_or(0);
            return Err((
                line_of(text, at),
                Some("kind".into()),
                format!("unknown job kind {other:?}; expected curves, verify, zcap or session"),
            ));
        }
    }
    .map_err(locate)
}

/// Parses and validates a config. Errors name the file, line and field.
fn load(path: &Path, text: &str) -> Result<Vec<Planned>, String> {
    let shown = path.display();
    let table: toml::Table = toml::from_str(text).map_err(|e| format!("{shown}: {e}"))?;
    if let Some(key) = table.keys().find(|k| *k != "job") {
        return Err(format!(
            "{shown}: unknown top-level key `{key}`; only [[job]] blocks are allowed"
        ));
    }
    let jobs = match table.get("job") {
        None => 0,
        Some(toml::Value::Array(a)) => a.len(),
        Some(_) => return Err(format!("{shown}: `job` must be a list of [[job]] blocks")),
    };
    let headers = job_lines(text);
    if headers.len() != jobs {
        return Err(format!("{shown}: jobs must be written as [[job]] blocks"));
    }
    // Byte offsets where each block body starts and ends.
    let line_starts: Vec<usize> = std::iter::once(0)
        .chain(text.match_indices('\n').map(|(i, _)| i + 1))
        .collect();
    let body_start = |header: usize| line_starts.get(header).copied().unwrap_or(text.len());
    let mut planned = Vec::with_capacity(jobs);
    let mut outs: Vec<(PathBuf, usize)> = Vec::new();
    for (index, &line) in headers.iter().enumerate() {
        let start = body_start(line);
        let end = headers
            .get(index + 1)
            .map(|&next| line_starts[next - 1])
            .unwrap_or(text.len());
        let job = parse_job(text, start, end).map_err(|(at, key, e)| match key {
            Some(key) => format!("{shown}:{at}: job {}: field `{key}`: {e}", index + 1),
            None => format!("{shown}:{at}: job {}: {e}", index + 1),
        })?;
        let (task, out) = plan(job).map_err(|(field, e)| {
            format!("{shown}:{line}: job {}: field `{field}`: {e}", index + 1)
        })?;
        if let Some((_, first)) = outs.iter().find(|(o, _)| *o == out) {
            return Err(format!(
                "{shown}:{line}: job {}: field `out`: {} is already written by the job at line {first}",
                index + 1,
                out.display()
            ));
        }
        outs.push((out.clone(), line));
        planned.push(Planned {
            index,
            line,
            task,
            out,
        });
    }
    Ok(planned)
}

fn execute(task: &Task) -> Result<JobOutput, String> {
    match task {
        Task::Curves { q, step } => jobs::curves(*q, *step),
        Task::Verify { spec, budget } => jobs::verify(spec, *budget, false),
        Task::Zcap { channel, q } => jobs::zcap(channel, *q),
        Task::Session {
            spec,
            message,
            adversary,
        } => jobs::session(spec, message, adversary),
    }
}

/// Runs a campaign and returns the process exit code. The sidecar log with
/// timings goes to `log` (default: the config path with a `.log` suffix).
pub fn run(config: &Path, workers: usize, log: Option<&Path>) -> Result<i32, String> {
    let text = std::fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display()))?;
    let planned = load(config, &text)?;
    if planned.is_empty() {
        println!("no jobs");
        return Ok(0);
    }
    let base = config.parent().unwrap_or(Path::new("."));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| e.to_string())?;
    let started = Instant::now();
    let results: Vec<(Result<JobOutput, String>, f64)> = pool.install(|| {
        planned
            .par_iter()
            .map(|p| {
                let t0 = Instant::now();
                let r = execute(&p.task);
                (r, t0.elapsed().as_secs_f64() * 1e3)
            })
            .collect()
    });

    let mut status = Status::Ok;
    let mut failures = Vec::new();
    let mut sidecar = String::new();
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    writeln!(
        sidecar,
        "campaign {} started at unix time {stamp}",
        config.display()
    )
    .ok();
    for (p, (result, ms)) in planned.iter().zip(results) {
        let target = base.join(&p.out);
        match result.and_then(|o| jobs::write_artifact(&target, &o.artifact).map(|()| o)) {
            Ok(o) => {
                status = status.max(o.status);
                println!("job {} (line {}): {}", p.index + 1, p.line, o.summary);
                writeln!(
                    sidecar,
                    "job {} line {} {:.1} ms: {}",
                    p.index + 1,
                    p.line,
                    ms,
                    o.summary
                )
                .ok();
            }
            Err(e) => {
                let msg = format!("job {} (line {}): {e}", p.index + 1, p.line);
                writeln!(sidecar, "{msg}").ok();
                failures.push(msg);
            }
        }
    }
    writeln!(
        sidecar,
        "total {:.1} ms",
        started.elapsed().as_secs_f64() * 1e3
    )
    .ok();
    let log_path = log.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut p = config.as_os_str().to_owned();
        p.push(".log");
        PathBuf::from(p)
    });
    jobs::write_artifact(&log_path, &sidecar)?;
    if !failures.is_empty() {
        return Err(failures.join("\n"));
    }
    Ok(status.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(text: &str) -> Result<Vec<Planned>, String> {
        load(Path::new("c.toml"), text)
    }

    #[test]
    fn empty_config() {
        assert!(load_str("").unwrap().is_empty());
    }

    #[test]
    fn finds_job_headers() {
        let text = "# jobs\n[[job]]\nkind = \"zcap\"\n\n  [[ job ]]\n";
        assert_eq!(job_lines(text), vec![2, 5]);
    }

    #[test]
    fn unknown_field_is_reported_with_line() {
        let err = load_str("[[job]]\nkind = \"zcap\"\nchanel = \"z\"\nq = 3\nout = \"a.json\"\n")
            .err()
            .unwrap();
        assert!(err.starts_with("c.toml:3: job 1: field `chanel`"), "{err}");
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let text = "[[job]]\nkind = \"curves\"\nq = 2\nout = \"a.csv\"\n\n[[job]]\nkind = \"curves\"\nq = 3\nstep = 0.7\nout = \"b.csv\"\n";
        let err = load_str(text).err().unwrap();
        assert_eq!(
            err,
            "c.toml:6: job 2: field `step`: must lie in (0, 0.5], got 0.7"
        );
    }

    #[test]
    fn bad_strategy_parameters() {
        let text = "[[job]]\nkind = \"verify\"\nstrategy = \"uni-rubber\"\nq = 2\nn = 6\nt = 1\nout = \"a.json\"\n";
        let err = load_str(text).err().unwrap();
        assert!(
            err.starts_with("c.toml:1: job 1: field `strategy`"),
            "{err}"
        );
    }

    #[test]
    fn duplicate_outputs() {
        let text = "[[job]]\nkind = \"zcap\"\nchannel = \"z\"\nq = 3\nout = \"a.json\"\n[[job]]\nkind = \"zcap\"\nchannel = \"sym\"\nq = 3\nout = \"a.json\"\n";
        let err = load_str(text).err().unwrap();
        assert!(err.contains("line 1"), "{err}");
    }
}
