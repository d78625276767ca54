//! Command implementations behind the `indepfam` binary. Every command builds
//! a [`Report`]; rendering and the exit-code contract live here as well.

pub mod commands;
pub mod suite;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use rayon::prelude::*;
use serde_json::{Map, Value};

use indepfam::encoder::EncodeError;
use indepfam::filters::FilterError;
use indepfam::henkin::HenkinError;
use indepfam::proplogic::PropError;
use indepfam::setcore::{SetError, MAX_SEARCH_BOUND};

/// Version of the line-delimited record schema.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_UNSAT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Human,
    Records,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub width: usize,
    pub truncation: u64,
    pub search_bound: u64,
    pub seed: Option<u64>,
    /// Worker threads; 1 runs everything on the calling thread.
    pub parallel: usize,
    pub format: OutputFormat,
    /// Adds elapsed time to machine records, which makes them nondeterministic.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            width: 4,
            truncation: 3,
            search_bound: 64,
            seed: None,
            parallel: 1,
            format: OutputFormat::Human,
            timing: false,
        }
    }
}

/// A caller-side mistake: bad flags, unreadable or malformed files.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

/// A configured cap was hit before the question was settled.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct BudgetExceeded(pub String);

impl RunConfig {
    pub fn validate(&self) -> Result<(), InputError> {
        if self.width < 2 {
            return Err(InputError(format!(
                "--width must be at least 2, got {}",
                self.width
            )));
        }
        if self.truncation == 0 || self.search_bound == 0 || self.parallel == 0 {
            return Err(InputError(
                "--truncation, --bound and --parallel must be positive".into(),
            ));
        }
        if self.search_bound > MAX_SEARCH_BOUND {
            return Err(InputError(format!("--bound exceeds {MAX_SEARCH_BOUND}")));
        }
        Ok(())
    }

    pub fn require_seed(&self) -> Result<u64, InputError> {
        self.seed
            .ok_or_else(|| InputError("random suites need --seed".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violated,
    Unsat,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => EXIT_OK,
            Verdict::Violated => EXIT_VIOLATED,
            Verdict::Unsat => EXIT_UNSAT,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Violated => "violated",
            Verdict::Unsat => "unsat",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub records: Vec<Map<String, Value>>,
    pub lines: Vec<String>,
    pub counts: BTreeMap<String, u64>,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            verdict: Verdict::Pass,
            records: Vec::new(),
            lines: Vec::new(),
            counts: BTreeMap::new(),
            elapsed: Duration::ZERO,
        }
    }

    /// Appends a record; `fields` must be a JSON object.
    pub fn record(&mut self, kind: &str, fields: Value) {
        let Value::Object(mut m) = fields else {
            panic!("records are JSON objects");
        };
        m.insert("record".into(), kind.into());
        self.records.push(m);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn count(&mut self, key: &str, by: u64) {
        *self.counts.entry(key.to_string()).or_default() += by;
    }

    /// A violation outranks an UNSAT verdict.
    pub fn violated(&mut self) {
        self.verdict = Verdict::Violated;
    }

    pub fn unsat(&mut self) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Unsat;
        }
    }

    /// Folds `other` in, prefixing its record kinds and counts.
    pub fn absorb(&mut self, other: Report) {
        for mut r in other.records {
            let kind = r
                .get("record")
                .and_then(Value::as_str)
                .unwrap_or("")
                .to_string();
            r.insert("record".into(), format!("{}.{kind}", other.command).into());
            self.records.push(r);
        }
        self.lines.extend(
            other
                .lines
                .into_iter()
                .map(|l| format!("[{}] {l}", other.command)),
        );
        for (k, v) in other.counts {
            self.count(&format!("{}.{k}", other.command), v);
        }
        let sub =
            serde_json::json!({ "command": other.command, "verdict": other.verdict.to_string() });
        self.record("part", sub);
        if other.verdict == Verdict::Violated {
            self.violated();
        }
        self.elapsed += other.elapsed;
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        match cfg.format {
            OutputFormat::Human => {
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
                let counts: Vec<String> = self
                    .counts
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                out.push_str(&format!(
                    "{}: {} ({}) in {:.3}s\n",
                    self.command,
                    self.verdict,
                    counts.join(" "),
                    self.elapsed.as_secs_f64()
                ));
            }
            OutputFormat::Records => {
                let stamp = |mut m: Map<String, Value>| {
                    m.insert("schema".into(), SCHEMA_VERSION.into());
                    m.insert("command".into(), self.command.clone().into());
                    serde_json::to_string(&Value::Object(m)).expect("records serialize")
                };
                for r in &self.records {
                    out.push_str(&stamp(r.clone()));
                    out.push('\n');
                }
                let mut summary = Map::new();
                summary.insert("record".into(), "summary".into());
                summary.insert("verdict".into(), self.verdict.to_string().into());
                summary.insert(
                    "counts".into(),
                    serde_json::to_value(&self.counts).expect("counts serialize"),
                );
                if cfg.timing {
                    summary.insert(
                        "elapsed_ms".into(),
                        (self.elapsed.as_millis() as u64).into(),
                    );
                }
                out.push_str(&stamp(summary));
                out.push('\n');
            }
        }
        out
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

/// Maps `f` over `items` on `parallel` workers, keeping input order.
pub fn fan_out<T, R, F>(parallel: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if parallel <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .expect("thread pool");
    pool.install(|| items.par_iter().map(f).collect())
}

fn set_budget(e: &SetError) -> bool {
    matches!(
        e,
        SetError::NoDifferenceFound(_)
            | SetError::ExhaustedSupports { .. }
            | SetError::SizeOverflow { .. }
    )
}

fn prop_budget(e: &PropError) -> bool {
    matches!(e, PropError::Set(s) if set_budget(s))
}

fn filter_budget(e: &FilterError) -> bool {
    match e {
        FilterError::Inconclusive(_) => true,
        FilterError::Set(s) => set_budget(s),
        FilterError::Prop(p) => prop_budget(p),
        _ => false,
    }
}

fn henkin_budget(e: &HenkinError) -> bool {
    match e {
        HenkinError::ClosureBudgetExceeded { .. } | HenkinError::UniverseOverflow { .. } => true,
        HenkinError::Filter(f) => filter_budget(f),
        _ => false,
    }
}

fn encode_budget(e: &EncodeError) -> bool {
    match e {
        EncodeError::FieldTooLarge { .. } => true,
        EncodeError::Filter(f) => filter_budget(f),
        EncodeError::Henkin(h) => henkin_budget(h),
        _ => false,
    }
}

/// Exit code for an error that aborted a command: budget exhaustion is 4,
/// everything else is treated as bad input.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        let budget = cause.downcast_ref::<BudgetExceeded>().is_some()
            || cause.downcast_ref::<SetError>().is_some_and(set_budget)
            || cause.downcast_ref::<PropError>().is_some_and(prop_budget)
            || cause
                .downcast_ref::<FilterError>()
                .is_some_and(filter_budget)
            || cause
                .downcast_ref::<HenkinError>()
                .is_some_and(henkin_budget)
            || cause
                .downcast_ref::<EncodeError>()
                .is_some_and(encode_budget);
        if budget {
            return EXIT_BUDGET;
        }
    }
    EXIT_INPUT
}
