mod bounds;
mod d0;
mod search;

use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use serde_json::{Map, Value};
use zerosum_core::Budget;

use crate::args::{Command, Global};
use crate::report::Report;
use crate::store::{self, ResultsStore, StoreRecord, RECORD_VERSION};

pub fn run(command: &Command, global: &Global) -> Result<Report> {
    let ctx = Ctx::new(global)?;
    match command {
        Command::Compute(a) => search::compute(&ctx, a),
        Command::Check(a) => search::check(a),
        Command::VerifyD(a) => search::verify_d(&ctx, a),
        Command::Cap(a) => search::cap(&ctx, a),
        Command::VerifyD0(a) => d0::verify_d0(&ctx, a),
        Command::ComposeD0(a) => d0::compose(a),
        Command::Bound(a) => bounds::bound(a),
        Command::Threshold(a) => bounds::threshold(a),
        Command::Conjecture(a) => bounds::conjecture(a),
    }
}

pub struct Ctx<'a> {
    global: &'a Global,
    started: Instant,
}

/// A result as stored and printed, plus whether it came from the store.
pub struct Stored {
    pub result: Value,
    pub exhaustive: bool,
    pub cached: bool,
}

impl<'a> Ctx<'a> {
    fn new(global: &'a Global) -> Result<Self> {
        if let Some(s) = global.budget_seconds {
            if !(s.is_finite() && s >= 0.0) {
                bail!("--budget-seconds must be a non-negative number");
            }
        }
        Ok(Self {
            global,
            started: Instant::now(),
        })
    }

    pub fn budget(&self) -> Budget {
        let mut b = match self.global.budget_nodes {
            Some(n) => Budget::nodes(n),
            None => Budget::unlimited(),
        };
        if let Some(d) = self.remaining_time() {
            b = b.with_duration(d);
        }
        b
    }

    /// Time left of `--budget-seconds`.
    pub fn remaining_time(&self) -> Option<Duration> {
        self.global
            .budget_seconds
            .map(|s| Duration::from_secs_f64(s).saturating_sub(self.started.elapsed()))
    }

    /// Returns the newest exhaustive stored result for the key unless
    /// `--force`; otherwise runs `compute` and records what it returns.
    pub fn stored(
        &self,
        operation: &str,
        params: Value,
        compute: impl FnOnce() -> Result<(Value, bool)>,
    ) -> Result<Stored> {
        let path = store::resolve_path(self.global.store.as_deref());
        let mut store = ResultsStore::open(&path)?;
        if !self.global.force {
            if let Some(rec) = store.cached(operation, &params)? {
                return Ok(Stored {
                    result: rec.result,
                    exhaustive: true,
                    cached: true,
                });
            }
        }
        let started_unix = store::now_unix();
        let (result, exhaustive) = compute()?;
        store.put(&StoreRecord {
            schema_version: RECORD_VERSION,
            operation: operation.into(),
            params,
            result: result.clone(),
            exhaustive,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            started_unix,
            finished_unix: store::now_unix(),
        })?;
        Ok(Stored {
            result,
            exhaustive,
            cached: false,
        })
    }
}

/// Adds the per-invocation fields to a stored result.
fn with_run_fields(result: &Value, cached: bool, elapsed: Duration) -> Value {
    let mut m: Map<String, Value> = result.as_object().cloned().unwrap_or_default();
    m.insert("cached".into(), Value::Bool(cached));
    m.insert("elapsed_seconds".into(), elapsed.as_secs_f64().into());
    Value::Object(m)
}
