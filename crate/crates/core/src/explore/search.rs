use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::anneal::{anneal, Restart};
use crate::blockpos::BlockPositive;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::parallel::map_indexed;
use crate::rng::{derive_trial_seed, rng_from_seed, stream_seed, DetRng};

pub const SEARCH_SCHEMA: &str = "searchresult/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBudget {
    pub restarts: usize,
    pub iters_per_restart: usize,
    pub seed: u64,
    pub n: usize,
    /// Wall-clock cap. Restarts not started before the cap are skipped, so
    /// a binding limit makes the result timing dependent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_s: Option<f64>,
}

impl SearchBudget {
    pub fn new(restarts: usize, iters_per_restart: usize, seed: u64, n: usize) -> Self {
        Self {
            restarts,
            iters_per_restart,
            seed,
            n,
            time_limit_s: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.iters_per_restart == 0 || self.n == 0 {
            return Err(Error::BadBudget(format!(
                "restarts={}, iters={}, n={} must all be positive",
                self.restarts, self.iters_per_restart, self.n
            )));
        }
        if let Some(t) = self.time_limit_s {
            if !(t > 0.0) {
                return Err(Error::BadBudget(format!("time limit {t}")));
            }
        }
        Ok(())
    }
}

/// Block matrix attaining the best value, with the search parameters
/// needed to re-evaluate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchWitness {
    pub block: BlockPositive,
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub iteration: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub schema: String,
    pub objective_name: String,
    pub best_value: f64,
    pub witness: SearchWitness,
    /// Best-so-far values, nondecreasing.
    pub history: Vec<HistoryPoint>,
    pub budget: SearchBudget,
    pub restarts_completed: usize,
}

pub const Q26_OBJECTIVE: &str = "q26_gap";
pub const CONJ33_OBJECTIVE: &str = "conj33_ratio";

/// `λ_{1+2j}(block) − λ_{1+j}(A+B)`.
pub fn q26_gap(bp: &BlockPositive, j: usize) -> Result<f64> {
    let n = bp.n();
    if j >= n {
        return Err(Error::BadJ { j, n });
    }
    let block = hermitian_eigenvalues(&bp.block())?;
    let sum = hermitian_eigenvalues(&bp.partial_trace_sum())?;
    Ok(block[2 * j] - sum[j])
}

/// `‖block‖∞ / ‖A+B‖∞`, both PSD so the norms are top eigenvalues.
pub fn conj33_ratio(bp: &BlockPositive) -> Result<f64> {
    let block = hermitian_eigenvalues(&bp.block())?[0];
    let sum = hermitian_eigenvalues(&bp.partial_trace_sum())?[0];
    Ok(block / sum)
}

impl SearchResult {
    /// Recomputes the objective from the stored witness alone.
    pub fn reevaluate(&self) -> Result<f64> {
        match self.objective_name.as_str() {
            Q26_OBJECTIVE => {
                let j = self.witness.params.get("j").copied().unwrap_or(0.0);
                q26_gap(&self.witness.block, j as usize)
            }
            CONJ33_OBJECTIVE => conj33_ratio(&self.witness.block),
            other => Err(Error::Parse(format!("unknown objective {other:?}"))),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `iteration,value` lines for plotting.
    pub fn history_csv(&self) -> String {
        let mut out = String::from("iteration,value\n");
        for h in &self.history {
            out.push_str(&format!("{},{}\n", h.iteration, h.value));
        }
        out
    }
}

/// Writes the best result seen so far to `path` at most once per interval,
/// and unconditionally on [`Checkpoint::finish`].
pub struct Checkpoint {
    path: PathBuf,
    interval: Duration,
    state: Mutex<CheckpointState>,
}

struct CheckpointState {
    last_write: Instant,
    best: Option<SearchResult>,
}

impl Checkpoint {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self::with_interval(path, Duration::from_secs(10))
    }

    pub fn with_interval(path: impl Into<PathBuf>, interval: Duration) -> Self {
        Self {
            path: path.into(),
            interval,
            state: Mutex::new(CheckpointState {
                last_write: Instant::now(),
                best: None,
            }),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn best_value(&self) -> f64 {
        let state = self.state.lock().unwrap_or_else(|e| e.into_inner());
        state.best.as_ref().map_or(f64::NEG_INFINITY, |b| b.best_value)
    }

    /// Keeps `candidate` if it beats the stored best; writes when the
    /// interval has elapsed. Write failures are retried at the next offer.
    pub fn offer(&self, candidate: SearchResult) {
        let mut state = self.state.lock().unwrap_or_else(|e| e.into_inner());
        if state.best.as_ref().is_none_or(|b| candidate.best_value > b.best_value) {
            state.best = Some(candidate);
        }
        if state.last_write.elapsed() >= self.interval {
            if let Some(best) = &state.best {
                if write_atomic(&self.path, &best.to_json()).is_ok() {
                    state.last_write = Instant::now();
                }
            }
        }
    }

    pub fn finish(&self, result: &SearchResult) -> Result<()> {
        let mut state = self.state.lock().unwrap_or_else(|e| e.into_inner());
        state.best = Some(result.clone());
        state.last_write = Instant::now();
        write_atomic(&self.path, &result.to_json())
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::Io(e.to_string()))
}

/// One optimization pass: `budget.restarts` independent annealing runs.
pub(crate) struct Pass<'a> {
    pub label: &'static str,
    pub init: &'a (dyn Fn(usize, &mut DetRng) -> Vec<f64> + Sync),
    pub objective: &'a (dyn Fn(&[f64]) -> Option<f64> + Sync),
}

pub(crate) struct Runner<'a> {
    pub budget: &'a SearchBudget,
    pub started: Instant,
    pub checkpoint: Option<&'a Checkpoint>,
}

impl Runner<'_> {
    pub fn new<'a>(budget: &'a SearchBudget, checkpoint: Option<&'a Checkpoint>) -> Runner<'a> {
        Runner {
            budget,
            started: Instant::now(),
            checkpoint,
        }
    }

    fn out_of_time(&self) -> bool {
        self.budget
            .time_limit_s
            .is_some_and(|t| self.started.elapsed().as_secs_f64() >= t)
    }

    /// Runs the pass; restart `r` uses `derive_trial_seed(stream, r)` with
    /// the stream named by the objective and pass. `on_done` turns an
    /// improving restart into a checkpoint candidate.
    pub fn run(
        &self,
        objective_name: &str,
        pass: &Pass<'_>,
        on_done: &(dyn Fn(&Restart) -> Option<SearchResult> + Sync),
    ) -> Vec<Option<Restart>> {
        let stream = stream_seed(self.budget.seed, &format!("{objective_name}/{}", pass.label));
        let iters = self.budget.iters_per_restart;
        map_indexed(self.budget.restarts, |r| {
            if self.out_of_time() {
                return None;
            }
            let mut rng = rng_from_seed(derive_trial_seed(stream, r as u64));
            let init = (pass.init)(r, &mut rng);
            let out = anneal(init, iters, &mut rng, |p| (pass.objective)(p).filter(|v| v.is_finite()));
            if let Some(cp) = self.checkpoint {
                if out.value > cp.best_value() {
                    if let Some(candidate) = on_done(&out) {
                        cp.offer(candidate);
                    }
                }
            }
            Some(out)
        })
    }
}

/// Running maximum over all passes and restarts in index order.
pub(crate) fn merge_history(passes: &[Vec<Option<Restart>>], iters: usize) -> Vec<HistoryPoint> {
    let mut out: Vec<HistoryPoint> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut offset = 0;
    for pass in passes {
        for restart in pass {
            if let Some(r) = restart {
                for &(k, v) in &r.trace {
                    if v > best {
                        best = v;
                        out.push(HistoryPoint {
                            iteration: offset + k,
                            value: v,
                        });
                    }
                }
            }
            offset += iters;
        }
    }
    out
}

/// `(pass, restart)` indices ordered by value, best first; ties keep
/// index order.
pub(crate) fn ranked(passes: &[Vec<Option<Restart>>]) -> Vec<(usize, usize)> {
    let mut idx: Vec<(usize, usize, f64)> = Vec::new();
    for (p, pass) in passes.iter().enumerate() {
        for (r, restart) in pass.iter().enumerate() {
            if let Some(out) = restart {
                if out.value.is_finite() {
                    idx.push((p, r, out.value));
                }
            }
        }
    }
    idx.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    idx.into_iter().map(|(p, r, _)| (p, r)).collect()
}

pub(crate) fn completed(passes: &[Vec<Option<Restart>>]) -> usize {
    passes.iter().flatten().filter(|r| r.is_some()).count()
}
