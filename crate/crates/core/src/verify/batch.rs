use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::blockpos::{sample_random, FunctionPair, SampleKind};
use crate::ellwidth::{default_alpha_grid, delta2_estimate_with, Delta2Options};
use crate::error::Result;
use crate::linalg::{hermitian_eigenvalues, SchattenP, C64};
use crate::numrange::{dist_to_scalars, range_summary, DEFAULT_GRID};
use crate::parallel::map_indexed;
use crate::rng::{derive_trial_seed, gaussian_matrix, random_hermitian, rng_from_seed, stream_seed, uniform};

use super::report::{MarginReport, ReportKind, StatementId, REPORT_SCHEMA};
use super::statements::{
    cor36_report, cor37_report, prop39_report, verify_cor23, verify_cor35, verify_prop34, BlockInstance,
};

pub const BATCH_SCHEMA: &str = REPORT_SCHEMA;

/// Number of tight instances kept per statement in the summary.
const TIGHT_KEEP: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub statements: Vec<StatementId>,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub p_grid: Vec<SchattenP>,
    /// Restarts for the `δ̂₂` estimate behind informational and certificate
    /// reports.
    pub delta2_restarts: usize,
}

impl BatchConfig {
    pub fn new(statements: Vec<StatementId>, n_list: Vec<usize>, trials: usize, seed: u64) -> Self {
        Self {
            statements,
            n_list,
            trials,
            seed,
            p_grid: default_p_grid(),
            delta2_restarts: 8,
        }
    }

    fn wants(&self, id: StatementId) -> bool {
        self.statements.contains(&id)
    }
}

pub fn default_p_grid() -> Vec<SchattenP> {
    [1.0, 1.5, 2.0, 4.0, f64::INFINITY]
        .into_iter()
        .map(|p| SchattenP::new(p).expect("valid exponent"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementSummary {
    pub statement_id: StatementId,
    pub count: usize,
    /// Reports that count towards violations (sound inequalities and witnesses).
    pub sound_count: usize,
    pub violations: usize,
    /// Smallest `slack/(1+|rhs|)` over sound inequalities, or smallest
    /// witness margin.
    pub worst: Option<MarginReport>,
    pub tight_count: usize,
    pub tight: Vec<MarginReport>,
    /// Trials skipped because the instance failed a hypothesis.
    pub skipped: usize,
}

impl StatementSummary {
    fn new(id: StatementId) -> Self {
        Self {
            statement_id: id,
            count: 0,
            sound_count: 0,
            violations: 0,
            worst: None,
            tight_count: 0,
            tight: Vec::new(),
            skipped: 0,
        }
    }

    fn badness(r: &MarginReport) -> f64 {
        match r.kind {
            ReportKind::Inequality => r.slack / r.scale(),
            ReportKind::Witness => -r.slack,
        }
    }

    fn push(&mut self, r: &MarginReport) {
        self.count += 1;
        if r.kind == ReportKind::Witness || r.sound {
            self.sound_count += 1;
            if self.worst.as_ref().is_none_or(|w| Self::badness(r) < Self::badness(w)) {
                self.worst = Some(r.clone());
            }
        }
        if r.is_violation() {
            self.violations += 1;
        }
        if r.sound && r.is_tight() {
            self.tight_count += 1;
            if self.tight.len() < TIGHT_KEEP {
                self.tight.push(r.clone());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub schema: String,
    pub config: BatchConfig,
    pub summaries: Vec<StatementSummary>,
    #[serde(skip)]
    pub reports: Vec<MarginReport>,
}

impl BatchResult {
    pub fn total_violations(&self) -> usize {
        self.summaries.iter().map(|s| s.violations).sum()
    }

    pub fn summary(&self, id: StatementId) -> Option<&StatementSummary> {
        self.summaries.iter().find(|s| s.statement_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("batch result serializes")
    }

    /// Every report, one per line, after [`MarginReport::CSV_HEADER`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from(MarginReport::CSV_HEADER);
        out.push('\n');
        for r in &self.reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

/// Output of one trial: reports plus statements skipped on a failed
/// hypothesis.
#[derive(Default)]
struct TrialOutput {
    reports: Vec<MarginReport>,
    skipped: Vec<StatementId>,
}

impl TrialOutput {
    fn absorb(&mut self, id: StatementId, r: Result<Vec<MarginReport>>) {
        match r {
            Ok(v) => self.reports.extend(v),
            Err(_) => self.skipped.push(id),
        }
    }
}

/// Cycles the block-matrix families so that the normal, unitary and
/// essentially Hermitian equality regimes appear in every batch.
fn block_kind(trial: usize) -> SampleKind {
    match trial % 4 {
        0 | 1 => SampleKind::General,
        2 => SampleKind::UnitaryOffdiag,
        _ => SampleKind::EssentiallyHermitianOffdiag,
    }
}

fn block_trial(cfg: &BatchConfig, n: usize, seed: u64, trial: usize) -> TrialOutput {
    use StatementId::*;
    let mut out = TrialOutput::default();
    let bp = match sample_random(n, block_kind(trial), seed) {
        Ok(bp) => bp,
        Err(_) => {
            out.skipped
                .extend([Thm11, RevBl2, Thm21, Thm21Refined, Cor22, Cor36, Cor37, Prop39]);
            return out;
        }
    };
    let inst = match BlockInstance::new(&bp, seed) {
        Ok(i) => i,
        Err(_) => {
            out.skipped.push(Thm11);
            return out;
        }
    };
    if cfg.wants(Thm11) {
        out.absorb(Thm11, cfg.p_grid.iter().map(|&p| inst.thm11(p)).collect());
    }
    if cfg.wants(RevBl2) {
        out.absorb(RevBl2, cfg.p_grid.iter().map(|&p| inst.reverse(p)).collect());
    }
    let x = bp.x_block();
    let needs_hat = n >= 2 && (cfg.wants(Thm21) || cfg.wants(Cor36) || cfg.wants(Prop39));
    let hat = if needs_hat {
        let opts = Delta2Options::new(cfg.delta2_restarts, seed);
        delta2_estimate_with(x, &opts).ok().map(|e| e.value)
    } else {
        None
    };
    if cfg.wants(Thm21) {
        out.absorb(Thm21, inst.thm21(hat));
    }
    if cfg.wants(Thm21Refined) || cfg.wants(Thm21) {
        out.reports.push(inst.thm21_refined());
    }
    if cfg.wants(Cor22) {
        out.absorb(Cor22, inst.cor22());
    }
    if let Some(hat) = hat {
        if cfg.wants(Prop39) {
            out.absorb(Prop39, prop39_report(x, hat, seed).map(|r| vec![r]));
        }
        if cfg.wants(Cor36) {
            let reports = default_alpha_grid()
                .into_iter()
                .map(|a| FunctionPair::power(a).and_then(|pair| cor36_report(x, pair, hat, seed)))
                .collect();
            out.absorb(Cor36, reports);
        }
    }
    if cfg.wants(Cor37) {
        let r = range_summary(x, DEFAULT_GRID).and_then(|s| {
            let tau = x.trace() / n as f64;
            [C64::new(0.0, 0.0), tau, s.chebyshev_center]
                .into_iter()
                .map(|a| cor37_report(x, a, s.inradius, seed))
                .collect()
        });
        out.absorb(Cor37, r);
    }
    out
}

fn cor24_trial(n: usize, seed: u64) -> TrialOutput {
    let mut out = TrialOutput::default();
    let mut rng = rng_from_seed(seed ^ 0x5EED);
    let radius = 0.1 + 2.0 * uniform(&mut rng);
    let center = C64::new(uniform(&mut rng) - 0.5, uniform(&mut rng) - 0.5).scale(4.0);
    let kind = SampleKind::NormalOffdiag { radius, center };
    let r = sample_random(n, kind, seed).and_then(|bp| BlockInstance::new(&bp, seed)?.cor24(None));
    out.absorb(StatementId::Cor24, r);
    out
}

fn cor23_trial(n: usize, seed: u64) -> TrialOutput {
    let mut out = TrialOutput::default();
    let mut rng = rng_from_seed(seed);
    let a = gaussian_matrix(n, n, &mut rng);
    // Mix in low-rank B so that AB* is sometimes far from scalar.
    let b = if uniform(&mut rng) < 0.5 {
        gaussian_matrix(n, n, &mut rng)
    } else {
        let u = gaussian_matrix(n, 1, &mut rng);
        let v = gaussian_matrix(1, n, &mut rng);
        &u * &v
    };
    out.absorb(StatementId::Cor23, verify_cor23(&a, &b, seed));
    out
}

fn cor35_trial(n: usize, seed: u64) -> TrialOutput {
    let mut out = TrialOutput::default();
    let r = (|| {
        let mut rng = rng_from_seed(seed);
        let h0 = random_hermitian(n, &mut rng);
        let k0 = random_hermitian(n, &mut rng);
        let mut x = random_hermitian(n, &mut rng);
        // Keep X comfortably invertible.
        let min_abs = hermitian_eigenvalues(&x)?
            .iter()
            .map(|l| l.abs())
            .fold(f64::INFINITY, f64::min);
        if min_abs < 1e-3 {
            x = x.shift(C64::new(0.1, 0.0));
        }
        let d = dist_to_scalars(&(&h0 * &k0))?.dist;
        let s = if d > 0.0 { ((1.0 - 1e-7) / d).sqrt() } else { 1.0 };
        let h = h0.scale_real(s);
        let k = k0.scale_real(s);
        verify_cor35(&h, &k, &x, seed).map(|r| vec![r])
    })();
    out.absorb(StatementId::Cor35, r);
    out
}

fn prop34_trial(n: usize, seed: u64) -> TrialOutput {
    let mut out = TrialOutput::default();
    let normal = sample_random(
        n,
        SampleKind::NormalOffdiag {
            radius: 1.5,
            center: C64::new(0.0, 0.0),
        },
        seed,
    );
    let r = normal
        .and_then(|bp| verify_prop34(bp.x_block(), seed))
        .map(|o| o.forward);
    out.absorb(StatementId::Prop34Fwd, r);
    if n >= 2 {
        let x = gaussian_matrix(n, n, &mut rng_from_seed(seed ^ 0xA11CE));
        let r = verify_prop34(&x, seed).map(|o| o.witness.into_iter().collect());
        out.absorb(StatementId::Prop34Wit, r);
    }
    out
}

/// Instance groups that share one sampled instance per trial.
#[derive(Clone, Copy)]
enum Group {
    Block,
    Cor23,
    Cor24,
    Cor35,
    Prop34,
}

impl Group {
    fn label(self) -> &'static str {
        match self {
            Self::Block => "block",
            Self::Cor23 => "cor23",
            Self::Cor24 => "cor24",
            Self::Cor35 => "cor35",
            Self::Prop34 => "prop34",
        }
    }

    fn of(id: StatementId) -> Self {
        use StatementId::*;
        match id {
            Thm11 | RevBl2 | Thm21 | Thm21Refined | Cor22 | Cor36 | Cor37 | Prop39 => Self::Block,
            Cor23 => Self::Cor23,
            Cor24 => Self::Cor24,
            Cor35 => Self::Cor35,
            Prop34Fwd | Prop34Wit => Self::Prop34,
        }
    }

    fn run(self, cfg: &BatchConfig, n: usize, seed: u64, trial: usize) -> TrialOutput {
        match self {
            Self::Block => block_trial(cfg, n, seed, trial),
            Self::Cor23 => cor23_trial(n, seed),
            Self::Cor24 => cor24_trial(n, seed),
            Self::Cor35 => cor35_trial(n, seed),
            Self::Prop34 => prop34_trial(n, seed),
        }
    }
}

/// Runs every requested statement on `trials` seeded instances per `n`.
///
/// Trial `t` of a group at size `n` uses
/// `derive_trial_seed(stream_seed(seed, "<group>/n<n>"), t)`, and results
/// are merged in trial order, so the output depends only on the config.
pub fn batch_verify(cfg: &BatchConfig) -> BatchResult {
    let mut groups: Vec<Group> = Vec::new();
    for &id in &cfg.statements {
        let g = Group::of(id);
        if !groups.iter().any(|h| h.label() == g.label()) {
            groups.push(g);
        }
    }
    let mut summaries: BTreeMap<StatementId, StatementSummary> = BTreeMap::new();
    for &id in &cfg.statements {
        summaries.insert(id, StatementSummary::new(id));
        // THM21 always carries its refined bound, PROP34 both directions.
        let companion = match id {
            StatementId::Thm21 => Some(StatementId::Thm21Refined),
            StatementId::Prop34Fwd => Some(StatementId::Prop34Wit),
            StatementId::Prop34Wit => Some(StatementId::Prop34Fwd),
            _ => None,
        };
        if let Some(c) = companion {
            summaries.entry(c).or_insert_with(|| StatementSummary::new(c));
        }
    }
    let mut reports = Vec::new();
    for g in groups {
        for &n in &cfg.n_list {
            let stream = stream_seed(cfg.seed, &format!("{}/n{n}", g.label()));
            let outputs = map_indexed(cfg.trials, |t| g.run(cfg, n, derive_trial_seed(stream, t as u64), t));
            for o in outputs {
                for r in o.reports {
                    if let Some(s) = summaries.get_mut(&r.statement_id) {
                        s.push(&r);
                        reports.push(r);
                    }
                }
                for id in o.skipped {
                    if let Some(s) = summaries.get_mut(&id) {
                        s.skipped += 1;
                    }
                }
            }
        }
    }
    BatchResult {
        schema: BATCH_SCHEMA.to_string(),
        config: cfg.clone(),
        summaries: summaries.into_values().collect(),
        reports,
    }
}
