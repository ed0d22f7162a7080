//! Norm-ratio search for a fixed off-diagonal block.

use std::collections::BTreeMap;

use super::anneal::{complex_from, gaussian_params, hermitian_from, Restart};
use super::search::{
    completed, conj33_ratio, merge_history, ranked, Checkpoint, HistoryPoint, Pass, Runner, SearchBudget, SearchResult,
    SearchWitness, CONJ33_OBJECTIVE, SEARCH_SCHEMA,
};
use crate::blockpos::assemble;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, inverse_pd, operator_norm, ComplexMatrix, C64};
use crate::rng::DetRng;

const EPS: f64 = 1e-8;

/// The three parametrizations searched, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    /// `A = LL*+εI`, `B = X*A⁻¹X`.
    Schur,
    /// `A = k/2·I + H`, `B = k/2·I − H` with the least feasible `k`.
    FixedSum,
    /// `B = X*A⁻¹X + MM*`, started from the Schur pass.
    Perturbed,
}

impl Stage {
    const ALL: [Stage; 3] = [Stage::Schur, Stage::FixedSum, Stage::Perturbed];

    fn label(self) -> &'static str {
        match self {
            Self::Schur => "schur",
            Self::FixedSum => "fixed_sum",
            Self::Perturbed => "perturbed",
        }
    }

    fn index(self) -> f64 {
        match self {
            Self::Schur => 1.0,
            Self::FixedSum => 2.0,
            Self::Perturbed => 3.0,
        }
    }
}

struct Problem<'a> {
    x: &'a ComplexMatrix,
    n: usize,
}

impl Problem<'_> {
    fn schur(&self, p: &[f64], perturb: bool) -> Option<(ComplexMatrix, ComplexMatrix)> {
        let n = self.n;
        let m2 = 2 * n * n;
        let l = complex_from(&p[..m2], n, n);
        let a = (&l * &l.adjoint()).shift(C64::new(EPS, 0.0)).hermitian_part();
        let ainv = inverse_pd(&a).ok()?;
        let mut b = &(&self.x.adjoint() * &ainv) * self.x;
        if perturb {
            let m = complex_from(&p[m2..2 * m2], n, n);
            b = &b + &(&m * &m.adjoint());
        }
        Some((a, b.hermitian_part()))
    }

    /// `(A, B, k)` for the fixed-sum family.
    fn fixed_sum(&self, p: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix, f64)> {
        let n = self.n;
        let h = hermitian_from(p, n);
        let m = ComplexMatrix::block2(&h, self.x, &self.x.adjoint(), &h.scale_real(-1.0)).ok()?;
        let eig = hermitian_eigenvalues(&m).ok()?;
        let k = -2.0 * eig[2 * n - 1];
        if !(k > 0.0) {
            return None;
        }
        let half = C64::new(0.5 * k, 0.0);
        Some((h.shift(half), h.scale_real(-1.0).shift(half), k))
    }

    fn matrices(&self, stage: Stage, p: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix)> {
        match stage {
            Stage::Schur => self.schur(p, false),
            Stage::Perturbed => self.schur(p, true),
            Stage::FixedSum => self.fixed_sum(p).map(|(a, b, _)| (a, b)),
        }
    }

    fn ratio(&self, stage: Stage, p: &[f64]) -> Option<f64> {
        if stage == Stage::FixedSum {
            // λmax(block) = k/2 + λmax(M) and A+B = kI.
            let n = self.n;
            let h = hermitian_from(p, n);
            let m = ComplexMatrix::block2(&h, self.x, &self.x.adjoint(), &h.scale_real(-1.0)).ok()?;
            let eig = hermitian_eigenvalues(&m).ok()?;
            let k = -2.0 * eig[2 * n - 1];
            return (k > 0.0).then(|| 0.5 + eig[0] / k);
        }
        let (a, b) = self.matrices(stage, p)?;
        let block = ComplexMatrix::block2(&a, self.x, &self.x.adjoint(), &b).ok()?;
        let top = hermitian_eigenvalues(&block).ok()?[0];
        let sum = hermitian_eigenvalues(&(&a + &b)).ok()?[0];
        Some(top / sum)
    }

    fn param_len(&self, stage: Stage) -> usize {
        match stage {
            Stage::Schur => 2 * self.n * self.n,
            Stage::FixedSum => self.n * self.n,
            Stage::Perturbed => 4 * self.n * self.n,
        }
    }
}

/// Maximizes `‖[[A,X],[X*,B]]‖∞ / ‖A+B‖∞` over positive completions of the
/// fixed block `X` in three passes: minimal Schur completions over
/// `A = LL*+εI`, completions with `A+B = kI`, and Schur completions with a
/// perturbed complement started from the first pass. A value above 1 means
/// `X` fails the norm inequality; for essentially Hermitian `X` the value
/// stays at most 1.
pub fn search_conj33(x: &ComplexMatrix, budget: &SearchBudget) -> Result<SearchResult> {
    search_conj33_with(x, budget, None)
}

pub fn search_conj33_with(
    x: &ComplexMatrix,
    budget: &SearchBudget,
    checkpoint: Option<&Checkpoint>,
) -> Result<SearchResult> {
    budget.validate()?;
    let n = x.ensure_square()?;
    x.ensure_finite()?;
    if n != budget.n {
        return Err(Error::DimensionMismatch(format!(
            "X is {n}x{n} but the budget says n={}",
            budget.n
        )));
    }
    let problem = Problem { x, n };
    let scale = operator_norm(x)?.max(1e-12);
    let finish = |stage: Stage, params: &[f64], history: Vec<HistoryPoint>, done: usize| -> Result<SearchResult> {
        let (a, b) = problem
            .matrices(stage, params)
            .ok_or_else(|| Error::HypothesisFailed("degenerate witness".into()))?;
        let block = assemble(&a, x, &b)?;
        let best_value = conj33_ratio(&block)?;
        let mut wparams = BTreeMap::new();
        wparams.insert("pass".to_string(), stage.index());
        Ok(SearchResult {
            schema: SEARCH_SCHEMA.to_string(),
            objective_name: CONJ33_OBJECTIVE.to_string(),
            best_value,
            witness: SearchWitness { block, params: wparams },
            history,
            budget: budget.clone(),
            restarts_completed: done,
        })
    };
    let runner = Runner::new(budget, checkpoint);
    let mut passes: Vec<Vec<Option<Restart>>> = Vec::new();
    for stage in Stage::ALL {
        let len = problem.param_len(stage);
        let first_pass = passes.first();
        let init = |r: usize, rng: &mut DetRng| -> Vec<f64> {
            match stage {
                Stage::Schur => gaussian_params(len, (scale / n as f64).sqrt(), rng),
                Stage::FixedSum => gaussian_params(len, 0.5 * scale / (n as f64).sqrt(), rng),
                Stage::Perturbed => {
                    let half = len / 2;
                    let mut p = match first_pass.and_then(|pass| pass[r].as_ref()) {
                        Some(prev) => prev.params.clone(),
                        None => gaussian_params(half, (scale / n as f64).sqrt(), rng),
                    };
                    p.extend(gaussian_params(half, 0.1 * (scale / n as f64).sqrt(), rng));
                    p
                }
            }
        };
        let objective = |p: &[f64]| problem.ratio(stage, p);
        let on_done = |out: &Restart| finish(stage, &out.params, Vec::new(), 0).ok();
        let pass = Pass {
            label: stage.label(),
            init: &init,
            objective: &objective,
        };
        let out = runner.run(CONJ33_OBJECTIVE, &pass, &on_done);
        passes.push(out);
    }
    let history = merge_history(&passes, budget.iters_per_restart);
    let done = completed(&passes);
    let mut last_err = Error::HypothesisFailed("no restart completed".into());
    for (p, i) in ranked(&passes) {
        let params = &passes[p][i].as_ref().expect("ranked restarts exist").params;
        match finish(Stage::ALL[p], params, history.clone(), done) {
            Ok(result) => {
                if let Some(cp) = checkpoint {
                    cp.finish(&result)?;
                }
                return Ok(result);
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}
