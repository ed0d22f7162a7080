//! Sharpness of the radius term for normal off-diagonal blocks.

use std::collections::BTreeMap;

use super::anneal::{complex_from, gaussian_params, Restart};
use super::search::{
    completed, merge_history, q26_gap, ranked, Checkpoint, HistoryPoint, Pass, Runner, SearchBudget, SearchResult,
    SearchWitness, Q26_OBJECTIVE, SEARCH_SCHEMA,
};
use crate::blockpos::{assemble, BlockPositive};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, inverse_pd, ComplexMatrix, C64};
use crate::rng::{orthonormalize_columns, DetRng};

/// Floor added to `LL*` so that `A` stays invertible.
const EPS: f64 = 1e-8;

struct Layout {
    n: usize,
    r: f64,
}

impl Layout {
    fn len(&self) -> usize {
        6 * self.n * self.n + 2 * self.n
    }

    /// `(A, N, B)` with `N = U diag(λ) U*`, `|λ_k| ≤ r`, `A = LL*+εI` and
    /// `B = N*A⁻¹N + MM*`.
    fn matrices(&self, p: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
        let n = self.n;
        let m2 = 2 * n * n;
        let u = orthonormalize_columns(&complex_from(&p[..m2], n, n))?;
        let eig: Vec<C64> = (0..n)
            .map(|k| {
                let (s, phi) = (p[m2 + 2 * k], p[m2 + 2 * k + 1]);
                C64::from_polar(self.r * s.sin().abs(), phi)
            })
            .collect();
        let x = &(&u * &ComplexMatrix::diag(&eig)) * &u.adjoint();
        let base = m2 + 2 * n;
        let l = complex_from(&p[base..base + m2], n, n);
        let a = (&l * &l.adjoint()).shift(C64::new(EPS, 0.0)).hermitian_part();
        let m = complex_from(&p[base + m2..base + 2 * m2], n, n);
        let ainv = inverse_pd(&a).ok()?;
        let b = (&(&(&x.adjoint() * &ainv) * &x) + &(&m * &m.adjoint())).hermitian_part();
        Some((a, x, b))
    }

    fn gap(&self, p: &[f64], j: usize) -> Option<f64> {
        let (a, x, b) = self.matrices(p)?;
        let block = ComplexMatrix::block2(&a, &x, &x.adjoint(), &b).ok()?;
        let top = hermitian_eigenvalues(&block).ok()?;
        let sum = hermitian_eigenvalues(&(&a + &b)).ok()?;
        Some(top[2 * j] - sum[j])
    }
}

/// Maximizes `λ_{1+2j}(block) − λ_{1+j}(A+B)` over normal `N` with spectrum
/// in the disc of radius `r` about 0 and Schur completions `A ≻ 0`,
/// `B = N*A⁻¹N + S`, `S ⪰ 0`. The value never exceeds `r`; the witness
/// records `r`, `j` and the ratio `best/r`.
pub fn search_q26(r: f64, j: usize, budget: &SearchBudget) -> Result<SearchResult> {
    search_q26_with(r, j, budget, None)
}

pub fn search_q26_with(
    r: f64,
    j: usize,
    budget: &SearchBudget,
    checkpoint: Option<&Checkpoint>,
) -> Result<SearchResult> {
    budget.validate()?;
    let n = budget.n;
    if j >= n {
        return Err(Error::BadJ { j, n });
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::NegativeInput(format!("radius {r}")));
    }
    let layout = Layout { n, r };
    let init = |_: usize, rng: &mut DetRng| gaussian_params(layout.len(), 1.0 / (n as f64).sqrt(), rng);
    let objective = |p: &[f64]| layout.gap(p, j);
    let pass = Pass {
        label: "main",
        init: &init,
        objective: &objective,
    };
    let finish = |params: &[f64], history, restarts_completed| -> Result<SearchResult> {
        let (a, x, b) = layout
            .matrices(params)
            .ok_or_else(|| Error::HypothesisFailed("degenerate witness".into()))?;
        let block = assemble(&a, &x, &b)?;
        build(block, r, j, history, budget.clone(), restarts_completed)
    };
    let on_done = |out: &Restart| finish(&out.params, Vec::new(), 0).ok();
    let runner = Runner::new(budget, checkpoint);
    let passes = vec![runner.run(Q26_OBJECTIVE, &pass, &on_done)];
    let history = merge_history(&passes, budget.iters_per_restart);
    let done = completed(&passes);
    let mut last_err = Error::HypothesisFailed("no restart completed".into());
    for (p, i) in ranked(&passes) {
        let params = &passes[p][i].as_ref().expect("ranked restarts exist").params;
        match finish(params, history.clone(), done) {
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

fn build(
    block: BlockPositive,
    r: f64,
    j: usize,
    history: Vec<HistoryPoint>,
    budget: SearchBudget,
    restarts_completed: usize,
) -> Result<SearchResult> {
    let best_value = q26_gap(&block, j)?;
    let mut params = BTreeMap::new();
    params.insert("r".to_string(), r);
    params.insert("j".to_string(), j as f64);
    params.insert("ratio".to_string(), if r > 0.0 { best_value / r } else { 0.0 });
    Ok(SearchResult {
        schema: SEARCH_SCHEMA.to_string(),
        objective_name: Q26_OBJECTIVE.to_string(),
        best_value,
        witness: SearchWitness { block, params },
        history,
        budget,
        restarts_completed,
    })
}
