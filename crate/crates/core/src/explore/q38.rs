//! Schatten-`p` norm ratios over normal off-diagonal blocks.

use serde::{Deserialize, Serialize};

use crate::blockpos::{from_schur, sample_random, BlockPositive, SampleKind};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_schatten, ComplexMatrix, SchattenP, C64};
use crate::parallel::map_indexed;
use crate::rng::{derive_trial_seed, random_psd, rng_from_seed, stream_seed};

pub const Q38_SCHEMA: &str = "q38table/1";

/// Ratios up to this far above 1 are treated as round-off, not excess.
pub const EXCESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Q38Witness {
    pub trial: usize,
    pub ratio: f64,
    pub block: BlockPositive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Q38Row {
    pub p: SchattenP,
    pub max_ratio: f64,
    pub argmax_trial: usize,
    /// Every instance with ratio above `1 + EXCESS_TOL`.
    pub witnesses: Vec<Q38Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Q38Table {
    pub schema: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<Q38Row>,
}

impl Q38Table {
    pub fn row(&self, p: SchattenP) -> Option<&Q38Row> {
        self.rows.iter().find(|r| r.p == p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// `p,max_ratio,argmax_trial,excess_count` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,max_ratio,argmax_trial,excess_count\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.p,
                r.max_ratio,
                r.argmax_trial,
                r.witnesses.len()
            ));
        }
        out
    }
}

/// Trial `t` draws a normal `X` and a positive completion: completions
/// around the modulus witness for normal or unitary `X`, or a minimal Schur
/// completion `B = X*A⁻¹X`, cycling with `t`.
pub fn q38_instance(n: usize, seed: u64, trial: usize) -> Result<BlockPositive> {
    let s = derive_trial_seed(seed, trial as u64);
    match trial % 3 {
        0 => sample_random(
            n,
            SampleKind::NormalOffdiag {
                radius: 1.0,
                center: C64::new(0.0, 0.0),
            },
            s,
        ),
        1 => sample_random(n, SampleKind::UnitaryOffdiag, s),
        _ => {
            let x = sample_random(
                n,
                SampleKind::NormalOffdiag {
                    radius: 1.0,
                    center: C64::new(0.0, 0.0),
                },
                s,
            )?
            .x_block()
            .clone();
            let a = random_psd(n, &mut rng_from_seed(s ^ 0x38)).shift(C64::new(0.05, 0.0));
            from_schur(&a, &x, &ComplexMatrix::zeros(n, n))
        }
    }
}

/// `‖block‖_p / ‖A+B‖_p` for each `p` in the grid, over `trials` normal
/// instances of size `n`.
pub fn scan_q38(p_grid: &[SchattenP], n: usize, trials: usize, seed: u64) -> Result<Q38Table> {
    if p_grid.is_empty() {
        return Err(Error::BadBudget("empty p grid".into()));
    }
    if n == 0 || trials == 0 {
        return Err(Error::BadBudget(format!("n={n}, trials={trials} must be positive")));
    }
    let stream = stream_seed(seed, &format!("q38/n{n}"));
    let per_trial: Vec<Result<(BlockPositive, Vec<f64>)>> = map_indexed(trials, |t| {
        let bp = q38_instance(n, stream, t)?;
        let block = hermitian_eigenvalues(&bp.block())?;
        let sum = hermitian_eigenvalues(&bp.partial_trace_sum())?;
        let ratios = p_grid
            .iter()
            .map(|&p| hermitian_schatten(&block, p) / hermitian_schatten(&sum, p))
            .collect();
        Ok((bp, ratios))
    });
    let per_trial: Vec<(BlockPositive, Vec<f64>)> = per_trial.into_iter().collect::<Result<_>>()?;
    let rows = p_grid
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let mut row = Q38Row {
                p,
                max_ratio: f64::NEG_INFINITY,
                argmax_trial: 0,
                witnesses: Vec::new(),
            };
            for (t, (bp, ratios)) in per_trial.iter().enumerate() {
                let ratio = ratios[k];
                if ratio > row.max_ratio {
                    row.max_ratio = ratio;
                    row.argmax_trial = t;
                }
                if ratio > 1.0 + EXCESS_TOL {
                    row.witnesses.push(Q38Witness {
                        trial: t,
                        ratio,
                        block: bp.clone(),
                    });
                }
            }
            row
        })
        .collect();
    Ok(Q38Table {
        schema: Q38_SCHEMA.to_string(),
        n,
        trials,
        seed,
        rows,
    })
}
