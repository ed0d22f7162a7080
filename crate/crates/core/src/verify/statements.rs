use std::cell::OnceCell;

use crate::blockpos::{assemble, from_schur, witness_modulus, BlockPositive, FunctionPair};
use crate::digest::digest_matrices;
use crate::ellwidth::{
    cor36_certificate, delta2_estimate_with, inradius_certificate, prop39_certificate, Delta2Options,
};
use crate::error::{Error, Result};
use crate::linalg::{
    check_hermitian, hermitian_eigenvalues, hermitian_schatten, inverse_hermitian, normal_eigenvalues,
    normality_defect, ComplexMatrix, SchattenP, C64,
};
use crate::numrange::{dist_to_scalars, range_summary, smallest_enclosing_disc, Disc, RangeSummary, DEFAULT_GRID};
use crate::rng::{random_psd, rng_from_seed, uniform};
use crate::tolerance::tolerances;

use super::report::{MarginReport, StatementId};

/// A block matrix with its spectral data and lazily computed geometry of
/// the off-diagonal block, shared across the statements checked on it.
pub struct BlockInstance<'a> {
    bp: &'a BlockPositive,
    seed: u64,
    digest: String,
    block_eigs: Vec<f64>,
    sum_eigs: Vec<f64>,
    summary: OnceCell<RangeSummary>,
    dist: OnceCell<f64>,
}

impl<'a> BlockInstance<'a> {
    pub fn new(bp: &'a BlockPositive, seed: u64) -> Result<Self> {
        Ok(Self {
            bp,
            seed,
            digest: digest_matrices(&[bp.a_block(), bp.x_block(), bp.b_block()]),
            block_eigs: hermitian_eigenvalues(&bp.block())?,
            sum_eigs: hermitian_eigenvalues(&bp.partial_trace_sum())?,
            summary: OnceCell::new(),
            dist: OnceCell::new(),
        })
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    fn summary(&self) -> Result<&RangeSummary> {
        if self.summary.get().is_none() {
            let s = range_summary(self.bp.x_block(), DEFAULT_GRID)?;
            let _ = self.summary.set(s);
        }
        Ok(self.summary.get().expect("just set"))
    }

    fn dist(&self) -> Result<f64> {
        if self.dist.get().is_none() {
            let d = dist_to_scalars(self.bp.x_block())?.dist;
            let _ = self.dist.set(d);
        }
        Ok(*self.dist.get().expect("just set"))
    }

    fn report(&self, id: StatementId, lhs: f64, rhs: f64) -> MarginReport {
        MarginReport::new(id, lhs, rhs, &self.digest, self.seed)
    }

    /// `‖block‖_p ≤ ‖A+B+ωI‖_p`.
    pub fn thm11(&self, p: SchattenP) -> Result<MarginReport> {
        let omega = self.summary()?.width;
        let lhs = hermitian_schatten(&self.block_eigs, p);
        let shifted: Vec<f64> = self.sum_eigs.iter().map(|l| l + omega).collect();
        let rhs = hermitian_schatten(&shifted, p);
        Ok(self.report(StatementId::Thm11, lhs, rhs).with_p(p))
    }

    /// `‖((A+B)/2+dI) ⊕ ((A+B)/2−dI)‖_p ≤ ‖block‖_p` with `d = dist(0, W(X))`.
    pub fn reverse(&self, p: SchattenP) -> Result<MarginReport> {
        let d = self.summary()?.dist_zero;
        let halves: Vec<f64> = self.sum_eigs.iter().flat_map(|l| [0.5 * l + d, 0.5 * l - d]).collect();
        let lhs = hermitian_schatten(&halves, p);
        let rhs = hermitian_schatten(&self.block_eigs, p);
        Ok(self.report(StatementId::RevBl2, lhs, rhs).with_p(p))
    }

    /// Sound reports with `min(dist(X, ℂI), δ(X))` in place of `δ₂(X)` for
    /// every `j` and, when `delta2_hat` is given, informational reports
    /// using that lower estimate.
    pub fn thm21(&self, delta2_hat: Option<f64>) -> Result<Vec<MarginReport>> {
        let n = self.bp.n();
        let ub = self.dist()?.min(self.summary()?.indiameter);
        let mut out = Vec::with_capacity(2 * n);
        for j in 0..n {
            let lhs = self.block_eigs[2 * j];
            out.push(
                self.report(StatementId::Thm21, lhs, self.sum_eigs[j] + ub)
                    .with_j(j)
                    .with_note("ub=min(dist,indiameter)"),
            );
            if let Some(d2) = delta2_hat {
                out.push(
                    self.report(StatementId::Thm21, lhs, self.sum_eigs[j] + d2)
                        .with_j(j)
                        .informational()
                        .with_note("delta2_estimate"),
                );
            }
        }
        Ok(out)
    }

    /// `λ_{2n−1}(block) ≤ λ_n(A+B)`.
    pub fn thm21_refined(&self) -> MarginReport {
        let n = self.bp.n();
        self.report(
            StatementId::Thm21Refined,
            self.block_eigs[2 * n - 2],
            self.sum_eigs[n - 1],
        )
        .with_j(n - 1)
    }

    pub fn cor22(&self) -> Result<Vec<MarginReport>> {
        let d = self.dist()?;
        Ok((0..self.bp.n())
            .map(|j| {
                self.report(StatementId::Cor22, self.block_eigs[2 * j], self.sum_eigs[j] + d)
                    .with_j(j)
            })
            .collect())
    }

    /// Requires a normal off-diagonal block; `disc` defaults to the smallest
    /// disc enclosing its spectrum.
    pub fn cor24(&self, disc: Option<Disc>) -> Result<Vec<MarginReport>> {
        let x = self.bp.x_block();
        let defect = normality_defect(x)?;
        if defect > tolerances().normality {
            return Err(Error::NotNormal(defect));
        }
        let spectrum = normal_eigenvalues(x)?;
        let disc = disc.unwrap_or_else(|| smallest_enclosing_disc(&spectrum));
        for l in &spectrum {
            let distance = (l - disc.center).norm();
            if distance > disc.radius + 1e-9 {
                return Err(Error::SpectrumOutsideDisc {
                    distance,
                    radius: disc.radius,
                });
            }
        }
        Ok((0..self.bp.n())
            .map(|j| {
                self.report(
                    StatementId::Cor24,
                    self.block_eigs[2 * j],
                    self.sum_eigs[j] + disc.radius,
                )
                .with_j(j)
                .with_note(format!("r={}", disc.radius))
            })
            .collect())
    }
}

pub fn verify_thm11(bp: &BlockPositive, p: SchattenP) -> Result<MarginReport> {
    BlockInstance::new(bp, 0)?.thm11(p)
}

pub fn verify_reverse(bp: &BlockPositive, p: SchattenP) -> Result<MarginReport> {
    BlockInstance::new(bp, 0)?.reverse(p)
}

/// Sound surrogate reports followed by the refined `j = n−1` bound;
/// informational `δ̂₂` reports are added when `delta2` options are given.
pub fn verify_thm21(bp: &BlockPositive, delta2: Option<&Delta2Options>) -> Result<Vec<MarginReport>> {
    let inst = BlockInstance::new(bp, delta2.map_or(0, |o| o.seed))?;
    let hat = match delta2 {
        Some(opts) => Some(delta2_estimate_with(bp.x_block(), opts)?.value),
        None => None,
    };
    let mut out = inst.thm21(hat)?;
    out.push(inst.thm21_refined());
    Ok(out)
}

pub fn verify_cor22(bp: &BlockPositive) -> Result<Vec<MarginReport>> {
    BlockInstance::new(bp, 0)?.cor22()
}

pub fn verify_cor24(bp: &BlockPositive, disc: Option<Disc>) -> Result<Vec<MarginReport>> {
    BlockInstance::new(bp, 0)?.cor24(disc)
}

/// `λ_{1+2j}(A*A+B*B) ≤ λ_{1+j}(AA*+BB*) + min(dist(AB*, ℂI), δ(AB*))` for
/// `1+2j ≤ n`.
pub fn verify_cor23(a: &ComplexMatrix, b: &ComplexMatrix, seed: u64) -> Result<Vec<MarginReport>> {
    let n = a.ensure_square()?;
    if b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch("A and B must have the same shape".into()));
    }
    let left = hermitian_eigenvalues(&(&a.adjoint_mul(a) + &b.adjoint_mul(b)).hermitian_part())?;
    let right = hermitian_eigenvalues(&(&(a * &a.adjoint()) + &(b * &b.adjoint())).hermitian_part())?;
    let x = a * &b.adjoint();
    let ub = dist_to_scalars(&x)?
        .dist
        .min(range_summary(&x, DEFAULT_GRID)?.indiameter);
    let digest = digest_matrices(&[a, b]);
    Ok((0..n)
        .take_while(|j| 2 * j < n)
        .map(|j| MarginReport::new(StatementId::Cor23, left[2 * j], right[j] + ub, &digest, seed).with_j(j))
        .collect())
}

/// `‖XH²X+X⁻¹K²X⁻¹‖∞ ≤ ‖HX²H+KX⁻²K‖∞ + 1` for Hermitian `H, K` and
/// invertible Hermitian `X`, provided `dist(HK, ℂI) ≤ 1`.
pub fn verify_cor35(h: &ComplexMatrix, k: &ComplexMatrix, x: &ComplexMatrix, seed: u64) -> Result<MarginReport> {
    let n = x.ensure_square()?;
    for m in [h, k] {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch("H, K and X must share a dimension".into()));
        }
    }
    check_hermitian(h)?;
    check_hermitian(k)?;
    check_hermitian(x)?;
    let (x_inv, min_abs) = inverse_hermitian(&x.hermitian_part())?;
    if min_abs <= 1e-8 {
        return Err(Error::SingularX(min_abs));
    }
    let hk = h * k;
    let dist = dist_to_scalars(&hk)?.dist;
    if dist > 1.0 + 1e-9 {
        return Err(Error::HypothesisFailed(format!("dist(HK, CI) = {dist} > 1")));
    }
    let h2 = h * h;
    let k2 = k * k;
    let lhs_m = &(&(x * &h2) * x) + &(&(&x_inv * &k2) * &x_inv);
    let x2 = x * x;
    let x_inv2 = &x_inv * &x_inv;
    let rhs_m = &(&(h * &x2) * h) + &(&(k * &x_inv2) * k);
    let lhs = hermitian_eigenvalues(&lhs_m.hermitian_part())?[0];
    let rhs = hermitian_eigenvalues(&rhs_m.hermitian_part())?[0] + 1.0;
    Ok(
        MarginReport::new(StatementId::Cor35, lhs, rhs, &digest_matrices(&[h, k, x]), seed)
            .with_note(format!("dist(HK)={dist}")),
    )
}

/// Lower-bound certificate against the frame estimate `δ̂₂`. A shortfall
/// means the optimizer missed, so it is marked informational.
fn certificate_report(id: StatementId, lhs: f64, rhs: f64, x: &ComplexMatrix, seed: u64) -> MarginReport {
    let r = MarginReport::new(id, lhs, rhs, &digest_matrices(&[x]), seed);
    if r.slack < -tolerances().inequality_slack * r.scale() {
        r.informational().with_note("optimizer shortfall")
    } else {
        r
    }
}

pub fn cor36_report(x: &ComplexMatrix, pair: FunctionPair, delta2_hat: f64, seed: u64) -> Result<MarginReport> {
    let lhs = match pair {
        FunctionPair::Identity => prop39_certificate(x)?,
        FunctionPair::Power { alpha } => cor36_certificate(x, alpha)?,
    };
    Ok(certificate_report(StatementId::Cor36, lhs, delta2_hat, x, seed).with_note(format!("alpha={}", pair.alpha())))
}

pub fn prop39_report(x: &ComplexMatrix, delta2_hat: f64, seed: u64) -> Result<MarginReport> {
    Ok(certificate_report(
        StatementId::Prop39,
        prop39_certificate(x)?,
        delta2_hat,
        x,
        seed,
    ))
}

pub fn cor37_report(x: &ComplexMatrix, a: C64, inradius: f64, seed: u64) -> Result<MarginReport> {
    let lhs = inradius_certificate(x, a)?;
    Ok(
        MarginReport::new(StatementId::Cor37, lhs, inradius, &digest_matrices(&[x]), seed)
            .with_note(format!("a={}{:+}i", a.re, a.im)),
    )
}

pub fn verify_cor36(x: &ComplexMatrix, pair: FunctionPair, delta2: &Delta2Options) -> Result<MarginReport> {
    let hat = delta2_estimate_with(x, delta2)?.value;
    cor36_report(x, pair, hat, delta2.seed)
}

pub fn verify_prop39(x: &ComplexMatrix, delta2: &Delta2Options) -> Result<MarginReport> {
    let hat = delta2_estimate_with(x, delta2)?.value;
    prop39_report(x, hat, delta2.seed)
}

/// `ε(X) ≥ ‖X−aI‖∞ − ‖(|X−aI|+|X*−āI|)/2‖∞` against the computed inradius.
pub fn verify_cor37(x: &ComplexMatrix, a: C64) -> Result<MarginReport> {
    x.ensure_square()?;
    let inradius = range_summary(x, DEFAULT_GRID)?.inradius;
    cor37_report(x, a, inradius, 0)
}

/// Outcome of the Frobenius-norm characterization of normality.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop34Outcome {
    /// For normal `X`: one Frobenius and one trace report per completion.
    pub forward: Vec<MarginReport>,
    /// For non-normal `X`: the modulus witness.
    pub witness: Option<MarginReport>,
}

pub const PROP34_COMPLETIONS: usize = 50;

/// Normal `X`: `‖block‖₂ ≤ ‖A+B‖₂` and `Tr X*X ≤ Tr AB` on random
/// completions. Non-normal `X`: the witness `[[|X*|, X], [X*, |X|]]` must
/// satisfy `‖block‖₂ > ‖A+B‖₂`.
pub fn verify_prop34(x: &ComplexMatrix, seed: u64) -> Result<Prop34Outcome> {
    let n = x.ensure_square()?;
    let digest = digest_matrices(&[x]);
    if normality_defect(x)? > tolerances().normality {
        let w = witness_modulus(x)?;
        let lhs = w.block().frobenius_norm();
        let rhs = w.partial_trace_sum().frobenius_norm();
        return Ok(Prop34Outcome {
            forward: Vec::new(),
            witness: Some(MarginReport::new(StatementId::Prop34Wit, lhs, rhs, &digest, seed).witness()),
        });
    }
    let mut rng = rng_from_seed(seed);
    let w = witness_modulus(x)?;
    let mut forward = Vec::with_capacity(2 * PROP34_COMPLETIONS);
    for c in 0..PROP34_COMPLETIONS {
        let bp = if c % 2 == 0 {
            // Minimal Schur completion over a random positive definite A.
            let a = random_psd(n, &mut rng).shift(C64::new(0.05, 0.0));
            from_schur(&a, x, &ComplexMatrix::zeros(n, n))?
        } else {
            let t = 0.5 + 1.5 * uniform(&mut rng);
            let a = &w.a_block().scale_real(t) + &random_psd(n, &mut rng).scale_real(uniform(&mut rng));
            let b = &w.b_block().scale_real(1.0 / t) + &random_psd(n, &mut rng).scale_real(uniform(&mut rng));
            assemble(&a, x, &b)?
        };
        let lhs = bp.block().frobenius_norm();
        let rhs = bp.partial_trace_sum().frobenius_norm();
        forward.push(
            MarginReport::new(StatementId::Prop34Fwd, lhs, rhs, &digest, seed)
                .with_p(SchattenP::TWO)
                .with_note(format!("completion {c}: frobenius")),
        );
        let tr_xx = x.adjoint_mul(x).trace().re;
        let tr_ab = (bp.a_block() * bp.b_block()).trace().re;
        forward.push(
            MarginReport::new(StatementId::Prop34Fwd, tr_xx, tr_ab, &digest, seed)
                .with_note(format!("completion {c}: trace")),
        );
    }
    Ok(Prop34Outcome { forward, witness: None })
}
