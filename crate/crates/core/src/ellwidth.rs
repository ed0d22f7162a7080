//! Elliptical width `δ₂(X) = sup_{dim S = 2} δ(X_S)`.
//!
//! The numerical range of a compression to a 2-dimensional subspace is an
//! elliptical disc whose indiameter is its minor axis, so `δ₂` is the largest
//! minor axis over orthonormal 2-frames. [`delta2_estimate`] searches frames
//! and always reports a value attained by an explicit frame, i.e. a lower
//! bound on `δ₂`. [`delta2_certificates`] evaluates the closed-form lower
//! bounds built from the left and right moduli.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    complete_orthonormal, dot, hermitian_eig, operator_norm, svd_decompose, vec_norm, ComplexMatrix, SingularDecomp,
    C64,
};
use crate::numrange::{minor_axis_sq_2x2, range_summary, DEFAULT_GRID};
use crate::parallel::map_indexed;
use crate::rng::{derive_trial_seed, gaussian_vector, rng_from_seed, DetRng};

pub const DEFAULT_RESTARTS: usize = 64;
const STALL_LIMIT: usize = 20;
/// The perturbation phase only needs to find the right basin; the ridge
/// ascent afterwards converges to machine precision.
const MIN_STEP: f64 = 1e-4;
const MAX_PROPOSALS: usize = 40_000;

/// Orthonormal pair of vectors spanning a 2-dimensional subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame2 {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
}

impl Frame2 {
    /// Validates `‖u‖ = ‖v‖ = 1` and `u*v = 0` to 1e-10.
    pub fn new(u: Vec<C64>, v: Vec<C64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch("frame vectors differ in length".into()));
        }
        let defect = (vec_norm(&u) - 1.0)
            .abs()
            .max((vec_norm(&v) - 1.0).abs())
            .max(dot(&u, &v).norm());
        if !(defect <= 1e-10) {
            return Err(Error::BadFrame(defect));
        }
        Ok(Self { u, v })
    }

    /// Gram-Schmidt on `(a, b)`; if `b` is (nearly) parallel to `a`, a
    /// standard basis vector completes the frame.
    pub fn orthonormalize(a: &[C64], b: &[C64]) -> Option<Self> {
        let n = a.len();
        let na = vec_norm(a);
        if n < 2 || !(na > 1e-300) {
            return None;
        }
        let u: Vec<C64> = a.iter().map(|z| z / na).collect();
        let mut cols = vec![u];
        let mut w = b.to_vec();
        for _ in 0..2 {
            let p = dot(&cols[0], &w);
            for (wi, ui) in w.iter_mut().zip(&cols[0]) {
                *wi -= p * ui;
            }
        }
        let nw = vec_norm(&w);
        if nw > 1e-8 * vec_norm(b).max(1e-300) && nw > 1e-300 {
            cols.push(w.into_iter().map(|z| z / nw).collect());
        } else {
            complete_orthonormal(&mut cols, n);
        }
        let v = cols.swap_remove(1);
        let u = cols.swap_remove(0);
        Some(Self { u, v })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }
}

/// `[[u*Xu, u*Xv], [v*Xu, v*Xv]]`.
pub fn compress2(x: &ComplexMatrix, frame: &Frame2) -> Result<ComplexMatrix> {
    let n = x.ensure_square()?;
    if frame.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "frame of dimension {} for a {n}x{n} matrix",
            frame.dim()
        )));
    }
    let frame = Frame2::new(frame.u.clone(), frame.v.clone())?;
    Ok(compress_unchecked(x, &frame))
}

fn compress_unchecked(x: &ComplexMatrix, f: &Frame2) -> ComplexMatrix {
    let xu = x.mul_vec(&f.u);
    let xv = x.mul_vec(&f.v);
    ComplexMatrix::from_rows(&[&[dot(&f.u, &xu), dot(&f.u, &xv)], &[dot(&f.v, &xu), dot(&f.v, &xv)]])
}

/// Squared indiameter of `W(C)` for a 2×2 matrix:
/// `max(0, tr(C*C) − |μ₁|² − |μ₂|²)`.
pub fn minor_axis_sq(c: &ComplexMatrix) -> Result<f64> {
    if c.rows() != 2 || c.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "minor_axis_sq needs a 2x2 matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    c.ensure_finite()?;
    Ok(minor_axis_sq_2x2(c))
}

fn objective(x: &ComplexMatrix, f: &Frame2) -> f64 {
    minor_axis_sq_2x2(&compress_unchecked(x, f))
}

/// What a certificate bounds from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateTarget {
    /// The elliptical width `δ₂(X)`.
    Delta2,
    /// The inradius `ε(X) = δ(X)/2`.
    Inradius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `prop39`, `cor36[alpha=..]` or `cor37[a=..]`.
    pub name: String,
    pub family: String,
    pub target: CertificateTarget,
    pub value: f64,
}

impl Certificate {
    /// The implied lower bound on `δ₂`. Inradius bounds double: applied to
    /// `X − aI` they equal the modulus bound for `δ₂(X − aI) = δ₂(X)`.
    pub fn delta2_bound(&self) -> f64 {
        match self.target {
            CertificateTarget::Delta2 => self.value,
            CertificateTarget::Inradius => 2.0 * self.value,
        }
    }
}

pub fn default_alpha_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

/// `{0, τ, Chebyshev center of W(X)}` with `τ = tr(X)/n`.
pub fn default_a_grid(x: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = x.ensure_square()?;
    let mut out = vec![C64::new(0.0, 0.0)];
    if n > 0 {
        out.push(x.trace() / n as f64);
        out.push(range_summary(x, DEFAULT_GRID)?.chebyshev_center);
    }
    Ok(out)
}

/// Moduli data shared by the certificate formulas.
struct Moduli {
    svd: SingularDecomp,
}

impl Moduli {
    fn new(x: &ComplexMatrix) -> Result<Self> {
        Ok(Self { svd: svd_decompose(x)? })
    }

    /// `φ(|X|)` (right) or `φ(|X*|)` (left).
    fn right(&self, phi: impl Fn(f64) -> f64) -> ComplexMatrix {
        spectral(&self.svd.v_factor, &self.svd.singular_values, phi)
    }

    fn left(&self, phi: impl Fn(f64) -> f64) -> ComplexMatrix {
        spectral(&self.svd.u_factor, &self.svd.singular_values, phi)
    }
}

fn spectral(basis: &ComplexMatrix, values: &[f64], phi: impl Fn(f64) -> f64) -> ComplexMatrix {
    crate::linalg::HermitianEigenDecomp {
        eigenvalues: values.to_vec(),
        eigenvectors: basis.clone(),
    }
    .reassemble(phi)
}

fn power(e: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| if t <= 0.0 { 0.0 } else { t.powf(e) }
}

/// `‖f(|X|)+g(|X|)‖∞ − ‖f(|X*|)+g(|X|)‖∞` with `f = t^{2α}`, `g = t^{2−2α}`.
fn modulus_bound(m: &Moduli, alpha: f64) -> Result<f64> {
    let f = power(2.0 * alpha);
    let g = power(2.0 - 2.0 * alpha);
    let first = m.svd.singular_values.iter().map(|&s| f(s) + g(s)).fold(0.0, f64::max);
    let mixed = &m.left(&f) + &m.right(&g);
    let second = hermitian_eig(&mixed)?.max();
    Ok(first - second)
}

/// Top eigenvector of `[[f(|X*|), X], [X*, g(|X|)]]` split into halves; the
/// span of the halves is a 2-dimensional subspace `S` with
/// `δ(X_S) ≥ ‖f(|X|)+g(|X|)‖∞ − ‖f(|X*|)+g(|X|)‖∞`.
fn modulus_frame(x: &ComplexMatrix, m: &Moduli, alpha: f64) -> Result<Option<Frame2>> {
    let n = x.rows();
    let f = power(2.0 * alpha);
    let g = power(2.0 - 2.0 * alpha);
    let block = ComplexMatrix::block2(&m.left(&f), x, &x.adjoint(), &m.right(&g))?;
    let top = hermitian_eig(&block.hermitian_part())?.eigenvectors.column(0);
    let (h1, h2) = top.split_at(n);
    let (a, b) = if vec_norm(h1) >= vec_norm(h2) {
        (h1, h2)
    } else {
        (h2, h1)
    };
    Ok(Frame2::orthonormalize(a, b))
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha))
    }
}

fn fmt_complex(a: C64) -> String {
    format!("{}{:+}i", a.re, a.im)
}

/// Closed-form lower bounds: the modulus bound for `δ₂` (`f = g = t`), its
/// power-pair family over `alpha_grid`, and the translated inradius bound
/// `‖X−aI‖∞ − ‖(|X−aI| + |X*−āI|)/2‖∞` for each `a`.
pub fn delta2_certificates(x: &ComplexMatrix, alpha_grid: &[f64], a_grid: &[C64]) -> Result<Vec<Certificate>> {
    x.ensure_square()?;
    x.ensure_finite()?;
    for &a in alpha_grid {
        validate_alpha(a)?;
    }
    let m = Moduli::new(x)?;
    let mut out = Vec::with_capacity(1 + alpha_grid.len() + a_grid.len());
    out.push(Certificate {
        name: "prop39".into(),
        family: "prop39".into(),
        target: CertificateTarget::Delta2,
        value: prop39_value(&m)?,
    });
    for &alpha in alpha_grid {
        out.push(Certificate {
            name: format!("cor36[alpha={alpha}]"),
            family: "cor36".into(),
            target: CertificateTarget::Delta2,
            value: modulus_bound(&m, alpha)?,
        });
    }
    for &a in a_grid {
        out.push(Certificate {
            name: format!("cor37[a={}]", fmt_complex(a)),
            family: "cor37".into(),
            target: CertificateTarget::Inradius,
            value: inradius_certificate(x, a)?,
        });
    }
    Ok(out)
}

fn prop39_value(m: &Moduli) -> Result<f64> {
    let sum = &m.left(|t| t) + &m.right(|t| t);
    Ok(2.0 * m.svd.max() - hermitian_eig(&sum)?.max())
}

/// `2‖X‖∞ − ‖|X| + |X*|‖∞`.
pub fn prop39_certificate(x: &ComplexMatrix) -> Result<f64> {
    x.ensure_square()?;
    prop39_value(&Moduli::new(x)?)
}

/// Power-pair bound with `f(t) = t^{2α}`, `g(t) = t^{2−2α}`.
pub fn cor36_certificate(x: &ComplexMatrix, alpha: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    x.ensure_square()?;
    modulus_bound(&Moduli::new(x)?, alpha)
}

/// `‖X−aI‖∞ − ‖(|X−aI| + |X*−āI|)/2‖∞`, a lower bound on the inradius.
pub fn inradius_certificate(x: &ComplexMatrix, a: C64) -> Result<f64> {
    x.ensure_square()?;
    let y = x.shift(-a);
    let m = Moduli::new(&y)?;
    Ok(prop39_value(&m)? / 2.0)
}

/// Lower-bound estimate of `δ₂(X)` with the frame attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta2Estimate {
    pub value: f64,
    pub best_frame: Frame2,
    pub restarts_used: usize,
    pub certificates: Vec<Certificate>,
}

impl Delta2Estimate {
    pub fn max_certificate_bound(&self) -> f64 {
        self.certificates
            .iter()
            .map(Certificate::delta2_bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct Delta2Options {
    pub restarts: usize,
    pub seed: u64,
    pub alpha_grid: Vec<f64>,
    /// `None` selects [`default_a_grid`].
    pub a_grid: Option<Vec<C64>>,
    /// Also start local searches from the frames that realize each
    /// certificate, so the estimate never falls below them.
    pub certificate_starts: bool,
}

impl Delta2Options {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self {
            restarts,
            seed,
            alpha_grid: default_alpha_grid(),
            a_grid: None,
            certificate_starts: true,
        }
    }
}

/// Random-restart local search over orthonormal 2-frames with default
/// certificate grids. Deterministic in `(X, restarts, seed)`.
pub fn delta2_estimate(x: &ComplexMatrix, restarts: usize, seed: u64) -> Result<Delta2Estimate> {
    delta2_estimate_with(x, &Delta2Options::new(restarts, seed))
}

pub fn delta2_estimate_with(x: &ComplexMatrix, opts: &Delta2Options) -> Result<Delta2Estimate> {
    let n = x.ensure_square()?;
    x.ensure_finite()?;
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let a_grid = match &opts.a_grid {
        Some(g) => g.clone(),
        None => default_a_grid(x)?,
    };
    let certificates = delta2_certificates(x, &opts.alpha_grid, &a_grid)?;

    let mut starts: Vec<Start> = Vec::new();
    if opts.certificate_starts {
        let m = Moduli::new(x)?;
        if let Some(f) = modulus_frame(x, &m, 0.5)? {
            starts.push(Start::Fixed(f));
        }
        for &alpha in &opts.alpha_grid {
            if let Some(f) = modulus_frame(x, &m, alpha)? {
                starts.push(Start::Fixed(f));
            }
        }
        for &a in &a_grid {
            let y = x.shift(-a);
            let my = Moduli::new(&y)?;
            if let Some(f) = modulus_frame(&y, &my, 0.5)? {
                starts.push(Start::Fixed(f));
            }
        }
    }
    for t in 0..opts.restarts {
        starts.push(Start::Random(derive_trial_seed(opts.seed, t as u64)));
    }
    if starts.is_empty() {
        starts.push(Start::Random(derive_trial_seed(opts.seed, 0)));
    }

    let runs: Vec<(f64, Frame2)> = map_indexed(starts.len(), |i| {
        let (frame, mut rng) = match &starts[i] {
            Start::Fixed(f) => (
                f.clone(),
                rng_from_seed(derive_trial_seed(opts.seed ^ 0xF1A3, i as u64)),
            ),
            Start::Random(s) => {
                let mut rng = rng_from_seed(*s);
                (random_frame(n, &mut rng), rng)
            }
        };
        local_search(x, frame, &mut rng)
    });

    // Index-ordered max keeps the result independent of scheduling.
    let mut best = runs[0].clone();
    for r in runs.iter().skip(1) {
        if r.0 > best.0 {
            best = r.clone();
        }
    }
    Ok(Delta2Estimate {
        value: best.0.max(0.0).sqrt(),
        best_frame: best.1,
        restarts_used: runs.len(),
        certificates,
    })
}

enum Start {
    Fixed(Frame2),
    Random(u64),
}

fn random_frame(n: usize, rng: &mut DetRng) -> Frame2 {
    loop {
        let a = gaussian_vector(n, rng);
        let b = gaussian_vector(n, rng);
        if let Some(f) = Frame2::orthonormalize(&a, &b) {
            return f;
        }
    }
}

/// Component of `w` orthogonal to the frame's span.
fn project_out(f: &Frame2, w: &mut [C64]) {
    for basis in [&f.u, &f.v] {
        let p = dot(basis, w);
        for (wi, bi) in w.iter_mut().zip(basis.iter()) {
            *wi -= p * bi;
        }
    }
}

fn perturbed(f: &Frame2, step: f64, rng: &mut DetRng) -> Option<Frame2> {
    let n = f.dim();
    let mut w1 = gaussian_vector(n, rng);
    let mut w2 = gaussian_vector(n, rng);
    project_out(f, &mut w1);
    project_out(f, &mut w2);
    let scale = |w: &mut Vec<C64>| {
        let nw = vec_norm(w);
        if nw > 0.0 {
            for z in w.iter_mut() {
                *z *= step / nw;
            }
        }
    };
    scale(&mut w1);
    scale(&mut w2);
    // Mix the pair with each other as well; this does not change the span
    // but varies which vectors absorb the complement directions.
    let mix = C64::from_polar(step * 0.5, crate::rng::uniform(rng) * std::f64::consts::TAU);
    let a: Vec<C64> =
        f.u.iter()
            .zip(&w1)
            .zip(&f.v)
            .map(|((u, w), v)| u + w + mix * v)
            .collect();
    let b: Vec<C64> =
        f.v.iter()
            .zip(&w2)
            .zip(&f.u)
            .map(|((v, w), u)| v + w - mix.conj() * u)
            .collect();
    Frame2::orthonormalize(&a, &b)
}

/// Random perturbation search with step annealing, then a compass polish in
/// tangent coordinates. Returns `(minor_axis_sq, frame)`.
fn local_search(x: &ComplexMatrix, start: Frame2, rng: &mut DetRng) -> (f64, Frame2) {
    let n = x.rows();
    let mut frame = start;
    let mut value = objective(x, &frame);
    if n == 2 {
        return (value, frame);
    }
    let mut step = 0.5;
    let mut stall = 0;
    let mut proposals = 0;
    while step >= MIN_STEP && proposals < MAX_PROPOSALS {
        proposals += 1;
        if let Some(cand) = perturbed(&frame, step, rng) {
            let v = objective(x, &cand);
            if v > value {
                // Round-off sized gains do not count as progress.
                let significant = v - value > 1e-13 * (1.0 + value);
                value = v;
                frame = cand;
                if significant {
                    stall = 0;
                    continue;
                }
            }
        }
        stall += 1;
        if stall >= STALL_LIMIT {
            step *= 0.5;
            stall = 0;
        }
    }
    ridge_ascent(x, frame, value)
}

/// First-order data of the objective at a frame. With `C = U*XU`,
/// `N = C − tr(C)/2·I` and `z = det N`, the objective is
/// `‖N‖²_F − 2|z|`; it is smooth except on the ridge `z = 0`, where the
/// numerical range of the compression is a circular disc. Tangent moves are
/// `U ↦ U + Q⊥K` with `K` an `(n−2)×2` complex matrix.
struct LocalModel {
    frame: Frame2,
    complement: ComplexMatrix,
    value: f64,
    scale: f64,
    z: C64,
    grad_smooth: Vec<f64>,
    grad_re_z: Vec<f64>,
    grad_im_z: Vec<f64>,
}

fn flatten(m: &ComplexMatrix) -> Vec<f64> {
    m.data().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn dotr(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| alpha * a + b).collect()
}

impl LocalModel {
    fn new(x: &ComplexMatrix, frame: Frame2) -> Self {
        let n = x.rows();
        let mut cols = vec![frame.u.clone(), frame.v.clone()];
        complete_orthonormal(&mut cols, n);
        let u = ComplexMatrix::from_columns(n, &cols[..2]);
        let complement = ComplexMatrix::from_columns(n, &cols[2..]);
        let xu = x * &u;
        let c = u.adjoint_mul(&xu);
        let tau = c.trace() * 0.5;
        let nm = c.shift(-tau);
        let z = nm[(0, 0)] * nm[(1, 1)] - nm[(0, 1)] * nm[(1, 0)];
        let fro2 = nm.frobenius_norm().powi(2);
        let p = complement.adjoint_mul(&xu);
        let r = u.adjoint_mul(&(x * &complement));
        let r_adj = r.adjoint();
        let n_adj = nm.adjoint();
        let grad_smooth = flatten(&(&(&p * &n_adj) + &(&r_adj * &nm)).scale_real(2.0));
        let pn = &p * &nm;
        let rn = &r_adj * &n_adj;
        let grad_re_z = flatten(&(&pn + &rn).scale_real(-1.0));
        let grad_im_z = flatten(&(&pn - &rn).scale(C64::new(0.0, 1.0)));
        Self {
            frame,
            complement,
            value: (fro2 - 2.0 * z.norm()).max(0.0),
            scale: fro2,
            z,
            grad_smooth,
            grad_re_z,
            grad_im_z,
        }
    }

    fn gradient(&self) -> Vec<f64> {
        let a = self.z.norm();
        if a == 0.0 {
            return self.grad_smooth.clone();
        }
        let g = axpy(self.z.re / a, &self.grad_re_z, &vec![0.0; self.grad_re_z.len()]);
        let g = axpy(self.z.im / a, &self.grad_im_z, &g);
        axpy(-2.0, &g, &self.grad_smooth)
    }

    /// Coefficients `c` with `J^T c` the least-norm solution of `J d = rhs`,
    /// where `J` has rows `∇Re z`, `∇Im z`.
    fn ridge_solve(&self, rhs: [f64; 2]) -> Option<[f64; 2]> {
        let (a, b) = (&self.grad_re_z, &self.grad_im_z);
        let g11 = dotr(a, a);
        let g12 = dotr(a, b);
        let g22 = dotr(b, b);
        let det = g11 * g22 - g12 * g12;
        if !(det > 1e-20 * (g11 * g22).max(1e-300)) {
            return None;
        }
        Some([(g22 * rhs[0] - g12 * rhs[1]) / det, (g11 * rhs[1] - g12 * rhs[0]) / det])
    }

    /// Smooth-part gradient projected onto the ridge tangent space.
    fn ridge_direction(&self) -> Option<Vec<f64>> {
        let g = &self.grad_smooth;
        let c = self.ridge_solve([dotr(&self.grad_re_z, g), dotr(&self.grad_im_z, g)])?;
        let d = axpy(-c[0], &self.grad_re_z, g);
        Some(axpy(-c[1], &self.grad_im_z, &d))
    }

    fn retract(&self, d: &[f64], t: f64) -> Option<Frame2> {
        let m = self.complement.cols();
        let k = ComplexMatrix::from_fn(m, 2, |i, j| C64::new(d[2 * (2 * i + j)], d[2 * (2 * i + j) + 1]) * t);
        let moved = &self.complement * &k;
        let a: Vec<C64> = self
            .frame
            .u
            .iter()
            .enumerate()
            .map(|(i, z)| z + moved[(i, 0)])
            .collect();
        let b: Vec<C64> = self
            .frame
            .v
            .iter()
            .enumerate()
            .map(|(i, z)| z + moved[(i, 1)])
            .collect();
        Frame2::orthonormalize(&a, &b)
    }
}

/// Newton steps on `z = 0` from `frame`.
fn onto_ridge(x: &ComplexMatrix, frame: Frame2) -> Option<LocalModel> {
    let mut model = LocalModel::new(x, frame);
    for _ in 0..6 {
        if model.z.norm() <= 1e-15 * (model.scale + 1e-300) {
            return Some(model);
        }
        let c = model.ridge_solve([-model.z.re, -model.z.im])?;
        let d = axpy(c[0], &model.grad_re_z, &vec![0.0; model.grad_re_z.len()]);
        let d = axpy(c[1], &model.grad_im_z, &d);
        model = LocalModel::new(x, model.retract(&d, 1.0)?);
    }
    (model.z.norm() <= 1e-12 * (model.scale + 1e-300)).then_some(model)
}

/// Monotone ascent alternating plain gradient steps with steps that follow
/// the ridge (projected gradient plus Newton return onto `z = 0`).
fn ridge_ascent(x: &ComplexMatrix, frame: Frame2, value: f64) -> (f64, Frame2) {
    const MAX_ITERS: usize = 4000;
    let start = frame.clone();
    let mut model = LocalModel::new(x, frame);
    if model.complement.cols() == 0 {
        return (value, start);
    }
    let mut t = f64::NAN;
    for _ in 0..MAX_ITERS {
        let smooth = model.gradient();
        let ridge = if model.z.norm() <= 0.1 * model.scale {
            model.ridge_direction()
        } else {
            None
        };
        let norm = dotr(&smooth, &smooth)
            .sqrt()
            .max(ridge.as_ref().map_or(0.0, |d| dotr(d, d).sqrt()));
        if !(norm > 0.0) {
            break;
        }
        if t.is_nan() {
            t = 0.1 / norm;
        }
        let mut accepted = None;
        while t * norm > 1e-13 {
            let mut best: Option<LocalModel> = None;
            if let Some(f) = model.retract(&smooth, t) {
                best = Some(LocalModel::new(x, f));
            }
            if let Some(d) = &ridge {
                if let Some(cand) = model.retract(d, t).and_then(|f| onto_ridge(x, f)) {
                    if best.as_ref().is_none_or(|b| cand.value > b.value) {
                        best = Some(cand);
                    }
                }
            }
            match best {
                Some(b) if b.value > model.value => {
                    accepted = Some(b);
                    break;
                }
                _ => t *= 0.5,
            }
        }
        match accepted {
            Some(next) => {
                let gain = next.value - model.value;
                model = next;
                t *= 2.0;
                if gain <= 1e-15 * (1.0 + model.value) {
                    break;
                }
            }
            None => break,
        }
    }
    let end = objective(x, &model.frame);
    if end >= value {
        (end, model.frame)
    } else {
        (value, start)
    }
}

/// Upper bounds for `δ₂` that are certified: `min(dist(X, ℂI), δ(X))`.
pub fn delta2_upper_bound(x: &ComplexMatrix) -> Result<f64> {
    let dist = crate::numrange::dist_to_scalars(x)?.dist;
    let ind = range_summary(x, DEFAULT_GRID)?.indiameter;
    Ok(dist.min(ind))
}

/// `‖X‖∞`, re-exported for callers of the certificate API.
pub fn norm_inf(x: &ComplexMatrix) -> Result<f64> {
    operator_norm(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    fn e(n: usize, k: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[k] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn compress_identity_and_swap() {
        let f = Frame2::new(e(3, 0), e(3, 2)).unwrap();
        let c = compress2(&ComplexMatrix::identity(3), &f).unwrap();
        assert_eq!(c, ComplexMatrix::identity(2));

        let x = nilpotent();
        let f = Frame2::new(e(2, 0), e(2, 1)).unwrap();
        assert_eq!(compress2(&x, &f).unwrap(), x);
        let g = Frame2::new(e(2, 1), e(2, 0)).unwrap();
        let swapped = compress2(&x, &g).unwrap();
        assert_eq!(swapped[(1, 0)], C64::new(1.0, 0.0));
        assert_eq!(minor_axis_sq(&swapped).unwrap(), minor_axis_sq(&x).unwrap());
    }

    #[test]
    fn bad_frames_rejected() {
        let bad = Frame2::new(e(2, 0), e(2, 0));
        assert!(matches!(bad, Err(Error::BadFrame(_))));
        let f = Frame2 { u: e(2, 0), v: e(2, 0) };
        assert!(compress2(&nilpotent(), &f).is_err());
    }

    #[test]
    fn minor_axis_examples() {
        assert_eq!(minor_axis_sq(&ComplexMatrix::diag_real(&[1.0, 3.0])).unwrap(), 0.0);
        assert_eq!(minor_axis_sq(&nilpotent()).unwrap(), 1.0);
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]]);
        assert!((minor_axis_sq(&x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn certificates_on_nilpotent() {
        let c = delta2_certificates(&nilpotent(), &[0.5], &[C64::new(0.0, 0.0)]).unwrap();
        assert!((c[0].value - 1.0).abs() < 1e-14);
        assert!((c[1].value - c[0].value).abs() < 1e-14);
        assert_eq!(c[2].target, CertificateTarget::Inradius);
    }

    #[test]
    fn inradius_certificate_equality_case() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[1.0, 0.0]]);
        let v = inradius_certificate(&x, C64::new(0.0, 0.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn bad_alpha() {
        assert_eq!(
            delta2_certificates(&nilpotent(), &[1.0], &[]),
            Err(Error::BadAlpha(1.0))
        );
    }

    #[test]
    fn local_gradients_match_finite_differences() {
        use crate::rng::gaussian_matrix;
        let mut rng = rng_from_seed(8);
        let x = gaussian_matrix(4, 4, &mut rng);
        let model = LocalModel::new(&x, random_frame(4, &mut rng));
        let dim = model.grad_smooth.len();
        let h = 1e-6;
        for k in 0..dim {
            let mut d = vec![0.0; dim];
            d[k] = 1.0;
            let plus = LocalModel::new(&x, model.retract(&d, h).unwrap());
            let minus = LocalModel::new(&x, model.retract(&d, -h).unwrap());
            let fd_value = (plus.value - minus.value) / (2.0 * h);
            let fd_z = (plus.z - minus.z) / (2.0 * h);
            assert!((fd_value - model.gradient()[k]).abs() < 1e-5 * (1.0 + fd_value.abs()));
            assert!((fd_z.re - model.grad_re_z[k]).abs() < 1e-5 * (1.0 + fd_z.re.abs()));
            assert!((fd_z.im - model.grad_im_z[k]).abs() < 1e-5 * (1.0 + fd_z.im.abs()));
        }
    }

    #[test]
    fn estimate_small_cases() {
        assert!(matches!(
            delta2_estimate(&ComplexMatrix::identity(1), 4, 0),
            Err(Error::DimensionTooSmall { .. })
        ));
        let est = delta2_estimate(&nilpotent(), 4, 0).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[2.0, 0.0, 1.0], &[0.0, 1.0, 5.0]]);
        assert!(delta2_estimate(&h, 4, 1).unwrap().value < 1e-6);
    }
}
