//! Counter-based seeding and random matrix generators.
//!
//! Every random object is drawn from a `ChaCha8Rng` seeded by a `u64`; trial
//! `i` of a batch uses [`derive_trial_seed`]`(master, i)` and never shares
//! state with trial `j`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{dot, vec_norm, ComplexMatrix, C64};

pub type DetRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MASTER_SALT: u64 = 0x6A09_E667_F3BC_C909;

/// SplitMix64 finalizer (a bijection on `u64`).
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless per-trial seed.
///
/// `mix64(mix64(master ^ 0x6A09E667F3BCC909) + 0x9E3779B97F4A7C15 · trial)`
/// with wrapping arithmetic. For a fixed master this is injective in
/// `trial_index` (an odd-multiplier affine map followed by a bijection).
///
/// `derive_trial_seed(0, 0) == 0x8359_fff6_2713_a185` is pinned by a test.
pub fn derive_trial_seed(master: u64, trial_index: u64) -> u64 {
    let base = mix64(master ^ MASTER_SALT);
    mix64(base.wrapping_add(GOLDEN_GAMMA.wrapping_mul(trial_index)))
}

/// Seed for a named stream (statement, pass, ...) under a master seed.
pub fn stream_seed(master: u64, label: &str) -> u64 {
    // FNV-1a over the label, then mixed with the master.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    derive_trial_seed(master, h)
}

pub fn rng_from_seed(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut DetRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_normal(rng: &mut DetRng) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    C64::new(normal(rng) * s, normal(rng) * s)
}

pub fn uniform(rng: &mut DetRng) -> f64 {
    rng.random::<f64>()
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut DetRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn gaussian_vector(n: usize, rng: &mut DetRng) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

pub fn unit_vector(n: usize, rng: &mut DetRng) -> Vec<C64> {
    loop {
        let v = gaussian_vector(n, rng);
        let nrm = vec_norm(&v);
        if nrm > 1e-8 {
            return v.into_iter().map(|z| z / nrm).collect();
        }
    }
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt, two passes).
/// Returns `None` if the columns are numerically dependent.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let cols: Vec<Vec<C64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let q = orthonormalize(cols)?;
    Some(ComplexMatrix::from_columns(m.rows(), &q))
}

pub fn orthonormalize(mut cols: Vec<Vec<C64>>) -> Option<Vec<Vec<C64>>> {
    for j in 0..cols.len() {
        let original = vec_norm(&cols[j]);
        for _ in 0..2 {
            for k in 0..j {
                let proj = dot(&cols[k], &cols[j]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, q) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= proj * q;
                }
            }
        }
        let nrm = vec_norm(&cols[j]);
        if !(nrm > 1e-10 * original.max(1e-300)) {
            return None;
        }
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
    Some(cols)
}

/// Haar-distributed unitary via QR of a Gaussian matrix with phase fix.
pub fn haar_unitary(n: usize, rng: &mut DetRng) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(n, n, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// `G·G*/n` with complex Gaussian `G`.
pub fn random_psd(n: usize, rng: &mut DetRng) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    let mut a = g.matmul(&g.adjoint()).scale_real(1.0 / n.max(1) as f64);
    symmetrize(&mut a);
    a
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn random_hermitian(n: usize, rng: &mut DetRng) -> ComplexMatrix {
    gaussian_matrix(n, n, rng).hermitian_part()
}

/// Gaussian matrix divided by `σ_max·(1+u)`, `u ~ U[0,1)`.
pub fn random_contraction(n: usize, rng: &mut DetRng) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    let s = crate::linalg::operator_norm(&g).unwrap_or(1.0);
    let u = uniform(rng);
    if s == 0.0 {
        return g;
    }
    g.scale_real(1.0 / (s * (1.0 + u)))
}

/// Forces exact Hermitian symmetry (averages mirrored entries).
pub fn symmetrize(a: &mut ComplexMatrix) {
    *a = a.hermitian_part();
}
