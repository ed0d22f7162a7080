//! Linear algebra kernels against independent oracles.

use blocknorm::linalg::{
    func_apply, hermitian_eig, hermitian_eigenvalues, inverse_pd, matrix_abs, normal_eigenvalues, normality_defect,
    operator_norm, polar_decompose, schatten, schatten_norm, singular_values, svd_decompose, SchattenP, Side,
};
use blocknorm::rng::{gaussian_matrix, haar_unitary, random_hermitian, random_psd, rng_from_seed};
use blocknorm::{ComplexMatrix, C64};
use proptest::prelude::*;

/// Number of eigenvalues of Hermitian `s` below `t`: negative pivots of an
/// unpivoted LDL* factorization of `S − tI` (Sylvester inertia).
#[allow(clippy::needless_range_loop)]
fn count_below(s: &ComplexMatrix, t: f64) -> usize {
    let n = s.rows();
    let mut m: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| s[(i, j)]).collect()).collect();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= t;
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut pivot = m[k][k].re;
        if pivot == 0.0 {
            pivot = -1e-300;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let factor = m[i][k] / pivot;
            for j in k + 1..n {
                let sub = factor * m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    negatives
}

/// Eigenvalues (descending) by bisection on the inertia count.
fn bisection_eigenvalues(s: &ComplexMatrix) -> Vec<f64> {
    let n = s.rows();
    let bound = (0..n)
        .map(|i| (0..n).map(|j| s[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|k| {
            // k-th largest: the smallest t with at least n−k eigenvalues below.
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(s, mid) >= n - k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn jacobi_matches_bisection_oracle() {
    let mut rng = rng_from_seed(21);
    for n in 1..=7 {
        for _ in 0..5 {
            let h = random_hermitian(n, &mut rng);
            let jac = hermitian_eigenvalues(&h).unwrap();
            let bis = bisection_eigenvalues(&h);
            for (a, b) in jac.iter().zip(&bis) {
                assert!((a - b).abs() < 1e-9, "{jac:?} vs {bis:?}");
            }
        }
    }
}

#[test]
fn repeated_eigenvalues_are_resolved() {
    let mut rng = rng_from_seed(22);
    let u = haar_unitary(5, &mut rng);
    let d = ComplexMatrix::diag_real(&[2.0, 2.0, 2.0, -1.0, -1.0]);
    let h = (&(&u * &d) * &u.adjoint()).hermitian_part();
    let e = hermitian_eig(&h).unwrap();
    for (got, want) in e.eigenvalues.iter().zip([2.0, 2.0, 2.0, -1.0, -1.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    let back = e.reassemble(|l| l);
    assert!((&back - &h).max_abs() < 1e-12);
}

#[test]
fn svd_cross_checks_with_gram_eigenvalues() {
    let mut rng = rng_from_seed(23);
    for n in 1..=8 {
        let x = gaussian_matrix(n, n, &mut rng);
        let s = singular_values(&x).unwrap();
        let gram = hermitian_eigenvalues(&x.adjoint_mul(&x)).unwrap();
        for (si, gi) in s.iter().zip(&gram) {
            assert!((si * si - gi).abs() < 1e-9 * (1.0 + gi));
        }
        let d = svd_decompose(&x).unwrap();
        assert!((&d.reconstruct() - &x).max_abs() < 1e-10 * (1.0 + s[0]));
    }
}

#[test]
fn moduli_and_polar() {
    let mut rng = rng_from_seed(24);
    for n in 1..=6 {
        let x = gaussian_matrix(n, n, &mut rng);
        let right = matrix_abs(&x, Side::Right).unwrap();
        let left = matrix_abs(&x, Side::Left).unwrap();
        assert!((&(&right * &right) - &x.adjoint_mul(&x)).max_abs() < 1e-9);
        assert!((&(&left * &left) - &(&x * &x.adjoint())).max_abs() < 1e-9);
        let (u, m) = polar_decompose(&x).unwrap();
        assert!((&(&u * &m) - &x).max_abs() < 1e-9);
        assert!((&u.adjoint_mul(&u) - &ComplexMatrix::identity(n)).max_abs() < 1e-10);
    }
    // Singular input: polar factor must still be unitary.
    let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    let (u, _) = polar_decompose(&x).unwrap();
    assert!((&u.adjoint_mul(&u) - &ComplexMatrix::identity(3)).max_abs() < 1e-12);
}

#[test]
fn functional_calculus_composes() {
    let mut rng = rng_from_seed(25);
    for n in 1..=6 {
        let a = random_psd(n, &mut rng);
        let root = func_apply(f64::sqrt, &a).unwrap();
        assert!((&(&root * &root) - &a).max_abs() < 1e-10);
        let inv = inverse_pd(&a).unwrap();
        assert!((&(&a * &inv) - &ComplexMatrix::identity(n)).max_abs() < 1e-7);
    }
}

#[test]
fn schatten_special_cases() {
    let mut rng = rng_from_seed(26);
    let x = gaussian_matrix(5, 5, &mut rng);
    assert!((schatten(&x, SchattenP::TWO).unwrap() - x.frobenius_norm()).abs() < 1e-10);
    assert!((schatten(&x, SchattenP::INF).unwrap() - operator_norm(&x).unwrap()).abs() < 1e-12);
    let a = random_psd(4, &mut rng);
    assert!((schatten(&a, SchattenP::ONE).unwrap() - a.trace().re).abs() < 1e-10);
    let mut last = f64::INFINITY;
    for p in [1.0, 1.5, 2.0, 3.0, 8.0] {
        let v = schatten_norm(&x, p).unwrap();
        assert!(v <= last + 1e-12);
        last = v;
    }
}

#[test]
fn normal_spectrum_recovered() {
    let mut rng = rng_from_seed(27);
    let u = haar_unitary(4, &mut rng);
    let eig = [
        C64::new(1.0, 2.0),
        C64::new(-0.5, 0.1),
        C64::new(0.3, -1.2),
        C64::new(1.0, 2.0),
    ];
    let x = &(&u * &ComplexMatrix::diag(&eig)) * &u.adjoint();
    assert!(normality_defect(&x).unwrap() < 1e-12);
    let mut got = normal_eigenvalues(&x).unwrap();
    let mut want = eig.to_vec();
    let key = |z: &C64| (z.re * 1e6).round() as i64 * 10_000_000 + (z.im * 1e6).round() as i64;
    got.sort_by_key(key);
    want.sort_by_key(key);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).norm() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_inequalities(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(n, &mut rng);
        let b = random_hermitian(n, &mut rng);
        let la = hermitian_eigenvalues(&a).unwrap();
        let lb = hermitian_eigenvalues(&b).unwrap();
        let ls = hermitian_eigenvalues(&(&a + &b).hermitian_part()).unwrap();
        for i in 0..n {
            for j in 0..n - i {
                prop_assert!(ls[i + j] <= la[i] + lb[j] + 1e-9);
            }
        }
    }

    #[test]
    fn unitary_invariance(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = rng_from_seed(seed);
        let x = gaussian_matrix(n, n, &mut rng);
        let u = haar_unitary(n, &mut rng);
        let v = haar_unitary(n, &mut rng);
        let y = &(&u * &x) * &v;
        let sx = singular_values(&x).unwrap();
        let sy = singular_values(&y).unwrap();
        for (a, b) in sx.iter().zip(&sy) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + a));
        }
    }
}
