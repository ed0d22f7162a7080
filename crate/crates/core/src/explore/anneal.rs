//! Derivative-free maximizer: Gaussian and coordinate pattern moves with a
//! simulated-annealing acceptance rule and an adaptive step.

use crate::linalg::{ComplexMatrix, C64};
use crate::rng::{normal, uniform, DetRng};

/// Best point of one restart and its improvement trace.
#[derive(Debug, Clone)]
pub(crate) struct Restart {
    pub params: Vec<f64>,
    pub value: f64,
    /// `(iteration, best-so-far)` at every improvement.
    pub trace: Vec<(usize, f64)>,
}

const STEP_MAX: f64 = 2.0;
const STEP_MIN: f64 = 1e-7;

/// Maximizes `f` from `init` for `iters` evaluations. `f` returns `None` on
/// infeasible points, which are rejected.
pub(crate) fn anneal(init: Vec<f64>, iters: usize, rng: &mut DetRng, f: impl Fn(&[f64]) -> Option<f64>) -> Restart {
    let dim = init.len();
    let mut x = init;
    let mut fx = f(&x).unwrap_or(f64::NEG_INFINITY);
    let mut best = Restart {
        params: x.clone(),
        value: fx,
        trace: vec![(0, fx)],
    };
    if dim == 0 {
        return best;
    }
    let mut step = 0.3;
    let t0 = 1e-3 * (1.0 + fx.abs().min(1e6));
    let mut y = x.clone();
    for k in 1..iters {
        y.copy_from_slice(&x);
        if uniform(rng) < 0.5 {
            let s = step / (dim as f64).sqrt();
            for v in y.iter_mut() {
                *v += s * normal(rng);
            }
        } else {
            let i = ((uniform(rng) * dim as f64) as usize).min(dim - 1);
            y[i] += if uniform(rng) < 0.5 { step } else { -step };
        }
        let Some(fy) = f(&y) else {
            step = (step * 0.9).max(STEP_MIN);
            continue;
        };
        let cool = 1.0 - k as f64 / iters as f64;
        let temp = t0 * cool * cool;
        let accept = fy > fx || (temp > 0.0 && uniform(rng) < ((fy - fx) / temp).exp());
        if accept {
            if fy > fx {
                step = (step * 1.2).min(STEP_MAX);
            }
            std::mem::swap(&mut x, &mut y);
            fx = fy;
            if fx > best.value {
                best.value = fx;
                best.params.copy_from_slice(&x);
                best.trace.push((k, fx));
            }
        } else {
            step = (step * 0.97).max(STEP_MIN);
        }
    }
    best
}

/// `rows × cols` complex matrix from `2·rows·cols` reals.
pub(crate) fn complex_from(params: &[f64], rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        C64::new(params[k], params[k + 1])
    })
}

/// Hermitian `n × n` matrix from `n²` reals: the diagonal, then real and
/// imaginary parts of the strict upper triangle.
pub(crate) fn hermitian_from(params: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    let mut k = n;
    for i in 0..n {
        h[(i, i)] = C64::new(params[i], 0.0);
        for j in i + 1..n {
            let z = C64::new(params[k], params[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

pub(crate) fn gaussian_params(len: usize, scale: f64, rng: &mut DetRng) -> Vec<f64> {
    (0..len).map(|_| scale * normal(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn finds_concave_maximum() {
        let mut rng = rng_from_seed(1);
        let r = anneal(vec![3.0, -2.0], 3000, &mut rng, |p| {
            Some(-(p[0] - 1.0).powi(2) - (p[1] + 0.5).abs())
        });
        assert!(r.value > -1e-4, "{}", r.value);
        assert!(r.trace.windows(2).all(|w| w[0].1 < w[1].1));
    }

    #[test]
    fn hermitian_layout() {
        let h = hermitian_from(&[1.0, 2.0, 3.0, 4.0], 2);
        assert_eq!(h[(0, 1)], C64::new(3.0, 4.0));
        assert_eq!(h[(1, 0)], C64::new(3.0, -4.0));
        assert_eq!(h.asymmetry(), 0.0);
    }
}
