use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::lp::{maximize, HalfSpace, Interval};
use super::support::{golden_min, support_pair, SupportPair};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::tolerance::tolerances;

pub const DEFAULT_GRID: usize = 720;
const MIN_GRID: usize = 16;
const ANGLE_TOL: f64 = 1e-11;
const MAX_CUT_ROUNDS: usize = 40;

/// Sampled support data of `W(X)` and the geometry derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeSummary {
    pub theta_grid: Vec<f64>,
    pub support_values: Vec<f64>,
    pub boundary_points: Vec<C64>,
    /// Width `ω` of `W(X)`.
    pub width: f64,
    /// Inradius `ε = δ/2`.
    pub inradius: f64,
    /// Indiameter `δ`.
    pub indiameter: f64,
    /// Chebyshev center of `W(X)`.
    pub chebyshev_center: C64,
    /// `d = min{|z| : z ∈ W(X)}`.
    pub dist_zero: f64,
}

impl RangeSummary {
    /// Boundary polygon as CSV rows `theta,re,im,h`.
    pub fn boundary_csv(&self) -> String {
        let mut out = String::from("theta,re,im,h\n");
        for ((t, p), h) in self
            .theta_grid
            .iter()
            .zip(&self.boundary_points)
            .zip(&self.support_values)
        {
            out.push_str(&format!("{t},{},{},{h}\n", p.re, p.im));
        }
        out
    }
}

struct Sampler<'a> {
    x: &'a ComplexMatrix,
}

impl Sampler<'_> {
    fn h(&self, theta: f64) -> Result<f64> {
        Ok(support_pair(self.x, theta)?.h)
    }

    fn width_at(&self, theta: f64) -> Result<f64> {
        let p = support_pair(self.x, theta)?;
        Ok(p.h + p.h_opposite)
    }
}

/// Summary of `W(X)` from a `grid_size`-point support sample on `[0, 2π)`.
///
/// Width is refined by golden-section search around the best grid minima.
/// The inradius solves the Chebyshev-center LP over the sampled support
/// half-planes, then adds cuts at locally most-violated directions until the
/// disc touches `W(X)` to angular precision.
pub fn range_summary(x: &ComplexMatrix, grid_size: usize) -> Result<RangeSummary> {
    let n = x.ensure_square()?;
    x.ensure_finite()?;
    if grid_size < MIN_GRID {
        return Err(Error::GridTooSmall(grid_size));
    }
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    let sampler = Sampler { x };
    let m = grid_size;
    let step = 2.0 * PI / m as f64;
    let theta_grid: Vec<f64> = (0..m).map(|k| k as f64 * step).collect();

    let mut support_values = vec![0.0; m];
    let mut boundary_points = vec![C64::new(0.0, 0.0); m];
    if m.is_multiple_of(2) {
        // One decomposition serves θ and θ + π.
        let half = m / 2;
        let pairs: Vec<SupportPair> = (0..half)
            .map(|k| support_pair(x, theta_grid[k]))
            .collect::<Result<_>>()?;
        for (k, p) in pairs.iter().enumerate() {
            support_values[k] = p.h;
            boundary_points[k] = p.point;
            support_values[k + half] = p.h_opposite;
            boundary_points[k + half] = p.point_opposite;
        }
    } else {
        for k in 0..m {
            let p = support_pair(x, theta_grid[k])?;
            support_values[k] = p.h;
            boundary_points[k] = p.point;
        }
    }

    let radius_bound = support_values.iter().fold(0.0f64, |a, h| a.max(h.abs()));
    let width = refine_width(&sampler, &theta_grid, &support_values, m)?;
    let scale = 1.0 + radius_bound;

    let (inradius, chebyshev_center) = if width <= tolerances().segment_width * scale {
        let c = boundary_points.iter().sum::<C64>() / m as f64;
        (0.0, c)
    } else {
        chebyshev(&sampler, &theta_grid, &support_values, radius_bound, step)?
    };

    let dist_zero = refine_dist_zero(&sampler, &theta_grid, &support_values, step)?;

    Ok(RangeSummary {
        theta_grid,
        support_values,
        boundary_points,
        width,
        inradius,
        indiameter: 2.0 * inradius,
        chebyshev_center,
        dist_zero,
    })
}

/// Indices of the smallest local minima of a cyclic sequence.
fn local_minima(values: &[f64], keep: usize) -> Vec<usize> {
    let len = values.len();
    let mut mins: Vec<usize> = (0..len)
        .filter(|&k| {
            let prev = values[(k + len - 1) % len];
            let next = values[(k + 1) % len];
            values[k] <= prev && values[k] <= next
        })
        .collect();
    mins.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    mins.truncate(keep);
    mins
}

fn refine_width(s: &Sampler, grid: &[f64], h: &[f64], m: usize) -> Result<f64> {
    let step = 2.0 * PI / m as f64;
    // w(θ) = h(θ) + h(θ+π) has period π.
    let widths: Vec<f64> = if m.is_multiple_of(2) {
        (0..m / 2).map(|k| h[k] + h[k + m / 2]).collect()
    } else {
        (0..m.div_ceil(2)).map(|k| s.width_at(grid[k])).collect::<Result<_>>()?
    };
    let mut best = widths.iter().copied().fold(f64::INFINITY, f64::min);
    for k in local_minima(&widths, 4) {
        let t = grid[k];
        let (_, w) = golden_min(|th| s.width_at(th), t - step, t + step, ANGLE_TOL)?;
        best = best.min(w);
    }
    Ok(best.max(0.0))
}

fn refine_dist_zero(s: &Sampler, grid: &[f64], h: &[f64], step: f64) -> Result<f64> {
    let min_h = h.iter().copied().fold(f64::INFINITY, f64::min);
    if min_h >= 0.0 {
        // 0 lies in the sampled polygon; refine only if close to the boundary.
        if min_h > 1e-6 * (1.0 + h.iter().fold(0.0f64, |a, v| a.max(v.abs()))) {
            return Ok(0.0);
        }
    }
    let mut best = min_h;
    for k in local_minima(h, 3) {
        let t = grid[k];
        let (_, v) = golden_min(|th| s.h(th), t - step, t + step, ANGLE_TOL)?;
        best = best.min(v);
    }
    Ok((-best).max(0.0))
}

fn chebyshev(s: &Sampler, grid: &[f64], h: &[f64], radius_bound: f64, step: f64) -> Result<(f64, C64)> {
    let big = 2.0 * radius_bound + 1.0;
    let bounds = [
        Interval { lo: -big, hi: big },
        Interval { lo: -big, hi: big },
        Interval { lo: -big, hi: big },
    ];
    let mut thetas: Vec<f64> = grid.to_vec();
    let mut offsets: Vec<f64> = h.to_vec();
    let mut solution = (0.0, C64::new(0.0, 0.0));
    let scale = 1.0 + radius_bound;

    for _ in 0..MAX_CUT_ROUNDS {
        let cons: Vec<HalfSpace> = thetas
            .iter()
            .zip(&offsets)
            .map(|(&t, &b)| HalfSpace {
                normal: vec![t.cos(), t.sin(), 1.0],
                offset: b,
            })
            .collect();
        let sol =
            maximize(&[0.0, 0.0, 1.0], &cons, &bounds).expect("support half-planes of a nonempty set are feasible");
        let (cx, cy, r) = (sol[0], sol[1], sol[2]);
        solution = (r.max(0.0), C64::new(cx, cy));

        let gap = |t: f64, b: f64| b - (t.cos() * cx + t.sin() * cy) - r;
        // One refinement per cluster of touching directions; without the
        // clustering every round doubles the number of cuts near a contact.
        let mut active: Vec<(f64, f64)> = thetas
            .iter()
            .zip(&offsets)
            .map(|(&t, &b)| (t.rem_euclid(2.0 * PI), gap(t, b)))
            .filter(|&(_, g)| g <= 1e-9 * scale)
            .collect();
        active.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut clusters: Vec<(f64, f64)> = Vec::new();
        for (t, g) in active {
            match clusters.last_mut() {
                Some(last) if t - last.0 <= step => {
                    if g < last.1 {
                        *last = (t, g);
                    }
                }
                _ => clusters.push((t, g)),
            }
        }
        let mut added = false;
        for (t, _) in clusters {
            let (tm, g) = golden_min(
                |th| Ok(s.h(th)? - (th.cos() * cx + th.sin() * cy)),
                t - step,
                t + step,
                ANGLE_TOL,
            )?;
            if g < r - 1e-12 * scale {
                thetas.push(tm);
                offsets.push(s.h(tm)?);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    Ok(solution)
}

/// Width of `W(X)`; `X` is essentially Hermitian iff this is at most
/// `1e-8·(1+‖X‖∞)`.
pub fn essential_hermitian_defect(x: &ComplexMatrix) -> Result<f64> {
    Ok(range_summary(x, DEFAULT_GRID)?.width)
}

pub fn is_essentially_hermitian(x: &ComplexMatrix) -> Result<bool> {
    let norm = crate::linalg::operator_norm(x)?;
    Ok(essential_hermitian_defect(x)? <= tolerances().segment_width * (1.0 + norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hermitian_range_is_segment() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -3.0]]);
        let s = range_summary(&h, 64).unwrap();
        assert!(s.width < 1e-12);
        assert_eq!(s.inradius, 0.0);
    }

    #[test]
    fn nilpotent_disc_geometry() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let s = range_summary(&x, DEFAULT_GRID).unwrap();
        assert!(close(s.width, 1.0, 1e-12));
        assert!(close(s.inradius, 0.5, 1e-10), "{}", s.inradius);
        assert!(s.chebyshev_center.norm() < 1e-9);
        assert_eq!(s.dist_zero, 0.0);
    }

    #[test]
    fn upper_triangular_example() {
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]]);
        let s = range_summary(&x, DEFAULT_GRID).unwrap();
        assert!(close(s.width, 1.0, 1e-10), "{}", s.width);
        assert!(close(s.inradius, 0.5, 1e-9), "{}", s.inradius);
    }

    #[test]
    fn grid_and_shape_errors() {
        let x = ComplexMatrix::identity(2);
        assert_eq!(range_summary(&x, 8), Err(Error::GridTooSmall(8)));
        assert!(range_summary(&ComplexMatrix::zeros(2, 3), 32).is_err());
    }

    #[test]
    fn point_range_and_distance() {
        let x = ComplexMatrix::diag(&[C64::new(3.0, 4.0)]);
        let s = range_summary(&x, 16).unwrap();
        assert_eq!(s.width, 0.0);
        assert!(close(s.dist_zero, 5.0, 1e-12));
        assert!((s.chebyshev_center - C64::new(3.0, 4.0)).norm() < 1e-12);
    }

    #[test]
    fn odd_grid_matches_even_grid() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[1.0, 0.0]]);
        let a = range_summary(&x, 721).unwrap();
        let b = range_summary(&x, 720).unwrap();
        assert!(close(a.width, b.width, 1e-10));
        assert!(close(a.inradius, b.inradius, 1e-9));
    }

    #[test]
    fn essential_hermitian_examples() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 0.0]]);
        let x = h.scale(C64::from_polar(1.0, 0.7)).shift(C64::new(0.3, -2.0));
        assert!(essential_hermitian_defect(&x).unwrap() <= 1e-8);
        assert!(is_essentially_hermitian(&x).unwrap());
        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(close(essential_hermitian_defect(&nil).unwrap(), 1.0, 1e-10));
        let col = ComplexMatrix::diag(&[C64::new(0.0, 0.0), C64::new(1.0, 1.0), C64::new(2.0, 2.0)]);
        assert!(essential_hermitian_defect(&col).unwrap() <= 1e-8);
    }
}
