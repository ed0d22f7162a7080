//! Seidel's randomized incremental linear programming in small dimension.
//!
//! Maximizes `c·x` subject to `a_i·x ≤ b_i` inside an axis-aligned box. The
//! constraint order is shuffled with a fixed seed, so the result is a pure
//! function of the input.

use rand::seq::SliceRandom;

use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

const SHUFFLE_SEED: u64 = 0x5EED_1DEA;

/// Returns the maximizer, or `None` if the feasible set is empty.
pub fn maximize(objective: &[f64], constraints: &[HalfSpace], bounds: &[Interval]) -> Option<Vec<f64>> {
    let d = objective.len();
    assert_eq!(bounds.len(), d);
    let mut order: Vec<usize> = (0..constraints.len()).collect();
    order.shuffle(&mut rng_from_seed(SHUFFLE_SEED));
    let shuffled: Vec<HalfSpace> = order.iter().map(|&i| constraints[i].clone()).collect();
    solve(objective, &shuffled, bounds)
}

fn violated(h: &HalfSpace, x: &[f64]) -> bool {
    let lhs: f64 = h.normal.iter().zip(x).map(|(a, v)| a * v).sum();
    let scale = 1.0 + h.offset.abs() + h.normal.iter().zip(x).map(|(a, v)| (a * v).abs()).sum::<f64>();
    lhs > h.offset + 1e-13 * scale
}

fn solve(c: &[f64], cons: &[HalfSpace], bounds: &[Interval]) -> Option<Vec<f64>> {
    let d = c.len();
    if bounds.iter().any(|b| b.lo > b.hi) {
        return None;
    }
    if d == 1 {
        return solve_1d(c[0], cons, bounds[0]);
    }
    let mut x: Vec<f64> = c
        .iter()
        .zip(bounds)
        .map(|(&cj, b)| if cj > 0.0 { b.hi } else { b.lo })
        .collect();
    for i in 0..cons.len() {
        if !violated(&cons[i], &x) {
            continue;
        }
        x = solve_on_hyperplane(c, &cons[..i], &cons[i], bounds)?;
    }
    Some(x)
}

fn solve_1d(c: f64, cons: &[HalfSpace], b: Interval) -> Option<Vec<f64>> {
    let (mut lo, mut hi) = (b.lo, b.hi);
    for h in cons {
        let a = h.normal[0];
        if a.abs() <= 1e-15 {
            if h.offset < -1e-13 * (1.0 + h.offset.abs()) {
                return None;
            }
        } else if a > 0.0 {
            hi = hi.min(h.offset / a);
        } else {
            lo = lo.max(h.offset / a);
        }
    }
    if lo > hi + 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
        return None;
    }
    let hi = hi.max(lo);
    Some(vec![if c > 0.0 { hi } else { lo }])
}

/// Optimum restricted to `plane.normal·x = plane.offset`.
fn solve_on_hyperplane(c: &[f64], earlier: &[HalfSpace], plane: &HalfSpace, bounds: &[Interval]) -> Option<Vec<f64>> {
    let d = c.len();
    let k = (0..d)
        .max_by(|&i, &j| plane.normal[i].abs().total_cmp(&plane.normal[j].abs()))
        .unwrap();
    let ak = plane.normal[k];
    if ak.abs() <= 1e-15 {
        // Degenerate plane 0·x ≤ b was violated: infeasible.
        return None;
    }
    let keep: Vec<usize> = (0..d).filter(|&j| j != k).collect();
    // x_k = (b − Σ_{j≠k} a_j x_j) / a_k
    let coef: Vec<f64> = keep.iter().map(|&j| -plane.normal[j] / ak).collect();
    let constant = plane.offset / ak;

    let project = |h: &HalfSpace| -> HalfSpace {
        let hk = h.normal[k];
        HalfSpace {
            normal: keep.iter().zip(&coef).map(|(&j, &cf)| h.normal[j] + hk * cf).collect(),
            offset: h.offset - hk * constant,
        }
    };
    let mut reduced: Vec<HalfSpace> = Vec::with_capacity(earlier.len() + 2);
    // Box bounds on the eliminated coordinate become ordinary constraints.
    reduced.push(HalfSpace {
        normal: coef.clone(),
        offset: bounds[k].hi - constant,
    });
    reduced.push(HalfSpace {
        normal: coef.iter().map(|v| -v).collect(),
        offset: constant - bounds[k].lo,
    });
    reduced.extend(earlier.iter().map(project));

    let c_red: Vec<f64> = keep.iter().zip(&coef).map(|(&j, &cf)| c[j] + c[k] * cf).collect();
    let b_red: Vec<Interval> = keep.iter().map(|&j| bounds[j]).collect();
    let y = solve(&c_red, &reduced, &b_red)?;

    let mut x = vec![0.0; d];
    let mut xk = constant;
    for ((&j, &cf), &yj) in keep.iter().zip(&coef).zip(&y) {
        x[j] = yj;
        xk += cf * yj;
    }
    x[k] = xk.clamp(bounds[k].lo, bounds[k].hi);
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(normal: &[f64], offset: f64) -> HalfSpace {
        HalfSpace {
            normal: normal.to_vec(),
            offset,
        }
    }

    #[test]
    fn square_inscribed_disc() {
        // |x| ≤ 1, |y| ≤ 2 as support constraints: x + r ≤ 1, −x + r ≤ 1, ...
        let cons = vec![
            hs(&[1.0, 0.0, 1.0], 1.0),
            hs(&[-1.0, 0.0, 1.0], 1.0),
            hs(&[0.0, 1.0, 1.0], 2.0),
            hs(&[0.0, -1.0, 1.0], 2.0),
        ];
        let b = [Interval { lo: -10.0, hi: 10.0 }; 3];
        let x = maximize(&[0.0, 0.0, 1.0], &cons, &b).unwrap();
        assert!((x[2] - 1.0).abs() < 1e-12);
        assert!(x[0].abs() < 1e-12);
    }

    #[test]
    fn triangle_incircle() {
        // Triangle (0,0), (4,0), (0,3): inradius 1 at (1,1).
        let s = (0.6f64, 0.8f64);
        let cons = vec![
            hs(&[0.0, -1.0, 1.0], 0.0),
            hs(&[-1.0, 0.0, 1.0], 0.0),
            hs(&[s.0, s.1, 1.0], 2.4),
        ];
        let b = [Interval { lo: -10.0, hi: 10.0 }; 3];
        let x = maximize(&[0.0, 0.0, 1.0], &cons, &b).unwrap();
        assert!((x[2] - 1.0).abs() < 1e-12, "{x:?}");
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_is_detected() {
        let cons = vec![hs(&[1.0], 0.0), hs(&[-1.0], -1.0)];
        let b = [Interval { lo: -5.0, hi: 5.0 }];
        assert!(maximize(&[1.0], &cons, &b).is_none());
    }

    #[test]
    fn matches_vertex_enumeration_on_random_polygons() {
        use crate::rng::{rng_from_seed, uniform};
        let mut rng = rng_from_seed(99);
        for _ in 0..50 {
            let m = 3 + (uniform(&mut rng) * 10.0) as usize;
            let cons: Vec<HalfSpace> = (0..m)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * (k as f64 + uniform(&mut rng) * 0.5) / m as f64;
                    hs(&[t.cos(), t.sin(), 1.0], 0.5 + uniform(&mut rng))
                })
                .collect();
            let b = [Interval { lo: -100.0, hi: 100.0 }; 3];
            let x = maximize(&[0.0, 0.0, 1.0], &cons, &b).unwrap();
            // Oracle: enumerate all triples of constraints as equalities.
            let mut best = f64::NEG_INFINITY;
            for i in 0..m {
                for j in i + 1..m {
                    for l in j + 1..m {
                        if let Some(v) = solve3(&cons[i], &cons[j], &cons[l]) {
                            if cons
                                .iter()
                                .all(|h| h.normal.iter().zip(&v).map(|(a, y)| a * y).sum::<f64>() <= h.offset + 1e-9)
                            {
                                best = best.max(v[2]);
                            }
                        }
                    }
                }
            }
            assert!((x[2] - best).abs() < 1e-9, "{} vs {}", x[2], best);
        }
    }

    fn solve3(a: &HalfSpace, b: &HalfSpace, c: &HalfSpace) -> Option<Vec<f64>> {
        let m = [&a.normal, &b.normal, &c.normal];
        let rhs = [a.offset, b.offset, c.offset];
        let det = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let base = [
            [m[0][0], m[0][1], m[0][2]],
            [m[1][0], m[1][1], m[1][2]],
            [m[2][0], m[2][1], m[2][2]],
        ];
        let d = det(base);
        if d.abs() < 1e-12 {
            return None;
        }
        let mut out = vec![0.0; 3];
        for col in 0..3 {
            let mut t = base;
            for row in 0..3 {
                t[row][col] = rhs[row];
            }
            out[col] = det(t) / d;
        }
        Some(out)
    }
}
