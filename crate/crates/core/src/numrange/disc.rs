//! Smallest enclosing disc of a planar point set (Welzl's algorithm).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::linalg::C64;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: C64,
    pub radius: f64,
}

impl Disc {
    fn contains(&self, p: C64) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-14
    }
}

fn from_two(a: C64, b: C64) -> Disc {
    Disc {
        center: (a + b) * 0.5,
        radius: (a - b).norm() * 0.5,
    }
}

fn from_three(a: C64, b: C64, c: C64) -> Disc {
    let (bx, by) = (b.re - a.re, b.im - a.im);
    let (cx, cy) = (c.re - a.re, c.im - a.im);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-300 {
        // Collinear: the widest pair.
        let cands = [from_two(a, b), from_two(a, c), from_two(b, c)];
        return cands.into_iter().max_by(|p, q| p.radius.total_cmp(&q.radius)).unwrap();
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = C64::new(a.re + ux, a.im + uy);
    Disc {
        center,
        radius: [a, b, c].iter().map(|p| (p - center).norm()).fold(0.0, f64::max),
    }
}

/// Smallest disc containing every point. Deterministic (fixed shuffle seed).
pub fn smallest_enclosing_disc(points: &[C64]) -> Disc {
    let mut pts = points.to_vec();
    pts.shuffle(&mut rng_from_seed(0xD15C));
    let mut disc = match pts.first() {
        None => {
            return Disc {
                center: C64::new(0.0, 0.0),
                radius: 0.0,
            }
        }
        Some(&p) => Disc { center: p, radius: 0.0 },
    };
    for i in 1..pts.len() {
        if disc.contains(pts[i]) {
            continue;
        }
        disc = Disc {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if disc.contains(pts[j]) {
                continue;
            }
            disc = from_two(pts[i], pts[j]);
            for k in 0..j {
                if !disc.contains(pts[k]) {
                    disc = from_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    disc
}
