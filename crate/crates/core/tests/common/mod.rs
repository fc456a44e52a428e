//! Test-only oracles that rebuild the linear systems by literal stencil
//! enumeration over dense arrays, independent of the library's assembly
//! and index map.

#![allow(dead_code)]

use surfill::grid::{Direction, Point};

pub const FIVE: [[f64; 3]; 3] = [[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]];

pub const THIRTEEN: [[f64; 5]; 5] = [
    [0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 2.0, -8.0, 2.0, 0.0],
    [1.0, -8.0, 20.0, -8.0, 1.0],
    [0.0, 2.0, -8.0, 2.0, 0.0],
    [0.0, 0.0, 1.0, 0.0, 0.0],
];

/// Dense oracle system; `a` is row-major `n × n`.
pub struct DenseSystem {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Unknowns listed by scanning rows bottom to top, columns left to right.
pub fn scan_unknowns(width: usize, height: usize, is_unknown: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..height {
        for i in 0..width {
            if is_unknown(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn position(unknowns: &[(usize, usize)], i: i64, j: i64) -> Option<usize> {
    unknowns.iter().position(|&(a, b)| a as i64 == i && b as i64 == j)
}

/// 5-point system `Δ₅u = rhs`, boundary values moved to `b`.
pub fn poisson_oracle(
    unknowns: &[(usize, usize)],
    h: f64,
    rhs: &[f64],
    g: impl Fn(i64, i64) -> Option<f64>,
) -> DenseSystem {
    let n = unknowns.len();
    let mut a = vec![0.0; n * n];
    let mut b = rhs.to_vec();
    for (row, &(pi, pj)) in unknowns.iter().enumerate() {
        for (sy, line) in FIVE.iter().enumerate() {
            for (sx, &w) in line.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let (ti, tj) = (pi as i64 + sx as i64 - 1, pj as i64 + sy as i64 - 1);
                match position(unknowns, ti, tj) {
                    Some(col) => a[row * n + col] += w / (h * h),
                    None => b[row] -= w * g(ti, tj).expect("boundary value") / (h * h),
                }
            }
        }
    }
    DenseSystem { n, a, b }
}

/// 13-point system. For a far axis tap whose middle point `Q` is not an
/// unknown: drop the tap and add `(u(Q) + h·q(Q))/h⁴` to the known side,
/// either always (`strict`) or only when `g` has no value at the tap.
pub fn bilaplacian_oracle(
    unknowns: &[(usize, usize)],
    h: f64,
    g: impl Fn(i64, i64) -> Option<f64>,
    q: impl Fn(i64, i64, Direction) -> Option<f64>,
    strict: bool,
) -> DenseSystem {
    let n = unknowns.len();
    let h4 = h.powi(4);
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n];
    for (row, &(pi, pj)) in unknowns.iter().enumerate() {
        for (sy, line) in THIRTEEN.iter().enumerate() {
            for (sx, &w) in line.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let (dx, dy) = (sx as i64 - 2, sy as i64 - 2);
                let (ti, tj) = (pi as i64 + dx, pj as i64 + dy);
                if let Some(col) = position(unknowns, ti, tj) {
                    a[row * n + col] += w / h4;
                    continue;
                }
                let far = dx.abs() == 2 || dy.abs() == 2;
                let (qi, qj) = (pi as i64 + dx / 2, pj as i64 + dy / 2);
                let mid_known = position(unknowns, qi, qj).is_none();
                if far && mid_known && (strict || g(ti, tj).is_none()) {
                    let dir = match (dx, dy) {
                        (2, 0) => Direction::East,
                        (-2, 0) => Direction::West,
                        (0, 2) => Direction::North,
                        _ => Direction::South,
                    };
                    let ghost = g(qi, qj).expect("g at Q") + h * q(qi, qj, dir).expect("q at Q");
                    b[row] -= ghost / h4;
                } else {
                    b[row] -= w * g(ti, tj).expect("known tap") / h4;
                }
            }
        }
    }
    DenseSystem { n, a, b }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn to_points(unknowns: &[(usize, usize)]) -> Vec<Point> {
    unknowns.iter().map(|&(i, j)| Point::new(i as i64, j as i64)).collect()
}

/// Deterministic pseudo-random values in `[-1, 1)`.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }
}
