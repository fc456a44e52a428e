//! Finite-difference assembly of the 5-point Laplacian and 13-point
//! bilaplacian systems over the unknowns of a [`CellClassification`].
//!
//! Rows are indexed by the classification's [`IndexMap`](crate::grid::IndexMap).
//! Stencil taps that land on unknowns go into the matrix; taps on known
//! points move to the right-hand side with opposite sign.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::{CellClassification, Direction, Grid2D, Point};
use crate::sparse::{SparseSystem, TripletBuilder};

/// Scalar values attached to lattice coordinates (possibly off-lattice).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointValues(HashMap<Point, f64>);

impl PointValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: Point, v: f64) {
        self.0.insert(p, v);
    }

    pub fn get(&self, p: Point) -> Option<f64> {
        self.0.get(&p).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.values().copied()
    }

    /// Samples `f` at the given points.
    pub fn sample(points: impl IntoIterator<Item = Point>, mut f: impl FnMut(Point) -> f64) -> Self {
        Self(points.into_iter().map(|p| (p, f(p))).collect())
    }
}

/// Outward normal derivatives keyed by boundary point and the outward axis
/// direction (pointing away from the missing region).
///
/// A point can border the hole from more than one side, so the direction
/// is part of the key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormalData(HashMap<(Point, Direction), f64>);

impl NormalData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: Point, outward: Direction, v: f64) {
        self.0.insert((p, outward), v);
    }

    pub fn get(&self, p: Point, outward: Direction) -> Option<f64> {
        self.0.get(&(p, outward)).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.values().copied()
    }
}

/// Boundary data: Dirichlet values `g`, Laplacian trace `f`, outward
/// normal derivative `q`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryData {
    pub g: PointValues,
    pub f: Option<PointValues>,
    pub q: Option<NormalData>,
}

impl BoundaryData {
    pub fn dirichlet(g: PointValues) -> Self {
        Self { g, f: None, q: None }
    }

    /// All stored values are finite.
    pub fn is_finite(&self) -> bool {
        self.g.values().all(f64::is_finite)
            && self.f.as_ref().is_none_or(|f| f.values().all(f64::is_finite))
            && self.q.as_ref().is_none_or(|q| q.values().all(f64::is_finite))
    }
}

/// How the 13-point stencil treats its far axis tap next to the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StencilMode {
    /// Use the known value at the far tap when one is available; fall back
    /// to the ghost correction `u(Q) + h·q(Q)` only when it is not.
    #[default]
    PreferKnown,
    /// Always replace the far tap beyond a boundary neighbor `Q` with the
    /// ghost correction, even when a known value exists.
    StrictPaper,
}

/// `(u_N + u_S + u_E + u_W − 4u_P) / h²` on a row-major lattice field.
pub fn laplacian_5pt_apply(values: &[f64], grid: &Grid2D, p: Point) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
    }
    let at = |q: Point| grid.linear(q).map(|k| values[k]).ok_or(Error::NotInterior(p));
    let center = at(p)?;
    let mut sum = -4.0 * center;
    for d in Direction::ALL {
        sum += at(p.step(d, 1))?;
    }
    Ok(sum / (grid.h * grid.h))
}

/// Offsets and integer weights of the 13-point bilaplacian, in
/// accumulation order: center, axis-1, diagonals, axis-2.
pub const BILAPLACIAN_13: [((i64, i64), f64); 13] = [
    ((0, 0), 20.0),
    ((1, 0), -8.0),
    ((-1, 0), -8.0),
    ((0, 1), -8.0),
    ((0, -1), -8.0),
    ((1, 1), 2.0),
    ((1, -1), 2.0),
    ((-1, 1), 2.0),
    ((-1, -1), 2.0),
    ((2, 0), 1.0),
    ((-2, 0), 1.0),
    ((0, 2), 1.0),
    ((0, -2), 1.0),
];

/// Rows encode `Δ₅u(P) = f_rhs(P)` with `b = f_rhs − g̃/h²`.
///
/// `f_rhs` is indexed by unknown; `g` must cover every known axis neighbor
/// of an unknown.
pub fn assemble_poisson(cls: &CellClassification, f_rhs: &[f64], g: &PointValues) -> Result<SparseSystem> {
    let n = cls.n_unknown();
    if f_rhs.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: f_rhs.len() });
    }
    let h2 = cls.grid().h * cls.grid().h;
    let mut b = TripletBuilder::new(n);
    for (row, &p) in cls.index_map().points().iter().enumerate() {
        b.add(row, row, -4.0 / h2);
        b.add_rhs(row, f_rhs[row]);
        for d in Direction::ALL {
            let q = p.step(d, 1);
            match cls.unknown_index(q) {
                Some(col) => b.add(row, col, 1.0 / h2),
                None => {
                    let gq = g.get(q).ok_or(Error::MissingBoundaryValue(q))?;
                    b.add_rhs(row, -gq / h2);
                }
            }
        }
    }
    Ok(b.finish())
}

/// Rows encode `Δ²₁₃u(P) = 0`.
///
/// Known taps use `g`. A far axis tap beyond a boundary neighbor `Q` uses
/// the ghost value `g(Q) + h·q(Q)` (outward `q`) when `mode` is
/// [`StencilMode::StrictPaper`] or when `g` has no value there.
pub fn assemble_biharmonic_13pt(
    cls: &CellClassification,
    g: &PointValues,
    q: Option<&NormalData>,
    mode: StencilMode,
) -> Result<SparseSystem> {
    let n = cls.n_unknown();
    let h = cls.grid().h;
    let h4 = h.powi(4);
    let mut b = TripletBuilder::new(n);
    for (row, &p) in cls.index_map().points().iter().enumerate() {
        for &((di, dj), w) in &BILAPLACIAN_13 {
            let tap = p.offset(di, dj);
            if let Some(col) = cls.unknown_index(tap) {
                b.add(row, col, w / h4);
                continue;
            }
            let far_axis = match (di, dj) {
                (2, 0) => Some(Direction::East),
                (-2, 0) => Some(Direction::West),
                (0, 2) => Some(Direction::North),
                (0, -2) => Some(Direction::South),
                _ => None,
            };
            let ghost_base = far_axis.map(|d| (p.step(d, 1), d)).filter(|(qp, _)| !cls.is_unknown(*qp));
            let known = g.get(tap);
            let value = match (ghost_base, known, mode) {
                (Some((qp, d)), _, StencilMode::StrictPaper) | (Some((qp, d)), None, StencilMode::PreferKnown) => {
                    let gq = g.get(qp).ok_or(Error::MissingBoundaryValue(qp))?;
                    let qq = q.and_then(|q| q.get(qp, d)).ok_or(Error::MissingNormalDerivative(qp))?;
                    gq + h * qq
                }
                (_, Some(v), _) => v,
                (_, None, _) => return Err(Error::MissingBoundaryValue(tap)),
            };
            b.add_rhs(row, -w * value / h4);
        }
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{classify_rect_hole, Rect};

    fn grid(n: usize, r: f64) -> Grid2D {
        Grid2D::new(Rect::centered_square(r), n).unwrap()
    }

    fn lattice(g: &Grid2D, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        g.points().map(|p| f(g.x(p.i), g.y(p.j))).collect()
    }

    #[test]
    fn five_point_on_constants_and_quadratics() {
        let g = grid(8, 1.3);
        let c = lattice(&g, |_, _| 3.5);
        let q = lattice(&g, |x, y| x * x + y * y);
        for p in [Point::new(1, 1), Point::new(4, 5), Point::new(7, 7)] {
            assert_eq!(laplacian_5pt_apply(&c, &g, p).unwrap(), 0.0);
            assert!((laplacian_5pt_apply(&q, &g, p).unwrap() - 4.0).abs() < 1e-12);
        }
        assert_eq!(laplacian_5pt_apply(&c, &g, Point::new(0, 3)), Err(Error::NotInterior(Point::new(0, 3))));
    }

    #[test]
    fn five_point_weights() {
        let g = grid(4, 1.0);
        let h2 = g.h * g.h;
        let mut delta = vec![0.0; g.len()];
        let center = Point::new(2, 2);
        delta[g.linear(center).unwrap()] = 1.0;
        assert_eq!(laplacian_5pt_apply(&delta, &g, center).unwrap(), -4.0 / h2);
        for d in Direction::ALL {
            assert_eq!(laplacian_5pt_apply(&delta, &g, center.step(d, 1)).unwrap(), 1.0 / h2);
        }
    }

    #[test]
    fn single_unknown_poisson() {
        let g = grid(2, 1.0);
        let cls = classify_rect_hole(&g);
        let mut gv = PointValues::new();
        for (k, p) in [Point::new(1, 2), Point::new(1, 0), Point::new(2, 1), Point::new(0, 1)].into_iter().enumerate() {
            gv.insert(p, (k + 1) as f64);
        }
        let sys = assemble_poisson(&cls, &[0.7], &gv).unwrap();
        let h2 = g.h * g.h;
        assert_eq!(sys.to_dense(), vec![-4.0 / h2]);
        assert!((sys.rhs()[0] - (0.7 - 10.0 / h2)).abs() < 1e-14);
    }

    #[test]
    fn poisson_pattern_is_delsq() {
        let g = grid(5, 1.0);
        let cls = classify_rect_hole(&g);
        let gv = PointValues::sample(cls.boundary_points(1), |_| 0.0);
        let sys = assemble_poisson(&cls, &vec![0.0; cls.n_unknown()], &gv).unwrap();
        let h2 = g.h * g.h;
        for (r, c, v) in sys.triplets() {
            let scaled = -h2 * v;
            if r == c {
                assert!((scaled - 4.0).abs() < 1e-12);
            } else {
                assert!((scaled + 1.0).abs() < 1e-12);
            }
        }
        assert!(sys.is_symmetric(0.0));
        assert!((0..sys.n_unknown()).all(|r| sys.row(r).0.len() <= 5));
    }

    #[test]
    fn poisson_reports_missing_data() {
        let g = grid(3, 1.0);
        let cls = classify_rect_hole(&g);
        let err = assemble_poisson(&cls, &[0.0; 4], &PointValues::new()).unwrap_err();
        assert!(matches!(err, Error::MissingBoundaryValue(_)));
        assert!(matches!(assemble_poisson(&cls, &[0.0], &PointValues::new()), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn bilaplacian_interior_weights() {
        let g = grid(8, 1.0);
        let cls = classify_rect_hole(&g);
        let sys = {
            let mut all = PointValues::sample(g.points(), |_| 0.0);
            for p in cls.boundary_points(1) {
                for d in Direction::ALL {
                    all.insert(p.step(d, 1), 0.0);
                }
            }
            assemble_biharmonic_13pt(&cls, &all, None, StencilMode::PreferKnown).unwrap()
        };
        let h4 = g.h.powi(4);
        let p = Point::new(4, 4);
        let row = cls.unknown_index(p).unwrap();
        for &((di, dj), w) in &BILAPLACIAN_13 {
            let col = cls.unknown_index(p.offset(di, dj)).unwrap();
            assert!((sys.get(row, col) * h4 - w).abs() < 1e-9);
        }
        assert_eq!(sys.row(row).0.len(), 13);
        assert!(sys.is_symmetric(1e-14));
    }

    #[test]
    fn ghost_correction_enters_rhs_only() {
        let g = grid(6, 1.0);
        let cls = classify_rect_hole(&g);
        let mut gv = PointValues::sample(g.points(), |_| 1.0);
        let mut q = NormalData::new();
        for p in cls.boundary_points(1) {
            for d in Direction::ALL {
                if cls.is_unknown(p.step(d.opposite(), 1)) {
                    q.insert(p, d, 0.5);
                    gv.insert(p.step(d, 1), 7.0);
                }
            }
        }
        let known = assemble_biharmonic_13pt(&cls, &gv, Some(&q), StencilMode::PreferKnown).unwrap();
        let strict = assemble_biharmonic_13pt(&cls, &gv, Some(&q), StencilMode::StrictPaper).unwrap();
        assert_eq!(known.triplets().collect::<Vec<_>>(), strict.triplets().collect::<Vec<_>>());
        let h = g.h;
        let row = cls.unknown_index(Point::new(1, 3)).unwrap();
        // far West tap: known value 7 vs ghost 1 + h·0.5
        let diff = strict.rhs()[row] - known.rhs()[row];
        assert!((diff - (7.0 - (1.0 + 0.5 * h)) / h.powi(4)).abs() < 1e-9 * diff.abs());
        let interior = cls.unknown_index(Point::new(3, 3)).unwrap();
        assert_eq!(strict.rhs()[interior], known.rhs()[interior]);
    }

    #[test]
    fn ghost_requires_normal_data() {
        let g = grid(4, 1.0);
        let cls = classify_rect_hole(&g);
        let gv = PointValues::sample(g.points(), |_| 1.0);
        let err = assemble_biharmonic_13pt(&cls, &gv, None, StencilMode::PreferKnown).unwrap_err();
        assert!(matches!(err, Error::MissingNormalDerivative(_)));
    }
}
