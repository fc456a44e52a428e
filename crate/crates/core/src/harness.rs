//! Analytic test surfaces, the domain-shrinking convergence study and its
//! CSV report.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::assembly::{BoundaryData, NormalData, PointValues, StencilMode};
use crate::error::{Error, Result};
use crate::grid::{classify_rect_hole, CellClassification, Direction, Grid2D, Point, Rect};
use crate::schemes::{
    complete_biharmonic_laplacian, complete_biharmonic_normal, complete_harmonic, complete_polyharmonic_laplacian,
    CompletedField, Scheme,
};
use crate::solver::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// `xy + x²(y + 1)`, biharmonic.
    Cubic,
    /// `(1 + cos x)(1 + cos y) / 4`.
    Cosine,
    /// `x + y`.
    Plane,
}

/// Value, Laplacian and gradient at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub u: f64,
    pub laplacian: f64,
    pub dx: f64,
    pub dy: f64,
}

impl TestFunction {
    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Cubic => "cubic",
            TestFunction::Cosine => "cosine",
            TestFunction::Plane => "plane",
        }
    }

    pub fn sample(self, x: f64, y: f64) -> Sample {
        match self {
            TestFunction::Cubic => Sample {
                u: x * y + x * x * (y + 1.0),
                laplacian: 2.0 * (y + 1.0),
                dx: y + 2.0 * x * (y + 1.0),
                dy: x + x * x,
            },
            TestFunction::Cosine => {
                let (cx, cy) = (x.cos(), y.cos());
                Sample {
                    u: (1.0 + cx) * (1.0 + cy) / 4.0,
                    laplacian: -(cx * (1.0 + cy) + (1.0 + cx) * cy) / 4.0,
                    dx: -x.sin() * (1.0 + cy) / 4.0,
                    dy: -y.sin() * (1.0 + cx) / 4.0,
                }
            }
            TestFunction::Plane => Sample { u: x + y, laplacian: 0.0, dx: 1.0, dy: 1.0 },
        }
    }

    /// `Δᵏu` in closed form.
    pub fn laplacian_power(self, k: u32, x: f64, y: f64) -> f64 {
        match (self, k) {
            (_, 0) => self.sample(x, y).u,
            (TestFunction::Cubic, 1) => 2.0 * (y + 1.0),
            (TestFunction::Cubic | TestFunction::Plane, _) => 0.0,
            (TestFunction::Cosine, k) => {
                // Δ cos x = −cos x, Δ(cos x cos y) = −2 cos x cos y
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                (s * (x.cos() + y.cos()) + (-2.0f64).powi(k as i32) * x.cos() * y.cos()) / 4.0
            }
        }
    }
}

/// `(u₀, Δu₀, ∂u₀/∂x, ∂u₀/∂y)`.
pub fn test_function(id: TestFunction, x: f64, y: f64) -> (f64, f64, f64, f64) {
    let s = id.sample(x, y);
    (s.u, s.laplacian, s.dx, s.dy)
}

/// A square hole `[-r, r]²` with exact boundary data for a test function.
///
/// `g` covers the lattice edge plus the ring just outside it (the far taps
/// of the 13-point stencil); `f` the edge; `q` the non-corner edge points
/// with axis-aligned outward normals.
#[derive(Debug, Clone)]
pub struct AnalyticProblem {
    pub function: TestFunction,
    pub grid: Grid2D,
    pub cls: CellClassification,
    pub data: BoundaryData,
    /// Exact values on the lattice, row-major.
    pub exact: Vec<f64>,
}

impl AnalyticProblem {
    pub fn new(function: TestFunction, half_width: f64, n: usize) -> Result<Self> {
        let grid = Grid2D::new(Rect::centered_square(half_width), n)?;
        let cls = classify_rect_hole(&grid);
        let at = |p: Point| function.sample(grid.x(p.i), grid.y(p.j));

        let mut g = PointValues::sample(cls.boundary_points(1), |p| at(p).u);
        let f = PointValues::sample(cls.boundary_points(1), |p| at(p).laplacian);
        let mut q = NormalData::new();
        for p in cls.boundary_points(1) {
            for d in Direction::ALL {
                if cls.is_unknown(p.step(d.opposite(), 1)) {
                    let s = at(p);
                    let (di, dj) = d.delta();
                    q.insert(p, d, s.dx * di as f64 + s.dy * dj as f64);
                    let beyond = p.step(d, 1);
                    g.insert(beyond, at(beyond).u);
                }
            }
        }
        let exact = grid.points().map(|p| at(p).u).collect();
        Ok(Self { function, grid, cls, data: BoundaryData { g, f: Some(f), q: Some(q) }, exact })
    }

    /// Edge traces `Δᵏu₀|_S` for `k = order − 1` down to `0`.
    pub fn laplacian_traces(&self, order: usize) -> Vec<PointValues> {
        (0..order as u32)
            .rev()
            .map(|k| {
                PointValues::sample(self.cls.boundary_points(1), |p| {
                    self.function.laplacian_power(k, self.grid.x(p.i), self.grid.y(p.j))
                })
            })
            .collect()
    }

    pub fn solve(&self, scheme: Scheme, opts: &SolverOptions, stencil: StencilMode) -> Result<CompletedField> {
        let f = self.data.f.as_ref().expect("analytic problems carry f");
        match scheme {
            Scheme::Harmonic => complete_harmonic(&self.cls, &self.data.g, opts),
            Scheme::BiharmonicL => complete_biharmonic_laplacian(&self.cls, &self.data.g, f, opts),
            Scheme::BiharmonicN => complete_biharmonic_normal(&self.cls, &self.data, stencil, opts),
            Scheme::PolyharmonicL(order) => {
                let traces = self.laplacian_traces(order);
                let refs: Vec<&PointValues> = traces.iter().collect();
                complete_polyharmonic_laplacian(&self.cls, &refs, opts)
            }
        }
    }

    /// Sup-norm error over unknowns.
    pub fn sup_error(&self, field: &CompletedField) -> f64 {
        self.cls
            .index_map()
            .points()
            .iter()
            .zip(&field.unknowns)
            .map(|(&p, v)| (v - self.exact[self.grid.linear(p).unwrap()]).abs())
            .fold(0.0, f64::max)
    }

    /// Completion on the full lattice: exact values at known points.
    pub fn lattice_values(&self, field: &CompletedField) -> Vec<f64> {
        field.lattice_values(&self.cls, &self.exact).expect("same grid")
    }
}

/// The three schemes compared by the study, in report column order.
pub const STUDY_SCHEMES: [Scheme; 3] = [Scheme::Harmonic, Scheme::BiharmonicL, Scheme::BiharmonicN];

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub i: usize,
    pub half_width: f64,
    /// Side length `2^(1−i)` of `D_i`.
    pub d: f64,
    pub errors: [f64; 3],
    /// Error below ten times the solver tolerance.
    pub floor: [bool; 3],
}

impl ReportRow {
    pub fn log2_errors(&self) -> [f64; 3] {
        self.errors.map(f64::log2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub function: TestFunction,
    pub n: usize,
    pub stencil: StencilMode,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    /// `log₂ e_k − log₂ e_{k+1}` for consecutive pairs.
    pub pairwise: Vec<f64>,
    /// Least-squares decay of `log₂ e` per halving.
    pub fit: f64,
}

/// Per-halving decay rates of a sequence of errors.
pub fn estimate_order(errors: &[f64]) -> Result<OrderEstimate> {
    if errors.len() < 2 {
        return Err(Error::TooFewErrors);
    }
    if let Some(&e) = errors.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::NonPositiveError(e));
    }
    let logs: Vec<f64> = errors.iter().map(|e| e.log2()).collect();
    let pairwise = logs.windows(2).map(|w| w[0] - w[1]).collect();
    let m = logs.len() as f64;
    let mean_k = (m - 1.0) / 2.0;
    let mean_l = logs.iter().sum::<f64>() / m;
    let (num, den) = logs.iter().enumerate().fold((0.0, 0.0), |(num, den), (k, l)| {
        let dk = k as f64 - mean_k;
        (num + dk * (l - mean_l), den + dk * dk)
    });
    Ok(OrderEstimate { pairwise, fit: -num / den })
}

/// Runs all three schemes on `D_i = [−2^−i, 2^−i]²` for `i = 0..=i_max`
/// with a fixed `n`-subdivision lattice.
pub fn run_convergence_study(
    function: TestFunction,
    i_max: usize,
    n: usize,
    opts: &SolverOptions,
    stencil: StencilMode,
) -> Result<ConvergenceReport> {
    if i_max > 12 {
        return Err(Error::InvalidGrid(format!("i_max = {i_max} exceeds 12")));
    }
    if n < 10 {
        return Err(Error::InvalidGrid(format!("n = {n}, the study needs at least 10")));
    }
    let floor = 10.0 * opts.tol;
    let rows = (0..=i_max)
        .into_par_iter()
        .map(|i| {
            let half_width = 0.5f64.powi(i as i32);
            let problem = AnalyticProblem::new(function, half_width, n)?;
            let mut errors = [0.0; 3];
            for (e, scheme) in errors.iter_mut().zip(STUDY_SCHEMES) {
                *e = problem.sup_error(&problem.solve(scheme, opts, stencil)?).max(f64::MIN_POSITIVE);
            }
            Ok(ReportRow { i, half_width, d: 2.0 * half_width, errors, floor: errors.map(|e| e < floor) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport { function, n, stencil, rows })
}

impl ConvergenceReport {
    /// Order estimate for one column over rows `from..`, skipping floor rows.
    pub fn column_order(&self, column: usize, from: usize) -> Option<OrderEstimate> {
        let errs: Vec<f64> =
            self.rows.iter().filter(|r| r.i >= from && !r.floor[column]).map(|r| r.errors[column]).collect();
        estimate_order(&errs).ok()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,d,log2_err_uh,log2_err_ul,log2_err_un\n");
        for r in &self.rows {
            let [h, l, n] = r.log2_errors();
            writeln!(out, "{},{},{:.6},{:.6},{:.6}", r.i, r.d, h, l, n).unwrap();
        }
        writeln!(
            out,
            "# function={} n={} stencil={}",
            self.function.name(),
            self.n,
            match self.stencil {
                StencilMode::PreferKnown => "prefer-known",
                StencilMode::StrictPaper => "strict-paper",
            }
        )
        .unwrap();
        out.push_str("# d is the side length 2^(1-i) of D_i; its Euclidean diameter is sqrt(2)*d\n");
        let names = ["uh", "ul", "un"];
        let floors: Vec<String> = self
            .rows
            .iter()
            .flat_map(|r| (0..3).filter(|&c| r.floor[c]).map(move |c| format!("i={}:{}", r.i, names[c])))
            .collect();
        if !floors.is_empty() {
            writeln!(out, "# floor (excluded from slopes): {}", floors.join(" ")).unwrap();
        }
        for (c, name) in names.iter().enumerate() {
            if let Some(o) = self.column_order(c, 0) {
                let pairs: Vec<String> = o.pairwise.iter().map(|s| format!("{s:.3}")).collect();
                writeln!(out, "# slopes {name}: fit={:.3} pairwise={}", o.fit, pairs.join(" ")).unwrap();
            }
        }
        out
    }
}
