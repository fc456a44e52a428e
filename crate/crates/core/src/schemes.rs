//! Completion schemes: harmonic, biharmonic from Laplacian traces (a
//! cascade of Poisson solves), biharmonic from normal derivatives (13-point
//! system), and the general-order Laplacian-trace cascade.

use crate::assembly::{assemble_biharmonic_13pt, assemble_poisson, BoundaryData, PointValues, StencilMode};
use crate::error::{Error, Result};
use crate::grid::{CellClassification, Grid2D};
use crate::solver::{solve, SolveStats, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Harmonic,
    BiharmonicL,
    BiharmonicN,
    PolyharmonicL(usize),
}

/// Result of a completion: values at unknowns plus per-stage solver stats.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedField {
    pub grid: Grid2D,
    pub scheme: Scheme,
    /// Indexed by the classification's unknown numbering.
    pub unknowns: Vec<f64>,
    pub stats: Vec<SolveStats>,
}

impl CompletedField {
    /// Lattice field equal to `base` at known points and the completion at
    /// unknowns.
    pub fn lattice_values(&self, cls: &CellClassification, base: &[f64]) -> Result<Vec<f64>> {
        if base.len() != self.grid.len() {
            return Err(Error::LengthMismatch { expected: self.grid.len(), got: base.len() });
        }
        let mut out = base.to_vec();
        for (&p, &v) in cls.index_map().points().iter().zip(&self.unknowns) {
            out[self.grid.linear(p).expect("unknowns lie on the lattice")] = v;
        }
        Ok(out)
    }

    pub fn total_iterations(&self) -> usize {
        self.stats.iter().map(|s| s.iterations).sum()
    }
}

/// `Δ₅u = 0` with `u|_S = g`.
pub fn complete_harmonic(cls: &CellClassification, g: &PointValues, opts: &SolverOptions) -> Result<CompletedField> {
    let mut field = cascade(cls, &[g], opts)?;
    field.scheme = Scheme::Harmonic;
    Ok(field)
}

/// Two-stage cascade: `Δ₅v = 0, v|_S = f`, then `Δ₅u = v, u|_S = g`.
pub fn complete_biharmonic_laplacian(
    cls: &CellClassification,
    g: &PointValues,
    f: &PointValues,
    opts: &SolverOptions,
) -> Result<CompletedField> {
    let mut field = cascade(cls, &[f, g], opts)?;
    field.scheme = Scheme::BiharmonicL;
    Ok(field)
}

/// Order-`n` cascade. `traces[k]` holds `Δ^(n−1−k) u₀` on the boundary, so
/// the last entry is the Dirichlet data.
pub fn complete_polyharmonic_laplacian(
    cls: &CellClassification,
    traces: &[&PointValues],
    opts: &SolverOptions,
) -> Result<CompletedField> {
    let mut field = cascade(cls, traces, opts)?;
    field.scheme = Scheme::PolyharmonicL(traces.len());
    Ok(field)
}

fn cascade(cls: &CellClassification, traces: &[&PointValues], opts: &SolverOptions) -> Result<CompletedField> {
    if traces.is_empty() {
        return Err(Error::EmptyTraces);
    }
    let mut v = vec![0.0; cls.n_unknown()];
    let mut stats = Vec::with_capacity(traces.len());
    for trace in traces {
        let sys = assemble_poisson(cls, &v, trace)?;
        let (next, s) = solve(&sys, opts)?;
        v = next;
        stats.push(s);
    }
    Ok(CompletedField {
        grid: *cls.grid(),
        scheme: Scheme::PolyharmonicL(traces.len()),
        unknowns: v,
        stats,
    })
}

/// 13-point bilaplacian with Dirichlet `g` and outward normal derivative
/// `q` (from `data`).
pub fn complete_biharmonic_normal(
    cls: &CellClassification,
    data: &BoundaryData,
    mode: StencilMode,
    opts: &SolverOptions,
) -> Result<CompletedField> {
    let sys = assemble_biharmonic_13pt(cls, &data.g, data.q.as_ref(), mode)?;
    let (unknowns, s) = solve(&sys, opts)?;
    Ok(CompletedField { grid: *cls.grid(), scheme: Scheme::BiharmonicN, unknowns, stats: vec![s] })
}
