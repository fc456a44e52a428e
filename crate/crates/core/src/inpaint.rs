//! Image inpainting: per-channel completion of masked pixels.
//!
//! Pixel spacing is 1. Known pixels are never rewritten; filled pixels are
//! clamped to `[0, 255]` and rounded half away from zero.

use rayon::prelude::*;

use crate::assembly::{BoundaryData, NormalData, PointValues, StencilMode, BILAPLACIAN_13};
use crate::error::{Error, Result};
use crate::grid::{classify_mask, CellClassification, Direction, Point};
use crate::pnm::{quantize, RasterImage};
use crate::schemes::{complete_biharmonic_laplacian, complete_biharmonic_normal, complete_harmonic, CompletedField};
use crate::solver::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InpaintMethod {
    Harmonic,
    BiharmonicL,
    BiharmonicN,
}

impl InpaintMethod {
    pub fn name(self) -> &'static str {
        match self {
            InpaintMethod::Harmonic => "harmonic",
            InpaintMethod::BiharmonicL => "biharmonic-l",
            InpaintMethod::BiharmonicN => "biharmonic-n",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InpaintJob {
    pub image: RasterImage,
    /// Row-major, `true` marks a missing pixel.
    pub mask: Vec<bool>,
    pub method: InpaintMethod,
    pub solver: SolverOptions,
    pub stencil: StencilMode,
}

impl InpaintJob {
    pub fn new(image: RasterImage, mask: Vec<bool>, method: InpaintMethod) -> Self {
        Self { image, mask, method, solver: SolverOptions::default(), stencil: StencilMode::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Inpainted {
    pub image: RasterImage,
    pub classification: CellClassification,
    /// Unrounded completion per channel.
    pub fields: Vec<CompletedField>,
}

impl Inpainted {
    pub fn iterations(&self) -> usize {
        self.fields.iter().map(CompletedField::total_iterations).sum()
    }
}

/// Boundary data read from one channel of known pixels.
///
/// `g` covers every known pixel reached by the 13-point stencil of an
/// unknown. `f` (biharmonic-l) is the 5-point Laplacian at ring-1 pixels,
/// with a one-sided second difference along any axis whose centered
/// stencil touches a missing pixel. `q` (biharmonic-n) is the one-sided
/// outward difference `u(Q + d) − u(Q)`.
pub fn extract_boundary_data(plane: &[f64], cls: &CellClassification, method: InpaintMethod) -> Result<BoundaryData> {
    let grid = cls.grid();
    if plane.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), got: plane.len() });
    }
    let known = |p: Point| grid.linear(p).filter(|_| !cls.is_unknown(p)).map(|k| plane[k]);

    let mut g = PointValues::new();
    for &p in cls.index_map().points() {
        for &((di, dj), _) in &BILAPLACIAN_13 {
            let t = p.offset(di, dj);
            if let Some(v) = known(t) {
                g.insert(t, v);
            }
        }
    }

    let f = match method {
        InpaintMethod::BiharmonicL => {
            let mut f = PointValues::new();
            for q in cls.boundary_points(1) {
                let mut lap = 0.0;
                for (fwd, back) in [(Direction::East, Direction::West), (Direction::North, Direction::South)] {
                    let center = known(q).expect("boundary pixels are known");
                    lap += match (known(q.step(fwd, 1)), known(q.step(back, 1))) {
                        (Some(a), Some(b)) => a + b - 2.0 * center,
                        (Some(_), None) => one_sided(&known, q, fwd)?,
                        (None, Some(_)) => one_sided(&known, q, back)?,
                        (None, None) => return Err(Error::CollarViolation(q)),
                    };
                }
                f.insert(q, lap);
            }
            Some(f)
        }
        _ => None,
    };

    let q = match method {
        InpaintMethod::BiharmonicN => {
            let mut nd = NormalData::new();
            for b in cls.boundary_points(1) {
                for d in Direction::ALL {
                    if cls.is_unknown(b.step(d.opposite(), 1)) {
                        let out = known(b.step(d, 1)).ok_or(Error::CollarViolation(b))?;
                        nd.insert(b, d, out - known(b).expect("boundary pixels are known"));
                    }
                }
            }
            Some(nd)
        }
        _ => None,
    };

    Ok(BoundaryData { g, f, q })
}

/// `u(Q) − 2u(Q + d) + u(Q + 2d)`.
fn one_sided(known: &impl Fn(Point) -> Option<f64>, q: Point, d: Direction) -> Result<f64> {
    let taps = [known(q), known(q.step(d, 1)), known(q.step(d, 2))];
    match taps {
        [Some(a), Some(b), Some(c)] => Ok(a - 2.0 * b + c),
        _ => Err(Error::CollarViolation(q)),
    }
}

/// Completes one channel; returns the unrounded field.
pub fn inpaint_channel(
    plane: &[f64],
    cls: &CellClassification,
    method: InpaintMethod,
    solver: &SolverOptions,
    stencil: StencilMode,
) -> Result<CompletedField> {
    let data = extract_boundary_data(plane, cls, method)?;
    match method {
        InpaintMethod::Harmonic => complete_harmonic(cls, &data.g, solver),
        InpaintMethod::BiharmonicL => {
            complete_biharmonic_laplacian(cls, &data.g, data.f.as_ref().expect("extracted"), solver)
        }
        InpaintMethod::BiharmonicN => complete_biharmonic_normal(cls, &data, stencil, solver),
    }
}

pub fn inpaint(job: &InpaintJob) -> Result<Inpainted> {
    let img = &job.image;
    if job.mask.len() != img.pixel_count() {
        return Err(Error::ImageMismatch(format!(
            "mask has {} pixels, image has {}",
            job.mask.len(),
            img.pixel_count()
        )));
    }
    let cls = classify_mask(img.width, img.height, &job.mask)?;
    let fields = (0..img.channels)
        .into_par_iter()
        .map(|c| inpaint_channel(&img.channel(c), &cls, job.method, &job.solver, job.stencil))
        .collect::<Result<Vec<_>>>()?;

    let mut out = img.clone();
    for (c, field) in fields.iter().enumerate() {
        for (&p, &v) in cls.index_map().points().iter().zip(&field.unknowns) {
            let k = cls.grid().linear(p).expect("on lattice");
            out.samples[k * img.channels + c] = quantize(v) as f64;
        }
    }
    Ok(Inpainted { image: out, classification: cls, fields })
}

/// Largest absolute difference over masked pixels, all channels.
pub fn sup_error(result: &RasterImage, truth: &RasterImage, mask: &[bool]) -> Result<f64> {
    check_same_shape(result, truth)?;
    let ch = result.channels;
    Ok(mask
        .iter()
        .enumerate()
        .filter(|(_, m)| **m)
        .flat_map(|(k, _)| (0..ch).map(move |c| k * ch + c))
        .map(|s| (result.samples[s] - truth.samples[s]).abs())
        .fold(0.0, f64::max))
}

/// Peak signal-to-noise ratio over all samples (peak 255). Infinite for
/// identical images.
pub fn psnr(result: &RasterImage, truth: &RasterImage) -> Result<f64> {
    check_same_shape(result, truth)?;
    let mse = result.samples.iter().zip(&truth.samples).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        / result.samples.len() as f64;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

fn check_same_shape(a: &RasterImage, b: &RasterImage) -> Result<()> {
    if (a.width, a.height, a.channels) != (b.width, b.height, b.channels) {
        return Err(Error::ImageMismatch("result and truth differ in shape".into()));
    }
    Ok(())
}

/// Deterministic stand-in test images and masks.
pub mod synthetic {
    use std::f64::consts::PI;

    use crate::pnm::RasterImage;

    /// `127.5 (1 + cos(πx/32)) (1 + cos(πy/32)) / 2` with `x` the column and
    /// `y` the row.
    pub fn smooth_bump(size: usize) -> RasterImage {
        RasterImage::from_fn(size, size, |c, r| {
            127.5 * (1.0 + (PI * c as f64 / 32.0).cos()) * (1.0 + (PI * r as f64 / 32.0).cos()) / 2.0
        })
    }

    /// Diagonal ramp from 0 to 255.
    pub fn gradient(size: usize) -> RasterImage {
        let span = (2 * (size - 1)).max(1) as f64;
        RasterImage::from_fn(size, size, |c, r| 255.0 * (c + r) as f64 / span)
    }

    /// Vertical step edge through the middle: 40 on the left, 220 on the right.
    pub fn edge(size: usize) -> RasterImage {
        RasterImage::from_fn(size, size, |c, _| if c < size / 2 { 40.0 } else { 220.0 })
    }

    /// RGB image whose channels are the bump, gradient and edge.
    pub fn rgb(size: usize) -> RasterImage {
        let planes = [smooth_bump(size), gradient(size), edge(size)];
        let samples = (0..size * size).flat_map(|k| planes.iter().map(move |p| p.samples[k])).collect();
        RasterImage { width: size, height: size, channels: 3, samples }
    }

    /// Centered `side × side` square of missing pixels.
    pub fn centered_square_mask(width: usize, height: usize, side: usize) -> Vec<bool> {
        let (c0, r0) = ((width - side) / 2, (height - side) / 2);
        (0..width * height)
            .map(|k| {
                let (c, r) = (k % width, k / width);
                (c0..c0 + side).contains(&c) && (r0..r0 + side).contains(&r)
            })
            .collect()
    }
}
