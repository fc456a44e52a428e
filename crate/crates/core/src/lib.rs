//! Surface completion and image inpainting with harmonic and biharmonic
//! extensions on uniform square lattices.
//!
//! The pipeline is: build a [`grid::Grid2D`], classify its points
//! ([`grid::CellClassification`]), assemble finite-difference systems
//! ([`assembly`]), solve them ([`solver`]) and wrap the result as a
//! [`schemes::CompletedField`]. [`inpaint`] applies the same schemes per
//! channel to raster images and [`harness`] runs the domain-shrinking
//! convergence study.

pub mod assembly;
pub mod error;
pub mod grid;
pub mod harness;
pub mod inpaint;
pub mod pnm;
pub mod schemes;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
