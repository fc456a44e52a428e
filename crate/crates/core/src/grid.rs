//! Uniform lattices, point classification and unknown numbering.

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self { x_min, x_max, y_min, y_max }
    }

    /// The square `[-r, r]²`.
    pub fn centered_square(half_width: f64) -> Self {
        Self::new(-half_width, half_width, -half_width, half_width)
    }
}

/// Integer lattice coordinate. `i` runs along x (columns), `j` along y (rows).
///
/// Coordinates may lie outside the lattice; boundary data for rectangular
/// holes uses the ring just beyond the lattice edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub i: i64,
    pub j: i64,
}

impl Point {
    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }

    pub const fn offset(self, di: i64, dj: i64) -> Self {
        Self { i: self.i + di, j: self.j + dj }
    }

    pub const fn step(self, dir: Direction, distance: i64) -> Self {
        let (di, dj) = dir.delta();
        self.offset(di * distance, dj * distance)
    }
}

/// The four axis directions of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    East,
    West,
    North,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::East, Direction::West, Direction::North, Direction::South];

    pub const fn delta(self) -> (i64, i64) {
        match self {
            Direction::East => (1, 0),
            Direction::West => (-1, 0),
            Direction::North => (0, 1),
            Direction::South => (0, -1),
        }
    }

    pub const fn opposite(self) -> Self {
        match self {
            Direction::East => Direction::West,
            Direction::West => Direction::East,
            Direction::North => Direction::South,
            Direction::South => Direction::North,
        }
    }
}

/// Uniform lattice with spacing `h` and `(nx + 1) × (ny + 1)` points.
///
/// Grids built from a rectangle are square with `nx == ny == n`; pixel grids
/// use `h = 1` and one lattice point per pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x_min: f64,
    pub y_min: f64,
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
}

impl Grid2D {
    /// Lattice over a square `rect` with `n` subdivisions per side.
    pub fn new(rect: Rect, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("n = {n}, need at least 2")));
        }
        let wx = rect.x_max - rect.x_min;
        let wy = rect.y_max - rect.y_min;
        if !(wx > 0.0 && wy > 0.0) || !wx.is_finite() || !wy.is_finite() {
            return Err(Error::InvalidGrid("empty or non-finite rectangle".into()));
        }
        if (wx - wy).abs() > 1e-12 * wx.max(wy) {
            return Err(Error::InvalidGrid(format!("rectangle is not square ({wx} × {wy})")));
        }
        Ok(Self { x_min: rect.x_min, y_min: rect.y_min, nx: n, ny: n, h: wx / n as f64 })
    }

    /// One lattice point per pixel, spacing 1, origin at pixel (0, 0).
    pub fn pixels(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid("image has a zero dimension".into()));
        }
        Ok(Self { x_min: 0.0, y_min: 0.0, nx: width - 1, ny: height - 1, h: 1.0 })
    }

    /// Number of lattice points along x.
    pub fn width(&self) -> usize {
        self.nx + 1
    }

    /// Number of lattice points along y.
    pub fn height(&self) -> usize {
        self.ny + 1
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: i64) -> f64 {
        self.x_min + i as f64 * self.h
    }

    pub fn y(&self, j: i64) -> f64 {
        self.y_min + j as f64 * self.h
    }

    pub fn contains(&self, p: Point) -> bool {
        p.i >= 0 && p.j >= 0 && p.i <= self.nx as i64 && p.j <= self.ny as i64
    }

    /// Row-major offset of an on-lattice point.
    pub fn linear(&self, p: Point) -> Option<usize> {
        self.contains(p).then(|| p.j as usize * self.width() + p.i as usize)
    }

    pub fn point(&self, linear: usize) -> Point {
        Point::new((linear % self.width()) as i64, (linear / self.width()) as i64)
    }

    /// All lattice points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }
}

/// Role of a lattice point relative to the missing region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    /// Value is solved for.
    Unknown,
    /// Known point carrying boundary data. Ring 1 touches an unknown along
    /// an axis; ring 2 sits two steps from an unknown along an axis.
    Boundary { ring: u8 },
    /// Known point not used as boundary data.
    Known,
}

/// Bijection between unknown lattice points and `0..n_unknown` (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    points: Vec<Point>,
    slots: Vec<Option<usize>>,
}

impl IndexMap {
    fn from_cells(grid: &Grid2D, cells: &[Cell]) -> Self {
        let mut points = Vec::new();
        let slots = cells
            .iter()
            .enumerate()
            .map(|(k, c)| {
                (*c == Cell::Unknown).then(|| {
                    points.push(grid.point(k));
                    points.len() - 1
                })
            })
            .collect();
        Self { points, slots }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, index: usize) -> Point {
        self.points[index]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

/// Per-point roles over a lattice plus the unknown numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct CellClassification {
    grid: Grid2D,
    cells: Vec<Cell>,
    index: IndexMap,
    n_boundary: usize,
}

impl CellClassification {
    fn from_cells(grid: Grid2D, cells: Vec<Cell>) -> Self {
        let index = IndexMap::from_cells(&grid, &cells);
        let n_boundary = cells.iter().filter(|c| matches!(c, Cell::Boundary { .. })).count();
        Self { grid, cells, index, n_boundary }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// `None` for points off the lattice.
    pub fn cell(&self, p: Point) -> Option<Cell> {
        self.grid.linear(p).map(|k| self.cells[k])
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_unknown(&self, p: Point) -> bool {
        self.cell(p) == Some(Cell::Unknown)
    }

    pub fn unknown_index(&self, p: Point) -> Option<usize> {
        self.grid.linear(p).and_then(|k| self.index.slots[k])
    }

    pub fn index_map(&self) -> &IndexMap {
        &self.index
    }

    pub fn n_unknown(&self) -> usize {
        self.index.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.n_boundary
    }

    /// Boundary points of the given ring, row-major.
    pub fn boundary_points(&self, ring: u8) -> impl Iterator<Item = Point> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c == Cell::Boundary { ring })
            .map(|(k, _)| self.grid.point(k))
    }
}

/// Every strictly interior point is unknown; the lattice edge (corners
/// included) is the ring-1 boundary.
pub fn classify_rect_hole(grid: &Grid2D) -> CellClassification {
    let cells = grid
        .points()
        .map(|p| {
            let edge = p.i == 0 || p.j == 0 || p.i == grid.nx as i64 || p.j == grid.ny as i64;
            if edge {
                Cell::Boundary { ring: 1 }
            } else {
                Cell::Unknown
            }
        })
        .collect();
    CellClassification::from_cells(*grid, cells)
}

/// Classify pixels from a row-major missing-pixel mask.
///
/// Missing pixels need a collar of two known pixels on every side.
pub fn classify_mask(width: usize, height: usize, mask: &[bool]) -> Result<CellClassification> {
    let grid = Grid2D::pixels(width, height)?;
    if mask.len() != grid.len() {
        return Err(Error::MaskSize { expected: grid.len(), got: mask.len() });
    }
    let (w, h) = (width as i64, height as i64);
    let mut cells = vec![Cell::Known; mask.len()];
    for (k, _) in mask.iter().enumerate().filter(|(_, m)| **m) {
        let p = grid.point(k);
        if p.i < 2 || p.j < 2 || p.i > w - 3 || p.j > h - 3 {
            return Err(Error::CollarTooThin(p));
        }
        cells[k] = Cell::Unknown;
    }
    for ring in [1u8, 2] {
        for k in mask.iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| k) {
            let p = grid.point(k);
            for dir in Direction::ALL {
                let q = grid.linear(p.step(dir, ring as i64)).expect("collar checked");
                if cells[q] == Cell::Known {
                    cells[q] = Cell::Boundary { ring };
                }
            }
        }
    }
    Ok(CellClassification::from_cells(grid, cells))
}
