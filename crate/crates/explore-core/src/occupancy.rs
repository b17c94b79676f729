//! Tri-state occupancy grid: ground-truth loading, scan ray carving,
//! collision checking, and visible-unknown-area exploration gain.
//!
//! Segment/cell membership uses conservative supercover traversal (every cell
//! the segment touches), so diagonal moves cannot cut corners through walls.

use crate::geometry::{Point, Rect};
use crate::lidar::LidarScan;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Unknown,
    Free,
    Occupied,
}

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("map parse error: {0}")]
    Parse(String),
    #[error("pose outside grid bounds")]
    PoseOutOfBounds,
    #[error("segment endpoint outside grid bounds")]
    OutOfBounds,
    #[error("gain viewpoint is not in a free cell")]
    ViewpointNotFree,
}

/// Minimum in-cell chord (meters) for a beam to carve a cell Free.
const CHORD_EPS: f64 = 1e-9;

/// One cell visited by a segment traversal, with the parametric distance
/// (fraction of the segment) at which the segment enters it.
#[derive(Debug, Clone, Copy)]
pub struct CellStep {
    pub ix: i64,
    pub iy: i64,
    pub t_entry: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    resolution: f64,
    origin: Point,
    width: usize,
    height: usize,
    cells: Vec<Cell>,
}

impl OccupancyGrid {
    pub fn new_unknown(width: usize, height: usize, resolution: f64, origin: Point) -> Self {
        assert!(resolution > 0.0);
        Self {
            resolution,
            origin,
            width,
            height,
            cells: vec![Cell::Unknown; width * height],
        }
    }

    /// Parse a ground-truth map: header `W H RESOLUTION`, then H rows of W
    /// glyphs (`.` free, `#` occupied). Row 0 of the file is the top of the
    /// map; rows are stored north-up (row index grows with +y).
    pub fn load_ground_truth(text: &str) -> Result<Self, MapError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| MapError::Parse("empty map file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(MapError::Parse(format!("bad header: {header:?}")));
        }
        let width: usize = fields[0]
            .parse()
            .map_err(|_| MapError::Parse(format!("bad width: {:?}", fields[0])))?;
        let height: usize = fields[1]
            .parse()
            .map_err(|_| MapError::Parse(format!("bad height: {:?}", fields[1])))?;
        let resolution: f64 = fields[2]
            .parse()
            .map_err(|_| MapError::Parse(format!("bad resolution: {:?}", fields[2])))?;
        if width == 0 || height == 0 || !(resolution > 0.0) {
            return Err(MapError::Parse("non-positive dimensions".into()));
        }

        let mut grid = Self::new_unknown(width, height, resolution, Point::new(0.0, 0.0));
        let mut rows_read = 0usize;
        for (file_row, line) in lines.enumerate() {
            if file_row >= height {
                return Err(MapError::Parse("too many rows".into()));
            }
            let row = line.trim_end();
            if row.chars().count() != width {
                return Err(MapError::Parse(format!(
                    "row {file_row} has {} glyphs, expected {width}",
                    row.chars().count()
                )));
            }
            let grid_row = height - 1 - file_row;
            for (col, ch) in row.chars().enumerate() {
                let cell = match ch {
                    '.' => Cell::Free,
                    '#' => Cell::Occupied,
                    other => {
                        return Err(MapError::Parse(format!(
                            "illegal glyph {other:?} at row {file_row}, col {col}"
                        )))
                    }
                };
                grid.cells[grid_row * width + col] = cell;
            }
            rows_read += 1;
        }
        if rows_read != height {
            return Err(MapError::Parse(format!("expected {height} rows, got {rows_read}")));
        }
        Ok(grid)
    }

    /// Serialize in the ground-truth file format. Unknown cells are written as
    /// `#` (only meaningful for fully-known grids).
    pub fn to_map_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.width, self.height, self.resolution);
        for file_row in 0..self.height {
            let grid_row = self.height - 1 - file_row;
            for col in 0..self.width {
                out.push(match self.cells[grid_row * self.width + col] {
                    Cell::Free => '.',
                    _ => '#',
                });
            }
            out.push('\n');
        }
        out
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Map-frame rect covered by the grid.
    pub fn bounds(&self) -> Rect {
        Rect::new(
            self.origin.x,
            self.origin.y,
            self.origin.x + self.width as f64 * self.resolution,
            self.origin.y + self.height as f64 * self.resolution,
        )
    }

    /// An all-Unknown grid with the same geometry, for use as a live map.
    pub fn blank_like(&self) -> Self {
        Self::new_unknown(self.width, self.height, self.resolution, self.origin)
    }

    pub fn cell(&self, ix: i64, iy: i64) -> Option<Cell> {
        if ix < 0 || iy < 0 || ix >= self.width as i64 || iy >= self.height as i64 {
            None
        } else {
            Some(self.cells[iy as usize * self.width + ix as usize])
        }
    }

    pub fn set_cell(&mut self, ix: i64, iy: i64, value: Cell) {
        if ix >= 0 && iy >= 0 && ix < self.width as i64 && iy < self.height as i64 {
            self.cells[iy as usize * self.width + ix as usize] = value;
        }
    }

    /// Cell index containing a map-frame point; points exactly on the outer
    /// max edge belong to the last cell.
    pub fn cell_index(&self, p: Point) -> Option<(i64, i64)> {
        let gx = (p.x - self.origin.x) / self.resolution;
        let gy = (p.y - self.origin.y) / self.resolution;
        if gx < 0.0 || gy < 0.0 || gx > self.width as f64 || gy > self.height as f64 {
            return None;
        }
        let ix = (gx.floor() as i64).min(self.width as i64 - 1);
        let iy = (gy.floor() as i64).min(self.height as i64 - 1);
        Some((ix, iy))
    }

    pub fn cell_at(&self, p: Point) -> Option<Cell> {
        let (ix, iy) = self.cell_index(p)?;
        self.cell(ix, iy)
    }

    /// Map-frame center of a cell.
    /// Length of the part of segment a→b inside cell (ix, iy), by slab
    /// clipping. Zero for corner touches.
    fn chord_length(&self, a: Point, b: Point, ix: i64, iy: i64) -> f64 {
        let res = self.resolution;
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let mut t0 = 0.0f64;
        let mut t1 = 1.0f64;
        for (p, d, lo) in [
            (a.x, dx, self.origin.x + ix as f64 * res),
            (a.y, dy, self.origin.y + iy as f64 * res),
        ] {
            let hi = lo + res;
            if d == 0.0 {
                if p < lo || p > hi {
                    return 0.0;
                }
            } else {
                let (ta, tb) = ((lo - p) / d, (hi - p) / d);
                let (ta, tb) = if ta <= tb { (ta, tb) } else { (tb, ta) };
                t0 = t0.max(ta);
                t1 = t1.min(tb);
            }
        }
        if t1 <= t0 {
            0.0
        } else {
            (t1 - t0) * (dx * dx + dy * dy).sqrt()
        }
    }

    pub fn cell_center(&self, ix: i64, iy: i64) -> Point {
        Point::new(
            self.origin.x + (ix as f64 + 0.5) * self.resolution,
            self.origin.y + (iy as f64 + 0.5) * self.resolution,
        )
    }

    pub fn contains(&self, p: Point) -> bool {
        self.cell_index(p).is_some()
    }

    /// Area of non-Unknown cells, m².
    pub fn explored_area(&self) -> f64 {
        let known = self.cells.iter().filter(|c| **c != Cell::Unknown).count();
        known as f64 * self.resolution * self.resolution
    }

    pub fn count(&self, state: Cell) -> usize {
        self.cells.iter().filter(|c| **c == state).count()
    }

    /// Supercover traversal of the segment a→b, in traversal order. The
    /// visitor returns `false` to stop early. Returns `false` if stopped.
    pub fn for_each_cell_on_segment<F>(&self, a: Point, b: Point, mut visit: F) -> bool
    where
        F: FnMut(CellStep) -> bool,
    {
        let res = self.resolution;
        let ax = (a.x - self.origin.x) / res;
        let ay = (a.y - self.origin.y) / res;
        let bx = (b.x - self.origin.x) / res;
        let by = (b.y - self.origin.y) / res;

        // Clamp only the start cell: a start exactly on the outer max edge
        // still belongs to the last cell. The end cell is deliberately left
        // unclamped so rays leaving the grid surface as out-of-bounds indices.
        let mut ix = (ax.floor() as i64).min(self.width as i64 - 1);
        let mut iy = (ay.floor() as i64).min(self.height as i64 - 1);
        let end_ix = bx.floor() as i64;
        let end_iy = by.floor() as i64;

        if !visit(CellStep { ix, iy, t_entry: 0.0 }) {
            return false;
        }
        if ix == end_ix && iy == end_iy {
            return true;
        }

        let dx = bx - ax;
        let dy = by - ay;
        let step_x: i64 = if dx > 0.0 { 1 } else { -1 };
        let step_y: i64 = if dy > 0.0 { 1 } else { -1 };
        let t_delta_x = if dx != 0.0 { 1.0 / dx.abs() } else { f64::INFINITY };
        let t_delta_y = if dy != 0.0 { 1.0 / dy.abs() } else { f64::INFINITY };
        let mut t_max_x = if dx > 0.0 {
            (ix as f64 + 1.0 - ax) / dx
        } else if dx < 0.0 {
            (ax - ix as f64) / -dx
        } else {
            f64::INFINITY
        };
        let mut t_max_y = if dy > 0.0 {
            (iy as f64 + 1.0 - ay) / dy
        } else if dy < 0.0 {
            (ay - iy as f64) / -dy
        } else {
            f64::INFINITY
        };

        let guard = 2 * ((end_ix - ix).abs() + (end_iy - iy).abs()) as usize + 8;
        for _ in 0..guard {
            const CORNER_EPS: f64 = 1e-12;
            if (t_max_x - t_max_y).abs() < CORNER_EPS && t_max_x.is_finite() {
                // Exact corner crossing: include both side cells.
                if !visit(CellStep { ix: ix + step_x, iy, t_entry: t_max_x })
                    || !visit(CellStep { ix, iy: iy + step_y, t_entry: t_max_y })
                {
                    return false;
                }
                ix += step_x;
                iy += step_y;
                let t = t_max_x;
                t_max_x += t_delta_x;
                t_max_y += t_delta_y;
                if !visit(CellStep { ix, iy, t_entry: t }) {
                    return false;
                }
            } else if t_max_x < t_max_y {
                let t = t_max_x;
                ix += step_x;
                t_max_x += t_delta_x;
                if !visit(CellStep { ix, iy, t_entry: t }) {
                    return false;
                }
            } else {
                let t = t_max_y;
                iy += step_y;
                t_max_y += t_delta_y;
                if !visit(CellStep { ix, iy, t_entry: t }) {
                    return false;
                }
            }
            if ix == end_ix && iy == end_iy {
                return true;
            }
        }
        // Floating-point underrun near the endpoint: make sure the end cell
        // is reported.
        if ix != end_ix || iy != end_iy {
            return visit(CellStep { ix: end_ix, iy: end_iy, t_entry: 1.0 });
        }
        true
    }

    /// Carve one scan into the live map: beam paths become Free, hit
    /// endpoints become Occupied.
    pub fn integrate_scan(&mut self, scan: &LidarScan) -> Result<(), MapError> {
        if !self.contains(scan.pose) {
            return Err(MapError::PoseOutOfBounds);
        }
        let mut touched: Vec<(i64, i64)> = Vec::with_capacity(128);
        for beam in &scan.points {
            touched.clear();
            self.for_each_cell_on_segment(scan.pose, beam.point, |step| {
                touched.push((step.ix, step.iy));
                true
            });
            // A cell is carved Free only when the beam crosses its interior;
            // supercover corner touches must not clear a cell the beam never
            // actually passed through.
            let crossed: Vec<bool> = touched
                .iter()
                .map(|&(ix, iy)| self.chord_length(scan.pose, beam.point, ix, iy) > CHORD_EPS)
                .collect();
            if beam.hit {
                // Last traversed cell is the obstacle the beam stopped at.
                if let Some(&(hx, hy)) = touched.last() {
                    for (&(ix, iy), &ok) in touched[..touched.len() - 1].iter().zip(&crossed) {
                        if ok {
                            self.set_cell(ix, iy, Cell::Free);
                        }
                    }
                    self.set_cell(hx, hy, Cell::Occupied);
                }
            } else {
                for (&(ix, iy), &ok) in touched.iter().zip(&crossed) {
                    if ok {
                        self.set_cell(ix, iy, Cell::Free);
                    }
                }
            }
        }
        Ok(())
    }

    /// True iff every cell touched by the segment a→b is Free. Unknown cells
    /// are not traversable.
    pub fn segment_is_traversable(&self, a: Point, b: Point) -> Result<bool, MapError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(MapError::OutOfBounds);
        }
        let mut ok = true;
        self.for_each_cell_on_segment(a, b, |step| {
            match self.cell(step.ix, step.iy) {
                Some(Cell::Free) => true,
                _ => {
                    ok = false;
                    false
                }
            }
        });
        Ok(ok)
    }

    /// Segment crosses no Occupied cell (Unknown does not block sight).
    fn segment_is_visible(&self, a: Point, b: Point) -> bool {
        let mut ok = true;
        self.for_each_cell_on_segment(a, b, |step| {
            match self.cell(step.ix, step.iy) {
                Some(Cell::Occupied) => {
                    ok = false;
                    false
                }
                _ => true,
            }
        });
        ok
    }

    /// Area of Unknown cells within `gain_radius` of the viewpoint whose
    /// centers are visible from it (no Occupied cell on the sight line), m².
    pub fn exploration_gain(&self, viewpoint: Point, gain_radius: f64) -> Result<f64, MapError> {
        let (vx, vy) = self.cell_index(viewpoint).ok_or(MapError::OutOfBounds)?;
        if self.cell(vx, vy) != Some(Cell::Free) {
            return Err(MapError::ViewpointNotFree);
        }
        let r_cells = (gain_radius / self.resolution).ceil() as i64 + 1;
        let mut count = 0u64;
        for iy in (vy - r_cells).max(0)..=(vy + r_cells).min(self.height as i64 - 1) {
            for ix in (vx - r_cells).max(0)..=(vx + r_cells).min(self.width as i64 - 1) {
                if self.cells[iy as usize * self.width + ix as usize] != Cell::Unknown {
                    continue;
                }
                let center = self.cell_center(ix, iy);
                if viewpoint.distance(center) > gain_radius {
                    continue;
                }
                if self.segment_is_visible(viewpoint, center) {
                    count += 1;
                }
            }
        }
        Ok(count as f64 * self.resolution * self.resolution)
    }
}
