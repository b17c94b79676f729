//! Axis-aligned rectangle algebra: intersection, rectangle-difference
//! decomposition, and uniform sampling over unions of disjoint rects.

use rand::Rng;
use thiserror::Error;

/// A point in the map frame, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("cannot sample from a zero-area region")]
    ZeroAreaRegion,
}

/// Axis-aligned rectangle in the map frame, meters.
///
/// Degenerate (zero-area) rects are valid; they contain no sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Rect {
    /// Panics if min > max on either axis.
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Self {
        assert!(x_min <= x_max && y_min <= y_max, "invalid rect bounds");
        Self {
            x_min,
            y_min,
            x_max,
            y_max,
        }
    }

    /// Bounding rect of a non-empty point set.
    pub fn bounding(points: impl IntoIterator<Item = Point>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect::new(first.x, first.y, first.x, first.y);
        for p in it {
            r.x_min = r.x_min.min(p.x);
            r.y_min = r.y_min.min(p.y);
            r.x_max = r.x_max.max(p.x);
            r.y_max = r.y_max.max(p.y);
        }
        Some(r)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Grow the rect symmetrically so each side is at least `min_side` long.
    pub fn inflated_to_min_side(&self, min_side: f64) -> Rect {
        let mut r = *self;
        if r.width() < min_side {
            let c = 0.5 * (r.x_min + r.x_max);
            r.x_min = c - 0.5 * min_side;
            r.x_max = c + 0.5 * min_side;
        }
        if r.height() < min_side {
            let c = 0.5 * (r.y_min + r.y_max);
            r.y_min = c - 0.5 * min_side;
            r.y_max = c + 0.5 * min_side;
        }
        r
    }
}

/// Intersection of two rects, or `None` when their interiors are disjoint.
pub fn intersect(a: &Rect, b: &Rect) -> Option<Rect> {
    let x_min = a.x_min.max(b.x_min);
    let y_min = a.y_min.max(b.y_min);
    let x_max = a.x_max.min(b.x_max);
    let y_max = a.y_max.min(b.y_max);
    if x_min < x_max && y_min < y_max {
        Some(Rect::new(x_min, y_min, x_max, y_max))
    } else {
        None
    }
}

/// The current window split into its overlap with the previous window and the
/// remaining non-overlap parts.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionDecomposition {
    pub overlap: Option<Rect>,
    pub non_overlap_parts: Vec<Rect>,
    pub s_o: f64,
    pub s_n: f64,
}

/// Split `current` into `current ∩ previous` and `current ∖ previous`.
///
/// The difference uses a fixed guillotine order (left, right, bottom, top
/// slabs), producing at most four disjoint rects.
pub fn decompose(current: &Rect, previous: Option<&Rect>) -> RegionDecomposition {
    let overlap = previous.and_then(|prev| intersect(current, prev));
    let Some(ov) = overlap else {
        return RegionDecomposition {
            overlap: None,
            non_overlap_parts: vec![*current],
            s_o: 0.0,
            s_n: current.area(),
        };
    };

    let mut parts = Vec::with_capacity(4);
    if current.x_min < ov.x_min {
        parts.push(Rect::new(current.x_min, current.y_min, ov.x_min, current.y_max));
    }
    if ov.x_max < current.x_max {
        parts.push(Rect::new(ov.x_max, current.y_min, current.x_max, current.y_max));
    }
    if current.y_min < ov.y_min {
        parts.push(Rect::new(ov.x_min, current.y_min, ov.x_max, ov.y_min));
    }
    if ov.y_max < current.y_max {
        parts.push(Rect::new(ov.x_min, ov.y_max, ov.x_max, current.y_max));
    }

    let s_n: f64 = parts.iter().map(Rect::area).sum();
    RegionDecomposition {
        overlap: Some(ov),
        non_overlap_parts: parts,
        s_o: ov.area(),
        s_n,
    }
}

/// Draw one point uniformly over the union of `parts`: part picked with
/// probability proportional to its area, then uniform inside it.
pub fn sample_in<R: Rng + ?Sized>(parts: &[Rect], rng: &mut R) -> Result<Point, GeometryError> {
    let total: f64 = parts.iter().map(Rect::area).sum();
    if total <= 0.0 {
        return Err(GeometryError::ZeroAreaRegion);
    }
    let mut pick = rng.gen_range(0.0..total);
    let mut chosen = parts
        .iter()
        .rev()
        .find(|p| p.area() > 0.0)
        .expect("total area > 0");
    for part in parts {
        if pick < part.area() {
            chosen = part;
            break;
        }
        pick -= part.area();
    }
    Ok(Point::new(
        rng.gen_range(chosen.x_min..chosen.x_max),
        rng.gen_range(chosen.y_min..chosen.y_max),
    ))
}
