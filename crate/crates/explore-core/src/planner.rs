//! 8-connected grid path planning over free cells.

use crate::geometry::Point;
use crate::occupancy::{Cell, OccupancyGrid};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(PartialEq)]
struct QueueEntry {
    f: f64,
    g: f64,
    cell: (i64, i64),
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on f, deterministic tie-break on cell index
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.cell.cmp(&self.cell))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest 8-connected path over Free cells from the cell containing `from`
/// to the cell containing `to`, as waypoints at cell centers. Diagonal steps
/// require both adjacent orthogonal cells to be free, so paths never cut a
/// corner a supercover collision check would reject. Returns `None` when
/// unreachable.
pub fn plan_path(map: &OccupancyGrid, from: Point, to: Point) -> Option<Vec<Point>> {
    let start = map.cell_index(from)?;
    let goal = map.cell_index(to)?;
    if map.cell(start.0, start.1) != Some(Cell::Free) || map.cell(goal.0, goal.1) != Some(Cell::Free)
    {
        return None;
    }
    if start == goal {
        return Some(vec![map.cell_center(goal.0, goal.1)]);
    }

    let w = map.width() as i64;
    let h = map.height() as i64;
    let idx = |c: (i64, i64)| (c.1 * w + c.0) as usize;
    let heuristic = |c: (i64, i64)| {
        let dx = (c.0 - goal.0).abs() as f64;
        let dy = (c.1 - goal.1).abs() as f64;
        // octile distance
        dx.max(dy) + (SQRT2 - 1.0) * dx.min(dy)
    };

    let mut g_score = vec![f64::INFINITY; (w * h) as usize];
    let mut came_from: Vec<Option<(i64, i64)>> = vec![None; (w * h) as usize];
    let mut open = BinaryHeap::new();
    g_score[idx(start)] = 0.0;
    open.push(QueueEntry { f: heuristic(start), g: 0.0, cell: start });

    const STEPS: [(i64, i64); 8] =
        [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

    while let Some(QueueEntry { g, cell, .. }) = open.pop() {
        if g > g_score[idx(cell)] {
            continue;
        }
        if cell == goal {
            let mut path = vec![map.cell_center(cell.0, cell.1)];
            let mut cur = cell;
            while let Some(prev) = came_from[idx(cur)] {
                path.push(map.cell_center(prev.0, prev.1));
                cur = prev;
            }
            path.reverse();
            return Some(path);
        }
        for (dx, dy) in STEPS {
            let next = (cell.0 + dx, cell.1 + dy);
            if map.cell(next.0, next.1) != Some(Cell::Free) {
                continue;
            }
            if dx != 0 && dy != 0 {
                // no corner cutting
                if map.cell(cell.0 + dx, cell.1) != Some(Cell::Free)
                    || map.cell(cell.0, cell.1 + dy) != Some(Cell::Free)
                {
                    continue;
                }
            }
            let cost = if dx != 0 && dy != 0 { SQRT2 } else { 1.0 };
            let tentative = g + cost;
            if tentative < g_score[idx(next)] {
                g_score[idx(next)] = tentative;
                came_from[idx(next)] = Some(cell);
                open.push(QueueEntry { f: tentative + heuristic(next), g: tentative, cell: next });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_map(n: usize, res: f64) -> OccupancyGrid {
        let mut g = OccupancyGrid::new_unknown(n, n, res, Point::new(0.0, 0.0));
        for iy in 0..n as i64 {
            for ix in 0..n as i64 {
                g.set_cell(ix, iy, Cell::Free);
            }
        }
        g
    }

    fn path_length(path: &[Point]) -> f64 {
        path.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// Plain Dijkstra oracle (no heuristic) for path length.
    fn dijkstra_len(map: &OccupancyGrid, from: Point, to: Point) -> Option<f64> {
        let start = map.cell_index(from)?;
        let goal = map.cell_index(to)?;
        let w = map.width() as i64;
        let mut dist = vec![f64::INFINITY; map.width() * map.height()];
        let idx = |c: (i64, i64)| (c.1 * w + c.0) as usize;
        dist[idx(start)] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(QueueEntry { f: 0.0, g: 0.0, cell: start });
        while let Some(QueueEntry { g, cell, .. }) = heap.pop() {
            if g > dist[idx(cell)] {
                continue;
            }
            if cell == goal {
                return Some(g * map.resolution());
            }
            for (dx, dy) in
                [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
            {
                let next = (cell.0 + dx, cell.1 + dy);
                if map.cell(next.0, next.1) != Some(Cell::Free) {
                    continue;
                }
                if dx != 0
                    && dy != 0
                    && (map.cell(cell.0 + dx, cell.1) != Some(Cell::Free)
                        || map.cell(cell.0, cell.1 + dy) != Some(Cell::Free))
                {
                    continue;
                }
                let cost = if dx != 0 && dy != 0 { SQRT2 } else { 1.0 };
                if g + cost < dist[idx(next)] {
                    dist[idx(next)] = g + cost;
                    heap.push(QueueEntry { f: g + cost, g: g + cost, cell: next });
                }
            }
        }
        None
    }

    #[test]
    fn identity_path() {
        let map = free_map(10, 0.5);
        let p = Point::new(2.1, 2.1);
        let path = plan_path(&map, p, p).unwrap();
        assert_eq!(path.len(), 1);
    }

    #[test]
    fn straight_corridor_length() {
        let map = free_map(40, 0.5);
        let from = map.cell_center(2, 10);
        let to = map.cell_center(30, 10);
        let path = plan_path(&map, from, to).unwrap();
        let euclid = from.distance(to);
        assert!((path_length(&path) - euclid).abs() <= SQRT2 * 0.5, "len {}", path_length(&path));
        let oracle = dijkstra_len(&map, from, to).unwrap();
        assert!((path_length(&path) - oracle).abs() < 1e-9);
    }

    #[test]
    fn diagonal_matches_dijkstra() {
        let mut map = free_map(40, 0.5);
        // an L-shaped wall to route around
        for k in 5..25 {
            map.set_cell(20, k, Cell::Occupied);
        }
        let from = map.cell_center(5, 10);
        let to = map.cell_center(35, 10);
        let path = plan_path(&map, from, to).unwrap();
        let oracle = dijkstra_len(&map, from, to).unwrap();
        assert!((path_length(&path) - oracle).abs() < 1e-9);
        // every step lands on a free cell
        for p in &path {
            assert_eq!(map.cell_at(*p), Some(Cell::Free));
        }
    }

    #[test]
    fn walled_goal_unreachable() {
        let mut map = free_map(20, 0.5);
        for k in 0..20 {
            map.set_cell(10, k, Cell::Occupied);
        }
        assert!(plan_path(&map, map.cell_center(2, 2), map.cell_center(15, 2)).is_none());
    }
}
