//! Minimal 2D kd-tree over points with payload ids.
//!
//! Supports incremental insertion and nearest-neighbor queries. Points arrive
//! in random order (RRT samples), which keeps the unbalanced insertion tree
//! close to logarithmic depth in practice.

use crate::geometry::Point;

#[derive(Debug, Clone)]
struct KdNode {
    point: Point,
    id: usize,
    left: Option<usize>,
    right: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct KdTree {
    nodes: Vec<KdNode>,
}

impl KdTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn insert(&mut self, point: Point, id: usize) {
        let new_idx = self.nodes.len();
        self.nodes.push(KdNode { point, id, left: None, right: None });
        if new_idx == 0 {
            return;
        }
        let mut cur = 0usize;
        let mut axis = 0u8;
        loop {
            let go_left = if axis == 0 {
                point.x < self.nodes[cur].point.x
            } else {
                point.y < self.nodes[cur].point.y
            };
            let slot = if go_left { self.nodes[cur].left } else { self.nodes[cur].right };
            match slot {
                Some(next) => cur = next,
                None => {
                    if go_left {
                        self.nodes[cur].left = Some(new_idx);
                    } else {
                        self.nodes[cur].right = Some(new_idx);
                    }
                    return;
                }
            }
            axis ^= 1;
        }
    }

    /// Nearest stored point to `query`, as `(point, id, distance)`.
    /// Ties resolve to the first-inserted node encountered on the search path,
    /// which is deterministic for a fixed insertion order.
    pub fn nearest(&self, query: Point) -> Option<(Point, usize, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best_idx = 0usize;
        let mut best_d2 = f64::INFINITY;
        self.search(0, 0, query, &mut best_idx, &mut best_d2);
        let n = &self.nodes[best_idx];
        Some((n.point, n.id, best_d2.sqrt()))
    }

    fn search(&self, idx: usize, axis: u8, query: Point, best_idx: &mut usize, best_d2: &mut f64) {
        let node = &self.nodes[idx];
        let dx = query.x - node.point.x;
        let dy = query.y - node.point.y;
        let d2 = dx * dx + dy * dy;
        if d2 < *best_d2 {
            *best_d2 = d2;
            *best_idx = idx;
        }
        let delta = if axis == 0 { dx } else { dy };
        let (near, far) = if delta < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        if let Some(n) = near {
            self.search(n, axis ^ 1, query, best_idx, best_d2);
        }
        if let Some(f) = far {
            if delta * delta < *best_d2 {
                self.search(f, axis ^ 1, query, best_idx, best_d2);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nearest_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut tree = KdTree::new();
        let mut pts = Vec::new();
        for id in 0..500 {
            let p = Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
            tree.insert(p, id);
            pts.push(p);
        }
        for _ in 0..1000 {
            let q = Point::new(rng.gen_range(-10.0..110.0), rng.gen_range(-10.0..110.0));
            let (_, id, d) = tree.nearest(q).unwrap();
            let (lin_id, lin_d) = pts
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.distance(q)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!((d - lin_d).abs() < 1e-12);
            assert_eq!(pts[id].distance(q), pts[lin_id].distance(q));
        }
    }

    #[test]
    fn empty_tree_has_no_nearest() {
        assert!(KdTree::new().nearest(Point::new(0.0, 0.0)).is_none());
    }
}
