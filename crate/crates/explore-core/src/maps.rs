//! Bundled desk-scale scenario maps, generated deterministically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RES: f64 = 0.25;

/// Occupied/free raster under construction, in map meters.
struct MapBuilder {
    width: usize,
    height: usize,
    res: f64,
    // true = occupied
    cells: Vec<bool>,
}

impl MapBuilder {
    fn filled(width_m: f64, height_m: f64, res: f64) -> Self {
        let width = (width_m / res).round() as usize;
        let height = (height_m / res).round() as usize;
        Self { width, height, res, cells: vec![true; width * height] }
    }

    fn set_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, occupied: bool) {
        let ix0 = ((x0 / self.res).floor().max(0.0)) as usize;
        let iy0 = ((y0 / self.res).floor().max(0.0)) as usize;
        let ix1 = ((x1 / self.res).ceil() as usize).min(self.width);
        let iy1 = ((y1 / self.res).ceil() as usize).min(self.height);
        for iy in iy0..iy1 {
            for ix in ix0..ix1 {
                self.cells[iy * self.width + ix] = occupied;
            }
        }
    }

    fn carve(&mut self, x0: f64, y0: f64, x1: f64, y1: f64) {
        self.set_rect(x0, y0, x1, y1, false);
    }

    fn wall(&mut self, x0: f64, y0: f64, x1: f64, y1: f64) {
        self.set_rect(x0, y0, x1, y1, true);
    }

    fn border(&mut self, thickness: f64) {
        let w = self.width as f64 * self.res;
        let h = self.height as f64 * self.res;
        self.wall(0.0, 0.0, w, thickness);
        self.wall(0.0, h - thickness, w, h);
        self.wall(0.0, 0.0, thickness, h);
        self.wall(w - thickness, 0.0, w, h);
    }

    /// Ground-truth map text; row 0 of the output is the top of the map.
    fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.width, self.height, self.res);
        for file_row in 0..self.height {
            let iy = self.height - 1 - file_row;
            for ix in 0..self.width {
                out.push(if self.cells[iy * self.width + ix] { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

/// Narrow indoor passages with side rooms, 50x50 m.
pub fn corridors() -> String {
    let mut m = MapBuilder::filled(50.0, 50.0, RES);
    // corridor grid, 5 m wide
    for &c in &[5.0, 22.5, 40.0] {
        m.carve(1.0, c, 49.0, c + 5.0); // horizontal
        m.carve(c, 1.0, c + 5.0, 49.0); // vertical
    }
    // side rooms off the corridors, 2.5 m doorways
    m.carve(12.0, 12.0, 20.0, 20.0);
    m.carve(15.0, 10.0, 17.5, 12.0); // door to lower corridor
    m.carve(30.0, 12.0, 38.0, 20.0);
    m.carve(33.0, 10.0, 35.5, 12.0);
    m.carve(12.0, 30.0, 20.0, 38.0);
    m.carve(15.0, 28.0, 17.5, 30.0);
    m.carve(30.0, 30.0, 38.0, 38.0);
    m.carve(33.0, 28.0, 35.5, 30.0);
    m.border(1.0);
    m.to_text()
}

/// Scattered point obstacles in an open field, 60x60 m.
pub fn forest() -> String {
    let mut m = MapBuilder::filled(60.0, 60.0, RES);
    m.carve(0.5, 0.5, 59.5, 59.5);
    m.border(0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(0x464f5245); // fixed layout
    let mut placed = 0;
    while placed < 140 {
        let x: f64 = rng.gen_range(2.0..57.0);
        let y: f64 = rng.gen_range(2.0..57.0);
        // keep the start area clear
        if (x - 30.0).abs() < 3.0 && (y - 30.0).abs() < 3.0 {
            continue;
        }
        m.wall(x, y, x + 0.75, y + 0.75);
        placed += 1;
    }
    m.to_text()
}

/// Four large rooms with pillar grids and door gaps, 60x60 m.
pub fn garage() -> String {
    let mut m = MapBuilder::filled(60.0, 60.0, RES);
    m.carve(1.0, 1.0, 59.0, 59.0);
    m.border(1.0);
    // cross walls with 4 m doorways at the quarter points
    m.wall(29.75, 1.0, 30.25, 59.0);
    m.wall(1.0, 29.75, 59.0, 30.25);
    for &c in &[15.0, 45.0] {
        m.carve(29.75, c - 2.0, 30.25, c + 2.0);
        m.carve(c - 2.0, 29.75, c + 2.0, 30.25);
    }
    // pillar grid, 0.5 m pillars every 6 m
    let mut x = 6.0f64;
    while x < 58.0 {
        let mut y = 6.0f64;
        while y < 58.0 {
            if (x - 30.0).abs() > 2.0 && (y - 30.0).abs() > 2.0 {
                m.wall(x, y, x + 0.5, y + 0.5);
            }
            y += 6.0;
        }
        x += 6.0;
    }
    m.to_text()
}

/// Block maze, 50x50 m: 8x8 maze cells, ~2.9 m passages and walls.
pub fn maze() -> String {
    const M: usize = 8;
    let blocks = 2 * M + 1; // 17
    let block = 50.0 / blocks as f64;
    let mut m = MapBuilder::filled(50.0, 50.0, RES);

    // recursive backtracker over the MxM cell lattice
    let mut visited = [[false; M]; M];
    let mut open_h = [[false; M]; M]; // passage east of (cx, cy)
    let mut open_v = [[false; M]; M]; // passage north of (cx, cy)
    let mut stack = vec![(0usize, 0usize)];
    visited[0][0] = true;
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d415a45);
    while let Some(&(cx, cy)) = stack.last() {
        let mut neighbors = Vec::new();
        if cx + 1 < M && !visited[cy][cx + 1] {
            neighbors.push((cx + 1, cy));
        }
        if cx > 0 && !visited[cy][cx - 1] {
            neighbors.push((cx - 1, cy));
        }
        if cy + 1 < M && !visited[cy + 1][cx] {
            neighbors.push((cx, cy + 1));
        }
        if cy > 0 && !visited[cy - 1][cx] {
            neighbors.push((cx, cy - 1));
        }
        if neighbors.is_empty() {
            stack.pop();
            continue;
        }
        let (nx, ny) = neighbors[rng.gen_range(0..neighbors.len())];
        visited[ny][nx] = true;
        if nx > cx {
            open_h[cy][cx] = true;
        } else if nx < cx {
            open_h[ny][nx] = true;
        } else if ny > cy {
            open_v[cy][cx] = true;
        } else {
            open_v[ny][nx] = true;
        }
        stack.push((nx, ny));
    }

    let carve_block = |m: &mut MapBuilder, bx: usize, by: usize| {
        m.carve(bx as f64 * block, by as f64 * block, (bx + 1) as f64 * block, (by + 1) as f64 * block);
    };
    for cy in 0..M {
        for cx in 0..M {
            carve_block(&mut m, 2 * cx + 1, 2 * cy + 1);
            if open_h[cy][cx] {
                carve_block(&mut m, 2 * cx + 2, 2 * cy + 1);
            }
            if open_v[cy][cx] {
                carve_block(&mut m, 2 * cx + 1, 2 * cy + 2);
            }
        }
    }
    m.to_text()
}

/// One bundled scenario: map text plus its default run configuration.
pub struct Scenario {
    pub name: &'static str,
    pub map_text: String,
    pub config_text: String,
}

/// The three benchmark scenarios plus the completeness maze.
pub fn bundled() -> Vec<Scenario> {
    let block = 50.0 / 17.0;
    let maze_start = 1.5 * block;
    vec![
        Scenario {
            name: "corridors",
            map_text: corridors(),
            config_text: "\
theta = 1.0
tau = 1000
max_range = 9.0
half_extent = 15.0
start_x = 7.5
start_y = 7.5
"
            .into(),
        },
        Scenario {
            name: "forest",
            map_text: forest(),
            config_text: "\
theta = 0.4
tau = 600
max_range = 15.0
half_extent = 15.0
start_x = 30.0
start_y = 30.0
"
            .into(),
        },
        Scenario {
            name: "garage",
            map_text: garage(),
            config_text: "\
theta = 1.0
tau = 1000
max_range = 10.0
half_extent = 15.0
start_x = 15.0
start_y = 15.0
"
            .into(),
        },
        Scenario {
            name: "maze",
            map_text: maze(),
            config_text: format!(
                "theta = 1.0\ntau = 1000\nmax_range = 10.0\nhalf_extent = 15.0\nstart_x = {maze_start}\nstart_y = {maze_start}\n"
            ),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::occupancy::{Cell, OccupancyGrid};

    #[test]
    fn bundled_maps_load_and_starts_are_free() {
        for sc in bundled() {
            let truth = OccupancyGrid::load_ground_truth(&sc.map_text).unwrap();
            let parsed = crate::config::parse(&sc.config_text).unwrap();
            let mut cfg = crate::sim::RunConfig::default();
            parsed.run.apply(&mut cfg).unwrap();
            let start = cfg.start.expect("scenario config sets a start");
            assert_eq!(truth.cell_at(start), Some(Cell::Free), "{} start blocked", sc.name);
            // borders are sealed
            let b = truth.bounds();
            for ix in 0..truth.width() as i64 {
                assert_eq!(truth.cell(ix, 0), Some(Cell::Occupied), "{}", sc.name);
                assert_eq!(truth.cell(ix, truth.height() as i64 - 1), Some(Cell::Occupied));
            }
            for iy in 0..truth.height() as i64 {
                assert_eq!(truth.cell(0, iy), Some(Cell::Occupied));
                assert_eq!(truth.cell(truth.width() as i64 - 1, iy), Some(Cell::Occupied));
            }
            assert!(b.area() <= 100.0 * 100.0 + 1e-9);
        }
    }

    #[test]
    fn maps_are_deterministic() {
        assert_eq!(forest(), forest());
        assert_eq!(maze(), maze());
    }

    #[test]
    fn maze_start_cell_is_connected() {
        let truth = OccupancyGrid::load_ground_truth(&maze()).unwrap();
        let block = 50.0 / 17.0;
        let start = Point::new(1.5 * block, 1.5 * block);
        assert_eq!(truth.cell_at(start), Some(Cell::Free));
        // all maze cells reachable: path to the far corner exists
        let goal = Point::new(15.5 * block, 15.5 * block);
        assert!(crate::planner::plan_path(&truth, start, goal).is_some());
    }
}
