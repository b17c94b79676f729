//! 2D autonomous-exploration simulator with an adaptive sliding-window
//! frontier detector.
//!
//! The library simulates a lidar-equipped robot exploring an occupancy grid.
//! Frontier detection grows an RRT forest inside a detection window that
//! either slides with the robot's current scan footprint (`adaptive`) or
//! stays a fixed-size square around the robot (`baseline`). The adaptive
//! detector splits each window into the region it shares with the previous
//! window and the newly revealed rest, then allocates sampling between the
//! two so node density stays even instead of piling up where windows overlap.

pub mod bench;
pub mod config;
pub mod detector;
pub mod geometry;
pub mod kdtree;
pub mod lidar;
pub mod maps;
pub mod occupancy;
pub mod planner;
pub mod plot;
pub mod sampler;
pub mod sim;
pub mod window;

pub use geometry::{Point, Rect};
pub use occupancy::{Cell, OccupancyGrid};
pub use sim::{run, DetectorKind, RunConfig, RunResult, Termination};
