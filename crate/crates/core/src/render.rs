//! Map images: an 8-bit graymap raster and a vector drawing.
//!
//! Both outputs are pure functions of their inputs, so identical maps give
//! byte-identical files.

use std::fmt::Write as _;

use crate::geometry::{Point2D, RoomLayout};
use crate::mapping::{obstacle_mask, CellState, OccupancyGrid};

pub const EXPLORED: u8 = 255;
pub const UNEXPLORED: u8 = 150;
/// Table cell still unexplored (correctly mapped).
pub const TABLE_UNEXPLORED: u8 = 70;
/// Table cell that was carved away.
pub const TABLE_EXPLORED: u8 = 210;
pub const ANTENNA: u8 = 0;

/// Row 0 of the raster is the top of the room (largest y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Binary portable graymap (`P5`).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// One pixel per grid cell, with tables overlaid and antenna cells marked.
pub fn render_grid(grid: &OccupancyGrid, layout: &RoomLayout, antennas: &[Point2D]) -> GrayImage {
    let mask = obstacle_mask(grid, layout);
    let (w, h) = (grid.nx, grid.ny);
    let mut pixels = vec![0u8; w * h];
    for iy in 0..h {
        let row = h - 1 - iy;
        for ix in 0..w {
            let explored = grid.get(ix, iy) == CellState::Explored;
            pixels[row * w + ix] = match (mask[iy * w + ix], explored) {
                (false, true) => EXPLORED,
                (false, false) => UNEXPLORED,
                (true, false) => TABLE_UNEXPLORED,
                (true, true) => TABLE_EXPLORED,
            };
        }
    }
    for a in antennas {
        let ix = ((a.x / grid.cell_size) as usize).min(w - 1);
        let iy = ((a.y / grid.cell_size) as usize).min(h - 1);
        pixels[(h - 1 - iy) * w + ix] = ANTENNA;
    }
    GrayImage {
        width: w,
        height: h,
        pixels,
    }
}

/// Vector drawing of the map in room coordinates (1 unit = 1 m, y up).
///
/// Explored cells are merged into horizontal runs. Antennas are drawn red
/// when judged LoS and blue otherwise; with no decisions they are black.
pub fn render_svg(
    grid: &OccupancyGrid,
    layout: &RoomLayout,
    antennas: &[Point2D],
    los: Option<&[bool]>,
    terminal: Option<Point2D>,
) -> String {
    let (w, l) = (layout.width, layout.length);
    let cs = grid.cell_size;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-0.5 -0.5 {:.3} {:.3}" width="{}" height="{}">"#,
        w + 1.0,
        l + 1.0,
        ((w + 1.0) * 20.0).round() as i64,
        ((l + 1.0) * 20.0).round() as i64,
    );
    // flip so that y grows upwards
    let _ = writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {l:.3})">"#);
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{w:.3}" height="{l:.3}" fill="#969696"/>"##
    );
    for iy in 0..grid.ny {
        let mut ix = 0;
        while ix < grid.nx {
            if grid.get(ix, iy) != CellState::Explored {
                ix += 1;
                continue;
            }
            let start = ix;
            while ix < grid.nx && grid.get(ix, iy) == CellState::Explored {
                ix += 1;
            }
            let x0 = start as f64 * cs;
            let x1 = (ix as f64 * cs).min(w);
            let y0 = iy as f64 * cs;
            let y1 = ((iy + 1) as f64 * cs).min(l);
            let _ = writeln!(
                s,
                r##"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="#ffffff"/>"##,
                x1 - x0,
                y1 - y0
            );
        }
    }
    for ob in &layout.obstacles {
        let _ = writeln!(
            s,
            r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#000000" stroke-width="0.08"/>"##,
            ob.min_corner.x,
            ob.min_corner.y,
            ob.max_corner.x - ob.min_corner.x,
            ob.max_corner.y - ob.min_corner.y
        );
    }
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{w:.3}" height="{l:.3}" fill="none" stroke="#000000" stroke-width="0.05"/>"##
    );
    let side = (0.6 * layout.perimeter() / antennas.len().max(1) as f64).min(0.3);
    for (i, a) in antennas.iter().enumerate() {
        let color = match los.map(|bits| bits[i]) {
            Some(true) => "#d62728",
            Some(false) => "#1f77b4",
            None => "#000000",
        };
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{side:.3}" height="{side:.3}" fill="{color}"/>"#,
            a.x - side / 2.0,
            a.y - side / 2.0
        );
    }
    if let Some(mt) = terminal {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.3}" cy="{:.3}" r="0.25" fill="#2ca02c"/>"##,
            mt.x, mt.y
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
