//! Occupancy grid carved from LoS links.
//!
//! For one terminal position the room is split into `M` fan regions, one per
//! antenna. Region `m` has its apex at the terminal and its far side on the
//! wall, running from the arclength midpoint between antennas `m - 1` and
//! `m` to the midpoint between `m` and `m + 1`, with any room corner in that
//! span inserted as a vertex. The fans tile the room exactly. A region is
//! marked explored when its antenna's link is LoS; whatever is never explored
//! is the map's estimate of where the obstacles are.

use crate::error::{Error, Result};
use crate::geometry::{AntennaArray, Point2D, RoomLayout};

#[derive(Debug, Clone, PartialEq)]
pub struct FanRegion {
    pub apex: Point2D,
    /// Wall points in increasing arclength order.
    pub boundary_chain: Vec<Point2D>,
}

impl FanRegion {
    /// Vertices in counterclockwise order, apex first.
    pub fn polygon(&self) -> impl Iterator<Item = Point2D> + '_ {
        std::iter::once(self.apex).chain(self.boundary_chain.iter().copied())
    }

    /// Signed shoelace area; positive for a valid region.
    pub fn area(&self) -> f64 {
        let pts: Vec<Point2D> = self.polygon().collect();
        shoelace(&pts)
    }
}

pub(crate) fn shoelace(pts: &[Point2D]) -> f64 {
    let n = pts.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        acc += a.x * b.y - b.x * a.y;
    }
    acc / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellState {
    Unexplored,
    Explored,
}

/// Explored/unexplored raster over the room, row-major with row 0 at `y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub cell_size: f64,
    pub nx: usize,
    pub ny: usize,
    width: f64,
    length: f64,
    cells: Vec<CellState>,
}

impl OccupancyGrid {
    pub fn get(&self, ix: usize, iy: usize) -> CellState {
        self.cells[iy * self.nx + ix]
    }

    pub fn cells(&self) -> &[CellState] {
        &self.cells
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2D {
        Point2D::new(
            (ix as f64 + 0.5) * self.cell_size,
            (iy as f64 + 0.5) * self.cell_size,
        )
    }

    /// Whether the cell's center lies inside the room. Only the last column
    /// or row can fall outside, when the cell size does not divide the room.
    pub fn in_room(&self, ix: usize, iy: usize) -> bool {
        let c = self.cell_center(ix, iy);
        c.x < self.width && c.y < self.length
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_size * self.cell_size
    }

    pub fn explored_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == CellState::Explored).count()
    }

    pub fn unexplored_area(&self) -> f64 {
        let mut n = 0usize;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if self.get(ix, iy) == CellState::Unexplored && self.in_room(ix, iy) {
                    n += 1;
                }
            }
        }
        n as f64 * self.cell_area()
    }

    fn set_explored(&mut self, ix: usize, iy: usize) {
        self.cells[iy * self.nx + ix] = CellState::Explored;
    }
}

/// Fresh grid with every cell unexplored.
pub fn init_grid(layout: &RoomLayout, cell_size: f64) -> Result<OccupancyGrid> {
    if !(cell_size > 0.0 && cell_size.is_finite()) {
        return Err(Error::invalid(format!("cell size must be positive, got {cell_size}")));
    }
    // tolerate representation error, e.g. 15 / 0.1 = 150.00000000000003
    let count = |extent: f64| ((extent / cell_size) - 1e-9).ceil().max(1.0) as usize;
    let (nx, ny) = (count(layout.width), count(layout.length));
    Ok(OccupancyGrid {
        cell_size,
        nx,
        ny,
        width: layout.width,
        length: layout.length,
        cells: vec![CellState::Unexplored; nx * ny],
    })
}

/// One fan region per antenna for a terminal strictly inside the room.
pub fn fan_regions(mt: Point2D, array: &AntennaArray, layout: &RoomLayout) -> Result<Vec<FanRegion>> {
    if !layout.is_strictly_inside(mt) {
        return Err(Error::invalid(format!(
            "terminal ({}, {}) must be strictly inside the room",
            mt.x, mt.y
        )));
    }
    let m = array.len();
    let perimeter = layout.perimeter();
    let cut = |i: usize| if i == m { perimeter } else { i as f64 * perimeter / m as f64 };
    let corners = layout.corner_arclengths();
    let regions = (0..m)
        .map(|i| {
            let (start, end) = (cut(i), cut(i + 1));
            let mut chain = vec![layout.point_at_arclength(start)];
            // the corner at arclength 0 is reached again at the perimeter
            for c in corners.iter().copied().chain(std::iter::once(perimeter)) {
                if c > start && c < end {
                    chain.push(layout.point_at_arclength(c));
                }
            }
            chain.push(layout.point_at_arclength(end));
            FanRegion {
                apex: mt,
                boundary_chain: chain,
            }
        })
        .collect();
    Ok(regions)
}

/// Marks every cell whose center lies inside the region as explored.
///
/// Scanline fill: each row's center line is intersected with the polygon
/// edges, half-open in y, and cells with `x0 <= center < x1` are set. A
/// center on an edge shared by two adjacent regions goes to exactly one of
/// them, so carving every region of a location leaves no seams.
pub fn carve(grid: &mut OccupancyGrid, region: &FanRegion) {
    let pts: Vec<Point2D> = region.polygon().collect();
    if pts.len() < 3 || region.area() <= 0.0 {
        return;
    }
    let cs = grid.cell_size;
    let (ymin, ymax) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
    let first_row = ((ymin / cs - 0.5).floor().max(0.0)) as usize;
    let last_row = ((ymax / cs - 0.5).ceil().max(0.0) as usize).min(grid.ny.saturating_sub(1));

    let mut xs: Vec<f64> = Vec::with_capacity(pts.len());
    for iy in first_row..=last_row {
        let y = (iy as f64 + 0.5) * cs;
        if y <= ymin || y >= ymax {
            continue;
        }
        xs.clear();
        for i in 0..pts.len() {
            let (mut a, mut b) = (pts[i], pts[(i + 1) % pts.len()]);
            // order by y so regions sharing an edge get bit-identical crossings
            if b.y < a.y || (b.y == a.y && b.x < a.x) {
                std::mem::swap(&mut a, &mut b);
            }
            if a.y <= y && y < b.y {
                xs.push(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let (x0, x1) = (pair[0], pair[1]);
            // half-open [x0, x1): a center on a shared edge belongs to one side
            let mut ix = (x0 / cs - 0.5).floor().max(0.0) as usize;
            while ix < grid.nx && (ix as f64 + 0.5) * cs < x0 {
                ix += 1;
            }
            while ix < grid.nx && (ix as f64 + 0.5) * cs < x1 {
                grid.set_explored(ix, iy);
                ix += 1;
            }
        }
    }
}

/// Carves the fan region of every antenna whose link was judged LoS.
pub fn update_with_location(
    grid: &mut OccupancyGrid,
    mt: Point2D,
    array: &AntennaArray,
    layout: &RoomLayout,
    b_hat: &[bool],
) -> Result<()> {
    if b_hat.len() != array.len() {
        return Err(Error::invalid(format!(
            "got {} LoS decisions for {} antennas",
            b_hat.len(),
            array.len()
        )));
    }
    let regions = fan_regions(mt, array, layout)?;
    for (region, _) in regions.iter().zip(b_hat).filter(|(_, &los)| los) {
        carve(grid, region);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapMetrics {
    /// Percent.
    pub iou: f64,
    pub unexplored_area: f64,
    pub intersection_area: f64,
    pub union_area: f64,
}

/// Cells (by center) covered by an obstacle interior.
pub fn obstacle_mask(grid: &OccupancyGrid, layout: &RoomLayout) -> Vec<bool> {
    let mut mask = vec![false; grid.nx * grid.ny];
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let c = grid.cell_center(ix, iy);
            mask[iy * grid.nx + ix] = layout.obstacles.iter().any(|ob| ob.contains_interior(c));
        }
    }
    mask
}

/// IoU between the unexplored cells and the obstacle footprint, in percent.
///
/// When both sets are empty the map agrees perfectly with the room and the
/// score is 100.
pub fn compute_iou(grid: &OccupancyGrid, layout: &RoomLayout) -> MapMetrics {
    let mask = obstacle_mask(grid, layout);
    let (mut unexplored, mut inter, mut union) = (0usize, 0usize, 0usize);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            if !grid.in_room(ix, iy) {
                continue;
            }
            let open = grid.get(ix, iy) == CellState::Unexplored;
            let table = mask[iy * grid.nx + ix];
            unexplored += open as usize;
            inter += (open && table) as usize;
            union += (open || table) as usize;
        }
    }
    let iou = if union == 0 {
        100.0
    } else {
        100.0 * inter as f64 / union as f64
    };
    let a = grid.cell_area();
    MapMetrics {
        iou,
        unexplored_area: unexplored as f64 * a,
        intersection_area: inter as f64 * a,
        union_area: union as f64 * a,
    }
}
