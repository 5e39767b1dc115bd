//! Indoor scene geometry: the room, its rectangular obstacles, the
//! perimeter antenna array and ground-truth line-of-sight visibility.
//!
//! The room occupies `[0, width] x [0, length]`. Positions along the walls
//! are addressed by counterclockwise arclength starting at the origin corner,
//! so the bottom wall covers `[0, width)`, the right wall
//! `[width, width + length)` and so on around to the left wall.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of rejection attempts when sampling a terminal position.
pub const REJECTION_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point2D {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

/// Euclidean distance between two points.
pub fn distance(a: Point2D, b: Point2D) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Axis-aligned rectangular obstacle (a table, in the default scene).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectObstacle {
    pub min_corner: Point2D,
    pub max_corner: Point2D,
}

impl RectObstacle {
    pub fn new(min_corner: Point2D, max_corner: Point2D) -> Result<Self> {
        if !min_corner.is_finite() || !max_corner.is_finite() {
            return Err(Error::invalid("obstacle corners must be finite"));
        }
        if min_corner.x >= max_corner.x || min_corner.y >= max_corner.y {
            return Err(Error::invalid(format!(
                "obstacle min corner ({}, {}) must be strictly below max corner ({}, {})",
                min_corner.x, min_corner.y, max_corner.x, max_corner.y
            )));
        }
        Ok(Self {
            min_corner,
            max_corner,
        })
    }

    pub fn area(&self) -> f64 {
        (self.max_corner.x - self.min_corner.x) * (self.max_corner.y - self.min_corner.y)
    }

    /// Open-interior membership; boundary points are outside.
    pub fn contains_interior(&self, p: Point2D) -> bool {
        p.x > self.min_corner.x
            && p.x < self.max_corner.x
            && p.y > self.min_corner.y
            && p.y < self.max_corner.y
    }

    /// Closed membership; boundary points are inside.
    pub fn contains_closed(&self, p: Point2D) -> bool {
        p.x >= self.min_corner.x
            && p.x <= self.max_corner.x
            && p.y >= self.min_corner.y
            && p.y <= self.max_corner.y
    }

    fn interiors_overlap(&self, other: &RectObstacle) -> bool {
        self.min_corner.x < other.max_corner.x
            && other.min_corner.x < self.max_corner.x
            && self.min_corner.y < other.max_corner.y
            && other.min_corner.y < self.max_corner.y
    }

    /// Whether the open segment `a -> b` passes through the open interior.
    ///
    /// Slab clipping with open intervals: a segment that only touches an edge
    /// or a corner yields an empty parameter interval and is not blocked.
    pub fn blocks_segment(&self, a: Point2D, b: Point2D) -> bool {
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        for (start, delta, min, max) in [
            (a.x, b.x - a.x, self.min_corner.x, self.max_corner.x),
            (a.y, b.y - a.y, self.min_corner.y, self.max_corner.y),
        ] {
            if delta == 0.0 {
                if start <= min || start >= max {
                    return false;
                }
                continue;
            }
            let t0 = (min - start) / delta;
            let t1 = (max - start) / delta;
            let (enter, exit) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
            lo = lo.max(enter);
            hi = hi.min(exit);
            if lo >= hi {
                return false;
            }
        }
        lo < hi
    }
}

/// Rectangular room with axis-aligned obstacles: the ground truth being mapped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomLayout {
    pub width: f64,
    pub length: f64,
    pub obstacles: Vec<RectObstacle>,
}

impl RoomLayout {
    /// Validates dimensions, containment and pairwise non-overlap.
    pub fn new(width: f64, length: f64, obstacles: Vec<RectObstacle>) -> Result<Self> {
        if !(width.is_finite() && width > 0.0 && length.is_finite() && length > 0.0) {
            return Err(Error::invalid(format!(
                "room dimensions must be positive, got {width} x {length}"
            )));
        }
        for (i, ob) in obstacles.iter().enumerate() {
            if ob.min_corner.x <= 0.0
                || ob.min_corner.y <= 0.0
                || ob.max_corner.x >= width
                || ob.max_corner.y >= length
            {
                return Err(Error::invalid(format!(
                    "obstacle {i} is not strictly inside the {width} x {length} room"
                )));
            }
            for (j, other) in obstacles.iter().enumerate().skip(i + 1) {
                if ob.interiors_overlap(other) {
                    return Err(Error::invalid(format!("obstacles {i} and {j} overlap")));
                }
            }
        }
        Ok(Self {
            width,
            length,
            obstacles,
        })
    }

    pub fn empty(width: f64, length: f64) -> Result<Self> {
        Self::new(width, length, Vec::new())
    }

    /// The 15 m x 25 m office with five 2 m x 4 m tables.
    ///
    /// Table placement is a configuration default, not measured data.
    pub fn office() -> Self {
        let tables = default_tables()
            .iter()
            .map(|&(x0, y0, x1, y1)| RectObstacle {
                min_corner: Point2D::new(x0, y0),
                max_corner: Point2D::new(x1, y1),
            })
            .collect();
        Self::new(15.0, 25.0, tables).expect("default office layout is valid")
    }

    pub fn area(&self) -> f64 {
        self.width * self.length
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.width + self.length)
    }

    pub fn obstacle_area(&self) -> f64 {
        self.obstacles.iter().map(RectObstacle::area).sum()
    }

    pub fn is_strictly_inside(&self, p: Point2D) -> bool {
        p.x > 0.0 && p.x < self.width && p.y > 0.0 && p.y < self.length
    }

    pub fn in_any_obstacle(&self, p: Point2D) -> bool {
        self.obstacles.iter().any(|ob| ob.contains_closed(p))
    }

    /// Strictly inside the room and strictly outside every obstacle.
    pub fn is_free(&self, p: Point2D) -> bool {
        self.is_strictly_inside(p) && !self.in_any_obstacle(p)
    }

    /// Point on the wall at counterclockwise arclength `s` (taken modulo
    /// the perimeter).
    pub fn point_at_arclength(&self, s: f64) -> Point2D {
        let (w, l) = (self.width, self.length);
        let s = s.rem_euclid(self.perimeter());
        if s < w {
            Point2D::new(s, 0.0)
        } else if s < w + l {
            Point2D::new(w, s - w)
        } else if s < 2.0 * w + l {
            Point2D::new(w - (s - w - l), l)
        } else {
            Point2D::new(0.0, l - (s - 2.0 * w - l))
        }
    }

    /// Arclength positions of the four room corners, starting at the origin.
    pub fn corner_arclengths(&self) -> [f64; 4] {
        let (w, l) = (self.width, self.length);
        [0.0, w, w + l, 2.0 * w + l]
    }

    /// Whether `p` satisfies the boundary equation of the room rectangle.
    pub fn on_boundary(&self, p: Point2D) -> bool {
        let on_x = (p.x == 0.0 || p.x == self.width) && (0.0..=self.length).contains(&p.y);
        let on_y = (p.y == 0.0 || p.y == self.length) && (0.0..=self.width).contains(&p.x);
        on_x || on_y
    }
}

/// `(min_x, min_y, max_x, max_y)` of the default tables.
fn default_tables() -> [(f64, f64, f64, f64); 5] {
    [
        (2.5, 4.0, 4.5, 8.0),
        (6.5, 4.0, 8.5, 8.0),
        (10.5, 4.0, 12.5, 8.0),
        (4.0, 15.5, 6.0, 19.5),
        (9.0, 15.5, 11.0, 19.5),
    ]
}

/// `M` antennas spread uniformly along the four walls.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaArray {
    pub positions: Vec<Point2D>,
    pub perimeter_offsets: Vec<f64>,
    spacing: f64,
}

impl AntennaArray {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Arclength distance between consecutive antennas.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}

/// Places `m` antennas at arclengths `(i + 0.5) * P / m`, which keeps every
/// antenna off the room corners.
pub fn place_antennas(layout: &RoomLayout, m: usize) -> Result<AntennaArray> {
    if m < 4 {
        return Err(Error::invalid(format!("need at least 4 antennas, got {m}")));
    }
    let spacing = layout.perimeter() / m as f64;
    let perimeter_offsets: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) * spacing).collect();
    let positions = perimeter_offsets
        .iter()
        .map(|&s| layout.point_at_arclength(s))
        .collect();
    Ok(AntennaArray {
        positions,
        perimeter_offsets,
        spacing,
    })
}

/// `true` when the straight path between the terminal and the antenna does
/// not cross the interior of any obstacle. Grazing contact counts as LoS.
pub fn ground_truth_los(mt: Point2D, antenna: Point2D, layout: &RoomLayout) -> Result<bool> {
    if layout.obstacles.iter().any(|ob| ob.contains_interior(mt)) {
        return Err(Error::invalid(format!(
            "terminal ({}, {}) lies inside an obstacle",
            mt.x, mt.y
        )));
    }
    Ok(segment_is_clear(mt, antenna, layout))
}

pub(crate) fn segment_is_clear(a: Point2D, b: Point2D, layout: &RoomLayout) -> bool {
    !layout.obstacles.iter().any(|ob| ob.blocks_segment(a, b))
}

/// LoS bits from one terminal position to every antenna.
pub fn los_vector(mt: Point2D, array: &AntennaArray, layout: &RoomLayout) -> Result<Vec<bool>> {
    if !layout.is_free(mt) {
        return Err(Error::invalid(format!(
            "terminal ({}, {}) must be strictly inside the room and outside every obstacle",
            mt.x, mt.y
        )));
    }
    Ok(array
        .positions
        .iter()
        .map(|&a| segment_is_clear(mt, a, layout))
        .collect())
}

/// Uniform sample over the free area by rejection.
pub fn sample_mt_location<R: Rng + ?Sized>(layout: &RoomLayout, rng: &mut R) -> Result<Point2D> {
    if layout.obstacle_area() >= layout.area() * (1.0 - 1e-12) {
        return Err(Error::DegenerateLayout(
            "obstacles cover the whole room".into(),
        ));
    }
    for _ in 0..REJECTION_BUDGET {
        let p = Point2D::new(
            rng.random::<f64>() * layout.width,
            rng.random::<f64>() * layout.length,
        );
        if layout.is_free(p) {
            return Ok(p);
        }
    }
    Err(Error::DegenerateLayout(format!(
        "no free point found in {REJECTION_BUDGET} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_table() -> RoomLayout {
        RoomLayout::new(
            10.0,
            10.0,
            vec![RectObstacle::new(Point2D::new(4.0, 0.5), Point2D::new(6.0, 3.0)).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn square_room_one_antenna_per_wall() {
        let room = RoomLayout::empty(4.0, 4.0).unwrap();
        let arr = place_antennas(&room, 4).unwrap();
        assert_eq!(arr.perimeter_offsets, vec![2.0, 6.0, 10.0, 14.0]);
        assert_eq!(
            arr.positions,
            vec![
                Point2D::new(2.0, 0.0),
                Point2D::new(4.0, 2.0),
                Point2D::new(2.0, 4.0),
                Point2D::new(0.0, 2.0),
            ]
        );
    }

    #[test]
    fn office_array_spacing() {
        let room = RoomLayout::empty(15.0, 25.0).unwrap();
        let arr = place_antennas(&room, 256).unwrap();
        assert_eq!(arr.len(), 256);
        assert_eq!(arr.spacing(), 0.3125);
        for w in arr.perimeter_offsets.windows(2) {
            assert!((w[1] - w[0] - 0.3125).abs() < 1e-12);
        }
        assert!(arr.positions.iter().all(|&p| room.on_boundary(p)));
    }

    #[test]
    fn too_few_antennas() {
        let room = RoomLayout::empty(15.0, 25.0).unwrap();
        assert!(matches!(
            place_antennas(&room, 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn los_examples() {
        let room = RoomLayout::new(
            10.0,
            10.0,
            vec![RectObstacle::new(Point2D::new(4.0, 0.1), Point2D::new(6.0, 3.0)).unwrap()],
        )
        .unwrap();
        let blocked = ground_truth_los(Point2D::new(1.0, 1.0), Point2D::new(9.0, 1.0), &room);
        assert!(!blocked.unwrap());
        let clear = ground_truth_los(Point2D::new(1.0, 5.0), Point2D::new(9.0, 5.0), &room);
        assert!(clear.unwrap());

        let empty = RoomLayout::empty(10.0, 10.0).unwrap();
        assert!(ground_truth_los(Point2D::new(1.0, 1.0), Point2D::new(9.0, 9.0), &empty).unwrap());
    }

    #[test]
    fn grazing_counts_as_los() {
        let room = one_table();
        // along the top edge
        assert!(ground_truth_los(Point2D::new(1.0, 3.0), Point2D::new(9.0, 3.0), &room).unwrap());
        // diagonal through the (4, 3) corner only
        assert!(ground_truth_los(Point2D::new(2.0, 1.0), Point2D::new(6.0, 5.0), &room).unwrap());
        // same diagonal shifted right by a hair cuts the corner
        assert!(!ground_truth_los(Point2D::new(2.01, 1.0), Point2D::new(6.01, 5.0), &room).unwrap());
    }

    #[test]
    fn los_is_symmetric() {
        let room = one_table();
        let a = Point2D::new(1.0, 1.0);
        let b = Point2D::new(9.0, 2.0);
        assert_eq!(segment_is_clear(a, b, &room), segment_is_clear(b, a, &room));
    }

    #[test]
    fn terminal_inside_obstacle_rejected() {
        let room = one_table();
        assert!(matches!(
            ground_truth_los(Point2D::new(5.0, 1.0), Point2D::new(0.0, 5.0), &room),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Point2D::new(3.0, 4.0), Point2D::new(0.0, 0.0)), 5.0);
        assert_eq!(distance(Point2D::new(2.0, 2.0), Point2D::new(2.0, 2.0)), 0.0);
        assert!(
            (distance(Point2D::new(0.0, 0.0), Point2D::new(1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15
        );
    }

    #[test]
    fn layout_validation() {
        let ob = |a: [f64; 2], b: [f64; 2]| RectObstacle::new(a.into(), b.into()).unwrap();
        assert!(RoomLayout::new(0.0, 1.0, vec![]).is_err());
        assert!(RoomLayout::new(10.0, 10.0, vec![ob([1.0, 1.0], [3.0, 3.0]), ob([2.0, 2.0], [4.0, 4.0])]).is_err());
        // touching edges is not an overlap
        assert!(RoomLayout::new(10.0, 10.0, vec![ob([1.0, 1.0], [3.0, 3.0]), ob([3.0, 1.0], [4.0, 4.0])]).is_ok());
        assert!(RoomLayout::new(10.0, 10.0, vec![ob([0.0, 1.0], [3.0, 3.0])]).is_err());
        assert!(RectObstacle::new(Point2D::new(1.0, 1.0), Point2D::new(1.0, 2.0)).is_err());
    }

    #[test]
    fn office_defaults() {
        let office = RoomLayout::office();
        assert_eq!(office.width, 15.0);
        assert_eq!(office.length, 25.0);
        assert_eq!(office.obstacles.len(), 5);
        assert!((office.obstacle_area() - 40.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_left_half_blocked() {
        let room = RoomLayout::new(
            10.0,
            10.0,
            vec![RectObstacle::new(Point2D::new(1e-9, 1e-9), Point2D::new(5.0, 10.0 - 1e-9)).unwrap()],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let mut right = 0usize;
        for _ in 0..n {
            let p = sample_mt_location(&room, &mut rng).unwrap();
            assert!(!room.obstacles[0].contains_closed(p));
            assert!(room.is_strictly_inside(p));
            if p.x > 5.0 {
                right += 1;
            }
        }
        // The free strips next to the obstacle have measure ~1e-9 of the room,
        // so the expected right-half fraction is 1 to within 4e-10.
        let expected = 1.0 - 4e-10;
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt().max(1.0 / n as f64);
        assert!((right as f64 / n as f64 - expected).abs() <= 3.0 * sigma);
    }

    #[test]
    fn sampling_empty_room_is_uniform() {
        let room = RoomLayout::empty(15.0, 25.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 40_000;
        let mut quadrant = [0usize; 4];
        for _ in 0..n {
            let p = sample_mt_location(&room, &mut rng).unwrap();
            quadrant[(p.x > 7.5) as usize + 2 * (p.y > 12.5) as usize] += 1;
        }
        let sigma = (0.25 * 0.75 / n as f64).sqrt();
        for q in quadrant {
            assert!((q as f64 / n as f64 - 0.25).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn fully_tiled_room_is_degenerate() {
        let room = RoomLayout {
            width: 4.0,
            length: 4.0,
            obstacles: vec![
                RectObstacle::new(Point2D::new(0.0, 0.0), Point2D::new(4.0, 2.0)).unwrap(),
                RectObstacle::new(Point2D::new(0.0, 2.0), Point2D::new(4.0, 4.0)).unwrap(),
            ],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(
            sample_mt_location(&room, &mut rng),
            Err(Error::DegenerateLayout(_))
        ));
    }

    #[test]
    fn arclength_walks_counterclockwise() {
        let room = RoomLayout::empty(15.0, 25.0).unwrap();
        assert_eq!(room.point_at_arclength(0.0), Point2D::new(0.0, 0.0));
        assert_eq!(room.point_at_arclength(15.0), Point2D::new(15.0, 0.0));
        assert_eq!(room.point_at_arclength(40.0), Point2D::new(15.0, 25.0));
        assert_eq!(room.point_at_arclength(55.0), Point2D::new(0.0, 25.0));
        assert_eq!(room.point_at_arclength(80.0), Point2D::new(0.0, 0.0));
        assert_eq!(room.point_at_arclength(70.0), Point2D::new(0.0, 10.0));
    }
}
