//! Exact integer predicates on ordered polygons.
//!
//! Everything here is integer arithmetic. Coordinates are capped at
//! [`COORD_BOUND`] so that the orientation determinant of any three points
//! fits comfortably in an `i128` (it would even fit in an `i64`).

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible absolute value of a coordinate.
pub const COORD_BOUND: i64 = 1_000_000_000;

/// Number of offset draws [`perturb_to_strict`] makes before giving up.
pub const PERTURB_ATTEMPTS: u32 = 64;

/// A lattice point with both coordinates in `[-COORD_BOUND, COORD_BOUND]`.
///
/// Ordered lexicographically by `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct Point {
    x: i64,
    y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Result<Self> {
        check_coord(x as i128)?;
        check_coord(y as i128)?;
        Ok(Point { x, y })
    }

    /// The origin; always in range.
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    #[inline]
    pub fn x(self) -> i64 {
        self.x
    }

    #[inline]
    pub fn y(self) -> i64 {
        self.y
    }

    /// Integer translation, checked against the coordinate bound.
    pub fn translate(self, dx: i64, dy: i64) -> Result<Self> {
        Point::new(
            checked_coord(self.x as i128 + dx as i128)?,
            checked_coord(self.y as i128 + dy as i128)?,
        )
    }

    /// Quarter turn counterclockwise about the origin, `(x, y) -> (-y, x)`.
    pub fn rotate90(self) -> Self {
        // the bound is symmetric, so this never leaves the admissible range
        Point {
            x: -self.y,
            y: self.x,
        }
    }
}

fn check_coord(v: i128) -> Result<()> {
    if v.abs() > COORD_BOUND as i128 {
        Err(Error::CoordinateBound { value: v })
    } else {
        Ok(())
    }
}

fn checked_coord(v: i128) -> Result<i64> {
    check_coord(v)?;
    Ok(v as i64)
}

impl TryFrom<[i64; 2]> for Point {
    type Error = Error;

    fn try_from([x, y]: [i64; 2]) -> Result<Self> {
        Point::new(x, y)
    }
}

impl From<Point> for [i64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Orientation determinant of the triple `(a, b, c)`.
///
/// Equals the 3x3 determinant with rows `(1, x, y)`; positive for a
/// counterclockwise turn, negative for clockwise, zero when collinear.
#[inline]
pub fn delta(a: Point, b: Point, c: Point) -> i128 {
    let (ax, ay) = (a.x as i128, a.y as i128);
    (b.x as i128 - ax) * (c.y as i128 - ay) - (c.x as i128 - ax) * (b.y as i128 - ay)
}

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: i128) -> Self {
        match v.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        })
    }
}

/// Sign of [`delta`].
#[inline]
pub fn orientation(a: Point, b: Point, c: Point) -> Sign {
    Sign::of(delta(a, b, c))
}

/// `p` lies on the closed segment `[a, b]`.
pub fn on_segment(a: Point, b: Point, p: Point) -> bool {
    delta(a, b, p) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// An ordered, nonempty sequence of vertices. Duplicates are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Input("a polygon needs at least one vertex".into()));
        }
        Ok(Polygon { vertices })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        let vertices = coords
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Polygon::new(vertices)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i]
    }

    /// Edge `i` as `(V_i, V_{i+1})`, wrapping at the end.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// `(x_0, y_0, ..., x_{n-1}, y_{n-1})`.
    pub fn flatten(&self) -> Vec<i64> {
        self.vertices.iter().flat_map(|p| [p.x, p.y]).collect()
    }

    /// Determinant of the vertex triple `(i, j, k)`.
    #[inline]
    pub fn delta(&self, i: usize, j: usize, k: usize) -> i128 {
        delta(self.vertices[i], self.vertices[j], self.vertices[k])
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polygon { vertices }
    }

    /// Cyclic shift so that the old vertex `by` becomes vertex 0.
    pub fn rotated(&self, by: usize) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(by % self.len());
        Polygon { vertices }
    }

    /// Reorder the vertices: the result's vertex `i` is `self.vertex(order[i])`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Polygon {
            vertices: order.iter().map(|&i| self.vertices[i]).collect(),
        }
    }

    pub fn map_points(&self, f: impl FnMut(&Point) -> Result<Point>) -> Result<Self> {
        Polygon::new(self.vertices.iter().map(f).collect::<Result<_>>()?)
    }
}

impl TryFrom<Vec<Point>> for Polygon {
    type Error = Error;

    fn try_from(v: Vec<Point>) -> Result<Self> {
        Polygon::new(v)
    }
}

impl From<Polygon> for Vec<Point> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub strict: bool,
    pub ordinary: bool,
    pub dimension: u8,
}

/// Affine dimension of the vertex set: 0, 1 or 2.
pub fn dimension(points: &[Point]) -> u8 {
    let Some(&first) = points.first() else {
        return 0;
    };
    let Some(&other) = points.iter().find(|&&p| p != first) else {
        return 0;
    };
    if points.iter().any(|&p| delta(first, other, p) != 0) {
        2
    } else {
        1
    }
}

/// No three vertices (by index) are collinear.
pub fn is_strict(p: &Polygon) -> bool {
    first_collinear_triple(p).is_none()
}

/// Lexicographically first index triple with a zero determinant.
pub fn first_collinear_triple(p: &Polygon) -> Option<[usize; 3]> {
    let v = p.vertices();
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if delta(v[i], v[j], v[k]) == 0 {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

pub fn is_ordinary(p: &Polygon) -> bool {
    let mut seen = BTreeSet::new();
    p.vertices().iter().all(|v| seen.insert(*v))
}

pub fn classify(p: &Polygon) -> ClassificationReport {
    ClassificationReport {
        n: p.len(),
        strict: is_strict(p),
        ordinary: is_ordinary(p),
        dimension: dimension(p.vertices()),
    }
}

/// Strict convex hull of a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    /// Extreme points in counterclockwise order, starting from the
    /// lexicographically smallest. No point lies in the interior of an edge.
    pub cycle: Vec<Point>,
}

impl Hull {
    pub fn extreme_points(&self) -> BTreeSet<Point> {
        self.cycle.iter().copied().collect()
    }

    /// Hull edges `(H_i, H_{i+1})`, wrapping. Empty for a single point, and a
    /// there-and-back pair for a segment.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let m = self.cycle.len();
        let count = if m < 2 { 0 } else { m };
        (0..count).map(move |i| (self.cycle[i], self.cycle[(i + 1) % m]))
    }

    /// `p` lies on the boundary of the hull (for a 2-dimensional hull).
    pub fn on_boundary(&self, p: Point) -> bool {
        match self.cycle.len() {
            0 => false,
            1 => self.cycle[0] == p,
            _ => self.edges().any(|(a, b)| on_segment(a, b, p)),
        }
    }
}

/// Andrew's monotone chain on deduplicated input, dropping collinear points.
pub fn convex_hull(points: &[Point]) -> Result<Hull> {
    if points.is_empty() {
        return Err(Error::Input("convex hull of an empty point set".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() == 1 {
        return Ok(Hull { cycle: pts });
    }

    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && delta(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && delta(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(Hull { cycle: lower })
}

/// Scale by `scale` and jitter each coordinate by an integer in
/// `[-jitter, jitter]` until the result is strict.
///
/// Offsets come from a ChaCha8 stream seeded with `seed`, so the output is
/// reproducible. With `jitter == 0` the first (and every) draw is the plain
/// scaled polygon.
pub fn perturb_to_strict(p: &Polygon, scale: i64, jitter: i64, seed: u64) -> Result<Polygon> {
    if scale < 1 {
        return Err(Error::Input(format!("scale must be at least 1, got {scale}")));
    }
    if jitter < 0 || 2 * (jitter as i128) >= scale as i128 {
        return Err(Error::Input(format!(
            "jitter must satisfy 0 <= jitter < scale/2, got jitter {jitter} with scale {scale}"
        )));
    }
    let scaled: Vec<(i128, i128)> = p
        .vertices()
        .iter()
        .map(|v| (v.x as i128 * scale as i128, v.y as i128 * scale as i128))
        .collect();
    // the jittered box must stay in range for every possible draw
    for &(x, y) in &scaled {
        check_coord(x.abs() + jitter as i128)?;
        check_coord(y.abs() + jitter as i128)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PERTURB_ATTEMPTS {
        let vertices = scaled
            .iter()
            .map(|&(x, y)| {
                let (u, w) = if jitter == 0 {
                    (0, 0)
                } else {
                    (rng.gen_range(-jitter..=jitter), rng.gen_range(-jitter..=jitter))
                };
                Point::new(x as i64 + u, y as i64 + w)
            })
            .collect::<Result<Vec<_>>>()?;
        let candidate = Polygon::new(vertices)?;
        if is_strict(&candidate) {
            return Ok(candidate);
        }
    }
    Err(Error::Exhausted {
        attempts: PERTURB_ATTEMPTS,
        what: "no strict perturbation found".into(),
    })
}
