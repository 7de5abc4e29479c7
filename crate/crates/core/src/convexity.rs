//! Convexity of ordered polygons.
//!
//! A polygon is convex when the union of its (cyclic) edges is exactly the
//! boundary of the convex hull of its vertices. [`oracle_test`] decides that
//! definition directly. [`theorem1_test`] is the fast sign test for strict
//! polygons with at least four vertices: convex iff the determinants
//! `Δ(i-1,i,i+1)`, `Δ(0,j,j+1)` and `Δ(0,1,k+1)` all share one sign for
//! `i, k ∈ {2..n-2}` and `j ∈ {1..n-2}`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    classify, convex_hull, dimension, first_collinear_triple, on_segment, Point, Polygon, Sign,
};

/// Largest polygon for which factorial permutation searches are attempted.
pub const MAX_PERMUTATION_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Theorem1,
    Oracle,
    SmallN,
    DimLe1,
}

/// Why a polygon is not convex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A determinant in the sign test disagrees with the reference `Δ(0,1,2)`.
    SignMismatch {
        triple: [usize; 3],
        expected: Sign,
        found: Sign,
    },
    /// Polygon edge `edge` is not contained in the hull boundary.
    EdgeOffBoundary { edge: usize, from: Point, to: Point },
    /// Part of this hull edge is not covered by any polygon edge.
    HullEdgeUncovered { from: Point, to: Point },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::SignMismatch {
                triple: [i, j, k],
                expected,
                found,
            } => {
                write!(f, "sign of Δ({i},{j},{k}) is {found}, expected {expected}")
            }
            Witness::EdgeOffBoundary { edge, from, to } => {
                write!(f, "edge {edge} [{from},{to}] is not on the hull boundary")
            }
            Witness::HullEdgeUncovered { from, to } => {
                write!(f, "hull edge [{from},{to}] is not covered by polygon edges")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityVerdict {
    pub convex: bool,
    pub method: Method,
    pub witness: Option<Witness>,
}

impl ConvexityVerdict {
    fn yes(method: Method) -> Self {
        ConvexityVerdict {
            convex: true,
            method,
            witness: None,
        }
    }

    fn no(method: Method, witness: Witness) -> Self {
        ConvexityVerdict {
            convex: false,
            method,
            witness: Some(witness),
        }
    }
}

/// The index triples checked by the sign test, reference triple first.
fn sign_conditions(n: usize) -> impl Iterator<Item = [usize; 3]> {
    let edges_from_0 = (1..=n - 2).map(|j| [0, j, j + 1]);
    let consecutive = (2..=n - 2).map(|i| [i - 1, i, i + 1]);
    let fan_from_01 = (2..=n - 2).map(|k| [0, 1, k + 1]);
    edges_from_0.chain(consecutive).chain(fan_from_01)
}

/// Sign test for strict polygons with `n >= 4`.
pub fn theorem1_test(p: &Polygon) -> Result<ConvexityVerdict> {
    if p.len() < 4 {
        return Err(Error::Precondition(format!(
            "sign test needs at least 4 vertices, got {}",
            p.len()
        )));
    }
    if let Some([i, j, k]) = first_collinear_triple(p) {
        return Err(Error::Precondition(format!(
            "sign test needs a strict polygon; vertices {i}, {j}, {k} are collinear"
        )));
    }
    Ok(theorem1_unchecked(p))
}

fn theorem1_unchecked(p: &Polygon) -> ConvexityVerdict {
    let expected = Sign::of(p.delta(0, 1, 2));
    for triple @ [i, j, k] in sign_conditions(p.len()) {
        let found = Sign::of(p.delta(i, j, k));
        if found != expected {
            return ConvexityVerdict::no(
                Method::Theorem1,
                Witness::SignMismatch {
                    triple,
                    expected,
                    found,
                },
            );
        }
    }
    ConvexityVerdict::yes(Method::Theorem1)
}

/// Decide convexity straight from the definition.
pub fn oracle_test(p: &Polygon) -> ConvexityVerdict {
    let v = p.vertices();
    if dimension(v) <= 1 {
        return ConvexityVerdict::yes(Method::Oracle);
    }
    let hull = convex_hull(v).expect("polygons are nonempty");
    let hull_edges: Vec<(Point, Point)> = hull.edges().collect();

    // every polygon edge lies on one hull edge; a straight segment inside the
    // boundary of a 2-dimensional convex polygon cannot turn a corner
    let mut carrier = Vec::with_capacity(p.len());
    for e in 0..p.len() {
        let (a, b) = p.edge(e);
        match hull_edges
            .iter()
            .position(|&(h0, h1)| on_segment(h0, h1, a) && on_segment(h0, h1, b))
        {
            Some(h) => carrier.push(h),
            None => {
                return ConvexityVerdict::no(
                    Method::Oracle,
                    Witness::EdgeOffBoundary {
                        edge: e,
                        from: a,
                        to: b,
                    },
                )
            }
        }
    }

    // every hull edge is covered by the polygon edges lying on it
    for (h, &(h0, h1)) in hull_edges.iter().enumerate() {
        let dir = (h1.x() as i128 - h0.x() as i128, h1.y() as i128 - h0.y() as i128);
        let param =
            |q: Point| (q.x() as i128 - h0.x() as i128) * dir.0 + (q.y() as i128 - h0.y() as i128) * dir.1;
        let length = param(h1);
        let mut intervals: Vec<(i128, i128)> = (0..p.len())
            .filter_map(|e| {
                let (a, b) = p.edge(e);
                if carrier[e] == h || (on_segment(h0, h1, a) && on_segment(h0, h1, b)) {
                    let (s, t) = (param(a), param(b));
                    Some((s.min(t), s.max(t)))
                } else {
                    None
                }
            })
            .collect();
        intervals.sort_unstable();
        let mut reach = 0i128;
        let mut covered = false;
        for (s, t) in intervals {
            if s > reach {
                break;
            }
            reach = reach.max(t);
            if reach >= length {
                covered = true;
                break;
            }
        }
        if !covered {
            return ConvexityVerdict::no(Method::Oracle, Witness::HullEdgeUncovered { from: h0, to: h1 });
        }
    }
    ConvexityVerdict::yes(Method::Oracle)
}

/// Convexity by the cheapest applicable route; always agrees with [`oracle_test`].
pub fn is_convex(p: &Polygon) -> ConvexityVerdict {
    if p.len() <= 3 {
        return ConvexityVerdict::yes(Method::SmallN);
    }
    let report = classify(p);
    if report.dimension <= 1 {
        ConvexityVerdict::yes(Method::DimLe1)
    } else if report.strict {
        theorem1_unchecked(p)
    } else {
        oracle_test(p)
    }
}

/// Integer normals certifying that every edge has all vertices on one side.
///
/// `normals[j]` is orthogonal to `V_{j+1} - V_j` and has a nonnegative inner
/// product with `V_r - V_j` for every vertex `V_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToOneSideWitness {
    pub normals: Vec<(i64, i64)>,
}

fn supports(p: &Polygon, j: usize, normal: (i64, i64)) -> bool {
    if normal == (0, 0) {
        return false;
    }
    let (a, b) = p.edge(j);
    let dot = |q: Point| {
        (q.x() as i128 - a.x() as i128) * normal.0 as i128
            + (q.y() as i128 - a.y() as i128) * normal.1 as i128
    };
    dot(b) == 0 && p.vertices().iter().all(|&q| dot(q) >= 0)
}

fn left_normal(a: Point, b: Point) -> (i64, i64) {
    (a.y() - b.y(), b.x() - a.x())
}

/// Per-edge supporting normals, if the polygon is to-one-side.
pub fn to_one_side(p: &Polygon) -> Option<ToOneSideWitness> {
    let v = p.vertices();
    let dim = dimension(v);
    let hull = if dim == 2 {
        Some(convex_hull(v).expect("nonempty"))
    } else {
        None
    };

    let mut normals = Vec::with_capacity(p.len());
    for j in 0..p.len() {
        let (a, b) = p.edge(j);
        let candidates: Vec<(i64, i64)> = if a != b {
            let (nx, ny) = left_normal(a, b);
            vec![(nx, ny), (-nx, -ny)]
        } else {
            match dim {
                0 => vec![(0, 1)],
                1 => {
                    let other = *v.iter().find(|&&q| q != v[0]).expect("dimension 1");
                    let (nx, ny) = left_normal(v[0], other);
                    vec![(nx, ny), (-nx, -ny)]
                }
                _ => hull
                    .as_ref()
                    .expect("dimension 2")
                    .edges()
                    .filter(|&(h0, h1)| on_segment(h0, h1, a))
                    .map(|(h0, h1)| left_normal(h0, h1))
                    .collect(),
            }
        };
        normals.push(candidates.into_iter().find(|&nrm| supports(p, j, nrm))?);
    }
    Some(ToOneSideWitness { normals })
}

/// Some ordering of the vertices is convex.
///
/// Strict polygons are settled by comparing the vertex set with the hull's
/// extreme points. Other polygons fall back to trying every permutation,
/// which is only done for `n <= MAX_PERMUTATION_N`.
pub fn is_pre_convex(p: &Polygon) -> Result<bool> {
    if first_collinear_triple(p).is_none() {
        let hull = convex_hull(p.vertices())?;
        let vertex_set: BTreeSet<Point> = p.vertices().iter().copied().collect();
        return Ok(vertex_set == hull.extreme_points());
    }
    let n = p.len();
    if n > MAX_PERMUTATION_N {
        return Err(Error::Capability(format!(
            "pre-convexity of a non-strict {n}-gon needs a permutation search; limit is {MAX_PERMUTATION_N}"
        )));
    }
    Ok((0..n)
        .permutations(n)
        .any(|order| is_convex(&p.permuted(&order)).convex))
}

/// All vertex orders that make the polygon convex, in lexicographic order.
pub fn convex_permutations(p: &Polygon) -> Result<Vec<Vec<usize>>> {
    let n = p.len();
    if n > MAX_PERMUTATION_N {
        return Err(Error::Capability(format!(
            "permutation census of a {n}-gon exceeds the limit of {MAX_PERMUTATION_N} vertices"
        )));
    }
    Ok((0..n)
        .permutations(n)
        .filter(|order| is_convex(&p.permuted(order)).convex)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> Polygon {
        Polygon::from_coords(c).unwrap()
    }

    fn square() -> Polygon {
        poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    const SEVEN: [(i64, i64); 7] = [
        (-13, 0),
        (15, 0),
        (0, 16),
        (18, 39),
        (27, -15),
        (10, 20),
        (16, 30),
    ];

    #[test]
    fn sign_test_covers_every_stated_condition() {
        for n in 4..12 {
            let conds: Vec<_> = sign_conditions(n).collect();
            assert_eq!(conds.len(), 3 * n - 8);
            assert_eq!(conds[0], [0, 1, 2]);
        }
    }

    #[test]
    fn square_orders() {
        let sq = square();
        assert!(theorem1_test(&sq).unwrap().convex);
        assert!(oracle_test(&sq).convex);
        let crossed = sq.permuted(&[0, 2, 1, 3]);
        let v = theorem1_test(&crossed).unwrap();
        assert!(!v.convex);
        assert!(matches!(v.witness, Some(Witness::SignMismatch { .. })));
        assert!(!oracle_test(&crossed).convex);
    }

    #[test]
    fn seven_gon_prefix_is_not_convex() {
        let p = poly(&SEVEN[..4]);
        assert!(!theorem1_test(&p).unwrap().convex);
        assert!(!oracle_test(&p).convex);
        assert!(!is_convex(&poly(&SEVEN)).convex);
        assert!(!oracle_test(&poly(&SEVEN)).convex);
    }

    #[test]
    fn theorem1_preconditions() {
        assert!(matches!(
            theorem1_test(&poly(&[(0, 0), (1, 0), (0, 1)])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            theorem1_test(&poly(&[(0, 0), (1, 0), (2, 0), (0, 1)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn oracle_degenerate_examples() {
        assert!(oracle_test(&poly(&[(0, 0), (1, 0), (2, 0)])).convex);
        assert!(oracle_test(&poly(&[(0, 0), (0, 0), (1, 0), (0, 1)])).convex);
        let v = oracle_test(&poly(&[(0, 0), (2, 0), (1, 0), (0, 1)]));
        assert!(!v.convex);
        assert_eq!(
            v.witness,
            Some(Witness::EdgeOffBoundary {
                edge: 2,
                from: Point::new(1, 0).unwrap(),
                to: Point::new(0, 1).unwrap()
            })
        );
    }

    #[test]
    fn oracle_collinear_runs_on_the_boundary() {
        // midpoints on edges, walked in order
        assert!(oracle_test(&poly(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (0, 1)])).convex);
        // doubling back along a side stays on the boundary
        assert!(oracle_test(&poly(&[(0, 0), (2, 0), (1, 0), (2, 0), (0, 2)])).convex);
        // every edge on the boundary, but the left side is never walked
        let v = oracle_test(&poly(&[(0, 0), (2, 0), (0, 2), (2, 0)]));
        assert!(!v.convex);
        assert!(matches!(v.witness, Some(Witness::HullEdgeUncovered { .. })));
    }

    #[test]
    fn interior_duplicate_vertex_is_not_convex() {
        let v = oracle_test(&poly(&[(0, 0), (4, 0), (0, 4), (1, 1), (1, 1)]));
        assert!(!v.convex);
    }

    #[test]
    fn dispatcher_methods() {
        assert_eq!(is_convex(&poly(&[(5, 5)])).method, Method::SmallN);
        assert_eq!(is_convex(&poly(&[(5, 5), (0, 1)])).method, Method::SmallN);
        assert_eq!(
            is_convex(&poly(&[(0, 0), (1, 1), (3, 3), (2, 2)])).method,
            Method::DimLe1
        );
        assert_eq!(is_convex(&square()).method, Method::Theorem1);
        assert_eq!(
            is_convex(&poly(&[(0, 0), (0, 0), (1, 0), (0, 1)])).method,
            Method::Oracle
        );
    }

    #[test]
    fn to_one_side_examples() {
        let w = to_one_side(&square()).unwrap();
        assert_eq!(w.normals, vec![(0, 1), (-1, 0), (0, -1), (1, 0)]);
        assert!(to_one_side(&poly(&[(0, 0), (2, 0), (1, 0), (0, 1)])).is_none());
        // degenerate edges use hull support directions
        let w = to_one_side(&poly(&[(0, 0), (0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(w.normals.len(), 4);
        assert!(to_one_side(&poly(&[(7, 7), (7, 7)])).is_some());
        assert!(to_one_side(&poly(&[(0, 0), (1, 1), (1, 1), (2, 2)])).is_some());
    }

    #[test]
    fn pre_convex_examples() {
        assert!(is_pre_convex(&square().permuted(&[0, 2, 1, 3])).unwrap());
        assert!(!is_pre_convex(&poly(&[(0, 0), (4, 0), (1, 1), (0, 4)])).unwrap());
        assert!(is_pre_convex(&poly(&[(25, 0), (20, 15), (0, 25), (-15, 20), (-24, -7)])).unwrap());
        // non-strict: collinear points are convex in walking order
        assert!(is_pre_convex(&poly(&[(0, 0), (2, 0), (1, 0), (0, 2)])).unwrap());
        let big: Vec<(i64, i64)> = (0..9).map(|i| (i, 0)).collect();
        assert!(matches!(is_pre_convex(&poly(&big)), Err(Error::Capability(_))));
    }

    #[test]
    fn permutation_census_examples() {
        assert_eq!(convex_permutations(&square()).unwrap().len(), 8);
        let pentagon = poly(&[(0, 0), (3, -1), (5, 1), (3, 4), (0, 3)]);
        assert!(theorem1_test(&pentagon).unwrap().convex);
        assert_eq!(convex_permutations(&pentagon).unwrap().len(), 10);
        let p = poly(&[(0, 0), (4, 0), (1, 1), (0, 4)]);
        assert!(convex_permutations(&p).unwrap().is_empty());
        let big: Vec<(i64, i64)> = (0..9).map(|i| (i, i * i)).collect();
        assert!(matches!(
            convex_permutations(&poly(&big)),
            Err(Error::Capability(_))
        ));
    }
}
