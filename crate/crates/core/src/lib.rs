//! Exact-arithmetic tools for ordered polygons: convexity tests, convex
//! sub-polygon search, triple colourings, and lower-bound certificates for
//! the least size forcing a convex sub-k-gon.
//!
//! A polygon here is an ordered sequence of lattice points. Order matters:
//! the unit square walked `(0,0),(1,0),(1,1),(0,1)` is convex, walked
//! `(0,0),(1,1),(1,0),(0,1)` it is not.

pub mod convexity;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod subgons;

pub use convexity::{
    convex_permutations, is_convex, is_pre_convex, oracle_test, theorem1_test, to_one_side, ConvexityVerdict,
    Method, ToOneSideWitness, Witness,
};
pub use error::{Error, Result};
pub use extremal::{
    f_bounds, grow, search_extremal, verify_certificate, Certificate, FBoundRecord, SearchConfig,
    SearchOutcome,
};
pub use geometry::{
    classify, convex_hull, delta, perturb_to_strict, ClassificationReport, Hull, Point, Polygon, Sign,
    COORD_BOUND,
};
pub use subgons::{
    count_convex_subgons, find_convex_subgon, find_totally_monochromatic, sub_polygon, triple_coloring,
    Color, CountMethod, CountOptions, IndexSubset, SubgonCount, TripleColoring,
};
