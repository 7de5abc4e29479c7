//! Sub-polygons: enumeration, convex sub-k-gon counting and search, and the
//! good/bad colouring of index triples by determinant sign.
//!
//! For a strict polygon, a sub-4-gon is convex exactly when its four index
//! triples have the same colour, and a sub-k-gon (k >= 4) is convex exactly
//! when all of its sub-4-gons are. Together these turn "find a convex
//! sub-k-gon" into "find a k-subset whose triples are monochromatic", which
//! is the search [`find_convex_subgon`] runs.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convexity::{is_convex, oracle_test};
use crate::error::{Error, Result};
use crate::geometry::{first_collinear_triple, perturb_to_strict, Polygon};

/// Default cap on the number of subsets (or search nodes) one call may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Scale and jitter used to move a non-strict polygon to a nearby strict one.
pub const PERTURB_SCALE: i64 = 10_000;
pub const PERTURB_JITTER: i64 = 1;
const PERTURB_SEED: u64 = 0x5eed;

/// Strictly increasing vertex indices selecting a sub-polygon.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    /// Validate `indices` as a selection from an `n`-gon.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Input("index subset is empty".into()));
        }
        if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!(
                "index subset must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::Input(format!("index {last} out of range for a {n}-gon")));
            }
        }
        Ok(IndexSubset(indices))
    }

    /// `0, 1, ..., k-1`.
    pub fn prefix(k: usize) -> Self {
        IndexSubset((0..k).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// `(V_{i_0}, ..., V_{i_{k-1}})`, order preserved.
pub fn sub_polygon(p: &Polygon, s: &IndexSubset) -> Result<Polygon> {
    if let Some(&last) = s.indices().last() {
        if last >= p.len() {
            return Err(Error::Input(format!(
                "index {last} out of range for a {}-gon",
                p.len()
            )));
        }
    }
    Ok(p.permuted(s.indices()))
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Which convexity decision a count uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    /// [`is_convex`], which takes the sign test on strict sub-polygons.
    #[default]
    Dispatch,
    /// The definition-level [`oracle_test`] on every sub-polygon.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub method: CountMethod,
    /// Also return the convex subsets themselves.
    pub collect: bool,
    pub budget: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            method: CountMethod::Dispatch,
            collect: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgonCount {
    pub k: usize,
    pub count: u64,
    /// `C(n, k)`.
    pub total: u64,
    /// Convex subsets in lexicographic order, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsets: Option<Vec<IndexSubset>>,
}

fn check_k(p: &Polygon, k: usize) -> Result<()> {
    if k < 1 || k > p.len() {
        return Err(Error::Input(format!("k must be in 1..={}, got {k}", p.len())));
    }
    Ok(())
}

fn check_budget(total: u128, budget: u64) -> Result<u64> {
    if total > budget as u128 {
        return Err(Error::Capability(format!(
            "{total} subsets exceed the enumeration budget of {budget}"
        )));
    }
    Ok(total as u64)
}

/// Exhaustively count convex sub-k-gons.
///
/// Work is split by leading index across the rayon pool; the merged result
/// is identical to a serial scan.
pub fn count_convex_subgons(p: &Polygon, k: usize, opts: &CountOptions) -> Result<SubgonCount> {
    check_k(p, k)?;
    let n = p.len();
    let total = check_budget(binomial(n, k), opts.budget)?;
    let convex = |s: &[usize]| {
        let sub = p.permuted(s);
        match opts.method {
            CountMethod::Dispatch => is_convex(&sub).convex,
            CountMethod::Oracle => oracle_test(&sub).convex,
        }
    };

    let per_lead: Vec<(u64, Vec<IndexSubset>)> = (0..=n - k)
        .into_par_iter()
        .map(|lead| {
            let mut count = 0u64;
            let mut found = Vec::new();
            for rest in (lead + 1..n).combinations(k - 1) {
                let mut s = Vec::with_capacity(k);
                s.push(lead);
                s.extend(rest);
                if convex(&s) {
                    count += 1;
                    if opts.collect {
                        found.push(IndexSubset(s));
                    }
                }
            }
            (count, found)
        })
        .collect();

    let count = per_lead.iter().map(|(c, _)| c).sum();
    let subsets = opts
        .collect
        .then(|| per_lead.into_iter().flat_map(|(_, f)| f).collect());
    Ok(SubgonCount {
        k,
        count,
        total,
        subsets,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    /// Positive determinant.
    Good,
    /// Negative determinant.
    Bad,
}

/// Colour of every 3-subset `{i < j < k}` of a strict polygon's indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleColoring {
    n: usize,
    colors: Vec<Option<Color>>,
}

impl TripleColoring {
    /// Build from an arbitrary rule on increasing triples.
    pub fn from_fn(n: usize, mut rule: impl FnMut(usize, usize, usize) -> Color) -> Self {
        let mut colors = vec![None; n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    colors[(i * n + j) * n + k] = Some(rule(i, j, k));
                }
            }
        }
        TripleColoring { n, colors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Colour of the 3-subset `{i, j, k}`; argument order does not matter.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Color {
        let mut t = [i, j, k];
        t.sort_unstable();
        self.colors[(t[0] * self.n + t[1]) * self.n + t[2]].expect("indices must be distinct and in range")
    }

    #[inline]
    fn get_sorted(&self, i: usize, j: usize, k: usize) -> Color {
        // callers guarantee i < j < k < n
        self.colors[(i * self.n + j) * self.n + k].unwrap()
    }
}

/// Good where `Δ(i,j,k) > 0`, bad where it is negative.
pub fn triple_coloring(p: &Polygon) -> Result<TripleColoring> {
    if let Some([i, j, k]) = first_collinear_triple(p) {
        return Err(Error::Precondition(format!(
            "triple colouring needs a strict polygon; vertices {i}, {j}, {k} are collinear"
        )));
    }
    Ok(TripleColoring::from_fn(p.len(), |i, j, k| {
        if p.delta(i, j, k) > 0 {
            Color::Good
        } else {
            Color::Bad
        }
    }))
}

/// Depth-first search over increasing tuples whose triples are all one colour.
///
/// Visits candidates in lexicographic order, so the first hit is the
/// lexicographically least. `on_hit` returns `false` to stop early.
struct MonoSearch<'a> {
    coloring: &'a TripleColoring,
    m: usize,
    budget: u64,
    nodes: u64,
    stack: Vec<usize>,
}

impl<'a> MonoSearch<'a> {
    fn new(coloring: &'a TripleColoring, m: usize, budget: u64) -> Self {
        MonoSearch {
            coloring,
            m,
            budget,
            nodes: 0,
            stack: Vec::with_capacity(m),
        }
    }

    fn run(&mut self, on_hit: &mut dyn FnMut(&[usize], Color) -> bool) -> Result<()> {
        self.extend(None, on_hit).map(|_| ())
    }

    /// Returns `Ok(false)` once `on_hit` asks to stop.
    fn extend(
        &mut self,
        color: Option<Color>,
        on_hit: &mut dyn FnMut(&[usize], Color) -> bool,
    ) -> Result<bool> {
        let n = self.coloring.n();
        let len = self.stack.len();
        if len == self.m {
            return Ok(on_hit(&self.stack, color.expect("m >= 3")));
        }
        let start = self.stack.last().map_or(0, |&l| l + 1);
        // leave room for the remaining picks
        let end = n + len + 1 - self.m;
        for c in start..end {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Capability(format!(
                    "search visited more than {} nodes",
                    self.budget
                )));
            }
            let mut next = color;
            let mut ok = true;
            'pairs: for a in 0..len {
                for b in a + 1..len {
                    let col = self.coloring.get_sorted(self.stack[a], self.stack[b], c);
                    match next {
                        None => next = Some(col),
                        Some(want) if want != col => {
                            ok = false;
                            break 'pairs;
                        }
                        _ => {}
                    }
                }
            }
            if !ok {
                continue;
            }
            self.stack.push(c);
            let go_on = self.extend(next, on_hit)?;
            self.stack.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn first_monochromatic(c: &TripleColoring, m: usize, budget: u64) -> Result<Option<(IndexSubset, Color)>> {
    if m > c.n() {
        return Ok(None);
    }
    let mut hit = None;
    MonoSearch::new(c, m, budget).run(&mut |s, col| {
        hit = Some((IndexSubset(s.to_vec()), col));
        false
    })?;
    Ok(hit)
}

/// Lexicographically least `m`-subset whose 3-subsets all share one colour.
pub fn find_totally_monochromatic(c: &TripleColoring, m: usize) -> Result<Option<(IndexSubset, Color)>> {
    if m < 3 {
        return Err(Error::Input(format!("subset size must be at least 3, got {m}")));
    }
    first_monochromatic(c, m, u64::MAX)
}

/// Number of `m`-subsets whose 3-subsets all share one colour.
pub fn count_monochromatic(c: &TripleColoring, m: usize) -> Result<u64> {
    if m < 3 {
        return Err(Error::Input(format!("subset size must be at least 3, got {m}")));
    }
    if m > c.n() {
        return Ok(0);
    }
    let mut count = 0u64;
    MonoSearch::new(c, m, u64::MAX).run(&mut |_, _| {
        count += 1;
        true
    })?;
    Ok(count)
}

fn first_convex_by_enumeration(p: &Polygon, k: usize, budget: u64) -> Result<Option<IndexSubset>> {
    check_budget(binomial(p.len(), k), budget)?;
    Ok((0..p.len())
        .combinations(k)
        .find(|s| is_convex(&p.permuted(s)).convex)
        .map(IndexSubset))
}

fn verified(p: &Polygon, s: IndexSubset) -> Option<IndexSubset> {
    is_convex(&p.permuted(s.indices())).convex.then_some(s)
}

/// Find a convex sub-k-gon, if there is one.
///
/// Strict polygons are searched through their triple colouring; others are
/// first perturbed to a nearby strict polygon, and whatever the perturbed
/// search finds is re-checked on the original. Any failed check falls back
/// to plain enumeration.
pub fn find_convex_subgon(p: &Polygon, k: usize) -> Result<Option<IndexSubset>> {
    find_convex_subgon_with_budget(p, k, DEFAULT_BUDGET)
}

pub fn find_convex_subgon_with_budget(p: &Polygon, k: usize, budget: u64) -> Result<Option<IndexSubset>> {
    check_k(p, k)?;
    if k <= 3 {
        return Ok(Some(IndexSubset::prefix(k)));
    }
    if first_collinear_triple(p).is_none() {
        let coloring = triple_coloring(p)?;
        return match first_monochromatic(&coloring, k, budget)? {
            Some((s, _)) => match verified(p, s) {
                Some(s) => Ok(Some(s)),
                None => first_convex_by_enumeration(p, k, budget),
            },
            None => Ok(None),
        };
    }

    if let Ok(strict) = perturb_to_strict(p, PERTURB_SCALE, PERTURB_JITTER, PERTURB_SEED) {
        let coloring = triple_coloring(&strict)?;
        if let Some((s, _)) = first_monochromatic(&coloring, k, budget)? {
            if let Some(s) = verified(p, s) {
                return Ok(Some(s));
            }
        }
    }
    // degenerate sub-polygons can be convex without any nearby strict one being so
    first_convex_by_enumeration(p, k, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> Polygon {
        Polygon::from_coords(c).unwrap()
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

    fn square() -> Polygon {
        poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    #[test]
    fn index_subset_validation() {
        assert!(IndexSubset::new(vec![0, 2, 5], 6).is_ok());
        assert!(IndexSubset::new(vec![0, 2, 6], 6).is_err());
        assert!(IndexSubset::new(vec![2, 2], 6).is_err());
        assert!(IndexSubset::new(vec![3, 1], 6).is_err());
        assert!(IndexSubset::new(vec![], 6).is_err());
        let s = IndexSubset::new(vec![0, 9], 10).unwrap();
        assert!(sub_polygon(&square(), &s).is_err());
    }

    #[test]
    fn sub_polygon_examples() {
        let p = poly(&SEVEN);
        assert_eq!(sub_polygon(&p, &IndexSubset::prefix(7)).unwrap(), p);
        let s = IndexSubset::new(vec![0, 1, 2], 4).unwrap();
        assert_eq!(
            sub_polygon(&square(), &s).unwrap(),
            poly(&[(0, 0), (1, 0), (1, 1)])
        );
        let s = IndexSubset::new(vec![0, 2, 4, 6], 7).unwrap();
        assert_eq!(
            sub_polygon(&p, &s).unwrap(),
            poly(&[(-13, 0), (0, 16), (27, -15), (16, 30)])
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 4), 35);
        assert_eq!(binomial(13, 4), 715);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn count_examples() {
        let opts = CountOptions {
            collect: true,
            ..Default::default()
        };
        let c = count_convex_subgons(&poly(&SEVEN), 4, &opts).unwrap();
        assert_eq!((c.count, c.total), (0, 35));
        let c = count_convex_subgons(&square(), 4, &opts).unwrap();
        assert_eq!((c.count, c.total), (1, 1));
        let hexagon = poly(&[(0, 0), (4, -1), (7, 2), (6, 6), (2, 7), (-2, 3)]);
        let c = count_convex_subgons(
            &hexagon,
            4,
            &CountOptions {
                method: CountMethod::Oracle,
                ..opts
            },
        )
        .unwrap();
        assert_eq!((c.count, c.total), (15, 15));
        assert_eq!(c.subsets.unwrap().len(), 15);
    }

    #[test]
    fn count_rejects_bad_k_and_budget() {
        assert!(matches!(
            count_convex_subgons(&square(), 0, &CountOptions::default()),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            count_convex_subgons(&square(), 5, &CountOptions::default()),
            Err(Error::Input(_))
        ));
        let opts = CountOptions {
            budget: 34,
            ..Default::default()
        };
        assert!(matches!(
            count_convex_subgons(&poly(&SEVEN), 4, &opts),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn find_examples() {
        assert_eq!(find_convex_subgon(&poly(&SEVEN), 4).unwrap(), None);
        assert_eq!(
            find_convex_subgon(&square(), 4).unwrap(),
            Some(IndexSubset::prefix(4))
        );
        assert_eq!(
            find_convex_subgon(&poly(&SEVEN), 3).unwrap(),
            Some(IndexSubset::prefix(3))
        );
        assert!(find_convex_subgon(&square(), 5).is_err());
    }

    #[test]
    fn find_on_non_strict_input() {
        // interior duplicate: the square corners still form a convex sub-4-gon
        let p = poly(&[(0, 0), (1, 1), (2, 0), (1, 1), (2, 2), (0, 2)]);
        let s = find_convex_subgon(&p, 4).unwrap().unwrap();
        assert!(oracle_test(&sub_polygon(&p, &s).unwrap()).convex);
        // collinear points are convex in any order
        let line = poly(&[(0, 0), (3, 0), (1, 0), (2, 0), (5, 0)]);
        assert_eq!(
            find_convex_subgon(&line, 5).unwrap(),
            Some(IndexSubset::prefix(5))
        );
    }

    #[test]
    fn colouring_examples() {
        let c = triple_coloring(&square()).unwrap();
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            assert_eq!(c.get(i, j, k), Color::Good);
        }
        assert_eq!(c.get(2, 0, 1), Color::Good);
        let c = triple_coloring(&poly(&[(0, 0), (0, 1), (1, 1), (1, 0)])).unwrap();
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            assert_eq!(c.get(i, j, k), Color::Bad);
        }
        assert!(matches!(
            triple_coloring(&poly(&[(0, 0), (1, 1), (2, 2)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monochromatic_examples() {
        let sq = triple_coloring(&square()).unwrap();
        assert_eq!(
            find_totally_monochromatic(&sq, 3).unwrap(),
            Some((IndexSubset::prefix(3), Color::Good))
        );
        assert_eq!(
            find_totally_monochromatic(&sq, 4).unwrap(),
            Some((IndexSubset::prefix(4), Color::Good))
        );
        let seven = triple_coloring(&poly(&SEVEN)).unwrap();
        assert_eq!(find_totally_monochromatic(&seven, 4).unwrap(), None);
        assert_eq!(count_monochromatic(&seven, 4).unwrap(), 0);
        assert_eq!(count_monochromatic(&seven, 3).unwrap(), 35);
        assert!(find_totally_monochromatic(&seven, 2).is_err());
        assert_eq!(find_totally_monochromatic(&seven, 8).unwrap(), None);
    }

    #[test]
    fn seven_gon_colouring_has_no_monochromatic_4_subset_by_brute_force() {
        let c = triple_coloring(&poly(&SEVEN)).unwrap();
        for s in (0..7).combinations(4) {
            let colours: Vec<Color> = s
                .iter()
                .copied()
                .combinations(3)
                .map(|t| c.get(t[0], t[1], t[2]))
                .collect();
            assert!(colours.iter().any(|&x| x != colours[0]), "{s:?}");
        }
    }

    #[test]
    fn search_budget_is_enforced() {
        let c = triple_coloring(&poly(&SEVEN)).unwrap();
        assert!(matches!(first_monochromatic(&c, 4, 3), Err(Error::Capability(_))));
    }
}
