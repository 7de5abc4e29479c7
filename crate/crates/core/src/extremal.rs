//! Bounds on F(k), the least n such that every n-gon has a convex sub-k-gon,
//! together with lower-bound certificates and a randomized search for new ones.
//!
//! A certificate is an n-gon with no convex sub-k-gon, checked exhaustively
//! with the definition-level oracle; it shows F(k) >= n + 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{delta, Point, Polygon, COORD_BOUND};
use crate::subgons::{
    binomial, count_convex_subgons, count_monochromatic, Color, CountMethod, CountOptions, TripleColoring,
};

/// A 7-gon none of whose 35 sub-4-gons is convex.
pub const SEVEN_GON: [(i64, i64); 7] = [
    (-13, 0),
    (15, 0),
    (0, 16),
    (18, 39),
    (27, -15),
    (10, 20),
    (16, 30),
];

/// `R(4,4;3)`.
pub const RAMSEY_4_4_3: u64 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: u64,
    pub provenance: String,
}

impl Bound {
    fn new(value: u64, provenance: impl Into<String>) -> Self {
        Bound {
            value,
            provenance: provenance.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FBoundRecord {
    pub k: usize,
    pub lower: Bound,
    pub upper: Option<Bound>,
    pub symbolic_upper: Option<String>,
}

/// Exhaustive evidence that some n-gon has no convex sub-k-gon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    #[serde(rename = "vertices")]
    pub polygon: Polygon,
    /// `n + 1`.
    pub claimed_bound: u64,
    pub verified: bool,
    /// `C(n, k)`.
    pub subgon_total: u64,
}

/// Count convex sub-k-gons of `p` with the oracle and certify when there are none.
pub fn verify_certificate(p: &Polygon, k: usize) -> Result<Certificate> {
    if k < 1 {
        return Err(Error::Input("k must be at least 1".into()));
    }
    let n = p.len();
    let claimed_bound = n as u64 + 1;
    if k > n {
        return Ok(Certificate {
            k,
            polygon: p.clone(),
            claimed_bound,
            verified: true,
            subgon_total: 0,
        });
    }
    let opts = CountOptions {
        method: CountMethod::Oracle,
        ..Default::default()
    };
    let counted = count_convex_subgons(p, k, &opts)?;
    Ok(Certificate {
        k,
        polygon: p.clone(),
        claimed_bound,
        verified: counted.count == 0,
        subgon_total: counted.total,
    })
}

/// Certificates that ship with the library.
pub fn builtin_certificates() -> Vec<Certificate> {
    let p = Polygon::from_coords(&SEVEN_GON).expect("in range");
    vec![verify_certificate(&p, 4).expect("35 subsets")]
}

/// Known bounds on F(k), raised by any of `extra` that re-verify.
pub fn f_bounds(k: usize, extra: &[Certificate]) -> Result<FBoundRecord> {
    if k < 1 {
        return Err(Error::Input("k must be at least 1".into()));
    }
    if k <= 3 {
        let why = "every polygon with at most 3 vertices is convex";
        return Ok(FBoundRecord {
            k,
            lower: Bound::new(k as u64, format!("a {}-gon has no sub-{k}-gon", k - 1)),
            upper: Some(Bound::new(k as u64, why)),
            symbolic_upper: None,
        });
    }

    let mut lower = Bound::new(k as u64, format!("a {}-gon has no sub-{k}-gon", k - 1));
    for cert in builtin_certificates().iter().chain(extra) {
        if cert.k != k || cert.claimed_bound <= lower.value {
            continue;
        }
        // only trust what re-verifies here
        if let Ok(fresh) = verify_certificate(&cert.polygon, k) {
            if fresh.verified {
                lower = Bound::new(
                    fresh.claimed_bound,
                    format!("verified {}-gon with no convex sub-{k}-gon", cert.polygon.len()),
                );
            }
        }
    }

    let (upper, symbolic_upper) = if k == 4 {
        (
            Some(Bound::new(
                RAMSEY_4_4_3,
                "R(4,4;3) = 13 for strict polygons, extended to all polygons by perturbation",
            )),
            None,
        )
    } else {
        (None, Some(format!("R({k},13;4)")))
    };
    Ok(FBoundRecord {
        k,
        lower,
        upper,
        symbolic_upper,
    })
}

/// Parameters for [`search_extremal`] and [`grow`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Coordinates stay in `[-box_bound, box_bound]`.
    pub box_bound: i64,
    pub max_iterations: u64,
    pub restarts: u64,
    pub initial_temperature: f64,
    /// Temperature multiplier per iteration.
    pub decay: f64,
    /// A move shifts one vertex by an offset in `[-radius, radius]^2`.
    pub radius: i64,
    /// Start restart 0 here instead of at a random polygon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Polygon>,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        SearchConfig {
            n,
            k,
            seed,
            box_bound: 50,
            max_iterations: 5000,
            restarts: 200,
            initial_temperature: 2.0,
            decay: 0.999,
            radius: 5,
            initial: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(msg));
        if self.n < 1 || self.k < 1 {
            return bad(format!("n and k must be positive, got n={} k={}", self.n, self.k));
        }
        if self.box_bound < 1 || self.box_bound > COORD_BOUND {
            return bad(format!(
                "box bound must be in 1..={COORD_BOUND}, got {}",
                self.box_bound
            ));
        }
        if self.max_iterations < 1 || self.restarts < 1 || self.radius < 1 {
            return bad("iterations, restarts and radius must be positive".into());
        }
        let temp_ok = self.initial_temperature.is_finite() && self.initial_temperature > 0.0;
        if !temp_ok || !(self.decay > 0.0 && self.decay <= 1.0) {
            return bad(format!(
                "temperature must be positive and decay in (0, 1], got {} and {}",
                self.initial_temperature, self.decay
            ));
        }
        if let Some(p) = &self.initial {
            if p.len() != self.n {
                return bad(format!(
                    "initial polygon has {} vertices, expected {}",
                    p.len(),
                    self.n
                ));
            }
            if crate::geometry::first_collinear_triple(p).is_some() {
                return bad("initial polygon must be strict".into());
            }
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of restart `index`; depends only on the base seed and the index.
pub fn restart_seed(seed: u64, index: u64) -> u64 {
    mix(seed ^ mix(index))
}

fn coloring_of(v: &[Point]) -> TripleColoring {
    TripleColoring::from_fn(v.len(), |i, j, k| {
        if delta(v[i], v[j], v[k]) > 0 {
            Color::Good
        } else {
            Color::Bad
        }
    })
}

/// Convex sub-k-gons of a strict polygon, counted as monochromatic k-subsets.
fn objective(v: &[Point], k: usize) -> u64 {
    if k < 3 {
        return binomial(v.len(), k) as u64;
    }
    count_monochromatic(&coloring_of(v), k).expect("k >= 3")
}

/// No collinear triple through vertex `moved`.
fn strict_through(v: &[Point], moved: usize) -> bool {
    let n = v.len();
    (0..n).filter(|&i| i != moved).all(|i| {
        (i + 1..n)
            .filter(|&j| j != moved)
            .all(|j| delta(v[moved], v[i], v[j]) != 0)
    })
}

fn random_point(rng: &mut ChaCha8Rng, bound: i64) -> Point {
    Point::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)).expect("box is in range")
}

const INIT_ATTEMPTS: u32 = 10_000;

fn random_strict(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Result<Vec<Point>> {
    let mut v: Vec<Point> = Vec::with_capacity(n);
    let mut attempts = 0;
    while v.len() < n {
        attempts += 1;
        if attempts > INIT_ATTEMPTS {
            return Err(Error::Exhausted {
                attempts: INIT_ATTEMPTS,
                what: format!("could not place {n} points in general position in the box"),
            });
        }
        v.push(random_point(rng, bound));
        let last = v.len() - 1;
        if !strict_through(&v, last) {
            v.pop();
        }
    }
    Ok(v)
}

/// Result of one annealing run.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub index: u64,
    pub seed: u64,
    pub best: Polygon,
    pub objective: u64,
    /// `(iteration, objective)` each time the best-so-far improved, starting at iteration 0.
    pub improvements: Vec<(u64, u64)>,
}

/// Anneal from one starting polygon.
pub fn run_restart(cfg: &SearchConfig, index: u64) -> Result<RestartOutcome> {
    cfg.validate()?;
    let seed = restart_seed(cfg.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = match (&cfg.initial, index) {
        (Some(p), 0) => p.vertices().to_vec(),
        _ => random_strict(&mut rng, cfg.n, cfg.box_bound)?,
    };
    let mut current_obj = objective(&current, cfg.k);
    let mut best = current.clone();
    let mut best_obj = current_obj;
    let mut improvements = vec![(0, best_obj)];
    let mut temperature = cfg.initial_temperature;

    for iter in 1..=cfg.max_iterations {
        if best_obj == 0 {
            break;
        }
        let v = rng.gen_range(0..cfg.n);
        let dx = rng.gen_range(-cfg.radius..=cfg.radius);
        let dy = rng.gen_range(-cfg.radius..=cfg.radius);
        let threshold: f64 = rng.gen();
        temperature *= cfg.decay;

        let old = current[v];
        let (x, y) = (old.x() + dx, old.y() + dy);
        if x.abs() > cfg.box_bound || y.abs() > cfg.box_bound {
            continue;
        }
        current[v] = Point::new(x, y).expect("inside the box");
        if !strict_through(&current, v) {
            current[v] = old;
            continue;
        }
        let obj = objective(&current, cfg.k);
        let accept = obj <= current_obj || threshold < (-((obj - current_obj) as f64) / temperature).exp();
        if !accept {
            current[v] = old;
            continue;
        }
        current_obj = obj;
        if current_obj < best_obj {
            best_obj = current_obj;
            best.clone_from(&current);
            improvements.push((iter, best_obj));
        }
    }

    Ok(RestartOutcome {
        index,
        seed,
        best: Polygon::new(best)?,
        objective: best_obj,
        improvements,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: Polygon,
    /// Convex sub-k-gons of `best`, recounted by exhaustive enumeration.
    pub objective: u64,
    /// Restart that produced `best`.
    pub restart: u64,
    /// Restarts that reached objective 0.
    pub zero_restarts: u64,
    pub certificate: Option<Certificate>,
}

/// Run all restarts (on `workers` threads when `workers > 1`) and keep the
/// best polygon: fewest convex sub-k-gons, then smallest flattened encoding.
/// The outcome does not depend on `workers`.
pub fn search_extremal(cfg: &SearchConfig, workers: usize) -> Result<SearchOutcome> {
    cfg.validate()?;
    let outcomes: Vec<RestartOutcome> = if workers <= 1 {
        (0..cfg.restarts)
            .map(|i| run_restart(cfg, i))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Capability(format!("cannot start {workers} worker threads: {e}")))?;
        pool.install(|| {
            (0..cfg.restarts)
                .into_par_iter()
                .map(|i| run_restart(cfg, i))
                .collect::<Result<_>>()
        })?
    };

    let zero_restarts = outcomes.iter().filter(|o| o.objective == 0).count() as u64;
    let winner = outcomes
        .into_iter()
        .min_by(|a, b| (a.objective, a.best.flatten()).cmp(&(b.objective, b.best.flatten())))
        .expect("at least one restart");

    let recount = count_convex_subgons(
        &winner.best,
        cfg.k.min(winner.best.len()),
        &CountOptions::default(),
    )?;
    let objective = if cfg.k > winner.best.len() {
        0
    } else {
        recount.count
    };
    assert_eq!(
        objective, winner.objective,
        "search objective disagrees with exhaustive recount on {}",
        winner.best
    );
    let certificate = if objective == 0 {
        Some(verify_certificate(&winner.best, cfg.k)?)
    } else {
        None
    };
    Ok(SearchOutcome {
        best: winner.best,
        objective,
        restart: winner.index,
        zero_restarts,
        certificate,
    })
}

/// Try to extend a certificate by one vertex.
///
/// Candidates are drawn uniformly from the box, cycling through the `n + 1`
/// insertion positions, for `cfg.max_iterations` draws in total. The first
/// strict extension that still has no convex sub-k-gon is re-verified with
/// the oracle and returned.
pub fn grow(p: &Polygon, cfg: &SearchConfig) -> Result<Option<Polygon>> {
    if cfg.box_bound < 1 || cfg.box_bound > COORD_BOUND {
        return Err(Error::Input(format!("box bound must be in 1..={COORD_BOUND}")));
    }
    if !verify_certificate(p, cfg.k)?.verified {
        return Err(Error::Precondition(format!(
            "the input polygon has a convex sub-{}-gon, so it is not a certificate",
            cfg.k
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let slots = p.len() + 1;
    let mut v = p.vertices().to_vec();
    for draw in 0..cfg.max_iterations {
        let pos = (draw % slots as u64) as usize;
        let candidate = random_point(&mut rng, cfg.box_bound);
        v.insert(pos, candidate);
        let strict = crate::geometry::first_collinear_triple(&Polygon::new(v.clone())?).is_none();
        if strict && objective(&v, cfg.k) == 0 {
            let grown = Polygon::new(v.clone())?;
            if verify_certificate(&grown, cfg.k)?.verified {
                return Ok(Some(grown));
            }
        }
        v.remove(pos);
    }
    Ok(None)
}
