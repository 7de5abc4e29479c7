use eszk_core::extremal::{run_restart, SEVEN_GON};
use eszk_core::*;

fn small_cfg(n: usize, seed: u64) -> SearchConfig {
    SearchConfig {
        restarts: 12,
        max_iterations: 1500,
        ..SearchConfig::new(n, 4, seed)
    }
}

#[test]
fn best_so_far_never_increases() {
    let cfg = small_cfg(8, 3);
    for i in 0..cfg.restarts {
        let r = run_restart(&cfg, i).unwrap();
        assert!(r
            .improvements
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
        assert_eq!(r.improvements.last().unwrap().1, r.objective);
    }
}

#[test]
fn parallel_and_serial_searches_agree() {
    let cfg = small_cfg(7, 11);
    let serial = search_extremal(&cfg, 1).unwrap();
    assert_eq!(search_extremal(&cfg, 1).unwrap(), serial);
    assert_eq!(search_extremal(&cfg, 4).unwrap(), serial);
}

#[test]
fn reported_objective_matches_recount() {
    for seed in 0..4 {
        let cfg = SearchConfig {
            restarts: 4,
            max_iterations: 300,
            ..SearchConfig::new(9, 4, seed)
        };
        let out = search_extremal(&cfg, 2).unwrap();
        let recount = count_convex_subgons(&out.best, 4, &CountOptions::default()).unwrap();
        assert_eq!(out.objective, recount.count);
        assert_eq!(out.certificate.is_some(), out.objective == 0);
        for v in out.best.vertices() {
            assert!(v.x().abs() <= cfg.box_bound && v.y().abs() <= cfg.box_bound);
        }
    }
}

#[test]
fn certificates_survive_a_json_round_trip() {
    let cfg = SearchConfig {
        restarts: 20,
        max_iterations: 2000,
        ..SearchConfig::new(5, 4, 7)
    };
    let out = search_extremal(&cfg, 2).unwrap();
    let cert = out
        .certificate
        .expect("5-gons without convex sub-4-gons are easy to find");
    let json = serde_json::to_string(&cert).unwrap();
    let back: Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back.polygon, back.k).unwrap().verified);
}

#[test]
fn growing_a_certified_pentagon() {
    let cfg = SearchConfig {
        restarts: 20,
        max_iterations: 2000,
        ..SearchConfig::new(5, 4, 7)
    };
    let start = search_extremal(&cfg, 1).unwrap().certificate.unwrap().polygon;
    let grown = grow(
        &start,
        &SearchConfig {
            max_iterations: 20_000,
            ..cfg.clone()
        },
    )
    .unwrap();
    if let Some(g) = grown {
        assert_eq!(g.len(), 6);
        let cert = verify_certificate(&g, 4).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.claimed_bound, 7);
        // the original vertices appear in order
        let mut it = g.vertices().iter();
        assert!(start.vertices().iter().all(|v| it.any(|w| w == v)));
    }
}

#[test]
fn growing_the_seven_gon_only_returns_certificates() {
    let p = Polygon::from_coords(&SEVEN_GON).unwrap();
    let cfg = SearchConfig {
        max_iterations: 4000,
        ..SearchConfig::new(7, 4, 5)
    };
    if let Some(g) = grow(&p, &cfg).unwrap() {
        assert!(verify_certificate(&g, 4).unwrap().verified);
        assert_eq!(
            f_bounds(4, &[verify_certificate(&g, 4).unwrap()])
                .unwrap()
                .lower
                .value,
            9
        );
    }
}

#[test]
fn stored_certificates_raise_lower_bounds() {
    let cfg = SearchConfig {
        restarts: 20,
        max_iterations: 2000,
        ..SearchConfig::new(5, 5, 2)
    };
    // any 5-gon that is not convex certifies F(5) >= 6
    let out = search_extremal(&cfg, 1).unwrap();
    let cert = out.certificate.unwrap();
    let b = f_bounds(5, &[cert]).unwrap();
    assert_eq!(b.lower.value, 6);
    assert!(b.upper.is_none());
}
