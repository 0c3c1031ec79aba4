mod common;

use rand::Rng;
use spnet::analytic::{
    self, build_profile, critical_tw, moments, sigma_at, solve_at, CriticalTw, FixedPointOptions,
    Recursion,
};
use spnet::distributions::{CliqueSizeLaw, DegreeGf, DegreeLaw};
use spnet::harness::{ScenarioConfig, ScenarioLaws};

fn preset(k: usize, lambda: f64, alpha: f64) -> (ScenarioLaws, f64) {
    let cfg = ScenarioConfig::preset(k, lambda, alpha, 3.0, 10.0).unwrap();
    (cfg.laws().unwrap(), cfg.alpha)
}

#[test]
fn profile_mass_is_conserved() {
    let mut rng = common::rng(31);
    for _ in 0..100 {
        let d = rng.random_range(1..=8);
        let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let law = CliqueSizeLaw::new(w.iter().map(|x| x / total).collect()).unwrap();
        let alpha = rng.random::<f64>();
        let p = build_profile(&law, alpha);
        for n in 1..=d {
            let row: f64 = (0..=n).map(|m| p.mu_nm(n, m)).sum();
            assert!((row - law.prob(n)).abs() < 1e-12);
        }
        for m in 0..=d {
            let direct: f64 = (m.max(1)..=d)
                .map(|n| {
                    law.prob(n)
                        * common::binomial(n, m)
                        * alpha.powi(m as i32)
                        * (1.0 - alpha).powi((n - m) as i32)
                })
                .sum();
            assert!((p.mu_f(m) - direct).abs() < 1e-12);
            let column: f64 = (1..=d).map(|n| p.mu_nm(n, m)).sum();
            assert!((p.mu_f(m) - column).abs() < 1e-12);
        }
        let all: f64 = p.cells().map(|c| c.2).sum();
        assert!((all - 1.0).abs() < 1e-12);
    }
}

/// Draws super-node degrees directly: clique size, online members by coin
/// flips, each member's degree from the base law, each stub kept with
/// probability T.
#[test]
fn moments_match_sampled_cliques() {
    let (laws, alpha) = preset(4, 2.0, 0.3);
    let (t_w, t_f) = (0.3, 0.7);
    let m = moments(
        &build_profile(&laws.clique_law, alpha),
        &laws.type1.thin(t_w).unwrap(),
        &laws.type2.thin(t_f).unwrap(),
    );
    let mut rng = common::rng(32);
    let thinned = |law: &DegreeLaw, t: f64, rng: &mut rand_chacha::ChaCha8Rng| {
        let k = law.sample(rng);
        (0..k).filter(|_| rng.random::<f64>() < t).count() as f64
    };
    let samples = 1_000_000;
    let mut cols: [Vec<f64>; 5] = Default::default();
    for _ in 0..samples {
        let n = laws.clique_law.sample(&mut rng);
        let online = (0..n).filter(|_| rng.random::<f64>() < alpha).count();
        let dw: f64 = (0..n).map(|_| thinned(&laws.type1, t_w, &mut rng)).sum();
        let df: f64 = (0..online)
            .map(|_| thinned(&laws.type2, t_f, &mut rng))
            .sum();
        for (c, v) in cols.iter_mut().zip([dw, df, dw * df, dw * dw, df * df]) {
            c.push(v);
        }
    }
    let expected = [m.mean_w, m.mean_f, m.cross, m.second_w, m.second_f];
    for (name, (c, e)) in ["E[dw]", "E[df]", "E[dw df]", "E[dw^2]", "E[df^2]"]
        .iter()
        .zip(cols.iter().zip(expected))
    {
        let (mean, se) = common::mean_se(c);
        assert!(
            (mean - e).abs() < 3.0 * se,
            "{name}: sampled {mean} +- {se}, analytic {e}"
        );
    }
}

#[test]
fn iterates_rise_monotonically_to_a_fixed_point() {
    for k in 1..=4 {
        let (laws, alpha) = preset(k, 2.0, 0.3);
        let profile = build_profile(&laws.clique_law, alpha);
        for (t_w, t_f) in [(0.3, 1.0), (0.5, 0.5), (1.0, 1.0), (0.2, 0.2)] {
            let kw = laws.type1.thin(t_w).unwrap();
            let kf = laws.type2.thin(t_f).unwrap();
            let rec = Recursion::new(&profile, &kw, &kf);
            let (r1, r2) = rec.apply(1.0, 1.0);
            assert!(
                (r1 - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12,
                "F(1,1) = ({r1}, {r2})"
            );
            let mut prev = (0.0, 0.0);
            for (h1, h2) in rec.iterates().take(2000) {
                assert!(
                    h1 >= prev.0 && h2 >= prev.1,
                    "scenario {k}: {prev:?} -> ({h1}, {h2})"
                );
                assert!(h1 <= 1.0 && h2 <= 1.0);
                prev = (h1, h2);
            }
            let fp = analytic::fixed_point(&profile, &kw, &kf, FixedPointOptions::default());
            assert!(fp.converged);
            let (a, b) = rec.apply(fp.h1, fp.h2);
            assert!((a - fp.h1).abs() < 1e-9 && (b - fp.h2).abs() < 1e-9);
        }
    }
}

#[test]
fn sigma_is_monotone_on_the_grid() {
    for (lambda, alpha) in [(1.5, 0.1), (2.0, 0.3)] {
        for k in 1..=4 {
            let (laws, alpha) = preset(k, lambda, alpha);
            let profile = build_profile(&laws.clique_law, alpha);
            let s = |i: usize, j: usize| {
                sigma_at(
                    &profile,
                    &laws.type1,
                    &laws.type2,
                    i as f64 / 10.0,
                    j as f64 / 10.0,
                )
                .unwrap()
            };
            let grid: Vec<Vec<f64>> = (0..=10)
                .map(|i| (0..=10).map(|j| s(i, j)).collect())
                .collect();
            for i in 0..=10 {
                for j in 0..=10 {
                    if i > 0 {
                        assert!(grid[i][j] >= grid[i - 1][j] - 1e-14);
                    }
                    if j > 0 {
                        assert!(grid[i][j] >= grid[i][j - 1] - 1e-14);
                    }
                }
            }
        }
    }
}

#[test]
fn critical_tw_sits_on_the_boundary() {
    for (lambda, alpha) in [(1.5, 0.1), (2.0, 0.3)] {
        for k in 1..=4 {
            let (laws, alpha) = preset(k, lambda, alpha);
            let profile = build_profile(&laws.clique_law, alpha);
            for j in 0..=10 {
                let t_f = j as f64 / 10.0;
                let sigma =
                    |t_w: f64| sigma_at(&profile, &laws.type1, &laws.type2, t_w, t_f).unwrap();
                match critical_tw(&profile, &laws.type1, &laws.type2, t_f).unwrap() {
                    CriticalTw::At(0.0) => assert!(sigma(0.0) > 1.0),
                    CriticalTw::At(c) => {
                        assert!(
                            (sigma(c) - 1.0).abs() < 5e-4,
                            "scenario {k} T_f {t_f}: sigma {}",
                            sigma(c)
                        );
                        if c > 1e-3 {
                            assert!(sigma(c - 1e-3) < 1.0);
                        }
                        if c < 1.0 - 1e-3 {
                            assert!(sigma(c + 1e-3) > 1.0);
                        }
                    }
                    CriticalTw::NoEpidemic => assert!(sigma(1.0) < 1.0),
                }
            }
        }
    }
}

/// Single-type configuration model: smallest root of u = G1(1 - T + T u)
/// by bisection, straight from the probability table.
fn scalar_solution(probs: &[f64], t: f64) -> (f64, f64) {
    let mean: f64 = probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let excess: f64 = probs
        .iter()
        .enumerate()
        .map(|(k, p)| (k * k) as f64 * p)
        .sum::<f64>()
        - mean;
    let sigma = t * excess / mean;
    if sigma <= 1.0 {
        return (sigma, 0.0);
    }
    let g0 = |x: f64| {
        probs
            .iter()
            .enumerate()
            .map(|(k, p)| p * x.powi(k as i32))
            .sum::<f64>()
    };
    let g1 = |x: f64| {
        probs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, p)| k as f64 * p * x.powi(k as i32 - 1))
            .sum::<f64>()
            / mean
    };
    let f = |u: f64| g1(1.0 - t + t * u) - u;
    // f(0) >= 0; f < 0 just below 1 when supercritical
    let (mut lo, mut hi) = (0.0, 1.0 - 1e-6);
    assert!(f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    (sigma, 1.0 - g0(1.0 - t + t * u))
}

#[test]
fn unit_cliques_reduce_to_single_type_percolation() {
    let profile = build_profile(&CliqueSizeLaw::point_mass(1), 0.0);
    let none = DegreeLaw::point_mass(0);
    let opts = FixedPointOptions {
        tol: 1e-14,
        max_iter: 1_000_000,
    };
    for lambda in [0.5, 1.0, 2.0, 3.0] {
        for t in [0.25, 0.5, 0.8, 1.0] {
            let kw = DegreeLaw::poisson(lambda).unwrap();
            let sol = solve_at(&profile, &kw, &none, t, 1.0, opts).unwrap();
            assert!(
                (sol.sigma - lambda * t).abs() < 1e-8,
                "sigma {} vs {}",
                sol.sigma,
                lambda * t
            );
            let giant = common::poisson_giant(lambda * t);
            assert!(
                (sol.s_n - giant).abs() < 1e-8,
                "lambda {lambda} T {t}: {} vs {giant}",
                sol.s_n
            );
            assert_eq!(sol.s_c, sol.s_n);
        }
    }
    for (exponent, cutoff) in [(2.0, 10.0), (2.5, 20.0), (3.0, 10.0)] {
        let kw = DegreeLaw::power_law_cutoff(exponent, cutoff).unwrap();
        for t in [0.5, 0.8, 1.0] {
            let sol = solve_at(&profile, &kw, &none, t, 1.0, opts).unwrap();
            let (sigma, s) = scalar_solution(kw.probabilities(), t);
            assert!((sol.sigma - sigma).abs() < 1e-8);
            assert!(
                (sol.s_n - s).abs() < 1e-8,
                "power law {exponent}/{cutoff} T {t}: {} vs {s}",
                sol.s_n
            );
        }
    }
}

#[test]
fn online_layer_alone_matches_single_type_on_unit_cliques() {
    // all nodes online, no type-1 links: the online layer is the whole graph
    let profile = build_profile(&CliqueSizeLaw::point_mass(1), 1.0);
    let none = DegreeLaw::point_mass(0);
    let kf = DegreeLaw::poisson(2.5).unwrap();
    let sol = solve_at(
        &profile,
        &none,
        &kf,
        1.0,
        0.6,
        FixedPointOptions {
            tol: 1e-14,
            max_iter: 1_000_000,
        },
    )
    .unwrap();
    assert!((sol.sigma - 1.5).abs() < 1e-8);
    assert!((sol.s_n - common::poisson_giant(1.5)).abs() < 1e-8);
}

#[test]
fn absent_online_links_leave_the_physical_threshold() {
    let (laws, alpha) = preset(2, 1.5, 0.1);
    let profile = build_profile(&laws.clique_law, alpha);
    let at_zero = sigma_at(&profile, &laws.type1, &laws.type2, 0.5, 0.0).unwrap();
    let m = moments(
        &profile,
        &laws.type1.thin(0.5).unwrap(),
        &DegreeLaw::point_mass(0),
    );
    assert!((at_zero - (m.second_w / m.mean_w - 1.0)).abs() < 1e-12);
    assert_eq!(laws.type2.thin(0.0).unwrap().mean(), 0.0);
}
