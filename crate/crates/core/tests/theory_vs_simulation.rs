use spnet::analytic::{build_profile, solve_at, FixedPointOptions};
use spnet::harness::ScenarioConfig;
use spnet::percolate::run_ensemble;

fn check(k: usize, t_w: f64, t_f: f64, seed: u64) {
    let cfg = ScenarioConfig::preset(k, 2.0, 0.3, 3.0, 10.0).unwrap();
    let laws = cfg.laws().unwrap();
    let profile = build_profile(&laws.clique_law, cfg.alpha);
    let sol = solve_at(
        &profile,
        &laws.type1,
        &laws.type2,
        t_w,
        t_f,
        FixedPointOptions::default(),
    )
    .unwrap();
    assert!(sol.sigma > 1.1);
    let mut opts = cfg.ensemble_options();
    opts.replications = 200;
    let out = run_ensemble(&cfg.gen_params(&laws), t_w, t_f, &opts, seed).unwrap();
    assert!(
        (out.s_n_mean - sol.s_n).abs() <= 0.03,
        "scenario {k}: S_n sim {} analytic {}",
        out.s_n_mean,
        sol.s_n
    );
    assert!(
        (out.s_c_mean - sol.s_c).abs() <= 0.03,
        "scenario {k}: S_c sim {} analytic {}",
        out.s_c_mean,
        sol.s_c
    );
    assert!(out.p_inf > 0.9, "p_inf {}", out.p_inf);
}

#[test]
fn supercritical_point_matches_simulation() {
    check(4, 0.3, 1.0, 1);
}

#[test]
fn unit_cliques_match_simulation() {
    check(1, 0.3, 1.0, 2);
}
