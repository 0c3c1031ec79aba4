mod common;

use rand::Rng;
use spnet::distributions::{CliqueSizeLaw, DegreeGf, DegreeLaw};
use spnet::netgen::{self, GenError, GenParams, LinkType, SocialPhysicalNetwork};

fn random_params<R: Rng>(rng: &mut R) -> GenParams {
    let sizes = rng.random_range(1..=5);
    let weights: Vec<f64> = (0..sizes).map(|_| rng.random::<f64>() + 0.01).collect();
    let total: f64 = weights.iter().sum();
    let law = |rng: &mut R| {
        if rng.random::<bool>() {
            DegreeLaw::poisson(rng.random_range(0.0..4.0)).unwrap()
        } else {
            DegreeLaw::power_law_cutoff(rng.random_range(1.5..3.5), rng.random_range(2.0..20.0))
                .unwrap()
        }
    };
    GenParams {
        nodes: rng.random_range(50..=2000),
        clique_law: CliqueSizeLaw::new(weights.iter().map(|w| w / total).collect()).unwrap(),
        alpha: rng.random(),
        type1_law: law(rng),
        type2_law: law(rng),
        seed: rng.random(),
    }
}

/// Structural checks written out independently of `check_invariants`.
fn assert_structure(net: &SocialPhysicalNetwork, nodes: usize) {
    assert_eq!(net.clique_of.len(), nodes);
    assert_eq!(
        net.clique_sizes.iter().map(|&s| s as usize).sum::<usize>(),
        nodes
    );
    let mut seen = vec![0u32; net.clique_sizes.len()];
    for &c in &net.clique_of {
        seen[c as usize] += 1;
    }
    assert_eq!(seen, net.clique_sizes);
    assert!(net.clique_sizes.iter().all(|&s| s >= 1));
    for &(u, v) in &net.type1_edges {
        assert_ne!(
            net.clique_of[u as usize], net.clique_of[v as usize],
            "type-1 edge inside a clique"
        );
    }
    for &(u, v) in &net.type2_edges {
        assert_ne!(u, v);
        assert!(
            net.online[u as usize] && net.online[v as usize],
            "type-2 edge with an offline endpoint"
        );
    }
    for (edges, stats) in [
        (&net.type1_edges, &net.type1_stats),
        (&net.type2_edges, &net.type2_stats),
    ] {
        assert_eq!(
            2 * edges.len() + stats.parity_discarded + stats.rejected_discarded,
            stats.drawn_stubs
        );
        assert!(stats.parity_discarded <= 1);
        assert_eq!(stats.parity_discarded, stats.drawn_stubs % 2);
    }
}

#[test]
fn invariants_hold_over_random_draws() {
    let mut rng = common::rng(2024);
    let mut generated = 0;
    for _ in 0..100 {
        let params = random_params(&mut rng);
        match netgen::generate(&params) {
            Ok(net) => {
                assert_structure(&net, params.nodes);
                net.check_invariants().unwrap();
                generated += 1;
            }
            // Only a wiring failure is acceptable, and only for a link type that had stubs.
            Err(GenError::Wiring { total, .. }) => assert!(total > 0),
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(generated >= 95, "only {generated} of 100 draws generated");
}

#[test]
fn dump_round_trips() {
    let mut rng = common::rng(7);
    for _ in 0..10 {
        let params = random_params(&mut rng);
        let Ok(net) = netgen::generate(&params) else {
            continue;
        };
        let back: SocialPhysicalNetwork = net.to_dump().parse().unwrap();
        assert_eq!(back.clique_of, net.clique_of);
        assert_eq!(back.clique_sizes, net.clique_sizes);
        assert_eq!(back.online, net.online);
        assert_eq!(back.type1_edges, net.type1_edges);
        assert_eq!(back.type2_edges, net.type2_edges);
        assert_eq!(back.to_dump(), net.to_dump());
    }
}

#[test]
fn same_seed_same_network() {
    let mut rng = common::rng(99);
    let params = random_params(&mut rng);
    let a = netgen::generate(&params).unwrap();
    let b = netgen::generate(&params).unwrap();
    assert_eq!(a, b);
    let c = netgen::generate(&GenParams {
        seed: params.seed ^ 1,
        ..params.clone()
    })
    .unwrap();
    assert_ne!(a.to_dump(), c.to_dump());
}

#[test]
fn single_clique_with_links_fails_naming_type1() {
    let params = GenParams {
        nodes: 30,
        clique_law: CliqueSizeLaw::point_mass(30),
        alpha: 0.0,
        type1_law: DegreeLaw::point_mass(2),
        type2_law: DegreeLaw::point_mass(0),
        seed: 1,
    };
    match netgen::generate(&params) {
        Err(
            e @ GenError::Wiring {
                link: LinkType::Physical,
                ..
            },
        ) => assert!(e.to_string().contains("type-1")),
        other => panic!("expected a type-1 wiring failure, got {other:?}"),
    }
}

#[test]
fn online_fraction_and_degrees_follow_the_laws() {
    let params = GenParams {
        nodes: 12000,
        clique_law: CliqueSizeLaw::new(vec![1.0 / 3.0; 3]).unwrap(),
        alpha: 0.3,
        type1_law: DegreeLaw::poisson(2.0).unwrap(),
        type2_law: DegreeLaw::power_law_cutoff(3.0, 10.0).unwrap(),
        seed: 3,
    };
    let net = netgen::generate(&params).unwrap();
    let online = net.online.iter().filter(|&&o| o).count() as f64;
    let n = params.nodes as f64;
    // binomial count, 4 standard deviations
    assert!((online - 0.3 * n).abs() < 4.0 * (n * 0.3 * 0.7).sqrt());
    let mean_deg1 = 2.0 * net.type1_edges.len() as f64 / n;
    assert!((mean_deg1 - 2.0).abs() < 0.08, "{mean_deg1}");
    let mean_deg2 = 2.0 * net.type2_edges.len() as f64 / online;
    assert!(
        (mean_deg2 - params.type2_law.mean()).abs() < 0.1,
        "{mean_deg2}"
    );
}
