mod common;

use common::*;
use signed_consensus::behavior::predict;
use signed_consensus::graph::laplacian_matrix;
use signed_consensus::random::{random_graph, RandomGraphOptions};
use signed_consensus::spectral::{coefficients_for_leader_signs, combine_modes};
use signed_consensus::{
    analyze_connectivity, from_edge_list, graph_hash, leader_modes, parse_graph,
    root_ordered_blocks, simulate, terminal_state, to_edge_list, to_json, Behavior, Rational,
    SimOptions,
};

#[test]
fn data_file_matches_printed_matrix() {
    let text = std::fs::read_to_string(data_path("signed13.txt")).unwrap();
    let parsed = from_edge_list(&text).unwrap();
    assert_eq!(parsed, example_graph());
    assert_eq!(parse_graph(&to_json(&parsed)).unwrap(), parsed);
    assert_eq!(
        graph_hash(&parsed),
        graph_hash(&from_edge_list(&to_edge_list(&parsed)).unwrap())
    );
}

#[test]
fn example_structure() {
    let report = analyze_connectivity(&example_graph());
    assert!(!report.is_quasi_strongly_connected);
    assert!(report.roots.is_empty());
    assert_eq!(report.leaders, vec![0, 3, 4, 5, 9]);
    let groups: Vec<Vec<usize>> = report.leader_groups().iter().map(|g| g.to_vec()).collect();
    assert_eq!(groups, vec![vec![0, 4, 5], vec![3], vec![9]]);
    assert_eq!(report.weak_components.len(), 1);
    assert_eq!(report.unrooted_components, vec![0]);
}

#[test]
fn leader_modes_are_biorthogonal() {
    let g = example_graph();
    let modes = leader_modes::<Rational>(&g).unwrap();
    let l = laplacian_matrix::<Rational>(&g);
    for (a, ma) in modes.iter().enumerate() {
        assert!(l.mul_vec(&ma.right).iter().all(|v| *v == q(0, 1)));
        assert!(l.left_mul_vec(&ma.left).iter().all(|v| *v == q(0, 1)));
        assert!(ma.inner > q(0, 1));
        for (b, mb) in modes.iter().enumerate() {
            let cross = ma
                .left
                .iter()
                .zip(&mb.right)
                .fold(q(0, 1), |s, (x, y)| s + x * y);
            assert_eq!(cross == q(0, 1), a != b);
        }
    }
}

#[test]
fn published_vector_is_a_signed_leader_combination() {
    let g = example_graph();
    let modes = leader_modes::<Rational>(&g).unwrap();
    let coeffs = coefficients_for_leader_signs(&modes, &EXAMPLE_LEADER_SIGNS);
    assert_eq!(coeffs, vec![q(-1, 1), q(1, 1), q(1, 1)]);
    assert_eq!(combine_modes(&modes, &coeffs), example_xi());
    // the default combination differs only on the first group's descendants
    let plain = combine_modes(&modes, &[q(1, 1), q(1, 1), q(1, 1)]);
    assert_eq!(plain[0], q(1, 1));
    assert_eq!(plain[3], q(1, 1));
}

#[test]
fn example_terminal_state_matches_simulation() {
    let g = example_graph();
    let theta = terminal_state(&g, &EXAMPLE_X0).unwrap();
    let traj = simulate(&g, &EXAMPLE_X0, &SimOptions::default()).unwrap();
    assert!(traj.converged);
    for (a, b) in theta.iter().zip(&traj.final_state) {
        assert!((a - b).abs() < 1e-6, "{theta:?} vs {:?}", traj.final_state);
    }
    let exact_x0: Vec<Rational> = EXAMPLE_X0
        .iter()
        .map(|&v| Rational::from_float(v).unwrap())
        .collect();
    let exact = predict::<Rational>(&g, &exact_x0).unwrap();
    assert_eq!(exact.behavior, Behavior::BipartiteContainmentTracking);
    let l = laplacian_matrix::<Rational>(&g);
    assert!(l
        .mul_vec(exact.theta.as_ref().unwrap())
        .iter()
        .all(|v| *v == q(0, 1)));
    // isolated leaders keep their initial values
    assert_eq!(theta[3], 2.0);
    assert_eq!(theta[9], -1.0);
}

#[test]
fn root_block_reassembly_on_random_graph() {
    let opts = RandomGraphOptions {
        spanning_tree: true,
        ..RandomGraphOptions::new(6, 0.35, 42)
    };
    let g = random_graph(&opts).unwrap();
    let report = analyze_connectivity(&g);
    assert!(report.is_quasi_strongly_connected);
    let view = root_ordered_blocks::<Rational>(&g, &report.roots).unwrap();
    let blocks = view.blocks.as_ref().unwrap();
    let direct = laplacian_matrix::<Rational>(&g).permuted(&view.root_order);
    assert_eq!(blocks.reassemble(), direct);
}

#[test]
fn single_precision_agrees_with_exact() {
    let g = from_edge_list("1 2 2\n2 3 -1\n3 1 -0.5\n3 4 1.5\n2 4 1\n").unwrap();
    let single: signed_consensus::Certificate32 = signed_consensus::certify(&g).unwrap();
    let exact = signed_consensus::certify::<Rational>(&g).unwrap();
    for (a, b) in single.xi.iter().zip(&exact.xi) {
        let b: f64 = num_traits::ToPrimitive::to_f64(b).unwrap();
        assert!((f64::from(*a) - b).abs() < 1e-5);
    }
    let report = signed_consensus::classify::<f32>(&g).unwrap();
    assert_eq!(
        report.behavior,
        signed_consensus::classify::<Rational>(&g).unwrap().behavior
    );
    let traj = simulate(&g, &[1.0f32, -2.0, 0.5, 3.0], &SimOptions::default()).unwrap();
    let theta = terminal_state(&g, &[1.0f32, -2.0, 0.5, 3.0]).unwrap();
    for (a, b) in theta.iter().zip(&traj.final_state) {
        assert!((a - b).abs() < 1e-3);
    }
}
