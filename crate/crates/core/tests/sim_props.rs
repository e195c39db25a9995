mod common;

use common::*;
use fastcons_core::dynamics::closed_loop_block;
use fastcons_core::sim::{agent_mean, error_series, simulate_constant};
use fastcons_core::spectrum::spectrum_default;
use fastcons_core::{Graph, GainVector, SystemConfig};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Graph, SystemConfig, GainVector)> {
    (connected_graph(10), system(4)).prop_flat_map(|(g, cfg)| (Just(g), Just(cfg), gains(cfg.order(), 5.0)))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn agreement_is_invariant((g, cfg, k) in instance(), v in state(4)) {
        let n = cfg.order();
        let v = v[..n].to_vec();
        let x0: Vec<f64> = (0..g.node_count()).flat_map(|_| v.clone()).collect();
        let traj = simulate_constant(&g, &cfg, &k, &x0, 30).unwrap();
        let a = plain_a(&cfg);
        let mut drift = v.clone();
        for state in traj.states().unwrap() {
            for agent in state.chunks_exact(n) {
                prop_assert_eq!(agent, drift.as_slice());
            }
            drift = a.mul_vec(&drift);
        }
    }

    #[test]
    fn error_ignores_consensus_shift((g, cfg, k) in instance(), seed_state in state(40), v in state(4)) {
        let n = cfg.order();
        let x0 = seed_state[..g.node_count() * n].to_vec();
        let shifted: Vec<f64> = x0.chunks_exact(n).flat_map(|a| a.iter().zip(&v).map(|(x, s)| x + s).collect::<Vec<_>>()).collect();
        let a = simulate_constant(&g, &cfg, &k, &x0, 20).unwrap();
        let b = simulate_constant(&g, &cfg, &k, &shifted, 20).unwrap();
        for (ea, eb) in a.errors().iter().zip(b.errors()) {
            let scale = ea.max(1.0).max(max_abs(a.final_state()));
            prop_assert!((ea - eb).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn trajectory_decomposes_by_eigenvector((g, cfg, k) in instance(), seed_state in state(40)) {
        let n = cfg.order();
        let agents = g.node_count();
        let x0 = seed_state[..agents * n].to_vec();
        let traj = simulate_constant(&g, &cfg, &k, &x0, 20).unwrap();
        let s = spectrum_default(&g).unwrap();
        // x(k) = Σ_i (v_i ⊗ H_i^k)(v_iᵀ ⊗ I) x(0)
        let mut modes: Vec<Vec<f64>> = (0..agents)
            .map(|i| (0..n).map(|m| (0..agents).map(|a| s.eigenvectors[(a, i)] * x0[a * n + m]).sum()).collect())
            .collect();
        let blocks: Vec<_> = s.eigenvalues.iter().map(|&l| closed_loop_block(&cfg, l, &k).unwrap()).collect();
        for state in traj.states().unwrap() {
            let rebuilt: Vec<f64> = (0..agents)
                .flat_map(|a| {
                    let (modes, v) = (&modes, &s.eigenvectors);
                    (0..n).map(move |m| (0..agents).map(|i| v[(a, i)] * modes[i][m]).sum::<f64>())
                })
                .collect();
            prop_assert!(max_abs_diff(state, &rebuilt) <= 1e-9 * max_abs(state).max(1.0));
            for (mode, h) in modes.iter_mut().zip(&blocks) {
                *mode = h.mul_vec(mode);
            }
        }
    }

    #[test]
    fn mean_is_preserved_up_to_drift((g, cfg, k) in instance(), seed_state in state(40)) {
        let n = cfg.order();
        let x0 = seed_state[..g.node_count() * n].to_vec();
        let traj = simulate_constant(&g, &cfg, &k, &x0, 15).unwrap();
        let mut mean = agent_mean(&x0, n);
        let a = plain_a(&cfg);
        for state in traj.states().unwrap() {
            let got = agent_mean(state, n);
            prop_assert!(max_abs_diff(&got, &mean) <= 1e-9 * max_abs(state).max(1.0));
            mean = a.mul_vec(&mean);
        }
    }
}

#[test]
fn slope_of_pure_geometric_error() {
    // Two agents, first order: e(k) = |1 − 2τK|^k e(0).
    let g = Graph::path(2).unwrap();
    let cfg = SystemConfig::new(1, 0.1).unwrap();
    let k = GainVector::new(vec![2.0]);
    let traj = simulate_constant(&g, &cfg, &k, &[1.0, -1.0], 50).unwrap();
    let series = error_series(&traj, 10..=40).unwrap();
    assert!((series.slope.unwrap() - 0.6f64.ln()).abs() < 1e-10);
    assert_eq!(series.window, (10, 40));
    assert_eq!(series.points.len(), 51);
}
