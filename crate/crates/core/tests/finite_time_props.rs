mod common;

use common::*;
use fastcons_core::dynamics::a_power;
use fastcons_core::finite_time::{
    annihilation_residuals, deadbeat_gains, deadbeat_schedule, final_consensus_state, product_annihilation,
    propagation_bound, schedule_for_eigenvalues, verify_nilpotent,
};
use fastcons_core::precise::{annihilation_multiprecision, simulate_deadbeat_extended};
use fastcons_core::sim::uniform_initial_state;
use fastcons_core::spectrum::spectrum_default;
use fastcons_core::stability::char_poly;
use fastcons_core::{Graph, Matrix, SystemConfig};
use proptest::prelude::*;

/// Unit roundoff of double-double arithmetic, `2^-104`.
const DD_UNIT_ROUNDOFF: f64 = 4.93e-32;

fn tau_cfg(max_order: usize) -> impl Strategy<Value = SystemConfig> {
    (1..=max_order, 0.05..0.5f64).prop_map(|(n, tau)| SystemConfig::new(n, tau).unwrap())
}

/// `(1/N)(𝟏𝟏ᵀ ⊗ A^k) x₀`, per agent.
fn averaged_drift(cfg: &SystemConfig, x0: &[f64], k: u64) -> Vec<f64> {
    let n = cfg.order();
    let agents = x0.len() / n;
    let ones = Matrix::from_fn(agents, agents, |_, _| 1.0 / agents as f64);
    let big = ones.kron(&a_power(cfg, k));
    big.mul_vec(x0)[..n].to_vec()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn schedule_reaches_consensus(g in connected_graph(12), cfg in tau_cfg(4), seed in any::<u64>()) {
        let s = spectrum_default(&g).unwrap();
        let sched = deadbeat_schedule(&s, &cfg).unwrap();
        let x0 = uniform_initial_state(g.node_count(), cfg.order(), 5.0, seed);
        let t = sched.consensus_step();
        prop_assert_eq!(t, cfg.order() * s.distinct_count());
        // Attainable accuracy: 1e-8 relative plus the rounding bound ‖x0‖∞·u·Γ,
        // with u the unit roundoff and Γ the schedule's worst amplification.
        let gamma = propagation_bound(&s.distinct_values(), &cfg, &sched);
        let rounding = max_abs(&x0) * DD_UNIT_ROUNDOFF * gamma;
        let traj = simulate_deadbeat_extended(&g, &cfg, &s, &x0, t + 10).unwrap();
        let states = traj.states().unwrap();
        for k in t..=t + 10 {
            let want = final_consensus_state(&cfg, &x0, k as u64).unwrap();
            let tol = 1e-8 * max_abs(&x0).max(max_abs(&want)) + rounding;
            for agent in states[k].chunks_exact(cfg.order()) {
                prop_assert!(max_abs_diff(agent, &want) <= tol, "k={} gamma={:e}", k, gamma);
            }
            prop_assert!(traj.errors()[k] <= tol * (states[k].len() as f64).sqrt());
        }
    }

    #[test]
    fn ascending_order_also_annihilates(g in connected_graph(12), cfg in tau_cfg(4)) {
        let s = spectrum_default(&g).unwrap();
        let mut order = s.distinct_values();
        order.reverse();
        let sched = schedule_for_eigenvalues(&order, &cfg).unwrap();
        for r in annihilation_residuals(&s.distinct_values(), &cfg, &sched).unwrap() {
            prop_assert!(r.residual <= 1e-8);
        }
    }

    #[test]
    fn mismatched_gains_leave_exact_residue(cfg in tau_cfg(6), lambda in 0.05..30.0f64, rel in -0.5..0.5f64) {
        // Gains built for λ' applied at λ give ρ zⁿ + (1 − ρ)(z − 1)ⁿ, ρ = λ/λ'.
        prop_assume!(rel.abs() > 1e-4);
        let design = lambda * (1.0 + rel);
        let k = deadbeat_gains(&cfg, design);
        let rho = lambda / design;
        let p = char_poly(&cfg, lambda, &k).unwrap();
        let n = cfg.order();
        let mut off = 0.0f64;
        for (j, b) in p.coeffs.iter().enumerate().skip(1) {
            let want = (1.0 - rho) * if j % 2 == 0 { 1.0 } else { -1.0 } * pascal(n, j);
            prop_assert!((b - want).abs() <= 1e-9 * pascal(n, j));
            off = off.max(b.abs());
        }
        prop_assert!(off >= (1.0 - rho).abs() * n as f64 * 0.999);
        prop_assert!(!verify_nilpotent(&cfg, lambda, &k));
    }

    #[test]
    fn multiprecision_product_vanishes(g in connected_graph(12), cfg in tau_cfg(4)) {
        let s = spectrum_default(&g).unwrap();
        let sched = deadbeat_schedule(&s, &cfg).unwrap();
        for r in annihilation_multiprecision(&s.distinct_values(), &cfg, &sched).unwrap() {
            prop_assert!(r.max_norm <= 1e-20, "{} at {}", r.max_norm, r.lambda);
        }
    }

    #[test]
    fn shifted_schedule_leaves_residue(g in connected_graph(12), cfg in tau_cfg(4), rel in 1e-6..1e-2f64) {
        let s = spectrum_default(&g).unwrap();
        let eigs = s.distinct_values();
        let shifted: Vec<f64> = eigs.iter().map(|l| l * (1.0 + rel)).collect();
        let sched = schedule_for_eigenvalues(&shifted, &cfg).unwrap();
        // The last block only meets its own eigenvalue once every earlier
        // block has acted, and then leaves a nonzero residue of order rel.
        let last = *eigs.last().unwrap();
        let r = annihilation_multiprecision(&[last], &cfg, &sched).unwrap()[0];
        prop_assert!(r.max_norm > 1e-3 * rel * r.scale.min(1.0), "{:?}", r);
    }

    #[test]
    fn blocks_are_nilpotent(cfg in tau_cfg(6), lambda in 0.05..30.0f64) {
        let k = deadbeat_gains(&cfg, lambda);
        prop_assert!(verify_nilpotent(&cfg, lambda, &k));
        let p = char_poly(&cfg, lambda, &k).unwrap();
        for (j, b) in p.coeffs.iter().enumerate().skip(1) {
            prop_assert!(b.abs() <= 1e-9 * pascal(cfg.order(), j));
        }
    }

    #[test]
    fn annihilation_on_random_graphs(g in connected_graph(12), cfg in tau_cfg(4)) {
        let s = spectrum_default(&g).unwrap();
        let sched = deadbeat_schedule(&s, &cfg).unwrap();
        for r in product_annihilation(&s, &cfg, &sched).unwrap() {
            prop_assert!(r.residual <= 1e-8, "{} at {}", r.residual, r.lambda);
        }
    }

    #[test]
    fn schedule_scaling_covariance(g in connected_graph(10), cfg in tau_cfg(4), alpha in 0.1..10.0f64) {
        let s = spectrum_default(&g).unwrap();
        let t = spectrum_default(&g.scaled(alpha).unwrap()).unwrap();
        let a = deadbeat_schedule(&s, &cfg).unwrap();
        let b = deadbeat_schedule(&t, &cfg).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for ((ka, la), (kb, lb)) in a.entries().iter().zip(a.eigen_order().iter().flat_map(|l| std::iter::repeat_n(*l, cfg.order())))
            .zip(b.entries().iter().zip(b.eigen_order().iter().flat_map(|l| std::iter::repeat_n(*l, cfg.order()))))
        {
            let pa: Vec<f64> = ka.iter().map(|k| k * la).collect();
            let pb: Vec<f64> = kb.iter().map(|k| k * lb).collect();
            prop_assert!(max_abs_diff(&pa, &pb) <= 1e-12 * max_abs(&pa));
            let scaled: Vec<f64> = ka.iter().map(|k| k / alpha).collect();
            prop_assert!(max_abs_diff(&scaled, kb) <= 1e-12 * max_abs(kb));
        }
    }

    #[test]
    fn consensus_state_is_averaged_drift(agents in 1usize..10, cfg in tau_cfg(5), seed in any::<u64>(), k in 0u64..60) {
        let x0 = uniform_initial_state(agents, cfg.order(), 5.0, seed);
        let got = final_consensus_state(&cfg, &x0, k).unwrap();
        let want = averaged_drift(&cfg, &x0, k);
        prop_assert!(max_abs_diff(&got, &want) <= 1e-12 * max_abs(&want).max(1.0));
    }
}

#[test]
fn disconnected_graph_has_no_schedule() {
    let g = Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
    let s = spectrum_default(&g).unwrap();
    assert!(deadbeat_schedule(&s, &SystemConfig::new(2, 0.1).unwrap()).is_err());
}
