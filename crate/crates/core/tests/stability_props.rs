mod common;

use common::*;
use fastcons_core::dynamics::closed_loop_block;
use fastcons_core::stability::{
    bilinear_coeffs, bilinear_transform, block_spectral_radius, char_poly, classify_by_roots, disk_stability,
    poly_mul, poly_roots, routh_hurwitz_stable, Stability,
};
use fastcons_core::{GainVector, SystemConfig};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

/// Roots as eigenvalues of the companion matrix.
fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let lead = coeffs[0];
    let n = coeffs.len() - 1;
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -coeffs[j + 1] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().map(|z| Complex64::new(z.re, z.im)).collect()
}

/// Largest distance between matched roots, pairing each oracle root with its
/// nearest unused candidate.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, w)| (i, (z - w).norm() / z.norm().max(1.0)))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}

/// `b_j = λ Σ_{p=1}^{j} (−1)^{j−p} τ^p K_{n+1−p} C(n−p, j−p) + (−1)^j C(n, j)`.
fn indexed_coeffs(cfg: &SystemConfig, lambda: f64, k: &GainVector) -> Vec<f64> {
    let n = cfg.order();
    let sign = |e: usize| if e % 2 == 0 { 1.0 } else { -1.0 };
    (0..=n)
        .map(|j| {
            let sum: f64 = (1..=j)
                .map(|p| sign(j - p) * cfg.tau().powi(p as i32) * k[n - p] * pascal(n - p, j - p))
                .sum();
            lambda * sum + sign(j) * pascal(n, j)
        })
        .collect()
}

fn random_poly(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_degree).prop_flat_map(|d| {
        (prop::sample::select(vec![-1.0, 1.0, 0.5, 3.0]), prop::collection::vec(-5.0..5.0f64, d)).prop_map(|(lead, rest)| {
            let mut c = vec![lead];
            c.extend(rest);
            c
        })
    })
}

fn block_instance() -> impl Strategy<Value = (SystemConfig, f64, GainVector)> {
    (system(6), 0.01..20.0f64).prop_flat_map(|(cfg, lambda)| (Just(cfg), Just(lambda), gains(cfg.order(), 20.0)))
}

fn max_re(roots: &[Complex64]) -> f64 {
    roots.iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn char_poly_matches_determinant_expansion((cfg, lambda, k) in block_instance()) {
        let p = char_poly(&cfg, lambda, &k).unwrap();
        prop_assert_eq!(p.coeffs[0], 1.0);
        let h = closed_loop_block(&cfg, lambda, &k).unwrap();
        let want = leibniz_char_poly(&h);
        let scale = max_abs(&want);
        prop_assert!(max_abs_diff(&p.coeffs, &want) <= 1e-10 * scale);
        prop_assert!(max_abs_diff(&p.coeffs, &indexed_coeffs(&cfg, lambda, &k)) <= 1e-10 * scale);
    }

    #[test]
    fn char_poly_matches_trace_recursion(cfg in system(6), lambda in 0.01..4.0f64, k in gains(6, 2.0)) {
        // The trace recursion cancels badly for large entries; keep them moderate.
        let k = GainVector::new(k[..cfg.order()].to_vec());
        let p = char_poly(&cfg, lambda, &k).unwrap();
        let want = faddeev_leverrier(&closed_loop_block(&cfg, lambda, &k).unwrap());
        prop_assert!(max_abs_diff(&p.coeffs, &want) <= 1e-10 * max_abs(&want));
    }

    #[test]
    fn roots_match_companion_matrix(c in random_poly(6)) {
        let roots = poly_roots(&c).unwrap();
        prop_assert_eq!(roots.len(), c.len() - 1);
        prop_assert!(multiset_distance(&companion_roots(&c), &roots) <= 1e-7);
    }

    #[test]
    fn roots_satisfy_vieta_and_residual(c in random_poly(6)) {
        let roots = poly_roots(&c).unwrap();
        let monic: Vec<f64> = c.iter().map(|x| x / c[0]).collect();
        let n = roots.len();
        let sum: Complex64 = roots.iter().sum();
        let prod: Complex64 = roots.iter().product();
        prop_assert!((sum + monic[1]).norm() <= 1e-7 * monic[1].abs().max(1.0));
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((prod - sign * monic[n]).norm() <= 1e-7 * monic[n].abs().max(1.0));
        let scale = max_abs(&monic);
        for z in &roots {
            let val = monic.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
            prop_assert!(val.norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn roots_ignore_coefficient_scaling(c in random_poly(6), s in prop::sample::select(vec![1e-3, 0.7, 2.0, 1e4])) {
        let scaled: Vec<f64> = c.iter().map(|x| x * s).collect();
        let a = poly_roots(&c).unwrap();
        let b = poly_roots(&scaled).unwrap();
        prop_assert!(multiset_distance(&a, &b) <= 1e-7);
    }

    #[test]
    fn routh_agrees_with_root_oracle(c in random_poly(6)) {
        let roots = companion_roots(&c);
        let closest = roots.iter().fold(f64::INFINITY, |m, z| m.min(z.re.abs()));
        prop_assume!(closest > 1e-6);
        let want = if max_re(&roots) > 0.0 { Stability::Unstable } else { Stability::Stable };
        prop_assert_eq!(routh_hurwitz_stable(&c).unwrap(), want);
        prop_assert_eq!(classify_by_roots(&c).unwrap(), want);
    }

    #[test]
    fn routh_on_stable_products(re in prop::collection::vec(0.05..4.0f64, 1..4), im in prop::collection::vec(0.0..3.0f64, 3)) {
        // Π (s + a)² + b² with a > 0: Hurwitz by construction.
        let mut p = vec![1.0];
        for (a, b) in re.iter().zip(&im) {
            p = poly_mul(&p, &[1.0, 2.0 * a, a * a + b * b]);
        }
        prop_assert_eq!(routh_hurwitz_stable(&p).unwrap(), Stability::Stable);
        // Mirroring one factor puts a pair in the right half plane.
        let mirrored = poly_mul(&p, &[1.0, -2.0 * re[0], re[0] * re[0] + 1.0]);
        prop_assert_eq!(routh_hurwitz_stable(&mirrored).unwrap(), Stability::Unstable);
        // Imaginary-axis pair and a root at the origin are marginal.
        prop_assert_eq!(routh_hurwitz_stable(&poly_mul(&p, &[1.0, 0.0, 4.0])).unwrap(), Stability::Marginal);
        prop_assert_eq!(routh_hurwitz_stable(&poly_mul(&p, &[1.0, 0.0])).unwrap(), Stability::Marginal);
    }

    #[test]
    fn spectral_radius_decides_unit_disk((cfg, lambda, k) in block_instance()) {
        let rho = block_spectral_radius(&cfg, lambda, &k).unwrap();
        let h = closed_loop_block(&cfg, lambda, &k).unwrap();
        let oracle = DMatrix::from_fn(cfg.order(), cfg.order(), |i, j| h[(i, j)])
            .complex_eigenvalues()
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        prop_assume!((oracle - 1.0).abs() > 1e-6);
        prop_assert_eq!(rho < 1.0, oracle < 1.0);
        let p = char_poly(&cfg, lambda, &k).unwrap();
        prop_assert_eq!(disk_stability(&p, 1.0).unwrap() == Stability::Stable, oracle < 1.0);
    }

    #[test]
    fn bilinear_maps_disk_to_half_plane(c in random_poly(3), r in 0.2..3.0f64) {
        let lead = c[0];
        let p = fastcons_core::stability::CharPoly {
            coeffs: c.iter().map(|x| x / lead).collect(),
            lambda: 0.0,
        };
        let z_roots = companion_roots(&p.coeffs);
        let outer = z_roots.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        prop_assume!((outer - r).abs() > 1e-4 * r);
        let inside = outer < r;
        let b = bilinear_coeffs(&p, r).unwrap();
        prop_assert!((b.coeffs[0] - p.coeffs.iter().fold(0.0, |acc, a| acc * r + a)).abs() <= 1e-12 * max_abs(&b.coeffs));
        let s_roots = companion_roots(&b.coeffs);
        prop_assert_eq!(max_re(&s_roots) < 0.0, inside);
        prop_assert_eq!(disk_stability(&p, r).unwrap() == Stability::Stable, inside);
    }

    #[test]
    fn bilinear_degree_drops_at_root_r(roots in prop::collection::vec(-16i32..16, 1..6), pick in any::<prop::sample::Index>()) {
        // Dyadic roots keep every coefficient and r-power exact.
        let roots: Vec<f64> = roots.iter().map(|&v| v as f64 / 8.0).collect();
        let p = roots.iter().fold(vec![1.0], |acc, &z| poly_mul(&acc, &[1.0, -z]));
        let r = roots[pick.index(roots.len())];
        prop_assume!(r > 0.0);
        prop_assert_eq!(bilinear_transform(&p, r)[0], 0.0);
        let off = r + 0.0625;
        prop_assume!(!roots.contains(&off));
        prop_assert_ne!(bilinear_transform(&p, off)[0], 0.0);
    }
}

#[test]
fn zero_polynomial_is_rejected() {
    assert!(routh_hurwitz_stable(&[0.0, 0.0]).is_err());
    assert!(poly_roots(&[0.0, 1.0]).is_err());
}
