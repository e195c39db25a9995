//! Double-double execution of the deadbeat schedule.
//!
//! The schedule annihilates each Laplacian mode exactly in exact arithmetic,
//! but later blocks amplify whatever is left of earlier modes: at `λ_N` the
//! block tuned for `λ₂` has roots of magnitude well above 1. In `f64` the
//! residue left by rounding the eigenvalues, the gains and the state (all `~1e-16`) grows by `1e8` or more for `n = 3` on a
//! ten-node cycle. Carrying eigenvalues, gains and states in double-double
//! (`~1e-32`) keeps the same protocol within `1e-15` there.
//!
//! The schedule product itself is checked in multiprecision arithmetic at a
//! precision sized to the magnitudes that cancel in it.

use alloc::vec::Vec;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use twofloat::TwoFloat;

use crate::binomial::choose;
use crate::dynamics::SystemConfig;
use crate::error::{Error, Result};
use crate::finite_time::{schedule_product, AnnihilationResidual, GainSchedule};
use crate::graph::Graph;
use crate::sim::{drive, Trajectory, DEFAULT_STATE_CAP};
use crate::spectrum::Spectrum;

fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

/// `a / b` to double-double accuracy. `TwoFloat`'s own division forms the
/// residual `1 − b·(1/b)` without a fused multiply-add and so only delivers
/// `f64` accuracy; two residual corrections on top of a plain quotient fix it.
fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let mut q = dd(a.hi() / b.hi());
    for _ in 0..2 {
        let r = a - &q * &b;
        q += r.hi() / b.hi();
    }
    q
}

/// Distinct nonzero eigenvalues in descending order, each refined to
/// double-double accuracy.
///
/// Each computed eigenvector is first polished by one first-order
/// perturbation step against the other eigenpairs (the eigensolver's
/// stopping rule leaves them accurate to only `~1e-12`), then its Rayleigh
/// quotient `vᵀLv / vᵀv` is taken in double-double and averaged over the
/// cluster. The quotient is second-order in the eigenvector error, so
/// vectors good to `~1e-16` give eigenvalues good to `~1e-31`.
pub fn refined_eigenvalues(g: &Graph, s: &Spectrum) -> Result<Vec<TwoFloat>> {
    s.require_connected()?;
    let size = g.node_count();
    if s.node_count() != size {
        return Err(Error::DimensionMismatch {
            what: "spectrum size",
            expected: size,
            found: s.node_count(),
        });
    }
    let mut out = Vec::with_capacity(s.distinct_nonzero.len());
    // eigenvalues are ascending; clusters are descending.
    let mut upper = size;
    for cluster in &s.distinct_nonzero {
        let lower = upper - cluster.multiplicity;
        let mut sum = dd(0.0);
        for col in lower..upper {
            let v = polished_eigenvector(g, s, col, lower..upper);
            sum += rayleigh_quotient(g, &v);
        }
        out.push(div(sum, dd(cluster.multiplicity as f64)));
        upper = lower;
    }
    Ok(out)
}

/// `v_i − Σ_j (v_jᵀ r)/(λ_j − λ_i) v_j` with `r = L v_i − λ_i v_i`, skipping
/// the eigenvectors of `v_i`'s own cluster.
fn polished_eigenvector(g: &Graph, s: &Spectrum, col: usize, cluster: core::ops::Range<usize>) -> Vec<f64> {
    let size = g.node_count();
    let v = s.eigenvectors.column(col);
    let lambda = s.eigenvalues[col];
    let mut r: Vec<f64> = v.iter().map(|x| -lambda * x).collect();
    for e in g.edges() {
        let d = e.weight * (v[e.i] - v[e.j]);
        r[e.i] += d;
        r[e.j] -= d;
    }
    let mut out = v.clone();
    for j in (0..size).filter(|j| !cluster.contains(j)) {
        let gap = s.eigenvalues[j] - lambda;
        let coeff: f64 = (0..size).map(|i| s.eigenvectors[(i, j)] * r[i]).sum::<f64>() / gap;
        for (i, o) in out.iter_mut().enumerate() {
            *o -= coeff * s.eigenvectors[(i, j)];
        }
    }
    out
}

fn rayleigh_quotient(g: &Graph, v: &[f64]) -> TwoFloat {
    let mut num = dd(0.0);
    for e in g.edges() {
        let d = dd(v[e.i]) - dd(v[e.j]);
        num += &(&d * &d) * e.weight;
    }
    let mut den = dd(0.0);
    for &x in v {
        den += &dd(x) * &dd(x);
    }
    div(num, den)
}

/// Deadbeat gains `K_m = C(n, m−1)/(λ τ^{n−m+1})` in double-double.
fn deadbeat_gains_dd(cfg: &SystemConfig, lambda: TwoFloat) -> Vec<TwoFloat> {
    let n = cfg.order();
    let tau = dd(cfg.tau());
    (1..=n)
        .map(|m| {
            let mut denom = lambda;
            for _ in 0..(n - m + 1) {
                denom *= &tau;
            }
            div(dd(choose(n, m - 1)), denom)
        })
        .collect()
}

/// Runs the descending deadbeat schedule for `steps` steps with eigenvalues,
/// gains and states carried in double-double; the trajectory records the
/// states rounded to `f64`. Gains are zero once the schedule is exhausted.
pub fn simulate_deadbeat_extended(
    g: &Graph,
    cfg: &SystemConfig,
    s: &Spectrum,
    x0: &[f64],
    steps: usize,
) -> Result<Trajectory> {
    let eigen_order = refined_eigenvalues(g, s)?;
    simulate_schedule_extended(g, cfg, &eigen_order, x0, steps)
}

/// [`simulate_deadbeat_extended`] with an explicit block order.
pub fn simulate_schedule_extended(
    g: &Graph,
    cfg: &SystemConfig,
    eigen_order: &[TwoFloat],
    x0: &[f64],
    steps: usize,
) -> Result<Trajectory> {
    if eigen_order.iter().any(|l| !(l.hi() > 0.0 && l.hi().is_finite())) {
        return Err(Error::DegenerateInput("schedule eigenvalues must be positive"));
    }
    let n = cfg.order();
    let blocks: Vec<Vec<TwoFloat>> = eigen_order.iter().map(|&l| deadbeat_gains_dd(cfg, l)).collect();
    let tau = dd(cfg.tau());
    let mut state: Vec<TwoFloat> = x0.iter().copied().map(dd).collect();
    drive(cfg, g.node_count(), x0, steps, DEFAULT_STATE_CAP, |k, _| {
        if let Some(gains) = blocks.get(k / n) {
            state = step_dd(g, n, &tau, gains, &state);
        } else {
            state = drift_dd(n, &tau, &state);
        }
        Ok(state.iter().map(|v| v.hi() + v.lo()).collect())
    })
}

fn step_dd(g: &Graph, n: usize, tau: &TwoFloat, gains: &[TwoFloat], x: &[TwoFloat]) -> Vec<TwoFloat> {
    let mut inputs = alloc::vec![dd(0.0); g.node_count()];
    for e in g.edges() {
        let mut d = dd(0.0);
        for m in 0..n {
            d += &gains[m] * &(x[e.j * n + m] - x[e.i * n + m]);
        }
        let wd = &d * e.weight;
        inputs[e.i] += &wd;
        inputs[e.j] -= &wd;
    }
    advance_dd(n, tau, x, &inputs)
}

fn drift_dd(n: usize, tau: &TwoFloat, x: &[TwoFloat]) -> Vec<TwoFloat> {
    let zeros = alloc::vec![dd(0.0); x.len() / n];
    advance_dd(n, tau, x, &zeros)
}

fn advance_dd(n: usize, tau: &TwoFloat, x: &[TwoFloat], inputs: &[TwoFloat]) -> Vec<TwoFloat> {
    let mut out = Vec::with_capacity(x.len());
    for (agent, u) in x.chunks_exact(n).zip(inputs) {
        for m in 0..n {
            let next = if m + 1 < n { &agent[m + 1] } else { u };
            out.push(agent[m] + tau * next);
        }
    }
    out
}

type Big = FBig<HalfEven, 2>;

/// Bits kept beyond the magnitude of the cancelling terms.
const GUARD_BITS: usize = 96;

fn big(v: f64, precision: usize) -> Big {
    Big::try_from(v).expect("finite").with_precision(precision).value()
}

/// Schedule-product residuals with every block rebuilt in multiprecision.
///
/// The deadbeat gains for each scheduled eigenvalue `λ̃` are recomputed
/// from `λ̃` itself, so evaluated at the very `λ̃` the schedule was built
/// from (`eigs` equal to its eigen order, in any order) each product
/// vanishes identically in exact arithmetic. The working precision is `log₂ scale + 96` bits (at least 128), where
/// `scale` is the magnitude product of [`schedule_product`]; the reported
/// `max_norm` is then free of `f64` rounding.
pub fn annihilation_multiprecision(
    eigs: &[f64],
    cfg: &SystemConfig,
    sched: &GainSchedule,
) -> Result<Vec<AnnihilationResidual>> {
    let n = cfg.order();
    let order = sched.eigen_order();
    if sched.config().order() != n {
        return Err(Error::DimensionMismatch {
            what: "schedule order",
            expected: n,
            found: sched.config().order(),
        });
    }
    eigs.iter()
        .map(|&lambda| {
            let (_, magnitude) = schedule_product(cfg, lambda, sched)?;
            let scale = magnitude.max_abs();
            let bits = libm::ceil(libm::log2(scale.max(1.0))) as usize;
            let precision = (bits + GUARD_BITS).max(128);
            let max_norm = big_product_norm(cfg, lambda, order, precision);
            Ok(AnnihilationResidual {
                lambda,
                max_norm,
                scale,
                residual: if scale > 0.0 { max_norm / scale } else { max_norm },
            })
        })
        .collect()
}

/// `‖Π H_k‖_max` at `lambda` for the deadbeat blocks of `order`, each
/// repeated `n` times.
fn big_product_norm(cfg: &SystemConfig, lambda: f64, order: &[f64], precision: usize) -> f64 {
    let n = cfg.order();
    let zero = big(0.0, precision);
    let tau = big(cfg.tau(), precision);
    let lam = big(lambda, precision);
    let mut product: Vec<Vec<Big>> = (0..n)
        .map(|i| (0..n).map(|j| big(if i == j { 1.0 } else { 0.0 }, precision)).collect())
        .collect();
    for &design in order {
        // last row of A − λBK with K_j = C(n, j−1) / (λ̃ τ^{n+1−j})
        let design = big(design, precision);
        let mut last: Vec<Big> = Vec::with_capacity(n);
        let mut tau_pow = big(1.0, precision);
        let mut powers = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            powers.push(tau_pow.clone());
            tau_pow = &tau_pow * &tau;
        }
        for j in 0..n {
            let gain = big(choose(n, j), precision) / (&design * &powers[n - j]);
            let mut v = &lam * &tau * gain;
            v = -v;
            if j == n - 1 {
                v = v + big(1.0, precision);
            }
            last.push(v);
        }
        for _ in 0..n {
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let row: Vec<Big> = (0..n)
                    .map(|c| {
                        if i + 1 < n {
                            // rows of A: e_i + τ e_{i+1}
                            &product[i][c] + &tau * &product[i + 1][c]
                        } else {
                            (0..n).fold(zero.clone(), |acc, m| acc + &last[m] * &product[m][c])
                        }
                    })
                    .collect();
                next.push(row);
            }
            product = next;
        }
    }
    product
        .iter()
        .flatten()
        .map(|v| libm::fabs(v.to_f64().value()))
        .fold(0.0, f64::max)
}
