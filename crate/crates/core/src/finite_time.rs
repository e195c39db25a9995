//! Time-varying deadbeat schedules that reach exact consensus after
//! `n · l̄` steps, where `l̄` is the number of distinct nonzero Laplacian
//! eigenvalues.
//!
//! Block `l` of the schedule holds `K_m = C(n, m−1)/(λ_{p_l} τ^{n−m+1})` for
//! `n` consecutive steps. That gain makes `A − λ_{p_l} B K` nilpotent, so the
//! eigenmode of `λ_{p_l}` is annihilated by its own block whatever the other
//! blocks do. After the schedule the gains are zero and every agent follows
//! the open-loop average `A^k x̄(0)`.

use alloc::vec::Vec;

use crate::binomial::{binomial, choose};
use crate::dynamics::{closed_loop_block, GainVector, SystemConfig};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::spectrum::Spectrum;
use crate::stability::char_poly;

#[derive(Debug, Clone, PartialEq)]
pub struct GainSchedule {
    entries: Vec<GainVector>,
    config: SystemConfig,
    eigen_order: Vec<f64>,
}

impl GainSchedule {
    /// Number of scheduled steps, `n · l̄`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[GainVector] {
        &self.entries
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    /// Eigenvalues in block order.
    pub fn eigen_order(&self) -> &[f64] {
        &self.eigen_order
    }

    /// `K(step)`; zero once the schedule is exhausted.
    pub fn gain_at(&self, step: usize) -> GainVector {
        self.entries
            .get(step)
            .cloned()
            .unwrap_or_else(|| GainVector::zeros(self.config.order()))
    }

    /// Step at which exact consensus is reached.
    pub fn consensus_step(&self) -> usize {
        self.entries.len()
    }
}

/// `K_m = C(n, m−1)/(λ τ^{n−m+1})`, `m = 1..n`.
pub fn deadbeat_gains(cfg: &SystemConfig, lambda: f64) -> GainVector {
    let n = cfg.order();
    GainVector::new(
        (1..=n)
            .map(|m| choose(n, m - 1) / (lambda * cfg.tau_pow(n - m + 1)))
            .collect(),
    )
}

/// Schedule with blocks in strictly descending eigenvalue order.
pub fn deadbeat_schedule(s: &Spectrum, cfg: &SystemConfig) -> Result<GainSchedule> {
    s.require_connected()?;
    schedule_for_eigenvalues(&s.distinct_values(), cfg)
}

/// Schedule with one block per entry of `eigen_order`, in the order given.
pub fn schedule_for_eigenvalues(eigen_order: &[f64], cfg: &SystemConfig) -> Result<GainSchedule> {
    if eigen_order.is_empty() {
        return Err(Error::Disconnected { lambda2: 0.0 });
    }
    if eigen_order.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::DegenerateInput("schedule eigenvalues must be positive"));
    }
    let n = cfg.order();
    let mut entries = Vec::with_capacity(n * eigen_order.len());
    for &lam in eigen_order {
        let k = deadbeat_gains(cfg, lam);
        entries.extend(core::iter::repeat_n(k, n));
    }
    Ok(GainSchedule {
        entries,
        config: *cfg,
        eigen_order: eigen_order.to_vec(),
    })
}

/// Whether `H = A − λBK` is nilpotent: `‖Hⁿ‖_max ≤ 1e-9 · max(1, ‖H‖_max)ⁿ`
/// and every characteristic coefficient `b_j` is within `1e-9 · C(n, j)` of 0.
pub fn verify_nilpotent(cfg: &SystemConfig, lambda: f64, k: &GainVector) -> bool {
    let (Ok(h), Ok(p)) = (closed_loop_block(cfg, lambda, k), char_poly(cfg, lambda, k)) else {
        return false;
    };
    let n = cfg.order();
    let scale = libm::pow(h.max_abs().max(1.0), n as f64);
    let power_ok = h.pow(n).max_abs() <= 1e-9 * scale;
    let coeffs_ok = p
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .all(|(j, b)| b.abs() <= 1e-9 * choose(n, j).max(1.0));
    power_ok && coeffs_ok
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnihilationResidual {
    pub lambda: f64,
    /// `‖Π_k H_k‖_max` over every scheduled step.
    pub max_norm: f64,
    /// `‖Π_k (|A| + |λBK_k|)‖_max`, the size of the terms that cancel in
    /// forming the blocks and multiplying them out; rounding error in the
    /// product is relative to this.
    pub scale: f64,
    /// `max_norm / scale`.
    pub residual: f64,
}

/// Ordered product `H(n l̄ − 1) ⋯ H(0)` of the closed-loop blocks
/// `A − λ B K(k)` over the whole schedule, together with the product of the
/// entrywise magnitudes `|A| + |λBK(k)|`.
pub fn schedule_product(cfg: &SystemConfig, lambda: f64, sched: &GainSchedule) -> Result<(Matrix, Matrix)> {
    let mut product = Matrix::identity(cfg.order());
    let mut magnitude = Matrix::identity(cfg.order());
    for k in sched.entries() {
        let h = closed_loop_block(cfg, lambda, k)?;
        product = h.matmul(&product);
        magnitude = magnitude_block(cfg, lambda, k).matmul(&magnitude);
    }
    Ok((product, magnitude))
}

/// Scaled residual of the schedule product at each distinct nonzero eigenvalue.
pub fn product_annihilation(
    s: &Spectrum,
    cfg: &SystemConfig,
    sched: &GainSchedule,
) -> Result<Vec<AnnihilationResidual>> {
    s.require_connected()?;
    annihilation_residuals(&s.distinct_values(), cfg, sched)
}

/// [`product_annihilation`] over an explicit eigenvalue list, e.g. to test a
/// schedule built from perturbed eigenvalues.
pub fn annihilation_residuals(
    eigs: &[f64],
    cfg: &SystemConfig,
    sched: &GainSchedule,
) -> Result<Vec<AnnihilationResidual>> {
    eigs.iter()
        .map(|&lambda| {
            let (p, m) = schedule_product(cfg, lambda, sched)?;
            let (max_norm, scale) = (p.max_abs(), m.max_abs());
            Ok(AnnihilationResidual {
                lambda,
                max_norm,
                scale,
                residual: if scale > 0.0 { max_norm / scale } else { max_norm },
            })
        })
        .collect()
}

/// Largest amplification a perturbation can pick up between any step of the
/// schedule and its end: `max_λ max_j ‖Π_{k ≥ j} (|A| + |λBK(k)|)‖_max`.
///
/// Rounding of size `u` injected anywhere in a scheduled run reaches the
/// final state scaled by at most about this factor, so `u · Γ` bounds the
/// attainable relative accuracy at unit roundoff `u`.
pub fn propagation_bound(eigs: &[f64], cfg: &SystemConfig, sched: &GainSchedule) -> f64 {
    let n = cfg.order();
    let mut worst = 1.0f64;
    for &lambda in eigs {
        let mut suffix = Matrix::identity(n);
        for k in sched.entries().iter().rev() {
            suffix = suffix.matmul(&magnitude_block(cfg, lambda, k));
            worst = worst.max(suffix.max_abs());
        }
    }
    worst
}

fn magnitude_block(cfg: &SystemConfig, lambda: f64, k: &GainVector) -> Matrix {
    let n = cfg.order();
    Matrix::from_fn(n, n, |i, j| {
        let a = if j == i {
            1.0
        } else if j == i + 1 {
            cfg.tau()
        } else {
            0.0
        };
        let bk = if i == n - 1 { (lambda * cfg.tau() * k[j]).abs() } else { 0.0 };
        a + bk
    })
}

/// Consensus trajectory `s(k) = A^k x̄(0)` written through the initial
/// averages: `s_j(k) = Σ_{m=1}^{n−j+1} τ^{m−1} C(k, m−1) x̄^{(m+j−1)}(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusState {
    config: SystemConfig,
    /// `averages[m]` is the mean over agents of the `(m+1)`-th state component at `k = 0`.
    averages: Vec<f64>,
}

impl ConsensusState {
    pub fn from_initial(cfg: &SystemConfig, x0: &[f64]) -> Result<Self> {
        let n = cfg.order();
        if x0.is_empty() || x0.len() % n != 0 {
            return Err(Error::DimensionMismatch {
                what: "initial state (multiple of the order)",
                expected: n * (x0.len() / n).max(1),
                found: x0.len(),
            });
        }
        let agents = x0.len() / n;
        let mut averages = alloc::vec![0.0; n];
        for agent in x0.chunks_exact(n) {
            for (a, x) in averages.iter_mut().zip(agent) {
                *a += x;
            }
        }
        for a in &mut averages {
            *a /= agents as f64;
        }
        Ok(ConsensusState {
            config: *cfg,
            averages,
        })
    }

    pub fn averages(&self) -> &[f64] {
        &self.averages
    }

    /// `[s₁(k), …, s_n(k)]`.
    pub fn at(&self, k: u64) -> Vec<f64> {
        let n = self.config.order();
        (0..n)
            .map(|j| {
                (0..n - j)
                    .map(|m| self.config.tau_pow(m) * binomial(k, m as u64) * self.averages[m + j])
                    .sum()
            })
            .collect()
    }
}

/// `[s₁(k), …, s_n(k)]` for the initial network state `x0` (agent-major).
pub fn final_consensus_state(cfg: &SystemConfig, x0: &[f64], k: u64) -> Result<Vec<f64>> {
    Ok(ConsensusState::from_initial(cfg, x0)?.at(k))
}
