//! Single-agent integrator-chain dynamics and the networked closed loop.
//!
//! Network states are agent-major: `x = [x₁ᵀ, …, x_Nᵀ]ᵀ` with `x_i ∈ ℝⁿ`.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;

/// System order `n ≥ 1` and sampling period `tau > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    order: usize,
    tau: f64,
}

impl SystemConfig {
    pub fn new(order: usize, tau: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidConfig("order must be at least 1"));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidConfig("sampling period must be positive and finite"));
        }
        Ok(SystemConfig { order, tau })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `tau^p` for small non-negative `p`.
    #[inline]
    pub(crate) fn tau_pow(&self, p: usize) -> f64 {
        libm::pow(self.tau, p as f64)
    }
}

/// Row gain vector `K = [K₁, …, K_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainVector(Vec<f64>);

impl GainVector {
    pub fn new(gains: Vec<f64>) -> Self {
        GainVector(gains)
    }

    pub fn zeros(n: usize) -> Self {
        GainVector(alloc::vec![0.0; n])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn check(&self, cfg: &SystemConfig) -> Result<()> {
        if self.0.len() == cfg.order() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                what: "gain vector",
                expected: cfg.order(),
                found: self.0.len(),
            })
        }
    }
}

impl Deref for GainVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for GainVector {
    fn from(v: Vec<f64>) -> Self {
        GainVector(v)
    }
}

/// `A` (ones on the diagonal, `tau` on the superdiagonal) and `B = [0, …, 0, tau]ᵀ`.
pub fn system_matrices(cfg: &SystemConfig) -> (Matrix, Vec<f64>) {
    let n = cfg.order();
    let mut a = Matrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = cfg.tau();
    }
    let mut b = alloc::vec![0.0; n];
    b[n - 1] = cfg.tau();
    (a, b)
}

/// `H(λ, K) = A − λ B K`. Only the last row of `A` changes.
pub fn closed_loop_block(cfg: &SystemConfig, lambda: f64, k: &GainVector) -> Result<Matrix> {
    k.check(cfg)?;
    let (mut h, _) = system_matrices(cfg);
    if lambda == 0.0 {
        return Ok(h);
    }
    let n = cfg.order();
    for (j, kj) in k.iter().enumerate() {
        h[(n - 1, j)] -= lambda * cfg.tau() * kj;
    }
    Ok(h)
}

/// Closed form `A^k`: entry `(i, j)` is `C(k, j−i) τ^{j−i}` for `j ≥ i`.
pub fn a_power(cfg: &SystemConfig, k: u64) -> Matrix {
    let n = cfg.order();
    let row: Vec<f64> = (0..n)
        .map(|d| binomial(k, d as u64) * cfg.tau_pow(d))
        .collect();
    Matrix::from_fn(n, n, |i, j| if j >= i { row[j - i] } else { 0.0 })
}

fn check_state(cfg: &SystemConfig, agents: usize, x: &[f64]) -> Result<()> {
    let expected = agents * cfg.order();
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "network state",
            expected,
            found: x.len(),
        });
    }
    Ok(())
}

/// Advances every agent by `A x_i + B u_i` with `u_i = K Σ_j a_ij (x_j − x_i)`,
/// i.e. `(I_N ⊗ A − L ⊗ BK) x`, in `O(N·n + |E|·n)`.
pub fn network_step(g: &Graph, cfg: &SystemConfig, k: &GainVector, x: &[f64]) -> Result<Vec<f64>> {
    k.check(cfg)?;
    check_state(cfg, g.node_count(), x)?;
    let n = cfg.order();
    let mut inputs = alloc::vec![0.0; g.node_count()];
    for e in g.edges() {
        let (xi, xj) = (&x[e.i * n..(e.i + 1) * n], &x[e.j * n..(e.j + 1) * n]);
        let d: f64 = k.iter().zip(xj.iter().zip(xi)).map(|(kk, (a, b))| kk * (a - b)).sum();
        inputs[e.i] += e.weight * d;
        inputs[e.j] -= e.weight * d;
    }
    Ok(apply_agents(cfg, x, &inputs))
}

/// [`network_step`] for an arbitrary symmetric Laplacian given as a dense matrix.
pub fn network_step_dense(
    laplacian: &Matrix,
    cfg: &SystemConfig,
    k: &GainVector,
    x: &[f64],
) -> Result<Vec<f64>> {
    k.check(cfg)?;
    let agents = laplacian.rows();
    check_state(cfg, agents, x)?;
    let n = cfg.order();
    // K x_j for every agent, then u_i = −Σ_j L_ij K x_j.
    let kx: Vec<f64> = (0..agents)
        .map(|j| k.iter().zip(&x[j * n..(j + 1) * n]).map(|(a, b)| a * b).sum())
        .collect();
    let inputs: Vec<f64> = (0..agents)
        .map(|i| -laplacian.row(i).iter().zip(&kx).map(|(l, v)| l * v).sum::<f64>())
        .collect();
    Ok(apply_agents(cfg, x, &inputs))
}

fn apply_agents(cfg: &SystemConfig, x: &[f64], inputs: &[f64]) -> Vec<f64> {
    let n = cfg.order();
    let tau = cfg.tau();
    let mut out = Vec::with_capacity(x.len());
    for (agent, u) in x.chunks_exact(n).zip(inputs) {
        for m in 0..n {
            let next = if m + 1 < n { agent[m + 1] } else { *u };
            out.push(agent[m] + tau * next);
        }
    }
    out
}
