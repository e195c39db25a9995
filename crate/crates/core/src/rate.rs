//! Convergence-rate design for constant gains.
//!
//! The rate of a gain vector `K` is the worst spectral radius of the blocks
//! `A − λBK` over the distinct nonzero Laplacian eigenvalues. This module
//! evaluates it, gives the lower bound `((λ_N − λ₂)/(λ_N + λ₂))^{1/n}`, the
//! gains that attain it, and a multi-start forward-difference gradient
//! descent on the rate.

use alloc::vec;
use alloc::vec::Vec;

use crate::binomial::choose;
use crate::dynamics::{GainVector, SystemConfig};
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::spectrum::Spectrum;
use crate::stability::{block_spectral_radius, char_poly, poly_roots};

/// A block counts as contracting when its spectral radius is below `1 − CONSENSUS_MARGIN`.
pub const CONSENSUS_MARGIN: f64 = 1e-9;
/// Block radii within this (relative) distance of the maximum count as attaining it.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub rate: f64,
    /// Smallest eigenvalue attaining the maximum.
    pub argmax_lambda: f64,
    /// `rate < 1`.
    pub consensus: bool,
}

/// Rate over an explicit list of nonzero eigenvalues (any order).
pub fn rate_for_eigenvalues(eigs: &[f64], cfg: &SystemConfig, k: &GainVector) -> Result<RateResult> {
    k.check(cfg)?;
    if eigs.is_empty() {
        return Err(Error::Disconnected { lambda2: 0.0 });
    }
    let mut ascending = eigs.to_vec();
    ascending.sort_by(f64::total_cmp);
    let radii = ascending
        .iter()
        .map(|&lam| block_spectral_radius(cfg, lam, k))
        .collect::<Result<Vec<_>>>()?;
    let rate = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = TIE_TOL * rate.abs().max(1.0);
    let at = radii.iter().position(|&r| r >= rate - tie).unwrap_or(0);
    Ok(RateResult {
        rate,
        argmax_lambda: ascending[at],
        consensus: rate < 1.0,
    })
}

/// `r(K) = max_i ρ(A − λ_i BK)` over the distinct nonzero eigenvalues.
pub fn convergence_rate(s: &Spectrum, cfg: &SystemConfig, k: &GainVector) -> Result<RateResult> {
    s.require_connected()?;
    rate_for_eigenvalues(&s.distinct_values(), cfg, k)
}

/// `((λ_N − λ₂)/(λ_N + λ₂))^{1/n}` from the extreme eigenvalues.
pub fn lower_bound_from_extremes(lambda2: f64, lambda_max: f64, order: usize) -> f64 {
    let ratio = ((lambda_max - lambda2) / (lambda_max + lambda2)).max(0.0);
    libm::pow(ratio, 1.0 / order as f64)
}

/// Lower bound on the rate achievable by any constant gain of order `n`.
pub fn rate_lower_bound(s: &Spectrum, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidConfig("order must be at least 1"));
    }
    let (l2, ln) = s.extremes()?;
    Ok(lower_bound_from_extremes(l2, ln, order))
}

/// Second-order optimal gains `K₁ = 2λ₂/(τ²(λ₂+λ_N)λ_N)`, `K₂ = 2/(λ_N τ)`.
pub fn optimal_gains_order2(s: &Spectrum, tau: f64) -> Result<GainVector> {
    let (l2, ln) = s.extremes()?;
    Ok(GainVector::new(vec![
        2.0 * l2 / (tau * tau * (l2 + ln) * ln),
        2.0 / (ln * tau),
    ]))
}

/// Closed-form gains for the bound, with the intermediate vector `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainDerivation {
    /// `f_q`, `q = 1..n`: the λ-independent part of `b_q` (see [`gain_image`]).
    pub f: Vec<f64>,
    pub gains: GainVector,
    /// The lower bound these gains are derived for.
    pub target_rate: f64,
}

/// `f = M Kᵀ`, i.e. `f_q = Σ_{p=1}^{q} (−1)^{q−p} τᵖ K_{n+1−p} C(n−p, q−p)`,
/// so that the characteristic coefficients are `b_q = λ f_q + (−1)^q C(n, q)`.
pub fn gain_image(cfg: &SystemConfig, k: &GainVector) -> Result<Vec<f64>> {
    k.check(cfg)?;
    let n = cfg.order();
    Ok((1..=n)
        .map(|q| {
            (1..=q)
                .map(|p| {
                    let sign = if (q - p) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * cfg.tau_pow(p) * k[n - p] * choose(n - p, q - p)
                })
                .sum()
        })
        .collect())
}

/// Gains for which the rate can equal the lower bound (necessary in general,
/// sufficient for `n ≤ 2` and on star graphs).
///
/// `f_q = (−1)^q C(n, q)(λ_N + λ₂)(r*^{2q} − 1)/(2λ₂λ_N)`, then
/// `K_n = f₁/τ` and, descending `j = n−1, …, 1`,
/// `K_j = (f_{n+1−j} + Σ_{i=1}^{n−j} (−1)^{i+1} τ^{n−j+1−i} C(j−1+i, j−1) K_{j+i}) / τ^{n+1−j}`.
///
/// The `f_q` expression is the bound-substituted form of
/// `((−1)^q/(2λ₂λ_N)) [r*^{2q−n} C(n,q)(λ_N−λ₂) − C(n,n−q)(λ_N+λ₂)]`; it
/// stays finite when `λ₂ = λ_N` (bound zero).
pub fn optimal_gains_general(s: &Spectrum, cfg: &SystemConfig) -> Result<GainDerivation> {
    let (l2, ln) = s.extremes()?;
    Ok(gains_for_extremes(l2, ln, cfg))
}

pub fn gains_for_extremes(lambda2: f64, lambda_max: f64, cfg: &SystemConfig) -> GainDerivation {
    let n = cfg.order();
    let target = lower_bound_from_extremes(lambda2, lambda_max, n);
    let r2 = target * target;
    let f: Vec<f64> = (1..=n)
        .map(|q| {
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            sign * choose(n, q) * (lambda_max + lambda2) * (libm::pow(r2, q as f64) - 1.0)
                / (2.0 * lambda2 * lambda_max)
        })
        .collect();

    // k[j - 1] holds K_j.
    let mut k = vec![0.0; n];
    k[n - 1] = f[0] / cfg.tau();
    for j in (1..n).rev() {
        let mut acc = f[n - j];
        for i in 1..=(n - j) {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * cfg.tau_pow(n - j + 1 - i) * choose(j - 1 + i, j - 1) * k[j + i - 1];
        }
        k[j - 1] = acc / cfg.tau_pow(n + 1 - j);
    }
    GainDerivation {
        f,
        gains: GainVector::new(k),
        target_rate: target,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockReport {
    pub lambda: f64,
    pub max_modulus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusReport {
    pub consensus: bool,
    /// One entry per distinct nonzero eigenvalue, descending.
    pub blocks: Vec<BlockReport>,
}

/// Asymptotic consensus holds iff every root of every block polynomial has
/// modulus below `1 − CONSENSUS_MARGIN`.
pub fn consensus_check(s: &Spectrum, cfg: &SystemConfig, k: &GainVector) -> Result<ConsensusReport> {
    s.require_connected()?;
    let mut blocks = Vec::with_capacity(s.distinct_count());
    for lam in s.distinct_values() {
        let roots = poly_roots(&char_poly(cfg, lam, k)?.coeffs)?;
        let max_modulus = roots.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        blocks.push(BlockReport {
            lambda: lam,
            max_modulus,
        });
    }
    let consensus = blocks.iter().all(|b| b.max_modulus < 1.0 - CONSENSUS_MARGIN);
    Ok(ConsensusReport { consensus, blocks })
}

/// Coordinates the descent operates in. Each variant fixes per-gain units
/// `u_j` and the iteration runs on `κ_j = K_j / u_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainScaling {
    /// Plain gains, `u_j = 1`.
    Raw,
    /// `u_j = C(n, j−1)/(λ_N τ^{n+1−j})`, the deadbeat gains at `λ_N`.
    Deadbeat,
    /// `u_j = C(n, p) ρ^{p−1}/(λ_N τ^p)` with `p = n+1−j` and `ρ = 1 − r_lb`.
    ///
    /// Near the optimum the dominant roots sit at `z ≈ 1 − ρ`, where a unit
    /// change of any `κ_j` moves them by a comparable amount. Without this the
    /// problem is badly conditioned (optimal `K₁` is orders of magnitude
    /// below its deadbeat value) and fixed steps zigzag across the ridge of
    /// the max long before reaching it.
    #[default]
    BoundNormalized,
}

/// Where restarts begin.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum InitBox {
    /// `κ_j` uniform in `(0, 2)` in the descent coordinates; for
    /// [`GainScaling::Raw`] this falls back to [`InitBox::Deadbeat`].
    #[default]
    Default,
    /// `K_j` uniform in `(0, 2·C(n, j−1)/(λ_N τ^{n+1−j}))`.
    Deadbeat,
    /// Per-coordinate `(lo, hi)` bounds on `K_j`.
    Bounds(Vec<(f64, f64)>),
    /// Every restart starts at this gain.
    Fixed(GainVector),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOptions {
    /// Iterations `T` per restart.
    pub iterations: usize,
    /// Step size `η`.
    pub learning_rate: f64,
    /// Forward-difference increment `δ`.
    pub delta: f64,
    pub restarts: usize,
    pub seed: u64,
    pub init: InitBox,
    pub scaling: GainScaling,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            iterations: 5000,
            learning_rate: 0.01,
            delta: 1e-6,
            restarts: 10,
            seed: 0,
            init: InitBox::Default,
            scaling: GainScaling::BoundNormalized,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self, order: usize) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidOptions("iterations must be at least 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidOptions("learning rate must be positive"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidOptions("finite-difference step must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidOptions("at least one restart is required"));
        }
        match &self.init {
            InitBox::Bounds(b) if b.len() != order => {
                Err(Error::InvalidOptions("init bounds must have one pair per gain"))
            }
            InitBox::Bounds(b) if b.iter().any(|(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) => {
                Err(Error::InvalidOptions("init bounds must satisfy lo <= hi"))
            }
            InitBox::Fixed(k) if k.len() != order => {
                Err(Error::InvalidOptions("fixed initial gain has the wrong length"))
            }
            _ => Ok(()),
        }
    }
}

/// Result of one restart of the descent.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub index: usize,
    pub initial_gains: GainVector,
    pub initial_rate: f64,
    /// `K^{(T)}` and `r(K^{(T)})`.
    pub final_gains: GainVector,
    pub final_rate: f64,
    /// Lowest-rate iterate visited, `K^{(0)}` included.
    pub best_gains: GainVector,
    pub best_rate: f64,
    /// `r(K^{(t)})` for `t = 0..=T`.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerReport {
    /// Best iterate over all restarts.
    pub best_gains: GainVector,
    pub best_rate: f64,
    /// Lowest final iterate `K^{(T)}` over all restarts.
    pub final_gains: GainVector,
    pub final_rate: f64,
    /// Iterations per restart.
    pub iterations_run: usize,
    /// Rate trace of the restart holding `best_rate`.
    pub rate_trace: Vec<f64>,
    pub restarts: usize,
    pub seed: u64,
    /// Restarts in index order (traces dropped except for the winner above).
    pub runs: Vec<RestartOutcome>,
}

/// Units `u_j` of the descent coordinates.
pub fn coordinate_units(eigs: &[f64], cfg: &SystemConfig, scaling: GainScaling) -> Vec<f64> {
    let n = cfg.order();
    let top = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let low = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    match scaling {
        GainScaling::Raw => vec![1.0; n],
        GainScaling::Deadbeat => (1..=n)
            .map(|j| choose(n, j - 1) / (top * cfg.tau_pow(n + 1 - j)))
            .collect(),
        GainScaling::BoundNormalized => {
            let rho = 1.0 - lower_bound_from_extremes(low, top, n);
            (1..=n)
                .map(|j| {
                    let p = n + 1 - j;
                    choose(n, p) * libm::pow(rho, p as f64 - 1.0) / (top * cfg.tau_pow(p))
                })
                .collect()
        }
    }
}

/// Initial gain of restart `index`, drawn from stream `index` of the
/// generator seeded with `opts.seed`.
pub fn initial_gains(eigs: &[f64], cfg: &SystemConfig, opts: &OptimizerOptions, index: usize) -> GainVector {
    let mut rng = SeededRng::new(opts.seed, index as u64);
    let unit_box = |scaling| {
        coordinate_units(eigs, cfg, scaling)
            .into_iter()
            .map(|u| (0.0, 2.0 * u))
            .collect::<Vec<_>>()
    };
    let bounds = match &opts.init {
        InitBox::Fixed(k) => return k.clone(),
        InitBox::Bounds(b) => b.clone(),
        InitBox::Deadbeat => unit_box(GainScaling::Deadbeat),
        InitBox::Default => match opts.scaling {
            GainScaling::Raw => unit_box(GainScaling::Deadbeat),
            s => unit_box(s),
        },
    };
    GainVector::new(bounds.iter().map(|&(lo, hi)| rng.uniform(lo, hi)).collect())
}

/// One restart: fixed-step forward-difference gradient descent
/// `K^{(t)} = K^{(t−1)} − η ∇r(K^{(t−1)})`, `∇r_m = (r(K + δe_m) − r(K))/δ`,
/// carried out in the coordinates chosen by `opts.scaling`.
pub fn run_restart(
    eigs: &[f64],
    cfg: &SystemConfig,
    opts: &OptimizerOptions,
    index: usize,
) -> Result<RestartOutcome> {
    opts.validate(cfg.order())?;
    if eigs.is_empty() {
        return Err(Error::Disconnected { lambda2: 0.0 });
    }
    let n = cfg.order();
    let units = coordinate_units(eigs, cfg, opts.scaling);
    let to_gains = |kappa: &[f64]| GainVector::new(kappa.iter().zip(&units).map(|(c, u)| c * u).collect());
    let rate = |kappa: &[f64]| rate_for_eigenvalues(eigs, cfg, &to_gains(kappa)).map(|r| r.rate);

    let initial_gains = initial_gains(eigs, cfg, opts, index);
    let mut kappa: Vec<f64> = initial_gains.iter().zip(&units).map(|(k, u)| k / u).collect();
    let mut current = rate(&kappa)?;
    let initial_rate = current;
    let mut best = (current, kappa.clone());
    let mut trace = Vec::with_capacity(opts.iterations + 1);
    trace.push(current);

    let mut grad = vec![0.0; n];
    let mut probe = kappa.clone();
    for _ in 0..opts.iterations {
        for m in 0..n {
            probe.copy_from_slice(&kappa);
            probe[m] += opts.delta;
            grad[m] = (rate(&probe)? - current) / opts.delta;
        }
        for (c, g) in kappa.iter_mut().zip(&grad) {
            *c -= opts.learning_rate * g;
        }
        current = rate(&kappa)?;
        trace.push(current);
        if current < best.0 {
            best = (current, kappa.clone());
        }
    }

    Ok(RestartOutcome {
        index,
        initial_gains,
        initial_rate,
        final_gains: to_gains(&kappa),
        final_rate: current,
        best_gains: to_gains(&best.1),
        best_rate: best.0,
        trace,
    })
}

/// Combines restarts (in any order) into a report; ties go to the lower index.
pub fn merge_restarts(mut runs: Vec<RestartOutcome>, opts: &OptimizerOptions) -> Result<OptimizerReport> {
    runs.sort_by_key(|r| r.index);
    let pick = |key: fn(&RestartOutcome) -> f64| {
        runs.iter()
            .enumerate()
            .fold(None::<(usize, f64)>, |acc, (i, r)| match acc {
                Some((_, v)) if key(r) >= v => acc,
                _ => Some((i, key(r))),
            })
            .map(|(i, _)| i)
    };
    let best = pick(|r| r.best_rate).ok_or(Error::InvalidOptions("no restarts to merge"))?;
    let fin = pick(|r| r.final_rate).ok_or(Error::InvalidOptions("no restarts to merge"))?;
    let rate_trace = core::mem::take(&mut runs[best].trace);
    for r in runs.iter_mut() {
        r.trace = Vec::new();
    }
    Ok(OptimizerReport {
        best_gains: runs[best].best_gains.clone(),
        best_rate: runs[best].best_rate,
        final_gains: runs[fin].final_gains.clone(),
        final_rate: runs[fin].final_rate,
        iterations_run: opts.iterations,
        rate_trace,
        restarts: opts.restarts,
        seed: opts.seed,
        runs,
    })
}

/// Multi-start gradient descent on `r(K)`, restarts run sequentially.
pub fn gradient_descent_rate(
    s: &Spectrum,
    cfg: &SystemConfig,
    opts: &OptimizerOptions,
) -> Result<OptimizerReport> {
    s.require_connected()?;
    opts.validate(cfg.order())?;
    let eigs = s.distinct_values();
    let runs = (0..opts.restarts)
        .map(|i| run_restart(&eigs, cfg, opts, i))
        .collect::<Result<Vec<_>>>()?;
    merge_restarts(runs, opts)
}
