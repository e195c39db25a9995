//! Trajectories of the networked system and their consensus error.

use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::dynamics::{a_power, network_step, GainVector, SystemConfig};
use crate::error::{Error, Result};
use crate::finite_time::GainSchedule;
use crate::graph::Graph;
use crate::rng::SeededRng;

/// States are kept while `(steps + 1) · N · n` stays within this many values.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Option<Vec<Vec<f64>>>,
    errors: Vec<f64>,
    final_state: Vec<f64>,
    config: SystemConfig,
    agents: usize,
    step_count: usize,
}

impl Trajectory {
    /// `x(0), …, x(T)` when the run fit under the state cap.
    pub fn states(&self) -> Option<&[Vec<f64>]> {
        self.states.as_deref()
    }

    /// `‖e(k)‖₂` for `k = 0..=T`.
    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn final_state(&self) -> &[f64] {
        &self.final_state
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }
}

/// Constant-gain run of `steps` steps.
pub fn simulate_constant(
    g: &Graph,
    cfg: &SystemConfig,
    k: &GainVector,
    x0: &[f64],
    steps: usize,
) -> Result<Trajectory> {
    k.check(cfg)?;
    simulate_with(g, cfg, x0, steps, DEFAULT_STATE_CAP, |_| k.clone())
}

/// Run under a gain schedule; zero gains once it is exhausted.
pub fn simulate_scheduled(
    g: &Graph,
    cfg: &SystemConfig,
    sched: &GainSchedule,
    x0: &[f64],
    steps: usize,
) -> Result<Trajectory> {
    if sched.config().order() != cfg.order() {
        return Err(Error::DimensionMismatch {
            what: "schedule order",
            expected: cfg.order(),
            found: sched.config().order(),
        });
    }
    simulate_with(g, cfg, x0, steps, DEFAULT_STATE_CAP, |k| sched.gain_at(k))
}

/// General driver: `gains(k)` supplies `K(k)`; states are stored only when
/// `(steps + 1) · x0.len() ≤ state_cap`.
pub fn simulate_with(
    g: &Graph,
    cfg: &SystemConfig,
    x0: &[f64],
    steps: usize,
    state_cap: usize,
    mut gains: impl FnMut(usize) -> GainVector,
) -> Result<Trajectory> {
    drive(cfg, g.node_count(), x0, steps, state_cap, |k, x| {
        network_step(g, cfg, &gains(k), x)
    })
}

/// Records `x(0), …, x(steps)` and their errors, with `advance(k, x(k))`
/// producing `x(k + 1)`.
pub(crate) fn drive(
    cfg: &SystemConfig,
    agents: usize,
    x0: &[f64],
    steps: usize,
    state_cap: usize,
    mut advance: impl FnMut(usize, &[f64]) -> Result<Vec<f64>>,
) -> Result<Trajectory> {
    let n = cfg.order();
    if x0.len() != agents * n {
        return Err(Error::DimensionMismatch {
            what: "initial state",
            expected: agents * n,
            found: x0.len(),
        });
    }
    let keep = (steps + 1).saturating_mul(x0.len()) <= state_cap;
    let mean0 = agent_mean(x0, n);
    let mut states = keep.then(|| Vec::with_capacity(steps + 1));
    let mut errors = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    for k in 0..=steps {
        errors.push(consensus_error(cfg, &x, &mean0, k as u64));
        if let Some(s) = states.as_mut() {
            s.push(x.clone());
        }
        if k < steps {
            x = advance(k, &x)?;
        }
    }
    Ok(Trajectory {
        states,
        errors,
        final_state: x,
        config: *cfg,
        agents,
        step_count: steps,
    })
}

/// Mean over agents of each state component.
pub fn agent_mean(x: &[f64], order: usize) -> Vec<f64> {
    let agents = x.len() / order;
    let mut mean = alloc::vec![0.0; order];
    for agent in x.chunks_exact(order) {
        for (m, v) in mean.iter_mut().zip(agent) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= agents as f64;
    }
    mean
}

/// `‖x − 𝟏 ⊗ A^k x̄(0)‖₂`.
pub fn consensus_error(cfg: &SystemConfig, x: &[f64], mean0: &[f64], k: u64) -> f64 {
    let drift = a_power(cfg, k).mul_vec(mean0);
    let sq: f64 = x
        .chunks_exact(cfg.order())
        .flat_map(|agent| agent.iter().zip(&drift).map(|(a, d)| (a - d) * (a - d)))
        .sum();
    libm::sqrt(sq)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    /// `(k, e(k))` for the whole trajectory.
    pub points: Vec<(usize, f64)>,
    /// Least-squares slope of `ln e(k)` over the window (positive errors
    /// only); `None` with fewer than two usable points.
    pub slope: Option<f64>,
    /// Window actually used, clipped to the trajectory.
    pub window: (usize, usize),
}

/// Error sequence plus the fitted decay slope over `window`.
pub fn error_series(t: &Trajectory, window: RangeInclusive<usize>) -> Result<ErrorSeries> {
    if t.errors.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let last = t.errors.len() - 1;
    let lo = (*window.start()).min(last);
    let hi = (*window.end()).min(last);
    let points: Vec<(usize, f64)> = t.errors.iter().copied().enumerate().collect();
    let usable: Vec<(f64, f64)> = points[lo..=hi.max(lo)]
        .iter()
        .filter(|(_, e)| *e > 0.0 && e.is_finite())
        .map(|&(k, e)| (k as f64, libm::log(e)))
        .collect();
    Ok(ErrorSeries {
        points,
        slope: least_squares_slope(&usable),
        window: (lo, hi),
    })
}

/// [`error_series`] over the second half of the trajectory.
pub fn error_series_tail(t: &Trajectory) -> Result<ErrorSeries> {
    let n = t.errors.len();
    error_series(t, n / 2..=n.saturating_sub(1))
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `N · n` values uniform in `[−half_width, half_width)`, stream 0 of `seed`.
pub fn uniform_initial_state(agents: usize, order: usize, half_width: f64, seed: u64) -> Vec<f64> {
    let mut rng = SeededRng::new(seed, 0);
    (0..agents * order)
        .map(|_| rng.uniform(-half_width, half_width))
        .collect()
}
