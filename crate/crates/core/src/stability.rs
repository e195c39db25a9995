//! Characteristic polynomials of closed-loop blocks and the stability tests
//! built on them.
//!
//! Polynomials are coefficient slices ordered from the highest power down,
//! `[a₀, a₁, …, a_n]` for `a₀ zⁿ + a₁ z^{n−1} + … + a_n`. Every stability
//! decision is available both from coefficients (Routh–Hurwitz after the
//! disk-to-half-plane transform) and from roots (Durand–Kerner), so each
//! path can check the other.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::binomial::choose;
use crate::dynamics::{GainVector, SystemConfig};
use crate::error::{Error, Result};

/// Monic characteristic polynomial `det(zI − H(λ, K)) = zⁿ + b₁z^{n−1} + … + b_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    /// `[1, b₁, …, b_n]`.
    pub coeffs: Vec<f64>,
    pub lambda: f64,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn roots(&self) -> Result<Vec<Complex64>> {
        poly_roots(&self.coeffs)
    }
}

/// Polynomial in `s` obtained from a [`CharPoly`] by `z = r (s + 1)/(s − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearPoly {
    /// `[c₀, …, c_n]`; `c₀` vanishes when the source has a root at `z = r`.
    pub coeffs: Vec<f64>,
    pub radius: f64,
}

/// Root-location class relative to the imaginary axis (or a circle, for
/// [`disk_stability`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// Every root strictly inside.
    Stable,
    /// No root outside, at least one on the boundary.
    Marginal,
    /// At least one root strictly outside.
    Unstable,
}

/// Real parts within this distance of zero count as on the axis.
pub const AXIS_TOL: f64 = 1e-9;

const DK_MAX_ITER: usize = 500;
const DK_STEP_TOL: f64 = 1e-13;
const DK_ANGLE_OFFSET: f64 = 0.4;
const ROOT_RESIDUAL_TOL: f64 = 1e-8;

/// Coefficients `b_j` through the `(z − 1)`-basis expansion
/// `(z − 1)ⁿ + λ Σ_{p=1}^{n} τᵖ K_{n−p+1} (z − 1)^{n−p}`.
pub fn char_poly(cfg: &SystemConfig, lambda: f64, k: &GainVector) -> Result<CharPoly> {
    k.check(cfg)?;
    let n = cfg.order();
    let mut coeffs = vec![0.0; n + 1];
    // basis[p] multiplies (z − 1)^{n−p}
    let mut basis = vec![1.0; n + 1];
    for (p, slot) in basis.iter_mut().enumerate().skip(1) {
        *slot = lambda * cfg.tau_pow(p) * k[n - p];
    }
    for (p, &weight) in basis.iter().enumerate() {
        if weight == 0.0 {
            continue;
        }
        // (z − 1)^{m} = Σ_i C(m, i) (−1)^i z^{m−i}, landing at index p + i.
        let m = n - p;
        for i in 0..=m {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[p + i] += weight * sign * choose(m, i);
        }
    }
    Ok(CharPoly { coeffs, lambda })
}

/// Evaluates a real polynomial at a complex point (Horner).
pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// All complex roots by Durand–Kerner (Weierstrass) iteration.
///
/// Starts from points on the circle of radius `1 + max|a_j/a₀|` rotated by
/// 0.4 rad and stops once every correction is below `1e-13` (relative to
/// `max(1, |z|)`), or below `1e-4` with every residual already at the
/// rounding level of evaluating `p`. If the 500-iteration budget runs out, the estimates are
/// still accepted when each satisfies `|p(z)| ≤ 1e-8 · max|a_j/a₀|`; this
/// covers clustered roots, where Weierstrass corrections stall at the
/// rounding level.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let lead = match coeffs.first() {
        Some(&c) if c != 0.0 && c.is_finite() => c,
        _ => return Err(Error::DegenerateInput("leading coefficient must be nonzero")),
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateInput("non-finite polynomial coefficient"));
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let degree = monic.len() - 1;
    match degree {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(-monic[1], 0.0)]),
        _ => {}
    }
    let bound = monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let radius = 1.0 + bound;
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, DK_ANGLE_OFFSET + TAU * k as f64 / degree as f64))
        .collect();

    for _ in 0..DK_MAX_ITER {
        let mut max_step = 0.0f64;
        for k in 0..degree {
            let zk = z[k];
            let mut den = Complex64::new(1.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    den *= zk - zj;
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(f64::EPSILON * radius, 0.0);
            }
            let w = eval(&monic, zk) / den;
            z[k] = zk - w;
            let step = w.norm() / z[k].norm().max(1.0);
            // f64::max would drop a NaN step
            max_step = if step.is_finite() { max_step.max(step) } else { f64::INFINITY };
        }
        if !max_step.is_finite() {
            break;
        }
        if max_step <= DK_STEP_TOL || (max_step <= 1e-4 && at_rounding_level(&monic, &z)) {
            return Ok(z);
        }
    }
    let scale = bound.max(1.0);
    if z
        .iter()
        .all(|&r| eval(&monic, r).norm() <= ROOT_RESIDUAL_TOL * scale)
    {
        Ok(z)
    } else {
        Err(Error::NonConvergence {
            method: "Durand-Kerner",
            iterations: DK_MAX_ITER,
        })
    }
}

/// Every `|p(z)|` is within a small multiple of the rounding error of
/// evaluating `p` at `z`; further corrections are noise.
fn at_rounding_level(monic: &[f64], z: &[Complex64]) -> bool {
    z.iter().all(|&r| {
        let modulus = r.norm();
        let bound = monic.iter().fold(0.0, |acc, c| acc * modulus + c.abs());
        eval(monic, r).norm() <= 8.0 * f64::EPSILON * bound
    })
}

/// Largest root modulus of a polynomial (0 for constants).
pub fn spectral_radius_of(coeffs: &[f64]) -> Result<f64> {
    Ok(poly_roots(coeffs)?
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm())))
}

/// `ρ(H(λ, K))` as the largest root modulus of its characteristic polynomial.
pub fn block_spectral_radius(cfg: &SystemConfig, lambda: f64, k: &GainVector) -> Result<f64> {
    spectral_radius_of(&char_poly(cfg, lambda, k)?.coeffs)
}

/// Classifies the roots of a real polynomial with respect to the imaginary
/// axis using the Routh array.
///
/// Leading zeros are dropped (lower degree), trailing zeros are roots at
/// `s = 0`. A zero in the first column of an otherwise nonzero row is
/// replaced by a small positive ε; an all-zero row is replaced by the
/// derivative of the auxiliary polynomial formed from the row above.
pub fn routh_hurwitz_stable(coeffs: &[f64]) -> Result<Stability> {
    let start = coeffs
        .iter()
        .position(|&c| c != 0.0)
        .ok_or(Error::DegenerateInput("zero polynomial"))?;
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateInput("non-finite polynomial coefficient"));
    }
    let trimmed = &coeffs[start..];
    let end = trimmed.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let root_at_origin = end + 1 < trimmed.len();
    let poly = &trimmed[..=end];
    let degree = poly.len() - 1;
    if degree == 0 {
        return Ok(if root_at_origin { Stability::Marginal } else { Stability::Stable });
    }

    let scale = poly.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let zero_tol = 1e-12 * scale;
    let width = degree / 2 + 1;
    let mut prev: Vec<f64> = (0..width).map(|i| poly.get(2 * i).copied().unwrap_or(0.0)).collect();
    let mut curr: Vec<f64> =
        (0..width).map(|i| poly.get(2 * i + 1).copied().unwrap_or(0.0)).collect();

    let mut first_column = vec![prev[0]];
    let mut on_axis = root_at_origin;
    // `curr` holds the row for power `power`.
    let mut power = degree - 1;
    loop {
        let row_scale = prev.iter().chain(&curr).fold(0.0f64, |m, c| m.max(c.abs()));
        if curr.iter().all(|c| c.abs() <= zero_tol.max(1e-12 * row_scale)) {
            // Auxiliary polynomial from `prev` (power + 1), differentiated.
            on_axis = true;
            for (i, slot) in curr.iter_mut().enumerate() {
                let exp = (power + 1) as isize - 2 * i as isize;
                *slot = if exp > 0 { prev[i] * exp as f64 } else { 0.0 };
            }
        }
        if curr[0].abs() <= 1e-12 * row_scale.max(f64::MIN_POSITIVE) {
            on_axis = true;
            curr[0] = 1e-9 * row_scale.max(f64::MIN_POSITIVE);
        }
        first_column.push(curr[0]);
        if power == 0 {
            break;
        }
        let mut next = vec![0.0; width];
        for i in 0..width - 1 {
            next[i] = (curr[0] * prev[i + 1] - prev[0] * curr[i + 1]) / curr[0];
        }
        prev = core::mem::replace(&mut curr, next);
        power -= 1;
    }

    let sign_changes = first_column
        .windows(2)
        .filter(|w| (w[0] > 0.0) != (w[1] > 0.0))
        .count();
    Ok(if sign_changes > 0 {
        Stability::Unstable
    } else if on_axis {
        Stability::Marginal
    } else {
        Stability::Stable
    })
}

/// Root-based counterpart of [`routh_hurwitz_stable`].
pub fn classify_by_roots(coeffs: &[f64]) -> Result<Stability> {
    let start = coeffs
        .iter()
        .position(|&c| c != 0.0)
        .ok_or(Error::DegenerateInput("zero polynomial"))?;
    let roots = poly_roots(&coeffs[start..])?;
    let max_re = roots.iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re));
    Ok(if max_re > AXIS_TOL {
        Stability::Unstable
    } else if max_re >= -AXIS_TOL {
        Stability::Marginal
    } else {
        Stability::Stable
    })
}

/// `(s − 1)ⁿ p(r (s + 1)/(s − 1))` expanded in `s`, for any real `p` of degree `n`.
pub fn bilinear_transform(coeffs: &[f64], r: f64) -> Vec<f64> {
    let n = coeffs.len().saturating_sub(1);
    let mut out = vec![0.0; n + 1];
    for (k, &a) in coeffs.iter().enumerate() {
        // a · r^{n−k} (s + 1)^{n−k} (s − 1)^k
        let mut term = vec![a * libm::pow(r, (n - k) as f64)];
        for _ in 0..(n - k) {
            term = poly_mul(&term, &[1.0, 1.0]);
        }
        for _ in 0..k {
            term = poly_mul(&term, &[1.0, -1.0]);
        }
        for (o, t) in out.iter_mut().zip(term) {
            *o += t;
        }
    }
    out
}

/// Disk-to-half-plane transform of a characteristic polynomial: roots of the
/// result lie in the closed left half plane iff the roots of `p` lie in the
/// closed disk of radius `r`.
pub fn bilinear_coeffs(p: &CharPoly, r: f64) -> Result<BilinearPoly> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::DegenerateInput("bilinear radius must be positive"));
    }
    Ok(BilinearPoly {
        coeffs: bilinear_transform(&p.coeffs, r),
        radius: r,
    })
}

/// Root location of `p` relative to the circle of radius `r`, decided on
/// coefficients alone. A vanishing leading coefficient of the transformed
/// polynomial means a root exactly at `z = r`.
pub fn disk_stability(p: &CharPoly, r: f64) -> Result<Stability> {
    let b = bilinear_coeffs(p, r)?;
    let scale = b.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let dropped = b.coeffs[0].abs() <= 1e-12 * scale;
    let class = routh_hurwitz_stable(&b.coeffs)?;
    Ok(match (class, dropped) {
        (Stability::Stable, true) => Stability::Marginal,
        (c, _) => c,
    })
}
