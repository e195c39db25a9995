//! Binomial coefficients as `f64`.

/// Largest `k` for which [`binomial`] takes the exact integer path.
pub const EXACT_LIMIT: u64 = 62;

/// `C(k, j)`, zero when `j > k`.
///
/// Exact for `k ≤ 62` (integer multiplicative recurrence in `u128`, every
/// intermediate quotient is an integer); beyond that the same recurrence runs
/// in floating point.
pub fn binomial(k: u64, j: u64) -> f64 {
    if j > k {
        return 0.0;
    }
    if let Some(exact) = exact_binomial(k, j) {
        exact as f64
    } else {
        let j = j.min(k - j);
        let mut acc = 1.0f64;
        for i in 0..j {
            acc = acc * (k - i) as f64 / (i + 1) as f64;
        }
        acc
    }
}

fn exact_binomial(k: u64, j: u64) -> Option<u128> {
    if k > EXACT_LIMIT {
        return None;
    }
    let j = j.min(k - j);
    let mut acc: u128 = 1;
    for i in 0..j {
        acc = acc * u128::from(k - i) / u128::from(i + 1);
    }
    Some(acc)
}

/// `C(n, j)` for the small indices used in polynomial expansions.
#[inline]
pub fn choose(n: usize, j: usize) -> f64 {
    binomial(n as u64, j as u64)
}
