//! Laplacian spectra: ordered eigenpairs, connectivity and the distinct
//! nonzero eigenvalues every design routine works with.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{symmetric_eigen, JacobiOptions, Matrix};

/// Relative gap below which two eigenvalues are treated as equal.
pub const CLUSTER_TOL: f64 = 1e-8;
/// `λ₂` must exceed this (relative to `max(1, λ_N)`) for the graph to count as connected.
pub const CONNECTIVITY_TOL: f64 = 1e-9;

/// A group of numerically equal nonzero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenCluster {
    /// Mean of the members.
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending, `λ₁ ≤ … ≤ λ_N`.
    pub eigenvalues: Vec<f64>,
    /// Column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: Matrix,
    /// Strictly descending distinct nonzero eigenvalues.
    pub distinct_nonzero: Vec<EigenCluster>,
    pub connected: bool,
}

impl Spectrum {
    pub fn node_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda2(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Number of distinct nonzero eigenvalues, `l̄`.
    pub fn distinct_count(&self) -> usize {
        self.distinct_nonzero.len()
    }

    /// Cluster representatives, descending.
    pub fn distinct_values(&self) -> Vec<f64> {
        self.distinct_nonzero.iter().map(|c| c.value).collect()
    }

    /// `(λ₂, λ_N)` as cluster representatives, or `Disconnected`.
    pub fn extremes(&self) -> Result<(f64, f64)> {
        self.require_connected()?;
        let hi = self.distinct_nonzero.first().map(|c| c.value);
        let lo = self.distinct_nonzero.last().map(|c| c.value);
        match (lo, hi) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(Error::Disconnected {
                lambda2: self.lambda2(),
            }),
        }
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.connected && !self.distinct_nonzero.is_empty() {
            Ok(())
        } else {
            Err(Error::Disconnected {
                lambda2: self.lambda2(),
            })
        }
    }
}

/// Full spectral decomposition of a graph Laplacian; `tol` is the Jacobi
/// off-diagonal tolerance (100-sweep budget).
pub fn spectrum(g: &Graph, tol: f64) -> Result<Spectrum> {
    spectrum_of_laplacian(&g.laplacian(), tol)
}

/// [`spectrum`] with the default tolerance `1e-12`.
pub fn spectrum_default(g: &Graph) -> Result<Spectrum> {
    spectrum(g, JacobiOptions::default().tol)
}

pub fn spectrum_of_laplacian(l: &Matrix, tol: f64) -> Result<Spectrum> {
    let opts = JacobiOptions {
        tol,
        ..JacobiOptions::default()
    };
    let (eigenvalues, eigenvectors) = symmetric_eigen(l, opts)?;
    let top = eigenvalues.last().copied().unwrap_or(0.0);
    let scale = top.max(1.0);
    let connected = eigenvalues.len() >= 2 && eigenvalues[1] > CONNECTIVITY_TOL * scale;
    let distinct_nonzero = cluster_nonzero(&eigenvalues, scale);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        distinct_nonzero,
        connected,
    })
}

/// Groups ascending eigenvalues above the connectivity threshold into
/// clusters (consecutive gaps `≤ CLUSTER_TOL · scale`), returned descending.
fn cluster_nonzero(ascending: &[f64], scale: f64) -> Vec<EigenCluster> {
    let gap = CLUSTER_TOL * scale;
    let mut clusters: Vec<(f64, usize, f64)> = Vec::new(); // (sum, count, last)
    for &lam in ascending.iter().filter(|&&l| l > CONNECTIVITY_TOL * scale) {
        match clusters.last_mut() {
            Some((sum, count, last)) if lam - *last <= gap => {
                *sum += lam;
                *count += 1;
                *last = lam;
            }
            _ => clusters.push((lam, 1, lam)),
        }
    }
    clusters
        .into_iter()
        .rev()
        .map(|(sum, count, _)| EigenCluster {
            value: sum / count as f64,
            multiplicity: count,
        })
        .collect()
}

/// `λ_N / λ₂`.
pub fn eigenratio(s: &Spectrum) -> Result<f64> {
    let (lo, hi) = s.extremes()?;
    Ok(hi / lo)
}
