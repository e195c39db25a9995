//! Graph families, parallel optimizer restarts and the convergence-rate table.

use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;

use fastcons_core::rate::{lower_bound_from_extremes, merge_restarts, run_restart, OptimizerOptions, OptimizerReport};
use fastcons_core::spectrum::spectrum_default;
use fastcons_core::{Graph, Result, Spectrum, SystemConfig};

use crate::edgelist::{read_edge_list, ParseError};

/// Where a graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Cycle(usize),
    Path(usize),
    /// Star on `N` nodes, `K_{1,N−1}`.
    Star(usize),
    Complete(usize),
    Bipartite(usize, usize),
    File(PathBuf),
}

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] fastcons_core::Error),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph, GraphError> {
        Ok(match *self {
            GraphSpec::Cycle(n) => Graph::cycle(n)?,
            GraphSpec::Path(n) => Graph::path(n)?,
            GraphSpec::Star(n) => Graph::star(n)?,
            GraphSpec::Complete(n) => Graph::complete(n)?,
            GraphSpec::Bipartite(a, b) => Graph::complete_bipartite(a, b)?,
            GraphSpec::File(ref p) => read_edge_list(p)?,
        })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Cycle(n) => write!(f, "C{n}"),
            GraphSpec::Path(n) => write!(f, "P{n}"),
            GraphSpec::Star(n) => write!(f, "K1,{}", n.saturating_sub(1)),
            GraphSpec::Complete(n) => write!(f, "K{n}"),
            GraphSpec::Bipartite(a, b) => write!(f, "K{a},{b}"),
            GraphSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// [`fastcons_core::rate::gradient_descent_rate`] with restarts spread over
/// the rayon pool. Each restart owns its generator stream, so the report does
/// not depend on scheduling.
pub fn optimize_parallel(s: &Spectrum, cfg: &SystemConfig, opts: &OptimizerOptions) -> Result<OptimizerReport> {
    s.require_connected()?;
    opts.validate(cfg.order())?;
    let eigs = s.distinct_values();
    let runs = (0..opts.restarts)
        .into_par_iter()
        .map(|i| run_restart(&eigs, cfg, opts, i))
        .collect::<Result<Vec<_>>>()?;
    merge_restarts(runs, opts)
}

/// One row of the convergence-rate table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub name: String,
    /// `None` for rows given only by an eigenratio.
    pub nodes: Option<usize>,
    pub eigenratio: f64,
    pub lower_bound: f64,
    pub best_rate: Option<f64>,
    pub final_rate: Option<f64>,
}

/// Table rows for `graphs`, optimized in parallel.
pub fn table1_rows(
    graphs: &[(String, Graph)],
    cfg: &SystemConfig,
    opts: &OptimizerOptions,
) -> Result<Vec<Table1Row>> {
    graphs
        .par_iter()
        .map(|(name, g)| {
            let s = spectrum_default(g)?;
            let (l2, ln) = s.extremes()?;
            let report = optimize_parallel(&s, cfg, opts)?;
            Ok(Table1Row {
                name: name.clone(),
                nodes: Some(g.node_count()),
                eigenratio: ln / l2,
                lower_bound: lower_bound_from_extremes(l2, ln, cfg.order()),
                best_rate: Some(report.best_rate),
                final_rate: Some(report.final_rate),
            })
        })
        .collect()
}

/// A row known only through its eigenratio `λ_N/λ₂`: the bound depends on
/// nothing else.
pub fn ratio_row(name: &str, eigenratio: f64, order: usize) -> Table1Row {
    Table1Row {
        name: name.to_string(),
        nodes: None,
        eigenratio,
        lower_bound: lower_bound_from_extremes(1.0, eigenratio, order),
        best_rate: None,
        final_rate: None,
    }
}

/// The cycle, path and `K_{4,6}` graphs on ten nodes.
pub fn standard_graphs() -> Vec<GraphSpec> {
    vec![GraphSpec::Cycle(10), GraphSpec::Path(10), GraphSpec::Bipartite(4, 6)]
}

/// Eigenratio of a ten-node small-world graph whose edges are not known;
/// its table row is built with [`ratio_row`].
pub const SMALL_WORLD_RATIO: f64 = 4.4790;
