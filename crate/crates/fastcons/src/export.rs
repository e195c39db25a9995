//! CSV writers. Every file has a header row; reals are written as `{:.16e}`
//! (17 significant digits), so identical runs give byte-identical files.

use std::io::{self, Write};

use fastcons_core::finite_time::{AnnihilationResidual, GainSchedule};
use fastcons_core::rate::OptimizerReport;
use fastcons_core::sim::Trajectory;
use fastcons_core::Spectrum;

use crate::harness::Table1Row;

/// Formats a real with 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(w: &mut impl Write, cells: impl IntoIterator<Item = String>) -> io::Result<()> {
    let cells: Vec<String> = cells.into_iter().collect();
    writeln!(w, "{}", cells.join(","))
}

/// `k,e_k,x_1_1,…,x_N_n`. When the trajectory kept only errors the state
/// columns are omitted.
pub fn write_trajectory(t: &Trajectory, mut w: impl Write) -> io::Result<()> {
    let n = t.config().order();
    let states = t.states();
    let mut header = vec!["k".to_string(), "e_k".to_string()];
    if states.is_some() {
        for i in 1..=t.agents() {
            header.extend((1..=n).map(|l| format!("x_{i}_{l}")));
        }
    }
    row(&mut w, header)?;
    for (k, e) in t.errors().iter().enumerate() {
        let mut cells = vec![k.to_string(), real(*e)];
        if let Some(s) = states {
            cells.extend(s[k].iter().map(|&x| real(x)));
        }
        row(&mut w, cells)?;
    }
    Ok(())
}

/// `step,K1,…,Kn`, one row per scheduled step.
pub fn write_schedule(s: &GainSchedule, mut w: impl Write) -> io::Result<()> {
    let n = s.config().order();
    row(&mut w, std::iter::once("step".to_string()).chain((1..=n).map(|j| format!("K{j}"))))?;
    for (step, k) in s.entries().iter().enumerate() {
        row(&mut w, std::iter::once(step.to_string()).chain(k.iter().map(|&v| real(v))))?;
    }
    Ok(())
}

/// `index,eigenvalue,distinct,multiplicity`; the last two columns are set on
/// the first eigenvalue of each nonzero cluster and empty elsewhere.
pub fn write_spectrum(s: &Spectrum, mut w: impl Write) -> io::Result<()> {
    row(&mut w, ["index", "eigenvalue", "distinct", "multiplicity"].map(String::from))?;
    let size = s.node_count();
    let mut firsts = vec![None; size];
    let mut upper = size;
    for c in &s.distinct_nonzero {
        let lower = upper - c.multiplicity;
        firsts[lower] = Some(c);
        upper = lower;
    }
    for (i, (&v, c)) in s.eigenvalues.iter().zip(&firsts).enumerate() {
        let (d, m) = c.map_or((String::new(), String::new()), |c| (real(c.value), c.multiplicity.to_string()));
        row(&mut w, [(i + 1).to_string(), real(v), d, m])?;
    }
    Ok(())
}

/// `lambda,max_norm,scale,residual`.
pub fn write_residuals(r: &[AnnihilationResidual], mut w: impl Write) -> io::Result<()> {
    row(&mut w, ["lambda", "max_norm", "scale", "residual"].map(String::from))?;
    for r in r {
        row(&mut w, [r.lambda, r.max_norm, r.scale, r.residual].map(real))?;
    }
    Ok(())
}

/// `iteration,rate` for the winning restart.
pub fn write_rate_trace(report: &OptimizerReport, mut w: impl Write) -> io::Result<()> {
    row(&mut w, ["iteration", "rate"].map(String::from))?;
    for (t, r) in report.rate_trace.iter().enumerate() {
        row(&mut w, [t.to_string(), real(*r)])?;
    }
    Ok(())
}

/// `restart,initial_rate,final_rate,best_rate,best_K1,…`.
pub fn write_restarts(report: &OptimizerReport, mut w: impl Write) -> io::Result<()> {
    let n = report.best_gains.len();
    let head = ["restart", "initial_rate", "final_rate", "best_rate"].map(String::from);
    row(&mut w, head.into_iter().chain((1..=n).map(|j| format!("best_K{j}"))))?;
    for r in &report.runs {
        let cells = [r.index.to_string(), real(r.initial_rate), real(r.final_rate), real(r.best_rate)];
        row(&mut w, cells.into_iter().chain(r.best_gains.iter().map(|&v| real(v))))?;
    }
    Ok(())
}

/// Quotes a text cell when it holds a comma or quote.
fn text(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `name,nodes,eigenratio,lower_bound,best_rate,final_rate`; rates are empty
/// for rows computed from an eigenratio alone.
pub fn write_table1(rows: &[Table1Row], mut w: impl Write) -> io::Result<()> {
    let head = ["name", "nodes", "eigenratio", "lower_bound", "best_rate", "final_rate"];
    row(&mut w, head.map(String::from))?;
    for r in rows {
        let opt = |v: Option<f64>| v.map_or(String::new(), real);
        row(
            &mut w,
            [
                text(&r.name),
                r.nodes.map_or(String::new(), |n| n.to_string()),
                real(r.eigenratio),
                real(r.lower_bound),
                opt(r.best_rate),
                opt(r.final_rate),
            ],
        )?;
    }
    Ok(())
}
