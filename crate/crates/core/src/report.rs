//! Per-run statistics in the shape of a reduction table row.

use std::fmt;
use std::time::{Duration, Instant};

use crate::automaton::Wdfa;
use crate::minimize::{assert_right_invariant, minimize_sorted_unchecked, Minimization, MinimizeError};

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub dataset: String,
    pub in_nodes: usize,
    pub out_nodes: usize,
    pub in_edges: usize,
    pub out_edges: usize,
    pub sigma: usize,
    /// Wall time of the minimization proper, without parsing, building or sorting.
    pub time_s: f64,
}

impl RunReport {
    /// Percentage of nodes removed.
    pub fn reduction_pct(&self) -> f64 {
        if self.in_nodes == 0 {
            return 0.0;
        }
        100.0 * (self.in_nodes - self.out_nodes) as f64 / self.in_nodes as f64
    }

    pub fn nodes_per_s(&self) -> f64 {
        if self.time_s > 0.0 {
            self.in_nodes as f64 / self.time_s
        } else {
            f64::INFINITY
        }
    }

    pub const TSV_HEADER: &'static str =
        "dataset\tin_nodes\tout_nodes\treduction_pct\ttime_s\tnodes_per_s\tin_edges\tout_edges\tsigma";

    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{:.3}\t{:.6}\t{:.0}\t{}\t{}\t{}",
            self.dataset,
            self.in_nodes,
            self.out_nodes,
            self.reduction_pct(),
            self.time_s,
            self.nodes_per_s(),
            self.in_edges,
            self.out_edges,
            self.sigma
        )
    }
}

/// `in_nodes out_nodes reduction% time_s nodes_per_s`.
impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {:.1}% {:.6} {:.0}",
            self.in_nodes,
            self.out_nodes,
            self.reduction_pct(),
            self.time_s,
            self.nodes_per_s()
        )
    }
}

/// Runs [`minimize_sorted`](crate::minimize::minimize_sorted) on `a` under a monotonic clock. The debug-build
/// consistency check runs after the clock stops.
pub fn timed_minimize(a: &Wdfa, dataset: &str) -> Result<(Minimization, RunReport), MinimizeError> {
    let start = Instant::now();
    let m = minimize_sorted_unchecked(a)?;
    let elapsed = start.elapsed();
    if cfg!(debug_assertions) {
        assert_right_invariant(a, &m.partition);
    }
    let report = report_for(a, &m.automaton, dataset, elapsed);
    Ok((m, report))
}

pub fn report_for(input: &Wdfa, output: &Wdfa, dataset: &str, elapsed: Duration) -> RunReport {
    RunReport {
        dataset: dataset.to_string(),
        in_nodes: input.num_states(),
        out_nodes: output.num_states(),
        in_edges: input.num_edges(),
        out_edges: output.num_edges(),
        sigma: input.alphabet().len(),
        time_s: elapsed.as_secs_f64(),
    }
}

/// Least-squares line `y = slope * x + intercept`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Exponent `b` of the best fit `y = c * x^b` (slope in log-log space).
pub fn power_law_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    linear_fit(&logs).map(|(b, _)| b)
}
