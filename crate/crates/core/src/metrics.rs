//! Resource accounting, the matching-count experiment and the
//! superconducting swap model.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::circuit::Role;
use crate::grid::GridPos;
use crate::instances::generate::rng_for;
use crate::instances::{ConstraintSystem, Hypergraph};
use crate::layout::{column_height, partition_units};
use crate::program::Section;
use crate::schedule::{count_resources, Resources, Schedule, Step};

/// Which merge structure dominates the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MergePath {
    Qbt,
    Qra,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionCost {
    pub section: Section,
    pub depth: usize,
    pub transports: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n: usize,
    pub units: usize,
    pub bits: usize,
    pub path: MergePath,
    pub measured: Resources,
    /// Qubits that carry gates, excluding the phase qubit and completing
    /// atoms.
    pub working_qubits: usize,
    pub predicted_qubits: usize,
    pub merge_depth: usize,
    pub predicted_merge_depth: f64,
    /// Moves of the first checking pass, all atoms and data atoms only.
    pub check_transports: usize,
    pub check_data_transports: usize,
    pub sections: Vec<SectionCost>,
}

fn log2(n: usize) -> f64 {
    (n.max(1) as f64).log2()
}

/// `4 log₂ N`.
pub fn qbt_depth_prediction(units: usize) -> f64 {
    4.0 * log2(units)
}

/// `8 (log₂ N)²`.
pub fn qra_depth_prediction(units: usize) -> f64 {
    8.0 * log2(units).powi(2)
}

/// `n + 2N` or `n + (b+1)N`.
pub fn qubit_prediction(path: MergePath, n: usize, units: usize, bits: usize) -> usize {
    match path {
        MergePath::Qbt => n + 2 * units,
        MergePath::Qra => n + (bits + 1) * units,
    }
}

/// Moves from the first `Check` span up to the first span of a later
/// section; returns `(all, data)`.
pub fn checking_pass_transports(s: &Schedule) -> (usize, usize) {
    let (mut all, mut data) = (0, 0);
    let mut seen = false;
    for span in &s.spans {
        match span.section {
            Section::Check => seen = true,
            Section::Init => continue,
            _ if seen => break,
            _ => continue,
        }
        for st in &s.steps[span.steps.clone()] {
            if let Step::Move(p) = st {
                all += p.moves.len();
                data += p.moves.iter().filter(|m| s.qubits[m.qubit].role == Role::Data).count();
            }
        }
    }
    (all, data)
}

/// Measured cost of `s` next to the closed-form predictions for `sys`.
pub fn resource_report(s: &Schedule, sys: &ConstraintSystem) -> ResourceReport {
    let units = sys.num_units();
    let bits = sys.bits();
    let path = if sys.h_groups.is_empty() { MergePath::Qbt } else { MergePath::Qra };
    let measured = count_resources(s);
    let sections = Section::ALL
        .into_iter()
        .map(|section| {
            let transports = s
                .spans
                .iter()
                .filter(|sp| sp.section == section)
                .flat_map(|sp| &s.steps[sp.steps.clone()])
                .map(|st| if let Step::Move(p) = st { p.moves.len() } else { 0 })
                .sum();
            SectionCost { section, depth: s.depth_in(section), transports }
        })
        .collect();
    let (check_transports, check_data_transports) = checking_pass_transports(s);
    ResourceReport {
        n: sys.n,
        units,
        bits,
        path,
        measured,
        working_qubits: measured.qubits.saturating_sub(1),
        predicted_qubits: qubit_prediction(path, sys.n, units, bits),
        merge_depth: s.depth_in(Section::Merge),
        predicted_merge_depth: match path {
            MergePath::Qbt => qbt_depth_prediction(units),
            MergePath::Qra => qra_depth_prediction(units),
        },
        check_transports,
        check_data_transports,
        sections,
    }
}

/// One row of the matching-count experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LRow {
    pub n: usize,
    pub edges: usize,
    pub t: usize,
    pub l_mean: f64,
    pub l_std: f64,
    /// `L_mean / (t N / n)`.
    pub l_norm: f64,
}

/// Random `t`-uniform hypergraphs with `edge_count(n)` edges; each edge is
/// a uniform `t`-subset and repeated edges are allowed. Trial `i` at size
/// `n` draws from stream `(seed ⊕ n, i)`.
pub fn l_scaling_experiment(
    t: usize,
    n_values: &[usize],
    edge_count: impl Fn(usize) -> usize,
    trials: usize,
    seed: u64,
) -> Vec<LRow> {
    n_values
        .iter()
        .map(|&n| {
            let edges = edge_count(n);
            let ls: Vec<f64> = (0..trials)
                .map(|i| {
                    let mut rng = rng_for(seed ^ (n as u64).rotate_left(32), i as u64);
                    let e = (0..edges).map(|_| sample(&mut rng, n, t.min(n)).into_vec()).collect();
                    partition_units(&Hypergraph::new(n, e), None).len() as f64
                })
                .collect();
            let mean = ls.iter().sum::<f64>() / ls.len().max(1) as f64;
            let var = ls.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / ls.len().max(1) as f64;
            LRow { n, edges, t, l_mean: mean, l_std: var.sqrt(), l_norm: mean / (t * edges) as f64 * n as f64 }
        })
        .collect()
}

/// Superconducting comparison; a coarse model, not a compiled circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperconductingReport {
    pub n: usize,
    pub units: usize,
    /// SWAPs for the checking pass with data on a row-major `⌈√n⌉` grid.
    pub swaps: usize,
    /// `c·√N` with `c = 1`.
    pub merge_depth: f64,
    /// `4 log₂ N` for the tweezer-array tree.
    pub rydberg_merge_depth: f64,
}

/// Each unit is treated as a chain of two-qubit interactions between
/// consecutive variables; an interaction at Manhattan distance `d` costs
/// `d − 1` swaps.
pub fn superconducting_estimate(sys: &ConstraintSystem) -> SuperconductingReport {
    let w = column_height(sys.n) as i64;
    let site = |v: usize| GridPos::new(v as i64 / w, v as i64 % w);
    let swaps = sys
        .retained_units()
        .iter()
        .flat_map(|(_, vars)| vars.windows(2).map(|p| (site(p[0]).manhattan(site(p[1])) - 1).max(0) as usize))
        .sum();
    let units = sys.num_units();
    SuperconductingReport {
        n: sys.n,
        units,
        swaps,
        merge_depth: (units as f64).sqrt(),
        rydberg_merge_depth: qbt_depth_prediction(units),
    }
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Fits swaps-per-unit against `n` over random graph instances with
/// `ratio · n` edges (maximum independent set encoding), `trials` per size.
/// The slope is the exponent of `n` in the `N √n` scaling.
pub fn swap_scaling_exponent(n_values: &[usize], ratio: usize, trials: usize, seed: u64) -> f64 {
    use crate::instances::{lower, ProblemInstance, ProblemKind};
    let points: Vec<(f64, f64)> = n_values
        .iter()
        .map(|&n| {
            let per_unit: f64 = (0..trials)
                .map(|i| {
                    let mut rng = rng_for(seed ^ (n as u64).rotate_left(32), i as u64);
                    let edges: Vec<(usize, usize)> = (0..ratio * n)
                        .map(|_| {
                            let e = sample(&mut rng, n, 2);
                            (e.index(0).min(e.index(1)), e.index(0).max(e.index(1)))
                        })
                        .collect();
                    let inst = ProblemInstance::graph(ProblemKind::Mis, n, edges, Some(1));
                    let sys = lower(&inst).expect("random graphs lower");
                    let r = superconducting_estimate(&sys);
                    r.swaps as f64 / r.units.max(1) as f64
                })
                .sum::<f64>()
                / trials as f64;
            (n as f64, per_unit)
        })
        .collect();
    log_log_slope(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate::random_ksat;
    use crate::instances::{lower, ProblemInstance, ProblemKind};
    use crate::layout::transpile_oracle;
    use crate::oracle::OracleOptions;

    #[test]
    fn predictions() {
        assert_eq!(qubit_prediction(MergePath::Qbt, 8, 8, 1), 24);
        assert_eq!(qbt_depth_prediction(1024), 40.0);
        assert_eq!(qra_depth_prediction(16), 128.0);
    }

    #[test]
    fn disjoint_edges_need_one_matching() {
        let h = Hypergraph::new(8, (0..4).map(|i| vec![2 * i, 2 * i + 1]).collect());
        assert_eq!(partition_units(&h, None).len(), 1);
    }

    #[test]
    fn experiment_is_deterministic() {
        let a = l_scaling_experiment(3, &[16, 32], |n| 4 * n, 5, 42);
        let b = l_scaling_experiment(3, &[16, 32], |n| 4 * n, 5, 42);
        assert_eq!(a, b);
    }

    #[test]
    fn local_instance_needs_no_swaps() {
        let inst = ProblemInstance::graph(ProblemKind::Mis, 4, vec![(0, 1), (2, 3)], Some(1));
        let sys = lower(&inst).unwrap();
        assert_eq!(superconducting_estimate(&sys).swaps, 0);
    }

    #[test]
    fn report_on_sat() {
        let sys = lower(&random_ksat(8, 8, 3, &mut rng_for(1, 0))).unwrap();
        let s = transpile_oracle(&sys, OracleOptions::base()).unwrap();
        let r = resource_report(&s, &sys);
        assert_eq!(r.path, MergePath::Qbt);
        assert!(r.check_data_transports <= r.check_transports);
        assert_eq!(r.sections.iter().map(|c| c.depth).sum::<usize>(), r.measured.depth);
    }
}
