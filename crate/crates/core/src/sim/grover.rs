use std::collections::HashMap;

use super::{BasisKey, SparseState};
use crate::error::SimError;
use crate::instances::{enumerate_solutions, ConstraintSystem};
use crate::oracle::{build_grover, OracleOptions};

/// `sin²((2r+1)θ)` with `sin θ = √(M / 2^free)`.
pub fn closed_form_probability(free: usize, solutions: usize, iterations: usize) -> f64 {
    let theta = (solutions as f64 / 2f64.powi(free as i32)).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// `⌊(π/4)√(2^free / M)⌋`, or zero without solutions.
pub fn optimal_iterations(free: usize, solutions: usize) -> usize {
    if solutions == 0 {
        return 0;
    }
    (std::f64::consts::FRAC_PI_4 * (2f64.powi(free as i32) / solutions as f64).sqrt()).floor() as usize
}

/// Outcome of one simulated search.
#[derive(Clone, Debug, PartialEq)]
pub struct GroverRun {
    pub iterations: usize,
    pub free: usize,
    pub solutions: usize,
    pub probability: f64,
    pub closed_form: f64,
    pub num_qubits: usize,
}

impl GroverRun {
    /// Simulates `iterations` rounds and sums the probability of every
    /// solution with all ancillae at zero.
    pub fn simulate(
        sys: &ConstraintSystem,
        iterations: usize,
        opts: OracleOptions,
        max_qubits: usize,
    ) -> Result<Self, SimError> {
        let sols = enumerate_solutions(sys)?;
        let c = build_grover(sys, iterations, opts);
        if c.num_qubits() > max_qubits {
            return Err(SimError::QubitCap { qubits: c.num_qubits(), cap: max_qubits });
        }
        let mut s = SparseState::zero(c.num_qubits())?;
        s.run(&c)?;
        let amps: HashMap<BasisKey, _> = s.canonical().into_iter().collect();
        let probability = sols
            .iter()
            .map(|z| {
                let key = BasisKey::from_bits(z.iter().copied().enumerate());
                amps.get(&key).map_or(0.0, |a| a.norm_sqr())
            })
            .sum();
        let free = sys.free_variables().len();
        Ok(GroverRun {
            iterations,
            free,
            solutions: sols.len(),
            probability,
            closed_form: closed_form_probability(free, sols.len(), iterations),
            num_qubits: c.num_qubits(),
        })
    }
}

/// Probability of measuring a solution after `iterations` rounds.
pub fn grover_success_probability(sys: &ConstraintSystem, iterations: usize) -> Result<f64, SimError> {
    GroverRun::simulate(sys, iterations, OracleOptions::default(), super::SPARSE_QUBIT_CAP).map(|r| r.probability)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{lower, Literal, ProblemInstance};

    #[test]
    fn closed_form_values() {
        assert!((closed_form_probability(4, 1, 3) - 0.961_318_969_726_562_5).abs() < 1e-12);
        assert_eq!(optimal_iterations(4, 1), 3);
        assert_eq!(optimal_iterations(4, 0), 0);
    }

    #[test]
    fn single_solution_tracks_closed_form() {
        // x0 ∧ ¬x1 ∧ x2 ∧ x3 as unit clauses.
        let clauses = vec![
            vec![Literal::pos(0)],
            vec![Literal::neg(1)],
            vec![Literal::pos(2)],
            vec![Literal::pos(3)],
        ];
        let sys = lower(&ProblemInstance::sat(4, clauses)).unwrap();
        for r in 0..=3 {
            let p = grover_success_probability(&sys, r).unwrap();
            assert!((p - closed_form_probability(4, 1, r)).abs() < 1e-9, "r={r} p={p}");
        }
    }
}
