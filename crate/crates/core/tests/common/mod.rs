//! Helpers shared by the integration tests and the acceptance binary.
#![allow(dead_code)]

use magicsim::tableau::{random_circuit, random_pauli};
use magicsim::{StabilizerTableau, StateVector};
use rand::Rng;

/// Outcome of running one random Clifford circuit on both simulators.
#[derive(Debug)]
pub struct DifferentialReport {
    pub qubits: usize,
    pub gates: usize,
    pub measurements: usize,
    /// Largest `|p_tableau − p_statevector|` over all measurements.
    pub max_prob_diff: f64,
    /// Every tableau probability lies in {0, 1/2, 1}.
    pub probabilities_quantized: bool,
    /// Largest `|⟨S⟩ − 1|` over tableau stabilizers at the end.
    pub max_stabilizer_defect: f64,
}

/// Runs a random circuit of `gates` gates on `n` qubits with `measurements`
/// random Pauli measurements spread through it. Both simulators collapse to
/// the tableau's outcome.
pub fn differential_run<R: Rng>(n: usize, gates: usize, measurements: usize, rng: &mut R) -> DifferentialReport {
    let circuit = random_circuit(n, gates, rng);
    let mut tab = StabilizerTableau::new(n).unwrap();
    let mut sv = StateVector::zero(n).unwrap();
    let mut cuts: Vec<usize> = (0..measurements).map(|_| rng.random_range(0..=gates)).collect();
    cuts.sort_unstable();
    let mut max_prob_diff = 0.0f64;
    let mut quantized = true;
    let mut cut = cuts.iter().peekable();
    for i in 0..=gates {
        while cut.peek() == Some(&&i) {
            cut.next();
            let p = random_pauli(n, rng);
            let sv_plus = sv.prob_plus(&p).unwrap();
            let m = tab.measure_pauli(&p, rng).unwrap();
            let tab_plus = if m.outcome == 1 { m.probability } else { 1.0 - m.probability };
            quantized &= [0.0, 0.5, 1.0].contains(&tab_plus);
            max_prob_diff = max_prob_diff.max((tab_plus - sv_plus).abs());
            sv.project_pauli(&p, m.outcome).unwrap();
        }
        if i < gates {
            tab.apply_gate(circuit[i]).unwrap();
            circuit[i].apply_to(&mut sv).unwrap();
        }
    }
    let max_stabilizer_defect = tab
        .stabilizers()
        .iter()
        .map(|s| (sv.expectation(s).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    DifferentialReport {
        qubits: n,
        gates,
        measurements,
        max_prob_diff,
        probabilities_quantized: quantized,
        max_stabilizer_defect,
    }
}
