//! Dense statevector simulation of circuit-IR circuits, capped at 20 qubits.
//!
//! Qubit `k` is bit `k` of the basis-state index. Marginals are computed
//! exactly rather than sampled, so every test is deterministic.
//!
//! Reset is the one non-unitary gate. In the encode circuits the auxiliary
//! qubit is a function of the surrounding basis state at every reset point
//! (each basis branch holds it definitely 0 or definitely 1), so forcing it
//! to |0> branch-by-branch is norm-preserving and deterministic, and agrees
//! with measure-then-flip on every computational-basis observable. When that
//! condition fails -- some branch pair differs only in the reset qubit --
//! the exact mode refuses with [`Error::NondeterministicReset`] instead of
//! silently picking an outcome; [`ResetMode::Sample`] opts into seeded
//! Born-rule sampling for exploratory circuits.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{require_valid, Circuit, Gate, GateKind, Polarity};
use crate::error::{Error, Result};

/// Statevector simulation refuses registers larger than this.
pub const MAX_SIM_QUBITS: usize = 20;

/// Two distributions are "equivalent" when their total-variation distance is
/// at or below this.
pub const EQUIVALENCE_EPS: f64 = 1e-9;

/// Amplitudes below this magnitude count as unpopulated when deciding
/// whether a reset is deterministic.
const RESET_SUPPORT_EPS: f64 = 1e-10;

/// Full amplitude vector over `2^n` basis states.
#[derive(Debug, Clone)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn zero_state(n: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        Self { n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probability(&self, basis_state: u64) -> f64 {
        self.amps[basis_state as usize].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability of measuring qubit `k` as 1.
    pub fn qubit_probability(&self, k: usize) -> f64 {
        let bit = 1usize << k;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// How [`run_with`] treats resets on qubits that are not branch-definite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResetMode {
    /// Refuse with [`Error::NondeterministicReset`].
    Exact,
    /// Measure with Born probabilities from a seeded generator, then flip.
    Sample { seed: u64 },
}

/// Runs a circuit in exact mode.
pub fn run(circuit: &Circuit) -> Result<StateVector> {
    run_with(circuit, ResetMode::Exact)
}

pub fn run_with(circuit: &Circuit, mode: ResetMode) -> Result<StateVector> {
    let total = circuit.register.total();
    if total > MAX_SIM_QUBITS {
        return Err(Error::TooManyQubits {
            total,
            limit: MAX_SIM_QUBITS,
        });
    }
    require_valid(circuit)?;

    let mut rng = match mode {
        ResetMode::Exact => None,
        ResetMode::Sample { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut state = StateVector::zero_state(total);
    for gate in &circuit.gates {
        apply_gate(&mut state, gate, &mut rng)?;
    }
    Ok(state)
}

fn apply_gate(
    state: &mut StateVector,
    gate: &Gate,
    rng: &mut Option<ChaCha8Rng>,
) -> Result<()> {
    match gate.kind {
        GateKind::Identity => {}
        GateKind::Hadamard => apply_hadamard(state, gate.target),
        GateKind::Not | GateKind::ControlledNot => {
            apply_controlled_not(state, gate.target, &gate.controls)
        }
        GateKind::Reset => apply_reset(state, gate.target, rng)?,
    }
    Ok(())
}

fn apply_hadamard(state: &mut StateVector, target: usize) {
    let bit = 1usize << target;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..state.amps.len() {
        if i & bit == 0 {
            let a = state.amps[i];
            let b = state.amps[i | bit];
            state.amps[i] = (a + b) * inv_sqrt2;
            state.amps[i | bit] = (a - b) * inv_sqrt2;
        }
    }
}

fn controls_match(index: usize, controls: &[(usize, Polarity)]) -> bool {
    controls.iter().all(|&(q, polarity)| {
        let set = index & (1usize << q) != 0;
        match polarity {
            Polarity::One => set,
            Polarity::Zero => !set,
        }
    })
}

fn apply_controlled_not(state: &mut StateVector, target: usize, controls: &[(usize, Polarity)]) {
    let bit = 1usize << target;
    for i in 0..state.amps.len() {
        if i & bit == 0 && controls_match(i, controls) {
            state.amps.swap(i, i | bit);
        }
    }
}

fn apply_reset(
    state: &mut StateVector,
    target: usize,
    rng: &mut Option<ChaCha8Rng>,
) -> Result<()> {
    let bit = 1usize << target;
    let branch_definite = (0..state.amps.len()).all(|i| {
        i & bit != 0
            || state.amps[i].norm() < RESET_SUPPORT_EPS
            || state.amps[i | bit].norm() < RESET_SUPPORT_EPS
    });

    if branch_definite {
        // Every populated branch carries a definite value on the target, so
        // zeroing it branch-wise is an isometry on the reachable states.
        for i in 0..state.amps.len() {
            if i & bit != 0 {
                let moved = state.amps[i];
                state.amps[i & !bit] += moved;
                state.amps[i] = Complex64::ZERO;
            }
        }
        return Ok(());
    }

    let p_one: f64 = (0..state.amps.len())
        .filter(|i| i & bit != 0)
        .map(|i| state.amps[i].norm_sqr())
        .sum();
    let Some(rng) = rng else {
        return Err(Error::NondeterministicReset {
            qubit: target,
            probability: p_one,
        });
    };

    let outcome_one = rng.gen::<f64>() < p_one;
    let keep_prob = if outcome_one { p_one } else { 1.0 - p_one };
    let scale = 1.0 / keep_prob.sqrt();
    for i in 0..state.amps.len() {
        let is_one = i & bit != 0;
        if is_one == outcome_one {
            state.amps[i] *= scale;
        } else {
            state.amps[i] = Complex64::ZERO;
        }
    }
    if outcome_one {
        apply_controlled_not(state, target, &[]);
    }
    Ok(())
}

/// Exact probability distribution over a qubit subset. Keys pack the subset
/// bits in the order given: bit `p` of the key is qubit `subset[p]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub probabilities: BTreeMap<u64, f64>,
}

impl Distribution {
    pub fn probability(&self, key: u64) -> f64 {
        self.probabilities.get(&key).copied().unwrap_or(0.0)
    }

    pub fn total_variation(&self, other: &Distribution) -> f64 {
        let keys: std::collections::BTreeSet<u64> = self
            .probabilities
            .keys()
            .chain(other.probabilities.keys())
            .copied()
            .collect();
        0.5 * keys
            .into_iter()
            .map(|k| (self.probability(k) - other.probability(k)).abs())
            .sum::<f64>()
    }
}

/// Exact marginal over `subset`, no sampling.
pub fn measure_distribution(state: &StateVector, subset: &[usize]) -> Distribution {
    assert!(
        subset.iter().all(|&q| q < state.n),
        "subset indices must address register qubits"
    );
    let mut probabilities = BTreeMap::new();
    for (i, amp) in state.amps.iter().enumerate() {
        let p = amp.norm_sqr();
        if p > 0.0 {
            let mut key = 0u64;
            for (pos, &q) in subset.iter().enumerate() {
                if i & (1usize << q) != 0 {
                    key |= 1 << pos;
                }
            }
            *probabilities.entry(key).or_insert(0.0) += p;
        }
    }
    Distribution { probabilities }
}

/// Outcome of comparing two circuits over the same register.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub tv_distance: f64,
    pub max_amp_dev: f64,
    pub equivalent: bool,
    pub subset: Vec<usize>,
}

/// Runs both circuits and reports the total-variation distance between
/// their marginals on `subset` plus the largest amplitude deviation on the
/// full state.
pub fn compare_circuits(a: &Circuit, b: &Circuit, subset: &[usize]) -> Result<EquivalenceReport> {
    if a.register != b.register {
        return Err(Error::RegisterMismatch);
    }
    let state_a = run(a)?;
    let state_b = run(b)?;
    let dist_a = measure_distribution(&state_a, subset);
    let dist_b = measure_distribution(&state_b, subset);
    let tv_distance = dist_a.total_variation(&dist_b);
    let max_amp_dev = state_a
        .amps
        .iter()
        .zip(&state_b.amps)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    Ok(EquivalenceReport {
        tv_distance,
        max_amp_dev,
        equivalent: tv_distance <= EQUIVALENCE_EPS,
        subset: subset.to_vec(),
    })
}
