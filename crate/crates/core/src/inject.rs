//! Gate injection: turning `|A_θ⟩` ancillas into the phase gate
//! `Λ(e^{iθ}) = diag(1, e^{iθ})` with a σz⊗σz measurement, a CNOT and a
//! random walk over the accumulated phase, plus the budget model that links
//! circuit size to the required distillation depth.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distill::{self, ancilla_count, asymptotic_gamma};
use crate::error::{Error, Result};
use crate::magic::{self, Family};
use crate::matrices::{c, hadamard, phase_k, C64};
use crate::pauli::PauliString;
use crate::rng::trial_rng;
use crate::statevec::StateVector;

/// Ancillas closer than this to `|A_θ⟩` in fidelity are accepted.
pub const ANCILLA_TOL: f64 = 1e-9;

fn zz() -> PauliString {
    "ZZ".parse().expect("valid literal")
}

fn check_single_qubit(psi: &StateVector) -> Result<()> {
    if psi.num_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: psi.num_qubits() });
    }
    Ok(())
}

/// One round of the circuit with whatever ancilla is supplied: measure σz⊗σz
/// on `ψ ⊗ ancilla`, CNOT the data qubit into the ancilla, drop the ancilla.
/// For an exact `|A_θ⟩` the result is `Λ(e^{±iθ})ψ` with sign `±1`.
pub fn inject_round_raw<R: Rng + ?Sized>(psi: &StateVector, ancilla: [C64; 2], rng: &mut R) -> Result<(i8, StateVector)> {
    check_single_qubit(psi)?;
    let mut joint = psi.kron(&StateVector::normalized(ancilla.to_vec())?)?;
    let (sign, _) = joint.measure_pauli(&zz(), rng)?;
    joint.apply_cnot(0, 1)?;
    let (out, bit) = joint.remove_qubit(1)?;
    debug_assert_eq!(bit, sign == -1);
    Ok((sign, out))
}

/// [`inject_round_raw`] after checking that the ancilla is `|A_θ⟩`.
pub fn inject_phase_round<R: Rng + ?Sized>(
    psi: &StateVector,
    ancilla: [C64; 2],
    theta: f64,
    rng: &mut R,
) -> Result<(i8, StateVector)> {
    let a = StateVector::from_amplitudes(ancilla.to_vec()).map_err(|_| Error::MalformedAncilla)?;
    let reference = StateVector::from_amplitudes(magic::a_state(theta).to_vec())?;
    if a.fidelity(&reference)? < 1.0 - ANCILLA_TOL {
        return Err(Error::MalformedAncilla);
    }
    inject_round_raw(psi, ancilla, rng)
}

/// `Λ(e^{iφ})ψ` for a single qubit.
pub fn apply_phase(psi: &StateVector, phi: f64) -> Result<StateVector> {
    check_single_qubit(psi)?;
    let mut out = psi.clone();
    out.apply_1q(&crate::matrices::phase_shift(phi), 0)?;
    Ok(out)
}

/// How walk positions are identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "q", rename_all = "snake_case")]
pub enum WalkMode {
    /// Stop only at position exactly 1.
    Integer,
    /// Positions modulo `q`, where `qθ ∈ 2πℤ`; stop at any `p ≡ 1`.
    Cyclic(u32),
}

impl WalkMode {
    /// `Cyclic(q)` for the smallest `q ≤ 64` with `qθ/2π` integral,
    /// otherwise `Integer`.
    pub fn for_theta(theta: f64) -> WalkMode {
        for q in 1..=64u32 {
            let turns = q as f64 * theta / (2.0 * PI);
            if (turns - turns.round()).abs() < 1e-9 {
                return WalkMode::Cyclic(q);
            }
        }
        WalkMode::Integer
    }

    fn reached(self, position: i64) -> bool {
        match self {
            WalkMode::Integer => position == 1,
            WalkMode::Cyclic(q) => (position - 1).rem_euclid(q as i64) == 0,
        }
    }

    /// Decay rate of the no-success probability, `−ln cos(π/q)`; zero for
    /// the integer walk, whose tail is a power law.
    pub fn theoretical_alpha(self) -> f64 {
        match self {
            WalkMode::Integer => 0.0,
            WalkMode::Cyclic(q) => -(PI / q as f64).cos().ln(),
        }
    }
}

/// Supplier of ancillas `|A_θ⟩`, each replaced by the orthogonal state
/// `|A_{θ+π}⟩` with probability `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AncillaSource {
    pub theta: f64,
    pub epsilon: f64,
}

impl AncillaSource {
    pub fn ideal(theta: f64) -> Self {
        AncillaSource { theta, epsilon: 0.0 }
    }

    pub fn faulty(theta: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        Ok(AncillaSource { theta, epsilon })
    }

    /// The ancilla and whether it is the faulty component.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ([C64; 2], bool) {
        let faulty = self.epsilon > 0.0 && rng.random::<f64>() < self.epsilon;
        let phase = if faulty { self.theta + PI } else { self.theta };
        (magic::a_state(phase), faulty)
    }
}

/// One recorded step of a walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InjectionRound {
    pub theta: f64,
    pub outcome: i8,
    /// Net applied phase is `position · θ` after this round.
    pub position: i64,
}

#[derive(Clone, Debug)]
pub struct WalkOutcome {
    pub success: bool,
    pub rounds: usize,
    pub position: i64,
    pub history: Vec<InjectionRound>,
    /// Faulty ancillas consumed; each one adds a σz error to the output.
    pub faulty_consumed: usize,
    pub state: StateVector,
}

/// Repeats injection rounds until the net gate is `Λ(e^{iθ})` or `budget`
/// ancillas have been used.
pub fn random_walk_inject<R: Rng + ?Sized>(
    psi: &StateVector,
    theta: f64,
    budget: usize,
    mode: WalkMode,
    rng: &mut R,
) -> Result<WalkOutcome> {
    random_walk_inject_with(psi, &AncillaSource::ideal(theta), budget, mode, rng)
}

pub fn random_walk_inject_with<R: Rng + ?Sized>(
    psi: &StateVector,
    source: &AncillaSource,
    budget: usize,
    mode: WalkMode,
    rng: &mut R,
) -> Result<WalkOutcome> {
    if budget == 0 {
        return Err(Error::Invalid("walk budget must be at least 1".into()));
    }
    let mut state = psi.clone();
    let mut position = 0i64;
    let mut history = Vec::new();
    let mut faulty_consumed = 0;
    while history.len() < budget {
        let (ancilla, faulty) = source.draw(rng);
        faulty_consumed += faulty as usize;
        let (sign, next) = inject_round_raw(&state, ancilla, rng)?;
        state = next;
        position += sign as i64;
        history.push(InjectionRound { theta: source.theta, outcome: sign, position });
        if mode.reached(position) {
            return Ok(WalkOutcome { success: true, rounds: history.len(), position, history, faulty_consumed, state });
        }
    }
    Ok(WalkOutcome { success: false, rounds: budget, position, history, faulty_consumed, state })
}

/// Result of the |T⟩-pair conversion.
#[derive(Clone, Debug)]
pub struct TPairOutcome {
    /// `cos γ|0⟩ + i sin γ|1⟩` after the CNOT, on success.
    pub intermediate: Option<StateVector>,
    /// `|A_{−π/6}⟩` up to phase, on success.
    pub output: Option<StateVector>,
    pub probability: f64,
}

/// Measures σz⊗σz on `|T⟩⊗|T⟩`. On `+1` (probability 2/3) XORs, drops the
/// second qubit and applies `H`, giving `|A_{−π/6}⟩`; on `−1` returns `None`.
pub fn t_pair_to_a<R: Rng + ?Sized>(rng: &mut R) -> Result<TPairOutcome> {
    let t = magic::t0_state();
    let mut pair = StateVector::product(&[t, t])?;
    let (sign, prob) = pair.measure_pauli(&zz(), rng)?;
    if sign == -1 {
        return Ok(TPairOutcome { intermediate: None, output: None, probability: prob });
    }
    pair.apply_cnot(0, 1)?;
    let (mid, _) = pair.remove_qubit(1)?;
    let mut out = mid.clone();
    out.apply_1q(&hadamard(), 0)?;
    Ok(TPairOutcome { intermediate: Some(mid), output: Some(out), probability: prob })
}

/// `|T⟩` copies consumed per successful conversion, on average.
pub fn t_pair_expected_consumption() -> f64 {
    let beta = 0.5 * (1.0 / 3f64.sqrt()).acos();
    2.0 / (beta.cos().powi(4) + beta.sin().powi(4))
}

/// `H K |H⟩ = e^{iπ/8} |A_{−π/4}⟩`.
pub fn h_to_a0(h: [C64; 2]) -> [C64; 2] {
    magic::apply(&(hadamard() * phase_k()), h)
}

/// Phase of the target gate for each family's conversion route.
pub fn injection_angle(family: Family) -> f64 {
    match family {
        Family::H => -FRAC_PI_4,
        Family::T => -FRAC_PI_6,
    }
}

/// Survival counts of many independent walks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkStats {
    pub theta: f64,
    /// Probability that each consumed ancilla is the faulty component.
    pub epsilon: f64,
    pub mode: WalkMode,
    pub budget: usize,
    pub walks: usize,
    pub seed: u64,
    pub successes: usize,
    /// Successful walks whose output carries a σz error (odd number of
    /// faulty ancillas).
    pub logical_errors: usize,
    pub ancillas_consumed: u64,
    /// `histogram[r]` walks succeeded in exactly `r` rounds.
    pub histogram: Vec<usize>,
}

impl WalkStats {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.walks as f64
    }

    /// Fraction of walks still running after `n` rounds.
    pub fn survival(&self, n: usize) -> f64 {
        let done: usize = self.histogram.iter().take(n + 1).sum();
        (self.walks - done) as f64 / self.walks as f64
    }
}

/// Runs `walks` walks on `|+⟩` with ideal ancillas; walk `i` uses the
/// stream `(seed, i)`.
pub fn simulate_walks(theta: f64, mode: WalkMode, budget: usize, walks: usize, seed: u64) -> Result<WalkStats> {
    simulate_walks_with(&AncillaSource::ideal(theta), mode, budget, walks, seed)
}

pub fn simulate_walks_with(
    source: &AncillaSource,
    mode: WalkMode,
    budget: usize,
    walks: usize,
    seed: u64,
) -> Result<WalkStats> {
    let plus = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)])?;
    let runs: Vec<(bool, usize, usize)> = (0..walks as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            random_walk_inject_with(&plus, source, budget, mode, &mut rng).map(|w| (w.success, w.rounds, w.faulty_consumed))
        })
        .collect::<Result<_>>()?;
    let mut histogram = vec![0; budget + 1];
    let mut successes = 0;
    let mut logical_errors = 0;
    let mut ancillas_consumed = 0u64;
    for &(success, rounds, faulty) in &runs {
        ancillas_consumed += rounds as u64;
        if success {
            histogram[rounds] += 1;
            successes += 1;
            logical_errors += faulty % 2;
        }
    }
    Ok(WalkStats {
        theta: source.theta,
        epsilon: source.epsilon,
        mode,
        budget,
        walks,
        seed,
        successes,
        logical_errors,
        ancillas_consumed,
        histogram,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Log-log slope of the survival probability over `n ∈ [lo, hi]`, sampled
/// at 16 log-spaced points.
pub fn fit_power_tail(stats: &WalkStats, lo: usize, hi: usize) -> Result<f64> {
    if lo < 1 || hi <= lo || hi > stats.budget {
        return Err(Error::Invalid(format!("fit range [{lo}, {hi}] not inside [1, {}]", stats.budget)));
    }
    let mut pts = Vec::new();
    for k in 0..16 {
        let n = (lo as f64 * (hi as f64 / lo as f64).powf(k as f64 / 15.0)).round() as usize;
        let s = stats.survival(n);
        if s <= 0.0 {
            return Err(Error::Invalid(format!("no surviving walks at n = {n}")));
        }
        pts.push(((n as f64).ln(), s.ln()));
    }
    Ok(least_squares_slope(&pts))
}

/// Decay rate `α` of an exponential survival tail, fitted where the
/// survival lies between 0.3 and `50/walks`.
pub fn fit_exponential_tail(stats: &WalkStats) -> Result<f64> {
    let floor = 50.0 / stats.walks as f64;
    let pts: Vec<(f64, f64)> = (1..=stats.budget)
        .map(|n| (n as f64, stats.survival(n)))
        .filter(|&(_, s)| s <= 0.3 && s >= floor)
        .map(|(n, s)| (n, s.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::Invalid("too few tail points to fit a decay rate".into()));
    }
    Ok(-least_squares_slope(&pts))
}

/// Measures `α` for the cyclic walk of `theta` by simulation.
pub fn measure_alpha(theta: f64, walks: usize, seed: u64) -> Result<f64> {
    let mode = WalkMode::for_theta(theta);
    if mode == WalkMode::Integer {
        return Err(Error::Invalid(format!("θ = {theta} is not a rational multiple of 2π; the tail is not exponential")));
    }
    let stats = simulate_walks(theta, mode, 4000, walks, seed)?;
    fit_exponential_tail(&stats)
}

/// Knobs of [`resource_estimate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceOptions {
    /// Walk decay rate; measured by simulation when `None`.
    pub alpha: Option<f64>,
    /// Constant in `ε_required = c / (L · max(ln L, 1))`.
    pub c: f64,
    /// Budget `K` keeps `L e^{−αK}` below this.
    pub abort_target: f64,
    pub walks: usize,
    pub seed: u64,
}

impl Default for ResourceOptions {
    fn default() -> Self {
        ResourceOptions { alpha: None, c: 1.0, abort_target: 1e-2, walks: 20_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceEstimate {
    pub gates: u64,
    pub family: Family,
    pub eps_raw: f64,
    pub theta: f64,
    pub walk_mode: WalkMode,
    pub alpha: f64,
    pub alpha_source: &'static str,
    /// Ancillas allowed per gate.
    pub budget_k: u64,
    /// `1 − (1 − e^{−αK})^L`.
    pub abort_probability: f64,
    /// `L e^{−αK}`.
    pub abort_bound: f64,
    pub eps_out_required: f64,
    /// Error target per distilled state of the family (halved for T, since
    /// each converted ancilla uses two).
    pub eps_distilled_target: f64,
    pub feasible: bool,
    pub levels: Option<usize>,
    /// Raw noisy states per ancilla `|A_θ⟩`.
    pub n_per_state: Option<f64>,
    /// `K · L · n_per_state`.
    pub n_total: Option<f64>,
    pub gamma: f64,
    /// `L (ln L)^{γ+1}` for comparison with `n_total`.
    pub n_total_scaling: f64,
    pub note: String,
}

/// Ancilla budget and raw-state count for a circuit with `gates`
/// non-Clifford gates fed by distilled states of `family`.
pub fn resource_estimate(gates: u64, family: Family, eps_raw: f64, opts: &ResourceOptions) -> Result<ResourceEstimate> {
    if gates == 0 {
        return Err(Error::Invalid("gate count must be at least 1".into()));
    }
    if !(opts.c > 0.0) || !(opts.abort_target > 0.0 && opts.abort_target < 1.0) {
        return Err(Error::Invalid("c must be positive and the abort target in (0, 1)".into()));
    }
    if !(0.0..=0.5).contains(&eps_raw) {
        return Err(Error::EpsilonOutOfRange(eps_raw));
    }
    let theta = injection_angle(family);
    let mode = WalkMode::for_theta(theta);
    let (alpha, alpha_source) = match opts.alpha {
        Some(a) if a > 0.0 => (a, "supplied"),
        Some(a) => return Err(Error::Invalid(format!("α = {a} must be positive"))),
        None => (measure_alpha(theta, opts.walks, opts.seed)?, "measured"),
    };
    let l = gates as f64;
    let budget_k = ((l / opts.abort_target).ln() / alpha).ceil().max(1.0) as u64;
    let miss = (-alpha * budget_k as f64).exp();
    let abort_probability = -(l * (-miss).ln_1p()).exp_m1();
    let abort_bound = l * miss;
    let eps_out_required = opts.c / (l * l.ln().max(1.0));
    let (eps_distilled_target, per_conversion) = match family {
        Family::H => (eps_out_required, 1.0),
        Family::T => (eps_out_required / 2.0, t_pair_expected_consumption()),
    };
    let plan = ancilla_count(family, eps_raw, eps_distilled_target)?;
    let gamma = asymptotic_gamma(family);
    let n_total_scaling = l * l.ln().max(1.0).powf(gamma + 1.0);
    let (feasible, levels, n_per_state, n_total, note) = match plan {
        Some(p) => {
            let n = p.raw_per_output * per_conversion;
            (true, Some(p.levels), Some(n), Some(budget_k as f64 * l * n), format!("{} distillation level(s)", p.levels))
        }
        None => (
            false,
            None,
            None,
            None,
            format!("raw error {eps_raw} is not below the threshold {:.6}", distill::threshold(family)),
        ),
    };
    Ok(ResourceEstimate {
        gates,
        family,
        eps_raw,
        theta,
        walk_mode: mode,
        alpha,
        alpha_source,
        budget_k,
        abort_probability,
        abort_bound,
        eps_out_required,
        eps_distilled_target,
        feasible,
        levels,
        n_per_state,
        n_total,
        gamma,
        n_total_scaling,
        note,
    })
}
