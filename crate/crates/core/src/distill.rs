//! Distillation rounds: closed-form error maps, Monte Carlo runs on the
//! statevector oracle, thresholds and multi-level cascades.
//!
//! A T round consumes 5 copies and postselects on the trivial syndrome of
//! the five-qubit code. An H round consumes 15 copies of `|A_0⟩`-type states
//! and postselects on the trivial `A` syndrome of the fifteen-qubit code.
//! Both maps are written two ways: as the simplified closed forms and as
//! ratios of weight-enumerator polynomials in `(ε, 1−ε)`. The second form is
//! evaluated in log space so cascades stay accurate long after `ε` leaves
//! the range of `f64`.

use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{reed_muller_spaces, FifteenQubitCode, FiveQubitCode};
use crate::error::{Error, Result};
use crate::magic::{self, Family, Qubit1State};
use crate::rng::trial_rng;

fn check_epsilon(eps: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(Error::EpsilonOutOfRange(eps));
    }
    Ok(())
}

/// `ε_out` of one T round: `(t⁵ + 5t²)/(1 + 5t² + 5t³ + t⁵)`, `t = ε/(1−ε)`.
pub fn t_eps_out(eps: f64) -> f64 {
    let t = eps / (1.0 - eps);
    (t.powi(5) + 5.0 * t * t) / (1.0 + 5.0 * t * t + 5.0 * t.powi(3) + t.powi(5))
}

/// Success probability of one T round.
pub fn t_success(eps: f64) -> f64 {
    let q = 1.0 - eps;
    (eps.powi(5) + 5.0 * eps * eps * q.powi(3) + 5.0 * eps.powi(3) * q * q + q.powi(5)) / 6.0
}

/// `p_s = (1 + 15(1−2ε)⁸)/16` for one H round.
pub fn h_success(eps: f64) -> f64 {
    (1.0 + 15.0 * (1.0 - 2.0 * eps).powi(8)) / 16.0
}

/// `ε_out = (1 − 15q⁷ + 15q⁸ − q¹⁵) / (2(1 + 15q⁸))`, `q = 1−2ε`.
pub fn h_eps_out(eps: f64) -> f64 {
    let q = 1.0 - 2.0 * eps;
    (1.0 - 15.0 * q.powi(7) + 15.0 * q.powi(8) - q.powi(15)) / (2.0 * (1.0 + 15.0 * q.powi(8)))
}

/// `Σ coef · ε^a (1−ε)^b`.
#[derive(Clone, Debug, PartialEq)]
struct Polynomial {
    terms: Vec<(f64, i32, i32)>,
}

fn log_one_minus_exp(ln_x: f64) -> f64 {
    if ln_x < -std::f64::consts::LN_2 {
        (-ln_x.exp()).ln_1p()
    } else {
        (-ln_x.exp_m1()).ln()
    }
}

impl Polynomial {
    fn ln_eval(&self, ln_e: f64, ln_q: f64) -> f64 {
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|&(c, a, b)| {
                let ea = if a == 0 { 0.0 } else { a as f64 * ln_e };
                let qb = if b == 0 { 0.0 } else { b as f64 * ln_q };
                c.ln() + ea + qb
            })
            .filter(|v| !v.is_nan())
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + logs.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
    }

    fn eval(&self, eps: f64) -> f64 {
        self.terms.iter().map(|&(c, a, b)| c * eps.powi(a) * (1.0 - eps).powi(b)).sum()
    }
}

/// The round map of a family as enumerator polynomials:
/// `p_s = S(ε)`, `ε_out = E(ε)/S(ε)`.
#[derive(Clone, Debug)]
pub struct RoundMap {
    family: Family,
    inputs: usize,
    error: Polynomial,
    success: Polynomial,
}

fn enumerator_terms(coeffs: &[u64], scale: f64) -> Vec<(f64, i32, i32)> {
    let n = coeffs.len() as i32 - 1;
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(w, &a)| (a as f64 * scale, n - w as i32, w as i32))
        .collect()
}

impl RoundMap {
    pub fn for_family(family: Family) -> &'static RoundMap {
        static T: OnceLock<RoundMap> = OnceLock::new();
        static H: OnceLock<RoundMap> = OnceLock::new();
        match family {
            Family::T => T.get_or_init(|| {
                let sixth = 1.0 / 6.0;
                let error = Polynomial { terms: vec![(sixth, 5, 0), (5.0 * sixth, 2, 3)] };
                let success = Polynomial {
                    terms: vec![(sixth, 5, 0), (5.0 * sixth, 2, 3), (5.0 * sixth, 3, 2), (sixth, 0, 5)],
                };
                RoundMap { family, inputs: 5, error, success }
            }),
            Family::H => H.get_or_init(|| {
                // p_s = W_{L1^perp}(ε, 1−ε), ε_out p_s = W_{L2}(ε, 1−ε)
                let (l1, l2) = reed_muller_spaces();
                let dual = l1.dual().weight_enumerator().expect("dim 11");
                let l2e = l2.weight_enumerator().expect("dim 10");
                RoundMap {
                    family,
                    inputs: 15,
                    error: Polynomial { terms: enumerator_terms(l2e.coefficients(), 1.0) },
                    success: Polynomial { terms: enumerator_terms(dual.coefficients(), 1.0) },
                }
            }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Noisy copies consumed per attempt.
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn success(&self, eps: f64) -> f64 {
        self.success.eval(eps)
    }

    pub fn eps_out(&self, eps: f64) -> f64 {
        self.error.eval(eps) / self.success.eval(eps)
    }

    /// `(ln ε_out, ln p_s)` from `ln ε`.
    pub fn ln_step(&self, ln_eps: f64) -> (f64, f64) {
        let ln_q = log_one_minus_exp(ln_eps);
        let ls = self.success.ln_eval(ln_eps, ln_q);
        (self.error.ln_eval(ln_eps, ln_q) - ls, ls)
    }
}

/// Where a [`RoundResult`] came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Analytic,
    MonteCarlo(McStats),
}

/// Counts and uncertainties of a Monte Carlo round.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McStats {
    pub trials: u64,
    pub successes: u64,
    pub errors: u64,
    pub seed: u64,
    /// Binomial standard error of `p_s`.
    pub p_s_stderr: f64,
    /// Standard error of the conditional ratio `errors/successes`.
    pub eps_out_stderr: Option<f64>,
    /// 95% Wilson interval for `ε_out`.
    pub eps_out_wilson95: Option<(f64, f64)>,
    pub estimator: &'static str,
}

/// One distillation round evaluated analytically or by sampling.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundResult {
    pub family: Family,
    pub epsilon_in: f64,
    /// `None` when no Monte Carlo trial succeeded.
    pub epsilon_out: Option<f64>,
    pub p_s: f64,
    pub source: Source,
}

pub fn t_round_analytic(eps: f64) -> Result<RoundResult> {
    check_epsilon(eps)?;
    Ok(RoundResult {
        family: Family::T,
        epsilon_in: eps,
        epsilon_out: Some(t_eps_out(eps)),
        p_s: t_success(eps),
        source: Source::Analytic,
    })
}

pub fn h_round_analytic(eps: f64) -> Result<RoundResult> {
    check_epsilon(eps)?;
    Ok(RoundResult {
        family: Family::H,
        epsilon_in: eps,
        epsilon_out: Some(h_eps_out(eps)),
        p_s: h_success(eps),
        source: Source::Analytic,
    })
}

pub fn round_analytic(family: Family, eps: f64) -> Result<RoundResult> {
    match family {
        Family::T => t_round_analytic(eps),
        Family::H => h_round_analytic(eps),
    }
}

/// `(p_s, ε_out)` from the weight-enumerator sums instead of the closed forms.
pub fn round_enumerator(family: Family, eps: f64) -> Result<(f64, f64)> {
    check_epsilon(eps)?;
    let map = RoundMap::for_family(family);
    Ok((map.success(eps), map.eps_out(eps)))
}

/// Error probability of a one-qubit state after canonical orientation and
/// dephasing toward the family's magic axis.
pub fn input_epsilon(state: &Qubit1State, family: Family) -> f64 {
    let (canon, _) = magic::canonicalize(state, family);
    let dephased = match family {
        Family::T => magic::dephase_t(&canon),
        Family::H => magic::dephase_h(&canon),
    };
    magic::epsilon_of(&dephased, family)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Trial {
    Rejected,
    Accepted { error: bool },
}

fn bernoulli_mask<R: Rng + ?Sized>(n: usize, eps: f64, rng: &mut R) -> u32 {
    (0..n).filter(|_| rng.random::<f64>() < eps).fold(0, |m, j| m | 1 << j)
}

fn t_trial(code: &FiveQubitCode, eps: f64, seed: u64, index: u64) -> Result<Trial> {
    let mut rng = trial_rng(seed, index);
    let x = bernoulli_mask(5, eps, &mut rng);
    let mut state = FiveQubitCode::t_x_state(x)?;
    for s in code.stabilizers() {
        let (outcome, _) = state.measure_pauli(s, &mut rng)?;
        if outcome != 1 {
            return Ok(Trial::Rejected);
        }
    }
    // After the σyH swap the good output is |T_1^L⟩, so the error weight is
    // the |T_0^L⟩ component.
    let bad = code.t0_logical().fidelity(&state)?;
    Ok(Trial::Accepted { error: rng.random::<f64>() < bad })
}

fn h_trial(code: &FifteenQubitCode, eps: f64, seed: u64, index: u64) -> Result<Trial> {
    let mut rng = trial_rng(seed, index);
    let u = bernoulli_mask(15, eps, &mut rng);
    let mut state = FifteenQubitCode::a_u_state(u)?;
    let (outcomes, _) = state.measure_diagonal(code.z_stabilizers(), &mut rng)?;
    let mu = outcomes.iter().enumerate().filter(|(_, &o)| o == -1).fold(0u32, |m, (i, _)| m | 1 << i);
    crate::codes::apply_a_string(&mut state, code.correction(mu))?;
    for s in code.x_stabilizers() {
        let (outcome, _) = state.measure_pauli(s, &mut rng)?;
        if outcome != 1 {
            return Ok(Trial::Rejected);
        }
    }
    let bad = code.a1_logical().fidelity(&state)?;
    Ok(Trial::Accepted { error: rng.random::<f64>() < bad })
}

/// Runs `trials` independent trials, trial `i` seeded from `(seed, i)`.
/// Trials may execute in parallel; the tally does not depend on scheduling.
fn run_trials<F>(trials: u64, f: F) -> Result<(u64, u64)>
where
    F: Fn(u64) -> Result<Trial> + Sync,
{
    let outcomes: Vec<Trial> = (0..trials).into_par_iter().map(&f).collect::<Result<_>>()?;
    Ok(tally(&outcomes))
}

fn tally(outcomes: &[Trial]) -> (u64, u64) {
    let mut successes = 0;
    let mut errors = 0;
    for t in outcomes {
        if let Trial::Accepted { error } = t {
            successes += 1;
            errors += *error as u64;
        }
    }
    (successes, errors)
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    let z = 1.959963984540054;
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0.0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

fn mc_result(family: Family, eps: f64, trials: u64, seed: u64, successes: u64, errors: u64) -> RoundResult {
    let p_s = successes as f64 / trials as f64;
    let p_s_stderr = (p_s * (1.0 - p_s) / trials as f64).sqrt();
    let (eps_out, se, wilson) = if successes == 0 {
        (None, None, None)
    } else {
        let e = errors as f64 / successes as f64;
        (Some(e), Some((e * (1.0 - e) / successes as f64).sqrt()), Some(wilson_interval(errors, successes)))
    };
    RoundResult {
        family,
        epsilon_in: eps,
        epsilon_out: eps_out,
        p_s,
        source: Source::MonteCarlo(McStats {
            trials,
            successes,
            errors,
            seed,
            p_s_stderr,
            eps_out_stderr: se,
            eps_out_wilson95: wilson,
            estimator: "ratio errors/successes; binomial stderr; Wilson 95% interval",
        }),
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    Ok(())
}

/// Five-qubit round on the statevector: sample `x ~ Bernoulli(ε)^5`, prepare
/// `|T_x⟩`, measure `S₁…S₄`, keep the trivial syndrome, read out.
pub fn t_round_montecarlo(eps: f64, trials: u64, seed: u64) -> Result<RoundResult> {
    check_epsilon(eps)?;
    check_trials(trials)?;
    let code = FiveQubitCode::new()?;
    let (s, e) = run_trials(trials, |i| t_trial(&code, eps, seed, i))?;
    Ok(mc_result(Family::T, eps, trials, seed, s, e))
}

/// Fifteen-qubit round on the statevector: sample `u`, prepare `|A_u⟩`,
/// measure the σz syndrome `μ`, apply `A(w(μ))`, measure the σx syndrome,
/// keep `η = 0`, read out against `|A_1^L⟩`.
pub fn h_round_montecarlo(eps: f64, trials: u64, seed: u64) -> Result<RoundResult> {
    check_epsilon(eps)?;
    check_trials(trials)?;
    let code = FifteenQubitCode::new()?;
    let (s, e) = run_trials(trials, |i| h_trial(&code, eps, seed, i))?;
    Ok(mc_result(Family::H, eps, trials, seed, s, e))
}

pub fn round_montecarlo(family: Family, eps: f64, trials: u64, seed: u64) -> Result<RoundResult> {
    match family {
        Family::T => t_round_montecarlo(eps, trials, seed),
        Family::H => h_round_montecarlo(eps, trials, seed),
    }
}

/// Same tally as [`round_montecarlo`] but strictly sequential.
pub fn round_montecarlo_sequential(family: Family, eps: f64, trials: u64, seed: u64) -> Result<RoundResult> {
    check_epsilon(eps)?;
    check_trials(trials)?;
    let outcomes: Vec<Trial> = match family {
        Family::T => {
            let code = FiveQubitCode::new()?;
            (0..trials).map(|i| t_trial(&code, eps, seed, i)).collect::<Result<_>>()?
        }
        Family::H => {
            let code = FifteenQubitCode::new()?;
            (0..trials).map(|i| h_trial(&code, eps, seed, i)).collect::<Result<_>>()?
        }
    };
    let (s, e) = tally(&outcomes);
    Ok(mc_result(family, eps, trials, seed, s, e))
}

/// Bisection tolerance for [`threshold`].
pub const THRESHOLD_TOL: f64 = 1e-12;

/// Nontrivial fixed point of the round map, found by bisection of
/// `ε_out(ε) − ε` on `[0.01, 0.49]`.
pub fn threshold(family: Family) -> f64 {
    let f = |e: f64| match family {
        Family::T => t_eps_out(e) - e,
        Family::H => h_eps_out(e) - e,
    };
    let (mut lo, mut hi) = (0.01, 0.49);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `½(1 − √(3/7))`.
pub fn t_threshold_exact() -> f64 {
    0.5 * (1.0 - (3.0f64 / 7.0).sqrt())
}

/// Leading small-`ε` behaviour `ε_out ≈ a ε^d`: `(5, 2)` for T, `(35, 3)` for H.
pub fn leading_term(family: Family) -> (f64, i32) {
    match family {
        Family::T => (5.0, 2),
        Family::H => (35.0, 3),
    }
}

/// `ξ` in `ε_out(n) ∼ c^{-1} (c ε)^{n^ξ}`: `1/log₂30` for T, `1/log₃15` for H.
pub fn asymptotic_xi(family: Family) -> f64 {
    let (_, d) = leading_term(family);
    let m = RoundMap::for_family(family).inputs() as f64;
    let p0 = RoundMap::for_family(family).success(0.0);
    (d as f64).ln() / (m / p0).ln()
}

/// `γ = 1/ξ`, the exponent in `n ∼ (log 1/ε_out)^γ`.
pub fn asymptotic_gamma(family: Family) -> f64 {
    1.0 / asymptotic_xi(family)
}

/// Outputs per raw input at small `ε`: `p_s(0)/m`.
pub fn asymptotic_yield(family: Family) -> f64 {
    let map = RoundMap::for_family(family);
    map.success(0.0) / map.inputs() as f64
}

/// One level of a cascade.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CascadeLevel {
    pub level: usize,
    /// May underflow to 0; see `log10_epsilon`.
    pub epsilon: f64,
    pub log10_epsilon: f64,
    /// Success probability of the round that produced this level (1 at level 0).
    pub p_s: f64,
    /// Expected raw inputs per output at this level.
    pub raw_per_output: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CascadeResult {
    pub family: Family,
    pub epsilon_in: f64,
    pub levels: usize,
    pub threshold: f64,
    /// `true` when `ε_in` is below threshold and the sequence decreases.
    pub converges: bool,
    pub sequence: Vec<CascadeLevel>,
    pub xi: f64,
    pub gamma: f64,
    pub asymptotic_yield: f64,
    pub note: String,
}

/// Iterates the round map `levels` times. Raw-input counts use the expected
/// `m / p_s` attempts per success and ignore fluctuations.
pub fn cascade(family: Family, eps_in: f64, levels: usize) -> Result<CascadeResult> {
    check_epsilon(eps_in)?;
    let map = RoundMap::for_family(family);
    let th = threshold(family);
    let mut ln_e = eps_in.ln();
    let mut raw = 1.0f64;
    let mut seq = vec![CascadeLevel { level: 0, epsilon: eps_in, log10_epsilon: eps_in.log10(), p_s: 1.0, raw_per_output: 1.0 }];
    for level in 1..=levels {
        let (next, ln_ps) = map.ln_step(ln_e);
        let p_s = ln_ps.exp();
        raw *= map.inputs() as f64 / p_s;
        ln_e = next;
        seq.push(CascadeLevel {
            level,
            epsilon: ln_e.exp(),
            log10_epsilon: ln_e / std::f64::consts::LN_10,
            p_s,
            raw_per_output: raw,
        });
    }
    let converges = eps_in < th && eps_in > 0.0;
    let note = if eps_in == 0.0 {
        "input already pure; zero is a fixed point".to_string()
    } else if converges {
        "below threshold: error decreases at every level".to_string()
    } else if eps_in == 0.5 {
        "maximally mixed input is a fixed point".to_string()
    } else {
        "at or above threshold: error increases toward 1/2".to_string()
    };
    Ok(CascadeResult {
        family,
        epsilon_in: eps_in,
        levels,
        threshold: th,
        converges,
        sequence: seq,
        xi: asymptotic_xi(family),
        gamma: asymptotic_gamma(family),
        asymptotic_yield: asymptotic_yield(family),
        note,
    })
}

/// Levels and raw inputs needed to push `ε_in` below `ε_target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AncillaPlan {
    pub levels: usize,
    pub raw_per_output: f64,
    pub epsilon_reached: f64,
    pub log10_epsilon_reached: f64,
}

/// `None` when `ε_in` is at or above threshold (no finite plan).
pub fn ancilla_count(family: Family, eps_in: f64, eps_target: f64) -> Result<Option<AncillaPlan>> {
    check_epsilon(eps_in)?;
    if !(eps_target > 0.0) {
        return Err(Error::Invalid(format!("target error {eps_target} must be positive")));
    }
    if eps_in <= eps_target {
        return Ok(Some(AncillaPlan {
            levels: 0,
            raw_per_output: 1.0,
            epsilon_reached: eps_in,
            log10_epsilon_reached: eps_in.log10(),
        }));
    }
    if eps_in >= threshold(family) {
        return Ok(None);
    }
    let map = RoundMap::for_family(family);
    let target = eps_target.ln();
    let mut ln_e = eps_in.ln();
    let mut raw = 1.0;
    for levels in 1..=64 {
        let (next, ln_ps) = map.ln_step(ln_e);
        raw *= map.inputs() as f64 / ln_ps.exp();
        ln_e = next;
        if ln_e <= target {
            return Ok(Some(AncillaPlan {
                levels,
                raw_per_output: raw,
                epsilon_reached: ln_e.exp(),
                log10_epsilon_reached: ln_e / std::f64::consts::LN_10,
            }));
        }
    }
    Err(Error::Invalid("cascade did not reach the target in 64 levels".into()))
}

/// Log-log slope of `ln(−ln(c·ε_k))` against `ln n_k` between consecutive
/// cascade levels, with `c = a^{1/(d−1)}` from [`leading_term`]. Tends to
/// [`asymptotic_xi`] as the levels grow.
pub fn cascade_slopes(result: &CascadeResult) -> Vec<f64> {
    let (a, d) = leading_term(result.family);
    let ln_c = a.ln() / (d - 1) as f64;
    let pts: Vec<(f64, f64)> = result
        .sequence
        .iter()
        .skip(1)
        .map(|l| (l.raw_per_output.ln(), (-(l.log10_epsilon * std::f64::consts::LN_10 + ln_c)).ln()))
        .collect();
    pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect()
}
