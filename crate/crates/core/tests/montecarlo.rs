//! Seed-swept Monte Carlo batches against the closed forms.

use magicsim::distill::{round_montecarlo, round_analytic};
use magicsim::magic::Family;

/// Fraction of `batches` independent batches whose `p_s` and `ε_out`
/// estimates both lie within 3σ of the closed forms, σ being the binomial
/// standard error at the analytic value.
fn coverage(family: Family, eps: f64, trials: u64, batches: u64) -> f64 {
    let exact = round_analytic(family, eps).unwrap();
    let eo = exact.epsilon_out.unwrap();
    let mut inside = 0;
    for seed in 0..batches {
        let r = round_montecarlo(family, eps, trials, 1000 + seed).unwrap();
        let magicsim::distill::Source::MonteCarlo(s) = &r.source else { unreachable!() };
        let sig_ps = (exact.p_s * (1.0 - exact.p_s) / trials as f64).sqrt();
        let sig_eo = (eo * (1.0 - eo) / s.successes as f64).sqrt();
        let ok_ps = (r.p_s - exact.p_s).abs() < 3.0 * sig_ps;
        let ok_eo = r.epsilon_out.is_some_and(|e| (e - eo).abs() < 3.0 * sig_eo);
        inside += (ok_ps && ok_eo) as u32;
    }
    inside as f64 / batches as f64
}

#[test]
fn t_batches_cover_closed_form() {
    let c = coverage(Family::T, 0.1, 10_000, 100);
    assert!(c >= 0.99, "coverage {c}");
}

#[test]
fn h_batches_cover_closed_form() {
    // reduced batch size; the full-size sweep is the ignored test below
    let c = coverage(Family::H, 0.1, 500, 100);
    assert!(c >= 0.99, "coverage {c}");
}

#[test]
#[ignore = "about 20 minutes on one core"]
fn h_batches_cover_closed_form_full_size() {
    let c = coverage(Family::H, 0.1, 10_000, 100);
    assert!(c >= 0.99, "coverage {c}");
}

#[test]
fn zero_noise_rounds() {
    let t = round_montecarlo(Family::T, 0.0, 3000, 5).unwrap();
    assert_eq!(t.epsilon_out, Some(0.0));
    let sigma = (1.0f64 / 6.0 * 5.0 / 6.0 / 3000.0).sqrt();
    assert!((t.p_s - 1.0 / 6.0).abs() < 3.0 * sigma);
    let h = round_montecarlo(Family::H, 0.0, 20, 5).unwrap();
    assert_eq!((h.p_s, h.epsilon_out), (1.0, Some(0.0)));
}
