//! Reading the clock: Born-rule outcome distributions of the time POVM,
//! seeded sampling and circular-mean time estimation.
//!
//! Sampling uses ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`) with
//! inverse-CDF lookup, one uniform draw per shot. The seed is stored in every
//! record, so a record can always be regenerated bit for bit.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::clockstates::{ClockPOVM, StateVector};
use crate::error::{invalid, ClockError, Result};

/// Name of the generator used by [`sample`].
pub const PRNG_NAME: &str = "ChaCha20";

/// How far `Σ P(m)` may drift from 1 before sampling refuses the input.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Resultant lengths below this leave the circular mean undefined.
pub const MIN_RESULTANT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub probs: Vec<f64>,
    pub tau_grid: Vec<f64>,
    pub period: f64,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub prng: &'static str,
    pub seed: u64,
    pub shots: u64,
    pub counts: Vec<u64>,
    pub tau_grid: Vec<f64>,
    pub period: f64,
    /// Circular mean of the recorded outcomes; `None` for balanced data.
    pub estimate: Option<f64>,
    /// Standard error of the circular mean, `(T/2π) sqrt(−2 ln R̄ / shots)`.
    pub estimate_error: Option<f64>,
}

/// `P(m) = (p+1)/(z+1) |⟨τ_m|ψ⟩|²`.
pub fn outcome_probabilities(state: &StateVector, povm: &ClockPOVM) -> Result<OutcomeDistribution> {
    let spec = state.spectrum();
    if !(std::sync::Arc::ptr_eq(spec, povm.spectrum()) || **spec == **povm.spectrum()) {
        return Err(ClockError::IncompatibleState(
            "state and POVM belong to different spectra".into(),
        ));
    }
    let w = povm.weight();
    let probs = (0..povm.len())
        .map(|m| {
            let amp: Complex64 = povm
                .element_state(m)
                .as_state()
                .inner(state)
                .expect("same spectrum");
            w * amp.norm_sqr()
        })
        .collect();
    Ok(OutcomeDistribution {
        probs,
        tau_grid: povm.tau_grid(),
        period: spec.period(),
    })
}

/// Draws `shots` outcomes from `dist`.
pub fn sample(dist: &OutcomeDistribution, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    if shots < 1 {
        return Err(invalid("shots must be at least 1"));
    }
    if dist.probs.is_empty() || dist.probs.len() != dist.tau_grid.len() {
        return Err(ClockError::InvalidDistribution(
            "probabilities and grid must be non-empty and aligned".into(),
        ));
    }
    if let Some(bad) = dist
        .probs
        .iter()
        .find(|p| !(p.is_finite() && **p >= -1e-12))
    {
        return Err(ClockError::InvalidDistribution(format!(
            "probability {bad} is not a valid weight"
        )));
    }
    let total = dist.total();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(ClockError::InvalidDistribution(format!(
            "probabilities sum to {total}, outside 1 ± {NORMALIZATION_TOLERANCE}"
        )));
    }
    let mut cdf = Vec::with_capacity(dist.probs.len());
    let mut acc = 0.0;
    for p in &dist.probs {
        acc += p.max(0.0) / total;
        cdf.push(acc);
    }
    // Pin the last bin so every draw in [0, 1) lands somewhere, without
    // giving weight to trailing zero-probability outcomes.
    if let Some(last) = dist.probs.iter().rposition(|p| *p > 0.0) {
        for c in &mut cdf[last..] {
            *c = 1.0;
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.random();
        let idx = cdf.partition_point(|&c| c <= u).min(counts.len() - 1);
        counts[idx] += 1;
    }
    let mut record = MeasurementRecord {
        prng: PRNG_NAME,
        seed,
        shots,
        counts,
        tau_grid: dist.tau_grid.clone(),
        period: dist.period,
        estimate: None,
        estimate_error: None,
    };
    if let Ok((est, err)) = circular_mean(&record, dist.period) {
        record.estimate = Some(est);
        record.estimate_error = Some(err);
    }
    Ok(record)
}

fn circular_mean(record: &MeasurementRecord, period: f64) -> Result<(f64, f64)> {
    if !(period.is_finite() && period > 0.0) {
        return Err(invalid("period must be positive"));
    }
    let shots: u64 = record.counts.iter().sum();
    if shots == 0 {
        return Err(ClockError::NoEstimate("record holds no counts".into()));
    }
    let resultant: Complex64 = record
        .counts
        .iter()
        .zip(&record.tau_grid)
        .filter(|(c, _)| **c > 0)
        .map(|(c, tau)| Complex64::from_polar(*c as f64, TAU * (tau / period)))
        .sum();
    let mean_length = resultant.norm() / shots as f64;
    if mean_length < MIN_RESULTANT {
        return Err(ClockError::NoEstimate(format!(
            "mean resultant length {mean_length:e} is too small to define a direction"
        )));
    }
    let mut est = resultant.arg() / TAU * period;
    if est < 0.0 {
        est += period;
    }
    if est >= period {
        est -= period;
    }
    let spread = (-2.0 * mean_length.min(1.0).ln()).sqrt();
    let err = period / TAU * spread / (shots as f64).sqrt();
    Ok((est, err))
}

/// Circular mean of the recorded outcomes on a dial of period `T`, in `[0, T)`.
pub fn estimate_time(record: &MeasurementRecord, period: f64) -> Result<f64> {
    circular_mean(record, period).map(|(est, _)| est)
}

/// Distance between two dial readings, accounting for wraparound.
pub fn circular_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clockstates::time_state;
    use crate::spectrum::{build_equally_spaced, build_rational, ClockSpectrum};
    use crate::units::ConstantsSet;
    use std::sync::Arc;

    fn es(p: usize, t: f64) -> Arc<ClockSpectrum> {
        Arc::new(build_equally_spaced(p, t, &ConstantsSet::natural()).unwrap())
    }

    fn record(counts: Vec<u64>, tau_grid: Vec<f64>, period: f64) -> MeasurementRecord {
        MeasurementRecord {
            prng: PRNG_NAME,
            seed: 0,
            shots: counts.iter().sum(),
            counts,
            tau_grid,
            period,
            estimate: None,
            estimate_error: None,
        }
    }

    #[test]
    fn grid_state_gives_delta_distribution() {
        let s = es(5, 2.0);
        let povm = ClockPOVM::new(Arc::clone(&s), 5, 0.1).unwrap();
        for k in 0..6 {
            let d = outcome_probabilities(povm.element_state(k).as_state(), &povm).unwrap();
            for (m, p) in d.probs.iter().enumerate() {
                let want = if m as u64 == k { 1.0 } else { 0.0 };
                assert!((p - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ground_state_is_uniform() {
        let ratios = ["5/3".parse().unwrap(), "7/2".parse().unwrap()];
        let s = Arc::new(build_rational(&ratios, 1.0, &ConstantsSet::natural()).unwrap());
        let povm = ClockPOVM::new(Arc::clone(&s), 30, 0.0).unwrap();
        let ground = StateVector::energy_eigenstate(Arc::clone(&s), 0).unwrap();
        let d = outcome_probabilities(&ground, &povm).unwrap();
        for p in &d.probs {
            assert!((p - 1.0 / 31.0).abs() < 1e-14);
        }
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_level_closed_form() {
        // |⟨τ_m|t⟩|² = cos²(π (t − τ_m)/T) for the two-level clock.
        let t_period = 1.7;
        let s = es(1, t_period);
        let povm = ClockPOVM::new(Arc::clone(&s), 1, 0.2).unwrap();
        for t in [0.2 + t_period / 4.0, 0.93, 1.5] {
            let d = outcome_probabilities(time_state(&s, t).as_state(), &povm).unwrap();
            for m in 0..2u64 {
                let want = (std::f64::consts::PI * (t - povm.tau(m)) / t_period)
                    .cos()
                    .powi(2);
                assert!((d.probs[m as usize] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_exact_for_delta() {
        let dist = OutcomeDistribution {
            probs: vec![0.0, 0.0, 1.0, 0.0],
            tau_grid: vec![0.0, 1.0, 2.0, 3.0],
            period: 4.0,
        };
        let r = sample(&dist, 1000, 99).unwrap();
        assert_eq!(r.counts, vec![0, 0, 1000, 0]);
        assert_eq!(estimate_time(&r, 4.0).unwrap(), 2.0);
        let u = OutcomeDistribution {
            probs: vec![0.25; 4],
            ..dist
        };
        assert_eq!(sample(&u, 500, 7).unwrap(), sample(&u, 500, 7).unwrap());
        assert_ne!(
            sample(&u, 500, 7).unwrap().counts,
            sample(&u, 500, 8).unwrap().counts
        );
    }

    #[test]
    fn sampling_rejects_bad_input() {
        let dist = OutcomeDistribution {
            probs: vec![0.5, 0.4],
            tau_grid: vec![0.0, 1.0],
            period: 2.0,
        };
        assert_eq!(
            sample(&dist, 10, 1).unwrap_err().name(),
            "invalid-distribution"
        );
        let ok = OutcomeDistribution {
            probs: vec![0.5, 0.5 + 5e-7],
            ..dist
        };
        assert!(sample(&ok, 10, 1).is_ok());
        assert!(sample(&ok, 0, 1).is_err());
    }

    #[test]
    fn circular_mean_wraps() {
        let period = 10.0;
        let delta = 0.5;
        let r = record(vec![50, 50], vec![period - delta, delta], period);
        let est = estimate_time(&r, period).unwrap();
        assert!(circular_distance(est, 0.0, period) < 1e-12, "{est}");
        let r = record(vec![10, 0, 0], vec![3.0, 4.0, 5.0], period);
        assert!((estimate_time(&r, period).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn balanced_data_has_no_estimate() {
        let r = record(vec![5, 5, 5, 5], vec![0.0, 1.0, 2.0, 3.0], 4.0);
        assert_eq!(estimate_time(&r, 4.0).unwrap_err().name(), "no-estimate");
        let empty = record(vec![0, 0], vec![0.0, 1.0], 2.0);
        assert!(estimate_time(&empty, 2.0).is_err());
    }
}
