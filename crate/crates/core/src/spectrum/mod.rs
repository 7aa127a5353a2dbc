//! Clock Hamiltonian spectra.
//!
//! A spectrum is the diagonal data of a non-degenerate bounded Hamiltonian
//! with `E_0 = 0`: the levels `E_n`, the integer phase frequencies
//! `r_n = E_n T / (2πħ)` and the period `T`. Three constructions are
//! available: equally spaced levels, levels with exactly rational ratios
//! `E_n / E_1`, and arbitrary real levels paired with a rational
//! approximation of their ratios.

mod file;
mod ratio;

use std::f64::consts::TAU;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, ClockError, Result};
use crate::units::{ConstantsSet, UnitMode};

pub use file::{parse_spectrum, read_spectrum, render_spectrum, write_spectrum};
pub use ratio::{rationalize, RationalRatio};

/// Default capacity for the `r_n` integers: values must stay below `2^256`.
pub const DEFAULT_CAPACITY_BITS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectrumKind {
    EquallySpaced,
    Rational,
    RationalizedApprox { epsilon: f64 },
}

impl SpectrumKind {
    /// Whether `E_n T / (2πħ) = r_n` holds exactly (up to rounding).
    pub fn is_exact(&self) -> bool {
        !matches!(self, SpectrumKind::RationalizedApprox { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClockSpectrum {
    kind: SpectrumKind,
    levels: Vec<f64>,
    r: Vec<BigUint>,
    /// `E_n / E_1` for every level, `0/1` and `1/1` included.
    ratios: Vec<RationalRatio>,
    /// `E_n T/(2πħ) − r_n`; zero for exact kinds.
    excess: Vec<f64>,
    period: f64,
    hbar: f64,
    mode: UnitMode,
}

pub(crate) fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.len() < 2 {
        return Err(invalid("a clock needs at least two levels (p >= 1)"));
    }
    if levels[0] != 0.0 {
        return Err(invalid(format!("E_0 must be 0, got {}", levels[0])));
    }
    for (n, w) in levels.windows(2).enumerate() {
        if !w[1].is_finite() {
            return Err(invalid(format!("level E_{} is not finite", n + 1)));
        }
        if w[1] <= w[0] {
            return Err(invalid(format!(
                "levels must be strictly increasing (non-degenerate): E_{} = {} <= E_{} = {}",
                n + 1,
                w[1],
                n,
                w[0]
            )));
        }
    }
    Ok(())
}

fn check_period(period: f64) -> Result<()> {
    if !(period.is_finite() && period > 0.0) {
        return Err(invalid(format!(
            "period T must be finite and positive, got {period}"
        )));
    }
    Ok(())
}

fn to_bigint(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

/// Builds the spectrum `E_n = 2πħ n / T`, `n = 0..=p`.
pub fn build_equally_spaced(p: usize, period: f64, consts: &ConstantsSet) -> Result<ClockSpectrum> {
    if p < 1 {
        return Err(invalid("p must be at least 1"));
    }
    check_period(period)?;
    let hbar = consts.hbar();
    let quantum = TAU * hbar / period;
    Ok(ClockSpectrum {
        kind: SpectrumKind::EquallySpaced,
        levels: (0..=p).map(|n| quantum * n as f64).collect(),
        r: (0..=p).map(BigUint::from).collect(),
        ratios: (0..=p as u64).map(RationalRatio::integer).collect(),
        excess: vec![0.0; p + 1],
        period,
        hbar,
        mode: consts.mode(),
    })
}

/// Builds a spectrum from exact ratios `E_n/E_1 = C_n/B_n`, `n = 2..=p`.
///
/// `r_1` is the least common multiple of the `B_n`, `r_n = r_1 C_n / B_n`,
/// and the period becomes `T = 2πħ r_1 / E_1`.
pub fn build_rational(
    ratios: &[RationalRatio],
    e1: f64,
    consts: &ConstantsSet,
) -> Result<ClockSpectrum> {
    build_rational_with_capacity(ratios, e1, consts, DEFAULT_CAPACITY_BITS)
}

pub fn build_rational_with_capacity(
    ratios: &[RationalRatio],
    e1: f64,
    consts: &ConstantsSet,
    capacity_bits: u64,
) -> Result<ClockSpectrum> {
    if !(e1.is_finite() && e1 > 0.0) {
        return Err(invalid(format!(
            "E_1 must be finite and positive, got {e1}"
        )));
    }
    let r = integers_from_ratios(ratios, capacity_bits)?;
    let period = TAU * consts.hbar() * r[1].to_f64().unwrap_or(f64::INFINITY) / e1;
    assemble_rational(ratios, r, period, consts)
}

/// Same as [`build_rational`] but with the period given instead of `E_1`.
pub(crate) fn build_rational_with_period(
    ratios: &[RationalRatio],
    period: f64,
    consts: &ConstantsSet,
    capacity_bits: u64,
) -> Result<ClockSpectrum> {
    check_period(period)?;
    let r = integers_from_ratios(ratios, capacity_bits)?;
    assemble_rational(ratios, r, period, consts)
}

fn integers_from_ratios(ratios: &[RationalRatio], capacity_bits: u64) -> Result<Vec<BigUint>> {
    let one = RationalRatio::integer(1);
    let mut prev = &one;
    for (i, q) in ratios.iter().enumerate() {
        if q <= prev {
            return Err(invalid(format!(
                "ratios must be strictly increasing and greater than 1: E_{}/E_1 = {q} after {prev}",
                i + 2
            )));
        }
        prev = q;
    }
    let r1 = ratios
        .iter()
        .fold(BigUint::one(), |acc, q| acc.lcm(q.denom()));
    let mut r = Vec::with_capacity(ratios.len() + 2);
    r.push(BigUint::zero());
    r.push(r1.clone());
    for q in ratios {
        r.push(&r1 / q.denom() * q.numer());
    }
    let top = r.last().expect("non-empty");
    if top.bits() > capacity_bits {
        return Err(ClockError::Capacity(format!(
            "r_p has {} bits, capacity is {capacity_bits} bits",
            top.bits()
        )));
    }
    Ok(r)
}

fn assemble_rational(
    ratios: &[RationalRatio],
    r: Vec<BigUint>,
    period: f64,
    consts: &ConstantsSet,
) -> Result<ClockSpectrum> {
    let hbar = consts.hbar();
    let r1 = r[1].to_f64().unwrap_or(f64::INFINITY);
    if !r1.is_finite() {
        return Err(ClockError::Capacity("r_1 does not fit a double".into()));
    }
    let e1 = TAU * hbar * r1 / period;
    let mut all = vec![RationalRatio::integer(0), RationalRatio::integer(1)];
    all.extend(ratios.iter().cloned());
    let levels: Vec<f64> = all.iter().map(|q| e1 * q.to_f64()).collect();
    check_levels(&levels)?;
    let p1 = levels.len();
    Ok(ClockSpectrum {
        kind: SpectrumKind::Rational,
        levels,
        r,
        ratios: all,
        excess: vec![0.0; p1],
        period,
        hbar,
        mode: consts.mode(),
    })
}

/// Pairs arbitrary real levels with the continued-fraction rationalization of
/// their ratios. The levels are kept as given, so time states built on the
/// result carry the original (possibly irrational) phases while `r_n` and `T`
/// come from the approximation.
pub fn build_rationalized(
    levels: &[f64],
    epsilon: f64,
    consts: &ConstantsSet,
) -> Result<ClockSpectrum> {
    let (ratios, _) = rationalize(levels, epsilon)?;
    let r = integers_from_ratios(&ratios, DEFAULT_CAPACITY_BITS).map_err(|e| match e {
        ClockError::InvalidArgument(m) => invalid(format!(
            "epsilon {epsilon} does not separate the levels: {m}"
        )),
        other => other,
    })?;
    let hbar = consts.hbar();
    let r1 = r[1].to_f64().unwrap_or(f64::INFINITY);
    let period = TAU * hbar * r1 / levels[1];
    check_period(period)?;

    let mut all = vec![RationalRatio::integer(0), RationalRatio::integer(1)];
    all.extend(ratios);
    // E_n T/(2πħ) = r_1 E_n/E_1, so the excess is r_1 (E_n/E_1 − C_n/B_n), evaluated exactly.
    let r1_big = BigRational::from_integer(to_bigint(&r[1]));
    let mut excess = vec![0.0, 0.0];
    for (n, q) in all.iter().enumerate().skip(2) {
        let x = ratio::exact_rational(levels[n] / levels[1])
            .ok_or_else(|| invalid("non-finite level ratio"))?;
        let d = &r1_big * (x - q.to_big_rational());
        excess.push(d.to_f64().unwrap_or(f64::NAN));
    }
    Ok(ClockSpectrum {
        kind: SpectrumKind::RationalizedApprox { epsilon },
        levels: levels.to_vec(),
        r,
        ratios: all,
        excess,
        period,
        hbar,
        mode: consts.mode(),
    })
}

/// The largest phase integer `r_p`.
pub fn max_integer(spec: &ClockSpectrum) -> BigUint {
    spec.r.last().cloned().unwrap_or_default()
}

/// Wraps a number of turns into `[-1/2, 1/2)`.
pub(crate) fn wrap_turns(t: f64) -> f64 {
    t - t.round()
}

impl ClockSpectrum {
    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    /// Highest level index; the Hilbert space dimension is `p + 1`.
    pub fn p(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dimension(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn r(&self) -> &[BigUint] {
        &self.r
    }

    /// `E_n / E_1` for `n = 0..=p`.
    pub fn ratios(&self) -> &[RationalRatio] {
        &self.ratios
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mode(&self) -> UnitMode {
        self.mode
    }

    pub fn max_integer(&self) -> BigUint {
        max_integer(self)
    }

    /// `r_p` as an unsigned machine integer, if it fits.
    pub fn r_max_u64(&self) -> Option<u64> {
        self.r.last().and_then(|x| x.to_u64())
    }

    pub fn excess(&self) -> &[f64] {
        &self.excess
    }

    /// `E_n τ / (2πħ)` reduced to `[-1/2, 1/2)`.
    ///
    /// Computed as `(r_n + excess_n) · τ/T` with the integer part of `τ/T`
    /// discarded first, so full periods never cost precision.
    pub fn phase_turns(&self, n: usize, tau: f64) -> f64 {
        let q = tau / self.period;
        let frac = q - q.floor();
        let rn = self.r[n].to_f64().unwrap_or(f64::INFINITY);
        wrap_turns(wrap_turns(rn * frac) + self.excess[n] * q)
    }

    /// `E_n τ_m / (2πħ)` for the grid point `τ_m = τ_0 + m T/(z+1)`, reduced
    /// to `[-1/2, 1/2)`. The integer part `r_n m mod (z+1)` is done exactly.
    pub(crate) fn grid_phase_turns(&self, n: usize, tau0: f64, m: u64, z_plus_1: u64) -> f64 {
        let rn_mod = (&self.r[n] % z_plus_1)
            .to_u64()
            .expect("remainder below modulus");
        let k = ((rn_mod as u128 * m as u128) % z_plus_1 as u128) as f64;
        let grid = k / z_plus_1 as f64 + self.excess[n] * (m as f64 / z_plus_1 as f64);
        wrap_turns(self.phase_turns(n, tau0) + wrap_turns(grid))
    }

    /// Mean energy `Ē` and spread `ΔE` of the flat superposition over all levels.
    pub fn flat_moments(&self) -> (f64, f64) {
        let d = self.dimension() as f64;
        let mean = self.levels.iter().sum::<f64>() / d;
        let var = self
            .levels
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / d;
        (mean, var.sqrt())
    }
}
