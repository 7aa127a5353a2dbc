//! Relativistic limits on discretizing and resolving clock readings.
//!
//! Everything here is a closed-form expression in ħ, c, G and the clock
//! parameters, except [`optimize_mass`], which minimizes the pointwise
//! maximum of the spreading and Compton bounds over the clock mass below the
//! gravitational mass limit.
//!
//! Most of the discretization results share the confinement rate
//! `l_C/(4 l_p t_p) − m_rest c²/ħ`, the largest spectral width (divided by ħ)
//! that fits inside a sphere of diameter `l_C` without collapsing.

use std::f64::consts::{PI, TAU};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{invalid, ClockError, Result};
use crate::optimize::golden_section_min;
use crate::spectrum::{ClockSpectrum, SpectrumKind};
use crate::units::ConstantsSet;

/// Physical size and mass of the clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClockBody {
    /// Diameter `l_C` (m).
    pub l_c: f64,
    /// Rest mass excluding the internal energy (kg).
    pub m_rest: f64,
    /// Inertial mass used by the spreading bound (kg).
    pub m: f64,
}

impl ClockBody {
    /// `m` defaults to `m_rest`.
    pub fn new(l_c: f64, m_rest: f64, m: Option<f64>) -> Result<Self> {
        if !(l_c.is_finite() && l_c > 0.0) {
            return Err(invalid(format!(
                "clock diameter must be positive, got {l_c}"
            )));
        }
        if !(m_rest.is_finite() && m_rest >= 0.0) {
            return Err(invalid(format!(
                "rest mass must be non-negative, got {m_rest}"
            )));
        }
        let m = m.unwrap_or(m_rest);
        if !(m.is_finite() && m > 0.0) {
            return Err(invalid(format!("inertial mass must be positive, got {m}")));
        }
        Ok(Self { l_c, m_rest, m })
    }

    /// Whether `l_C/2 > 2 G m_rest / c²`.
    pub fn is_admissible(&self, consts: &ConstantsSet) -> bool {
        self.confinement_rate(consts).is_ok()
    }

    /// `l_C/(4 l_p t_p) − m_rest c²/ħ`, rejecting inadmissible bodies.
    pub fn confinement_rate(&self, consts: &ConstantsSet) -> Result<f64> {
        let (c, g, hbar) = (consts.c(), consts.g(), consts.hbar());
        let half_diameter = self.l_c / 2.0;
        let radius = 2.0 * g * self.m_rest / (c * c);
        let pl = consts.planck();
        let rate = self.l_c / (4.0 * pl.l_p * pl.t_p) - self.m_rest * c * c / hbar;
        if half_diameter <= radius || rate.is_nan() || rate <= 0.0 {
            return Err(ClockError::SchwarzschildViolation {
                half_diameter,
                radius,
            });
        }
        Ok(rate)
    }
}

fn check_time(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid(format!(
            "{name} must be finite and positive, got {v}"
        )));
    }
    Ok(())
}

/// Lower limit on the grid spacing `δτ` of an equally spaced clock with
/// `z + 1` time states: `2π / rate · (p+1)/(z+1)`.
pub fn discretization_bound(
    body: &ClockBody,
    consts: &ConstantsSet,
    p: u64,
    z: u64,
) -> Result<f64> {
    if z < p {
        return Err(invalid(format!("z = {z} must be at least p = {p}")));
    }
    let rate = body.confinement_rate(consts)?;
    Ok(TAU / rate * ((p as f64 + 1.0) / (z as f64 + 1.0)))
}

/// Lower limit on `δτ` for a generic rational spectrum: `2π / rate · r_p/(z+1)`.
pub fn discretization_bound_generic(
    body: &ClockBody,
    consts: &ConstantsSet,
    r_p: &BigUint,
    z: u64,
) -> Result<f64> {
    if BigUint::from(z) < *r_p {
        return Err(invalid(format!(
            "z + 1 = {} must exceed r_p = {r_p}",
            z as u128 + 1
        )));
    }
    let rate = body.confinement_rate(consts)?;
    let r = r_p.to_f64().unwrap_or(f64::INFINITY);
    Ok(TAU / rate * (r / (z as f64 + 1.0)))
}

/// Whether `T > 2π · count / rate`, in which case the spacing `T/(z+1)` stays
/// above its bound for every `z` and the continuum limit is safe. `count` is
/// `p + 1` for equal spacing and `r_p` for generic spectra.
pub fn continuum_condition(
    body: &ClockBody,
    consts: &ConstantsSet,
    period: f64,
    count: &BigUint,
) -> Result<bool> {
    let rate = body.confinement_rate(consts)?;
    let threshold = TAU * count.to_f64().unwrap_or(f64::INFINITY) / rate;
    Ok(period > threshold)
}

/// The period threshold used by [`continuum_condition`].
pub fn continuum_threshold(
    body: &ClockBody,
    consts: &ConstantsSet,
    count: &BigUint,
) -> Result<f64> {
    let rate = body.confinement_rate(consts)?;
    Ok(TAU * count.to_f64().unwrap_or(f64::INFINITY) / rate)
}

/// `T/(p+1)`: the flat state visits `p + 1` orthogonal states per period.
pub fn structural_bound(period: f64, p: u64) -> Result<f64> {
    check_time("period", period)?;
    Ok(period / (p as f64 + 1.0))
}

/// Quantum speed limit `max(πħ/(2Ē), πħ/(2ΔE))` for the flat time state.
pub fn speed_limit_bound(spec: &ClockSpectrum) -> Result<f64> {
    let (mean, spread) = spec.flat_moments();
    if spec.p() == 0 || mean.is_nan() || mean <= 0.0 || spread.is_nan() || spread <= 0.0 {
        return Err(ClockError::DegenerateClock(
            "the flat state has no energy spread".into(),
        ));
    }
    let hbar = spec.hbar();
    Ok((PI * hbar / (2.0 * mean)).max(PI * hbar / (2.0 * spread)))
}

/// `π / rate`: the speed-limit bound after inserting `Ē, 2ΔE ≤ E_p` and the
/// confinement inequality.
pub fn speed_limit_gravitational_floor(body: &ClockBody, consts: &ConstantsSet) -> Result<f64> {
    Ok(PI / body.confinement_rate(consts)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpreadingBound {
    /// Position spread minimizing `δx + ħΘ/(2mδx)` (m).
    pub delta_x_opt: f64,
    /// `δx_opt / c` (s).
    pub dt: f64,
    /// Velocity spread `ħ/(2 m δx_opt)` (m/s).
    pub delta_v: f64,
}

/// Quantum-spreading bound for a clock of mass `m` kept for time `theta`.
pub fn spreading_bound(m: f64, theta: f64, consts: &ConstantsSet) -> Result<SpreadingBound> {
    check_time("mass", m)?;
    check_time("operational time", theta)?;
    let hbar = consts.hbar();
    let delta_x_opt = (hbar * theta / (2.0 * m)).sqrt();
    Ok(SpreadingBound {
        delta_x_opt,
        dt: delta_x_opt / consts.c(),
        delta_v: hbar / (2.0 * m * delta_x_opt),
    })
}

/// Largest mass whose spread stays above twice its Schwarzschild radius:
/// `(c⁴ ħ Θ / (32 G²))^{1/3}`.
pub fn gravitational_mass_limit(theta: f64, consts: &ConstantsSet) -> Result<f64> {
    check_time("operational time", theta)?;
    let (c, g) = (consts.c(), consts.g());
    Ok((c.powi(4) * consts.hbar() * theta / (32.0 * g * g)).cbrt())
}

/// `2^{1/3} Θ^{1/3} t_p^{2/3}` for `Θ ≥ 4 t_p`; below that the three-bound
/// mass optimization is used instead.
pub fn fundamental_resolution(theta: f64, consts: &ConstantsSet) -> Result<f64> {
    check_time("operational time", theta)?;
    let tp = consts.planck().t_p;
    if theta >= 4.0 * tp {
        Ok((2.0 * theta).cbrt() * tp.cbrt() * tp.cbrt())
    } else {
        Ok(optimize_mass(theta, consts, true)?.dt_min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassRegime {
    /// Spreading and gravitational constraints meet; Compton plays no role.
    SpreadingGrav,
    /// Compton and gravitational constraints meet (Θ < 4 t_p).
    ComptonGravFloor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassOptimum {
    pub m_opt: f64,
    pub dt_min: f64,
    pub regime: MassRegime,
}

fn spreading_dt(m: f64, theta: f64, consts: &ConstantsSet) -> f64 {
    (consts.hbar() * theta / (2.0 * m)).sqrt() / consts.c()
}

fn compton_dt(m: f64, consts: &ConstantsSet) -> f64 {
    consts.hbar() / (m * consts.c() * consts.c())
}

/// Minimizes `Δt(m) = max(spreading(m), compton(m))` over `m` below the
/// gravitational mass limit, searching in `ln m`.
///
/// The bracket runs from three decades below the smaller of the analytic
/// crossings (spreading = Compton at `m = 2ħ/(Θc²)`, and the mass limit) up
/// to the mass limit. A golden-section search locates the minimizer and the
/// result is snapped onto the mass limit when it lands within the search
/// tolerance of it.
pub fn optimize_mass(
    theta: f64,
    consts: &ConstantsSet,
    include_compton: bool,
) -> Result<MassOptimum> {
    check_time("operational time", theta)?;
    let m_grav = gravitational_mass_limit(theta, consts)?;
    let m_cross = 2.0 * consts.hbar() / (theta * consts.c() * consts.c());
    let hi = m_grav.ln();
    let lo = m_cross.min(m_grav).ln() - 3.0 * std::f64::consts::LN_10;
    let objective = |log_m: f64| -> f64 {
        let m = log_m.exp();
        let s = spreading_dt(m, theta, consts);
        if include_compton {
            s.max(compton_dt(m, consts))
        } else {
            s
        }
    };
    let tol = 1e-14 * hi.abs().max(1.0);
    let (mut x, _) = golden_section_min(objective, lo, hi, tol, 500);
    if hi - x <= 4.0 * tol {
        x = hi;
    }
    let m_opt = if x == hi { m_grav } else { x.exp() };
    let spread = spreading_dt(m_opt, theta, consts);
    let compton = compton_dt(m_opt, consts);
    let (dt_min, regime) = if include_compton && compton > spread {
        (compton, MassRegime::ComptonGravFloor)
    } else {
        (spread, MassRegime::SpreadingGrav)
    };
    Ok(MassOptimum {
        m_opt,
        dt_min,
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    Structural,
    SpeedLimit,
    Spreading,
    Fundamental,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: u64,
    pub z: u64,
    pub r_max: String,
    pub period: f64,
    pub theta: f64,
    pub l_c: f64,
    pub m_rest: f64,
    pub mass: f64,
    /// Actual grid spacing `T/(z+1)`.
    pub delta_tau: f64,
    /// Gravitational lower limit on `δτ`.
    pub delta_tau_min: f64,
    pub continuum_ok: bool,
    /// `T/(p+1)`; only a resolution bound for equally spaced spectra.
    pub structural_dt: f64,
    pub speed_limit_dt: f64,
    pub speed_limit_floor: f64,
    pub spreading_dt: f64,
    pub delta_x_opt: f64,
    pub delta_v: f64,
    pub mass_limit: f64,
    pub mass_within_limit: bool,
    pub fundamental_dt: f64,
    pub binding: Binding,
}

/// Evaluates every bound for one clock and tags the largest lower bound on
/// `Δt`. The structural bound only competes for equally spaced spectra; for
/// generic spectra its role is taken by the speed limit.
pub fn bound_report(
    body: &ClockBody,
    consts: &ConstantsSet,
    spec: &ClockSpectrum,
    z: u64,
    theta: Option<f64>,
) -> Result<BoundReport> {
    let period = spec.period();
    let theta = theta.unwrap_or(period);
    check_time("operational time", theta)?;
    if theta > period * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "operational time {theta:e} exceeds the period {period:e}"
        )));
    }
    let p = spec.p() as u64;
    let r_max = spec.max_integer();
    let equally_spaced = spec.kind() == SpectrumKind::EquallySpaced;
    let delta_tau_min = if equally_spaced {
        discretization_bound(body, consts, p, z)?
    } else {
        discretization_bound_generic(body, consts, &r_max, z)?
    };
    let count = if equally_spaced {
        BigUint::from(p + 1)
    } else {
        r_max.clone()
    };
    let continuum_ok = continuum_condition(body, consts, period, &count)?;
    let structural_dt = structural_bound(period, p)?;
    let speed_limit_dt = speed_limit_bound(spec)?;
    let speed_limit_floor = speed_limit_gravitational_floor(body, consts)?;
    let spread = spreading_bound(body.m, theta, consts)?;
    let mass_limit = gravitational_mass_limit(theta, consts)?;
    let fundamental_dt = fundamental_resolution(theta, consts)?;

    let mut candidates = Vec::with_capacity(4);
    if equally_spaced {
        candidates.push((Binding::Structural, structural_dt));
    }
    candidates.push((Binding::SpeedLimit, speed_limit_dt));
    candidates.push((Binding::Spreading, spread.dt));
    candidates.push((Binding::Fundamental, fundamental_dt));
    let binding = candidates
        .iter()
        .fold(None::<(Binding, f64)>, |best, &(b, v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((b, v)),
        })
        .map(|(b, _)| b)
        .expect("non-empty");

    Ok(BoundReport {
        p,
        z,
        r_max: r_max.to_string(),
        period,
        theta,
        l_c: body.l_c,
        m_rest: body.m_rest,
        mass: body.m,
        delta_tau: period / (z as f64 + 1.0),
        delta_tau_min,
        continuum_ok,
        structural_dt,
        speed_limit_dt,
        speed_limit_floor,
        spreading_dt: spread.dt,
        delta_x_opt: spread.delta_x_opt,
        delta_v: spread.delta_v,
        mass_limit,
        mass_within_limit: body.m < mass_limit,
        fundamental_dt,
        binding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::build_equally_spaced;
    use approx::assert_relative_eq;

    fn nat() -> ConstantsSet {
        ConstantsSet::natural()
    }

    fn si() -> ConstantsSet {
        ConstantsSet::codata2018()
    }

    #[test]
    fn discretization_natural_units() {
        let body = ClockBody::new(8.0, 0.0, Some(1.0)).unwrap();
        assert_relative_eq!(
            discretization_bound(&body, &nat(), 3, 3).unwrap(),
            PI,
            max_relative = 1e-15
        );
        let a = discretization_bound(&body, &nat(), 3, 7).unwrap();
        let b = discretization_bound(&body, &nat(), 3, 15).unwrap();
        assert_relative_eq!(b, a / 2.0, max_relative = 1e-15);
        assert!(discretization_bound(&body, &nat(), 3, 2).is_err());
    }

    #[test]
    fn discretization_si_pinned() {
        // 40-digit evaluation of 2π (l_C/(4 l_p t_p) − m c²/ħ)^{-1} at l_C = 1 m, m = 1 kg.
        let body = ClockBody::new(1.0, 1.0, None).unwrap();
        let v = discretization_bound(&body, &si(), 4, 4).unwrap();
        assert_relative_eq!(v, 2.189_973_867_069_426e-77, max_relative = 1e-13);
    }

    #[test]
    fn generic_discretization() {
        let body = ClockBody::new(8.0, 0.0, Some(1.0)).unwrap();
        let v = discretization_bound_generic(&body, &nat(), &BigUint::from(21u32), 21).unwrap();
        assert_relative_eq!(v, 21.0 * PI / 22.0, max_relative = 1e-15);
        let a = discretization_bound_generic(&body, &nat(), &BigUint::from(21u32), 21).unwrap();
        let b = discretization_bound_generic(&body, &nat(), &BigUint::from(21u32), 43).unwrap();
        assert_relative_eq!(b, a / 2.0, max_relative = 1e-15);
        assert!(discretization_bound_generic(&body, &nat(), &BigUint::from(21u32), 20).is_err());
    }

    #[test]
    fn continuum_threshold_arithmetic() {
        let one = BigUint::from(1u32);
        // l_C = 8: rate 2, threshold 2π/2 = π.
        let body = ClockBody::new(8.0, 0.0, Some(1.0)).unwrap();
        assert_relative_eq!(continuum_threshold(&body, &nat(), &one).unwrap(), PI);
        assert!(continuum_condition(&body, &nat(), 10.0, &one).unwrap());
        assert!(!continuum_condition(&body, &nat(), 3.0, &one).unwrap());
        // l_C = 2: rate 1/2, threshold 4π.
        let body = ClockBody::new(2.0, 0.0, Some(1.0)).unwrap();
        assert!(!continuum_condition(&body, &nat(), 10.0, &one).unwrap());
        assert!(continuum_condition(&body, &nat(), 13.0, &one).unwrap());
        assert!(continuum_condition(&body, &nat(), f64::INFINITY, &one).unwrap());
        // Near the admissibility edge m_rest → l_C/4 the threshold diverges.
        let edge = ClockBody::new(2.0, 0.5 * (1.0 - 1e-12), Some(1.0)).unwrap();
        assert!(!continuum_condition(&edge, &nat(), 1e9, &one).unwrap());
    }

    #[test]
    fn schwarzschild_guard() {
        let body = ClockBody::new(2.0, 0.5, None).unwrap();
        let err = discretization_bound(&body, &nat(), 1, 1).unwrap_err();
        assert_eq!(err.name(), "schwarzschild-violation");
        assert!(speed_limit_gravitational_floor(&body, &nat()).is_err());
        assert!(continuum_condition(&body, &nat(), 1.0, &BigUint::from(1u32)).is_err());
        assert!(!body.is_admissible(&nat()));
        assert!(ClockBody::new(0.0, 0.0, Some(1.0)).is_err());
        assert!(ClockBody::new(1.0, 0.0, None).is_err());
    }

    #[test]
    fn structural_cases() {
        assert_eq!(structural_bound(1.0, 0).unwrap(), 1.0);
        assert_eq!(structural_bound(TAU, 1).unwrap(), PI);
        assert!(structural_bound(0.0, 1).is_err());
    }

    #[test]
    fn speed_limit_two_level() {
        let s = build_equally_spaced(1, TAU, &nat()).unwrap();
        assert_relative_eq!(speed_limit_bound(&s).unwrap(), PI, max_relative = 1e-15);
        let s2 = build_equally_spaced(1, TAU / 2.0, &nat()).unwrap();
        assert_relative_eq!(
            speed_limit_bound(&s2).unwrap(),
            PI / 2.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn speed_limit_floor_cases() {
        let body = ClockBody::new(8.0, 0.0, Some(1.0)).unwrap();
        let floor = speed_limit_gravitational_floor(&body, &nat()).unwrap();
        // rate = 8/4 = 2, so the floor is π/2, half the z = p discretization bound.
        assert_relative_eq!(floor, PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(
            floor,
            discretization_bound(&body, &nat(), 5, 5).unwrap() / 2.0,
            max_relative = 1e-15
        );
        let heavier = ClockBody::new(8.0, 0.5, Some(1.0)).unwrap();
        assert!(speed_limit_gravitational_floor(&heavier, &nat()).unwrap() > floor);
    }

    #[test]
    fn spreading_cases() {
        let s = spreading_bound(0.5, 1.0, &nat()).unwrap();
        assert_eq!((s.delta_x_opt, s.dt), (1.0, 1.0));
        let q = spreading_bound(2.0, 1.0, &nat()).unwrap();
        assert_relative_eq!(q.delta_x_opt, 0.5);
        let si_s = spreading_bound(1.0, 1.0, &si()).unwrap();
        assert_relative_eq!(
            si_s.delta_x_opt,
            7.261_445_506_922_158e-18,
            max_relative = 1e-14
        );
        assert_relative_eq!(si_s.dt, 2.422_157_500_347_176e-26, max_relative = 1e-14);
        assert!(spreading_bound(0.0, 1.0, &nat()).is_err());
    }

    #[test]
    fn mass_limit_cases() {
        assert_relative_eq!(
            gravitational_mass_limit(32.0, &nat()).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        let a = gravitational_mass_limit(3.0, &nat()).unwrap();
        let b = gravitational_mass_limit(24.0, &nat()).unwrap();
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-15);
        assert_relative_eq!(
            gravitational_mass_limit(1.0, &si()).unwrap(),
            1_814_676.362_656_381,
            max_relative = 1e-13
        );
    }

    #[test]
    fn fundamental_cases() {
        assert_relative_eq!(
            fundamental_resolution(4.0, &nat()).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        let a = fundamental_resolution(10.0, &nat()).unwrap();
        let b = fundamental_resolution(80.0, &nat()).unwrap();
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-15);
        assert_relative_eq!(
            fundamental_resolution(1.0, &si()).unwrap(),
            1.798_054_24e-29,
            max_relative = 1e-8
        );
        // Below 4 t_p the Compton/gravitational crossing (32 t_p^4/Θ)^{1/3} takes over.
        assert_relative_eq!(
            fundamental_resolution(1.0, &nat()).unwrap(),
            32f64.cbrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn optimizer_regimes() {
        let k = nat();
        let hi = optimize_mass(100.0, &k, true).unwrap();
        assert_eq!(hi.regime, MassRegime::SpreadingGrav);
        assert_relative_eq!(
            hi.dt_min,
            fundamental_resolution(100.0, &k).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            hi.m_opt,
            gravitational_mass_limit(100.0, &k).unwrap(),
            max_relative = 1e-12
        );
        let lo = optimize_mass(0.5, &k, true).unwrap();
        assert_eq!(lo.regime, MassRegime::ComptonGravFloor);
        assert!(lo.dt_min > 2.0);
        let at = optimize_mass(4.0, &k, true).unwrap();
        assert_relative_eq!(at.dt_min, 2.0, max_relative = 1e-12);
        let no_c = optimize_mass(100.0, &k, false).unwrap();
        assert_relative_eq!(no_c.dt_min, hi.dt_min, max_relative = 1e-12);
    }

    #[test]
    fn report_for_two_level_toy() {
        let k = nat();
        let s = build_equally_spaced(1, TAU, &k).unwrap();
        let body = ClockBody::new(100.0, 1.0, None).unwrap();
        let r = bound_report(&body, &k, &s, 3, None).unwrap();
        assert_eq!(r.theta, TAU);
        assert_relative_eq!(r.structural_dt, PI);
        assert!(r.delta_tau_min > 0.0);
        assert!(bound_report(&body, &k, &s, 3, Some(7.0)).is_err());
    }
}
