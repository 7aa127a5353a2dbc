//! Time states, the time POVM and the Hermitian time operator.
//!
//! A time state is the flat superposition
//! `|τ⟩ = (p+1)^{-1/2} Σ_n e^{-i E_n τ/ħ} |E_n⟩`. Sampling `τ` on the grid
//! `τ_m = τ_0 + m T/(z+1)` gives the POVM elements
//! `(p+1)/(z+1) |τ_m⟩⟨τ_m|`, which resolve the identity whenever the
//! `r_n` are integers and `z+1 > r_p`.

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;

use crate::error::{invalid, ClockError, Result};
use crate::linalg::{
    hermitian_eigenvalues, hermitian_norm, hermiticity_defect, sum_outer_products,
};
use crate::optimize::golden_section_min;
use crate::spectrum::{ClockSpectrum, SpectrumKind};

/// Dense assembly is limited to `p + 1 <= MAX_DIMENSION`.
pub const MAX_DIMENSION: usize = 4096;

/// `e^{-2πi t}`.
fn phasor(turns: f64) -> Complex64 {
    let (s, c) = (TAU * turns).sin_cos();
    Complex64::new(c, -s)
}

fn same_spectrum(a: &Arc<ClockSpectrum>, b: &Arc<ClockSpectrum>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A pure state expanded in the energy basis of a clock.
#[derive(Debug, Clone)]
pub struct StateVector {
    spectrum: Arc<ClockSpectrum>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Unnormalized amplitudes are accepted as given.
    pub fn new(spectrum: Arc<ClockSpectrum>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spectrum.dimension() {
            return Err(invalid(format!(
                "expected {} amplitudes, got {}",
                spectrum.dimension(),
                amplitudes.len()
            )));
        }
        Ok(Self {
            spectrum,
            amplitudes,
        })
    }

    /// The energy eigenstate `|E_n⟩`.
    pub fn energy_eigenstate(spectrum: Arc<ClockSpectrum>, n: usize) -> Result<Self> {
        if n > spectrum.p() {
            return Err(invalid(format!(
                "level {n} out of range 0..={}",
                spectrum.p()
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); spectrum.dimension()];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self {
            spectrum,
            amplitudes,
        })
    }

    pub fn spectrum(&self) -> &Arc<ClockSpectrum> {
        &self.spectrum
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if !same_spectrum(&self.spectrum, &other.spectrum) {
            return Err(ClockError::IncompatibleState(
                "states belong to different spectra".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Schrödinger evolution by `dt`: `a_n ← a_n e^{-i E_n dt/ħ}`.
    pub fn evolved(&self, dt: f64) -> StateVector {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| a * phasor(self.spectrum.phase_turns(n, dt)))
            .collect();
        StateVector {
            spectrum: Arc::clone(&self.spectrum),
            amplitudes,
        }
    }
}

/// `|τ⟩` together with its time label.
#[derive(Debug, Clone)]
pub struct TimeState {
    state: StateVector,
    tau: f64,
}

impl TimeState {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.state.amplitudes()
    }

    pub fn spectrum(&self) -> &Arc<ClockSpectrum> {
        self.state.spectrum()
    }

    pub fn as_state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }
}

impl AsRef<StateVector> for TimeState {
    fn as_ref(&self) -> &StateVector {
        &self.state
    }
}

impl AsRef<StateVector> for StateVector {
    fn as_ref(&self) -> &StateVector {
        self
    }
}

fn flat_state(spec: &Arc<ClockSpectrum>, turns: impl Fn(usize) -> f64) -> StateVector {
    let norm = 1.0 / (spec.dimension() as f64).sqrt();
    let amplitudes = (0..spec.dimension())
        .map(|n| phasor(turns(n)) * norm)
        .collect();
    StateVector {
        spectrum: Arc::clone(spec),
        amplitudes,
    }
}

/// `|τ⟩` for any real `τ`.
pub fn time_state(spec: &Arc<ClockSpectrum>, tau: f64) -> TimeState {
    TimeState {
        state: flat_state(spec, |n| spec.phase_turns(n, tau)),
        tau,
    }
}

/// `⟨a|b⟩`.
pub fn overlap(a: &TimeState, b: &TimeState) -> Result<Complex64> {
    a.state.inner(&b.state)
}

pub fn evolve(state: &TimeState, dt: f64) -> TimeState {
    TimeState {
        state: state.state.evolved(dt),
        tau: state.tau + dt,
    }
}

/// The `z + 1` element time POVM on a spectrum.
#[derive(Debug, Clone)]
pub struct ClockPOVM {
    spectrum: Arc<ClockSpectrum>,
    z: u64,
    tau0: f64,
}

impl ClockPOVM {
    pub fn new(spectrum: Arc<ClockSpectrum>, z: u64, tau0: f64) -> Result<Self> {
        if z < spectrum.p() as u64 {
            return Err(invalid(format!(
                "z = {z} must be at least p = {}",
                spectrum.p()
            )));
        }
        if z == u64::MAX {
            return Err(invalid("z + 1 overflows"));
        }
        if !tau0.is_finite() {
            return Err(invalid("tau_0 must be finite"));
        }
        Ok(Self { spectrum, z, tau0 })
    }

    pub fn spectrum(&self) -> &Arc<ClockSpectrum> {
        &self.spectrum
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn len(&self) -> u64 {
        self.z + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(p + 1, z + 1)`, the exact weight as numerator and denominator.
    pub fn weight_ratio(&self) -> (u64, u64) {
        (self.spectrum.dimension() as u64, self.z + 1)
    }

    pub fn weight(&self) -> f64 {
        self.spectrum.dimension() as f64 / (self.z + 1) as f64
    }

    pub fn tau(&self, m: u64) -> f64 {
        self.tau0 + self.spectrum.period() * (m as f64 / (self.z + 1) as f64)
    }

    pub fn tau_grid(&self) -> Vec<f64> {
        (0..=self.z).map(|m| self.tau(m)).collect()
    }

    /// Whether `z + 1 > r_p`, the sufficient condition for completeness.
    pub fn satisfies_completeness_condition(&self) -> bool {
        self.spectrum.max_integer() < BigUint::from(self.z) + 1u32
    }

    /// `|τ_m⟩`, with the grid phase `r_n m mod (z+1)` reduced exactly.
    pub fn element_state(&self, m: u64) -> TimeState {
        let spec = &self.spectrum;
        let state = flat_state(spec, |n| spec.grid_phase_turns(n, self.tau0, m, self.z + 1));
        TimeState {
            state,
            tau: self.tau(m),
        }
    }

    /// Gram matrix `G_{jk} = ⟨τ_j|τ_k⟩` over all `z + 1` elements.
    pub fn gram_matrix(&self) -> DMatrix<Complex64> {
        let states: Vec<TimeState> = (0..=self.z).map(|m| self.element_state(m)).collect();
        let n = states.len();
        DMatrix::from_fn(n, n, |j, k| {
            states[j]
                .state
                .amplitudes
                .iter()
                .zip(&states[k].state.amplitudes)
                .map(|(a, b)| a.conj() * b)
                .sum()
        })
    }

    /// `(p+1)/(z+1) Σ_m |τ_m⟩⟨τ_m|`, assembled densely.
    pub fn frame_operator(&self) -> Result<DMatrix<Complex64>> {
        frame_operator(&self.spectrum, self.z + 1, self.tau0)
    }
}

fn frame_operator(spec: &Arc<ClockSpectrum>, count: u64, tau0: f64) -> Result<DMatrix<Complex64>> {
    let dim = spec.dimension();
    if dim > MAX_DIMENSION {
        return Err(ClockError::Capacity(format!(
            "dimension {dim} exceeds the dense limit {MAX_DIMENSION}"
        )));
    }
    if count == 0 {
        return Err(invalid("need at least one grid point"));
    }
    let norm = 1.0 / (dim as f64).sqrt();
    let state = |m: u64| -> Vec<Complex64> {
        (0..dim)
            .map(|n| phasor(spec.grid_phase_turns(n, tau0, m, count)) * norm)
            .collect()
    };
    let sum = sum_outer_products(count, dim, &state);
    Ok(sum * Complex64::new(dim as f64 / count as f64, 0.0))
}

fn residual_norm(mut frame: DMatrix<Complex64>) -> f64 {
    for i in 0..frame.nrows() {
        frame[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    // Enforce exact Hermiticity before the eigen-solve; the defect is rounding only.
    let sym = (&frame + frame.adjoint()) * Complex64::new(0.5, 0.0);
    hermitian_norm(&sym)
}

/// Spectral norm of `(p+1)/(z+1) Σ_{m=0}^{z} |τ_m⟩⟨τ_m| − 𝟙`.
pub fn identity_residual(spec: &Arc<ClockSpectrum>, z: u64, tau0: f64) -> Result<f64> {
    let povm = ClockPOVM::new(Arc::clone(spec), z, tau0)?;
    Ok(residual_norm(povm.frame_operator()?))
}

/// Residual of the continuous resolution `(p+1)/T ∫ |t⟩⟨t| dt = 𝟙` under the
/// periodic trapezoid rule with `quad_points` nodes on `[0, T)`.
///
/// Requires `quad_points >= 2 (r_p + 1)`.
pub fn continuous_identity_residual(spec: &Arc<ClockSpectrum>, quad_points: u64) -> Result<f64> {
    let need = spec.max_integer() * 2u32 + 2u32;
    if BigUint::from(quad_points) < need {
        return Err(invalid(format!(
            "{quad_points} quadrature points is below the required 2(r_p + 1) = {need}"
        )));
    }
    trapezoid_identity_residual(spec, quad_points, 0.0)
}

/// Periodic trapezoid residual without the sampling-rate precondition.
///
/// The rule is exact for every phase frequency `r_n − r_k` that is not a
/// nonzero multiple of `quad_points`; below that rate the aliased terms
/// survive and the residual is of order one.
pub fn trapezoid_identity_residual(
    spec: &Arc<ClockSpectrum>,
    quad_points: u64,
    t0: f64,
) -> Result<f64> {
    Ok(residual_norm(frame_operator(spec, quad_points, t0)?))
}

/// `τ̂ = Σ_m τ_m |τ_m⟩⟨τ_m|` in the energy basis.
#[derive(Debug, Clone)]
pub struct TimeOperator {
    matrix: DMatrix<Complex64>,
}

impl TimeOperator {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    /// `exp(-i s τ̂)` from the eigen-decomposition of `τ̂`.
    pub fn exp_i(&self, s: f64) -> DMatrix<Complex64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let u = &eig.eigenvectors;
        let phases =
            DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -s * l)));
        u * phases * u.adjoint()
    }
}

/// The Hermitian time operator; only defined for equally spaced spectra with `z = p`.
pub fn hermitian_time_operator(spec: &Arc<ClockSpectrum>, tau0: f64) -> Result<TimeOperator> {
    if spec.kind() != SpectrumKind::EquallySpaced {
        return Err(ClockError::UnsupportedSpectrum(
            "a Hermitian time operator exists only for equally spaced spectra".into(),
        ));
    }
    let dim = spec.dimension();
    if dim > MAX_DIMENSION {
        return Err(ClockError::Capacity(format!(
            "dimension {dim} exceeds the dense limit {MAX_DIMENSION}"
        )));
    }
    let povm = ClockPOVM::new(Arc::clone(spec), spec.p() as u64, tau0)?;
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for m in 0..=povm.z() {
        let s = povm.element_state(m);
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        matrix += (&v * v.adjoint()) * Complex64::new(s.tau(), 0.0);
    }
    Ok(TimeOperator { matrix })
}

/// `|⟨t|t + Δ⟩|` for the flat time state; independent of `t`.
pub fn survival_amplitude(spec: &ClockSpectrum, delta: f64) -> f64 {
    let d = spec.dimension() as f64;
    let s: Complex64 = (0..spec.dimension())
        .map(|n| phasor(spec.phase_turns(n, delta)))
        .sum();
    s.norm() / d
}

/// Threshold below which a located minimum of `|⟨t|t+Δ⟩|` counts as orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

/// First `Δ ∈ (0, horizon]` with `⟨t|t + Δ⟩ = 0`, if any.
///
/// Samples the survival amplitude at 64 points per period of the fastest
/// phase, then refines every sampled local minimum that could hide a zero
/// (its value is below the largest possible change over one step) with a
/// golden-section search. A refined minimum counts as a zero when it is
/// below [`ORTHOGONALITY_TOLERANCE`].
pub fn first_orthogonalization_time(spec: &ClockSpectrum, horizon: f64) -> Option<f64> {
    let dim = spec.dimension();
    let top_rate = spec.levels()[spec.p()] / (TAU * spec.hbar());
    let step = 1.0 / (64.0 * top_rate);
    let steps = (horizon / step).ceil() as u64;
    let h = horizon / steps as f64;
    let max_slope = TAU
        * spec
            .levels()
            .iter()
            .map(|e| e / (TAU * spec.hbar()))
            .sum::<f64>()
        / dim as f64;
    let gate = 1.01 * max_slope * h + 1e-12;

    let exact = |j: u64| -> Vec<Complex64> {
        (0..dim)
            .map(|n| phasor(spec.phase_turns(n, j as f64 * h)))
            .collect()
    };
    let rotors: Vec<Complex64> = (0..dim).map(|n| phasor(spec.phase_turns(n, h))).collect();
    let mut terms = exact(0);
    let amp = |t: &[Complex64]| t.iter().sum::<Complex64>().norm() / dim as f64;

    let mut prev2 = f64::INFINITY;
    let mut prev1 = amp(&terms);
    for j in 1..=steps + 1 {
        // Re-anchor the rotation recurrence periodically to bound drift.
        if j % 1024 == 0 {
            terms = exact(j);
        } else {
            for (t, r) in terms.iter_mut().zip(&rotors) {
                *t *= r;
            }
        }
        let cur = amp(&terms);
        if j >= 2 && prev1 <= prev2 && prev1 <= cur && prev1 <= gate {
            let lo = (j - 2) as f64 * h;
            let hi = j as f64 * h;
            let (x, fx) =
                golden_section_min(|x| survival_amplitude(spec, x), lo, hi, 1e-16 * hi, 400);
            if fx < ORTHOGONALITY_TOLERANCE && x > 0.0 && x <= horizon * (1.0 + 1e-12) {
                return Some(x);
            }
        }
        prev2 = prev1;
        prev1 = cur;
    }
    None
}
