//! Time evolution of the driven qubit: closed-form resonant populations, the
//! reduced two-amplitude equations in the rotating representation, the full
//! Schrödinger equation for either coupling axis, and the x-configuration
//! closed form.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::floquet::PhaseDecomposition;
use crate::model::{hamiltonian, is_resonant, Axis, SystemParams};
use crate::ode::{self, OdeOptions, OdeStats, State};
use crate::specfun::bessel_j;

pub const DEFAULT_TOL: f64 = 1e-9;
/// Steps of the full integrator are capped at this fraction of a carrier period.
pub const CARRIER_STEP_FRACTION: f64 = 1.0 / 20.0;

/// Amplitudes on the diabatic basis `(|↓⟩, |↑⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub c1: C64,
    pub c2: C64,
}

impl AmplitudePair {
    pub fn ground() -> Self {
        AmplitudePair { c1: C64::new(1.0, 0.0), c2: C64::new(0.0, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    fn state(&self) -> State {
        [self.c1, self.c2]
    }

    fn from_state(s: &State) -> Self {
        AmplitudePair { c1: s[0], c2: s[1] }
    }
}

/// Diabatic populations sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrace {
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
}

impl PopulationTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_k |p1[k] − other.p1[k]|`; the grids must match.
    pub fn max_p1_diff(&self, other: &PopulationTrace) -> Result<f64> {
        if self.times != other.times {
            return Err(Error::Precondition("traces are sampled on different grids".into()));
        }
        Ok(self.p1.iter().zip(&other.p1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// Amplitudes from one of the integrators.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub times: Vec<f64>,
    pub amplitudes: Vec<AmplitudePair>,
    pub stats: OdeStats,
}

impl Evolution {
    pub fn populations(&self) -> PopulationTrace {
        PopulationTrace {
            times: self.times.clone(),
            p1: self.amplitudes.iter().map(|a| a.c1.norm_sqr()).collect(),
            p2: self.amplitudes.iter().map(|a| a.c2.norm_sqr()).collect(),
        }
    }

    /// `max_k ||c1|² + |c2|² − 1|`.
    pub fn max_norm_drift(&self) -> f64 {
        self.amplitudes.iter().map(|a| (a.norm_sqr() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// `n + 1` equally spaced times on `[0, t_end]`.
pub fn sample_times(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}

fn check_times(times: &[f64]) -> Result<()> {
    if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition(format!("times must be strictly increasing ({} then {})", w[0], w[1])));
    }
    if let Some(&t) = times.first() {
        if !(t >= 0.0) {
            return Err(Error::Precondition(format!("times must start at t >= 0, got {t}")));
        }
    }
    Ok(())
}

/// `P₁ = cos²γ_N(t)`, `P₂ = sin²γ_N(t)` for a qubit starting in `|↓⟩` at exact resonance.
pub fn analytic_populations(p: &SystemParams, times: &[f64]) -> Result<PopulationTrace> {
    if !is_resonant(p) {
        return Err(Error::Precondition(format!(
            "closed-form populations need exact resonance, detuning is {}",
            p.detuning()
        )));
    }
    check_times(times)?;
    let d = PhaseDecomposition::new(p)?;
    analytic_from_decomposition(&d, times)
}

/// Same as [`analytic_populations`] with a prebuilt decomposition.
pub fn analytic_from_decomposition(d: &PhaseDecomposition, times: &[f64]) -> Result<PopulationTrace> {
    check_times(times)?;
    let (p1, p2) = times
        .iter()
        .map(|&t| {
            let c = d.gamma(t).cos().powi(2);
            (c, 1.0 - c)
        })
        .unzip();
    Ok(PopulationTrace { times: times.to_vec(), p1, p2 })
}

/// `Ω_N(t) = (Δ/2)J_N(w(t))`, the rate of change of `γ_N`.
pub fn rabi_frequency(p: &SystemParams, t: f64) -> Result<f64> {
    let w = crate::floquet::bessel_argument(p, t);
    Ok(0.5 * p.delta_gap * bessel_j(p.order as i32, w)?)
}

/// Right-hand side of the reduced equations
/// `iĊ₁ = −(Δ/2)J_N(w)e^{−iα}C₂`, `iĊ₂ = −(Δ/2)J_N(w)e^{iα}C₁`, `α = Δ_N t − Nπ`.
pub fn reduced_rhs(p: &SystemParams) -> Result<impl Fn(f64, &State) -> State> {
    let n = i32::try_from(p.order).map_err(|_| Error::domain("bessel_j", "order too large"))?;
    // validate the Bessel domain once
    bessel_j(n, 2.0 * p.drive_ratio())?;
    let p = *p;
    Ok(move |t: f64, y: &State| {
        let w = crate::floquet::bessel_argument(&p, t);
        let k = 0.5 * p.delta_gap * crate::specfun::bessel_j_unchecked(n, w);
        let alpha = p.detuning() * t - f64::from(p.order) * PI;
        let e = C64::new(0.0, alpha).exp();
        // dC/dt = i k (e^{−iα}C₂, e^{iα}C₁)
        let ik = C64::new(0.0, k);
        [ik * e.conj() * y[1], ik * e * y[0]]
    })
}

/// Integrate the reduced equations from `|↓⟩` at `t = 0`.
pub fn integrate_reduced(p: &SystemParams, times: &[f64], tol: f64) -> Result<Evolution> {
    integrate_reduced_from(p, AmplitudePair::ground(), times, tol)
}

pub fn integrate_reduced_from(p: &SystemParams, y0: AmplitudePair, times: &[f64], tol: f64) -> Result<Evolution> {
    check_times(times)?;
    let rhs = reduced_rhs(p)?;
    let opts = OdeOptions::with_tol(tol);
    let (ys, stats) = ode::integrate(rhs, 0.0, y0.state(), times, &opts)?;
    Ok(Evolution { times: times.to_vec(), amplitudes: ys.iter().map(AmplitudePair::from_state).collect(), stats })
}

/// Integrate `i dψ/dt = H(t)ψ` with the full Hamiltonian from `|↓⟩` at `t = 0`.
pub fn integrate_full(p: &SystemParams, axis: Axis, times: &[f64], tol: f64) -> Result<Evolution> {
    integrate_full_from(p, axis, AmplitudePair::ground(), times, tol)
}

pub fn integrate_full_from(
    p: &SystemParams,
    axis: Axis,
    y0: AmplitudePair,
    times: &[f64],
    tol: f64,
) -> Result<Evolution> {
    check_times(times)?;
    let rhs = |t: f64, y: &State| {
        let hy = hamiltonian(p, axis, t).apply(y);
        [C64::new(hy[0].im, -hy[0].re), C64::new(hy[1].im, -hy[1].re)]
    };
    let opts = OdeOptions::with_tol(tol).h_max(2.0 * PI / p.carrier * CARRIER_STEP_FRACTION);
    let (ys, stats) = ode::integrate(rhs, 0.0, y0.state(), times, &opts)?;
    Ok(Evolution { times: times.to_vec(), amplitudes: ys.iter().map(AmplitudePair::from_state).collect(), stats })
}

/// x-configuration closed form at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XConfigState {
    /// Population of `|↑⟩` starting from `|↓⟩`.
    pub p_up: f64,
    /// `e^{+i(V/δ)sin δt}`.
    pub qes_plus: C64,
    /// `e^{−i(V/δ)sin δt}`.
    pub qes_minus: C64,
    /// Both quasienergies vanish.
    pub quasienergy: f64,
}

/// Rotating-frame solution `exp(−i(V/δ)sin(δt)σ_x)|↓⟩` for coupling `V cos δt`.
pub fn xconfig_dynamics(v: f64, delta_mod: f64, t: f64) -> Result<XConfigState> {
    if delta_mod == 0.0 || !delta_mod.is_finite() {
        return Err(Error::InvalidParam { key: "modulation", detail: format!("must be finite and nonzero, got {delta_mod}") });
    }
    let theta = v / delta_mod * (delta_mod * t).sin();
    Ok(XConfigState {
        p_up: theta.sin().powi(2),
        qes_plus: C64::new(0.0, theta).exp(),
        qes_minus: C64::new(0.0, -theta).exp(),
        quasienergy: 0.0,
    })
}
