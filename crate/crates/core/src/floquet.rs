//! Resonance-approximation analytics: the slowly varying Bessel argument, the
//! effective tunneling amplitude, its period average, quasienergies, the phase
//! function split into linear and periodic parts, its Fourier series, the
//! quasienergetic states, and the weak-drive closed forms.
//!
//! Everything is expressed through the dimensionless phase `u = δt`; one
//! period of the envelope `|cos u|` is `u ∈ [0, π]` with a kink at `π/2`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::quad;
use crate::specfun::{bessel_j, bessel_j_unchecked, gamma_fn, hyp2f1_reduced, BESSEL_MAX_ARG, BESSEL_MAX_ORDER};

/// Absolute tolerance for period averages.
pub const MEAN_TOL: f64 = 1e-10;
/// Number of cells in the tabulated periodic part.
pub const PHASE_TABLE_CELLS: usize = 4096;

// the integrals over [0, π] are run a little tighter than the advertised tolerance
const PERIOD_QUAD_TOL: f64 = 1e-12;
const KINK: [f64; 1] = [FRAC_PI_2];

/// `w(t) = 2(A/ω₀)|cos δt|`.
pub fn bessel_argument(p: &SystemParams, t: f64) -> f64 {
    2.0 * p.drive_ratio() * (p.modulation * t).cos().abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tunneling {
    pub amplitude: f64,
    /// The Bessel argument `w(t)` the amplitude was evaluated at.
    pub argument: f64,
}

/// `(−1)^{N+1}(Δ/2)J_N(w(t))`.
pub fn tunneling_amplitude(p: &SystemParams, t: f64) -> Result<Tunneling> {
    let w = bessel_argument(p, t);
    let j = bessel_j(order_i32(p)?, w)?;
    Ok(Tunneling { amplitude: -p.order_sign() * 0.5 * p.delta_gap * j, argument: w })
}

fn order_i32(p: &SystemParams) -> Result<i32> {
    i32::try_from(p.order)
        .ok()
        .filter(|&n| n <= BESSEL_MAX_ORDER)
        .ok_or_else(|| Error::domain("bessel_j", format!("order {} exceeds {BESSEL_MAX_ORDER}", p.order)))
}

// Checks once that J_N(2r|cos u|) stays inside the Bessel domain so the
// quadrature closures can call the unchecked evaluator.
fn envelope(p: &SystemParams) -> Result<impl Fn(f64) -> f64> {
    let n = order_i32(p)?;
    let two_r = 2.0 * p.drive_ratio();
    if !(two_r <= BESSEL_MAX_ARG) {
        return Err(Error::domain("bessel_j", format!("2A/ω₀ = {two_r} exceeds {BESSEL_MAX_ARG}")));
    }
    Ok(move |u: f64| bessel_j_unchecked(n, two_r * u.cos().abs()))
}

/// `∫₀^u J_N(2r|cos u'|) du'` for `u ∈ [0, π]`.
fn envelope_integral(p: &SystemParams, u: f64) -> Result<f64> {
    let f = envelope(p)?;
    Ok(quad::integrate(f, 0.0, u, &KINK, PERIOD_QUAD_TOL)?.value)
}

/// Period average `J̄_N = (1/T)∫₀ᵀ J_N(w(τ)) dτ`.
pub fn mean_bessel(p: &SystemParams) -> Result<f64> {
    let f = envelope(p)?;
    let r = quad::integrate(f, 0.0, PI, &KINK, MEAN_TOL * PI)?;
    Ok(r.value / PI)
}

/// `E_N = (−1)^N (Δ/2) J̄_N`.
pub fn quasienergy(p: &SystemParams) -> Result<f64> {
    Ok(p.order_sign() * 0.5 * p.delta_gap * mean_bessel(p)?)
}

/// The pair `(E⁺, E⁻) = (E_N, −E_N)`.
pub fn quasienergy_pair(p: &SystemParams) -> Result<(f64, f64)> {
    let e = quasienergy(p)?;
    Ok((e, -e))
}

/// `dJ̄_N/dr`, where `r = A/ω₀`.
pub fn mean_bessel_derivative(p: &SystemParams) -> Result<f64> {
    let n = order_i32(p)?;
    let _ = envelope(p)?;
    let two_r = 2.0 * p.drive_ratio();
    let g = move |u: f64| {
        let c = u.cos().abs();
        let x = two_r * c;
        c * (bessel_j_unchecked(n - 1, x) - bessel_j_unchecked(n + 1, x))
    };
    Ok(quad::integrate(g, 0.0, PI, &KINK, MEAN_TOL * PI)?.value / PI)
}

/// `γ_N(t) = slope·t + Φ_N(t)` with `Φ_N(0) = 0` and `Φ_N` periodic in `T = π/δ`.
///
/// `Φ_N` is tabulated on a uniform grid over one period with exact
/// derivatives at the nodes and evaluated by cubic Hermite interpolation.
#[derive(Debug, Clone)]
pub struct PhaseDecomposition {
    /// `(Δ/2)J̄_N`.
    pub slope: f64,
    /// `E_N = (−1)^N (Δ/2)J̄_N`.
    pub quasienergy: f64,
    /// `T = π/δ`.
    pub period: f64,
    mean: f64,
    params: SystemParams,
    // Φ_N and dΦ_N/du at u_k = kπ/M
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl PhaseDecomposition {
    pub fn new(p: &SystemParams) -> Result<Self> {
        let f = envelope(p)?;
        let m = PHASE_TABLE_CELLS;
        let h = PI / m as f64;
        let mut cumulative = Vec::with_capacity(m + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..m {
            let a = k as f64 * h;
            acc += quad::integrate(&f, a, a + h, &[], 1e-15)?.value;
            cumulative.push(acc);
        }
        // the average is taken from the same cells so the table closes exactly
        let mean = acc / PI;
        let scale = 0.5 * p.delta_gap / p.modulation;
        let values = cumulative.iter().enumerate().map(|(k, c)| scale * (c - mean * k as f64 * h)).collect();
        let slopes = (0..=m).map(|k| scale * (f(k as f64 * h) - mean)).collect();
        let slope = 0.5 * p.delta_gap * mean;
        Ok(PhaseDecomposition {
            slope,
            quasienergy: p.order_sign() * slope,
            period: p.period(),
            mean,
            params: *p,
            values,
            slopes,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// `J̄_N` as accumulated from the table cells.
    pub fn mean_bessel(&self) -> f64 {
        self.mean
    }

    // position inside the period as u ∈ [0, π]
    fn reduce(&self, t: f64) -> f64 {
        let k = (t / self.period).floor();
        let s = t - k * self.period;
        (self.params.modulation * s).clamp(0.0, PI)
    }

    /// Interpolated `Φ_N(t)`.
    pub fn periodic_part(&self, t: f64) -> f64 {
        let u = self.reduce(t);
        let m = PHASE_TABLE_CELLS;
        let h = PI / m as f64;
        let k = ((u / h) as usize).min(m - 1);
        let s = (u - k as f64 * h) / h;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1
    }

    /// `Φ_N(t)` by direct quadrature.
    pub fn periodic_part_exact(&self, t: f64) -> Result<f64> {
        let u = self.reduce(t);
        let scale = 0.5 * self.params.delta_gap / self.params.modulation;
        Ok(scale * (envelope_integral(&self.params, u)? - self.mean * u))
    }

    /// `γ_N(t)` from the table.
    pub fn gamma(&self, t: f64) -> f64 {
        self.slope * t + self.periodic_part(t)
    }

    /// Quasienergetic state at `t` using the tabulated `Φ_N`.
    pub fn qes_state(&self, branch: Branch, t: f64) -> QesState {
        QesState::build(&self.params, branch, self.quasienergy, self.periodic_part(t))
    }
}

/// `γ_N(t) = (Δ/2)∫₀ᵗ J_N(w(τ)) dτ`, summed period by period, together with
/// its decomposition.
pub fn phase_gamma(p: &SystemParams, t: f64) -> Result<(f64, PhaseDecomposition)> {
    let d = PhaseDecomposition::new(p)?;
    let g = phase_gamma_value(p, t)?;
    Ok((g, d))
}

/// Only the value of [`phase_gamma`].
pub fn phase_gamma_value(p: &SystemParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Precondition(format!("phase_gamma needs t >= 0, got {t}")));
    }
    let period = p.period();
    let full = (t / period).floor();
    let u = (p.modulation * (t - full * period)).clamp(0.0, PI);
    let whole = if full > 0.0 { full * envelope_integral(p, PI)? } else { 0.0 };
    let part = envelope_integral(p, u)?;
    Ok(0.5 * p.delta_gap / p.modulation * (whole + part))
}

/// Fourier coefficients of `J_N(w(t))` over one period.
#[derive(Debug, Clone)]
pub struct FourierPhase {
    /// `G(n)` for `n = −n_max..=n_max`.
    pub coefficients: Vec<C64>,
    pub n_max: usize,
    pub period: f64,
    delta_gap: f64,
}

impl FourierPhase {
    pub fn coefficient(&self, n: i64) -> C64 {
        let idx = n + self.n_max as i64;
        if idx < 0 || idx as usize >= self.coefficients.len() {
            return C64::new(0.0, 0.0);
        }
        self.coefficients[idx as usize]
    }

    /// `Φ_N(t) = (Δ/2)Σ_{|n|≥1} G(n)(T/(i2πn))(e^{i2πnt/T} − 1)`.
    pub fn periodic_part(&self, t: f64) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for n in 1..=self.n_max as i64 {
            for m in [n, -n] {
                let k = 2.0 * PI * m as f64 / self.period;
                let phase = C64::new(0.0, k * t).exp() - 1.0;
                acc += self.coefficient(m) * phase / C64::new(0.0, k);
            }
        }
        0.5 * self.delta_gap * acc.re
    }
}

/// `G(n) = (1/T)∫₀ᵀ J_N(w(τ)) e^{−i2πnτ/T} dτ` for `|n| ≤ n_max`.
pub fn fourier_phase(p: &SystemParams, n_max: usize) -> Result<FourierPhase> {
    if n_max == 0 {
        return Err(Error::Precondition("fourier_phase needs n_max >= 1".into()));
    }
    let f = envelope(p)?;
    let mut positive = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let k = 2.0 * n as f64;
        let re = quad::integrate(|u| f(u) * (k * u).cos(), 0.0, PI, &KINK, PERIOD_QUAD_TOL)?.value / PI;
        let im = if n == 0 {
            0.0
        } else {
            -quad::integrate(|u| f(u) * (k * u).sin(), 0.0, PI, &KINK, PERIOD_QUAD_TOL)?.value / PI
        };
        positive.push(C64::new(re, im));
    }
    let mut coefficients: Vec<C64> = positive[1..].iter().rev().map(|c| c.conj()).collect();
    coefficients.extend_from_slice(&positive);
    Ok(FourierPhase { coefficients, n_max, period: p.period(), delta_gap: p.delta_gap })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QesState {
    pub branch: Branch,
    pub quasienergy: f64,
    /// Periodic amplitudes on `(|↓⟩, |↑⟩)`, quasienergy phase removed.
    pub amplitudes: [C64; 2],
}

impl QesState {
    fn build(p: &SystemParams, branch: Branch, e_n: f64, phi: f64) -> Self {
        let s = branch.sign();
        let phase = C64::new(0.0, s * p.order_sign() * phi).exp() * std::f64::consts::FRAC_1_SQRT_2;
        QesState { branch, quasienergy: s * e_n, amplitudes: [phase, phase * s] }
    }

    pub fn norm(&self) -> f64 {
        (self.amplitudes[0].norm_sqr() + self.amplitudes[1].norm_sqr()).sqrt()
    }

    /// Amplitudes with the quasienergy phase `e^{iE t}` restored.
    pub fn full_amplitudes(&self, t: f64) -> [C64; 2] {
        let ph = C64::new(0.0, self.quasienergy * t).exp();
        [self.amplitudes[0] * ph, self.amplitudes[1] * ph]
    }
}

/// Quasienergetic state at `t`, with `Φ_N` by direct quadrature.
pub fn qes_state(p: &SystemParams, branch: Branch, t: f64) -> Result<QesState> {
    let mean = mean_bessel(p)?;
    let e_n = p.order_sign() * 0.5 * p.delta_gap * mean;
    let period = p.period();
    let k = (t / period).floor();
    let u = (p.modulation * (t - k * period)).clamp(0.0, PI);
    let phi = 0.5 * p.delta_gap / p.modulation * (envelope_integral(p, u)? - mean * u);
    Ok(QesState::build(p, branch, e_n, phi))
}

/// Largest `A/ω₀` accepted by [`weak_forms`].
pub const WEAK_DRIVE_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakForms {
    /// `(1/N!)(A/ω₀)^N` times the mean of `|cos u|^N`.
    pub mean_quadrature: f64,
    /// The bracketed closed form as printed in the source, times `(A/ω₀)^N`.
    pub mean_paper_closed_form: f64,
    /// Weak-drive periodic phase `Φ_N(t)`.
    pub phi_weak: f64,
}

/// `(1/π)∫₀^π |cos u|^N du = Γ((N+1)/2) / (√π Γ(N/2 + 1))`.
pub fn cos_moment(order: u32) -> Result<f64> {
    let n = f64::from(order);
    Ok(gamma_fn(0.5 * (n + 1.0))? / (PI.sqrt() * gamma_fn(0.5 * n + 1.0)?))
}

/// `F(u) = ∫₀^u |cos u'|^N du'` for `u ∈ [0, π]`, written through `2F1`.
pub fn weak_phase_integral(order: u32, u: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&u) {
        return Err(Error::domain("weak_phase_integral", format!("u = {u} outside [0, π]")));
    }
    let n = f64::from(order);
    let c = u.cos();
    let head = 0.5 * PI.sqrt() * gamma_fn(0.5 * (1.0 + n))? / gamma_fn(1.0 + 0.5 * n)?;
    let f = hyp2f1_reduced(order, (c * c).min(1.0))?;
    Ok(head - f * c * c.abs().powf(n) / (1.0 + n))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Weak-drive approximations `J_N(x) ≈ (x/2)^N/N!` of the average and the
/// periodic phase.
pub fn weak_forms(p: &SystemParams, t: f64) -> Result<WeakForms> {
    let r = p.drive_ratio();
    if r > WEAK_DRIVE_LIMIT {
        return Err(Error::Precondition(format!("weak-drive forms need A/ω₀ <= {WEAK_DRIVE_LIMIT}, got {r}")));
    }
    let n = f64::from(p.order);
    let nfact = factorial(p.order);
    let rn = r.powi(p.order as i32);
    let mean_quadrature = rn / nfact * cos_moment(p.order)?;

    let g1 = gamma_fn(0.5 * (1.0 + n))?;
    let g3 = gamma_fn(0.5 * (3.0 + n))?;
    let bracket = (2.0 * g3 + (1.0 + n) * g1) / (2.0 * PI.sqrt() * nfact * (1.0 + n) * g3);
    let mean_paper_closed_form = bracket * rn;

    let period = p.period();
    let k = (t / period).floor();
    let u = (p.modulation * (t - k * period)).clamp(0.0, PI);
    let full = weak_phase_integral(p.order, PI)?;
    let phi_weak =
        p.delta_gap / p.modulation * rn / (2.0 * nfact) * (weak_phase_integral(p.order, u)? - full * u / PI);
    Ok(WeakForms { mean_quadrature, mean_paper_closed_form, phi_weak })
}

/// `Σ_{|k|≤cutoff} J_k(z₁)J_{N+k}(z₂)e^{ikγ}`.
pub fn graf_sum(order: i32, z1: f64, z2: f64, gamma: f64, cutoff: i32) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for k in -cutoff..=cutoff {
        let term = bessel_j(k, z1)? * bessel_j(order + k, z2)?;
        acc += C64::new(0.0, f64::from(k) * gamma).exp() * term;
    }
    Ok(acc)
}

/// Argument of `z₂ − z₁e^{−iγ}`, continuous in `γ` for `0 ≤ z₁ < z₂`.
fn graf_angle(z1: f64, z2: f64, gamma: f64) -> f64 {
    (z1 * gamma.sin()).atan2(z2 - z1 * gamma.cos())
}

/// `w = √(z₁² + z₂² − 2z₁z₂cos γ)`.
pub fn graf_argument(z1: f64, z2: f64, gamma: f64) -> f64 {
    (z1 * z1 + z2 * z2 - 2.0 * z1 * z2 * gamma.cos()).max(0.0).sqrt()
}

/// `J_N(w)·((z₂ − z₁e^{−iγ})/(z₂ − z₁e^{iγ}))^{N/2}` for `0 ≤ z₁ < z₂`.
pub fn graf_closed_form(order: i32, z1: f64, z2: f64, gamma: f64) -> Result<C64> {
    if !(0.0 <= z1 && z1 < z2) {
        return Err(Error::domain("graf_closed_form", format!("need 0 <= z1 < z2, got z1 = {z1}, z2 = {z2}")));
    }
    let j = bessel_j(order, graf_argument(z1, z2, gamma))?;
    // the ratio is e^{2iθ}, so its N/2 power is e^{iNθ}
    Ok(C64::new(0.0, f64::from(order) * graf_angle(z1, z2, gamma)).exp() * j)
}

/// Exact Bessel argument and phase `(w, α)` of the resonant coupling before the
/// `z₁ → z₂` simplification.
pub fn exact_coupling_phase(p: &SystemParams, t: f64) -> (f64, f64) {
    let z1 = p.amplitude / (p.carrier + p.modulation);
    let z2 = p.amplitude / (p.carrier - p.modulation);
    let gamma = 2.0 * p.modulation * t + PI;
    let n = f64::from(p.order);
    let alpha = (p.detuning() + n * p.modulation) * t - n * PI + n * graf_angle(z1, z2, gamma);
    (graf_argument(z1, z2, gamma), alpha)
}

/// Lowest-order phase `α(t) = Δ_N t − Nπ`.
pub fn alpha_lowest(p: &SystemParams, t: f64) -> f64 {
    p.detuning() * t - f64::from(p.order) * PI
}
