//! System parameters, drive field, dynamic phase and the raw Hamiltonians of
//! the two coupling configurations.
//!
//! Units: ħ = 1, every energy and frequency is expressed in one common angular
//! frequency unit chosen by the caller.
//!
//! Basis ordering for all matrices and amplitude pairs is `(|↓⟩, |↑⟩)`, with
//! `|↓⟩` the lower diabatic level for `ε₀ > 0`.  The Pauli matrices are the
//! usual `σ_z = diag(1, -1)`, `σ_x = [[0, 1], [1, 0]]` in that ordering, so the
//! bare qubit Hamiltonian `-(ε₀/2)σ_z` reads `diag(-ε₀/2, +ε₀/2)`.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The immutable input record shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Qubit bias ε₀.
    pub epsilon0: f64,
    /// Tunneling amplitude Δ.
    pub delta_gap: f64,
    /// Drive amplitude A.
    pub amplitude: f64,
    /// Carrier frequency ω₀.
    pub carrier: f64,
    /// Modulation frequency δ.
    pub modulation: f64,
    /// Resonance order N.
    pub order: u32,
}

impl SystemParams {
    /// Build and validate a parameter record.
    pub fn new(epsilon0: f64, delta_gap: f64, amplitude: f64, carrier: f64, modulation: f64, order: u32) -> Result<Self> {
        let p = SystemParams { epsilon0, delta_gap, amplitude, carrier, modulation, order };
        p.validate()?;
        Ok(p)
    }

    /// Exactly resonant parameters (`ε₀ = N ω₀`) from the dimensionless
    /// ratios used throughout the figures: `Δ/δ` and `A/ω₀`.
    pub fn resonant(order: u32, carrier: f64, modulation: f64, gap_over_modulation: f64, drive_ratio: f64) -> Result<Self> {
        SystemParams::new(
            f64::from(order) * carrier,
            gap_over_modulation * modulation,
            drive_ratio * carrier,
            carrier,
            modulation,
            order,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("epsilon0", self.epsilon0),
            ("delta_gap", self.delta_gap),
            ("amplitude", self.amplitude),
            ("carrier", self.carrier),
            ("modulation", self.modulation),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParam { key, detail: format!("{v} is not finite") });
            }
        }
        if self.carrier <= 0.0 {
            return Err(Error::InvalidParam { key: "carrier", detail: "must be positive".into() });
        }
        if self.modulation <= 0.0 {
            return Err(Error::InvalidParam { key: "modulation", detail: "must be positive".into() });
        }
        if self.modulation >= self.carrier {
            return Err(Error::InvalidParam { key: "modulation", detail: "must be below the carrier frequency".into() });
        }
        if self.amplitude < 0.0 {
            return Err(Error::InvalidParam { key: "amplitude", detail: "must be non-negative".into() });
        }
        if self.order == 0 {
            return Err(Error::InvalidParam { key: "order", detail: "must be at least 1".into() });
        }
        Ok(())
    }

    /// Detuning from the N-th order resonance, `Δ_N = ε₀ − N ω₀`.
    pub fn detuning(&self) -> f64 {
        self.epsilon0 - f64::from(self.order) * self.carrier
    }

    /// Dimensionless drive strength `A/ω₀`.
    pub fn drive_ratio(&self) -> f64 {
        self.amplitude / self.carrier
    }

    /// Period of the effective coupling envelope `|cos(δt)|`, `T = π/δ`.
    pub fn period(&self) -> f64 {
        std::f64::consts::PI / self.modulation
    }

    /// `(−1)^N`.
    pub fn order_sign(&self) -> f64 {
        if self.order % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_delta_gap(mut self, delta_gap: f64) -> Self {
        self.delta_gap = delta_gap;
        self
    }
}

/// Which Pauli component carries the time-dependent field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Field drives the level splitting: `−½(ε₀+f)σ_z − ½Δσ_x`.
    Z,
    /// Field drives transitions: `−½Δσ_z − ½(ε₀+f)σ_x`.
    X,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Z => write!(f, "z"),
            Axis::X => write!(f, "x"),
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" => Ok(Axis::Z),
            "x" => Ok(Axis::X),
            other => Err(format!("unknown axis '{other}' (expected z or x)")),
        }
    }
}

/// 2×2 complex matrix in the `(|↓⟩, |↑⟩)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2(pub [[C64; 2]; 2]);

impl HermitianMatrix2 {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        HermitianMatrix2([[one, zero], [zero, one]])
    }

    pub fn sigma_x() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        HermitianMatrix2([[zero, one], [one, zero]])
    }

    pub fn sigma_y() -> Self {
        let zero = C64::new(0.0, 0.0);
        HermitianMatrix2([[zero, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), zero]])
    }

    pub fn sigma_z() -> Self {
        let zero = C64::new(0.0, 0.0);
        HermitianMatrix2([[C64::new(1.0, 0.0), zero], [zero, C64::new(-1.0, 0.0)]])
    }

    /// `a·σ_z + b·σ_x` with real coefficients.
    pub fn from_zx(a: f64, b: f64) -> Self {
        HermitianMatrix2([[C64::new(a, 0.0), C64::new(b, 0.0)], [C64::new(b, 0.0), C64::new(-a, 0.0)]])
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        HermitianMatrix2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.0;
        let b = &other.0;
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        HermitianMatrix2(out)
    }

    pub fn apply(&self, v: &[C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

/// `exp(−i θ σ_y / 2)`: rotation of the Bloch sphere by `θ` about the y axis.
pub fn y_rotation(theta: f64) -> HermitianMatrix2 {
    let (s, c) = (0.5 * theta).sin_cos();
    let re = |x: f64| C64::new(x, 0.0);
    HermitianMatrix2([[re(c), re(-s)], [re(s), re(c)]])
}

/// Bichromatic drive in its product form, `f(t) = 2A cos(ω₀t) cos(δt)`.
pub fn drive_field(p: &SystemParams, t: f64) -> f64 {
    2.0 * p.amplitude * (p.carrier * t).cos() * (p.modulation * t).cos()
}

/// The same drive written as two equal-amplitude spectral components at
/// `ω₀ ∓ δ`.
pub fn drive_field_components(p: &SystemParams, t: f64) -> f64 {
    let w1 = p.carrier - p.modulation;
    let w2 = p.carrier + p.modulation;
    p.amplitude * ((w1 * t).cos() + (w2 * t).cos())
}

/// Dynamic phase `φ(t) = ½[ε₀t + (A/ω₁)sin(ω₁t) + (A/ω₂)sin(ω₂t)]` of the
/// transformation `U(t) = exp(iφ(t)σ_z)` generated by the diagonal part of
/// the z-configuration Hamiltonian.
pub fn phase_phi(p: &SystemParams, t: f64) -> f64 {
    let w1 = p.carrier - p.modulation;
    let w2 = p.carrier + p.modulation;
    0.5 * (p.epsilon0 * t + p.amplitude / w1 * (w1 * t).sin() + p.amplitude / w2 * (w2 * t).sin())
}

/// Instantaneous Hamiltonian for the chosen coupling axis.
pub fn hamiltonian(p: &SystemParams, axis: Axis, t: f64) -> HermitianMatrix2 {
    let field = -0.5 * (p.epsilon0 + drive_field(p, t));
    let gap = -0.5 * p.delta_gap;
    match axis {
        Axis::Z => HermitianMatrix2::from_zx(field, gap),
        Axis::X => HermitianMatrix2::from_zx(gap, field),
    }
}

/// Detuning plus validity warnings for the resonance approximation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub detuning: f64,
    pub warnings: Vec<String>,
}

impl RegimeReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Largest `δ/ω₀` before a warning is raised.
pub const MODULATION_RATIO_LIMIT: f64 = 0.05;
/// Largest `|Δ_N|/ε₀` treated as exact resonance.
pub const DETUNING_RATIO_LIMIT: f64 = 0.01;
/// Largest `Δ/ε₀` before a warning is raised.
pub const GAP_RATIO_LIMIT: f64 = 0.1;

pub fn validate_regime(p: &SystemParams) -> RegimeReport {
    let detuning = p.detuning();
    let mut warnings = Vec::new();
    let mod_ratio = p.modulation / p.carrier;
    if mod_ratio > MODULATION_RATIO_LIMIT {
        warnings.push(format!("modulation/carrier = {mod_ratio:.4} exceeds {MODULATION_RATIO_LIMIT}"));
    }
    let eps = p.epsilon0.abs();
    if eps == 0.0 || detuning.abs() / eps > DETUNING_RATIO_LIMIT {
        warnings.push(format!("|detuning|/epsilon0 = {:.4} exceeds {DETUNING_RATIO_LIMIT}", detuning.abs() / eps));
    }
    if eps == 0.0 || p.delta_gap.abs() / eps > GAP_RATIO_LIMIT {
        warnings.push(format!("delta_gap/epsilon0 = {:.4} exceeds {GAP_RATIO_LIMIT}", p.delta_gap.abs() / eps));
    }
    RegimeReport { detuning, warnings }
}

/// `|Δ_N|/ε₀` is within the exact-resonance threshold.
pub fn is_resonant(p: &SystemParams) -> bool {
    p.epsilon0 != 0.0 && p.detuning().abs() / p.epsilon0.abs() <= DETUNING_RATIO_LIMIT
}

/// Charge-qubit control fields: `B_x = 2E_J⁰ cos(πΦ_x/Φ₀)` from the flux
/// through the SQUID loop and `B_z = 4E_C(1 − C_gV_g/e)` from the gate charge.
///
/// `cg` is accepted for completeness; the gate charge `C_gV_g/e` already
/// includes it.
pub fn circuit_controls(ej0: f64, ec: f64, _cg: f64, flux_ratio: f64, gate_charge: f64) -> (f64, f64) {
    let bx = 2.0 * ej0 * (std::f64::consts::PI * flux_ratio).cos();
    let bz = 4.0 * ec * (1.0 - gate_charge);
    (bx, bz)
}
