//! Derived quantities: zeros of the quasienergy as a function of drive
//! strength, conditions for periodic population dynamics, a trace-level
//! periodicity check, and the probe-absorption line catalog.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{xconfig_dynamics, PopulationTrace};
use crate::error::{Error, Result};
use crate::floquet::{cos_moment, mean_bessel, mean_bessel_derivative, quasienergy};
use crate::model::SystemParams;
use crate::specfun::bessel_j;

/// Grid step of the zero scan in `A/ω₀`.
pub const ZERO_SCAN_STEP: f64 = 0.02;
/// A local minimum of `|J̄_N|` counts as a zero below this value.
pub const TANGENT_ZERO_LEVEL: f64 = 1e-8;
/// `residual` below which a pair `(m, n)` is reported periodic.
pub const PERIODICITY_TOL: f64 = 1e-3;
pub const DEFAULT_WEIGHT_THRESHOLD: f64 = 1e-8;

fn at_ratio(p: &SystemParams, r: f64) -> SystemParams {
    p.with_amplitude(r * p.carrier)
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut f_lo = f(lo)?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Zeros of `A/ω₀ ↦ E_N` in `[ratio_min, ratio_max]`, located to `tol`.
///
/// The average `J̄_N` does not change sign at most of its zeros (it touches
/// zero from above), so besides sign changes the scan also looks for local
/// minima of `J̄_N` (sign change of `dJ̄_N/dr` from − to +) and accepts those
/// whose value is below [`TANGENT_ZERO_LEVEL`].  The trivial zero at `A = 0`
/// is not reported.
pub fn quasienergy_zeros(p_base: &SystemParams, ratio_min: f64, ratio_max: f64, tol: f64) -> Result<Vec<f64>> {
    if !(ratio_min >= 0.0) || !(ratio_max >= ratio_min) {
        return Err(Error::Precondition(format!("bad ratio range [{ratio_min}, {ratio_max}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
    }
    let cells = ((ratio_max - ratio_min) / ZERO_SCAN_STEP).ceil().max(1.0) as usize;
    let grid: Vec<f64> =
        (0..=cells).map(|k| (ratio_min + k as f64 * ZERO_SCAN_STEP).min(ratio_max)).collect();
    let scan: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&r| {
            let q = at_ratio(p_base, r);
            Ok((mean_bessel(&q)?, mean_bessel_derivative(&q)?))
        })
        .collect::<Result<_>>()?;

    let value = |r: f64| mean_bessel(&at_ratio(p_base, r));
    let slope = |r: f64| mean_bessel_derivative(&at_ratio(p_base, r));
    let mut zeros = Vec::new();
    for k in 0..cells {
        let (a, b) = (grid[k], grid[k + 1]);
        if b <= a {
            continue;
        }
        let ((va, da), (vb, db)) = (scan[k], scan[k + 1]);
        if a > 0.0 && va == 0.0 {
            zeros.push(a);
        } else if va * vb < 0.0 {
            zeros.push(bisect(a, b, tol, value)?);
        } else if da < 0.0 && db > 0.0 {
            let r = bisect(a, b, tol, slope)?;
            if value(r)?.abs() < TANGENT_ZERO_LEVEL {
                zeros.push(r);
            }
        }
    }
    zeros.retain(|&r| r > 0.0);
    zeros.dedup_by(|x, y| (*x - *y).abs() < 2.0 * tol);
    Ok(zeros)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicityResult {
    pub m: u32,
    pub n: u32,
    /// `|m|E_N| − nδ| / δ`.
    pub residual: f64,
    pub is_periodic: bool,
}

fn residual_from(e_over_delta: f64, m: u32, n: u32) -> PeriodicityResult {
    let scaled = f64::from(m) * e_over_delta.abs();
    let residual = (scaled - f64::from(n)).abs();
    // a vanishing quasienergy leaves P₁ periodic in every window
    let is_periodic = residual < PERIODICITY_TOL || scaled < PERIODICITY_TOL;
    PeriodicityResult { m, n, residual, is_periodic }
}

/// Balance of `m|E_N| = nδ`: over `m` modulation periods `γ_N` then advances
/// by exactly `nπ`.
pub fn periodicity_residual(p: &SystemParams, m: u32, n: u32) -> Result<PeriodicityResult> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and n must be positive".into()));
    }
    Ok(residual_from(quasienergy(p)? / p.modulation, m, n))
}

/// Smallest `m` (then smallest residual) with `residual < tol` over
/// `1 ≤ m, n ≤ max_index`.
pub fn find_periodicity(p: &SystemParams, max_index: u32, tol: f64) -> Result<Option<PeriodicityResult>> {
    let e = quasienergy(p)? / p.modulation;
    for m in 1..=max_index {
        let best = (1..=max_index)
            .map(|n| residual_from(e, m, n))
            .filter(|r| r.residual < tol)
            .min_by(|a, b| a.residual.total_cmp(&b.residual));
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

/// `δ/Δ` that makes `(m, n)` an exact periodicity pair at the drive strength
/// of `p_base`: `δ/Δ = (m/n)·J̄_N/2`.  Zero drive gives 0, i.e. no finite
/// solution.
pub fn solve_periodic_ratio(p_base: &SystemParams, m: u32, n: u32) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and n must be positive".into()));
    }
    Ok(f64::from(m) / f64::from(n) * 0.5 * mean_bessel(p_base)?.abs())
}

/// Weak-drive version of [`solve_periodic_ratio`] with
/// `J̄_N ≈ (A/ω₀)^N/N! · Γ((N+1)/2)/(√π Γ(N/2+1))`.
pub fn weak_periodic_ratio(order: u32, drive_ratio: f64, m: u32, n: u32) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and n must be positive".into()));
    }
    let fact: f64 = (1..=order).map(f64::from).product();
    let mean = drive_ratio.powi(order as i32) / fact * cos_moment(order)?;
    Ok(f64::from(m) / f64::from(n) * 0.5 * mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCheck {
    /// `max |P₁(t + kτ) − P₁(t)|` over samples and `k = 1..=reps`.
    pub max_deviation: f64,
    pub within_tol: bool,
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    let i = times.partition_point(|&x| x <= t);
    if i == 0 {
        return values[0];
    }
    if i >= times.len() {
        return values[times.len() - 1];
    }
    let (t0, t1) = (times[i - 1], times[i]);
    let s = (t - t0) / (t1 - t0);
    values[i - 1] + s * (values[i] - values[i - 1])
}

/// Compare a population trace with copies of itself shifted by
/// `k·period`, `k = 1..=reps`, using linear interpolation.
pub fn trace_periodicity_check(trace: &PopulationTrace, period: f64, reps: u32, tol: f64) -> Result<TraceCheck> {
    if trace.times.len() < 2 || reps == 0 || !(period > 0.0) {
        return Err(Error::Precondition("need a sampled trace, reps >= 1 and period > 0".into()));
    }
    let t0 = trace.times[0];
    let t_end = trace.times[trace.times.len() - 1];
    let needed = f64::from(reps + 1) * period;
    // the last sample may miss the nominal end by rounding
    if t_end - t0 < needed * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!("trace spans {} but {} is needed", t_end - t0, needed)));
    }
    let shift_max = f64::from(reps) * period;
    let mut worst: f64 = 0.0;
    for (&t, &v) in trace.times.iter().zip(&trace.p1) {
        if t + shift_max > t_end {
            break;
        }
        for k in 1..=reps {
            let w = interpolate(&trace.times, &trace.p1, t + f64::from(k) * period);
            worst = worst.max((w - v).abs());
        }
    }
    Ok(TraceCheck { max_deviation: worst, within_tol: worst <= tol })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Absorption,
    Amplification,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralLine {
    pub m: i32,
    pub n: i32,
    pub frequency: f64,
    pub weight: f64,
    pub kind: LineKind,
}

/// `ceil(A/ω₀) + 20`.
pub fn default_index_cutoff(p: &SystemParams) -> u32 {
    p.drive_ratio().ceil() as u32 + 20
}

/// Probe lines `Ω_{m,n} = ε₀ + mω₀ + 2E_N + (2n − m)δ` with weights
/// `2|J_n(A/ω₀)J_{m−n}(A/ω₀)|`, for `|m|, |n| ≤ index_cutoff`, keeping
/// weights at or above `weight_threshold`.  Sorted by `m`, then `n`.
pub fn spectral_lines(p: &SystemParams, weight_threshold: f64, index_cutoff: u32) -> Result<Vec<SpectralLine>> {
    let c = i32::try_from(index_cutoff).map_err(|_| Error::Precondition("index cutoff too large".into()))?;
    let r = p.drive_ratio();
    let shift = 2.0 * quasienergy(p)?;
    let bessel: Vec<f64> = (-2 * c..=2 * c).map(|k| bessel_j(k, r)).collect::<Result<_>>()?;
    let j = |k: i32| bessel[(k + 2 * c) as usize];
    let mut lines = Vec::new();
    for m in -c..=c {
        for n in -c..=c {
            let weight = 2.0 * (j(n) * j(m - n)).abs();
            if weight < weight_threshold {
                continue;
            }
            let frequency = p.epsilon0
                + f64::from(m) * p.carrier
                + shift
                + f64::from(2 * n - m) * p.modulation;
            let kind = if frequency < 0.0 { LineKind::Amplification } else { LineKind::Absorption };
            lines.push(SpectralLine { m, n, frequency, weight, kind });
        }
    }
    Ok(lines)
}

/// x-configuration lines `ω₀ + (E⁺ − E⁻) + nδ` for `|n| ≤ n_range`; the
/// quasienergies vanish for every coupling `v`, so no Stark shift appears.
pub fn xconfig_spectral_lines(omega0: f64, delta_mod: f64, v: f64, n_range: u32) -> Result<Vec<f64>> {
    let e = xconfig_dynamics(v, delta_mod, 0.0)?.quasienergy;
    let n = i64::from(n_range);
    Ok((-n..=n).map(|k| omega0 + 2.0 * e + k as f64 * delta_mod).collect())
}
