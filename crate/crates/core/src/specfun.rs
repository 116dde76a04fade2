//! Special functions used by the resonance analytics: integer-order Bessel
//! functions of the first kind, the Gamma function for positive arguments, and
//! the Gauss hypergeometric function `2F1(1/2, (1+N)/2; (3+N)/2; z)` that shows
//! up in the weak-drive phase function.
//!
//! All functions are pure and allocation free.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest |x| accepted by [`bessel_j`].
pub const BESSEL_MAX_ARG: f64 = 1.0e3;
/// Largest |order| accepted by [`bessel_j`].
pub const BESSEL_MAX_ORDER: i32 = 200;

/// Bessel function of the first kind `J_n(x)` for integer `n`.
///
/// Small arguments (relative to the order) are summed from the ascending
/// series, large arguments with small order use the Hankel asymptotic
/// expansion, and everything else goes through Miller's backward recurrence
/// normalised by `J_0 + 2 Σ J_2k = 1`.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        return Err(Error::domain("bessel_j", format!("|x| = {x} exceeds {BESSEL_MAX_ARG}")));
    }
    if order.abs() > BESSEL_MAX_ORDER {
        return Err(Error::domain(
            "bessel_j",
            format!("|order| = {} exceeds {BESSEL_MAX_ORDER}", order.abs()),
        ));
    }
    Ok(bessel_j_unchecked(order, x))
}

/// [`bessel_j`] without the domain checks, for hot loops whose arguments were
/// validated up front.
pub(crate) fn bessel_j_unchecked(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs();
    // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x)
    let mut flips = 0;
    if order < 0 {
        flips += n;
    }
    if x < 0.0 {
        flips += n;
    }
    let sign = if flips % 2 == 1 { -1.0 } else { 1.0 };
    sign * bessel_j_nonneg(n, x.abs())
}

fn bessel_j_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = f64::from(n);
    if x < 1.0 || 0.25 * x * x < 0.5 * (nf + 1.0) {
        return ascending_series(n, x);
    }
    if x > 50.0 {
        if let Some(v) = hankel_asymptotic(n, x) {
            return v;
        }
    }
    miller(n, x)
}

// Terms shrink monotonically in the region where this is called, so the
// alternating sum loses no precision to cancellation.
fn ascending_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / f64::from(k);
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let nf = f64::from(n);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = f64::from(k);
        term *= q / (kf * (nf + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn hankel_asymptotic(n: u32, x: f64) -> Option<f64> {
    let mu = 4.0 * f64::from(n) * f64::from(n);
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..200 {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * eight_x);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        // a_k / x^k alternates between the P and Q series with signs (+,-,-,+,+,-,...)
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let chi = x - (0.5 * f64::from(n) + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

fn miller(n: u32, x: f64) -> f64 {
    const BIG: f64 = 1e250;
    let top = f64::from(n).max(x);
    let mut start = (top + 30.0 + (50.0 * top).sqrt()) as u32;
    start += start % 2;
    let two_over_x = 2.0 / x;
    let mut j_next = 0.0; // J_{k+1}
    let mut j_cur = 1e-300; // J_k
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let j_prev = f64::from(k) * two_over_x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > BIG {
            j_cur /= BIG;
            j_next /= BIG;
            norm /= BIG;
            result /= BIG;
        }
        // j_cur now holds the unnormalised J_{k-1}
        let idx = k - 1;
        if idx == n {
            result = j_cur;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * j_cur;
        }
    }
    norm += j_cur;
    result / norm
}

/// Gamma function for positive real arguments (Lanczos, g = 7, nine terms).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("gamma_fn", format!("argument {x} is not positive")));
    }
    let v = lanczos_gamma(x);
    if !v.is_finite() {
        return Err(Error::domain("gamma_fn", format!("Gamma({x}) overflows")));
    }
    Ok(v)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so Gamma(x) stays finite up to x ~ 171
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * a
}

/// `2F1(1/2, (1+N)/2; (3+N)/2; z)` for `0 <= z <= 1` and `1 <= N <= 10`.
///
/// Below `z = 1/2` the Gauss series is summed directly. Above it the series
/// converges too slowly (the terms only fall off like `k^{-3/2}` at `z = 1`), so
/// the function is continued with the `z -> 1 - z` connection formula, which is
/// valid here because `c - a - b = 1/2` is not an integer.
pub fn hyp2f1_reduced(order: u32, z: f64) -> Result<f64> {
    if order == 0 || order > 10 {
        return Err(Error::domain("hyp2f1_reduced", format!("order {order} outside 1..=10")));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain("hyp2f1_reduced", format!("z = {z} outside [0, 1]")));
    }
    let nf = f64::from(order);
    let a = 0.5;
    let b = 0.5 * (1.0 + nf);
    let c = 0.5 * (3.0 + nf);
    if z <= 0.5 {
        return Ok(gauss_series(a, b, c, z));
    }
    let w = 1.0 - z;
    let gc = gamma_fn(c)?;
    // Gamma(1/2) = sqrt(pi), Gamma(-1/2) = -2 sqrt(pi)
    let sqrt_pi = PI.sqrt();
    let first = gc * sqrt_pi / (gamma_fn(c - a)? * gamma_fn(c - b)?);
    let second = gc * (-2.0 * sqrt_pi) / (gamma_fn(a)? * gamma_fn(b)?);
    Ok(first * gauss_series(a, b, 0.5, w) + second * w.sqrt() * gauss_series(c - a, c - b, 1.5, w))
}

fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..10_000 {
        let kf = f64::from(k);
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}
