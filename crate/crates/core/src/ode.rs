//! Dormand–Prince 5(4) integrator with PI step-size control and the
//! fourth-order continuous extension for dense output, specialised to the
//! two-component complex state used by every evolution in this crate.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type State = [C64; 2];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step size; `f64::INFINITY` for none.
    pub h_max: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol * 1e-3, h_max: f64::INFINITY, max_steps: 50_000_000 }
    }

    pub fn h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn comb(y: &State, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * *c;
        out[1] += k[1] * *c;
    }
    out
}

/// Integrate `dy/dt = rhs(t, y)` from `(t0, y0)` and return the state at every
/// entry of `times` (ascending, all `>= t0`).
pub fn integrate<F>(mut rhs: F, t0: f64, y0: State, times: &[f64], opts: &OdeOptions) -> Result<(Vec<State>, OdeStats)>
where
    F: FnMut(f64, &State) -> State,
{
    if let Some(w) = times.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::Precondition(format!("sample times not ascending at {}", w[1])));
    }
    if let Some(&first) = times.first() {
        if first < t0 {
            return Err(Error::Precondition(format!("sample time {first} precedes t0 = {t0}")));
        }
    }
    let mut out = Vec::with_capacity(times.len());
    let mut next = 0;
    while next < times.len() && times[next] == t0 {
        out.push(y0);
        next += 1;
    }
    let mut stats = OdeStats::default();
    let t_end = match times.last() {
        Some(&t) if t > t0 => t,
        _ => return Ok((out, stats)),
    };

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    stats.evaluations += 1;
    let mut h = initial_step(&y, &k1, t_end - t0, opts);
    let mut err_old: f64 = 1e-4;
    let mut rejected_last = false;

    while next < times.len() {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::Integration { t, detail: format!("exceeded {} steps", opts.max_steps) });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::Integration { t, detail: format!("step size underflow (h = {h:e})") });
        }

        let k2 = rhs(t + C2 * h, &comb(&y, &[(h * A21, &k1)]));
        let k3 = rhs(t + C3 * h, &comb(&y, &[(h * A31, &k1), (h * A32, &k2)]));
        let k4 = rhs(t + C4 * h, &comb(&y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &comb(&y, &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &comb(&y, &[(h * A61, &k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)]),
        );
        let y_new = comb(&y, &[(h * A71, &k1), (h * A73, &k3), (h * A74, &k4), (h * A75, &k5), (h * A76, &k6)]);
        let k7 = rhs(t + h, &y_new);
        stats.evaluations += 6;

        let e = comb(
            &[C64::new(0.0, 0.0); 2],
            &[(h * E1, &k1), (h * E3, &k3), (h * E4, &k4), (h * E5, &k5), (h * E6, &k6), (h * E7, &k7)],
        );
        let err = error_norm(&e, &y, &y_new, opts);

        if err <= 1.0 {
            stats.accepted += 1;
            let t_new = if last { t_end } else { t + h };
            // dense output coefficients
            if next < times.len() && times[next] <= t_new {
                let r2 = comb(&y_new, &[(-1.0, &y)]);
                let hk1 = k1.map(|z| z * h);
                let r3 = comb(&hk1, &[(-1.0, &r2)]);
                let r4 = comb(&r2, &[(-h, &k7), (-1.0, &r3)]);
                let r5 = comb(
                    &[C64::new(0.0, 0.0); 2],
                    &[(h * D1, &k1), (h * D3, &k3), (h * D4, &k4), (h * D5, &k5), (h * D6, &k6), (h * D7, &k7)],
                );
                while next < times.len() && times[next] <= t_new {
                    let theta = (times[next] - t) / h;
                    let th1 = 1.0 - theta;
                    let mut s = [C64::new(0.0, 0.0); 2];
                    for i in 0..2 {
                        s[i] = y[i] + (r2[i] + (r3[i] + (r4[i] + r5[i] * th1) * theta) * th1) * theta;
                    }
                    out.push(s);
                    next += 1;
                }
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            let mut fac = 0.9 * err.max(1e-10).powf(-0.17) * err_old.powf(0.04);
            fac = fac.clamp(0.2, 10.0);
            if rejected_last {
                fac = fac.min(1.0);
            }
            err_old = err.max(1e-4);
            rejected_last = false;
            h = (h * fac).min(opts.h_max);
        } else {
            stats.rejected += 1;
            rejected_last = true;
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            h *= fac;
        }
    }
    Ok((out, stats))
}

fn error_norm(e: &State, y: &State, y_new: &State, opts: &OdeOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..2 {
        for (ei, yi, yn) in [(e[i].re, y[i].re, y_new[i].re), (e[i].im, y[i].im, y_new[i].im)] {
            let sc = opts.atol + opts.rtol * yi.abs().max(yn.abs());
            acc += (ei / sc).powi(2);
        }
    }
    (acc / 4.0).sqrt()
}

fn initial_step(y: &State, f0: &State, span: f64, opts: &OdeOptions) -> f64 {
    let scale = |v: &State| {
        let mut acc = 0.0;
        for i in 0..2 {
            let sc_re = opts.atol + opts.rtol * y[i].re.abs();
            let sc_im = opts.atol + opts.rtol * y[i].im.abs();
            acc += (v[i].re / sc_re).powi(2) + (v[i].im / sc_im).powi(2);
        }
        (acc / 4.0).sqrt()
    };
    let d0 = scale(y);
    let d1 = scale(f0);
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).min(opts.h_max)
}
