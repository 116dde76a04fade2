//! Acceptance criteria. Runs as a plain binary so that every criterion prints
//! one PASS/FAIL line whether or not it holds; exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use floquet_qubit::analysis::{
    find_periodicity, quasienergy_zeros, solve_periodic_ratio, spectral_lines, trace_periodicity_check,
    weak_periodic_ratio, xconfig_spectral_lines,
};
use floquet_qubit::dynamics::{
    analytic_populations, integrate_full, integrate_reduced, sample_times, xconfig_dynamics, DEFAULT_TOL,
};
use floquet_qubit::floquet::{fourier_phase, graf_closed_form, graf_sum, mean_bessel, quasienergy, weak_forms, PhaseDecomposition};
use floquet_qubit::model::{Axis, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn zeros_criterion(order: u32, expected: [f64; 3]) -> Outcome {
    let start = Instant::now();
    let p = SystemParams::resonant(order, 1.0, 1e-3, 31.0, 0.1).unwrap();
    let zeros = quasienergy_zeros(&p, 0.0, 11.0, 1e-4).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let matched = expected.iter().all(|e| zeros.iter().any(|z| (z - e).abs() <= 0.05));
    let pass = matched && zeros.len() == expected.len() && secs < 10.0;
    outcome(pass, format!("zeros {zeros:.4?} vs {expected:?} (±0.05), {secs:.2} s"))
}

fn c1() -> Outcome {
    zeros_criterion(1, [3.13, 6.30, 9.45])
}

fn c2() -> Outcome {
    zeros_criterion(2, [3.8, 7.05, 10.2])
}

fn c3() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for order in [1u32, 2] {
        let start = Instant::now();
        let p = SystemParams::new(f64::from(order), 1e-2, 0.1, 1.0, 2.5e-4, order).unwrap();
        let times = sample_times(5.0 * PI / p.modulation, 20_000);
        let an = analytic_populations(&p, &times).unwrap();
        let full = integrate_full(&p, Axis::Z, &times, DEFAULT_TOL).unwrap().populations();
        let red = integrate_reduced(&p, &times, DEFAULT_TOL).unwrap().populations();
        let e_full = an.max_p1_diff(&full).unwrap();
        let e_red = an.max_p1_diff(&red).unwrap();
        let secs = start.elapsed().as_secs_f64();
        pass &= e_full <= 0.05 && e_red <= 1e-6 && secs < 60.0;
        parts.push(format!("N={order}: full {e_full:.3e} (<=0.05), reduced {e_red:.3e} (<=1e-6), {secs:.1} s"));
    }
    outcome(pass, parts.join("; "))
}

fn c4() -> Outcome {
    let reps = 2;
    let mut pass = true;
    let mut parts = Vec::new();
    for (gap, ratio) in [(401.0, 0.1), (31.0, 1.0)] {
        let p = SystemParams::resonant(2, 1.0, 1e-3, gap, ratio).unwrap();
        let Some(r) = find_periodicity(&p, 10, 1e-2).unwrap() else {
            pass = false;
            parts.push(format!("Δ/δ={gap}: no (m, n) with residual < 1e-2"));
            continue;
        };
        let period = f64::from(r.m) * p.period();
        let per = 8000 * r.m as usize;
        let times = sample_times(f64::from(reps + 1) * period, per * (reps as usize + 1));
        let tr = analytic_populations(&p, &times).unwrap();
        let c = trace_periodicity_check(&tr, period, reps, 1e-2).unwrap();
        pass &= c.within_tol;
        parts.push(format!(
            "Δ/δ={gap}, A/ω₀={ratio}: (m,n)=({},{}) residual {:.2e}, trace dev {:.2e} (<=1e-2)",
            r.m, r.n, r.residual, c.max_deviation
        ));
    }
    let p = SystemParams::resonant(2, 1.0, 1e-3, 34.0, 1.0).unwrap();
    let times = sample_times(f64::from(reps + 1) * p.period(), 8000 * (reps as usize + 1));
    let tr = analytic_populations(&p, &times).unwrap();
    let c = trace_periodicity_check(&tr, p.period(), reps, 1e-2).unwrap();
    pass &= !c.within_tol;
    parts.push(format!("control Δ/δ=34: trace dev {:.2e} (must exceed 1e-2)", c.max_deviation));
    outcome(pass, parts.join("; "))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pass = true;
    let mut parts = Vec::new();
    for order in [1u32, 2] {
        let p = SystemParams::resonant(order, 1.0, 1e-3, 12.0, 1.0).unwrap();
        let d = PhaseDecomposition::new(&p).unwrap();
        let mut per_err: f64 = 0.0;
        for _ in 0..1000 {
            let t = rng.gen_range(0.0..9.0) * d.period;
            per_err = per_err.max((d.periodic_part(t + d.period) - d.periodic_part(t)).abs());
        }
        let f = fourier_phase(&p, 64).unwrap();
        let mut rec_err: f64 = 0.0;
        for k in 0..200 {
            let t = (k as f64 + 0.5) / 200.0 * d.period;
            rec_err = rec_err.max((f.periodic_part(t) - d.periodic_part_exact(t).unwrap()).abs());
        }
        let g0_err = (f.coefficient(0).re - mean_bessel(&p).unwrap()).abs();
        pass &= per_err <= 1e-8 && rec_err <= 1e-6 && g0_err <= 1e-9;
        parts.push(format!(
            "N={order}: periodicity {per_err:.1e} (<=1e-8), 64-harmonic reconstruction {rec_err:.2e} (<=1e-6), G(0) {g0_err:.1e} (<=1e-9)"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let z1: f64 = rng.gen_range(0.0..5.0);
        let z2 = z1 + rng.gen_range(0.05..5.0);
        let gamma = rng.gen_range(-PI..PI);
        let order = rng.gen_range(0..=3);
        let cutoff = z2.ceil() as i32 + 40;
        let s = graf_sum(order, z1, z2, gamma, cutoff).unwrap();
        let c = graf_closed_form(order, z1, z2, gamma).unwrap();
        worst = worst.max((s - c).norm());
    }
    outcome(worst <= 1e-8, format!("max |sum − closed form| over 20 samples {worst:.2e} (<=1e-8)"))
}

fn c7() -> Outcome {
    let mut pass = true;
    let mut worst_mean: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for order in [1u32, 2] {
        for r in [0.005, 0.01, 0.02, 0.05] {
            let p = SystemParams::resonant(order, 1.0, 1e-3, 10.0, r).unwrap();
            let m = mean_bessel(&p).unwrap();
            let w = weak_forms(&p, 0.0).unwrap();
            worst_mean = worst_mean.max((m - w.mean_quadrature).abs() / m);
            for (mm, nn) in [(1, 1), (2, 1), (1, 3)] {
                let exact = solve_periodic_ratio(&p, mm, nn).unwrap();
                let weak = weak_periodic_ratio(order, r, mm, nn).unwrap();
                worst_ratio = worst_ratio.max((exact - weak).abs() / exact);
            }
        }
    }
    pass &= worst_mean <= 0.01 && worst_ratio <= 0.01;
    // the printed closed form is off by √π/2 for N = 1 and must stay so
    let p = SystemParams::resonant(1, 1.0, 1e-3, 10.0, 0.05).unwrap();
    let w = weak_forms(&p, 0.0).unwrap();
    let factor = w.mean_paper_closed_form / w.mean_quadrature;
    let documented = (factor - PI.sqrt() / 2.0).abs() < 1e-12;
    let slope_gap = (w.mean_paper_closed_form - mean_bessel(&p).unwrap()).abs() / mean_bessel(&p).unwrap();
    pass &= documented && slope_gap > 0.05;
    outcome(
        pass,
        format!(
            "mean rel err {worst_mean:.2e} (<=1%), ratio rel err {worst_ratio:.2e} (<=1%), printed bracket / quadrature = {factor:.6} (expected √π/2 = {:.6}), differs from slope by {:.1}%",
            PI.sqrt() / 2.0,
            100.0 * slope_gap
        ),
    )
}

fn c8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_reduced: f64 = 0.0;
    let mut worst_full: f64 = 0.0;
    for _ in 0..100 {
        let order = rng.gen_range(1..=2u32);
        let gap = rng.gen_range(1e-3..1e-2);
        let delta = rng.gen_range(5e-4..1e-3);
        let amp = rng.gen_range(0.0..1.0);
        let axis = if rng.gen_bool(0.5) { Axis::Z } else { Axis::X };
        let p = SystemParams::new(f64::from(order), gap, amp, 1.0, delta, order).unwrap();
        let times = sample_times(10.0 * p.period(), 200);
        let red = integrate_reduced(&p, &times, 1e-11).unwrap();
        let full = integrate_full(&p, axis, &times, 1e-13).unwrap();
        worst_reduced = worst_reduced.max(red.max_norm_drift());
        worst_full = worst_full.max(full.max_norm_drift());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_reduced <= 1e-8 && worst_full <= 1e-8,
        format!(
            "100 points, 10 periods: reduced drift {worst_reduced:.2e} (tol 1e-11), full drift {worst_full:.2e} (tol 1e-13), bound 1e-8, {secs:.1} s"
        ),
    )
}

fn c9() -> Outcome {
    let delta = 1e-3;
    let mut pass = true;
    let mut parts = Vec::new();
    for v in [0.02, 0.05, 0.1] {
        // rotating-frame coupling V corresponds to a lab amplitude 2V
        let p = SystemParams::new(0.0, 1.0, 2.0 * v, 1.0, delta, 1).unwrap();
        let times = sample_times(2.0 * PI / delta, 8000);
        let tr = integrate_full(&p, Axis::X, &times, DEFAULT_TOL).unwrap().populations();
        let err = times
            .iter()
            .zip(&tr.p2)
            .map(|(&t, &up)| (up - xconfig_dynamics(v, delta, t).unwrap().p_up).abs())
            .fold(0.0, f64::max);
        pass &= err <= 0.05;
        parts.push(format!("V={v}: {err:.3e}"));
    }
    let reference: Vec<f64> = (-10..=10).map(|n| 1.0 + f64::from(n) * delta).collect();
    let lines_ok = [0.0, 0.02, 0.05, 0.1].iter().all(|&v| xconfig_spectral_lines(1.0, delta, v, 10).unwrap() == reference);
    pass &= lines_ok;
    outcome(pass, format!("max |P_up − sin²((V/δ)sin δt)| {} (<=0.05); lines ω₀+nδ for all V: {lines_ok}", parts.join(", ")))
}

fn c10() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (order, r) in [(1u32, 0.1), (2, 1.0), (1, 5.0), (2, 9.3)] {
        let p = SystemParams::resonant(order, 1.0, 1e-3, 31.0, r).unwrap();
        let cutoff = r.ceil() as u32 + 40;
        let lines = spectral_lines(&p, 0.0, cutoff).unwrap();
        let norm: f64 = lines.iter().map(|l| l.weight * l.weight / 4.0).sum();
        let centre = lines.iter().find(|l| l.m == 0 && l.n == 0).unwrap();
        let expected = p.epsilon0 + 2.0 * quasienergy(&p).unwrap();
        let ok = (norm - 1.0).abs() <= 1e-8 && centre.frequency == expected;
        pass &= ok;
        parts.push(format!("N={order} A/ω₀={r}: Σ={norm:.12}, Ω₀₀−(ε₀+2E_N)={:.1e}", centre.frequency - expected));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 quasienergy zeros N=1", c1),
        ("2 quasienergy zeros N=2", c2),
        ("3 oracle equivalence", c3),
        ("4 periodic regime", c4),
        ("5 phase-function structure", c5),
        ("6 Graf reduction", c6),
        ("7 weak-drive consistency", c7),
        ("8 unitarity", c8),
        ("9 x configuration", c9),
        ("10 spectral catalog", c10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
