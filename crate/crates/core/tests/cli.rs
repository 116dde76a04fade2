use std::process::Command;

use floquet_qubit::cli::{fmt_real, parse_config, render, round12};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_floquet-qubit"))
}

fn run_to_file(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let status = bin().args(args).arg("--out").arg(&out).status().unwrap();
    assert!(status.success(), "{args:?}");
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn zeros_command_lists_first_order_zeros() {
    let text = run_to_file(&["zeros", "--order", "1", "--ratio_min", "0", "--ratio_max", "11"]);
    let zeros: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(zeros.len(), 3);
    for (z, e) in zeros.iter().zip([3.13, 6.30, 9.45]) {
        assert!((z - e).abs() <= 0.05, "{z}");
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    for args in [
        &["sweep", "--ratio_steps", "40", "--order", "2"][..],
        &["dynamics", "--samples", "300", "--amplitude", "1", "--scaled_time", "true"][..],
        &["spectrum", "--amplitude", "0.7"][..],
        &["periodicity", "--max_index", "4", "--format", "json"][..],
    ] {
        assert_eq!(run_to_file(args), run_to_file(args));
    }
}

#[test]
fn sweep_workers_do_not_change_output() {
    let one = run_to_file(&["sweep", "--ratio_steps", "64", "--workers", "1"]);
    let four = run_to_file(&["sweep", "--ratio_steps", "64", "--workers", "4"]);
    assert_eq!(one, four);
    assert!(one.starts_with("ratio,quasienergy_1\n"));
}

#[test]
fn csv_round_trips_at_printed_precision() {
    let cfg = parse_config("command = dynamics\namplitude = 1.3\norder = 2\nsamples = 500").unwrap();
    let text = render(&cfg).unwrap();
    for line in text.lines().skip(1) {
        for field in line.split(',') {
            let x: f64 = field.parse().unwrap();
            assert_eq!(round12(x), x);
            assert_eq!(fmt_real(x), field);
        }
    }
}

#[test]
fn spectrum_json_shape() {
    let text = run_to_file(&["spectrum", "--amplitude", "0.5"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let arr = v.as_array().unwrap();
    assert!(!arr.is_empty());
    for obj in arr {
        let o = obj.as_object().unwrap();
        let mut keys: Vec<&str> = o.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["frequency", "m", "n", "weight"]);
    }
}

#[test]
fn oracle_summary_line() {
    let text = run_to_file(&["oracle", "--order", "2", "--amplitude", "1", "--samples", "2000"]);
    assert!(text.starts_with("t,p1_analytic,p1_full,abs_err\n"));
    let last = text.lines().last().unwrap();
    let v: f64 = last.strip_prefix("# max_abs_err = ").unwrap().parse().unwrap();
    assert!(v <= 0.05, "{v}");
}

#[test]
fn bad_input_exits_nonzero_with_key() {
    let out = bin().args(["sweep", "--carrier", "-1"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("carrier"));
    let out = bin().args(["dynamics", "--delta_gap", "0.01", "--epsilon0", "1.5"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn stdout_when_no_out_path() {
    let out = bin().args(["zeros", "--ratio_max", "4"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}
