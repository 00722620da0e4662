use std::f64::consts::PI;
use std::process::{Command, Output};

fn hgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgeo"))
        .args(args)
        .env_remove("HGEO_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_number(doc: &str, key: &str) -> f64 {
    let needle = format!("\"{key}\": ");
    let start = doc.find(&needle).unwrap_or_else(|| panic!("no key {key}")) + needle.len();
    let end = doc[start..].find([',', '\n']).unwrap() + start;
    doc[start..end].parse().unwrap()
}

fn csv_rows(doc: &str) -> Vec<Vec<f64>> {
    doc.lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
#[allow(clippy::approx_constant)]
fn profile_rows() {
    let out = hgeo(&["profile", "--n", "1", "--R", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# Q=4,R=1.0000000000000000e0,lambda=-2.0000000000000000e0\nr,u,du\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - 0.39269908).abs() < 1e-8);
    assert!((rows[0][1] - PI / 8.0).abs() < 1e-15);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.0);
    assert_eq!(last[1], 0.0);
}

#[test]
fn profile_from_volume() {
    let out = hgeo(&["profile", "--n", "1", "--V", "1.8505508"]);
    assert!(out.status.success());
    let head = stdout(&out).lines().next().unwrap().to_string();
    let r: f64 = head
        .split(",R=")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((r - 1.0).abs() < 1e-7, "{head}");
}

#[test]
fn constants_values() {
    let text = stdout(&hgeo(&["constants", "--n", "1", "--R", "1"]));
    assert!((json_number(&text, "C_Q") - 0.32152).abs() < 1e-5);
    assert_eq!(json_number(&text, "h_curv"), 2.0);
    assert!((json_number(&text, "volume_half") - 0.92527541).abs() < 1e-8);
    assert!((json_number(&text, "perimeter_half") - 2.46740110).abs() < 1e-8);

    let text = stdout(&hgeo(&["constants", "--n", "2"]));
    let (v, p, c) = (
        json_number(&text, "volume_half"),
        json_number(&text, "perimeter_half"),
        json_number(&text, "C_Q"),
    );
    assert_eq!(json_number(&text, "Q"), 6.0);
    assert!(((2.0 * v).powf(5.0 / 6.0) / (2.0 * p) / c - 1.0).abs() < 1e-12);
}

#[test]
fn check_passes_and_is_reproducible() {
    let a = hgeo(&["check", "--seed", "42"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let b = hgeo(&["check", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"passed\": true"));
}

#[test]
fn perturbed_reference_fails() {
    let out = hgeo(&["check", "--perturb", "1e-3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reference_constants"));
}

#[test]
fn usage_errors() {
    assert_eq!(hgeo(&["profile", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        hgeo(&["profile", "--R", "1", "--V", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(hgeo(&["solve", "--grid", "32"]).status.code(), Some(2));
    assert_eq!(hgeo(&["search"]).status.code(), Some(2));
    assert_eq!(hgeo(&["profile", "--R", "-1"]).status.code(), Some(2));
}

#[test]
fn solver_exit_codes() {
    let out = hgeo(&["solve", "--grid", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let worst = rows.iter().map(|r| (r[1] - r[2]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-2, "{worst}");
    assert_eq!(
        hgeo(&["solve", "--grid", "128", "--max-iter", "1"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("hgeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ode.csv");
    let out = hgeo(&["ode", "--R", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        hgeo(&["ode", "--R", "2"]).stdout
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identical_across_thread_counts() {
    let run = |threads: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_hgeo"))
            .args(args)
            .env("HGEO_THREADS", threads)
            .output()
            .unwrap()
    };
    for args in [
        &["measure", "--grid", "200"][..],
        &["check", "--seed", "7"],
        &[
            "solve", "--mode", "planar", "--grid", "64", "--format", "json",
        ],
    ] {
        let one = run("1", args);
        let two = run("2", args);
        assert!(one.status.success(), "{args:?}");
        assert_eq!(one.stdout, two.stdout, "{args:?}");
    }
    assert_eq!(run("zero", &["constants"]).status.code(), Some(2));
}

#[test]
fn flow_and_search() {
    let text = stdout(&hgeo(&[
        "flow", "--format", "json", "--x0", "0.3", "--y0", "-0.4",
    ]));
    assert!(json_number(&text, "radius_law_error") < 1e-8);
    let text = stdout(&hgeo(&["search", "--V", "1.8505508"]));
    assert!((json_number(&text, "radius") - 1.0).abs() < 1e-7);
    assert!((json_number(&text, "lam") + 2.0).abs() < 1e-6);
}
