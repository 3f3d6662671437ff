use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bvp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvp")).args(args).output().unwrap()
}

fn problem(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn analyze_scalar_first_order() {
    let o = bvp(&["analyze", &problem("first_order_scalar.json"), "--grid", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(value(&text, "rank"), "1");
    assert_eq!(value(&text, "index"), "0");
    assert_eq!(value(&text, "invertible"), "true");
    assert_eq!(value(&text, "grid_steps"), "100");
    // M = 1 - 3·2 = -5
    let csv = text.split("\n\n").nth(1).unwrap();
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').skip(1).map(|x| x.parse().unwrap()).collect();
    assert!((row[0] + 5.0).abs() < 1e-12 && row[1] == 0.0);
}

#[test]
fn analyze_rank_deficient_multipoint() {
    let o = bvp(&["analyze", &problem("multipoint_rank_deficient.json"), "--grid", "100"]);
    let text = stdout(&o);
    assert_eq!(value(&text, "rank"), "1");
    assert_eq!(value(&text, "dim_ker"), "1");
    assert_eq!(value(&text, "dim_coker"), "2");
    assert_eq!(value(&text, "index"), "-1");
    let o = bvp(&["solve", &problem("multipoint_rank_deficient.json"), "--grid", "100"]);
    assert_eq!(value(&stdout(&o), "status"), "no_solution");
}

#[test]
fn solve_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("y.csv");
    let o = bvp(&[
        "solve",
        &problem("two_point_second_order.json"),
        "--grid",
        "200",
        "--out",
        out.to_str().unwrap(),
        "--p",
        "inf",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(value(&text, "status"), "unique");
    assert_eq!(value(&text, "p"), "inf");
    assert_eq!(value(&text, "within_tolerance"), "true");
    assert!(!text.contains("t,y0_d0_re"));
    let csv = std::fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,y0_d0_re,y0_d0_im,y0_d1_re,y0_d1_im,y0_d2_re,y0_d2_im");
    assert_eq!(lines.count(), 201);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["analyze", "solve"] {
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        for out in [&a, &b] {
            let o = bvp(&[cmd, &problem("integral_condition.json"), "--out", out.to_str().unwrap()]);
            assert!(o.status.success());
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let a = bvp(&["continuity", &problem("family_generic.json"), "--grid", "200"]);
    let b = bvp(&["continuity", &problem("family_generic.json"), "--grid", "200"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn continuity_summary() {
    let o = bvp(&["continuity", &problem("family_boundary_shift.json"), "--grid", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(value(&text, "conditions_hold"), "true");
    assert_eq!(value(&text, "two_sided_estimate"), "pass");
    assert_eq!(value(&text, "semicontinuity"), "pass");
    let lower: f64 = value(&text, "gamma_lower").parse().unwrap();
    assert!((lower - 1.0).abs() < 1e-9);
    assert_eq!(text.split("\n\n").nth(1).unwrap().lines().count(), 7);
}

#[test]
fn missing_boundary_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(problem("first_order_scalar.json")).unwrap();
    let mut v: serde_like::Value = serde_like::parse(&text);
    v.remove("boundary");
    let path = write(dir.path(), "p.json", &v.0);
    let o = bvp(&["analyze", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`boundary`"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_with_one() {
    let o = bvp(&["analyze", "/nonexistent/problem.json"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bvp(&["analyze", &problem("first_order_scalar.json"), "--grid", "101"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bvp(&["analyze", &problem("first_order_scalar.json"), "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bvp(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    // a family needs l = mr
    let o = bvp(&["continuity", &problem("family_boundary_shift.json").replace("family_boundary_shift", "multipoint_rank_deficient")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_smoothness_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // sampled coefficients carry two derivatives; n = 3 needs three
    let path = write(
        dir.path(),
        "p.json",
        r#"{
            "interval": [0, 1],
            "dims": {"m": 1, "r": 1, "n": 3, "l": 1, "p": 2},
            "coefficients": [{"order": 0, "kind": "sampled",
                              "data": {"t": [0, 0.25, 0.5, 0.75, 1], "values": [0, 1, 0, 1, 0]}}],
            "rhs": {"kind": "constant", "data": [0]},
            "boundary": {"alphas": [1, 0, 0, 0], "phi": null},
            "c": [1]
        }"#,
    );
    let o = bvp(&["analyze", &path]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("smoothness"));
}

#[test]
fn degenerate_family_is_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(problem("family_boundary_shift.json")).unwrap();
    let path = write(dir.path(), "f.json", &text.replace("\"perturbations\": {\"c\": [1]},", ""));
    let o = bvp(&["continuity", &path, "--grid", "20"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(value(&stdout(&o), "two_sided_estimate").starts_with("unavailable (degenerate family"));
}

#[test]
fn selftest_passes() {
    let o = bvp(&["selftest", "--grid", "400"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("PASS ").count(), 3);
}

/// Minimal top-level key removal without a JSON dependency.
mod serde_like {
    pub struct Value(pub String);

    pub fn parse(text: &str) -> Value {
        Value(text.to_string())
    }

    impl Value {
        /// Drops a top-level `"key": …` line (sample files keep one key per
        /// line at the top level).
        pub fn remove(&mut self, key: &str) {
            let needle = format!("\"{key}\":");
            let mut out = Vec::new();
            let mut depth = 0i32;
            let mut skipping = false;
            for line in self.0.lines() {
                if depth == 1 && line.trim_start().starts_with(&needle) {
                    skipping = true;
                }
                let delta = line.matches(['{', '[']).count() as i32 - line.matches(['}', ']']).count() as i32;
                if !skipping {
                    out.push(line.to_string());
                }
                depth += delta;
                if skipping && depth == 1 {
                    skipping = false;
                }
            }
            self.0 = out.join("\n");
        }
    }
}
