use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wallcross"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn local_p1_scenario_is_saturated() {
    let o = run(&["--scenario", scenario("local_p1.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\nIC: saturated (1 = 1)\n"));
}

#[test]
fn conifold_scenario_is_not_saturated() {
    let o = run(&["--scenario", scenario("conifold.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("\nIC: not saturated (0 < 1)\n"));
    assert!(s.contains("defect: 1 "));
}

#[test]
fn bundled_families() {
    let podd = stdout(&run(&[
        "--scenario",
        scenario("local_podd.json").to_str().unwrap(),
    ]));
    assert_eq!(podd.matches("\nIC: saturated (1 = 1)\n").count(), 3);
    let flops = stdout(&run(&[
        "--scenario",
        scenario("standard_flop.json").to_str().unwrap(),
    ]));
    assert_eq!(flops.matches("\nIC: not saturated (0 < 1)\n").count(), 4);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for fmt in ["text", "json"] {
        let path = scenario("standard_flop.json");
        let a = run(&["--scenario", path.to_str().unwrap(), "--format", fmt]);
        let b = run(&["--scenario", path.to_str().unwrap(), "--format", fmt]);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn no_wall_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.json");
    std::fs::write(&path, r#"[{"name": "flat", "weights": [1, 1]}]"#).unwrap();
    let o = run(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("NoWall"));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(
        run(&["--scenario", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["--scenario", "/nonexistent/x.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--weights", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["--weights", "1,1,-3"]).status.code(), Some(2));
    assert_eq!(run(&["--weights", "5000,-5000"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--base", "3"]).status.code(), Some(2));
}

#[test]
fn single_cases() {
    let o = run(&["--weights", "1,1,-2", "--base", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("K(C) basis: t^-1 t^0 t^1"));

    let o = run(&["--weights", "1,1,1,1,-2,-2"]);
    let s = stdout(&o);
    assert!(s.contains("eta: 4  codim Z: 6"));
    assert!(s.contains("codim 6 even"));

    let o = run(&["--weights", "2,-1,-1"]);
    let s = stdout(&o);
    assert!(s.contains("codim Z: 3"));
    assert!(s.contains("predicts saturated"));
    assert!(s.contains("\nIC: saturated (1 = 1)\n"));

    let o = run(&["--weights", "-2,1,1", "--base", "-3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["report"]["window_base"], -3);
}

#[test]
fn json_report_schema() {
    let o = run(&[
        "--scenario",
        scenario("local_p1.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let parsed = wallcross::cli::parse_json_output(&stdout(&o)).unwrap();
    let report = parsed[0].1.as_ref().unwrap();
    assert_eq!(report.eta, 2);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v[0]["report"];
    for key in [
        "weights",
        "window_base",
        "eta",
        "codim_z",
        "bases",
        "matrices",
        "m_plus",
        "m_prime",
        "ic_primary",
        "ic_dual",
        "parity",
        "defect",
    ] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(
        r["matrices"]["iota_minus"]["entries"],
        serde_json::json!([[1], [-2], [1]])
    );
    assert_eq!(
        r["ic_primary"],
        serde_json::json!({"rank": 1, "bound": 1, "saturated": true})
    );
}

#[test]
fn self_check_runs() {
    let o = run(&["--trials", "1", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("all 21 invariant families passed"));
    // the bundled families are always included
    assert!(s.contains("(10 cases)"));
    let again = run(&["--trials", "1", "--seed", "0"]);
    assert_eq!(o.stdout, again.stdout);
}
