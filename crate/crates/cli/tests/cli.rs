use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use flowjet::{catalog, io, Cx, Jet};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_flowjet"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flowjet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn invert_f2_gives_x2() {
    let out = run(&["invert"], &io::map_to_json(&catalog::f2()));
    assert_eq!(out.status.code(), Some(0));
    let x = io::parse_field(&stdout(&out)).unwrap();
    let expected = catalog::x2::<f64>();
    for (m, c) in expected.coeffs() {
        assert!((x.coeff(*m) - c).norm() < 1e-12);
    }
    assert_eq!(x.coeffs().len(), 1);
}

#[test]
fn invert_f1_with_free_value() {
    let out = run(&["invert", "--free", "0,3=1,2"], &io::map_to_json(&catalog::f1()));
    assert_eq!(out.status.code(), Some(0));
    let x = io::parse_field(&stdout(&out)).unwrap();
    let expected = catalog::x1::<f64>(Cx::new(1.0, 2.0));
    for m in [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)] {
        assert!((x.coeff(m) - expected.coeff(m)).norm() < 1e-10, "{m:?}");
    }
}

#[test]
fn obstruction_is_a_successful_result() {
    let jet = r#"{"kind":"map","alpha":1,"degree":2,"coeffs":[{"j":0,"k":2,"re":1,"im":0}]}"#;
    let out = run(&["invert", "--alpha-pi", "2/3"], jet);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "obstructed");
    assert_eq!(v["at"], serde_json::json!([0, 2]));
    assert!((v["defect"]["re"].as_f64().unwrap().abs() - 1.0).abs() < 1e-12);
}

#[test]
fn resonance_report() {
    let out = run(&["invert", "--report", "resonances"], &io::map_to_json(&catalog::f1()));
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["status"], "family");
    assert_eq!(v["result"]["free"], serde_json::json!([[0, 3]]));
    assert!(v["resonances"]["entries"].as_array().unwrap().len() == 7);
}

#[test]
fn usage_errors_exit_2_with_json() {
    let out = run(&["invert", "--bogus"], "");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "usage");

    let out = run(&["invert"], "{\n \"kind\": \"map\",\n \"alpha\": x }");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"]["message"].as_str().unwrap().contains("line 3"));

    let out = run(&["invert", "--free", "2,0=1,0"], &io::map_to_json(&catalog::f1()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let jet = r#"{"kind":"map","alpha":1,"degree":3,"coeffs":[{"j":2,"k":1,"re":1,"im":0}]}"#;
    let out = run(&["birkhoff", "--alpha-pi", "2/3"], jet);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "low_order_root");

    let bad = r#"{"kind":"map","alpha":1,"degree":2,"coeffs":[{"j":3,"k":0,"re":1,"im":0}]}"#;
    let out = run(&["invert"], bad);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "invalid_jet");
}

#[test]
fn birkhoff_output() {
    let out = run(&["birkhoff", "--oracle", "0.01,2000"], &io::map_to_json(&catalog::f2()));
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["B1"]["re"].as_f64().unwrap() + 0.5).abs() < 1e-10);
    assert!((v["V1"].as_f64().unwrap() + 0.5).abs() < 1e-10);
    assert_eq!(v["verdict"], "LAS");
    assert!((v["drift"]["V1_fit"].as_f64().unwrap() + 0.5).abs() < 0.075);
}

#[test]
fn flow_round_trips_and_writes_oracle_csv() {
    let csv = scratch("oracle.csv");
    let x2 = io::field_to_json(&catalog::x2());
    let out = run(&["flow", "--time", "1", "--oracle", csv.to_str().unwrap()], &x2);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let f = io::parse_map(&text).unwrap();
    assert_eq!(io::map_to_json(&f) + "\n", text);
    assert!((f.coeff((2, 1)) + 1.0).norm() < 1e-12);
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("z0_re,z0_im,jet_re,jet_im,ode_re,ode_im,abs_err"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        let err: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < 1e-6, "{row}");
    }
}

#[test]
fn simulate_is_deterministic() {
    let schedule = format!(
        r#"{{"seasons":[{{"field":{},"duration":1}},{{"field":{},"duration":1}}]}}"#,
        io::field_to_json(&catalog::x1(Cx::new(0.0, 0.0))),
        io::field_to_json(&catalog::x2())
    );
    let args = ["simulate", "--z0", "0.02,-0.01", "--periods", "3", "--samples-per-period", "4"];
    let a = run(&args, &schedule);
    let b = run(&args, &schedule);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,z_re,z_im,r2,season"));
    let last = lines.last().unwrap();
    assert!(last.starts_with("6,"), "{last}");
}

#[test]
fn repro_targets_pass() {
    for target in ["prop2.2", "prop2.3-a30", "prop2.6a", "prop3.1", "prop3.2", "thm3"] {
        let out = run(&["repro", target, "--seed", "42"], "");
        assert_eq!(out.status.code(), Some(0), "{target}: {}", stdout(&out));
        assert!(stdout(&out).trim_end().ends_with("PASS"));
    }
    let a = run(&["repro", "prop2.2", "--seed", "5"], "");
    let b = run(&["repro", "prop2.2", "--seed", "5"], "");
    assert_eq!(a.stdout, b.stdout);
}
