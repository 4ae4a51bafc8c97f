use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lamina(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lamina")).args(args).output().expect("spawn lamina")
}

fn lamina_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lamina"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn lamina");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn entropy_prints_value() {
    let o = lamina(&["entropy", "--theta", "1/5"]);
    assert!(o.status.success());
    let h: f64 = stdout(&o).trim().parse().unwrap();
    assert!((h - 0.3331).abs() < 5e-4);

    let o = lamina(&["entropy", "--theta", "2/4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["theta"], "1/2");
    assert!((v["entropy"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(lamina(&["entropy", "--theta", "0/1"]).status.code(), Some(1));
    assert_eq!(lamina(&["entropy", "--theta", "x/5"]).status.code(), Some(2));
    assert_eq!(lamina(&["sweep", "--max-den", "1"]).status.code(), Some(1));
    assert_eq!(lamina(&["frobnicate"]).status.code(), Some(2));
    let o = lamina(&["major", "validate", "--major", "0,1/4", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn from_starts_round_trips_through_validate() {
    let o = lamina(&["major", "from-starts", "--degree", "3", "--starts", "1/10,1/2", "--json"]);
    assert!(o.status.success());
    let json = stdout(&o);
    let v = lamina_stdin(&["major", "validate", "--input", "-"], &json);
    assert!(v.status.success());
    assert_eq!(stdout(&v).trim(), "valid");
}

#[test]
fn sweep_has_one_row_per_reduced_angle() {
    let o = lamina(&["sweep", "--max-den", "12"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta_num,theta_den,rho,entropy,dimension"));
    // Σ φ(q) for 2 ≤ q ≤ 12
    let phi: usize = [1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4].iter().sum();
    assert_eq!(lines.count(), phi);
}

#[test]
fn rabbit_lift_json() {
    let o = lamina(&["lam", "build", "--major", "1/7,9/14", "--degree", "2", "--depth", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let leaves = v["leaves"].as_array().unwrap();
    assert_eq!(leaves.len(), 3);
    assert!(leaves.contains(&serde_json::json!(["1/14", "23/28"])));
    assert!(leaves.contains(&serde_json::json!(["9/28", "4/7"])));

    let c = lamina_stdin(&["lam", "check"], &stdout(&o));
    assert!(c.status.success());
}

#[test]
fn metric_diameter_example() {
    let o = lamina(&["major", "metric", "--degree", "2", "--a", "0,1/2", "--b", "1/4,3/4"]);
    assert_eq!(stdout(&o).trim(), "1/2 (error bound 1/512)");
}

#[test]
fn random_is_deterministic() {
    let a = lamina(&["--seed", "7", "major", "random", "--degree", "5"]);
    let b = lamina(&["--seed", "7", "major", "random", "--degree", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let v = lamina_stdin(&["major", "validate"], &stdout(&a));
    assert!(v.status.success());
}

#[test]
fn render_counts_elements() {
    let o = lamina(&["render", "disk", "--major", "1/7,9/14", "--degree", "2", "--depth", "2"]);
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg"));
    let lam = lamina(&["lam", "build", "--major", "1/7,9/14", "--degree", "2", "--depth", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&lam)).unwrap();
    let n = v["leaves"].as_array().unwrap().len();
    assert_eq!(svg.matches("class=\"leaf\"").count(), n);
}

#[test]
fn manifest_is_written() {
    let dir = std::env::temp_dir().join(format!("lamina-manifest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    let o = lamina(&["entropy", "--theta", "1/3", "--manifest", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["tool"], "lamina");
    std::fs::remove_dir_all(&dir).unwrap();
}
