use std::process::{Command, Output};

fn sphwce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphwce")).args(args).output().unwrap()
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sphwce-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn generate_then_wce() {
    let dir = scratch("wce");
    let pts = dir.join("pts.txt");
    let p = pts.to_str().unwrap();
    assert!(sphwce(&["generate", "spiral", "--N", "50", "--out", p]).status.success());
    let o = sphwce(&["wce", "--points", p, "--d", "2", "--space", "log:1", "--L", "300"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "experiment,d,space,N,t,wce,tail,certificate,witness,seconds");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 10);
    assert_eq!(row[3], "50");
    assert!(row[5].parse::<f64>().unwrap() > 0.0);
    assert_eq!(row[8], "-1e0");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn octahedron_is_a_three_design() {
    let dir = scratch("design");
    let pts = dir.join("oct.txt");
    std::fs::write(&pts, "1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n").unwrap();
    let p = pts.to_str().unwrap();
    assert_eq!(sphwce(&["validate-design", "--points", p, "--d", "2", "--t", "3"]).status.code(), Some(0));
    assert_eq!(sphwce(&["validate-design", "--points", p, "--d", "2", "--t", "4"]).status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn malformed_input_fails_cleanly() {
    let dir = scratch("bad");
    let pts = dir.join("bad.txt");
    std::fs::write(&pts, "1 0 0\n0.5 0.5 0\n").unwrap();
    let o = sphwce(&["wce", "--points", pts.to_str().unwrap(), "--d", "2", "--space", "log:1", "--L", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn usage_errors() {
    assert_eq!(sphwce(&["wce"]).status.code(), Some(2));
    assert_eq!(sphwce(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sphwce(&["identities", "--d", "1"]).status.code(), Some(2));
}

#[test]
fn witness_command_reports_a_valid_bound() {
    let dir = scratch("witness");
    let pts = dir.join("pts.txt");
    let p = pts.to_str().unwrap();
    assert!(sphwce(&["generate", "random", "--d", "2", "--N", "20", "--seed", "3", "--out", p]).status.success());
    let o = sphwce(&["witness", "--points", p, "--d", "2", "--space", "log:1", "--seed", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("N,M,kept,beta,L"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[9], "true");
    let _ = std::fs::remove_dir_all(&dir);
}
