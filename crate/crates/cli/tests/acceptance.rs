//! CLI acceptance: the genus command on the two calibration inputs, and
//! byte-determinism of the verification report.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_genus-forge")
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("genus-forge-test-{}-{}", std::process::id(), name));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn criterion_12_genus_cli() {
    let k3 = write_temp(
        "k3.json",
        r#"{"name":"K3-type","dim":4,"pontryagin_numbers":{"p1":-48},"rational_string":false}"#,
    );
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["genus", "--class", "ahat", "--manifold", k3.to_str().unwrap()])
        .output()
        .unwrap();
    let t1 = start.elapsed();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2");
    assert!(t1.as_secs_f64() < 1.0, "ahat took {:?}", t1);

    let stringy = write_temp(
        "string4.json",
        r#"{"name":"string-4","dim":4,"pontryagin_numbers":{"p1":0},"rational_string":true}"#,
    );
    let start = Instant::now();
    let out = Command::new(bin())
        .args([
            "genus",
            "--class",
            "witten-string",
            "--manifold",
            stringy.to_str().unwrap(),
            "--q-order",
            "8",
        ])
        .output()
        .unwrap();
    let t2 = start.elapsed();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // the degree-4 pairing line must be exactly zero
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.next().unwrap().trim(), "0");
    assert!(t2.as_secs_f64() < 1.0, "witten-string took {:?}", t2);

    // refusal without a rational string structure
    let out = Command::new(bin())
        .args([
            "genus",
            "--class",
            "witten-string",
            "--manifold",
            k3.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let _ = std::fs::remove_file(k3);
    let _ = std::fs::remove_file(stringy);
    println!(
        "PASS criterion-12: genus CLI gives 2 on the p1 = -48 input and a vanishing \
         degree-4 string pairing ({:.3}s / {:.3}s)",
        t1.as_secs_f64(),
        t2.as_secs_f64()
    );
}

#[test]
fn verify_report_is_byte_deterministic() {
    let run = || {
        Command::new(bin())
            .args(["verify", "--suite", "all", "--seed", "7"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.lines().last().unwrap().ends_with("checks passed"));
}

#[test]
fn qexpand_normalized_e2_rows() {
    let out = Command::new(bin())
        .args([
            "qexpand",
            "--series",
            "e2k",
            "--k",
            "1",
            "--order",
            "4",
            "--convention",
            "normalized",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, vec!["0,1,1,1", "1,1,-24,1", "2,1,-72,1", "3,1,-96,1"]);
}

#[test]
fn usage_errors_exit_2() {
    let out = Command::new(bin())
        .args(["genus", "--class", "ahat", "--manifold", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin())
        .args(["verify", "--suite", "nosuch"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
