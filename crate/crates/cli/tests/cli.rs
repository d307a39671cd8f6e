use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn harper(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harper"))
        .args(args)
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path, experiment: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join(format!("{experiment}.manifest.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn converge_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("triangle-cells.toml");
    let out = harper(&["converge", "--workers", "2", "--seed", "5"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("converge.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "experiment,boundary,m,lambda,f_m,f_oracle,abs_error,oracle_error,d_m,flag");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "triangle-cells");
    // floats carry 17 significant digits in exponent form
    assert!(first[3].contains('e') && first[3].split('e').next().unwrap().len() == 18, "{}", first[3]);

    let m = manifest(dir.path(), "converge");
    let bytes = std::fs::read(&cfg).unwrap();
    let digest = format!("{:x}", <sha2::Sha256 as sha2::Digest>::digest(&bytes));
    assert_eq!(m["config_sha256"], digest.as_str());
    assert_eq!(m["seed"], 5);
    assert_eq!(m["workers"], 2);
    assert!(m["versions"]["harper_core"].is_string());
    assert!(m["total_seconds"].as_f64().unwrap() >= 0.0);
    assert!(!m["timings"].as_array().unwrap().is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (sub, file, csv) in [
        ("converge", "square-third.toml", "converge.csv"),
        ("jumps", "triangle-cells.toml", "jumps.csv"),
        ("butterfly", "butterfly.toml", "butterfly.csv"),
    ] {
        assert!(harper(&[sub, "--workers", "1", "--seed", "3"], &config(file), a.path()).status.success());
        assert!(harper(&[sub, "--workers", "3", "--seed", "3"], &config(file), b.path()).status.success());
        let x = std::fs::read(a.path().join(csv)).unwrap();
        let y = std::fs::read(b.path().join(csv)).unwrap();
        assert!(x == y, "{sub} output depends on the worker count");
    }
}

#[test]
fn corrupted_conjugation_fails_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = harper(&["verify"], &config("faults/corrupt-sigma.toml"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAILED: sigma-conjugation"), "{stderr}");
    let report = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    assert!(report.lines().any(|l| l.starts_with("corrupt-sigma,sigma-conjugation,fail")));
    let m = manifest(dir.path(), "verify");
    assert!(m["failures"].as_array().unwrap().iter().any(|f| f.as_str().unwrap().starts_with("sigma-conjugation")));
}

#[test]
fn short_interior_radius_fails_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = harper(&["verify"], &config("faults/short-radius.toml"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAILED: interior-propagation"), "{stderr}");
    assert!(!stderr.contains("FAILED: cocycle"), "{stderr}");
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let out_dir = dir.path().join("out");

    let unknown = write("unknown.toml", "id = \"x\"\nbogus = 1\n[graph]\npreset = \"line\"\n");
    let out = harper(&["converge"], &unknown, &out_dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let irrational = write(
        "irrational.toml",
        "id = \"x\"\n[graph]\npreset = \"square\"\n[weight]\nkind = \"landau\"\nflux = \"0.6180339887\"\n",
    );
    let out = harper(&["converge"], &irrational, &out_dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rational flux"));

    // the same model runs once the oracle is off
    let no_oracle = write(
        "no-oracle.toml",
        "id = \"x\"\nwindows = [4, 8]\n[graph]\npreset = \"square\"\n[weight]\nkind = \"landau\"\nflux = \"0.6180339887\"\n[oracle]\nenabled = false\n[lambda]\nvalues = [4.0]\n",
    );
    assert_eq!(harper(&["converge"], &no_oracle, &out_dir).status.code(), Some(0));

    let out = harper(&["butterfly"], &config("line.toml"), &out_dir);
    assert_eq!(out.status.code(), Some(2));

    let out = harper(&["jumps"], &dir.path().join("missing.toml"), &out_dir);
    assert_eq!(out.status.code(), Some(2));
}
