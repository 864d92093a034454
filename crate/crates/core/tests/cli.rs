use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use elmono::boundary::Shape;
use elmono::reconstruct::read_indicator_csv;

fn elmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elmono")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Integer following `key` in whitespace-separated output.
fn field(text: &str, key: &str) -> usize {
    let mut words = text.split_whitespace();
    while let Some(w) = words.next() {
        if w == key {
            return words.next().and_then(|v| v.parse().ok()).expect("integer after key");
        }
    }
    panic!("'{key}' not found in: {text}");
}

#[test]
fn usage_errors_exit_with_one() {
    let none = elmono(&[]);
    assert_eq!(code(&none), 1);
    assert!(stderr(&none).contains("Usage"));
    let unknown = elmono(&["forward", "--bogus", "x"]);
    assert_eq!(code(&unknown), 1);
    assert!(stderr(&unknown).contains("--bogus") && stderr(&unknown).contains("Usage"));
    assert_eq!(code(&elmono(&["reconstruct", "--config", "a.cfg"])), 1);
    assert_eq!(code(&elmono(&["spectrum", "--data", "a.ffd", "--center", "1", "--radius", "0.3"])), 1);
    let help = elmono(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("reconstruct"));
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    let out = dir.path().join("out.ffd");
    let r = elmono(&["forward", "--config", s(&missing), "--out", s(&out)]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).starts_with("error:"));

    let bad_cfg = dir.path().join("bad.cfg");
    std::fs::write(&bad_cfg, "lambda = 2\nmu = 1\nomega = 1\nscatterer = blob\ngrid = -1,1,-1,1,3,3\n").unwrap();
    assert_eq!(code(&elmono(&["forward", "--config", s(&bad_cfg), "--out", s(&out)])), 2);

    let bad_data = dir.path().join("bad.ffd");
    std::fs::write(&bad_data, "ffd 2\nlambda 2\n").unwrap();
    let r = elmono(&["spectrum", "--data", s(&bad_data), "--center", "0,0", "--radius", "0.3"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn forward_reconstruct_and_spectrum_on_the_disk_phantom() {
    let dir = tempfile::tempdir().unwrap();
    let (data, csv, pgm) = (dir.path().join("disk.ffd"), dir.path().join("disk.csv"), dir.path().join("disk.pgm"));
    let cfg = config("disk_phantom.cfg");
    let fwd = elmono(&["forward", "--config", s(&cfg), "--out", s(&data)]);
    assert_eq!(code(&fwd), 0, "{}", stderr(&fwd));
    assert!(std::fs::read_to_string(&data).unwrap().starts_with("ffd 1\n"));

    let rec = elmono(&["reconstruct", "--config", s(&cfg), "--data", s(&data), "--out", s(&csv), "--pgm", s(&pgm)]);
    assert_eq!(code(&rec), 0, "{}", stderr(&rec));
    let r_max = field(&stdout(&rec), "r_max");
    let rows = read_indicator_csv(&csv).unwrap();
    assert_eq!(rows.len(), 41 * 41);
    let disk = Shape::Circle { center: [0.0, 0.0], radius: 1.0 };
    let both = rows.iter().filter(|r| r.inside && disk.contains([r.x, r.y])).count();
    let either = rows.iter().filter(|r| r.inside || disk.contains([r.x, r.y])).count();
    let jaccard = both as f64 / either as f64;
    assert!(jaccard >= 0.6, "Jaccard {jaccard}");
    let image = std::fs::read_to_string(&pgm).unwrap();
    assert!(image.starts_with("P2\n") && image.contains("\n41 41\n255\n"));

    let spec = elmono(&["spectrum", "--data", s(&data), "--center", "0,0", "--radius", "0.3", "--top", "5"]);
    assert_eq!(code(&spec), 0, "{}", stderr(&spec));
    let text = stdout(&spec);
    assert!(field(&text, "count_above") <= r_max);
    assert_eq!(text.lines().count(), 3 + 5);

    let off = elmono(&["spectrum", "--data", s(&data), "--center", "-1.8,0.2", "--radius", "0.3", "--nB", "16"]);
    assert_eq!(code(&off), 0, "{}", stderr(&off));
    assert!(field(&stdout(&off), "count_above") > r_max);

    let fixed = elmono(&[
        "reconstruct", "--config", s(&cfg), "--data", s(&data), "--out", s(&csv), "--pgm", s(&pgm), "--delta", "1e-6", "--rmax", "3",
    ]);
    assert_eq!(code(&fixed), 0, "{}", stderr(&fixed));
    assert!(stdout(&fixed).contains("(explicit), r_max 3 (explicit)"));
    assert!(std::fs::read_to_string(&pgm).unwrap().lines().nth(1).unwrap().contains("explicit"));

    let other = dir.path().join("other.cfg");
    let text = std::fs::read_to_string(&cfg).unwrap().replace("omega = 1", "omega = 1.5");
    std::fs::write(&other, text).unwrap();
    let mismatch = elmono(&["reconstruct", "--config", s(&other), "--data", s(&data), "--out", s(&csv)]);
    assert_eq!(code(&mismatch), 2);
    assert!(stderr(&mismatch).contains("differs"));
}

#[test]
fn validate_quick_reports_every_criterion() {
    let start = std::time::Instant::now();
    let out = elmono(&["validate", "--quick"]);
    assert!(start.elapsed().as_secs() < 300);
    let text = stdout(&out);
    let verdicts: Vec<&str> = text.lines().filter(|l| l.starts_with("criterion ")).collect();
    assert_eq!(verdicts.len(), 9, "{text}");
    let all_pass = verdicts.iter().all(|l| l.ends_with("PASS"));
    assert_eq!(code(&out), if all_pass { 0 } else { 2 });
}
