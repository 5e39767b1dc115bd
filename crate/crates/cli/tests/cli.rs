use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn losmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_losmap")).args(args).output().unwrap()
}

fn default_config() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/default.toml")
        .display()
        .to_string()
}

#[test]
fn validate_config_prints_settings() {
    let out = losmap(&["validate-config", "--config", &default_config()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("room 15 x 25 m, 5 obstacles"), "{text}");
    assert!(text.contains("antennas 256"), "{text}");
}

#[test]
fn config_problems_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let out = losmap(&["validate-config", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.toml"));

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "num_antennas = 256\ncolour = \"blue\"\n").unwrap();
    let out = losmap(&["validate-config", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    assert_eq!(losmap(&["map", "--cell-size", "-1"]).status.code(), Some(1));
    assert_eq!(losmap(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(losmap(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = losmap(&["map", "--trials", "1", "--out", blocker.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn map_and_render_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = losmap(&["render", "--perfect-los", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("render_trace.csv").exists());
    assert!(out_dir.join("render_00.pgm").exists());
    assert!(out_dir.join("render_07.svg").exists());

    let seeded = |name: &str| {
        let target = dir.path().join(name);
        let out = losmap(&["map", "--seed", "5", "--jobs", "2", "--out", target.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        fs::read(target.join("map_trace.csv")).unwrap()
    };
    assert_eq!(seeded("a"), seeded("b"));
}
