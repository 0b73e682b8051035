use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use racnsim::config::parse_config;
use racnsim::tables::{RunManifest, MANIFEST_FILE};

fn racnsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racnsim"))
        .args(args)
        .env_remove("RACNSIM_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn validate_prints_defaults_and_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let before = listing(tmp.path());
    let o = Command::new(env!("CARGO_BIN_EXE_racnsim"))
        .arg("validate")
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    for line in [
        "channel.subchannel_bandwidth_hz = 15000",
        "scheme.p_enb_dbm = 43",
        "scheme.p_rn_dbm = 40",
        "channel.shadow_sigma_enb_db = 8",
        "channel.shadow_sigma_rn_db = 6",
        "layout.inter_site_distance_km = 1.5",
    ] {
        assert!(text.lines().any(|l| l == line), "missing '{line}'");
    }
    assert_eq!(parse_config(&text).unwrap(), parse_config("").unwrap());
    assert_eq!(listing(tmp.path()), before);
}

#[test]
fn validate_reports_fields_with_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.cfg");
    fs::write(&path, "run.num_drops = 0\nchannel.bogus = 1\n").unwrap();
    let o = racnsim(&["validate", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("channel.bogus"), "{err}");

    let o = racnsim(&["validate", "--config", "/nonexistent/racnsim.cfg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = racnsim(&["validate", "--drops", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("run.num_drops"));
}

#[test]
fn flags_override_the_file() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("a.cfg");
    fs::write(&path, "run.master_seed = 9\nrun.num_drops = 3\n").unwrap();
    let o = racnsim(&[
        "validate",
        "--config",
        path.to_str().unwrap(),
        "--seed",
        "77",
        "--users",
        "5,6",
        "--schemes",
        "sfr",
    ]);
    assert!(o.status.success());
    let cfg = parse_config(&stdout(&o)).unwrap();
    assert_eq!(cfg.master_seed, 77);
    assert_eq!(cfg.num_drops, 3);
    assert_eq!(cfg.users_per_sector, vec![5, 6]);
    assert_eq!(cfg.schemes.len(), 1);
}

#[test]
fn neighbors_listing() {
    let o = racnsim(&["neighbors", "--scheme", "proposed_no_rn"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "1A: 2A 6A 7A 3E 4E"));
    let o = racnsim(&["neighbors", "--scheme", "proposed_rn"]);
    assert!(stdout(&o).lines().any(|l| l == "1D: 2D 6D 7D R1C"));
    let o = racnsim(&["neighbors", "--scheme", "reuse9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_writes_verified_tables_and_compare_reads_them() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = racnsim(&[
        "run",
        "--drops",
        "1",
        "--users",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files = listing(&out);
    assert_eq!(files.len(), 17);
    assert!(files.contains(&"proposed_rn_u50_cdf_edge.csv".to_string()));
    assert!(RunManifest::verify(&out).unwrap().is_empty());
    let entries = RunManifest::read_entries(&out.join(MANIFEST_FILE)).unwrap();
    assert_eq!(entries.len(), 16);

    let cdf = fs::read_to_string(out.join("reuse1_u50_cdf_all.csv")).unwrap();
    assert!(cdf.ends_with(",1.000000\n"));

    let o = racnsim(&["compare", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("proposed_rn"));

    // tampering is caught
    fs::write(out.join("sfr_u50_hist_edge.csv"), "x\n").unwrap();
    assert_eq!(
        RunManifest::verify(&out).unwrap(),
        vec!["sfr_u50_hist_edge.csv".to_string()]
    );
}

#[test]
fn output_directory_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("env-out");
    let o = Command::new(env!("CARGO_BIN_EXE_racnsim"))
        .args(["run", "--drops", "1", "--users", "2", "--schemes", "reuse3"])
        .env("RACNSIM_OUT", &out)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(out.join("summary.csv").exists());
}

#[test]
fn io_failures_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let target = blocker.join("out");
    let o = racnsim(&[
        "run",
        "--drops",
        "1",
        "--users",
        "1",
        "--schemes",
        "reuse1",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = racnsim(&["compare", tmp.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn layout_dump_has_one_line_per_region() {
    let o = racnsim(&["layout"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count() >= 42);
}
