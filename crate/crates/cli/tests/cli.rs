//! End-to-end tests of the `randtensor` binary: exit codes, diagnostics,
//! manifests, determinism, and flag overrides.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

const BIN: &str = env!("CARGO_BIN_EXE_randtensor");

fn work_dir(test: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(test);
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("RANDTENSOR_OUT")
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

const TINY_SPECTRUM: &str = "kind = \"spectrum\"\nseed = 5\nensemble = \"hermitian\"\n\
                             leading_dims = [4]\nn_trials = 2\n";

#[test]
fn unknown_key_exits_2_with_line_anchor() {
    let dir = work_dir("unknown_key");
    let cfg = write(
        &dir,
        "bad.toml",
        "kind = \"spectrum\"\nseed = 1\nensemble = \"hermitian\"\nleading_dims = [4]\nn_trials = 1\nbogus = 3\n",
    );
    let out = run(&["spectrum", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("config error"), "{err}");
    assert!(err.contains("bogus"), "{err}");
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn kind_mismatch_exits_2_naming_both_kinds() {
    let dir = work_dir("kind_mismatch");
    let cfg = write(&dir, "spec.toml", TINY_SPECTRUM);
    let out = run(&["sample", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("`spectrum`"), "{err}");
    assert!(err.contains("`sample`"), "{err}");
}

#[test]
fn bad_mode_ratios_exit_2_naming_the_field() {
    let dir = work_dir("mode_ratios");
    let cfg = write(
        &dir,
        "sp.toml",
        "kind = \"spiked\"\nseed = 1\nfamily = \"asymmetric\"\ndims = [4, 4, 4]\n\
         beta_min = 1.0\nbeta_max = 2.0\nbeta_count = 2\ntrials = 1\nrestarts = 1\n\
         max_iters = 50\ntol = 1e-6\nmode_ratios = [0.5, 0.3, 0.3]\n",
    );
    let out = run(&["spiked", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("mode_ratios"), "{err}");
    assert!(err.contains("sum to 1"), "{err}");
}

#[test]
fn missing_config_file_exits_2() {
    let dir = work_dir("missing_file");
    let out = run(&["moments", dir.join("nope.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read config"), "{}", stderr(&out));
}

#[test]
fn numeric_failure_exits_3_with_report() {
    let dir = work_dir("numeric_failure");
    // One iteration at an unreachable tolerance: every restart fails.
    let cfg = write(
        &dir,
        "sp.toml",
        "kind = \"spiked\"\nseed = 1\nfamily = \"asymmetric\"\ndims = [4, 4, 4]\n\
         beta_min = 2.0\nbeta_max = 2.0\nbeta_count = 1\ntrials = 1\nrestarts = 1\n\
         max_iters = 1\ntol = 1e-14\n",
    );
    let out = run(&[
        "spiked",
        cfg.to_str().unwrap(),
        "--out",
        dir.join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("numeric error"), "{err}");
    assert!(err.contains("cause:"), "{err}");
}

#[test]
fn manifest_records_every_emitted_file() {
    let dir = work_dir("manifest_records");
    let cfg = write(&dir, "spec.toml", TINY_SPECTRUM);
    let out_dir = dir.join("o");
    let out = run(&[
        "spectrum",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let run_dir = out_dir.join("spec");
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(run_dir.join("manifest.json")).unwrap()).unwrap();
    let files = manifest["files"].as_array().unwrap();
    assert!(!files.is_empty());
    for f in files {
        let name = f["name"].as_str().unwrap();
        let bytes = fs::read(run_dir.join(name)).unwrap();
        assert_eq!(bytes.len() as u64, f["bytes"].as_u64().unwrap(), "{name}");
        assert_eq!(sha256_hex(&bytes), f["sha256"].as_str().unwrap(), "{name}");
    }
    // The checksum line on stdout matches the manifest.
    let cks = manifest["run_checksum"].as_str().unwrap();
    assert!(stdout(&out).contains(cks));
    // Every data file has a header row; the manifest knows all of them.
    let header = fs::read_to_string(run_dir.join("spectrum.csv")).unwrap();
    assert!(header.starts_with("index,"), "{header}");
}

#[test]
fn svg_embeds_the_manifest_checksum() {
    let dir = work_dir("svg_checksum");
    let cfg = write(&dir, "spec.toml", TINY_SPECTRUM);
    let out_dir = dir.join("o");
    let out = run(&[
        "spectrum",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let run_dir = out_dir.join("spec");
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(run_dir.join("manifest.json")).unwrap()).unwrap();
    let cks = manifest["run_checksum"].as_str().unwrap();
    let svg = fs::read_to_string(run_dir.join("figure.svg")).unwrap();
    assert!(svg.contains(&format!("run_checksum={cks}")), "missing checksum");
}

#[test]
fn same_config_and_seed_give_byte_identical_data_files() {
    let dir = work_dir("determinism");
    let cfg = write(&dir, "spec.toml", TINY_SPECTRUM);
    for out_dir in ["a", "b"] {
        let out = run(&[
            "spectrum",
            cfg.to_str().unwrap(),
            "--out",
            dir.join(out_dir).to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let a = dir.join("a/spec");
    let b = dir.join("b/spec");
    let mut names: Vec<String> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"figure.svg".to_string()));
    for name in names {
        if name == "manifest.json" {
            // Wall-clock fields differ; the recorded file checksums must not.
            let ma: serde_json::Value =
                serde_json::from_slice(&fs::read(a.join(&name)).unwrap()).unwrap();
            let mb: serde_json::Value =
                serde_json::from_slice(&fs::read(b.join(&name)).unwrap()).unwrap();
            assert_eq!(ma["files"], mb["files"]);
            assert_eq!(ma["run_checksum"], mb["run_checksum"]);
            continue;
        }
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap(),
            "{name} differs between reruns"
        );
    }
}

#[test]
fn flags_override_seed_and_label() {
    let dir = work_dir("flag_overrides");
    let cfg = write(&dir, "spec.toml", TINY_SPECTRUM);
    let out_dir = dir.join("o");
    let out = run(&[
        "spectrum",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--seed",
        "99",
        "--label",
        "renamed",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let run_dir = out_dir.join("renamed");
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(run_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"].as_u64(), Some(99));
    assert_eq!(manifest["label"].as_str(), Some("renamed"));
    // The effective config snapshot carries the overridden seed.
    assert!(manifest["config"].as_str().unwrap().contains("seed = 99"));
}

#[test]
fn env_var_names_the_default_output_dir() {
    let dir = work_dir("env_out");
    let cfg = write(&dir, "spec.toml", TINY_SPECTRUM);
    let out = Command::new(BIN)
        .args(["spectrum", cfg.to_str().unwrap()])
        .env("RANDTENSOR_OUT", dir.join("from_env").to_str().unwrap())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.join("from_env/spec/manifest.json").exists());
}

#[test]
fn spiked_runs_without_a_config_file() {
    let dir = work_dir("spiked_default");
    let out = run(&[
        "spiked",
        "--out",
        dir.to_str().unwrap(),
        "--dim",
        "6",
        "--beta-count",
        "2",
        "--trials",
        "2",
        "--restarts",
        "3",
        "--max-iters",
        "800",
        "--tol",
        "1e-6",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows = fs::read_to_string(dir.join("spiked/alignment.csv")).unwrap();
    assert_eq!(rows.lines().count(), 3, "header plus two sweep points");
}

#[test]
fn reproduce_rejects_unknown_targets() {
    let out = run(&["reproduce", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("fig9"), "{}", stderr(&out));
}
