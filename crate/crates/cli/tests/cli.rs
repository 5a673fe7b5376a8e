use std::process::Command;

fn proxlearn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_proxlearn"))
}

#[test]
fn lists_presets() {
    let out = proxlearn().arg("list-presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "regret-sqrt",
        "converge-stable",
        "tracking-v05",
        "bandit-tracking-v05",
        "zerosum-ergodic",
    ] {
        assert!(text.lines().any(|l| l == name), "{text}");
    }
}

#[test]
fn runs_a_small_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        r#"
name = "small"
horizon = 10
seeds = [0]
regularizer = "euclidean"

[game]
family = "quadratic-network"
mu = 1.0
coupling = 0.2
targets = [[0.3], [0.6]]
lo = 0.0
hi = 1.0

[learner]
kind = "gradient"
step = { schedule = "constant", gamma = 0.5 }
"#,
    )
    .unwrap();
    let out = proxlearn().arg("validate").arg(&cfg).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = proxlearn()
        .args(["run"])
        .arg(&cfg)
        .args(["--seeds", "2", "--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for seed in 0..2 {
        assert!(dir
            .path()
            .join(format!("out/small/seed-{seed}.csv"))
            .exists());
    }
    assert!(dir.path().join("out/small/summary.json").exists());
}

#[test]
fn output_directory_defaults_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = proxlearn()
        .args(["run", "--preset", "zerosum-ergodic", "--seeds", "1"])
        .env("PROXLEARN_OUT", dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("zerosum-ergodic/summary.json").exists());
}

#[test]
fn bad_input_fails_with_a_message() {
    let out = proxlearn()
        .args(["run", "--preset", "traking-v05"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("tracking-v05"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "name = \"x\"\nhorizon = 10\nseeds = [0]\nregularizer = \"euclidean\"\nhorizn = 3\n",
    )
    .unwrap();
    let out = proxlearn().arg("validate").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
}
