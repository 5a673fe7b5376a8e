use std::fs;

use proxlearn::runner::{self, ExperimentConfig, Summary, CSV_HEADER};

fn small(name: &str, dir: &std::path::Path) -> ExperimentConfig {
    let mut cfg = runner::preset(name).unwrap();
    cfg.horizon = 10;
    cfg.seeds = vec![0, 1];
    cfg.output_dir = Some(dir.to_path_buf());
    cfg
}

#[test]
fn writes_one_csv_per_seed_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    for name in runner::list_presets() {
        let cfg = small(name, dir.path());
        let summary = runner::run_experiment(&cfg).unwrap();
        assert!(!summary.partial, "{name}: {:?}", summary.seeds);
        let out = dir.path().join(name);
        for seed in [0, 1] {
            let text = fs::read_to_string(out.join(format!("seed-{seed}.csv"))).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next(), Some(CSV_HEADER));
            assert!(lines.next().unwrap().starts_with("n,x0_0"));
            assert_eq!(lines.count(), 10, "{name}");
        }
        let parsed: Summary =
            serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
        assert_eq!(parsed, summary);
        assert_eq!(parsed.checkpoints.last(), Some(&10));
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let mut cfg = small("bandit-tracking-v05", dir.path());
        cfg.horizon = 200;
        runner::run_experiment(&cfg).unwrap();
    }
    for file in ["seed-0.csv", "seed-1.csv"] {
        let x = fs::read(a.path().join("bandit-tracking-v05").join(file)).unwrap();
        let y = fs::read(b.path().join("bandit-tracking-v05").join(file)).unwrap();
        assert_eq!(x, y);
    }
}

#[test]
fn config_echo_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small("tracking-v05", dir.path());
    let summary = runner::run_experiment(&cfg).unwrap();
    let json: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("tracking-v05/summary.json")).unwrap(),
    )
    .unwrap();
    let echoed: ExperimentConfig = serde_json::from_value(json["config"].clone()).unwrap();
    assert_eq!(echoed, cfg);
    let again = runner::run_experiment(&echoed).unwrap();
    assert_eq!(again.seeds, summary.seeds);
}

#[test]
fn toml_round_trip() {
    for name in runner::list_presets() {
        let cfg = runner::preset(name).unwrap();
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(
            ExperimentConfig::from_toml_str(&text).unwrap(),
            cfg,
            "{name}:\n{text}"
        );
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = runner::preset("bandit-tracking-v05").unwrap();
    if let runner::LearnerConfig::Bandit { sampling, .. } = &mut cfg.learner {
        sampling.delta0 = 0.6;
    }
    assert!(cfg.validate().is_err());

    let mut cfg = runner::preset("tracking-v05").unwrap();
    cfg.learner = runner::LearnerConfig::Gradient {
        step: runner::StepConfig::Power {
            gamma0: 0.5,
            exponent: 0.5,
        },
        noise: runner::NoiseConfig {
            sigma0: 0.5,
            ..Default::default()
        },
    };
    assert!(cfg.validate().is_err());
    cfg.allow_violations = true;
    assert_eq!(cfg.validate().unwrap().warnings.len(), 1);

    let mut cfg = runner::preset("zerosum-ergodic").unwrap();
    cfg.regularizer = proxlearn::geometry::RegularizerKind::Entropic;
    cfg.game = runner::GameConfig::QuadraticNetwork {
        mu: 1.0,
        coupling: 0.0,
        targets: vec![vec![0.5]],
        lo: 0.0,
        hi: 1.0,
    };
    assert!(cfg.validate().is_err());
}
