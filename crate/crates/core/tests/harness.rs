use std::process::Command;

use stonecalc::harness::{find, replay, run_property, run_suites, trial_seed, Fixture, Gen, Suite, SuiteConfig};
use stonecalc::mutation::Mutation;
use stonecalc::stopping::measurability_violation;

fn small(seed: u64, trials: usize) -> SuiteConfig {
    SuiteConfig {
        seed,
        trials,
        ..SuiteConfig::default()
    }
}

#[test]
fn same_seed_same_report() {
    let cfg = small(42, 40);
    let a = serde_json::to_string(&run_suites(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suites(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(run_suites(&cfg).unwrap().pass);
}

#[test]
fn same_seed_same_fixture() {
    let cfg = SuiteConfig {
        mutation: Some(Mutation::MuEndpointOffByOne),
        ..small(42, 50)
    };
    let p = find("spectral.step_integral").unwrap();
    let a = run_property(&cfg, p).unwrap().first_failure_fixture.unwrap();
    let b = run_property(&cfg, p).unwrap().first_failure_fixture.unwrap();
    assert_eq!(serde_json::to_vec(&a).unwrap(), serde_json::to_vec(&b).unwrap());
}

#[test]
fn report_covers_every_property_once() {
    let r = run_suites(&small(1, 5)).unwrap();
    assert!(r.missing.is_empty());
    for suite in Suite::ALL {
        assert!(r.records.iter().any(|x| x.suite == suite));
    }
    let mut names: Vec<_> = r.records.iter().map(|x| x.name.as_str()).collect();
    names.dedup();
    assert_eq!(names.len(), r.records.len());
    let only = run_suites(&SuiteConfig { suites: vec![Suite::Stopping], ..small(1, 5) }).unwrap();
    assert!(only.records.iter().all(|x| x.suite == Suite::Stopping));
}

#[test]
fn single_atom_spaces() {
    let cfg = SuiteConfig {
        atoms: (1, 1),
        ..small(7, 30)
    };
    let r = run_suites(&cfg).unwrap();
    assert!(r.pass, "{:?}", r.records.iter().filter(|x| !x.passed()).collect::<Vec<_>>());
    let mut g = Gen::new(&cfg, 3);
    assert_eq!(g.space().atoms(), 1);
}

#[test]
fn generated_stopping_times_are_measurable() {
    let cfg = small(9, 1);
    for i in 0..300 {
        let mut g = Gen::new(&cfg, trial_seed(9, "generator", i));
        let space = g.space();
        let horizon = g.horizon();
        let f = g.filtration(space, horizon);
        let t = g.stopping_time(&f, None);
        assert_eq!(measurability_violation(&f, t.values()), None);
    }
}

#[test]
fn fixtures_replay_through_files() {
    let cfg = SuiteConfig {
        mutation: Some(Mutation::CeDroppedWeight),
        ..small(5, 100)
    };
    let record = run_property(&cfg, find("probability.martingale").unwrap()).unwrap();
    let fixture = record.first_failure_fixture.expect("mutation is caught");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.json");
    std::fs::write(&path, serde_json::to_string_pretty(&fixture).unwrap()).unwrap();
    let back: Fixture = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, fixture);
    let r = replay(&back).unwrap();
    assert!(r.reproduced && r.instance_matches);

    // without the mutation the same instance passes
    let mut clean = back.clone();
    clean.config.mutation = None;
    let r = replay(&clean).unwrap();
    assert!(r.instance_matches && !r.reproduced && r.outcome.is_ok());

    let mut tampered = back;
    tampered.trial_seed ^= 1;
    assert!(replay(&tampered).is_err());
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_suites(&SuiteConfig { trials: 0, ..SuiteConfig::default() }).is_err());
    assert!(run_suites(&SuiteConfig { atoms: (3, 2), ..SuiteConfig::default() }).is_err());
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stonecalc"))
}

#[test]
fn cli_verify_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = cli()
        .args(["verify", "--seed", "3", "--atoms", "1..6", "--horizon", "1..4", "--trials", "20"])
        .args(["--suite", "core,stopping", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], true);

    let status = cli()
        .args(["verify", "--trials", "50", "--suite", "stopping", "--mutation", "hitting_time_shift", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let debut = report["records"].as_array().unwrap().iter().find(|r| r["name"] == "stopping.debut").unwrap();
    let fixture = dir.path().join("fixture.json");
    std::fs::write(&fixture, debut["first_failure_fixture"].to_string()).unwrap();
    let status = cli().args(["replay", "--fixture"]).arg(&fixture).output().unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));

    let status = cli().args(["verify", "--suite", "nope"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}
