mod common;

use aquanode::scenario::{Report, ReportBody};
use common::{cli_pipeline, run_cli, without_timestamp};

#[test]
fn every_subcommand_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = cli_pipeline(a.path()).unwrap();
    let second = cli_pipeline(b.path()).unwrap();
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        assert!(x == y, "{name} differs between runs");
    }
    let mission =
        Report::from_json(&std::fs::read_to_string(a.path().join("mission.json")).unwrap())
            .unwrap();
    let ReportBody::Mission(run) = mission.body else {
        panic!("wrong report kind")
    };
    assert_eq!(run.total, 16);
    assert!(run.accuracy > 0.25);
}

#[test]
fn reports_go_to_stdout_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_cli(dir.path(), &["tradeoff"]);
    assert!(r.success);
    let report = Report::from_json(&r.stdout).unwrap();
    assert_eq!(report.command(), "tradeoff");
    assert_eq!(
        report.inputs.get("profile").map(String::as_str),
        Some("default")
    );
}

#[test]
fn profile_file_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("slow.cfg"),
        "# slower uplink\nuplink_bps = 500\n",
    )
    .unwrap();
    let r = run_cli(dir.path(), &["tradeoff", "--profile", "slow.cfg"]);
    assert!(r.success, "{}", r.stderr);
    let ReportBody::Tradeoff(t) = Report::from_json(&r.stdout).unwrap().body else {
        panic!("wrong report kind")
    };
    assert_eq!(t.profile.uplink_bps, 500.0);
}

#[test]
fn typed_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "warp_factor = 9\n").unwrap();
    let r = run_cli(dir.path(), &["tradeoff", "--profile", "bad.cfg"]);
    assert!(!r.success);
    assert!(r.stderr.contains("warp_factor"), "{}", r.stderr);

    let r = run_cli(
        dir.path(),
        &["convert", "--model", "missing.aqnn", "--out", "x.aqnn"],
    );
    assert!(!r.success);
    assert!(r.stderr.starts_with("error:"));

    std::fs::write(dir.path().join("junk.aqnn"), b"JUNKJUNKJUNKJUNK").unwrap();
    let r = run_cli(
        dir.path(),
        &["convert", "--model", "junk.aqnn", "--out", "x.aqnn"],
    );
    assert!(!r.success);
    assert!(r.stderr.contains("magic"), "{}", r.stderr);
}

#[test]
fn float_model_mission_is_refused_with_the_overflow() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(run_cli(p, &["synth", "--out", "d", "--clips-per-class", "10"]).success);
    assert!(
        run_cli(
            p,
            &[
                "train",
                "--dataset",
                "d",
                "--out",
                "m.aqnn",
                "--epochs",
                "1"
            ]
        )
        .success
    );
    let r = run_cli(p, &["mission", "--model", "m.aqnn", "--dataset", "d"]);
    assert!(!r.success);
    assert!(r.stderr.contains("10254"), "{}", r.stderr);
}

#[test]
fn text_rendering_hides_only_the_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_cli(dir.path(), &["tradeoff", "--report", "t.json"]).success);
    let a = run_cli(dir.path(), &["report", "t.json"]);
    let b = run_cli(dir.path(), &["report", "t.json", "--format", "json"]);
    assert!(a.stdout.starts_with("tradeoff report, generated "));
    assert!(a.stdout.contains("30.19% more"));
    assert_eq!(
        b.stdout,
        std::fs::read_to_string(dir.path().join("t.json")).unwrap()
    );
    assert_eq!(
        without_timestamp(&a.stdout).lines().next(),
        Some("tradeoff")
    );
}
