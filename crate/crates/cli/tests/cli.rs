use std::path::Path;
use std::process::{Command, Output};

use vqss::experiments::Report;
use vqss::report::consistent;

fn vqss(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vqss"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn codec_decode_reports_secret_and_error_position() {
    let dir = tempfile::tempdir().unwrap();
    let o = vqss(&["codec", "decode", "--n", "5", "--delta", "2", "--p", "7", "--word", "6,6,3,5,2"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "secret 3, error at position 4");

    std::fs::write(dir.path().join("w.txt"), "6,6,3,5,0\n").unwrap();
    let o = vqss(
        &["codec", "decode", "--n", "5", "--delta", "2", "--p", "7", "--file", "w.txt", "--output", "d.json"],
        dir.path(),
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(v["secret"], 4);
    assert_eq!(v["error_positions"], serde_json::json!([2]));
}

#[test]
fn codec_share_then_syndrome_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = vqss(&["codec", "share", "--n", "7", "--delta", "3", "--p", "11", "--secret", "5", "--seed", "4"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let word = out.lines().next().unwrap().strip_prefix("codeword ").unwrap().to_string();
    let o = vqss(&["codec", "syndrome", "--n", "7", "--delta", "3", "--p", "11", "--word", &word], dir.path());
    assert_eq!(stdout(&o).trim(), "syndrome 0,0,0");
    let o = vqss(&["codec", "decode", "--n", "7", "--delta", "3", "--p", "11", "--word", &word], dir.path());
    assert_eq!(stdout(&o).trim(), "secret 5, no errors");
}

#[test]
fn invalid_configs_fail_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.conf"), "protocol = vqss\nn = 4\noutput = out.json\n").unwrap();
    std::fs::write(dir.path().join("typo.conf"), "protocl = vqss\n").unwrap();
    let cases: [&[&str]; 6] = [
        &["run", "--config", "bad.conf", "--transcript", "t.jsonl"],
        &["sweep", "--config", "typo.conf", "--output", "out.json"],
        &["sweep", "--protocol", "subspace", "--backend", "share", "--output", "out.json"],
        &["sweep", "--protocol", "mpqc", "--n", "5", "--output", "out.json"],
        &["sweep", "--k", "0", "--output", "out.json"],
        &["run", "--adversary", "nobody", "--transcript", "t.jsonl"],
    ];
    for args in cases {
        let o = vqss(args, dir.path());
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
        assert!(!dir.path().join("out.json").exists(), "{args:?}");
        assert!(!dir.path().join("t.jsonl").exists(), "{args:?}");
    }
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "{names:?}");
}

#[test]
fn honest_run_is_accepted_and_writes_a_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let o = vqss(
        &[
            "run", "--protocol", "vqss", "--n", "5", "--t", "1", "--p", "7", "--k", "10", "--adversary", "none", "--seed",
            "1", "--transcript", "t.jsonl",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("Accepted\nB = []\n"), "{out}");
    let text = std::fs::read_to_string(dir.path().join("t.jsonl")).unwrap();
    assert!(text.lines().count() > 0);
    for line in text.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn sweep_is_reproducible_and_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("grid.conf"),
        "protocol = classical-vss\nk = 1, 3\nadversary = none, guess-ahead\ntrials = 300\nseed = 1\n",
    )
    .unwrap();
    let mut reports = Vec::new();
    for out in ["a.json", "b.json"] {
        let o = vqss(&["sweep", "--config", "grid.conf", "--output", out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let r: Report = serde_json::from_slice(&std::fs::read(dir.path().join(out)).unwrap()).unwrap();
        assert!(consistent(&r));
        reports.push(r);
    }
    assert_eq!(reports[0].cells.len(), 4);
    assert_eq!(
        serde_json::to_value(&reports[0].raw).unwrap(),
        serde_json::to_value(&reports[1].raw).unwrap()
    );
    for cell in &reports[0].cells {
        if cell.adversary == "none" {
            assert_eq!(cell.accepted, cell.trials);
        }
        assert!(cell.bad_ci.lo <= cell.bound, "{cell:?}");
        assert_eq!(cell.exact_failures, 0);
    }
    let o = vqss(&["report", "a.json"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("guess-ahead"));
}

#[test]
fn tampered_report_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let o = vqss(
        &["sweep", "--protocol", "classical-vss", "--adversary", "guess-ahead", "--k", "1", "--trials", "200", "--output", "r.json"],
        dir.path(),
    );
    assert!(o.status.success());
    let mut r: Report = serde_json::from_slice(&std::fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert!(consistent(&r));
    r.cells[0].accepted += 1;
    assert!(!consistent(&r));
}
