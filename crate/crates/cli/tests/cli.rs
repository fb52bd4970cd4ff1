mod common;

use common::{cases, check_case, root, run};

#[test]
fn golden_reports_are_reproduced() {
    let failures: Vec<String> = cases().iter().filter_map(|c| check_case(c).err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(run(&["ceer", "frobnicate"]).0, 3);
    assert_eq!(run::<&str>(&[]).0, 3);
    assert_eq!(run(&["ceer", "equal", "--pairs", "0 x", "0", "1"]).0, 3);
    assert_eq!(run(&["ceer", "closure", "--file", "data/missing.ceer"]).0, 3);
    assert_eq!(run(&["space", "separate-balls", "--instance", "10"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn out_writes_the_same_report() {
    let dir = std::env::temp_dir().join(format!("repspace-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eq.json");
    let args = ["ceer", "equal", "--file", "data/chain.ceer", "0", "9"];
    let (_, stdout) = run(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    assert_eq!(run(&with_out).0, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

/// Saves a report, replays it, then replays a tampered copy.
fn verify_round_trip(args: &[&str], tamper: impl Fn(&mut serde_json::Value)) {
    let dir = std::env::temp_dir().join(format!("repspace-verify-{}-{}", std::process::id(), args.join("_").len()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", good.to_str().unwrap()]);
    assert_eq!(run(&a).0, 0, "{args:?}");
    assert_eq!(run(&["--verify", good.to_str().unwrap()]).0, 0, "{args:?}");
    let mut report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    tamper(&mut report);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, report.to_string()).unwrap();
    assert_eq!(run(&["--verify", bad.to_str().unwrap()]).0, 1, "{args:?}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_replays_and_rejects_forgeries() {
    verify_round_trip(&["ceer", "equal", "--file", "data/chain.ceer", "0", "9"], |r| {
        r["certificates"][0]["steps"][0]["b"] = 7.into();
    });
    verify_round_trip(&["ceer", "example35", "--fuel", "20000", "--audit", "10"], |r| {
        let certs = r["certificates"].as_array_mut().unwrap();
        let c = certs.iter_mut().find(|c| c["certificate"]["kind"] == "NonExtensional").unwrap();
        let to = c["certificate"]["to"].as_u64().unwrap();
        c["certificate"]["to"] = (to + 1).into();
    });
    verify_round_trip(&["example", "diag-inj", "--candidate", "5"], |r| {
        let out = r["certificates"][0]["failure"]["k"]["output"].as_u64().unwrap();
        r["certificates"][0]["failure"]["k"]["output"] = (out + 1).into();
    });
    verify_round_trip(&["example", "da", "diag"], |r| {
        let flipped: String =
            r["data"]["run"]["a_prefix"].as_str().unwrap().chars().map(|c| if c == '0' { '1' } else { '0' }).collect();
        r["data"]["run"]["a_prefix"] = flipped.into();
    });
}

#[test]
fn verify_notices_changed_inputs() {
    let dir = std::env::temp_dir().join(format!("repspace-stale-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ceer = dir.join("c.ceer");
    std::fs::write(&ceer, "ceer v1\npairs\n0 3\n").unwrap();
    let report = dir.join("r.json");
    let args = ["ceer", "equal", "--file", ceer.to_str().unwrap(), "0", "3", "--out", report.to_str().unwrap()];
    assert_eq!(run(&args).0, 0);
    std::fs::write(&ceer, "ceer v1\npairs\n0 4\n").unwrap();
    assert_eq!(run(&["--verify", report.to_str().unwrap()]).0, 1);
    std::fs::remove_dir_all(dir).unwrap();
    assert!(root().join("data/chain.ceer").exists());
}
