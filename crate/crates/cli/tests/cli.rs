use assert_cmd::Command;
use serde_json::Value;

fn probrec() -> Command {
    Command::cargo_bin("probrec").unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = probrec().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

fn masses(report: &Value) -> Vec<(String, String)> {
    report["distribution"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["key"].as_str().unwrap().to_string(), e["p"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn eval_h_fixture() {
    let r = json(&["eval", "--term", "paper-h", "--args", "3", "--mu-bound", "10", "--check"]);
    let m = masses(&r);
    assert_eq!(m.len(), 10);
    for (y, (k, p)) in m.iter().enumerate() {
        assert_eq!((k.as_str(), p.as_str()), (y.to_string().as_str(), format!("1/{}", 1u64 << (y + 1)).as_str()));
    }
    assert_eq!(r["deficit"], "1/1024");
    assert_eq!(r["verdict"]["verdict"], "exact-match");
    assert_eq!(r["budget"]["mu_bound"], 10);
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn report_distribution_is_valid_schema() {
    let r = json(&["eval", "--term", "paper-f", "--args", "2", "--mu-bound", "6", "--approx-decimals", "3"]);
    let d = probrec::AnyDist::from_json(&r["distribution"].to_string()).unwrap();
    assert_eq!(d.to_json_value(), r["distribution"]);
    assert_eq!(r["approx"][0]["decimal"], "0.500");
}

#[test]
fn eval_word_and_text_output() {
    probrec()
        .args(["eval-word", "--term", "reverse", "--args", "aab", "--out", "text"])
        .assert()
        .success()
        .stdout("\"baa\"\t1/1\n⊥\t0/1\n");
    let r = json(&["eval-word", "--term", "concat", "--args", "ab,ba", "--check"]);
    assert_eq!(masses(&r), vec![("abba".to_string(), "1/1".to_string())]);
}

#[test]
fn exit_codes() {
    probrec().args(["eval", "--term", "nosuchfile"]).assert().code(2);
    probrec().args(["eval", "--term", "paper-h", "--args", "1,2"]).assert().code(2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.term");
    std::fs::write(&bad, "proj 0 1\n").unwrap();
    probrec()
        .args(["eval", "--term", bad.to_str().unwrap()])
        .assert()
        .code(2)
        .stderr(predicates::str::contains("1:1"));
    probrec().args(["sample", "--term", "paper-h", "--args", "0"]).assert().code(2);
}

#[test]
fn oracle_mismatch_exits_3() {
    // With an odd number of draws a fair choice cannot hit 1/2 exactly, so a
    // zero tolerance must fail.
    probrec()
        .args(["oracle", "--program", "jrand-choice", "--out-reg", "1", "--seed", "1", "--draws", "999", "--sigmas", "0"])
        .assert()
        .code(3)
        .stderr(predicates::str::contains("mismatch"));
}

#[test]
fn tiercheck_verdicts() {
    let r = json(&["tiercheck", "--term", "concat"]);
    assert_eq!(r["inferred"]["judgment"]["args"], serde_json::json!([1, 0]));
    let out = probrec().args(["tiercheck", "--term", "exp-rejected"]).assert().code(2).get_output().clone();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["inferred"]["verdict"], "untypable");
    assert!(!r["inferred"]["cycle"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not typable"));
    probrec().args(["tiercheck", "--term", "copy", "--judgment", "1->0"]).assert().success();
    probrec().args(["tiercheck", "--term", "copy", "--judgment", "0->0"]).assert().code(2);
}

#[test]
fn ptm_commands() {
    let r = json(&["ptm", "run", "--machine", "fig1-machine", "--depth", "2", "--check"]);
    assert_eq!(masses(&r), vec![("".into(), "3/4".into()), ("b".into(), "1/4".into())]);
    let t = json(&["ptm", "tree", "--machine", "fig1-machine", "--depth", "2", "--annotate", "ptc"]);
    let node = |id: &str| t["nodes"].as_array().unwrap().iter().find(|n| n["node"] == id).unwrap().clone();
    assert_eq!(node("10")["pt0"], "1/2");
    assert_eq!(node("00")["pt1"], "3/4");
    assert_eq!(node("01")["ptc"]["entries"][0]["p"], "1/3");

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fig1.term");
    probrec()
        .args(["ptm", "compile", "--machine", "fig1-machine", "--out", f.to_str().unwrap()])
        .assert()
        .success();
    let r = json(&["eval", "--term", f.to_str().unwrap(), "--machine", "fig1-machine", "--args", "0", "--mu-bound", "7"]);
    assert_eq!(masses(&r), vec![("0".into(), "3/4".into()), ("2".into(), "1/4".into())]);
}

#[test]
fn prm_commands() {
    let r = json(&["prm", "run", "--program", "reverse", "--inputs", "abb", "--out-reg", "1", "--check"]);
    assert_eq!(masses(&r), vec![("bba".into(), "1/1".into())]);
    let s = json(&["prm", "steps", "--program", "reverse", "--inputs", "ab"]);
    assert_eq!(s["bound"]["kind"], "halts");
    let text = probrec()
        .args(["prm", "from-ptm", "--machine", "coin-writer"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let spec = probrec::prm::PrmSpec::parse(&String::from_utf8(text).unwrap()).unwrap();
    assert_eq!(spec, probrec::fixtures::program("coin-writer").unwrap());
}

#[test]
fn oracles_agree() {
    for args in [
        &["oracle", "--machine", "fig1-machine", "--depth", "2", "--against", "compiled"][..],
        &["oracle", "--machine", "geometric", "--input", "a", "--depth", "6", "--against", "prm"],
        &["oracle", "--machine", "copy", "--input", "ab", "--depth", "10"],
        &["oracle", "--term", "paper-h", "--args", "0", "--mu-bound", "8", "--seed", "7", "--draws", "20000"],
    ] {
        let r = json(args);
        assert_ne!(r["verdict"]["verdict"], "mismatch", "{args:?}");
    }
}

#[test]
fn sampling_is_deterministic() {
    let args = ["sample", "--term", "f-rand", "--args", "4", "--seed", "11", "--draws", "500"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a["counts"], b["counts"]);
    let total: u64 = a["counts"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 500);
}

#[test]
fn fixtures_are_listed_and_shown() {
    let out = probrec().args(["fixtures", "list"]).assert().success().get_output().stdout.clone();
    let list = String::from_utf8(out).unwrap();
    for name in ["terms/paper-h.term", "machines/fig1-machine.json", "tier/exp-rejected.term"] {
        assert!(list.lines().any(|l| l == name), "{name}");
    }
    probrec()
        .args(["fixtures", "show", "paper-h"])
        .assert()
        .success()
        .stdout(predicates::str::contains("mu"));
}
