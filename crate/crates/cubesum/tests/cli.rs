use std::path::Path;
use std::process::{Command, Output};

use cubesum::OutputRecord;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubesum"))
        .args(args)
        .env("CUBESUM_CACHE", cache)
        .env_remove("CUBESUM_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let code = |args: &[&str]| run(&cache, args).status.code();
    assert_eq!(code(&["classify", "8"]), Some(0));
    assert_eq!(code(&["classify", "0"]), Some(3));
    assert_eq!(code(&["classify", "0/5"]), Some(3));
    assert_eq!(code(&["classify", "x/2"]), Some(2));
    assert_eq!(code(&["classify", "1/0"]), Some(2));
    assert_eq!(code(&["family", "nope", "1"]), Some(2));
    assert_eq!(code(&["family", "cube", "1"]), Some(2));
    assert_eq!(code(&["family", "fib", "2"]), Some(4));
    assert_eq!(code(&["family", "cube", "1", "1"]), Some(4));
    assert_eq!(code(&["table", "3"]), Some(2));
    assert_eq!(code(&["classify", "5", "--cache-only"]), Some(5));
    assert_eq!(code(&["bogus"]), Some(2));
    let err = run(&cache, &["family", "fib", "2"]);
    assert!(stdout(&err).is_empty());
    assert!(String::from_utf8_lossy(&err.stderr).contains("n = 2 is not allowed"));
}

#[test]
fn spec_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let json = |args: &[&str]| -> OutputRecord {
        let o = run(&cache, args);
        assert!(o.status.success(), "{args:?}");
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    let r = json(&["classify", "8", "--json"]);
    assert_eq!(r.result["verdict"], "solvable");
    assert_eq!(r.result["witness"], "{5, 4, 3}");
    let r = json(&["classify", "4", "--json"]);
    assert_eq!(r.result["reason"], "theorem-a4");
    let r = json(&["family", "a9", "2", "1", "--json"]);
    assert_eq!(r.result["triple"], "{18, -17, -10}");
    let r = json(&["family", "twovar", "-2", "3", "--json"]);
    assert_eq!(r.result["a"], "16/31");
    let r = json(&["--json", "family", "rs", "--", "-1/2", "3"]);
    assert_eq!(r.inputs["params"], "-1/2 3");
    let r = json(&["family", "cube", "2", "1", "--json"]);
    assert_eq!((&r.result["raw"], &r.result["a"]), (&"{40, -33, -31}".into(), &"8".into()));
    let r = json(&["ec", "16", "--bound", "100", "--json"]);
    assert_eq!(r.result["torsion_order"], 3);
    let points: Vec<&str> = r.result["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|row| row["kind"] == "integral")
        .map(|row| row["point"].as_str().unwrap())
        .collect();
    assert_eq!(points, ["(48, -270)", "(48, 270)"]);
    let r = json(&["oracle", "thue", "3", "100", "--json"]);
    assert_eq!(r.result["count"], 2);
    let r = json(&["search", "-1", "--height", "10", "--json"]);
    assert_eq!(r.result["rows"][0]["triple"], "{6, -5, -4}");
    let r = json(&["table", "2", "--json"]);
    let row = |a: i64| r.result["rows"].as_array().unwrap().iter().find(|x| x["a"] == a).unwrap().clone();
    assert_eq!(row(-4)["solutions"][0], "{12, -11, -7} (found by search)");
    assert_eq!(row(-4)["solutions"][1], "{23807, -22655, -11640} (verified, not discovered)");
    assert_eq!(row(5)["provenance"], "transcribed");
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    for args in [&["classify", "-1/11", "--json"][..], &["table", "1", "--json"], &["ec", "9/73", "--json"]] {
        let text = stdout(&run(&cache, args));
        let rec: OutputRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(cubesum::render(&rec, cubesum::Format::Json), text);
    }
}

#[test]
fn cache_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("nested").join("c.jsonl");
    for format in ["--json", "--tsv"] {
        let first = run(&cache, &["classify", "16", "--height", "40", format]);
        let replay = run(&cache, &["classify", "16", "--cache-only", format]);
        assert!(replay.status.success());
        assert_eq!(first.stdout, replay.stdout);
    }
    // a higher height supersedes, a lower one does not
    run(&cache, &["classify", "16", "--height", "60"]);
    run(&cache, &["classify", "16", "--height", "30"]);
    let replay = run(&cache, &["classify", "16", "--cache-only", "--json"]);
    let rec: OutputRecord = serde_json::from_str(&stdout(&replay)).unwrap();
    assert_eq!(rec.inputs["height"], "60");
    // curated and uncurated verdicts are cached separately
    assert_eq!(run(&cache, &["classify", "16", "--cache-only", "--use-curated"]).status.code(), Some(5));
}

#[test]
fn curated_override() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let file = dir.path().join("ev.jsonl");
    std::fs::write(
        &file,
        "{\"schema\":\"cubesum-curated\",\"version\":1}\n\
         {\"a\":\"16\",\"verdict\":\"none\",\"count\":\"0\",\"evidence\":\"test\",\"rank\":0,\"torsion_order\":3,\"solutions\":[],\"source\":\"test\"}\n",
    )
    .unwrap();
    let o = run(&cache, &["classify", "16", "--height", "30", "--curated", file.to_str().unwrap(), "--json"]);
    let rec: OutputRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rec.result["reason"], "curated-rank-zero");
    std::fs::write(&file, "not json\n").unwrap();
    let o = run(&cache, &["classify", "16", "--curated", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
