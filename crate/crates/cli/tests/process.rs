use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn amm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amm"))
        .args(args)
        .output()
        .expect("spawn amm")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SCENARIO: &str = r#"{
  "curve": {"family": "ellipse", "center_a": 6000},
  "deposits": [1000, 1000],
  "actions": [
    {"action": "profile"},
    {"action": "frontrun", "victim": {"token_in": 0, "coins_in": 50}, "budget": 200},
    {"action": "swap", "token_in": 1, "token_out": 0, "coins_in": 1258.342613},
    {"action": "sample", "xmin": 0, "xmax": 1000, "points": 4}
  ]
}"#;

#[test]
fn run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", SCENARIO);
    let a = amm(&["run", &path]);
    let b = amm(&["run", &path]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("\"coins_out\":999.999999859"));
}

#[test]
fn run_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"curve":{"family":"constant_sum"},"deposits":[1,1],"actions":[]}"#, 0),
        (r#"{"curve":{"family":"constant_sum"},"deposits":[1,1],"actions":[],"x":0}"#, 2),
        ("not json", 2),
        (r#"{"curve":{"family":"constant_sum"},"deposits":[1,-1],"actions":[]}"#, 3),
        (
            r#"{"curve":{"family":"constant_sum"},"deposits":[1,1],"actions":[{"action":"swap","token_in":0,"token_out":1,"coins_in":2}]}"#,
            4,
        ),
    ];
    for (i, (text, code)) in cases.iter().enumerate() {
        let path = write(dir.path(), &format!("{i}.json"), text);
        let out = amm(&["run", &path]);
        assert_eq!(out.status.code(), Some(*code), "{text}");
        if *code == 0 {
            assert!(out.stdout.is_empty());
        } else {
            let last = String::from_utf8(out.stdout).unwrap();
            let v: serde_json::Value = serde_json::from_str(last.lines().last().unwrap()).unwrap();
            assert!(v["error"]["kind"].is_string());
        }
    }
    assert_eq!(amm(&["run", "/nonexistent/scenario.json"]).status.code(), Some(2));
}

#[test]
fn table1_text_and_json() {
    let out = amm(&["table1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2386.294361"));
    assert!(text.contains("(0+, inf)"));
    assert!(text.contains("(0.6236, 1.6036)"));

    let out = amm(&["table1", "--json"]);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    assert_eq!(rows[1]["profile"]["ratio_interval"]["low"], "0+");
}

#[test]
fn sample_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let out = amm(&[
        "sample", "--family", "product", "--cost", "1000000", "--xmin", "500", "--xmax", "2000", "--points", "3",
        "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&csv).unwrap(), "x,y\n500,2000\n1250,800\n2000,500\n");

    let out = amm(&[
        "sample", "--family", "circle", "--center", "6000", "--cost", "50000000", "--xmin", "0", "--xmax", "2000",
        "--points", "3",
    ]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("\n1000,1000\n"));

    let out = amm(&[
        "sample", "--family", "ls-lmsr", "--through", "1000,1000", "--xmin", "0", "--xmax", "1000", "--points", "2",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let y: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((y - 1817.07452949).abs() < 1e-5);
}

#[test]
fn sample_rejects_bad_range() {
    let out = amm(&["sample", "--family", "product", "--cost", "1", "--xmin", "5", "--xmax", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn frontrun_compare_ranks_circle_below_product() {
    let out = amm(&[
        "frontrun-compare",
        "--curve",
        r#"{"family":"constant_product"}"#,
        "--curve",
        r#"{"family":"ellipse","center_a":6000}"#,
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let profits: Vec<f64> = text
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["report"]["attacker_profit"].as_f64().unwrap()
        })
        .collect();
    assert!((profits[0] - 14.2857143).abs() < 1e-5);
    assert!((profits[1] - 3.725209).abs() < 1e-5);
    assert!(profits[1] < profits[0]);
}

#[test]
fn bundled_scenarios_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = amm(&["run", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
        count += 1;
    }
    assert!(count >= 4);
}
