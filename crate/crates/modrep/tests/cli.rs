use std::process::{Command, Output};

fn modrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modrep")).args(args).output().expect("binary runs")
}

#[test]
fn passing_suite_exits_zero_with_text_report() {
    let out = modrep(&["verify", "--suite", "carter-lusztig"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite carter-lusztig  p=3 e=1 N=64 R=4 M=4 seed=0"));
    assert!(text.lines().any(|l| l.starts_with("PASS cl/classification")));
    assert!(text.trim_end().ends_with("0 fail, 0 skip"));
}

#[test]
fn json_has_documented_shape() {
    let out = modrep(&["verify", "--suite", "cosets", "--p", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suite"], "cosets");
    assert_eq!(v["config"]["p"], 2);
    assert_eq!(v["config"]["precision"], 64);
    let cases = v["cases"].as_array().unwrap();
    for c in cases {
        for key in ["id", "anchor", "status", "details"] {
            assert!(c.get(key).is_some(), "case lacks {key}: {c}");
        }
        assert_eq!(c["status"], "pass");
    }
    assert_eq!(v["summary"]["total"], cases.len());
    assert_eq!(v["summary"]["pass"], cases.len());
}

#[test]
fn anchors_come_from_the_fixed_set() {
    let out = modrep(&["verify", "--suite", "all", "--p", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let allowed = ["§2.1", "§2.2", "§3", "§4.1", "§4.2", "§4.3", "§4.4", "§5", "§6"];
    for c in v["cases"].as_array().unwrap() {
        assert!(allowed.contains(&c["anchor"].as_str().unwrap()), "{c}");
    }
}

#[test]
fn unknown_suite_and_bad_field_exit_two() {
    let out = modrep(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = modrep(&["verify", "--suite", "cosets", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn out_writes_the_same_bytes_as_stdout() {
    let path = std::env::temp_dir().join(format!("modrep-cli-{}.json", std::process::id()));
    let args = ["verify", "--suite", "principal-series", "--p", "2", "--format", "json"];
    let stdout = modrep(&args).stdout;
    let out = modrep(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_file(&path).ok();
}

#[test]
fn same_seed_reproduces_the_report() {
    let a = modrep(&["verify", "--suite", "cosets", "--seed", "7", "--format", "json"]);
    let b = modrep(&["verify", "--suite", "cosets", "--seed", "7", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
