use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_accretion-lab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn setop_reports_topology() {
    let (code, out, _) = run(&["setop", "--expr", "boundary((0,3140) U {3150})"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["set"], "{0,3140,3150}");
    assert!(v.get("timing").is_none());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["setop", "--expr", "[0,"]).0, 2);
    assert_eq!(run(&["bogus"]).0, 2);
    let (code, _, err) = run(&["corpus", "--name", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown preset"), "{err}");
    assert_eq!(run(&["ftc", "--f", "x^2", "--F", "x^3", "--a", "0", "--b", "1", "--eps", "1/100"]).0, 1);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["seq", "--formula", "1/n + 3140 + (-1)^n", "--oracle"];
    let (c1, o1, _) = run(&args);
    let (c2, o2, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    assert_eq!(json(&o1)["result"]["limsup"], "3141");
}

#[test]
fn timing_only_on_request() {
    let (_, out, _) = run(&["--timing", "setop", "--expr", "[0,1]"]);
    assert!(json(&out)["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn text_output() {
    let (code, out, _) = run(&["--output", "text", "diff", "--g", "-(x-1)^2", "--c", "1", "--interval", "[0,2]", "--extremum"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("diff\n"), "{out}");
    assert!(out.contains("holds: true"), "{out}");
}

#[test]
fn partition_csv() {
    let dir = tempdir();
    let path = dir.join("p.csv");
    let (code, _, _) = run(&["integrate", "--f", "x", "--a", "0", "--b", "1", "--eps", "1/4", "--emit-partition", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("k,x_prev,x_k,w_k,u_k\n"), "{csv}");
    assert!(csv.lines().count() >= 3);
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("accretion-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
