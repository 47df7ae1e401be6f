use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_copositive"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not json ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_examples() {
    let out = run(&["generate", "--params", "1,2,3"], None);
    assert_eq!(code(&out), 0);
    assert_eq!(
        json_out(&out)["coeffs"],
        json!(["4/1", "3/1", "-3/1", "1/1"])
    );

    let out = run(&["generate", "--params", ""], None);
    assert_eq!(json_out(&out)["coeffs"], json!(["1/1"]));

    let out = run(&["generate", "--params", "5"], None);
    assert_eq!(json_out(&out)["coeffs"], json!(["5/1", "1/1"]));

    let out = run(
        &["generate", "--params", "[1, 2, 3]", "--backend", "real"],
        None,
    );
    assert_eq!(json_out(&out)["coeffs"], json!([4.0, 3.0, -3.0, 1.0]));
}

#[test]
fn generate_errors() {
    assert_eq!(code(&run(&["generate", "--params", "1,x"], None)), 2);
    assert_eq!(code(&run(&["generate", "--params", "1,-2"], None)), 3);
    assert_eq!(code(&run(&["generate"], None)), 2);
    assert_eq!(code(&run(&["no-such-command"], None)), 2);
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&run(&["check", "[1, 0, 1]"], None)), 0);

    let out = run(&["check"], Some("[-1, 1]"));
    assert_eq!(code(&out), 1);
    let cert = json_out(&out);
    assert_eq!(cert["verdict"], json!(false));
    assert!(cert.get("witness").is_some());

    let out = run(&["check", "[4, -12, 13, -6, 1]"], None);
    assert_eq!(code(&out), 0);
    let roots = json_out(&out)["roots"].as_array().unwrap().clone();
    assert_eq!(roots.len(), 2);
    assert!(roots.iter().all(|r| r["multiplicity"] == json!(2)));

    assert_eq!(code(&run(&["check", "[1, "], None)), 2);
}

#[test]
fn boundary_exit_codes() {
    let out = run(&["boundary", "[4, -12, 13, -6, 1]"], None);
    assert_eq!(code(&out), 0);
    assert_eq!(json_out(&out)["double_roots"].as_array().unwrap().len(), 2);
    assert_eq!(code(&run(&["boundary", "[1, 0, 1]"], None)), 1);
    let out = run(&["boundary", "[0, 0, 1]"], None);
    assert_eq!(code(&out), 0);
    assert_eq!(json_out(&out)["double_roots"].as_array().unwrap().len(), 1);
}

#[test]
fn invert_examples() {
    let out = run(&["invert", "[4, 3, -3, 1]"], None);
    assert_eq!(code(&out), 0);
    let report = json_out(&out);
    assert_eq!(report["params"], json!(["1/1", "2/1", "3/1"]));
    assert_eq!(report["unique"], json!(true));

    let out = run(&["invert", "[1]"], None);
    assert_eq!(json_out(&out)["params"], json!([]));

    let out = run(&["invert", "[4, -12, 13, -6, 1]"], None);
    assert_eq!(code(&out), 0);
    let report = json_out(&out);
    assert_eq!(report["unique"], json!(false));
    assert_eq!(report["ambiguity_levels"], json!([4]));

    // Not copositive: domain error.
    assert_eq!(code(&run(&["invert", "[2, -3, 1]"], None)), 3);
}

#[test]
fn generate_pipes_into_invert() {
    let generated = run(&["generate", "--params", "3/2,0,7,1/3,2"], None);
    assert_eq!(code(&generated), 0);
    let out = run(&["invert"], Some(&stdout(&generated)));
    assert_eq!(code(&out), 0);
    assert_eq!(
        json_out(&out)["params"],
        json!(["3/2", "0/1", "7/1", "1/3", "2/1"])
    );
}

#[test]
fn roundtrip_summary() {
    let out = run(
        &[
            "roundtrip",
            "--degrees",
            "2..4",
            "--count",
            "5",
            "--seed",
            "1",
        ],
        None,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let last = lines.last().unwrap();
    assert_eq!(last["pass"], json!(true));
    assert_eq!(last["seed"], json!(1));

    let pretty = run(
        &["--pretty", "roundtrip", "--degrees", "2..3", "--count", "2"],
        None,
    );
    assert_eq!(code(&pretty), 0);
}

#[test]
fn sample_is_reproducible() {
    let args = [
        "sample",
        "--degree",
        "3",
        "--distribution",
        "lattice:0:10:1",
        "--seed",
        "9",
        "--count",
        "4",
    ];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn plot_data_examples() {
    let out = run(
        &[
            "plot-data",
            "--set",
            "c2-region",
            "--t-max",
            "2",
            "--steps",
            "2",
        ],
        None,
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("piece,a0,a1\ncurve,0,0\ncurve,1,-2\ncurve,4,-4\n"));

    let out = run(
        &[
            "plot-data",
            "--poly",
            "[1,0,1]",
            "--range",
            "0:2",
            "--samples",
            "3",
        ],
        None,
    );
    assert_eq!(stdout(&out), "x,y\n0,1\n1,2\n2,5\n");

    let out = run(&["plot-data", "--poly", "[0]", "--samples", "4"], None);
    let ys: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_owned())
        .collect();
    assert_eq!(ys, vec!["0"; 4]);

    assert_eq!(code(&run(&["plot-data"], None)), 2);
}
