use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::process::{Command, Output, Stdio};
use std::time::Duration;

fn ryuo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ryuo"))
        .args(args)
        .env_remove("RYUO_PORT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).unwrap()
}

#[test]
fn eval_and_best_lines() {
    let cases: &[(&[&str], &str)] = &[
        (&["eval", "--game", "ryuo", "--p", "3", "--", "17", "19"], "grundy=9 outcome=N\n"),
        (&["eval", "--game", "ryuo", "--p", "3", "--", "0", "0"], "grundy=0 outcome=P\n"),
        (
            &["eval", "--game", "pass-ryuo", "--p", "3", "--pass", "true", "--", "2", "2"],
            "outcome=P (grundy via oracle: 0)\n",
        ),
        (&["eval", "--game", "3dim-modified", "--", "1", "1", "4"], "grundy=3 outcome=N\n"),
        (&["eval", "--game", "ndim", "--p", "3", "--n", "4", "--", "1", "2", "3", "4"], "grundy=1 outcome=N\n"),
        (&["best", "--game", "ryuo", "--p", "3", "--", "2", "2"], "(1,2) (2,1)\n"),
        (&["best", "--game", "ryuo", "--p", "3", "--", "1", "2"], "none (P-position)\n"),
        (&["best", "--game", "3dim", "--", "1", "1", "1"], "(0,0,0)\n"),
        (&["best", "--game", "pass-ryuo", "--p", "3", "--pass", "true", "--", "1", "1"], "(0,0,true)\n"),
    ];
    for (args, expected) in cases {
        let out = ryuo(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out), *expected, "{args:?}");
        assert!(out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn parameter_errors_exit_two_without_stdout() {
    let cases: &[&[&str]] = &[
        &["eval", "--game", "ryuo", "--", "1", "2"],
        &["eval", "--game", "ryuo", "--p", "3", "--", "1", "-2"],
        &["eval", "--game", "restricted-side", "--p", "3", "--q", "1", "--", "1", "2"],
        &["eval", "--game", "restricted-side", "--p", "3", "--q", "5", "--", "5000", "2"],
        &["best", "--game", "ryuo", "--p", "3", "--", "99999999999", "1"],
        &["table", "--game", "3dim", "--max", "4"],
        &["table", "--game", "ryuo", "--p", "3", "--max", "4097"],
        &["table", "--game", "ryuo", "--p", "3", "--max", "4", "--format", "xml"],
        &["serve", "--port", "notaport"],
        &[],
    ];
    for args in cases {
        let out = ryuo(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_succeed() {
    for args in [&["--help"][..], &["--version"], &["verify", "--help"]] {
        let out = ryuo(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn table_output_is_deterministic() {
    let args = ["table", "--game", "ryuo", "--p", "3", "--max", "12", "--format", "csv"];
    let first = ryuo(&args);
    let second = ryuo(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 15);
    assert_eq!(lines[0], "# game=ryuo p=3 region=12");
    assert!(lines[2].starts_with("0,0,"));
    assert!(!text.contains('\r'));
    assert!(lines.iter().all(|l| !l.ends_with(' ')));
}

#[test]
fn table_to_file_and_json() {
    let dir = std::env::temp_dir().join(format!("ryuo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pass.csv");
    let out = ryuo(&[
        "table", "--game", "pass-ryuo", "--p", "3", "--layer", "pass", "--max", "12", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    // row y=2, column x=2
    let row: Vec<&str> = csv.lines().nth(4).unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    assert_eq!(row[3], "0");
    std::fs::remove_dir_all(&dir).unwrap();

    let out = ryuo(&["table", "--game", "ryuo", "--p", "2", "--max", "1", "--format", "json"]);
    assert_eq!(stdout(&out), "{\"game\":\"ryuo\",\"params\":{\"p\":2},\"max\":1,\"rows\":[[0,1],[1,0]]}\n");
}

#[test]
fn verify_suites() {
    let out = ryuo(&["verify", "--suite", "ryuo", "--max", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ryuo p=1..6: 0 mismatches"));

    let out = ryuo(&["verify", "--suite", "moveset", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["ok"], true);
    let witnesses = doc["suites"][0]["witnesses"].as_array().unwrap();
    assert_eq!(witnesses.len(), 5 + 9 + 14);
    assert!(witnesses.iter().all(|w| w["position"].is_array()));

    let out = ryuo(&["verify", "--suite", "restricted", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let control = &doc["suites"][0]["negativeControls"][0];
    assert_eq!(control["mismatches"][0]["position"], serde_json::json!([0, 2]));
}

#[test]
fn serve_reports_a_busy_port() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let out = ryuo(&["serve", "--port", &port]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(&port));
}

#[test]
fn serve_takes_its_port_from_the_environment() {
    let port = {
        let probe = TcpListener::bind("127.0.0.1:0").unwrap();
        probe.local_addr().unwrap().port()
    };
    let mut child = Command::new(env!("CARGO_BIN_EXE_ryuo"))
        .arg("serve")
        .env("RYUO_PORT", port.to_string())
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    stderr.read_line(&mut line).unwrap();
    assert!(line.contains(&format!("127.0.0.1:{port}")), "{line}");

    let mut stream = TcpStream::connect(("127.0.0.1", port)).unwrap();
    stream.set_read_timeout(Some(Duration::from_secs(10))).unwrap();
    write!(stream, "GET /api/variants HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains("\"variant\":\"ryuo\""));
}
