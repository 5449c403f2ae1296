//! End-to-end tests of the binary: formats, exit codes, determinism, and
//! the certificate round trip.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hyperlines"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .as_mut()
        .expect("piped stdin")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary finishes")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlines"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn lines_reports_match_the_examples() {
    let out = run_with_stdin(&["lines"], "hypergraph 4\n0 1 2\n");
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    assert!(text.contains("m 4"));
    assert!(text.contains("universal false"));
    assert!(text.contains("line 0 1 2"));

    // path graph on four vertices induces a universal line
    let out = run_with_stdin(&["lines"], "graph 4\n0 1\n1 2\n2 3\n");
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).contains("universal true"));

    let out = run_with_stdin(&["lines"], "hypergraph 3\n");
    let text = stdout_str(&out);
    assert!(text.contains("line 0 1\nline 0 2\nline 1 2\n"));
}

#[test]
fn json_and_text_reports_carry_the_same_numbers() {
    let input = "hypergraph 4\n0 1 2\n";
    let text = stdout_str(&run_with_stdin(&["lines"], input));
    let json = stdout_str(&run_with_stdin(&["lines", "--json"], input));
    let parsed: serde_json::Value = serde_json::from_str(&json).expect("valid json");

    let grab = |key: &str| -> String {
        text.lines()
            .find(|l| l.starts_with(&format!("{key} ")))
            .unwrap_or_else(|| panic!("text report has `{key}`"))
            .split_once(' ')
            .expect("key value")
            .1
            .to_string()
    };
    assert_eq!(grab("n"), parsed["n"].to_string());
    assert_eq!(grab("m"), parsed["m"].to_string());
    assert_eq!(grab("universal"), parsed["universal"].to_string());
    let text_lines: Vec<Vec<u32>> = text
        .lines()
        .filter(|l| l.starts_with("line "))
        .map(|l| {
            l.split_whitespace()
                .skip(1)
                .map(|t| t.parse().expect("vertex"))
                .collect()
        })
        .collect();
    let json_lines: Vec<Vec<u32>> =
        serde_json::from_value(parsed["lines"].clone()).expect("line arrays");
    assert_eq!(text_lines, json_lines);

    // same cross-check for a search report
    let text = stdout_str(&run(&["search", "--n", "4"]));
    let json = stdout_str(&run(&["search", "--n", "4", "--json"]));
    let parsed: serde_json::Value = serde_json::from_str(&json).expect("valid json");
    let min_text = text
        .lines()
        .find(|l| l.starts_with("min_m "))
        .expect("min_m line")
        .split_once(' ')
        .expect("value")
        .1
        .to_string();
    assert_eq!(min_text, parsed["min_m"].to_string());
    let hist_text: Vec<(String, String)> = text
        .lines()
        .filter(|l| l.starts_with("histogram "))
        .map(|l| {
            let mut it = l.split_whitespace().skip(1);
            (it.next().unwrap().to_string(), it.next().unwrap().to_string())
        })
        .collect();
    for (m, count) in hist_text {
        assert_eq!(parsed["histogram"][&m].to_string(), count);
    }
}

#[test]
fn exit_codes_are_a_stable_contract() {
    // 0: success
    assert_eq!(code(&run_with_stdin(&["lines"], "hypergraph 3\n")), 0);
    // 0: all checks pass
    assert_eq!(
        code(&run_with_stdin(
            &["check", "--suite", "all"],
            "hypergraph 4\n0 1 2\n"
        )),
        0
    );
    // 2: parse errors
    assert_eq!(code(&run_with_stdin(&["lines"], "mystery 3\n")), 2);
    assert_eq!(code(&run_with_stdin(&["lines"], "hypergraph 4\n0 1 9\n")), 2);
    assert_eq!(
        code(&run_with_stdin(&["lines"], "metric 2\n0 1\n2 0\n")),
        2
    );
    // 2: precondition violations (universal line present)
    assert_eq!(
        code(&run_with_stdin(
            &["check", "--suite", "lg-bound"],
            "graph 4\n0 1\n1 2\n2 3\n"
        )),
        2
    );
    // 2: unsupported exhaustive size
    assert_eq!(code(&run(&["search", "--n", "9"])), 2);
    // 2: usage errors from the argument parser
    assert_eq!(code(&run(&["search", "--n", "5", "--shard", "2/2"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    // 2: invalid epsilon
    assert_eq!(
        code(&run_with_stdin(
            &["witness", "--epsilon", "0"],
            "hypergraph 4\n"
        )),
        2
    );
    assert_eq!(
        code(&run_with_stdin(
            &["witness", "--epsilon", "-1/4"],
            "hypergraph 4\n"
        )),
        2
    );
}

#[test]
fn generated_documents_parse_back() {
    for family in [
        "bipartite",
        "chordal",
        "one-two-metric",
        "random-graph",
        "random-hypergraph",
    ] {
        let out = run(&["gen", "--family", family, "--n", "6", "--seed", "3"]);
        assert_eq!(code(&out), 0, "gen {family}");
        let doc = stdout_str(&out);
        // every generated document must parse and report lines cleanly
        let lines = run_with_stdin(&["lines"], &doc);
        assert_eq!(code(&lines), 0, "lines on generated {family}: {doc}");
        // and reruns with the same seed reproduce it exactly
        let again = run(&["gen", "--family", family, "--n", "6", "--seed", "3"]);
        assert_eq!(doc, stdout_str(&again));
    }

    // chordal output survives the independent induced-cycle scan
    let out = run(&["gen", "--family", "chordal", "--n", "7", "--seed", "11"]);
    let doc = stdout_str(&out);
    let mut lines = doc.lines();
    let header = lines.next().expect("header");
    assert!(header.starts_with("graph 7"));
    let edges: Vec<(u32, u32)> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    let g = hyperlines::metrics::Graph::new(7, edges).unwrap();
    assert!(hyperlines::metrics::is_chordal_by_scan(&g));
}

#[test]
fn witness_certificates_revalidate_via_check() {
    let input = "hypergraph 5\n0 1 2\n2 3 4\n";
    let out = run_with_stdin(&["witness", "--epsilon", "1/4"], input);
    assert_eq!(code(&out), 0);
    let cert = stdout_str(&out);
    assert!(cert.starts_with("certificate 1\n"));

    let check = run_with_stdin(&["check"], &cert);
    assert_eq!(code(&check), 0);
    assert!(stdout_str(&check).contains("suite certificate PASS"));

    // tampering flips the exit code to 1
    let broken = cert.replace("pigeonhole_r", "pigeonhole_r_oops");
    let check = run_with_stdin(&["check"], &broken);
    assert_eq!(code(&check), 1);
    assert!(stdout_str(&check).contains("FAIL"));

    // greedy mode flags itself and still validates
    let out = run_with_stdin(&["witness", "--epsilon", "1/4", "--mode", "greedy"], input);
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).contains("heuristic true"));
}

#[test]
fn witness_requires_no_universal_line() {
    let out = run_with_stdin(&["witness", "--epsilon", "1/4"], "hypergraph 3\n0 1 2\n");
    assert_eq!(code(&out), 2);
}

#[test]
fn search_reports_are_deterministic() {
    let a = run(&["search", "--n", "5"]);
    let b = run(&["search", "--n", "5"]);
    assert_eq!(a.stdout, b.stdout);

    // frozen minima for the smallest tables
    assert!(stdout_str(&run(&["search", "--n", "3"])).contains("min_m 3"));
    assert!(stdout_str(&run(&["search", "--n", "4"])).contains("min_m 4"));

    let a = run(&[
        "search", "--n", "9", "--mode", "sampled", "--trials", "120", "--seed", "5",
    ]);
    let b = run(&[
        "search", "--n", "9", "--mode", "sampled", "--trials", "120", "--seed", "5",
    ]);
    assert_eq!(a.stdout, b.stdout);

    // sharded reports agree with the whole run on the minimum
    let whole = stdout_str(&run(&["search", "--n", "4"]));
    let shard0 = stdout_str(&run(&["search", "--n", "4", "--shard", "0/2"]));
    let shard1 = stdout_str(&run(&["search", "--n", "4", "--shard", "1/2"]));
    let grab_examined = |s: &str| -> u64 {
        s.lines()
            .find(|l| l.starts_with("examined "))
            .and_then(|l| l.split_whitespace().nth(1))
            .and_then(|t| t.parse().ok())
            .expect("examined")
    };
    assert_eq!(
        grab_examined(&whole),
        grab_examined(&shard0) + grab_examined(&shard1)
    );
}

#[test]
fn checkpointed_search_resumes_mid_range() {
    let dir = tempfile::tempdir().expect("tempdir");
    let ckpt = dir.path().join("ckpt.json");

    // clean full run for reference
    let reference = run(&["search", "--n", "5"]);

    // run once to produce a complete checkpoint, then rewind its cursor to
    // the middle of the range and strip the results it would have seen
    let first = run(&[
        "search",
        "--n",
        "5",
        "--checkpoint",
        ckpt.to_str().unwrap(),
    ]);
    assert_eq!(code(&first), 0);
    let mut state: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ckpt).unwrap()).unwrap();
    // replay from scratch but only through the first half
    state["cursor"] = serde_json::json!(512);
    let half = run(&["search", "--n", "5", "--shard", "0/2"]);
    let half_text = stdout_str(&half);
    let grab = |key: &str| -> serde_json::Value {
        half_text
            .lines()
            .find(|l| l.starts_with(&format!("{key} ")))
            .map(|l| {
                serde_json::json!(l
                    .split_whitespace()
                    .nth(1)
                    .unwrap()
                    .parse::<u64>()
                    .unwrap())
            })
            .unwrap_or(serde_json::Value::Null)
    };
    state["examined"] = grab("examined");
    state["min_m"] = grab("min_m");
    let hist: std::collections::BTreeMap<String, u64> = half_text
        .lines()
        .filter(|l| l.starts_with("histogram "))
        .map(|l| {
            let mut it = l.split_whitespace().skip(1);
            (
                it.next().unwrap().to_string(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    state["histogram"] = serde_json::json!(hist);
    let wit_index = half_text
        .lines()
        .find(|l| l.starts_with("witness index "))
        .map(|l| l.split_whitespace().nth(2).unwrap().parse::<u64>().unwrap());
    if let Some(index) = wit_index {
        let hedges: Vec<[u32; 3]> = half_text
            .lines()
            .skip_while(|l| !l.starts_with("hypergraph"))
            .skip(1)
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let v: Vec<u32> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
                [v[0], v[1], v[2]]
            })
            .collect();
        state["witness"] = serde_json::json!({"index": index, "n": 5, "hedges": hedges});
    }
    std::fs::write(&ckpt, serde_json::to_string_pretty(&state).unwrap()).unwrap();

    // resuming from the half-way checkpoint must reproduce the full report
    let resumed = run(&[
        "search",
        "--n",
        "5",
        "--checkpoint",
        ckpt.to_str().unwrap(),
    ]);
    assert_eq!(code(&resumed), 0);
    assert_eq!(reference.stdout, resumed.stdout);

    // a checkpoint from a different task is rejected
    let other = run(&[
        "search",
        "--n",
        "4",
        "--checkpoint",
        ckpt.to_str().unwrap(),
    ]);
    assert_eq!(code(&other), 2);
}
