//! End-to-end tests of the binary: output contracts, exit codes, and
//! determinism across worker counts.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn kgrundy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgrundy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn tmpfile(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("kgrundy-cli-{}-{name}", std::process::id()));
    fs::write(&path, content).unwrap();
    path
}

#[test]
fn solve_reports_the_cycle_value() {
    let out = kgrundy(&["solve", "--family", "cycle:6", "--variant", "plain", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("value: 5"), "got: {text}");
    assert!(text.contains("order:"));
}

#[test]
fn solve_json_witness_round_trips_through_verify() {
    let out = kgrundy(&[
        "solve", "--family", "cycle:6", "--variant", "plain", "--k", "2", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["value"], 5);
    assert_eq!(parsed["witness"]["order"].as_array().unwrap().len(), 5);

    let cert = tmpfile("roundtrip.json", &parsed["witness"].to_string());
    let verify = kgrundy(&[
        "verify",
        "--family",
        "cycle:6",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&verify), 0, "stdout: {}", stdout(&verify));
    assert!(stdout(&verify).contains("valid"));
}

#[test]
fn verify_rejects_a_repeated_vertex_with_exit_one() {
    let cert = tmpfile(
        "dup.json",
        r#"{"variant":"plain","k":2,"order":[0,1,0],"witnesses":[]}"#,
    );
    let out = kgrundy(&[
        "verify",
        "--family",
        "cycle:6",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("invalid at index 2"), "got: {text}");
    assert!(text.contains("repeats"), "got: {text}");
}

#[test]
fn witness_gadget_verifies_with_fourteen_steps() {
    let out = kgrundy(&[
        "witness", "--construction", "gadget", "--h", "3", "--verify", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["length"], 14);
    assert_eq!(parsed["verified"], true);
    assert_eq!(parsed["witness"]["k"], 2);
}

#[test]
fn witness_requires_construction_parameters() {
    let out = kgrundy(&["witness", "--construction", "grid", "--m", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn family_table_lists_grid_closed_forms() {
    let out = kgrundy(&[
        "family", "--spec", "grid:3,4", "--k-max", "2", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("grid:3,4,plain,2,11,11,true"), "got: {text}");
    assert!(text.contains("grid:3,4,l,2,12,12,true"), "got: {text}");
}

#[test]
fn forcing_json_carries_value_trace_and_reversed_sequence() {
    let out = kgrundy(&[
        "forcing", "--family", "cycle:6", "--k", "1", "--emit-z", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["forcing_number"], 2);
    assert_eq!(parsed["complete"], true);
    assert_eq!(parsed["z_sequence"]["order"].as_array().unwrap().len(), 4);
}

#[test]
fn forcing_accepts_an_explicit_initial_set() {
    let out = kgrundy(&[
        "forcing", "--family", "path:3", "--k", "1", "--initial", "1", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // The middle of a path has two white neighbors, so nothing fires.
    assert_eq!(parsed["complete"], false);
    assert_eq!(parsed["trace"]["waves"].as_array().unwrap().len(), 0);
}

#[test]
fn audit_stream_file_exits_clean() {
    let stream = tmpfile("stream.g6", "D?{\nDqc\nC]\n");
    let out = kgrundy(&[
        "audit",
        "--graph",
        stream.to_str().unwrap(),
        "--ks",
        "1,2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("instance,n,k,"), "got: {text}");
    assert_eq!(text.lines().count(), 7, "three instances, two ks, one header");
}

#[test]
fn audit_er_sample_embeds_seeds_in_labels() {
    let out = kgrundy(&[
        "audit", "--er", "6,0.5,2", "--seed", "9", "--ks", "1", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("er:6,0.5,9"), "got: {text}");
    assert!(text.contains("er:6,0.5,10"), "got: {text}");
}

#[test]
fn conjecture_cube_pinch_and_exact() {
    let out = kgrundy(&["conjecture", "cube", "--d", "5", "--k", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["status"]["status"], "confirmed_pinch");
    assert_eq!(parsed["status"]["value"], 31);

    let out = kgrundy(&["conjecture", "cube", "--d", "3", "--k", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("confirmed by exact search"));
}

#[test]
fn conjecture_product_reports_the_small_square() {
    let out = kgrundy(&[
        "conjecture", "product", "--left", "path:2", "--right", "path:2", "--k", "1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("product value: 3"), "got: {text}");
    assert!(text.contains("2 * 2 = 4"), "got: {text}");
    assert!(text.contains("smaller"), "got: {text}");
}

#[test]
fn conjecture_forcing_campaign_on_families() {
    let out = kgrundy(&[
        "conjecture", "forcing", "--family", "cycle:5", "--family", "complete:4", "--k", "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("0 fail"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&kgrundy(&["solve", "--variant", "plain", "--k", "2"])), 2);
    assert_eq!(
        code(&kgrundy(&[
            "solve", "--family", "nosuch:5", "--variant", "plain", "--k", "2"
        ])),
        2
    );
    assert_eq!(code(&kgrundy(&["audit", "--family", "cycle:5"])), 2);
    assert_eq!(
        code(&kgrundy(&[
            "solve", "--family", "grid:9,9", "--variant", "plain", "--k", "2"
        ])),
        2,
        "capacity guard maps to a usage-class exit"
    );
}

#[test]
fn worker_count_never_changes_output() {
    let base = kgrundy(&[
        "solve", "--family", "kbipartite:4,3", "--variant", "l", "--k", "2", "--format", "json",
    ]);
    let wide = kgrundy(&[
        "solve", "--family", "kbipartite:4,3", "--variant", "l", "--k", "2", "--format", "json",
        "--jobs", "4",
    ]);
    assert_eq!(code(&base), 0);
    assert_eq!(stdout(&base), stdout(&wide));

    let audit1 = kgrundy(&[
        "audit", "--family", "cycle:5", "--family", "cycle:6", "--family", "complete:5",
        "--ks", "1,2", "--format", "json",
    ]);
    let audit4 = kgrundy(&[
        "audit", "--family", "cycle:5", "--family", "cycle:6", "--family", "complete:5",
        "--ks", "1,2", "--format", "json", "--jobs", "4",
    ]);
    assert_eq!(code(&audit1), 0);
    assert_eq!(stdout(&audit1), stdout(&audit4));
}

#[test]
fn edge_list_files_are_accepted() {
    let path = tmpfile("p4.txt", "4\n0 1\n1 2\n2 3\n");
    let out = kgrundy(&[
        "solve",
        "--graph",
        path.to_str().unwrap(),
        "--fmt",
        "edgelist",
        "--variant",
        "l",
        "--k",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["value"], 4);
}

#[test]
fn z_below_min_degree_needs_the_flag_at_the_cli_too() {
    let refused = kgrundy(&["solve", "--family", "path:4", "--variant", "z", "--k", "2"]);
    assert_eq!(code(&refused), 2);
    let allowed = kgrundy(&[
        "solve", "--family", "path:4", "--variant", "z", "--k", "2", "--allow-z-below-delta",
    ]);
    assert_eq!(code(&allowed), 0);
}
