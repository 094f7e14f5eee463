mod common;

use common::{harborth_text, read_store, Sandbox};
use serde_json::Value;
use zerosum_core::GroupSequence;

#[test]
fn compute_values_and_exit_codes() {
    let sb = Sandbox::new();
    let (code, v) = sb.json(&["compute", "s", "--group", "3,3"]);
    assert_eq!(
        (code, v["value"].as_u64(), v["exhaustive"].as_bool()),
        (0, Some(9), Some(true))
    );
    let (code, v) = sb.json(&["compute", "D", "--group", "5"]);
    assert_eq!((code, v["value"].as_u64()), (0, Some(5)));
    let (code, v) = sb.json(&["compute", "g", "--group", "3,3,3"]);
    assert_eq!((code, v["value"].as_u64()), (0, Some(10)));
    let (code, v) = sb.json(&["--budget-nodes", "5", "compute", "s", "--group", "4,4"]);
    assert_eq!((code, v["exhaustive"].as_bool()), (2, Some(false)));
    for bad in [
        &["compute", "s", "--group", "3,4"][..],
        &["compute", "s", "--group", "0"],
        &["compute", "x", "--group", "3"],
    ] {
        let r = sb.run(bad);
        assert_eq!(r.code, 1, "{bad:?}: {}", r.stderr);
        assert!(r.stderr.starts_with("error:"), "{}", r.stderr);
    }
}

#[test]
fn check_exit_codes() {
    let sb = Sandbox::new();
    let h = sb.write("h.txt", &harborth_text(3, 2));
    assert_eq!(
        sb.run(&["check", h.to_str().unwrap(), "--length", "3"])
            .code,
        3
    );
    let z = sb.write("z.txt", "group: 3\n3 x (0)\n");
    let r = sb.run(&["--json", "check", z.to_str().unwrap(), "-L", "3"]);
    assert_eq!(r.code, 0);
    let w = GroupSequence::parse_text(r.json()["witness"].as_str().unwrap()).unwrap();
    assert_eq!(w.to_text(), "group: 3\n3 x (0)\n");
    let bad = sb.write("bad.txt", "group: 3\n1 x (1)\nthree x (0)\n");
    let r = sb.run(&["check", bad.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    assert_eq!(
        sb.run(&["check", sb.path("missing.txt").to_str().unwrap()])
            .code,
        1
    );
}

#[test]
fn d0_and_property_d_exit_codes() {
    let sb = Sandbox::new();
    let (code, v) = sb.json(&["verify-d0", "--group", "2", "--c", "1"]);
    assert_eq!((code, v["outcome"].as_str()), (3, Some("counterexample")));
    assert_eq!(v["g"], serde_json::json!([0]));
    assert_eq!(v["t"], "group: 2\n1 x (1)\n");
    let (code, v) = sb.json(&["verify-d0", "--group", "3,3", "--c", "9"]);
    assert_eq!((code, v["outcome"].as_str()), (0, Some("holds")));
    let (code, v) = sb.json(&[
        "--budget-nodes",
        "100",
        "verify-d0",
        "--group",
        "4,3",
        "--c",
        "8",
    ]);
    assert_eq!((code, v["outcome"].as_str()), (2, Some("inconclusive")));
    let (code, v) = sb.json(&["verify-d", "--group", "2,2,2"]);
    assert_eq!(
        (code, v["holds"].as_bool(), v["c"].as_u64()),
        (0, Some(true), Some(8))
    );
    assert_eq!(
        sb.run(&["--budget-nodes", "2", "verify-d", "--group", "5,5"])
            .code,
        2
    );
}

#[test]
fn bounds_commands() {
    let sb = Sandbox::new();
    let (code, v) = sb.json(&["threshold", "--theorem1", "65,3,9"]);
    assert_eq!((code, v["value"].as_str()), (0, Some("11265887744")));
    assert_eq!(sb.run(&["threshold", "--theorem1", "64,3,9"]).code, 1);
    assert_eq!(sb.run(&["threshold"]).code, 1);
    let (code, v) = sb.json(&["conjecture", "--c42", "--n", "5", "--r", "2"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("consistent")));
    let (code, v) = sb.json(&["conjecture", "--c42", "--n", "7", "--r", "3"]);
    assert_eq!((code, v["status"].as_str()), (2, Some("unknown")));
    // a wrong g(C_3^2) makes the conjectured value contradict s(C_5^2) = 17
    let (code, v) = sb.json(&["conjecture", "--c42", "--n", "5", "--r", "2", "--g", "6"]);
    assert_eq!((code, v["status"].as_str()), (3, Some("inconsistent")));
    let (code, v) = sb.json(&["bound", "--group", "10,3"]);
    assert_eq!(
        (code, v["lower"].as_str(), v["upper"].as_str()),
        (0, Some("73"), Some("77"))
    );
    assert_eq!(
        sb.run(&["bound", "--group", "10,3", "--disable", "no-such-rule"])
            .code,
        1
    );
}

#[test]
fn identical_invocations_store_one_entry() {
    let sb = Sandbox::new();
    let args = ["compute", "s", "--group", "2,4"];
    let (_, first) = sb.json(&args);
    assert_eq!(first["cached"], false);
    let (_, second) = sb.json(&args);
    assert_eq!(second["cached"], true);
    assert_eq!(first["value"], second["value"]);
    assert_eq!(sb.store_lines().len(), 1);
    // a forced rerun recomputes the same result and adds nothing
    let (_, forced) = sb.json(&["--force", "compute", "s", "--group", "2,4"]);
    assert_eq!(forced["cached"], false);
    assert_eq!(sb.store_lines().len(), 1);
    // the cache key is the canonical group, however the factors are spelled
    let (_, again) = sb.json(&["compute", "s", "--group", "1,2,4"]);
    assert_eq!(again["cached"], true);
    sb.json(&["verify-d0", "--group", "2", "--c", "1"]);
    sb.json(&["verify-d0", "--group", "2", "--c", "1"]);
    assert_eq!(sb.store_lines().len(), 2);
}

#[test]
fn limited_results_are_not_served_from_the_store() {
    let sb = Sandbox::new();
    let (code, _) = sb.json(&["--budget-nodes", "3", "compute", "s", "--group", "4,4"]);
    assert_eq!(code, 2);
    let (code, v) = sb.json(&["compute", "s", "--group", "4,4"]);
    assert_eq!(
        (code, v["cached"].as_bool(), v["value"].as_u64()),
        (0, Some(false), Some(13))
    );
    let recs = sb.store_lines();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs.iter().filter(|r| r["exhaustive"] == true).count(), 1);
}

#[test]
fn store_flag_overrides_environment() {
    let sb = Sandbox::new();
    let other = sb.path("other.ndjson");
    sb.run(&[
        "--store",
        other.to_str().unwrap(),
        "compute",
        "D",
        "--group",
        "3",
    ]);
    assert_eq!(read_store(&other).len(), 1);
    assert!(sb.store_lines().is_empty());
}

/// Every sequence printed by a command re-parses to an equal sequence.
#[test]
fn printed_sequences_round_trip() {
    let sb = Sandbox::new();
    let mut printed: Vec<String> = Vec::new();
    let mut collect = |v: &Value, keys: &[&str]| {
        for k in keys {
            match &v[*k] {
                Value::String(s) => printed.push(s.clone()),
                Value::Array(items) => {
                    printed.extend(items.iter().filter_map(|x| x.as_str().map(String::from)))
                }
                _ => {}
            }
        }
    };
    for args in [
        &["compute", "s", "--group", "3,3"][..],
        &["compute", "D", "--group", "2,4"],
        &["compute", "g", "--group", "2,2,2"],
    ] {
        collect(&sb.json(args).1, &["extremal_sequences"]);
    }
    collect(
        &sb.json(&["verify-d0", "--group", "2", "--c", "1"]).1,
        &["t"],
    );
    collect(&sb.json(&["verify-d", "--group", "2,2"]).1, &["violators"]);
    collect(
        &sb.json(&["compose-d0", "--m", "3", "--n", "2", "--seed", "11"])
            .1,
        &["t", "witness"],
    );
    let z = sb.write("z.txt", "group: 4\n2 x (1)\n2 x (3)\n");
    collect(
        &sb.json(&["check", z.to_str().unwrap(), "-L", "4"]).1,
        &["witness"],
    );
    assert!(printed.len() >= 6, "{printed:?}");
    for text in &printed {
        let s = GroupSequence::parse_text(text).unwrap_or_else(|e| panic!("{e}: {text}"));
        assert_eq!(&s.to_text(), text);
        assert_eq!(GroupSequence::parse_text(&s.to_text()).unwrap(), s);
    }
    // the human-readable T block of a counterexample parses as well
    let r = sb.run(&["--force", "verify-d0", "--group", "2", "--c", "1"]);
    let block: String = r
        .stdout
        .lines()
        .skip_while(|l| !l.trim().starts_with("group:"))
        .take(2)
        .map(|l| format!("{}\n", l.trim()))
        .collect();
    assert_eq!(
        GroupSequence::parse_text(&block).unwrap().to_text(),
        "group: 2\n1 x (1)\n"
    );
}

#[test]
fn compose_is_seeded_and_zero_sum() {
    let sb = Sandbox::new();
    let a = sb
        .json(&["compose-d0", "--m", "2", "--n", "5", "--seed", "3"])
        .1;
    let b = sb
        .json(&["compose-d0", "--m", "2", "--n", "5", "--seed", "3"])
        .1;
    assert_eq!(a["witness"], b["witness"]);
    assert_eq!(
        (a["zero_sum"].as_bool(), a["witness_length"].as_u64()),
        (Some(true), Some(10))
    );
    let t = sb.write(
        "t.txt",
        "group: 6,6\n1 x (1,0)\n1 x (0,1)\n1 x (1,1)\n1 x (2,3)\n",
    );
    let (code, v) = sb.json(&[
        "compose-d0",
        "--m",
        "3",
        "--n",
        "2",
        "--terms",
        t.to_str().unwrap(),
        "--g0",
        "5,5",
    ]);
    assert_eq!(
        (code, v["zero_sum"].as_bool(), v["c"].as_u64()),
        (0, Some(true), Some(4))
    );
}

#[test]
fn checkpointed_d0_run_resumes_to_the_same_verdict() {
    let sb = Sandbox::new();
    let whole = sb.json(&["verify-d0", "--group", "5,3", "--c", "9"]).1;
    let ckpt = sb.path("c5.json");
    let ck = ckpt.to_str().unwrap();
    let store2 = sb.path("second.ndjson");
    let s2 = store2.to_str().unwrap();
    let (code, part) = sb.json(&[
        "--store",
        s2,
        "--budget-nodes",
        "5000",
        "verify-d0",
        "--group",
        "5,3",
        "--c",
        "9",
        "--checkpoint",
        ck,
        "--checkpoint-every",
        "2000",
    ]);
    assert_eq!(
        (code, part["outcome"].as_str(), part["checkpoint"].as_str()),
        (2, Some("inconclusive"), Some(ck))
    );
    assert!(ckpt.exists());
    let (code, done) = sb.json(&[
        "--store",
        s2,
        "verify-d0",
        "--group",
        "5,3",
        "--c",
        "9",
        "--resume",
        ck,
        "--checkpoint",
        ck,
    ]);
    assert_eq!(code, 0);
    assert_eq!(done["outcome"], whole["outcome"]);
    assert_eq!(done["orbits_tested"], whole["orbits_tested"]);
    assert_eq!(done["nodes_explored"], whole["nodes_explored"]);
    // a checkpoint for a different problem is refused
    assert_eq!(
        sb.run(&[
            "--force",
            "verify-d0",
            "--group",
            "3,3",
            "--c",
            "9",
            "--resume",
            ck
        ])
        .code,
        1
    );
}
