use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use spaceform_cli::spec_lang::{grid_line, parse_grid, parse_group_spec};
use spaceform_cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use spaceform_core::{Action, GroupSpec};

fn spaceform(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spaceform"))
        .args(args)
        .env_remove("SPACEFORM_CACHE_DIR")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn binary_exit_codes() {
    let (code, out, _) = spaceform(&["group-info", "T*(2)"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("72"));

    let (code, _, err) = spaceform(&["group-info", "T*(2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("column"));

    let (code, _, err) = spaceform(&["group-info", "C(5)x(C(7)xT*(3))[u=2,v=1]"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("u^7"), "{err}");

    let (code, _, _) = spaceform(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);

    let (code, _, err) = spaceform(&["count", "--family", "T", "--a", "6", "--n", "1"]);
    assert_eq!(code, EXIT_DOMAIN, "{err}");
}

#[test]
fn json_envelope() {
    let (code, out, _) = spaceform(&["--json", "count", "--family", "O", "--n", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "engine_version", "params", "results", "warnings"]);
    assert_eq!(v["command"], "count");
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run_once = || {
        Command::new(env!("CARGO_BIN_EXE_spaceform"))
            .args(["--json", "aut", "O*(1)"])
            .env("SPACEFORM_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run_once();
    assert!(first.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run_once();
    assert_eq!(first.stdout, second.stdout);

    let (_, uncached, _) = spaceform(&["--json", "--no-cache", "aut", "O*(1)"]);
    assert_eq!(uncached.as_bytes(), &first.stdout[..]);
}

#[test]
fn corrupted_cache_is_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--json", "--cache-dir", d, "aut", "Q8"];
    let clean = run(["spaceform"].iter().chain(&args));
    assert_eq!(clean.code, EXIT_OK);
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), b"garbage").unwrap();
    }
    let again = run(["spaceform"].iter().chain(&args));
    assert_eq!(again.code, EXIT_OK);
    let a: Value = serde_json::from_str(&clean.stdout).unwrap();
    let b: Value = serde_json::from_str(&again.stdout).unwrap();
    assert_eq!(a["results"], b["results"]);
    assert_eq!(b["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn grid_files_round_trip() {
    let text = "# sample\nC(1)x(C(1)xT*(1))[] k=1\n\nC(5) k=2\n";
    let cells = parse_grid(text).unwrap();
    assert_eq!(cells.len(), 2);
    let printed: String = cells.iter().map(|c| grid_line(c) + "\n").collect();
    assert_eq!(parse_grid(&printed).unwrap(), cells);
    assert!(parse_grid("C(5) k=x\n").unwrap_err().contains("line 1"));
}

#[test]
fn reconcile_with_grid_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.txt");
    std::fs::write(&path, "C(1)x(C(1)xT*(1))[] k=1\n").unwrap();
    let (code, out, err) = spaceform(&["reconcile", "--grid", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("mismatch (recorded)"));
}

fn leaf() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (1u64..50).prop_map(GroupSpec::Cyclic),
        Just(GroupSpec::Q8),
        Just(GroupSpec::Q16),
        (1u32..4).prop_map(GroupSpec::TStar),
        (1u32..4).prop_map(GroupSpec::OStar),
    ]
}

fn spec() -> impl Strategy<Value = GroupSpec> {
    leaf().prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| GroupSpec::direct(l, r)),
            (1u64..40, 1u64..40, 1u64..40, 1u64..40, inner).prop_map(|(a, u, v, w, h)| {
                GroupSpec::semidirect(h, Action::new(a, u % a.max(1), v % a.max(1), w % a.max(1)))
            }),
        ]
    })
}

proptest! {
    #[test]
    fn canonical_text_is_a_fixed_point(s in spec()) {
        let text = s.to_string();
        match parse_group_spec(&text) {
            Ok(parsed) => {
                prop_assert_eq!(parsed.to_string(), text);
                prop_assert_eq!(parsed.order().unwrap(), s.order().unwrap());
            }
            Err(e) => prop_assert!(s.validate().is_err(), "{}", e),
        }
    }

    #[test]
    fn parse_errors_point_inside_the_input(text in "[CQTO*x()0-9\\[\\]uvw=,]{0,16}") {
        if let Err(e) = parse_group_spec(&text) {
            prop_assert!(e.position <= text.len());
        }
    }
}
