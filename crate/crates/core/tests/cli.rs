use std::path::PathBuf;
use std::process::{Command, Output};

use cubecat::cube::CubeCat;
use cubecat::presheaf::{io, Presheaf};
use cubecat::site::{CrossedTable, Site};
use proptest::prelude::*;
use serde_json::Value;

fn cubecat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubecat")).args(args).output().expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cubecat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn passing_suites_exit_zero() {
    for suite in ["site-axioms", "span-identities", "cube-axioms", "presheaf-laws", "topology"] {
        let out = cubecat(&["verify", "--suite", suite, "--max-degree", "2", "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(report.to_string().contains("\"passed\":true"));
    }
}

#[test]
fn broken_crossed_table_fails_the_site_suite() {
    let table = CrossedTable::tabulate(Site::symmetric().group(), 2).unwrap();
    let mut v = table.to_json();
    let row = &mut v["restriction"]["2,2"][1][1];
    *row = Value::from(1 - row.as_u64().unwrap());
    let path = scratch("broken-table.json", &v.to_string());
    let out = cubecat(&["verify", "--suite", "site-axioms", "--site", "crossed", "--crossed-table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));

    let intact = scratch("table.json", &table.to_json().to_string());
    let out = cubecat(&["verify", "--suite", "site-axioms", "--site", "crossed", "--crossed-table", intact.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn presheaf_check_reports_functoriality_failures() {
    let cat = CubeCat::shared(Site::plain(), 1);
    let rep = Presheaf::representable(&cat, 1, 1).unwrap();
    let good = io::to_json(&rep);
    let path = scratch("rep1.json", &good.to_string());
    assert_eq!(cubecat(&["presheaf-check", path.to_str().unwrap()]).status.code(), Some(0));

    let mut bad = good.clone();
    let entry = bad["action"].as_array_mut().unwrap().iter_mut().find(|a| a["map"].as_object().unwrap().len() > 1).unwrap();
    let map = entry["map"].as_object_mut().unwrap();
    let keys: Vec<String> = map.keys().cloned().collect();
    let (a, b) = (map[&keys[0]].clone(), map[&keys[1]].clone());
    let swapped = if a == b { Value::from(format!("{}", rep.cells(0)[0])) } else { b.clone() };
    map.insert(keys[0].clone(), swapped);
    map.insert(keys[1].clone(), a);
    let path = scratch("broken.json", &bad.to_string());
    let out = cubecat(&["presheaf-check", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], Value::Bool(false));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cubecat(&["hom-count", "--src", "1"]).status.code(), Some(2));
    assert_eq!(cubecat(&["verify", "--site", "nowhere"]).status.code(), Some(2));
    assert_eq!(cubecat(&["homology", "--object", "rep:9", "--max-degree", "2"]).status.code(), Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn output_is_deterministic(site in prop::sample::select(vec!["plain", "connections", "sigma"]), m in 0usize..3, n in 0usize..3, which in 0usize..4) {
        let (src, dst) = (m.to_string(), n.to_string());
        let object = ["rep:1", "boundary:2", "tensor:rep:1:rep:1", "cylinder:boundary:1"][which];
        let runs: [Vec<&str>; 3] = [
            vec!["hom-count", "--site", site, "--src", &src, "--dst", &dst, "--format", "json"],
            vec!["realize", "--site", site, "--object", object, "--max-degree", "2", "--format", "json"],
            vec!["verify", "--site", site, "--suite", "span-identities", "--max-degree", "2", "--format", "json"],
        ];
        for args in &runs {
            let a = cubecat(args);
            let b = cubecat(args);
            prop_assert_eq!(a.status.code(), b.status.code());
            prop_assert_eq!(&a.stdout, &b.stdout);
        }
    }
}
