use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylkit")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn validate_one_chamber_reaches_weyl() {
    let o = run(&["validate", path(&data("one_chamber_i2_3.json")), "--level", "weyl"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["level"], "weyl");
    assert_eq!(r["target"], "weyl");
}

#[test]
fn validate_without_suite_names_the_uncovered_geodesic() {
    let o = run(&["validate", path(&data("one_chamber_i2_3_no_suite.json")), "--level", "2-weyl"]);
    assert_eq!(o.status.code(), Some(1));
    let r = stdout_json(&o);
    assert_eq!(r["target"], "2-weyl");
    let failed: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert_eq!(failed.len(), 1);
    let galleries: Vec<String> = failed[0]["witness"]["galleries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect())
        .collect();
    assert!(galleries.iter().any(|g| g == "aba" || g == "bab"), "{galleries:?}");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"chambers\": [\"c0\",").unwrap();
    let o = run(&["validate", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let o = run(&["validate", path(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cover_of_one_chamber_has_six_chambers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cover.json");
    let map = dir.path().join("map.json");
    let o = run(&["cover", path(&data("one_chamber_i2_3.json")), "--out", path(&out), "--map-out", path(&map)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["chambers"], 6);
    let cover = read_json(&out);
    assert_eq!(cover["chambers"].as_array().unwrap().len(), 6);
    let m = read_json(&map);
    assert!(m["chambers"].as_object().unwrap().values().all(|v| v == "c0"));
    let o = run(&["validate", path(&out), "--level", "building"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn cover_of_fano_is_bijective() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cover.json");
    let map = dir.path().join("map.json");
    let o = run(&["cover", path(&data("fano.json")), "--out", path(&out), "--map-out", path(&map)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["chambers"], 21);
    let m = read_json(&map);
    for key in ["chambers", "edges"] {
        let entries = m[key].as_object().unwrap();
        let mut images: Vec<&str> = entries.values().map(|v| v.as_str().unwrap()).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), entries.len(), "{key} map is not injective");
    }
    assert_eq!(m["edges"].as_object().unwrap().len(), 84);
}

#[test]
fn infinite_cover_needs_a_radius() {
    let file = data("one_chamber_infinite.json");
    let o = run(&["cover", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--radius"));
    let o = run(&["cover", path(&file), "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["chambers"], 7);
    assert_eq!(r["complete"], false);
}

#[test]
fn pi1_of_one_chamber() {
    let o = run(&["pi1", path(&data("one_chamber_i2_3.json")), "--tietze"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let (json, plain) = text.rsplit_once("}\n").unwrap();
    let p: Value = serde_json::from_str(&format!("{json}}}")).unwrap();
    assert_eq!(p["generators"], serde_json::json!(["a", "b"]));
    assert_eq!(p["relators"], serde_json::json!([["a", "a"], ["b", "b"], ["a", "b", "a", "b", "a", "b"]]));
    assert_eq!(plain.trim(), "⟨ a, b | a^2, b^2, (a b)^3 ⟩");
}

#[test]
fn pi1_with_explicit_tree() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.json");
    let hex = read_json(&data("hexagon.json"));
    // a path through the six chambers, each edge oriented away from the least chamber
    let path_edges = ["s:1-s", "t:s-st", "s:st-sts", "t:ts-sts", "s:t-ts"];
    assert!(path_edges
        .iter()
        .all(|e| hex["edges"].as_array().unwrap().iter().any(|x| x["id"] == *e)));
    std::fs::write(&tree, serde_json::to_string(&path_edges).unwrap()).unwrap();
    let choice = format!("file:{}", path(&tree));
    let o = run(&["pi1", path(&data("hexagon.json")), "--tietze", "--tree", &choice]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("⟨  |  ⟩"));
    let o = run(&["pi1", path(&data("hexagon.json")), "--tree", "file:/nonexistent"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn residue_of_fano_is_a_line() {
    let fano = read_json(&data("fano.json"));
    let c0 = fano["chambers"][0].as_str().unwrap();
    let o = run(&["residue", path(&data("fano.json")), "--types", "s", "--chamber", c0]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["chambers"].as_array().unwrap().len(), 3);
    assert_eq!(r["coxeter_matrix"]["generators"], serde_json::json!(["s"]));
    let o = run(&["residue", path(&data("fano.json")), "--types", "x", "--chamber", c0]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quotient_then_cover_recovers_the_building() {
    let dir = tempfile::tempdir().unwrap();
    let hex = data("hexagon.json");
    for (action, chambers) in [("hexagon_regular_action.json", 1), ("hexagon_w0_action.json", 3)] {
        let q = dir.path().join(format!("q-{action}"));
        let o = run(&["quotient", path(&hex), path(&data(action)), "--out", path(&q)]);
        assert_eq!(o.status.code(), Some(0), "{action}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(read_json(&q)["chambers"].as_array().unwrap().len(), chambers);
        let o = run(&["cover", path(&q)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout_json(&o)["chambers"], 6, "{action}");
    }
}

#[test]
fn non_free_action_is_rejected() {
    let o = run(&["quotient", path(&data("one_chamber_i2_3.json")), path(&data("trivial_action.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not free"));
    let o = run(&["quotient", path(&data("hexagon.json")), path(&data("trivial_action.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quotient_by_regular_action_is_the_one_chamber_file() {
    let o = run(&["quotient", path(&data("hexagon.json")), path(&data("hexagon_regular_action.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/one_chamber_i2_3.canonical.json");
    assert_eq!(String::from_utf8(o.stdout).unwrap(), std::fs::read_to_string(golden).unwrap());
}

#[test]
fn defining_graph_of_fano() {
    let o = run(&["defining-graph", path(&data("fano.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let g = stdout_json(&o);
    assert_eq!(g["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(g["edges"].as_array().unwrap().len(), 1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let fano = data("fano.json");
    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|k| {
            let out = dir.path().join(format!("c{k}.json"));
            let map = dir.path().join(format!("m{k}.json"));
            run(&["cover", path(&fano), "--out", path(&out), "--map-out", path(&map)]);
            (std::fs::read(&out).unwrap(), std::fs::read(&map).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    for args in [
        vec!["validate", path(&fano)],
        vec!["pi1", path(&fano)],
        vec!["defining-graph", path(&fano)],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn cap_from_environment_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_weylkit"))
        .args(["cover", path(&data("fano.json"))])
        .env("WEYLKIT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_weylkit"))
        .args(["cover", path(&data("fano.json"))])
        .env("WEYLKIT_CAP", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
