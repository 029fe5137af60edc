use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

struct Env {
    dir: tempfile::TempDir,
}

impl Env {
    fn new() -> Env {
        let env = Env { dir: tempfile::tempdir().unwrap() };
        env.write("a2.json", r#"{"quiver":{"vertex_count":2,"arrows":[[1,2]]},"q":2,"caps":[2,2]}"#);
        env.write("point.json", r#"{"quiver":{"vertex_count":1},"q":2,"caps":[4]}"#);
        env
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn cache(&self) -> PathBuf {
        self.path("cache")
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn run(&self, config: &str, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_hallcalc"))
            .env("HALLCALC_CACHE_DIR", self.cache())
            .arg("--config")
            .arg(self.path(config))
            .args(args)
            .output()
            .unwrap()
    }

    fn json(&self, config: &str, args: &[&str]) -> Value {
        let out = self.run(config, args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice(&out.stdout).unwrap()
    }
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hall_number_by_alias() {
    let env = Env::new();
    assert_eq!(env.json("a2.json", &["hall", "S1", "S2", "P"]), json!({ "g": 1 }));
    assert_eq!(env.json("a2.json", &["hall", "S2", "S1", "S1+S2"]), json!({ "g": 1 }));
    assert_eq!(env.json("point.json", &["hall", "S", "S", "S^2"]), json!({ "g": 3 }));
}

#[test]
fn green_report_passes() {
    let env = Env::new();
    let r = env.json("point.json", &["verify", "green", "--total-dim", "3"]);
    assert_eq!(r["passed"], json!(true));
    assert_eq!(r["check"], json!("green"));
    assert_eq!(env.json("point.json", &["green", "--total-dim", "3"]), r);
}

#[test]
fn green_beyond_table_is_usage_error() {
    let env = Env::new();
    assert_eq!(env.run("point.json", &["green", "--total-dim", "5"]).status.code(), Some(2));
}

#[test]
fn mult_on_unit_echoes_operand() {
    let env = Env::new();
    let x = json!({ "terms": [{ "coeff": "2/3", "torus": [{ "degree": 1, "exponents": [1, -1] }],
                               "stalks": [{ "degree": 0, "iso_class_id": 5, "name": "P1" }] }] });
    let ops = env.write("ops.json", &json!([{ "terms": [{ "coeff": "1/1" }] }, x]).to_string());
    assert_eq!(env.json("a2.json", &["mult", "--mode", "mh_tw", arg(&ops)]), x);
}

#[test]
fn mult_same_degree_product() {
    let env = Env::new();
    let ops = env.write(
        "ops.json",
        r#"{"operands":[{"terms":[{"coeff":"1","stalks":[{"degree":0,"iso_class_id":"S1"}]}]},
                        {"terms":[{"coeff":"1","stalks":[{"degree":0,"iso_class_id":"S2"}]}]}]}"#,
    );
    for mode in ["mh", "dh"] {
        let out = env.json("a2.json", &["mult", "--mode", mode, arg(&ops)]);
        let mut terms: Vec<(String, String)> = out["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| (t["stalks"][0]["name"].as_str().unwrap().to_string(), t["coeff"].as_str().unwrap().to_string()))
            .collect();
        terms.sort();
        assert_eq!(terms, vec![("P1".to_string(), "1/1".to_string()), ("S1+S2".to_string(), "1/1".to_string())]);
    }
}

#[test]
fn reduce_projection() {
    let env = Env::new();
    let file = env.write(
        "cx.json",
        r#"{"degrees":[{"degree":0,"dim_vector":[1,1],"arrow_maps":[[[1]]]},
                       {"degree":1,"dim_vector":[1,0],"arrow_maps":[[]]}],
            "differentials":[{"from_degree":0,"vertex_maps":[[[1]],[]]}]}"#,
    );
    let r = env.json("a2.json", &["reduce", arg(&file)]);
    assert_eq!(r["coeff"], json!("1/2"));
    assert_eq!(r["word"]["torus"], json!([{ "degree": 1, "exponents": [1, 0] }]));
    assert_eq!(r["word"]["stalks"][0]["name"], json!("S2"));
    assert_eq!(env.json("a2.json", &["reduce", "--twisted", arg(&file)])["coeff"], json!("1/1"));
}

#[test]
fn iota_and_decompose_invert() {
    let env = Env::new();
    let x = env.write("x.json", r#"{"terms":[{"coeff":"1","stalks":[{"degree":2,"iso_class_id":"P"}]}]}"#);
    let image = env.json("a2.json", &["iota", arg(&x)]);
    let term = &image["terms"][0];
    assert_eq!(term["torus"], json!([{ "degree": 2, "exponents": [-1, -1] }, { "degree": 1, "exponents": [1, 1] }]));
    let y = env.write("y.json", &image.to_string());
    let d = env.json("a2.json", &["decompose", arg(&y)]);
    assert_eq!(d["terms"][0]["torus"], json!([]));
    assert_eq!(d["terms"][0]["derived"]["stalks"][0]["degree"], json!(2));
}

#[test]
fn malformed_input_is_usage_error() {
    let env = Env::new();
    let junk = env.write("junk.json", "{");
    let out = env.run("a2.json", &["mult", "--mode", "mh", arg(&junk)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parsing"));
    assert_eq!(env.run("a2.json", &["hall", "S1", "S2", "Q"]).status.code(), Some(2));
    assert_eq!(env.run("a2.json", &["nonsense"]).status.code(), Some(2));
    env.write("bad.json", r#"{"quiver":{"vertex_count":1},"q":6,"caps":[1]}"#);
    assert_eq!(env.run("bad.json", &["reps"]).status.code(), Some(2));
}

#[test]
fn step_guard_exits_with_three() {
    let env = Env::new();
    let out = env.run("a2.json", &["--guard-steps", "1", "verify", "confluence", "--mode", "mh", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn seeded_reports_are_reproducible() {
    let env = Env::new();
    let args = ["--seed", "11", "--threads", "2", "verify", "assoc", "--mode", "mh_tw", "--samples", "30"];
    let a = env.run("a2.json", &args);
    let b = env.run("a2.json", &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["parameters"]["sampling"]["seed"], json!(11));
}

#[test]
fn cache_is_written_reused_and_repaired() {
    let env = Env::new();
    let reps = env.json("a2.json", &["reps"]);
    let files: Vec<_> = std::fs::read_dir(env.cache()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let cached = &files[0];
    assert_eq!(env.json("a2.json", &["reps"]), reps);

    std::fs::write(cached, "{ truncated").unwrap();
    let out = env.run("a2.json", &["reps"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap(), reps);

    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(cached).unwrap()).unwrap();
    file["key"]["version"] = json!(99);
    std::fs::write(cached, file.to_string()).unwrap();
    let out = env.run("a2.json", &["reps"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("version"));
}
