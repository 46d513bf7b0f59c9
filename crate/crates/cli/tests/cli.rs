use std::process::{Command, Output};

use serde_json::Value;

fn lgc(args: &str) -> Output {
    lgc_env(args, &[])
}

fn lgc_env(args: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lgc"));
    cmd.args(args.split_whitespace()).env_remove("LGC_MAX_WEIGHTS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ok(args: &str) -> String {
    let out = lgc(args);
    assert_eq!(out.status.code(), Some(0), "{args}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &str) -> Value {
    let v: Value = serde_json::from_str(&ok(&format!("{args} --format json"))).unwrap();
    assert_eq!(v["schema"], "lgc/1");
    v
}

fn code(args: &str) -> Option<i32> {
    lgc(args).status.code()
}

/// (vertex names, edges) parsed back from DOT text.
fn parse_dot(dot: &str) -> (Vec<String>, Vec<(String, String)>) {
    assert!(dot.starts_with("digraph "));
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for line in dot.lines().map(str::trim) {
        if let Some((a, b)) = line.strip_suffix(';').and_then(|l| l.split_once(" -> ")) {
            edges.push((a.to_string(), b.to_string()));
        } else if line.starts_with('v') && line.contains("[label=") {
            nodes.push(line.split_whitespace().next().unwrap().to_string());
        }
    }
    (nodes, edges)
}

#[test]
fn pc_table_rows() {
    assert_eq!(json("pc-table --n 3 --f 1 --levi 2,1")["components"].as_array().unwrap().len(), 3);
    assert_eq!(json("pc-table --n 2 --f 4 --borel")["components"].as_array().unwrap().len(), 5);
    let text = ok("pc-table --n 3 --f 1 --levi 2,1");
    assert!(text.contains("P(3)") && text.contains("(1,1,1)"));
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        "pc-table --n 3 --levi 4",
        "pc-table --n 3 --levi 2,0,1",
        "pc-table --n 3 --levi 2,1 --borel",
        "pc-table --n 0",
        "diagram --n 3 --shape 3-1",
        "diagram --n 3 --shape example5",
        "diagram --n 3 --shape full --split",
        "serre --kind split --f 2 --p 30",
        "serre --kind weird",
        "serre --kind split --f 0",
        "cycles --kind nonsplit:5 --f 2",
        "groupalg --p 4",
        "groupalg --p 5 --check nothing",
        "phigamma --kind nonsplit --f 2",
        "serre --kind split --format dot",
        "nosuchcommand",
    ] {
        assert_eq!(code(args), Some(1), "{args}");
    }
    assert_eq!(code("--help"), Some(0));
}

#[test]
fn weight_cap_from_environment() {
    let out = lgc_env("pc-table --n 3", &[("LGC_MAX_WEIGHTS", "7")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    assert_eq!(lgc_env("pc-table --n 3", &[("LGC_MAX_WEIGHTS", "9")]).status.code(), Some(0));
    assert_eq!(lgc_env("pc-table --n 3", &[("LGC_MAX_WEIGHTS", "lots")]).status.code(), Some(1));
    assert_eq!(lgc("pc-table --n 4 --f 3").status.code(), Some(0));
}

#[test]
fn diagrams() {
    let (v, e) = parse_dot(&ok("diagram --n 3 --f 1 --borel --format dot"));
    assert_eq!((v.len(), e.len()), (7, 8));
    let (v, _) = parse_dot(&ok("diagram --n 4 --f 1 --shape example5 --format dot"));
    assert_eq!(v.len(), 14);
    let (v, e) = parse_dot(&ok("diagram --n 2 --f 2 --levi 1,1 --split --format dot"));
    assert_eq!((v.len(), e.len()), (3, 0));
    // the same shape written out as a root list
    let a = ok("diagram --n 4 --levi 1,2,1 --shape 1-2,1-3,1-4 --format dot");
    assert_eq!(a, ok("diagram --n 4 --shape example5 --format dot"));
}

#[test]
fn dot_names_are_content_hashes() {
    let dot = ok("diagram --n 3 --f 2 --format dot");
    let j = json("diagram --n 3 --f 2");
    let (nodes, edges) = parse_dot(&dot);
    let ids: Vec<String> = j["vertices"].as_array().unwrap().iter().map(|v| v["id"].as_str().unwrap().into()).collect();
    assert_eq!(nodes, ids);
    assert_eq!((nodes.len(), edges.len()), (19, 28));
    for (k, v) in j["vertices"].as_array().unwrap().iter().enumerate() {
        let sums: Vec<String> = v["blocksums"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
        let key = format!("blocks=1,1,1;sums={}", sums.join(","));
        let digest = sha2_hex(&key);
        assert_eq!(nodes[k], format!("v{}", &digest[..16]));
    }
}

fn sha2_hex(s: &str) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(s.as_bytes()))
}

#[test]
fn serre_tables() {
    let text = ok("serre --kind split --f 2");
    assert!(text.contains("D for split") && text.contains("delta-orbits"));
    let j = json("serre --kind split --f 2");
    assert_eq!(j["D"].as_array().unwrap().len(), 4);
    assert_eq!(j["P"].as_array().unwrap().len(), 10);
    assert!(j["P"].as_array().unwrap().iter().all(|e| e["ideal"].is_array()));
    let orbits = j["orbits"].as_array().unwrap();
    let total: usize = orbits.iter().map(|o| o["steps"].as_array().unwrap().len()).sum();
    assert_eq!(total, 4);
    assert_eq!(json("serre --kind nonsplit:0 --f 2")["orbits"], Value::Array(vec![]));
}

#[test]
fn cycle_totals() {
    for f in 1..=3u32 {
        let j = json(&format!("cycles --kind irred --f {f} --oracle"));
        let col = j["column_totals"].as_array().unwrap();
        assert_eq!(col[0], 2u64.pow(f));
        assert_eq!(j["total"], 4u64.pow(f));
        assert_eq!(j["primes"][0], format!("({})", (0..f).map(|i| format!("z{i}")).collect::<Vec<_>>().join(",")));
    }
    assert_eq!(code("cycles --kind split --f 2 --seed 9"), Some(0));
    assert_eq!(code("cycles --kind nonsplit:0,1 --f 3"), Some(0));
}

#[test]
fn group_algebra_checks() {
    let j = json("groupalg --p 5 --f 2 --check all --oracle");
    assert!(j["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(j["oracle"], true);
    assert_eq!(code("groupalg --p 3 --f 3 --check theta"), Some(0));
    assert_eq!(code("groupalg --p 11 --f 3 --oracle"), Some(1));
}

#[test]
fn phigamma_modules() {
    for kind in ["irred", "split"] {
        for f in 1..=2 {
            let j = json(&format!("phigamma --kind {kind} --f {f} --seed 3"));
            assert_eq!(j["rank"], 1 << f);
        }
    }
    assert_eq!(code("phigamma --kind split --f 2 --p 11"), Some(0));
    assert_eq!(code("phigamma --kind split --f 2 --p 5"), Some(1));
}

#[test]
fn json_keys_are_sorted() {
    fn sorted(v: &Value) -> bool {
        match v {
            Value::Object(m) => m.keys().zip(m.keys().skip(1)).all(|(a, b)| a < b) && m.values().all(sorted),
            Value::Array(a) => a.iter().all(sorted),
            _ => true,
        }
    }
    for args in [
        "pc-table --n 3",
        "diagram --n 3",
        "serre --kind irred --f 2",
        "cycles --kind split --f 2",
        "groupalg --p 3",
        "phigamma --kind irred --f 2",
    ] {
        let text = ok(&format!("{args} --format json"));
        // key order in the text itself, not just after parsing
        let keys: Vec<&str> =
            text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{args}: {keys:?}");
        assert!(sorted(&serde_json::from_str(&text).unwrap()));
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        "diagram --n 4 --shape example5 --format dot",
        "cycles --kind irred --f 2 --seed 5",
        "phigamma --kind split --f 2 --seed 11 --format json",
    ] {
        assert_eq!(ok(args), ok(args));
    }
}
