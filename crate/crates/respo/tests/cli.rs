use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use respo::cli::run;

fn fixture(name: &str, file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .join(file)
        .display()
        .to_string()
}

fn kb(name: &str) -> Vec<String> {
    vec![
        "--tbox".into(),
        fixture(name, "tbox.txt"),
        "--abox".into(),
        fixture(name, "abox.txt"),
        "--query".into(),
        fixture(name, "query.txt"),
    ]
}

fn respo(args: &[&str], extra: &[String]) -> (i32, String, String) {
    let mut argv: Vec<String> = vec!["respo".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.extend(extra.iter().cloned());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn score_reproduces_ms_row() {
    let (code, out, _) = respo(&["score", "--weight", "ms"], &kb("fig1"));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let want = ["0/1", "1/2", "1/2", "2/3", "1/3", "1/3", "1/3", "1/3"];
    for (i, w) in want.iter().enumerate() {
        assert_eq!(v[format!("f{i}")]["score"], *w);
    }
}

#[test]
fn shapley_drastic_reproduces_drastic_row() {
    let (code, out, _) = respo(&["shapley-drastic"], &kb("fig1"));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["f1"]["score"], "17/70");
    assert_eq!(v["f3"]["score"], "22/105");
    assert_eq!(v["f7"]["score"], "8/105");
    assert_eq!(v["f0"]["score"], "0/1");
}

#[test]
fn brute_and_if_json_are_byte_identical() {
    let (c1, brute, _) = respo(&["score", "--method", "brute"], &kb("variant"));
    let (c2, iff, _) = respo(&["score", "--method", "if"], &kb("variant"));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(brute, iff);
}

#[test]
fn output_is_independent_of_thread_count() {
    let exe = env!("CARGO_BIN_EXE_respo");
    let mut outs = Vec::new();
    for t in ["1", "4"] {
        let o = Command::new(exe)
            .args(["score", "--method", "partition"])
            .args(kb("variant"))
            .env("RESPO_THREADS", t)
            .output()
            .unwrap();
        assert!(o.status.success());
        outs.push(o.stdout);
    }
    assert_eq!(outs[0], outs[1]);
    let o = Command::new(exe)
        .arg("score")
        .args(kb("variant"))
        .env("RESPO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counts_and_filters() {
    assert_eq!(respo(&["count-ms"], &kb("fig1")).1, "3\n");
    assert_eq!(respo(&["count-fms"], &kb("fig1")).1, "{\"2\":1,\"3\":2}\n");
    assert_eq!(respo(&["count-fms", "--size", "3", "--method", "partition"], &kb("variant")).1, "2\n");
    let (code, out, _) = respo(&["score", "--fact", "f3", "--format", "table"], &kb("variant"));
    assert_eq!(code, 0);
    assert!(out.contains("2/3") && !out.contains("f4"));
    assert_eq!(respo(&["score", "--fact", "nope"], &kb("variant")).0, 2);
}

#[test]
fn unsatisfied_query_counts_zero() {
    let dir = tempfile::tempdir().unwrap();
    let q = write(dir.path(), "q.txt", "Dessert(cancalaiseSole)\n");
    let (code, out, _) = respo(
        &["count-ms", "--abox", &fixture("fig1", "abox.txt"), "--query", &q],
        &[],
    );
    assert_eq!((code, out.as_str()), (0, "0\n"));
}

#[test]
fn rewrite_and_check_if() {
    let (code, out, _) = respo(
        &["rewrite", "--tbox", &fixture("variant", "tbox.txt"), "--query", &fixture("variant", "query.txt")],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(out.matches("\nOR\n").count(), 3);
    assert!(out.contains("Shellfish(?z)"));

    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.txt", "exists r <= A\nexists r- <= A\n");
    let q = write(dir.path(), "q.txt", "A(?x)\n");
    let (code, out, _) = respo(&["check-if", "--tbox", &t, "--query", &q], &[]);
    assert_eq!(code, 1);
    assert!(out.starts_with("witness: "));
    let (code, out, _) = respo(&["check-if", "--query", &q], &[]);
    assert_eq!((code, out.as_str()), (0, "ok\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "A <= B C\n");
    let (code, _, err) = respo(&["rewrite", "--tbox", &bad, "--query", &fixture("fig1", "query.txt")], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.txt:1:8: error:"));

    let (code, _, _) = respo(&["count-ms", "--abox", "/nonexistent", "--query", &fixture("fig1", "query.txt")], &[]);
    assert_eq!(code, 2);

    let t = write(dir.path(), "t.txt", "A <= !B\n");
    let a = write(dir.path(), "a.txt", "A(c)\nB(c)\n");
    let q = write(dir.path(), "q.txt", "A(?x)\n");
    assert_eq!(respo(&["count-ms", "--tbox", &t, "--abox", &a, "--query", &q], &[]).0, 3);

    assert_eq!(respo(&["score", "--method", "if"], &kb("fig1")).0, 4);
    assert_eq!(respo(&["score", "--method", "partition"], &kb("fig1")).0, 4);
    assert_eq!(respo(&["score", "--weight", "cubic"], &kb("fig1")).0, 2);
    assert_eq!(respo(&["bogus"], &[]).0, 2);
}

#[test]
fn answer_bindings() {
    let dir = tempfile::tempdir().unwrap();
    let q = write(dir.path(), "q.txt", "free: ?d\nFishBased(?d)\n");
    let mut args = kb("fig1");
    args[5] = q;
    assert_eq!(respo(&["count-ms"], &args).0, 2);
    let (code, out, _) = respo(&["count-ms", "--answer", "d=cancalaiseSole"], &args);
    assert_eq!((code, out.as_str()), (0, "3\n"));
}

#[test]
fn weight_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.txt", "2 * 1/1\n3 * 0/1\n");
    let (code, out, _) = respo(&["score", "--weight", &format!("file:{w}")], &kb("fig1"));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["f1"]["score"], "1/1");
    assert_eq!(v["f4"]["score"], "0/1");
}

fn out_dir(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[test]
fn emit_sql_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(dir.path(), "sql");
    let (code, _, _) = respo(&["emit-sql", "--out", out.to_str().unwrap()], &kb("variant"));
    assert_eq!(code, 0);
    let schema = fs::read_to_string(out.join("schema.sql")).unwrap();
    let load = fs::read_to_string(out.join("load.sql")).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();

    let mut db = respo::sqlexec::Database::new();
    db.execute_script(&schema).unwrap();
    db.execute_script(&load).unwrap();
    let mut by_size: std::collections::BTreeMap<u64, respo_core::Rational> = Default::default();
    for q in manifest["queries"].as_array().unwrap() {
        let n = db.count(q["sql"].as_str().unwrap()).unwrap();
        let gamma: respo_core::Rational = q["gamma"].as_str().unwrap().parse().unwrap();
        *by_size.entry(q["size"].as_u64().unwrap()).or_insert_with(respo_core::Rational::zero) +=
            gamma * respo_core::Rational::from_u128(n);
    }
    assert_eq!(by_size[&2], respo_core::Rational::from_u128(1));
    assert_eq!(by_size[&3], respo_core::Rational::from_u128(2));

    let out = out_dir(dir.path(), "k3");
    respo(&["emit-sql", "--size", "3", "--out", out.to_str().unwrap()], &kb("variant"));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert!(manifest["queries"].as_array().unwrap().iter().all(|q| q["size"] == 3));
}

#[test]
fn generated_instances_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = write(d, "k3.txt", "a b\nb c\na c\n");
    let out = out_dir(d, "mvc");
    assert_eq!(respo(&["gen", "mvc", "--graph", &g, "--out", out.to_str().unwrap()], &[]).0, 0);
    let files = |o: &Path| {
        vec![
            "--tbox".to_string(),
            o.join("tbox.txt").display().to_string(),
            "--abox".to_string(),
            o.join("abox.txt").display().to_string(),
            "--query".to_string(),
            o.join("query.txt").display().to_string(),
        ]
    };
    assert_eq!(respo(&["count-ms"], &files(&out)).1, "3\n");

    let g = write(d, "dg.txt", "c x\nx d\nc d\n");
    let out = out_dir(d, "reach");
    let o = out.to_str().unwrap();
    assert_eq!(respo(&["gen", "reach", "--graph", &g, "--out", o], &[]).0, 2);
    assert_eq!(respo(&["gen", "reach", "--graph", &g, "--out", o, "--from", "c", "--to", "d"], &[]).0, 0);
    assert_eq!(respo(&["count-fms"], &files(&out)).1, "{\"2\":1,\"3\":1}\n");

    let g = write(d, "k22.txt", "bipartite: A=a1,a2 B=b1,b2\na1 b1\na1 b2\na2 b1\na2 b2\n");
    let out = out_dir(d, "pm");
    assert_eq!(respo(&["gen", "pm", "--graph", &g, "--out", out.to_str().unwrap()], &[]).0, 0);
    let count = |q: &str| {
        let args = [
            "count-ms".to_string(),
            "--method".into(),
            "images".into(),
            "--abox".into(),
            out.join("abox.txt").display().to_string(),
            "--query".into(),
            out.join(q).display().to_string(),
        ];
        let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        respo(&refs, &[]).1.trim().parse::<i64>().unwrap()
    };
    assert_eq!(count("q1.txt") - count("q2.txt"), 2);
}

#[test]
fn verify_single_instance_and_random() {
    let (code, out, _) = respo(&["verify"], &kb("variant"));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pass if = brute"));
    let (code, out, _) = respo(&["verify", "--seed", "7", "--count", "10"], &[]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("pass ")).count(), 10);
}
