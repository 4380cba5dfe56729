use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn graphbpe<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_graphbpe"))
        .args(args)
        .output()
        .expect("spawn graphbpe")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

struct Run {
    dir: TempDir,
}

impl Run {
    fn new() -> Self {
        Run {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }
}

fn train_words(run: &Run, workers: &str) -> Output {
    graphbpe([
        "train",
        "--input",
        data("words.json").to_str().unwrap(),
        "--format",
        "json",
        "--contextualizer",
        "pse",
        "--out",
        &run.arg("vocab.json"),
        "--stats",
        &run.arg("steps.csv"),
        "--snapshots",
        &run.arg("snapshots.json"),
        "--workers",
        workers,
    ])
}

#[test]
fn train_words_learns_eight_rules() {
    let run = Run::new();
    let out = train_words(&run, "1");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let vocab: serde_json::Value = serde_json::from_str(&read(&run.path("vocab.json"))).unwrap();
    assert_eq!(vocab["format_version"], 1);
    assert_eq!(vocab["contextualizer"], "pse");
    assert_eq!(vocab["topology"]["kind"], "none");
    let rules = vocab["rules"].as_array().unwrap();
    assert_eq!(rules.len(), 8);
    assert_eq!(rules[0]["context"], "l-o");
    assert_eq!(rules[0]["frequency"], 3);
    assert_eq!(rules[1]["context"], "l\\-o-w");

    let csv = read(&run.path("steps.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(lines[0].starts_with("step,rule_context,rule_frequency,"));
    assert_eq!(lines[1], "0,,0,18,4.5,1.0,8");
    assert!(lines[2].starts_with("1,l-o,3,15,"));

    let snaps: serde_json::Value =
        serde_json::from_str(&read(&run.path("snapshots.json"))).unwrap();
    assert_eq!(snaps["snapshots"].as_array().unwrap().len(), 9);
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let files = ["vocab.json", "steps.csv", "snapshots.json"];
    let baseline = Run::new();
    assert_eq!(code(&train_words(&baseline, "1")), 0);
    for workers in ["2", "8", "0"] {
        let run = Run::new();
        assert_eq!(code(&train_words(&run, workers)), 0);
        for f in files {
            assert_eq!(
                fs::read(run.path(f)).unwrap(),
                fs::read(baseline.path(f)).unwrap(),
                "{f} with --workers {workers}"
            );
        }
    }
}

#[test]
fn apply_reproduces_training_and_stats_matches() {
    let run = Run::new();
    assert_eq!(code(&train_words(&run, "0")), 0);
    let input = data("words.json");
    let out = graphbpe([
        "apply",
        "--vocab",
        &run.arg("vocab.json"),
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        &run.arg("tokens.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let tokens: serde_json::Value = serde_json::from_str(&read(&run.path("tokens.json"))).unwrap();
    let graphs = tokens["graphs"].as_array().unwrap();
    assert_eq!(graphs.len(), 4);
    for g in graphs {
        assert_eq!(g["hypernodes"].as_array().unwrap().len(), 1);
        assert!(g["edges"].as_array().unwrap().is_empty());
    }
    assert_eq!(graphs[2]["name"], "lowest");
    assert_eq!(
        graphs[2]["hypernodes"][0]["nodes"],
        serde_json::json!([0, 1, 2, 3, 4, 5])
    );

    let out = graphbpe([
        "stats",
        "--vocab",
        &run.arg("vocab.json"),
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        &run.arg("replayed.csv"),
        "--tokens",
        &run.arg("freq.csv"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        read(&run.path("replayed.csv")),
        read(&run.path("steps.csv"))
    );
    let freq = read(&run.path("freq.csv"));
    let mut lines = freq.lines();
    assert_eq!(lines.next(), Some("identity,count"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn smiles_ring_pipeline_and_incidence_export() {
    let run = Run::new();
    let input = data("molecules.smi");
    let out = graphbpe([
        "train",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "smiles",
        "--topology",
        "ring",
        "--steps",
        "3",
        "--out",
        &run.arg("vocab.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let vocab: serde_json::Value = serde_json::from_str(&read(&run.path("vocab.json"))).unwrap();
    assert_eq!(vocab["topology"]["kind"], "ring");
    assert!(vocab["rules"].as_array().unwrap().len() <= 3);

    let out = graphbpe([
        "export-hypergraph",
        "--mode",
        "graphbpe",
        "--vocab",
        &run.arg("vocab.json"),
        "--input",
        input.to_str().unwrap(),
        "--format",
        "smiles",
        "--out",
        &run.arg("hg.tsv"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let tsv = read(&run.path("hg.tsv"));
    let mut lines = tsv.lines();
    assert_eq!(lines.next(), Some("#graphbpe-incidence v1"));
    let benzene: Vec<&str> = lines.filter(|l| l.starts_with("0\t")).collect();
    assert_eq!(
        benzene,
        ["0\t0\t0", "0\t0\t1", "0\t0\t2", "0\t0\t3", "0\t0\t4", "0\t0\t5"]
    );
    let meta: serde_json::Value =
        serde_json::from_str(&read(&run.path("hg.tsv.meta.json"))).unwrap();
    assert_eq!(meta["mode"], "graphbpe");
    assert_eq!(meta["graphs"].as_array().unwrap().len(), 5);
    assert_eq!(meta["graphs"][0]["name"], "benzene");
    assert_eq!(meta["graphs"][0]["num_vertices"], 6);
}

#[test]
fn centroid_export_needs_no_vocabulary() {
    let run = Run::new();
    let out = graphbpe([
        "export-hypergraph",
        "--mode",
        "centroid",
        "--input",
        data("words.json").to_str().unwrap(),
        "--format",
        "json",
        "--out",
        &run.arg("c.tsv"),
        "--meta",
        &run.arg("c.meta.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let tsv = read(&run.path("c.tsv"));
    let first: Vec<&str> = tsv
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("0\t"))
        .collect();
    // low: {0,1} {0,1,2} {1,2}
    assert_eq!(
        first,
        ["0\t0\t0", "0\t1\t0", "0\t0\t1", "0\t1\t1", "0\t2\t1", "0\t1\t2", "0\t2\t2"]
    );
    let meta: serde_json::Value = serde_json::from_str(&read(&run.path("c.meta.json"))).unwrap();
    assert_eq!(meta["mode"], "centroid");
    assert_eq!(meta["graphs"][2]["num_hyperedges"], 6);
}

#[test]
fn tudataset_directory_input() {
    let run = Run::new();
    let dir = run.path("TOY");
    fs::create_dir(&dir).unwrap();
    fs::write(
        dir.join("TOY_A.txt"),
        "1, 2\n2, 1\n2, 3\n3, 2\n4, 5\n5, 4\n",
    )
    .unwrap();
    fs::write(dir.join("TOY_graph_indicator.txt"), "1\n1\n1\n2\n2\n").unwrap();
    fs::write(dir.join("TOY_node_labels.txt"), "0\n1\n0\n0\n1\n").unwrap();
    let out = graphbpe([
        "train",
        "--input",
        dir.to_str().unwrap(),
        "--format",
        "tud",
        "--contextualizer",
        "pse",
        "--out",
        &run.arg("vocab.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let vocab: serde_json::Value = serde_json::from_str(&read(&run.path("vocab.json"))).unwrap();
    assert_eq!(vocab["rules"][0]["context"], "0-1");
    assert_eq!(vocab["rules"][0]["frequency"], 3);
}

#[test]
fn usage_errors_exit_one() {
    let run = Run::new();
    assert_eq!(code(&graphbpe(["frobnicate"])), 1);
    assert_eq!(code(&graphbpe(["train", "--format", "json"])), 1);
    let out = graphbpe([
        "export-hypergraph",
        "--input",
        data("words.json").to_str().unwrap(),
        "--format",
        "json",
        "--out",
        &run.arg("x.tsv"),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--vocab"));
    assert!(!run.path("x.tsv").exists());
    assert_eq!(code(&graphbpe(["--help"])), 0);
}

#[test]
fn data_errors_exit_two_with_location() {
    let run = Run::new();

    let out = graphbpe([
        "train",
        "--input",
        &run.arg("absent.json"),
        "--format",
        "json",
        "--out",
        &run.arg("v.json"),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("absent.json"));

    let smi = run.path("bad.smi");
    fs::write(&smi, "CCO\nc1ccc\n").unwrap();
    let out = graphbpe([
        "train",
        "--input",
        smi.to_str().unwrap(),
        "--format",
        "smiles",
        "--out",
        &run.arg("v.json"),
    ]);
    assert_eq!(code(&out), 2);
    let msg = stderr(&out);
    assert!(msg.contains("bad.smi") && msg.contains('2'), "{msg}");

    let json = run.path("bad.json");
    fs::write(&json, r#"{"graphs":[{"labels":["a"],"edges":[[0,3]]}]}"#).unwrap();
    let out = graphbpe([
        "train",
        "--input",
        json.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        &run.arg("v.json"),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("graphs[0].edges[0]"));

    let vocab = run.path("future.json");
    fs::write(
        &vocab,
        r#"{"format_version":2,"contextualizer":"pse","topology":{"kind":"none","min_clique_size":3},"rules":[]}"#,
    )
    .unwrap();
    let out = graphbpe([
        "apply",
        "--vocab",
        vocab.to_str().unwrap(),
        "--input",
        data("words.json").to_str().unwrap(),
        "--format",
        "json",
        "--out",
        &run.arg("t.json"),
    ]);
    assert_eq!(code(&out), 2);
    assert!(!run.path("t.json").exists());
}
