//! End-to-end tests of the command-line interface, including the exit-code
//! contract: 0 success, 2 infeasible, 3 input error.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sencomp"))
}

struct Fixture {
    dir: PathBuf,
}

impl Fixture {
    fn new(name: &str) -> Fixture {
        let dir = std::env::temp_dir().join(format!("sencomp-cli-{}-{}", name, std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn write(&self, name: &str, content: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, content).unwrap();
        p
    }

    fn train_models(&self) -> (PathBuf, PathBuf) {
        let corpus = self.write(
            "corpus.txt",
            "This is an example to test sentence compression with the model .\n\
             The man saw the dog with the telescope .\n\
             this is a small test sentence .\n",
        );
        let tagged = self.write(
            "tagged.txt",
            "This/DT is/VBZ an/DT example/NN to/TO test/VB sentence/NN compression/NN \
             with/IN the/DT model/NN ./.\n\
             The/DT man/NN saw/VBD the/DT dog/NN with/IN the/DT telescope/NN ./.\n",
        );
        let lm = self.path("lm.model");
        let tagger = self.path("tagger.model");
        let out = bin()
            .args(["train-lm", "--corpus"])
            .arg(&corpus)
            .arg("--out")
            .arg(&lm)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        let out = bin()
            .args(["train-tagger", "--corpus"])
            .arg(&tagged)
            .arg("--out")
            .arg(&tagger)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        (lm, tagger)
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn tag_and_parse_round_trip() {
    let fx = Fixture::new("tagparse");
    let (_lm, tagger) = fx.train_models();
    let out = bin()
        .args(["tag", "--tagger"])
        .arg(&tagger)
        .args(["--text", "The man saw the dog with the telescope ."])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "The/DT man/N saw/V the/DT dog/N with/IN the/DT telescope/N ./SYM"
    );

    // parsing the pre-tagged output needs no tagger model
    let out = bin()
        .args(["parse", "--text", "The/DT man/N saw/V the/DT dog/N ./SYM"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        stdout(&out).trim(),
        "(S (NP (DT The) (NP (N man))) (VP (V saw) (NP (DT the) (NP (N dog)))) (SYM .))"
    );
}

#[test]
fn compress_hybrid_keeps_trunk() {
    let fx = Fixture::new("compress");
    let (lm, tagger) = fx.train_models();
    let dump = fx.path("instance.lp");
    let trace = fx.path("dca.csv");
    let out = bin()
        .args(["compress", "--lm"])
        .arg(&lm)
        .arg("--tagger")
        .arg(&tagger)
        .args([
            "--text",
            "This is an example to test sentence compression with MIP model .",
            "--rate",
            "0.7",
            "--model",
            "hybrid",
            "--stats",
        ])
        .arg("--dump-instance")
        .arg(&dump)
        .arg("--dca-trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        stdout(&out).trim(),
        "This is an example to test sentence compression ."
    );
    assert!(stderr(&out).contains("stats nodes="));
    let dump_text = fs::read_to_string(&dump).unwrap();
    assert!(dump_text.starts_with("blp v1 vars="));
    let trace_text = fs::read_to_string(&trace).unwrap();
    assert!(trace_text.starts_with("iteration,objective,penalty"));
}

#[test]
fn exit_codes() {
    let fx = Fixture::new("exits");
    let (lm, tagger) = fx.train_models();
    // infeasible rate: the trunk exceeds the allowed length
    let out = bin()
        .args(["compress", "--lm"])
        .arg(&lm)
        .arg("--tagger")
        .arg(&tagger)
        .args([
            "--text",
            "This is an example to test sentence compression with MIP model .",
            "--rate",
            "0.25",
            "--model",
            "hybrid",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));

    // missing model file is an input error
    let out = bin()
        .args(["compress", "--lm", "/nonexistent/lm.model", "--text", "a b", "--model", "prob"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // sentences under two tokens are rejected as input errors
    let out = bin()
        .args(["compress", "--lm"])
        .arg(&lm)
        .args(["--text", "word", "--model", "prob"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn evaluate_writes_report_and_csv() {
    let fx = Fixture::new("evaluate");
    let (lm, _tagger) = fx.train_models();
    let gold = fx.write(
        "gold.tsv",
        "this is a small test sentence .\tthis is a small test sentence .\n",
    );
    let csv = fx.path("per-sentence.csv");
    let out = bin()
        .args(["evaluate", "--gold"])
        .arg(&gold)
        .arg("--csv")
        .arg(&csv)
        .arg("--lm")
        .arg(&lm)
        .args(["--rate", "1.0", "--model", "prob"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("mean F 1.0000"), "{}", text);
    assert!(fs::read_to_string(&csv).unwrap().lines().count() == 2);
}

#[test]
fn benchmark_agrees_with_brute_force() {
    let out = bin()
        .args([
            "benchmark",
            "--instances",
            "5",
            "--vars",
            "10",
            "--rows",
            "5",
            "--seed",
            "11",
            "--workers",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("agreement 5/5"));
}
