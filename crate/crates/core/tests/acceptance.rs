//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers. Run with
//! `cargo test -p sencomp --test acceptance -- --nocapture` to see them.

use sencomp::bnb::{self, SolveStatus, SolverConfig};
use sencomp::dc::{dca, DcaConfig, PenaltyKind};
use sencomp::eval::fscore;
use sencomp::grammar::{generate_grammar, CfgGrammar};
use sencomp::ilp::{
    build, enumerate_feasible, enumerate_feasible_unguarded, BuildOptions, CompressionIndexing,
};
use sencomp::instances::random_blp;
use sencomp::ngram;
use sencomp::parser::{parse, ParseMode};
use sencomp::pipeline::{self, ModelKind, Pipeline, PipelineConfig};
use sencomp::tagger::{self, pretagged_sentence};
use sencomp::tokens::TokenSeq;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn lm_for_words(n: usize) -> (TokenSeq, ngram::NgramModel) {
    let words: Vec<String> = (0..n).map(|i| format!("w{}", i)).collect();
    let toks = TokenSeq::new(words).unwrap();
    let mut rev: Vec<String> = toks.tokens().to_vec();
    rev.reverse();
    let corpus = vec![toks.clone(), TokenSeq::new(rev).unwrap()];
    (toks, ngram::train(&corpus, 0.75).unwrap())
}

/// The 100-instance random suite shared by criteria 4 and 5.
fn suite_instances() -> Vec<sencomp::ilp::BinaryLinearProgram> {
    let mut rng = StdRng::seed_from_u64(20_240_001);
    (0..100)
        .map(|i| {
            let vars = rng.gen_range(6..=14);
            let rows = rng.gen_range(1..=8);
            random_blp(vars, rows, 1000 + i)
        })
        .collect()
}

#[test]
fn criterion_01_fscore_worked_example() {
    let reference =
        TokenSeq::parse("The aim is to give councils control over the growth of homes .").unwrap();
    let candidate = TokenSeq::parse("aim is to give councils some control .").unwrap();
    let t0 = Instant::now();
    let r = fscore(&candidate, &reference, 1.0);
    let elapsed = t0.elapsed();
    assert_eq!((r.a, r.b, r.c), (7, 6, 1), "token overlap counts");
    assert!((r.precision - 0.875).abs() <= 1e-3, "P = {}", r.precision);
    assert!((r.recall - 0.538).abs() <= 1e-3, "R = {}", r.recall);
    assert!((r.f - 0.667).abs() <= 1e-3, "F = {}", r.f);
    assert!(elapsed.as_micros() < 1000, "took {:?}", elapsed);
    println!(
        "criterion 1: PASS - A=7 B=6 C=1, P=87.5% R=53.8% F1=66.7% in {:?}",
        elapsed
    );
}

#[test]
fn criterion_02_variable_count_formula() {
    for n in 1..=30 {
        let idx = CompressionIndexing::new(n, true);
        let expect = (n * n * n + 3 * n * n + 14 * n) / 6;
        assert_eq!(idx.total_vars(), expect, "n = {}", n);
    }
    println!("criterion 2: PASS - (n^3+3n^2+14n)/6 variables for every n in [1,30]");
}

#[test]
fn criterion_03_feasible_set_bijection() {
    let mut checked_pairs = 0;
    for n in 2..=8 {
        let (toks, lm) = lm_for_words(n);
        for l_low in 2..=n {
            for l_up in l_low..=n {
                let (bp, idx) = build(
                    &toks,
                    &lm,
                    (l_low, l_up),
                    None,
                    &[],
                    &BuildOptions::default(),
                )
                .unwrap();
                let sols = enumerate_feasible_unguarded(&bp, 500_000_000).unwrap();
                // oracle: direct subsequence enumeration
                let mut expected = Vec::new();
                for mask in 1u32..(1 << n) {
                    let sel: Vec<usize> =
                        (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                    if sel.len() >= l_low && sel.len() <= l_up {
                        expected.push(idx.encode_subsequence(&sel).unwrap());
                    }
                }
                assert_eq!(
                    sols.len(),
                    expected.len(),
                    "n={} bounds=({},{}): {} feasible vs {} subsequences",
                    n,
                    l_low,
                    l_up,
                    sols.len(),
                    expected.len()
                );
                for e in &expected {
                    assert!(sols.contains(e), "n={} missing encoding", n);
                }
                checked_pairs += 1;
            }
        }
    }
    println!(
        "criterion 3: PASS - exact bijection with subsequences on {} (n, l_low, l_up) cases",
        checked_pairs
    );
}

#[test]
fn criterion_04_global_solver_soundness() {
    let t0 = Instant::now();
    let instances = suite_instances();
    let mut agreements = 0;
    for (i, bp) in instances.iter().enumerate() {
        let sols = enumerate_feasible(bp).unwrap();
        assert!(!sols.is_empty(), "instance {} must have nonempty S", i);
        let best = sols
            .iter()
            .map(|x| bp.objective_value(x))
            .fold(f64::INFINITY, f64::min);
        let mut values = Vec::new();
        for workers in [1usize, 2, 4] {
            let cfg = SolverConfig {
                workers,
                seed: 7 + i as u64,
                ..Default::default()
            };
            let (inc, status, _) = bnb::solve(bp, &cfg).unwrap();
            assert_eq!(status, SolveStatus::Optimal, "instance {}", i);
            let x = inc.x.as_ref().unwrap();
            assert!(bp.is_binary_feasible(x), "instance {} infeasible x_opt", i);
            assert!(
                (inc.value - best).abs() <= 1e-5,
                "instance {} workers {}: {} vs brute {}",
                i,
                workers,
                inc.value,
                best
            );
            values.push(inc.value);
        }
        assert!(
            values.iter().all(|v| (v - values[0]).abs() <= 2e-5),
            "instance {}: optima differ across worker counts: {:?}",
            i,
            values
        );
        agreements += 1;
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 60, "suite took {:?}", elapsed);
    println!(
        "criterion 4: PASS - {}/100 brute-force agreements for s in {{1,2,4}} in {:?}",
        agreements, elapsed
    );
}

#[test]
fn criterion_05_dca_descent_and_termination() {
    let instances = suite_instances();
    let mut trajectories = 0;
    let mut rng = StdRng::seed_from_u64(555);
    for (i, bp) in instances.iter().enumerate() {
        for kind in [PenaltyKind::P1, PenaltyKind::P2] {
            for _ in 0..3 {
                let x0: Vec<f64> = (0..bp.n_vars()).map(|_| rng.gen::<f64>()).collect();
                let cfg = DcaConfig {
                    kind,
                    ..Default::default()
                };
                let r = dca(bp, &cfg, &x0, None).unwrap();
                assert!(
                    r.iterations < cfg.max_iters,
                    "instance {} {:?}: hit the iteration cap",
                    i,
                    kind
                );
                for w in r.trajectory.windows(2) {
                    assert!(
                        w[1] <= w[0] + 1e-9,
                        "instance {} {:?}: trajectory rose {} -> {}",
                        i,
                        kind,
                        w[0],
                        w[1]
                    );
                }
                trajectories += 1;
            }
        }
    }
    println!(
        "criterion 5: PASS - {} DCA trajectories monotone and finite (p1, p2)",
        trajectories
    );
}

#[test]
fn criterion_06_hand_traced_dca() {
    use sencomp::ilp::{BinaryLinearProgram, Relation, Row};
    let mut bp = BinaryLinearProgram::new(2);
    bp.objective = vec![-1.0, 0.0];
    bp.rows.push(Row {
        coeffs: vec![(0, 1.0), (1, 1.0)],
        relation: Relation::Eq,
        rhs: 1.0,
    });
    let cfg = DcaConfig {
        kind: PenaltyKind::P2,
        t: 10.0,
        ..Default::default()
    };
    let r = dca(&bp, &cfg, &[0.5, 0.5], None).unwrap();
    assert!(r.iterations <= 2, "{} iterations", r.iterations);
    assert!((r.x[0] - 1.0).abs() < 1e-9 && r.x[1].abs() < 1e-9, "x = {:?}", r.x);
    println!(
        "criterion 6: PASS - reached (1,0) in {} iterations, matching the hand trace",
        r.iterations
    );
}

#[test]
fn criterion_07_groucho_ambiguity() {
    let templates = CfgGrammar::parse_str(
        r#"
S -> NP VP SYM : 1 1 1
PP -> IN NP : 1 1
NP -> DT NP : 1 1
NP -> DT NP PP : 1 1 2
NP -> P : 1
NP -> N : 1
NP -> P NP : 1 1
VP -> V NP : 1 1
VP -> V NP PP : 1 1 2
DT -> "an" : 1
N -> "elephant" : 1
N -> "pajamas" : 1
V -> "shot" : 1
P -> "in" : 1
P -> "my" : 1
"#,
    )
    .unwrap();
    let (tokens, tags) =
        pretagged_sentence("I/P shot/V an/DT elephant/N in/IN my/P pajamas/N ./SYM").unwrap();
    let g = generate_grammar(&tags, &tokens, &templates.productions).unwrap();
    let trees = parse(&g, &tokens, &tags, ParseMode::All).unwrap();
    assert_eq!(trees.len(), 2, "expected exactly two parses");
    println!("criterion 7: PASS - the Groucho sentence has exactly 2 parses");
}

fn trained_pipeline(model: ModelKind, rate: f64, workers: usize) -> Pipeline {
    let corpus = ngram::corpus_from_text(
        "This is an example to test sentence compression with MIP model .\n\
         The man saw the dog with the telescope in the park at noon with a friend in the rain .\n\
         this is another test sentence about a model .\n\
         the dog saw the man with a telescope .\n",
    )
    .unwrap();
    let lm = ngram::train(&corpus, 0.75).unwrap();
    let tagged = [
        "This/DT is/VBZ an/DT example/NN to/TO test/VB sentence/NN compression/NN with/IN model/NN ./.",
        "The/DT man/NN saw/VBD the/DT dog/NN with/IN the/DT telescope/NN ./.",
        "the/DT man/NN saw/VBD a/DT friend/NN in/IN the/DT park/NN at/IN noon/NN ./.",
        "the/DT dog/NN saw/VBD the/DT rain/NN ./.",
    ];
    let pairs: Vec<Vec<(String, String)>> = tagged
        .iter()
        .map(|l| tagger::parse_pretagged(l).unwrap())
        .collect();
    let tg = tagger::train_tagger(&pairs).unwrap();
    let mut solver = SolverConfig {
        workers,
        seed: 1,
        ..Default::default()
    };
    solver.dca.kind = PenaltyKind::P2;
    let cfg = PipelineConfig {
        model,
        rate,
        solver,
        ..Default::default()
    };
    Pipeline::new(lm, Some(tg), CfgGrammar::default_statements(), cfg)
}

#[test]
fn criterion_08_sentence_trunk() {
    let p = trained_pipeline(ModelKind::Hybrid, 0.7, 1);
    let text = "This is an example to test sentence compression with MIP model .";
    // the built instance must fix exactly the trunk words to one
    let prepared = p.prepare(text).unwrap();
    assert!(!prepared.fallback, "sentence must parse");
    let trunk: &[usize] = &[1, 2, 3, 4, 5, 6, 7, 8, 12]; // trunk words plus final punctuation
    for i in 1..=prepared.tokens.len() {
        let v = prepared.idx.delta(i);
        let fixed_one = prepared.bp.lower[v] == 1.0 && prepared.bp.upper[v] == 1.0;
        assert_eq!(
            fixed_one,
            trunk.contains(&i),
            "word {} ({})",
            i,
            prepared.tokens.word(i)
        );
    }
    let r = p.compress(text).unwrap();
    let out = r.compressed.to_string();
    assert!(
        out.contains("This is an example to test sentence compression"),
        "output {} lacks the trunk",
        out
    );
    println!(
        "criterion 8: PASS - trunk fixed to delta=1 and contained in the rate-0.7 output: {}",
        out
    );
}

#[test]
fn criterion_09_desk_scale_performance() {
    let p = trained_pipeline(ModelKind::Hybrid, 0.7, 2);
    let text = "The man saw the dog with the telescope in the park at noon with a friend in the rain .";
    let n = TokenSeq::parse(text).unwrap().len();
    assert!(n <= 20);
    let t0 = Instant::now();
    let r = p.compress(text).unwrap();
    let elapsed = t0.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "end-to-end solve took {:?}",
        elapsed
    );
    println!(
        "criterion 9: PASS - {} words solved end-to-end (hybrid, p2, s=2) in {:?} -> {}",
        n, elapsed, r.compressed
    );
}

#[test]
fn criterion_10_report_schema_without_corpora() {
    // Absolute corpus-level F-scores depend on training corpora that cannot
    // ship here; criteria 1-9 substitute worked examples and properties, and
    // this one only guarantees the experiment stays runnable: evaluate must
    // emit the full report schema for any user-supplied corpus.
    let gold = "This is an example to test sentence compression with MIP model .\t\
                This is an example to test sentence compression .\n\
                The man saw the dog with the telescope .\tThe man saw the dog .\n";
    for model in [ModelKind::Prob, ModelKind::Hybrid] {
        for rate in [0.5, 0.7, 0.9] {
            let p = trained_pipeline(model, rate, 1);
            let s = pipeline::evaluate(&p, gold, 1.0).unwrap();
            assert!(s.sentences.len() + s.failures == 2);
            assert!(s.mean_f.is_finite() && (0.0..=1.0).contains(&s.mean_f));
            assert!(s.mean_precision.is_finite() && s.mean_recall.is_finite());
            assert!(s.mean_wall_ms >= 0.0);
            assert!(s.mean_rate.is_finite());
            let mut csv = Vec::new();
            s.write_csv(&mut csv).unwrap();
            let text = String::from_utf8(csv).unwrap();
            assert!(text.starts_with(
                "index,precision,recall,f,compression_rate,wall_ms,original,reference,candidate"
            ));
        }
    }
    println!(
        "criterion 10: PASS - evaluate emits mean P/R/F, rate and time per model and rate; \
         absolute published F-scores are out of scope without their corpora"
    );
}
