//! End-to-end compression pipeline and the evaluation / benchmark drivers.
//!
//! The probabilistic mode builds and solves the word-sequence program
//! directly. The hybrid mode first tags and parses the sentence, labels the
//! parse tree with compression rules, fixes the trunk variables, adds phrase
//! constraints, and solves the reduced program; sentences with no parse fall
//! back to the probabilistic mode.

use crate::bnb::{self, SolveStatus, SolverConfig};
use crate::error::{Error, Result};
use crate::eval::{compression_rate, fscore, EvalReport};
use crate::grammar::{generate_grammar, CfgGrammar};
use crate::ilp::{build, decode, enumerate_feasible, BuildOptions, CompressionResult, ScoreMode};
use crate::instances::random_blp;
use crate::ngram::NgramModel;
use crate::parser::{parse, ParseMode, ParseTree};
use crate::rules::{fix_deltas, label_tree, phrase_spans, DeltaFixing, Fixing};
use crate::tagger::{pretagged_sentence, Tag, TaggerModel};
use crate::tokens::{tokenize, TokenSeq};
use std::io::Write;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Prob,
    Hybrid,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub model: ModelKind,
    /// Target compression rate in (0, 1].
    pub rate: f64,
    pub score: ScoreMode,
    pub solver: SolverConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            model: ModelKind::Hybrid,
            rate: 0.7,
            score: ScoreMode::Log,
            solver: SolverConfig::default(),
        }
    }
}

/// Length window induced by a target rate.
pub fn rate_bounds(rate: f64, n: usize) -> Result<(usize, usize)> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Config(format!("rate must be in (0,1], got {}", rate)));
    }
    let l_low = 2.max((rate * n as f64).floor() as usize);
    let l_up = l_low.max((rate * n as f64).ceil() as usize).min(n);
    let l_low = l_low.min(l_up);
    Ok((l_low, l_up))
}

/// Loaded models plus configuration; one pipeline compresses many sentences.
pub struct Pipeline {
    pub lm: NgramModel,
    pub tagger: Option<TaggerModel>,
    pub grammar: CfgGrammar,
    pub cfg: PipelineConfig,
}

/// Tagged input: either raw text for the tagger or word/TAG tokens.
enum TaggedInput {
    Raw(Vec<String>),
    Pretagged(Vec<String>, Vec<Tag>),
}

/// A built but unsolved instance, exposed for debugging dumps.
pub struct Prepared {
    pub tokens: TokenSeq,
    pub bp: crate::ilp::BinaryLinearProgram,
    pub idx: crate::ilp::CompressionIndexing,
    pub fallback: bool,
}

impl Pipeline {
    pub fn new(lm: NgramModel, tagger: Option<TaggerModel>, grammar: CfgGrammar, cfg: PipelineConfig) -> Pipeline {
        Pipeline {
            lm,
            tagger,
            grammar,
            cfg,
        }
    }

    fn read_input(&self, text: &str) -> Result<TaggedInput> {
        let looks_pretagged =
            !text.trim().is_empty() && text.split_whitespace().all(|t| t.contains('/'));
        if looks_pretagged {
            if let Ok((words, tags)) = pretagged_sentence(text) {
                return Ok(TaggedInput::Pretagged(words, tags));
            }
        }
        Ok(TaggedInput::Raw(tokenize(text)))
    }

    /// Builds the solver instance for a sentence without solving it.
    pub fn prepare(&self, text: &str) -> Result<Prepared> {
        let input = self.read_input(text)?;
        let (tokens, tags) = match input {
            TaggedInput::Pretagged(words, tags) => (TokenSeq::new(words)?, Some(tags)),
            TaggedInput::Raw(words) => (TokenSeq::new(words)?, None),
        };
        let n = tokens.len();
        if n < 2 {
            return Err(Error::Config(
                "sentences of fewer than two tokens cannot be compressed".into(),
            ));
        }
        let bounds = rate_bounds(self.cfg.rate, n)?;

        let mut fixing: Option<DeltaFixing> = None;
        let mut spans = Vec::new();
        let mut fallback = false;
        if self.cfg.model == ModelKind::Hybrid {
            match self.parse_sentence(&tokens, tags) {
                Ok(tree) => {
                    let lt = label_tree(&tree)?;
                    let df = fix_deltas(&lt, n);
                    let fixed_one = df.count(Fixing::FixedOne);
                    let fixed_zero = df.count(Fixing::FixedZero);
                    if fixed_one > bounds.1 {
                        return Err(Error::Infeasible(format!(
                            "the parse fixes {} words but the rate {} allows at most {}; \
                             raise the rate",
                            fixed_one, self.cfg.rate, bounds.1
                        )));
                    }
                    if n - fixed_zero < bounds.0 {
                        return Err(Error::Infeasible(format!(
                            "the parse deletes too many words for the rate {}; lower the rate",
                            self.cfg.rate
                        )));
                    }
                    spans = phrase_spans(&tree);
                    fixing = Some(df);
                }
                Err(Error::NoParse) => {
                    fallback = true;
                }
                Err(e) => return Err(e),
            }
        }

        let opts = BuildOptions {
            score: self.cfg.score,
            with_alpha: false,
        };
        let (bp, idx) = build(&tokens, &self.lm, bounds, fixing.as_ref(), &spans, &opts)?;
        Ok(Prepared {
            tokens,
            bp,
            idx,
            fallback,
        })
    }

    /// Compresses one sentence given as raw text or word/TAG tokens.
    pub fn compress(&self, text: &str) -> Result<CompressionResult> {
        Ok(self.compress_with_stats(text)?.0)
    }

    /// As `compress`, also returning the full solver statistics (node log
    /// included when the solver config asks for it).
    pub fn compress_with_stats(&self, text: &str) -> Result<(CompressionResult, bnb::SolveStats)> {
        let t0 = Instant::now();
        let prepared = self.prepare(text)?;
        let (inc, status, stats) = bnb::solve(&prepared.bp, &self.cfg.solver)?;
        if status != SolveStatus::Optimal {
            return Err(Error::Infeasible(
                "no feasible compression under the given constraints; raise the rate".into(),
            ));
        }
        let x = inc.x.expect("optimal status carries a solution");
        let mut result = decode(&x, &prepared.idx, &prepared.tokens, &prepared.bp)?;
        result.nodes = stats.nodes_processed;
        result.dca_restarts = stats.dca_restarts;
        result.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
        result.fallback = prepared.fallback;
        Ok((result, stats))
    }

    /// Tags (unless pre-tagged) and parses, returning the first parse.
    fn parse_sentence(&self, tokens: &TokenSeq, tags: Option<Vec<Tag>>) -> Result<ParseTree> {
        let tags = match tags {
            Some(t) => t,
            None => match &self.tagger {
                Some(m) => m.tag(tokens.tokens()),
                None => {
                    return Err(Error::Config(
                        "hybrid mode needs a tagger model or word/TAG input".into(),
                    ))
                }
            },
        };
        let g = generate_grammar(&tags, tokens.tokens(), &self.grammar.productions)?;
        let mut trees = parse(&g, tokens.tokens(), &tags, ParseMode::First)?;
        Ok(trees.remove(0))
    }

    /// Tags a sentence, training-format output `word/TAG`.
    pub fn tag_line(&self, text: &str) -> Result<String> {
        let tagger = self
            .tagger
            .as_ref()
            .ok_or_else(|| Error::Config("no tagger model loaded".into()))?;
        let tokens = tokenize(text);
        if tokens.is_empty() {
            return Err(Error::Config("empty sentence".into()));
        }
        let tags = tagger.tag(&tokens);
        Ok(tokens
            .iter()
            .zip(&tags)
            .map(|(w, t)| format!("{}/{}", w, t.as_str()))
            .collect::<Vec<_>>()
            .join(" "))
    }

    /// Parses a sentence and returns bracketed trees.
    pub fn parse_brackets(&self, text: &str, all: bool) -> Result<Vec<String>> {
        let input = self.read_input(text)?;
        let (tokens, tags) = match input {
            TaggedInput::Pretagged(words, tags) => (words, tags),
            TaggedInput::Raw(words) => {
                let tagger = self.tagger.as_ref().ok_or_else(|| {
                    Error::Config("parsing raw text needs a tagger model".into())
                })?;
                let tags = tagger.tag(&words);
                (words, tags)
            }
        };
        let g = generate_grammar(&tags, &tokens, &self.grammar.productions)?;
        let mode = if all { ParseMode::All } else { ParseMode::First };
        let trees = parse(&g, &tokens, &tags, mode)?;
        Ok(trees.iter().map(|t| t.to_bracketed()).collect())
    }
}

/// Per-sentence evaluation record.
#[derive(Debug, Clone)]
pub struct SentenceEval {
    pub original: String,
    pub reference: String,
    pub candidate: String,
    pub report: EvalReport,
    pub wall_ms: f64,
}

/// Aggregate over a gold file.
#[derive(Debug, Clone, Default)]
pub struct EvalSummary {
    pub rows_read: usize,
    pub rows_malformed: usize,
    pub failures: usize,
    pub sentences: Vec<SentenceEval>,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f: f64,
    pub mean_wall_ms: f64,
    pub mean_rate: f64,
}

impl EvalSummary {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "index,precision,recall,f,compression_rate,wall_ms,original,reference,candidate")?;
        for (i, s) in self.sentences.iter().enumerate() {
            writeln!(
                w,
                "{},{:.6},{:.6},{:.6},{:.6},{:.3},{:?},{:?},{:?}",
                i,
                s.report.precision,
                s.report.recall,
                s.report.f,
                s.report.compression_rate.unwrap_or(f64::NAN),
                s.wall_ms,
                s.original,
                s.reference,
                s.candidate
            )?;
        }
        Ok(())
    }
}

/// Runs compress + F-score over a TSV gold file (original <TAB> reference).
/// Malformed rows are skipped and counted; sentences the solver rejects are
/// counted as failures.
pub fn evaluate(pipeline: &Pipeline, gold: &str, mu: f64) -> Result<EvalSummary> {
    let mut summary = EvalSummary::default();
    for line in gold.lines() {
        if line.trim().is_empty() {
            continue;
        }
        summary.rows_read += 1;
        let Some((original, reference)) = line.split_once('\t') else {
            summary.rows_malformed += 1;
            continue;
        };
        let (original, reference) = (original.trim(), reference.trim());
        if original.is_empty() || reference.is_empty() {
            summary.rows_malformed += 1;
            continue;
        }
        let orig_seq = match TokenSeq::parse(original) {
            Ok(s) => s,
            Err(_) => {
                summary.rows_malformed += 1;
                continue;
            }
        };
        let ref_seq = match TokenSeq::parse(reference) {
            Ok(s) => s,
            Err(_) => {
                summary.rows_malformed += 1;
                continue;
            }
        };
        match pipeline.compress(original) {
            Ok(result) => {
                let mut report = fscore(&result.compressed, &ref_seq, mu);
                report.compression_rate = Some(compression_rate(&result.compressed, &orig_seq));
                summary.sentences.push(SentenceEval {
                    original: original.to_string(),
                    reference: reference.to_string(),
                    candidate: result.compressed.to_string(),
                    report,
                    wall_ms: result.wall_ms,
                });
            }
            Err(Error::Io(e)) => return Err(Error::Io(e)),
            Err(_) => {
                summary.failures += 1;
            }
        }
    }
    if summary.rows_read == 0 || summary.rows_read == summary.rows_malformed {
        return Err(Error::Config("gold file has no usable rows".into()));
    }
    let n = summary.sentences.len();
    if n > 0 {
        let nf = n as f64;
        summary.mean_precision = summary.sentences.iter().map(|s| s.report.precision).sum::<f64>() / nf;
        summary.mean_recall = summary.sentences.iter().map(|s| s.report.recall).sum::<f64>() / nf;
        summary.mean_f = summary.sentences.iter().map(|s| s.report.f).sum::<f64>() / nf;
        summary.mean_wall_ms = summary.sentences.iter().map(|s| s.wall_ms).sum::<f64>() / nf;
        summary.mean_rate = summary
            .sentences
            .iter()
            .map(|s| s.report.compression_rate.unwrap_or(0.0))
            .sum::<f64>()
            / nf;
    }
    Ok(summary)
}

/// One benchmark row: solver value and time, brute-force value when the
/// instance is oracle-sized, and the agreement flag.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: usize,
    pub value: f64,
    pub wall_ms: f64,
    pub nodes: u64,
    pub brute_value: Option<f64>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub agreements: usize,
    pub checked: usize,
}

/// Solves `count` seeded random instances, brute-force checking each one
/// that fits the enumeration guard.
pub fn benchmark(
    count: usize,
    vars: usize,
    rows: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    for i in 0..count {
        let bp = random_blp(vars, rows, seed.wrapping_add(i as u64));
        let (inc, status, stats) = bnb::solve(&bp, solver)?;
        let value = match status {
            SolveStatus::Optimal => inc.value,
            SolveStatus::Infeasible => f64::INFINITY,
        };
        let (brute_value, agree) = if vars <= 24 {
            let sols = enumerate_feasible(&bp)?;
            let best = sols
                .iter()
                .map(|x| bp.objective_value(x))
                .fold(f64::INFINITY, f64::min);
            let ok = if best.is_infinite() && value.is_infinite() {
                true
            } else {
                (best - value).abs() <= solver.eps4
            };
            (Some(best), Some(ok))
        } else {
            (None, None)
        };
        if let Some(true) = agree {
            report.agreements += 1;
        }
        if agree.is_some() {
            report.checked += 1;
        }
        report.rows.push(BenchRow {
            instance: i,
            value,
            wall_ms: stats.wall_ms,
            nodes: stats.nodes_processed,
            brute_value,
            agree,
        });
    }
    Ok(report)
}
