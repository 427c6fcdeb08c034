//! Command-line interface: train models, tag, parse, compress, evaluate,
//! and benchmark the solver. Exit codes: 0 success, 2 infeasible problem,
//! 3 input or configuration error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sencomp::bnb::{BranchRule, NodeSelection, SolverConfig};
use sencomp::dc::{dca, DcaConfig, PenaltyKind};
use sencomp::error::Error;
use sencomp::grammar::CfgGrammar;
use sencomp::ilp::ScoreMode;
use sencomp::ngram::{self, NgramModel};
use sencomp::pipeline::{self, ModelKind, Pipeline, PipelineConfig};
use sencomp::tagger::{self, TaggerModel};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sencomp", about = "Extractive sentence compression with an exact hybrid solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the n-gram language model from a plain-text corpus (one
    /// sentence per line).
    TrainLm {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.75)]
        discount: f64,
    },
    /// Train the part-of-speech tagger from word/TAG lines (Penn Treebank
    /// or closed-set tags).
    TrainTagger {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tag a sentence.
    Tag {
        #[arg(long)]
        tagger: PathBuf,
        #[arg(long)]
        text: String,
    },
    /// Parse a sentence into bracketed trees.
    Parse {
        /// Grammar file; the built-in statement grammar when omitted.
        #[arg(long)]
        grammar: Option<PathBuf>,
        /// Tagger model; omit it to pass pre-tagged word/TAG text.
        #[arg(long)]
        tagger: Option<PathBuf>,
        #[arg(long)]
        text: String,
        /// Enumerate all parses instead of the first one.
        #[arg(long)]
        all: bool,
    },
    /// Compress a sentence.
    Compress(CompressArgs),
    /// Compress every sentence of a gold TSV (original <TAB> reference) and
    /// report mean precision/recall/F-score and timing.
    Evaluate {
        #[arg(long)]
        gold: PathBuf,
        /// Preference parameter of the F-score.
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Write the per-sentence report to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        compress: CompressArgs,
    },
    /// Solve seeded random instances and cross-check against brute force.
    Benchmark {
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 12)]
        vars: usize,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long)]
    lm: PathBuf,
    #[arg(long)]
    grammar: Option<PathBuf>,
    #[arg(long)]
    tagger: Option<PathBuf>,
    /// The sentence, raw or pre-tagged word/TAG (required outside evaluate).
    #[arg(long)]
    text: Option<String>,
    /// Target compression rate in (0,1].
    #[arg(long, default_value_t = 0.7)]
    rate: f64,
    #[arg(long, value_enum, default_value_t = ModelArg::Hybrid)]
    model: ModelArg,
    #[arg(long, value_enum, default_value_t = ScoreArg::Log)]
    score: ScoreArg,
    #[arg(long, value_enum, default_value_t = PenaltyArg::P2)]
    penalty: PenaltyArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Penalty weight of the DC reformulation.
    #[arg(long, default_value_t = 1e5)]
    t: f64,
    /// Optimality gap of the branch-and-bound.
    #[arg(long, default_value_t = 1e-5)]
    eps4: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = NodeSelectArg::Best)]
    node_select: NodeSelectArg,
    #[arg(long, value_enum, default_value_t = BranchArg::Half)]
    branch: BranchArg,
    /// Print solver statistics after the result.
    #[arg(long)]
    stats: bool,
    /// Dump the built instance in LP text form to this file.
    #[arg(long)]
    dump_instance: Option<PathBuf>,
    /// Run one seeded DCA on the instance and dump its trajectory CSV.
    #[arg(long)]
    dca_trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Prob,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreArg {
    Log,
    Raw,
}

#[derive(Clone, Copy, ValueEnum)]
enum PenaltyArg {
    P1,
    P2,
    P3,
}

#[derive(Clone, Copy, ValueEnum)]
enum NodeSelectArg {
    Best,
    Depth,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Half,
    Infeas,
    Cost,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn load_grammar(path: &Option<PathBuf>) -> Result<CfgGrammar, Error> {
    match path {
        Some(p) => CfgGrammar::parse_str(&fs::read_to_string(p)?),
        None => Ok(CfgGrammar::default_statements()),
    }
}

fn load_tagger(path: &Option<PathBuf>) -> Result<Option<TaggerModel>, Error> {
    match path {
        Some(p) => Ok(Some(TaggerModel::load(p)?)),
        None => Ok(None),
    }
}

fn solver_config(a: &CompressArgs) -> SolverConfig {
    SolverConfig {
        workers: a.workers.max(1),
        eps4: a.eps4,
        node_selection: match a.node_select {
            NodeSelectArg::Best => NodeSelection::BestBound,
            NodeSelectArg::Depth => NodeSelection::DepthFirst,
        },
        branch_rule: match a.branch {
            BranchArg::Half => BranchRule::ClosestToHalf,
            BranchArg::Infeas => BranchRule::MaxInfeasibility,
            BranchArg::Cost => BranchRule::MaxCost,
        },
        seed: a.seed,
        dca: DcaConfig {
            kind: match a.penalty {
                PenaltyArg::P1 => PenaltyKind::P1,
                PenaltyArg::P2 => PenaltyKind::P2,
                PenaltyArg::P3 => PenaltyKind::P3,
            },
            t: a.t,
            ..Default::default()
        },
        ..Default::default()
    }
}

fn build_pipeline(a: &CompressArgs) -> Result<Pipeline, Error> {
    let lm = NgramModel::load(&a.lm)?;
    let grammar = load_grammar(&a.grammar)?;
    let tagger = load_tagger(&a.tagger)?;
    let cfg = PipelineConfig {
        model: match a.model {
            ModelArg::Prob => ModelKind::Prob,
            ModelArg::Hybrid => ModelKind::Hybrid,
        },
        rate: a.rate,
        score: match a.score {
            ScoreArg::Log => ScoreMode::Log,
            ScoreArg::Raw => ScoreMode::Raw,
        },
        solver: solver_config(a),
    };
    Ok(Pipeline::new(lm, tagger, grammar, cfg))
}

fn read_tagged_corpus(path: &Path) -> Result<Vec<Vec<(String, String)>>, Error> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(tagger::parse_pretagged(line)?);
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::TrainLm {
            corpus,
            out,
            discount,
        } => {
            let text = fs::read_to_string(&corpus)?;
            let sentences = ngram::corpus_from_text(&text)?;
            let model = ngram::train(&sentences, discount)?;
            model.save(&out)?;
            println!(
                "trained {}-sentence model, vocabulary {}, written to {}",
                sentences.len(),
                model.vocab_size(),
                out.display()
            );
        }
        Command::TrainTagger { corpus, out } => {
            let pairs = read_tagged_corpus(&corpus)?;
            let model = tagger::train_tagger(&pairs)?;
            model.save(&out)?;
            if model.skipped_tags() > 0 {
                eprintln!("warning: {} tokens with unmappable tags skipped", model.skipped_tags());
            }
            println!("trained tagger on {} sentences, written to {}", pairs.len(), out.display());
        }
        Command::Tag { tagger, text } => {
            let model = TaggerModel::load(&tagger)?;
            let p = Pipeline::new(
                dummy_lm(),
                Some(model),
                CfgGrammar::default_statements(),
                PipelineConfig::default(),
            );
            println!("{}", p.tag_line(&text)?);
        }
        Command::Parse {
            grammar,
            tagger,
            text,
            all,
        } => {
            let grammar = load_grammar(&grammar)?;
            let tagger = load_tagger(&tagger)?;
            let p = Pipeline::new(dummy_lm(), tagger, grammar, PipelineConfig::default());
            for tree in p.parse_brackets(&text, all)? {
                println!("{}", tree);
            }
        }
        Command::Compress(args) => {
            let text = args
                .text
                .clone()
                .ok_or_else(|| Error::Config("--text is required".into()))?;
            let mut p = build_pipeline(&args)?;
            p.cfg.solver.log_nodes = args.stats;
            if let Some(path) = &args.dump_instance {
                let prepared = p.prepare(&text)?;
                let mut f = std::io::BufWriter::new(fs::File::create(path)?);
                prepared.bp.write_lp_text(&mut f)?;
            }
            if let Some(path) = &args.dca_trace {
                let prepared = p.prepare(&text)?;
                let x0 = vec![0.5; prepared.bp.n_vars()];
                let run = dca(&prepared.bp, &p.cfg.solver.dca, &x0, None)?;
                let mut f = std::io::BufWriter::new(fs::File::create(path)?);
                run.write_trace_csv(&mut f)?;
            }
            let (r, stats) = p.compress_with_stats(&text)?;
            println!("{}", r.compressed);
            if args.stats {
                for e in &stats.node_log {
                    eprintln!(
                        "node {} depth {} bound {} action {}",
                        e.id,
                        e.depth,
                        e.bound.map_or("-".to_string(), |b| format!("{:.6}", b)),
                        e.action.as_str()
                    );
                }
                eprintln!(
                    "stats nodes={} lp_solves={} dca_restarts={} incumbents={} wall_ms={:.1}",
                    stats.nodes_processed,
                    stats.lp_solves,
                    stats.dca_restarts,
                    stats.incumbent_updates,
                    stats.wall_ms
                );
                eprintln!(
                    "score {:.6} | kept {} | nodes {} | dca restarts {} | {:.1} ms{}",
                    r.objective,
                    r.selected.len(),
                    r.nodes,
                    r.dca_restarts,
                    r.wall_ms,
                    if r.fallback { " | fallback to prob model" } else { "" }
                );
            }
        }
        Command::Evaluate {
            gold,
            mu,
            csv,
            compress,
        } => {
            let p = build_pipeline(&compress)?;
            let text = fs::read_to_string(&gold)?;
            let summary = pipeline::evaluate(&p, &text, mu)?;
            println!(
                "sentences {} | malformed {} | failures {}",
                summary.sentences.len(),
                summary.rows_malformed,
                summary.failures
            );
            println!(
                "mean precision {:.4} | mean recall {:.4} | mean F {:.4} | mean rate {:.4} | mean time {:.1} ms",
                summary.mean_precision,
                summary.mean_recall,
                summary.mean_f,
                summary.mean_rate,
                summary.mean_wall_ms
            );
            if let Some(path) = csv {
                let mut f = std::io::BufWriter::new(fs::File::create(&path)?);
                summary.write_csv(&mut f)?;
                println!("per-sentence report written to {}", path.display());
            }
        }
        Command::Benchmark {
            instances,
            vars,
            rows,
            seed,
            workers,
        } => {
            let solver = SolverConfig {
                workers: workers.max(1),
                seed,
                ..Default::default()
            };
            let report = pipeline::benchmark(instances, vars, rows, seed, &solver)?;
            for row in &report.rows {
                println!(
                    "instance {:3} | value {:>10.4} | nodes {:4} | {:7.2} ms{}",
                    row.instance,
                    row.value,
                    row.nodes,
                    row.wall_ms,
                    match row.agree {
                        Some(true) => " | agrees with brute force",
                        Some(false) => " | MISMATCH",
                        None => "",
                    }
                );
            }
            if report.checked > 0 {
                println!("agreement {}/{}", report.agreements, report.checked);
            }
        }
    }
    Ok(())
}

/// Placeholder model for commands that never touch probabilities.
fn dummy_lm() -> NgramModel {
    let corpus = vec![sencomp::TokenSeq::parse("a").unwrap()];
    ngram::train(&corpus, 0.5).unwrap()
}
