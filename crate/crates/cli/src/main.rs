//! `lyricmood` — mood classification for Devanagari Hindi song lyrics.
//!
//! Exit status: 0 success, 1 usage error, 2 data/IO error, 3 no-evidence
//! (predict only).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lyricmood_core::{ExportFormat, MoodLabel, UpdatePolicy};

#[derive(Parser)]
#[command(
    name = "lyricmood",
    version,
    about = "Classify Devanagari Hindi song lyrics into five moods \
             (happy, sad, romantic, devotional, party)",
    after_help = "Environment: LYRICMOOD_KB and LYRICMOOD_STOPWORDS provide \
                  defaults for --kb and --stopwords; flags win over both."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a knowledge base from a labeled corpus (root/<mood>/<title>.txt)
    BuildKb {
        /// Corpus root with one directory per mood
        #[arg(long)]
        corpus: PathBuf,
        /// Output knowledge-base CSV
        #[arg(long)]
        out: PathBuf,
        /// Stopword file: one word per line, `#` lines ignored
        #[arg(long, env = "LYRICMOOD_STOPWORDS")]
        stopwords: Option<PathBuf>,
    },
    /// Classify lyric files, printing one JSON record per line
    Predict {
        /// Knowledge-base CSV
        #[arg(long, env = "LYRICMOOD_KB")]
        kb: PathBuf,
        #[arg(long, env = "LYRICMOOD_STOPWORDS")]
        stopwords: Option<PathBuf>,
        /// Fold each prediction back into the knowledge base
        #[arg(long, default_value = "off", value_parser = parse_predict_update)]
        update: UpdatePolicy,
        /// Lyric files to classify
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Fold lyric files into the knowledge base under a known mood
    Update {
        #[arg(long, env = "LYRICMOOD_KB")]
        kb: PathBuf,
        /// Mood credited with the files' terms
        #[arg(long, value_parser = parse_mood)]
        mood: MoodLabel,
        #[arg(long, env = "LYRICMOOD_STOPWORDS")]
        stopwords: Option<PathBuf>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Train on a per-mood split and report confusion matrix and accuracy
    Eval {
        #[arg(long)]
        corpus: PathBuf,
        /// Seed for the deterministic train/test shuffle
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Training documents per mood
        #[arg(long, default_value_t = 50)]
        train: usize,
        /// Test documents per mood
        #[arg(long, default_value_t = 10)]
        test: usize,
        /// Self-training during evaluation (results become order-dependent)
        #[arg(long, default_value = "off", value_parser = parse_predict_update)]
        update: UpdatePolicy,
        /// Also write the JSON report to this path
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, env = "LYRICMOOD_STOPWORDS")]
        stopwords: Option<PathBuf>,
    },
    /// Export the Song/Mood/Term graph for a labeled corpus
    GraphExport {
        #[arg(long, env = "LYRICMOOD_KB")]
        kb: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        /// Output format: dot, graphml or cypher
        #[arg(long, value_parser = parse_format)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
        /// Depicting terms kept per song
        #[arg(long = "top-k", default_value_t = 5)]
        top_k: usize,
        #[arg(long, env = "LYRICMOOD_STOPWORDS")]
        stopwords: Option<PathBuf>,
    },
    /// Look up a song title in a saved graphml graph
    GraphQuery {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        title: String,
    },
    /// Full run: train, evaluate, and write kb.csv, report.json, and graph
    /// exports into a directory
    Pipeline {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        train: usize,
        #[arg(long, default_value_t = 10)]
        test: usize,
        #[arg(long, default_value = "off", value_parser = parse_predict_update)]
        update: UpdatePolicy,
        #[arg(long = "top-k", default_value_t = 5)]
        top_k: usize,
        #[arg(long, env = "LYRICMOOD_STOPWORDS")]
        stopwords: Option<PathBuf>,
    },
}

fn parse_mood(s: &str) -> Result<MoodLabel, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_format(s: &str) -> Result<ExportFormat, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// `--update` on predict/eval accepts only `off` and `predicted`;
/// ground-truth credit is what the `update` subcommand is for.
fn parse_predict_update(s: &str) -> Result<UpdatePolicy, String> {
    match s.parse() {
        Ok(UpdatePolicy::GroundTruth) => {
            Err("use the `update` subcommand for ground-truth credit".to_string())
        }
        other => other,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
