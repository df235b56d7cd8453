//! Subcommand implementations.

use std::path::{Path, PathBuf};

use lyricmood_core::{
    classify_document, decode_utf8, evaluate_with_policy, incremental_update, ingest_corpus,
    select_depicting_terms, split_corpus, Error, ExportFormat, GraphRecord, KnowledgeBase,
    KnowledgeGraph, MoodLabel, RawDocument, StopwordSet, UpdatePolicy,
};

use crate::Command;

/// Failures after successful argument parsing.
pub enum CliError {
    /// Data or IO problem → exit status 2.
    Data(String),
    /// One or more documents had no knowledge-base evidence → exit status 3.
    NoEvidence(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Data(m) | CliError::NoEvidence(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Data(_) => 2,
            CliError::NoEvidence(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::NoEvidence { .. } => CliError::NoEvidence(err.to_string()),
            _ => CliError::Data(err.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Shared run configuration: flags win over `LYRICMOOD_*` environment
/// variables (resolved by the parser), which win over these defaults.
pub struct RunConfig {
    pub kb_path: Option<PathBuf>,
    pub stopwords_path: Option<PathBuf>,
    pub update_policy: UpdatePolicy,
    pub top_k_terms: usize,
    pub seed: u64,
    pub train_per_mood: usize,
    pub test_per_mood: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kb_path: None,
            stopwords_path: None,
            update_policy: UpdatePolicy::Off,
            top_k_terms: 5,
            seed: 0,
            train_per_mood: 50,
            test_per_mood: 10,
        }
    }
}

impl RunConfig {
    /// Fail fast on unreadable input paths, before any processing.
    fn validate(&self) -> CliResult {
        for path in [&self.kb_path, &self.stopwords_path].into_iter().flatten() {
            if !path.is_file() {
                return Err(CliError::Data(format!("{}: no such file", path.display())));
            }
        }
        Ok(())
    }

    fn stopwords(&self) -> CliResult<StopwordSet> {
        match &self.stopwords_path {
            Some(path) => Ok(StopwordSet::load(path)?),
            None => Ok(StopwordSet::empty()),
        }
    }

    /// Load the knowledge base, printing validation warnings to stderr.
    fn load_kb(&self) -> CliResult<(KnowledgeBase, PathBuf)> {
        let path = self
            .kb_path
            .clone()
            .expect("kb path is required by the parser");
        let (kb, warnings) = KnowledgeBase::load(&path)?;
        for warning in &warnings {
            eprintln!("warning: {warning}");
        }
        Ok((kb, path))
    }
}

pub fn run(command: Command) -> CliResult {
    match command {
        Command::BuildKb {
            corpus,
            out,
            stopwords,
        } => {
            let config = RunConfig {
                stopwords_path: stopwords,
                ..RunConfig::default()
            };
            config.validate()?;
            build_kb(&corpus, &out, &config)
        }
        Command::Predict {
            kb,
            stopwords,
            update,
            files,
        } => {
            let config = RunConfig {
                kb_path: Some(kb),
                stopwords_path: stopwords,
                update_policy: update,
                ..RunConfig::default()
            };
            config.validate()?;
            predict_files(&files, &config)
        }
        Command::Update {
            kb,
            mood,
            stopwords,
            files,
        } => {
            let config = RunConfig {
                kb_path: Some(kb),
                stopwords_path: stopwords,
                update_policy: UpdatePolicy::GroundTruth,
                ..RunConfig::default()
            };
            config.validate()?;
            update_files(&files, mood, &config)
        }
        Command::Eval {
            corpus,
            seed,
            train,
            test,
            update,
            report,
            stopwords,
        } => {
            let config = RunConfig {
                stopwords_path: stopwords,
                update_policy: update,
                seed,
                train_per_mood: train,
                test_per_mood: test,
                ..RunConfig::default()
            };
            config.validate()?;
            eval_corpus(&corpus, report.as_deref(), &config)
        }
        Command::GraphExport {
            kb,
            corpus,
            format,
            out,
            top_k,
            stopwords,
        } => {
            let config = RunConfig {
                kb_path: Some(kb),
                stopwords_path: stopwords,
                top_k_terms: top_k,
                ..RunConfig::default()
            };
            config.validate()?;
            graph_export(&corpus, format, &out, &config)
        }
        Command::GraphQuery { graph, title } => graph_query(&graph, &title),
        Command::Pipeline {
            corpus,
            out_dir,
            seed,
            train,
            test,
            update,
            top_k,
            stopwords,
        } => {
            let config = RunConfig {
                stopwords_path: stopwords,
                update_policy: update,
                top_k_terms: top_k,
                seed,
                train_per_mood: train,
                test_per_mood: test,
                ..RunConfig::default()
            };
            config.validate()?;
            pipeline(&corpus, &out_dir, &config)
        }
    }
}

fn read_doc(path: &Path) -> CliResult<RawDocument> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let body = decode_utf8(bytes, &path.display().to_string())?;
    let title = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(RawDocument::new(title, body, None))
}

fn write_file(path: &Path, contents: &str) -> CliResult {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn build_kb(corpus: &Path, out: &Path, config: &RunConfig) -> CliResult {
    let stopwords = config.stopwords()?;
    let corpus = ingest_corpus(corpus)?;
    let kb = KnowledgeBase::build_from_corpus(&corpus.docs, &stopwords)?;
    kb.save(out)?;
    println!(
        "built knowledge base: {} words from {} documents -> {}",
        kb.len(),
        corpus.len(),
        out.display()
    );
    Ok(())
}

fn predict_files(files: &[PathBuf], config: &RunConfig) -> CliResult {
    let stopwords = config.stopwords()?;
    let (mut kb, kb_path) = config.load_kb()?;
    let mut no_evidence = 0usize;
    let mut kb_dirty = false;
    for file in files {
        let doc = read_doc(file)?;
        match classify_document(&doc, &kb, &stopwords) {
            Ok(prediction) => {
                println!("{}", prediction.to_json_line(config.top_k_terms));
                if config.update_policy == UpdatePolicy::Predicted {
                    incremental_update(&mut kb, &doc.frequency_table(&stopwords), prediction.mood);
                    kb_dirty = true;
                }
            }
            Err(Error::NoEvidence { .. }) => {
                eprintln!("no evidence: {}", file.display());
                no_evidence += 1;
            }
            Err(other) => return Err(other.into()),
        }
    }
    if kb_dirty {
        kb.save(&kb_path)?;
    }
    if no_evidence > 0 {
        return Err(CliError::NoEvidence(format!(
            "{no_evidence} of {} document(s) matched no knowledge-base term",
            files.len()
        )));
    }
    Ok(())
}

fn update_files(files: &[PathBuf], mood: MoodLabel, config: &RunConfig) -> CliResult {
    let stopwords = config.stopwords()?;
    let (mut kb, kb_path) = config.load_kb()?;
    for file in files {
        let doc = read_doc(file)?;
        let freq = doc.frequency_table(&stopwords);
        incremental_update(&mut kb, &freq, mood);
        println!(
            "updated {}: {} distinct terms credited to {mood}",
            doc.title,
            freq.len()
        );
    }
    kb.save(&kb_path)?;
    Ok(())
}

fn eval_corpus(corpus_root: &Path, report_path: Option<&Path>, config: &RunConfig) -> CliResult {
    let stopwords = config.stopwords()?;
    let corpus = ingest_corpus(corpus_root)?;
    let (train, test) = split_corpus(
        &corpus,
        config.train_per_mood,
        config.test_per_mood,
        config.seed,
    )?;
    let mut kb = KnowledgeBase::build_from_corpus(&train, &stopwords)?;
    if config.update_policy != UpdatePolicy::Off {
        eprintln!(
            "warning: evaluating with update policy `{}`; results depend on test order",
            config.update_policy.as_str()
        );
    }
    let mut outcome = evaluate_with_policy(&mut kb, &test, &stopwords, config.update_policy)?;
    outcome.report.seed = Some(config.seed);
    print!("{}", outcome.report);
    if let Some(path) = report_path {
        write_file(path, &format!("{}\n", outcome.report.to_json()))?;
    }
    Ok(())
}

/// Records for a labeled corpus: each song keeps its known mood and the terms
/// that contribute most to it under the given knowledge base.
fn corpus_records(
    corpus_root: &Path,
    kb: &KnowledgeBase,
    stopwords: &StopwordSet,
    top_k: usize,
) -> CliResult<Vec<GraphRecord>> {
    let corpus = ingest_corpus(corpus_root)?;
    Ok(corpus
        .docs
        .into_iter()
        .map(|doc| {
            let mood = doc.true_mood.expect("ingested documents are labeled");
            let freq = doc.frequency_table(stopwords);
            GraphRecord {
                terms: select_depicting_terms(&freq, kb, mood, top_k),
                title: doc.title,
                mood,
            }
        })
        .collect())
}

fn graph_export(
    corpus_root: &Path,
    format: ExportFormat,
    out: &Path,
    config: &RunConfig,
) -> CliResult {
    let stopwords = config.stopwords()?;
    let (kb, _) = config.load_kb()?;
    let records = corpus_records(corpus_root, &kb, &stopwords, config.top_k_terms)?;
    let graph = KnowledgeGraph::build(records, kb.revision())?;
    write_file(out, &graph.export(format))?;
    println!(
        "wrote {} graph ({} songs, {} nodes, {} edges) -> {}",
        format.as_str(),
        graph.song_count(),
        graph.node_count(),
        graph.edge_count(),
        out.display()
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct LookupTerm<'a> {
    word: &'a str,
    weight: f64,
}

#[derive(serde::Serialize)]
struct LookupRecord<'a> {
    title: &'a str,
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mood: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<LookupTerm<'a>>>,
}

fn graph_query(graph_path: &Path, title: &str) -> CliResult {
    let bytes = std::fs::read(graph_path)
        .map_err(|e| CliError::Data(format!("{}: {e}", graph_path.display())))?;
    let text = decode_utf8(bytes, &graph_path.display().to_string())?;
    let graph = KnowledgeGraph::from_graphml(&text)?;
    let record = match graph.lookup_song(title) {
        Some(entry) => LookupRecord {
            title,
            found: true,
            mood: Some(entry.mood.as_str()),
            terms: Some(
                entry
                    .terms
                    .iter()
                    .map(|(t, w)| LookupTerm {
                        word: t.as_str(),
                        weight: *w,
                    })
                    .collect(),
            ),
        },
        None => LookupRecord {
            title,
            found: false,
            mood: None,
            terms: None,
        },
    };
    println!("{}", serde_json::to_string(&record).expect("record serializes"));
    Ok(())
}

/// Train on the split, evaluate with the configured update policy, then write
/// every artifact: the final knowledge base, the JSON report, and the graph
/// in all three formats. The graph holds the training songs under their known
/// moods and the test songs under their predicted moods.
fn pipeline(corpus_root: &Path, out_dir: &Path, config: &RunConfig) -> CliResult {
    let stopwords = config.stopwords()?;
    let corpus = ingest_corpus(corpus_root)?;
    let (train, test) = split_corpus(
        &corpus,
        config.train_per_mood,
        config.test_per_mood,
        config.seed,
    )?;
    let mut kb = KnowledgeBase::build_from_corpus(&train, &stopwords)?;
    let mut outcome = evaluate_with_policy(&mut kb, &test, &stopwords, config.update_policy)?;
    outcome.report.seed = Some(config.seed);

    let mut records = Vec::new();
    for doc in &train {
        let mood = doc.true_mood.expect("train split is labeled");
        let freq = doc.frequency_table(&stopwords);
        records.push(GraphRecord {
            title: doc.title.clone(),
            mood,
            terms: select_depicting_terms(&freq, &kb, mood, config.top_k_terms),
        });
    }
    for doc_outcome in &outcome.outcomes {
        if let Some(prediction) = &doc_outcome.prediction {
            records.push(GraphRecord {
                title: doc_outcome.title.clone(),
                mood: prediction.mood,
                terms: prediction
                    .top_terms(config.top_k_terms)
                    .into_iter()
                    .map(|(t, _, w)| (t.clone(), w))
                    .collect(),
            });
        }
    }
    let graph = KnowledgeGraph::build(records, kb.revision())?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Data(format!("{}: {e}", out_dir.display())))?;
    kb.save(&out_dir.join("kb.csv"))?;
    write_file(
        &out_dir.join("report.json"),
        &format!("{}\n", outcome.report.to_json()),
    )?;
    for format in [ExportFormat::Dot, ExportFormat::Graphml, ExportFormat::Cypher] {
        write_file(
            &out_dir.join(format!("graph.{}", format.as_str())),
            &graph.export(format),
        )?;
    }
    print!("{}", outcome.report);
    println!(
        "wrote kb.csv, report.json and graph exports ({} songs) -> {}",
        graph.song_count(),
        out_dir.display()
    );
    Ok(())
}
