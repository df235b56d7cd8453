//! Corpus ingestion, train/test splitting, and accuracy evaluation.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier::{incremental_update, predict, score_document, Prediction, UpdatePolicy};
use crate::error::{Error, Result};
use crate::knowledge_base::KnowledgeBase;
use crate::mood::{MoodLabel, MOOD_COUNT};
use crate::text_pipeline::{decode_utf8, RawDocument, StopwordSet};

/// A labeled document collection loaded from a `root/<mood>/<title>.txt`
/// layout.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    /// Documents sorted by (mood, title); every `true_mood` is set.
    pub docs: Vec<RawDocument>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }
}

/// Load every `.txt` file under `root/<mood>/` as a labeled document.
/// Directory names must parse as mood labels; titles (filename stems) must be
/// unique across the whole corpus.
pub fn ingest_corpus(root: &Path) -> Result<Corpus> {
    let mut dirs: Vec<_> = std::fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(root, e))?
        .into_iter()
        .filter(|entry| entry.path().is_dir())
        .map(|entry| entry.path())
        .collect();
    dirs.sort();

    let mut docs = Vec::new();
    let mut seen_titles = BTreeSet::new();
    for dir in dirs {
        let name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mood: MoodLabel = name.parse()?;

        let mut files: Vec<_> = std::fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(|e| Error::io(&dir, e))?
            .into_iter()
            .map(|entry| entry.path())
            .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == "txt"))
            .collect();
        files.sort();

        for file in files {
            let title = file
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            if !seen_titles.insert(title.clone()) {
                return Err(Error::DuplicateTitle(title));
            }
            let bytes = std::fs::read(&file).map_err(|e| Error::io(&file, e))?;
            let body = decode_utf8(bytes, &file.display().to_string())?;
            docs.push(RawDocument::new(title, body, Some(mood)));
        }
    }
    docs.sort_by(|a, b| (a.true_mood, &a.title).cmp(&(b.true_mood, &b.title)));
    Ok(Corpus { docs })
}

/// Deterministic per-mood split: documents of each mood are shuffled with a
/// seeded generator, the first `train_per_mood` go to the training set and
/// the next `test_per_mood` to the test set. Same seed, same partition.
pub fn split_corpus(
    corpus: &Corpus,
    train_per_mood: usize,
    test_per_mood: usize,
    seed: u64,
) -> Result<(Vec<RawDocument>, Vec<RawDocument>)> {
    let required = train_per_mood + test_per_mood;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for mood in MoodLabel::ALL {
        let mut docs: Vec<&RawDocument> = corpus
            .docs
            .iter()
            .filter(|d| d.true_mood == Some(mood))
            .collect();
        if docs.len() < required {
            return Err(Error::InsufficientDocs {
                mood,
                required,
                available: docs.len(),
                shortfall: required - docs.len(),
            });
        }
        docs.sort_by(|a, b| a.title.cmp(&b.title));
        docs.shuffle(&mut rng);
        train.extend(docs[..train_per_mood].iter().map(|d| (*d).clone()));
        test.extend(
            docs[train_per_mood..required]
                .iter()
                .map(|d| (*d).clone()),
        );
    }
    Ok((train, test))
}

/// 5×5 counts with rows = actual mood and columns = predicted mood, plus a
/// separate no-evidence tally per actual mood.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    cells: [[u64; MOOD_COUNT]; MOOD_COUNT],
    no_evidence: [u64; MOOD_COUNT],
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        ConfusionMatrix::default()
    }

    pub fn record(&mut self, actual: MoodLabel, predicted: MoodLabel) {
        self.cells[actual.index()][predicted.index()] += 1;
    }

    pub fn record_no_evidence(&mut self, actual: MoodLabel) {
        self.no_evidence[actual.index()] += 1;
    }

    pub fn cell(&self, actual: MoodLabel, predicted: MoodLabel) -> u64 {
        self.cells[actual.index()][predicted.index()]
    }

    pub fn no_evidence(&self, actual: MoodLabel) -> u64 {
        self.no_evidence[actual.index()]
    }

    /// Test documents with this actual mood, no-evidence cases included.
    pub fn row_total(&self, actual: MoodLabel) -> u64 {
        self.cells[actual.index()].iter().sum::<u64>() + self.no_evidence[actual.index()]
    }

    /// Correctly classified documents.
    pub fn trace(&self) -> u64 {
        MoodLabel::ALL.iter().map(|&m| self.cell(m, m)).sum()
    }

    /// All recorded documents, no-evidence cases included.
    pub fn total(&self) -> u64 {
        MoodLabel::ALL.iter().map(|&m| self.row_total(m)).sum()
    }

    /// trace / total; no-evidence outcomes count as wrong. `None` when the
    /// matrix is empty.
    pub fn accuracy(&self) -> Option<f64> {
        match self.total() {
            0 => None,
            total => Some(self.trace() as f64 / total as f64),
        }
    }

    /// Fraction of `mood` predictions that were correct. `None` when the mood
    /// was never predicted.
    pub fn precision(&self, mood: MoodLabel) -> Option<f64> {
        let predicted: u64 = MoodLabel::ALL.iter().map(|&a| self.cell(a, mood)).sum();
        match predicted {
            0 => None,
            n => Some(self.cell(mood, mood) as f64 / n as f64),
        }
    }

    /// Fraction of actual-`mood` documents that were classified correctly,
    /// counting no-evidence cases as misses. `None` when no test document has
    /// that mood.
    pub fn recall(&self, mood: MoodLabel) -> Option<f64> {
        match self.row_total(mood) {
            0 => None,
            n => Some(self.cell(mood, mood) as f64 / n as f64),
        }
    }

    /// Associative accumulation, so per-worker partial matrices can be
    /// summed in any grouping.
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for a in 0..MOOD_COUNT {
            for p in 0..MOOD_COUNT {
                self.cells[a][p] += other.cells[a][p];
            }
            self.no_evidence[a] += other.no_evidence[a];
        }
    }

    /// CSV rendering with mood-labeled header row and column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("actual");
        for mood in MoodLabel::ALL {
            out.push(',');
            out.push_str(mood.as_str());
        }
        out.push_str(",no_evidence\n");
        for actual in MoodLabel::ALL {
            out.push_str(actual.as_str());
            for predicted in MoodLabel::ALL {
                out.push_str(&format!(",{}", self.cell(actual, predicted)));
            }
            out.push_str(&format!(",{}\n", self.no_evidence(actual)));
        }
        out
    }
}

impl Serialize for ConfusionMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shape<'a> {
            moods: [&'static str; MOOD_COUNT],
            rows: &'a [[u64; MOOD_COUNT]; MOOD_COUNT],
            no_evidence: &'a [u64; MOOD_COUNT],
        }
        let mut moods = [""; MOOD_COUNT];
        for mood in MoodLabel::ALL {
            moods[mood.index()] = mood.as_str();
        }
        Shape {
            moods,
            rows: &self.cells,
            no_evidence: &self.no_evidence,
        }
        .serialize(serializer)
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<12}", "actual\\pred")?;
        for mood in MoodLabel::ALL {
            write!(f, "{:>12}", mood.as_str())?;
        }
        writeln!(f, "{:>13}", "no_evidence")?;
        for actual in MoodLabel::ALL {
            write!(f, "{:<12}", actual.as_str())?;
            for predicted in MoodLabel::ALL {
                write!(f, "{:>12}", self.cell(actual, predicted))?;
            }
            writeln!(f, "{:>13}", self.no_evidence(actual))?;
        }
        Ok(())
    }
}

/// Precision/recall for one mood; a metric is absent when undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoodMetrics {
    pub mood: MoodLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recall: Option<f64>,
}

/// Evaluation result over a test split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub accuracy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub kb_revision: u64,
    pub matrix: ConfusionMatrix,
    pub per_mood: Vec<MoodMetrics>,
}

impl EvalReport {
    fn from_matrix(matrix: ConfusionMatrix, kb_revision: u64) -> Result<Self> {
        let accuracy = matrix.accuracy().ok_or(Error::EmptyTestSet)?;
        let per_mood = MoodLabel::ALL
            .iter()
            .map(|&mood| MoodMetrics {
                mood,
                precision: matrix.precision(mood),
                recall: matrix.recall(mood),
            })
            .collect();
        Ok(EvalReport {
            accuracy,
            seed: None,
            kb_revision,
            matrix,
            per_mood,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "confusion matrix (rows = actual, columns = predicted)")?;
        write!(f, "{}", self.matrix)?;
        writeln!(
            f,
            "accuracy: {:.4} ({}/{})",
            self.accuracy,
            self.matrix.trace(),
            self.matrix.total()
        )?;
        for m in &self.per_mood {
            let fmt_opt = |v: Option<f64>| match v {
                Some(x) => format!("{x:.4}"),
                None => "n/a".to_string(),
            };
            writeln!(
                f,
                "{:<12} precision {:>8}  recall {:>8}",
                m.mood.as_str(),
                fmt_opt(m.precision),
                fmt_opt(m.recall)
            )?;
        }
        if let Some(seed) = self.seed {
            writeln!(f, "split seed: {seed}")?;
        }
        writeln!(f, "kb revision: {}", self.kb_revision)
    }
}

/// Per-document evaluation outcome, in test-set order.
#[derive(Debug, Clone)]
pub struct DocOutcome {
    pub title: String,
    pub actual: MoodLabel,
    /// `None` when no knowledge-base term matched (a no-evidence case).
    pub prediction: Option<Prediction>,
}

/// Report plus the per-document predictions behind it.
#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub report: EvalReport,
    pub outcomes: Vec<DocOutcome>,
}

/// Classify every test document against a frozen knowledge base and tally the
/// confusion matrix. No-evidence cases land in the separate tally and count
/// as wrong in the accuracy.
pub fn evaluate(
    kb: &KnowledgeBase,
    test: &[RawDocument],
    stopwords: &StopwordSet,
) -> Result<EvalReport> {
    // UpdatePolicy::Off never mutates; the clone keeps this signature
    // read-only.
    let mut kb = kb.clone();
    Ok(evaluate_with_policy(&mut kb, test, stopwords, UpdatePolicy::Off)?.report)
}

/// Evaluation with an explicit update policy. `Predicted` folds each
/// document back in under its predicted mood (making results depend on test
/// order), `GroundTruth` under its actual mood; `Off` leaves the knowledge
/// base untouched.
pub fn evaluate_with_policy(
    kb: &mut KnowledgeBase,
    test: &[RawDocument],
    stopwords: &StopwordSet,
    policy: UpdatePolicy,
) -> Result<EvalOutcome> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut matrix = ConfusionMatrix::new();
    let mut outcomes = Vec::with_capacity(test.len());
    for doc in test {
        let actual = doc
            .true_mood
            .ok_or_else(|| Error::MissingLabel(doc.title.clone()))?;
        let freq = doc.frequency_table(stopwords);
        let prediction = match predict(score_document(&freq, kb), &doc.title) {
            Ok(prediction) => {
                matrix.record(actual, prediction.mood);
                Some(prediction)
            }
            Err(Error::NoEvidence { .. }) => {
                matrix.record_no_evidence(actual);
                None
            }
            Err(other) => return Err(other),
        };
        match policy {
            UpdatePolicy::Off => {}
            UpdatePolicy::Predicted => {
                if let Some(p) = &prediction {
                    incremental_update(kb, &freq, p.mood);
                }
            }
            UpdatePolicy::GroundTruth => incremental_update(kb, &freq, actual),
        }
        outcomes.push(DocOutcome {
            title: doc.title.clone(),
            actual,
            prediction,
        });
    }
    let report = EvalReport::from_matrix(matrix, kb.revision())?;
    Ok(EvalOutcome { report, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_corpus(root: &Path, docs: &[(&str, &str, &str)]) {
        for (mood, title, body) in docs {
            let dir = root.join(mood);
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(dir.join(format!("{title}.txt")), body).unwrap();
        }
    }

    /// Five disjoint two-word vocabularies, one per mood.
    fn separable_corpus(docs_per_mood: usize) -> Corpus {
        let vocab = [
            ["खुशी", "नाच"],
            ["आँसू", "दुःख"],
            ["प्यार", "दिल"],
            ["जय", "मैया"],
            ["धूम", "पार्टी"],
        ];
        let mut docs = Vec::new();
        for mood in MoodLabel::ALL {
            let words = vocab[mood.index()];
            for i in 0..docs_per_mood {
                let body = format!("{} {} {}", words[0], words[i % 2], words[1]);
                docs.push(RawDocument::new(
                    format!("{}-{i:02}", mood.as_str()),
                    body,
                    Some(mood),
                ));
            }
        }
        Corpus { docs }
    }

    /// The published test-data confusion matrix.
    fn table2_matrix() -> ConfusionMatrix {
        let rows = [
            [4, 1, 2, 0, 3],
            [2, 4, 4, 0, 0],
            [1, 1, 8, 0, 0],
            [0, 0, 0, 10, 0],
            [4, 0, 0, 0, 6],
        ];
        let mut m = ConfusionMatrix::new();
        for actual in MoodLabel::ALL {
            for predicted in MoodLabel::ALL {
                for _ in 0..rows[actual.index()][predicted.index()] {
                    m.record(actual, predicted);
                }
            }
        }
        m
    }

    #[test]
    fn ingest_reads_mood_directories() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(dir.path(), &[("happy", "a", "क ख"), ("sad", "b", "ग")]);
        let corpus = ingest_corpus(dir.path()).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.docs[0].title, "a");
        assert_eq!(corpus.docs[0].true_mood, Some(MoodLabel::Happy));
        assert_eq!(corpus.docs[1].title, "b");
        assert_eq!(corpus.docs[1].true_mood, Some(MoodLabel::Sad));
    }

    #[test]
    fn ingest_empty_root() {
        let dir = tempfile::tempdir().unwrap();
        assert!(ingest_corpus(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn ingest_rejects_unknown_mood_directory() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(dir.path(), &[("joyful", "a", "क")]);
        let err = ingest_corpus(dir.path()).unwrap_err();
        assert!(matches!(err, Error::UnknownMood(name) if name == "joyful"));
    }

    #[test]
    fn ingest_rejects_duplicate_titles() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(dir.path(), &[("happy", "same", "क"), ("sad", "same", "ख")]);
        let err = ingest_corpus(dir.path()).unwrap_err();
        assert!(matches!(err, Error::DuplicateTitle(t) if t == "same"));
    }

    #[test]
    fn ingest_rejects_invalid_utf8() {
        let dir = tempfile::tempdir().unwrap();
        let happy = dir.path().join("happy");
        std::fs::create_dir_all(&happy).unwrap();
        std::fs::write(happy.join("bad.txt"), [0xE0, 0xA4, 0xFF]).unwrap();
        let err = ingest_corpus(dir.path()).unwrap_err();
        match err {
            Error::Decode { context, .. } => assert!(context.contains("bad.txt")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ingest_ignores_non_txt_files() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(dir.path(), &[("happy", "a", "क")]);
        std::fs::write(dir.path().join("happy").join("notes.md"), "x").unwrap();
        assert_eq!(ingest_corpus(dir.path()).unwrap().len(), 1);
    }

    #[test]
    fn split_produces_disjoint_partitions() {
        let corpus = separable_corpus(60);
        let (train, test) = split_corpus(&corpus, 50, 10, 1).unwrap();
        assert_eq!(train.len(), 250);
        assert_eq!(test.len(), 50);
        let train_titles: BTreeSet<_> = train.iter().map(|d| &d.title).collect();
        let test_titles: BTreeSet<_> = test.iter().map(|d| &d.title).collect();
        assert!(train_titles.is_disjoint(&test_titles));
        for mood in MoodLabel::ALL {
            assert_eq!(test.iter().filter(|d| d.true_mood == Some(mood)).count(), 10);
        }
    }

    #[test]
    fn split_is_deterministic_per_seed() {
        let corpus = separable_corpus(12);
        let a = split_corpus(&corpus, 8, 3, 7).unwrap();
        let b = split_corpus(&corpus, 8, 3, 7).unwrap();
        assert_eq!(a, b);
        let c = split_corpus(&corpus, 8, 3, 8).unwrap();
        assert_ne!(a, c, "different seeds should give a different partition");
    }

    #[test]
    fn split_with_zero_train() {
        let corpus = separable_corpus(5);
        let (train, test) = split_corpus(&corpus, 0, 5, 3).unwrap();
        assert!(train.is_empty());
        assert_eq!(test.len(), 25);
    }

    #[test]
    fn split_reports_shortfall() {
        let corpus = separable_corpus(5);
        let err = split_corpus(&corpus, 5, 1, 0).unwrap_err();
        match err {
            Error::InsufficientDocs {
                mood,
                required,
                available,
                shortfall,
            } => {
                assert_eq!(mood, MoodLabel::Happy);
                assert_eq!(required, 6);
                assert_eq!(available, 5);
                assert_eq!(shortfall, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn table2_accuracy_is_64_percent() {
        let m = table2_matrix();
        for mood in MoodLabel::ALL {
            assert_eq!(m.row_total(mood), 10);
        }
        assert_eq!(m.trace(), 32);
        assert_eq!(m.total(), 50);
        assert!((m.accuracy().unwrap() - 0.64).abs() < 1e-12);
    }

    #[test]
    fn matrix_merge_is_associative_accumulation() {
        let mut left = ConfusionMatrix::new();
        left.record(MoodLabel::Happy, MoodLabel::Happy);
        left.record_no_evidence(MoodLabel::Sad);
        let mut right = ConfusionMatrix::new();
        right.record(MoodLabel::Happy, MoodLabel::Party);
        right.record(MoodLabel::Sad, MoodLabel::Sad);

        let mut merged = ConfusionMatrix::new();
        merged.merge(&left);
        merged.merge(&right);

        let mut whole = ConfusionMatrix::new();
        whole.record(MoodLabel::Happy, MoodLabel::Happy);
        whole.record_no_evidence(MoodLabel::Sad);
        whole.record(MoodLabel::Happy, MoodLabel::Party);
        whole.record(MoodLabel::Sad, MoodLabel::Sad);
        assert_eq!(merged, whole);
        assert_eq!(merged.total(), 4);
    }

    #[test]
    fn matrix_csv_has_labeled_header_and_rows() {
        let m = table2_matrix();
        let csv = m.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "actual,happy,sad,romantic,devotional,party,no_evidence"
        );
        assert_eq!(lines.next().unwrap(), "happy,4,1,2,0,3,0");
    }

    #[test]
    fn evaluate_separable_corpus_is_perfect() {
        let corpus = separable_corpus(25);
        let (train, test) = split_corpus(&corpus, 20, 5, 42).unwrap();
        let kb = KnowledgeBase::build_from_corpus(&train, &StopwordSet::empty()).unwrap();
        let report = evaluate(&kb, &test, &StopwordSet::empty()).unwrap();
        assert_eq!(report.accuracy, 1.0);
        for actual in MoodLabel::ALL {
            for predicted in MoodLabel::ALL {
                let expected = if actual == predicted { 5 } else { 0 };
                assert_eq!(report.matrix.cell(actual, predicted), expected);
            }
            assert_eq!(report.matrix.no_evidence(actual), 0);
        }
    }

    #[test]
    fn evaluate_counts_no_evidence_as_wrong() {
        let kb = KnowledgeBase::build_from_corpus(
            &[RawDocument::new("t", "खुशी", Some(MoodLabel::Happy))],
            &StopwordSet::empty(),
        )
        .unwrap();
        let test = vec![
            RawDocument::new("hit", "खुशी खुशी", Some(MoodLabel::Happy)),
            RawDocument::new("miss", "अनजान", Some(MoodLabel::Happy)),
        ];
        let report = evaluate(&kb, &test, &StopwordSet::empty()).unwrap();
        assert_eq!(report.matrix.no_evidence(MoodLabel::Happy), 1);
        assert_eq!(report.matrix.row_total(MoodLabel::Happy), 2);
        assert_eq!(report.accuracy, 0.5);
    }

    #[test]
    fn evaluate_rejects_empty_test_set() {
        let kb = KnowledgeBase::new();
        let err = evaluate(&kb, &[], &StopwordSet::empty()).unwrap_err();
        assert!(matches!(err, Error::EmptyTestSet));
    }

    #[test]
    fn evaluate_is_deterministic() {
        let corpus = separable_corpus(10);
        let (train, test) = split_corpus(&corpus, 8, 2, 5).unwrap();
        let kb = KnowledgeBase::build_from_corpus(&train, &StopwordSet::empty()).unwrap();
        let a = evaluate(&kb, &test, &StopwordSet::empty()).unwrap();
        let b = evaluate(&kb, &test, &StopwordSet::empty()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn evaluate_leaves_kb_untouched() {
        let corpus = separable_corpus(10);
        let (train, test) = split_corpus(&corpus, 8, 2, 5).unwrap();
        let kb = KnowledgeBase::build_from_corpus(&train, &StopwordSet::empty()).unwrap();
        let before = kb.clone();
        let revision = kb.revision();
        evaluate(&kb, &test, &StopwordSet::empty()).unwrap();
        assert_eq!(kb, before);
        assert_eq!(kb.revision(), revision);
    }

    #[test]
    fn predicted_policy_updates_the_kb() {
        let corpus = separable_corpus(10);
        let (train, test) = split_corpus(&corpus, 8, 2, 5).unwrap();
        let mut kb = KnowledgeBase::build_from_corpus(&train, &StopwordSet::empty()).unwrap();
        let revision = kb.revision();
        let outcome =
            evaluate_with_policy(&mut kb, &test, &StopwordSet::empty(), UpdatePolicy::Predicted)
                .unwrap();
        assert!(kb.revision() > revision);
        assert_eq!(outcome.outcomes.len(), test.len());
        assert!(outcome.outcomes.iter().all(|o| o.prediction.is_some()));
    }

    #[test]
    fn ground_truth_policy_credits_actual_mood() {
        let mut kb = KnowledgeBase::build_from_corpus(
            &[RawDocument::new("t", "खुशी", Some(MoodLabel::Happy))],
            &StopwordSet::empty(),
        )
        .unwrap();
        let test = vec![RawDocument::new("s", "अनजान", Some(MoodLabel::Sad))];
        evaluate_with_policy(&mut kb, &test, &StopwordSet::empty(), UpdatePolicy::GroundTruth)
            .unwrap();
        // even a no-evidence document trains the kb under its true mood
        assert_eq!(kb.entry("अनजान").unwrap().count(MoodLabel::Sad), 1);
    }

    #[test]
    fn report_json_shape() {
        let corpus = separable_corpus(6);
        let (train, test) = split_corpus(&corpus, 4, 2, 9).unwrap();
        let kb = KnowledgeBase::build_from_corpus(&train, &StopwordSet::empty()).unwrap();
        let mut report = evaluate(&kb, &test, &StopwordSet::empty()).unwrap();
        report.seed = Some(9);
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["accuracy"], 1.0);
        assert_eq!(value["seed"], 9);
        assert_eq!(value["matrix"]["moods"][0], "happy");
        assert_eq!(value["matrix"]["rows"][0][0], 2);
        assert_eq!(value["per_mood"][0]["mood"], "happy");
        assert_eq!(value["per_mood"][0]["precision"], 1.0);
    }

    #[test]
    fn precision_absent_for_never_predicted_mood() {
        let mut m = ConfusionMatrix::new();
        m.record(MoodLabel::Happy, MoodLabel::Happy);
        m.record(MoodLabel::Sad, MoodLabel::Happy);
        assert_eq!(m.precision(MoodLabel::Party), None);
        assert_eq!(m.recall(MoodLabel::Party), None);
        assert_eq!(m.precision(MoodLabel::Happy), Some(0.5));
        assert_eq!(m.recall(MoodLabel::Happy), Some(1.0));
        assert_eq!(m.recall(MoodLabel::Sad), Some(0.0));
    }
}
