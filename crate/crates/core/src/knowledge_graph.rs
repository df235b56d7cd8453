//! Song/Mood/Term property graph: construction, title-lookup caching, and
//! text exports (dot, graphml, cypher).
//!
//! A built graph is immutable; share it freely across threads. The graphml
//! export doubles as the persistence format and can be re-imported with
//! [`KnowledgeGraph::from_graphml`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use quick_xml::events::Event;
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::knowledge_base::KnowledgeBase;
use crate::mood::MoodLabel;
use crate::text_pipeline::{Token, TokenFrequencyTable};

/// Node kinds, in the order used for deterministic export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Song,
    Mood,
    Term,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Song => "Song",
            NodeKind::Mood => "Mood",
            NodeKind::Term => "Term",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphNode {
    pub kind: NodeKind,
    /// Song title, mood name, or term surface.
    pub key: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// Song → Mood.
    BelongsTo,
    /// Term → Song.
    Depicts,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::BelongsTo => "BELONGS_TO",
            EdgeKind::Depicts => "DEPICTS",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge {
    pub kind: EdgeKind,
    /// Key of the source node (song title or term surface).
    pub source: String,
    /// Key of the target node (mood name or song title).
    pub target: String,
    /// Term contribution; 0 for BELONGS_TO edges.
    pub weight: f64,
}

/// What the graph stores per song.
#[derive(Debug, Clone, PartialEq)]
pub struct SongEntry {
    pub mood: MoodLabel,
    /// Depicting terms, strongest first.
    pub terms: Vec<(Token, f64)>,
}

/// Input record for [`KnowledgeGraph::build`].
#[derive(Debug, Clone)]
pub struct GraphRecord {
    pub title: String,
    pub mood: MoodLabel,
    pub terms: Vec<(Token, f64)>,
}

/// The Song/Mood/Term property graph. The five mood nodes always exist.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeGraph {
    songs: BTreeMap<String, SongEntry>,
    kb_revision: u64,
}

/// The in-knowledge-base tokens contributing most to `mood`: contribution is
/// freq × prob and must be positive; ties break by token codepoint order.
/// Fewer than `k` pairs come back when fewer qualify.
pub fn select_depicting_terms(
    freq: &TokenFrequencyTable,
    kb: &KnowledgeBase,
    mood: MoodLabel,
    k: usize,
) -> Vec<(Token, f64)> {
    let mut terms: Vec<(Token, f64)> = freq
        .iter()
        .filter_map(|(token, count)| {
            let entry = kb.entry(token.as_str())?;
            let contribution = count as f64 * entry.prob(mood);
            (contribution > 0.0).then(|| (token.clone(), contribution))
        })
        .collect();
    terms.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    terms.truncate(k);
    terms
}

impl KnowledgeGraph {
    /// Assemble the graph from classified songs. Titles must be unique.
    pub fn build(records: Vec<GraphRecord>, kb_revision: u64) -> Result<Self> {
        let mut songs = BTreeMap::new();
        for record in records {
            let mut terms = record.terms;
            terms.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
            let entry = SongEntry {
                mood: record.mood,
                terms,
            };
            if songs.insert(record.title.clone(), entry).is_some() {
                return Err(Error::DuplicateTitle(record.title));
            }
        }
        Ok(KnowledgeGraph { songs, kb_revision })
    }

    /// Revision of the knowledge base the graph was built from; compare with
    /// the live knowledge base to detect staleness.
    pub fn kb_revision(&self) -> u64 {
        self.kb_revision
    }

    /// Cached mood and depicting terms for a known title, if present. Callers
    /// consult this before running the full classifier.
    pub fn lookup_song(&self, title: &str) -> Option<&SongEntry> {
        self.songs.get(title)
    }

    pub fn song_count(&self) -> usize {
        self.songs.len()
    }

    pub fn songs(&self) -> impl Iterator<Item = (&String, &SongEntry)> {
        self.songs.iter()
    }

    fn term_keys(&self) -> BTreeMap<&str, ()> {
        self.songs
            .values()
            .flat_map(|e| e.terms.iter().map(|(t, _)| (t.as_str(), ())))
            .collect()
    }

    /// All nodes, sorted by kind then key. Mood nodes are always the five
    /// labels.
    pub fn nodes(&self) -> Vec<GraphNode> {
        let mut nodes: Vec<GraphNode> = self
            .songs
            .keys()
            .map(|title| GraphNode {
                kind: NodeKind::Song,
                key: title.clone(),
            })
            .collect();
        nodes.extend(MoodLabel::ALL.iter().map(|m| GraphNode {
            kind: NodeKind::Mood,
            key: m.as_str().to_string(),
        }));
        nodes.extend(self.term_keys().keys().map(|t| GraphNode {
            kind: NodeKind::Term,
            key: t.to_string(),
        }));
        nodes.sort();
        nodes
    }

    /// All edges, sorted by kind then source/target keys. Every song has
    /// exactly one BELONGS_TO edge.
    pub fn edges(&self) -> Vec<GraphEdge> {
        let mut edges: Vec<GraphEdge> = self
            .songs
            .iter()
            .map(|(title, entry)| GraphEdge {
                kind: EdgeKind::BelongsTo,
                source: title.clone(),
                target: entry.mood.as_str().to_string(),
                weight: 0.0,
            })
            .collect();
        let mut depicts: Vec<GraphEdge> = self
            .songs
            .iter()
            .flat_map(|(title, entry)| {
                entry.terms.iter().map(move |(token, weight)| GraphEdge {
                    kind: EdgeKind::Depicts,
                    source: token.as_str().to_string(),
                    target: title.clone(),
                    weight: *weight,
                })
            })
            .collect();
        depicts.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
        edges.extend(depicts);
        edges
    }

    pub fn node_count(&self) -> usize {
        self.songs.len() + MoodLabel::ALL.len() + self.term_keys().len()
    }

    pub fn edge_count(&self) -> usize {
        self.songs.len() + self.songs.values().map(|e| e.terms.len()).sum::<usize>()
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::Graphml => self.to_graphml(),
            ExportFormat::Cypher => self.to_cypher(),
        }
    }

    /// Graphviz rendering: song boxes, mood ellipses, plain term labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lyricmood {\n");
        for node in self.nodes() {
            let shape = match node.kind {
                NodeKind::Song => "box",
                NodeKind::Mood => "ellipse",
                NodeKind::Term => "plaintext",
            };
            writeln!(
                out,
                "  \"{}\" [label=\"{}\", shape={}];",
                dot_escape(&node_id(&node)),
                dot_escape(&node.key),
                shape
            )
            .unwrap();
        }
        for edge in self.edges() {
            let (src, dst) = edge_ids(&edge);
            match edge.kind {
                EdgeKind::BelongsTo => writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    dot_escape(&src),
                    dot_escape(&dst),
                    edge.kind.as_str()
                )
                .unwrap(),
                EdgeKind::Depicts => writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{}\", weight=\"{}\"];",
                    dot_escape(&src),
                    dot_escape(&dst),
                    edge.kind.as_str(),
                    edge.weight
                )
                .unwrap(),
            }
        }
        out.push_str("}\n");
        out
    }

    /// GraphML rendering; also the persistence format.
    pub fn to_graphml(&self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
        out.push_str("  <key id=\"nkind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n");
        out.push_str("  <key id=\"nkey\" for=\"node\" attr.name=\"key\" attr.type=\"string\"/>\n");
        out.push_str("  <key id=\"ekind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n");
        out.push_str("  <key id=\"eweight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
        out.push_str("  <key id=\"grev\" for=\"graph\" attr.name=\"kb_revision\" attr.type=\"long\"/>\n");
        out.push_str("  <graph id=\"lyricmood\" edgedefault=\"directed\">\n");
        writeln!(out, "    <data key=\"grev\">{}</data>", self.kb_revision).unwrap();
        for node in self.nodes() {
            writeln!(
                out,
                "    <node id=\"{}\"><data key=\"nkind\">{}</data><data key=\"nkey\">{}</data></node>",
                xml_escape(&node_id(&node)),
                node.kind.as_str(),
                xml_escape(&node.key)
            )
            .unwrap();
        }
        for edge in self.edges() {
            let (src, dst) = edge_ids(&edge);
            writeln!(
                out,
                "    <edge source=\"{}\" target=\"{}\"><data key=\"ekind\">{}</data><data key=\"eweight\">{}</data></edge>",
                xml_escape(&src),
                xml_escape(&dst),
                edge.kind.as_str(),
                edge.weight
            )
            .unwrap();
        }
        out.push_str("  </graph>\n</graphml>\n");
        out
    }

    /// Cypher script: one MERGE-only statement per line, so re-importing is
    /// idempotent. Nodes are labeled Song{title}, Mood{name}, Term{word}.
    pub fn to_cypher(&self) -> String {
        let mut out = String::new();
        for node in self.nodes() {
            let prop = match node.kind {
                NodeKind::Song => "title",
                NodeKind::Mood => "name",
                NodeKind::Term => "word",
            };
            writeln!(
                out,
                "MERGE (:{} {{{}: '{}'}});",
                node.kind.as_str(),
                prop,
                cypher_escape(&node.key)
            )
            .unwrap();
        }
        for edge in self.edges() {
            match edge.kind {
                EdgeKind::BelongsTo => writeln!(
                    out,
                    "MERGE (s:Song {{title: '{}'}}) MERGE (m:Mood {{name: '{}'}}) MERGE (s)-[:BELONGS_TO]->(m);",
                    cypher_escape(&edge.source),
                    cypher_escape(&edge.target)
                )
                .unwrap(),
                EdgeKind::Depicts => writeln!(
                    out,
                    "MERGE (t:Term {{word: '{}'}}) MERGE (s:Song {{title: '{}'}}) MERGE (t)-[:DEPICTS {{weight: {}}}]->(s);",
                    cypher_escape(&edge.source),
                    cypher_escape(&edge.target),
                    edge.weight
                )
                .unwrap(),
            }
        }
        out
    }

    /// Parse a graph previously written by [`to_graphml`].
    ///
    /// [`to_graphml`]: KnowledgeGraph::to_graphml
    pub fn from_graphml(text: &str) -> Result<Self> {
        GraphmlParser::parse(text)?.into_graph()
    }
}

/// Graph node id used in dot/graphml output; keys are namespaced by kind so a
/// term may share its surface with a title or mood name.
fn node_id(node: &GraphNode) -> String {
    let prefix = match node.kind {
        NodeKind::Song => "song",
        NodeKind::Mood => "mood",
        NodeKind::Term => "term",
    };
    format!("{prefix}:{}", node.key)
}

fn edge_ids(edge: &GraphEdge) -> (String, String) {
    match edge.kind {
        EdgeKind::BelongsTo => (
            format!("song:{}", edge.source),
            format!("mood:{}", edge.target),
        ),
        EdgeKind::Depicts => (
            format!("term:{}", edge.source),
            format!("song:{}", edge.target),
        ),
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn cypher_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\'', "\\'")
}

/// Export formats accepted by the CLI and by [`KnowledgeGraph::export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Graphml,
    Cypher,
}

impl ExportFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ExportFormat::Dot => "dot",
            ExportFormat::Graphml => "graphml",
            ExportFormat::Cypher => "cypher",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::Graphml),
            "cypher" => Ok(ExportFormat::Cypher),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Batch a cypher script into JSON bodies for a property-graph store's
/// transactional HTTP endpoint, at most `max_statements` per request.
pub fn cypher_batches(script: &str, max_statements: usize) -> Vec<String> {
    assert!(max_statements > 0, "batch size must be positive");
    let statements: Vec<&str> = script.lines().filter(|l| !l.trim().is_empty()).collect();
    statements
        .chunks(max_statements)
        .map(|chunk| {
            let body = serde_json::json!({
                "statements": chunk
                    .iter()
                    .map(|s| serde_json::json!({ "statement": s }))
                    .collect::<Vec<_>>(),
            });
            body.to_string()
        })
        .collect()
}

#[derive(Default)]
struct GraphmlParser {
    key_names: BTreeMap<String, String>,
    nodes: BTreeMap<String, (String, String)>, // id → (kind, key)
    edges: Vec<(String, String, String, f64)>, // source, target, kind, weight
    kb_revision: u64,
}

enum ParseContext {
    Graph,
    Node {
        id: String,
        kind: Option<String>,
        key: Option<String>,
    },
    Edge {
        source: String,
        target: String,
        kind: Option<String>,
        weight: f64,
    },
}

impl GraphmlParser {
    fn parse(text: &str) -> Result<Self> {
        let mut reader = Reader::from_str(text);
        reader.config_mut().trim_text(true);

        let mut parser = GraphmlParser::default();
        let mut stack: Vec<ParseContext> = Vec::new();
        let mut pending_data_key: Option<String> = None;
        let mut pending_text = String::new();

        loop {
            let event = reader
                .read_event()
                .map_err(|e| Error::GraphImport(e.to_string()))?;
            match event {
                Event::Start(e) => {
                    parser.open_element(&e, &mut stack, &mut pending_data_key)?;
                    pending_text.clear();
                }
                Event::Empty(e) => {
                    // a self-closing <node/> or <edge/> carries no data and
                    // fails the same completeness checks as an empty pair
                    let before = stack.len();
                    parser.open_element(&e, &mut stack, &mut pending_data_key)?;
                    pending_data_key = None;
                    if stack.len() > before {
                        parser.pop_context(&mut stack)?;
                    }
                }
                Event::Text(t) => {
                    if pending_data_key.is_some() {
                        pending_text.push_str(
                            &t.unescape().map_err(|e| Error::GraphImport(e.to_string()))?,
                        );
                    }
                }
                Event::End(e) => match e.name().as_ref() {
                    b"data" => {
                        if let Some(key_id) = pending_data_key.take() {
                            parser.apply_data(&key_id, &pending_text, stack.last_mut())?;
                        }
                    }
                    b"node" | b"edge" | b"graph" => parser.pop_context(&mut stack)?,
                    _ => {}
                },
                Event::Eof => break,
                _ => {}
            }
        }
        Ok(parser)
    }

    fn open_element(
        &mut self,
        e: &quick_xml::events::BytesStart<'_>,
        stack: &mut Vec<ParseContext>,
        pending_data_key: &mut Option<String>,
    ) -> Result<()> {
        let attr = |key: &str| -> Result<Option<String>> {
            match e.try_get_attribute(key) {
                Ok(Some(a)) => Ok(Some(
                    a.unescape_value()
                        .map_err(|e| Error::GraphImport(e.to_string()))?
                        .into_owned(),
                )),
                Ok(None) => Ok(None),
                Err(e) => Err(Error::GraphImport(e.to_string())),
            }
        };
        match e.name().as_ref() {
            b"key" => {
                if let (Some(id), Some(attr_name)) = (attr("id")?, attr("attr.name")?) {
                    self.key_names.insert(id, attr_name);
                }
            }
            b"graph" => stack.push(ParseContext::Graph),
            b"node" => {
                let id = attr("id")?
                    .ok_or_else(|| Error::GraphImport("node element without id".into()))?;
                stack.push(ParseContext::Node {
                    id,
                    kind: None,
                    key: None,
                });
            }
            b"edge" => {
                let source = attr("source")?
                    .ok_or_else(|| Error::GraphImport("edge element without source".into()))?;
                let target = attr("target")?
                    .ok_or_else(|| Error::GraphImport("edge element without target".into()))?;
                stack.push(ParseContext::Edge {
                    source,
                    target,
                    kind: None,
                    weight: 0.0,
                });
            }
            b"data" => *pending_data_key = attr("key")?,
            _ => {}
        }
        Ok(())
    }

    fn apply_data(
        &mut self,
        key_id: &str,
        text: &str,
        context: Option<&mut ParseContext>,
    ) -> Result<()> {
        let attr_name = self
            .key_names
            .get(key_id)
            .cloned()
            .unwrap_or_else(|| key_id.to_string());
        match context {
            Some(ParseContext::Node { kind, key, .. }) => match attr_name.as_str() {
                "kind" => *kind = Some(text.to_string()),
                "key" => *key = Some(text.to_string()),
                _ => {}
            },
            Some(ParseContext::Edge { kind, weight, .. }) => match attr_name.as_str() {
                "kind" => *kind = Some(text.to_string()),
                "weight" => {
                    *weight = text.parse().map_err(|_| {
                        Error::GraphImport(format!("invalid edge weight `{text}`"))
                    })?;
                }
                _ => {}
            },
            Some(ParseContext::Graph) if attr_name == "kb_revision" => {
                self.kb_revision = text
                    .parse()
                    .map_err(|_| Error::GraphImport(format!("invalid kb_revision `{text}`")))?;
            }
            Some(ParseContext::Graph) | None => {}
        }
        Ok(())
    }

    fn pop_context(&mut self, stack: &mut Vec<ParseContext>) -> Result<()> {
        match stack.pop() {
            Some(ParseContext::Node { id, kind, key }) => {
                let kind =
                    kind.ok_or_else(|| Error::GraphImport(format!("node `{id}` has no kind")))?;
                let key =
                    key.ok_or_else(|| Error::GraphImport(format!("node `{id}` has no key")))?;
                self.nodes.insert(id, (kind, key));
            }
            Some(ParseContext::Edge {
                source,
                target,
                kind,
                weight,
            }) => {
                let kind = kind.ok_or_else(|| {
                    Error::GraphImport(format!("edge {source} → {target} has no kind"))
                })?;
                self.edges.push((source, target, kind, weight));
            }
            Some(ParseContext::Graph) | None => {}
        }
        Ok(())
    }

    fn into_graph(self) -> Result<KnowledgeGraph> {
        let node = |id: &str| -> Result<&(String, String)> {
            self.nodes
                .get(id)
                .ok_or_else(|| Error::GraphImport(format!("edge references unknown node `{id}`")))
        };
        let mut songs: BTreeMap<String, (Option<MoodLabel>, Vec<(Token, f64)>)> = self
            .nodes
            .values()
            .filter(|(kind, _)| kind == "Song")
            .map(|(_, key)| (key.clone(), (None, Vec::new())))
            .collect();
        for (source, target, kind, weight) in &self.edges {
            match kind.as_str() {
                "BELONGS_TO" => {
                    let (src_kind, title) = node(source)?;
                    let (dst_kind, mood_name) = node(target)?;
                    if src_kind != "Song" || dst_kind != "Mood" {
                        return Err(Error::GraphImport(format!(
                            "BELONGS_TO must link Song → Mood, found {src_kind} → {dst_kind}"
                        )));
                    }
                    let mood: MoodLabel = mood_name.parse()?;
                    let slot = songs.get_mut(title).ok_or_else(|| {
                        Error::GraphImport(format!("unknown song `{title}` in edge"))
                    })?;
                    if slot.0.replace(mood).is_some() {
                        return Err(Error::GraphImport(format!(
                            "song `{title}` has more than one BELONGS_TO edge"
                        )));
                    }
                }
                "DEPICTS" => {
                    let (src_kind, word) = node(source)?;
                    let (dst_kind, title) = node(target)?;
                    if src_kind != "Term" || dst_kind != "Song" {
                        return Err(Error::GraphImport(format!(
                            "DEPICTS must link Term → Song, found {src_kind} → {dst_kind}"
                        )));
                    }
                    let token = Token::parse(word)?;
                    let slot = songs.get_mut(title).ok_or_else(|| {
                        Error::GraphImport(format!("unknown song `{title}` in edge"))
                    })?;
                    slot.1.push((token, *weight));
                }
                other => {
                    return Err(Error::GraphImport(format!("unknown edge kind `{other}`")));
                }
            }
        }
        let records = songs
            .into_iter()
            .map(|(title, (mood, terms))| {
                let mood = mood.ok_or_else(|| {
                    Error::GraphImport(format!("song `{title}` has no BELONGS_TO edge"))
                })?;
                Ok(GraphRecord { title, mood, terms })
            })
            .collect::<Result<Vec<_>>>()?;
        KnowledgeGraph::build(records, self.kb_revision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mood::MOOD_COUNT;

    fn tok(s: &str) -> Token {
        Token::parse(s).unwrap()
    }

    fn freq(pairs: &[(&str, u64)]) -> TokenFrequencyTable {
        TokenFrequencyTable::from_counts(pairs.iter().map(|&(w, c)| (tok(w), c)))
    }

    fn kb_from_rows(rows: &[(&str, [u64; MOOD_COUNT])]) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for &(word, counts) in rows {
            for mood in MoodLabel::ALL {
                if counts[mood.index()] > 0 {
                    kb.merge_frequency_table(&freq(&[(word, counts[mood.index()])]), mood);
                }
            }
        }
        kb.recompute();
        kb
    }

    fn fig2_kb() -> KnowledgeBase {
        kb_from_rows(&[
            ("मेरी", [29, 1, 22, 24, 24]),
            ("मैया", [0, 0, 0, 26, 0]),
            ("जय", [0, 1, 0, 55, 0]),
        ])
    }

    fn single_record_graph() -> KnowledgeGraph {
        KnowledgeGraph::build(
            vec![GraphRecord {
                title: "गीत".to_string(),
                mood: MoodLabel::Devotional,
                terms: vec![(tok("जय"), 2.9)],
            }],
            1,
        )
        .unwrap()
    }

    #[test]
    fn depicting_terms_rank_by_contribution() {
        let table = freq(&[("जय", 3), ("मैया", 2), ("मेरी", 1)]);
        let terms = select_depicting_terms(&table, &fig2_kb(), MoodLabel::Devotional, 2);
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].0, tok("जय"));
        assert!((terms[0].1 - 3.0 * (55.0 / 56.0)).abs() < 1e-12);
        assert_eq!(terms[1].0, tok("मैया"));
        assert!((terms[1].1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn depicting_terms_all_oov() {
        let table = freq(&[("अनजान", 9)]);
        assert!(select_depicting_terms(&table, &fig2_kb(), MoodLabel::Happy, 5).is_empty());
    }

    #[test]
    fn depicting_terms_k_larger_than_qualifying() {
        let table = freq(&[("जय", 3), ("मैया", 2)]);
        let terms = select_depicting_terms(&table, &fig2_kb(), MoodLabel::Devotional, 10);
        assert_eq!(terms.len(), 2);
    }

    #[test]
    fn depicting_terms_require_positive_contribution() {
        // जय has prob_happy = 0, so it cannot depict happy
        let table = freq(&[("जय", 3)]);
        assert!(select_depicting_terms(&table, &fig2_kb(), MoodLabel::Happy, 5).is_empty());
    }

    #[test]
    fn single_record_counts() {
        let graph = single_record_graph();
        assert_eq!(graph.node_count(), 7); // 5 moods + 1 song + 1 term
        assert_eq!(graph.edge_count(), 2);
        assert_eq!(graph.nodes().len(), 7);
        assert_eq!(graph.edges().len(), 2);
    }

    #[test]
    fn shared_terms_are_deduplicated() {
        let graph = KnowledgeGraph::build(
            vec![
                GraphRecord {
                    title: "एक".to_string(),
                    mood: MoodLabel::Devotional,
                    terms: vec![(tok("जय"), 1.0)],
                },
                GraphRecord {
                    title: "दो".to_string(),
                    mood: MoodLabel::Devotional,
                    terms: vec![(tok("जय"), 2.0)],
                },
            ],
            0,
        )
        .unwrap();
        let term_nodes: Vec<_> = graph
            .nodes()
            .into_iter()
            .filter(|n| n.kind == NodeKind::Term)
            .collect();
        assert_eq!(term_nodes.len(), 1);
        let depicts = graph
            .edges()
            .into_iter()
            .filter(|e| e.kind == EdgeKind::Depicts)
            .count();
        assert_eq!(depicts, 2);
    }

    #[test]
    fn empty_graph_has_only_mood_nodes() {
        let graph = KnowledgeGraph::build(vec![], 0).unwrap();
        assert_eq!(graph.node_count(), 5);
        assert_eq!(graph.edge_count(), 0);
        assert!(graph.nodes().iter().all(|n| n.kind == NodeKind::Mood));
    }

    #[test]
    fn duplicate_titles_are_rejected() {
        let record = GraphRecord {
            title: "गीत".to_string(),
            mood: MoodLabel::Happy,
            terms: vec![],
        };
        let err = KnowledgeGraph::build(vec![record.clone(), record], 0).unwrap_err();
        assert!(matches!(err, Error::DuplicateTitle(t) if t == "गीत"));
    }

    #[test]
    fn lookup_hits_and_misses() {
        let graph = single_record_graph();
        let entry = graph.lookup_song("गीत").unwrap();
        assert_eq!(entry.mood, MoodLabel::Devotional);
        assert_eq!(entry.terms[0].0, tok("जय"));
        assert!(graph.lookup_song("अनजान").is_none());
    }

    #[test]
    fn belongs_to_count_equals_song_count() {
        let graph = KnowledgeGraph::build(
            vec![
                GraphRecord {
                    title: "a".into(),
                    mood: MoodLabel::Happy,
                    terms: vec![(tok("क"), 1.0), (tok("ख"), 0.5)],
                },
                GraphRecord {
                    title: "b".into(),
                    mood: MoodLabel::Sad,
                    terms: vec![],
                },
            ],
            3,
        )
        .unwrap();
        let belongs = graph
            .edges()
            .into_iter()
            .filter(|e| e.kind == EdgeKind::BelongsTo)
            .count();
        assert_eq!(belongs, graph.song_count());
        assert_eq!(graph.node_count(), 2 + 5 + 2);
    }

    #[test]
    fn cypher_export_counts_statements() {
        let script = single_record_graph().to_cypher();
        let lines: Vec<&str> = script.lines().collect();
        let node_lines = lines
            .iter()
            .filter(|l| l.starts_with("MERGE (:"))
            .count();
        let rel_lines = lines
            .iter()
            .filter(|l| l.contains("-[:"))
            .count();
        assert_eq!(node_lines, 7);
        assert_eq!(rel_lines, 2);
        assert_eq!(lines.len(), 9);
        // MERGE-only: idempotent on re-import
        assert!(lines.iter().all(|l| l.starts_with("MERGE ")));
        assert!(script.contains("MERGE (:Mood {name: 'happy'});"));
        assert!(script.contains("[:DEPICTS {weight: 2.9}]"));
    }

    #[test]
    fn empty_graph_cypher_is_five_mood_merges() {
        let script = KnowledgeGraph::build(vec![], 0).unwrap().to_cypher();
        let lines: Vec<&str> = script.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines.iter().all(|l| l.contains(":Mood")));
    }

    #[test]
    fn exports_are_deterministic() {
        let graph = single_record_graph();
        for format in [ExportFormat::Dot, ExportFormat::Graphml, ExportFormat::Cypher] {
            assert_eq!(graph.export(format), graph.export(format));
        }
    }

    #[test]
    fn dot_export_shapes_and_weights() {
        let dot = single_record_graph().to_dot();
        assert!(dot.contains("\"song:गीत\" [label=\"गीत\", shape=box];"));
        assert!(dot.contains("\"mood:devotional\" [label=\"devotional\", shape=ellipse];"));
        assert!(dot.contains("\"term:जय\" [label=\"जय\", shape=plaintext];"));
        assert!(dot.contains("[label=\"BELONGS_TO\"];"));
        assert!(dot.contains("[label=\"DEPICTS\", weight=\"2.9\"];"));
    }

    #[test]
    fn graphml_round_trip_is_isomorphic() {
        let graph = KnowledgeGraph::build(
            vec![
                GraphRecord {
                    title: "पहला गीत".into(),
                    mood: MoodLabel::Devotional,
                    terms: vec![(tok("जय"), 3.0 * 55.0 / 56.0), (tok("मैया"), 2.0)],
                },
                GraphRecord {
                    title: "it's <b> & \"q\"".into(),
                    mood: MoodLabel::Party,
                    terms: vec![(tok("जय"), 0.25)],
                },
            ],
            42,
        )
        .unwrap();
        let reparsed = KnowledgeGraph::from_graphml(&graph.to_graphml()).unwrap();
        assert_eq!(reparsed, graph);
        assert_eq!(reparsed.nodes(), graph.nodes());
        assert_eq!(reparsed.edges(), graph.edges());
        assert_eq!(reparsed.kb_revision(), 42);
        // and the re-export is byte-identical
        assert_eq!(reparsed.to_graphml(), graph.to_graphml());
    }

    #[test]
    fn graphml_import_rejects_dangling_edges() {
        let xml = r#"<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key id="ekind" for="edge" attr.name="kind" attr.type="string"/>
  <graph id="g" edgedefault="directed">
    <edge source="song:x" target="mood:happy"><data key="ekind">BELONGS_TO</data></edge>
  </graph>
</graphml>"#;
        assert!(matches!(
            KnowledgeGraph::from_graphml(xml),
            Err(Error::GraphImport(_))
        ));
    }

    #[test]
    fn cypher_escapes_quotes() {
        let graph = KnowledgeGraph::build(
            vec![GraphRecord {
                title: "it's".into(),
                mood: MoodLabel::Happy,
                terms: vec![],
            }],
            0,
        )
        .unwrap();
        assert!(graph.to_cypher().contains("MERGE (:Song {title: 'it\\'s'});"));
    }

    #[test]
    fn batches_respect_statement_limit() {
        let script: String = (0..250)
            .map(|i| format!("MERGE (:Term {{word: 'w{i}'}});\n"))
            .collect();
        let batches = cypher_batches(&script, 100);
        assert_eq!(batches.len(), 3);
        let first: serde_json::Value = serde_json::from_str(&batches[0]).unwrap();
        assert_eq!(first["statements"].as_array().unwrap().len(), 100);
        let last: serde_json::Value = serde_json::from_str(&batches[2]).unwrap();
        assert_eq!(last["statements"].as_array().unwrap().len(), 50);
        assert!(first["statements"][0]["statement"]
            .as_str()
            .unwrap()
            .starts_with("MERGE"));
    }
}
