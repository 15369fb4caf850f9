//! JSON documents for networks, code graphs and constraint systems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use netcode_core::code_graph::{
    infer_paths, verify_code_graph, CodeGraph, CodeGraphViolation, CodeNode, NodeKind, PathFamily,
};
use netcode_core::labeling::{ConstraintError, ConstraintSystem, SpanConstraint};
use netcode_core::network::{Network, NetworkError, PathSystem, PathSystemViolation};
use serde::{Deserialize, Serialize};

/// `receiver -> source -> [ids]`
pub type NamedPaths = BTreeMap<String, BTreeMap<String, Vec<String>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    pub sources: Vec<String>,
    pub receivers: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<NamedPaths>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDoc {
    Source,
    Coding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    pub kind: KindDoc,
    #[serde(default)]
    pub labels: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeGraphDoc {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<ArcDoc>,
    /// Inferred when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<NamedPaths>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanDoc {
    pub parents: Vec<String>,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub m: usize,
    pub columns: Vec<String>,
    pub independent: Vec<Vec<String>>,
    pub spans: Vec<SpanDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub enum Document {
    Network(NetworkDoc),
    CodeGraph(CodeGraphDoc),
    Constraints(ConstraintDoc),
}

#[derive(Debug)]
pub enum FormatError {
    Json(serde_json::Error),
    UnknownDocument,
    Network(NetworkError),
    Paths(PathSystemViolation),
    UnknownNode(String),
    UnknownColumn(String),
    CodeGraph(CodeGraphViolation),
    Constraints(ConstraintError),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Json(e) => write!(f, "malformed JSON: {e}"),
            FormatError::UnknownDocument => {
                write!(f, "not a network (\"vertices\"), code graph (\"nodes\") or constraint system (\"columns\")")
            }
            FormatError::Network(e) => write!(f, "invalid network: {e}"),
            FormatError::Paths(e) => write!(f, "invalid paths: {e}"),
            FormatError::UnknownNode(id) => write!(f, "unknown code-graph node {id}"),
            FormatError::UnknownColumn(c) => write!(f, "unknown column {c}"),
            FormatError::CodeGraph(e) => write!(f, "invalid code graph: {e}"),
            FormatError::Constraints(e) => write!(f, "invalid constraint system: {e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

/// Sniffs the document type from its top-level keys.
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let has = |k: &str| value.get(k).is_some();
    let doc = if has("vertices") {
        Document::Network(serde_json::from_value(value)?)
    } else if has("nodes") {
        Document::CodeGraph(serde_json::from_value(value)?)
    } else if has("columns") {
        Document::Constraints(serde_json::from_value(value)?)
    } else {
        return Err(FormatError::UnknownDocument);
    };
    Ok(doc)
}

impl NetworkDoc {
    pub fn from_network(n: &Network, paths: Option<&PathSystem>) -> Self {
        let (vertices, edges, sources, receivers) = n.to_parts();
        NetworkDoc {
            vertices,
            edges: edges.into_iter().map(|(id, tail, head)| EdgeDoc { id, tail, head }).collect(),
            sources,
            receivers,
            paths: paths.map(|p| p.to_names(n)),
        }
    }

    pub fn to_network(&self) -> Result<(Network, Option<PathSystem>), FormatError> {
        let n = Network::new(
            self.vertices.clone(),
            self.edges.iter().map(|e| (e.id.clone(), e.tail.clone(), e.head.clone())).collect(),
            self.sources.clone(),
            self.receivers.clone(),
        )
        .map_err(FormatError::Network)?;
        let ps = match &self.paths {
            Some(p) => Some(PathSystem::from_names(&n, p).map_err(FormatError::Paths)?),
            None => None,
        };
        Ok((n, ps))
    }
}

impl CodeGraphDoc {
    pub fn from_code_graph(g: &CodeGraph) -> Self {
        let id = |v: usize| g.node(v).id.clone();
        CodeGraphDoc {
            nodes: g
                .nodes()
                .iter()
                .map(|v| NodeDoc {
                    id: v.id.clone(),
                    kind: match v.kind {
                        NodeKind::Source => KindDoc::Source,
                        NodeKind::Coding => KindDoc::Coding,
                    },
                    labels: v.labels.clone(),
                })
                .collect(),
            edges: g.edges().iter().map(|&(a, b)| ArcDoc { from: id(a), to: id(b) }).collect(),
            paths: Some(
                g.paths()
                    .iter()
                    .map(|(r, fam)| {
                        (r.clone(), fam.iter().map(|(&s, p)| (id(s), p.iter().map(|&v| id(v)).collect())).collect())
                    })
                    .collect(),
            ),
        }
    }

    /// Builds and verifies the code graph, inferring paths if none are given.
    pub fn to_code_graph(&self) -> Result<CodeGraph, FormatError> {
        let nodes: Vec<CodeNode> = self
            .nodes
            .iter()
            .map(|n| CodeNode {
                id: n.id.clone(),
                kind: match n.kind {
                    KindDoc::Source => NodeKind::Source,
                    KindDoc::Coding => NodeKind::Coding,
                },
                labels: n.labels.clone(),
            })
            .collect();
        let index: BTreeMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let idx = |id: &str| index.get(id).copied().ok_or_else(|| FormatError::UnknownNode(id.to_string()));
        let mut edges = BTreeSet::new();
        for e in &self.edges {
            edges.insert((idx(&e.from)?, idx(&e.to)?));
        }
        let mut g = CodeGraph::new(nodes, edges, PathFamily::new());
        let paths = match &self.paths {
            Some(named) => {
                let mut fam = PathFamily::new();
                for (r, by_source) in named {
                    let entry = fam.entry(r.clone()).or_default();
                    for (s, p) in by_source {
                        let p: Result<Vec<usize>, _> = p.iter().map(|v| idx(v)).collect();
                        entry.insert(idx(s)?, p?);
                    }
                }
                fam
            }
            None => infer_paths(&g).map_err(FormatError::CodeGraph)?,
        };
        g.set_paths(paths);
        verify_code_graph(&g).map_err(FormatError::CodeGraph)?;
        Ok(g)
    }
}

impl ConstraintDoc {
    pub fn from_system(cs: &ConstraintSystem) -> Self {
        let name = |c: &usize| cs.columns()[*c].clone();
        ConstraintDoc {
            m: cs.m(),
            columns: cs.columns().to_vec(),
            independent: cs.independent().iter().map(|a| a.iter().map(name).collect()).collect(),
            spans: cs
                .spans()
                .iter()
                .map(|s| SpanDoc { parents: s.parents.iter().map(name).collect(), target: name(&s.target) })
                .collect(),
            basis: cs.basis().map(|b| b.iter().map(name).collect()),
        }
    }

    pub fn to_system(&self) -> Result<ConstraintSystem, FormatError> {
        let index: BTreeMap<&str, usize> = self.columns.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let idx = |c: &str| index.get(c).copied().ok_or_else(|| FormatError::UnknownColumn(c.to_string()));
        let set = |v: &[String]| v.iter().map(|c| idx(c)).collect::<Result<Vec<_>, _>>();
        let independent = self.independent.iter().map(|a| set(a)).collect::<Result<Vec<_>, _>>()?;
        let spans = self
            .spans
            .iter()
            .map(|s| Ok(SpanConstraint { parents: set(&s.parents)?, target: idx(&s.target)? }))
            .collect::<Result<Vec<_>, FormatError>>()?;
        let basis = self.basis.as_deref().map(set).transpose()?;
        ConstraintSystem::new(self.m, self.columns.clone(), independent, spans, basis).map_err(FormatError::Constraints)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use netcode_core::analysis::builtin;
    use netcode_core::fixtures;

    #[test]
    fn network_round_trip() {
        let (n, ps) = fixtures::butterfly();
        let doc = NetworkDoc::from_network(&n, Some(&ps));
        let back = match parse_document(&to_json(&doc)).unwrap() {
            Document::Network(d) => d,
            other => panic!("{other:?}"),
        };
        let (n2, ps2) = back.to_network().unwrap();
        assert_eq!(n2, n);
        assert_eq!(ps2, Some(ps));
    }

    #[test]
    fn code_graph_round_trip_and_inference() {
        let g = builtin::four_source_code_graph();
        let mut doc = CodeGraphDoc::from_code_graph(&g);
        assert_eq!(doc.to_code_graph().unwrap(), g);
        doc.paths = None;
        assert_eq!(doc.to_code_graph().unwrap().paths(), g.paths());
    }

    #[test]
    fn constraint_round_trip() {
        let cs = builtin::fano_system();
        assert_eq!(ConstraintDoc::from_system(&cs).to_system().unwrap(), cs);
    }

    #[test]
    fn rejects_unknown_documents() {
        assert!(matches!(parse_document("{\"x\": 1}"), Err(FormatError::UnknownDocument)));
        assert!(matches!(parse_document("{"), Err(FormatError::Json(_))));
        let bad = r#"{"nodes":[{"id":"S","kind":"source","labels":["R"]}],"edges":[{"from":"S","to":"Q"}]}"#;
        match parse_document(bad).unwrap() {
            Document::CodeGraph(d) => assert!(matches!(d.to_code_graph(), Err(FormatError::UnknownNode(_)))),
            other => panic!("{other:?}"),
        }
    }
}
