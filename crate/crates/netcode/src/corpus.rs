//! The bundled example inputs.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use netcode_core::analysis::builtin;
use netcode_core::fixtures;

use crate::formats::{to_json, CodeGraphDoc, ConstraintDoc, NetworkDoc};

pub const CORPUS_ENV: &str = "NETCODE_CORPUS_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    Network,
    CodeGraph,
    Constraints,
}

impl EntryKind {
    pub fn name(self) -> &'static str {
        match self {
            EntryKind::Network => "network",
            EntryKind::CodeGraph => "codegraph",
            EntryKind::Constraints => "constraints",
        }
    }
}

pub struct Entry {
    pub file: &'static str,
    pub kind: EntryKind,
    pub description: &'static str,
}

pub const ENTRIES: [Entry; 8] = [
    Entry {
        file: "butterfly.json",
        kind: EntryKind::Network,
        description: "two sources, two receivers, one bottleneck edge",
    },
    Entry {
        file: "modified_butterfly.json",
        kind: EntryKind::Network,
        description: "butterfly variant that needs no coding point",
    },
    Entry {
        file: "four_source.json",
        kind: EntryKind::Network,
        description: "four sources, three receivers, four coding points",
    },
    Entry {
        file: "combination.json",
        kind: EntryKind::Network,
        description: "three sources, nine coding points, 81 receivers",
    },
    Entry { file: "butterfly.codegraph.json", kind: EntryKind::CodeGraph, description: "code graph of the butterfly" },
    Entry {
        file: "four_source.codegraph.json",
        kind: EntryKind::CodeGraph,
        description: "code graph of the four-source network",
    },
    Entry {
        file: "combination.codegraph.json",
        kind: EntryKind::CodeGraph,
        description: "code graph of the combination network",
    },
    Entry {
        file: "fano.constraints.json",
        kind: EntryKind::Constraints,
        description: "Fano-plane dependencies, realizable only in characteristic 2",
    },
];

/// `NETCODE_CORPUS_DIR`, else the directory shipped with the crate.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"),
    }
}

/// Contents of a corpus file, generated from the built-in fixtures.
pub fn generate(file: &str) -> Option<String> {
    let network = |(n, ps)| to_json(&NetworkDoc::from_network(&n, Some(&ps)));
    Some(match file {
        "butterfly.json" => network(fixtures::butterfly()),
        "modified_butterfly.json" => network(fixtures::modified_butterfly()),
        "four_source.json" => network(fixtures::four_source()),
        "combination.json" => network(fixtures::combination()),
        "butterfly.codegraph.json" => to_json(&CodeGraphDoc::from_code_graph(&builtin::butterfly_code_graph())),
        "four_source.codegraph.json" => to_json(&CodeGraphDoc::from_code_graph(&builtin::four_source_code_graph())),
        "combination.codegraph.json" => to_json(&CodeGraphDoc::from_code_graph(&builtin::combination_code_graph())),
        "fano.constraints.json" => to_json(&ConstraintDoc::from_system(&builtin::fano_system())),
        _ => return None,
    })
}

/// Writes every entry into `dir`.
pub fn export(dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for e in &ENTRIES {
        fs::write(dir.join(e.file), generate(e.file).expect("listed entry"))?;
    }
    Ok(())
}

/// An existing path, else the first corpus file among `arg`, `arg.json`,
/// `arg.codegraph.json` and `arg.constraints.json`.
pub fn resolve(arg: &str) -> Option<PathBuf> {
    let p = PathBuf::from(arg);
    if p.is_file() {
        return Some(p);
    }
    let dir = corpus_dir();
    ["", ".json", ".codegraph.json", ".constraints.json"]
        .into_iter()
        .map(|ext| dir.join(format!("{arg}{ext}")))
        .find(|p| p.is_file())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_match_fixtures() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
        for e in &ENTRIES {
            let on_disk = fs::read_to_string(dir.join(e.file)).unwrap();
            assert_eq!(on_disk, generate(e.file).unwrap(), "{}", e.file);
        }
    }

    #[test]
    fn short_names_resolve() {
        for (arg, file) in [
            ("butterfly", "butterfly.json"),
            ("four_source.codegraph", "four_source.codegraph.json"),
            ("fano", "fano.constraints.json"),
        ] {
            assert_eq!(resolve(arg).unwrap().file_name().unwrap(), file);
        }
        assert!(resolve("no_such_entry").is_none());
    }
}
