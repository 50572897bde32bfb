//! Bundled example machines, programs and terms.
//!
//! Files are compiled in. Setting `PROBREC_FIXTURES` to a directory makes
//! [`load`] read from there first, falling back to the embedded copy.

use std::path::PathBuf;

pub const ENV_VAR: &str = "PROBREC_FIXTURES";

macro_rules! embed {
    ($($path:literal),* $(,)?) => {
        const EMBEDDED: &[(&str, &str)] = &[
            $(($path, include_str!(concat!("../fixtures/", $path))),)*
        ];
    };
}

embed!(
    "expected/fig1-outputs.json",
    "expected/fig2-ptc.json",
    "expected/paper-f-x0-mu10.json",
    "expected/paper-f-x1-mu10.json",
    "expected/paper-f-x2-mu10.json",
    "expected/paper-f-x5-mu10.json",
    "expected/paper-h-mu10.json",
    "machines/coin-writer.json",
    "machines/copy.json",
    "machines/fig1-machine.json",
    "machines/geometric.json",
    "machines/looper.json",
    "machines/random-append.json",
    "programs/coin-writer.prm",
    "programs/cons-ab.prm",
    "programs/jrand-choice.prm",
    "programs/reverse.prm",
    "terms/add.term",
    "terms/f-rand.term",
    "terms/i2p-term.term",
    "terms/id.term",
    "terms/paper-f.term",
    "terms/paper-h.term",
    "terms/rand.term",
    "tier/append-param.term",
    "tier/choose.term",
    "tier/concat.term",
    "tier/copy.term",
    "tier/corpus.json",
    "tier/count-b.term",
    "tier/coupled-random.term",
    "tier/drop.term",
    "tier/exp-rejected.term",
    "tier/head.term",
    "tier/iterate-copy.term",
    "tier/length.term",
    "tier/parity.term",
    "tier/random-append.term",
    "tier/random-subword.term",
    "tier/reverse-naive.term",
    "tier/reverse.term",
    "tier/simrec-copy.term",
    "tier/simrec-exp.term",
    "tier/swap2.term",
    "tier/tail.term",
    "tier/tupled-coupled.term",
    "tier/tupled-parity.term",
);

/// Every bundled fixture path, relative to the fixture root.
pub fn names() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(p, _)| *p)
}

/// Contents of the fixture at `path`.
pub fn load(path: &str) -> Option<String> {
    if let Some(dir) = std::env::var_os(ENV_VAR) {
        if let Ok(s) = std::fs::read_to_string(PathBuf::from(dir).join(path)) {
            return Some(s);
        }
    }
    EMBEDDED.iter().find(|(p, _)| *p == path).map(|(_, s)| s.to_string())
}

/// Names of the bundled machines, without directory or extension.
pub fn machine_names() -> Vec<&'static str> {
    names()
        .filter_map(|p| p.strip_prefix("machines/")?.strip_suffix(".json"))
        .collect()
}

pub fn machine(name: &str) -> Option<crate::ptm::PtmSpec> {
    crate::ptm::PtmSpec::from_json(&load(&format!("machines/{name}.json"))?).ok()
}

/// Resolves a bare fixture name such as `paper-h` or `fig1-machine` to its
/// path. Directories are searched in the order machines, terms, programs,
/// tier, expected.
pub fn find(name: &str) -> Option<&'static str> {
    if EMBEDDED.iter().any(|(p, _)| *p == name) {
        return names().find(|p| *p == name);
    }
    ["machines/", "terms/", "programs/", "tier/", "expected/"]
        .iter()
        .find_map(|dir| find_in(dir, name))
}

pub fn term(name: &str) -> Option<crate::dsl::TermFile> {
    crate::dsl::parse_term_file(&load(find_in("terms/", name)?)?).ok()
}

pub fn program(name: &str) -> Option<crate::prm::PrmSpec> {
    crate::prm::PrmSpec::parse(&load(find_in("programs/", name)?)?).ok()
}

/// An expected distribution, as a single distribution or a map of them.
pub fn expected(name: &str) -> Option<serde_json::Value> {
    serde_json::from_str(&load(find_in("expected/", name)?)?).ok()
}

/// Like [`find`], restricted to one directory such as `"terms/"`.
pub fn find_in(dir: &str, name: &str) -> Option<&'static str> {
    let stem = |p: &str| p.rsplit('/').next().and_then(|f| f.rsplit_once('.')).map(|(s, _)| s.to_string());
    names().find(|p| p.starts_with(dir) && (*p == name || stem(p).as_deref() == Some(name)))
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Accept,
    Reject,
}

/// One entry of the tiering corpus.
#[derive(Debug, Clone, serde::Deserialize)]
pub struct TierCase {
    pub name: String,
    pub file: String,
    pub expect: Expect,
    /// Minimal judgment, for accepted terms.
    pub judgment: Option<String>,
}

impl TierCase {
    pub fn term(&self) -> Option<(crate::word::Alphabet, crate::word::WordTerm)> {
        crate::dsl::parse_word(&load(&self.file)?).ok()
    }
}

pub fn tier_corpus() -> Vec<TierCase> {
    load("tier/corpus.json")
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::TermFile;
    use crate::nat::stdlib;
    use crate::tiering::{infer, TierVerdict};

    #[test]
    fn every_fixture_loads() {
        for name in machine_names() {
            assert!(machine(name).is_some(), "{name}");
        }
        for p in names() {
            let stem = p.rsplit('/').next().unwrap().rsplit_once('.').unwrap().0;
            let ok = match p.split('/').next().unwrap() {
                "terms" => term(stem).is_some(),
                "programs" => program(stem).is_some(),
                "expected" => expected(stem).is_some(),
                "tier" if stem != "corpus" => crate::dsl::parse_word(&load(p).unwrap()).is_ok(),
                _ => true,
            };
            assert!(ok, "{p}");
        }
        assert_eq!(find("fig1-machine"), Some("machines/fig1-machine.json"));
        assert_eq!(find("tier/copy.term"), Some("tier/copy.term"));
        assert_eq!(find("nope"), None);
    }

    #[test]
    fn term_files_spell_out_the_library() {
        let lib = stdlib();
        for (file, name) in [
            ("paper-h", "h"),
            ("paper-f", "f_shift"),
            ("id", "id"),
            ("rand", "rand"),
            ("add", "add"),
            ("f-rand", "f_rand"),
            ("i2p-term", "i2p_term"),
        ] {
            match term(file) {
                Some(TermFile::Nat(t)) => assert_eq!(t, lib.term(name).unwrap(), "{file}"),
                other => panic!("{file}: {other:?}"),
            }
        }
    }

    #[test]
    fn tier_corpus_verdicts() {
        let corpus = tier_corpus();
        assert_eq!(corpus.len(), 22);
        for case in corpus {
            let (s, t) = case.term().unwrap_or_else(|| panic!("{}", case.name));
            let v = infer(&t, &s, Default::default()).unwrap();
            match (&case.expect, v) {
                (Expect::Accept, TierVerdict::Typable { judgment }) => {
                    assert_eq!(Some(judgment), case.judgment.as_deref().map(|j| j.parse().unwrap()), "{}", case.name)
                }
                (Expect::Reject, TierVerdict::Untypable { .. }) => {}
                (_, v) => panic!("{}: {v:?}", case.name),
            }
        }
    }
}
