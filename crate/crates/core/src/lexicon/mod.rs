//! Verb lexicon and rule-package loading.
//!
//! Lexicon files are UTF-8 TSV with a header row and the columns
//! `infinitive`, `radicals`, `gloss_am`, `gloss_en`. Radicals are written as
//! a comma-separated list of fidels; only their series matters. Lines whose
//! first character is `#` are comments.

mod package;

pub use package::{
    affix_source_name, Affix, AffixSource, CompatMatrix, PackageError, RadicalClasses,
    RulePackage, Slot, StemClassDef,
};

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::script::{self, Radical};
use crate::stemgen::{classify_with, RegularityFlag};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{file}:{line}: {reason}")]
    ParseError { file: String, line: usize, reason: String },
    #[error("duplicate lexicon entry {0}")]
    DuplicateEntry(String),
    #[error("lexicon contains no entries")]
    EmptyLexicon,
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbEntry {
    /// Citation form as listed in the lexicon.
    pub infinitive: String,
    pub radicals: Vec<Radical>,
    pub gloss_am: String,
    pub gloss_en: String,
    pub flags: BTreeSet<RegularityFlag>,
}

impl VerbEntry {
    /// Builds an entry from a citation form and its radical fidels, deriving
    /// the regularity flags with the default radical classes.
    pub fn new(infinitive: &str, radicals: &str) -> Result<VerbEntry, String> {
        let radicals = parse_radicals(radicals)?;
        let entry = VerbEntry {
            infinitive: infinitive.to_string(),
            flags: classify_with(&radicals, &RadicalClasses::default()),
            radicals,
            gloss_am: String::new(),
            gloss_en: String::new(),
        };
        entry.validate()?;
        Ok(entry)
    }

    pub fn is_regular(&self) -> bool {
        self.flags.is_empty()
    }

    fn validate(&self) -> Result<(), String> {
        if self.infinitive.is_empty() {
            return Err("empty citation form".into());
        }
        if let Some(bad) = self.infinitive.chars().find(|c| !script::is_supported(*c)) {
            return Err(format!("citation form contains unsupported grapheme {bad:?}"));
        }
        if self.radicals.len() < 2 {
            return Err(format!("need at least two radicals, got {}", self.radicals.len()));
        }
        Ok(())
    }
}

fn parse_radicals(field: &str) -> Result<Vec<Radical>, String> {
    field
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Radical::of(c).map_err(|e| e.to_string()),
                _ => Err(format!("radical {s:?} must be a single fidel")),
            }
        })
        .collect()
}

/// An ordered, validated set of verb entries.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<VerbEntry>,
    index: HashMap<String, usize>,
}

impl Lexicon {
    pub fn from_entries(entries: Vec<VerbEntry>) -> Result<Lexicon, LexiconError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.infinitive.clone(), i).is_some() {
                return Err(LexiconError::DuplicateEntry(e.infinitive.clone()));
            }
        }
        Ok(Lexicon { entries, index })
    }

    pub fn entries(&self) -> &[VerbEntry] {
        &self.entries
    }

    pub fn get(&self, citation: &str) -> Option<&VerbEntry> {
        self.index.get(citation).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| LexiconError::Io { path: path.display().to_string(), source })?;
    parse_lexicon(&text, &path.display().to_string())
}

pub fn parse_lexicon(text: &str, file: &str) -> Result<Lexicon, LexiconError> {
    let err = |line: usize, reason: String| LexiconError::ParseError {
        file: file.to_string(),
        line,
        reason,
    };
    let mut entries = Vec::new();
    let mut seen_header = false;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if !seen_header {
            seen_header = true;
            if cols.first().map(|c| c.trim()) == Some("infinitive") {
                continue;
            }
            return Err(err(line_no, "missing header row (infinitive, radicals, gloss_am, gloss_en)".into()));
        }
        if cols.len() < 2 || cols.len() > 4 {
            return Err(err(line_no, format!("expected 2-4 tab-separated columns, got {}", cols.len())));
        }
        let radicals = parse_radicals(cols[1]).map_err(|r| err(line_no, r))?;
        let entry = VerbEntry {
            infinitive: cols[0].trim().to_string(),
            flags: classify_with(&radicals, &RadicalClasses::default()),
            radicals,
            gloss_am: cols.get(2).map(|s| s.trim().to_string()).unwrap_or_default(),
            gloss_en: cols.get(3).map(|s| s.trim().to_string()).unwrap_or_default(),
        };
        entry.validate().map_err(|r| err(line_no, r))?;
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(LexiconError::EmptyLexicon);
    }
    Lexicon::from_entries(entries)
}
