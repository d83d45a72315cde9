//! Scoring generated paradigms against gold forms.
//!
//! Accuracy is correct / generated over the compared cells. Strings are
//! NFC-normalized before comparison.

mod published;

pub use published::{audit, parse_published, PublishedRow, AuditFinding, AuditReport, PublishedFigures, PUBLISHED_TABLE};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::features::{FeatureBundle, Png, StemClass, TamForm};
use crate::lexicon::VerbEntry;
use crate::morphotactics::MorphSequence;
use crate::orthography::Boundary;
use crate::script::{self, Radical};
use crate::stemgen::RegularityFlag;
use crate::synthesizer::Paradigm;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{file}:{line}: {reason}")]
    ParseError { file: String, line: usize, reason: String },
    #[error("gold cell {0} is not in the paradigm")]
    GoldKeyUnmatched(FeatureBundle),
    #[error("gold set is for {gold}, paradigm is for {paradigm}")]
    VerbMismatch { gold: String, paradigm: String },
    #[error("correct count {correct} exceeds generated count {generated}")]
    InvalidCounts { generated: usize, correct: usize },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldSet {
    pub verb: String,
    pub entries: IndexMap<FeatureBundle, String>,
    pub source: String,
}

impl GoldSet {
    /// Uses a paradigm's own output as gold.
    pub fn from_paradigm(p: &Paradigm, source: &str) -> GoldSet {
        GoldSet {
            verb: p.verb.infinitive.clone(),
            entries: p.forms.iter().map(|(k, v)| (k.clone(), v.text.clone())).collect(),
            source: source.to_string(),
        }
    }

    /// Parses a gold file: `# verb:` and `# source:` directives followed by
    /// rows of `tam, class, subject, object, surface` (object `-` for none).
    pub fn parse(text: &str, file: &str) -> Result<GoldSet, EvalError> {
        let err = |line: usize, reason: String| EvalError::ParseError { file: file.into(), line, reason };
        let mut verb = None;
        let mut source = String::new();
        let mut entries = IndexMap::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let c = c.trim();
                if let Some(v) = c.strip_prefix("verb:") {
                    verb = Some(v.trim().to_string());
                } else if let Some(s) = c.strip_prefix("source:") {
                    source = s.trim().to_string();
                }
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols[0] == "tam" {
                continue;
            }
            if cols.len() != 5 {
                return Err(err(n, format!("expected 5 columns, got {}", cols.len())));
            }
            let tam: TamForm = cols[0].parse().map_err(|e| err(n, e))?;
            let subject: Png = cols[2].parse().map_err(|e| err(n, e))?;
            let object = match cols[3] {
                "-" => None,
                o => Some(o.parse::<Png>().map_err(|e| err(n, e))?),
            };
            let surface: String = cols[4].nfc().collect();
            script::decompose_str(&surface).map_err(|e| err(n, e.to_string()))?;
            let key = FeatureBundle { tam, stem_class: StemClass::new(cols[1]), subject, object };
            if entries.insert(key.clone(), surface).is_some() {
                return Err(err(n, format!("duplicate gold cell {key}")));
            }
        }
        let verb = verb.ok_or_else(|| err(0, "missing `# verb:` directive".into()))?;
        Ok(GoldSet { verb, entries, source })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GoldSet, EvalError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|source| EvalError::Io { path: path.display().to_string(), source })?;
        GoldSet::parse(&text, &path.display().to_string())
    }
}

/// Loads every `*.tsv` in `dir`, sorted by file name.
pub fn load_gold_dir(dir: impl AsRef<Path>) -> Result<Vec<GoldSet>, EvalError> {
    let dir = dir.as_ref();
    let io = |source| EvalError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tsv"))
        .collect();
    paths.sort();
    paths.iter().map(GoldSet::load).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCategory {
    ExceptionalCharacter,
    ExceptionalConcatenation,
    StructuralDivergence,
    MissingRule,
    Uncategorized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub verb: String,
    pub features: FeatureBundle,
    pub got: String,
    pub expected: String,
    pub segmentation: MorphSequence,
    pub category: ErrorCategory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub generated: usize,
    pub correct: usize,
    pub wrong: usize,
    pub accuracy: f64,
    pub per_category: BTreeMap<ErrorCategory, usize>,
    pub mismatches: Vec<Mismatch>,
}

fn ratio(correct: usize, generated: usize) -> f64 {
    // nothing generated means nothing wrong
    if generated == 0 {
        1.0
    } else {
        correct as f64 / generated as f64
    }
}

impl EvalReport {
    pub fn from_counts(generated: usize, correct: usize) -> Result<EvalReport, EvalError> {
        if correct > generated {
            return Err(EvalError::InvalidCounts { generated, correct });
        }
        Ok(EvalReport {
            generated,
            correct,
            wrong: generated - correct,
            accuracy: ratio(correct, generated),
            per_category: BTreeMap::new(),
            mismatches: Vec::new(),
        })
    }

    pub fn accuracy_percent(&self) -> f64 {
        self.accuracy * 100.0
    }
}

pub fn score(paradigm: &Paradigm, gold: &GoldSet) -> Result<EvalReport, EvalError> {
    if paradigm.verb.infinitive != gold.verb {
        return Err(EvalError::VerbMismatch { gold: gold.verb.clone(), paradigm: paradigm.verb.infinitive.clone() });
    }
    let mut correct = 0;
    let mut per_category = BTreeMap::new();
    let mut mismatches = Vec::new();
    for (key, expected) in &gold.entries {
        let form = paradigm.get(key).ok_or_else(|| EvalError::GoldKeyUnmatched(key.clone()))?;
        let got: String = form.text.nfc().collect();
        let expected: String = expected.nfc().collect();
        if got == expected {
            correct += 1;
            continue;
        }
        let mut m = Mismatch {
            verb: gold.verb.clone(),
            features: key.clone(),
            got,
            expected,
            segmentation: form.segmentation.clone(),
            category: ErrorCategory::Uncategorized,
        };
        m.category = categorize(&m, &paradigm.verb);
        *per_category.entry(m.category).or_insert(0) += 1;
        mismatches.push(m);
    }
    let generated = gold.entries.len();
    Ok(EvalReport {
        generated,
        correct,
        wrong: generated - correct,
        accuracy: ratio(correct, generated),
        per_category,
        mismatches,
    })
}

/// Sums reports. The result does not depend on input order.
pub fn aggregate(reports: &[EvalReport]) -> EvalReport {
    let generated = reports.iter().map(|r| r.generated).sum();
    let correct = reports.iter().map(|r| r.correct).sum();
    let mut per_category = BTreeMap::new();
    for r in reports {
        for (k, v) in &r.per_category {
            *per_category.entry(*k).or_insert(0) += v;
        }
    }
    let mut mismatches: Vec<Mismatch> = reports.iter().flat_map(|r| r.mismatches.iter().cloned()).collect();
    mismatches.sort_by(|a, b| {
        (&a.verb, a.features.to_string(), &a.got, &a.expected).cmp(&(&b.verb, b.features.to_string(), &b.got, &b.expected))
    });
    EvalReport {
        generated,
        correct,
        wrong: generated - correct,
        accuracy: ratio(correct, generated),
        per_category,
        mismatches,
    }
}

fn first_difference(a: &[char], b: &[char]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn series(c: char) -> Option<Radical> {
    Radical::of(c).ok()
}

/// Assigns a mismatch to one error category; the first test that holds wins.
pub fn categorize(m: &Mismatch, entry: &VerbEntry) -> ErrorCategory {
    let got: Vec<char> = m.got.chars().collect();
    let expected: Vec<char> = m.expected.chars().collect();
    let at = first_difference(&got, &expected);
    let diff_series: Vec<Radical> =
        [got.get(at), expected.get(at)].into_iter().flatten().filter_map(|c| series(*c)).collect();

    let mut flagged = Vec::new();
    if entry.flags.contains(&RegularityFlag::GutturalInitial) {
        flagged.extend(entry.radicals.first());
    }
    if entry.flags.contains(&RegularityFlag::GutturalMedial) {
        flagged.extend(entry.radicals.get(1));
    }
    if entry.flags.contains(&RegularityFlag::VelarFinal) {
        flagged.extend(entry.radicals.last());
    }
    if diff_series.iter().any(|r| flagged.contains(r)) {
        return ErrorCategory::ExceptionalCharacter;
    }

    // boundaries whose neighbouring graphemes belong to the same series
    let morphs = m.segmentation.morphs();
    let mut offset = 0;
    for pair in morphs.windows(2) {
        offset += pair[0].form.chars().count();
        let left = pair[0].form.chars().last().and_then(series);
        let right = pair[1].form.chars().next().and_then(series);
        if left.is_some() && left == right && at + 1 >= offset && at <= offset {
            return ErrorCategory::ExceptionalConcatenation;
        }
    }

    if m.got == m.segmentation.concatenation() {
        return ErrorCategory::MissingRule;
    }
    if !entry.flags.is_empty() {
        return ErrorCategory::StructuralDivergence;
    }
    ErrorCategory::Uncategorized
}

/// Boundary symbols are never part of gold or generated text.
pub fn is_clean_surface(s: &str) -> bool {
    s.chars().all(|c| Boundary::from_symbol(c).is_none() && script::is_supported(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphotactics::Morph;
    use crate::lexicon::Slot;

    fn seq(parts: &[(&str, Slot)]) -> MorphSequence {
        let morphs = parts
            .iter()
            .map(|(f, s)| Morph { slot: *s, form: f.to_string(), affix: (*s != Slot::Stem).then(|| "x".into()) })
            .collect();
        MorphSequence::new(Png::P1cp, None, morphs).unwrap()
    }

    fn mismatch(got: &str, expected: &str, s: MorphSequence) -> Mismatch {
        Mismatch {
            verb: String::new(),
            features: FeatureBundle::new(TamForm::Perfective, "basic", Png::P1cp),
            got: got.into(),
            expected: expected.into(),
            segmentation: s,
            category: ErrorCategory::Uncategorized,
        }
    }

    #[test]
    fn counts_and_percentages() {
        let r = EvalReport::from_counts(1262, 1162).unwrap();
        assert_eq!(r.wrong, 100);
        assert!((r.accuracy_percent() - 92.0).abs() < 0.1);
        let r = EvalReport::from_counts(590, 563).unwrap();
        assert!((r.accuracy_percent() - 95.4).abs() < 0.1);
        assert!(EvalReport::from_counts(1, 2).is_err());
    }

    #[test]
    fn aggregate_single_is_identity() {
        let r = EvalReport::from_counts(580, 547).unwrap();
        assert_eq!(aggregate(std::slice::from_ref(&r)), r);
    }

    #[test]
    fn doubled_n_is_concatenation_error() {
        let e = VerbEntry::new("አመነ", "አ,መ,ነ").unwrap();
        let m = mismatch("አመንነ", "አመነ", seq(&[("አመነ", Slot::Stem), ("ነ", Slot::Sms)]));
        assert_eq!(categorize(&m, &e), ErrorCategory::ExceptionalConcatenation);
    }

    #[test]
    fn flagged_radical_is_exceptional_character() {
        let e = VerbEntry::new("ሐደገ", "ሐ,ደ,ገ").unwrap();
        let m = mismatch("ይሕድግ", "ይሕደግ", seq(&[("ይ", Slot::PrefixCircumfix), ("ሕድግ", Slot::Stem)]));
        // differs at ደ, not flagged
        assert_ne!(categorize(&m, &e), ErrorCategory::ExceptionalCharacter);
        let m = mismatch("ይሕድግ", "ይሕድጎ", seq(&[("ይ", Slot::PrefixCircumfix), ("ሕድግ", Slot::Stem)]));
        assert_eq!(categorize(&m, &e), ErrorCategory::ExceptionalCharacter);
    }

    #[test]
    fn plain_concatenation_is_missing_rule() {
        let e = VerbEntry::new("ከበበ", "ከ,በ,በ").unwrap();
        let m = mismatch("ተከብበ", "ተከበ", seq(&[("ተ", Slot::Prefix), ("ከብበ", Slot::Stem)]));
        assert_eq!(categorize(&m, &e), ErrorCategory::MissingRule);
    }

    #[test]
    fn gold_file_parsing() {
        let text = "# verb: ቀተለ\n# source: test\ntam\tclass\tsubject\tobject\tsurface\n\
                    perfective\tbasic\t1cs\t-\tቀተልኩ\nperfective\tbasic\t2mp\t1cs\tቀተልክሙኒ\n";
        let g = GoldSet::parse(text, "g").unwrap();
        assert_eq!(g.verb, "ቀተለ");
        assert_eq!(g.entries.len(), 2);
        assert!(GoldSet::parse("perfective\tbasic\t1cs\t-\tቀተልኩ\n", "g").is_err());
        assert!(GoldSet::parse("# verb: x\nperfective\tbasic\t1cs\t-\tqtl\n", "g").is_err());
    }
}
