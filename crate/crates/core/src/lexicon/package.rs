//! Rule packages: a directory holding `manifest.toml` plus the data files it
//! names. Loading is all-or-nothing; every cross-reference is checked before
//! a package is handed out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureConstraint, Png, StemClass, TamForm};
use crate::orthography::{check_package_rules, DiagnosticKind, RuleDiagnostic, RuleSet};
use crate::script::{self, classify_radical, Radical, RadicalClass};
use crate::stemgen::{self, StemPattern};

#[derive(Debug, Error)]
pub enum PackageError {
    #[error("no manifest.toml in {0}")]
    ManifestMissing(PathBuf),
    #[error("dangling reference {id} in {context}")]
    DanglingReference { id: String, context: String },
    #[error("{file}:{line}: {reason}")]
    ParseError { file: String, line: usize, reason: String },
    #[error("affixes {0} and {1} occupy the same slot with unifying features")]
    AmbiguousAffix(String, String),
    #[error("conflicting orthographic rules: {}", .0.iter().map(|d| d.message.as_str()).collect::<Vec<_>>().join("; "))]
    RuleConflicts(Vec<RuleDiagnostic>),
    #[error("invalid package: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Positions of the morphotactic template, in surface order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Prefix,
    PrefixCircumfix,
    Stem,
    SuffixCircumfix,
    Sms,
    Oms,
}

impl Slot {
    pub const ALL: [Slot; 6] = [
        Slot::Prefix,
        Slot::PrefixCircumfix,
        Slot::Stem,
        Slot::SuffixCircumfix,
        Slot::Sms,
        Slot::Oms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Slot::Prefix => "prefix",
            Slot::PrefixCircumfix => "prefix_circumfix",
            Slot::Stem => "stem",
            Slot::SuffixCircumfix => "suffix_circumfix",
            Slot::Sms => "sms",
            Slot::Oms => "oms",
        }
    }

    pub fn from_name(s: &str) -> Option<Slot> {
        Slot::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where an affix row comes from: attested in the published affix table, or
/// filled in from standard grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AffixSource {
    Table,
    Grammar,
}

pub fn affix_source_name(s: AffixSource) -> &'static str {
    match s {
        AffixSource::Table => "table",
        AffixSource::Grammar => "grammar",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affix {
    pub id: String,
    pub slot: Slot,
    /// Empty for a zero morph (written `∅` in data files).
    pub form: String,
    pub features: FeatureConstraint,
    pub source: AffixSource,
}

/// Radical-to-class table used by rules and the verb classifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalClasses {
    special: BTreeMap<Radical, RadicalClass>,
}

impl Default for RadicalClasses {
    fn default() -> Self {
        let special = Radical::all()
            .map(|r| (r, classify_radical(r)))
            .filter(|(_, c)| *c != RadicalClass::Plain)
            .collect();
        RadicalClasses { special }
    }
}

impl RadicalClasses {
    pub fn classify(&self, r: Radical) -> RadicalClass {
        self.special.get(&r).copied().unwrap_or(RadicalClass::Plain)
    }

    /// Radicals listed for `class`; for `plain` this is every other radical.
    pub fn members(&self, class: RadicalClass) -> Vec<Radical> {
        Radical::all().filter(|r| self.classify(*r) == class).collect()
    }

    fn parse(text: &str, file: &str) -> Result<RadicalClasses, PackageError> {
        let mut special = BTreeMap::new();
        for (n, cols) in data_lines(text) {
            let perr = |reason: String| PackageError::ParseError { file: file.into(), line: n, reason };
            if cols.len() != 2 {
                return Err(perr(format!("expected radical and class, got {} columns", cols.len())));
            }
            let mut chars = cols[0].chars();
            let r = match (chars.next(), chars.next()) {
                (Some(c), None) => Radical::new(c).map_err(|e| perr(e.to_string()))?,
                _ => return Err(perr(format!("{:?} is not a single first-order fidel", cols[0]))),
            };
            let class = RadicalClass::from_name(cols[1])
                .ok_or_else(|| perr(format!("unknown radical class {:?}", cols[1])))?;
            if special.insert(r, class).is_some() {
                return Err(perr(format!("radical {r} listed twice")));
            }
        }
        special.retain(|_, c| *c != RadicalClass::Plain);
        Ok(RadicalClasses { special })
    }

    fn to_text(&self) -> String {
        let mut out = String::from("# radical\tclass\n");
        for (r, c) in &self.special {
            out.push_str(&format!("{r}\t{}\n", c.name()));
        }
        out
    }
}

/// Excluded (subject, object) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatMatrix {
    pub excluded: BTreeSet<(Png, Png)>,
}

impl CompatMatrix {
    /// Same-person exclusions for first and second person.
    pub fn same_person() -> CompatMatrix {
        let excluded = Png::ALL
            .into_iter()
            .flat_map(|s| Png::ALL.into_iter().map(move |o| (s, o)))
            .filter(|(s, o)| s.person() == o.person() && s.person() != 3)
            .collect();
        CompatMatrix { excluded }
    }

    pub fn excludes(&self, subject: Png, object: Png) -> bool {
        self.excluded.contains(&(subject, object))
    }

    fn parse(text: &str, file: &str) -> Result<CompatMatrix, PackageError> {
        let mut excluded = BTreeSet::new();
        for (n, cols) in data_lines(text) {
            let perr = |reason: String| PackageError::ParseError { file: file.into(), line: n, reason };
            if cols.len() != 2 {
                return Err(perr("expected subject and object codes".into()));
            }
            let s: Png = cols[0].parse().map_err(perr)?;
            let o: Png = cols[1].parse().map_err(|e: String| PackageError::ParseError {
                file: file.into(),
                line: n,
                reason: e,
            })?;
            excluded.insert((s, o));
        }
        Ok(CompatMatrix { excluded })
    }

    fn to_text(&self) -> String {
        let mut out = String::from("# subject\tobject\n");
        for (s, o) in &self.excluded {
            out.push_str(&format!("{s}\t{o}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemClassDef {
    pub id: StemClass,
    /// Affix id of the class marker placed in the prefix slot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marker: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    version: String,
    #[serde(default = "default_alphabet")]
    alphabet: String,
    #[serde(default = "default_affixes")]
    affixes: String,
    #[serde(default = "default_rules")]
    ortho_rules: String,
    #[serde(default = "default_patterns")]
    stem_patterns: String,
    #[serde(default = "default_compat")]
    compat: String,
    stem_class: Vec<StemClassDef>,
}

fn default_alphabet() -> String {
    "alphabet.tsv".into()
}
fn default_affixes() -> String {
    "affixes.tsv".into()
}
fn default_rules() -> String {
    "ortho_rules.txt".into()
}
fn default_patterns() -> String {
    "stem_patterns.txt".into()
}
fn default_compat() -> String {
    "compat.tsv".into()
}

/// Number of stem classes every package declares.
pub const STEM_CLASS_COUNT: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct RulePackage {
    pub version: String,
    pub classes: Vec<StemClassDef>,
    pub alphabet: RadicalClasses,
    pub affixes: Vec<Affix>,
    pub rules: RuleSet,
    pub patterns: Vec<StemPattern>,
    pub compat: CompatMatrix,
}

/// Non-comment, non-blank lines split on tabs, with 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim_end_matches('\r');
        if l.trim().is_empty() || l.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, l.split('\t').map(str::trim).collect()))
        }
    })
}

fn parse_set<T: Ord>(
    field: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<BTreeSet<T>>, String> {
    if field == "*" {
        return Ok(None);
    }
    field.split(',').map(|s| parse(s.trim())).collect::<Result<_, _>>().map(Some)
}

fn format_set<T: fmt::Display>(set: &Option<BTreeSet<T>>) -> String {
    match set {
        None => "*".into(),
        Some(s) => s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
    }
}

fn parse_affixes(text: &str, file: &str) -> Result<Vec<Affix>, PackageError> {
    let mut out = Vec::new();
    for (n, cols) in data_lines(text) {
        let perr = |reason: String| PackageError::ParseError { file: file.into(), line: n, reason };
        if cols.first() == Some(&"id") {
            continue;
        }
        if cols.len() != 7 {
            return Err(perr(format!("expected 7 columns, got {}", cols.len())));
        }
        let slot = Slot::from_name(cols[1]).ok_or_else(|| perr(format!("unknown slot {:?}", cols[1])))?;
        if slot == Slot::Stem {
            return Err(perr("affixes cannot occupy the stem slot".into()));
        }
        let form = if cols[2] == "∅" { String::new() } else { cols[2].to_string() };
        if form.is_empty() && cols[2] != "∅" {
            return Err(perr("empty form; write ∅ for a zero morph".into()));
        }
        if let Err(e) = script::decompose_str(&form) {
            return Err(perr(e.to_string()));
        }
        let features = FeatureConstraint {
            tam: parse_set(cols[3], |s| s.parse::<TamForm>()).map_err(perr)?,
            class: parse_set(cols[4], |s| Ok(StemClass::new(s))).map_err(perr)?,
            png: parse_set(cols[5], |s| s.parse::<Png>()).map_err(perr)?,
        };
        let source = match cols[6] {
            "table" => AffixSource::Table,
            "grammar" => AffixSource::Grammar,
            other => return Err(perr(format!("unknown source {other:?}"))),
        };
        if matches!(slot, Slot::Sms | Slot::Oms) && features.png.as_ref().is_none_or(|p| p.len() != 1) {
            return Err(perr(format!("{slot} affix must mark exactly one PNG value")));
        }
        out.push(Affix { id: cols[0].to_string(), slot, form, features, source });
    }
    Ok(out)
}

fn affixes_to_text(affixes: &[Affix]) -> String {
    let mut out = String::from("id\tslot\tform\ttam\tclass\tpng\tsource\n");
    for a in affixes {
        let form = if a.form.is_empty() { "∅" } else { a.form.as_str() };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            a.id,
            a.slot,
            form,
            format_set(&a.features.tam),
            format_set(&a.features.class),
            format_set(&a.features.png),
            affix_source_name(a.source),
        ));
    }
    out
}

fn read(dir: &Path, name: &str) -> Result<String, PackageError> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|source| PackageError::Io { path: path.display().to_string(), source })
}

impl RulePackage {
    pub fn load(dir: impl AsRef<Path>) -> Result<RulePackage, PackageError> {
        let dir = dir.as_ref();
        let manifest_path = dir.join("manifest.toml");
        if !manifest_path.is_file() {
            return Err(PackageError::ManifestMissing(dir.to_path_buf()));
        }
        let manifest: Manifest = toml::from_str(&read(dir, "manifest.toml")?).map_err(|e| {
            PackageError::ParseError { file: "manifest.toml".into(), line: 0, reason: e.to_string() }
        })?;

        let alphabet = RadicalClasses::parse(&read(dir, &manifest.alphabet)?, &manifest.alphabet)?;
        let affixes = parse_affixes(&read(dir, &manifest.affixes)?, &manifest.affixes)?;
        let rules = RuleSet::parse(&read(dir, &manifest.ortho_rules)?, alphabet.clone()).map_err(
            |(line, reason)| PackageError::ParseError { file: manifest.ortho_rules.clone(), line, reason },
        )?;
        let patterns = stemgen::parse_patterns(&read(dir, &manifest.stem_patterns)?).map_err(
            |(line, reason)| PackageError::ParseError { file: manifest.stem_patterns.clone(), line, reason },
        )?;
        let compat = CompatMatrix::parse(&read(dir, &manifest.compat)?, &manifest.compat)?;

        let pkg = RulePackage {
            version: manifest.version,
            classes: manifest.stem_class,
            alphabet,
            affixes,
            rules,
            patterns,
            compat,
        };
        pkg.validate()?;
        Ok(pkg)
    }

    /// Cross-reference checks shared by `load` and tests that build packages
    /// in memory.
    pub fn validate(&self) -> Result<(), PackageError> {
        if self.classes.len() != STEM_CLASS_COUNT {
            return Err(PackageError::Invalid(format!(
                "expected {STEM_CLASS_COUNT} stem classes, found {}",
                self.classes.len()
            )));
        }
        let class_ids: BTreeSet<&StemClass> = self.classes.iter().map(|c| &c.id).collect();
        if class_ids.len() != self.classes.len() {
            return Err(PackageError::Invalid("duplicate stem class id".into()));
        }

        let mut ids = BTreeSet::new();
        for a in &self.affixes {
            if !ids.insert(a.id.as_str()) {
                return Err(PackageError::Invalid(format!("duplicate affix id {}", a.id)));
            }
            if let Some(classes) = &a.features.class {
                for c in classes {
                    if !class_ids.contains(c) {
                        return Err(PackageError::DanglingReference {
                            id: c.to_string(),
                            context: format!("affix {}", a.id),
                        });
                    }
                }
            }
        }
        for (i, a) in self.affixes.iter().enumerate() {
            for b in &self.affixes[i + 1..] {
                if a.slot == b.slot && a.slot != Slot::Prefix && a.features.unifies(&b.features) {
                    return Err(PackageError::AmbiguousAffix(a.id.clone(), b.id.clone()));
                }
            }
        }

        for c in &self.classes {
            if let Some(m) = &c.marker {
                match self.affix(m) {
                    Some(a) if a.slot == Slot::Prefix => {}
                    _ => {
                        return Err(PackageError::DanglingReference {
                            id: m.clone(),
                            context: format!("marker of stem class {}", c.id),
                        })
                    }
                }
            }
        }

        for (i, p) in self.patterns.iter().enumerate() {
            let context = format!("stem pattern {} ({})", i + 1, p);
            let Some(def) = self.class_def(&p.class) else {
                return Err(PackageError::DanglingReference { id: p.class.to_string(), context });
            };
            if p.uses_marker() && def.marker.is_none() {
                return Err(PackageError::DanglingReference { id: "M".into(), context });
            }
        }

        if let Some(unknown) = self.rules.unknown_classes().into_iter().next() {
            return Err(PackageError::DanglingReference {
                id: format!("@{}", unknown.1),
                context: format!("orthographic rule {}", unknown.0),
            });
        }
        let fatal: Vec<RuleDiagnostic> = check_package_rules(&self.rules)
            .into_iter()
            .filter(|d| matches!(d.kind, DiagnosticKind::Conflict | DiagnosticKind::DuplicatePriority))
            .collect();
        if !fatal.is_empty() {
            return Err(PackageError::RuleConflicts(fatal));
        }
        Ok(())
    }

    pub fn affix(&self, id: &str) -> Option<&Affix> {
        self.affixes.iter().find(|a| a.id == id)
    }

    pub fn class_def(&self, class: &StemClass) -> Option<&StemClassDef> {
        self.classes.iter().find(|c| &c.id == class)
    }

    pub fn class_ids(&self) -> impl Iterator<Item = &StemClass> {
        self.classes.iter().map(|c| &c.id)
    }

    /// Affixes of `slot` whose features unify with `constraint`, in file order.
    pub fn affixes_for(&self, slot: Slot, constraint: &FeatureConstraint) -> Vec<&Affix> {
        self.affixes
            .iter()
            .filter(|a| a.slot == slot && a.features.unifies(constraint))
            .collect()
    }

    /// Member files keyed by their default names.
    pub fn to_files(&self) -> BTreeMap<&'static str, String> {
        let mut manifest = format!("version = {:?}\n", self.version);
        for c in &self.classes {
            manifest.push_str(&format!("\n[[stem_class]]\nid = {:?}\n", c.id.as_str()));
            if let Some(m) = &c.marker {
                manifest.push_str(&format!("marker = {m:?}\n"));
            }
        }
        BTreeMap::from([
            ("manifest.toml", manifest),
            ("alphabet.tsv", self.alphabet.to_text()),
            ("affixes.tsv", affixes_to_text(&self.affixes)),
            ("ortho_rules.txt", self.rules.to_text()),
            ("stem_patterns.txt", stemgen::patterns_to_text(&self.patterns)),
            ("compat.tsv", self.compat.to_text()),
        ])
    }

    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<(), PackageError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)
            .map_err(|source| PackageError::Io { path: dir.display().to_string(), source })?;
        for (name, text) in self.to_files() {
            let path = dir.join(name);
            fs::write(&path, text)
                .map_err(|source| PackageError::Io { path: path.display().to_string(), source })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_classes_match_script_sets() {
        let t = RadicalClasses::default();
        assert_eq!(t.classify(Radical::new('ኀ').unwrap()), RadicalClass::Guttural);
        assert_eq!(t.classify(Radical::new('ለ').unwrap()), RadicalClass::Plain);
        assert_eq!(t.members(RadicalClass::Velar).len(), 3);
        assert_eq!(t.members(RadicalClass::Guttural).len(), 5);
    }

    #[test]
    fn same_person_matrix_has_twenty_pairs() {
        let m = CompatMatrix::same_person();
        assert_eq!(m.excluded.len(), 20);
        assert!(m.excludes(Png::P1cs, Png::P1cs));
        assert!(m.excludes(Png::P2ms, Png::P2mp));
        assert!(!m.excludes(Png::P3ms, Png::P3ms));
        assert!(!m.excludes(Png::P1cs, Png::P2ms));
    }

    #[test]
    fn affix_rows() {
        let text = "id\tslot\tform\ttam\tclass\tpng\tsource\n\
                    sms.3ms\tsms\t∅\tperfective\t*\t3ms\tgrammar\n\
                    sms.1cs\tsms\tኩ\tperfective\t*\t1cs\ttable\n";
        let a = parse_affixes(text, "a").unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a[0].form, "");
        assert_eq!(affixes_to_text(&a), text);
    }

    #[test]
    fn sms_needs_one_png() {
        let text = "x\tsms\tኩ\tperfective\t*\t1cs,1cp\ttable\n";
        assert!(matches!(parse_affixes(text, "a"), Err(PackageError::ParseError { line: 1, .. })));
        let text = "x\tsms\tkw\tperfective\t*\t1cs\ttable\n";
        assert!(parse_affixes(text, "a").is_err());
    }
}
