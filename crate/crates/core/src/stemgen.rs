//! Verb classification and stem formation.
//!
//! Stem patterns are data. A line of `stem_patterns.txt` reads
//! `tam | class | conditions | template`:
//!
//! * conditions: `-` or space-separated terms, each one of a regularity flag
//!   name, `R<i>=<fidel>`, `R<i>=@<class>`, `R<i>=R<j>` or `verb=<citation>`
//! * template: `M` (the class marker, placed in the prefix slot), `R<i>(o<k>)`
//!   (radical i in order k), `R<i>(x)` (deleted), `R<i>(=<fidel>)`
//!   (substituted) and literal fidels
//!
//! The most specific matching pattern wins; ties go to the earlier line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureConstraint, Png, StemClass, TamForm};
use crate::lexicon::{Affix, RadicalClasses, RulePackage, Slot, VerbEntry};
use crate::script::{self, Radical, RadicalClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityFlag {
    GutturalInitial,
    GutturalMedial,
    SemivowelAny,
    VelarFinal,
}

impl RegularityFlag {
    pub const ALL: [RegularityFlag; 4] = [
        RegularityFlag::GutturalInitial,
        RegularityFlag::GutturalMedial,
        RegularityFlag::SemivowelAny,
        RegularityFlag::VelarFinal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegularityFlag::GutturalInitial => "guttural_initial",
            RegularityFlag::GutturalMedial => "guttural_medial",
            RegularityFlag::SemivowelAny => "semivowel_any",
            RegularityFlag::VelarFinal => "velar_final",
        }
    }

    pub fn from_name(s: &str) -> Option<RegularityFlag> {
        RegularityFlag::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for RegularityFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_with(radicals: &[Radical], classes: &RadicalClasses) -> BTreeSet<RegularityFlag> {
    let mut flags = BTreeSet::new();
    let class_at = |i: usize| radicals.get(i).map(|r| classes.classify(*r));
    if class_at(0) == Some(RadicalClass::Guttural) {
        flags.insert(RegularityFlag::GutturalInitial);
    }
    if class_at(1) == Some(RadicalClass::Guttural) {
        flags.insert(RegularityFlag::GutturalMedial);
    }
    if radicals.iter().any(|r| classes.classify(*r) == RadicalClass::Semivowel) {
        flags.insert(RegularityFlag::SemivowelAny);
    }
    if radicals.last().map(|r| classes.classify(*r)) == Some(RadicalClass::Velar) {
        flags.insert(RegularityFlag::VelarFinal);
    }
    flags
}

/// Regularity flags of `entry` under the default radical classes.
pub fn classify_verb(entry: &VerbEntry) -> BTreeSet<RegularityFlag> {
    classify_with(&entry.radicals, &RadicalClasses::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Flag(RegularityFlag),
    Is(usize, Radical),
    InClass(usize, RadicalClass),
    SameAs(usize, usize),
    Verb(String),
}

impl Condition {
    fn weight(&self) -> u32 {
        match self {
            Condition::Flag(_) => 1,
            Condition::Verb(_) => 100,
            _ => 2,
        }
    }

    fn holds(&self, entry: &VerbEntry, classes: &RadicalClasses) -> bool {
        let r = |i: usize| entry.radicals.get(i).copied();
        match self {
            Condition::Flag(f) => entry.flags.contains(f),
            Condition::Is(i, rad) => r(*i) == Some(*rad),
            Condition::InClass(i, c) => r(*i).is_some_and(|x| classes.classify(x) == *c),
            Condition::SameAs(i, j) => r(*i).is_some() && r(*i) == r(*j),
            Condition::Verb(v) => entry.infinitive == *v,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Flag(x) => write!(f, "{x}"),
            Condition::Is(i, r) => write!(f, "R{}={r}", i + 1),
            Condition::InClass(i, c) => write!(f, "R{}=@{}", i + 1, c.name()),
            Condition::SameAs(i, j) => write!(f, "R{}=R{}", i + 1, j + 1),
            Condition::Verb(v) => write!(f, "verb={v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadicalOp {
    Order(u8),
    Delete,
    Substitute(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateToken {
    Marker,
    Radical(usize, RadicalOp),
    Literal(String),
}

impl fmt::Display for TemplateToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateToken::Marker => f.write_str("M"),
            TemplateToken::Radical(i, RadicalOp::Order(k)) => write!(f, "R{}(o{k})", i + 1),
            TemplateToken::Radical(i, RadicalOp::Delete) => write!(f, "R{}(x)", i + 1),
            TemplateToken::Radical(i, RadicalOp::Substitute(c)) => write!(f, "R{}(={c})", i + 1),
            TemplateToken::Literal(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemPattern {
    pub tam: TamForm,
    pub class: StemClass,
    pub conditions: Vec<Condition>,
    pub template: Vec<TemplateToken>,
}

impl StemPattern {
    /// Number of radicals the template consumes.
    pub fn arity(&self) -> usize {
        self.template.iter().filter(|t| matches!(t, TemplateToken::Radical(..))).count()
    }

    pub fn uses_marker(&self) -> bool {
        self.template.contains(&TemplateToken::Marker)
    }

    pub fn specificity(&self) -> u32 {
        self.conditions.iter().map(Condition::weight).sum()
    }

    fn applies(&self, entry: &VerbEntry, classes: &RadicalClasses) -> bool {
        self.arity() == entry.radicals.len() && self.conditions.iter().all(|c| c.holds(entry, classes))
    }

    /// Builds the stem string; `None` if a radical cannot take the order.
    fn apply(&self, radicals: &[Radical]) -> Option<String> {
        let mut out = String::new();
        for tok in &self.template {
            match tok {
                TemplateToken::Marker => {}
                TemplateToken::Literal(s) => out.push_str(s),
                TemplateToken::Radical(i, op) => match op {
                    RadicalOp::Order(k) => out.push(script::compose_raw(radicals[*i], *k).ok()?),
                    RadicalOp::Delete => {}
                    RadicalOp::Substitute(c) => out.push(*c),
                },
            }
        }
        Some(out)
    }
}

impl fmt::Display for StemPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conds = if self.conditions.is_empty() {
            "-".to_string()
        } else {
            self.conditions.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        };
        let tpl = self.template.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "{} | {} | {} | {}", self.tam, self.class, conds, tpl)
    }
}

fn parse_radical_index(s: &str) -> Result<usize, String> {
    let n: usize = s
        .strip_prefix('R')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| format!("bad radical reference {s:?}"))?;
    if n == 0 {
        return Err("radicals are numbered from R1".into());
    }
    Ok(n - 1)
}

fn single_fidel(s: &str) -> Result<char, String> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => script::decompose(c).map(|_| c).map_err(|e| e.to_string()),
        _ => Err(format!("{s:?} is not a single fidel")),
    }
}

fn parse_condition(s: &str) -> Result<Condition, String> {
    if let Some(flag) = RegularityFlag::from_name(s) {
        return Ok(Condition::Flag(flag));
    }
    let (lhs, rhs) = s.split_once('=').ok_or_else(|| format!("unknown condition {s:?}"))?;
    if lhs == "verb" {
        return Ok(Condition::Verb(rhs.to_string()));
    }
    let i = parse_radical_index(lhs)?;
    if let Some(class) = rhs.strip_prefix('@') {
        let c = RadicalClass::from_name(class).ok_or_else(|| format!("unknown class @{class}"))?;
        return Ok(Condition::InClass(i, c));
    }
    if rhs.starts_with('R') {
        return Ok(Condition::SameAs(i, parse_radical_index(rhs)?));
    }
    let c = single_fidel(rhs)?;
    Ok(Condition::Is(i, Radical::of(c).map_err(|e| e.to_string())?))
}

fn parse_template_token(s: &str) -> Result<TemplateToken, String> {
    if s == "M" {
        return Ok(TemplateToken::Marker);
    }
    if let Some((r, rest)) = s.split_once('(') {
        let i = parse_radical_index(r)?;
        let body = rest.strip_suffix(')').ok_or_else(|| format!("unclosed {s:?}"))?;
        let op = if body == "x" {
            RadicalOp::Delete
        } else if let Some(k) = body.strip_prefix('o') {
            let k: u8 = k.parse().map_err(|_| format!("bad order in {s:?}"))?;
            if !(1..=7).contains(&k) {
                return Err(format!("order {k} outside 1-7"));
            }
            RadicalOp::Order(k)
        } else if let Some(c) = body.strip_prefix('=') {
            RadicalOp::Substitute(single_fidel(c)?)
        } else {
            return Err(format!("bad radical operation {s:?}"));
        };
        return Ok(TemplateToken::Radical(i, op));
    }
    script::decompose_str(s).map_err(|e| e.to_string())?;
    Ok(TemplateToken::Literal(s.to_string()))
}

fn parse_pattern(line: &str) -> Result<StemPattern, String> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 |-separated fields, got {}", fields.len()));
    }
    let tam: TamForm = fields[0].parse()?;
    if fields[1].is_empty() {
        return Err("empty stem class".into());
    }
    let conditions = if fields[2] == "-" {
        Vec::new()
    } else {
        fields[2].split_whitespace().map(parse_condition).collect::<Result<_, _>>()?
    };
    let template: Vec<TemplateToken> =
        fields[3].split_whitespace().map(parse_template_token).collect::<Result<_, _>>()?;
    let mut seen: Vec<usize> = template
        .iter()
        .filter_map(|t| match t {
            TemplateToken::Radical(i, _) => Some(*i),
            _ => None,
        })
        .collect();
    seen.sort_unstable();
    if seen.is_empty() || seen != (0..seen.len()).collect::<Vec<_>>() {
        return Err("template must use each of R1..Rn exactly once".into());
    }
    if template.iter().filter(|t| **t == TemplateToken::Marker).count() > 1 {
        return Err("template uses M more than once".into());
    }
    let arity = seen.len();
    for c in &conditions {
        let out_of_range = match c {
            Condition::Is(i, _) | Condition::InClass(i, _) => *i >= arity,
            Condition::SameAs(i, j) => *i >= arity || *j >= arity,
            _ => false,
        };
        if out_of_range {
            return Err(format!("condition {c} refers past R{arity}"));
        }
    }
    Ok(StemPattern { tam, class: StemClass::new(fields[1]), conditions, template })
}

/// Parses a `stem_patterns.txt` body. Errors carry the 1-based line.
pub fn parse_patterns(text: &str) -> Result<Vec<StemPattern>, (usize, String)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_pattern(line).map_err(|e| (i + 1, e))?);
    }
    Ok(out)
}

pub fn patterns_to_text(patterns: &[StemPattern]) -> String {
    patterns.iter().map(|p| format!("{p}\n")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum StemError {
    #[error("no stem pattern for {tam}/{class} with flags [{}]", flags.iter().map(|f| f.name()).collect::<Vec<_>>().join(","))]
    MissingPattern { tam: TamForm, class: StemClass, flags: Vec<RegularityFlag> },
    #[error("stem class {0} is not defined by the package")]
    UnknownClass(StemClass),
    #[error("pattern {pattern} cannot be applied to {verb}")]
    Unrealizable { verb: String, pattern: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stem {
    pub verb: String,
    pub tam: TamForm,
    pub class: StemClass,
    pub form: String,
    /// Class marker for the prefix slot, when the pattern places one.
    pub marker: Option<Affix>,
    /// Person prefix per subject; empty for suffix-conjugated forms.
    pub person_prefix: BTreeMap<Png, Affix>,
    pub pattern: String,
}

impl Stem {
    pub fn id(&self) -> String {
        format!("{}/{}/{}", self.verb, self.tam, self.class)
    }
}

/// Best pattern for (tam, class) and this verb.
pub fn select_pattern<'a>(
    entry: &VerbEntry,
    tam: TamForm,
    class: &StemClass,
    package: &'a RulePackage,
) -> Option<&'a StemPattern> {
    let mut best: Option<&StemPattern> = None;
    for p in &package.patterns {
        if p.tam != tam || &p.class != class || !p.applies(entry, &package.alphabet) {
            continue;
        }
        if best.is_none_or(|b| p.specificity() > b.specificity()) {
            best = Some(p);
        }
    }
    best
}

pub fn generate_stem(
    entry: &VerbEntry,
    tam: TamForm,
    class: &StemClass,
    package: &RulePackage,
) -> Result<Stem, StemError> {
    let def = package.class_def(class).ok_or_else(|| StemError::UnknownClass(class.clone()))?;
    let pattern = select_pattern(entry, tam, class, package).ok_or_else(|| StemError::MissingPattern {
        tam,
        class: class.clone(),
        flags: entry.flags.iter().copied().collect(),
    })?;
    let form = pattern.apply(&entry.radicals).ok_or_else(|| StemError::Unrealizable {
        verb: entry.infinitive.clone(),
        pattern: pattern.to_string(),
    })?;
    let marker = if pattern.uses_marker() {
        def.marker.as_deref().and_then(|id| package.affix(id)).cloned()
    } else {
        None
    };
    let constraint = FeatureConstraint::any().tam(tam).class(class.as_str());
    let prefixes = package.affixes_for(Slot::PrefixCircumfix, &constraint);
    let person_prefix = Png::ALL
        .into_iter()
        .filter_map(|png| {
            prefixes.iter().find(|a| a.features.admits_png(png)).map(|a| (png, (*a).clone()))
        })
        .collect();
    Ok(Stem {
        verb: entry.infinitive.clone(),
        tam,
        class: class.clone(),
        form,
        marker,
        person_prefix,
        pattern: pattern.to_string(),
    })
}

#[derive(Debug, Clone, Default)]
pub struct GeneratedStems {
    pub stems: Vec<Stem>,
    pub errors: Vec<StemError>,
}

/// Stems for every (tam, class) pair in canonical order. Cells without a
/// pattern are reported in `errors`.
pub fn generate_stems(entry: &VerbEntry, package: &RulePackage) -> GeneratedStems {
    let mut out = GeneratedStems::default();
    for tam in TamForm::ALL {
        for class in package.class_ids() {
            match generate_stem(entry, tam, class, package) {
                Ok(s) => out.stems.push(s),
                Err(e) => out.errors.push(e),
            }
        }
    }
    out
}
