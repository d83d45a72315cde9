//! Morphosyntactic feature values shared by every layer.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Person, number and gender of a subject or object.
///
/// Declaration order is the canonical paradigm order (ውእቱ … ንሕነ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Png {
    #[serde(rename = "3ms")]
    P3ms,
    #[serde(rename = "3fs")]
    P3fs,
    #[serde(rename = "3mp")]
    P3mp,
    #[serde(rename = "3fp")]
    P3fp,
    #[serde(rename = "2ms")]
    P2ms,
    #[serde(rename = "2fs")]
    P2fs,
    #[serde(rename = "2mp")]
    P2mp,
    #[serde(rename = "2fp")]
    P2fp,
    #[serde(rename = "1cs")]
    P1cs,
    #[serde(rename = "1cp")]
    P1cp,
}

impl Png {
    pub const ALL: [Png; 10] = [
        Png::P3ms,
        Png::P3fs,
        Png::P3mp,
        Png::P3fp,
        Png::P2ms,
        Png::P2fs,
        Png::P2mp,
        Png::P2fp,
        Png::P1cs,
        Png::P1cp,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Png::P3ms => "3ms",
            Png::P3fs => "3fs",
            Png::P3mp => "3mp",
            Png::P3fp => "3fp",
            Png::P2ms => "2ms",
            Png::P2fs => "2fs",
            Png::P2mp => "2mp",
            Png::P2fp => "2fp",
            Png::P1cs => "1cs",
            Png::P1cp => "1cp",
        }
    }

    pub fn person(self) -> u8 {
        match self {
            Png::P3ms | Png::P3fs | Png::P3mp | Png::P3fp => 3,
            Png::P2ms | Png::P2fs | Png::P2mp | Png::P2fp => 2,
            Png::P1cs | Png::P1cp => 1,
        }
    }

    /// The independent pronoun used as a row label in paradigm tables.
    pub fn pronoun(self) -> &'static str {
        match self {
            Png::P3ms => "ውእቱ",
            Png::P3fs => "ይእቲ",
            Png::P3mp => "ውእቶሙ",
            Png::P3fp => "ውእቶን",
            Png::P2ms => "አንተ",
            Png::P2fs => "አንቲ",
            Png::P2mp => "አንትሙ",
            Png::P2fp => "አንትን",
            Png::P1cs => "አነ",
            Png::P1cp => "ንሕነ",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Png {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Png {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Png::ALL
            .into_iter()
            .find(|p| p.code() == s)
            .ok_or_else(|| format!("unknown person/number/gender code {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TamForm {
    Perfective,
    Indicative,
    Subjunctive,
    Jussive,
    Gerundive,
    Infinitive,
}

impl TamForm {
    pub const ALL: [TamForm; 6] = [
        TamForm::Perfective,
        TamForm::Indicative,
        TamForm::Subjunctive,
        TamForm::Jussive,
        TamForm::Gerundive,
        TamForm::Infinitive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TamForm::Perfective => "perfective",
            TamForm::Indicative => "indicative",
            TamForm::Subjunctive => "subjunctive",
            TamForm::Jussive => "jussive",
            TamForm::Gerundive => "gerundive",
            TamForm::Infinitive => "infinitive",
        }
    }
}

impl fmt::Display for TamForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TamForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TamForm::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown TAM form {s:?}"))
    }
}

/// Stem class label. The set of classes is defined by the rule package.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StemClass(pub String);

impl StemClass {
    pub fn new(name: impl Into<String>) -> StemClass {
        StemClass(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The coordinate of one surface form in a paradigm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureBundle {
    pub tam: TamForm,
    #[serde(rename = "class")]
    pub stem_class: StemClass,
    pub subject: Png,
    pub object: Option<Png>,
}

impl FeatureBundle {
    pub fn new(tam: TamForm, stem_class: impl Into<String>, subject: Png) -> FeatureBundle {
        FeatureBundle { tam, stem_class: StemClass::new(stem_class), subject, object: None }
    }

    pub fn with_object(mut self, object: Png) -> FeatureBundle {
        self.object = Some(object);
        self
    }
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.tam, self.stem_class, self.subject)?;
        match self.object {
            Some(o) => write!(f, "/{o}"),
            None => f.write_str("/-"),
        }
    }
}

/// Which feature values an affix marks; `None` on a dimension means "any".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConstraint {
    pub tam: Option<BTreeSet<TamForm>>,
    pub class: Option<BTreeSet<StemClass>>,
    pub png: Option<BTreeSet<Png>>,
}

fn overlaps<T: Ord>(a: &Option<BTreeSet<T>>, b: &Option<BTreeSet<T>>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a.intersection(b).next().is_some(),
        _ => true,
    }
}

fn admits<T: Ord>(set: &Option<BTreeSet<T>>, v: &T) -> bool {
    set.as_ref().is_none_or(|s| s.contains(v))
}

impl FeatureConstraint {
    pub fn any() -> FeatureConstraint {
        FeatureConstraint::default()
    }

    pub fn tam(mut self, tam: TamForm) -> Self {
        self.tam = Some([tam].into());
        self
    }

    pub fn class(mut self, class: impl Into<String>) -> Self {
        self.class = Some([StemClass::new(class)].into());
        self
    }

    pub fn png(mut self, png: Png) -> Self {
        self.png = Some([png].into());
        self
    }

    /// Two constraints unify when every dimension has a common value.
    pub fn unifies(&self, other: &FeatureConstraint) -> bool {
        overlaps(&self.tam, &other.tam)
            && overlaps(&self.class, &other.class)
            && overlaps(&self.png, &other.png)
    }

    pub fn admits_tam(&self, tam: TamForm) -> bool {
        admits(&self.tam, &tam)
    }

    pub fn admits_class(&self, class: &StemClass) -> bool {
        admits(&self.class, class)
    }

    pub fn admits_png(&self, png: Png) -> bool {
        admits(&self.png, &png)
    }
}
