//! Stem formation, affixation and orthographic realization, chained.

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::features::{FeatureBundle, Png, StemClass, TamForm};
use crate::lexicon::{RulePackage, Slot, VerbEntry};
use crate::morphotactics::{build_signature, legal_sequences, MorphError, MorphSequence};
use crate::orthography::{realize, OrthoError, RuleTrace};
use crate::stemgen::{generate_stem, RegularityFlag, StemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("no stem pattern for {tam}/{class} (flags: {})", fmt_flags(flags))]
    MissingPattern { tam: TamForm, class: StemClass, flags: Vec<RegularityFlag> },
    #[error("stem class {0} is not defined by the package")]
    UnknownClass(StemClass),
    #[error("no {slot} affix for {png}")]
    NoMatchingAffix { slot: Slot, png: Png },
    #[error("subject {subject} cannot take object {object}")]
    ExcludedCombination { subject: Png, object: Png },
    #[error("stem: {0}")]
    Stem(String),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
}

fn fmt_flags(flags: &[RegularityFlag]) -> String {
    if flags.is_empty() {
        "none".into()
    } else {
        flags.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")
    }
}

impl From<StemError> for SynthError {
    fn from(e: StemError) -> Self {
        match e {
            StemError::MissingPattern { tam, class, flags } => SynthError::MissingPattern { tam, class, flags },
            StemError::UnknownClass(c) => SynthError::UnknownClass(c),
            other => SynthError::Stem(other.to_string()),
        }
    }
}

impl From<MorphError> for SynthError {
    fn from(e: MorphError) -> Self {
        match e {
            MorphError::NoMatchingAffix { slot, png } => SynthError::NoMatchingAffix { slot, png },
            other => SynthError::Stem(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceForm {
    pub features: FeatureBundle,
    pub text: String,
    pub trace: RuleTrace,
    pub segmentation: MorphSequence,
}

pub fn synthesize(entry: &VerbEntry, features: &FeatureBundle, package: &RulePackage) -> Result<SurfaceForm, SynthError> {
    if let Some(object) = features.object {
        if package.compat.excludes(features.subject, object) {
            return Err(SynthError::ExcludedCombination { subject: features.subject, object });
        }
    }
    let stem = generate_stem(entry, features.tam, &features.stem_class, package)?;
    let sig = build_signature(&stem, package);
    let seq = sig.sequence_for(features.subject, features.object)?;
    let (text, trace) = realize(&seq, &package.rules)?;
    Ok(SurfaceForm { features: features.clone(), text, trace, segmentation: seq })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObjectFilter {
    #[default]
    Any,
    None,
    Only(Png),
}

/// Optional restriction of a paradigm to some cells.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParadigmFilter {
    pub tam: Option<TamForm>,
    pub class: Option<StemClass>,
    pub subject: Option<Png>,
    pub object: ObjectFilter,
}

impl ParadigmFilter {
    fn admits(&self, seq: &MorphSequence) -> bool {
        self.subject.is_none_or(|s| s == seq.subject)
            && match self.object {
                ObjectFilter::Any => true,
                ObjectFilter::None => seq.object.is_none(),
                ObjectFilter::Only(o) => seq.object == Some(o),
            }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParadigmDiagnostic {
    pub tam: TamForm,
    pub class: StemClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<FeatureBundle>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paradigm {
    pub verb: VerbEntry,
    pub forms: IndexMap<FeatureBundle, SurfaceForm>,
    pub diagnostics: Vec<ParadigmDiagnostic>,
}

impl Paradigm {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn get(&self, features: &FeatureBundle) -> Option<&SurfaceForm> {
        self.forms.get(features)
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.forms.values().map(|f| f.text.as_str())
    }
}

impl Serialize for Paradigm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Paradigm", 3)?;
        st.serialize_field("verb", &self.verb)?;
        st.serialize_field("forms", &self.forms.values().collect::<Vec<_>>())?;
        st.serialize_field("diagnostics", &self.diagnostics)?;
        st.end()
    }
}

/// All legal cells in canonical (tam, class, subject, object) order.
/// Failures are collected as diagnostics.
pub fn generate_paradigm(entry: &VerbEntry, package: &RulePackage, filter: Option<&ParadigmFilter>) -> Paradigm {
    let default = ParadigmFilter::default();
    let filter = filter.unwrap_or(&default);
    let mut forms = IndexMap::new();
    let mut diagnostics = Vec::new();
    for tam in TamForm::ALL {
        if filter.tam.is_some_and(|t| t != tam) {
            continue;
        }
        for class in package.class_ids() {
            if filter.class.as_ref().is_some_and(|c| c != class) {
                continue;
            }
            let diag = |features: Option<FeatureBundle>, message: String| ParadigmDiagnostic {
                tam,
                class: class.clone(),
                features,
                message,
            };
            let stem = match generate_stem(entry, tam, class, package) {
                Ok(s) => s,
                Err(e) => {
                    diagnostics.push(diag(None, e.to_string()));
                    continue;
                }
            };
            let sig = build_signature(&stem, package);
            let seqs = legal_sequences(&sig, &package.compat);
            if seqs.is_empty() {
                diagnostics.push(diag(None, format!("stem {} has no subject markers", stem.form)));
                continue;
            }
            for seq in seqs.into_iter().filter(|q| filter.admits(q)) {
                let features = FeatureBundle {
                    tam,
                    stem_class: class.clone(),
                    subject: seq.subject,
                    object: seq.object,
                };
                match realize(&seq, &package.rules) {
                    Ok((text, trace)) => {
                        forms.insert(
                            features.clone(),
                            SurfaceForm { features, text, trace, segmentation: seq },
                        );
                    }
                    Err(e) => diagnostics.push(diag(Some(features), e.to_string())),
                }
            }
        }
    }
    Paradigm { verb: entry.clone(), forms, diagnostics }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    pub paradigms: Vec<Paradigm>,
    pub total_forms: usize,
    /// (citation, cell count) in input order.
    pub per_verb: Vec<(String, usize)>,
}

/// Paradigms for many verbs, computed in parallel and returned in input order.
pub fn batch_generate(entries: &[VerbEntry], package: &RulePackage) -> Batch {
    let paradigms: Vec<Paradigm> = entries.par_iter().map(|e| generate_paradigm(e, package, None)).collect();
    let per_verb: Vec<(String, usize)> = paradigms.iter().map(|p| (p.verb.infinitive.clone(), p.len())).collect();
    let total_forms = per_verb.iter().map(|(_, n)| n).sum();
    Batch { paradigms, total_forms, per_verb }
}

/// Finds a verb by citation form or by its basic infinitive stem (ቀቲል for
/// ቀተለ).
pub fn resolve_verb<'a>(lexicon: &'a crate::lexicon::Lexicon, text: &str, package: &RulePackage) -> Option<&'a VerbEntry> {
    if let Some(e) = lexicon.get(text) {
        return Some(e);
    }
    let basic = package.class_ids().next()?;
    lexicon.entries().iter().find(|e| {
        generate_stem(e, TamForm::Infinitive, basic, package).is_ok_and(|s| s.form == text)
    })
}
