//! Morpheme ordering and per-stem affix signatures.
//!
//! Template: `[prefix][prefix_circumfix][stem][suffix_circumfix][sms][oms]`.
//! In the lexical string a morph is preceded by `=` when it sits in the
//! prefix circumfix or stem slot, by `+` for the suffix circumfix and subject
//! suffix, and by `-` for the object suffix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureConstraint, Png};
use crate::lexicon::{Affix, CompatMatrix, RulePackage, Slot};
use crate::orthography::Boundary;
use crate::stemgen::Stem;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum MorphError {
    #[error("no {slot} affix for {png}")]
    NoMatchingAffix { slot: Slot, png: Png },
    #[error("morph in slot {0} is out of template order or repeated")]
    BadOrder(Slot),
    #[error("sequence has no stem")]
    MissingStem,
    #[error("object suffix without subject marking")]
    ObjectWithoutSubject,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morph {
    pub slot: Slot,
    pub form: String,
    /// Affix id; `None` for the stem.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affix: Option<String>,
}

impl Morph {
    pub fn stem(form: impl Into<String>) -> Morph {
        Morph { slot: Slot::Stem, form: form.into(), affix: None }
    }

    pub fn affix(a: &Affix) -> Morph {
        Morph { slot: a.slot, form: a.form.clone(), affix: Some(a.id.clone()) }
    }
}

/// A template-ordered list of morphs for one subject/object choice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MorphSequence {
    pub subject: Png,
    pub object: Option<Png>,
    morphs: Vec<Morph>,
}

pub fn boundary_before(slot: Slot) -> Boundary {
    match slot {
        Slot::Prefix | Slot::PrefixCircumfix | Slot::Stem => Boundary::Prefix,
        Slot::SuffixCircumfix | Slot::Sms => Boundary::Suffix,
        Slot::Oms => Boundary::Object,
    }
}

impl MorphSequence {
    pub fn new(subject: Png, object: Option<Png>, morphs: Vec<Morph>) -> Result<MorphSequence, MorphError> {
        for w in morphs.windows(2) {
            if w[0].slot >= w[1].slot {
                return Err(MorphError::BadOrder(w[1].slot));
            }
        }
        if !morphs.iter().any(|m| m.slot == Slot::Stem) {
            return Err(MorphError::MissingStem);
        }
        let has = |s: Slot| morphs.iter().any(|m| m.slot == s);
        if has(Slot::Oms) && !has(Slot::Sms) && !has(Slot::SuffixCircumfix) {
            return Err(MorphError::ObjectWithoutSubject);
        }
        Ok(MorphSequence { subject, object, morphs })
    }

    pub fn morphs(&self) -> &[Morph] {
        &self.morphs
    }

    pub fn get(&self, slot: Slot) -> Option<&Morph> {
        self.morphs.iter().find(|m| m.slot == slot)
    }

    /// Morphs joined with boundary symbols, e.g. `ቀተለ+ክሙ-ኒ`.
    pub fn lexical(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.morphs.iter().enumerate() {
            if i > 0 {
                out.push(boundary_before(m.slot).symbol());
            }
            out.push_str(&m.form);
        }
        out
    }

    /// Plain concatenation of the morphs.
    pub fn concatenation(&self) -> String {
        self.morphs.iter().map(|m| m.form.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub stem: Stem,
    /// Affixes allowed per slot, in package order. Leaving out the object
    /// suffix is always allowed and is not listed.
    pub allowed: BTreeMap<Slot, Vec<Affix>>,
}

impl Signature {
    pub fn stem_id(&self) -> String {
        self.stem.id()
    }

    pub fn slot(&self, slot: Slot) -> &[Affix] {
        self.allowed.get(&slot).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn ids(&self, slot: Slot) -> Vec<&str> {
        self.slot(slot).iter().map(|a| a.id.as_str()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.values().all(Vec::is_empty)
    }

    fn find(&self, slot: Slot, png: Png) -> Option<&Affix> {
        self.slot(slot).iter().find(|a| a.features.admits_png(png))
    }

    /// True when the stem can be inflected for `subject`.
    pub fn has_subject(&self, subject: Png) -> bool {
        self.find(Slot::Sms, subject).is_some() || self.find(Slot::SuffixCircumfix, subject).is_some()
    }

    /// The single sequence for one subject and optional object. Exclusions
    /// are not consulted here.
    pub fn sequence_for(&self, subject: Png, object: Option<Png>) -> Result<MorphSequence, MorphError> {
        let sms = self.find(Slot::Sms, subject);
        let sc = self.find(Slot::SuffixCircumfix, subject);
        if sms.is_none() && sc.is_none() {
            return Err(MorphError::NoMatchingAffix { slot: Slot::Sms, png: subject });
        }
        let oms = match object {
            Some(o) => Some(self.find(Slot::Oms, o).ok_or(MorphError::NoMatchingAffix { slot: Slot::Oms, png: o })?),
            None => None,
        };
        let mut morphs = Vec::with_capacity(6);
        if let Some(m) = self.slot(Slot::Prefix).first() {
            morphs.push(Morph::affix(m));
        }
        if let Some(p) = self.stem.person_prefix.get(&subject) {
            morphs.push(Morph::affix(p));
        }
        morphs.push(Morph::stem(self.stem.form.clone()));
        morphs.extend(sc.map(Morph::affix));
        morphs.extend(sms.map(Morph::affix));
        morphs.extend(oms.map(Morph::affix));
        MorphSequence::new(subject, object, morphs)
    }
}

pub fn build_signature(stem: &Stem, package: &RulePackage) -> Signature {
    let constraint = FeatureConstraint::any().tam(stem.tam).class(stem.class.as_str());
    let mut allowed = BTreeMap::new();
    allowed.insert(Slot::Prefix, stem.marker.iter().cloned().collect());
    let mut prefixes: Vec<Affix> = Vec::new();
    for a in stem.person_prefix.values() {
        if !prefixes.iter().any(|p| p.id == a.id) {
            prefixes.push(a.clone());
        }
    }
    allowed.insert(Slot::PrefixCircumfix, prefixes);
    for slot in [Slot::SuffixCircumfix, Slot::Sms, Slot::Oms] {
        allowed.insert(slot, package.affixes_for(slot, &constraint).into_iter().cloned().collect());
    }
    Signature { stem: stem.clone(), allowed }
}

/// Every legal sequence: subjects in PNG order, each first without an object
/// and then with each admissible object in PNG order.
pub fn legal_sequences(sig: &Signature, compat: &CompatMatrix) -> Vec<MorphSequence> {
    let mut out = Vec::new();
    for subject in Png::ALL {
        let Ok(base) = sig.sequence_for(subject, None) else { continue };
        out.push(base);
        for object in Png::ALL {
            if compat.excludes(subject, object) {
                continue;
            }
            if let Ok(seq) = sig.sequence_for(subject, Some(object)) {
                out.push(seq);
            }
        }
    }
    out
}
