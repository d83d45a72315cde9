//! Rule-based synthesis of Ge'ez verb forms.
//!
//! Pipeline: a lexicon entry is classified and turned into stems
//! ([`stemgen`]), each stem gets an affix signature and the legal morph
//! sequences ([`morphotactics`]), and each sequence is realized by boundary
//! rules ([`orthography`]). [`synthesizer`] ties these together and [`eval`]
//! scores the output against gold forms. All linguistic data lives in a rule
//! package directory loaded through [`lexicon`].

pub mod eval;
pub mod features;
pub mod lexicon;
pub mod morphotactics;
pub mod orthography;
pub mod script;
pub mod stemgen;
pub mod synthesizer;

pub use features::{FeatureBundle, FeatureConstraint, Png, StemClass, TamForm};
pub use lexicon::{load_lexicon, Lexicon, RulePackage, VerbEntry};
pub use synthesizer::{batch_generate, generate_paradigm, synthesize, Paradigm, ParadigmFilter, SurfaceForm};

/// Loads a rule package directory.
pub fn load_rule_package(dir: impl AsRef<std::path::Path>) -> Result<RulePackage, lexicon::PackageError> {
    RulePackage::load(dir)
}
