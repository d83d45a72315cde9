#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;

use geez_core::{load_lexicon, FeatureBundle, Lexicon, Png, RulePackage, TamForm, VerbEntry};

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn seed_package() -> RulePackage {
    RulePackage::load(repo_root().join("rules/seed")).expect("seed package loads")
}

pub fn seed_lexicon() -> Lexicon {
    load_lexicon(repo_root().join("lexicon/seed.tsv")).expect("seed lexicon loads")
}

pub fn evaluated_lexicon() -> Lexicon {
    load_lexicon(repo_root().join("lexicon/evaluated.tsv")).expect("evaluated lexicon loads")
}

pub fn verb(lex: &Lexicon, citation: &str) -> VerbEntry {
    lex.get(citation).unwrap_or_else(|| panic!("{citation} missing from lexicon")).clone()
}

pub fn cell(tam: TamForm, class: &str, subject: Png, object: Option<Png>) -> FeatureBundle {
    let mut f = FeatureBundle::new(tam, class, subject);
    f.object = object;
    f
}
