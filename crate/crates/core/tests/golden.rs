mod common;

use common::{cell, repo_root, seed_lexicon, seed_package, verb};
use geez_core::eval::{load_gold_dir, parse_published, score, GoldSet, PUBLISHED_TABLE};
use geez_core::stemgen::classify_verb;
use geez_core::synthesizer::SynthError;
use geez_core::{generate_paradigm, synthesize, Png, TamForm};

fn form(citation: &str, tam: TamForm, class: &str, subject: Png, object: Option<Png>) -> String {
    let pkg = seed_package();
    let lex = seed_lexicon();
    synthesize(&verb(&lex, citation), &cell(tam, class, subject, object), &pkg).unwrap().text
}

#[test]
fn worked_example_and_trio() {
    use Png::*;
    use TamForm::Perfective as P;
    assert_eq!(form("ቀተለ", P, "basic", P1cs, None), "ቀተልኩ");
    assert_eq!(form("ቀተለ", P, "basic", P2mp, None), "ቀተልክሙ");
    assert_eq!(form("ቀተለ", P, "basic", P3ms, Some(P2mp)), "ቀተለክሙ");
    assert_eq!(form("ቀተለ", P, "basic", P2mp, Some(P1cs)), "ቀተልክሙኒ");
}

#[test]
fn imperfective_and_velar_forms() {
    use Png::*;
    assert_eq!(form("ሠረቀ", TamForm::Indicative, "basic", P3ms, None), "ይሠርቅ");
    assert_eq!(form("ሠረቀ", TamForm::Subjunctive, "basic", P3ms, None), "ይሥርቅ");
    assert_eq!(form("ሐደገ", TamForm::Indicative, "basic", P3ms, None), "የሐድግ");
    assert_eq!(form("ሰበከ", TamForm::Perfective, "basic", P1cs, None), "ሰበኩ");
    assert_eq!(form("ቀተለ", TamForm::Perfective, "basic", P3ms, Some(P3ms)), "ቀተሎ");
    assert_eq!(form("ቀተለ", TamForm::Indicative, "basic", P3ms, Some(P3ms)), "ይቀትሎ");
}

#[test]
fn doubled_verb_passive_has_no_starred_forms() {
    let pkg = seed_package();
    let lex = seed_lexicon();
    let p = generate_paradigm(&verb(&lex, "ከበበ"), &pkg, None);
    let texts: Vec<&str> = p.texts().collect();
    for bad in ["ተከብ", "ተከብት", "ተከብቱ", "ተከብታ"] {
        assert!(!texts.contains(&bad), "{bad} generated");
    }
    assert!(!texts.iter().any(|t| t.starts_with("ተከብበ")));
    use Png::*;
    for (subject, good) in [(P3ms, "ተከበ"), (P3fs, "ተከበት"), (P3mp, "ተከቡ"), (P3fp, "ተከባ")] {
        let key = cell(TamForm::Perfective, "passive_reflexive", subject, None);
        assert_eq!(p.get(&key).unwrap().text, good);
    }
}

#[test]
fn nasal_final_first_plural() {
    use Png::P1cp;
    assert_eq!(form("ከረመ", TamForm::Perfective, "basic", P1cp, None), "ከረምነ");
    assert_eq!(form("አመነ", TamForm::Perfective, "basic", P1cp, None), "አመነ");
}

#[test]
fn excluded_combination_is_an_error() {
    let pkg = seed_package();
    let lex = seed_lexicon();
    let f = cell(TamForm::Perfective, "basic", Png::P1cs, Some(Png::P1cs));
    assert!(matches!(
        synthesize(&verb(&lex, "ቀተለ"), &f, &pkg),
        Err(SynthError::ExcludedCombination { .. })
    ));
}

#[test]
fn classifier_matches_published_labels() {
    let lex = common::evaluated_lexicon();
    let rows = parse_published(PUBLISHED_TABLE).unwrap();
    assert_eq!(rows.len(), 30);
    for row in rows {
        let entry = verb(&lex, &row.verb);
        assert_eq!(classify_verb(&entry).is_empty(), row.regular, "{}", row.verb);
    }
}

#[test]
fn shipped_gold_sets_score_perfectly() {
    let pkg = seed_package();
    let lex = seed_lexicon();
    let sets = load_gold_dir(repo_root().join("fixtures/gold")).unwrap();
    assert_eq!(sets.len(), 5);
    for set in sets {
        let p = generate_paradigm(&verb(&lex, &set.verb), &pkg, None);
        let report = score(&p, &set).unwrap();
        assert_eq!(report.correct, report.generated, "{}: {:?}", set.verb, report.mismatches);
    }
}

#[test]
fn paradigm_scored_against_itself() {
    let pkg = seed_package();
    let lex = seed_lexicon();
    for entry in lex.entries() {
        let p = generate_paradigm(entry, &pkg, None);
        assert!(p.diagnostics.is_empty(), "{}: {:?}", entry.infinitive, p.diagnostics);
        let report = score(&p, &GoldSet::from_paradigm(&p, "self")).unwrap();
        assert_eq!(report.accuracy, 1.0);
    }
}
