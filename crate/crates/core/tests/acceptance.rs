//! Runs each acceptance criterion and prints one PASS or FAIL line for it.

mod common;

use std::time::{Duration, Instant};

use common::props::*;
use common::{evaluated_lexicon, cell, seed_lexicon, seed_package, verb};
use geez_core::eval::{aggregate, audit, parse_published, PublishedFigures, PUBLISHED_TABLE};
use geez_core::stemgen::classify_verb;
use geez_core::{batch_generate, generate_paradigm, synthesize, Png, TamForm};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn golden_forms() -> Outcome {
    let pkg = seed_package();
    let lex = seed_lexicon();
    let qetele = verb(&lex, "ቀተለ");
    use Png::*;
    let cases = [
        (P1cs, None, "ቀተልኩ"),
        (P2mp, None, "ቀተልክሙ"),
        (P3ms, Some(P2mp), "ቀተለክሙ"),
        (P2mp, Some(P1cs), "ቀተልክሙኒ"),
    ];
    for (subject, object, want) in cases {
        let got = synthesize(&qetele, &cell(TamForm::Perfective, "basic", subject, object), &pkg)
            .map_err(|e| e.to_string())?
            .text;
        check(got == want, format!("{subject}/{object:?}: got {got}, want {want}"))?;
    }
    Ok("ቀተልኩ ቀተልክሙ ቀተለክሙ ቀተልክሙኒ".into())
}

fn classifier_fidelity() -> Outcome {
    let start = Instant::now();
    let lex = evaluated_lexicon();
    let rows = parse_published(PUBLISHED_TABLE).map_err(|e| e.to_string())?;
    let mut agree = 0;
    let mut wrong = Vec::new();
    for row in &rows {
        let entry = lex.get(&row.verb).ok_or(format!("{} not in lexicon", row.verb))?;
        if classify_verb(entry).is_empty() == row.regular {
            agree += 1;
        } else {
            wrong.push(row.verb.clone());
        }
    }
    let elapsed = start.elapsed();
    check(agree == 30 && rows.len() == 30, format!("{agree}/{} agree; wrong: {wrong:?}", rows.len()))?;
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("30/30 labels in {elapsed:.2?}"))
}

fn regression_fixtures() -> Outcome {
    let pkg = seed_package();
    let lex = seed_lexicon();
    let p = generate_paradigm(&verb(&lex, "ከበበ"), &pkg, None);
    let texts: Vec<&str> = p.texts().collect();
    for bad in ["ተከብ", "ተከብት", "ተከብቱ", "ተከብታ"] {
        check(!texts.contains(&bad), format!("starred form {bad} generated"))?;
    }
    use Png::*;
    for (subject, good) in [(P3ms, "ተከበ"), (P3fs, "ተከበት"), (P3mp, "ተከቡ"), (P3fp, "ተከባ")] {
        let got = p.get(&cell(TamForm::Perfective, "passive_reflexive", subject, None)).map(|f| f.text.as_str());
        check(got == Some(good), format!("{subject}: got {got:?}, want {good}"))?;
    }
    let first_plural = |v: &str| {
        synthesize(&verb(&lex, v), &cell(TamForm::Perfective, "basic", P1cp, None), &pkg).map(|f| f.text)
    };
    let kereme = first_plural("ከረመ").map_err(|e| e.to_string())?;
    let amene = first_plural("አመነ").map_err(|e| e.to_string())?;
    check(kereme == "ከረምነ", format!("ከረመ 1cp: {kereme}"))?;
    check(amene == "አመነ", format!("አመነ 1cp: {amene}"))?;
    Ok("ተከበ ተከበት ተከቡ ተከባ; ከረምነ and አመነ".into())
}

fn eval_arithmetic() -> Outcome {
    let start = Instant::now();
    let rows = parse_published(PUBLISHED_TABLE).map_err(|e| e.to_string())?;
    let reports: Vec<_> = rows.iter().map(|r| r.report()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let total = aggregate(&reports);
    check(total.generated == 26_867, format!("generated {}", total.generated))?;
    check(total.correct == 26_179, format!("correct {}", total.correct))?;
    check((total.accuracy_percent() - 97.4).abs() <= 0.1, format!("accuracy {:.3}", total.accuracy_percent()))?;
    for (row, rep) in rows.iter().zip(&reports) {
        let pct = rep.accuracy_percent();
        check((pct - row.printed_accuracy).abs() <= 0.1, format!("row {}: {pct:.2} vs {}", row.no, row.printed_accuracy))?;
    }
    let report = audit(&rows, &PublishedFigures::REPORTED).map_err(|e| e.to_string())?;
    let flagged = report.findings.iter().find(|f| f.code == "error-total");
    check(
        flagged.is_some_and(|f| f.message.contains("668") && f.message.contains("688")),
        "audit does not flag 668 vs 688",
    )?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} / {} = {:.2}%, 30 rows within 0.1, 668 vs 688 flagged, {elapsed:.2?}",
        total.correct,
        total.generated,
        total.accuracy_percent()
    ))
}

fn run<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Outcome {
    let supported = check_script_block();
    check(supported == 279, format!("{supported} supported graphemes"))?;
    run("identity", lexical_string(), |s| check_identity(&s))?;
    run("determinism", lexical_string(), |s| check_determinism(&s))?;
    run("trace soundness", prop_oneof![lexical_string(), morph_string()], |s| check_trace(&s))?;
    run("sequence count", signature_case(), |c| check_sequence_count(&c))?;
    check(parallel_runs_agree(), "8-way parallel output differs")?;
    Ok(format!("script block exhaustive (279), 4 x {CASES} randomized cases, 8-way runs identical"))
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn performance() -> Outcome {
    let pkg = seed_package();
    let lex = evaluated_lexicon();
    let regular = verb(&lex, "ፈቀደ");
    let _ = generate_paradigm(&regular, &pkg, None);
    let mut times = Vec::new();
    let mut cells = 0;
    for _ in 0..5 {
        let t = Instant::now();
        cells = generate_paradigm(&regular, &pkg, None).len();
        times.push(t.elapsed());
    }
    let one = median(times);
    let t = Instant::now();
    let batch = batch_generate(lex.entries(), &pkg);
    let all = t.elapsed();
    check(one < Duration::from_millis(50), format!("paradigm of {cells} cells took {one:?}"))?;
    check(batch.per_verb.len() == 30, format!("batch has {} verbs", batch.per_verb.len()))?;
    check(all < Duration::from_secs(2), format!("30-verb batch took {all:?}"))?;
    Ok(format!("{cells} cells in {one:.2?} (median of 5); 30 verbs, {} cells in {all:.2?}", batch.total_forms))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("golden forms", golden_forms),
        ("classifier fidelity", classifier_fidelity),
        ("regression fixtures", regression_fixtures),
        ("eval arithmetic", eval_arithmetic),
        ("property suites", property_suites),
        ("performance", performance),
    ];
    let mut failed = Vec::new();
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    println!("acceptance: {} of 6 criteria passed", 6 - failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
