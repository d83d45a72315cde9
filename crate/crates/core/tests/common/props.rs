//! Strategies and per-case checks shared by the property suites and the
//! acceptance run.

use std::collections::{BTreeMap, BTreeSet};

use geez_core::eval::{aggregate, EvalReport};
use geez_core::lexicon::{Affix, AffixSource, CompatMatrix, RadicalClasses, Slot};
use geez_core::morphotactics::{legal_sequences, Signature};
use geez_core::orthography::{realize_lexical, replay, RuleSet};
use geez_core::script::{self, is_supported};
use geez_core::stemgen::Stem;
use geez_core::{batch_generate, FeatureConstraint, Png, StemClass, TamForm};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 10_000;

pub fn ethiopic_range() -> impl Iterator<Item = char> {
    (0x1200u32..=0x139F).filter_map(char::from_u32)
}

pub fn alphabet() -> Vec<char> {
    let mut v: Vec<char> = ethiopic_range().filter(|c| is_supported(*c)).collect();
    v.extend(['=', '+', '-']);
    v
}

pub fn lexical_string() -> impl Strategy<Value = String> {
    let chars = alphabet();
    prop::collection::vec(0..chars.len(), 0..14).prop_map(move |ix| ix.into_iter().map(|i| chars[i]).collect())
}

/// Strings shaped like real lexical input: a stem, then suffixes.
pub fn morph_string() -> impl Strategy<Value = String> {
    let fidels: Vec<char> = ethiopic_range().filter(|c| is_supported(*c)).collect();
    let f2 = fidels.clone();
    let morph = move || prop::collection::vec(0..f2.len(), 0..4);
    (
        prop::option::of(prop::collection::vec(0..fidels.len(), 1..3)),
        prop::collection::vec(0..fidels.len(), 1..5),
        morph(),
        prop::option::of(morph()),
    )
        .prop_map(move |(pre, stem, sms, oms)| {
            let s = |ix: Vec<usize>| ix.into_iter().map(|i| fidels[i]).collect::<String>();
            let mut out = String::new();
            if let Some(p) = pre {
                out.push_str(&s(p));
                out.push('=');
            }
            out.push_str(&s(stem));
            out.push('+');
            out.push_str(&s(sms));
            if let Some(o) = oms {
                out.push('-');
                out.push_str(&s(o));
            }
            out
        })
}

pub fn seed_rules() -> &'static RuleSet {
    use std::sync::OnceLock;
    static RULES: OnceLock<RuleSet> = OnceLock::new();
    RULES.get_or_init(|| super::seed_package().rules)
}

/// Checks every code point in the Ethiopic block; returns the number of
/// supported graphemes.
pub fn check_script_block() -> usize {
    let mut supported = 0;
    for ch in ethiopic_range() {
        match script::decompose(ch) {
            Ok(f) => {
                assert!(is_supported(ch));
                assert_eq!(script::compose(f).unwrap(), ch, "U+{:04X}", ch as u32);
                assert_eq!(f.to_char(), ch);
                supported += 1;
            }
            Err(_) => assert!(!is_supported(ch)),
        }
    }
    for r in script::Radical::all().filter(|r| !r.is_opaque()) {
        for k in 1..=7 {
            let ch = script::compose_raw(r, k).unwrap();
            let f = script::decompose(ch).unwrap();
            assert_eq!((f.radical, f.order.index()), (r, k));
        }
    }
    supported
}

pub fn check_identity(input: &str) -> Result<(), TestCaseError> {
    let empty = RuleSet::new(Vec::new(), RadicalClasses::default());
    let (out, trace) = realize_lexical(input, &empty).unwrap();
    let expected: String = input.chars().filter(|c| !matches!(c, '=' | '+' | '-')).collect();
    prop_assert_eq!(&out, &expected);
    prop_assert!(trace.applied.is_empty());
    Ok(())
}

pub fn check_determinism(input: &str) -> Result<(), TestCaseError> {
    prop_assert_eq!(realize_lexical(input, seed_rules()), realize_lexical(input, seed_rules()));
    Ok(())
}

pub fn check_trace(input: &str) -> Result<(), TestCaseError> {
    let (out, trace) = realize_lexical(input, seed_rules()).unwrap();
    prop_assert_eq!(&trace.input, input);
    prop_assert_eq!(&trace.output, &out);
    prop_assert!(!out.contains(['=', '+', '-']));
    prop_assert_eq!(replay(&trace, seed_rules()).unwrap(), out);
    Ok(())
}

pub type SignatureCase = (Vec<BTreeSet<usize>>, Vec<BTreeSet<usize>>, BTreeSet<(usize, usize)>);

/// Subject and object affixes (at most five in total) plus exclusions.
pub fn signature_case() -> impl Strategy<Value = SignatureCase> {
    (
        prop::collection::vec(prop::collection::btree_set(0..10usize, 1..3), 0..4),
        prop::collection::vec(prop::collection::btree_set(0..10usize, 1..3), 0..3),
        prop::collection::btree_set((0..10usize, 0..10usize), 0..20),
    )
}

pub fn check_sequence_count((sms, oms, excluded): &SignatureCase) -> Result<(), TestCaseError> {
    let affixes = |slot: Slot, sets: &[BTreeSet<usize>]| -> Vec<Affix> {
        sets.iter()
            .enumerate()
            .map(|(i, set)| Affix {
                id: format!("{}.{i}", slot.name()),
                slot,
                form: "ኒ".into(),
                features: FeatureConstraint { png: Some(set.iter().map(|p| Png::ALL[*p]).collect()), ..FeatureConstraint::any() },
                source: AffixSource::Grammar,
            })
            .collect()
    };
    let sig = Signature {
        stem: stem(),
        allowed: BTreeMap::from([(Slot::Sms, affixes(Slot::Sms, sms)), (Slot::Oms, affixes(Slot::Oms, oms))]),
    };
    let compat = CompatMatrix { excluded: excluded.iter().map(|(s, o)| (Png::ALL[*s], Png::ALL[*o])).collect() };

    let subjects: BTreeSet<usize> = sms.iter().flatten().copied().collect();
    let objects: BTreeSet<usize> = oms.iter().flatten().copied().collect();
    let mut expected = 0;
    for s in &subjects {
        expected += 1 + objects.iter().filter(|o| !excluded.contains(&(*s, **o))).count();
    }
    prop_assert_eq!(legal_sequences(&sig, &compat).len(), expected);
    Ok(())
}

pub fn check_aggregate_order((counts, seed): &(Vec<(usize, usize)>, u64)) -> Result<(), TestCaseError> {
    let reports: Vec<EvalReport> =
        counts.iter().map(|(a, b)| EvalReport::from_counts((*a).max(*b), (*a).min(*b)).unwrap()).collect();
    let mut shuffled = reports.clone();
    let mut x = seed | 1;
    for i in (1..shuffled.len()).rev() {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        shuffled.swap(i, (x % (i as u64 + 1)) as usize);
    }
    prop_assert_eq!(aggregate(&reports), aggregate(&shuffled));
    Ok(())
}

pub fn aggregate_case() -> impl Strategy<Value = (Vec<(usize, usize)>, u64)> {
    (prop::collection::vec((0..2000usize, 0..2000usize), 0..30), any::<u64>())
}

fn stem() -> Stem {
    Stem {
        verb: "ቀተለ".into(),
        tam: TamForm::Perfective,
        class: StemClass::new("basic"),
        form: "ቀተለ".into(),
        marker: None,
        person_prefix: BTreeMap::new(),
        pattern: String::new(),
    }
}

/// Batch output from one thread, then from an 8-thread pool and from 8
/// concurrent callers; true when all serialize identically.
pub fn parallel_runs_agree() -> bool {
    let pkg = super::seed_package();
    let lex = super::seed_lexicon();
    let render = |b: &geez_core::synthesizer::Batch| serde_json::to_string(&b.paradigms).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let reference = render(&single.install(|| batch_generate(lex.entries(), &pkg)));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    let pooled = (0..3).all(|_| render(&pool.install(|| batch_generate(lex.entries(), &pkg))) == reference);
    let threaded = std::thread::scope(|s| {
        let handles: Vec<_> = (0..8).map(|_| s.spawn(|| render(&batch_generate(lex.entries(), &pkg)))).collect();
        handles.into_iter().all(|h| h.join().unwrap() == reference)
    });
    pooled && threaded
}
