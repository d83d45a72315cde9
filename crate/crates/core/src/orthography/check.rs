//! Static checks over a rule set, driven by generated probe strings.

use serde::{Deserialize, Serialize};

use super::pattern::{Atom, ClassRef, OrthoRule, Token};
use super::{try_apply, RuleSet, Sym};
use crate::lexicon::RadicalClasses;
use crate::script::{self, Radical};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    /// Two rules share a priority and match a common input.
    Conflict,
    /// Two rules share a priority (and therefore an id) without overlapping.
    DuplicatePriority,
    /// Every probe the rule matches is claimed by a higher-priority rule.
    Unreachable,
    UnknownClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDiagnostic {
    pub kind: DiagnosticKind,
    pub rules: Vec<String>,
    pub message: String,
}

const PROBE_LIMIT: usize = 4096;

/// Sample radicals used to instantiate class tokens.
const SAMPLE: [char; 14] = ['ለ', 'ቀ', 'ከ', 'ገ', 'ሀ', 'ሐ', 'አ', 'ዐ', 'የ', 'ወ', 'ነ', 'ተ', 'በ', 'መ'];

fn candidates(atom: &Atom, classes: &RadicalClasses) -> Vec<char> {
    let radicals: Vec<Radical> = match atom {
        Atom::Exact(c) => return vec![*c],
        Atom::Series(r, _) => vec![*r],
        Atom::Class(ClassRef::Unknown(_), _) => return Vec::new(),
        Atom::Class(ClassRef::Any, _) => SAMPLE.iter().filter_map(|c| Radical::new(*c).ok()).collect(),
        Atom::Class(ClassRef::Known(k), _) => {
            let mut v: Vec<Radical> = SAMPLE
                .iter()
                .filter_map(|c| Radical::new(*c).ok())
                .filter(|r| classes.classify(*r) == *k)
                .collect();
            for r in classes.members(*k).into_iter().take(6) {
                if !v.contains(&r) {
                    v.push(r);
                }
            }
            v
        }
    };
    let mask = match atom {
        Atom::Series(_, m) | Atom::Class(_, m) => *m,
        Atom::Exact(_) => unreachable!(),
    };
    radicals
        .into_iter()
        .flat_map(|r| mask.orders().filter_map(move |o| script::compose_raw(r, o).ok()))
        .collect()
}

/// Probe strings for `rule`, each paired with the index of its anchor.
fn probes(rule: &OrthoRule, classes: &RadicalClasses) -> (Vec<Vec<Sym>>, usize) {
    let tokens: Vec<&Token> = rule
        .left
        .iter()
        .chain(&rule.lexical)
        .chain(&rule.right)
        .filter(|t| !matches!(t, Token::Edge))
        .collect();
    let anchor = rule.left.iter().filter(|t| !matches!(t, Token::Edge)).count() + rule.anchor_offset();
    let choices: Vec<Vec<Sym>> = tokens
        .iter()
        .map(|t| match t {
            Token::Boundary(b) => vec![Sym::B(*b)],
            Token::Atom(a) => candidates(a, classes).into_iter().map(Sym::Ch).collect(),
            Token::Edge => unreachable!(),
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return (Vec::new(), anchor);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    'outer: loop {
        out.push(idx.iter().zip(&choices).map(|(i, c)| c[*i]).collect());
        if out.len() >= PROBE_LIMIT {
            break;
        }
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    (out, anchor)
}

fn same_shape(a: &OrthoRule, b: &OrthoRule) -> bool {
    a.lexical == b.lexical && a.left == b.left && a.right == b.right
}

pub fn check_package_rules(rules: &RuleSet) -> Vec<RuleDiagnostic> {
    let classes = rules.classes();
    let list = rules.rules();
    let mut out = Vec::new();

    for (id, name) in rules.unknown_classes() {
        out.push(RuleDiagnostic {
            kind: DiagnosticKind::UnknownClass,
            message: format!("rule {id} references unknown class @{name}"),
            rules: vec![id],
        });
    }

    let probe_sets: Vec<(Vec<Vec<Sym>>, usize)> = list.iter().map(|r| probes(r, classes)).collect();
    let matches_probe = |rule: &OrthoRule, probe: &[Sym], anchor: usize| {
        try_apply(rule, probe, anchor, classes).is_some()
    };

    for (i, a) in list.iter().enumerate() {
        for (j, b) in list.iter().enumerate().skip(i + 1) {
            if a.priority != b.priority {
                continue;
            }
            let overlap = same_shape(a, b)
                || probe_sets[i].0.iter().any(|p| {
                    matches_probe(a, p, probe_sets[i].1) && matches_probe(b, p, probe_sets[i].1)
                })
                || probe_sets[j].0.iter().any(|p| {
                    matches_probe(a, p, probe_sets[j].1) && matches_probe(b, p, probe_sets[j].1)
                });
            let (kind, what) = if overlap {
                (DiagnosticKind::Conflict, "overlap at equal priority")
            } else {
                (DiagnosticKind::DuplicatePriority, "share a priority")
            };
            out.push(RuleDiagnostic {
                kind,
                rules: vec![a.id.clone(), b.id.clone()],
                message: format!("rules `{a}` and `{b}` {what}"),
            });
        }
    }

    for (i, rule) in list.iter().enumerate() {
        let (set, anchor) = &probe_sets[i];
        let own: Vec<&Vec<Sym>> = set.iter().filter(|p| matches_probe(rule, p, *anchor)).collect();
        if own.is_empty() {
            continue;
        }
        let higher: Vec<&OrthoRule> = list.iter().filter(|r| r.priority > rule.priority).collect();
        let shadowed = own
            .iter()
            .all(|p| higher.iter().any(|h| matches_probe(h, p, *anchor)));
        if shadowed {
            out.push(RuleDiagnostic {
                kind: DiagnosticKind::Unreachable,
                rules: vec![rule.id.clone()],
                message: format!("rule `{rule}` is shadowed by higher-priority rules on every probe"),
            });
        }
    }
    out
}
