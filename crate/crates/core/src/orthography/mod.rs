//! Two-level boundary rules.
//!
//! The lexical string is the concatenation of the morphs with a boundary
//! symbol between them. Realization makes one left-to-right pass: at each
//! boundary the highest-priority rule whose lexical side and contexts match
//! rewrites the matched span (the boundary included), and scanning resumes
//! after the inserted surface. A boundary no rule claims is dropped.

mod check;
mod pattern;

pub use check::{check_package_rules, DiagnosticKind, RuleDiagnostic};
pub use pattern::{Atom, Boundary, ClassRef, OrderMask, OrderSpec, OrthoRule, SurfaceToken, Token};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::RadicalClasses;
use crate::morphotactics::MorphSequence;
use crate::script;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrthoError {
    #[error("rules {0} and {1} share a priority and both match at position {2}")]
    ConflictingRules(String, String, usize),
    #[error("trace step {rule}@{position} does not apply to its input")]
    ReplayMismatch { rule: String, position: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sym {
    Ch(char),
    B(Boundary),
}

pub(crate) fn to_syms(lexical: &str) -> Vec<Sym> {
    lexical
        .chars()
        .map(|c| Boundary::from_symbol(c).map(Sym::B).unwrap_or(Sym::Ch(c)))
        .collect()
}

/// Rules ordered by descending priority (file order among equals).
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    rules: Vec<OrthoRule>,
    classes: RadicalClasses,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::new(Vec::new(), RadicalClasses::default())
    }
}

impl RuleSet {
    pub fn new(mut rules: Vec<OrthoRule>, classes: RadicalClasses) -> RuleSet {
        rules.sort_by_key(|r| std::cmp::Reverse(r.priority));
        RuleSet { rules, classes }
    }

    /// Parses an `ortho_rules.txt` body. Errors carry the 1-based line.
    pub fn parse(text: &str, classes: RadicalClasses) -> Result<RuleSet, (usize, String)> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            rules.push(OrthoRule::parse_line(line).map_err(|e| (i + 1, e))?);
        }
        Ok(RuleSet::new(rules, classes))
    }

    pub fn to_text(&self) -> String {
        self.rules.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn rules(&self) -> &[OrthoRule] {
        &self.rules
    }

    pub fn classes(&self) -> &RadicalClasses {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&OrthoRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// (rule id, class name) for every class reference the table lacks.
    pub fn unknown_classes(&self) -> Vec<(String, String)> {
        self.rules
            .iter()
            .flat_map(|r| {
                r.class_refs().filter_map(move |c| match c {
                    ClassRef::Unknown(n) => Some((r.id.clone(), n.clone())),
                    _ => None,
                })
            })
            .collect()
    }

    /// Highest-priority rule applying at boundary index `b`.
    fn select(&self, buf: &[Sym], b: usize) -> Result<Option<(&OrthoRule, Match)>, OrthoError> {
        for (i, rule) in self.rules.iter().enumerate() {
            if let Some(m) = try_apply(rule, buf, b, &self.classes) {
                let rival = self.rules[i + 1..]
                    .iter()
                    .take_while(|r| r.priority == rule.priority)
                    .find(|r| try_apply(r, buf, b, &self.classes).is_some());
                if let Some(other) = rival {
                    return Err(OrthoError::ConflictingRules(rule.id.clone(), other.id.clone(), m.start));
                }
                return Ok(Some((rule, m)));
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Match {
    pub start: usize,
    pub end: usize,
    pub surface: Vec<char>,
}

fn token_matches(tok: &Token, sym: Sym, classes: &RadicalClasses) -> bool {
    match (tok, sym) {
        (Token::Atom(a), Sym::Ch(c)) => a.matches(c, classes),
        (Token::Boundary(x), Sym::B(y)) => *x == y,
        _ => false,
    }
}

fn order_of(c: char) -> Option<u8> {
    script::decompose(c).ok().map(|f| f.order.index())
}

fn resolve_order(spec: OrderSpec, captured: &[char]) -> Option<Option<u8>> {
    match spec {
        OrderSpec::Keep => Some(None),
        OrderSpec::Fixed(k) => Some(Some(k)),
        OrderSpec::From(m) => order_of(*captured.get(m)?).map(Some),
    }
}

/// Matches `rule` anchored at boundary index `b`, building the surface.
pub(crate) fn try_apply(rule: &OrthoRule, buf: &[Sym], b: usize, classes: &RadicalClasses) -> Option<Match> {
    if !matches!(buf.get(b), Some(Sym::B(_))) {
        return None;
    }
    let start = b.checked_sub(rule.anchor_offset())?;
    let end = start + rule.lexical.len();
    if end > buf.len() {
        return None;
    }
    let mut captured = Vec::new();
    for (tok, sym) in rule.lexical.iter().zip(&buf[start..end]) {
        if !token_matches(tok, *sym, classes) {
            return None;
        }
        if let Sym::Ch(c) = sym {
            captured.push(*c);
        }
    }

    // left context, right-aligned against `start`
    let mut pos = start;
    for tok in rule.left.iter().rev() {
        match tok {
            Token::Edge => {
                if pos != 0 {
                    return None;
                }
            }
            _ => {
                pos = pos.checked_sub(1)?;
                if !token_matches(tok, buf[pos], classes) {
                    return None;
                }
            }
        }
    }
    let mut pos = end;
    for tok in &rule.right {
        match tok {
            Token::Edge => {
                if buf[pos..].iter().any(|s| matches!(s, Sym::Ch(_))) {
                    return None;
                }
            }
            _ => {
                if pos >= buf.len() || !token_matches(tok, buf[pos], classes) {
                    return None;
                }
                pos += 1;
            }
        }
    }

    let mut surface = Vec::with_capacity(rule.surface.len());
    for tok in &rule.surface {
        let c = match tok {
            SurfaceToken::Literal(c) => *c,
            SurfaceToken::Series(r, spec) => {
                let order = resolve_order(*spec, &captured)?.unwrap_or(1);
                script::compose_raw(*r, order).ok()?
            }
            SurfaceToken::Copy(n, spec) => {
                let c = *captured.get(*n)?;
                match resolve_order(*spec, &captured)? {
                    None => c,
                    Some(k) => script::reorder_char(c, k).ok()?,
                }
            }
        };
        surface.push(c);
    }
    Some(Match { start, end, surface })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AppliedRule {
    pub rule: String,
    /// Character offset in the output where the rewritten span begins.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleTrace {
    pub input: String,
    pub output: String,
    pub applied: Vec<AppliedRule>,
}

fn splice(buf: &mut Vec<Sym>, m: &Match) -> usize {
    buf.splice(m.start..m.end, m.surface.iter().map(|c| Sym::Ch(*c)));
    m.start + m.surface.len()
}

fn finish(buf: Vec<Sym>) -> String {
    buf.into_iter()
        .filter_map(|s| match s {
            Sym::Ch(c) => Some(c),
            Sym::B(_) => None,
        })
        .collect()
}

/// Realizes a lexical string written with boundary symbols.
pub fn realize_lexical(input: &str, rules: &RuleSet) -> Result<(String, RuleTrace), OrthoError> {
    let mut buf = to_syms(input);
    let mut applied = Vec::new();
    let mut i = 0;
    while i < buf.len() {
        if let Sym::Ch(_) = buf[i] {
            i += 1;
            continue;
        }
        match rules.select(&buf, i)? {
            Some((rule, m)) => {
                applied.push(AppliedRule { rule: rule.id.clone(), position: m.start });
                i = splice(&mut buf, &m);
            }
            None => {
                buf.remove(i);
            }
        }
    }
    let output = finish(buf);
    let trace = RuleTrace { input: input.to_string(), output: output.clone(), applied };
    Ok((output, trace))
}

pub fn realize(seq: &MorphSequence, rules: &RuleSet) -> Result<(String, RuleTrace), OrthoError> {
    realize_lexical(&seq.lexical(), rules)
}

/// Re-applies the recorded rule firings to `trace.input` without consulting
/// priorities; unclaimed boundaries are dropped as in `realize`.
pub fn replay(trace: &RuleTrace, rules: &RuleSet) -> Result<String, OrthoError> {
    let mut buf = to_syms(&trace.input);
    let mut steps = trace.applied.iter().peekable();
    let mut i = 0;
    while i < buf.len() {
        if let Sym::Ch(_) = buf[i] {
            i += 1;
            continue;
        }
        let mut fired = false;
        if let Some(step) = steps.peek() {
            let rule = rules.get(&step.rule).ok_or_else(|| OrthoError::ReplayMismatch {
                rule: step.rule.clone(),
                position: step.position,
            })?;
            if step.position + rule.anchor_offset() == i {
                if let Some(m) = try_apply(rule, &buf, i, &rules.classes) {
                    if m.start == step.position {
                        i = splice(&mut buf, &m);
                        steps.next();
                        fired = true;
                    }
                }
            }
        }
        if !fired {
            buf.remove(i);
        }
    }
    if let Some(step) = steps.next() {
        return Err(OrthoError::ReplayMismatch { rule: step.rule.clone(), position: step.position });
    }
    Ok(finish(buf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(text: &str) -> RuleSet {
        RuleSet::parse(text, RadicalClasses::default()).unwrap()
    }

    #[test]
    fn identity_without_rules() {
        let (out, trace) = realize_lexical("ቀተለ+ኩ", &RuleSet::default()).unwrap();
        assert_eq!(out, "ቀተለኩ");
        assert!(trace.applied.is_empty());
    }

    #[test]
    fn sixth_order_before_k() {
        let rs = rules("700 | @any:1 + ከ:* | $1:6 $2\n");
        let (out, trace) = realize_lexical("ቀተለ+ኩ", &rs).unwrap();
        assert_eq!(out, "ቀተልኩ");
        assert_eq!(trace.applied, vec![AppliedRule { rule: "r700".into(), position: 2 }]);
        assert_eq!(replay(&trace, &rs).unwrap(), out);
    }

    #[test]
    fn priority_wins() {
        let rs = rules("700 | @any:1 + ከ:* | $1:6 $2\n790 | @velar:1 + ከ:* | $1:@2\n");
        assert_eq!(realize_lexical("ሰበከ+ኩ", &rs).unwrap().0, "ሰበኩ");
        assert_eq!(realize_lexical("ቀተለ+ኩ", &rs).unwrap().0, "ቀተልኩ");
    }

    #[test]
    fn equal_priorities_conflict() {
        let rs = rules("700 | @any:1 + ከ:* | $1:6 $2\n700 | @velar:1 + ከ:* | $1:@2\n");
        assert!(matches!(realize_lexical("ሰበከ+ኩ", &rs), Err(OrthoError::ConflictingRules(..))));
        // only one of them matches here
        assert_eq!(realize_lexical("ቀተለ+ኩ", &rs).unwrap().0, "ቀተልኩ");
    }

    #[test]
    fn contexts_and_edges() {
        let rs = rules("500 | @any:4 - ዎ | $1 ሁ |  | #\n");
        assert_eq!(realize_lexical("ቀተላ-ዎ", &rs).unwrap().0, "ቀተላሁ");
        assert_eq!(realize_lexical("ቀተላ-ዎ+", &rs).unwrap().0, "ቀተላሁ");
        assert_eq!(realize_lexical("ቀተላ-ዎሙ", &rs).unwrap().0, "ቀተላዎሙ");
        assert_eq!(realize_lexical("ቀተሉ-ዎ", &rs).unwrap().0, "ቀተሉዎ");
        let rs = rules("500 | ን - @any | ና $2 | ክ | \n");
        assert_eq!(realize_lexical("ቀተልክን-ኒ", &rs).unwrap().0, "ቀተልክናኒ");
        assert_eq!(realize_lexical("ቀተልን-ኒ", &rs).unwrap().0, "ቀተልንኒ");
    }

    #[test]
    fn replay_skips_unclaimed_boundaries() {
        let rs = rules("560 | @any:1 + - ወ:* | $1:@2\n530 | @any:1,6 - ወ:* | $1:@2\n");
        let (out, trace) = realize_lexical("ቀተለ+-ዎ", &rs).unwrap();
        assert_eq!(out, "ቀተሎ");
        assert_eq!(replay(&trace, &rs).unwrap(), out);
        let (out, trace) = realize_lexical("ቀተልኩ+ት-ዎ", &rs).unwrap();
        assert_eq!(replay(&trace, &rs).unwrap(), out);
    }

    #[test]
    fn replay_rejects_forged_steps() {
        let rs = rules("700 | @any:1 + ከ:* | $1:6 $2\n");
        let trace = RuleTrace {
            input: "ቀተለ+ሙ".into(),
            output: String::new(),
            applied: vec![AppliedRule { rule: "r700".into(), position: 2 }],
        };
        assert!(replay(&trace, &rs).is_err());
    }
}
