//! Rule syntax: tokens, parsing and printing.
//!
//! A rule line reads `priority | lexical | surface | left_ctx | right_ctx`;
//! the two context fields may be omitted or left empty. Tokens are
//! whitespace separated:
//!
//! * `=` `+` `-` morpheme boundaries (prefix, subject suffix, object suffix)
//! * `#` word edge (contexts only)
//! * `@class` or `@class:orders` where class is guttural, semivowel, velar,
//!   plain or any
//! * a fidel (exact match) or `fidel:orders` (any listed order of its series)
//!
//! `orders` is `*` or a comma list such as `1,6`. Surface tokens are `0`
//! (delete), a literal fidel, `fidel:k`, `fidel:@m`, or `$n`, `$n:k`, `$n:@m`
//! where `n`/`m` number the fidel tokens of the lexical side from 1.

use std::fmt;

use crate::lexicon::RadicalClasses;
use crate::script::{self, Radical, RadicalClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Prefix,
    Suffix,
    Object,
}

impl Boundary {
    pub fn symbol(self) -> char {
        match self {
            Boundary::Prefix => '=',
            Boundary::Suffix => '+',
            Boundary::Object => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Boundary> {
        match c {
            '=' => Some(Boundary::Prefix),
            '+' => Some(Boundary::Suffix),
            '-' => Some(Boundary::Object),
            _ => None,
        }
    }
}

/// Set of vowel orders, bit `i` standing for order `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderMask(u8);

impl OrderMask {
    pub const ALL: OrderMask = OrderMask(0b111_1111);

    pub fn has(self, order: u8) -> bool {
        (1..=7).contains(&order) && self.0 & (1 << (order - 1)) != 0
    }

    pub fn orders(self) -> impl Iterator<Item = u8> {
        (1..=7).filter(move |o| self.has(*o))
    }

    fn parse(s: &str) -> Result<OrderMask, String> {
        if s == "*" {
            return Ok(OrderMask::ALL);
        }
        let mut bits = 0u8;
        for part in s.split(',') {
            let o: u8 = part.parse().map_err(|_| format!("bad order {part:?}"))?;
            if !(1..=7).contains(&o) {
                return Err(format!("order {o} outside 1-7"));
            }
            bits |= 1 << (o - 1);
        }
        Ok(OrderMask(bits))
    }
}

impl fmt::Display for OrderMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == OrderMask::ALL {
            return f.write_str("*");
        }
        let parts: Vec<String> = self.orders().map(|o| o.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassRef {
    Any,
    Known(RadicalClass),
    /// Kept so the checker can report it; never matches.
    Unknown(String),
}

impl ClassRef {
    pub fn name(&self) -> &str {
        match self {
            ClassRef::Any => "any",
            ClassRef::Known(c) => c.name(),
            ClassRef::Unknown(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Exact(char),
    Series(Radical, OrderMask),
    Class(ClassRef, OrderMask),
}

impl Atom {
    pub fn matches(&self, ch: char, classes: &RadicalClasses) -> bool {
        match self {
            Atom::Exact(c) => *c == ch,
            Atom::Series(r, mask) => {
                script::decompose(ch).is_ok_and(|f| f.radical == *r && mask.has(f.order.index()))
            }
            Atom::Class(class, mask) => script::decompose(ch).is_ok_and(|f| {
                mask.has(f.order.index())
                    && match class {
                        ClassRef::Any => true,
                        ClassRef::Known(k) => classes.classify(f.radical) == *k,
                        ClassRef::Unknown(_) => false,
                    }
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Atom(Atom),
    Boundary(Boundary),
    Edge,
}

/// How a surface token picks its vowel order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderSpec {
    Keep,
    Fixed(u8),
    /// Order of the given (0-based) captured lexical fidel.
    From(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceToken {
    Literal(char),
    Series(Radical, OrderSpec),
    Copy(usize, OrderSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoRule {
    pub id: String,
    pub priority: i64,
    pub lexical: Vec<Token>,
    pub surface: Vec<SurfaceToken>,
    pub left: Vec<Token>,
    pub right: Vec<Token>,
}

fn parse_atom(tok: &str) -> Result<Atom, String> {
    if let Some(rest) = tok.strip_prefix('@') {
        let (name, mask) = match rest.split_once(':') {
            Some((n, m)) => (n, OrderMask::parse(m)?),
            None => (rest, OrderMask::ALL),
        };
        if name.is_empty() {
            return Err("empty class name".into());
        }
        let class = match name {
            "any" => ClassRef::Any,
            _ => RadicalClass::from_name(name)
                .map(ClassRef::Known)
                .unwrap_or_else(|| ClassRef::Unknown(name.to_string())),
        };
        return Ok(Atom::Class(class, mask));
    }
    let mut chars = tok.chars();
    let c = chars.next().ok_or("empty token")?;
    let f = script::decompose(c).map_err(|e| e.to_string())?;
    let rest = chars.as_str();
    if rest.is_empty() {
        return Ok(Atom::Exact(c));
    }
    let mask = rest
        .strip_prefix(':')
        .ok_or_else(|| format!("unexpected {rest:?} after {c}"))
        .and_then(OrderMask::parse)?;
    Ok(Atom::Series(f.radical, mask))
}

fn parse_token(tok: &str, allow_edge: bool) -> Result<Token, String> {
    let mut chars = tok.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if let Some(b) = Boundary::from_symbol(c) {
            return Ok(Token::Boundary(b));
        }
        if c == '#' {
            return if allow_edge {
                Ok(Token::Edge)
            } else {
                Err("word edge # is only allowed in contexts".into())
            };
        }
    }
    parse_atom(tok).map(Token::Atom)
}

fn parse_order_spec(s: &str, atoms: usize) -> Result<OrderSpec, String> {
    if let Some(m) = s.strip_prefix('@') {
        let m: usize = m.parse().map_err(|_| format!("bad reference @{m}"))?;
        if m == 0 || m > atoms {
            return Err(format!("@{m} does not name a lexical fidel"));
        }
        return Ok(OrderSpec::From(m - 1));
    }
    let k: u8 = s.parse().map_err(|_| format!("bad order {s:?}"))?;
    if !(1..=7).contains(&k) {
        return Err(format!("order {k} outside 1-7"));
    }
    Ok(OrderSpec::Fixed(k))
}

fn parse_surface(tok: &str, atoms: usize) -> Result<SurfaceToken, String> {
    if let Some(rest) = tok.strip_prefix('$') {
        let (n, spec) = match rest.split_once(':') {
            Some((n, s)) => (n, parse_order_spec(s, atoms)?),
            None => (rest, OrderSpec::Keep),
        };
        let n: usize = n.parse().map_err(|_| format!("bad reference ${n}"))?;
        if n == 0 || n > atoms {
            return Err(format!("${n} does not name a lexical fidel"));
        }
        return Ok(SurfaceToken::Copy(n - 1, spec));
    }
    let mut chars = tok.chars();
    let c = chars.next().ok_or("empty token")?;
    let f = script::decompose(c).map_err(|e| e.to_string())?;
    match chars.as_str() {
        "" => Ok(SurfaceToken::Literal(c)),
        rest => {
            let spec = rest
                .strip_prefix(':')
                .ok_or_else(|| format!("unexpected {rest:?} after {c}"))
                .and_then(|s| parse_order_spec(s, atoms))?;
            Ok(SurfaceToken::Series(f.radical, spec))
        }
    }
}

impl OrthoRule {
    pub fn parse_line(line: &str) -> Result<OrthoRule, String> {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 3 && fields.len() != 5 {
            return Err(format!("expected 3 or 5 |-separated fields, got {}", fields.len()));
        }
        let priority: i64 =
            fields[0].parse().map_err(|_| format!("bad priority {:?}", fields[0]))?;
        let lexical = fields[1]
            .split_whitespace()
            .map(|t| parse_token(t, false))
            .collect::<Result<Vec<_>, _>>()?;
        if lexical.is_empty() {
            return Err("empty lexical pattern".into());
        }
        if !lexical.iter().any(|t| matches!(t, Token::Boundary(_))) {
            return Err("lexical pattern must contain a boundary".into());
        }
        let atoms = lexical.iter().filter(|t| matches!(t, Token::Atom(_))).count();
        let surface = match fields[2] {
            "0" => Vec::new(),
            "" => return Err("empty surface; write 0 to delete".into()),
            s => s
                .split_whitespace()
                .map(|t| parse_surface(t, atoms))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let ctx = |s: &str| -> Result<Vec<Token>, String> {
            s.split_whitespace().map(|t| parse_token(t, true)).collect()
        };
        let (left, right) = if fields.len() == 5 {
            (ctx(fields[3])?, ctx(fields[4])?)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(OrthoRule { id: format!("r{priority}"), priority, lexical, surface, left, right })
    }

    /// Number of fidel tokens that precede the anchoring boundary.
    pub fn anchor_offset(&self) -> usize {
        self.lexical.iter().take_while(|t| matches!(t, Token::Atom(_))).count()
    }

    pub fn class_refs(&self) -> impl Iterator<Item = &ClassRef> {
        self.lexical
            .iter()
            .chain(&self.left)
            .chain(&self.right)
            .filter_map(|t| match t {
                Token::Atom(Atom::Class(c, _)) => Some(c),
                _ => None,
            })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Exact(c) => write!(f, "{c}"),
            Atom::Series(r, m) => write!(f, "{r}:{m}"),
            Atom::Class(c, m) if *m == OrderMask::ALL => write!(f, "@{}", c.name()),
            Atom::Class(c, m) => write!(f, "@{}:{m}", c.name()),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Atom(a) => a.fmt(f),
            Token::Boundary(b) => write!(f, "{}", b.symbol()),
            Token::Edge => f.write_str("#"),
        }
    }
}

fn fmt_spec(spec: OrderSpec) -> String {
    match spec {
        OrderSpec::Keep => String::new(),
        OrderSpec::Fixed(k) => format!(":{k}"),
        OrderSpec::From(m) => format!(":@{}", m + 1),
    }
}

impl fmt::Display for SurfaceToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceToken::Literal(c) => write!(f, "{c}"),
            SurfaceToken::Series(r, s) => write!(f, "{r}{}", fmt_spec(*s)),
            SurfaceToken::Copy(n, s) => write!(f, "${}{}", n + 1, fmt_spec(*s)),
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for OrthoRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surface = if self.surface.is_empty() { "0".to_string() } else { join(&self.surface) };
        write!(f, "{} | {} | {}", self.priority, join(&self.lexical), surface)?;
        if !self.left.is_empty() || !self.right.is_empty() {
            write!(f, " | {} | {}", join(&self.left), join(&self.right))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        for line in [
            "700 | @any:1 + ከ:* | $1:6 $2",
            "790 | @velar:1 + ከ:* | $1:@2",
            "900 | @any:6 = @guttural | $1:1 $2 | # | ",
            "550 | ነ - ወ:* | ና ሀ:@2",
            "10 | ነ + ነ | ነ",
            "5 | @any + | 0 |  | #",
        ] {
            let rule = OrthoRule::parse_line(line).unwrap();
            let again = OrthoRule::parse_line(&rule.to_string()).unwrap();
            assert_eq!(rule, again, "{line}");
        }
    }

    #[test]
    fn anchor_and_ids() {
        let r = OrthoRule::parse_line("700 | @any:1 + ከ:* | $1:6 $2").unwrap();
        assert_eq!(r.id, "r700");
        assert_eq!(r.anchor_offset(), 1);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(OrthoRule::parse_line("x | ለ + ኩ | ል ኩ").is_err());
        assert!(OrthoRule::parse_line("1 | ለ ኩ | ል ኩ").is_err());
        assert!(OrthoRule::parse_line("1 | ለ + ኩ | $3").is_err());
        assert!(OrthoRule::parse_line("1 | ለ + ኩ |").is_err());
        assert!(OrthoRule::parse_line("1 | # + ኩ | ኩ").is_err());
        assert!(OrthoRule::parse_line("1 | ለ:8 + ኩ | ኩ").is_err());
    }

    #[test]
    fn unknown_class_parses_leniently() {
        let r = OrthoRule::parse_line("1 | @nasal + ኩ | ኩ").unwrap();
        assert!(r.class_refs().any(|c| matches!(c, ClassRef::Unknown(n) if n == "nasal")));
    }

    #[test]
    fn atom_matching() {
        let t = RadicalClasses::default();
        let a = parse_atom("@velar:1").unwrap();
        assert!(a.matches('ከ', &t));
        assert!(!a.matches('ክ', &t));
        assert!(!a.matches('ለ', &t));
        let s = parse_atom("ከ:*").unwrap();
        assert!(s.matches('ኩ', &t) && s.matches('ክ', &t));
        assert!(!s.matches('ቁ', &t));
    }
}
