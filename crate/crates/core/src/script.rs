//! Ethiopic grapheme layer.
//!
//! A fidel is addressed as a (radical, order) pair. Regular consonant series
//! occupy eight code points each in the Ethiopic block; the first seven are
//! the vowel orders and the eighth column holds a labialized form that this
//! crate does not model. The four classical labiovelar sets (ቈ, ኈ, ኰ, ጐ) have
//! gaps in their rows, so each of their graphemes is treated as an opaque
//! radical of its own with a single, fixed order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const BLOCK_START: u32 = 0x1200;
pub const BLOCK_END: u32 = 0x137C;

/// First-order code points of the regular seven-order series.
const SERIES_BASES: &[u32] = &[
    0x1200, 0x1208, 0x1210, 0x1218, 0x1220, 0x1228, 0x1230, 0x1238, 0x1240, 0x1250, 0x1260,
    0x1268, 0x1270, 0x1278, 0x1280, 0x1290, 0x1298, 0x12A0, 0x12A8, 0x12B8, 0x12C8, 0x12D0,
    0x12D8, 0x12E0, 0x12E8, 0x12F0, 0x12F8, 0x1300, 0x1308, 0x1318, 0x1320, 0x1328, 0x1330,
    0x1338, 0x1340, 0x1348, 0x1350,
];

/// Labiovelar rows: base code point plus the populated column offsets.
const LABIOVELAR_BASES: &[u32] = &[0x1248, 0x1288, 0x12B0, 0x1310];
const LABIOVELAR_OFFSETS: &[u32] = &[0, 2, 3, 4, 5];

pub const GUTTURALS: [char; 5] = ['ሀ', 'ሐ', 'ኀ', 'አ', 'ዐ'];
pub const SEMIVOWELS: [char; 2] = ['የ', 'ወ'];
pub const VELARS: [char; 3] = ['ቀ', 'ከ', 'ገ'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("unsupported grapheme {0:?} (U+{code:04X})", code = *.0 as u32)]
    UnsupportedGrapheme(char),
    #[error("invalid order {order} for radical {radical}")]
    InvalidOrder { radical: Radical, order: u8 },
}

/// A consonant series, identified by its first-order fidel.
///
/// Opaque radicals (labiovelars) are identified by the grapheme itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Radical(char);

impl Radical {
    /// Looks up the radical whose first-order (or opaque) form is `base`.
    pub fn new(base: char) -> Result<Radical, ScriptError> {
        let cp = base as u32;
        if SERIES_BASES.contains(&cp) || is_labiovelar(cp) {
            Ok(Radical(base))
        } else {
            Err(ScriptError::UnsupportedGrapheme(base))
        }
    }

    /// Radical of any supported fidel.
    pub fn of(ch: char) -> Result<Radical, ScriptError> {
        decompose(ch).map(|f| f.radical)
    }

    pub fn base(self) -> char {
        self.0
    }

    pub fn id(self) -> u32 {
        self.0 as u32
    }

    pub fn is_opaque(self) -> bool {
        is_labiovelar(self.0 as u32)
    }

    /// Every radical the script layer supports, in code point order.
    pub fn all() -> impl Iterator<Item = Radical> {
        let mut cps: Vec<u32> = SERIES_BASES.to_vec();
        for base in LABIOVELAR_BASES {
            cps.extend(LABIOVELAR_OFFSETS.iter().map(|o| base + o));
        }
        cps.sort_unstable();
        cps.into_iter()
            .map(|cp| Radical(char::from_u32(cp).expect("table holds valid scalars")))
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Vowel order within a series, 1 through 7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Order(u8);

impl Order {
    pub const FIRST: Order = Order(1);
    pub const SIXTH: Order = Order(6);

    pub fn new(index: u8) -> Option<Order> {
        (1..=7).contains(&index).then_some(Order(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Order {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Order::new(value).ok_or_else(|| format!("order {value} outside 1-7"))
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o.0
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fidel {
    pub radical: Radical,
    pub order: Order,
}

impl Fidel {
    pub fn to_char(self) -> char {
        compose(self).expect("a decomposed fidel always recomposes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadicalClass {
    Guttural,
    Semivowel,
    Velar,
    Plain,
}

impl RadicalClass {
    pub fn name(self) -> &'static str {
        match self {
            RadicalClass::Guttural => "guttural",
            RadicalClass::Semivowel => "semivowel",
            RadicalClass::Velar => "velar",
            RadicalClass::Plain => "plain",
        }
    }

    pub fn from_name(name: &str) -> Option<RadicalClass> {
        match name {
            "guttural" => Some(RadicalClass::Guttural),
            "semivowel" => Some(RadicalClass::Semivowel),
            "velar" => Some(RadicalClass::Velar),
            "plain" => Some(RadicalClass::Plain),
            _ => None,
        }
    }
}

fn is_labiovelar(cp: u32) -> bool {
    LABIOVELAR_BASES
        .iter()
        .any(|base| cp >= *base && LABIOVELAR_OFFSETS.contains(&(cp - base)))
}

pub fn decompose(ch: char) -> Result<Fidel, ScriptError> {
    let cp = ch as u32;
    if !(BLOCK_START..=BLOCK_END).contains(&cp) {
        return Err(ScriptError::UnsupportedGrapheme(ch));
    }
    if is_labiovelar(cp) {
        return Ok(Fidel { radical: Radical(ch), order: Order::FIRST });
    }
    let base = cp - (cp - BLOCK_START) % 8;
    let offset = cp - base;
    if offset == 7 || !SERIES_BASES.contains(&base) {
        return Err(ScriptError::UnsupportedGrapheme(ch));
    }
    Ok(Fidel {
        radical: Radical(char::from_u32(base).expect("series base is a valid scalar")),
        order: Order(offset as u8 + 1),
    })
}

pub fn compose(f: Fidel) -> Result<char, ScriptError> {
    compose_raw(f.radical, f.order.index())
}

/// Composes from a raw order index, reporting out-of-range orders.
pub fn compose_raw(radical: Radical, order: u8) -> Result<char, ScriptError> {
    if !(1..=7).contains(&order) || (radical.is_opaque() && order != 1) {
        return Err(ScriptError::InvalidOrder { radical, order });
    }
    if radical.is_opaque() {
        return Ok(radical.0);
    }
    let cp = radical.0 as u32 + u32::from(order) - 1;
    Ok(char::from_u32(cp).expect("offset stays within the series row"))
}

pub fn reorder(f: Fidel, target: Order) -> Result<Fidel, ScriptError> {
    compose_raw(f.radical, target.index())?;
    Ok(Fidel { radical: f.radical, order: target })
}

/// Shorthand for re-ordering a single character.
pub fn reorder_char(ch: char, target: u8) -> Result<char, ScriptError> {
    let f = decompose(ch)?;
    compose_raw(f.radical, target)
}

pub fn classify_radical(r: Radical) -> RadicalClass {
    let c = r.base();
    if GUTTURALS.contains(&c) {
        RadicalClass::Guttural
    } else if SEMIVOWELS.contains(&c) {
        RadicalClass::Semivowel
    } else if VELARS.contains(&c) {
        RadicalClass::Velar
    } else {
        RadicalClass::Plain
    }
}

/// Decomposes every character of `text`.
pub fn decompose_str(text: &str) -> Result<Vec<Fidel>, ScriptError> {
    text.chars().map(decompose).collect()
}

pub fn is_supported(ch: char) -> bool {
    decompose(ch).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(c: char) -> Radical {
        Radical::new(c).unwrap()
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose('ለ').unwrap(), Fidel { radical: r('ለ'), order: Order(1) });
        assert_eq!(decompose('ል').unwrap(), Fidel { radical: r('ለ'), order: Order(6) });
        assert_eq!(decompose('a'), Err(ScriptError::UnsupportedGrapheme('a')));
    }

    #[test]
    fn eighth_column_is_rejected() {
        // ሇ (HOA) and ሏ (LWA)
        assert!(decompose('\u{1207}').is_err());
        assert!(decompose('ሏ').is_err());
        // numerals and punctuation
        assert!(decompose('፩').is_err());
        assert!(decompose('።').is_err());
    }

    #[test]
    fn compose_examples() {
        let q = r('ቀ');
        assert_eq!(compose_raw(q, 1).unwrap(), 'ቀ');
        assert_eq!(compose_raw(q, 6).unwrap(), 'ቅ');
        assert_eq!(compose_raw(q, 0), Err(ScriptError::InvalidOrder { radical: q, order: 0 }));
        assert!(compose_raw(q, 8).is_err());
    }

    #[test]
    fn reorder_examples() {
        let le = decompose('ለ').unwrap();
        assert_eq!(reorder(le, Order::SIXTH).unwrap().to_char(), 'ል');
        let l = decompose('ል').unwrap();
        assert_eq!(reorder(l, Order::SIXTH).unwrap(), l);
        assert_eq!(reorder_char('ገ', 6).unwrap(), 'ግ');
    }

    #[test]
    fn labiovelars_are_opaque() {
        let f = decompose('ቋ').unwrap();
        assert!(f.radical.is_opaque());
        assert_eq!(f.to_char(), 'ቋ');
        assert_eq!(classify_radical(f.radical), RadicalClass::Plain);
        assert!(reorder(f, Order::SIXTH).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_radical(r('ሐ')), RadicalClass::Guttural);
        assert_eq!(classify_radical(r('ወ')), RadicalClass::Semivowel);
        assert_eq!(classify_radical(r('ቀ')), RadicalClass::Velar);
        assert_eq!(classify_radical(r('በ')), RadicalClass::Plain);
    }

    #[test]
    fn sz_and_s_stay_distinct() {
        assert_ne!(Radical::of('ሠ').unwrap(), Radical::of('ሰ').unwrap());
        assert_ne!(Radical::of('ጸ').unwrap(), Radical::of('ፀ').unwrap());
    }

    #[test]
    fn order_bounds() {
        assert!(Order::new(0).is_none());
        assert!(Order::new(8).is_none());
        assert_eq!(Order::new(7).unwrap().index(), 7);
    }
}
