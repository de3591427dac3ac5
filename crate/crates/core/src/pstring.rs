//! Strings over the ternary alphabet `{0, 1, p}`.
//!
//! A [`PString`] caches the positions of its placeholder characters so that
//! prefix fillings are a direct index substitution.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// One character of the ternary alphabet, stored as a 2-bit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Sym {
    Zero = 0b00,
    One = 0b01,
    P = 0b10,
}

impl Sym {
    pub fn from_char(c: char) -> Option<Sym> {
        match c {
            '0' => Some(Sym::Zero),
            '1' => Some(Sym::One),
            'p' => Some(Sym::P),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sym::Zero => '0',
            Sym::One => '1',
            Sym::P => 'p',
        }
    }

    pub fn from_bit(b: bool) -> Sym {
        if b {
            Sym::One
        } else {
            Sym::Zero
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PStringError {
    #[error("illegal character at position {0}")]
    IllegalCharacter(usize),
}

/// A string over `{0, 1, p}` with its placeholder positions in ascending order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PString {
    chars: Vec<Sym>,
    placeholders: Vec<usize>,
}

impl PString {
    pub fn new(chars: Vec<Sym>) -> Self {
        let placeholders = chars
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sym::P)
            .map(|(i, _)| i)
            .collect();
        PString {
            chars,
            placeholders,
        }
    }

    pub fn parse(text: &str) -> Result<Self, PStringError> {
        text.chars()
            .enumerate()
            .map(|(i, c)| Sym::from_char(c).ok_or(PStringError::IllegalCharacter(i)))
            .collect::<Result<Vec<_>, _>>()
            .map(PString::new)
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Number of placeholder characters.
    pub fn pcount(&self) -> usize {
        self.placeholders.len()
    }

    pub fn placeholder_positions(&self) -> &[usize] {
        &self.placeholders
    }

    pub fn chars(&self) -> &[Sym] {
        &self.chars
    }

    pub fn get(&self, i: usize) -> Option<Sym> {
        self.chars.get(i).copied()
    }

    /// Replaces the `i`-th placeholder with bit `i` of `r` for every
    /// `i < min(|r|, pcount)`. Extra bits of `r` are ignored.
    pub fn apply_filling(&self, r: &BitString) -> PString {
        let take = r.len().min(self.pcount());
        if take == 0 {
            return self.clone();
        }
        let mut chars = self.chars.clone();
        for (pos, bit) in self.placeholders.iter().zip(r.bits()).take(take) {
            chars[*pos] = Sym::from_bit(*bit);
        }
        PString {
            chars,
            placeholders: self.placeholders[take..].to_vec(),
        }
    }

    /// All distinct prefix fillings of span at most `w`, shortest first and
    /// lexicographic within a length.
    pub fn fillings(&self, w: usize) -> Fillings<'_> {
        Fillings {
            source: self,
            max_len: w.min(self.pcount()),
            len: 0,
            next: 0,
        }
    }

    /// `self ⪯ other`: `self` arises from `other` by replacing any subset of
    /// its placeholders with bits.
    pub fn refines(&self, other: &PString) -> bool {
        self.len() == other.len()
            && self
                .chars
                .iter()
                .zip(&other.chars)
                .all(|(a, b)| a == b || *b == Sym::P)
    }

    /// Every string obtained by independently keeping or filling each
    /// placeholder.
    pub fn unrestricted_fillings(&self) -> Vec<PString> {
        let mut out = vec![self.chars.clone()];
        for &pos in &self.placeholders {
            let mut next = Vec::with_capacity(out.len() * 3);
            for chars in out {
                for s in [Sym::P, Sym::Zero, Sym::One] {
                    let mut c = chars.clone();
                    c[pos] = s;
                    next.push(c);
                }
            }
            out = next;
        }
        out.into_iter().map(PString::new).collect()
    }
}

impl fmt::Display for PString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.chars {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PString({self})")
    }
}

impl FromStr for PString {
    type Err = PStringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PString::parse(s)
    }
}

/// Closure of a finite language under unrestricted fillings, deduplicated.
pub fn closure_of<'a, I>(language: I) -> BTreeSet<PString>
where
    I: IntoIterator<Item = &'a PString>,
{
    language
        .into_iter()
        .flat_map(|y| y.unrestricted_fillings())
        .collect()
}

/// A string over `{0, 1}`, possibly empty.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_index(value: u64, len: usize) -> Self {
        BitString(
            (0..len)
                .map(|i| (value >> (len - 1 - i)) & 1 == 1)
                .collect(),
        )
    }

    pub fn parse(text: &str) -> Result<Self, PStringError> {
        text.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(PStringError::IllegalCharacter(i)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Interprets the bits as an unsigned integer, first bit most significant.
    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0, |acc, b| (acc << 1) | u64::from(*b))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString(bits)
    }
}

/// Iterator returned by [`PString::fillings`].
pub struct Fillings<'a> {
    source: &'a PString,
    max_len: usize,
    len: usize,
    next: u64,
}

impl Iterator for Fillings<'_> {
    type Item = (BitString, PString);

    fn next(&mut self) -> Option<Self::Item> {
        if self.len > self.max_len {
            return None;
        }
        let r = BitString::from_index(self.next, self.len);
        let image = self.source.apply_filling(&r);
        self.next += 1;
        if self.next == 1u64 << self.len {
            self.len += 1;
            self.next = 0;
        }
        Some((r, image))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        if self.len > self.max_len {
            return (0, Some(0));
        }
        let total = (1u128 << (self.max_len + 1)) - 1;
        let done = (1u128 << self.len) - 1 + u128::from(self.next);
        let left = usize::try_from(total - done).unwrap_or(usize::MAX);
        (left, Some(left))
    }
}
