//! Universe templates: linear-time membership by construction, with a
//! syntactic closure.
//!
//! Text form is a sequence of items. An item is a literal `0`, `1`, `p`, or
//! a class such as `{01}`, optionally followed by `^(<bound expr>)` or `^<int>`
//! to repeat it. `pad(<template>)` denotes `{1^(k-1) 0 x : k ≥ 1, x in
//! <template>}`.
//!
//! ```text
//! {01}^(n)            every bit string
//! p^(3){01}^(4)       three placeholders then four bits
//! 0p1p                a single string
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::bound::{BoundError, BoundExpr};
use crate::pstring::{PString, Sym};

const ZERO: u8 = 1 << Sym::Zero as u8;
const ONE: u8 = 1 << Sym::One as u8;
const P: u8 = 1 << Sym::P as u8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    /// Bit set over [`Sym`] codes.
    pub class: u8,
    /// `None` means exactly once.
    pub count: Option<BoundExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniverseTemplate {
    Seq(Vec<Item>),
    Padded(Box<UniverseTemplate>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("universe template parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Bound(#[from] BoundError),
}

fn class_admits(class: u8, s: Sym) -> bool {
    class & (1 << s as u8) != 0
}

impl UniverseTemplate {
    pub fn parse(src: &str) -> Result<UniverseTemplate, UniverseError> {
        let src = src.trim();
        if let Some(inner) = src.strip_prefix("pad(").and_then(|r| r.strip_suffix(')')) {
            return Ok(UniverseTemplate::Padded(Box::new(Self::parse(inner)?)));
        }
        let bytes = src.as_bytes();
        let err = |pos: usize, msg: &str| UniverseError::Parse {
            pos,
            msg: msg.to_string(),
        };
        let mut items = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let class = match bytes[i] {
                b'0' => ZERO,
                b'1' => ONE,
                b'p' => P,
                b'{' => {
                    let close = src[i..].find('}').ok_or_else(|| err(i, "unclosed class"))? + i;
                    let mut class = 0;
                    for (off, c) in src[i + 1..close].chars().enumerate() {
                        let s = Sym::from_char(c)
                            .ok_or_else(|| err(i + 1 + off, "class member must be 0, 1 or p"))?;
                        class |= 1 << s as u8;
                    }
                    if class == 0 {
                        return Err(err(i, "empty class"));
                    }
                    i = close;
                    class
                }
                c if c.is_ascii_whitespace() => {
                    i += 1;
                    continue;
                }
                _ => return Err(err(i, "expected 0, 1, p or '{'")),
            };
            i += 1;
            let mut count = None;
            if bytes.get(i) == Some(&b'^') {
                i += 1;
                if bytes.get(i) == Some(&b'(') {
                    let mut depth = 0;
                    let start = i;
                    loop {
                        match bytes.get(i) {
                            Some(b'(') => depth += 1,
                            Some(b')') => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            Some(_) => {}
                            None => return Err(err(start, "unbalanced parentheses")),
                        }
                        i += 1;
                    }
                    count = Some(BoundExpr::parse(&src[start + 1..i])?);
                    i += 1;
                } else {
                    let start = i;
                    while bytes.get(i).is_some_and(u8::is_ascii_digit) {
                        i += 1;
                    }
                    let k = src[start..i]
                        .parse()
                        .map_err(|_| err(start, "expected repeat count"))?;
                    count = Some(BoundExpr::Const(k));
                }
            }
            items.push(Item { class, count });
        }
        Ok(UniverseTemplate::Seq(items))
    }

    /// The template of exactly one string.
    pub fn literal(x: &PString) -> UniverseTemplate {
        UniverseTemplate::Seq(
            x.chars()
                .iter()
                .map(|&s| Item {
                    class: 1 << s as u8,
                    count: None,
                })
                .collect(),
        )
    }

    /// Membership in one left-to-right pass (after evaluating the repeat
    /// counts at `n = |x|`).
    pub fn matches(&self, x: &PString) -> Result<bool, UniverseError> {
        match self {
            UniverseTemplate::Padded(inner) => match unpad(x) {
                Some(rest) => inner.matches(&rest),
                None => Ok(false),
            },
            UniverseTemplate::Seq(items) => {
                let n = x.len();
                let mut pos = 0;
                for item in items {
                    let reps = match &item.count {
                        None => 1,
                        Some(e) => e.eval_usize(n)?,
                    };
                    if reps > n - pos {
                        return Ok(false);
                    }
                    if !x.chars()[pos..pos + reps]
                        .iter()
                        .all(|&s| class_admits(item.class, s))
                    {
                        return Ok(false);
                    }
                    pos += reps;
                }
                Ok(pos == n)
            }
        }
    }

    /// The template of `Clo(U)`: every class admitting `p` also admits `0`
    /// and `1`.
    pub fn closure(&self) -> UniverseTemplate {
        match self {
            UniverseTemplate::Padded(inner) => UniverseTemplate::Padded(Box::new(inner.closure())),
            UniverseTemplate::Seq(items) => UniverseTemplate::Seq(
                items
                    .iter()
                    .map(|it| Item {
                        class: if it.class & P != 0 {
                            it.class | ZERO | ONE
                        } else {
                            it.class
                        },
                        count: it.count.clone(),
                    })
                    .collect(),
            ),
        }
    }

    /// All members of length `n` (exponential; for tests and small demos).
    pub fn members(&self, n: usize) -> Vec<PString> {
        let mut out = Vec::new();
        let mut buf = vec![Sym::Zero; n];
        fn rec(t: &UniverseTemplate, buf: &mut Vec<Sym>, i: usize, out: &mut Vec<PString>) {
            if i == buf.len() {
                let x = PString::new(buf.clone());
                if t.matches(&x).unwrap_or(false) {
                    out.push(x);
                }
                return;
            }
            for s in [Sym::Zero, Sym::One, Sym::P] {
                buf[i] = s;
                rec(t, buf, i + 1, out);
            }
        }
        rec(self, &mut buf, 0, &mut out);
        out
    }
}

/// `1^(k-1) 0 x  ↦  x`: strips the maximal prefix of ones and one zero.
pub fn unpad(y: &PString) -> Option<PString> {
    let ones = y.chars().iter().take_while(|&&s| s == Sym::One).count();
    match y.get(ones) {
        Some(Sym::Zero) => Some(PString::new(y.chars()[ones + 1..].to_vec())),
        _ => None,
    }
}

/// `x ↦ 1^(k-1) 0 x` for `k ≥ 1`.
pub fn pad_with(x: &PString, k: usize) -> PString {
    assert!(k >= 1);
    let mut chars = vec![Sym::One; k - 1];
    chars.push(Sym::Zero);
    chars.extend_from_slice(x.chars());
    PString::new(chars)
}

impl fmt::Display for UniverseTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniverseTemplate::Padded(inner) => write!(f, "pad({inner})"),
            UniverseTemplate::Seq(items) => {
                for it in items {
                    let members: String = [Sym::Zero, Sym::One, Sym::P]
                        .into_iter()
                        .filter(|&s| class_admits(it.class, s))
                        .map(Sym::to_char)
                        .collect();
                    if members.len() == 1 {
                        f.write_str(&members)?;
                    } else {
                        write!(f, "{{{members}}}")?;
                    }
                    match &it.count {
                        None => {}
                        Some(BoundExpr::Const(k)) => write!(f, "^{k}")?,
                        Some(e) => write!(f, "^({e})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for UniverseTemplate {
    type Err = UniverseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UniverseTemplate::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PString {
        s.parse().unwrap()
    }

    fn t(s: &str) -> UniverseTemplate {
        s.parse().unwrap()
    }

    #[test]
    fn closure_example() {
        let u = t("0p1p");
        let c = u.closure();
        assert_eq!(c.to_string(), "0{01p}1{01p}");
        let members = c.members(4);
        assert_eq!(members.len(), 9);
        let want = crate::pstring::closure_of([&ps("0p1p")]);
        assert_eq!(
            members
                .into_iter()
                .collect::<std::collections::BTreeSet<_>>(),
            want
        );
    }

    #[test]
    fn repeats_in_n() {
        let u = t("p^(ceildiv(n, 2)){01}^(n*0 + 2)");
        assert!(u.matches(&ps("pp01")).unwrap());
        assert!(u.matches(&ps("ppp11")).unwrap());
        assert!(!u.matches(&ps("p011")).unwrap());
        assert!(!u.matches(&ps("pp0p")).unwrap());
        assert!(t("{01}^(n)").matches(&ps("")).unwrap());
        assert!(t("").matches(&ps("")).unwrap());
        assert!(!t("").matches(&ps("0")).unwrap());
        assert!(t("0^3 1").matches(&ps("0001")).unwrap());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "0p1p",
            "{01p}^(n)",
            "p^3{01}^(n + 1)",
            "pad({01}^(n))",
            "1{0p}^(log2ceil(n))",
        ] {
            assert_eq!(t(&t(s).to_string()), t(s), "{s}");
        }
    }

    #[test]
    fn padded_membership() {
        let u = t("pad(0p)");
        assert!(u.matches(&ps("1100p")).unwrap());
        assert!(u.matches(&ps("00p")).unwrap());
        assert!(!u.matches(&ps("111")).unwrap());
        assert!(!u.matches(&ps("10p0")).unwrap());
        let x = ps("1p0");
        for k in 1..5 {
            assert_eq!(unpad(&pad_with(&x, k)), Some(x.clone()));
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            UniverseTemplate::parse("0x"),
            Err(UniverseError::Parse { pos: 1, .. })
        ));
        assert!(matches!(
            UniverseTemplate::parse("{01"),
            Err(UniverseError::Parse { .. })
        ));
        assert!(matches!(
            UniverseTemplate::parse("{}"),
            Err(UniverseError::Parse { .. })
        ));
        assert!(matches!(
            UniverseTemplate::parse("0^(n"),
            Err(UniverseError::Parse { .. })
        ));
        assert!(matches!(
            UniverseTemplate::parse("0^(m)"),
            Err(UniverseError::Bound(_))
        ));
    }
}
