//! Bound expressions in `n`: the concrete stand-in for "efficiently
//! computable" witness, time and padding functions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' int)?
//! atom   := int | 'n' | '(' expr ')'
//!         | 'log2ceil' '(' expr ')' | 'ceildiv' '(' expr ',' expr ')'
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::ceil_log2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoundExpr {
    Const(u64),
    N,
    Log2Ceil(Box<BoundExpr>),
    Add(Box<BoundExpr>, Box<BoundExpr>),
    Mul(Box<BoundExpr>, Box<BoundExpr>),
    Pow(Box<BoundExpr>, u32),
    CeilDiv(Box<BoundExpr>, Box<BoundExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("bound expression parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("bound expression {expr} overflows at n = {n}")]
    Overflow { expr: String, n: u64 },
    #[error("bound expression {expr} divides by zero at n = {n}")]
    DivisionByZero { expr: String, n: u64 },
    #[error("bound expression {expr} decreases between n = {n} and n = {}", n + 1)]
    NotMonotone { expr: String, n: u64 },
}

/// Largest `n` probed by [`BoundExpr::check`] and the sampled comparisons.
pub const SAMPLE_LIMIT: u64 = 1 << 16;

impl BoundExpr {
    pub fn parse(src: &str) -> Result<BoundExpr, BoundError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, n: u64) -> Result<u64, BoundError> {
        let overflow = || BoundError::Overflow {
            expr: self.to_string(),
            n,
        };
        Ok(match self {
            BoundExpr::Const(c) => *c,
            BoundExpr::N => n,
            BoundExpr::Log2Ceil(a) => u64::from(ceil_log2(a.eval(n)?)),
            BoundExpr::Add(a, b) => a.eval(n)?.checked_add(b.eval(n)?).ok_or_else(overflow)?,
            BoundExpr::Mul(a, b) => a.eval(n)?.checked_mul(b.eval(n)?).ok_or_else(overflow)?,
            BoundExpr::Pow(a, k) => a.eval(n)?.checked_pow(*k).ok_or_else(overflow)?,
            BoundExpr::CeilDiv(a, b) => {
                let d = b.eval(n)?;
                if d == 0 {
                    return Err(BoundError::DivisionByZero {
                        expr: self.to_string(),
                        n,
                    });
                }
                a.eval(n)?.div_ceil(d)
            }
        })
    }

    /// Evaluates and converts to `usize`, treating overflow as an error.
    pub fn eval_usize(&self, n: usize) -> Result<usize, BoundError> {
        let v = self.eval(n as u64)?;
        usize::try_from(v).map_err(|_| BoundError::Overflow {
            expr: self.to_string(),
            n: n as u64,
        })
    }

    /// Checks that the expression evaluates and is non-decreasing for every
    /// `n` in `1..=SAMPLE_LIMIT`.
    pub fn check(&self) -> Result<(), BoundError> {
        let mut prev = self.eval(1)?;
        for n in 2..=SAMPLE_LIMIT {
            let v = self.eval(n)?;
            if v < prev {
                return Err(BoundError::NotMonotone {
                    expr: self.to_string(),
                    n: n - 1,
                });
            }
            prev = v;
        }
        Ok(())
    }

    /// Sample points for numeric comparisons: every `n ≤ 1024`, then a
    /// geometric sweep up to [`SAMPLE_LIMIT`].
    pub fn sample_points() -> impl Iterator<Item = u64> {
        (1..=1024u64).chain((11..=16).flat_map(|e| {
            let base = 1u64 << e;
            [base - 1, base, base + 1, base + base / 2]
        }))
    }

    pub fn sum(a: BoundExpr, b: BoundExpr) -> BoundExpr {
        BoundExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn product(a: BoundExpr, b: BoundExpr) -> BoundExpr {
        BoundExpr::Mul(Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            BoundExpr::Add(..) => 0,
            BoundExpr::Mul(..) => 1,
            BoundExpr::Pow(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            BoundExpr::Const(c) => write!(f, "{c}"),
            BoundExpr::N => f.write_str("n"),
            BoundExpr::Log2Ceil(a) => write!(f, "log2ceil({a})"),
            BoundExpr::CeilDiv(a, b) => write!(f, "ceildiv({a}, {b})"),
            BoundExpr::Add(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_at(f, 1)
            }
            BoundExpr::Mul(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str("*")?;
                b.fmt_at(f, 2)
            }
            BoundExpr::Pow(a, k) => {
                a.fmt_at(f, 3)?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl FromStr for BoundExpr {
    type Err = BoundError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundExpr::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> BoundError {
        BoundError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), BoundError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<BoundExpr, BoundError> {
        let mut e = self.term()?;
        while self.eat(b'+') {
            e = BoundExpr::sum(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<BoundExpr, BoundError> {
        let mut e = self.factor()?;
        while self.eat(b'*') {
            e = BoundExpr::product(e, self.factor()?);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<BoundExpr, BoundError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let k = self.int()?;
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            return Ok(BoundExpr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<u64, BoundError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer too large"))
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn atom(&mut self) -> Result<BoundExpr, BoundError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_digit() => Ok(BoundExpr::Const(self.int()?)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                match self.ident() {
                    "n" => Ok(BoundExpr::N),
                    "log2ceil" => {
                        self.expect(b'(')?;
                        let a = self.expr()?;
                        self.expect(b')')?;
                        Ok(BoundExpr::Log2Ceil(Box::new(a)))
                    }
                    "ceildiv" => {
                        self.expect(b'(')?;
                        let a = self.expr()?;
                        self.expect(b',')?;
                        let b = self.expr()?;
                        self.expect(b')')?;
                        Ok(BoundExpr::CeilDiv(Box::new(a), Box::new(b)))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err("unknown identifier"))
                    }
                }
            }
            _ => Err(self.err("expected expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, n: u64) -> u64 {
        BoundExpr::parse(s).unwrap().eval(n).unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(ev("n", 7), 7);
        assert_eq!(ev("n^2 + 1", 3), 10);
        assert_eq!(ev("2*n + 3*n", 2), 10);
        assert_eq!(ev("3*log2ceil(n)", 9), 12);
        assert_eq!(ev("ceildiv(n, log2ceil(n))", 100), 15);
        assert_eq!(ev("(n + 1)^2", 2), 9);
        assert_eq!(ev("log2ceil(1)", 5), 0);
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "n",
            "n^2 + 1",
            "(n + 1)^2",
            "2*(n + 3)",
            "ceildiv(n, log2ceil(n))",
            "n*n*n + n + 4",
            "(n^2)^3",
        ] {
            let e = BoundExpr::parse(s).unwrap();
            assert_eq!(BoundExpr::parse(&e.to_string()).unwrap(), e, "{s}");
        }
        assert_eq!(BoundExpr::parse("n ^ 2+1").unwrap().to_string(), "n^2 + 1");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            BoundExpr::parse("n +"),
            Err(BoundError::Parse { .. })
        ));
        assert!(matches!(
            BoundExpr::parse("m"),
            Err(BoundError::Parse { .. })
        ));
        assert!(matches!(
            BoundExpr::parse("n n"),
            Err(BoundError::Parse { .. })
        ));
        assert!(matches!(
            BoundExpr::parse("ceildiv(n, log2ceil(n))").unwrap().eval(1),
            Err(BoundError::DivisionByZero { .. })
        ));
        assert!(matches!(
            BoundExpr::parse("n^64").unwrap().eval(2),
            Err(BoundError::Overflow { .. })
        ));
    }

    #[test]
    fn monotonicity_check() {
        assert!(BoundExpr::parse("n^2 + 1").unwrap().check().is_ok());
        assert!(BoundExpr::parse("3*log2ceil(n)").unwrap().check().is_ok());
        assert!(matches!(
            BoundExpr::parse("ceildiv(n, log2ceil(n))").unwrap().check(),
            Err(BoundError::DivisionByZero { .. })
        ));
    }
}
