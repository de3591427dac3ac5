use std::fmt::Debug;
use std::path::Path;

use anyhow::{Context, Result};
use forge_core::tm::{builtin, BUILTINS};
use forge_core::{Circuit, PString, TmSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A failure inside one of the library modules; exits with status 1 and its
/// variant name.
#[derive(Debug)]
pub struct DomainError {
    pub name: String,
    pub message: String,
}

impl std::fmt::Display for DomainError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.name, self.message)
    }
}

impl std::error::Error for DomainError {}

/// Innermost variant name in the `Debug` form of a nested error enum, so
/// `Instance(Machine(NonTotalTransitions { .. }))` reports
/// `NonTotalTransitions`.
fn variant_name(debug: &str) -> String {
    let mut rest = debug;
    let mut name = "";
    loop {
        let end = rest
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if end == 0 {
            break;
        }
        name = &rest[..end];
        match rest[end..].strip_prefix('(') {
            Some(inner) => rest = inner,
            None => break,
        }
    }
    if name.is_empty() {
        "Error".into()
    } else {
        name.into()
    }
}

pub fn domain<E: std::error::Error + Debug>(e: E) -> anyhow::Error {
    DomainError {
        name: variant_name(&format!("{e:?}")),
        message: e.to_string(),
    }
    .into()
}

pub trait OrDomain<T> {
    fn or_domain(self) -> Result<T>;
}

impl<T, E: std::error::Error + Debug> OrDomain<T> for std::result::Result<T, E> {
    fn or_domain(self) -> Result<T> {
        self.map_err(domain)
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A builtin name or a machine file.
pub fn load_machine(spec: &str) -> Result<TmSpec> {
    if BUILTINS.contains(&spec) {
        return builtin(spec).or_domain();
    }
    TmSpec::parse(&read_text(Path::new(spec))?).or_domain()
}

/// An inline string over `{0,1,p}`, or a file holding one.
pub fn load_pstring(arg: &str) -> Result<PString> {
    if let Ok(x) = arg.parse() {
        return Ok(x);
    }
    let path = Path::new(arg);
    if path.exists() {
        return read_text(path)?.trim().parse().or_domain();
    }
    arg.parse::<PString>().or_domain()
}

/// Binary or text circuit, told apart by content.
pub fn load_circuit(path: &Path) -> Result<Circuit> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    match std::str::from_utf8(&bytes) {
        Ok(text) if looks_like_text(text) => Circuit::parse_text(text).or_domain(),
        _ => Circuit::deserialize(&bytes).or_domain(),
    }
}

fn looks_like_text(s: &str) -> bool {
    let first = s.lines().map(str::trim).find(|l| !l.is_empty());
    matches!(first, Some(l) if l.starts_with("inputs") || l.starts_with('#') || l.starts_with('g'))
}

/// Exact decimal when the denominator only has factors 2 and 5, else `p/q`.
pub fn fmt_rational(r: &BigRational) -> String {
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let ten = BigInt::from(10);
    let mut d = den.clone();
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != BigInt::from(1) {
        return format!("{num}/{den}");
    }
    let places = twos.max(fives);
    let scaled = num.abs() * num_traits::pow(ten.clone(), places) / &den;
    let digits = scaled.to_string();
    let sign = if num.is_negative() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    format!("{sign}{int}.{frac}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_come_from_the_innermost_variant() {
        assert_eq!(
            variant_name("Instance(Machine(NonTotalTransitions { state: \"q\" }))"),
            "NonTotalTransitions"
        );
        assert_eq!(variant_name("ParseError(\"x\")"), "ParseError");
        assert_eq!(variant_name("NotDirect"), "NotDirect");
        assert_eq!(variant_name("Io { path: \"a\" }"), "Io");
    }

    #[test]
    fn rationals_print_as_decimals_when_exact() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(fmt_rational(&r(3, 2)), "1.5");
        assert_eq!(fmt_rational(&r(27, 8)), "3.375");
        assert_eq!(fmt_rational(&r(4, 1)), "4");
        assert_eq!(fmt_rational(&r(1, 20)), "0.05");
        assert_eq!(fmt_rational(&r(-1, 4)), "-0.25");
        assert_eq!(fmt_rational(&r(1, 3)), "1/3");
    }
}
