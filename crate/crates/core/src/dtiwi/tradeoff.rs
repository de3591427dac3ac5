//! Speed-up arithmetic: `z(α, k) = Σ_{i=0..k} α^i` against the exponent
//! `α^{k+1}`.
//!
//! Everything is generic over the number type so the same code runs on
//! exact rationals ([`BigRational`]) and on `f64`. Float comparisons use
//! [`FLOAT_TOLERANCE`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};
use thiserror::Error;

pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TradeoffError {
    #[error("alpha {0} out of range")]
    AlphaOutOfRange(String),
    #[error("epsilon {0} must be positive")]
    EpsilonNonpositive(String),
    #[error("no k up to {0} reaches the requested epsilon")]
    Unreachable(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffRow<T> {
    pub k: u32,
    /// `z(α, k)`
    pub z: T,
    /// `α^{k+1}`
    pub exponent: T,
    /// `α^{k+1} / z(α, k)`
    pub ratio: T,
}

fn check_alpha<T: Num + PartialOrd + Clone + std::fmt::Display>(
    alpha: &T,
) -> Result<(), TradeoffError> {
    let two = T::one() + T::one();
    if *alpha < T::one() || *alpha >= two {
        return Err(TradeoffError::AlphaOutOfRange(alpha.to_string()));
    }
    Ok(())
}

/// Rows `k = 0..=k_max`, for `1 ≤ α < 2`.
pub fn tradeoff_table<T>(alpha: &T, k_max: u32) -> Result<Vec<TradeoffRow<T>>, TradeoffError>
where
    T: Num + PartialOrd + Clone + std::fmt::Display,
{
    check_alpha(alpha)?;
    let mut rows = Vec::with_capacity(k_max as usize + 1);
    let mut power = T::one();
    let mut z = T::zero();
    for k in 0..=k_max {
        z = z + power.clone();
        power = power * alpha.clone();
        rows.push(TradeoffRow {
            k,
            ratio: power.clone() / z.clone(),
            z: z.clone(),
            exponent: power.clone(),
        });
    }
    Ok(rows)
}

/// Smallest `k` with `α^{k+1} / (α^{k+1} - 1) ≤ 1 + ε`, for `1 < α < 2`.
///
/// The condition is tested as `α^{k+1} ≥ 1 + 1/ε`, which avoids the
/// cancellation in `α^{k+1} - 1`.
pub fn required_k_for_epsilon(alpha: f64, epsilon: f64) -> Result<u32, TradeoffError> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(TradeoffError::AlphaOutOfRange(alpha.to_string()));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(TradeoffError::EpsilonNonpositive(epsilon.to_string()));
    }
    let need = 1.0 + 1.0 / epsilon;
    let mut power = alpha;
    const LIMIT: u32 = 100_000;
    for k in 0..LIMIT {
        if power >= need * (1.0 - FLOAT_TOLERANCE) {
            return Ok(k);
        }
        power *= alpha;
    }
    Err(TradeoffError::Unreachable(LIMIT))
}

/// `target^{1/(k+1)}`: the base that reaches `target` after `k + 1`
/// exponentiations.
pub fn required_base_alpha(target: f64, k: u32) -> Result<f64, TradeoffError> {
    if target.is_nan() || target <= 1.0 || !target.is_finite() {
        return Err(TradeoffError::AlphaOutOfRange(target.to_string()));
    }
    Ok(target.powf(1.0 / f64::from(k + 1)))
}

/// One induction step of the speed-up argument.
///
/// Step `j = 0` is the assumption itself: witness factor 1, time exponent
/// `α`. Step `j ≥ 1` splits the witness factor `z(α, j)` into the
/// hypothesis part `z(α, j-1)` and `α^j`, which yields a class with time
/// exponent `α^j`; padding with `f(n) = n^{α^j}` and the assumption then give
/// time exponent `α^{j+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleStep<T> {
    pub j: u32,
    pub witness_factor: T,
    /// `(w, w')` factors of `log n`.
    pub split: Option<(T, T)>,
    /// Exponent `e` of the padding function `f(n) = n^e`.
    pub padding_exponent: Option<T>,
    pub out_exponent: T,
}

pub fn speedup_schedule<T>(alpha: &T, k: u32) -> Result<Vec<ScheduleStep<T>>, TradeoffError>
where
    T: Num + PartialOrd + Clone + std::fmt::Display,
{
    let rows = tradeoff_table(alpha, k)?;
    let mut steps = Vec::with_capacity(rows.len());
    for (j, row) in rows.iter().enumerate() {
        let (split, padding_exponent) = if j == 0 {
            (None, None)
        } else {
            let alpha_j = rows[j - 1].exponent.clone();
            (
                Some((rows[j - 1].z.clone(), alpha_j.clone())),
                Some(alpha_j),
            )
        };
        steps.push(ScheduleStep {
            j: j as u32,
            witness_factor: row.z.clone(),
            split,
            padding_exponent,
            out_exponent: row.exponent.clone(),
        });
    }
    Ok(steps)
}

/// Parses `3/2`, `1.5` or `2` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(digits, scale))
}

/// Exact rational check of `z·(α − 1) = α^{k+1} − 1`.
pub fn closed_form_holds(alpha: &BigRational, row: &TradeoffRow<BigRational>) -> bool {
    let one = BigRational::one();
    row.z.clone() * (alpha - &one) == row.exponent.clone() - one
}
