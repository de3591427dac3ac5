//! Witness splitting and padding transforms on instances.

use thiserror::Error;

use super::bound::{BoundError, BoundExpr};
use super::instance::{DtiwiInstance, InstanceKind};
use super::universe::{pad_with, unpad};
use crate::pstring::PString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("witness bound {have} differs from {w} + {w_prime} at n = {n}")]
    SplitMismatch {
        have: String,
        w: String,
        w_prime: String,
        n: u64,
    },
    #[error("padding function {f} does not exceed n at n = {n}")]
    PaddingUnderflow { f: String, n: u64 },
    #[error("transform needs an unpadded instance")]
    NotDirect,
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Splits the witness bound `w + w'` of `inst`. The result decides
/// `{x ∈ Clo(U) : ∃ s ∈ SUB_w(|x|), s(x) ∈ V}`: the universe is widened to
/// its closure, the verifier and time bound are kept, and only `w` bits are
/// left to guess.
pub fn translation_transform(
    inst: &DtiwiInstance,
    w: &BoundExpr,
    w_prime: &BoundExpr,
) -> Result<DtiwiInstance, TransformError> {
    let InstanceKind::Direct {
        universe,
        verifier,
        witness,
        time,
    } = &inst.kind
    else {
        return Err(TransformError::NotDirect);
    };
    let sum = BoundExpr::sum(w.clone(), w_prime.clone());
    if sum != *witness {
        for n in BoundExpr::sample_points() {
            if witness.eval(n)? != sum.eval(n)? {
                return Err(TransformError::SplitMismatch {
                    have: witness.to_string(),
                    w: w.to_string(),
                    w_prime: w_prime.to_string(),
                    n,
                });
            }
        }
    }
    Ok(DtiwiInstance::direct(
        format!("{}+translate", inst.name),
        universe.closure(),
        verifier.clone(),
        w.clone(),
        time.clone(),
    ))
}

/// `pad(x) = 1^(k-1) 0 x` with `k = f(|x|) - |x|`, so `|pad(x)| = f(|x|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadCodec {
    pub f: BoundExpr,
}

impl PadCodec {
    pub fn pad(&self, x: &PString) -> Result<PString, TransformError> {
        let n = x.len() as u64;
        let target = self.f.eval(n)?;
        if target <= n {
            return Err(TransformError::PaddingUnderflow {
                f: self.f.to_string(),
                n,
            });
        }
        Ok(pad_with(x, (target - n) as usize))
    }

    pub fn unpad(&self, y: &PString) -> Option<PString> {
        unpad(y)
    }
}

/// Wraps `inst` so that `pad(x)` is a member iff `x` is. `f` must exceed
/// `n` at every sampled `n ≥ 2`, so `n^2` passes; [`PadCodec::pad`] rejects
/// the individual lengths where `f(n) ≤ n`.
pub fn padding_transform(
    inst: &DtiwiInstance,
    f: &BoundExpr,
) -> Result<(DtiwiInstance, PadCodec), TransformError> {
    for n in BoundExpr::sample_points().filter(|&n| n >= 2) {
        if f.eval(n)? <= n {
            return Err(TransformError::PaddingUnderflow {
                f: f.to_string(),
                n,
            });
        }
    }
    let padded = DtiwiInstance {
        name: format!("{}+pad", inst.name),
        kind: InstanceKind::Padded {
            f: f.clone(),
            inner: Box::new(inst.clone()),
        },
    };
    Ok((padded, PadCodec { f: f.clone() }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dtiwi::decide::decide_bruteforce;
    use crate::dtiwi::UniverseTemplate;
    use crate::tm::builtin;

    fn parity_inst(witness: &str) -> DtiwiInstance {
        DtiwiInstance::direct(
            "parity",
            "{01p}^(n)".parse().unwrap(),
            Arc::new(builtin("parity").unwrap()),
            witness.parse().unwrap(),
            "n + 1".parse().unwrap(),
        )
    }

    #[test]
    fn split_checks() {
        let inst = parity_inst("2*n");
        let n: BoundExpr = "n".parse().unwrap();
        let t = translation_transform(&inst, &n, &n).unwrap();
        assert!(matches!(&t.kind, InstanceKind::Direct { witness, .. } if *witness == n));
        let zero: BoundExpr = "0".parse().unwrap();
        assert!(matches!(
            translation_transform(&inst, &n, &zero),
            Err(TransformError::SplitMismatch { n: 1, .. })
        ));
        let inst = parity_inst("n + n");
        assert!(translation_transform(&inst, &n, &n).is_ok());
    }

    #[test]
    fn padding_example() {
        let inst = parity_inst("n");
        let f: BoundExpr = "n^2".parse().unwrap();
        let (padded, codec) = padding_transform(&inst, &f).unwrap();
        let x: PString = "1p0".parse().unwrap();
        let y = codec.pad(&x).unwrap();
        assert_eq!(y.len(), 9);
        assert_eq!(y.to_string(), "1111101p0");
        assert_eq!(codec.unpad(&y), Some(x.clone()));
        assert!(matches!(
            codec.pad(&"1".parse().unwrap()),
            Err(TransformError::PaddingUnderflow { n: 1, .. })
        ));
        assert_eq!(
            decide_bruteforce(&padded, &y).unwrap().member,
            decide_bruteforce(&inst, &x).unwrap().member
        );
        assert_eq!(
            padded.universe(),
            UniverseTemplate::Padded(Box::new(inst.universe()))
        );
        assert!(matches!(
            padding_transform(&inst, &"n".parse().unwrap()),
            Err(TransformError::PaddingUnderflow { n: 2, .. })
        ));
    }
}
