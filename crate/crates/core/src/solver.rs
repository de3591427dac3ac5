//! Exhaustive satisfiability search for small-input circuits.
//!
//! Assignments are enumerated as integers `a` in ascending order, input `i`
//! taking bit `k - 1 - i` of `a`, so the first satisfying `a` is the
//! lexicographically smallest witness. Evaluation is bit-sliced: a block of
//! 64 consecutive assignments runs through the circuit as one pass over
//! `u64` words.
//!
//! Under [`Discipline::Strict`] a circuit with `m` gates may have at most
//! `⌈log₂ max(m, 2)⌉` inputs, which caps the search at `2m` evaluations.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{ceil_log2, Circuit};
use crate::pstring::BitString;

/// Input cap under [`Discipline::Lenient`]; keeps a misuse from running for
/// days.
pub const LENIENT_MAX_INPUTS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Discipline {
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub jobs: usize,
    pub discipline: Discipline,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            jobs: 1,
            discipline: Discipline::Strict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("circuit has {inputs} inputs, more than allowed for {m} gates")]
    TooManyInputs { inputs: usize, m: usize },
    #[error("circuit {index}: {source}")]
    InFamily {
        index: usize,
        #[source]
        source: Box<SolverError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatVerdict {
    Sat(BitString),
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: SatVerdict,
    /// Assignments evaluated (lanes actually run, not words).
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyOutcome {
    /// Smallest satisfiable index and its least witness.
    pub hit: Option<(usize, BitString)>,
    pub evaluations: u64,
}

/// Largest input count allowed for a circuit with `m` gates.
pub fn input_limit(m: usize, discipline: Discipline) -> usize {
    match discipline {
        Discipline::Strict => ceil_log2(m.max(2) as u64) as usize,
        Discipline::Lenient => LENIENT_MAX_INPUTS,
    }
}

pub fn check_inputs(c: &Circuit, discipline: Discipline) -> Result<(), SolverError> {
    let m = c.gate_count();
    let inputs = c.num_inputs();
    if inputs > input_limit(m, discipline) {
        return Err(SolverError::TooManyInputs { inputs, m });
    }
    Ok(())
}

/// Lanes of a 64-assignment block in which bit `s < 6` of the lane number is
/// set.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

pub fn solve(c: &Circuit, opts: SolveOptions) -> Result<SolveOutcome, SolverError> {
    check_inputs(c, opts.discipline)?;
    let k = c.num_inputs();
    let total: u64 = 1u64 << k;
    let blocks = total.div_ceil(64);
    let lanes = total.min(64);
    let jobs = (opts.jobs.max(1) as u64).min(blocks) as usize;

    let best = AtomicU64::new(u64::MAX);
    let evaluations = AtomicU64::new(0);
    let worker = |lo: u64, hi: u64| {
        let mut ev = c.word_evaluator();
        let mut words = vec![0u64; k];
        let mut done = 0u64;
        for block in lo..hi {
            if block * 64 > best.load(Ordering::Relaxed) {
                break;
            }
            for (i, w) in words.iter_mut().enumerate() {
                let s = k - 1 - i;
                *w = if s >= 6 {
                    if (block >> (s - 6)) & 1 == 1 {
                        !0
                    } else {
                        0
                    }
                } else {
                    LANE_PATTERNS[s]
                };
            }
            let mask = if lanes == 64 { !0 } else { (1u64 << lanes) - 1 };
            let out = ev.eval(&words) & mask;
            done += lanes;
            if out != 0 {
                best.fetch_min(
                    block * 64 + u64::from(out.trailing_zeros()),
                    Ordering::Relaxed,
                );
                break;
            }
        }
        evaluations.fetch_add(done, Ordering::Relaxed);
    };

    if jobs == 1 {
        worker(0, blocks);
    } else {
        std::thread::scope(|scope| {
            for w in 0..jobs as u64 {
                let lo = w * blocks / jobs as u64;
                let hi = (w + 1) * blocks / jobs as u64;
                let worker = &worker;
                scope.spawn(move || worker(lo, hi));
            }
        });
    }

    let best = best.into_inner();
    let verdict = if best == u64::MAX {
        SatVerdict::Unsat
    } else {
        SatVerdict::Sat(BitString::from_index(best, k))
    };
    Ok(SolveOutcome {
        verdict,
        evaluations: evaluations.into_inner(),
    })
}

/// Solves `circuits` in order and stops at the first satisfiable one. Every
/// circuit is checked against the input limit before any search starts.
pub fn solve_family(
    circuits: &[Circuit],
    opts: SolveOptions,
) -> Result<FamilyOutcome, SolverError> {
    for (index, c) in circuits.iter().enumerate() {
        check_inputs(c, opts.discipline).map_err(|e| SolverError::InFamily {
            index,
            source: Box::new(e),
        })?;
    }
    let mut evaluations = 0;
    for (index, c) in circuits.iter().enumerate() {
        let out = solve(c, opts)?;
        evaluations += out.evaluations;
        if let SatVerdict::Sat(w) = out.verdict {
            return Ok(FamilyOutcome {
                hit: Some((index, w)),
                evaluations,
            });
        }
    }
    Ok(FamilyOutcome {
        hit: None,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{GateBuilder, Node};

    fn lenient(jobs: usize) -> SolveOptions {
        SolveOptions {
            jobs,
            discipline: Discipline::Lenient,
        }
    }

    /// Satisfied only by the assignment equal to `target`.
    fn equals(k: usize, target: u64) -> Circuit {
        let mut b = GateBuilder::new(k, false);
        let mut acc = b.constant(true);
        for i in 0..k {
            let x = b.input(i);
            let lit = if (target >> (k - 1 - i)) & 1 == 1 {
                x
            } else {
                b.not(x)
            };
            acc = b.and(acc, lit);
        }
        b.finish(acc)
    }

    #[test]
    fn finds_unique_witness_in_high_blocks() {
        for k in [0, 1, 5, 6, 7, 12] {
            let target = (1u64 << k) - 1;
            for jobs in [1, 3, 8] {
                let out = solve(&equals(k, target), lenient(jobs)).unwrap();
                assert_eq!(
                    out.verdict,
                    SatVerdict::Sat(BitString::from_index(target, k))
                );
                assert!(out.evaluations <= 1 << k);
            }
        }
    }

    #[test]
    fn unsat_counts_everything() {
        let c = Circuit::new(vec![Node::Input(0), Node::Not(0), Node::And(0, 1)], 1).unwrap();
        let out = solve(&c, SolveOptions::default()).unwrap();
        assert_eq!(out.verdict, SatVerdict::Unsat);
        assert_eq!(out.evaluations, 2);
    }

    #[test]
    fn strict_limit() {
        // 3 inputs, 1 gate: 3 > ceil_log2(2)
        let c = Circuit::new(
            vec![Node::Input(0), Node::Input(1), Node::Input(2), Node::Not(2)],
            3,
        )
        .unwrap();
        assert_eq!(
            solve(&c, SolveOptions::default()),
            Err(SolverError::TooManyInputs { inputs: 3, m: 1 })
        );
        assert!(solve(&c, lenient(1)).is_ok());
    }

    #[test]
    fn family_picks_first_sat() {
        let cs = vec![
            Circuit::constant(false),
            equals(3, 5),
            Circuit::constant(true),
        ];
        let out = solve_family(&cs, lenient(2)).unwrap();
        assert_eq!(out.hit, Some((1, BitString::parse("101").unwrap())));
    }
}
