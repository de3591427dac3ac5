use serde::Serialize;
use thiserror::Error;

use super::instance::{DtiwiInstance, InstanceError};
use crate::circuit::Stats;
use crate::compiler::{compile_on_pstring, CompileError};
use crate::pstring::{BitString, PString};
use crate::solver::{input_limit, solve_family, Discipline, SolveOptions, SolverError};
use crate::tm::Verdict;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl From<crate::dtiwi::UniverseError> for DecideError {
    fn from(e: crate::dtiwi::UniverseError) -> Self {
        DecideError::Instance(e.into())
    }
}

impl From<crate::dtiwi::BoundError> for DecideError {
    fn from(e: crate::dtiwi::BoundError) -> Self {
        DecideError::Instance(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteforceReport {
    pub member: bool,
    /// Filling `r` whose image the verifier accepted.
    pub filling: Option<String>,
    pub fillings_checked: u64,
    /// Fillings on which the verifier exhausted its time bound.
    pub timeouts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitReport {
    pub index: usize,
    pub stats: Stats,
    /// Whether the circuit meets the `⌈log₂ m⌉` input discipline.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViaCircuitsReport {
    pub member: bool,
    pub in_universe: bool,
    pub time_bound: usize,
    /// `⌊log₂ |x|⌋`, the family size the asymptotic argument budgets for.
    pub log_bound: usize,
    pub circuits: Vec<CircuitReport>,
    pub hit: Option<(usize, String)>,
    pub evaluations: u64,
}

/// Enumerates `SUB_{w(|x|)}(x)` and runs the verifier on each image within
/// `t(|x|)` steps.
pub fn decide_bruteforce(
    inst: &DtiwiInstance,
    y: &PString,
) -> Result<BruteforceReport, DecideError> {
    let mut report = BruteforceReport {
        member: false,
        filling: None,
        fillings_checked: 0,
        timeouts: 0,
    };
    if !inst.in_universe(y)? {
        return Ok(report);
    }
    let Some(core) = inst.core(y)? else {
        return Ok(report);
    };
    let n = core.x.len();
    let w = core.witness.eval_usize(n)?;
    let t = core.time.eval(n as u64)?;
    for (r, image) in core.x.fillings(w) {
        report.fillings_checked += 1;
        let run = core.verifier.run(&image, t);
        match run.verdict {
            Verdict::Accept => {
                report.member = true;
                report.filling = Some(r.to_string());
                break;
            }
            Verdict::Timeout => report.timeouts += 1,
            Verdict::Reject => {}
        }
    }
    Ok(report)
}

/// Builds `C_0, …, C_K` with `K = min(pcount(x), w(|x|))` and asks the
/// solver for the first satisfiable member.
///
/// `C_i` exposes the first `i` placeholders and hardwires the rest, so its
/// satisfying assignments are exactly the accepted fillings of length `i`.
/// The family includes `i = 0` (the unfilled string itself).
pub fn decide_via_circuits(
    inst: &DtiwiInstance,
    y: &PString,
    time_override: Option<usize>,
    jobs: usize,
) -> Result<ViaCircuitsReport, DecideError> {
    let mut report = ViaCircuitsReport {
        member: false,
        in_universe: inst.in_universe(y)?,
        time_bound: 0,
        log_bound: (y.len().max(1)).ilog2() as usize,
        circuits: Vec::new(),
        hit: None,
        evaluations: 0,
    };
    if !report.in_universe {
        return Ok(report);
    }
    let Some(core) = inst.core(y)? else {
        return Ok(report);
    };
    let n = core.x.len();
    let t = match time_override {
        Some(t) => t,
        None => core.time.eval_usize(n)?,
    };
    report.time_bound = t;
    let top = core.x.pcount().min(core.witness.eval_usize(n)?);
    let family = (0..=top)
        .map(|i| compile_on_pstring(core.verifier, &core.x, i, t))
        .collect::<Result<Vec<_>, _>>()?;
    for (index, c) in family.iter().enumerate() {
        let stats = c.stats();
        report.circuits.push(CircuitReport {
            index,
            strict: stats.inputs <= input_limit(stats.m, Discipline::Strict),
            stats,
        });
    }
    let out = solve_family(
        &family,
        SolveOptions {
            jobs,
            discipline: Discipline::Lenient,
        },
    )?;
    report.evaluations = out.evaluations;
    if let Some((i, w)) = out.hit {
        report.member = true;
        report.hit = Some((i, w.to_string()));
    }
    Ok(report)
}

/// Length of the filling witnessed by a via-circuits hit, for cross-checks.
pub fn hit_filling(report: &ViaCircuitsReport) -> Option<BitString> {
    report
        .hit
        .as_ref()
        .map(|(_, w)| BitString::parse(w).expect("solver emits bit strings"))
}
