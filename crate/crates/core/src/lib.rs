//! Placeholder strings, time-bounded machines, tableau circuits and the
//! limited-witness decision machinery built from them.

pub mod circuit;
pub mod cnf;
pub mod compiler;
pub mod dtiwi;
pub mod encoders;
pub mod fixtures;
pub mod pstring;
pub mod selftest;
pub mod solver;
pub mod tm;

pub use circuit::{Circuit, CircuitError, Node, Stats};
pub use cnf::{Cnf, Lit};
pub use compiler::{
    compile, compile_folded, compile_on_pstring, CompileError, CompileSpec, InputCell,
};
pub use dtiwi::{BoundExpr, DtiwiInstance, UniverseTemplate};
pub use encoders::CliqueGraph;
pub use pstring::{BitString, PString, Sym};
pub use solver::{solve, solve_family, Discipline, SatVerdict, SolveOptions, SolveOutcome};
pub use tm::{RunResult, TmSpec, Verdict};
