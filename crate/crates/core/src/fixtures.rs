//! Small instances over the builtin machines, used by `selftest`, the
//! benches and the acceptance suite.

use std::sync::Arc;

use rand::Rng;

use crate::circuit::{Circuit, GateBuilder, Sig};
use crate::cnf::{Cnf, Lit};
use crate::dtiwi::{BoundExpr, DtiwiInstance, UniverseTemplate};
use crate::encoders::CliqueGraph;
use crate::pstring::{PString, Sym};
use crate::tm::{builtin, TmSpec, BUILTINS};

pub fn machines() -> Vec<(&'static str, TmSpec)> {
    BUILTINS
        .iter()
        .map(|&name| (name, builtin(name).expect("builtin exists")))
        .collect()
}

fn inst(name: &str, universe: &str, machine: &str, witness: &str, time: &str) -> DtiwiInstance {
    DtiwiInstance::direct(
        name,
        UniverseTemplate::parse(universe).unwrap(),
        Arc::new(builtin(machine).unwrap()),
        BoundExpr::parse(witness).unwrap(),
        BoundExpr::parse(time).unwrap(),
    )
}

/// Fixture instances with a cap on the input length at which deciding them
/// through circuits stays cheap.
pub fn instances() -> Vec<(DtiwiInstance, usize)> {
    vec![
        (inst("parity", "{01p}^(n)", "parity", "n", "n + 1"), 24),
        (
            inst(
                "all-zeros",
                "{0p}^(n)",
                "all_zeros",
                "log2ceil(n) + 1",
                "n + 1",
            ),
            24,
        ),
        (
            inst(
                "equal-halves",
                "{01p}^(n)",
                "equal_halves",
                "n",
                "n^2 + 4*n + 4",
            ),
            10,
        ),
        (
            inst("triangle", "{01p}^(n)", "clique_verifier", "9", "n + 10"),
            24,
        ),
        (inst("cnf3", "{01p}^(n)", "cnf_verifier", "n", "n + 1"), 24),
    ]
}

/// Witness-splitting toy: all-placeholder strings, parity verifier, witness
/// bound split into two halves.
pub fn split_toy() -> (DtiwiInstance, BoundExpr, BoundExpr) {
    let half = BoundExpr::parse("ceildiv(n, 2)").unwrap();
    let inst = inst(
        "parity-split",
        "p^(n)",
        "parity",
        "ceildiv(n, 2) + ceildiv(n, 2)",
        "n + 1",
    );
    (inst, half.clone(), half)
}

pub fn random_pstring<R: Rng>(rng: &mut R, len: usize, max_p: usize, alphabet: &[Sym]) -> PString {
    let mut chars: Vec<Sym> = (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect();
    let mut seen = 0;
    for c in chars.iter_mut() {
        if *c == Sym::P {
            seen += 1;
            if seen > max_p {
                *c = Sym::Zero;
            }
        }
    }
    PString::new(chars)
}

/// Random circuit with `inputs` inputs and `gates` gates over earlier nodes.
pub fn random_circuit<R: Rng>(rng: &mut R, inputs: usize, gates: usize) -> Circuit {
    let mut b = GateBuilder::new(inputs, false);
    let mut pool: Vec<Sig> = (0..inputs).map(|i| b.input(i)).collect();
    if pool.is_empty() {
        pool.push(b.constant(rng.gen()));
    }
    for _ in 0..gates {
        let x = pool[rng.gen_range(0..pool.len())];
        let y = pool[rng.gen_range(0..pool.len())];
        let s = match rng.gen_range(0..5) {
            0 => b.not(x),
            1 | 2 => b.and(x, y),
            3 => b.or(x, y),
            _ => b.constant(rng.gen()),
        };
        pool.push(s);
    }
    let out = *pool.last().unwrap();
    b.finish(out)
}

pub fn random_cnf<R: Rng>(rng: &mut R, vars: usize, clauses: usize, width: usize) -> Cnf {
    let clauses = (0..clauses)
        .map(|_| {
            (0..rng.gen_range(1..=width))
                .map(|_| {
                    let var = rng.gen_range(0..vars);
                    if rng.gen() {
                        Lit::neg(var)
                    } else {
                        Lit::pos(var)
                    }
                })
                .collect()
        })
        .collect();
    Cnf::new(vars, clauses).unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, v: usize, density: f64) -> CliqueGraph {
    let mut edges = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    CliqueGraph::new(v, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pstring::BitString;
    use crate::tm::Verdict;

    #[test]
    fn time_bounds_suffice() {
        for (inst, max_len) in instances() {
            let crate::dtiwi::InstanceKind::Direct { verifier, time, .. } = &inst.kind else {
                unreachable!()
            };
            for n in 0..=max_len.min(12) {
                let t = time.eval(n as u64).unwrap();
                for a in 0..(1u64 << n) {
                    let x = BitString::from_index(a, n).to_string();
                    let run = verifier.run_str(&x, t).unwrap();
                    assert_ne!(run.verdict, Verdict::Timeout, "{} on {x}", inst.name);
                }
            }
        }
    }
}
