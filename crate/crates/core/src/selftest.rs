//! Quick cross-module oracle suites, run by `forge selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::compiler::{compile_folded, CompileSpec, InputCell};
use crate::dtiwi::{decide_bruteforce, decide_via_circuits, tradeoff, tradeoff_table};
use crate::encoders::{clique_by_subsets, clique_gadget_circuit, encode_clique};
use crate::fixtures;
use crate::pstring::{BitString, Sym};
use crate::solver::{solve, Discipline, SatVerdict, SolveOptions};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

fn compiler_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut r = SuiteResult::new("compiler");
    for (name, m) in fixtures::machines() {
        let n = rng.gen_range(1..=6);
        let interface: Vec<InputCell> = (0..n).map(InputCell::Exposed).collect();
        let t = if name == "equal_halves" {
            n * n + 4 * n + 4
        } else {
            n + 10
        };
        let spec = CompileSpec {
            machine: &m,
            interface,
            time_bound: t,
        };
        let c = match compile_folded(&spec) {
            Ok(c) => c,
            Err(e) => {
                r.check(false, || format!("{name}: {e}"));
                continue;
            }
        };
        for a in 0..(1u64 << n) {
            let bits = BitString::from_index(a, n);
            let want = m.run_str(&bits.to_string(), t as u64).unwrap().accepted();
            r.check(c.eval_bits(bits.bits()) == want, || {
                format!("{name} on {bits}")
            });
        }
    }
    r
}

fn decide_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut r = SuiteResult::new("decide");
    let alphabet = [Sym::Zero, Sym::One, Sym::P];
    for (inst, max_len) in fixtures::instances() {
        for _ in 0..4 {
            let len = rng.gen_range(0..=max_len.min(12));
            let x = fixtures::random_pstring(rng, len, 6, &alphabet);
            let brute = decide_bruteforce(&inst, &x).map(|d| d.member);
            let via = decide_via_circuits(&inst, &x, None, 1).map(|d| d.member);
            match (brute, via) {
                (Ok(a), Ok(b)) => r.check(a == b, || format!("{} on {x}", inst.name)),
                (a, b) => r.check(false, || format!("{} on {x}: {a:?} / {b:?}", inst.name)),
            }
        }
    }
    r
}

fn solver_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut r = SuiteResult::new("solver");
    for _ in 0..20 {
        let k = rng.gen_range(0..=8);
        let gates = rng.gen_range(1..40);
        let c = fixtures::random_circuit(rng, k, gates);
        let oracle = (0..(1u64 << c.num_inputs()))
            .map(|a| BitString::from_index(a, c.num_inputs()))
            .find(|a| c.evaluate(a).unwrap());
        let opts = SolveOptions {
            jobs: 1,
            discipline: Discipline::Lenient,
        };
        let got = solve(&c, opts).unwrap().verdict;
        let want = match oracle {
            Some(a) => SatVerdict::Sat(a),
            None => SatVerdict::Unsat,
        };
        r.check(got == want, || format!("circuit {}", c.to_text()));
        let back = Circuit::deserialize(&c.serialize());
        r.check(back.as_ref() == Ok(&c), || "codec round trip".into());
    }
    r
}

fn clique_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut r = SuiteResult::new("clique");
    for _ in 0..6 {
        let v = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=3.min(v));
        let g = fixtures::random_graph(rng, v, 0.5);
        let want = clique_by_subsets(&g, k).is_some();
        let (x, inst) = encode_clique(&g, k).unwrap();
        let via = decide_via_circuits(&inst, &x, None, 1).map(|d| d.member);
        r.check(matches!(via, Ok(b) if b == want), || {
            format!("pipeline v={v} k={k}")
        });
        let gadget = clique_gadget_circuit(&g, k).unwrap();
        let opts = SolveOptions {
            jobs: 1,
            discipline: Discipline::Lenient,
        };
        let sat = matches!(solve(&gadget, opts).unwrap().verdict, SatVerdict::Sat(_));
        r.check(sat == want, || format!("gadget v={v} k={k}"));
    }
    r
}

fn tradeoff_suite() -> SuiteResult {
    let mut r = SuiteResult::new("tradeoff");
    for alpha in ["3/2", "11/10", "19/10"] {
        let a = tradeoff::parse_rational(alpha).unwrap();
        let rows = tradeoff_table(&a, 30).unwrap();
        for row in &rows {
            r.check(tradeoff::closed_form_holds(&a, row), || {
                format!("alpha {alpha} k {}", row.k)
            });
        }
        for w in rows.windows(2) {
            r.check(w[1].ratio <= w[0].ratio, || {
                format!("ratio increases at {alpha}")
            });
        }
    }
    r
}

/// Runs every suite with the given seed.
pub fn run(seed: u64) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        compiler_suite(&mut rng),
        decide_suite(&mut rng),
        solver_suite(&mut rng),
        clique_suite(&mut rng),
        tradeoff_suite(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_suites_pass() {
        for s in super::run(7) {
            assert_eq!(s.failed, 0, "{}: {:?}", s.name, s.first_failure);
            assert!(s.passed > 0, "{}", s.name);
        }
    }
}
