use std::collections::{BTreeMap, BTreeSet};

use forge_core::compiler::{compile, compile_folded, CompileSpec, InputCell};
use forge_core::dtiwi::BoundExpr;
use forge_core::fixtures;
use forge_core::solver::{solve, Discipline, SatVerdict, SolveOptions};
use forge_core::tm::builtin;
use forge_core::{BitString, Circuit, PString, Sym};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pstring() -> impl Strategy<Value = PString> {
    prop::collection::vec(
        prop_oneof![Just(Sym::Zero), Just(Sym::One), Just(Sym::P)],
        0..9,
    )
    .prop_map(PString::new)
}

fn circuit(max_inputs: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (0..=max_inputs, 0..=max_gates, any::<u64>()).prop_map(|(k, g, seed)| {
        fixtures::random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), k, g)
    })
}

fn truth_table(c: &Circuit) -> Vec<bool> {
    (0..1u64 << c.num_inputs())
        .map(|a| c.eval_bits(BitString::from_index(a, c.num_inputs()).bits()))
        .collect()
}

proptest! {
    #[test]
    fn filling_fixes_a_prefix_of_placeholders(x in pstring(), r in prop::collection::vec(any::<bool>(), 0..12)) {
        let r = BitString::new(r);
        let y = x.apply_filling(&r);
        let used = r.len().min(x.pcount());
        prop_assert_eq!(y.len(), x.len());
        prop_assert_eq!(y.pcount(), x.pcount() - used);
        prop_assert!(y.refines(&x));
        // the remaining placeholders are exactly the later ones
        prop_assert_eq!(y.placeholder_positions(), &x.placeholder_positions()[used..]);
    }

    #[test]
    fn fillings_are_distinct_and_shortest_first(x in pstring(), w in 0usize..6) {
        let all: Vec<(BitString, PString)> = x.fillings(w).collect();
        let distinct: BTreeSet<String> = all.iter().map(|(_, y)| y.to_string()).collect();
        prop_assert_eq!(distinct.len(), all.len());
        let cap = w.min(x.pcount());
        prop_assert_eq!(all.len() as u64, (0..=cap).map(|l| 1u64 << l).sum::<u64>());
        prop_assert!(all.windows(2).all(|p| p[0].0.len() <= p[1].0.len()));
        for (r, y) in &all {
            prop_assert_eq!(&x.apply_filling(r), y);
        }
    }

    #[test]
    fn closure_is_idempotent(xs in prop::collection::vec(pstring(), 0..3)) {
        let once = forge_core::pstring::closure_of(&xs);
        let twice = forge_core::pstring::closure_of(&once);
        prop_assert_eq!(&once, &twice);
        for y in &once {
            prop_assert!(xs.iter().any(|x| y.refines(x)));
        }
    }

    #[test]
    fn codec_round_trips(c in circuit(20, 80)) {
        let bytes = c.serialize();
        prop_assert_eq!(bytes.len(), forge_core::circuit::encoded_len(&c));
        prop_assert_eq!(Circuit::deserialize(&bytes), Ok(c.clone()));
        prop_assert_eq!(Circuit::parse_text(&c.to_text()), Ok(c));
    }

    #[test]
    fn specialize_agrees_with_substitution(c in circuit(6, 30), fix in any::<u8>(), vals in any::<u8>()) {
        let k = c.num_inputs();
        let partial: BTreeMap<usize, bool> = (0..k)
            .filter(|i| fix >> i & 1 == 1)
            .map(|i| (i, vals >> i & 1 == 1))
            .collect();
        let s = c.specialize(&partial).unwrap();
        prop_assert_eq!(s.num_inputs(), k - partial.len());
        for a in 0..1u64 << s.num_inputs() {
            let free = BitString::from_index(a, s.num_inputs());
            let mut it = free.bits().iter();
            let full: Vec<bool> = (0..k).map(|i| partial.get(&i).copied().unwrap_or_else(|| *it.next().unwrap())).collect();
            prop_assert_eq!(s.eval_bits(free.bits()), c.eval_bits(&full));
        }
    }

    #[test]
    fn prune_keeps_semantics(c in circuit(6, 40)) {
        let p = c.prune();
        prop_assert!(p.nodes().len() <= c.nodes().len());
        prop_assert_eq!(truth_table(&p), truth_table(&c));
    }

    #[test]
    fn solver_finds_least_witness(c in circuit(10, 60), jobs in 1usize..6) {
        let opts = SolveOptions { jobs, discipline: Discipline::Lenient };
        let out = solve(&c, opts).unwrap();
        let least = truth_table(&c).iter().position(|&b| b);
        match out.verdict {
            SatVerdict::Sat(w) => prop_assert_eq!(Some(w.to_index() as usize), least),
            SatVerdict::Unsat => prop_assert_eq!(least, None),
        }
        prop_assert!(out.evaluations <= 1u64 << c.num_inputs());
    }

    #[test]
    fn bound_arithmetic_matches_u64(a in 0u64..1000, b in 1u64..50, n in 1u64..5000) {
        let e = BoundExpr::parse(&format!("{a}*n + ceildiv(n, {b}) + log2ceil(n)")).unwrap();
        let log = (0..64).find(|&w| 1u64 << w >= n).unwrap();
        let want = a * n + n.div_ceil(b) + log;
        prop_assert_eq!(e.eval(n).unwrap(), want);
    }
}

#[test]
fn raw_and_folded_compilers_agree() {
    for name in ["parity", "all_zeros", "equal_halves"] {
        let m = builtin(name).unwrap();
        for n in 0..=4 {
            let spec = CompileSpec {
                machine: &m,
                interface: (0..n).map(InputCell::Exposed).collect(),
                time_bound: n * n + 4 * n + 4,
            };
            let raw = compile(&spec).unwrap();
            let folded = compile_folded(&spec).unwrap();
            assert!(folded.gate_count() <= raw.gate_count());
            assert_eq!(truth_table(&raw), truth_table(&folded), "{name} n={n}");
        }
    }
}

#[test]
fn raw_size_grows_with_the_time_bound() {
    let m = builtin("parity").unwrap();
    let size = |t| {
        let spec = CompileSpec {
            machine: &m,
            interface: (0..3).map(InputCell::Exposed).collect(),
            time_bound: t,
        };
        compile(&spec).unwrap().gate_count()
    };
    let sizes: Vec<usize> = (3..12).map(size).collect();
    assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
}

#[test]
fn compile_rejects_interface_longer_than_time() {
    let m = builtin("parity").unwrap();
    let spec = CompileSpec {
        machine: &m,
        interface: (0..5).map(InputCell::Exposed).collect(),
        time_bound: 3,
    };
    assert!(compile_folded(&spec).is_err());
}
