use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use forge_core::compiler::{compile, compile_folded, CompileSpec, InputCell};
use forge_core::dtiwi::{decide_bruteforce, decide_via_circuits};
use forge_core::encoders::{clique_gadget_circuit, encode_clique};
use forge_core::fixtures;
use forge_core::tm::builtin;
use forge_core::{solve, Discipline, SolveOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn solver(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("solve");
    for k in [12usize, 16, 20] {
        // an unsatisfiable circuit forces full enumeration
        let base = fixtures::random_circuit(&mut rng, k, 200);
        let nodes = base.nodes().len() as u32;
        let mut all = base.nodes().to_vec();
        all.push(forge_core::Node::Not(nodes - 1));
        all.push(forge_core::Node::And(nodes - 1, nodes));
        let c_unsat = forge_core::Circuit::new(all, k).unwrap();
        for jobs in [1usize, 4] {
            let opts = SolveOptions {
                jobs,
                discipline: Discipline::Lenient,
            };
            group.bench_with_input(
                BenchmarkId::new(format!("k{k}"), jobs),
                &c_unsat,
                |b, circ| b.iter(|| solve(circ, opts).unwrap()),
            );
        }
    }
    group.finish();
}

fn compiler(c: &mut Criterion) {
    let m = builtin("parity").unwrap();
    let mut group = c.benchmark_group("compile");
    for n in [8usize, 16, 32] {
        let spec = CompileSpec {
            machine: &m,
            interface: (0..n).map(InputCell::Exposed).collect(),
            time_bound: n + 1,
        };
        group.bench_with_input(BenchmarkId::new("raw", n), &spec, |b, s| {
            b.iter(|| compile(s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("folded", n), &spec, |b, s| {
            b.iter(|| compile_folded(s).unwrap())
        });
    }
    group.finish();
}

fn evaluate(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let circ = fixtures::random_circuit(&mut rng, 16, 2000);
    let words: Vec<u64> = (0..16)
        .map(|i| 0x9E37_79B9_7F4A_7C15u64.rotate_left(i))
        .collect();
    let mut ev = circ.word_evaluator();
    c.bench_function("evaluate/64-lanes", |b| b.iter(|| ev.eval(&words)));
    let bits = vec![true; 16];
    c.bench_function("evaluate/single", |b| b.iter(|| circ.eval_bits(&bits)));
}

fn decide(c: &mut Criterion) {
    let (inst, _) = fixtures::instances().remove(0);
    let x = "01p0p1p10pp1".parse().unwrap();
    let mut group = c.benchmark_group("decide");
    group.bench_function("bruteforce", |b| {
        b.iter(|| decide_bruteforce(&inst, &x).unwrap())
    });
    group.bench_function("circuits", |b| {
        b.iter(|| decide_via_circuits(&inst, &x, None, 1).unwrap())
    });
    group.finish();

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = fixtures::random_graph(&mut rng, 12, 0.4);
    let (x, inst) = encode_clique(&g, 3).unwrap();
    let mut group = c.benchmark_group("clique-v12-k3");
    group.sample_size(10);
    group.bench_function("pipeline", |b| {
        b.iter(|| decide_via_circuits(&inst, &x, None, 1).unwrap())
    });
    group.bench_function("gadget", |b| {
        b.iter(|| {
            let circ = clique_gadget_circuit(&g, 3).unwrap();
            solve(
                &circ,
                SolveOptions {
                    jobs: 1,
                    discipline: Discipline::Lenient,
                },
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, solver, compiler, evaluate, decide);
criterion_main!(benches);
