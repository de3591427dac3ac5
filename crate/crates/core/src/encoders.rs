//! Encodings of SAT, CircuitSAT and k-Clique as limited-witness instances.
//!
//! Every encoding puts the placeholders first and the problem description
//! after them. The verifiers are finite-control machines generated per
//! encoding: they scan left to right, keep what they have read in their
//! state, and halt as soon as the answer is determined.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::circuit::{ceil_log2, Circuit, GateBuilder, Sig};
use crate::cnf::Cnf;
use crate::dtiwi::{BoundExpr, DtiwiInstance, UniverseTemplate};
use crate::pstring::{PString, Sym};
use crate::tm::{Dir, TmBuilder, TmSpec, BLANK};

/// Largest vertex count the generated clique verifier supports.
pub const MAX_CLIQUE_VERTICES: usize = 64;
/// Largest input count the generated CircuitSAT verifier supports.
pub const MAX_CIRCUIT_INPUTS: usize = 16;
/// Largest variable count the generated CNF verifier supports.
pub const MAX_CNF_VARS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("k = {k} out of range for {v} vertices")]
    KOutOfRange { k: usize, v: usize },
    #[error("formula has no variables")]
    NoVariables,
    #[error("{0}")]
    TooLarge(String),
    #[error("witness bound {bound} is below the {needed} placeholders")]
    WitnessBoundTooSmall { bound: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {v} vertices")]
    VertexOutOfRange { vertex: usize, v: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueGraph {
    v: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CliqueGraph {
    /// Edges are unordered; each is stored once with the smaller end first.
    pub fn new<I>(v: usize, edges: I) -> Result<CliqueGraph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= v {
                    return Err(GraphError::VertexOutOfRange { vertex: x, v });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(CliqueGraph { v, edges: set })
    }

    pub fn num_vertices(&self) -> usize {
        self.v
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().all(|&a| a < self.v)
            && vs
                .iter()
                .enumerate()
                .all(|(i, &a)| vs[i + 1..].iter().all(|&b| a != b && self.adjacent(a, b)))
    }

    /// DIMACS graph format: `p edge <v> <e>` then `e <u> <w>` lines with
    /// 1-based vertices; `c` lines are comments.
    pub fn parse_dimacs(src: &str) -> Result<CliqueGraph, GraphError> {
        let mut header = None;
        let mut edges = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| GraphError::Parse { line: line_no, msg };
            let words: Vec<&str> = raw.split_whitespace().collect();
            let num = |w: &str| {
                w.parse::<usize>()
                    .map_err(|_| err(format!("bad number {w:?}")))
            };
            match words.as_slice() {
                [] => {}
                ["c", ..] => {}
                ["p", "edge" | "col", v, e] => header = Some((num(v)?, num(e)?)),
                ["e", a, b] => {
                    let (a, b) = (num(a)?, num(b)?);
                    if a == 0 || b == 0 {
                        return Err(err("vertices are 1-based".into()));
                    }
                    if header.is_none() {
                        return Err(err("edge before problem line".into()));
                    }
                    edges.push((a - 1, b - 1));
                }
                _ => return Err(err(format!("unrecognized line {raw:?}"))),
            }
        }
        let (v, e) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `p edge` line".into(),
        })?;
        if edges.len() != e {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {e} edges, found {}", edges.len()),
            });
        }
        CliqueGraph::new(v, edges)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.v, self.edges.len());
        for (a, b) in &self.edges {
            out += &format!("e {} {}\n", a + 1, b + 1);
        }
        out
    }
}

/// Five vertices, a triangle `{0, 1, 2}` and a tail `2-3-4`.
pub fn fixture_graph() -> CliqueGraph {
    CliqueGraph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap()
}

/// Bits per vertex id.
pub fn vertex_bits(v: usize) -> usize {
    ceil_log2(v as u64) as usize
}

fn push_bits(out: &mut Vec<Sym>, value: usize, width: usize) {
    for i in (0..width).rev() {
        out.push(Sym::from_bit((value >> i) & 1 == 1));
    }
}

enum Step<K> {
    Next(K),
    Accept,
    Reject,
}

/// Builds a machine that moves right on every step, with the states
/// reachable from `start` under `step`.
fn scanning_machine<K, F>(start: K, name: impl Fn(&K) -> String, step: F) -> TmSpec
where
    K: Clone + Eq + Hash,
    F: Fn(&K, char) -> Step<K>,
{
    let alphabet = ['0', '1', 'p', BLANK];
    let mut b = TmBuilder::new(&alphabet);
    let qa = b.state("accept");
    let qr = b.state("reject");
    b.accept(qa).reject(qr);
    let mut ids: HashMap<K, usize> = HashMap::new();
    let q0 = b.state(&name(&start));
    b.start(q0);
    ids.insert(start.clone(), q0);
    let mut queue = VecDeque::from([start]);
    while let Some(key) = queue.pop_front() {
        let q = ids[&key];
        for c in alphabet {
            let (next, dir) = match step(&key, c) {
                Step::Accept => (qa, Dir::S),
                Step::Reject => (qr, Dir::S),
                Step::Next(k) => {
                    let id = match ids.get(&k) {
                        Some(&id) => id,
                        None => {
                            let id = b.state(&name(&k));
                            ids.insert(k.clone(), id);
                            queue.push_back(k);
                            id
                        }
                    };
                    (id, Dir::R)
                }
            };
            b.rule(q, c, next, c, dir);
        }
    }
    b.build().expect("generated machine is well formed")
}

/// Verifier for `k`-cliques of `g`: reads `k` vertex ids of
/// `⌈log₂ v⌉` bits each and accepts iff they are in range, distinct and
/// pairwise adjacent. Anything other than `0`/`1` in the witness rejects.
pub fn clique_machine(g: &CliqueGraph, k: usize) -> Result<TmSpec, EncodeError> {
    let v = g.num_vertices();
    if k == 0 || k > v {
        return Err(EncodeError::KOutOfRange { k, v });
    }
    if v > MAX_CLIQUE_VERTICES {
        return Err(EncodeError::TooLarge(format!(
            "clique verifier supports at most {MAX_CLIQUE_VERTICES} vertices"
        )));
    }
    let b = vertex_bits(v);
    // (chosen vertices, partial id, bits read of the partial id)
    let start = (0u64, 0usize, 0usize);
    Ok(scanning_machine(
        start,
        |&(set, val, len)| format!("s{set:x}_{val}_{len}"),
        |&(set, val, len), c| {
            if b == 0 {
                // a single vertex: the empty witness names it
                return Step::Accept;
            }
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Step::Reject,
            };
            let val = val * 2 + bit;
            if len + 1 < b {
                return Step::Next((set, val, len + 1));
            }
            let ok = val < v
                && set & (1 << val) == 0
                && (0..v).all(|u| set & (1 << u) == 0 || g.adjacent(u, val));
            if !ok {
                return Step::Reject;
            }
            let set = set | (1 << val);
            if set.count_ones() as usize == k {
                Step::Accept
            } else {
                Step::Next((set, 0, 0))
            }
        },
    ))
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum CnfState {
    /// Reading the assignment.
    Assign {
        a: u32,
        len: usize,
    },
    /// Between clauses.
    Between {
        a: u32,
    },
    /// Inside a clause, after at least one literal.
    Clause {
        a: u32,
        sat: bool,
    },
    Sign {
        a: u32,
        sat: bool,
    },
    Index {
        a: u32,
        sat: bool,
        neg: bool,
        val: usize,
        len: usize,
    },
}

/// Verifier for [`encode_sat`] strings over `v` variables: `v` assignment
/// bits, then clauses. A literal is `1`, a sign bit (`1` = negated) and a
/// `⌈log₂ v⌉`-bit variable index; `0` closes a clause and the blank ends the
/// formula.
pub fn cnf_machine(v: usize) -> TmSpec {
    assert!(
        (1..=MAX_CNF_VARS).contains(&v),
        "cnf_machine supports 1..={MAX_CNF_VARS} variables"
    );
    let b = vertex_bits(v);
    let literal = move |a: u32, sat: bool, neg: bool, idx: usize| {
        if idx >= v {
            return Step::Reject;
        }
        let holds = ((a >> idx) & 1 == 1) != neg;
        Step::Next(CnfState::Clause {
            a,
            sat: sat || holds,
        })
    };
    scanning_machine(
        CnfState::Assign { a: 0, len: 0 },
        |s| match s {
            CnfState::Assign { a, len } => format!("a{a}_{len}"),
            CnfState::Between { a } => format!("b{a}"),
            CnfState::Clause { a, sat } => format!("c{a}_{}", u8::from(*sat)),
            CnfState::Sign { a, sat } => format!("s{a}_{}", u8::from(*sat)),
            CnfState::Index {
                a,
                sat,
                neg,
                val,
                len,
            } => format!("i{a}_{}_{}_{val}_{len}", u8::from(*sat), u8::from(*neg)),
        },
        |s, c| {
            let bit = match c {
                '0' => false,
                '1' => true,
                BLANK => {
                    return if matches!(s, CnfState::Between { .. }) {
                        Step::Accept
                    } else {
                        Step::Reject
                    }
                }
                _ => return Step::Reject,
            };
            match *s {
                CnfState::Assign { a, len } => {
                    let a = a | (u32::from(bit) << len);
                    if len + 1 == v {
                        Step::Next(CnfState::Between { a })
                    } else {
                        Step::Next(CnfState::Assign { a, len: len + 1 })
                    }
                }
                CnfState::Between { a } => {
                    if bit {
                        Step::Next(CnfState::Sign { a, sat: false })
                    } else {
                        Step::Reject
                    }
                }
                CnfState::Clause { a, sat } => match (bit, sat) {
                    (true, _) => Step::Next(CnfState::Sign { a, sat }),
                    (false, true) => Step::Next(CnfState::Between { a }),
                    (false, false) => Step::Reject,
                },
                CnfState::Sign { a, sat } => {
                    if b == 0 {
                        literal(a, sat, bit, 0)
                    } else {
                        Step::Next(CnfState::Index {
                            a,
                            sat,
                            neg: bit,
                            val: 0,
                            len: 0,
                        })
                    }
                }
                CnfState::Index {
                    a,
                    sat,
                    neg,
                    val,
                    len,
                } => {
                    let val = val * 2 + usize::from(bit);
                    if len + 1 == b {
                        literal(a, sat, neg, val)
                    } else {
                        Step::Next(CnfState::Index {
                            a,
                            sat,
                            neg,
                            val,
                            len: len + 1,
                        })
                    }
                }
            }
        },
    )
}

/// Verifier for [`encode_circuit_sat`] strings: reads one bit per circuit
/// input and accepts iff the circuit evaluates to 1 on them.
pub fn circuit_machine(c: &Circuit) -> Result<TmSpec, EncodeError> {
    let k = c.num_inputs();
    if k > MAX_CIRCUIT_INPUTS {
        return Err(EncodeError::TooLarge(format!(
            "circuit verifier supports at most {MAX_CIRCUIT_INPUTS} inputs"
        )));
    }
    let verdict = |bits: &[bool]| {
        if c.eval_bits(bits) {
            Step::Accept
        } else {
            Step::Reject
        }
    };
    Ok(scanning_machine(
        Vec::<bool>::new(),
        |bits| {
            let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            format!("r{s}")
        },
        |bits, ch| {
            if k == 0 {
                return verdict(&[]);
            }
            let bit = match ch {
                '0' => false,
                '1' => true,
                _ => return Step::Reject,
            };
            let mut next = bits.clone();
            next.push(bit);
            if next.len() == k {
                verdict(&next)
            } else {
                Step::Next(next)
            }
        },
    ))
}

fn literal_instance(
    name: String,
    x: &PString,
    verifier: TmSpec,
    witness: &str,
    time: &str,
) -> DtiwiInstance {
    DtiwiInstance::direct(
        name,
        UniverseTemplate::literal(x),
        Arc::new(verifier),
        BoundExpr::parse(witness).unwrap(),
        BoundExpr::parse(time).unwrap(),
    )
}

/// `p^v` followed by the clauses in the [`cnf_machine`] layout.
pub fn encode_sat(f: &Cnf) -> Result<(PString, DtiwiInstance), EncodeError> {
    let v = f.num_vars();
    if v == 0 {
        return Err(EncodeError::NoVariables);
    }
    if v > MAX_CNF_VARS {
        return Err(EncodeError::TooLarge(format!(
            "CNF verifier supports at most {MAX_CNF_VARS} variables"
        )));
    }
    let b = vertex_bits(v);
    let mut chars = vec![Sym::P; v];
    for clause in f.clauses() {
        for lit in clause {
            chars.push(Sym::One);
            chars.push(Sym::from_bit(lit.negated));
            push_bits(&mut chars, lit.var, b);
        }
        chars.push(Sym::Zero);
    }
    let x = PString::new(chars);
    let inst = literal_instance(format!("sat-v{v}"), &x, cnf_machine(v), "n", "n + 1");
    Ok((x, inst))
}

/// One placeholder per circuit input, then the binary serialization.
pub fn encode_circuit_sat(c: &Circuit) -> Result<(PString, DtiwiInstance), EncodeError> {
    let mut chars = vec![Sym::P; c.num_inputs()];
    for byte in c.serialize() {
        push_bits(&mut chars, byte as usize, 8);
    }
    let x = PString::new(chars);
    let inst = literal_instance(
        "circuit-sat".into(),
        &x,
        circuit_machine(c)?,
        "ceildiv(n, log2ceil(n))",
        "n",
    );
    let bound = inst.witness_bound(&x).expect("n is large enough to divide");
    if bound < c.num_inputs() {
        return Err(EncodeError::WitnessBoundTooSmall {
            bound,
            needed: c.num_inputs(),
        });
    }
    Ok((x, inst))
}

/// Graph description after the witness block: each vertex as `1` plus its
/// id, `0`, each edge as `1` plus both ids (smaller first), `0`.
pub fn graph_bits(g: &CliqueGraph) -> Vec<Sym> {
    let b = vertex_bits(g.num_vertices());
    let mut out = Vec::new();
    for u in 0..g.num_vertices() {
        out.push(Sym::One);
        push_bits(&mut out, u, b);
    }
    out.push(Sym::Zero);
    for (u, w) in g.edges() {
        out.push(Sym::One);
        push_bits(&mut out, u, b);
        push_bits(&mut out, w, b);
    }
    out.push(Sym::Zero);
    out
}

/// Length constants: for `v ≥ 2` the encoding length lies in
/// `[C1·(v+e)·⌈log₂ v⌉, C2·(v+e)·⌈log₂ v⌉]`.
pub const CLIQUE_LEN_C1: usize = 1;
pub const CLIQUE_LEN_C2: usize = 5;

/// Exact encoding length: `k·b + v·(b+1) + e·(2b+1) + 2` with `b = ⌈log₂ v⌉`.
pub fn clique_encoding_len(v: usize, e: usize, k: usize) -> usize {
    let b = vertex_bits(v);
    k * b + v * (b + 1) + e * (2 * b + 1) + 2
}

/// `p^{k·⌈log₂ v⌉}` followed by [`graph_bits`].
pub fn encode_clique(g: &CliqueGraph, k: usize) -> Result<(PString, DtiwiInstance), EncodeError> {
    let machine = clique_machine(g, k)?;
    let b = vertex_bits(g.num_vertices());
    let mut chars = vec![Sym::P; k * b];
    chars.extend(graph_bits(g));
    let x = PString::new(chars);
    let inst = literal_instance(
        format!("clique-k{k}"),
        &x,
        machine,
        &format!("{k}*log2ceil(n)"),
        "n",
    );
    Ok((x, inst))
}

/// Vertex ids from a witness of `k` blocks of `⌈log₂ v⌉` bits.
pub fn decode_vertices(bits: &[bool], v: usize, k: usize) -> Vec<usize> {
    let b = vertex_bits(v);
    (0..k)
        .map(|i| {
            bits[i * b..(i + 1) * b]
                .iter()
                .fold(0, |acc, &bit| acc * 2 + usize::from(bit))
        })
        .collect()
}

fn equals_const(cb: &mut GateBuilder, bits: &[Sig], value: usize) -> Sig {
    let w = bits.len();
    let mut acc = cb.constant(true);
    for (i, &x) in bits.iter().enumerate() {
        let lit = if (value >> (w - 1 - i)) & 1 == 1 {
            x
        } else {
            cb.not(x)
        };
        acc = cb.and(acc, lit);
    }
    acc
}

fn less_than_const(cb: &mut GateBuilder, bits: &[Sig], bound: usize) -> Sig {
    let w = bits.len();
    if bound >= 1 << w {
        return cb.constant(true);
    }
    // x < bound iff at the first position where they differ, x has 0 and
    // bound has 1
    let mut prefix_eq = cb.constant(true);
    let mut terms = Vec::new();
    for (i, &x) in bits.iter().enumerate() {
        let bound_bit = (bound >> (w - 1 - i)) & 1 == 1;
        let nx = cb.not(x);
        if bound_bit {
            terms.push(cb.and(prefix_eq, nx));
            prefix_eq = cb.and(prefix_eq, x);
        } else {
            prefix_eq = cb.and(prefix_eq, nx);
        }
    }
    cb.or_all(terms)
}

fn equal_words(cb: &mut GateBuilder, a: &[Sig], b: &[Sig]) -> Sig {
    let mut acc = cb.constant(true);
    for (&x, &y) in a.iter().zip(b) {
        let both = cb.and(x, y);
        let nx = cb.not(x);
        let ny = cb.not(y);
        let neither = cb.and(nx, ny);
        let same = cb.or(both, neither);
        acc = cb.and(acc, same);
    }
    acc
}

/// Direct circuit over `k·⌈log₂ v⌉` inputs, satisfied exactly by witnesses
/// naming `k` distinct, in-range, pairwise adjacent vertices.
pub fn clique_gadget_circuit(g: &CliqueGraph, k: usize) -> Result<Circuit, EncodeError> {
    let v = g.num_vertices();
    if k == 0 || k > v {
        return Err(EncodeError::KOutOfRange { k, v });
    }
    let b = vertex_bits(v);
    let mut cb = GateBuilder::new(k * b, true);
    let slots: Vec<Vec<Sig>> = (0..k)
        .map(|i| (0..b).map(|j| cb.input(i * b + j)).collect())
        .collect();
    let mut checks = Vec::new();
    for s in &slots {
        checks.push(less_than_const(&mut cb, s, v));
    }
    for i in 0..k {
        for j in i + 1..k {
            let same = equal_words(&mut cb, &slots[i], &slots[j]);
            checks.push(cb.not(same));
            let mut options = Vec::new();
            for (u, w) in g.edges() {
                for (x, y) in [(u, w), (w, u)] {
                    let a = equals_const(&mut cb, &slots[i], x);
                    let bb = equals_const(&mut cb, &slots[j], y);
                    options.push(cb.and(a, bb));
                }
            }
            checks.push(cb.or_all(options));
        }
    }
    let mut out = cb.constant(true);
    for c in checks {
        out = cb.and(out, c);
    }
    Ok(cb.finish(out))
}

/// The lexicographically first `k`-clique, by enumerating `k`-subsets.
pub fn clique_by_subsets(g: &CliqueGraph, k: usize) -> Option<Vec<usize>> {
    fn rec(g: &CliqueGraph, k: usize, from: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == k {
            return true;
        }
        for u in from..g.num_vertices() {
            if cur.iter().all(|&w| g.adjacent(u, w)) {
                cur.push(u);
                if rec(g, k, u + 1, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::new();
    rec(g, k, 0, &mut cur).then_some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Lit;
    use crate::dtiwi::decide_bruteforce;
    use crate::pstring::BitString;

    fn triangle() -> CliqueGraph {
        CliqueGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn graph_parsing() {
        let g = CliqueGraph::parse_dimacs("c tri\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g, triangle());
        assert_eq!(CliqueGraph::parse_dimacs(&g.to_dimacs()).unwrap(), g);
        assert!(matches!(
            CliqueGraph::parse_dimacs("p edge 2 1\ne 1 1\n"),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            CliqueGraph::parse_dimacs("p edge 2 1\ne 1 3\n"),
            Err(GraphError::VertexOutOfRange { vertex: 2, v: 2 })
        ));
        assert!(matches!(
            CliqueGraph::parse_dimacs("p edge 2 2\ne 1 2\n"),
            Err(GraphError::Parse { .. })
        ));
    }

    #[test]
    fn clique_examples() {
        let (x, inst) = encode_clique(&triangle(), 3).unwrap();
        assert_eq!(x.pcount(), 6);
        assert_eq!(x.len(), clique_encoding_len(3, 3, 3));
        assert!(decide_bruteforce(&inst, &x).unwrap().member);

        let path = CliqueGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let (x, inst) = encode_clique(&path, 3).unwrap();
        assert!(!decide_bruteforce(&inst, &x).unwrap().member);

        assert_eq!(
            encode_clique(&path, 4).unwrap_err(),
            EncodeError::KOutOfRange { k: 4, v: 3 }
        );
        let single = CliqueGraph::new(1, []).unwrap();
        let (x, inst) = encode_clique(&single, 1).unwrap();
        assert_eq!(x.pcount(), 0);
        assert!(decide_bruteforce(&inst, &x).unwrap().member);
    }

    #[test]
    fn clique_machine_on_witnesses() {
        let g = fixture_graph();
        let m = clique_machine(&g, 3).unwrap();
        for a in 0..(1u64 << 9) {
            let bits = BitString::from_index(a, 9);
            let vs = decode_vertices(bits.bits(), 5, 3);
            let run = m.run_str(&bits.to_string(), 20).unwrap();
            assert_eq!(run.accepted(), g.is_clique(&vs), "{vs:?}");
        }
        assert!(!m.run_str("000001p10", 20).unwrap().accepted());
    }

    #[test]
    fn gadget_examples() {
        let c = clique_gadget_circuit(&triangle(), 3).unwrap();
        assert_eq!(c.num_inputs(), 6);
        let mut found = 0;
        for a in 0..64u64 {
            let bits = BitString::from_index(a, 6);
            let vs = decode_vertices(bits.bits(), 3, 3);
            let sat = c.evaluate(&bits).unwrap();
            assert_eq!(sat, triangle().is_clique(&vs));
            found += usize::from(sat);
        }
        assert_eq!(found, 6);
        let empty = CliqueGraph::new(4, []).unwrap();
        let c = clique_gadget_circuit(&empty, 2).unwrap();
        assert!((0..16).all(|a| !c.evaluate(&BitString::from_index(a, 4)).unwrap()));
    }

    #[test]
    fn sat_examples() {
        let f = Cnf::new(2, vec![vec![Lit::pos(0), Lit::pos(1)]]).unwrap();
        let (x, inst) = encode_sat(&f).unwrap();
        assert_eq!(x.pcount(), 2);
        let r = decide_bruteforce(&inst, &x).unwrap();
        assert!(r.member);
        let filling = BitString::parse(r.filling.as_deref().unwrap()).unwrap();
        assert_eq!(filling.len(), 2);
        assert!(f.eval(filling.bits()));

        let f = Cnf::new(1, vec![vec![Lit::pos(0)], vec![Lit::neg(0)]]).unwrap();
        let (x, inst) = encode_sat(&f).unwrap();
        assert!(!decide_bruteforce(&inst, &x).unwrap().member);
        assert_eq!(
            encode_sat(&Cnf::new(0, vec![]).unwrap()).unwrap_err(),
            EncodeError::NoVariables
        );
    }

    #[test]
    fn cnf_machine_rejects_malformed() {
        let m = cnf_machine(3);
        // assignment 101, clause (x0) -> 1 0 00, terminator 0
        assert!(m
            .run_str("1011000 0".replace(' ', "").as_str(), 50)
            .unwrap()
            .accepted());
        // unterminated clause
        assert!(!m.run_str("101100", 50).unwrap().accepted());
        // index 3 out of range for v = 3
        assert!(!m.run_str("10110110", 50).unwrap().accepted());
        // empty clause
        assert!(!m.run_str("1010", 50).unwrap().accepted());
        // no clauses
        assert!(m.run_str("000", 50).unwrap().accepted());
    }

    #[test]
    fn circuit_sat_examples() {
        let (x, inst) = encode_circuit_sat(&Circuit::constant(true)).unwrap();
        assert_eq!(x.pcount(), 0);
        assert!(decide_bruteforce(&inst, &x).unwrap().member);
        let contradiction = Cnf::new(1, vec![vec![Lit::pos(0)], vec![Lit::neg(0)]]).unwrap();
        let (x, inst) =
            encode_circuit_sat(&crate::circuit::cnf_to_circuit(&contradiction)).unwrap();
        assert_eq!(x.pcount(), 1);
        assert!(!decide_bruteforce(&inst, &x).unwrap().member);
    }

    #[test]
    fn subsets_oracle() {
        assert_eq!(clique_by_subsets(&fixture_graph(), 3), Some(vec![0, 1, 2]));
        assert_eq!(clique_by_subsets(&fixture_graph(), 4), None);
        assert_eq!(clique_by_subsets(&fixture_graph(), 1), Some(vec![0]));
    }
}
