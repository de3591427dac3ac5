//! Bounded fan-in Boolean circuits.
//!
//! Nodes are stored in topological order with strictly backward operand
//! references. The last node is the output. Every non-`Input` node, `Const`
//! included, counts as a gate.

mod bitslice;
mod builder;
mod codec;
mod text;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cnf::Cnf;
use crate::pstring::BitString;

pub use bitslice::WordEvaluator;
pub use builder::{GateBuilder, Sig};
pub use codec::{ceil_log2, encoded_bits, encoded_len};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Input(u32),
    Const(bool),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
}

impl Node {
    pub fn operands(&self) -> impl Iterator<Item = u32> {
        let (a, b) = match *self {
            Node::Input(_) | Node::Const(_) => (None, None),
            Node::Not(a) => (Some(a), None),
            Node::And(a, b) | Node::Or(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }

    pub fn is_gate(&self) -> bool {
        !matches!(self, Node::Input(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit has no nodes")]
    Empty,
    #[error("node {node} references later node {operand}")]
    ForwardReference { node: usize, operand: usize },
    #[error("node {node} references missing node {operand}")]
    DanglingReference { node: usize, operand: usize },
    #[error("input index {0} out of range")]
    BadInputIndex(usize),
    #[error("input {0} appears more than once")]
    DuplicateInput(usize),
    #[error("assignment has {got} bits, circuit has {expected} inputs")]
    AssignmentLengthMismatch { expected: usize, got: usize },
    #[error("malformed encoding: {0}")]
    MalformedHeader(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    nodes: Vec<Node>,
    inputs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Stats {
    /// Gate count: every node except `Input`.
    pub m: usize,
    pub inputs: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(nodes: Vec<Node>, inputs: usize) -> Result<Circuit, CircuitError> {
        if nodes.is_empty() {
            return Err(CircuitError::Empty);
        }
        let mut seen = vec![false; inputs];
        for (i, node) in nodes.iter().enumerate() {
            for op in node.operands() {
                let op = op as usize;
                if op >= nodes.len() {
                    return Err(CircuitError::DanglingReference {
                        node: i,
                        operand: op,
                    });
                }
                if op >= i {
                    return Err(CircuitError::ForwardReference {
                        node: i,
                        operand: op,
                    });
                }
            }
            if let Node::Input(idx) = *node {
                let idx = idx as usize;
                if idx >= inputs {
                    return Err(CircuitError::BadInputIndex(idx));
                }
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(CircuitError::DuplicateInput(idx));
                }
            }
        }
        Ok(Circuit { nodes, inputs })
    }

    pub fn constant(value: bool) -> Circuit {
        Circuit {
            nodes: vec![Node::Const(value)],
            inputs: 0,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs
    }

    pub fn output(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn gate_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_gate()).count()
    }

    pub fn stats(&self) -> Stats {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            depth[i] = match *node {
                Node::Input(_) | Node::Const(_) => 0,
                _ => {
                    1 + node
                        .operands()
                        .map(|o| depth[o as usize])
                        .max()
                        .unwrap_or(0)
                }
            };
        }
        Stats {
            m: self.gate_count(),
            inputs: self.inputs,
            depth: depth[self.output()],
        }
    }

    pub fn evaluate(&self, assignment: &BitString) -> Result<bool, CircuitError> {
        if assignment.len() != self.inputs {
            return Err(CircuitError::AssignmentLengthMismatch {
                expected: self.inputs,
                got: assignment.len(),
            });
        }
        Ok(self.eval_bits(assignment.bits()))
    }

    /// Evaluates with `bits[i]` as input `i`; the caller guarantees the length.
    pub fn eval_bits(&self, bits: &[bool]) -> bool {
        let mut val: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Input(i) => bits[i as usize],
                Node::Const(c) => c,
                Node::Not(a) => !val[a as usize],
                Node::And(a, b) => val[a as usize] && val[b as usize],
                Node::Or(a, b) => val[a as usize] || val[b as usize],
            };
            val.push(v);
        }
        val[self.output()]
    }

    /// Fixes the inputs in `partial`, renumbers the rest densely in their
    /// original order, folds constants and drops nodes the output no longer
    /// depends on.
    pub fn specialize(&self, partial: &BTreeMap<usize, bool>) -> Result<Circuit, CircuitError> {
        if let Some((&bad, _)) = partial.range(self.inputs..).next() {
            return Err(CircuitError::BadInputIndex(bad));
        }
        let mut renumber = vec![None; self.inputs];
        let mut next = 0u32;
        for (i, slot) in renumber.iter_mut().enumerate() {
            if !partial.contains_key(&i) {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut b = GateBuilder::new(next as usize, true);
        let mut map: Vec<Sig> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let s = match *node {
                Node::Input(i) => match partial.get(&(i as usize)) {
                    Some(&v) => b.constant(v),
                    None => b.input(renumber[i as usize].unwrap() as usize),
                },
                Node::Const(c) => b.constant(c),
                Node::Not(a) => b.not(map[a as usize]),
                Node::And(x, y) => b.and(map[x as usize], map[y as usize]),
                Node::Or(x, y) => b.or(map[x as usize], map[y as usize]),
            };
            map.push(s);
        }
        Ok(b.finish(map[self.output()]))
    }

    /// Drops nodes unreachable from the output.
    pub fn prune(&self) -> Circuit {
        let out = self.output();
        let mut live = vec![false; self.nodes.len()];
        live[out] = true;
        for i in (0..=out).rev() {
            if live[i] {
                for op in self.nodes[i].operands() {
                    live[op as usize] = true;
                }
            }
        }
        let mut remap = vec![u32::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let r = |x: u32| remap[x as usize];
            let n = match *node {
                Node::Not(a) => Node::Not(r(a)),
                Node::And(a, b) => Node::And(r(a), r(b)),
                Node::Or(a, b) => Node::Or(r(a), r(b)),
                other => other,
            };
            remap[i] = nodes.len() as u32;
            nodes.push(n);
        }
        Circuit {
            nodes,
            inputs: self.inputs,
        }
    }

    pub fn serialize(&self) -> Vec<u8> {
        codec::serialize(self)
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Circuit, CircuitError> {
        codec::deserialize(bytes)
    }

    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn parse_text(src: &str) -> Result<Circuit, CircuitError> {
        text::parse(src)
    }

    pub fn word_evaluator(&self) -> WordEvaluator {
        WordEvaluator::new(self)
    }
}

/// Each clause becomes an OR chain over its literals (negated literals
/// through one shared NOT per variable) and the clauses are joined by an
/// AND chain. An empty clause is `CONST(0)`; a formula without clauses is
/// `CONST(1)`.
pub fn cnf_to_circuit(formula: &Cnf) -> Circuit {
    let mut b = GateBuilder::new(formula.num_vars(), false);
    let mut pos: Vec<Option<Sig>> = vec![None; formula.num_vars()];
    let mut neg: Vec<Option<Sig>> = vec![None; formula.num_vars()];
    let mut acc: Option<Sig> = None;
    for clause in formula.clauses() {
        let mut c: Option<Sig> = None;
        for lit in clause {
            let x = *pos[lit.var].get_or_insert_with(|| b.input(lit.var));
            let l = if lit.negated {
                *neg[lit.var].get_or_insert_with(|| b.not(x))
            } else {
                x
            };
            c = Some(match c {
                None => l,
                Some(prev) => b.or(prev, l),
            });
        }
        let c = c.unwrap_or_else(|| b.constant(false));
        acc = Some(match acc {
            None => c,
            Some(prev) => b.and(prev, c),
        });
    }
    let out = acc.unwrap_or_else(|| b.constant(true));
    b.finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Lit;

    fn and2() -> Circuit {
        Circuit::new(vec![Node::Input(0), Node::Input(1), Node::And(0, 1)], 2).unwrap()
    }

    pub(crate) fn majority3() -> Circuit {
        // (a&b) | (a&c) | (b&c)
        Circuit::new(
            vec![
                Node::Input(0),
                Node::Input(1),
                Node::Input(2),
                Node::And(0, 1),
                Node::And(0, 2),
                Node::And(1, 2),
                Node::Or(3, 4),
                Node::Or(6, 5),
            ],
            3,
        )
        .unwrap()
    }

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert!(and2().evaluate(&bits("11")).unwrap());
        assert!(!and2().evaluate(&bits("10")).unwrap());
        assert!(Circuit::constant(true).evaluate(&bits("")).unwrap());
        assert_eq!(
            and2().evaluate(&bits("1")),
            Err(CircuitError::AssignmentLengthMismatch {
                expected: 2,
                got: 1
            })
        );
        let maj = majority3();
        for a in 0..8u64 {
            let r = BitString::from_index(a, 3);
            let ones = r.bits().iter().filter(|b| **b).count();
            assert_eq!(maj.evaluate(&r).unwrap(), ones >= 2);
        }
    }

    #[test]
    fn validation() {
        assert_eq!(Circuit::new(vec![], 0), Err(CircuitError::Empty));
        assert_eq!(
            Circuit::new(vec![Node::Not(0)], 0),
            Err(CircuitError::ForwardReference {
                node: 0,
                operand: 0
            })
        );
        assert_eq!(
            Circuit::new(vec![Node::Input(0), Node::Not(4)], 1),
            Err(CircuitError::DanglingReference {
                node: 1,
                operand: 4
            })
        );
        assert_eq!(
            Circuit::new(vec![Node::Input(1)], 1),
            Err(CircuitError::BadInputIndex(1))
        );
        assert_eq!(
            Circuit::new(vec![Node::Input(0), Node::Input(0), Node::And(0, 1)], 1),
            Err(CircuitError::DuplicateInput(0))
        );
    }

    #[test]
    fn stats_examples() {
        assert_eq!(
            and2().stats(),
            Stats {
                m: 1,
                inputs: 2,
                depth: 1
            }
        );
        assert_eq!(
            Circuit::constant(false).stats(),
            Stats {
                m: 1,
                inputs: 0,
                depth: 0
            }
        );
        // three ANDs and two ORs; longest path AND -> OR -> OR
        assert_eq!(
            majority3().stats(),
            Stats {
                m: 5,
                inputs: 3,
                depth: 3
            }
        );
    }

    #[test]
    fn specialize_examples() {
        let c = and2().specialize(&BTreeMap::from([(0, false)])).unwrap();
        // input 1 stays declared even though nothing reads it
        assert_eq!(c.nodes(), &[Node::Const(false)]);
        assert_eq!(c.num_inputs(), 1);
        let same = and2().specialize(&BTreeMap::new()).unwrap();
        assert_eq!(same, and2());
        let c = and2().specialize(&BTreeMap::from([(0, true)])).unwrap();
        assert_eq!(c.num_inputs(), 1);
        assert_eq!(c.stats().m, 0);
        assert!(c.evaluate(&bits("1")).unwrap());
        assert_eq!(
            and2().specialize(&BTreeMap::from([(2, true)])),
            Err(CircuitError::BadInputIndex(2))
        );
    }

    #[test]
    fn specialize_renumbers_in_order() {
        let maj = majority3();
        let c = maj.specialize(&BTreeMap::from([(1, true)])).unwrap();
        // majority(a, 1, c) = a | c
        for a in 0..4u64 {
            let r = BitString::from_index(a, 2);
            assert_eq!(c.evaluate(&r).unwrap(), r.bits()[0] || r.bits()[1]);
        }
    }

    #[test]
    fn de_morgan_pair() {
        let lhs = Circuit::new(
            vec![
                Node::Input(0),
                Node::Input(1),
                Node::And(0, 1),
                Node::Not(2),
            ],
            2,
        )
        .unwrap();
        let rhs = Circuit::new(
            vec![
                Node::Input(0),
                Node::Input(1),
                Node::Not(0),
                Node::Not(1),
                Node::Or(2, 3),
            ],
            2,
        )
        .unwrap();
        for a in 0..4 {
            let r = BitString::from_index(a, 2);
            assert_eq!(lhs.evaluate(&r), rhs.evaluate(&r));
        }
    }

    #[test]
    fn cnf_examples() {
        let f = Cnf::new(2, vec![vec![Lit::pos(0), Lit::neg(1)]]).unwrap();
        let c = cnf_to_circuit(&f);
        assert_eq!(c.stats().m, 2);
        assert_eq!(
            c.nodes(),
            &[Node::Input(0), Node::Input(1), Node::Not(1), Node::Or(0, 2)]
        );
        let contra = Cnf::new(1, vec![vec![Lit::pos(0)], vec![Lit::neg(0)]]).unwrap();
        let c = cnf_to_circuit(&contra);
        assert!(!c.evaluate(&bits("0")).unwrap());
        assert!(!c.evaluate(&bits("1")).unwrap());
        let empty_clause = Cnf::new(1, vec![vec![Lit::pos(0)], vec![]]).unwrap();
        assert!(!cnf_to_circuit(&empty_clause).evaluate(&bits("1")).unwrap());
    }
}
