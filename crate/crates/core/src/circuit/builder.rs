use std::collections::HashMap;

use super::{Circuit, Node};

/// Handle to a node inside a [`GateBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sig(u32);

impl Sig {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Appends nodes in topological order.
///
/// With `fold` set, constants are propagated, trivial identities
/// (`x & x`, `x & !x`, `!!x`) are simplified and structurally equal gates are
/// shared. Without it every call emits exactly one node, apart from the two
/// shared constants and one `Input` node per index.
#[derive(Debug, Clone)]
pub struct GateBuilder {
    nodes: Vec<Node>,
    inputs: usize,
    fold: bool,
    consts: [Option<Sig>; 2],
    input_nodes: HashMap<usize, Sig>,
    memo: HashMap<Node, Sig>,
}

impl GateBuilder {
    pub fn new(inputs: usize, fold: bool) -> Self {
        GateBuilder {
            nodes: Vec::new(),
            inputs,
            fold,
            consts: [None, None],
            input_nodes: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn folding(&self) -> bool {
        self.fold
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, node: Node) -> Sig {
        let s = Sig(u32::try_from(self.nodes.len()).expect("circuit exceeds u32 nodes"));
        self.nodes.push(node);
        s
    }

    fn push_gate(&mut self, node: Node) -> Sig {
        if !self.fold {
            return self.push(node);
        }
        if let Some(&s) = self.memo.get(&node) {
            return s;
        }
        let s = self.push(node);
        self.memo.insert(node, s);
        s
    }

    pub fn constant(&mut self, value: bool) -> Sig {
        let slot = usize::from(value);
        if let Some(s) = self.consts[slot] {
            return s;
        }
        let s = self.push(Node::Const(value));
        self.consts[slot] = Some(s);
        s
    }

    pub fn input(&mut self, index: usize) -> Sig {
        assert!(index < self.inputs, "input {index} out of range");
        if let Some(&s) = self.input_nodes.get(&index) {
            return s;
        }
        let s = self.push(Node::Input(index as u32));
        self.input_nodes.insert(index, s);
        s
    }

    /// The constant value of `s`, if it is a `Const` node.
    pub fn value(&self, s: Sig) -> Option<bool> {
        match self.nodes[s.index()] {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    fn negation_of(&self, s: Sig) -> Option<Sig> {
        match self.nodes[s.index()] {
            Node::Not(a) => Some(Sig(a)),
            _ => None,
        }
    }

    fn complementary(&self, a: Sig, b: Sig) -> bool {
        self.negation_of(a) == Some(b) || self.negation_of(b) == Some(a)
    }

    pub fn not(&mut self, a: Sig) -> Sig {
        if self.fold {
            if let Some(c) = self.value(a) {
                return self.constant(!c);
            }
            if let Some(inner) = self.negation_of(a) {
                return inner;
            }
        }
        self.push_gate(Node::Not(a.0))
    }

    pub fn and(&mut self, a: Sig, b: Sig) -> Sig {
        if self.fold {
            match (self.value(a), self.value(b)) {
                (Some(false), _) => return a,
                (_, Some(false)) => return b,
                (Some(true), _) => return b,
                (_, Some(true)) => return a,
                _ => {}
            }
            if a == b {
                return a;
            }
            if self.complementary(a, b) {
                return self.constant(false);
            }
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            return self.push_gate(Node::And(x.0, y.0));
        }
        self.push_gate(Node::And(a.0, b.0))
    }

    pub fn or(&mut self, a: Sig, b: Sig) -> Sig {
        if self.fold {
            match (self.value(a), self.value(b)) {
                (Some(true), _) => return a,
                (_, Some(true)) => return b,
                (Some(false), _) => return b,
                (_, Some(false)) => return a,
                _ => {}
            }
            if a == b {
                return a;
            }
            if self.complementary(a, b) {
                return self.constant(true);
            }
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            return self.push_gate(Node::Or(x.0, y.0));
        }
        self.push_gate(Node::Or(a.0, b.0))
    }

    /// OR of all `sigs`, as a left-leaning chain of `len - 1` gates; the
    /// empty OR is constant false.
    pub fn or_all<I: IntoIterator<Item = Sig>>(&mut self, sigs: I) -> Sig {
        let mut acc = None;
        for s in sigs {
            acc = Some(match acc {
                None => s,
                Some(prev) => self.or(prev, s),
            });
        }
        acc.unwrap_or_else(|| self.constant(false))
    }

    /// Finishes with `output` as the designated output. Nodes created after
    /// `output` are discarded; when folding, every node the output does not
    /// depend on is dropped as well.
    pub fn finish(mut self, output: Sig) -> Circuit {
        self.nodes.truncate(output.index() + 1);
        let circuit = Circuit {
            nodes: self.nodes,
            inputs: self.inputs,
        };
        if self.fold {
            circuit.prune()
        } else {
            circuit
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_rules() {
        let mut b = GateBuilder::new(2, true);
        let x = b.input(0);
        let y = b.input(1);
        let t = b.constant(true);
        let f = b.constant(false);
        assert_eq!(b.and(x, t), x);
        assert_eq!(b.and(f, y), f);
        assert_eq!(b.or(x, f), x);
        assert_eq!(b.or(t, y), t);
        let nx = b.not(x);
        assert_eq!(b.not(nx), x);
        assert_eq!(b.and(x, nx), f);
        assert_eq!(b.or(nx, x), t);
        let g1 = b.and(x, y);
        let g2 = b.and(y, x);
        assert_eq!(g1, g2);
    }

    #[test]
    fn raw_mode_emits_every_gate() {
        let mut b = GateBuilder::new(1, false);
        let x = b.input(0);
        let t = b.constant(true);
        let g = b.and(x, t);
        let h = b.and(x, t);
        assert_ne!(g, h);
        let c = b.finish(h);
        assert_eq!(c.nodes().len(), 4);
    }

    #[test]
    fn finish_moves_output_last() {
        let mut b = GateBuilder::new(2, false);
        let x = b.input(0);
        let y = b.input(1);
        let g = b.and(x, y);
        let _dead = b.or(x, y);
        let c = b.finish(g);
        assert_eq!(
            c.nodes(),
            &[Node::Input(0), Node::Input(1), Node::And(0, 1)]
        );
        let mut b = GateBuilder::new(2, true);
        let x = b.input(0);
        let y = b.input(1);
        let _ = b.not(y);
        let g = b.and(x, y);
        let c = b.finish(g);
        assert_eq!(
            c.nodes(),
            &[Node::Input(0), Node::Input(1), Node::And(0, 1)]
        );
    }
}
