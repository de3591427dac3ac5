use super::{Circuit, Node};

/// Evaluates a circuit on 64 assignments at once, one per bit lane.
#[derive(Debug, Clone)]
pub struct WordEvaluator {
    nodes: Vec<Node>,
    inputs: usize,
    scratch: Vec<u64>,
}

impl WordEvaluator {
    pub fn new(c: &Circuit) -> Self {
        WordEvaluator {
            nodes: c.nodes().to_vec(),
            inputs: c.num_inputs(),
            scratch: vec![0; c.nodes().len()],
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs
    }

    /// `words[i]` holds input `i` across the 64 lanes.
    pub fn eval(&mut self, words: &[u64]) -> u64 {
        debug_assert_eq!(words.len(), self.inputs);
        let v = &mut self.scratch;
        for (i, node) in self.nodes.iter().enumerate() {
            v[i] = match *node {
                Node::Input(k) => words[k as usize],
                Node::Const(c) => {
                    if c {
                        !0
                    } else {
                        0
                    }
                }
                Node::Not(a) => !v[a as usize],
                Node::And(a, b) => v[a as usize] & v[b as usize],
                Node::Or(a, b) => v[a as usize] | v[b as usize],
            };
        }
        v[self.nodes.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pstring::BitString;

    #[test]
    fn lanes_match_scalar() {
        let c = crate::circuit::tests::majority3();
        let mut ev = WordEvaluator::new(&c);
        // lane a carries assignment a (first input most significant)
        let words: Vec<u64> = (0..3)
            .map(|i| (0..8u64).fold(0, |w, a| w | (((a >> (2 - i)) & 1) << a)))
            .collect();
        let out = ev.eval(&words);
        for a in 0..8u64 {
            let scalar = c.evaluate(&BitString::from_index(a, 3)).unwrap();
            assert_eq!((out >> a) & 1 == 1, scalar);
        }
    }
}
