//! Human-readable circuit format.
//!
//! ```text
//! inputs 2
//! g0 = INPUT 0
//! g1 = INPUT 1
//! g2 = AND g0 g1
//! ```
//!
//! Gates are named `g<index>` in order; the last gate is the output. `#`
//! starts a comment.

use std::fmt::Write as _;

use super::{Circuit, CircuitError, Node};

pub(super) fn to_text(c: &Circuit) -> String {
    let mut out = format!("inputs {}\n", c.inputs);
    for (i, node) in c.nodes.iter().enumerate() {
        let _ = match *node {
            Node::Input(k) => writeln!(out, "g{i} = INPUT {k}"),
            Node::Const(v) => writeln!(out, "g{i} = CONST {}", u8::from(v)),
            Node::Not(a) => writeln!(out, "g{i} = NOT g{a}"),
            Node::And(a, b) => writeln!(out, "g{i} = AND g{a} g{b}"),
            Node::Or(a, b) => writeln!(out, "g{i} = OR g{a} g{b}"),
        };
    }
    out
}

pub(super) fn parse(src: &str) -> Result<Circuit, CircuitError> {
    let mut inputs = None;
    let mut nodes = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| CircuitError::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "inputs" {
            let n = words
                .get(1)
                .and_then(|w| w.parse::<usize>().ok())
                .filter(|_| words.len() == 2)
                .ok_or_else(|| err("expected `inputs <count>`".into()))?;
            inputs = Some(n);
            continue;
        }
        if words.len() < 3 || words[1] != "=" {
            return Err(err(format!("expected `g<i> = OP ...`, got {line:?}")));
        }
        let expect_name = format!("g{}", nodes.len());
        if words[0] != expect_name {
            return Err(err(format!(
                "expected gate {expect_name}, got {}",
                words[0]
            )));
        }
        let gate_ref = |w: &str| -> Result<u32, CircuitError> {
            w.strip_prefix('g')
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| err(format!("bad gate reference {w:?}")))
        };
        let args = &words[3..];
        let node = match (words[2], args) {
            ("INPUT", [k]) => Node::Input(k.parse().map_err(|_| err(format!("bad index {k:?}")))?),
            ("CONST", ["0"]) => Node::Const(false),
            ("CONST", ["1"]) => Node::Const(true),
            ("NOT", [a]) => Node::Not(gate_ref(a)?),
            ("AND", [a, b]) => Node::And(gate_ref(a)?, gate_ref(b)?),
            ("OR", [a, b]) => Node::Or(gate_ref(a)?, gate_ref(b)?),
            (op, _) => return Err(err(format!("bad gate `{op}` or operand count"))),
        };
        nodes.push(node);
    }
    let inputs = match inputs {
        Some(n) => n,
        None => nodes
            .iter()
            .filter_map(|n| match n {
                Node::Input(k) => Some(*k as usize + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0),
    };
    Circuit::new(nodes, inputs)
}
