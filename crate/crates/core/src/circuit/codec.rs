//! Binary circuit encoding.
//!
//! Layout: node count `N` and input count `I` as big-endian `u32`, then for
//! each node a 3-bit opcode followed by its operand fields, packed MSB-first
//! and zero-padded to a byte boundary only at the end. Every operand field
//! (node reference or input index) is `W = ⌈log₂ max(N, I)⌉` bits wide; a
//! `CONST` carries one value bit.
//!
//! | opcode | node  | fields   |
//! |--------|-------|----------|
//! | 000    | INPUT | index: W |
//! | 001    | CONST | value: 1 |
//! | 010    | NOT   | a: W     |
//! | 011    | AND   | a, b: W  |
//! | 100    | OR    | a, b: W  |

use super::{Circuit, CircuitError, Node};

const OP_INPUT: u64 = 0b000;
const OP_CONST: u64 = 0b001;
const OP_NOT: u64 = 0b010;
const OP_AND: u64 = 0b011;
const OP_OR: u64 = 0b100;
const HEADER_BYTES: usize = 8;

/// `⌈log₂ n⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

fn field_width(nodes: usize, inputs: usize) -> u32 {
    ceil_log2(nodes.max(inputs) as u64)
}

/// Payload bits (excluding the header and final padding).
pub fn encoded_bits(c: &Circuit) -> u64 {
    let w = u64::from(field_width(c.nodes.len(), c.inputs));
    c.nodes
        .iter()
        .map(|n| {
            3 + match n {
                Node::Input(_) | Node::Not(_) => w,
                Node::Const(_) => 1,
                Node::And(..) | Node::Or(..) => 2 * w,
            }
        })
        .sum()
}

/// Total serialized length in bytes.
pub fn encoded_len(c: &Circuit) -> usize {
    HEADER_BYTES + encoded_bits(c).div_ceil(8) as usize
}

struct BitWriter {
    bytes: Vec<u8>,
    used: u32,
}

impl BitWriter {
    fn put(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            if self.used == 0 {
                self.bytes.push(0);
            }
            let bit = ((value >> i) & 1) as u8;
            *self.bytes.last_mut().unwrap() |= bit << (7 - self.used);
            self.used = (self.used + 1) % 8;
        }
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BitReader<'_> {
    fn get(&mut self, width: u32) -> Result<u64, CircuitError> {
        let mut v = 0u64;
        for _ in 0..width {
            let byte = self
                .bytes
                .get(self.pos / 8)
                .ok_or_else(|| CircuitError::MalformedHeader("truncated payload".into()))?;
            v = (v << 1) | u64::from((byte >> (7 - self.pos % 8)) & 1);
            self.pos += 1;
        }
        Ok(v)
    }
}

pub(super) fn serialize(c: &Circuit) -> Vec<u8> {
    let n = c.nodes.len();
    let w = field_width(n, c.inputs);
    let mut out = Vec::with_capacity(encoded_len(c));
    out.extend_from_slice(&(n as u32).to_be_bytes());
    out.extend_from_slice(&(c.inputs as u32).to_be_bytes());
    let mut bw = BitWriter {
        bytes: out,
        used: 0,
    };
    for node in &c.nodes {
        match *node {
            Node::Input(i) => {
                bw.put(OP_INPUT, 3);
                bw.put(u64::from(i), w);
            }
            Node::Const(v) => {
                bw.put(OP_CONST, 3);
                bw.put(u64::from(v), 1);
            }
            Node::Not(a) => {
                bw.put(OP_NOT, 3);
                bw.put(u64::from(a), w);
            }
            Node::And(a, b) | Node::Or(a, b) => {
                bw.put(
                    if matches!(node, Node::And(..)) {
                        OP_AND
                    } else {
                        OP_OR
                    },
                    3,
                );
                bw.put(u64::from(a), w);
                bw.put(u64::from(b), w);
            }
        }
    }
    bw.bytes
}

pub(super) fn deserialize(bytes: &[u8]) -> Result<Circuit, CircuitError> {
    if bytes.len() < HEADER_BYTES {
        return Err(CircuitError::MalformedHeader(
            "header shorter than 8 bytes".into(),
        ));
    }
    let n = u32::from_be_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let inputs = u32::from_be_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if n == 0 {
        return Err(CircuitError::MalformedHeader("node count is zero".into()));
    }
    let payload = &bytes[HEADER_BYTES..];
    // Every node takes at least 3 bits; reject absurd counts before allocating.
    if (n as u64) * 3 > (payload.len() as u64) * 8 {
        return Err(CircuitError::MalformedHeader("truncated payload".into()));
    }
    let w = field_width(n, inputs);
    let mut r = BitReader {
        bytes: payload,
        pos: 0,
    };
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let op = r.get(3)?;
        let operand = |r: &mut BitReader| -> Result<u32, CircuitError> {
            let o = r.get(w)? as usize;
            if o >= n {
                Err(CircuitError::DanglingReference {
                    node: i,
                    operand: o,
                })
            } else if o >= i {
                Err(CircuitError::ForwardReference {
                    node: i,
                    operand: o,
                })
            } else {
                Ok(o as u32)
            }
        };
        let node = match op {
            OP_INPUT => Node::Input(r.get(w)? as u32),
            OP_CONST => Node::Const(r.get(1)? == 1),
            OP_NOT => Node::Not(operand(&mut r)?),
            OP_AND => {
                let a = operand(&mut r)?;
                Node::And(a, operand(&mut r)?)
            }
            OP_OR => {
                let a = operand(&mut r)?;
                Node::Or(a, operand(&mut r)?)
            }
            other => {
                return Err(CircuitError::MalformedHeader(format!(
                    "unknown opcode {other:03b} at node {i}"
                )))
            }
        };
        nodes.push(node);
    }
    if r.pos.div_ceil(8) != payload.len() {
        return Err(CircuitError::MalformedHeader("trailing bytes".into()));
    }
    if !r.pos.is_multiple_of(8) && payload[r.pos / 8] & (0xff >> (r.pos % 8)) != 0 {
        return Err(CircuitError::MalformedHeader("nonzero padding".into()));
    }
    Circuit::new(nodes, inputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        let got: Vec<u32> = [0u64, 1, 2, 3, 4, 5, 8, 9, 1024, 1025]
            .iter()
            .map(|&n| ceil_log2(n))
            .collect();
        assert_eq!(got, [0, 0, 1, 2, 2, 3, 3, 4, 10, 11]);
    }

    #[test]
    fn smallest_circuit() {
        let c = Circuit::constant(true);
        let bytes = c.serialize();
        // header, then 001 1 0000
        assert_eq!(bytes, [0, 0, 0, 1, 0, 0, 0, 0, 0b0011_0000]);
        assert_eq!(Circuit::deserialize(&bytes).unwrap(), c);
    }

    #[test]
    fn and_gate_layout() {
        let c = Circuit::new(vec![Node::Input(0), Node::Input(1), Node::And(0, 1)], 2).unwrap();
        // W = 2: 000 00 | 000 01 | 011 00 01 -> 17 bits
        let bytes = c.serialize();
        assert_eq!(&bytes[..8], &[0, 0, 0, 3, 0, 0, 0, 2]);
        assert_eq!(&bytes[8..], &[0b0000_0000, 0b0101_1000, 0b1000_0000]);
        assert_eq!(encoded_bits(&c), 17);
    }

    #[test]
    fn input_index_wider_than_node_count() {
        let c = Circuit::new(vec![Node::Input(6), Node::Not(0)], 7).unwrap();
        let back = Circuit::deserialize(&c.serialize()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            Circuit::deserialize(&[0, 0, 0]),
            Err(CircuitError::MalformedHeader(_))
        ));
        assert!(matches!(
            Circuit::deserialize(&[0, 0, 0, 0, 0, 0, 0, 0]),
            Err(CircuitError::MalformedHeader(_))
        ));
        // N = 2, W = 1: node 0 is NOT 0
        let fwd = [0, 0, 0, 2, 0, 0, 0, 0, 0b0100_0000];
        assert!(matches!(
            Circuit::deserialize(&fwd),
            Err(CircuitError::ForwardReference { .. })
        ));
        // N = 3, W = 2: CONST 1, NOT 3 -> dangling
        let dang = [0, 0, 0, 3, 0, 0, 0, 0, 0b0011_0101, 0b1000_0000];
        assert!(matches!(
            Circuit::deserialize(&dang),
            Err(CircuitError::DanglingReference { operand: 3, .. })
        ));
        let mut extra = Circuit::constant(false).serialize();
        extra.push(0);
        assert!(matches!(
            Circuit::deserialize(&extra),
            Err(CircuitError::MalformedHeader(_))
        ));
        let mut pad = Circuit::constant(false).serialize();
        pad[8] |= 1;
        assert!(matches!(
            Circuit::deserialize(&pad),
            Err(CircuitError::MalformedHeader(_))
        ));
    }
}
