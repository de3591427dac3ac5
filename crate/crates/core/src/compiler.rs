//! Tableau compilation of a time-bounded machine run into an acceptance
//! circuit.
//!
//! The run is laid out as `T + 1` rows of `T + 1` cells. Every cell carries a
//! one-hot symbol vector and, for each state, an indicator "the head is here
//! in this state". Row `t + 1` is derived from row `t` through the 3-cell
//! neighbourhood of each cell:
//!
//! * `fire(q, a)` at cell `j` = `state_q[j] ∧ sym_a[j]`, one per non-halting
//!   state and symbol;
//! * the written symbol at `j` is `sym_b[j] ∧ ¬active[j]` or any fire at `j`
//!   that writes `b`;
//! * the state indicator at `j` collects the fires that move the head onto
//!   `j` (staying at `j`, moving right from `j - 1`, moving left from
//!   `j + 1`, or moving left at cell 0), plus its own previous value when the
//!   state is halting, so halted configurations repeat.
//!
//! The output is the OR of the accept indicators of the last row. An exposed
//! position reads bit `x` as `'1'` when `x = 1` and `'0'` otherwise.
//!
//! [`compile`] emits the construction verbatim, so its gate count is exactly
//! [`raw_gate_count`]. [`compile_folded`] runs the same construction through
//! a constant-folding builder and keeps only the cells the head can reach;
//! it is what the decision pipeline uses.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::circuit::{Circuit, GateBuilder, Sig};
use crate::pstring::{PString, Sym};
use crate::tm::{Dir, TmSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputCell {
    Hardwired(char),
    Exposed(usize),
}

#[derive(Debug, Clone)]
pub struct CompileSpec<'a> {
    pub machine: &'a TmSpec,
    pub interface: Vec<InputCell>,
    pub time_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("invalid compile spec: {0}")]
    SpecInvariantViolation(String),
    #[error("cannot expose {expose} placeholders, string has {pcount}")]
    ExposeTooLarge { expose: usize, pcount: usize },
}

impl CompileSpec<'_> {
    pub fn input_len(&self) -> usize {
        self.interface.len()
    }

    pub fn exposed(&self) -> usize {
        self.interface
            .iter()
            .filter(|c| matches!(c, InputCell::Exposed(_)))
            .count()
    }

    fn validate(&self) -> Result<(), CompileError> {
        let bad = |m: String| Err(CompileError::SpecInvariantViolation(m));
        if self.time_bound < 1 {
            return bad("time bound must be at least 1".into());
        }
        if self.input_len() > self.time_bound {
            return bad(format!(
                "input length {} exceeds time bound {}",
                self.input_len(),
                self.time_bound
            ));
        }
        let e = self.exposed();
        let mut seen = vec![false; e];
        for cell in &self.interface {
            match *cell {
                InputCell::Exposed(k) => {
                    if k >= e || std::mem::replace(&mut seen[k], true) {
                        return bad(format!("exposed indices are not dense from 0 (saw {k})"));
                    }
                }
                InputCell::Hardwired(c) => {
                    if self.machine.symbol_index(c).is_none() {
                        return bad(format!("hardwired symbol {c:?} not in alphabet"));
                    }
                }
            }
        }
        Ok(())
    }
}

struct Cell {
    sym: Vec<Sig>,
    /// `(state, indicator)`; complete in raw mode, nonzero entries only when
    /// folding.
    st: Vec<(usize, Sig)>,
}

fn build(spec: &CompileSpec, fold: bool) -> Result<Circuit, CompileError> {
    spec.validate()?;
    let m = spec.machine;
    let a_len = m.num_symbols();
    let s_len = m.num_states();
    let width = spec.time_bound + 1;
    let mut b = GateBuilder::new(spec.exposed(), fold);
    let zero = b.constant(false);
    let one = b.constant(true);
    let sym0 = m.symbol_index('0').unwrap();
    let sym1 = m.symbol_index('1').unwrap();

    let keep = |b: &GateBuilder, s: Sig| !fold || b.value(s) != Some(false);

    let mut row: Vec<Cell> = Vec::with_capacity(width);
    for j in 0..width {
        let mut sym = vec![zero; a_len];
        match spec.interface.get(j) {
            Some(InputCell::Hardwired(c)) => sym[m.symbol_index(*c).unwrap()] = one,
            Some(InputCell::Exposed(k)) => {
                let x = b.input(*k);
                sym[sym0] = b.not(x);
                sym[sym1] = x;
            }
            None => sym[m.blank()] = one,
        }
        let st = (0..s_len)
            .map(|q| (q, if j == 0 && q == m.start() { one } else { zero }))
            .filter(|&(_, s)| keep(&b, s))
            .collect();
        row.push(Cell { sym, st });
    }

    // Cells with no state indicator are left untouched by a step: nothing
    // fires there, so their symbols carry over unchanged. In raw mode every
    // cell lists every state and is always visited.
    let mut active: Vec<usize> = (0..width).filter(|&j| !row[j].st.is_empty()).collect();
    for _ in 0..spec.time_bound {
        let mut arrivals: BTreeMap<usize, Vec<Vec<Sig>>> = BTreeMap::new();
        let mut updates: BTreeMap<usize, Vec<Sig>> = BTreeMap::new();
        for &j in &active {
            let cell = &row[j];
            let mut writes: Vec<Vec<Sig>> = vec![Vec::new(); a_len];
            let mut running = Vec::new();
            for &(q, sq) in &cell.st {
                if m.is_halting(q) {
                    arrivals.entry(j).or_insert_with(|| vec![Vec::new(); s_len])[q].push(sq);
                    continue;
                }
                running.push(sq);
                for (a, &sa) in cell.sym.iter().enumerate() {
                    let t = m.transition(q, a).expect("total on running states");
                    let fire = b.and(sq, sa);
                    if !keep(&b, fire) {
                        continue;
                    }
                    writes[t.write].push(fire);
                    let target = match t.dir {
                        Dir::S => Some(j),
                        Dir::L => Some(j.saturating_sub(1)),
                        Dir::R => (j + 1 < width).then_some(j + 1),
                    };
                    if let Some(p) = target {
                        arrivals.entry(p).or_insert_with(|| vec![Vec::new(); s_len])[t.next]
                            .push(fire);
                    }
                }
            }
            let act = b.or_all(running);
            let not_active = b.not(act);
            let sym = writes
                .into_iter()
                .enumerate()
                .map(|(a, w)| {
                    let kept = b.and(cell.sym[a], not_active);
                    b.or_all(std::iter::once(kept).chain(w))
                })
                .collect();
            updates.insert(j, sym);
        }
        for (j, sym) in updates {
            row[j].sym = sym;
            row[j].st.clear();
        }
        if !fold {
            for &j in &active {
                arrivals.entry(j).or_insert_with(|| vec![Vec::new(); s_len]);
            }
        }
        active.clear();
        for (j, sources) in arrivals {
            let mut st = Vec::new();
            for (q, src) in sources.into_iter().enumerate() {
                let s = b.or_all(src);
                if keep(&b, s) {
                    st.push((q, s));
                }
            }
            if !st.is_empty() {
                active.push(j);
            }
            row[j].st = st;
        }
    }

    let accepts: Vec<Sig> = row
        .iter()
        .map(|c| {
            c.st.iter()
                .find(|(q, _)| *q == m.accept())
                .map(|&(_, s)| s)
                .unwrap_or(zero)
        })
        .collect();
    let out = b.or_all(accepts);
    Ok(b.finish(out))
}

/// The unfolded tableau circuit; its gate count equals [`raw_gate_count`].
pub fn compile(spec: &CompileSpec) -> Result<Circuit, CompileError> {
    build(spec, false)
}

/// The tableau circuit with constants propagated and unreachable cells
/// dropped. Equivalent to specializing [`compile`]'s output, without building
/// it first.
pub fn compile_folded(spec: &CompileSpec) -> Result<Circuit, CompileError> {
    build(spec, true)
}

/// `C_i`: the circuit over the first `expose` placeholders of `x`, with every
/// other character (remaining placeholders included) hardwired.
pub fn compile_on_pstring(
    machine: &TmSpec,
    x: &PString,
    expose: usize,
    time_bound: usize,
) -> Result<Circuit, CompileError> {
    let spec = pstring_spec(machine, x, expose, time_bound)?;
    compile_folded(&spec)
}

pub fn pstring_spec<'a>(
    machine: &'a TmSpec,
    x: &PString,
    expose: usize,
    time_bound: usize,
) -> Result<CompileSpec<'a>, CompileError> {
    if expose > x.pcount() {
        return Err(CompileError::ExposeTooLarge {
            expose,
            pcount: x.pcount(),
        });
    }
    let mut interface: Vec<InputCell> = x
        .chars()
        .iter()
        .map(|s| InputCell::Hardwired(s.to_char()))
        .collect();
    for (k, &pos) in x.placeholder_positions()[..expose].iter().enumerate() {
        debug_assert_eq!(x.get(pos), Some(Sym::P));
        interface[pos] = InputCell::Exposed(k);
    }
    Ok(CompileSpec {
        machine,
        interface,
        time_bound,
    })
}

/// Closed form for the gate count of [`compile`].
///
/// With `S` states (`N = S - 2` running), `A` symbols, `W = T + 1` cells and
/// `e` exposed positions:
///
/// ```text
/// m = 2 + e + (W - 1)
///   + T · ( W · (2·N·A + N + A)
///         + Σ_q [ f(h + s + 2l) + (W - 2) · f(h + s + r + l) + f(h + s + r) ] )
/// ```
///
/// where, for target state `q`, `s`, `r`, `l` count the running `(state,
/// symbol)` pairs whose transition enters `q` moving S, R, L, `h` is 1 for
/// halting `q`, and `f(x) = max(x - 1, 0)` is the length of an OR chain over
/// `x` sources. The three terms are cell 0 (left-edge moves stay), interior
/// cells, and cell `T`.
pub fn raw_gate_count(machine: &TmSpec, time_bound: usize, exposed: usize) -> u64 {
    let s_len = machine.num_states();
    let a = machine.num_symbols() as u64;
    let n = (s_len - 2) as u64;
    let t = time_bound as u64;
    let w = t + 1;
    let mut into = vec![[0u64; 3]; s_len];
    for q in 0..s_len {
        if machine.is_halting(q) {
            continue;
        }
        for sym in 0..machine.num_symbols() {
            let tr = machine.transition(q, sym).unwrap();
            let k = match tr.dir {
                Dir::S => 0,
                Dir::R => 1,
                Dir::L => 2,
            };
            into[tr.next][k] += 1;
        }
    }
    let f = |x: u64| x.saturating_sub(1);
    let per_step_states: u64 = (0..s_len)
        .map(|q| {
            let h = u64::from(machine.is_halting(q));
            let [s, r, l] = into[q];
            f(h + s + 2 * l) + (w - 2) * f(h + s + r + l) + f(h + s + r)
        })
        .sum();
    2 + exposed as u64 + (w - 1) + t * (w * (2 * n * a + n + a) + per_step_states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pstring::BitString;
    use crate::tm::builtin;

    fn all_exposed(n: usize) -> Vec<InputCell> {
        (0..n).map(InputCell::Exposed).collect()
    }

    fn check_against_run(spec: &CompileSpec, c: &Circuit) {
        let e = spec.exposed();
        for a in 0..(1u64 << e) {
            let r = BitString::from_index(a, e);
            let input: String = spec
                .interface
                .iter()
                .map(|cell| match *cell {
                    InputCell::Hardwired(ch) => ch,
                    InputCell::Exposed(k) => {
                        if r.bits()[k] {
                            '1'
                        } else {
                            '0'
                        }
                    }
                })
                .collect();
            let run = spec
                .machine
                .run_str(&input, spec.time_bound as u64)
                .unwrap();
            assert_eq!(c.evaluate(&r).unwrap(), run.accepted(), "input {input}");
        }
    }

    #[test]
    fn hardwired_all_zeros_is_constant_one() {
        let m = builtin("all_zeros").unwrap();
        let spec = CompileSpec {
            machine: &m,
            interface: vec![InputCell::Hardwired('0'); 2],
            time_bound: 8,
        };
        let c = compile(&spec).unwrap();
        assert_eq!(c.num_inputs(), 0);
        assert!(c.evaluate(&BitString::default()).unwrap());
        assert_eq!(compile_folded(&spec).unwrap(), Circuit::constant(true));
    }

    #[test]
    fn parity_is_xor() {
        let m = builtin("parity").unwrap();
        let spec = CompileSpec {
            machine: &m,
            interface: all_exposed(4),
            time_bound: 20,
        };
        for c in [compile(&spec).unwrap(), compile_folded(&spec).unwrap()] {
            assert_eq!(c.num_inputs(), 4);
            for a in 0..16u64 {
                let r = BitString::from_index(a, 4);
                assert_eq!(c.evaluate(&r).unwrap(), a.count_ones() % 2 == 1);
            }
        }
    }

    #[test]
    fn raw_count_matches_closed_form() {
        for name in ["all_zeros", "parity", "equal_halves"] {
            let m = builtin(name).unwrap();
            for (n, t) in [(0, 1), (1, 1), (3, 5), (4, 9)] {
                let spec = CompileSpec {
                    machine: &m,
                    interface: all_exposed(n),
                    time_bound: t,
                };
                let c = compile(&spec).unwrap();
                assert_eq!(
                    c.stats().m as u64,
                    raw_gate_count(&m, t, n),
                    "{name} n={n} T={t}"
                );
            }
        }
    }

    #[test]
    fn raw_count_regression() {
        // parity, T = 20, W = 21: per cell 2·2·4 + 2 + 4 = 22; OR chains per
        // step: even 20, odd 20, accept 21, reject 3·21 = 63.
        // 2 + 4 + 20 + 20·(21·22 + 124) = 11746
        let m = builtin("parity").unwrap();
        assert_eq!(raw_gate_count(&m, 20, 4), 11_746);
        // all_zeros, T = 8, W = 9: per cell 13; OR chains 0 + 9 + 18.
        // 2 + 0 + 8 + 8·(9·13 + 27) = 1162
        assert_eq!(raw_gate_count(&builtin("all_zeros").unwrap(), 8, 0), 1_162);
    }

    #[test]
    fn folded_agrees_with_raw_and_run() {
        let m = builtin("equal_halves").unwrap();
        for n in 0..=6 {
            let spec = CompileSpec {
                machine: &m,
                interface: all_exposed(n),
                time_bound: 40,
            };
            let raw = compile(&spec).unwrap();
            let folded = compile_folded(&spec).unwrap();
            assert!(folded.stats().m <= raw.stats().m);
            check_against_run(&spec, &folded);
            check_against_run(&spec, &raw);
        }
    }

    #[test]
    fn mixed_interface() {
        let m = builtin("equal_halves").unwrap();
        let spec = CompileSpec {
            machine: &m,
            interface: vec![
                InputCell::Hardwired('1'),
                InputCell::Exposed(1),
                InputCell::Exposed(0),
                InputCell::Hardwired('0'),
            ],
            time_bound: 30,
        };
        check_against_run(&spec, &compile_folded(&spec).unwrap());
    }

    #[test]
    fn on_pstring_examples() {
        let m = builtin("all_zeros").unwrap();
        let x: PString = "0p0".parse().unwrap();
        let c0 = compile_on_pstring(&m, &x, 0, 10).unwrap();
        assert_eq!(c0.num_inputs(), 0);
        assert!(!c0.evaluate(&BitString::default()).unwrap());
        let c1 = compile_on_pstring(&m, &x, 1, 10).unwrap();
        assert!(c1.evaluate(&BitString::parse("0").unwrap()).unwrap());
        assert!(!c1.evaluate(&BitString::parse("1").unwrap()).unwrap());

        let x: PString = "11p01p0p".parse().unwrap();
        let m = builtin("parity").unwrap();
        let c = compile_on_pstring(&m, &x, 2, 12).unwrap();
        assert_eq!(c.num_inputs(), 2);
        for a in 0..4 {
            let r = BitString::from_index(a, 2);
            let want = m.run(&x.apply_filling(&r), 12).accepted();
            assert_eq!(c.evaluate(&r).unwrap(), want);
        }
        assert_eq!(
            compile_on_pstring(&m, &x, 4, 12),
            Err(CompileError::ExposeTooLarge {
                expose: 4,
                pcount: 3
            })
        );
    }

    #[test]
    fn spec_validation() {
        let m = builtin("parity").unwrap();
        let bad = |interface, time_bound| {
            let spec = CompileSpec {
                machine: &m,
                interface,
                time_bound,
            };
            matches!(compile(&spec), Err(CompileError::SpecInvariantViolation(_)))
        };
        assert!(bad(all_exposed(2), 0));
        assert!(bad(all_exposed(5), 4));
        assert!(bad(vec![InputCell::Exposed(1)], 4));
        assert!(bad(vec![InputCell::Exposed(0), InputCell::Exposed(0)], 4));
        assert!(bad(vec![InputCell::Hardwired('Z')], 4));
    }
}
