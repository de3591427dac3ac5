//! Single-tape deterministic Turing machines with exact step semantics.
//!
//! Moving left from cell 0 leaves the head in place. Halting states have no
//! outgoing transitions; a halted configuration is a fixpoint, which is what
//! [`TmSpec::run_trace`] replicates to fill the tableau.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::pstring::PString;

pub const BLANK: char = '_';
pub const MAX_ALPHABET: usize = 8;
const REQUIRED_SYMBOLS: [char; 4] = ['0', '1', 'p', BLANK];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    L,
    R,
    S,
}

impl Dir {
    fn parse(s: &str) -> Option<Dir> {
        match s {
            "L" => Some(Dir::L),
            "R" => Some(Dir::R),
            "S" => Some(Dir::S),
            _ => None,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::L => "L",
            Dir::R => "R",
            Dir::S => "S",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: usize,
    pub write: usize,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmError {
    #[error("line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("no transition for state {state} on symbol {symbol:?}")]
    NonTotalTransitions { state: String, symbol: char },
    #[error("alphabet has {0} symbols, at most {MAX_ALPHABET} allowed")]
    AlphabetTooLarge(usize),
    #[error("input symbol {0:?} is not in the tape alphabet")]
    SymbolNotInAlphabet(char),
    #[error("unknown builtin machine {0:?}")]
    UnknownBuiltin(String),
    #[error("invalid machine: {0}")]
    Invalid(String),
}

/// A validated machine. Transitions are stored densely, indexed by
/// `state * alphabet_len + symbol`; halting states map to `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmSpec {
    states: Vec<String>,
    alphabet: Vec<char>,
    start: usize,
    accept: usize,
    reject: usize,
    delta: Vec<Option<Transition>>,
    blank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Accept,
    Reject,
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct RunResult {
    pub verdict: Verdict,
    pub steps: u64,
}

impl RunResult {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub state: usize,
    pub head: usize,
    pub tape: Vec<usize>,
}

/// `time_bound + 1` configurations over a window of `time_bound + 1` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    pub rows: Vec<Config>,
    pub result: RunResult,
}

impl TmSpec {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accept(&self) -> usize {
        self.accept
    }

    pub fn reject(&self) -> usize {
        self.reject
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn is_halting(&self, state: usize) -> bool {
        state == self.accept || state == self.reject
    }

    pub fn symbol_index(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&a| a == c)
    }

    pub fn transition(&self, state: usize, symbol: usize) -> Option<Transition> {
        self.delta[state * self.alphabet.len() + symbol]
    }

    fn encode_input<I: IntoIterator<Item = char>>(&self, input: I) -> Result<Vec<usize>, TmError> {
        input
            .into_iter()
            .map(|c| self.symbol_index(c).ok_or(TmError::SymbolNotInAlphabet(c)))
            .collect()
    }

    fn pstring_tape(&self, input: &PString) -> Vec<usize> {
        // '0', '1' and 'p' are mandatory alphabet members.
        let codes = [
            self.symbol_index('0').unwrap(),
            self.symbol_index('1').unwrap(),
            self.symbol_index('p').unwrap(),
        ];
        input
            .chars()
            .iter()
            .map(|s| codes[usize::from(s.code())])
            .collect()
    }

    /// One step from `cfg`; returns `false` when `cfg` is halted.
    pub fn step(&self, cfg: &mut Config) -> bool {
        let Some(t) = self.transition(cfg.state, cfg.tape[cfg.head]) else {
            return false;
        };
        cfg.tape[cfg.head] = t.write;
        cfg.state = t.next;
        match t.dir {
            Dir::L => cfg.head = cfg.head.saturating_sub(1),
            Dir::R => {
                cfg.head += 1;
                if cfg.head == cfg.tape.len() {
                    cfg.tape.push(self.blank);
                }
            }
            Dir::S => {}
        }
        true
    }

    fn run_tape(&self, mut tape: Vec<usize>, time_bound: u64) -> RunResult {
        if tape.is_empty() {
            tape.push(self.blank);
        }
        let mut cfg = Config {
            state: self.start,
            head: 0,
            tape,
        };
        let mut steps = 0;
        while steps < time_bound && self.step(&mut cfg) {
            steps += 1;
        }
        let verdict = if cfg.state == self.accept {
            Verdict::Accept
        } else if cfg.state == self.reject {
            Verdict::Reject
        } else {
            Verdict::Timeout
        };
        RunResult { verdict, steps }
    }

    pub fn run(&self, input: &PString, time_bound: u64) -> RunResult {
        self.run_tape(self.pstring_tape(input), time_bound)
    }

    /// Runs on an arbitrary string over the machine's tape alphabet.
    pub fn run_str(&self, input: &str, time_bound: u64) -> Result<RunResult, TmError> {
        Ok(self.run_tape(self.encode_input(input.chars())?, time_bound))
    }

    pub fn run_trace(&self, input: &PString, time_bound: u64) -> Tableau {
        self.trace_tape(self.pstring_tape(input), time_bound)
    }

    pub fn run_trace_str(&self, input: &str, time_bound: u64) -> Result<Tableau, TmError> {
        Ok(self.trace_tape(self.encode_input(input.chars())?, time_bound))
    }

    fn trace_tape(&self, tape: Vec<usize>, time_bound: u64) -> Tableau {
        let width = usize::try_from(time_bound).expect("time bound fits in memory") + 1;
        let mut window = vec![self.blank; width];
        for (cell, s) in window.iter_mut().zip(&tape) {
            *cell = *s;
        }
        let mut cfg = Config {
            state: self.start,
            head: 0,
            tape: window,
        };
        let mut rows = Vec::with_capacity(width);
        rows.push(cfg.clone());
        let mut steps = 0;
        for _ in 0..time_bound {
            // Within T steps the head never passes cell T, so the window
            // never grows.
            if self.step(&mut cfg) {
                steps += 1;
            }
            rows.push(cfg.clone());
        }
        let result = self.run_tape(tape, time_bound);
        debug_assert_eq!(result.steps, steps);
        Tableau { rows, result }
    }

    pub fn parse(text: &str) -> Result<TmSpec, TmError> {
        parse_machine(text)
    }

    /// Renders the line-oriented text format accepted by [`TmSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let _ = writeln!(out, "start: {}", self.states[self.start]);
        let _ = writeln!(out, "accept: {}", self.states[self.accept]);
        let _ = writeln!(out, "reject: {}", self.states[self.reject]);
        let syms: Vec<String> = self.alphabet.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "alphabet: {}", syms.join(" "));
        for (q, name) in self.states.iter().enumerate() {
            for (a, c) in self.alphabet.iter().enumerate() {
                if let Some(t) = self.transition(q, a) {
                    let _ = writeln!(
                        out,
                        "{name} {c} -> {} {} {}",
                        self.states[t.next], self.alphabet[t.write], t.dir
                    );
                }
            }
        }
        out
    }
}

/// Incremental construction of a [`TmSpec`].
#[derive(Debug, Clone)]
pub struct TmBuilder {
    states: Vec<String>,
    index: HashMap<String, usize>,
    alphabet: Vec<char>,
    start: Option<usize>,
    accept: Option<usize>,
    reject: Option<usize>,
    delta: HashMap<(usize, usize), Transition>,
}

impl TmBuilder {
    pub fn new(alphabet: &[char]) -> Self {
        TmBuilder {
            states: Vec::new(),
            index: HashMap::new(),
            alphabet: alphabet.to_vec(),
            start: None,
            accept: None,
            reject: None,
            delta: HashMap::new(),
        }
    }

    /// Returns the id of `name`, creating the state if needed.
    pub fn state(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.states.len();
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn start(&mut self, q: usize) -> &mut Self {
        self.start = Some(q);
        self
    }

    pub fn accept(&mut self, q: usize) -> &mut Self {
        self.accept = Some(q);
        self
    }

    pub fn reject(&mut self, q: usize) -> &mut Self {
        self.reject = Some(q);
        self
    }

    fn sym(&self, c: char) -> usize {
        self.alphabet
            .iter()
            .position(|&a| a == c)
            .unwrap_or_else(|| panic!("symbol {c:?} not in alphabet"))
    }

    /// Adds `q c -> next write dir`, replacing any existing rule.
    pub fn rule(&mut self, q: usize, c: char, next: usize, write: char, dir: Dir) -> &mut Self {
        let key = (q, self.sym(c));
        let write = self.sym(write);
        self.delta.insert(key, Transition { next, write, dir });
        self
    }

    /// Adds `q c -> next c dir` for every symbol `c` without a rule yet.
    pub fn otherwise(&mut self, q: usize, next: usize, dir: Dir) -> &mut Self {
        for a in 0..self.alphabet.len() {
            self.delta.entry((q, a)).or_insert(Transition {
                next,
                write: a,
                dir,
            });
        }
        self
    }

    pub fn build(self) -> Result<TmSpec, TmError> {
        let missing = |what: &str| TmError::Invalid(format!("{what} state not set"));
        let start = self.start.ok_or_else(|| missing("start"))?;
        let accept = self.accept.ok_or_else(|| missing("accept"))?;
        let reject = self.reject.ok_or_else(|| missing("reject"))?;
        validate_alphabet(&self.alphabet)?;
        if accept == reject {
            return Err(TmError::Invalid("accept and reject coincide".into()));
        }
        if start == accept || start == reject {
            return Err(TmError::Invalid("start state must not halt".into()));
        }
        let a = self.alphabet.len();
        let mut delta = vec![None; self.states.len() * a];
        for (&(q, s), &t) in &self.delta {
            if q == accept || q == reject {
                return Err(TmError::Invalid(format!(
                    "halting state {} has an outgoing transition",
                    self.states[q]
                )));
            }
            delta[q * a + s] = Some(t);
        }
        for q in 0..self.states.len() {
            if q == accept || q == reject {
                continue;
            }
            for s in 0..a {
                if delta[q * a + s].is_none() {
                    return Err(TmError::NonTotalTransitions {
                        state: self.states[q].clone(),
                        symbol: self.alphabet[s],
                    });
                }
            }
        }
        let blank = self.alphabet.iter().position(|&c| c == BLANK).unwrap();
        Ok(TmSpec {
            states: self.states,
            alphabet: self.alphabet,
            start,
            accept,
            reject,
            delta,
            blank,
        })
    }
}

fn validate_alphabet(alphabet: &[char]) -> Result<(), TmError> {
    if alphabet.len() > MAX_ALPHABET {
        return Err(TmError::AlphabetTooLarge(alphabet.len()));
    }
    for (i, c) in alphabet.iter().enumerate() {
        if alphabet[..i].contains(c) {
            return Err(TmError::Invalid(format!("duplicate symbol {c:?}")));
        }
    }
    for c in REQUIRED_SYMBOLS {
        if !alphabet.contains(&c) {
            return Err(TmError::Invalid(format!("alphabet lacks {c:?}")));
        }
    }
    Ok(())
}

fn parse_machine(text: &str) -> Result<TmSpec, TmError> {
    let err = |line: usize, msg: String| TmError::ParseError { line, msg };
    let mut states: Option<Vec<String>> = None;
    let mut alphabet: Option<Vec<char>> = None;
    let (mut start, mut accept, mut reject) = (None, None, None);
    let mut rules = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once("->") {
            let l: Vec<&str> = lhs.split_whitespace().collect();
            let r: Vec<&str> = rhs.split_whitespace().collect();
            if l.len() != 2 || r.len() != 3 {
                return Err(err(line_no, "expected `q a -> q' b D`".into()));
            }
            rules.push((line_no, l[0], l[1], r[0], r[1], r[2]));
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(err(line_no, format!("unrecognized line {line:?}")));
        };
        let words: Vec<&str> = value.split_whitespace().collect();
        let single = |what: &str| -> Result<String, TmError> {
            match words.as_slice() {
                [w] => Ok(w.to_string()),
                _ => Err(err(line_no, format!("`{what}` takes exactly one state"))),
            }
        };
        match key.trim() {
            "states" => states = Some(words.iter().map(|s| s.to_string()).collect()),
            "start" => start = Some(single("start")?),
            "accept" => accept = Some(single("accept")?),
            "reject" => reject = Some(single("reject")?),
            "alphabet" => {
                let mut syms = Vec::new();
                for w in &words {
                    let mut cs = w.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => syms.push(c),
                        _ => return Err(err(line_no, format!("bad symbol {w:?}"))),
                    }
                }
                if syms.len() > MAX_ALPHABET {
                    return Err(TmError::AlphabetTooLarge(syms.len()));
                }
                alphabet = Some(syms);
            }
            other => return Err(err(line_no, format!("unknown key {other:?}"))),
        }
    }

    let states = states.ok_or_else(|| err(0, "missing `states:`".into()))?;
    let alphabet = alphabet.ok_or_else(|| err(0, "missing `alphabet:`".into()))?;
    let mut b = TmBuilder::new(&alphabet);
    for s in &states {
        b.state(s);
    }
    let lookup = |b: &TmBuilder, name: &str, line: usize| -> Result<usize, TmError> {
        b.index
            .get(name)
            .copied()
            .ok_or_else(|| err(line, format!("unknown state {name:?}")))
    };
    let sym = |w: &str, line: usize| -> Result<char, TmError> {
        let mut cs = w.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) if alphabet.contains(&c) => Ok(c),
            _ => Err(err(line, format!("symbol {w:?} not in alphabet"))),
        }
    };
    for (name, slot) in [("start", &start), ("accept", &accept), ("reject", &reject)] {
        let s = slot
            .as_ref()
            .ok_or_else(|| err(0, format!("missing `{name}:`")))?;
        let id = lookup(&b, s, 0)?;
        match name {
            "start" => b.start(id),
            "accept" => b.accept(id),
            _ => b.reject(id),
        };
    }
    let mut seen = std::collections::HashSet::new();
    for (line, q, a, q2, w, d) in rules {
        let q = lookup(&b, q, line)?;
        let a = sym(a, line)?;
        if !seen.insert((q, a)) {
            return Err(err(line, "duplicate transition".into()));
        }
        let q2 = lookup(&b, q2, line)?;
        let w = sym(w, line)?;
        let d = Dir::parse(d).ok_or_else(|| err(line, format!("bad direction {d:?}")))?;
        b.rule(q, a, q2, w, d);
    }
    b.build()
}

impl fmt::Display for TmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub const BUILTINS: [&str; 5] = [
    "all_zeros",
    "parity",
    "equal_halves",
    "clique_verifier",
    "cnf_verifier",
];

/// Fixture machines. `clique_verifier` checks 3-cliques of
/// [`crate::encoders::fixture_graph`]; `cnf_verifier` reads 3 placeholder
/// bits followed by a formula over 3 variables.
pub fn builtin(name: &str) -> Result<TmSpec, TmError> {
    match name {
        "all_zeros" => Ok(all_zeros()),
        "parity" => Ok(parity()),
        "equal_halves" => Ok(equal_halves()),
        "clique_verifier" => Ok(crate::encoders::clique_machine(
            &crate::encoders::fixture_graph(),
            3,
        )
        .expect("fixture k is in range")),
        "cnf_verifier" => Ok(crate::encoders::cnf_machine(3)),
        other => Err(TmError::UnknownBuiltin(other.to_string())),
    }
}

const BASIC: [char; 4] = ['0', '1', 'p', BLANK];

/// Accepts exactly the strings of zeros (including the empty string).
fn all_zeros() -> TmSpec {
    let mut b = TmBuilder::new(&BASIC);
    let (q0, qa, qr) = (b.state("q0"), b.state("qa"), b.state("qr"));
    b.start(q0).accept(qa).reject(qr);
    b.rule(q0, '0', q0, '0', Dir::R)
        .rule(q0, BLANK, qa, BLANK, Dir::S)
        .otherwise(q0, qr, Dir::S);
    b.build().unwrap()
}

/// Accepts binary strings with an odd number of ones; rejects on `p`.
fn parity() -> TmSpec {
    let mut b = TmBuilder::new(&BASIC);
    let even = b.state("even");
    let odd = b.state("odd");
    let qa = b.state("qa");
    let qr = b.state("qr");
    b.start(even).accept(qa).reject(qr);
    b.rule(even, '0', even, '0', Dir::R)
        .rule(even, '1', odd, '1', Dir::R)
        .rule(odd, '0', odd, '0', Dir::R)
        .rule(odd, '1', even, '1', Dir::R)
        .rule(odd, BLANK, qa, BLANK, Dir::S)
        .otherwise(even, qr, Dir::S)
        .otherwise(odd, qr, Dir::S);
    b.build().unwrap()
}

/// Accepts `ww` for binary `w`. First marks symbols alternately from the
/// left (A/B) and right (C/D) to find the middle, then repeatedly erases the
/// last second-half symbol and compares it with the last unmatched
/// first-half symbol, which is overwritten with `p`.
fn equal_halves() -> TmSpec {
    let mut b = TmBuilder::new(&['0', '1', 'p', BLANK, 'A', 'B', 'C', 'D']);
    let ml = b.state("mark_left");
    let gr = b.state("go_right");
    let mr = b.state("mark_right");
    let bk = b.state("back");
    let rf = b.state("find_end");
    let rt = b.state("take_last");
    let l0 = b.state("seek0");
    let l1 = b.state("seek1");
    let qa = b.state("qa");
    let qr = b.state("qr");
    b.start(ml).accept(qa).reject(qr);

    b.rule(ml, '0', gr, 'A', Dir::R)
        .rule(ml, '1', gr, 'B', Dir::R)
        .rule(ml, BLANK, qa, BLANK, Dir::S)
        .rule(ml, 'C', rf, 'C', Dir::R)
        .rule(ml, 'D', rf, 'D', Dir::R)
        .otherwise(ml, qr, Dir::S);

    b.rule(gr, '0', gr, '0', Dir::R)
        .rule(gr, '1', gr, '1', Dir::R)
        .rule(gr, BLANK, mr, BLANK, Dir::L)
        .rule(gr, 'C', mr, 'C', Dir::L)
        .rule(gr, 'D', mr, 'D', Dir::L)
        .otherwise(gr, qr, Dir::S);

    b.rule(mr, '0', bk, 'C', Dir::L)
        .rule(mr, '1', bk, 'D', Dir::L)
        .otherwise(mr, qr, Dir::S);

    b.rule(bk, '0', bk, '0', Dir::L)
        .rule(bk, '1', bk, '1', Dir::L)
        .rule(bk, 'A', ml, 'A', Dir::R)
        .rule(bk, 'B', ml, 'B', Dir::R)
        .otherwise(bk, qr, Dir::S);

    b.rule(rf, BLANK, rt, BLANK, Dir::L)
        .otherwise(rf, rf, Dir::R);

    b.rule(rt, 'C', l0, BLANK, Dir::L)
        .rule(rt, 'D', l1, BLANK, Dir::L)
        .rule(rt, 'p', qa, 'p', Dir::S)
        .otherwise(rt, qr, Dir::S);

    for (q, same, other) in [(l0, 'A', 'B'), (l1, 'B', 'A')] {
        b.rule(q, 'C', q, 'C', Dir::L)
            .rule(q, 'D', q, 'D', Dir::L)
            .rule(q, 'p', q, 'p', Dir::L)
            .rule(q, same, rf, 'p', Dir::R)
            .rule(q, other, qr, other, Dir::S)
            .otherwise(q, qr, Dir::S);
    }
    b.build().unwrap()
}
