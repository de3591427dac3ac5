//! CNF formulas and the DIMACS `p cnf` reader.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, negated: true }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("variable {var} out of range for {vars} variables")]
    VariableOutOfRange { var: usize, vars: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    vars: usize,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<Lit>>) -> Result<Cnf, CnfError> {
        for lit in clauses.iter().flatten() {
            if lit.var >= vars {
                return Err(CnfError::VariableOutOfRange { var: lit.var, vars });
            }
        }
        Ok(Cnf { vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    /// Parses DIMACS CNF (`p cnf <vars> <clauses>`, clauses terminated by
    /// `0`, 1-based signed literals).
    pub fn parse_dimacs(src: &str) -> Result<Cnf, CnfError> {
        let mut vars = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| CnfError::Parse { line: line_no, msg };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let w: Vec<&str> = rest.split_whitespace().collect();
                match w.as_slice() {
                    ["cnf", v, _c] => {
                        vars = Some(v.parse().map_err(|_| err(format!("bad count {v:?}")))?)
                    }
                    _ => return Err(err("expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            let Some(nv) = vars else {
                return Err(err("clause before problem line".into()));
            };
            for tok in line.split_whitespace() {
                let x: i64 = tok
                    .parse()
                    .map_err(|_| err(format!("bad literal {tok:?}")))?;
                if x == 0 {
                    clauses.push(std::mem::take(&mut current));
                    continue;
                }
                let var = (x.unsigned_abs() - 1) as usize;
                if var >= nv {
                    return Err(CnfError::VariableOutOfRange { var, vars: nv });
                }
                current.push(Lit {
                    var,
                    negated: x < 0,
                });
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let vars = vars.ok_or(CnfError::Parse {
            line: 0,
            msg: "missing problem line".into(),
        })?;
        Cnf::new(vars, clauses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs() {
        let f = Cnf::parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3\n0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(
            f.clauses(),
            &[
                vec![Lit::pos(0), Lit::neg(1)],
                vec![Lit::pos(1), Lit::pos(2)]
            ]
        );
        assert!(f.eval(&[true, true, false]));
        assert!(!f.eval(&[false, true, false]));
        assert!(matches!(
            Cnf::parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(CnfError::VariableOutOfRange { var: 1, vars: 1 })
        ));
    }
}
