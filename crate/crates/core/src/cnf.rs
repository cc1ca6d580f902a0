//! CNF formulas, truth assignments, DIMACS input and the brute-force oracle.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const BRUTE_FORCE_CAP: usize = 24;

/// A variable (1-based) with a polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: usize,
    positive: bool,
}

impl Literal {
    pub fn positive(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn negative(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn new(var: usize, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn var(self) -> usize {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn from_dimacs(value: i64) -> Option<Self> {
        (value != 0).then(|| Literal::new(value.unsigned_abs() as usize, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    /// Role-tag fragment: `x:3` or `nx:3`.
    pub fn tag(self) -> String {
        format!("{}:{}", if self.positive { "x" } else { "nx" }, self.var)
    }

    pub fn value_under(self, asg: &Assignment) -> bool {
        asg.value(self.var) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "!x{}", self.var)
        }
    }
}

pub type Clause = Vec<Literal>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfInstance {
    alpha: usize,
    clauses: Vec<Clause>,
}

impl CnfInstance {
    pub fn new(alpha: usize, clauses: Vec<Clause>) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidInstance("at least one variable is required".into()));
        }
        for (i, clause) in clauses.iter().enumerate() {
            let n = i + 1;
            if clause.is_empty() || clause.len() > 3 {
                return Err(Error::InvalidInstance(format!(
                    "clause {n} has {} literals, expected 1 to 3",
                    clause.len()
                )));
            }
            for (k, lit) in clause.iter().enumerate() {
                if lit.var == 0 || lit.var > alpha {
                    return Err(Error::InvalidInstance(format!(
                        "clause {n} uses variable {} outside 1..={alpha}",
                        lit.var
                    )));
                }
                if clause[..k].iter().any(|other| other.var == lit.var) {
                    return Err(Error::InvalidInstance(format!(
                        "clause {n} mentions variable {} twice",
                        lit.var
                    )));
                }
            }
        }
        Ok(CnfInstance { alpha, clauses })
    }

    /// Convenience constructor from DIMACS-style signed integers.
    pub fn from_ints(alpha: usize, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| {
                        Literal::from_dimacs(v)
                            .ok_or_else(|| Error::InvalidInstance("literal 0".into()))
                    })
                    .collect::<Result<Clause>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CnfInstance::new(alpha, clauses)
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// The same clauses over `alpha.max(self.alpha)` variables.
    pub fn padded(&self, alpha: usize) -> CnfInstance {
        CnfInstance {
            alpha: alpha.max(self.alpha),
            clauses: self.clauses.clone(),
        }
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.alpha, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// Short hex digest of the canonical DIMACS text.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_dimacs().as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CnfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "true");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c.iter().map(Literal::to_string).collect();
                format!("({})", lits.join(" | "))
            })
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

/// Truth values for variables `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all_false(alpha: usize) -> Self {
        Assignment(vec![false; alpha])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn satisfies(&self, instance: &CnfInstance) -> bool {
        self.0.len() >= instance.alpha
            && instance
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| l.value_under(self)))
    }

    /// The first `alpha` values.
    pub fn truncated(&self, alpha: usize) -> Assignment {
        Assignment(self.0[..alpha.min(self.0.len())].to_vec())
    }

    /// Extends with `false` up to `alpha` variables.
    pub fn extended(&self, alpha: usize) -> Assignment {
        let mut values = self.0.clone();
        values.resize(alpha.max(values.len()), false);
        Assignment(values)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("x{}={}", i + 1, if v { "T" } else { "F" }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(lineno, "second problem line".into()));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(err(lineno, format!("malformed problem line `{line}`")));
            }
            let alpha = fields[2]
                .parse()
                .map_err(|_| err(lineno, format!("bad variable count `{}`", fields[2])))?;
            let beta = fields[3]
                .parse()
                .map_err(|_| err(lineno, format!("bad clause count `{}`", fields[3])))?;
            header = Some((alpha, beta, lineno));
            continue;
        }
        let Some((alpha, _, _)) = header else {
            return Err(err(lineno, "clause before the problem line".into()));
        };
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| err(lineno, format!("bad literal `{token}`")))?;
            match Literal::from_dimacs(value) {
                None => {
                    if current.is_empty() {
                        return Err(err(lineno, "empty clause".into()));
                    }
                    clauses.push(std::mem::take(&mut current));
                }
                Some(lit) => {
                    if lit.var() > alpha {
                        return Err(err(
                            lineno,
                            format!("variable {} exceeds the declared {alpha}", lit.var()),
                        ));
                    }
                    current.push(lit);
                    if current.len() > 3 {
                        return Err(err(lineno, "clause has more than 3 literals".into()));
                    }
                }
            }
        }
    }
    let Some((alpha, beta, header_line)) = header else {
        return Err(err(0, "missing problem line".into()));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != beta {
        return Err(err(
            header_line,
            format!("header declares {beta} clauses, found {}", clauses.len()),
        ));
    }
    CnfInstance::new(alpha, clauses).map_err(|e| err(header_line, e.to_string()))
}

/// First satisfying assignment in lexicographic order (`x1` most significant, false first).
pub fn brute_force_sat(instance: &CnfInstance) -> Result<Option<Assignment>> {
    let alpha = instance.alpha();
    if alpha > BRUTE_FORCE_CAP {
        return Err(Error::TooManyVariables {
            alpha,
            cap: BRUTE_FORCE_CAP,
        });
    }
    for bits in 0u32..(1u32 << alpha) {
        let values = (0..alpha).map(|i| bits >> (alpha - 1 - i) & 1 == 1).collect();
        let asg = Assignment::new(values);
        if asg.satisfies(instance) {
            return Ok(Some(asg));
        }
    }
    Ok(None)
}

/// Satisfying assignments of one clause, restricted to its variables (sorted), listed
/// with `true` before `false` in lexicographic order.
pub fn clause_assignments(clause: &[Literal]) -> Vec<Vec<(usize, bool)>> {
    let mut vars: Vec<usize> = clause.iter().map(|l| l.var()).collect();
    vars.sort_unstable();
    let k = vars.len();
    (0..1u32 << k)
        .map(|bits| {
            vars.iter()
                .enumerate()
                .map(|(i, &v)| (v, bits >> (k - 1 - i) & 1 == 0))
                .collect::<Vec<_>>()
        })
        .filter(|asg| {
            clause
                .iter()
                .any(|l| asg.iter().any(|&(v, b)| v == l.var() && b == l.is_positive()))
        })
        .collect()
}
