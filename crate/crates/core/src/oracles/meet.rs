//! The T1 meet `f ⋏ g` as a budgeted three-valued oracle.

use std::collections::BTreeMap;

use super::{FiniteOracle, OracleError};
use crate::vm::{decode_seq, encode_seq, run, Answer, Budget, Nat, Outcome, Program, QueryOracle};

/// `(f ⋏ g)(⟨p, q, m, n⟩)`: the common value of `φ_p^f(m)` and `φ_q^g(n)`.
///
/// Answers are computed under a fixed budget: `Defined(v)` when both sides
/// halt with `v`; `Undefined` when both halt with different values, when the
/// query is not a 4-tuple, or when either side faults on an undefined point
/// of its (finite, hence fully known) oracle; `Unknown` when a side is still
/// running at the budget.
#[derive(Clone, Debug)]
pub struct MeetT1 {
    f: FiniteOracle,
    g: FiniteOracle,
    budget: Budget,
}

/// The query `⟨p, q, m, n⟩`.
pub fn meet_query(p: &Nat, q: &Nat, m: &Nat, n: &Nat) -> Nat {
    encode_seq(&[p.clone(), q.clone(), m.clone(), n.clone()])
}

/// Build the meet of two T1 oracles.
pub fn meet_t1(f: &FiniteOracle, g: &FiniteOracle, budget: Budget) -> MeetT1 {
    MeetT1 { f: f.clone(), g: g.clone(), budget }
}

impl MeetT1 {
    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// The same oracle under another budget.
    pub fn with_budget(&self, budget: Budget) -> MeetT1 {
        MeetT1 { budget, ..self.clone() }
    }

    /// The defined answers at `queries` as a finite T1 oracle (declared on
    /// exactly those points), together with the points left `Unknown`.
    pub fn materialize(&self, queries: &[Nat]) -> Result<(FiniteOracle, Vec<Nat>), OracleError> {
        let mut values = BTreeMap::new();
        let mut unknown = Vec::new();
        for q in queries {
            match self.answer(q) {
                Answer::Defined(v) => {
                    values.insert(q.clone(), v);
                }
                Answer::Undefined => {}
                Answer::Unknown => unknown.push(q.clone()),
            }
        }
        Ok((FiniteOracle::t1_sparse(queries.iter().cloned(), values)?, unknown))
    }
}

impl QueryOracle for MeetT1 {
    fn answer(&self, query: &Nat) -> Answer {
        let parts = match decode_seq(query) {
            Some(v) if v.len() == 4 => v,
            _ => return Answer::Undefined,
        };
        let (p, q) = (Program::decode(&parts[0]), Program::decode(&parts[1]));
        let left = run(&p, &parts[2], &self.f, self.budget);
        let right = run(&q, &parts[3], &self.g, self.budget);
        match (left, right) {
            (Outcome::Halts(a), Outcome::Halts(b)) if a == b => Answer::Defined(a),
            (Outcome::Halts(_), Outcome::Halts(_)) => Answer::Undefined,
            (Outcome::OracleFault(_), _) | (_, Outcome::OracleFault(_)) => Answer::Undefined,
            _ => Answer::Unknown,
        }
    }
}
