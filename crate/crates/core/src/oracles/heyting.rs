//! The surrender-game oracle representing the Heyting implication `g ⇒ h`.
//!
//! Arthur may additionally play `pair(2, w)`: he surrenders with parameter
//! `w`, ending the game. A strategy `(e, σ)` for the reduction of `g` to `h`
//! is *valid* when every play ends in a win or a surrender; `š(e, σ)` is the
//! set of parameters reachable by some Merlin play, and `s(e)` collects
//! `š(e, σ)` over all valid Nimue tables `σ`.

use std::collections::{BTreeMap, BTreeSet};

use super::{Family, FiniteOracle, NatSet, OracleError};
use crate::game::{for_each_play, key_at, ArthurStrategy, GameBounds, LeafKind, NimueKey, Terminal};
use crate::vm::{nat, unpair, Budget, Nat, Program};

/// Tag of the surrender move in Arthur's output.
pub const SURRENDER_TAG: u64 = 2;

/// Largest accepted number of Arthur candidates.
pub const MAX_PROGRAMS: usize = 64;
/// Largest accepted depth.
pub const MAX_DEPTH: usize = 6;

/// Limits of the double enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// The Arthur candidates; the oracle is defined at their codes.
    pub programs: Vec<Program>,
    /// Arthur turns per play.
    pub depth: usize,
    /// Steps per Arthur turn.
    pub budget: Budget,
    /// Most Nimue tables examined per candidate.
    pub max_tables: usize,
}

impl SearchBounds {
    pub fn new(programs: Vec<Program>, depth: usize, budget: Budget) -> SearchBounds {
        SearchBounds { programs, depth, budget, max_tables: 4096 }
    }
}

/// The surrender parameter of an Arthur output, if it is one.
pub fn surrender_parameter(output: &Nat) -> Option<Nat> {
    let (tag, w) = unpair(output);
    (tag == nat(SURRENDER_TAG)).then_some(w)
}

fn exceeded(dimension: &'static str, value: usize, limit: usize) -> OracleError {
    OracleError::BoundsExceeded { dimension, value: value as u64, limit: limit as u64 }
}

struct Search<'a> {
    g: &'a FiniteOracle,
    h: &'a FiniteOracle,
    arthur: ArthurStrategy,
    bounds: GameBounds,
    max_tables: usize,
    tables: usize,
    found: BTreeSet<NatSet>,
}

enum Probe {
    Undecided(NimueKey, usize),
    Invalid,
    Valid(NatSet),
}

impl Search<'_> {
    /// Play out every Merlin branch under a partial table.
    fn probe(&self, assign: &BTreeMap<NimueKey, usize>) -> Probe {
        let mut result = Probe::Valid(NatSet::new());
        let rule = |v: &crate::game::NimueView<'_>| assign.get(v.key).copied();
        for_each_play(self.g, self.h, &self.arthur, &rule, self.bounds, &mut |t| match &t.terminal {
            Terminal::NimueMissing { n } => {
                result = Probe::Undecided(key_at(t, n), self.h.entry(n).len());
                false
            }
            Terminal::ArthurMalformed { arthur } => match (surrender_parameter(arthur), &mut result) {
                (Some(w), Probe::Valid(s)) => {
                    s.insert(w);
                    true
                }
                _ => {
                    result = Probe::Invalid;
                    false
                }
            },
            term if term.kind() == LeafKind::Win => true,
            _ => {
                result = Probe::Invalid;
                false
            }
        });
        result
    }

    fn enumerate(&mut self, assign: &mut BTreeMap<NimueKey, usize>) -> Result<(), OracleError> {
        self.tables += 1;
        if self.tables > self.max_tables {
            return Err(exceeded("nimue_tables", self.tables, self.max_tables));
        }
        match self.probe(assign) {
            Probe::Invalid => Ok(()),
            Probe::Valid(s) => {
                self.found.insert(s);
                Ok(())
            }
            Probe::Undecided(key, options) => {
                for c in 0..options {
                    assign.insert(key.clone(), c);
                    self.enumerate(assign)?;
                }
                assign.remove(&key);
                Ok(())
            }
        }
    }
}

/// `s(e)` for one Arthur program: the family of `š(e, σ)` over valid `σ`.
pub fn surrender_entry(
    g: &FiniteOracle,
    h: &FiniteOracle,
    e: &Program,
    bounds: GameBounds,
    max_tables: usize,
) -> Result<Family, OracleError> {
    let mut search =
        Search { g, h, arthur: ArthurStrategy::new(e.clone()), bounds, max_tables, tables: 0, found: BTreeSet::new() };
    search.enumerate(&mut BTreeMap::new())?;
    Ok(Family::new(search.found))
}

/// The T3 oracle `s` with `s(code(e)) = s(e)` for every candidate `e`.
pub fn heyting_surrender_oracle(
    g: &FiniteOracle,
    h: &FiniteOracle,
    bounds: &SearchBounds,
) -> Result<FiniteOracle, OracleError> {
    if bounds.programs.len() > MAX_PROGRAMS {
        return Err(exceeded("programs", bounds.programs.len(), MAX_PROGRAMS));
    }
    if bounds.depth > MAX_DEPTH {
        return Err(exceeded("depth", bounds.depth, MAX_DEPTH));
    }
    let game = GameBounds::new(bounds.depth, bounds.budget);
    let mut table = BTreeMap::new();
    for e in &bounds.programs {
        table.insert(e.code().clone(), surrender_entry(g, h, e, game, bounds.max_tables)?);
    }
    let points: Vec<Nat> = table.keys().cloned().collect();
    FiniteOracle::t3_sparse(points, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{named_basic, set, NamedBasic};
    use crate::vm::asm::parse;
    use crate::vm::builtin::oracle_echo;
    use crate::vm::transform::as_arthur;

    fn tagged(tag: u64, w: u64) -> Program {
        parse(&format!("li r1 {tag}\nli r2 {w}\npair r0 r1 r2\nhalt r0")).unwrap()
    }

    fn bounds(programs: Vec<Program>) -> SearchBounds {
        SearchBounds::new(programs, 3, Budget::steps(5_000))
    }

    #[test]
    fn never_surrendering_reduction_gives_empty_set() {
        let g = FiniteOracle::t0_u(&[3, 1]);
        let echo = as_arthur(&oracle_echo()).unwrap();
        let s = heyting_surrender_oracle(&g, &g, &bounds(vec![echo.clone()])).unwrap();
        assert!(s.entry(echo.code()).contains(&NatSet::new()));
    }

    #[test]
    fn immediate_surrender() {
        let g = named_basic(&NamedBasic::Bit, 2).unwrap();
        let h = FiniteOracle::t0_u(&[0]);
        let e = tagged(SURRENDER_TAG, 7);
        let s = heyting_surrender_oracle(&g, &h, &bounds(vec![e.clone()])).unwrap();
        assert_eq!(s.entry(e.code()), &Family::new([set([7])]));
    }

    #[test]
    fn malformed_moves_have_no_valid_table() {
        let g = FiniteOracle::t0_u(&[0]);
        let e = tagged(3, 0);
        let s = heyting_surrender_oracle(&g, &g, &bounds(vec![e.clone()])).unwrap();
        assert!(s.entry(e.code()).is_empty());
    }

    #[test]
    fn surrender_sets_depend_on_nimue() {
        // Arthur queries omega at 0 and surrenders with Merlin's reply:
        // Nimue's choice among {0},{1},{2} fixes the reachable parameter
        let g = FiniteOracle::t0_u(&[0]);
        let h = named_basic(&NamedBasic::Omega, 3).unwrap();
        let e = parse(
            "fst r1 r0\nsnd r2 r0\njz r2 ask\nsnd r3 r2\nli r4 2\npair r4 r4 r3\nhalt r4\nask:\nli r4 0\npair r4 r4 r1\nhalt r4",
        )
        .unwrap();
        let s = heyting_surrender_oracle(&g, &h, &bounds(vec![e.clone()])).unwrap();
        assert_eq!(s.entry(e.code()), &Family::new([set([0]), set([1]), set([2])]));
    }

    #[test]
    fn refuses_large_searches() {
        let g = FiniteOracle::t0_u(&[0]);
        let mut b = bounds(vec![]);
        b.depth = MAX_DEPTH + 1;
        assert!(matches!(
            heyting_surrender_oracle(&g, &g, &b),
            Err(OracleError::BoundsExceeded { dimension: "depth", .. })
        ));
        let h = named_basic(&NamedBasic::Omega, 3).unwrap();
        let mut b = bounds(vec![as_arthur(&oracle_echo()).unwrap()]);
        b.max_tables = 2;
        assert!(matches!(
            heyting_surrender_oracle(&g, &h, &b),
            Err(OracleError::BoundsExceeded { dimension: "nimue_tables", .. })
        ));
    }
}
