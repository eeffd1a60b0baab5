//! Specialised reducibility checks and the `J_g` / `j^♮` tables.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    verify_winning, ArthurStrategy, Frontier, GameBounds, GameTrace, GameVerdict, Move, NimueStrategy, Terminal,
};
use crate::oracles::{Family, FiniteOracle, NatSet};
use crate::vm::{nat, pair, run_traced, Budget, Nat, NoOracle, Outcome, Program};

/// The play of a T1 reduction in which Arthur runs `e` and every query is
/// answered by the oracle's unique value.
fn t1_trace(m: &Nat, value: Option<&Nat>, g: &FiniteOracle, queries: &[Nat], terminal: Terminal) -> GameTrace {
    let moves = queries
        .iter()
        .filter_map(|q| {
            g.value(q).map(|v| Move {
                arthur: pair(&nat(0), q),
                query: q.clone(),
                nimue_choice: 0,
                nimue_set: BTreeSet::from([v.clone()]),
                merlin: Some(v.clone()),
            })
        })
        .collect();
    GameTrace { m: m.clone(), secret_index: 0, secret: value.into_iter().cloned().collect(), moves, terminal }
}

/// `φ_e^g` extends `f`: for every `m` with `f(m)` defined, `run(e, m, g)`
/// halts with `f(m)`. Wrong values and faults lose; timeouts are unknown.
pub fn check_t1_reduction(e: &Program, f: &FiniteOracle, g: &FiniteOracle, budget: Budget) -> GameVerdict {
    let mut frontier = Frontier::default();
    for m in f.points() {
        let want = match f.value(m) {
            Some(v) => v,
            None => continue,
        };
        let ex = run_traced(e, m, g, budget);
        match ex.outcome {
            Outcome::Halts(v) if &v == want => frontier.wins += 1,
            Outcome::Halts(v) => {
                let terminal = Terminal::Declared { arthur: pair(&nat(1), &v), value: v, success: false };
                return GameVerdict::Lose(Box::new(t1_trace(m, Some(want), g, &ex.queries, terminal)));
            }
            Outcome::OracleFault(q) => {
                let terminal = Terminal::QueryEmptyFamily { arthur: pair(&nat(0), &q), n: q };
                return GameVerdict::Lose(Box::new(t1_trace(m, Some(want), g, &ex.queries, terminal)));
            }
            Outcome::OutOfBudget => {
                frontier.timeouts += 1;
                if frontier.first.is_none() {
                    let t = t1_trace(m, Some(want), g, &ex.queries, Terminal::ArthurTimeout);
                    frontier.first = Some(Box::new(t));
                }
            }
        }
    }
    if frontier.timeouts > 0 {
        GameVerdict::Unknown(frontier)
    } else {
        GameVerdict::Win
    }
}

/// `f` is computable: for every `m` with `f(m)` inhabited, `run(e, m)` (no
/// oracle) halts with an element of `⋂ f(m)`.
pub fn check_degree_zero(f: &FiniteOracle, e: &Program, budget: Budget) -> GameVerdict {
    let mut frontier = Frontier::default();
    for m in f.points() {
        let fam = f.entry(m);
        let meet = match fam.intersection() {
            Some(s) => s,
            None => continue,
        };
        let trace = |terminal| GameTrace {
            m: m.clone(),
            secret_index: 0,
            secret: fam.sets()[0].clone(),
            moves: vec![],
            terminal,
        };
        let ex = run_traced(e, m, &NoOracle, budget);
        match ex.outcome {
            Outcome::Halts(v) if meet.contains(&v) => frontier.wins += 1,
            Outcome::Halts(v) => {
                // the secret Merlin picks is one that misses v
                let idx = fam.sets().iter().position(|s| !s.contains(&v)).unwrap_or(0);
                let mut t = trace(Terminal::Declared { arthur: pair(&nat(1), &v), value: v, success: false });
                t.secret_index = idx;
                t.secret = fam.sets()[idx].clone();
                return GameVerdict::Lose(Box::new(t));
            }
            Outcome::OracleFault(q) => return GameVerdict::Lose(Box::new(trace(Terminal::ArthurFault { query: q }))),
            Outcome::OutOfBudget => {
                frontier.timeouts += 1;
                if frontier.first.is_none() {
                    frontier.first = Some(Box::new(trace(Terminal::ArthurTimeout)));
                }
            }
        }
    }
    if frontier.timeouts > 0 {
        GameVerdict::Unknown(frontier)
    } else {
        GameVerdict::Win
    }
}

/// Certified membership `e ∈ J_g(U)`: the strategy wins the reduction of the
/// basic oracle `{U}` to `g`.
pub fn jg_membership(
    arthur: &ArthurStrategy,
    nimue: &NimueStrategy,
    u: &NatSet,
    g: &FiniteOracle,
    bounds: GameBounds,
) -> GameVerdict {
    verify_winning(&FiniteOracle::basic(Family::new([u.clone()])), g, arthur, nimue, bounds)
}

/// A table `U ↦ J(U)` over subsets `U` of a finite universe; `J(U)` is a set
/// of strategy indices.
pub type JTable = BTreeMap<NatSet, BTreeSet<Nat>>;

/// All subsets of `{0, …, k−1}`.
pub fn subsets(k: u32) -> Vec<NatSet> {
    (0..1u64 << k).map(|mask| (0..k as u64).filter(|i| mask >> i & 1 == 1).map(nat).collect()).collect()
}

/// `J_g` restricted to the given strategies: `i ∈ J(U)` iff strategy `i`
/// certifiably wins `{U} ⪯ g`, for every `U ⊆ {0, …, k−1}`.
pub fn jg_table(
    strategies: &[(ArthurStrategy, NimueStrategy)],
    g: &FiniteOracle,
    k: u32,
    bounds: GameBounds,
) -> JTable {
    subsets(k)
        .into_iter()
        .map(|u| {
            let members = strategies
                .iter()
                .enumerate()
                .filter(|(_, (a, n))| jg_membership(a, n, &u, g, bounds).is_win())
                .map(|(i, _)| nat(i as u64))
                .collect();
            (u, members)
        })
        .collect()
}

/// `j^♮(J)(m) = {U | m ∈ J(U)}`.
pub fn j_natural(j: &JTable, m: &Nat) -> BTreeSet<NatSet> {
    j.iter().filter(|(_, ms)| ms.contains(m)).map(|(u, _)| u.clone()).collect()
}

/// The whole transpose `m ↦ j^♮(J)(m)` over the values occurring in `J`.
pub fn j_natural_table(j: &JTable) -> BTreeMap<Nat, BTreeSet<NatSet>> {
    let ms: BTreeSet<&Nat> = j.values().flatten().collect();
    ms.into_iter().map(|m| (m.clone(), j_natural(j, m))).collect()
}

/// Transpose back: `U ↦ {m | U ∈ t(m)}` for each `U` in `universe`.
pub fn j_from_natural(t: &BTreeMap<Nat, BTreeSet<NatSet>>, universe: &[NatSet]) -> JTable {
    universe
        .iter()
        .map(|u| (u.clone(), t.iter().filter(|(_, us)| us.contains(u)).map(|(m, _)| m.clone()).collect()))
        .collect()
}
