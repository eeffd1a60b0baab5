//! Budgeted relative halting sets `H_0^A`, `H_1^A` over a finite program pool.

use std::collections::BTreeSet;

use crate::vm::builtin::{flip, halt_const, loop_program};
use crate::vm::transform::{postcompose, smn};
use crate::vm::{nat, run, Budget, Instr, Nat, Outcome, Program, SetOracle};

use super::{NatSet, PromiseProblem};

/// `H_0`, `H_1` and the codes still running at the budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaltingSets {
    pub h0: NatSet,
    pub h1: NatSet,
    pub unknown: NatSet,
}

impl HaltingSets {
    /// The promise problem `(H_0, H_1)` when both sides are inhabited.
    pub fn promise(&self) -> Option<PromiseProblem> {
        PromiseProblem::new(self.h0.clone(), self.h1.clone()).ok()
    }

    /// `Some(i)` when `code ∈ H_i`.
    pub fn side(&self, code: &Nat) -> Option<u8> {
        if self.h0.contains(code) {
            Some(0)
        } else if self.h1.contains(code) {
            Some(1)
        } else {
            None
        }
    }
}

/// `H_i = {e ∈ pool | run(e, 0, 1_A, budget) = Halts(i)}`; codes still running
/// at the budget are `unknown`; other values and faults belong to neither.
pub fn relative_halting_sets(a: &BTreeSet<Nat>, pool: &[Program], budget: Budget) -> HaltingSets {
    classify(a, pool.iter().map(|e| (e.code().clone(), e.clone())), budget)
}

/// [`relative_halting_sets`] keyed by arbitrary codes: each code stands for
/// the program it decodes to, so non-canonical codes are classified too.
pub fn relative_halting_sets_of_codes(a: &BTreeSet<Nat>, codes: &[Nat], budget: Budget) -> HaltingSets {
    classify(a, codes.iter().map(|c| (c.clone(), Program::decode(c))), budget)
}

fn classify(a: &BTreeSet<Nat>, entries: impl Iterator<Item = (Nat, Program)>, budget: Budget) -> HaltingSets {
    let oracle = SetOracle(a.clone());
    let mut out = HaltingSets { h0: NatSet::new(), h1: NatSet::new(), unknown: NatSet::new() };
    for (code, e) in entries {
        match run(&e, &nat(0), &oracle, budget) {
            Outcome::Halts(v) if v == nat(0) => out.h0.insert(code),
            Outcome::Halts(v) if v == nat(1) => out.h1.insert(code),
            Outcome::OutOfBudget => out.unknown.insert(code),
            _ => false,
        };
    }
    out
}

/// `pair(k, y) ↦ 1_A(k)`: the probe whose s-m-n specialisations decide
/// membership of `k` relative to the oracle.
pub fn membership_probe() -> Program {
    Program::new(vec![Instr::UnpairL(1, 0), Instr::Query(2, 1), Instr::Halt(2)]).expect("probe")
}

/// `smn(membership_probe, k)`: on input 0, asks the oracle about `k`.
pub fn probe_for(k: u64) -> Program {
    smn(&membership_probe(), &nat(k))
}

/// A pool of `size` oracle programs that all halt within a few hundred steps
/// on input 0 under any total 0/1 oracle: the membership probes for `0..4`,
/// their flips, constants, and sums/differences of two answers, in a fixed
/// order (cycling with growing offsets when `size` exceeds the base list).
pub fn coturing_pool(size: usize) -> Vec<Program> {
    let mut pool = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |p: Program, pool: &mut Vec<Program>| {
        if seen.insert(p.code().clone()) {
            pool.push(p);
        }
    };
    let mut round = 0u64;
    while pool.len() < size {
        let base = 4 * round;
        for k in base..base + 4 {
            push(probe_for(k), &mut pool);
            push(postcompose(&flip(), &probe_for(k)).expect("flip probe"), &mut pool);
        }
        for c in [0, 1, 2] {
            push(delayed_const(c, round), &mut pool);
        }
        for (i, j) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            push(two_query(base + i, base + j, Instr::Add(0, 1, 2)), &mut pool);
            push(two_query(base + i, base + j, Instr::Monus(0, 1, 2)), &mut pool);
        }
        round += 1;
    }
    pool.truncate(size);
    pool
}

fn delayed_const(c: u64, pad: u64) -> Program {
    let mut v: Vec<Instr> = (0..pad).map(|_| Instr::LoadImm(1, nat(0))).collect();
    v.extend([Instr::LoadImm(0, nat(c)), Instr::Halt(0)]);
    Program::new(v).expect("constant")
}

fn two_query(i: u64, j: u64, combine: Instr) -> Program {
    Program::new(vec![
        Instr::LoadImm(3, nat(i)),
        Instr::Query(1, 3),
        Instr::LoadImm(3, nat(j)),
        Instr::Query(2, 3),
        combine,
        Instr::Halt(0),
    ])
    .expect("two-query program")
}

/// Oracle-free programs for halting experiments: a mix of constants,
/// counted loops of various lengths (some beyond typical budgets) and
/// genuine non-terminating loops.
pub fn halting_pool(size: usize) -> Vec<Program> {
    let mut pool = Vec::new();
    let mut k = 0u64;
    while pool.len() < size {
        pool.push(match k % 5 {
            0 => halt_const(k % 3),
            1 => loop_program(),
            2 => countdown(5 * k),
            3 => countdown(40 * k + 7),
            _ => Program::new(vec![Instr::LoadImm(1, nat(k)), Instr::Jz(2, 0)]).expect("loop"),
        });
        k += 1;
    }
    pool
}

/// Count down from `n` (about `3n` steps), then halt with 0.
pub fn countdown(n: u64) -> Program {
    Program::new(vec![
        Instr::LoadImm(1, nat(n)),
        Instr::LoadImm(2, nat(1)),
        Instr::Jz(1, 6),
        Instr::Monus(1, 1, 2),
        Instr::Jz(3, 2),
        Instr::Halt(3),
        Instr::Halt(3),
    ])
    .expect("countdown")
}
