//! Shared generators for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use anm_core::oracles::{Family, FiniteOracle, PromiseProblem};
use anm_core::vm::{nat, Instr, Program, Reg};
use rand::Rng;

/// A random well-formed program over registers `r0..r3` with small constants.
///
/// With `loops` false every jump goes forward, so the program halts within
/// its length; with `loops` true jumps go anywhere but `pair` is left out,
/// keeping numbers small however long the program runs.
pub fn random_program(rng: &mut impl Rng, loops: bool, queries: bool) -> Program {
    let len = rng.gen_range(1..10usize);
    let mut instrs = Vec::with_capacity(len + 1);
    let reg = |rng: &mut dyn rand::RngCore| rng.gen_range(0..4u16) as Reg;
    for i in 0..len {
        let ins = loop {
            let op = rng.gen_range(0..9);
            let ins = match op {
                0 => Instr::LoadImm(reg(rng), nat(rng.gen_range(0..6))),
                1 => Instr::Move(reg(rng), reg(rng)),
                2 => Instr::Add(reg(rng), reg(rng), reg(rng)),
                3 => Instr::Monus(reg(rng), reg(rng), reg(rng)),
                4 => {
                    let target = if loops { rng.gen_range(0..=len) } else { rng.gen_range(i + 1..=len) };
                    Instr::Jz(reg(rng), target)
                }
                5 if !loops => Instr::Pair(reg(rng), reg(rng), reg(rng)),
                6 => Instr::UnpairL(reg(rng), reg(rng)),
                7 => Instr::UnpairR(reg(rng), reg(rng)),
                8 if queries => Instr::Query(reg(rng), reg(rng)),
                _ => continue,
            };
            break ins;
        };
        instrs.push(ins);
    }
    instrs.push(Instr::Halt(reg(rng)));
    Program::new(instrs).expect("generated programs are well-formed")
}

/// A random T0 or T1 oracle on 1..=4 points with values below 4.
pub fn random_t01(rng: &mut impl Rng) -> FiniteOracle {
    let n = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        FiniteOracle::t0_u(&v)
    } else {
        let v: Vec<Option<u64>> = (0..n).map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..4))).collect();
        FiniteOracle::t1_u(&v)
    }
}

/// A random T3 oracle: up to three points, families of up to two sets, sets
/// of up to two elements of `{0, 1, 2}`.
pub fn random_t3(rng: &mut impl Rng) -> FiniteOracle {
    let points = rng.gen_range(1..=3);
    FiniteOracle::t3((0..points).map(|_| {
        let size = rng.gen_range(0..=2);
        Family::new((0..size).map(|_| {
            let k = rng.gen_range(0..=2);
            let mut s = BTreeSet::new();
            while s.len() < k {
                s.insert(nat(rng.gen_range(0..3)));
            }
            s
        }))
    }))
}

/// A random promise problem within `{0..9}` with both sides inhabited.
pub fn random_promise(rng: &mut impl Rng) -> PromiseProblem {
    loop {
        let labels: Vec<u8> = (0..10).map(|_| rng.gen_range(0..3)).collect();
        let side = |l: u8| -> Vec<u64> { (0..10u64).filter(|&i| labels[i as usize] == l).collect() };
        if let Ok(pp) = PromiseProblem::from_u64(&side(1), &side(2)) {
            if !pp.p().is_empty() && !pp.q().is_empty() {
                return pp;
            }
        }
    }
}
