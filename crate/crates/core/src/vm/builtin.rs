//! Canonical small programs.

use super::{nat, Instr, Nat, Program};

fn fixed(instrs: Vec<Instr>) -> Program {
    Program::new(instrs).expect("builtin program is well-formed")
}

/// Names accepted by [`builtin`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    OracleEcho,
    OracleNegate,
    Loop,
    HaltConst(Nat),
    Flip,
}

/// Look up a builtin program by name.
pub fn builtin(name: &Builtin) -> Program {
    match name {
        Builtin::OracleEcho => oracle_echo(),
        Builtin::OracleNegate => oracle_negate(),
        Builtin::Loop => loop_program(),
        Builtin::HaltConst(k) => halt_nat(k.clone()),
        Builtin::Flip => flip(),
    }
}

/// Query the oracle at the input and return the reply.
pub fn oracle_echo() -> Program {
    fixed(vec![Instr::Move(1, 0), Instr::Query(2, 1), Instr::Halt(2)])
}

/// Query the oracle at the input and return `1 ∸ reply`.
pub fn oracle_negate() -> Program {
    fixed(vec![Instr::LoadImm(1, nat(1)), Instr::Query(2, 0), Instr::Monus(3, 1, 2), Instr::Halt(3)])
}

/// Jump to itself forever.
pub fn loop_program() -> Program {
    fixed(vec![Instr::Jz(1, 0)])
}

/// Ignore the input and halt with `k`.
pub fn halt_const(k: u64) -> Program {
    halt_nat(nat(k))
}

fn halt_nat(k: Nat) -> Program {
    fixed(vec![Instr::LoadImm(0, k), Instr::Halt(0)])
}

/// Exchange 0 and 1 (`1 ∸ x`; larger values map to 0).
pub fn flip() -> Program {
    fixed(vec![Instr::LoadImm(1, nat(1)), Instr::Monus(0, 1, 0), Instr::Halt(0)])
}

/// Return the input unchanged.
pub fn identity() -> Program {
    fixed(vec![Instr::Halt(0)])
}

/// First projection of a pair.
pub fn projection_fst() -> Program {
    fixed(vec![Instr::UnpairL(0, 0), Instr::Halt(0)])
}

/// Query the constant `k`, then halt with the reply.
pub fn query_const(k: u64) -> Program {
    fixed(vec![Instr::LoadImm(1, nat(k)), Instr::Query(2, 1), Instr::Halt(2)])
}
