//! A deterministic register machine with an oracle-query instruction.
//!
//! Programs are finite instruction lists over at most [`MAX_REGS`] registers
//! holding arbitrary-precision naturals. Every natural number decodes to a
//! program, so the machine also serves as an effective numbering of partial
//! computable functions with oracle.

pub mod asm;
pub mod builtin;
pub mod codec;
pub mod routines;
pub mod transform;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use codec::{
    cons, decode_seq, encode_seq, encode_seq_u, fst, nat, pair, pair_u, snd, sum_tag, sum_untag, unpair, Nat, Side,
};

/// Number of addressable registers.
pub const MAX_REGS: usize = 256;

/// Register index.
pub type Reg = u16;

/// Errors raised when building or transforming programs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VmError {
    #[error("register r{0} is out of range (max {max})", max = MAX_REGS - 1)]
    RegisterOutOfRange(usize),
    #[error("jump target {target} at instruction {at} exceeds program length {len}")]
    JumpOutOfRange { at: usize, target: usize, len: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("program uses register r{0}, which the transformation reserves")]
    ReservedRegister(usize),
    #[error("the post-processing program must not query the oracle")]
    OracleInTransformer,
    #[error("budget must allow at least one step")]
    ZeroBudget,
}

/// One machine instruction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    /// `r := k`
    LoadImm(Reg, Nat),
    /// `d := s`
    Move(Reg, Reg),
    /// `d := a + b`
    Add(Reg, Reg, Reg),
    /// `d := a ∸ b` (truncated subtraction)
    Monus(Reg, Reg, Reg),
    /// jump to the target when `r = 0`
    Jz(Reg, usize),
    /// `d := pair(a, b)`
    Pair(Reg, Reg, Reg),
    /// `d := fst(s)`
    UnpairL(Reg, Reg),
    /// `d := snd(s)`
    UnpairR(Reg, Reg),
    /// `d := oracle(s)`
    Query(Reg, Reg),
    /// stop with the value of `r`
    Halt(Reg),
}

impl Instr {
    /// Opcode number used by the instruction code.
    pub fn opcode(&self) -> u64 {
        match self {
            Instr::LoadImm(..) => 0,
            Instr::Move(..) => 1,
            Instr::Add(..) => 2,
            Instr::Monus(..) => 3,
            Instr::Jz(..) => 4,
            Instr::Pair(..) => 5,
            Instr::UnpairL(..) => 6,
            Instr::UnpairR(..) => 7,
            Instr::Query(..) => 8,
            Instr::Halt(..) => 9,
        }
    }

    /// Registers mentioned by the instruction.
    pub fn registers(&self) -> Vec<Reg> {
        match *self {
            Instr::LoadImm(r, _) | Instr::Jz(r, _) | Instr::Halt(r) => vec![r],
            Instr::Move(d, s) | Instr::UnpairL(d, s) | Instr::UnpairR(d, s) | Instr::Query(d, s) => vec![d, s],
            Instr::Add(d, a, b) | Instr::Monus(d, a, b) | Instr::Pair(d, a, b) => vec![d, a, b],
        }
    }

    /// Apply a register renaming.
    pub fn map_regs(&self, f: impl Fn(Reg) -> Reg) -> Instr {
        match self {
            Instr::LoadImm(r, k) => Instr::LoadImm(f(*r), k.clone()),
            Instr::Move(d, s) => Instr::Move(f(*d), f(*s)),
            Instr::Add(d, a, b) => Instr::Add(f(*d), f(*a), f(*b)),
            Instr::Monus(d, a, b) => Instr::Monus(f(*d), f(*a), f(*b)),
            Instr::Jz(r, t) => Instr::Jz(f(*r), *t),
            Instr::Pair(d, a, b) => Instr::Pair(f(*d), f(*a), f(*b)),
            Instr::UnpairL(d, s) => Instr::UnpairL(f(*d), f(*s)),
            Instr::UnpairR(d, s) => Instr::UnpairR(f(*d), f(*s)),
            Instr::Query(d, s) => Instr::Query(f(*d), f(*s)),
            Instr::Halt(r) => Instr::Halt(f(*r)),
        }
    }

    /// Gödel number `pair(opcode, args)`.
    pub fn code(&self) -> Nat {
        let r = |x: Reg| nat(x as u64);
        let three = |d: Reg, a: Reg, b: Reg| pair(&r(d), &pair(&r(a), &r(b)));
        let args = match self {
            Instr::LoadImm(d, k) => pair(&r(*d), k),
            Instr::Move(d, s) | Instr::UnpairL(d, s) | Instr::UnpairR(d, s) | Instr::Query(d, s) => {
                pair(&r(*d), &r(*s))
            }
            Instr::Add(d, a, b) | Instr::Monus(d, a, b) | Instr::Pair(d, a, b) => three(*d, *a, *b),
            Instr::Jz(c, t) => pair(&r(*c), &nat(*t as u64)),
            Instr::Halt(c) => r(*c),
        };
        pair(&nat(self.opcode()), &args)
    }

    /// Decode an instruction code; `None` for ill-formed codes (bad opcode,
    /// register out of range, jump target beyond `len`).
    pub fn decode(code: &Nat, len: usize) -> Option<Instr> {
        let reg = |n: &Nat| n.to_usize().filter(|&x| x < MAX_REGS).map(|x| x as Reg);
        let two = |n: &Nat| {
            let (a, b) = unpair(n);
            Some((reg(&a)?, reg(&b)?))
        };
        let three = |n: &Nat| {
            let (d, rest) = unpair(n);
            let (a, b) = unpair(&rest);
            Some((reg(&d)?, reg(&a)?, reg(&b)?))
        };
        let (op, args) = unpair(code);
        let instr = match op.to_u64()? {
            0 => {
                let (d, k) = unpair(&args);
                Instr::LoadImm(reg(&d)?, k)
            }
            1 => two(&args).map(|(d, s)| Instr::Move(d, s))?,
            2 => three(&args).map(|(d, a, b)| Instr::Add(d, a, b))?,
            3 => three(&args).map(|(d, a, b)| Instr::Monus(d, a, b))?,
            4 => {
                let (c, t) = unpair(&args);
                let t = t.to_usize().filter(|&t| t <= len)?;
                Instr::Jz(reg(&c)?, t)
            }
            5 => three(&args).map(|(d, a, b)| Instr::Pair(d, a, b))?,
            6 => two(&args).map(|(d, s)| Instr::UnpairL(d, s))?,
            7 => two(&args).map(|(d, s)| Instr::UnpairR(d, s))?,
            8 => two(&args).map(|(d, s)| Instr::Query(d, s))?,
            9 => Instr::Halt(reg(&args)?),
            _ => return None,
        };
        Some(instr)
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::LoadImm(r, k) => write!(f, "li r{r} {k}"),
            Instr::Move(d, s) => write!(f, "mov r{d} r{s}"),
            Instr::Add(d, a, b) => write!(f, "add r{d} r{a} r{b}"),
            Instr::Monus(d, a, b) => write!(f, "sub r{d} r{a} r{b}"),
            Instr::Jz(r, t) => write!(f, "jz r{r} {t}"),
            Instr::Pair(d, a, b) => write!(f, "pair r{d} r{a} r{b}"),
            Instr::UnpairL(d, s) => write!(f, "fst r{d} r{s}"),
            Instr::UnpairR(d, s) => write!(f, "snd r{d} r{s}"),
            Instr::Query(d, s) => write!(f, "query r{d} r{s}"),
            Instr::Halt(r) => write!(f, "halt r{r}"),
        }
    }
}

/// A validated instruction list together with its Gödel number.
///
/// The number is computed on first use: large generated programs embed
/// other programs' codes as constants, and pairing such numbers is costly.
#[derive(Clone, Debug)]
pub struct Program {
    instrs: Vec<Instr>,
    code: OnceLock<Nat>,
    regs: usize,
}

// The code is a function of the instructions, so they decide equality.
impl PartialEq for Program {
    fn eq(&self, other: &Program) -> bool {
        self.instrs == other.instrs
    }
}

impl Eq for Program {}

impl std::hash::Hash for Program {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.instrs.hash(state);
    }
}

impl PartialOrd for Program {
    fn partial_cmp(&self, other: &Program) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Programs are ordered by code.
impl Ord for Program {
    fn cmp(&self, other: &Program) -> std::cmp::Ordering {
        if self.instrs == other.instrs {
            std::cmp::Ordering::Equal
        } else {
            self.code().cmp(other.code())
        }
    }
}

impl Program {
    /// Validate an instruction list: registers below [`MAX_REGS`], jump targets at most the length.
    pub fn new(instrs: Vec<Instr>) -> Result<Program, VmError> {
        let len = instrs.len();
        for (at, ins) in instrs.iter().enumerate() {
            for r in ins.registers() {
                if r as usize >= MAX_REGS {
                    return Err(VmError::RegisterOutOfRange(r as usize));
                }
            }
            if let Instr::Jz(_, target) = ins {
                if *target > len {
                    return Err(VmError::JumpOutOfRange { at, target: *target, len });
                }
            }
        }
        Ok(Self::from_valid(instrs))
    }

    fn from_valid(instrs: Vec<Instr>) -> Program {
        let regs = instrs.iter().flat_map(Instr::registers).map(|r| r as usize + 1).max().unwrap_or(0).max(1);
        Program { instrs, code: OnceLock::new(), regs }
    }

    /// Decode any natural number. The code is `pair(len, tree)` where `tree`
    /// holds the instruction codes at its leaves (see [`codec::encode_tree`]).
    /// The first `len` leaves are read; a tree with fewer leaves declares
    /// fewer instructions. The first ill-formed instruction and everything
    /// after it is dropped (a declared length above [`codec::TREE_LIMIT`] is
    /// ill-formed as a whole); execution reaching the end halts with 0.
    pub fn decode(code: &Nat) -> Program {
        let (len, body) = unpair(code);
        let declared = match len.to_usize() {
            Some(k) if k <= codec::TREE_LIMIT => k,
            _ => return Self::from_valid(Vec::new()),
        };
        if declared == 0 {
            return Self::from_valid(Vec::new());
        }
        let items = codec::decode_tree(&body, declared);
        let declared = items.len();
        let mut instrs = Vec::new();
        for item in items {
            match Instr::decode(&item, declared) {
                Some(ins) => instrs.push(ins),
                None => break,
            }
        }
        let kept = instrs.len();
        for ins in instrs.iter_mut() {
            if let Instr::Jz(_, t) = ins {
                if *t > kept {
                    *t = kept;
                }
            }
        }
        Self::from_valid(instrs)
    }

    /// Parse the mnemonic assembly format (see [`asm::parse`]).
    pub fn parse(text: &str) -> Result<Program, VmError> {
        asm::parse(text)
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// The Gödel number of this program.
    pub fn code(&self) -> &Nat {
        self.code.get_or_init(|| program_code(&self.instrs.iter().map(Instr::code).collect::<Vec<_>>()))
    }

    /// One more than the highest register mentioned (at least 1).
    pub fn num_regs(&self) -> usize {
        self.regs
    }

    /// Whether any instruction queries the oracle.
    pub fn uses_oracle(&self) -> bool {
        self.instrs.iter().any(|i| matches!(i, Instr::Query(..)))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ins in &self.instrs {
            writeln!(f, "{ins}")?;
        }
        Ok(())
    }
}

/// Program code from instruction codes: `0` for the empty program, else
/// `pair(len, encode_tree(codes))`.
pub fn program_code(codes: &[Nat]) -> Nat {
    if codes.is_empty() {
        Nat::zero()
    } else {
        pair(&nat(codes.len() as u64), &codec::encode_tree(codes))
    }
}

/// Maximum number of executed instructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Budget(u64);

impl Budget {
    pub fn new(max_steps: u64) -> Result<Budget, VmError> {
        if max_steps == 0 {
            Err(VmError::ZeroBudget)
        } else {
            Ok(Budget(max_steps))
        }
    }

    /// Budget constructor for literal, known-positive step counts.
    pub const fn steps(max_steps: u64) -> Budget {
        assert!(max_steps >= 1);
        Budget(max_steps)
    }

    pub fn max_steps(self) -> u64 {
        self.0
    }
}

/// Result of a budgeted run.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Halts(Nat),
    OutOfBudget,
    /// The oracle is undefined at the query; semantically divergence.
    OracleFault(Nat),
}

impl Outcome {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            Outcome::Halts(v) => Some(v),
            _ => None,
        }
    }
}

/// An oracle's answer to one query.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Defined(Nat),
    Undefined,
    /// Not determined at the current budget.
    Unknown,
}

/// Anything a program can query.
pub trait QueryOracle {
    fn answer(&self, query: &Nat) -> Answer;
}

impl<F: Fn(&Nat) -> Answer> QueryOracle for F {
    fn answer(&self, query: &Nat) -> Answer {
        self(query)
    }
}

/// The nowhere-defined oracle.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoOracle;

impl QueryOracle for NoOracle {
    fn answer(&self, _: &Nat) -> Answer {
        Answer::Undefined
    }
}

/// Characteristic function `1_A` of a finite set: 1 on members, 0 elsewhere.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetOracle(pub BTreeSet<Nat>);

impl SetOracle {
    pub fn from_u64(items: impl IntoIterator<Item = u64>) -> SetOracle {
        SetOracle(items.into_iter().map(nat).collect())
    }
}

impl QueryOracle for SetOracle {
    fn answer(&self, query: &Nat) -> Answer {
        Answer::Defined(nat(self.0.contains(query) as u64))
    }
}

/// Status of a [`Machine`] after a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Running,
    Halted(Nat),
    Faulted(Nat),
    /// The oracle answered `Unknown`; the machine cannot proceed.
    Stalled,
}

/// A running machine, steppable one instruction at a time.
#[derive(Clone, Debug)]
pub struct Machine<'p> {
    program: &'p Program,
    regs: Vec<Nat>,
    pc: usize,
    steps: u64,
    status: Status,
    queries: Vec<Nat>,
}

impl<'p> Machine<'p> {
    pub fn new(program: &'p Program, input: &Nat) -> Machine<'p> {
        let mut regs = vec![Nat::zero(); program.num_regs()];
        regs[0] = input.clone();
        Machine { program, regs, pc: 0, steps: 0, status: Status::Running, queries: Vec::new() }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    /// Queries issued so far, in order.
    pub fn queries(&self) -> &[Nat] {
        &self.queries
    }

    /// Execute one instruction (or the implicit halt past the end).
    pub fn step(&mut self, oracle: &dyn QueryOracle) -> &Status {
        if self.status != Status::Running {
            return &self.status;
        }
        self.steps += 1;
        let Some(ins) = self.program.instrs.get(self.pc) else {
            self.status = Status::Halted(Nat::zero());
            return &self.status;
        };
        let r = |x: &Reg| *x as usize;
        self.pc += 1;
        match ins {
            Instr::LoadImm(d, k) => self.regs[r(d)] = k.clone(),
            Instr::Move(d, s) => self.regs[r(d)] = self.regs[r(s)].clone(),
            Instr::Add(d, a, b) => self.regs[r(d)] = &self.regs[r(a)] + &self.regs[r(b)],
            Instr::Monus(d, a, b) => {
                let (x, y) = (&self.regs[r(a)], &self.regs[r(b)]);
                self.regs[r(d)] = if x > y { x - y } else { Nat::zero() };
            }
            Instr::Jz(c, t) => {
                if self.regs[r(c)].is_zero() {
                    self.pc = *t;
                }
            }
            Instr::Pair(d, a, b) => self.regs[r(d)] = pair(&self.regs[r(a)], &self.regs[r(b)]),
            Instr::UnpairL(d, s) => self.regs[r(d)] = fst(&self.regs[r(s)]),
            Instr::UnpairR(d, s) => self.regs[r(d)] = snd(&self.regs[r(s)]),
            Instr::Query(d, s) => {
                let q = self.regs[r(s)].clone();
                self.queries.push(q.clone());
                match oracle.answer(&q) {
                    Answer::Defined(v) => self.regs[r(d)] = v,
                    Answer::Undefined => self.status = Status::Faulted(q),
                    Answer::Unknown => self.status = Status::Stalled,
                }
            }
            Instr::Halt(c) => self.status = Status::Halted(self.regs[r(c)].clone()),
        }
        &self.status
    }

    /// Run until termination or until the total step count reaches `budget`.
    pub fn run_to(&mut self, oracle: &dyn QueryOracle, budget: Budget) -> Outcome {
        while self.status == Status::Running && self.steps < budget.0 {
            self.step(oracle);
        }
        self.outcome()
    }

    /// The outcome as seen so far (`OutOfBudget` while still running or stalled).
    pub fn outcome(&self) -> Outcome {
        match &self.status {
            Status::Halted(v) => Outcome::Halts(v.clone()),
            Status::Faulted(q) => Outcome::OracleFault(q.clone()),
            Status::Running | Status::Stalled => Outcome::OutOfBudget,
        }
    }
}

/// Full record of a budgeted run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub outcome: Outcome,
    pub steps: u64,
    pub queries: Vec<Nat>,
}

/// Run `e` on `input` with the given oracle for at most `budget` steps.
pub fn run(e: &Program, input: &Nat, oracle: &dyn QueryOracle, budget: Budget) -> Outcome {
    Machine::new(e, input).run_to(oracle, budget)
}

/// Like [`run`] but also reports the step count and the queries issued.
pub fn run_traced(e: &Program, input: &Nat, oracle: &dyn QueryOracle, budget: Budget) -> Execution {
    let mut m = Machine::new(e, input);
    let outcome = m.run_to(oracle, budget);
    Execution { outcome, steps: m.steps, queries: m.queries }
}

/// One dovetailing candidate.
pub struct Candidate<'a> {
    pub program: &'a Program,
    pub input: Nat,
    pub oracle: &'a dyn QueryOracle,
}

/// Interleave the candidates one step at a time, round-robin, spending at
/// most `budget` steps in total. Returns the index and value of the first
/// candidate to halt (fewest own steps; ties to the lower index).
pub fn dovetail(candidates: &[Candidate<'_>], budget: Budget) -> Option<(usize, Nat)> {
    let mut machines: Vec<Machine<'_>> = candidates.iter().map(|c| Machine::new(c.program, &c.input)).collect();
    let mut spent = 0u64;
    loop {
        let mut any_running = false;
        for (i, m) in machines.iter_mut().enumerate() {
            if *m.status() != Status::Running {
                continue;
            }
            if spent >= budget.0 {
                return None;
            }
            spent += 1;
            if let Status::Halted(v) = m.step(candidates[i].oracle) {
                return Some((i, v.clone()));
            }
            any_running |= *m.status() == Status::Running;
        }
        if !any_running {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;
    use proptest::prelude::*;

    fn table(entries: &[(u64, u64)]) -> impl Fn(&Nat) -> Answer + '_ {
        move |q: &Nat| {
            entries
                .iter()
                .find(|(k, _)| nat(*k) == *q)
                .map(|(_, v)| Answer::Defined(nat(*v)))
                .unwrap_or(Answer::Undefined)
        }
    }

    #[test]
    fn echo_fixtures() {
        let o = table(&[(7, 42)]);
        assert_eq!(run(&oracle_echo(), &nat(7), &o, Budget::steps(100)), Outcome::Halts(nat(42)));
        assert_eq!(run(&oracle_echo(), &nat(3), &table(&[]), Budget::steps(100)), Outcome::OracleFault(nat(3)));
        let unknown = |_: &Nat| Answer::Unknown;
        assert_eq!(run(&oracle_echo(), &nat(3), &unknown, Budget::steps(100)), Outcome::OutOfBudget);
    }

    #[test]
    fn loop_never_halts() {
        for b in [1, 2, 10, 1000, 100_000] {
            assert_eq!(run(&loop_program(), &nat(0), &NoOracle, Budget::steps(b)), Outcome::OutOfBudget);
        }
    }

    #[test]
    fn decode_round_trips_and_is_total() {
        for p in [oracle_echo(), oracle_negate(), loop_program(), halt_const(9), flip()] {
            assert_eq!(Program::decode(p.code()), p);
        }
        for n in 0..2000u64 {
            let p = Program::decode(&nat(n));
            assert_eq!(Program::decode(p.code()), p);
        }
    }

    #[test]
    fn ill_formed_tail_is_dropped() {
        // [halt r0, <opcode 12>, li r0 1]
        let good = Instr::Halt(0).code();
        let bad = pair_u(12, 0);
        let code = program_code(&[Instr::LoadImm(0, nat(3)).code(), bad, good]);
        let p = Program::decode(&code);
        assert_eq!(p.instrs(), &[Instr::LoadImm(0, nat(3))]);
        assert_eq!(run(&p, &nat(5), &NoOracle, Budget::steps(10)), Outcome::Halts(nat(0)));
    }

    #[test]
    fn jump_targets_are_clamped_after_truncation() {
        let code = program_code(&[Instr::Jz(1, 2).code(), pair_u(99, 0)]);
        let p = Program::decode(&code);
        assert_eq!(p.instrs(), &[Instr::Jz(1, 1)]);
    }

    #[test]
    fn validation_rejects_bad_programs() {
        assert!(matches!(Program::new(vec![Instr::Halt(300)]), Err(VmError::RegisterOutOfRange(300))));
        assert!(matches!(Program::new(vec![Instr::Jz(0, 5)]), Err(VmError::JumpOutOfRange { .. })));
        assert!(Budget::new(0).is_err());
    }

    #[test]
    fn dovetail_fixtures() {
        let slow = {
            // counts down from 4 then halts with 3: more steps than halt_const
            let mut v = vec![Instr::LoadImm(1, nat(4)), Instr::LoadImm(2, nat(1))];
            v.push(Instr::Jz(1, 5));
            v.push(Instr::Monus(1, 1, 2));
            v.push(Instr::Jz(3, 2));
            v.push(Instr::LoadImm(0, nat(3)));
            v.push(Instr::Halt(0));
            Program::new(v).unwrap()
        };
        let fast = halt_const(9);
        let slow_steps = run_traced(&slow, &nat(0), &NoOracle, Budget::steps(1000)).steps;
        let fast_steps = run_traced(&fast, &nat(0), &NoOracle, Budget::steps(1000)).steps;
        assert!(slow_steps >= 10 && fast_steps == 2);
        let c = |p| Candidate { program: p, input: nat(0), oracle: &NoOracle };
        let lp = loop_program();
        let h5 = halt_const(5);
        assert_eq!(dovetail(&[c(&lp), c(&h5)], Budget::steps(100)), Some((1, nat(5))));
        assert_eq!(dovetail(&[c(&slow), c(&fast)], Budget::steps(100)), Some((1, nat(9))));
        assert_eq!(dovetail(&[c(&lp), c(&lp)], Budget::steps(1000)), None);
        // Ties go to the lower index.
        assert_eq!(dovetail(&[c(&h5), c(&fast)], Budget::steps(100)), Some((0, nat(5))));
    }

    #[test]
    fn fall_off_counts_one_step() {
        let p = Program::new(vec![]).unwrap();
        let e = run_traced(&p, &nat(1), &NoOracle, Budget::steps(1));
        assert_eq!((e.outcome, e.steps), (Outcome::Halts(nat(0)), 1));
    }

    proptest! {
        #[test]
        fn decode_encode_is_identity_on_codes(n in any::<u128>()) {
            let p = Program::decode(&Nat::from(n));
            prop_assert_eq!(Program::decode(p.code()), p);
        }

        #[test]
        fn runs_are_deterministic(code in any::<u64>(), input in 0u64..50) {
            let p = Program::decode(&nat(code));
            let a = run_traced(&p, &nat(input), &SetOracle::from_u64([1, 3]), Budget::steps(300));
            let b = run_traced(&p, &nat(input), &SetOracle::from_u64([1, 3]), Budget::steps(300));
            prop_assert_eq!(a, b);
        }
    }
}
