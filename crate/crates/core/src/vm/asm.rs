//! A label-based assembler for generated programs and the mnemonic text format.
//!
//! Text format, one instruction per line, `#` starts a comment:
//!
//! ```text
//! li r1 5          # r1 := 5
//! mov r2 r1
//! add r0 r1 r2     # also: sub (monus), pair
//! fst r3 r0        # also: snd
//! loop:            # labels end with ':'
//! jz r4 loop       # numeric targets are accepted too
//! query r5 r0
//! halt r5
//! ```

use std::collections::HashMap;

use num_traits::Zero;

use super::{Instr, Nat, Program, Reg, VmError, MAX_REGS};

/// A forward-referenceable position in an [`Asm`] program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Label(usize);

#[derive(Clone, Debug)]
enum Op {
    Plain(Instr),
    Jz(Reg, Label),
}

/// Program builder with symbolic jump targets and register allocation.
///
/// Register 0 holds the input. The builder reserves a register that is never
/// written (so `jz zero L` is an unconditional jump), a register holding 1,
/// and four scratch registers used internally by the helper methods.
/// Helper arguments must not be scratch registers unless documented.
#[derive(Clone, Debug)]
pub struct Asm {
    ops: Vec<Op>,
    labels: Vec<Option<usize>>,
    next_reg: usize,
    zero: Reg,
    one: Reg,
    scratch: [Reg; 4],
    overflow: bool,
}

impl Default for Asm {
    fn default() -> Self {
        Self::new()
    }
}

/// Callback rendering a relocated query `(destination, source)`.
pub type QueryHook<'a> = &'a mut dyn FnMut(&mut Asm, Reg, Reg);

/// How an embedded program's halts, queries and steps are rendered.
pub struct Embedding<'a> {
    /// Called with the (relocated) register holding the halting value.
    pub on_halt: &'a mut dyn FnMut(&mut Asm, Reg),
    /// Called for each query with relocated (destination, source); `None` keeps the query.
    pub on_query: Option<QueryHook<'a>>,
    /// Emitted before every instruction of the embedded program, including its implicit final halt.
    pub before_each: Option<&'a mut dyn FnMut(&mut Asm)>,
}

impl Asm {
    pub fn new() -> Asm {
        let mut a =
            Asm { ops: Vec::new(), labels: Vec::new(), next_reg: 1, zero: 0, one: 0, scratch: [0; 4], overflow: false };
        a.zero = a.reg();
        a.one = a.reg();
        for i in 0..4 {
            a.scratch[i] = a.reg();
        }
        a.li(a.one, 1u32);
        a
    }

    /// Allocate a fresh register (initially zero).
    pub fn reg(&mut self) -> Reg {
        let r = self.next_reg;
        self.next_reg += 1;
        if r >= MAX_REGS {
            self.overflow = true;
            return (MAX_REGS - 1) as Reg;
        }
        r as Reg
    }

    /// Allocate `n` consecutive fresh registers.
    pub fn regs(&mut self, n: usize) -> Vec<Reg> {
        (0..n).map(|_| self.reg()).collect()
    }

    /// A register that is never written, hence always 0.
    pub fn zero(&self) -> Reg {
        self.zero
    }

    /// A register holding 1 after the first instruction.
    pub fn one(&self) -> Reg {
        self.one
    }

    pub fn label(&mut self) -> Label {
        self.labels.push(None);
        Label(self.labels.len() - 1)
    }

    pub fn bind(&mut self, l: Label) {
        self.labels[l.0] = Some(self.ops.len());
    }

    /// Create a label bound at the current position.
    pub fn here(&mut self) -> Label {
        let l = self.label();
        self.bind(l);
        l
    }

    pub fn emit(&mut self, i: Instr) {
        self.ops.push(Op::Plain(i));
    }

    pub fn li(&mut self, r: Reg, k: impl Into<Nat>) {
        self.emit(Instr::LoadImm(r, k.into()));
    }

    pub fn mov(&mut self, d: Reg, s: Reg) {
        self.emit(Instr::Move(d, s));
    }

    pub fn add(&mut self, d: Reg, a: Reg, b: Reg) {
        self.emit(Instr::Add(d, a, b));
    }

    pub fn sub(&mut self, d: Reg, a: Reg, b: Reg) {
        self.emit(Instr::Monus(d, a, b));
    }

    pub fn pair(&mut self, d: Reg, a: Reg, b: Reg) {
        self.emit(Instr::Pair(d, a, b));
    }

    pub fn fst(&mut self, d: Reg, s: Reg) {
        self.emit(Instr::UnpairL(d, s));
    }

    pub fn snd(&mut self, d: Reg, s: Reg) {
        self.emit(Instr::UnpairR(d, s));
    }

    pub fn query(&mut self, d: Reg, s: Reg) {
        self.emit(Instr::Query(d, s));
    }

    pub fn halt(&mut self, r: Reg) {
        self.emit(Instr::Halt(r));
    }

    pub fn inc(&mut self, r: Reg) {
        let one = self.one;
        self.add(r, r, one);
    }

    pub fn dec(&mut self, r: Reg) {
        let one = self.one;
        self.sub(r, r, one);
    }

    pub fn jz(&mut self, r: Reg, l: Label) {
        self.ops.push(Op::Jz(r, l));
    }

    pub fn jmp(&mut self, l: Label) {
        let z = self.zero;
        self.jz(z, l);
    }

    pub fn jnz(&mut self, r: Reg, l: Label) {
        let skip = self.label();
        self.jz(r, skip);
        self.jmp(l);
        self.bind(skip);
    }

    /// An infinite loop.
    pub fn diverge(&mut self) {
        let l = self.here();
        self.jmp(l);
    }

    /// `d := (a = b) ? 0 : nonzero` (the symmetric difference |a − b|).
    pub fn diff(&mut self, d: Reg, a: Reg, b: Reg) {
        let t = self.scratch[0];
        self.sub(t, a, b);
        self.sub(d, b, a);
        self.add(d, d, t);
    }

    /// Jump to `l` when `a = b`.
    pub fn jeq(&mut self, a: Reg, b: Reg, l: Label) {
        let d = self.scratch[1];
        self.diff(d, a, b);
        self.jz(d, l);
    }

    /// Jump to `l` when `a = k`.
    pub fn jeq_const(&mut self, a: Reg, k: impl Into<Nat>, l: Label) {
        let t = self.scratch[2];
        self.li(t, k);
        self.jeq(a, t, l);
    }

    /// `d := cons(h, t) = pair(h, t) + 1`.
    pub fn cons(&mut self, d: Reg, h: Reg, t: Reg) {
        self.pair(d, h, t);
        self.inc(d);
    }

    /// Split a non-empty cons list in `l` into head `h` and tail `t`.
    pub fn uncons(&mut self, h: Reg, t: Reg, l: Reg) {
        let c = self.scratch[0];
        self.sub(c, l, self.one);
        self.fst(h, c);
        self.snd(t, c);
    }

    /// `d := pair(m, n)` with constant-or-register arguments built by the caller.
    pub fn pair_const_left(&mut self, d: Reg, k: impl Into<Nat>, b: Reg) {
        let t = self.scratch[0];
        self.li(t, k);
        self.pair(d, t, b);
    }

    /// Halt with `pair(k, r)`.
    pub fn halt_tagged(&mut self, k: u64, r: Reg) {
        let d = self.scratch[1];
        self.pair_const_left(d, k, r);
        self.halt(d);
    }

    /// Inline `p` on the value of `input`. `p`'s registers are relocated to a
    /// fresh window (densely, so sparse register use costs nothing), zeroed on
    /// entry, so the embedding can be executed repeatedly. Jumps to `p`'s end
    /// and falling off it behave as halting with 0.
    pub fn embed(&mut self, p: &Program, input: Reg, emb: Embedding<'_>) {
        let window = self.regs(window_size(p));
        self.embed_in(p, input, &window, emb);
    }

    /// [`Asm::embed`] into a caller-provided window of at least [`window_size`] registers.
    pub fn embed_in(&mut self, p: &Program, input: Reg, window: &[Reg], emb: Embedding<'_>) {
        let Embedding { on_halt, mut on_query, mut before_each } = emb;
        let dense = dense_registers(p);
        let window = &window[..dense.len()];
        let map = |r: Reg| {
            let i = dense.binary_search(&r).expect("register of the embedded program");
            window[i]
        };
        let tmp = self.scratch[3];
        self.mov(tmp, input);
        for &w in window {
            self.li(w, 0u32);
        }
        self.mov(window[0], tmp);
        let at: Vec<Label> = (0..=p.len()).map(|_| self.label()).collect();
        for (i, ins) in p.instrs().iter().enumerate() {
            self.bind(at[i]);
            if let Some(f) = before_each.as_mut() {
                f(self);
            }
            match ins {
                Instr::Jz(r, t) => self.jz(map(*r), at[*t]),
                Instr::Halt(r) => on_halt(self, map(*r)),
                Instr::Query(d, s) => match on_query.as_mut() {
                    Some(f) => f(self, map(*d), map(*s)),
                    None => self.query(map(*d), map(*s)),
                },
                other => self.emit(other.map_regs(map)),
            }
        }
        self.bind(at[p.len()]);
        if let Some(f) = before_each.as_mut() {
            f(self);
        }
        let z = self.scratch[3];
        self.li(z, 0u32);
        on_halt(self, z);
    }

    /// Inline `p` as a subroutine: its halting value lands in `out` and
    /// control continues after the embedding. Queries are kept.
    pub fn call(&mut self, p: &Program, input: Reg, out: Reg) {
        let done = self.label();
        let mut on_halt = |a: &mut Asm, r: Reg| {
            a.mov(out, r);
            a.jmp(done);
        };
        self.embed(p, input, Embedding { on_halt: &mut on_halt, on_query: None, before_each: None });
        self.bind(done);
    }

    /// [`Asm::call`] into a caller-provided window, so that repeated calls of a
    /// large program can share registers.
    pub fn call_in(&mut self, p: &Program, input: Reg, out: Reg, window: &[Reg]) {
        let done = self.label();
        let mut on_halt = |a: &mut Asm, r: Reg| {
            a.mov(out, r);
            a.jmp(done);
        };
        self.embed_in(p, input, window, Embedding { on_halt: &mut on_halt, on_query: None, before_each: None });
        self.bind(done);
    }

    /// Resolve labels and validate.
    pub fn finish(self) -> Result<Program, VmError> {
        if self.overflow {
            return Err(VmError::RegisterOutOfRange(self.next_reg - 1));
        }
        let len = self.ops.len();
        let mut instrs = Vec::with_capacity(len);
        for op in self.ops {
            instrs.push(match op {
                Op::Plain(i) => i,
                Op::Jz(r, l) => Instr::Jz(r, self.labels[l.0].unwrap_or(len)),
            });
        }
        Program::new(instrs)
    }
}

/// Registers used by `p` (always including `r0`), sorted.
fn dense_registers(p: &Program) -> Vec<Reg> {
    let mut v: Vec<Reg> = p.instrs().iter().flat_map(Instr::registers).collect();
    v.push(0);
    v.sort_unstable();
    v.dedup();
    v
}

/// Registers needed to embed `p`.
pub fn window_size(p: &Program) -> usize {
    dense_registers(p).len()
}

/// Parse the mnemonic text format.
pub fn parse(text: &str) -> Result<Program, VmError> {
    let err = |line: usize, message: String| VmError::Parse { line, message };
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut lines: Vec<(usize, Vec<String>)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_suffix(':') {
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(err(line_no, format!("bad label `{body}`")));
            }
            if labels.insert(name.to_string(), lines.len()).is_some() {
                return Err(err(line_no, format!("duplicate label `{name}`")));
            }
            continue;
        }
        lines.push((line_no, body.split_whitespace().map(str::to_string).collect()));
    }
    let mut instrs = Vec::with_capacity(lines.len());
    for (line_no, toks) in &lines {
        let line_no = *line_no;
        let reg = |s: &str| -> Result<Reg, VmError> {
            let n: usize = s
                .strip_prefix('r')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| err(line_no, format!("expected register, found `{s}`")))?;
            if n >= MAX_REGS {
                return Err(VmError::RegisterOutOfRange(n));
            }
            Ok(n as Reg)
        };
        let want = |k: usize| -> Result<(), VmError> {
            if toks.len() != k + 1 {
                Err(err(line_no, format!("`{}` takes {k} operand(s)", toks[0])))
            } else {
                Ok(())
            }
        };
        let ins = match toks[0].as_str() {
            "li" => {
                want(2)?;
                let k: Nat =
                    toks[2].parse().map_err(|_| err(line_no, format!("expected natural, found `{}`", toks[2])))?;
                Instr::LoadImm(reg(&toks[1])?, k)
            }
            "mov" => {
                want(2)?;
                Instr::Move(reg(&toks[1])?, reg(&toks[2])?)
            }
            "fst" | "snd" | "query" => {
                want(2)?;
                let (d, s) = (reg(&toks[1])?, reg(&toks[2])?);
                match toks[0].as_str() {
                    "fst" => Instr::UnpairL(d, s),
                    "snd" => Instr::UnpairR(d, s),
                    _ => Instr::Query(d, s),
                }
            }
            "add" | "sub" | "pair" => {
                want(3)?;
                let (d, a, b) = (reg(&toks[1])?, reg(&toks[2])?, reg(&toks[3])?);
                match toks[0].as_str() {
                    "add" => Instr::Add(d, a, b),
                    "sub" => Instr::Monus(d, a, b),
                    _ => Instr::Pair(d, a, b),
                }
            }
            "jz" => {
                want(2)?;
                let target = match toks[2].parse::<usize>() {
                    Ok(t) => t,
                    Err(_) => {
                        *labels.get(&toks[2]).ok_or_else(|| err(line_no, format!("unknown label `{}`", toks[2])))?
                    }
                };
                Instr::Jz(reg(&toks[1])?, target)
            }
            "halt" => {
                want(1)?;
                Instr::Halt(reg(&toks[1])?)
            }
            other => return Err(err(line_no, format!("unknown mnemonic `{other}`"))),
        };
        instrs.push(ins);
    }
    Program::new(instrs)
}

/// Accept either a decimal Gödel number or assembly text.
pub fn parse_program_or_code(text: &str) -> Result<Program, VmError> {
    let t = text.trim();
    if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
        let n: Nat = t.parse().unwrap_or_else(|_| Nat::zero());
        return Ok(Program::decode(&n));
    }
    parse(text)
}

/// Convenience: a program from a closure over a fresh builder.
pub fn build(f: impl FnOnce(&mut Asm)) -> Program {
    let mut a = Asm::new();
    f(&mut a);
    a.finish().expect("generated program is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vm::{nat, run, Budget, NoOracle, Outcome};

    #[test]
    fn parse_round_trips_display() {
        let text = "li r1 5\nstart:\nmov r2 r1\nsub r1 r1 r3 # comment\njz r2 start\nquery r4 r0\nhalt r4\n";
        let p = parse(text).unwrap();
        assert_eq!(p.instrs()[3], Instr::Jz(2, 1));
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse("li r1 5\nbogus r1\n") {
            Err(VmError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("jz r1 nowhere").is_err());
        assert!(parse("halt r999").is_err());
    }

    #[test]
    fn code_or_text() {
        let p = parse("li r0 3\nhalt r0").unwrap();
        assert_eq!(parse_program_or_code(&p.code().to_string()).unwrap(), p);
    }

    #[test]
    fn call_then_continue() {
        let double = parse("add r0 r0 r0\nhalt r0").unwrap();
        let p = build(|a| {
            let t = a.reg();
            a.call(&double, 0, t);
            a.call(&double, t, t);
            a.halt(t);
        });
        assert_eq!(run(&p, &nat(3), &NoOracle, Budget::steps(200)), Outcome::Halts(nat(12)));
    }

    #[test]
    fn cons_lists() {
        let p = build(|a| {
            let (l, h, t) = (a.reg(), a.reg(), a.reg());
            a.cons(l, 0, a.zero());
            a.cons(l, 0, l);
            a.uncons(h, t, l);
            a.uncons(h, t, t);
            a.add(h, h, t);
            a.halt(h);
        });
        // [x, x] -> head x of tail, plus nil = 0
        assert_eq!(run(&p, &nat(4), &NoOracle, Budget::steps(200)), Outcome::Halts(nat(4)));
    }
}
