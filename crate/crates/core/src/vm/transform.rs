//! Program transformations: specialisation, post-composition, oracle
//! substitution, clocking, bounded dispatch and the game calling convention.

use super::asm::{window_size, Asm, Embedding, Label};
use super::{nat, Instr, Nat, Program, Reg, VmError, MAX_REGS};

/// Instructions in the specialisation prologue of [`smn`].
pub const SMN_PROLOGUE: usize = 3;

/// Register used by the [`smn`] prologue.
pub const SMN_TEMP: Reg = 1;

/// Shift every jump target by `by`.
fn shifted(instrs: &[Instr], by: usize) -> Vec<Instr> {
    instrs
        .iter()
        .map(|i| match i {
            Instr::Jz(r, t) => Instr::Jz(*r, t + by),
            other => other.clone(),
        })
        .collect()
}

/// Specialise the first argument: the result on `y` behaves as `e` on `pair(x, y)`.
///
/// Layout: `li r1 x; pair r0 r1 r0; li r1 0` followed by `e` with jumps shifted.
/// Only the first instruction depends on `x`.
pub fn smn(e: &Program, x: &Nat) -> Program {
    let mut v =
        vec![Instr::LoadImm(SMN_TEMP, x.clone()), Instr::Pair(0, SMN_TEMP, 0), Instr::LoadImm(SMN_TEMP, nat(0))];
    v.extend(shifted(e.instrs(), SMN_PROLOGUE));
    Program::new(v).expect("specialisation preserves well-formedness")
}

/// Instructions emitted per instruction of the inner program by [`postcompose`].
pub const BLOCK: usize = 3;

/// Register receiving the inner program's result in [`postcompose`] (the
/// outer program's `r0`); the outer program's `r_i` lives in `255 − i`.
pub const POST_X: Reg = (MAX_REGS - 1) as Reg;

/// Scratch register of [`postcompose`], the outer program's `r1`.
pub const POST_S: Reg = (MAX_REGS - 2) as Reg;

fn post_reg(r: Reg) -> Reg {
    (MAX_REGS - 1) as Reg - r
}

/// First register reserved by [`postcompose`] for an outer program `t`.
pub fn post_reserved_from(t: &Program) -> usize {
    MAX_REGS - t.num_regs().max(2)
}

/// The padding instruction of [`postcompose`] blocks.
pub fn post_nop() -> Instr {
    Instr::LoadImm(POST_S, nat(0))
}

/// `φ_t ∘ φ_e`: the result of `e` (with its oracle) is fed to the oracle-free `t`.
///
/// Fixed block layout, so the transformation is a simple pass over the code:
/// each instruction of `e` becomes a block of [`BLOCK`] instructions (jump
/// targets `k ↦ offset + BLOCK·k`; `halt r` becomes `mov X r; li S 0; jz S EPI1`;
/// everything else is padded with `li S 0`), followed by `li X 0` (the exit of
/// `e`) and `t` relocated into the top registers.
pub fn postcompose(t: &Program, e: &Program) -> Result<Program, VmError> {
    postcompose_with_prologue(&[], t, e)
}

/// [`postcompose`] after a jump-free prologue, e.g. `li r0 m` to fix the input.
pub fn postcompose_with_prologue(prologue: &[Instr], t: &Program, e: &Program) -> Result<Program, VmError> {
    if t.uses_oracle() {
        return Err(VmError::OracleInTransformer);
    }
    let reserved = post_reserved_from(t);
    let collides = |ins: &Instr| ins.registers().into_iter().any(|r| r as usize >= reserved);
    let (prologue, body): (Vec<Instr>, Vec<Instr>) = if prologue.iter().chain(e.instrs()).any(collides) {
        // e.g. `e` is itself a post-composition: rename registers densely
        // (r0 stays r0, all others start at 0, so behaviour is unchanged)
        let mut used: Vec<Reg> = prologue.iter().chain(e.instrs()).flat_map(Instr::registers).collect();
        used.push(0);
        used.sort_unstable();
        used.dedup();
        if used.len() > reserved {
            return Err(VmError::ReservedRegister(used[reserved] as usize));
        }
        let rename = |r: Reg| used.binary_search(&r).map_or(r, |i| i as Reg);
        (prologue.iter().map(|i| i.map_regs(rename)).collect(), e.instrs().iter().map(|i| i.map_regs(rename)).collect())
    } else {
        (prologue.to_vec(), e.instrs().to_vec())
    };
    debug_assert!(prologue.iter().all(|i| !matches!(i, Instr::Jz(..))));
    let base = prologue.len();
    let epi0 = base + BLOCK * body.len();
    let epi1 = epi0 + 1;
    let mut out: Vec<Instr> = prologue.clone();
    for ins in &body {
        match ins {
            Instr::Jz(r, tg) => {
                out.push(Instr::Jz(*r, base + BLOCK * tg));
                out.push(post_nop());
                out.push(post_nop());
            }
            Instr::Halt(r) => {
                out.push(Instr::Move(POST_X, *r));
                out.push(post_nop());
                out.push(Instr::Jz(POST_S, epi1));
            }
            other => {
                out.push(other.clone());
                out.push(post_nop());
                out.push(post_nop());
            }
        }
    }
    out.push(Instr::LoadImm(POST_X, nat(0)));
    for ins in t.instrs() {
        out.push(match ins.map_regs(post_reg) {
            Instr::Jz(r, tg) => Instr::Jz(r, epi1 + tg),
            other => other,
        });
    }
    Program::new(out)
}

/// `[x = k]`: 1 when the input equals `k`, else 0.
pub fn equals_const(k: &Nat) -> Program {
    Program::new(vec![
        Instr::LoadImm(1, k.clone()),
        Instr::Monus(2, 0, 1),
        Instr::Monus(3, 1, 0),
        Instr::Add(2, 2, 3),
        Instr::Jz(2, 7),
        Instr::LoadImm(0, nat(0)),
        Instr::Halt(0),
        Instr::LoadImm(0, nat(1)),
        Instr::Halt(0),
    ])
    .expect("fixed program is well-formed")
}

/// The probe "run `p` on `m` (ignoring the actual input) and report whether the result is `k`".
pub fn result_probe(p: &Program, m: &Nat, k: &Nat) -> Result<Program, VmError> {
    postcompose_with_prologue(&[Instr::LoadImm(0, m.clone())], &equals_const(k), p)
}

/// Replace every oracle query of `e` by an inlined call of `h` (whose own
/// queries go to the new oracle). `h` restarts from zeroed registers on every call.
pub fn rewrite_oracle_calls(e: &Program, h: &Program) -> Result<Program, VmError> {
    let mut a = Asm::new();
    let mut on_halt = |a: &mut Asm, r: Reg| a.halt(r);
    let mut on_query = |a: &mut Asm, d: Reg, s: Reg| a.call(h, s, d);
    a.embed(e, 0, Embedding { on_halt: &mut on_halt, on_query: Some(&mut on_query), before_each: None });
    a.finish()
}

/// Clocked version of `e`: on `pair(x, fuel)` it halts with `pair(1, v)` when
/// `run(e, x, budget = fuel)` halts with `v`, and with `pair(0, 0)` when the fuel
/// runs out first. Queries pass through unchanged.
pub fn clocked(e: &Program) -> Result<Program, VmError> {
    let mut a = Asm::new();
    let (x, fuel, z) = (a.reg(), a.reg(), a.reg());
    a.fst(x, 0);
    a.snd(fuel, 0);
    let out = a.label();
    emit_clocked(&mut a, e, x, fuel, None, out);
    a.bind(out);
    a.li(z, 0u32);
    a.pair(z, z, z);
    a.halt(z);
    a.finish()
}

/// Emit `e` on `x` metered by `fuel`; a halt ends the program with
/// `pair(1, v)`, exhaustion jumps to `out`. `window` defaults to fresh registers.
pub fn emit_clocked(a: &mut Asm, e: &Program, x: Reg, fuel: Reg, window: Option<&[Reg]>, out: Label) {
    let mut on_halt = |a: &mut Asm, r: Reg| a.halt_tagged(1, r);
    let mut tick = |a: &mut Asm| {
        a.jz(fuel, out);
        a.dec(fuel);
    };
    let emb = Embedding { on_halt: &mut on_halt, on_query: None, before_each: Some(&mut tick) };
    match window {
        Some(w) => a.embed_in(e, x, w, emb),
        None => a.embed(e, x, emb),
    }
}

/// Bounded stand-in for a universal machine: on `pair(c, x)` runs the pool
/// program whose code is `c` on `x` (queries pass through), and diverges when
/// `c` is not the code of a pool program.
pub fn dispatch(pool: &[Program]) -> Result<Program, VmError> {
    let mut a = Asm::new();
    let (c, x) = (a.reg(), a.reg());
    a.fst(c, 0);
    a.snd(x, 0);
    let width = pool.iter().map(window_size).max().unwrap_or(1);
    let window = a.regs(width);
    let targets: Vec<Label> = pool.iter().map(|_| a.label()).collect();
    for (p, l) in pool.iter().zip(&targets) {
        a.jeq_const(c, p.code().clone(), *l);
    }
    a.diverge();
    for (p, l) in pool.iter().zip(&targets) {
        a.bind(*l);
        let mut on_halt = |a: &mut Asm, r: Reg| a.halt(r);
        a.embed_in(p, x, &window, Embedding { on_halt: &mut on_halt, on_query: None, before_each: None });
    }
    a.finish()
}

/// Clocked [`dispatch`]: on `pair(pair(c, x), fuel)` behaves as [`clocked`]
/// applied to the pool program with code `c`; diverges on foreign codes.
pub fn dispatch_clocked(pool: &[Program]) -> Result<Program, VmError> {
    let mut a = Asm::new();
    let (c, x, fuel, z) = (a.reg(), a.reg(), a.reg(), a.reg());
    a.fst(c, 0);
    a.snd(x, c);
    a.fst(c, c);
    a.snd(fuel, 0);
    let width = pool.iter().map(window_size).max().unwrap_or(1);
    let window = a.regs(width);
    let out = a.label();
    let targets: Vec<Label> = pool.iter().map(|_| a.label()).collect();
    for (p, l) in pool.iter().zip(&targets) {
        a.jeq_const(c, p.code().clone(), *l);
    }
    a.diverge();
    for (p, l) in pool.iter().zip(&targets) {
        a.bind(*l);
        emit_clocked(&mut a, p, x, fuel, Some(&window), out);
    }
    a.bind(out);
    a.li(z, 0u32);
    a.pair(z, z, z);
    a.halt(z);
    a.finish()
}

/// Game calling convention for a plain oracle program `e`.
///
/// The result, on `pair(m, encode_seq(replies))`, replays `e` on `m`, answering
/// its successive queries with the recorded replies. At the first query with no
/// recorded reply it outputs `pair(0, n)` (ask `n`); when `e` halts with `v` it
/// outputs `pair(1, v)` (declare `v`).
pub fn as_arthur(e: &Program) -> Result<Program, VmError> {
    let mut a = Asm::new();
    let (m, rem, cur, t) = (a.reg(), a.reg(), a.reg(), a.reg());
    a.fst(m, 0);
    a.snd(cur, 0);
    a.fst(rem, cur);
    a.snd(cur, cur);
    let mut on_halt = |a: &mut Asm, r: Reg| a.halt_tagged(1, r);
    let mut on_query = |a: &mut Asm, d: Reg, s: Reg| emit_replay_query(a, d, s, rem, cur, t);
    a.embed(e, m, Embedding { on_halt: &mut on_halt, on_query: Some(&mut on_query), before_each: None });
    a.finish()
}

/// Answer a query from a recorded reply cursor (`rem` replies left, the
/// right-nested remainder in `cur`), or end the turn by asking `pair(0, s)`.
pub fn emit_replay_query(a: &mut Asm, d: Reg, s: Reg, rem: Reg, cur: Reg, t: Reg) {
    let (fresh, last, done) = (a.label(), a.label(), a.label());
    a.jz(rem, fresh);
    a.mov(t, rem);
    a.dec(t);
    a.jz(t, last);
    a.fst(d, cur);
    a.snd(cur, cur);
    a.dec(rem);
    a.jmp(done);
    a.bind(last);
    a.mov(d, cur);
    a.li(rem, 0u32);
    a.jmp(done);
    a.bind(fresh);
    a.halt_tagged(0, s);
    a.bind(done);
}
