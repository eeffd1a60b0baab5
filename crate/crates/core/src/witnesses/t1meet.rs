//! The two searches extracted from a computable extender `e` of a T1 meet
//! `f ⋏ g` of boolean oracles: `X` looks for an `n` on which both readings
//! agree and so computes `f`; `Y(m0)` races the two readings at a fixed
//! `m0` and so computes `g` whenever `X` stalls on `m0`.

use super::programs::emit_clocked_call;
use crate::vm::asm::{build, Asm};
use crate::vm::builtin::{oracle_echo, oracle_negate};
use crate::vm::transform::{dispatch, rewrite_oracle_calls};
use crate::vm::{Nat, Program, Reg, VmError};

/// `X` and the family `Y(m0)` for one extender `e`.
#[derive(Clone, Debug)]
pub struct T1MeetExtraction {
    e: Program,
    /// Stage-wise dovetailing over `n` of `φ_e⟨r,r,m,n⟩` and `φ_e⟨r,r',m,n⟩`,
    /// returning their common value once both halt equal.
    pub x: Program,
}

/// `out := ⟨r, s, m, n⟩` for the constant codes `r`, `s`.
fn emit_tuple(a: &mut Asm, r: &Nat, s: &Nat, m: Reg, n: Reg, out: Reg) {
    let t = a.reg();
    a.pair(out, m, n);
    a.li(t, s.clone());
    a.pair(out, t, out);
    a.li(t, r.clone());
    a.pair(out, t, out);
    a.pair_const_left(out, 4u32, out);
}

/// Build `X` (and keep `e` for `Y`).
pub fn extract_t1meet_xy(e: &Program) -> T1MeetExtraction {
    let (r, rn) = (oracle_echo().code().clone(), oracle_negate().code().clone());
    let x = build(|a| {
        let [stage, n, d, fuel, q, v1, v2] = [(); 7].map(|_| a.reg());
        let (next_stage, skip) = (a.label(), a.label());
        a.bind(next_stage);
        a.inc(stage);
        a.li(n, 0u32);
        let n_loop = a.here();
        a.diff(d, n, stage);
        a.jz(d, next_stage);
        emit_tuple(a, &r, &r, 0, n, q);
        a.mov(fuel, stage);
        let h1 = a.label();
        emit_clocked_call(a, e, q, fuel, v1, h1, skip);
        a.bind(h1);
        emit_tuple(a, &r, &rn, 0, n, q);
        a.mov(fuel, stage);
        let h2 = a.label();
        emit_clocked_call(a, e, q, fuel, v2, h2, skip);
        a.bind(h2);
        a.diff(d, v1, v2);
        let differ = a.label();
        a.jnz(d, differ);
        a.halt(v1);
        a.bind(differ);
        a.bind(skip);
        a.inc(n);
        a.jmp(n_loop);
    });
    T1MeetExtraction { e: e.clone(), x }
}

impl T1MeetExtraction {
    /// `Y(m0)`: on `n`, race `φ_e⟨r,r,m0,n⟩` against `¬φ_e⟨r,r',m0,n⟩`.
    pub fn y(&self, m0: &Nat) -> Program {
        let (r, rn) = (oracle_echo().code().clone(), oracle_negate().code().clone());
        let e = &self.e;
        build(|a| {
            let [m, stage, fuel, q, v] = [(); 5].map(|_| a.reg());
            let (halted_same, halted_negated, next) = (a.label(), a.label(), a.label());
            a.li(m, m0.clone());
            let top = a.here();
            a.inc(stage);
            emit_tuple(a, &r, &r, m, 0, q);
            a.mov(fuel, stage);
            let second = a.label();
            emit_clocked_call(a, e, q, fuel, v, halted_same, second);
            a.bind(second);
            emit_tuple(a, &r, &rn, m, 0, q);
            a.mov(fuel, stage);
            emit_clocked_call(a, e, q, fuel, v, halted_negated, next);
            a.bind(next);
            a.jmp(top);
            a.bind(halted_same);
            a.halt(v);
            a.bind(halted_negated);
            a.sub(v, a.one(), v);
            a.halt(v);
        })
    }
}

/// An extender of `f ⋏ g` for the readers `{echo, negate}`, where `f_prog`
/// and `g_prog` compute `f` and `g`. With `exact = false` it returns
/// `φ_p^f(m)` regardless of the right side (defined on more tuples than the
/// meet); with `exact = true` it diverges unless `φ_p^f(m) = φ_q^g(n)`.
pub fn t1_meet_extender(f_prog: &Program, g_prog: &Program, exact: bool) -> Result<Program, VmError> {
    let readers = dispatch(&[oracle_echo(), oracle_negate()])?;
    let left = rewrite_oracle_calls(&readers, f_prog)?;
    let right = rewrite_oracle_calls(&readers, g_prog)?;
    Ok(build(|a| {
        let [t, p, q, m, n, x, u, w, d] = [(); 9].map(|_| a.reg());
        a.snd(t, 0);
        a.fst(p, t);
        a.snd(t, t);
        a.fst(q, t);
        a.snd(t, t);
        a.fst(m, t);
        a.snd(n, t);
        a.pair(x, p, m);
        a.call(&left, x, u);
        if exact {
            a.pair(x, q, n);
            a.call(&right, x, w);
            let equal = a.label();
            a.diff(d, u, w);
            a.jz(d, equal);
            a.diverge();
            a.bind(equal);
        }
        a.halt(u);
    }))
}
