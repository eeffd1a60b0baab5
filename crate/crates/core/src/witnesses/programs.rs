//! Assembly helpers shared by the witness constructions.

use crate::vm::asm::{Asm, Embedding, Label};
use crate::vm::{Program, Reg};

/// `half = x div 2`, `parity = x mod 2`.
pub fn emit_halve(a: &mut Asm, x: Reg, half: Reg, parity: Reg) {
    let t = a.reg();
    let (top, odd, done) = (a.label(), a.label(), a.label());
    a.mov(t, x);
    a.li(half, 0u32);
    a.li(parity, 0u32);
    a.bind(top);
    a.jz(t, done);
    a.dec(t);
    a.jz(t, odd);
    a.dec(t);
    a.inc(half);
    a.jmp(top);
    a.bind(odd);
    a.li(parity, 1u32);
    a.bind(done);
}

/// `out = 2x + bit`.
pub fn emit_double(a: &mut Asm, x: Reg, bit: bool, out: Reg) {
    a.add(out, x, x);
    if bit {
        a.inc(out);
    }
}

/// Step through a length-prefixed sequence: `rem` items left, `cur` the
/// right-nested remainder. Loads the next item into `item`, or jumps to
/// `exhausted` when none is left.
fn emit_next_item(a: &mut Asm, rem: Reg, cur: Reg, item: Reg, exhausted: Label) {
    let (t, last, done) = (a.reg(), a.label(), a.label());
    a.jz(rem, exhausted);
    a.mov(t, rem);
    a.dec(t);
    a.jz(t, last);
    a.fst(item, cur);
    a.snd(cur, cur);
    a.dec(rem);
    a.jmp(done);
    a.bind(last);
    a.mov(item, cur);
    a.li(rem, 0u32);
    a.bind(done);
}

/// The subsequence of `seq` whose items carry sum tag `tag`, untagged and
/// re-encoded as a sequence: `[pair(0,a), pair(1,b), pair(0,c)]` with tag 0
/// gives `[a, c]`.
pub fn emit_seq_filter(a: &mut Asm, seq: Reg, tag: u64, out: Reg) {
    let [len, body, rem, cur, item, t, v, count, j, k, acc, first] = [(); 12].map(|_| a.reg());
    a.fst(len, seq);
    a.snd(body, seq);
    // count the matches
    let (count_loop, counted) = (a.label(), a.label());
    a.mov(rem, len);
    a.mov(cur, body);
    a.li(count, 0u32);
    a.bind(count_loop);
    emit_next_item(a, rem, cur, item, counted);
    a.fst(t, item);
    let skip = a.label();
    let hit = a.label();
    a.jeq_const(t, tag, hit);
    a.jmp(skip);
    a.bind(hit);
    a.inc(count);
    a.bind(skip);
    a.jmp(count_loop);
    a.bind(counted);
    let (empty, outer, fetch, found, finish) = (a.label(), a.label(), a.label(), a.label(), a.label());
    a.jz(count, empty);
    // rebuild right to left: fetch the j-th match for j = count-1, …, 0
    a.mov(j, count);
    a.li(first, 1u32);
    a.bind(outer);
    a.jz(j, finish);
    a.dec(j);
    a.mov(k, j);
    a.mov(rem, len);
    a.mov(cur, body);
    a.bind(fetch);
    emit_next_item(a, rem, cur, item, finish); // unreachable exit: j < count
    a.fst(t, item);
    a.snd(v, item);
    let next = a.label();
    let matched = a.label();
    a.jeq_const(t, tag, matched);
    a.jmp(next);
    a.bind(matched);
    a.jz(k, found);
    a.dec(k);
    a.bind(next);
    a.jmp(fetch);
    a.bind(found);
    let (initial, stored) = (a.label(), a.label());
    a.jnz(first, initial);
    a.pair(acc, v, acc);
    a.jmp(stored);
    a.bind(initial);
    a.mov(acc, v);
    a.li(first, 0u32);
    a.bind(stored);
    a.jmp(outer);
    a.bind(finish);
    a.pair(out, count, acc);
    let end = a.label();
    a.jmp(end);
    a.bind(empty);
    a.li(out, 0u32);
    a.bind(end);
}

/// Run `p` on `x` for at most `fuel` steps (decrementing `fuel`). On a halt
/// the value lands in `out` and control goes to `halted`; on exhaustion to
/// `exhausted`. Queries pass through.
pub fn emit_clocked_call(a: &mut Asm, p: &Program, x: Reg, fuel: Reg, out: Reg, halted: Label, exhausted: Label) {
    let mut on_halt = |a: &mut Asm, r: Reg| {
        a.mov(out, r);
        a.jmp(halted);
    };
    let mut tick = |a: &mut Asm| {
        a.jz(fuel, exhausted);
        a.dec(fuel);
    };
    a.embed(p, x, Embedding { on_halt: &mut on_halt, on_query: None, before_each: Some(&mut tick) });
}

/// The `i`-th component (0-based) of a length-prefixed sequence of known length `len`.
pub fn emit_seq_component(a: &mut Asm, seq: Reg, len: usize, i: usize, out: Reg) {
    a.snd(out, seq);
    for _ in 0..i {
        a.snd(out, out);
    }
    if i + 1 < len {
        a.fst(out, out);
    }
}

/// `x ↦ x mod 2`.
pub fn parity_program() -> Program {
    crate::vm::asm::build(|a| {
        let (h, b) = (a.reg(), a.reg());
        emit_halve(a, 0, h, b);
        a.halt(b);
    })
}

/// `x ↦ 0` on the listed members, `x ↦ 1` elsewhere: a decoder for a finite `P`.
pub fn membership_program(members: &[u64]) -> Program {
    crate::vm::asm::build(|a| {
        let out = a.reg();
        let inside = a.label();
        for &m in members {
            a.jeq_const(0, m, inside);
        }
        a.li(out, 1u32);
        a.halt(out);
        a.bind(inside);
        a.li(out, 0u32);
        a.halt(out);
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vm::asm::build;
    use crate::vm::{encode_seq, encode_seq_u, nat, pair_u, run, Budget, NoOracle, Outcome};
    use proptest::prelude::*;

    fn eval(p: &Program, x: &crate::vm::Nat) -> crate::vm::Nat {
        match run(p, x, &NoOracle, Budget::steps(1_000_000)) {
            Outcome::Halts(v) => v,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn membership_decides_finite_sets() {
        let p = membership_program(&[0, 3, 7]);
        for x in 0..12u64 {
            assert_eq!(eval(&p, &nat(x)), nat(u64::from(![0, 3, 7].contains(&x))));
        }
    }

    #[test]
    fn halve_and_double() {
        let p = build(|a| {
            let (h, b, o) = (a.reg(), a.reg(), a.reg());
            emit_halve(a, 0, h, b);
            a.pair(o, h, b);
            a.halt(o);
        });
        for x in 0..20u64 {
            assert_eq!(eval(&p, &nat(x)), pair_u(x / 2, x % 2));
        }
        let d = build(|a| {
            let o = a.reg();
            emit_double(a, 0, true, o);
            a.halt(o);
        });
        assert_eq!(eval(&d, &nat(7)), nat(15));
    }

    #[test]
    fn components() {
        let s = encode_seq_u(&[4, 5, 6, 7]);
        for i in 0..4 {
            let p = build(|a| {
                let o = a.reg();
                emit_seq_component(a, 0, 4, i, o);
                a.halt(o);
            });
            assert_eq!(eval(&p, &s), nat(4 + i as u64));
        }
    }

    proptest! {
        #[test]
        fn filter_matches_host(items in proptest::collection::vec((0u64..3, 0u64..5), 0..6), tag in 0u64..2) {
            let seq = encode_seq(&items.iter().map(|&(t, v)| pair_u(t, v)).collect::<Vec<_>>());
            let want = encode_seq(&items.iter().filter(|(t, _)| *t == tag).map(|&(_, v)| nat(v)).collect::<Vec<_>>());
            let p = build(|a| {
                let o = a.reg();
                emit_seq_filter(a, 0, tag, o);
                a.halt(o);
            });
            prop_assert_eq!(eval(&p, &seq), want);
        }

        #[test]
        fn clocked_call_matches_run(n in 0u64..30, fuel in 1u64..120) {
            let p = crate::oracles::halting::countdown(n);
            let direct = run(&p, &nat(0), &NoOracle, Budget::steps(fuel));
            let q = build(|a| {
                let (f, o) = (a.reg(), a.reg());
                let (h, x) = (a.label(), a.label());
                a.li(f, fuel);
                emit_clocked_call(a, &p, 0, f, o, h, x);
                a.bind(h);
                a.halt_tagged(1, o);
                a.bind(x);
                a.li(o, 0u32);
                a.halt(o);
            });
            let got = eval(&q, &nat(0));
            match direct {
                Outcome::Halts(v) => prop_assert_eq!(got, crate::vm::pair(&nat(1), &v)),
                _ => prop_assert_eq!(got, nat(0)),
            }
        }
    }
}
