//! Code-manipulating routines executed inside the machine.
//!
//! These emit instructions that compute program codes at run time, e.g. the
//! code of `flip ∘ e` from the code of `e`. A program code is `pair(len, tree)`
//! with instruction codes at the leaves of `tree` (see
//! [`encode_tree`](super::codec::encode_tree)); rewrites are leaf-wise maps
//! over that tree, so the intermediate values stay close to the size of the
//! code. Results decode to the same instructions as the host-side
//! transformations whenever the input is the code of a program.

use super::asm::Asm;
use super::codec::encode_tree;
use super::transform::{post_nop, smn, BLOCK, POST_S, POST_X};
use super::{nat, Instr, Nat, Program, Reg, MAX_REGS};

/// Register slots of a [`RegStack`]; deeper entries spill into a cons list.
const STACK_SLOTS: usize = 20;

/// A stack kept in registers. Cons lists nest their entries, doubling the size
/// of everything below each push; register slots keep entries apart, so
/// traversing a balanced tree stays linear in the size of its code.
struct RegStack {
    slots: Vec<Reg>,
    depth: Reg,
    spill: Reg,
}

impl RegStack {
    fn new(a: &mut Asm) -> RegStack {
        let slots = (0..STACK_SLOTS).map(|_| a.reg()).collect();
        let (depth, spill) = (a.reg(), a.reg());
        a.li(depth, 0u32);
        a.li(spill, 0u32);
        RegStack { slots, depth, spill }
    }

    /// Jump into one arm per slot according to `depth` (the last arm spills).
    fn dispatch(&self, a: &mut Asm, arm: &mut dyn FnMut(&mut Asm, Option<Reg>)) {
        let t = a.reg();
        let done = a.label();
        let arms: Vec<_> = (0..=self.slots.len()).map(|_| a.label()).collect();
        a.mov(t, self.depth);
        for l in &arms[..self.slots.len()] {
            a.jz(t, *l);
            a.dec(t);
        }
        a.jmp(arms[self.slots.len()]);
        for (i, l) in arms.iter().enumerate() {
            a.bind(*l);
            arm(a, self.slots.get(i).copied());
            a.jmp(done);
        }
        a.bind(done);
    }

    fn push(&self, a: &mut Asm, x: Reg) {
        let spill = self.spill;
        self.dispatch(a, &mut |a, slot| match slot {
            Some(r) => a.mov(r, x),
            None => a.cons(spill, x, spill),
        });
        a.inc(self.depth);
    }

    fn pop(&self, a: &mut Asm, x: Reg) {
        a.dec(self.depth);
        let spill = self.spill;
        self.dispatch(a, &mut |a, slot| match slot {
            Some(r) => a.mov(x, r),
            None => a.uncons(x, spill, spill),
        });
    }
}

/// `out := tree` with every leaf `x` replaced by the subtree that `leaf`
/// computes from it. `leaf(a, x, dst)` reads the leaf value in `x` and must
/// leave a tree code in `dst`; it may clobber `x`.
pub fn emit_tree_map(a: &mut Asm, tree: Reg, out: Reg, leaf: &mut dyn FnMut(&mut Asm, Reg, Reg)) {
    let (w, x, y, t) = (a.reg(), a.reg(), a.reg(), a.reg());
    // work items: `T + 1` visits tree `T`, `0` joins the two topmost results
    let work = RegStack::new(a);
    let res = RegStack::new(a);
    a.mov(t, tree);
    a.inc(t);
    work.push(a, t);
    let (top, end, is_leaf, join) = (a.here(), a.label(), a.label(), a.label());
    a.jz(work.depth, end);
    work.pop(a, w);
    a.jz(w, join);
    a.dec(w);
    a.fst(x, w);
    a.snd(y, w);
    a.jz(y, is_leaf);
    a.li(t, 0u32);
    work.push(a, t);
    work.push(a, y);
    a.inc(x);
    work.push(a, x);
    a.jmp(top);
    a.bind(is_leaf);
    leaf(a, x, t);
    res.push(a, t);
    a.jmp(top);
    a.bind(join);
    res.pop(a, y);
    res.pop(a, x);
    a.inc(y);
    a.pair(t, x, y);
    res.push(a, t);
    a.jmp(top);
    a.bind(end);
    res.pop(a, out);
}

/// `out := tree_leaf(x)`.
pub fn emit_leaf(a: &mut Asm, x: Reg, out: Reg) {
    let z = a.zero();
    a.pair(out, x, z);
}

/// `out := tree_node(l, r)`; `r` is left unchanged.
pub fn emit_node(a: &mut Asm, l: Reg, r: Reg, out: Reg) {
    let t = a.reg();
    a.mov(t, r);
    a.inc(t);
    a.pair(out, l, t);
}

/// Balanced tree (same shape as [`encode_tree`]) of the leaf values in `leaves`.
pub fn emit_static_tree(a: &mut Asm, leaves: &[Reg], out: Reg) {
    match leaves.len() {
        0 => a.li(out, 0u32),
        1 => emit_leaf(a, leaves[0], out),
        n => {
            let mid = n.div_ceil(2);
            let (l, r) = (a.reg(), a.reg());
            emit_static_tree(a, &leaves[..mid], l);
            emit_static_tree(a, &leaves[mid..], r);
            emit_node(a, l, r, out);
        }
    }
}

/// Right siblings along the leftmost path of `encode_tree(items)`, bottom-up.
fn left_spine_siblings(items: &[Nat]) -> Vec<Nat> {
    if items.len() <= 1 {
        return Vec::new();
    }
    let mid = items.len().div_ceil(2);
    let mut s = left_spine_siblings(&items[..mid]);
    s.push(encode_tree(&items[mid..]));
    s
}

/// Run-time code of `smn(e, x)` for a fixed `e`: only the first instruction
/// depends on `x`, so the code is rebuilt along the tree's leftmost path.
pub fn emit_smn_code(a: &mut Asm, e: &Program, x: Reg, out: Reg) {
    let template = smn(e, &nat(0));
    let codes: Vec<Nat> = template.instrs().iter().map(Instr::code).collect();
    let (c, t) = (a.reg(), a.reg());
    // first instruction: li r1 x = pair(0, pair(1, x))
    a.li(t, 1u32);
    a.pair(t, t, x);
    a.li(c, 0u32);
    a.pair(c, c, t);
    emit_leaf(a, c, c);
    for sib in left_spine_siblings(&codes) {
        a.li(t, sib + 1u32);
        a.pair(c, c, t);
    }
    a.li(t, template.len() as u64);
    a.pair(out, t, c);
}

/// One instruction of the outer program in a run-time post-composition.
#[derive(Clone, Debug)]
pub enum OuterInstr {
    /// An instruction whose code is known in advance.
    Fixed(Nat),
    /// `li reg v` with `v` taken from a register at run time.
    LoadFrom(Reg, Reg),
    /// `jz reg (EPI1 + offset)`.
    JumpRel(Reg, usize),
}

/// Outer-program template of a post-composition with the oracle-free `t`,
/// relocated exactly as [`postcompose`](super::transform::postcompose) does.
/// `runtime_load` replaces instruction `i` (which must be `li`) by a run-time load.
pub fn outer_template(t: &Program, runtime_load: Option<(usize, Reg)>) -> Vec<OuterInstr> {
    let top = (MAX_REGS - 1) as Reg;
    t.instrs()
        .iter()
        .enumerate()
        .map(|(i, ins)| {
            let ins = ins.map_regs(|r| top - r);
            match (&ins, runtime_load) {
                (Instr::LoadImm(r, _), Some((j, v))) if j == i => OuterInstr::LoadFrom(*r, v),
                (Instr::Jz(r, off), _) => OuterInstr::JumpRel(*r, *off),
                _ => OuterInstr::Fixed(ins.code()),
            }
        })
        .collect()
}

/// Run-time code of `postcompose(t, e)` (with optional prologue `li r0 m`)
/// from the code of `e` in `e_code`; `outer` describes `t` (see [`outer_template`]).
pub fn emit_postcompose_code(a: &mut Asm, e_code: Reg, prologue_input: Option<Reg>, outer: &[OuterInstr], out: Reg) {
    let (len, tree, base, epi1, tmp) = (a.reg(), a.reg(), a.reg(), a.reg(), a.reg());
    a.fst(len, e_code);
    a.snd(tree, e_code);
    a.li(base, prologue_input.is_some() as u64);
    // EPI1 = base + BLOCK·len + 1
    a.mov(epi1, base);
    for _ in 0..BLOCK {
        a.add(epi1, epi1, len);
    }
    a.inc(epi1);
    // epilogue: li X 0, then the relocated outer program
    let mut epi_leaves = Vec::new();
    let first = a.reg();
    a.li(first, Instr::LoadImm(POST_X, nat(0)).code());
    epi_leaves.push(first);
    for ins in outer {
        let c = a.reg();
        match ins {
            OuterInstr::Fixed(k) => a.li(c, k.clone()),
            OuterInstr::LoadFrom(reg, v) => {
                a.pair_const_left(tmp, *reg, *v);
                a.pair_const_left(c, 0u32, tmp);
            }
            OuterInstr::JumpRel(reg, off) => {
                a.li(tmp, *off as u64);
                a.add(tmp, tmp, epi1);
                a.pair_const_left(tmp, *reg, tmp);
                a.pair_const_left(c, 4u32, tmp);
            }
        }
        epi_leaves.push(c);
    }
    let epi = a.reg();
    emit_static_tree(a, &epi_leaves, epi);
    // prologue leaf: li r0 m = pair(0, pair(0, m))
    let pro = a.reg();
    if let Some(m) = prologue_input {
        a.li(tmp, 0u32);
        a.pair(pro, tmp, m);
        a.pair(pro, tmp, pro);
        emit_leaf(a, pro, pro);
    }
    // body: each instruction of e becomes a block of BLOCK instructions
    let body = a.reg();
    let (no_body, assembled) = (a.label(), a.label());
    a.jz(len, no_body);
    let nop = a.reg();
    a.li(nop, post_nop().code());
    emit_tree_map(a, tree, body, &mut |a: &mut Asm, c: Reg, dst: Reg| {
        let (op, args, i1, i3, r) = (a.reg(), a.reg(), a.reg(), a.reg(), a.reg());
        let (jump, halt, build) = (a.label(), a.label(), a.label());
        a.fst(op, c);
        a.snd(args, c);
        a.mov(i1, c);
        a.mov(i3, nop);
        a.jeq_const(op, 4u32, jump);
        a.jeq_const(op, 9u32, halt);
        a.jmp(build);
        a.bind(jump);
        a.fst(r, args);
        a.snd(args, args);
        a.mov(op, base);
        for _ in 0..BLOCK {
            a.add(op, op, args);
        }
        a.pair(op, r, op);
        a.pair_const_left(i1, 4u32, op);
        a.jmp(build);
        a.bind(halt);
        a.pair_const_left(op, POST_X, args);
        a.pair_const_left(i1, 1u32, op);
        a.pair_const_left(op, POST_S, epi1);
        a.pair_const_left(i3, 4u32, op);
        a.bind(build);
        emit_static_tree(a, &[i1, nop, i3], dst);
    });
    if prologue_input.is_some() {
        emit_node(a, pro, body, body);
    }
    emit_node(a, body, epi, tree);
    a.jmp(assembled);
    a.bind(no_body);
    a.mov(tree, epi);
    if prologue_input.is_some() {
        emit_node(a, pro, epi, tree);
    }
    a.bind(assembled);
    // total length = EPI1 + |outer|
    a.li(tmp, outer.len() as u64);
    a.add(tmp, tmp, epi1);
    a.pair(out, tmp, tree);
}

/// A program mapping the code of `e` to the code of `postcompose(t, e)`.
pub fn postcompose_code_program(t: &Program) -> Program {
    let outer = outer_template(t, None);
    super::asm::build(|a| {
        let out = a.reg();
        emit_postcompose_code(a, 0, None, &outer, out);
        a.halt(out);
    })
}

/// For a fixed `e`, a program mapping `x` to the code of `smn(e, x)`.
pub fn smn_code_program(e: &Program) -> Program {
    super::asm::build(|a| {
        let out = a.reg();
        emit_smn_code(a, e, 0, out);
        a.halt(out);
    })
}

/// A program mapping `pair(pair(p, m), k)` to the code of `result_probe(p, m, k)`.
pub fn result_probe_code_program() -> Program {
    let probe_t = super::transform::equals_const(&nat(0));
    super::asm::build(|a| {
        let (p, m, k, out) = (a.reg(), a.reg(), a.reg(), a.reg());
        a.fst(p, 0);
        a.snd(k, 0);
        a.snd(m, p);
        a.fst(p, p);
        let outer = outer_template(&probe_t, Some((0, k)));
        emit_postcompose_code(a, p, Some(m), &outer, out);
        a.halt(out);
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vm::asm::{build, parse};
    use crate::vm::builtin::*;
    use crate::vm::codec::{decode_tree, tree_leaf};
    use crate::vm::transform::{postcompose, result_probe};
    use crate::vm::{pair, run, Budget, NoOracle, Outcome};
    use proptest::prelude::*;

    fn b() -> Budget {
        Budget::steps(2_000_000)
    }

    fn sample_programs() -> Vec<Program> {
        vec![
            Program::new(vec![]).unwrap(),
            oracle_echo(),
            oracle_negate(),
            loop_program(),
            halt_const(0),
            halt_const(1),
            flip(),
            query_const(3),
            parse("li r1 6\nsub r1 r1 r2\nli r2 1\njz r1 5\njz r3 1\nhalt r1").unwrap(),
            crate::vm::transform::equals_const(&nat(7)),
        ]
    }

    /// Run `conv` on `input` and decode the resulting program.
    fn converted(conv: &Program, input: &Nat) -> Program {
        match run(conv, input, &NoOracle, b()) {
            Outcome::Halts(code) => Program::decode(&code),
            other => panic!("conversion did not halt: {other:?}"),
        }
    }

    #[test]
    fn tree_map_matches_host_leaf_map() {
        // leaf x ↦ leaf(x + 1)
        let succ = build(|a| {
            let out = a.reg();
            emit_tree_map(a, 0, out, &mut |a: &mut Asm, x: Reg, dst: Reg| {
                a.inc(x);
                emit_leaf(a, x, dst);
            });
            a.halt(out);
        });
        for len in 1..40u64 {
            let items: Vec<Nat> = (0..len).map(|i| nat(i * i + 3)).collect();
            let want: Vec<Nat> = items.iter().map(|x| x + 1u32).collect();
            let got = match run(&succ, &encode_tree(&items), &NoOracle, b()) {
                Outcome::Halts(v) => v,
                other => panic!("{other:?}"),
            };
            assert_eq!(got, encode_tree(&want), "len {len}");
            assert_eq!(decode_tree(&got, 100), want);
        }
    }

    #[test]
    fn static_tree_matches_encode_tree() {
        for n in 1..9u64 {
            let p = build(|a| {
                let regs: Vec<Reg> = (0..n).map(|_| a.reg()).collect();
                for (i, r) in regs.iter().enumerate() {
                    a.li(*r, 10 + i as u64);
                }
                let out = a.reg();
                emit_static_tree(a, &regs, out);
                a.halt(out);
            });
            let items: Vec<Nat> = (0..n).map(|i| nat(10 + i)).collect();
            assert_eq!(run(&p, &nat(0), &NoOracle, b()), Outcome::Halts(encode_tree(&items)));
        }
        assert_eq!(encode_tree(&[nat(4)]), tree_leaf(&nat(4)));
    }

    #[test]
    fn flip_code_matches_host_postcompose() {
        let conv = postcompose_code_program(&flip());
        for e in sample_programs() {
            let host = postcompose(&flip(), &e).unwrap();
            assert_eq!(converted(&conv, e.code()).instrs(), host.instrs(), "{e}");
        }
    }

    #[test]
    fn flip_code_stays_small() {
        // a long program: the generated code grows linearly, not exponentially
        let body: String = (0..200).map(|i| format!("li r{} {}\n", i % 7, i)).collect();
        let e = parse(&format!("{body}halt r3")).unwrap();
        let host = postcompose(&flip(), &e).unwrap();
        let conv = postcompose_code_program(&flip());
        let got = converted(&conv, e.code());
        assert_eq!(got.instrs(), host.instrs());
        assert!(got.code().bits() < 64 * host.code().bits());
    }

    #[test]
    fn smn_code_matches_host_smn() {
        for e in sample_programs() {
            let conv = smn_code_program(&e);
            for x in [0u64, 1, 7, 1000] {
                assert_eq!(run(&conv, &nat(x), &NoOracle, b()), Outcome::Halts(smn(&e, &nat(x)).code().clone()));
            }
        }
    }

    #[test]
    fn probe_code_matches_host_probe() {
        let conv = result_probe_code_program();
        for e in sample_programs() {
            for (m, k) in [(0u64, 0u64), (3, 1), (5, 9)] {
                let host = result_probe(&e, &nat(m), &nat(k)).unwrap();
                let input = pair(&pair(e.code(), &nat(m)), &nat(k));
                assert_eq!(converted(&conv, &input).instrs(), host.instrs(), "{e}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn flip_code_matches_on_decoded_programs(code in any::<u64>()) {
            let e = Program::decode(&nat(code));
            prop_assume!(e.instrs().iter().flat_map(Instr::registers).all(|r| (r as usize) < MAX_REGS - 2));
            let host = postcompose(&flip(), &e).unwrap();
            let conv = postcompose_code_program(&flip());
            let got = converted(&conv, e.code());
            prop_assert_eq!(got.instrs(), host.instrs());
        }
    }
}
