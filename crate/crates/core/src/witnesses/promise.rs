//! Promise-problem witnesses: decoding plus coding gives omniscience,
//! disjoint enumerable sets are decodable, many-one reductions transfer to
//! both oracles, and the checker problem codes as two queries.

use super::lattice::join_any;
use super::programs::emit_clocked_call;
use super::{assemble, first_option, position, turn, StrategyPair, WitnessBounds, WitnessError, DEFAULT_BUDGET};
use crate::game::NimueView;
use crate::oracles::{
    checker_problem, coding_oracle, decoding_oracle, embed, named_basic, FiniteOracle, Level, NamedBasic, NatSet,
    PromiseProblem,
};
use crate::vm::asm::build;
use crate::vm::transform::as_arthur;
use crate::vm::{nat, run, Budget, NoOracle, Outcome, Program};

/// The promise witnesses and their parameters.
#[derive(Clone, Debug)]
pub enum PromiseWitness {
    /// `bit ⪯ d_{P,Q} ⊕ c_{P,Q}`.
    CdToOmega { pp: PromiseProblem },
    /// `d_{P,Q}` is computable (`⪯ bottom`) when `P` and `Q` are enumerated
    /// by `p_enum` and `q_enum` (the `k`-th element on input `k`).
    CeDecoder { pp: PromiseProblem, p_enum: Program, q_enum: Program },
    /// `d_{P2,Q2} ⪯ d_{P1,Q1}` from a many-one reduction `map` of `(P2, Q2)` to `(P1, Q1)`.
    MtoDecoding { from: PromiseProblem, to: PromiseProblem, map: Program },
    /// `c_{P1,Q1} ⪯ c_{P2,Q2}` from a many-one reduction `map` of `(P2, Q2)` to `(P1, Q1)`.
    MtoCoding { from: PromiseProblem, to: PromiseProblem, map: Program },
    /// `c_{P×Q, Q×P} ⪯ c_{P,Q}`: two queries in Nimue's chosen order.
    AskTwice { pp: PromiseProblem },
    /// `bit ⪯ d_{P×Q, Q×P} ⊕ c_{P,Q}`: the two-query coding followed by decoding.
    CheckerChain { pp: PromiseProblem },
    /// `bit ⪯ c_{P,Q}` when `decoder` decides `(P, Q)` (0 on `P`, 1 on `Q`).
    DecidedCoding { pp: PromiseProblem, decoder: Program },
}

fn bit() -> Result<FiniteOracle, WitnessError> {
    Ok(named_basic(&NamedBasic::Bit, 2)?)
}

fn t3(f: &FiniteOracle) -> Result<FiniteOracle, WitnessError> {
    Ok(embed(f, Level::T3)?)
}

/// The bit Merlin holds as secret.
fn secret_bit(v: &NimueView<'_>) -> Option<bool> {
    let b = v.secret.iter().next()?;
    Some(b != &nat(0))
}

fn pick(v: &NimueView<'_>, s: &NatSet) -> Option<usize> {
    position(v.options, s)
}

/// Check a many-one reduction on the finite sides.
fn check_mto(from: &PromiseProblem, to: &PromiseProblem, map: &Program) -> Result<(), WitnessError> {
    let sides = [(from.p(), to.p(), "P"), (from.q(), to.q(), "Q")];
    for (src, dst, name) in sides {
        for x in src {
            match run(map, x, &NoOracle, DEFAULT_BUDGET) {
                Outcome::Halts(y) if dst.contains(&y) => {}
                other => {
                    return Err(WitnessError::Hypothesis(format!(
                        "the reduction sends {x} ∈ {name} to {other:?}, outside the target side"
                    )))
                }
            }
        }
    }
    Ok(())
}

/// An enumerator of a finite list: the `k`-th element on input `k`, divergence past the end.
pub fn finite_enumerator(items: &[u64]) -> Program {
    build(|a| {
        let out = a.reg();
        let labels: Vec<_> = items.iter().map(|_| a.label()).collect();
        for (k, l) in labels.iter().enumerate() {
            a.jeq_const(0, k as u64, *l);
        }
        a.diverge();
        for (x, l) in items.iter().zip(labels) {
            a.bind(l);
            a.li(out, *x);
            a.halt(out);
        }
    })
}

/// Build a promise witness.
pub fn witness_promise(w: &PromiseWitness) -> Result<StrategyPair, WitnessError> {
    match w {
        PromiseWitness::CdToOmega { pp } => {
            let target = join_any(&t3(&decoding_oracle(pp))?, &t3(&coding_oracle(pp))?)?;
            // x := query(1) (coding); return query(2x) (decoding)
            let plain = build(|a| {
                let (q, x) = (a.reg(), a.reg());
                a.li(q, 1u32);
                a.query(x, q);
                a.add(q, x, x);
                a.query(x, q);
                a.halt(x);
            });
            let (p, q) = (pp.p().clone(), pp.q().clone());
            let rule = move |v: &NimueView<'_>| {
                if turn(v) == 0 {
                    pick(v, if secret_bit(v)? { &q } else { &p })
                } else {
                    (!v.options.is_empty()).then_some(0)
                }
            };
            Ok(assemble(
                bit()?,
                target,
                as_arthur(&plain)?,
                &rule,
                WitnessBounds::new(3, Budget::steps(20_000)),
                "decoding and coding give omniscience: Nimue codes the bit as P or Q, decoding reads it back",
            ))
        }
        PromiseWitness::CeDecoder { pp, p_enum, q_enum } => {
            let source = decoding_oracle(pp);
            let target = named_basic(&NamedBasic::Bottom, 2)?;
            let decoder = ce_decoder(p_enum, q_enum);
            Ok(assemble(
                source,
                target,
                as_arthur(&decoder)?,
                &|_: &NimueView<'_>| None,
                WitnessBounds::new(1, Budget::steps(2_000_000)),
                "disjoint enumerable sets: Arthur enumerates P and Q in parallel until m appears",
            ))
        }
        PromiseWitness::MtoDecoding { from, to, map } => {
            check_mto(from, to, map)?;
            let plain = build(|a| {
                let (y, r) = (a.reg(), a.reg());
                a.call(map, 0, y);
                a.query(r, y);
                a.halt(r);
            });
            Ok(assemble(
                decoding_oracle(from),
                decoding_oracle(to),
                as_arthur(&plain)?,
                &first_option,
                WitnessBounds::new(2, DEFAULT_BUDGET),
                "many-one reductions transfer to decoding: apply the reduction, then decode its image",
            ))
        }
        PromiseWitness::MtoCoding { from, to, map } => {
            check_mto(from, to, map)?;
            let plain = build(|a| {
                let (x, y) = (a.reg(), a.reg());
                a.query(x, a.zero());
                a.call(map, x, y);
                a.halt(y);
            });
            // secret P1 → offer P2, whose image lies in P1; likewise for Q
            let (p1, p2, q2) = (to.p().clone(), from.p().clone(), from.q().clone());
            let rule = move |v: &NimueView<'_>| pick(v, if v.secret == &p1 { &p2 } else { &q2 });
            Ok(assemble(
                coding_oracle(to),
                coding_oracle(from),
                as_arthur(&plain)?,
                &rule,
                WitnessBounds::new(2, DEFAULT_BUDGET),
                "many-one reductions transfer to coding: apply the reduction to Merlin's element",
            ))
        }
        PromiseWitness::AskTwice { pp } => {
            let checker = checker_problem(pp);
            let plain = build(|a| {
                let (x, y, r) = (a.reg(), a.reg(), a.reg());
                a.query(x, a.zero());
                a.query(y, a.zero());
                a.pair(r, x, y);
                a.halt(r);
            });
            let (p, q, pq) = (pp.p().clone(), pp.q().clone(), checker.p().clone());
            let rule = move |v: &NimueView<'_>| {
                let first_p = v.secret == &pq;
                let want_p = (turn(v) == 0) == first_p;
                pick(v, if want_p { &p } else { &q })
            };
            Ok(assemble(
                coding_oracle(&checker),
                coding_oracle(pp),
                as_arthur(&plain)?,
                &rule,
                WitnessBounds::new(3, Budget::steps(20_000)),
                "checker coding is plain coding: Nimue plays P then Q, or Q then P",
            ))
        }
        PromiseWitness::CheckerChain { pp } => {
            let checker = checker_problem(pp);
            let target = join_any(&t3(&decoding_oracle(&checker))?, &t3(&coding_oracle(pp))?)?;
            let plain = build(|a| {
                let (one, x, y, q) = (a.reg(), a.reg(), a.reg(), a.reg());
                a.li(one, 1u32);
                a.query(x, one);
                a.query(y, one);
                a.pair(q, x, y);
                a.add(q, q, q);
                a.query(x, q);
                a.halt(x);
            });
            let (p, q) = (pp.p().clone(), pp.q().clone());
            let rule = move |v: &NimueView<'_>| match turn(v) {
                t @ (0 | 1) => {
                    let want_p = (t == 0) != secret_bit(v)?;
                    pick(v, if want_p { &p } else { &q })
                }
                _ => (!v.options.is_empty()).then_some(0),
            };
            Ok(assemble(
                bit()?,
                target,
                as_arthur(&plain)?,
                &rule,
                WitnessBounds::new(4, Budget::steps(20_000)),
                "omniscience from checker decoding and coding: two coding queries, then one decoding query",
            ))
        }
        PromiseWitness::DecidedCoding { pp, decoder } => {
            for (side, want) in [(pp.p(), 0u64), (pp.q(), 1)] {
                for x in side {
                    if run(decoder, x, &NoOracle, DEFAULT_BUDGET) != Outcome::Halts(nat(want)) {
                        return Err(WitnessError::Hypothesis(format!("the decoder does not return {want} on {x}")));
                    }
                }
            }
            let plain = build(|a| {
                let (x, y) = (a.reg(), a.reg());
                a.query(x, a.zero());
                a.call(decoder, x, y);
                a.halt(y);
            });
            let (p, q) = (pp.p().clone(), pp.q().clone());
            let rule = move |v: &NimueView<'_>| pick(v, if secret_bit(v)? { &q } else { &p });
            Ok(assemble(
                bit()?,
                coding_oracle(pp),
                as_arthur(&plain)?,
                &rule,
                WitnessBounds::new(2, DEFAULT_BUDGET),
                "omniscient coding when decoding is computable: Arthur decodes Merlin's element",
            ))
        }
    }
}

/// Stage `s = 1, 2, …`: for `k < s`, run both enumerators on `k` for `s`
/// steps; return 0 when `P` yields the input, 1 when `Q` does.
fn ce_decoder(p_enum: &Program, q_enum: &Program) -> Program {
    build(|a| {
        let [stage, k, fuel, v, d, out] = [(); 6].map(|_| a.reg());
        let (next_stage, next_k, try_q, q_done, found_p, found_q) =
            (a.label(), a.label(), a.label(), a.label(), a.label(), a.label());
        a.li(stage, 0u32);
        a.bind(next_stage);
        a.inc(stage);
        a.li(k, 0u32);
        let k_loop = a.here();
        a.diff(d, k, stage);
        a.jz(d, next_stage);
        // P enumerator on k
        a.mov(fuel, stage);
        let p_halted = a.label();
        emit_clocked_call(a, p_enum, k, fuel, v, p_halted, try_q);
        a.bind(p_halted);
        a.jeq(v, 0, found_p);
        a.bind(try_q);
        a.mov(fuel, stage);
        let q_halted = a.label();
        emit_clocked_call(a, q_enum, k, fuel, v, q_halted, q_done);
        a.bind(q_halted);
        a.jeq(v, 0, found_q);
        a.bind(q_done);
        a.bind(next_k);
        a.inc(k);
        a.jmp(k_loop);
        a.bind(found_p);
        a.li(out, 0u32);
        a.halt(out);
        a.bind(found_q);
        a.li(out, 1u32);
        a.halt(out);
    })
}
