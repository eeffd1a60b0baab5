//! Co-Turing witnesses over budgeted relative halting sets `H_0^A`, `H_1^A`,
//! the halting riddle, and the "all but one" reduction to `c_{H_0,H_1}`.

use std::collections::BTreeSet;

use super::{assemble, first_option, position, StrategyPair, WitnessBounds, WitnessError};
use crate::game::NimueView;
use crate::oracles::halting::{
    membership_probe, probe_for, relative_halting_sets, relative_halting_sets_of_codes, HaltingSets,
};
use crate::oracles::meet::{meet_query, meet_t1};
use crate::oracles::{
    checker_problem, coding_oracle, decoding_oracle, error_omega_over, FiniteOracle, NatSet, PromiseProblem,
};
use crate::vm::asm::{build, window_size};
use crate::vm::builtin::{flip, halt_const, loop_program, oracle_echo, oracle_negate};
use crate::vm::routines::{postcompose_code_program, result_probe_code_program, smn_code_program};
use crate::vm::transform::{as_arthur, dispatch, dispatch_clocked, result_probe};
use crate::vm::{nat, pair, run, Budget, Nat, NoOracle, Outcome, Program};

/// Steps allowed when computing the halting sets.
pub const HALTING_BUDGET: Budget = Budget::steps(5_000);

/// The co-Turing witnesses and their parameters.
#[derive(Clone, Debug)]
pub enum CoturingWitness {
    /// `d_{H_0^A, H_1^A} ⪯ 1_A` over `pool`; `1_A` is declared on `0..domain`.
    DecoderFromTuring { a: BTreeSet<u64>, pool: Vec<Program>, domain: u64 },
    /// `1_A ⪯ d_{H_0^A, H_1^A}` on `0..domain`, the halting sets taken over the
    /// membership probes plus `filler`.
    TuringFromDecoder { a: BTreeSet<u64>, domain: u64, filler: Vec<Program> },
    /// `d_{H_0^A, H_1^A} ⪯ d_{H_0×H_1, H_1×H_0}` over `pool` (flipped programs
    /// are added to the checker side).
    FlipChecker { a: BTreeSet<u64>, pool: Vec<Program> },
    /// `1_A ⋏ 1_B ⪯ d_{H_0^A×H_0^B, H_1^A×H_1^B}` for the T1 meet, on the tuples
    /// `⟨p, q, m, n⟩` with `p, q ∈ {echo, negate}` and `m, n < domain`.
    MeetDecoder { a: BTreeSet<u64>, b: BTreeSet<u64>, domain: u64, filler: Vec<Program> },
}

/// The characteristic function of `a` as a T0 oracle on `0..domain`.
pub fn characteristic(a: &BTreeSet<u64>, domain: u64) -> FiniteOracle {
    FiniteOracle::t0((0..domain).map(|k| nat(a.contains(&k) as u64)))
}

/// The halting sets of `pool` relative to `a`, refusing undetermined entries.
pub fn halting_sets(a: &BTreeSet<u64>, pool: &[Program]) -> Result<HaltingSets, WitnessError> {
    let set: BTreeSet<Nat> = a.iter().map(|&k| nat(k)).collect();
    let h = relative_halting_sets(&set, pool, HALTING_BUDGET);
    if !h.unknown.is_empty() {
        return Err(WitnessError::UnknownHalting(h.unknown.len()));
    }
    Ok(h)
}

/// [`halting_sets`] keyed by raw codes (each standing for the program it decodes to).
fn halting_sets_of_codes(a: &BTreeSet<u64>, codes: &[Nat]) -> Result<HaltingSets, WitnessError> {
    let set: BTreeSet<Nat> = a.iter().map(|&k| nat(k)).collect();
    let h = relative_halting_sets_of_codes(&set, codes, HALTING_BUDGET);
    if !h.unknown.is_empty() {
        return Err(WitnessError::UnknownHalting(h.unknown.len()));
    }
    Ok(h)
}

fn promise(h: &HaltingSets) -> Result<PromiseProblem, WitnessError> {
    h.promise().ok_or_else(|| WitnessError::Hypothesis("both halting sets must be inhabited".into()))
}

fn dedup(programs: impl IntoIterator<Item = Program>) -> Vec<Program> {
    let mut seen = BTreeSet::new();
    programs.into_iter().filter(|p| seen.insert(p.code().clone())).collect()
}

/// Build a co-Turing witness.
pub fn witness_coturing(w: &CoturingWitness) -> Result<StrategyPair, WitnessError> {
    match w {
        CoturingWitness::DecoderFromTuring { a, pool, domain } => {
            let h = halting_sets(a, pool)?;
            let universal = dispatch(pool)?;
            // e ↦ φ_e(0), the queries of φ_e going to 1_A
            let plain = build(|asm| {
                let (x, out) = (asm.reg(), asm.reg());
                asm.pair(x, 0, asm.zero());
                asm.call(&universal, x, out);
                asm.halt(out);
            });
            Ok(assemble(
                decoding_oracle(&promise(&h)?),
                characteristic(a, *domain),
                as_arthur(&plain)?,
                &first_option,
                WitnessBounds::new(4, Budget::steps(200_000)),
                "decoding relative halting is Turing: Arthur runs e on 0 with A as oracle",
            ))
        }
        CoturingWitness::TuringFromDecoder { a, domain, filler } => {
            let pool = dedup((0..*domain).map(probe_for).chain(filler.iter().cloned()));
            let h = halting_sets(a, &pool)?;
            let to_code = smn_code_program(&membership_probe());
            let plain = build(|asm| {
                let (c, r) = (asm.reg(), asm.reg());
                asm.call(&to_code, 0, c);
                asm.query(r, c);
                asm.halt(r);
            });
            Ok(assemble(
                characteristic(a, *domain),
                decoding_oracle(&promise(&h)?),
                as_arthur(&plain)?,
                &first_option,
                WitnessBounds::new(2, Budget::steps(200_000)),
                "Turing below relative-halting decoding: Arthur builds the probe for k and decodes it",
            ))
        }
        CoturingWitness::FlipChecker { a, pool } => {
            let h = halting_sets(a, pool)?;
            // the checker side is keyed by the codes Arthur actually computes
            let to_flip = postcompose_code_program(&flip());
            let mut codes: Vec<Nat> = pool.iter().map(|e| e.code().clone()).collect();
            let mut flips = Vec::new();
            for e in pool {
                match run(&to_flip, e.code(), &NoOracle, Budget::steps(50_000_000)) {
                    Outcome::Halts(c) => flips.push((e.code().clone(), c)),
                    other => return Err(WitnessError::Hypothesis(format!("flip code computation: {other:?}"))),
                }
            }
            codes.extend(flips.iter().map(|(_, c)| c.clone()));
            codes.sort();
            codes.dedup();
            let wide = halting_sets_of_codes(a, &codes)?;
            for (e, c) in &flips {
                if let Some(side) = h.side(e) {
                    if wide.side(c) != Some(1 - side) {
                        return Err(WitnessError::Hypothesis(
                            "a pool program uses registers reserved by post-composition; its flip is miscomputed"
                                .into(),
                        ));
                    }
                }
            }
            let plain = build(|asm| {
                let (c, q, r) = (asm.reg(), asm.reg(), asm.reg());
                asm.call(&to_flip, 0, c);
                asm.pair(q, 0, c);
                asm.query(r, q);
                asm.halt(r);
            });
            Ok(assemble(
                decoding_oracle(&promise(&h)?),
                decoding_oracle(&checker_problem(&promise(&wide)?)),
                as_arthur(&plain)?,
                &first_option,
                WitnessBounds::new(2, Budget::steps(200_000)),
                "checker decoding of relative halting: Arthur asks about e together with flip∘e",
            ))
        }
        CoturingWitness::MeetDecoder { a, b, domain, filler } => meet_decoder(a, b, *domain, filler),
    }
}

fn meet_decoder(
    a: &BTreeSet<u64>,
    b: &BTreeSet<u64>,
    domain: u64,
    filler: &[Program],
) -> Result<StrategyPair, WitnessError> {
    let readers = [oracle_echo(), oracle_negate()];
    let (fa, fb) = (characteristic(a, domain), characteristic(b, domain));
    let mut queries = Vec::new();
    for p in &readers {
        for q in &readers {
            for m in 0..domain {
                for n in 0..domain {
                    queries.push(meet_query(p.code(), q.code(), &nat(m), &nat(n)));
                }
            }
        }
    }
    let (source, unknown) = meet_t1(&fa, &fb, Budget::steps(10_000)).materialize(&queries)?;
    if !unknown.is_empty() {
        return Err(WitnessError::UnknownHalting(unknown.len()));
    }
    // the halting sets are keyed by the probe codes Arthur computes at run time
    let to_code = result_probe_code_program();
    let mut codes: Vec<Nat> = filler.iter().map(|e| e.code().clone()).collect();
    for p in &readers {
        for m in 0..domain {
            for k in 0..2 {
                let host = result_probe(p, &nat(m), &nat(k))?;
                let input = pair(&pair(p.code(), &nat(m)), &nat(k));
                match run(&to_code, &input, &NoOracle, Budget::steps(50_000_000)) {
                    Outcome::Halts(c) if Program::decode(&c).instrs() == host.instrs() => codes.push(c),
                    other => return Err(WitnessError::Hypothesis(format!("probe code computation: {other:?}"))),
                }
            }
        }
    }
    codes.sort();
    codes.dedup();
    let (ha, hb) = (halting_sets_of_codes(a, &codes)?, halting_sets_of_codes(b, &codes)?);
    let product =
        |x: &NatSet, y: &NatSet| -> NatSet { x.iter().flat_map(|u| y.iter().map(move |v| pair(u, v))).collect() };
    let pq = PromiseProblem::new(product(&ha.h0, &hb.h0), product(&ha.h1, &hb.h1))
        .map_err(|_| WitnessError::Hypothesis("both product halting sets must be inhabited".into()))?;
    // N := 0, 1, …: ask whether (a_N, b_N) lies in Q; declare the first such N
    let plain = build(|asm| {
        let [p, q, m, n, big_n, x, ca, cb, t, r] = [(); 10].map(|_| asm.reg());
        let found = asm.label();
        let window = asm.regs(window_size(&to_code));
        asm.snd(t, 0);
        asm.fst(p, t);
        asm.snd(t, t);
        asm.fst(q, t);
        asm.snd(t, t);
        asm.fst(m, t);
        asm.snd(n, t);
        let top = asm.here();
        asm.pair(x, p, m);
        asm.pair(x, x, big_n);
        asm.call_in(&to_code, x, ca, &window);
        asm.pair(x, q, n);
        asm.pair(x, x, big_n);
        asm.call_in(&to_code, x, cb, &window);
        asm.pair(t, ca, cb);
        asm.query(r, t);
        asm.jnz(r, found);
        asm.inc(big_n);
        asm.jmp(top);
        asm.bind(found);
        asm.halt(big_n);
    });
    Ok(assemble(
        source,
        decoding_oracle(&pq),
        as_arthur(&plain)?,
        &first_option,
        WitnessBounds::new(4, Budget::steps(400_000)),
        "decoding the product halting sets computes the T1 meet: loop over N asking about (a_N, b_N)",
    ))
}

/// A decoder for the checker problem of "how many of two programs halt
/// within `fuel` steps": on `pair(pair(a, b), ·)` it returns the parity of
/// the number of `a, b` halting, which is 0 on `P×Q` and 1 on `Q×P`.
/// Codes outside `pool` make it diverge.
pub fn halting_decoder(pool: &[Program], fuel: u64) -> Result<Program, WitnessError> {
    let clocked = dispatch_clocked(pool)?;
    Ok(build(|asm| {
        let [left, c, x, out, sum] = [(); 5].map(|_| asm.reg());
        asm.fst(left, 0);
        for half in [true, false] {
            if half {
                asm.fst(c, left);
            } else {
                asm.snd(c, left);
            }
            asm.pair(x, c, asm.zero());
            asm.li(out, fuel);
            asm.pair(x, x, out);
            asm.call(&clocked, x, out);
            asm.fst(out, out);
            asm.add(sum, sum, out);
        }
        // parity of sum ∈ {0, 1, 2}
        let even = asm.label();
        asm.jeq_const(sum, 2u32, even);
        asm.halt(sum);
        asm.bind(even);
        asm.li(sum, 0u32);
        asm.halt(sum);
    }))
}

/// The program deciding "e halts" from a checker decoder: it decodes
/// `((loop, e), (halt, e))`, which lies in `Q×P` exactly when `e` halts.
pub fn riddle_halting(decoder: &Program) -> Program {
    let (lp, hp) = (loop_program(), halt_const(0));
    build(|asm| {
        let (l, h, x, y, out) = (asm.reg(), asm.reg(), asm.reg(), asm.reg(), asm.reg());
        asm.li(l, lp.code().clone());
        asm.li(h, hp.code().clone());
        asm.pair(x, l, 0);
        asm.pair(y, h, 0);
        asm.pair(x, x, y);
        asm.call(decoder, x, out);
        asm.halt(out);
    })
}

/// `error_omega(n) ⪯ c_{H_0,H_1}` over the universe `H_0 ∪ H_1`: Nimue offers
/// the halting set that misses Merlin's excluded value, Arthur declares the reply.
pub fn witness_error_inf(h: &HaltingSets, n: u64) -> Result<StrategyPair, WitnessError> {
    if !h.unknown.is_empty() {
        return Err(WitnessError::UnknownHalting(h.unknown.len()));
    }
    let pp = promise(h)?;
    let universe: NatSet = h.h0.union(&h.h1).cloned().collect();
    let (h0, h1) = (h.h0.clone(), h.h1.clone());
    let rule = move |v: &NimueView<'_>| position(v.options, if h0.is_subset(v.secret) { &h0 } else { &h1 });
    Ok(assemble(
        error_omega_over(&universe, n),
        coding_oracle(&pp),
        as_arthur(&crate::vm::builtin::query_const(0))?,
        &rule,
        WitnessBounds::new(3, Budget::steps(10_000)),
        "all-but-one below co-Turing coding: Nimue forces Merlin to give an element other than i",
    ))
}
