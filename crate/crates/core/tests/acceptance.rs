//! Acceptance suite: one pass/fail line per criterion, each checked exactly
//! against an independent oracle (direct simulation, membership, or
//! exhaustive enumeration). Runs without the libtest harness so the lines
//! always print.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use anm_core::decide::{both_win, decide_checker, CheckerVerdict, DecideBounds, MTableParams};
use anm_core::frames::{
    basic_nuclei, cot, enumerate_nuclei, nucleus_ops, posets_up_to, satisfies_wlem, smallest_nucleus_above, CotMethod,
    FiniteFrame, Nucleus, NucleusOp,
};
use anm_core::game::{
    run_play, tabulate_nimue, verify_winning, ArthurStrategy, GameBounds, GameVerdict, NimueStrategy, Terminal,
};
use anm_core::oracles::halting::{coturing_pool, halting_pool};
use anm_core::oracles::{
    checker_problem, coding_oracle, decoding_oracle, embed, join_oplus, named_basic, Family, FiniteOracle, Level,
    NamedBasic, NatSet, PromiseProblem,
};
use anm_core::vm::asm::parse;
use anm_core::vm::builtin::{flip, halt_const, identity, oracle_echo};
use anm_core::vm::transform::{as_arthur, postcompose, rewrite_oracle_calls, smn};
use anm_core::vm::{nat, pair, run, run_traced, Answer, Budget, Nat, NoOracle, Outcome, SetOracle};
use anm_core::witnesses::programs::parity_program;
use anm_core::witnesses::{
    extract_t1meet_xy, finite_enumerator, flippable_pool, halting_decoder, halting_sets, riddle_halting,
    t1_meet_extender, witness_basic, witness_coturing, witness_lattice, witness_promise, BasicWitness, CoturingWitness,
    LatticeWitness, PromiseWitness, StrategyPair,
};

use common::{random_program, random_promise, random_t01, random_t3};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn win(w: &StrategyPair, what: &str) -> Result<(), String> {
    match w.verify() {
        GameVerdict::Win => Ok(()),
        other => Err(format!("{what}: {other}")),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// 1. game-rule conformance

fn c1_game_rules() -> Check {
    let b = |d| GameBounds::new(d, Budget::steps(20_000));
    let f = FiniteOracle::t0_u(&[3]);
    let echo = ArthurStrategy::new(as_arthur(&oracle_echo()).map_err(|e| e.to_string())?);
    let declare0 = ArthurStrategy::new(parse("li r1 1\nli r2 0\npair r0 r1 r2\nhalt r0").map_err(|e| e.to_string())?);
    let malformed = ArthurStrategy::new(parse("li r1 2\npair r0 r1 r1\nhalt r0").map_err(|e| e.to_string())?);
    let first = |g: &FiniteOracle| tabulate_nimue(&f, g, &echo, &|_| Some(0), b(3));

    // querying a point with no sets loses
    let empty_g = FiniteOracle::t1_u(&[None]);
    match verify_winning(&f, &empty_g, &echo, &NimueStrategy::empty(), b(3)) {
        GameVerdict::Lose(t) => {
            ensure(matches!(t.terminal, Terminal::QueryEmptyFamily { .. }), || format!("{:?}", t.terminal))?
        }
        other => return Err(format!("empty query: {other}")),
    }
    // Nimue choosing ∅ wins
    let top = FiniteOracle::t3([Family::new([NatSet::new()])]);
    ensure(verify_winning(&f, &top, &echo, &first(&top), b(3)).is_win(), || "Nimue-∅ did not win".into())?;
    let t = run_play(&f, &top, &echo, &first(&top), (&nat(0), 0), &[], b(3)).map_err(|e| e.to_string())?;
    ensure(t.terminal == Terminal::NimueEmptySet, || format!("{:?}", t.terminal))?;
    // a malformed move loses
    match verify_winning(&f, &f, &malformed, &NimueStrategy::empty(), b(3)) {
        GameVerdict::Lose(t) => {
            ensure(matches!(t.terminal, Terminal::ArthurMalformed { .. }), || format!("{:?}", t.terminal))?
        }
        other => return Err(format!("malformed: {other}")),
    }
    // wrong declaration loses, right declaration wins
    match verify_winning(&f, &f, &declare0, &NimueStrategy::empty(), b(3)) {
        GameVerdict::Lose(t) => {
            ensure(matches!(t.terminal, Terminal::Declared { success: false, .. }), || format!("{:?}", t.terminal))?
        }
        other => return Err(format!("wrong declaration: {other}")),
    }
    ensure(verify_winning(&f, &f, &echo, &first(&f), b(3)).is_win(), || "right declaration did not win".into())?;
    Ok("5 rule fixtures".into())
}

// 2. reductions between a bit and omega

fn c2_bit_and_omega() -> Check {
    let n = 8;
    let bounds = |w: &StrategyPair| GameBounds::new(n as usize + 1, w.bounds.budget);
    for w in [BasicWitness::BitToOmega { universe: n }, BasicWitness::OmegaToBit { n }] {
        let s = witness_basic(&w).map_err(|e| e.to_string())?;
        match s.verify_within(bounds(&s)) {
            GameVerdict::Win => {}
            other => return Err(format!("{}: {other}", s.provenance)),
        }
    }
    Ok(format!("universe {n}, depth {}", n + 1))
}

// 3. joins

fn c3_joins() -> Check {
    let mut r = rng(3);
    for i in 0..50 {
        let (f, g) = (random_t01(&mut r), random_t01(&mut r));
        let wf =
            witness_lattice(&LatticeWitness::JoinLeft { f: f.clone(), g: g.clone() }).map_err(|e| e.to_string())?;
        let wg = witness_lattice(&LatticeWitness::JoinRight { f, g }).map_err(|e| e.to_string())?;
        win(&wf, &format!("pair {i} left"))?;
        win(&wg, &format!("pair {i} right"))?;
        let wu = witness_lattice(&LatticeWitness::JoinUniv { wf: Box::new(wf), wg: Box::new(wg) })
            .map_err(|e| e.to_string())?;
        win(&wu, &format!("pair {i} univ"))?;
    }
    Ok("50 random T0/T1 pairs".into())
}

// 4. T1 meet

fn c4_t1_meet() -> Check {
    let mut r = rng(4);
    let programs = vec![oracle_echo(), anm_core::vm::builtin::oracle_negate()];
    for i in 0..20 {
        let (f, g) = (random_t01(&mut r), random_t01(&mut r));
        let w = witness_lattice(&LatticeWitness::MeetT1Lb {
            f,
            g,
            programs: programs.clone(),
            budget: Budget::steps(1_000),
        })
        .map_err(|e| e.to_string())?;
        win(&w, &format!("instance {i}"))?;
    }
    let fv = [1, 0, 0, 1, 1, 0, 1, 0];
    let gv = [0, 0, 1, 1, 0, 1, 1, 1];
    let e = t1_meet_extender(&finite_enumerator(&fv), &finite_enumerator(&gv), false).map_err(|e| e.to_string())?;
    let x = extract_t1meet_xy(&e).x;
    for (m, &want) in fv.iter().enumerate() {
        let got = run(&x, &nat(m as u64), &NoOracle, Budget::steps(5_000_000));
        ensure(got == Outcome::Halts(nat(want)), || format!("X({m}) = {got:?}, f({m}) = {want}"))?;
    }
    Ok("20 random lower bounds; X recovers f on 0..8".into())
}

// 5. T3 meet and distributivity

fn c5_t3_meet() -> Check {
    let mut r = rng(5);
    for i in 0..20 {
        let (f, g, h) = (random_t3(&mut r), random_t3(&mut r), random_t3(&mut r));
        let wf =
            witness_lattice(&LatticeWitness::JoinLeft { f: f.clone(), g: g.clone() }).map_err(|e| e.to_string())?;
        let wg =
            witness_lattice(&LatticeWitness::JoinRight { f: g.clone(), g: f.clone() }).map_err(|e| e.to_string())?;
        let u = witness_lattice(&LatticeWitness::MeetT3Univ { wf: Box::new(wf), wg: Box::new(wg) })
            .map_err(|e| e.to_string())?;
        win(&u, &format!("triple {i} meet"))?;
        let d = witness_lattice(&LatticeWitness::Distributivity { f, g, h }).map_err(|e| e.to_string())?;
        win(&d, &format!("triple {i} distributivity"))?;
    }
    Ok("20 random triples".into())
}

// 6 and 7. promise problems

fn c6_cd_to_omega() -> Check {
    let mut r = rng(6);
    for i in 0..20 {
        let pp = random_promise(&mut r);
        let w = witness_promise(&PromiseWitness::CdToOmega { pp }).map_err(|e| e.to_string())?;
        win(&w, &format!("problem {i}"))?;
    }
    Ok("20 random promise problems within 0..9".into())
}

fn t3(o: &FiniteOracle) -> Result<FiniteOracle, String> {
    embed(o, Level::T3).map_err(|e| e.to_string())
}

fn c7_ask_twice() -> Check {
    let mut r = rng(6);
    for i in 0..20 {
        let pp = random_promise(&mut r);
        let ask = witness_promise(&PromiseWitness::AskTwice { pp: pp.clone() }).map_err(|e| e.to_string())?;
        win(&ask, &format!("problem {i} ask-twice"))?;
        let chain = witness_promise(&PromiseWitness::CheckerChain { pp: pp.clone() }).map_err(|e| e.to_string())?;
        win(&chain, &format!("problem {i} chain"))?;
        let bit = named_basic(&NamedBasic::Bit, 2).map_err(|e| e.to_string())?;
        let target = join_oplus(&t3(&decoding_oracle(&checker_problem(&pp)))?, &t3(&coding_oracle(&pp))?)
            .map_err(|e| e.to_string())?;
        ensure(t3(&chain.source)? == t3(&bit)?, || format!("problem {i}: chain source is not a bit"))?;
        ensure(chain.target == target, || format!("problem {i}: chain target is not checker decoding ⊕ coding"))?;
    }
    Ok("20 problems: ask-twice and bit ⪯ checker decoding ⊕ coding".into())
}

// 8. the checker decider

fn c8_decider() -> Check {
    let (p, q): (Vec<u64>, Vec<u64>) = ((0..10).step_by(2).collect(), (1..10).step_by(2).collect());
    let pp = PromiseProblem::from_u64(&p, &q).map_err(|e| e.to_string())?;
    let sigma = witness_promise(&PromiseWitness::DecidedCoding { pp: pp.clone(), decoder: parity_program() })
        .map_err(|e| e.to_string())?
        .arthur;
    let bounds = DecideBounds { fragment_max: 6, budget: Budget::steps(100_000) };
    let pairs: Vec<(u64, u64, CheckerVerdict)> = p
        .iter()
        .flat_map(|&x| q.iter().map(move |&y| (x, y, CheckerVerdict::InPxQ)))
        .chain(q.iter().flat_map(|&x| p.iter().map(move |&y| (x, y, CheckerVerdict::InQxP))))
        .collect();
    let mut exclusive = 0;
    for (x, y, want) in &pairs {
        let d =
            decide_checker(&sigma, &pp, &nat(0), &nat(1), (&nat(*x), &nat(*y)), bounds).map_err(|e| e.to_string())?;
        ensure(&d.verdict == want, || format!("({x}, {y}): {} instead of {want}", d.verdict))?;
        let params = MTableParams::new(&pp, nat(*x), nat(*y), nat(0), nat(1)).map_err(|e| e.to_string())?;
        for m in 1..=bounds.fragment_max {
            ensure(!both_win(&sigma, &params, m, bounds.budget), || format!("({x}, {y}): both win at M = {m}"))?;
            exclusive += 1;
        }
    }
    Ok(format!("{} pairs, 0 errors, 0 unknown; exclusion on {exclusive} (pair, M)", pairs.len()))
}

// 9. the riddle

fn c9_riddle() -> Check {
    let pool = halting_pool(20);
    let fuel = 200;
    let riddle = riddle_halting(&halting_decoder(&pool, fuel).map_err(|e| e.to_string())?);
    for e in &pool {
        let halts = matches!(run(e, &nat(0), &NoOracle, Budget::steps(fuel)), Outcome::Halts(_));
        let got = run(&riddle, e.code(), &NoOracle, Budget::steps(1_000_000));
        ensure(got == Outcome::Halts(nat(halts as u64)), || format!("{e}: {got:?}, direct {halts}"))?;
    }
    Ok("20 programs, budget 200".into())
}

// 10. co-Turing witnesses

fn c10_coturing() -> Check {
    let pool = coturing_pool(30);
    let flippable = flippable_pool(30);
    for mask in 0u32..16 {
        let a: BTreeSet<u64> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
        let b: BTreeSet<u64> = (0..4).filter(|i| mask >> i & 1 == 0).collect();
        for (label, pool) in [("pool", &pool), ("flip pool", &flippable)] {
            let h = halting_sets(&a, pool).map_err(|e| format!("{a:?} {label}: {e}"))?;
            ensure(h.unknown.is_empty(), || format!("{a:?}: unknown entries"))?;
        }
        let cases = [
            CoturingWitness::DecoderFromTuring { a: a.clone(), pool: pool.clone(), domain: 16 },
            CoturingWitness::TuringFromDecoder { a: a.clone(), domain: 4, filler: pool.clone() },
            CoturingWitness::FlipChecker { a: a.clone(), pool: flippable.clone() },
            CoturingWitness::MeetDecoder { a: a.clone(), b, domain: 4, filler: pool.clone() },
        ];
        for w in &cases {
            let s = witness_coturing(w).map_err(|e| format!("{a:?}: {e}"))?;
            win(&s, &format!("{a:?}"))?;
        }
    }
    Ok(format!("16 sets A ⊆ 0..3, pools of {} and {} programs", pool.len(), flippable.len()))
}

// 11. VM laws

fn halts(o: &Outcome) -> Option<&Nat> {
    o.value()
}

fn c11_vm_laws() -> Check {
    let mut r = rng(11);
    let a = SetOracle::from_u64([1, 3]);
    let b = 2_000;
    let big = Budget::steps(100_000);
    let mut halted = [0usize; 4];
    // s-m-n: φ_{smn(e,x)}(y) = φ_e(⟨x, y⟩)
    for i in 0..200 {
        let e = random_program(&mut r, true, true);
        let (x, y) = (nat(r.gen_range(0..8)), nat(r.gen_range(0..8)));
        let s = smn(&e, &x);
        let direct = run(&e, &pair(&x, &y), &a, Budget::steps(b));
        let specialized = run(&s, &y, &a, Budget::steps(b));
        if let Some(v) = halts(&direct) {
            halted[0] += 1;
            ensure(halts(&run(&s, &y, &a, big)) == Some(v), || format!("smn case {i}: {e}"))?;
        }
        if let Some(v) = halts(&specialized) {
            ensure(halts(&run(&e, &pair(&x, &y), &a, big)) == Some(v), || format!("smn case {i} (converse): {e}"))?;
        }
    }
    // post-composition: φ_{t∘e}(x) = φ_t(φ_e(x))
    let add_pair = parse("fst r1 r0\nsnd r2 r0\nadd r0 r1 r2\nhalt r0").map_err(|e| e.to_string())?;
    for i in 0..200 {
        let t = match i % 5 {
            0 => flip(),
            1 => identity(),
            2 => halt_const(3),
            3 => add_pair.clone(),
            _ => random_program(&mut r, false, false),
        };
        let e = random_program(&mut r, true, true);
        let x = nat(r.gen_range(0..8));
        let c = postcompose(&t, &e).map_err(|err| err.to_string())?;
        let inner = run(&e, &x, &a, Budget::steps(b));
        if let Some(v) = halts(&inner) {
            halted[1] += 1;
            let want = run(&t, v, &NoOracle, big);
            ensure(halts(&run(&c, &x, &a, big)) == halts(&want), || format!("postcompose case {i}: {t} after {e}"))?;
        }
        if let Some(w) = halts(&run(&c, &x, &a, Budget::steps(b))) {
            let v =
                halts(&inner).cloned().ok_or_else(|| format!("postcompose case {i}: composite halts, e does not"))?;
            ensure(halts(&run(&t, &v, &NoOracle, big)) == Some(w), || format!("postcompose case {i} (converse)"))?;
        }
    }
    // oracle rewriting: φ_{rewrite(e,h)}^A(x) = φ_e^{φ_h^A}(x)
    for i in 0..200 {
        let e = random_program(&mut r, true, true);
        let h = random_program(&mut r, false, true);
        let x = nat(r.gen_range(0..8));
        let via_h = |q: &Nat| match run(&h, q, &a, big) {
            Outcome::Halts(v) => Answer::Defined(v),
            _ => Answer::Undefined,
        };
        let rw = rewrite_oracle_calls(&e, &h).map_err(|err| err.to_string())?;
        let direct = run(&e, &x, &via_h, Budget::steps(b));
        if let Some(v) = halts(&direct) {
            halted[2] += 1;
            ensure(halts(&run(&rw, &x, &a, big)) == Some(v), || format!("rewrite case {i}: {e} with {h}"))?;
        }
        if let Some(v) = halts(&run(&rw, &x, &a, Budget::steps(b))) {
            ensure(halts(&direct) == Some(v), || format!("rewrite case {i} (converse): {e} with {h}"))?;
        }
    }
    // budget monotonicity
    for i in 0..200 {
        let p = random_program(&mut r, true, true);
        let x = nat(r.gen_range(0..8));
        let b1 = r.gen_range(1..300);
        let b2 = b1 + r.gen_range(0..300);
        let small = run_traced(&p, &x, &a, Budget::steps(b1));
        let large = run_traced(&p, &x, &a, Budget::steps(b2));
        if small.outcome != Outcome::OutOfBudget {
            halted[3] += 1;
            ensure(small == large, || format!("monotonicity case {i}: {p}"))?;
        }
        if large.outcome == Outcome::OutOfBudget {
            ensure(small.outcome == Outcome::OutOfBudget, || format!("monotonicity case {i} (timeouts): {p}"))?;
        }
    }
    Ok(format!(
        "s-m-n, postcompose, rewrite, budget monotonicity: 200 cases each ({}/{}/{}/{} terminate)",
        halted[0], halted[1], halted[2], halted[3]
    ))
}

// 12. frames

/// The least of `all` above `map`, by direct search.
fn least_above(f: &FiniteFrame, all: &[Nucleus], map: &[usize]) -> Option<Nucleus> {
    let above: Vec<&Nucleus> = all.iter().filter(|n| f.elements().all(|u| f.le(map[u], n.apply(u)))).collect();
    above.iter().find(|n| above.iter().all(|m| f.pointwise_le(n, m))).map(|n| (*n).clone())
}

fn c12_frames() -> Check {
    let mut frames: Vec<(String, FiniteFrame)> = posets_up_to(4)
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("poset #{i} ({} points)", p.len()), FiniteFrame::downsets(p)))
        .collect();
    frames.push(("Sierpiński".into(), FiniteFrame::sierpinski()));
    frames.push(("five-element".into(), FiniteFrame::five_element()));
    let mut report = Vec::new();
    let (mut agree_total, mut cot_total) = (0, 0);
    for (name, f) in &frames {
        let all = enumerate_nuclei(f).map_err(|e| e.to_string())?;
        for j in &all {
            for k in &all {
                // join against the least upper bound in the enumerated lattice
                let join = nucleus_ops(NucleusOp::Join, j, k, f).map_err(|e| e.to_string())?;
                let pointwise: Vec<usize> = f.elements().map(|u| f.join(j.apply(u), k.apply(u))).collect();
                ensure(Some(&join) == least_above(f, &all, &pointwise).as_ref(), || format!("{name}: join"))?;
                // least nucleus above u ↦ j(u) ∨ (c ∧ k(u)), c ranging over all elements
                for c in f.elements() {
                    let map: Vec<usize> = f.elements().map(|u| f.join(j.apply(u), f.meet(c, k.apply(u)))).collect();
                    let got = smallest_nucleus_above(f, &map).map_err(|e| e.to_string())?;
                    ensure(Some(&got) == least_above(f, &all, &map).as_ref(), || {
                        format!("{name}: least above {map:?}")
                    })?;
                }
                // residuation: x ∧ j ≤ l ⟺ x ≤ (j ⇒ l), here with l = k
                let h = nucleus_ops(NucleusOp::Heyting, j, k, f).map_err(|e| e.to_string())?;
                for x in &all {
                    let m = nucleus_ops(NucleusOp::Meet, x, j, f).map_err(|e| e.to_string())?;
                    ensure(f.pointwise_le(&m, k) == f.pointwise_le(x, &h), || format!("{name}: residuation"))?;
                }
            }
        }
        let dense: Vec<&Nucleus> = all.iter().filter(|j| j.apply(f.bottom()) == f.bottom()).collect();
        let brute: Vec<Nucleus> =
            dense.iter().map(|j| cot(f, j, CotMethod::Brute)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for (a, j) in dense.iter().enumerate() {
            for (b, k) in dense.iter().enumerate() {
                if f.pointwise_le(k, j) {
                    ensure(f.pointwise_le(&brute[a], &brute[b]), || format!("{name}: cot not antitone"))?;
                }
            }
        }
        let basic = basic_nuclei(f);
        if satisfies_wlem(f) {
            for j in [&basic.identity, &basic.double_negation] {
                ensure(cot(f, j, CotMethod::Brute).map_err(|e| e.to_string())? == basic.identity, || {
                    format!("{name}: WLEM collapse")
                })?;
            }
        }
        let mut agree = 0;
        for (j, b) in dense.iter().zip(&brute) {
            if &cot(f, j, CotMethod::Formula).map_err(|e| e.to_string())? == b {
                agree += 1;
            }
        }
        agree_total += agree;
        cot_total += dense.len();
        report.push(format!(
            "{name}: {} elements, {} nuclei, cot formula = brute on {agree}/{}",
            f.len(),
            all.len(),
            dense.len()
        ));
    }
    let five = FiniteFrame::five_element();
    let b = basic_nuclei(&five);
    let pq = five.element("{p,q}").ok_or("no {p,q}")?;
    let cot_id = cot(&five, &b.identity, CotMethod::Brute).map_err(|e| e.to_string())?;
    ensure(cot_id == b.open[pq], || format!("cot(identity) on the five-element frame is {:?}", cot_id.map))?;
    for line in &report {
        println!("      {line}");
    }
    Ok(format!("{} frames; cot formula agrees with brute force on {agree_total}/{cot_total} nuclei", frames.len()))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Check, Option<Duration>);
    let criteria: [Criterion; 12] = [
        (1, "game-rule conformance", c1_game_rules, Some(Duration::from_secs(1))),
        (2, "bit and omega reductions", c2_bit_and_omega, None),
        (3, "join witnesses", c3_joins, None),
        (4, "T1 meet and X extraction", c4_t1_meet, None),
        (5, "T3 meet and distributivity", c5_t3_meet, None),
        (6, "coding and decoding give omniscience", c6_cd_to_omega, None),
        (7, "ask-twice and the checker chain", c7_ask_twice, None),
        (8, "checker decider", c8_decider, Some(Duration::from_secs(60))),
        (9, "riddle resolution", c9_riddle, None),
        (10, "co-Turing witnesses", c10_coturing, None),
        (11, "VM laws", c11_vm_laws, None),
        (12, "frames and nuclei", c12_frames, Some(Duration::from_secs(30))),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, check, limit) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS  criterion {n:>2}  {name} ({took:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {n:>2}  {name} ({took:.2?}): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
