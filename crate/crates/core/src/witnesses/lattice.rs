//! Lattice witnesses: the join `⊕` as least upper bound, the T1 meet as
//! greatest lower bound, the T3 meet by parallel simulation of two games,
//! and the distributivity strategy.

use super::programs::{emit_halve, emit_seq_component, emit_seq_filter};
use super::{assemble, position, StrategyPair, WitnessBounds, WitnessError};
use crate::game::{NimueKey, NimueView};
use crate::oracles::meet::{meet_query, meet_t1};
use crate::oracles::{embed, join_oplus, meet_t3, FiniteOracle, Level, NatSet};
use crate::vm::asm::build;
use crate::vm::transform::{as_arthur, dispatch};
use crate::vm::{nat, sum_untag, unpair, Budget, Nat, Program, Side};

/// The lattice witnesses and their parameters.
#[derive(Clone, Debug)]
pub enum LatticeWitness {
    /// `f ⪯ f ⊕ g`.
    JoinLeft { f: FiniteOracle, g: FiniteOracle },
    /// `g ⪯ f ⊕ g`.
    JoinRight { f: FiniteOracle, g: FiniteOracle },
    /// From `f ⪯ h` and `g ⪯ h`, `f ⊕ g ⪯ h`.
    JoinUniv { wf: Box<StrategyPair>, wg: Box<StrategyPair> },
    /// `f ⋏ g ⪯ f` for the T1 meet, materialised on the tuples `⟨p, q, m, n⟩`
    /// with `p, q` from `programs`, `m` a point of `f` and `n` a point of `g`.
    MeetT1Lb { f: FiniteOracle, g: FiniteOracle, programs: Vec<Program>, budget: Budget },
    /// From T1 reductions `φ_a^f = h` and `φ_b^g = h`, `h ⪯ f ⋏ g`.
    MeetT1Univ { h: FiniteOracle, f: FiniteOracle, g: FiniteOracle, a: Program, b: Program, budget: Budget },
    /// From `h ⪯ f` and `h ⪯ g`, `h ⪯ f ⋏ g` for the T3 meet.
    MeetT3Univ { wf: Box<StrategyPair>, wg: Box<StrategyPair> },
    /// `(f ⊕ g) ⋏ (f ⊕ h) ⪯ f ⊕ (g ⋏ h)`.
    Distributivity { f: FiniteOracle, g: FiniteOracle, h: FiniteOracle },
}

/// `f ⊕ g`, embedding both into T3 when their levels differ.
pub(crate) fn join_any(f: &FiniteOracle, g: &FiniteOracle) -> Result<FiniteOracle, WitnessError> {
    if f.level() == g.level() {
        return Ok(join_oplus(f, g)?);
    }
    Ok(join_oplus(&embed(f, Level::T3)?, &embed(g, Level::T3)?)?)
}

fn t3(f: &FiniteOracle) -> Result<FiniteOracle, WitnessError> {
    Ok(embed(f, Level::T3)?)
}

/// Arthur asks `2m + side` and repeats the reply.
fn doubled_echo(side: bool) -> Result<Program, WitnessError> {
    let p = build(|a| {
        let (q, r) = (a.reg(), a.reg());
        a.add(q, 0, 0);
        if side {
            a.inc(q);
        }
        a.query(r, q);
        a.halt(r);
    });
    Ok(as_arthur(&p)?)
}

fn secret_rule(v: &NimueView<'_>) -> Option<usize> {
    position(v.options, v.secret)
}

fn first_rule(v: &NimueView<'_>) -> Option<usize> {
    (!v.options.is_empty()).then_some(0)
}

fn untag(s: &NatSet, side: Side) -> NatSet {
    s.iter().filter_map(sum_untag).filter(|(t, _)| *t == side).map(|(_, v)| v).collect()
}

fn tag_union(u: &NatSet, v: &NatSet) -> NatSet {
    let mut s: NatSet = u.iter().map(|x| crate::vm::sum_tag(Side::Left, x)).collect();
    s.extend(v.iter().map(|x| crate::vm::sum_tag(Side::Right, x)));
    s
}

fn combined_budget(a: Budget, b: Budget) -> Budget {
    Budget::steps(a.max_steps().saturating_add(b.max_steps()).saturating_add(100_000))
}

/// Build a lattice witness.
pub fn witness_lattice(w: &LatticeWitness) -> Result<StrategyPair, WitnessError> {
    match w {
        LatticeWitness::JoinLeft { f, g } => Ok(assemble(
            f.clone(),
            join_any(f, g)?,
            doubled_echo(false)?,
            &secret_rule,
            WitnessBounds::new(2, Budget::steps(10_000)),
            "join upper bound (left): Arthur asks 2m",
        )),
        LatticeWitness::JoinRight { f, g } => Ok(assemble(
            g.clone(),
            join_any(f, g)?,
            doubled_echo(true)?,
            &secret_rule,
            WitnessBounds::new(2, Budget::steps(10_000)),
            "join upper bound (right): Arthur asks 2m+1",
        )),
        LatticeWitness::JoinUniv { wf, wg } => join_univ(wf, wg),
        LatticeWitness::MeetT1Lb { f, g, programs, budget } => {
            let mut queries = Vec::new();
            for p in programs {
                for q in programs {
                    for m in f.points() {
                        for n in g.points() {
                            queries.push(meet_query(p.code(), q.code(), m, n));
                        }
                    }
                }
            }
            let (source, _unknown) = meet_t1(f, g, *budget).materialize(&queries)?;
            let pool = dispatch(programs)?;
            // ⟨p, q, m, n⟩ ↦ φ_p(m), the queries of φ_p going to f
            let sim = build(|a| {
                let (p, m, x, out) = (a.reg(), a.reg(), a.reg(), a.reg());
                emit_seq_component(a, 0, 4, 0, p);
                emit_seq_component(a, 0, 4, 2, m);
                a.pair(x, p, m);
                a.call(&pool, x, out);
                a.halt(out);
            });
            let turn_budget = Budget::steps(budget.max_steps().saturating_mul(4).saturating_add(50_000));
            let depth = 8;
            Ok(assemble(
                source,
                f.clone(),
                as_arthur(&sim)?,
                &first_rule,
                WitnessBounds::new(depth, turn_budget),
                "T1 meet lower bound: Arthur uses f to compute the left program on its argument",
            ))
        }
        LatticeWitness::MeetT1Univ { h, f, g, a: pa, b: pb, budget } => {
            let queries: Vec<Nat> = h.points().iter().map(|m| meet_query(pa.code(), pb.code(), m, m)).collect();
            let (target, _unknown) = meet_t1(f, g, *budget).materialize(&queries)?;
            let asker = build(|a| {
                let (ca, cb, t, r) = (a.reg(), a.reg(), a.reg(), a.reg());
                a.li(ca, pa.code().clone());
                a.li(cb, pb.code().clone());
                a.pair(t, 0, 0);
                a.pair(t, cb, t);
                a.pair(t, ca, t);
                a.pair_const_left(t, 4u32, t);
                a.query(r, t);
                a.halt(r);
            });
            Ok(assemble(
                h.clone(),
                target,
                as_arthur(&asker)?,
                &first_rule,
                WitnessBounds::new(2, Budget::steps(10_000)),
                "T1 meet greatest lower bound: Arthur asks the tuple of both reductions",
            ))
        }
        LatticeWitness::MeetT3Univ { wf, wg } => meet_t3_univ(wf, wg),
        LatticeWitness::Distributivity { f, g, h } => distributivity(f, g, h),
    }
}

fn join_univ(wf: &StrategyPair, wg: &StrategyPair) -> Result<StrategyPair, WitnessError> {
    if wf.target != wg.target {
        return Err(WitnessError::Incompatible("the two reductions target different oracles".into()));
    }
    if wf.arthur.ambient.is_some() || wg.arthur.ambient.is_some() {
        return Err(WitnessError::Incompatible("sub-strategies must not use an ambient oracle".into()));
    }
    let (af, ag) = (wf.arthur.program.clone(), wg.arthur.program.clone());
    let arthur = build(|a| {
        let (m, rs, half, parity, x, out) = (a.reg(), a.reg(), a.reg(), a.reg(), a.reg(), a.reg());
        let left = a.label();
        a.fst(m, 0);
        a.snd(rs, 0);
        emit_halve(a, m, half, parity);
        a.pair(x, half, rs);
        a.jz(parity, left);
        a.call(&ag, x, out);
        a.halt(out);
        a.bind(left);
        a.call(&af, x, out);
        a.halt(out);
    });
    let (nf, ng) = (wf.nimue.clone(), wg.nimue.clone());
    let rule = move |v: &NimueView<'_>| {
        let two = nat(2);
        let (half, odd) = (&v.key.m / &two, &v.key.m % &two == nat(1));
        let sub = NimueKey { m: half, ..v.key.clone() };
        if odd {
            ng.choice(&sub)
        } else {
            nf.choice(&sub)
        }
    };
    let bounds =
        WitnessBounds::new(wf.bounds.depth.max(wg.bounds.depth), combined_budget(wf.bounds.budget, wg.bounds.budget));
    Ok(assemble(
        join_any(&wf.source, &wg.source)?,
        wf.target.clone(),
        arthur,
        &rule,
        bounds,
        "join least upper bound: the parity of Merlin's argument selects the sub-strategy",
    ))
}

fn meet_t3_univ(wf: &StrategyPair, wg: &StrategyPair) -> Result<StrategyPair, WitnessError> {
    if wf.source != wg.source {
        return Err(WitnessError::Incompatible("the two reductions start from different oracles".into()));
    }
    if wf.arthur.ambient.is_some() || wg.arthur.ambient.is_some() {
        return Err(WitnessError::Incompatible("sub-strategies must not use an ambient oracle".into()));
    }
    let (af, ag) = (wf.arthur.program.clone(), wg.arthur.program.clone());
    let arthur = build(|a| {
        let [m, rs, rf, rg, x, of, og, t, q] = [(); 9].map(|_| a.reg());
        let (f_asks, both_ask) = (a.label(), a.label());
        a.fst(m, 0);
        a.snd(rs, 0);
        emit_seq_filter(a, rs, 0, rf);
        emit_seq_filter(a, rs, 1, rg);
        a.pair(x, m, rf);
        a.call(&af, x, of);
        a.fst(t, of);
        a.jz(t, f_asks);
        a.halt(of);
        a.bind(f_asks);
        a.pair(x, m, rg);
        a.call(&ag, x, og);
        a.fst(t, og);
        a.jz(t, both_ask);
        a.halt(og);
        a.bind(both_ask);
        a.snd(q, of);
        a.snd(t, og);
        a.pair(q, q, t);
        a.pair_const_left(q, 0u32, q);
        a.halt(q);
    });
    let (nf, ng) = (wf.nimue.clone(), wg.nimue.clone());
    let (f, g) = (wf.target.clone(), wg.target.clone());
    let rule = move |v: &NimueView<'_>| {
        let key = |history: &Vec<Nat>, n: &Nat| NimueKey {
            m: v.key.m.clone(),
            secret: v.key.secret,
            history: history.clone(),
            n: n.clone(),
        };
        let (mut hf, mut hg) = (Vec::new(), Vec::new());
        for round in v.key.history.chunks(3) {
            let (nfi, ngi) = unpair(&round[0]);
            let (side, value) = sum_untag(&round[2])?;
            match side {
                Side::Left => {
                    let c = nf.choice(&key(&hf, &nfi))?;
                    hf.extend([nfi, nat(c as u64), value]);
                }
                Side::Right => {
                    let c = ng.choice(&key(&hg, &ngi))?;
                    hg.extend([ngi, nat(c as u64), value]);
                }
            }
        }
        let (n_f, n_g) = unpair(&v.key.n);
        let u = f.entry(&n_f).get(nf.choice(&key(&hf, &n_f))?)?;
        let w = g.entry(&n_g).get(ng.choice(&key(&hg, &n_g))?)?;
        position(v.options, &tag_union(u, w))
    };
    let bounds =
        WitnessBounds::new(wf.bounds.depth + wg.bounds.depth - 1, combined_budget(wf.bounds.budget, wg.bounds.budget));
    Ok(assemble(
        wf.source.clone(),
        meet_t3(&wf.target, &wg.target),
        arthur,
        &rule,
        bounds,
        "T3 meet greatest lower bound: Arthur simulates both games, routing replies by their sum tag",
    ))
}

fn distributivity(f: &FiniteOracle, g: &FiniteOracle, h: &FiniteOracle) -> Result<StrategyPair, WitnessError> {
    let (f, g, h) = (t3(f)?, t3(g)?, t3(h)?);
    let source = meet_t3(&join_oplus(&f, &g)?, &join_oplus(&f, &h)?);
    let target = join_oplus(&f, &meet_t3(&g, &h))?;
    // pair(a, b): a even → ask a, declare pair(0, ·); b even → ask b,
    // declare pair(1, ·); both odd → ask 2·pair((a−1)/2, (b−1)/2) + 1.
    let plain = build(|a| {
        let [x, y, hx, px, hy, py, q, r] = [(); 8].map(|_| a.reg());
        let (x_even, y_even) = (a.label(), a.label());
        a.fst(x, 0);
        a.snd(y, 0);
        emit_halve(a, x, hx, px);
        emit_halve(a, y, hy, py);
        a.jz(px, x_even);
        a.jz(py, y_even);
        a.pair(q, hx, hy);
        a.add(q, q, q);
        a.inc(q);
        a.query(r, q);
        a.halt(r);
        a.bind(x_even);
        a.query(r, x);
        a.pair_const_left(r, 0u32, r);
        a.halt(r);
        a.bind(y_even);
        a.query(r, y);
        a.pair_const_left(r, 1u32, r);
        a.halt(r);
    });
    let rule = |v: &NimueView<'_>| {
        let (x, y) = unpair(&v.key.m);
        let want = if &x % 2u32 == nat(0) {
            untag(v.secret, Side::Left)
        } else if &y % 2u32 == nat(0) {
            untag(v.secret, Side::Right)
        } else {
            v.secret.clone()
        };
        position(v.options, &want)
    };
    Ok(assemble(
        source,
        target,
        as_arthur(&plain)?,
        &rule,
        WitnessBounds::new(2, Budget::steps(20_000)),
        "distributivity: each component of the pair is answered by f or by the meet of g and h",
    ))
}
