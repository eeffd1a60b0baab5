//! Reductions among the basic oracles: identity, bit/omega, anything
//! inhabited below omega, anything above an oracle offering `∅`.

use super::{assemble, position, turn, StrategyPair, WitnessBounds, WitnessError, DEFAULT_BUDGET};
use crate::oracles::{named_basic, set, FiniteOracle, NamedBasic, NatSet};
use crate::vm::asm::build;
use crate::vm::builtin::{oracle_echo, query_const};
use crate::vm::transform::as_arthur;
use crate::vm::{nat, Budget, Nat};

/// The basic witnesses and their parameters.
#[derive(Clone, Debug)]
pub enum BasicWitness {
    /// `f ⪯ f`: ask Merlin's own question.
    EchoSelf { f: FiniteOracle },
    /// `bit ⪯ omega`, omega truncated to `universe` values.
    BitToOmega { universe: u64 },
    /// `omega ⪯ bit` over the universe `0..n`: query until Merlin says 1.
    OmegaToBit { n: u64 },
    /// `g ⪯ omega` for `g` with only inhabited sets, each containing a value below `universe`.
    BelowOmega { g: FiniteOracle, universe: u64 },
    /// `f ⪯ g` whenever `∅ ∈ g(n0)`.
    ToTop { f: FiniteOracle, g: FiniteOracle, n0: Nat },
}

fn secret_bit(secret: &NatSet) -> Option<u64> {
    secret.iter().next().and_then(num_traits::ToPrimitive::to_u64)
}

/// Build a basic witness.
pub fn witness_basic(w: &BasicWitness) -> Result<StrategyPair, WitnessError> {
    match w {
        BasicWitness::EchoSelf { f } => {
            let rule = |v: &crate::game::NimueView<'_>| position(v.options, v.secret);
            let depth = 2;
            Ok(assemble(
                f.clone(),
                f.clone(),
                as_arthur(&oracle_echo())?,
                &rule,
                WitnessBounds::new(depth, Budget::steps(10_000)),
                "identity reduction: Arthur asks Merlin's question, Nimue offers the secret",
            ))
        }
        BasicWitness::BitToOmega { universe } => {
            let bit = named_basic(&NamedBasic::Bit, 2)?;
            let omega = named_basic(&NamedBasic::Omega, *universe)?;
            let rule = |v: &crate::game::NimueView<'_>| position(v.options, v.secret);
            let mut bounds = WitnessBounds::new(2, Budget::steps(10_000));
            bounds.universe = Some(*universe);
            Ok(assemble(
                bit,
                omega,
                as_arthur(&oracle_echo())?,
                &rule,
                bounds,
                "bit below omega: Nimue offers {b} and Arthur repeats Merlin's reply",
            ))
        }
        BasicWitness::OmegaToBit { n } => {
            let omega = named_basic(&NamedBasic::Omega, *n)?;
            let bit = named_basic(&NamedBasic::Bit, 2)?;
            // k := 0; while query(0) = 0 { k += 1 }; return k
            let counter = build(|a| {
                let (k, r, z) = (a.reg(), a.reg(), a.zero());
                let (top, done) = (a.label(), a.label());
                a.bind(top);
                a.query(r, z);
                a.jnz(r, done);
                a.inc(k);
                a.jmp(top);
                a.bind(done);
                a.halt(k);
            });
            let rule = |v: &crate::game::NimueView<'_>| {
                let target = secret_bit(v.secret)?;
                let want = if turn(v) as u64 == target { set([1]) } else { set([0]) };
                position(v.options, &want)
            };
            let mut bounds = WitnessBounds::new(*n as usize + 1, Budget::steps(20_000));
            bounds.universe = Some(*n);
            Ok(assemble(
                omega,
                bit,
                as_arthur(&counter)?,
                &rule,
                bounds,
                "omega below a bit: Arthur counts queries until Merlin returns the bit 1",
            ))
        }
        BasicWitness::BelowOmega { g, universe } => {
            for m in g.points() {
                for s in g.entry(m).sets() {
                    match s.iter().next() {
                        None => return Err(WitnessError::Hypothesis(format!("g({m}) contains the empty set"))),
                        Some(x) if x >= &nat(*universe) => {
                            return Err(WitnessError::Hypothesis(format!(
                                "g({m}) has a set whose least element {x} lies outside the universe {universe}"
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
            let omega = named_basic(&NamedBasic::Omega, *universe)?;
            let rule = |v: &crate::game::NimueView<'_>| {
                let least = v.secret.iter().next()?;
                position(v.options, &NatSet::from([least.clone()]))
            };
            let mut bounds = WitnessBounds::new(2, Budget::steps(10_000));
            bounds.universe = Some(*universe);
            Ok(assemble(
                g.clone(),
                omega,
                as_arthur(&query_const(0))?,
                &rule,
                bounds,
                "inhabited oracles below omega: Nimue forces Merlin to play the least element of the secret",
            ))
        }
        BasicWitness::ToTop { f, g, n0 } => {
            if !g.entry(n0).contains(&NatSet::new()) {
                return Err(WitnessError::Hypothesis(format!("the empty set is not offered at g({n0})")));
            }
            let asker = build(|a| {
                let (q, r) = (a.reg(), a.reg());
                a.li(q, n0.clone());
                a.query(r, q);
                a.halt(r);
            });
            let rule = |v: &crate::game::NimueView<'_>| position(v.options, &NatSet::new());
            Ok(assemble(
                f.clone(),
                g.clone(),
                as_arthur(&asker)?,
                &rule,
                WitnessBounds::new(2, DEFAULT_BUDGET),
                "reduction to an oracle offering the empty set: Merlin has no legal moves",
            ))
        }
    }
}
