//! Named built-in witnesses on fixed fixtures, as exposed by the CLI.

use std::collections::BTreeSet;

use super::programs::parity_program;
use super::{
    witness_basic, witness_coturing, witness_error_inf, witness_lattice, witness_promise, BasicWitness,
    CoturingWitness, LatticeWitness, PromiseWitness, StrategyPair, WitnessError,
};
use crate::oracles::halting::{coturing_pool, probe_for};
use crate::oracles::{checker_problem, named_basic, Family, FiniteOracle, NamedBasic, NatSet, PromiseProblem};
use crate::vm::builtin::{flip, halt_const, oracle_echo, oracle_negate, projection_fst};
use crate::vm::transform::post_reserved_from;
use crate::vm::{nat, Budget, Program};

type Builder = fn(u64) -> Result<StrategyPair, WitnessError>;

/// A named witness with its default fixture; `universe` sizes the
/// omniscient-style oracles where that applies.
pub struct RegistryEntry {
    pub name: &'static str,
    pub instance: &'static str,
    builder: Builder,
}

impl RegistryEntry {
    pub fn build(&self, universe: u64) -> Result<StrategyPair, WitnessError> {
        (self.builder)(universe)
    }
}

fn fam(sets: &[&[u64]]) -> Family {
    Family::of(sets)
}

fn evens_odds() -> PromiseProblem {
    PromiseProblem::from_u64(&[0, 2, 4, 6, 8], &[1, 3, 5, 7, 9]).expect("disjoint")
}

fn two_five() -> PromiseProblem {
    PromiseProblem::from_u64(&[2], &[5]).expect("disjoint")
}

fn a13() -> BTreeSet<u64> {
    BTreeSet::from([1, 3])
}

fn join_pair() -> (FiniteOracle, FiniteOracle) {
    (FiniteOracle::t0_u(&[1, 2]), FiniteOracle::t0_u(&[0, 4, 3]))
}

/// Programs whose code is canonical, by increasing code.
pub fn small_code_pool(count: usize) -> Vec<Program> {
    (0u64..)
        .map(|c| (c, Program::decode(&nat(c))))
        .filter(|(c, p)| p.code() == &nat(*c))
        .map(|(_, p)| p)
        .take(count)
        .collect()
}

fn echo_self(_: u64) -> Result<StrategyPair, WitnessError> {
    let f = FiniteOracle::t3([fam(&[&[0, 1], &[2]]), fam(&[&[1]])]);
    witness_basic(&BasicWitness::EchoSelf { f })
}

fn bit_to_omega(u: u64) -> Result<StrategyPair, WitnessError> {
    witness_basic(&BasicWitness::BitToOmega { universe: u })
}

fn omega_to_bit(u: u64) -> Result<StrategyPair, WitnessError> {
    witness_basic(&BasicWitness::OmegaToBit { n: u })
}

fn below_omega(u: u64) -> Result<StrategyPair, WitnessError> {
    let g = FiniteOracle::t3([fam(&[&[1, 3], &[0, 2]]), fam(&[&[1]])]);
    witness_basic(&BasicWitness::BelowOmega { g, universe: u })
}

fn to_top(u: u64) -> Result<StrategyPair, WitnessError> {
    let f = named_basic(&NamedBasic::Omega, u)?;
    let g = FiniteOracle::t3((0..6).map(|n| if n == 5 { Family::new([NatSet::new()]) } else { fam(&[&[0]]) }));
    witness_basic(&BasicWitness::ToTop { f, g, n0: nat(5) })
}

fn join_left(_: u64) -> Result<StrategyPair, WitnessError> {
    let (f, g) = join_pair();
    witness_lattice(&LatticeWitness::JoinLeft { f, g })
}

fn join_right(_: u64) -> Result<StrategyPair, WitnessError> {
    let (f, g) = join_pair();
    witness_lattice(&LatticeWitness::JoinRight { f, g })
}

fn join_univ(_: u64) -> Result<StrategyPair, WitnessError> {
    let (f, g) = join_pair();
    let wf = witness_lattice(&LatticeWitness::JoinLeft { f: f.clone(), g: g.clone() })?;
    let wg = witness_lattice(&LatticeWitness::JoinRight { f, g })?;
    witness_lattice(&LatticeWitness::JoinUniv { wf: Box::new(wf), wg: Box::new(wg) })
}

fn meet_t1_lb(_: u64) -> Result<StrategyPair, WitnessError> {
    let f = FiniteOracle::t1_u(&[Some(0), Some(1), None]);
    let g = FiniteOracle::t0_u(&[1, 0]);
    let programs = vec![oracle_echo(), oracle_negate()];
    witness_lattice(&LatticeWitness::MeetT1Lb { f, g, programs, budget: Budget::steps(1_000) })
}

fn meet_t1_univ(_: u64) -> Result<StrategyPair, WitnessError> {
    let h = FiniteOracle::t0_u(&[1, 0, 1]);
    let g = FiniteOracle::t0_u(&[0, 1, 0]);
    witness_lattice(&LatticeWitness::MeetT1Univ {
        h: h.clone(),
        f: h,
        g,
        a: oracle_echo(),
        b: oracle_negate(),
        budget: Budget::steps(1_000),
    })
}

fn meet_t3_univ(_: u64) -> Result<StrategyPair, WitnessError> {
    let h = FiniteOracle::t3([fam(&[&[0, 1], &[2]]), fam(&[&[1]])]);
    let k = FiniteOracle::t3([fam(&[&[5]])]);
    let wf = witness_lattice(&LatticeWitness::JoinLeft { f: h.clone(), g: k.clone() })?;
    let wg = witness_lattice(&LatticeWitness::JoinRight { f: k, g: h })?;
    witness_lattice(&LatticeWitness::MeetT3Univ { wf: Box::new(wf), wg: Box::new(wg) })
}

fn distributivity(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_lattice(&LatticeWitness::Distributivity {
        f: FiniteOracle::t0_u(&[0, 1]),
        g: FiniteOracle::t0_u(&[2, 3]),
        h: FiniteOracle::t0_u(&[1, 1]),
    })
}

fn cd_to_omega(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_promise(&PromiseWitness::CdToOmega { pp: two_five() })
}

fn ce_decoder(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_promise(&PromiseWitness::CeDecoder {
        pp: evens_odds(),
        p_enum: super::finite_enumerator(&[0, 2, 4, 6, 8]),
        q_enum: super::finite_enumerator(&[1, 3, 5, 7, 9]),
    })
}

fn mto_decoding(_: u64) -> Result<StrategyPair, WitnessError> {
    let pp = two_five();
    witness_promise(&PromiseWitness::MtoDecoding { from: checker_problem(&pp), to: pp, map: projection_fst() })
}

fn mto_coding(_: u64) -> Result<StrategyPair, WitnessError> {
    let pp = two_five();
    witness_promise(&PromiseWitness::MtoCoding { from: checker_problem(&pp), to: pp, map: projection_fst() })
}

fn ask_twice(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_promise(&PromiseWitness::AskTwice { pp: two_five() })
}

fn checker_chain(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_promise(&PromiseWitness::CheckerChain { pp: two_five() })
}

fn decided_coding(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_promise(&PromiseWitness::DecidedCoding { pp: evens_odds(), decoder: parity_program() })
}

fn decoder_from_turing(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_coturing(&CoturingWitness::DecoderFromTuring { a: a13(), pool: coturing_pool(30), domain: 16 })
}

fn turing_from_decoder(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_coturing(&CoturingWitness::TuringFromDecoder { a: a13(), domain: 4, filler: coturing_pool(30) })
}

/// Pool programs clear of the registers post-composition reserves, so their
/// flips can be computed at run time.
pub fn flippable_pool(size: usize) -> Vec<Program> {
    let reserved = post_reserved_from(&flip());
    coturing_pool(2 * size).into_iter().filter(|p| p.num_regs() <= reserved).take(size).collect()
}

fn flip_checker(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_coturing(&CoturingWitness::FlipChecker { a: a13(), pool: flippable_pool(20) })
}

fn meet_decoder(_: u64) -> Result<StrategyPair, WitnessError> {
    witness_coturing(&CoturingWitness::MeetDecoder {
        a: a13(),
        b: BTreeSet::from([0, 1]),
        domain: 4,
        filler: coturing_pool(14),
    })
}

fn error_inf(_: u64) -> Result<StrategyPair, WitnessError> {
    // the small canonical codes 0, 1, 4, … all halt with 0; two programs halting with 1 join them
    let mut pool = small_code_pool(6);
    pool.extend([halt_const(1), probe_for(1)]);
    let h = super::halting_sets(&a13(), &pool)?;
    witness_error_inf(&h, 4)
}

static REGISTRY: &[RegistryEntry] = &[
    RegistryEntry { name: "echo_self", instance: "a T3 oracle reduced to itself", builder: echo_self },
    RegistryEntry { name: "bit_to_omega", instance: "bit ⪯ omega(universe)", builder: bit_to_omega },
    RegistryEntry { name: "omega_to_bit", instance: "omega(universe) ⪯ bit", builder: omega_to_bit },
    RegistryEntry { name: "below_omega", instance: "an inhabited T3 oracle ⪯ omega(universe)", builder: below_omega },
    RegistryEntry { name: "to_top", instance: "omega ⪯ an oracle offering ∅ at 5", builder: to_top },
    RegistryEntry { name: "join_left", instance: "f ⪯ f ⊕ g for small T0 f, g", builder: join_left },
    RegistryEntry { name: "join_right", instance: "g ⪯ f ⊕ g for small T0 f, g", builder: join_right },
    RegistryEntry { name: "join_univ", instance: "f ⊕ g ⪯ f ⊕ g from the two upper bounds", builder: join_univ },
    RegistryEntry { name: "meet_t1_lb", instance: "f ⋏ g ⪯ f for the T1 meet", builder: meet_t1_lb },
    RegistryEntry { name: "meet_t1_univ", instance: "h ⪯ h ⋏ ¬h for the T1 meet", builder: meet_t1_univ },
    RegistryEntry { name: "meet_t3_univ", instance: "h ⪯ (h ⊕ k) ⋏ (k ⊕ h)", builder: meet_t3_univ },
    RegistryEntry {
        name: "distributivity", instance: "(f⊕g)⋏(f⊕h) ⪯ f⊕(g⋏h) on T0 oracles", builder: distributivity
    },
    RegistryEntry { name: "cd_to_omega", instance: "bit ⪯ d ⊕ c for P={2}, Q={5}", builder: cd_to_omega },
    RegistryEntry { name: "ce_decoder", instance: "d ⪯ bottom for evens/odds below 10", builder: ce_decoder },
    RegistryEntry {
        name: "mto_decoding",
        instance: "checker decoding ⪯ decoding by projection",
        builder: mto_decoding,
    },
    RegistryEntry { name: "mto_coding", instance: "coding ⪯ checker coding by projection", builder: mto_coding },
    RegistryEntry { name: "ask_twice", instance: "checker coding ⪯ coding for P={2}, Q={5}", builder: ask_twice },
    RegistryEntry { name: "checker_chain", instance: "bit ⪯ checker decoding ⊕ coding", builder: checker_chain },
    RegistryEntry {
        name: "decided_coding", instance: "bit ⪯ coding for evens/odds below 10", builder: decided_coding
    },
    RegistryEntry {
        name: "decoder_from_turing",
        instance: "relative-halting decoding ⪯ 1_{1,3}",
        builder: decoder_from_turing,
    },
    RegistryEntry {
        name: "turing_from_decoder",
        instance: "1_{1,3} ⪯ relative-halting decoding",
        builder: turing_from_decoder,
    },
    RegistryEntry { name: "flip_checker", instance: "decoding ⪯ checker decoding of H^{1,3}", builder: flip_checker },
    RegistryEntry { name: "meet_decoder", instance: "1_{1,3} ⋏ 1_{0,1} ⪯ product decoding", builder: meet_decoder },
    RegistryEntry {
        name: "error_inf",
        instance: "error_omega(4) ⪯ c_{H0,H1} over small codes and two 1-halting programs",
        builder: error_inf,
    },
];

/// All built-in witnesses.
pub fn registry() -> &'static [RegistryEntry] {
    REGISTRY
}

/// Look up a witness by name.
pub fn registry_entry(name: &str) -> Result<&'static RegistryEntry, WitnessError> {
    REGISTRY.iter().find(|e| e.name == name).ok_or_else(|| WitnessError::UnknownName(name.to_string()))
}
