//! Constructors for the explicit Arthur+Nimue strategies of the reduction
//! proofs. Each returns a [`StrategyPair`] bundling the strategy with the
//! reduction instance it targets, so that [`StrategyPair::verify`] is the
//! constructor's correctness check.

use thiserror::Error;

use crate::game::{tabulate_nimue, verify_winning, ArthurStrategy, GameBounds, GameVerdict, NimueStrategy, NimueView};
use crate::oracles::{Family, FiniteOracle, NatSet, OracleError};
use crate::vm::{Budget, Program, VmError};

mod basic;
mod coturing;
mod lattice;
pub mod programs;
mod promise;
mod registry;
mod t1meet;

pub use basic::{witness_basic, BasicWitness};
pub use coturing::{
    characteristic, halting_decoder, halting_sets, riddle_halting, witness_coturing, witness_error_inf,
    CoturingWitness, HALTING_BUDGET,
};
pub use lattice::{witness_lattice, LatticeWitness};
pub use promise::{finite_enumerator, witness_promise, PromiseWitness};
pub use registry::{flippable_pool, registry, registry_entry, small_code_pool, RegistryEntry};
pub use t1meet::{extract_t1meet_xy, t1_meet_extender, T1MeetExtraction};

/// Failures of the witness constructors.
#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("incompatible sub-witnesses: {0}")]
    Incompatible(String),
    #[error("{0} halting-set entries are undetermined at the budget")]
    UnknownHalting(usize),
    #[error("unknown witness `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Vm(#[from] VmError),
}

/// Recommended verification limits of a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessBounds {
    pub depth: usize,
    pub budget: Budget,
    /// Size of the truncated universe, for witnesses over omniscient-style oracles.
    pub universe: Option<u64>,
}

impl WitnessBounds {
    pub fn new(depth: usize, budget: Budget) -> WitnessBounds {
        WitnessBounds { depth, budget, universe: None }
    }

    pub fn game(&self) -> GameBounds {
        GameBounds::new(self.depth, self.budget)
    }
}

/// An Arthur+Nimue strategy together with the reduction `source ⪯ target` it wins.
#[derive(Clone, Debug)]
pub struct StrategyPair {
    pub arthur: ArthurStrategy,
    pub nimue: NimueStrategy,
    /// The construction this strategy implements.
    pub provenance: &'static str,
    pub bounds: WitnessBounds,
    /// The reduced oracle `f`.
    pub source: FiniteOracle,
    /// The oracle `g` Arthur queries.
    pub target: FiniteOracle,
}

impl StrategyPair {
    /// Exhaustive verification under the recommended bounds.
    pub fn verify(&self) -> GameVerdict {
        self.verify_within(self.bounds.game())
    }

    pub fn verify_within(&self, bounds: GameBounds) -> GameVerdict {
        verify_winning(&self.source, &self.target, &self.arthur, &self.nimue, bounds)
    }
}

/// Default steps per Arthur turn.
pub const DEFAULT_BUDGET: Budget = Budget::steps(200_000);

/// Tabulate a Nimue rule and bundle everything.
fn assemble(
    source: FiniteOracle,
    target: FiniteOracle,
    arthur: Program,
    rule: &dyn Fn(&NimueView<'_>) -> Option<usize>,
    bounds: WitnessBounds,
    provenance: &'static str,
) -> StrategyPair {
    let arthur = ArthurStrategy::new(arthur);
    let nimue = tabulate_nimue(&source, &target, &arthur, rule, bounds.game());
    StrategyPair { arthur, nimue, provenance, bounds, source, target }
}

/// Position of `s` in a family.
fn position(fam: &Family, s: &NatSet) -> Option<usize> {
    fam.sets().iter().position(|x| x == s)
}

/// Nimue offers the first set (for single-valued targets).
fn first_option(v: &NimueView<'_>) -> Option<usize> {
    (!v.options.is_empty()).then_some(0)
}

/// Nimue's turn number: the history holds three entries per past round.
fn turn(v: &NimueView<'_>) -> usize {
    v.key.history.len() / 3
}
