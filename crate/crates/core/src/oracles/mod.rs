//! Finite T0–T3 and basic oracles and the oracle constructions.
//!
//! Every oracle is stored in its T3 form: an entry is a family of finite sets
//! of naturals. A T0/T1 value `v` is the family `{{v}}`, an undefined T1/T2
//! point is the empty family, a T2 value set `S` is `{S}`. Basic oracles carry
//! one family used at every argument.

pub mod halting;
pub mod heyting;
pub mod json;
pub mod meet;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::vm::{nat, pair, sum_tag, Answer, Nat, QueryOracle, Side};

pub use halting::{relative_halting_sets, HaltingSets};
pub use heyting::{heyting_surrender_oracle, SearchBounds};
pub use meet::{meet_t1, MeetT1};

/// A finite set of naturals.
pub type NatSet = BTreeSet<Nat>;

/// Build a [`NatSet`] from machine integers.
pub fn set(items: impl IntoIterator<Item = u64>) -> NatSet {
    items.into_iter().map(nat).collect()
}

/// A finite family of finite sets, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family(Vec<NatSet>);

impl Family {
    pub fn new(sets: impl IntoIterator<Item = NatSet>) -> Family {
        let mut v: Vec<NatSet> = sets.into_iter().collect();
        v.sort();
        v.dedup();
        Family(v)
    }

    /// The empty family (an undefined point).
    pub fn empty() -> Family {
        Family(Vec::new())
    }

    /// `{{v}}`.
    pub fn value(v: Nat) -> Family {
        Family(vec![BTreeSet::from([v])])
    }

    /// Family from machine-integer sets.
    pub fn of(sets: &[&[u64]]) -> Family {
        Family::new(sets.iter().map(|s| set(s.iter().copied())))
    }

    pub fn sets(&self) -> &[NatSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&NatSet> {
        self.0.get(i)
    }

    pub fn contains(&self, s: &NatSet) -> bool {
        self.0.binary_search(s).is_ok()
    }

    /// The value `v` when the family is `{{v}}`.
    pub fn single_value(&self) -> Option<&Nat> {
        match self.0.as_slice() {
            [s] if s.len() == 1 => s.iter().next(),
            _ => None,
        }
    }

    /// `⋂ F` over the family (`None` for the empty family, whose meet is everything).
    pub fn intersection(&self) -> Option<NatSet> {
        let mut it = self.0.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, s| acc.intersection(s).cloned().collect()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in s.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Oracle level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    T0,
    T1,
    T2,
    T3,
    Basic,
}

impl Level {
    fn rank(self) -> u8 {
        match self {
            Level::T0 => 0,
            Level::T1 => 1,
            Level::T2 => 2,
            Level::T3 => 3,
            Level::Basic => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::T0 => "T0",
            Level::T1 => "T1",
            Level::T2 => "T2",
            Level::T3 => "T3",
            Level::Basic => "basic",
        }
    }
}

impl std::str::FromStr for Level {
    type Err = OracleError;
    fn from_str(s: &str) -> Result<Level, OracleError> {
        match s {
            "T0" | "t0" => Ok(Level::T0),
            "T1" | "t1" => Ok(Level::T1),
            "T2" | "t2" => Ok(Level::T2),
            "T3" | "t3" => Ok(Level::T3),
            "basic" => Ok(Level::Basic),
            other => Err(OracleError::Format(format!("unknown level `{other}`"))),
        }
    }
}

/// Errors of oracle construction and parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("entry at {at} violates the {level} shape: {why}")]
    LevelViolation { level: &'static str, at: Nat, why: &'static str },
    #[error("cannot embed a {from} oracle into {to}")]
    DownwardEmbedding { from: &'static str, to: &'static str },
    #[error("operands have different levels ({0} and {1}); embed first")]
    LevelMismatch(&'static str, &'static str),
    #[error("promise problem invalid: {0}")]
    BadPromise(&'static str),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("malformed oracle document: {0}")]
    Format(String),
    #[error("search bounds exceeded: {dimension} = {value} (limit {limit})")]
    BoundsExceeded { dimension: &'static str, value: u64, limit: u64 },
}

/// A finitely represented oracle.
///
/// `points` is the declared finite domain (the arguments at which initial
/// configurations are enumerated); `table` holds non-default entries and
/// `default` (basic oracles only) answers every other argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOracle {
    level: Level,
    points: Vec<Nat>,
    table: BTreeMap<Nat, Family>,
    default: Option<Family>,
}

static EMPTY: Family = Family(Vec::new());

impl FiniteOracle {
    /// Assemble and validate an oracle.
    pub fn from_parts(
        level: Level,
        points: impl IntoIterator<Item = Nat>,
        table: BTreeMap<Nat, Family>,
        default: Option<Family>,
    ) -> Result<FiniteOracle, OracleError> {
        let mut points: Vec<Nat> = points.into_iter().collect();
        points.sort();
        points.dedup();
        let table: BTreeMap<Nat, Family> = table.into_iter().filter(|(_, f)| !f.is_empty()).collect();
        let o = FiniteOracle { level, points, table, default };
        o.validate()?;
        Ok(o)
    }

    fn validate(&self) -> Result<(), OracleError> {
        let viol = |at: &Nat, why| OracleError::LevelViolation { level: self.level.name(), at: at.clone(), why };
        for (n, fam) in &self.table {
            match self.level {
                Level::T0 | Level::T1 => {
                    if fam.single_value().is_none() {
                        return Err(viol(n, "expected a single value"));
                    }
                }
                Level::T2 => {
                    if fam.len() != 1 || fam.sets()[0].is_empty() {
                        return Err(viol(n, "expected one inhabited value set"));
                    }
                }
                Level::T3 => {}
                Level::Basic => return Err(viol(n, "basic oracles have no per-argument entries")),
            }
            if !self.points.contains(n) {
                return Err(viol(n, "entry outside the declared domain"));
            }
        }
        match (self.level, &self.default) {
            (Level::Basic, None) => Err(viol(&nat(0), "basic oracle without a family")),
            (Level::T0 | Level::T1 | Level::T2, Some(_)) => {
                Err(viol(&nat(0), "only basic and T3 oracles may be constant"))
            }
            (Level::T0, None) => match self.points.iter().find(|p| !self.table.contains_key(*p)) {
                Some(p) => Err(viol(p, "T0 oracles are total on their domain")),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Total function on `0..values.len()`.
    pub fn t0(values: impl IntoIterator<Item = Nat>) -> FiniteOracle {
        let table: BTreeMap<Nat, Family> =
            values.into_iter().enumerate().map(|(i, v)| (nat(i as u64), Family::value(v))).collect();
        let points: Vec<Nat> = table.keys().cloned().collect();
        Self::from_parts(Level::T0, points, table, None).expect("T0 shape")
    }

    pub fn t0_u(values: &[u64]) -> FiniteOracle {
        Self::t0(values.iter().map(|&v| nat(v)))
    }

    /// Partial function on `0..values.len()`.
    pub fn t1(values: impl IntoIterator<Item = Option<Nat>>) -> FiniteOracle {
        let mut points = Vec::new();
        let mut table = BTreeMap::new();
        for (i, v) in values.into_iter().enumerate() {
            points.push(nat(i as u64));
            if let Some(v) = v {
                table.insert(nat(i as u64), Family::value(v));
            }
        }
        Self::from_parts(Level::T1, points, table, None).expect("T1 shape")
    }

    pub fn t1_u(values: &[Option<u64>]) -> FiniteOracle {
        Self::t1(values.iter().map(|v| v.map(nat)))
    }

    /// Partial function on an explicit domain.
    pub fn t1_sparse(
        points: impl IntoIterator<Item = Nat>,
        values: BTreeMap<Nat, Nat>,
    ) -> Result<FiniteOracle, OracleError> {
        let mut pts: Vec<Nat> = points.into_iter().collect();
        pts.extend(values.keys().cloned());
        let table = values.into_iter().map(|(k, v)| (k, Family::value(v))).collect();
        Self::from_parts(Level::T1, pts, table, None)
    }

    /// Partial multi-valued function on `0..entries.len()`.
    pub fn t2(entries: impl IntoIterator<Item = Option<NatSet>>) -> Result<FiniteOracle, OracleError> {
        let mut points = Vec::new();
        let mut table = BTreeMap::new();
        for (i, e) in entries.into_iter().enumerate() {
            points.push(nat(i as u64));
            if let Some(s) = e {
                table.insert(nat(i as u64), Family::new([s]));
            }
        }
        Self::from_parts(Level::T2, points, table, None)
    }

    /// Family-valued function on `0..entries.len()`.
    pub fn t3(entries: impl IntoIterator<Item = Family>) -> FiniteOracle {
        let mut points = Vec::new();
        let mut table = BTreeMap::new();
        for (i, f) in entries.into_iter().enumerate() {
            points.push(nat(i as u64));
            table.insert(nat(i as u64), f);
        }
        Self::from_parts(Level::T3, points, table, None).expect("T3 shape")
    }

    /// Family-valued function on an explicit domain.
    pub fn t3_sparse(
        points: impl IntoIterator<Item = Nat>,
        table: BTreeMap<Nat, Family>,
    ) -> Result<FiniteOracle, OracleError> {
        let mut pts: Vec<Nat> = points.into_iter().collect();
        pts.extend(table.keys().cloned());
        Self::from_parts(Level::T3, pts, table, None)
    }

    /// Basic oracle with the given family; its declared domain is `{0}`.
    pub fn basic(family: Family) -> FiniteOracle {
        Self::from_parts(Level::Basic, [nat(0)], BTreeMap::new(), Some(family)).expect("basic shape")
    }

    /// Replace the declared domain (e.g. to enumerate more arguments of a basic oracle).
    pub fn with_points(mut self, points: impl IntoIterator<Item = Nat>) -> Result<FiniteOracle, OracleError> {
        let mut p: Vec<Nat> = points.into_iter().collect();
        p.extend(self.table.keys().cloned());
        p.sort();
        p.dedup();
        self.points = p;
        self.validate()?;
        Ok(self)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// Declared domain, sorted.
    pub fn points(&self) -> &[Nat] {
        &self.points
    }

    /// Size of the declared domain when it is an initial segment, else one
    /// more than its largest point.
    pub fn domain_size(&self) -> u64 {
        self.points.last().and_then(|p| p.to_u64()).map_or(0, |m| m + 1)
    }

    /// The family at `n` (empty where undefined).
    pub fn entry(&self, n: &Nat) -> &Family {
        match self.table.get(n) {
            Some(f) => f,
            None => self.default.as_ref().unwrap_or(&EMPTY),
        }
    }

    /// The constant family of a basic (or constant T3) oracle.
    pub fn constant_family(&self) -> Option<&Family> {
        self.default.as_ref()
    }

    /// T0/T1 value at `n`.
    pub fn value(&self, n: &Nat) -> Option<&Nat> {
        self.entry(n).single_value()
    }

    /// Points whose entry is inhabited.
    pub fn defined_points(&self) -> impl Iterator<Item = &Nat> {
        self.points.iter().filter(|p| !self.entry(p).is_empty())
    }

    /// Explicit (non-default) entries.
    pub fn table(&self) -> &BTreeMap<Nat, Family> {
        &self.table
    }
}

impl QueryOracle for FiniteOracle {
    /// T1 reading: `{{v}}` answers `v`; anything else is undefined.
    fn answer(&self, query: &Nat) -> Answer {
        match self.entry(query).single_value() {
            Some(v) => Answer::Defined(v.clone()),
            None => Answer::Undefined,
        }
    }
}

/// Re-read `g` at a higher level using the standard identifications.
pub fn embed(g: &FiniteOracle, target: Level) -> Result<FiniteOracle, OracleError> {
    let ok = match (g.level, target) {
        (Level::Basic, Level::Basic | Level::T3) => true,
        (Level::Basic, _) | (_, Level::Basic) => false,
        (from, to) => from.rank() <= to.rank(),
    };
    if !ok {
        return Err(OracleError::DownwardEmbedding { from: g.level.name(), to: target.name() });
    }
    let mut out = g.clone();
    out.level = target;
    Ok(out)
}

/// `(f ⊕ g)(2n) = f(n)`, `(f ⊕ g)(2n+1) = g(n)`.
pub fn join_oplus(f: &FiniteOracle, g: &FiniteOracle) -> Result<FiniteOracle, OracleError> {
    if f.level != g.level {
        return Err(OracleError::LevelMismatch(f.level.name(), g.level.name()));
    }
    let even = |n: &Nat| n << 1u32;
    let odd = |n: &Nat| (n << 1u32) + 1u32;
    let mut points = Vec::new();
    let mut table = BTreeMap::new();
    for p in &f.points {
        points.push(even(p));
        table.insert(even(p), f.entry(p).clone());
    }
    for p in &g.points {
        points.push(odd(p));
        table.insert(odd(p), g.entry(p).clone());
    }
    let level = if f.level == Level::Basic { Level::T3 } else { f.level };
    FiniteOracle::from_parts(level, points, table, None)
}

/// `(f ⋏ g)(pair(m, n)) = {U ⊔ V | U ∈ f(m), V ∈ g(n)}`.
pub fn meet_t3(f: &FiniteOracle, g: &FiniteOracle) -> FiniteOracle {
    let product = |a: &Family, b: &Family| {
        let mut out = Vec::new();
        for u in a.sets() {
            for v in b.sets() {
                let mut s: NatSet = u.iter().map(|x| sum_tag(Side::Left, x)).collect();
                s.extend(v.iter().map(|x| sum_tag(Side::Right, x)));
                out.push(s);
            }
        }
        Family::new(out)
    };
    if let (Level::Basic, Level::Basic) = (f.level, g.level) {
        let fam = product(f.entry(&nat(0)), g.entry(&nat(0)));
        return FiniteOracle::basic(fam);
    }
    let mut points = Vec::new();
    let mut table = BTreeMap::new();
    for m in &f.points {
        for n in &g.points {
            let k = pair(m, n);
            points.push(k.clone());
            table.insert(k, product(f.entry(m), g.entry(n)));
        }
    }
    FiniteOracle::from_parts(Level::T3, points, table, None).expect("T3 shape")
}

/// A promise problem: inhabited, disjoint finite sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PromiseProblem {
    p: NatSet,
    q: NatSet,
}

impl PromiseProblem {
    pub fn new(p: NatSet, q: NatSet) -> Result<PromiseProblem, OracleError> {
        if p.is_empty() || q.is_empty() {
            return Err(OracleError::BadPromise("both sides must be inhabited"));
        }
        if p.intersection(&q).next().is_some() {
            return Err(OracleError::BadPromise("the sides must be disjoint"));
        }
        Ok(PromiseProblem { p, q })
    }

    pub fn from_u64(p: &[u64], q: &[u64]) -> Result<PromiseProblem, OracleError> {
        Self::new(set(p.iter().copied()), set(q.iter().copied()))
    }

    pub fn p(&self) -> &NatSet {
        &self.p
    }

    pub fn q(&self) -> &NatSet {
        &self.q
    }

    /// `(Q, P)`.
    pub fn swapped(&self) -> PromiseProblem {
        PromiseProblem { p: self.q.clone(), q: self.p.clone() }
    }
}

/// 0 on P, 1 on Q, undefined elsewhere (declared domain `0..=max(P ∪ Q)`).
pub fn decoding_oracle(pp: &PromiseProblem) -> FiniteOracle {
    let mut table = BTreeMap::new();
    for x in &pp.p {
        table.insert(x.clone(), Family::value(nat(0)));
    }
    for x in &pp.q {
        table.insert(x.clone(), Family::value(nat(1)));
    }
    let top = table.keys().next_back().and_then(|m| m.to_u64());
    let points: Vec<Nat> = match top {
        Some(m) if m < 1 << 16 => (0..=m).map(nat).collect(),
        _ => table.keys().cloned().collect(),
    };
    FiniteOracle::from_parts(Level::T1, points, table, None).expect("T1 shape")
}

/// The basic oracle `{P, Q}`.
pub fn coding_oracle(pp: &PromiseProblem) -> FiniteOracle {
    FiniteOracle::basic(Family::new([pp.p.clone(), pp.q.clone()]))
}

/// `{0}` on P, `{1}` on Q, `{0, 1}` elsewhere on `0..domain_size`.
pub fn separating_oracle(pp: &PromiseProblem, domain_size: u64) -> FiniteOracle {
    let mut points: Vec<Nat> = (0..domain_size).map(nat).collect();
    points.extend(pp.p.iter().cloned());
    points.extend(pp.q.iter().cloned());
    let mut table = BTreeMap::new();
    for n in &points {
        let s = if pp.p.contains(n) {
            set([0])
        } else if pp.q.contains(n) {
            set([1])
        } else {
            set([0, 1])
        };
        table.insert(n.clone(), Family::new([s]));
    }
    FiniteOracle::from_parts(Level::T2, points, table, None).expect("T2 shape")
}

/// `(P × Q, Q × P)` with pairs coded by `pair`.
pub fn checker_problem(pp: &PromiseProblem) -> PromiseProblem {
    let prod =
        |a: &NatSet, b: &NatSet| -> NatSet { a.iter().flat_map(|x| b.iter().map(move |y| pair(x, y))).collect() };
    PromiseProblem { p: prod(&pp.p, &pp.q), q: prod(&pp.q, &pp.p) }
}

/// Named basic oracles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedBasic {
    Bottom,
    Top,
    Omega,
    Bit,
    Error(u64),
    ErrorOmega(u64),
}

/// The named basic oracles; `universe` bounds the omniscient family.
pub fn named_basic(name: &NamedBasic, universe: u64) -> Result<FiniteOracle, OracleError> {
    if universe < 2 {
        return Err(OracleError::BadParameter(format!("universe must be at least 2, got {universe}")));
    }
    let fam = match name {
        NamedBasic::Bottom => Family::of(&[&[0]]),
        NamedBasic::Top => Family::new([NatSet::new()]),
        NamedBasic::Omega => Family::new((0..universe).map(|n| set([n]))),
        NamedBasic::Bit => Family::of(&[&[0], &[1]]),
        NamedBasic::Error(m) => {
            if *m < 2 {
                return Err(OracleError::BadParameter(format!("error(m) needs m ≥ 2, got {m}")));
            }
            Family::new((1..=*m).map(|i| set((1..=*m).filter(|&j| j != i))))
        }
        NamedBasic::ErrorOmega(n) => {
            if *n < 1 {
                return Err(OracleError::BadParameter("error_omega(N) needs N ≥ 1".into()));
            }
            return Ok(error_omega_over(&set(0..*n), *n));
        }
    };
    Ok(FiniteOracle::basic(fam))
}

/// Truncation of the "all but one" oracle: `{U ∖ {i} | i < n}` over a universe `U`.
pub fn error_omega_over(universe: &NatSet, n: u64) -> FiniteOracle {
    let fam = Family::new((0..n).map(|i| {
        let mut s = universe.clone();
        s.remove(&nat(i));
        s
    }));
    FiniteOracle::basic(fam)
}
