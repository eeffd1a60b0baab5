//! Finite frames (finite distributive lattices with their Heyting
//! implication) and nuclei on them: the closed-form constructions — least
//! nucleus above a monotone map, nucleus join and implication, the
//! cotopology `cot(j)` — next to brute-force enumeration that serves as
//! their oracle.

use std::collections::BTreeSet;

use serde_json::{json, Value};
use thiserror::Error;

mod json;
mod posets;

pub use json::{frame_from_json, frame_to_json, nucleus_to_json, parse_frame};
pub use posets::{posets_up_to, Poset};

/// Largest frame for which all `k^k` self-maps are enumerated literally.
pub const LITERAL_ENUMERATION_LIMIT: usize = 6;
/// Largest frame for which nuclei are enumerated through their fixed-point sets.
pub const ENUMERATION_LIMIT: usize = 16;

/// Failures of frame construction and the nucleus operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("a frame needs at least one element")]
    Empty,
    #[error("order table is {rows}×? but names give {k} elements")]
    Shape { rows: usize, k: usize },
    #[error("the order is not reflexive, antisymmetric and transitive at ({0}, {1})")]
    NotPartialOrder(usize, usize),
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(usize, usize),
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
    #[error("distributivity fails at ({0}, {1}, {2})")]
    NotDistributive(usize, usize, usize),
    #[error("residuation x∧a ≤ b ⟺ x ≤ a→b fails at (x, a, b) = ({0}, {1}, {2})")]
    Residuation(usize, usize, usize),
    #[error("poset relation mentions point {0}, beyond the {1} points")]
    BadPoint(usize, usize),
    #[error("the poset's covering relation has a cycle")]
    Cyclic,
    #[error("map has {got} entries for a frame of {k} elements, or an entry out of range")]
    BadMap { got: usize, k: usize },
    #[error("map is not monotone: {0} ≤ {1} but f({0}) ≰ f({1})")]
    NotMonotone(usize, usize),
    #[error("map is not internally monotone: ({0} → {1}) ≰ (f({0}) → f({1}))")]
    NotInternallyMonotone(usize, usize),
    #[error("not a nucleus: {0}")]
    NotNucleus(NucleusViolation),
    #[error("cot needs j(⊥) = ⊥, but j(⊥) = {0}")]
    JBottom(usize),
    #[error("{k} elements exceed the enumeration limit of {limit}")]
    TooLarge { k: usize, limit: usize },
    #[error("frame file: {0}")]
    Format(String),
}

/// The first law a candidate nucleus breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NucleusViolation {
    /// `u ≰ j(u)`.
    NotInflationary(usize),
    /// `j(j(u)) ≠ j(u)`.
    NotIdempotent(usize),
    /// `j(u∧v) ≠ j(u)∧j(v)`.
    NotMeetPreserving(usize, usize),
}

impl std::fmt::Display for NucleusViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NucleusViolation::NotInflationary(u) => write!(f, "not inflationary at {u}"),
            NucleusViolation::NotIdempotent(u) => write!(f, "not idempotent at {u}"),
            NucleusViolation::NotMeetPreserving(u, v) => write!(f, "does not preserve the meet of {u} and {v}"),
        }
    }
}

/// A finite frame on the elements `0..k`, with its operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFrame {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    imp: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

/// A self-map of a frame given by its table (element `u` ↦ `map[u]`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nucleus {
    pub map: Vec<usize>,
}

impl Nucleus {
    pub fn apply(&self, u: usize) -> usize {
        self.map[u]
    }
}

/// The standard nuclei of a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicNuclei {
    pub identity: Nucleus,
    pub top: Nucleus,
    /// `closed[a]`: `u ↦ a ∨ u`.
    pub closed: Vec<Nucleus>,
    /// `open[a]`: `u ↦ a → u`.
    pub open: Vec<Nucleus>,
    pub double_negation: Nucleus,
}

/// Binary operations on nuclei.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NucleusOp {
    Meet,
    Join,
    Heyting,
}

/// How `cot(j)` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CotMethod {
    /// The closed-form expression with quantifiers read as frame meets and joins.
    Formula,
    /// The least enumerated nucleus sending every `j(w ∨ ¬w)`, `w` regular, to `⊤`.
    Brute,
}

impl FiniteFrame {
    /// Build a frame from a partial order, deriving and validating the operations.
    pub fn from_order(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<FiniteFrame, FrameError> {
        let k = names.len();
        if k == 0 {
            return Err(FrameError::Empty);
        }
        if leq.len() != k || leq.iter().any(|r| r.len() != k) {
            return Err(FrameError::Shape { rows: leq.len(), k });
        }
        for a in 0..k {
            if !leq[a][a] {
                return Err(FrameError::NotPartialOrder(a, a));
            }
            for b in 0..k {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(FrameError::NotPartialOrder(a, b));
                }
                for c in 0..k {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(FrameError::NotPartialOrder(a, c));
                    }
                }
            }
        }
        let bound = |a: usize, b: usize, lower: bool| -> Option<usize> {
            let below = |x: usize, y: usize| if lower { leq[x][y] } else { leq[y][x] };
            let cands: Vec<usize> = (0..k).filter(|&x| below(x, a) && below(x, b)).collect();
            cands.iter().copied().find(|&g| cands.iter().all(|&x| below(x, g)))
        };
        let mut meet = vec![vec![0; k]; k];
        let mut join = vec![vec![0; k]; k];
        for a in 0..k {
            for b in 0..k {
                meet[a][b] = bound(a, b, true).ok_or(FrameError::NoMeet(a, b))?;
                join[a][b] = bound(a, b, false).ok_or(FrameError::NoJoin(a, b))?;
            }
        }
        let bottom = (0..k).find(|&x| (0..k).all(|y| leq[x][y])).ok_or(FrameError::NoMeet(0, 0))?;
        let top = (0..k).find(|&x| (0..k).all(|y| leq[y][x])).ok_or(FrameError::NoJoin(0, 0))?;
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(FrameError::NotDistributive(a, b, c));
                    }
                }
            }
        }
        // a → b is the join of everything whose meet with a lies below b
        let mut imp = vec![vec![bottom; k]; k];
        for a in 0..k {
            for b in 0..k {
                imp[a][b] = (0..k).filter(|&x| leq[meet[x][a]][b]).fold(bottom, |acc, x| join[acc][x]);
            }
        }
        for x in 0..k {
            for a in 0..k {
                for b in 0..k {
                    if leq[meet[x][a]][b] != leq[x][imp[a][b]] {
                        return Err(FrameError::Residuation(x, a, b));
                    }
                }
            }
        }
        Ok(FiniteFrame { names, leq, meet, join, imp, bottom, top })
    }

    /// The frame of down-sets of a finite poset (the open sets of its
    /// Alexandrov topology), ordered by inclusion; elements are listed by
    /// size, then by membership bitmask, so `⊥` is first and `⊤` last.
    pub fn downsets(poset: &Poset) -> FiniteFrame {
        let n = poset.len();
        let mut sets: Vec<u32> = (0u32..1 << n).filter(|&s| poset.is_downset(s)).collect();
        sets.sort_by_key(|&s| (s.count_ones(), s));
        let names = sets.iter().map(|&s| poset.set_name(s)).collect();
        let leq = sets.iter().map(|&a| sets.iter().map(|&b| a & !b == 0).collect()).collect();
        FiniteFrame::from_order(names, leq).expect("down-sets form a frame")
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> FiniteFrame {
        let names = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        FiniteFrame::from_order(names, leq).expect("chains are frames")
    }

    /// The Sierpiński frame `0 < u < 1`.
    pub fn sierpinski() -> FiniteFrame {
        let mut f = FiniteFrame::chain(3);
        f.names = vec!["0".into(), "u".into(), "1".into()];
        f
    }

    /// The Boolean frame of subsets of `n` atoms.
    pub fn boolean(n: usize) -> FiniteFrame {
        FiniteFrame::downsets(&Poset::antichain(n))
    }

    /// The five-element frame of down-sets of `{p, q < t}`.
    pub fn five_element() -> FiniteFrame {
        FiniteFrame::downsets(&Poset::named(&["p", "q", "t"], &[(0, 2), (1, 2)]).expect("poset"))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    /// The element called `name`.
    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Heyting implication `a → b`.
    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a][b]
    }

    /// `¬a = a → ⊥`.
    pub fn neg(&self, a: usize) -> usize {
        self.imp[a][self.bottom]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Meet of a family (`⊤` for the empty family).
    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a family (`⊥` for the empty family).
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    fn check_map(&self, map: &[usize]) -> Result<(), FrameError> {
        if map.len() != self.len() || map.iter().any(|&x| x >= self.len()) {
            return Err(FrameError::BadMap { got: map.len(), k: self.len() });
        }
        Ok(())
    }

    /// Check that `map` is monotone.
    pub fn check_monotone(&self, map: &[usize]) -> Result<(), FrameError> {
        self.check_map(map)?;
        for a in self.elements() {
            for b in self.elements() {
                if self.le(a, b) && !self.le(map[a], map[b]) {
                    return Err(FrameError::NotMonotone(a, b));
                }
            }
        }
        Ok(())
    }

    /// Check that `map` is internally monotone, `p → q ≤ f(p) → f(q)` for all
    /// `p, q` (equivalently `f(p) ∧ (p → q) ≤ f(q)`): the element-level
    /// reading of `∀p q. (p ⇒ q) ⇒ (f p ⇒ f q)`. It implies monotonicity,
    /// which is checked first.
    pub fn check_internally_monotone(&self, map: &[usize]) -> Result<(), FrameError> {
        self.check_monotone(map)?;
        for p in self.elements() {
            for q in self.elements() {
                if !self.le(self.imp(p, q), self.imp(map[p], map[q])) {
                    return Err(FrameError::NotInternallyMonotone(p, q));
                }
            }
        }
        Ok(())
    }

    /// `j ≤ k` pointwise.
    pub fn pointwise_le(&self, j: &Nucleus, k: &Nucleus) -> bool {
        self.elements().all(|u| self.le(j.apply(u), k.apply(u)))
    }

    /// Pointwise meet of a nonempty family of maps.
    fn pointwise_meet<'a>(&self, maps: impl IntoIterator<Item = &'a Nucleus>) -> Nucleus {
        let mut out = vec![self.top; self.len()];
        for m in maps {
            for u in self.elements() {
                out[u] = self.meet(out[u], m.apply(u));
            }
        }
        Nucleus { map: out }
    }
}

/// The three nucleus laws, checked exhaustively; `Err` names the first
/// violation (inflation, then idempotence, then meets, scanning elements in order).
pub fn is_nucleus(f: &FiniteFrame, map: &[usize]) -> Result<Result<(), NucleusViolation>, FrameError> {
    f.check_map(map)?;
    for u in f.elements() {
        if !f.le(u, map[u]) {
            return Ok(Err(NucleusViolation::NotInflationary(u)));
        }
    }
    for u in f.elements() {
        if map[map[u]] != map[u] {
            return Ok(Err(NucleusViolation::NotIdempotent(u)));
        }
    }
    for u in f.elements() {
        for v in f.elements() {
            if map[f.meet(u, v)] != f.meet(map[u], map[v]) {
                return Ok(Err(NucleusViolation::NotMeetPreserving(u, v)));
            }
        }
    }
    Ok(Ok(()))
}

/// Wrap a table as a nucleus after checking the laws.
pub fn nucleus(f: &FiniteFrame, map: Vec<usize>) -> Result<Nucleus, FrameError> {
    is_nucleus(f, &map)?.map_err(FrameError::NotNucleus)?;
    Ok(Nucleus { map })
}

fn table(f: &FiniteFrame, g: impl Fn(usize) -> usize) -> Nucleus {
    Nucleus { map: f.elements().map(g).collect() }
}

/// Identity, top, all closed and open nuclei, and double negation.
pub fn basic_nuclei(f: &FiniteFrame) -> BasicNuclei {
    BasicNuclei {
        identity: table(f, |u| u),
        top: table(f, |_| f.top()),
        closed: f.elements().map(|a| table(f, |u| f.join(a, u))).collect(),
        open: f.elements().map(|a| table(f, |u| f.imp(a, u))).collect(),
        double_negation: table(f, |u| f.neg(f.neg(u))),
    }
}

/// The least nucleus above an internally monotone map:
/// `u ↦ ⋀_v (((f(v) → v) ∧ (u → v)) → v)`.
///
/// Maps that are only externally monotone are refused: for them the
/// expression need not dominate `f` (on the four-element Boolean frame,
/// `⊥, a ↦ b`, `b, ⊤ ↦ ⊤` is monotone, yet the expression sends `b` to `b`).
pub fn smallest_nucleus_above(f: &FiniteFrame, map: &[usize]) -> Result<Nucleus, FrameError> {
    f.check_internally_monotone(map)?;
    Ok(table(f, |u| f.meet_all(f.elements().map(|v| f.imp(f.meet(f.imp(map[v], v), f.imp(u, v)), v)))))
}

/// Meet (pointwise), join (least nucleus above `u ↦ j(u) ∨ k(u)`) and
/// implication (`u ↦ ⋀_v (j(v) → k(u ∨ v))`) of nuclei.
pub fn nucleus_ops(op: NucleusOp, j: &Nucleus, k: &Nucleus, f: &FiniteFrame) -> Result<Nucleus, FrameError> {
    for n in [j, k] {
        is_nucleus(f, &n.map)?.map_err(FrameError::NotNucleus)?;
    }
    Ok(match op {
        NucleusOp::Meet => f.pointwise_meet([j, k]),
        NucleusOp::Join => {
            let pointwise: Vec<usize> = f.elements().map(|u| f.join(j.apply(u), k.apply(u))).collect();
            smallest_nucleus_above(f, &pointwise)?
        }
        NucleusOp::Heyting => table(f, |u| f.meet_all(f.elements().map(|v| f.imp(j.apply(v), k.apply(f.join(u, v)))))),
    })
}

/// The `¬¬`-stable elements.
pub fn regular_elements(f: &FiniteFrame) -> Vec<usize> {
    f.elements().filter(|&w| f.neg(f.neg(w)) == w).collect()
}

/// The elements `j(w ∨ ¬w)` for regular `w`, which `cot(j)` must send to `⊤`.
fn cot_generators(f: &FiniteFrame, j: &Nucleus) -> Vec<usize> {
    regular_elements(f).into_iter().map(|w| j.apply(f.join(w, f.neg(w)))).collect()
}

/// `cot(j)`, the least nucleus making every `j(w ∨ ¬w)` (`w` regular) true.
pub fn cot(f: &FiniteFrame, j: &Nucleus, method: CotMethod) -> Result<Nucleus, FrameError> {
    is_nucleus(f, &j.map)?.map_err(FrameError::NotNucleus)?;
    if j.apply(f.bottom()) != f.bottom() {
        return Err(FrameError::JBottom(j.apply(f.bottom())));
    }
    match method {
        CotMethod::Formula => {
            let regular = regular_elements(f);
            // c(v) = ⋁_{w regular} (j(w ∨ ¬w) → v)
            let c = |v: usize| f.join_all(regular.iter().map(|&w| f.imp(j.apply(f.join(w, f.neg(w))), v)));
            Ok(table(f, |u| f.meet_all(f.elements().map(|v| f.imp(f.meet(f.imp(c(v), v), f.imp(u, v)), v)))))
        }
        CotMethod::Brute => {
            let gens = cot_generators(f, j);
            least_nucleus_where(f, |k| gens.iter().all(|&g| k.apply(g) == f.top()))
        }
    }
}

/// All nuclei, in lexicographic order of their tables.
///
/// Up to [`LITERAL_ENUMERATION_LIMIT`] elements every self-map is tested;
/// beyond that, up to [`ENUMERATION_LIMIT`], every subset is tested as a
/// candidate fixed-point set (closed under meets and under `a → ·`), each
/// such set `S` giving the nucleus `u ↦ ⋀{s ∈ S | u ≤ s}`.
pub fn enumerate_nuclei(f: &FiniteFrame) -> Result<Vec<Nucleus>, FrameError> {
    if f.len() <= LITERAL_ENUMERATION_LIMIT {
        enumerate_nuclei_literal(f)
    } else {
        enumerate_nuclei_by_fixed_points(f)
    }
}

/// Test all `k^k` self-maps.
pub fn enumerate_nuclei_literal(f: &FiniteFrame) -> Result<Vec<Nucleus>, FrameError> {
    let k = f.len();
    if k > LITERAL_ENUMERATION_LIMIT {
        return Err(FrameError::TooLarge { k, limit: LITERAL_ENUMERATION_LIMIT });
    }
    let mut out = Vec::new();
    let mut map = vec![0usize; k];
    loop {
        if matches!(is_nucleus(f, &map)?, Ok(())) {
            out.push(Nucleus { map: map.clone() });
        }
        // odometer, last position fastest, so the output is lexicographic
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            map[i] += 1;
            if map[i] < k {
                break;
            }
            map[i] = 0;
        }
    }
}

/// Test all subsets as fixed-point sets.
pub fn enumerate_nuclei_by_fixed_points(f: &FiniteFrame) -> Result<Vec<Nucleus>, FrameError> {
    let k = f.len();
    if k > ENUMERATION_LIMIT {
        return Err(FrameError::TooLarge { k, limit: ENUMERATION_LIMIT });
    }
    let mut found = BTreeSet::new();
    for s in 0u32..1 << k {
        let inside = |x: usize| s >> x & 1 == 1;
        if !inside(f.top()) {
            continue;
        }
        let members: Vec<usize> = f.elements().filter(|&x| inside(x)).collect();
        let closed = members.iter().all(|&a| members.iter().all(|&b| inside(f.meet(a, b))))
            && members.iter().all(|&x| f.elements().all(|a| inside(f.imp(a, x))));
        if closed {
            let map = f.elements().map(|u| f.meet_all(members.iter().copied().filter(|&x| f.le(u, x)))).collect();
            found.insert(Nucleus { map });
        }
    }
    Ok(found.into_iter().collect())
}

/// The pointwise-least enumerated nucleus satisfying `pred`, for a `pred`
/// whose solutions are closed under pointwise meets (so the least exists
/// whenever a solution does; `⊤` always is one for the uses here).
pub fn least_nucleus_where(f: &FiniteFrame, pred: impl Fn(&Nucleus) -> bool) -> Result<Nucleus, FrameError> {
    let all = enumerate_nuclei(f)?;
    let good: Vec<&Nucleus> = all.iter().filter(|n| pred(n)).collect();
    let least = f.pointwise_meet(good.iter().copied());
    debug_assert!(good.contains(&&least), "solutions not closed under meets");
    Ok(least)
}

/// The least enumerated nucleus above a map (brute-force counterpart of [`smallest_nucleus_above`]).
pub fn brute_least_above(f: &FiniteFrame, map: &[usize]) -> Result<Nucleus, FrameError> {
    f.check_map(map)?;
    least_nucleus_where(f, |n| f.elements().all(|u| f.le(map[u], n.apply(u))))
}

/// Report of `cot` by both methods on one nucleus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotComparison {
    pub formula: Nucleus,
    pub brute: Nucleus,
}

impl CotComparison {
    pub fn agree(&self) -> bool {
        self.formula == self.brute
    }
}

/// Compute `cot(j)` both ways.
pub fn cot_both(f: &FiniteFrame, j: &Nucleus) -> Result<CotComparison, FrameError> {
    Ok(CotComparison { formula: cot(f, j, CotMethod::Formula)?, brute: cot(f, j, CotMethod::Brute)? })
}

/// Whether every regular `w` has `w ∨ ¬w = ⊤` (the frame-level weak excluded middle).
pub fn satisfies_wlem(f: &FiniteFrame) -> bool {
    regular_elements(f).into_iter().all(|w| f.join(w, f.neg(w)) == f.top())
}

/// A nucleus table as `{element name: image name}` JSON.
pub fn nucleus_table_json(f: &FiniteFrame, n: &Nucleus) -> Value {
    let m: serde_json::Map<String, Value> =
        f.elements().map(|u| (f.name(u).to_string(), json!(f.name(n.apply(u))))).collect();
    Value::Object(m)
}
