//! Deciding checker problems from an omniscience witness: the M-table, the
//! ancillary Left/Right game driven by Arthur's strategy `σ`, finite strategy
//! fragments, and the search that classifies a promised pair `(x, y)`.
//!
//! `σ` is Arthur's half of a winning strategy for `omega ⪯ c_{P,Q}` (or the
//! equivalent `bit ⪯ c_{P,Q}`). In the ancillary game Left and Right choose
//! labels `P`/`Q` each turn; the M-table turns the two labels into the
//! element Merlin hands to `σ`. Left wins when `σ` declares 0, Right when it
//! declares 1. Left can force a win exactly when `(x, y) ∈ P×Q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::game::{ArthurMove, ArthurStrategy};
use crate::oracles::json::nat_to_json;
use crate::oracles::PromiseProblem;
use crate::vm::{nat, Budget, Nat};

/// A move of the ancillary game. `P < Q`, which fixes the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    P,
    Q,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::P, Label::Q];
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::P => "P",
            Label::Q => "Q",
        })
    }
}

/// A player of the ancillary game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Left,
    Right,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }
}

/// Failures of the decider's entry points.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecideError {
    #[error("p = {0} is not in P")]
    PNotInP(Nat),
    #[error("q = {0} is not in Q")]
    QNotInQ(Nat),
    #[error("Left supplied {left} moves but Right supplied {right}")]
    MoveCountMismatch { left: usize, right: usize },
    #[error("fragment of length {length} has no move for opponent history {history}")]
    IncompleteFragment { length: usize, history: String },
    #[error("fragment length must be at least 1")]
    ZeroLength,
}

/// The pair to classify and the fixed representatives `p ∈ P`, `q ∈ Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTableParams {
    pub x: Nat,
    pub y: Nat,
    pub p: Nat,
    pub q: Nat,
}

impl MTableParams {
    /// Parameters checked against the promise problem.
    pub fn new(pp: &PromiseProblem, x: Nat, y: Nat, p: Nat, q: Nat) -> Result<MTableParams, DecideError> {
        if !pp.p().contains(&p) {
            return Err(DecideError::PNotInP(p));
        }
        if !pp.q().contains(&q) {
            return Err(DecideError::QNotInQ(q));
        }
        Ok(MTableParams { x, y, p, q })
    }

    /// The same table for `(y, x)`.
    pub fn swapped(&self) -> MTableParams {
        MTableParams { x: self.y.clone(), y: self.x.clone(), p: self.p.clone(), q: self.q.clone() }
    }
}

/// `(P,P) ↦ p`, `(P,Q) ↦ x`, `(Q,P) ↦ y`, `(Q,Q) ↦ q`.
pub fn m_table(params: &MTableParams, l: Label, r: Label) -> Nat {
    match (l, r) {
        (Label::P, Label::P) => params.p.clone(),
        (Label::P, Label::Q) => params.x.clone(),
        (Label::Q, Label::P) => params.y.clone(),
        (Label::Q, Label::Q) => params.q.clone(),
    }
}

/// Property (†) at one pair: when `(x, y) ∈ P×Q` Left's label decides the
/// side of every table value, when `(x, y) ∈ Q×P` Right's does. Pairs
/// outside the promise satisfy it vacuously.
pub fn dagger_holds(pp: &PromiseProblem, params: &MTableParams) -> bool {
    let side = |v: &Nat| {
        if pp.p().contains(v) {
            Some(Label::P)
        } else if pp.q().contains(v) {
            Some(Label::Q)
        } else {
            None
        }
    };
    let (sx, sy) = (side(&params.x), side(&params.y));
    let controller = match (sx, sy) {
        (Some(Label::P), Some(Label::Q)) => Player::Left,
        (Some(Label::Q), Some(Label::P)) => Player::Right,
        _ => return true,
    };
    Label::ALL.iter().all(|&l| {
        Label::ALL.iter().all(|&r| {
            let chosen = if controller == Player::Left { l } else { r };
            side(&m_table(params, l, r)) == Some(chosen)
        })
    })
}

/// Why a play ended without a winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DrawReason {
    /// `σ` produced an output that is neither a query nor a declaration.
    Malformed,
    /// `σ` declared a value other than 0 or 1.
    OtherValue(Nat),
    /// `σ` ran out of budget (stands in for divergence).
    Timeout,
    /// `σ` queried its ambient Turing oracle outside its domain.
    Fault,
}

/// The state of an ancillary play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AncillaryOutcome {
    /// `σ` declared 0 after this many turns.
    LeftWin {
        turns: usize,
    },
    /// `σ` declared 1 after this many turns.
    RightWin {
        turns: usize,
    },
    /// `σ` still wants to query when the supplied moves run out.
    Ongoing,
    Draw {
        turns: usize,
        reason: DrawReason,
    },
}

impl AncillaryOutcome {
    /// The winner, if any.
    pub fn winner(&self) -> Option<Player> {
        match self {
            AncillaryOutcome::LeftWin { .. } => Some(Player::Left),
            AncillaryOutcome::RightWin { .. } => Some(Player::Right),
            _ => None,
        }
    }
}

/// `σ`'s verdict on one sequence of table values.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Step {
    Continue,
    Ends(AncillaryOutcome),
}

/// Evaluates `σ` on prefixes of a play, caching by the label history.
struct Evaluator<'a> {
    sigma: &'a ArthurStrategy,
    params: &'a MTableParams,
    budget: Budget,
    cache: HashMap<Vec<(Label, Label)>, Step>,
}

impl<'a> Evaluator<'a> {
    fn new(sigma: &'a ArthurStrategy, params: &'a MTableParams, budget: Budget) -> Evaluator<'a> {
        Evaluator { sigma, params, budget, cache: HashMap::new() }
    }

    fn step(&mut self, history: &[(Label, Label)]) -> Step {
        if let Some(s) = self.cache.get(history) {
            return s.clone();
        }
        let replies: Vec<Nat> = history.iter().map(|&(l, r)| m_table(self.params, l, r)).collect();
        let turns = history.len();
        // Merlin's argument for a basic source oracle is immaterial: 0
        let s = match self.sigma.decide(&nat(0), &replies, self.budget) {
            ArthurMove::Query { .. } => Step::Continue,
            ArthurMove::Declare { u, .. } if u == nat(0) => Step::Ends(AncillaryOutcome::LeftWin { turns }),
            ArthurMove::Declare { u, .. } if u == nat(1) => Step::Ends(AncillaryOutcome::RightWin { turns }),
            ArthurMove::Declare { u, .. } => {
                Step::Ends(AncillaryOutcome::Draw { turns, reason: DrawReason::OtherValue(u) })
            }
            ArthurMove::Malformed { .. } => Step::Ends(AncillaryOutcome::Draw { turns, reason: DrawReason::Malformed }),
            ArthurMove::Fault { .. } => Step::Ends(AncillaryOutcome::Draw { turns, reason: DrawReason::Fault }),
            ArthurMove::Timeout => Step::Ends(AncillaryOutcome::Draw { turns, reason: DrawReason::Timeout }),
        };
        self.cache.insert(history.to_vec(), s.clone());
        s
    }

    /// Play the given moves; `σ` is consulted before the first move and after each.
    fn play(&mut self, moves: &[(Label, Label)]) -> AncillaryOutcome {
        for i in 0..=moves.len() {
            if let Step::Ends(o) = self.step(&moves[..i]) {
                return o;
            }
        }
        AncillaryOutcome::Ongoing
    }
}

/// Run the ancillary game on explicit move sequences.
pub fn ancillary_play(
    sigma: &ArthurStrategy,
    params: &MTableParams,
    left_moves: &[Label],
    right_moves: &[Label],
    budget: Budget,
) -> Result<AncillaryOutcome, DecideError> {
    if left_moves.len() != right_moves.len() {
        return Err(DecideError::MoveCountMismatch { left: left_moves.len(), right: right_moves.len() });
    }
    let moves: Vec<(Label, Label)> = left_moves.iter().copied().zip(right_moves.iter().copied()).collect();
    Ok(Evaluator::new(sigma, params, budget).play(&moves))
}

/// A finite strategy fragment: the next move for every opponent history of
/// length below `length`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyFragment {
    pub length: usize,
    pub table: BTreeMap<Vec<Label>, Label>,
}

/// All label sequences of length `n`, in lexicographic order.
pub fn sequences(n: usize) -> Vec<Vec<Label>> {
    (0..1usize << n)
        .map(|bits| (0..n).map(|i| if bits >> (n - 1 - i) & 1 == 1 { Label::Q } else { Label::P }).collect())
        .collect()
}

fn show(history: &[Label]) -> String {
    history.iter().map(Label::to_string).collect::<String>()
}

impl StrategyFragment {
    /// The fragment playing `label` everywhere.
    pub fn constant(length: usize, label: Label) -> StrategyFragment {
        let table = (0..length).flat_map(sequences).map(|h| (h, label)).collect();
        StrategyFragment { length, table }
    }

    /// Check totality on the stated domain.
    pub fn validate(&self) -> Result<(), DecideError> {
        if self.length == 0 {
            return Err(DecideError::ZeroLength);
        }
        for n in 0..self.length {
            for h in sequences(n) {
                if !self.table.contains_key(&h) {
                    return Err(DecideError::IncompleteFragment { length: self.length, history: show(&h) });
                }
            }
        }
        Ok(())
    }

    /// The move after `history`; histories outside the table get `P`.
    pub fn next(&self, history: &[Label]) -> Label {
        self.table.get(history).copied().unwrap_or(Label::P)
    }

    /// The same fragment one turn longer, playing `P` at the new histories.
    pub fn extended(&self) -> StrategyFragment {
        let mut table = self.table.clone();
        for h in sequences(self.length) {
            table.entry(h).or_insert(Label::P);
        }
        StrategyFragment { length: self.length + 1, table }
    }
}

fn arrange(side: Player, mine: Label, theirs: Label) -> (Label, Label) {
    match side {
        Player::Left => (mine, theirs),
        Player::Right => (theirs, mine),
    }
}

fn ends_in_win(outcome: &AncillaryOutcome, side: Player) -> bool {
    outcome.winner() == Some(side)
}

/// Whether `fragment` wins for `side` against every opponent sequence of
/// its length, within that many turns.
pub fn fragment_wins(
    sigma: &ArthurStrategy,
    params: &MTableParams,
    fragment: &StrategyFragment,
    side: Player,
    budget: Budget,
) -> Result<bool, DecideError> {
    fragment.validate()?;
    let mut ev = Evaluator::new(sigma, params, budget);
    Ok(fragment_wins_with(&mut ev, fragment, side))
}

fn fragment_wins_with(ev: &mut Evaluator<'_>, fragment: &StrategyFragment, side: Player) -> bool {
    for opponent in sequences(fragment.length) {
        let moves: Vec<(Label, Label)> =
            (0..fragment.length).map(|i| arrange(side, fragment.next(&opponent[..i]), opponent[i])).collect();
        if !ends_in_win(&ev.play(&moves), side) {
            return false;
        }
    }
    true
}

/// The least winning fragment of exactly `length` turns for `side`, if any.
///
/// Equivalent to testing every fragment in enumeration order (lexicographic
/// on the table, `P` before `Q`, histories by length then lexicographically)
/// and returning the first winner: the subgames after different opponent
/// histories are independent, so choosing the least winning move at each
/// reachable history, and `P` at histories where the game is already over,
/// yields the least winning table.
pub fn least_winning_fragment(
    sigma: &ArthurStrategy,
    params: &MTableParams,
    side: Player,
    length: usize,
    budget: Budget,
) -> Option<StrategyFragment> {
    let mut ev = Evaluator::new(sigma, params, budget);
    least_winning_with(&mut ev, side, length)
}

fn least_winning_with(ev: &mut Evaluator<'_>, side: Player, length: usize) -> Option<StrategyFragment> {
    let mut table = BTreeMap::new();
    if search(ev, side, length, &mut Vec::new(), &mut Vec::new(), &mut table) {
        // histories never reached keep the least move
        let mut full = StrategyFragment::constant(length, Label::P);
        full.table.extend(table);
        Some(full)
    } else {
        None
    }
}

/// AND-OR search: can `side` force a win from `history` within `length` turns?
/// Records the chosen moves, keyed by opponent history, into `table`.
fn search(
    ev: &mut Evaluator<'_>,
    side: Player,
    length: usize,
    history: &mut Vec<(Label, Label)>,
    opponent: &mut Vec<Label>,
    table: &mut BTreeMap<Vec<Label>, Label>,
) -> bool {
    match ev.step(history) {
        Step::Ends(o) => return ends_in_win(&o, side),
        Step::Continue if history.len() == length => return false,
        Step::Continue => {}
    }
    for mine in Label::ALL {
        let mut sub = BTreeMap::new();
        let all = Label::ALL.iter().all(|&theirs| {
            history.push(arrange(side, mine, theirs));
            opponent.push(theirs);
            let ok = search(ev, side, length, history, opponent, &mut sub);
            history.pop();
            opponent.pop();
            ok
        });
        if all {
            table.insert(opponent.clone(), mine);
            table.extend(sub);
            return true;
        }
    }
    false
}

/// Classification of a promised pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckerVerdict {
    InPxQ,
    InQxP,
    Unknown,
}

/// Limits of the decider.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideBounds {
    /// Largest fragment length tried.
    pub fragment_max: usize,
    /// Steps per evaluation of `σ`.
    pub budget: Budget,
}

/// The decider's answer with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: CheckerVerdict,
    /// The winning fragment's owner and the fragment.
    pub witness: Option<(Player, StrategyFragment)>,
    /// The largest fragment length examined.
    pub explored: usize,
}

/// Classify `(x, y)` for the checker problem of `pp`: for `M = 1, 2, …` up to
/// the ceiling, look for a winning Left fragment of length `M` and then a
/// winning Right fragment of length `M`.
pub fn decide_checker(
    sigma: &ArthurStrategy,
    pp: &PromiseProblem,
    p: &Nat,
    q: &Nat,
    pair: (&Nat, &Nat),
    bounds: DecideBounds,
) -> Result<Decision, DecideError> {
    let params = MTableParams::new(pp, pair.0.clone(), pair.1.clone(), p.clone(), q.clone())?;
    let mut ev = Evaluator::new(sigma, &params, bounds.budget);
    for m in 1..=bounds.fragment_max {
        for side in [Player::Left, Player::Right] {
            if let Some(f) = least_winning_with(&mut ev, side, m) {
                let verdict = if side == Player::Left { CheckerVerdict::InPxQ } else { CheckerVerdict::InQxP };
                return Ok(Decision { verdict, witness: Some((side, f)), explored: m });
            }
        }
    }
    Ok(Decision { verdict: CheckerVerdict::Unknown, witness: None, explored: bounds.fragment_max })
}

impl StrategyFragment {
    /// `{"length": M, "table": {"": "P", "PQ": "Q", …}}`, histories as label strings.
    pub fn to_json(&self) -> Value {
        let table: serde_json::Map<String, Value> =
            self.table.iter().map(|(h, l)| (show(h), Value::String(l.to_string()))).collect();
        json!({ "length": self.length, "table": table })
    }
}

impl fmt::Display for CheckerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckerVerdict::InPxQ => "InPxQ",
            CheckerVerdict::InQxP => "InQxP",
            CheckerVerdict::Unknown => "Unknown",
        })
    }
}

/// The decision as JSON: verdict tag, fragment length explored and the witnessing fragment.
pub fn decision_to_json(d: &Decision, params: &MTableParams) -> Value {
    json!({
        "verdict": d.verdict.to_string(),
        "pair": [nat_to_json(&params.x), nat_to_json(&params.y)],
        "p": nat_to_json(&params.p),
        "q": nat_to_json(&params.q),
        "explored": d.explored,
        "winner": d.witness.as_ref().map(|(w, _)| format!("{w:?}")),
        "fragment": d.witness.as_ref().map(|(_, f)| f.to_json()),
    })
}

/// Whether both players have winning fragments of length `m` (which the
/// theory forbids).
pub fn both_win(sigma: &ArthurStrategy, params: &MTableParams, m: usize, budget: Budget) -> bool {
    let mut ev = Evaluator::new(sigma, params, budget);
    least_winning_with(&mut ev, Player::Left, m).is_some() && least_winning_with(&mut ev, Player::Right, m).is_some()
}

/// Every fragment of length `m` for `side`, in enumeration order. Only
/// feasible for tiny `m` (there are `2^(2^m - 1)` of them).
pub fn all_fragments(m: usize) -> Vec<StrategyFragment> {
    let keys: Vec<Vec<Label>> = (0..m).flat_map(sequences).collect();
    let count = keys.len();
    assert!(count < 20, "too many fragments to enumerate");
    (0..1u64 << count)
        .map(|bits| {
            let table = keys
                .iter()
                .enumerate()
                .map(|(i, k)| (k.clone(), if bits >> (count - 1 - i) & 1 == 1 { Label::Q } else { Label::P }))
                .collect();
            StrategyFragment { length: m, table }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vm::asm::build;
    use crate::vm::builtin::loop_program;
    use crate::vm::transform::as_arthur;
    use crate::witnesses::programs::parity_program;
    use crate::witnesses::{witness_promise, PromiseWitness};

    const B: Budget = Budget::steps(100_000);

    fn evens_odds() -> PromiseProblem {
        PromiseProblem::from_u64(&[0, 2, 4, 6, 8], &[1, 3, 5, 7, 9]).unwrap()
    }

    fn params(x: u64, y: u64) -> MTableParams {
        MTableParams::new(&evens_odds(), nat(x), nat(y), nat(0), nat(1)).unwrap()
    }

    fn decided_sigma() -> ArthurStrategy {
        witness_promise(&PromiseWitness::DecidedCoding { pp: evens_odds(), decoder: parity_program() }).unwrap().arthur
    }

    fn sigma_of(p: crate::vm::Program) -> ArthurStrategy {
        ArthurStrategy::new(as_arthur(&p).unwrap())
    }

    /// Declares 0 as soon as it sees an even reply, 1 on an odd reply after
    /// two queries, and otherwise keeps asking.
    fn patient_sigma() -> ArthurStrategy {
        let p = build(|a| {
            let [z, r, h, b] = [(); 4].map(|_| a.reg());
            let top = a.here();
            a.query(r, z);
            crate::witnesses::programs::emit_halve(a, r, h, b);
            let odd = a.label();
            a.jnz(b, odd);
            a.li(r, 0u32);
            a.halt(r);
            a.bind(odd);
            a.jmp(top);
        });
        sigma_of(p)
    }

    #[test]
    fn table_cells() {
        let t = MTableParams { x: nat(10), y: nat(11), p: nat(0), q: nat(1) };
        assert_eq!(m_table(&t, Label::P, Label::P), nat(0));
        assert_eq!(m_table(&t, Label::P, Label::Q), nat(10));
        assert_eq!(m_table(&t, Label::Q, Label::P), nat(11));
        assert_eq!(m_table(&t, Label::Q, Label::Q), nat(1));
    }

    #[test]
    fn dagger_on_all_promised_pairs() {
        let pp = evens_odds();
        for x in 0..10u64 {
            for y in 0..10u64 {
                let prm = params(x, y);
                assert!(dagger_holds(&pp, &prm));
                if x % 2 == 0 && y % 2 == 1 {
                    for r in Label::ALL {
                        assert_eq!(m_table(&prm, Label::P, r) % 2u32, nat(0));
                        assert_eq!(m_table(&prm, Label::Q, r) % 2u32, nat(1));
                    }
                }
            }
        }
        assert!(MTableParams::new(&pp, nat(0), nat(1), nat(3), nat(1)).is_err());
        assert!(MTableParams::new(&pp, nat(0), nat(1), nat(0), nat(2)).is_err());
    }

    #[test]
    fn immediate_and_divergent_sigmas() {
        let zero = sigma_of(crate::vm::builtin::halt_const(0));
        assert_eq!(ancillary_play(&zero, &params(2, 5), &[], &[], B).unwrap(), AncillaryOutcome::LeftWin { turns: 0 });
        let lp = sigma_of(loop_program());
        let out = ancillary_play(&lp, &params(2, 5), &[Label::P], &[Label::Q], Budget::steps(1_000)).unwrap();
        assert_eq!(out, AncillaryOutcome::Draw { turns: 0, reason: DrawReason::Timeout });
        assert!(ancillary_play(&zero, &params(2, 5), &[Label::P], &[], B).is_err());
        let two = sigma_of(crate::vm::builtin::halt_const(2));
        assert!(matches!(
            ancillary_play(&two, &params(2, 5), &[], &[], B).unwrap(),
            AncillaryOutcome::Draw { reason: DrawReason::OtherValue(_), .. }
        ));
    }

    #[test]
    fn parity_sigma_by_hand() {
        // one query, then the parity of the reply
        let s = decided_sigma();
        let prm = params(2, 5);
        assert_eq!(ancillary_play(&s, &prm, &[], &[], B).unwrap(), AncillaryOutcome::Ongoing);
        // (P,Q) ↦ x = 2, even → 0
        assert_eq!(
            ancillary_play(&s, &prm, &[Label::P], &[Label::Q], B).unwrap(),
            AncillaryOutcome::LeftWin { turns: 1 }
        );
        // (Q,P) ↦ y = 5, odd → 1
        assert_eq!(
            ancillary_play(&s, &prm, &[Label::Q], &[Label::P], B).unwrap(),
            AncillaryOutcome::RightWin { turns: 1 }
        );
        // (Q,Q) ↦ q = 1
        assert_eq!(
            ancillary_play(&s, &prm, &[Label::Q], &[Label::Q], B).unwrap(),
            AncillaryOutcome::RightWin { turns: 1 }
        );
    }

    #[test]
    fn always_p_wins_for_left_on_p_times_q() {
        let s = decided_sigma();
        let f = StrategyFragment::constant(1, Label::P);
        assert!(fragment_wins(&s, &params(4, 7), &f, Player::Left, B).unwrap());
        assert!(!fragment_wins(&s, &params(7, 4), &f, Player::Left, B).unwrap());
        // on Q×P, Right's label picks the side, and Q makes σ declare 1
        assert!(!fragment_wins(&s, &params(7, 4), &f, Player::Right, B).unwrap());
        let g = StrategyFragment::constant(1, Label::Q);
        assert!(fragment_wins(&s, &params(7, 4), &g, Player::Right, B).unwrap());
    }

    #[test]
    fn loop_never_wins() {
        let lp = sigma_of(loop_program());
        for f in all_fragments(2) {
            for side in [Player::Left, Player::Right] {
                assert!(!fragment_wins(&lp, &params(2, 5), &f, side, Budget::steps(500)).unwrap());
            }
        }
        let bounds = DecideBounds { fragment_max: 6, budget: Budget::steps(500) };
        let d = decide_checker(&lp, &evens_odds(), &nat(0), &nat(1), (&nat(2), &nat(5)), bounds).unwrap();
        assert_eq!(d.verdict, CheckerVerdict::Unknown);
    }

    #[test]
    fn search_returns_the_first_enumerated_winner() {
        for sigma in [decided_sigma(), patient_sigma()] {
            for (x, y) in [(2, 5), (5, 2), (0, 9), (9, 0)] {
                let prm = params(x, y);
                for m in 1..=3 {
                    for side in [Player::Left, Player::Right] {
                        let brute =
                            all_fragments(m).into_iter().find(|f| fragment_wins(&sigma, &prm, f, side, B).unwrap());
                        let fast = least_winning_fragment(&sigma, &prm, side, m, B);
                        assert_eq!(fast, brute, "({x},{y}) M={m} {side:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn fragment_validation() {
        let mut f = StrategyFragment::constant(2, Label::Q);
        assert!(f.validate().is_ok());
        f.table.remove(&vec![Label::P]);
        assert!(matches!(f.validate(), Err(DecideError::IncompleteFragment { .. })));
        assert_eq!(StrategyFragment::constant(0, Label::P).validate(), Err(DecideError::ZeroLength));
    }

    #[test]
    fn decides_all_promised_pairs() {
        let s = decided_sigma();
        let pp = evens_odds();
        let bounds = DecideBounds { fragment_max: 6, budget: B };
        for x in 0..10u64 {
            for y in 0..10u64 {
                if x % 2 == y % 2 {
                    continue;
                }
                let d = decide_checker(&s, &pp, &nat(0), &nat(1), (&nat(x), &nat(y)), bounds).unwrap();
                let want = if x % 2 == 0 { CheckerVerdict::InPxQ } else { CheckerVerdict::InQxP };
                assert_eq!(d.verdict, want, "({x},{y})");
                let swapped = decide_checker(&s, &pp, &nat(0), &nat(1), (&nat(y), &nat(x)), bounds).unwrap();
                assert_ne!(swapped.verdict, d.verdict);
                for m in 1..=6 {
                    assert!(!both_win(&s, &params(x, y), m, B));
                }
            }
        }
    }

    #[test]
    fn patient_sigma_needs_longer_fragments() {
        // Left must keep the replies even; Right cannot force an odd declaration
        let s = patient_sigma();
        let prm = params(2, 5);
        assert!(least_winning_fragment(&s, &prm, Player::Left, 1, B).is_some());
        assert!(least_winning_fragment(&s, &prm, Player::Right, 3, B).is_none());
        // on Q×P, Right controls the side of each reply but σ never declares 1
        assert!(least_winning_fragment(&s, &params(5, 2), Player::Right, 4, B).is_none());
    }

    #[test]
    fn winning_fragments_extend() {
        let s = decided_sigma();
        for (x, y) in [(2, 5), (5, 2)] {
            let prm = params(x, y);
            for side in [Player::Left, Player::Right] {
                if let Some(f) = least_winning_fragment(&s, &prm, side, 1, B) {
                    let mut g = f.clone();
                    for m in 2..=5 {
                        g = g.extended();
                        assert_eq!(g.length, m);
                        assert!(fragment_wins(&s, &prm, &g, side, B).unwrap());
                    }
                }
            }
        }
    }
}
