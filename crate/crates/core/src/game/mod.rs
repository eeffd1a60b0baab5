//! The Arthur–Nimue–Merlin reduction game on finite oracles.
//!
//! A play of `f ⪯ g` starts with Merlin choosing `m` and a secret `F ∈ f(m)`.
//! Arthur, a program, sees `m` and Merlin's replies so far (input
//! `pair(m, encode_seq(replies))`) and outputs `pair(0, n)` to query `g` at `n`
//! or `pair(1, u)` to declare `u`. On a query Nimue, who sees everything,
//! picks `G ∈ g(n)` (none available: Arthur+Nimue lose; `G = ∅`: Merlin loses),
//! and Merlin answers with some `x ∈ G`. A declaration wins iff `u ∈ F`.
//! Plays that never end are Merlin's; at finite bounds they are reported as
//! unknown, never as losses.

pub mod checks;
pub mod trace;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::oracles::{Family, FiniteOracle, NatSet};
use crate::vm::{encode_seq, nat, pair, run, unpair, Budget, Nat, NoOracle, Outcome, Program, QueryOracle, SetOracle};

pub use checks::{check_degree_zero, check_t1_reduction, j_natural, jg_membership, jg_table, JTable};
pub use trace::{trace_from_json, trace_to_json, trace_to_text};

/// Arthur's part: a program in the game calling convention, optionally
/// relative to an ordinary Turing oracle `1_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArthurStrategy {
    pub program: Program,
    pub ambient: Option<SetOracle>,
}

impl ArthurStrategy {
    pub fn new(program: Program) -> ArthurStrategy {
        ArthurStrategy { program, ambient: None }
    }

    pub fn relative_to(program: Program, a: SetOracle) -> ArthurStrategy {
        ArthurStrategy { program, ambient: Some(a) }
    }

    /// Arthur's move after `replies`.
    pub fn decide(&self, m: &Nat, replies: &[Nat], budget: Budget) -> ArthurMove {
        let input = pair(m, &encode_seq(replies));
        let oracle: &dyn QueryOracle = match &self.ambient {
            Some(a) => a,
            None => &NoOracle,
        };
        match run(&self.program, &input, oracle, budget) {
            Outcome::Halts(v) => {
                let (tag, x) = unpair(&v);
                if tag == nat(0) {
                    ArthurMove::Query { output: v, n: x }
                } else if tag == nat(1) {
                    ArthurMove::Declare { output: v, u: x }
                } else {
                    ArthurMove::Malformed { output: v }
                }
            }
            Outcome::OracleFault(q) => ArthurMove::Fault { query: q },
            Outcome::OutOfBudget => ArthurMove::Timeout,
        }
    }
}

/// One evaluated Arthur turn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArthurMove {
    Query { output: Nat, n: Nat },
    Declare { output: Nat, u: Nat },
    Malformed { output: Nat },
    Fault { query: Nat },
    Timeout,
}

/// What Nimue's table is keyed on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NimueKey {
    /// Merlin's initial argument.
    pub m: Nat,
    /// Index of the secret set in `f(m)` (in the family's sorted order).
    pub secret: usize,
    /// Visible history `[n_0, choice_0, reply_0, n_1, …]`.
    pub history: Vec<Nat>,
    /// The pending query.
    pub n: Nat,
}

/// Nimue's part: a finite table of choices (indices into `g(n)`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NimueStrategy {
    table: BTreeMap<NimueKey, usize>,
}

impl NimueStrategy {
    pub fn new(table: BTreeMap<NimueKey, usize>) -> NimueStrategy {
        NimueStrategy { table }
    }

    /// The empty table (for strategies that never query).
    pub fn empty() -> NimueStrategy {
        NimueStrategy::default()
    }

    pub fn choice(&self, key: &NimueKey) -> Option<usize> {
        self.table.get(key).copied()
    }

    pub fn table(&self) -> &BTreeMap<NimueKey, usize> {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Everything Nimue sees when choosing.
pub struct NimueView<'a> {
    pub key: &'a NimueKey,
    /// Merlin's secret `F`.
    pub secret: &'a NatSet,
    /// The available sets `g(n)`.
    pub options: &'a Family,
    /// Merlin's replies so far.
    pub replies: &'a [Nat],
}

/// Search limits: Arthur turns per play and steps per Arthur turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameBounds {
    pub depth: usize,
    pub budget: Budget,
}

impl GameBounds {
    pub fn new(depth: usize, budget: Budget) -> GameBounds {
        GameBounds { depth, budget }
    }
}

/// One query round of a play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    /// Arthur's raw output.
    pub arthur: Nat,
    /// The queried argument.
    pub query: Nat,
    /// Nimue's choice (index into `g(query)`) and the chosen set.
    pub nimue_choice: usize,
    pub nimue_set: NatSet,
    /// Merlin's reply (absent when Nimue chose `∅`).
    pub merlin: Option<Nat>,
}

/// How a play ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// Arthur declared `value`; `success` iff it lies in the secret.
    Declared { arthur: Nat, value: Nat, success: bool },
    /// Arthur queried an argument with no available sets.
    QueryEmptyFamily { arthur: Nat, n: Nat },
    /// Nimue chose `∅`; Merlin cannot reply and loses.
    NimueEmptySet,
    /// Nimue's table has no (valid) entry for this position.
    NimueMissing { n: Nat },
    /// Arthur's output is neither a query nor a declaration.
    ArthurMalformed { arthur: Nat },
    /// Arthur's program faulted on its ambient oracle (divergence).
    ArthurFault { query: Nat },
    /// Arthur did not move within the step budget.
    ArthurTimeout,
    /// The play reached the depth bound.
    DepthExhausted,
}

/// Who a terminal favours, ordered from best to worst for Arthur+Nimue
/// (so `max` is the conjunction over Merlin's branches).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LeafKind {
    Win,
    Unknown,
    Lose,
}

impl Terminal {
    pub fn kind(&self) -> LeafKind {
        match self {
            Terminal::Declared { success: true, .. } | Terminal::NimueEmptySet => LeafKind::Win,
            Terminal::Declared { success: false, .. }
            | Terminal::QueryEmptyFamily { .. }
            | Terminal::NimueMissing { .. }
            | Terminal::ArthurMalformed { .. }
            | Terminal::ArthurFault { .. } => LeafKind::Lose,
            Terminal::ArthurTimeout | Terminal::DepthExhausted => LeafKind::Unknown,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Terminal::Declared { value, success: true, .. } => format!("declared {value}: in the secret set"),
            Terminal::Declared { value, success: false, .. } => format!("declared {value}: wrong final value"),
            Terminal::QueryEmptyFamily { n, .. } => format!("queried {n} where no set is available"),
            Terminal::NimueEmptySet => "Nimue played the empty set: Merlin loses immediately".into(),
            Terminal::NimueMissing { n } => format!("Nimue has no valid move for query {n}"),
            Terminal::ArthurMalformed { arthur } => format!("malformed Arthur move {arthur}"),
            Terminal::ArthurFault { query } => format!("Arthur's program faulted on oracle query {query}"),
            Terminal::ArthurTimeout => "Arthur exceeded the step budget".into(),
            Terminal::DepthExhausted => "depth bound reached".into(),
        }
    }
}

/// A complete play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTrace {
    pub m: Nat,
    pub secret_index: usize,
    pub secret: NatSet,
    pub moves: Vec<Move>,
    pub terminal: Terminal,
}

impl GameTrace {
    /// Merlin's replies, for replay.
    pub fn merlin_replies(&self) -> Vec<Nat> {
        self.moves.iter().filter_map(|mv| mv.merlin.clone()).collect()
    }
}

/// Counts of unresolved leaves when no loss was found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Frontier {
    pub wins: usize,
    pub timeouts: usize,
    pub depth_exhausted: usize,
    /// The first unresolved play (lexicographic order).
    pub first: Option<Box<GameTrace>>,
}

/// Three-valued verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameVerdict {
    Win,
    Lose(Box<GameTrace>),
    Unknown(Frontier),
}

impl GameVerdict {
    pub fn is_win(&self) -> bool {
        matches!(self, GameVerdict::Win)
    }

    pub fn is_lose(&self) -> bool {
        matches!(self, GameVerdict::Lose(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, GameVerdict::Unknown(_))
    }

    pub fn kind(&self) -> LeafKind {
        match self {
            GameVerdict::Win => LeafKind::Win,
            GameVerdict::Lose(_) => LeafKind::Lose,
            GameVerdict::Unknown(_) => LeafKind::Unknown,
        }
    }

    /// Conjunction: any loss dominates, then unknown.
    pub fn and(self, other: GameVerdict) -> GameVerdict {
        match (self, other) {
            (l @ GameVerdict::Lose(_), _) => l,
            (_, l @ GameVerdict::Lose(_)) => l,
            (GameVerdict::Unknown(mut a), GameVerdict::Unknown(b)) => {
                a.wins += b.wins;
                a.timeouts += b.timeouts;
                a.depth_exhausted += b.depth_exhausted;
                a.first = a.first.or(b.first);
                GameVerdict::Unknown(a)
            }
            (u @ GameVerdict::Unknown(_), GameVerdict::Win) | (GameVerdict::Win, u @ GameVerdict::Unknown(_)) => u,
            (GameVerdict::Win, GameVerdict::Win) => GameVerdict::Win,
        }
    }
}

impl fmt::Display for GameVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameVerdict::Win => write!(f, "Win"),
            GameVerdict::Lose(t) => write!(f, "Lose ({})", t.terminal.describe()),
            GameVerdict::Unknown(fr) => write!(
                f,
                "Unknown ({} timeouts, {} depth-exhausted plays, {} wins)",
                fr.timeouts, fr.depth_exhausted, fr.wins
            ),
        }
    }
}

/// Errors of single plays.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("initial configuration ({m}, secret #{secret}) is not available in f")]
    BadInit { m: Nat, secret: usize },
    #[error("Merlin reply {reply} at turn {turn} is not in Nimue's set")]
    IllegalReply { turn: usize, reply: Nat },
    #[error("Merlin's replies ran out at turn {turn}")]
    RepliesExhausted { turn: usize },
}

/// Initial configurations of `f` in lexicographic order: `(m, index, F)`.
pub fn initial_configurations(f: &FiniteOracle) -> Vec<(Nat, usize, NatSet)> {
    let mut out = Vec::new();
    for m in f.points() {
        for (i, s) in f.entry(m).sets().iter().enumerate() {
            out.push((m.clone(), i, s.clone()));
        }
    }
    out
}

type NimueFn<'a> = dyn Fn(&NimueView<'_>) -> Option<usize> + 'a;

/// Shared exploration state: Arthur's moves are cached per `(m, replies)`
/// (they do not depend on the secret).
struct Explorer<'a> {
    g: &'a FiniteOracle,
    arthur: &'a ArthurStrategy,
    bounds: GameBounds,
    cache: RefCell<HashMap<(Nat, Vec<Nat>), ArthurMove>>,
}

/// Leaf visitor verdict: keep exploring or stop.
#[derive(PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

struct Play<'p> {
    m: &'p Nat,
    secret_index: usize,
    secret: &'p NatSet,
    moves: Vec<Move>,
    replies: Vec<Nat>,
    history: Vec<Nat>,
}

impl<'a> Explorer<'a> {
    fn new(g: &'a FiniteOracle, arthur: &'a ArthurStrategy, bounds: GameBounds) -> Explorer<'a> {
        Explorer { g, arthur, bounds, cache: RefCell::new(HashMap::new()) }
    }

    fn arthur_move(&self, m: &Nat, replies: &[Nat]) -> ArthurMove {
        let key = (m.clone(), replies.to_vec());
        if let Some(mv) = self.cache.borrow().get(&key) {
            return mv.clone();
        }
        let mv = self.arthur.decide(m, replies, self.bounds.budget);
        self.cache.borrow_mut().insert(key, mv.clone());
        mv
    }

    /// Depth-first over Merlin's replies in increasing order.
    fn explore(
        &self,
        play: &mut Play<'_>,
        nimue: &NimueFn<'_>,
        leaf: &mut dyn FnMut(&Play<'_>, Terminal) -> Flow,
    ) -> Flow {
        if play.moves.len() >= self.bounds.depth {
            return leaf(play, Terminal::DepthExhausted);
        }
        let (output, n) = match self.arthur_move(play.m, &play.replies) {
            ArthurMove::Declare { output, u } => {
                let success = play.secret.contains(&u);
                return leaf(play, Terminal::Declared { arthur: output, value: u, success });
            }
            ArthurMove::Malformed { output } => return leaf(play, Terminal::ArthurMalformed { arthur: output }),
            ArthurMove::Fault { query } => return leaf(play, Terminal::ArthurFault { query }),
            ArthurMove::Timeout => return leaf(play, Terminal::ArthurTimeout),
            ArthurMove::Query { output, n } => (output, n),
        };
        let options = self.g.entry(&n);
        if options.is_empty() {
            return leaf(play, Terminal::QueryEmptyFamily { arthur: output, n });
        }
        let key =
            NimueKey { m: play.m.clone(), secret: play.secret_index, history: play.history.clone(), n: n.clone() };
        let view = NimueView { key: &key, secret: play.secret, options, replies: &play.replies };
        let choice = match nimue(&view).filter(|&c| c < options.len()) {
            Some(c) => c,
            None => return leaf(play, Terminal::NimueMissing { n }),
        };
        let set = options.sets()[choice].clone();
        let mut mv =
            Move { arthur: output, query: n.clone(), nimue_choice: choice, nimue_set: set.clone(), merlin: None };
        if set.is_empty() {
            play.moves.push(mv);
            let flow = leaf(play, Terminal::NimueEmptySet);
            play.moves.pop();
            return flow;
        }
        for x in &set {
            mv.merlin = Some(x.clone());
            play.moves.push(mv.clone());
            play.replies.push(x.clone());
            play.history.extend([n.clone(), nat(choice as u64), x.clone()]);
            let flow = self.explore(play, nimue, leaf);
            play.history.truncate(play.history.len() - 3);
            play.replies.pop();
            play.moves.pop();
            if flow == Flow::Stop {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }
}

fn to_trace(play: &Play<'_>, terminal: Terminal) -> GameTrace {
    GameTrace {
        m: play.m.clone(),
        secret_index: play.secret_index,
        secret: play.secret.clone(),
        moves: play.moves.clone(),
        terminal,
    }
}

fn table_nimue(nimue: &NimueStrategy) -> impl Fn(&NimueView<'_>) -> Option<usize> + '_ {
    move |v| nimue.choice(v.key)
}

/// Exhaustive verification: every initial configuration of `f` and every legal
/// Merlin reply. The first losing play in lexicographic order is returned.
pub fn verify_winning(
    f: &FiniteOracle,
    g: &FiniteOracle,
    arthur: &ArthurStrategy,
    nimue: &NimueStrategy,
    bounds: GameBounds,
) -> GameVerdict {
    verify_with(f, g, arthur, &table_nimue(nimue), bounds)
}

/// [`verify_winning`] with Nimue given as a rule instead of a table.
pub fn verify_with(
    f: &FiniteOracle,
    g: &FiniteOracle,
    arthur: &ArthurStrategy,
    nimue: &NimueFn<'_>,
    bounds: GameBounds,
) -> GameVerdict {
    let ex = Explorer::new(g, arthur, bounds);
    let mut frontier = Frontier::default();
    let mut lose = None;
    let mut unresolved = false;
    for (m, idx, secret) in initial_configurations(f) {
        let mut play =
            Play { m: &m, secret_index: idx, secret: &secret, moves: vec![], replies: vec![], history: vec![] };
        let flow = ex.explore(&mut play, nimue, &mut |play, terminal| match terminal.kind() {
            LeafKind::Win => {
                frontier.wins += 1;
                Flow::Continue
            }
            LeafKind::Lose => {
                lose = Some(to_trace(play, terminal));
                Flow::Stop
            }
            LeafKind::Unknown => {
                unresolved = true;
                match terminal {
                    Terminal::ArthurTimeout => frontier.timeouts += 1,
                    _ => frontier.depth_exhausted += 1,
                }
                if frontier.first.is_none() {
                    frontier.first = Some(Box::new(to_trace(play, terminal)));
                }
                Flow::Continue
            }
        });
        if flow == Flow::Stop {
            break;
        }
    }
    match lose {
        Some(t) => GameVerdict::Lose(Box::new(t)),
        None if unresolved => GameVerdict::Unknown(frontier),
        None => GameVerdict::Win,
    }
}

/// Visit every play (all initial configurations, all Merlin replies) in
/// lexicographic order; the visitor returns `false` to stop.
pub fn for_each_play(
    f: &FiniteOracle,
    g: &FiniteOracle,
    arthur: &ArthurStrategy,
    nimue: &NimueFn<'_>,
    bounds: GameBounds,
    visit: &mut dyn FnMut(&GameTrace) -> bool,
) {
    let ex = Explorer::new(g, arthur, bounds);
    for (m, idx, secret) in initial_configurations(f) {
        let mut play =
            Play { m: &m, secret_index: idx, secret: &secret, moves: vec![], replies: vec![], history: vec![] };
        let flow = ex.explore(&mut play, nimue, &mut |p, terminal| {
            if visit(&to_trace(p, terminal)) {
                Flow::Continue
            } else {
                Flow::Stop
            }
        });
        if flow == Flow::Stop {
            return;
        }
    }
}

/// Nimue's key at the position a trace ends in (the pending query `n`).
pub fn key_at(trace: &GameTrace, n: &Nat) -> NimueKey {
    let history = trace
        .moves
        .iter()
        .flat_map(|mv| [mv.query.clone(), nat(mv.nimue_choice as u64), mv.merlin.clone().unwrap_or_default()])
        .collect();
    NimueKey { m: trace.m.clone(), secret: trace.secret_index, history, n: n.clone() }
}

/// Tabulate a Nimue rule over every position reachable within the bounds.
pub fn tabulate_nimue(
    f: &FiniteOracle,
    g: &FiniteOracle,
    arthur: &ArthurStrategy,
    rule: &NimueFn<'_>,
    bounds: GameBounds,
) -> NimueStrategy {
    let table = RefCell::new(BTreeMap::new());
    let recording = |v: &NimueView<'_>| {
        let c = rule(v);
        if let Some(c) = c {
            table.borrow_mut().insert(v.key.clone(), c);
        }
        c
    };
    let ex = Explorer::new(g, arthur, bounds);
    for (m, idx, secret) in initial_configurations(f) {
        let mut play =
            Play { m: &m, secret_index: idx, secret: &secret, moves: vec![], replies: vec![], history: vec![] };
        ex.explore(&mut play, &recording, &mut |_, _| Flow::Continue);
    }
    NimueStrategy::new(table.into_inner())
}

/// Search for a Nimue table that makes `arthur` win (an AND–OR search over
/// Nimue's choices and Merlin's replies). Returns the best verdict reachable:
/// `Win` with a table, else `Unknown` or `Lose` (with the table that gets
/// furthest, choosing the first option on ties).
pub fn solve_nimue(
    f: &FiniteOracle,
    g: &FiniteOracle,
    arthur: &ArthurStrategy,
    bounds: GameBounds,
) -> (LeafKind, NimueStrategy) {
    let ex = Explorer::new(g, arthur, bounds);
    let mut table = BTreeMap::new();
    let mut overall = LeafKind::Win;
    for (m, idx, secret) in initial_configurations(f) {
        let mut play =
            Play { m: &m, secret_index: idx, secret: &secret, moves: vec![], replies: vec![], history: vec![] };
        let (k, t) = solve_node(&ex, &mut play);
        table.extend(t);
        overall = overall.max(k);
    }
    (overall, NimueStrategy::new(table))
}

fn solve_node(ex: &Explorer<'_>, play: &mut Play<'_>) -> (LeafKind, BTreeMap<NimueKey, usize>) {
    // Explore one Arthur turn with a probing Nimue to see what is queried.
    let mut pending: Option<(NimueKey, usize)> = None;
    let mut leaf_kind = LeafKind::Win;
    // a Nimue without moves stops the play right at the decision point
    let probe = |_: &NimueView<'_>| -> Option<usize> { None };
    let mut first = true;
    ex.explore(play, &probe, &mut |p, terminal| {
        if first {
            first = false;
            if let Terminal::NimueMissing { n } = &terminal {
                let options = ex.g.entry(n).len();
                pending = Some((
                    NimueKey { m: p.m.clone(), secret: p.secret_index, history: p.history.clone(), n: n.clone() },
                    options,
                ));
            } else {
                leaf_kind = terminal.kind();
            }
        }
        Flow::Stop
    });
    let (key, options) = match pending {
        None => return (leaf_kind, BTreeMap::new()),
        Some(x) => x,
    };
    let (output, n) = match ex.arthur_move(play.m, &play.replies) {
        ArthurMove::Query { output, n } => (output, n),
        _ => unreachable!("a Nimue decision point follows a query"),
    };
    let family = ex.g.entry(&n).clone();
    let mut best: Option<(LeafKind, BTreeMap<NimueKey, usize>)> = None;
    for c in 0..options {
        let set = &family.sets()[c];
        let mut kind = LeafKind::Win;
        let mut sub = BTreeMap::new();
        if !set.is_empty() {
            for x in set {
                play.moves.push(Move {
                    arthur: output.clone(),
                    query: n.clone(),
                    nimue_choice: c,
                    nimue_set: set.clone(),
                    merlin: Some(x.clone()),
                });
                play.replies.push(x.clone());
                play.history.extend([n.clone(), nat(c as u64), x.clone()]);
                let (k, t) = solve_node(ex, play);
                play.history.truncate(play.history.len() - 3);
                play.replies.pop();
                play.moves.pop();
                kind = kind.max(k);
                sub.extend(t);
                if kind == LeafKind::Lose {
                    break;
                }
            }
        }
        sub.insert(key.clone(), c);
        let better = match &best {
            None => true,
            Some((b, _)) => kind < *b,
        };
        if better {
            best = Some((kind, sub));
        }
        if kind == LeafKind::Win {
            break;
        }
    }
    best.unwrap_or((LeafKind::Lose, BTreeMap::new()))
}

/// Simulate one play against a recorded sequence of Merlin replies.
#[allow(clippy::too_many_arguments)]
pub fn run_play(
    f: &FiniteOracle,
    g: &FiniteOracle,
    arthur: &ArthurStrategy,
    nimue: &NimueStrategy,
    init: (&Nat, usize),
    merlin_replies: &[Nat],
    bounds: GameBounds,
) -> Result<GameTrace, GameError> {
    let (m, idx) = init;
    let secret = f
        .entry(m)
        .get(idx)
        .filter(|_| f.points().contains(m) || f.constant_family().is_some())
        .cloned()
        .ok_or(GameError::BadInit { m: m.clone(), secret: idx })?;
    let ex = Explorer::new(g, arthur, bounds);
    let mut play = Play { m, secret_index: idx, secret: &secret, moves: vec![], replies: vec![], history: vec![] };
    let mut result: Option<Result<GameTrace, GameError>> = None;
    let nimue_fn = table_nimue(nimue);
    // follow only the recorded replies: prune every other branch
    let scripted = |v: &NimueView<'_>| nimue_fn(v);
    explore_scripted(&ex, &mut play, &scripted, merlin_replies, &mut result);
    result.expect("a scripted play always ends")
}

fn explore_scripted(
    ex: &Explorer<'_>,
    play: &mut Play<'_>,
    nimue: &NimueFn<'_>,
    script: &[Nat],
    result: &mut Option<Result<GameTrace, GameError>>,
) {
    let turn = play.moves.len();
    let mut query_seen = None;
    // run this turn: the first leaf below it shows Arthur's move and Nimue's set
    ex.explore(play, nimue, &mut |p, terminal| {
        let ends_here = p.moves.len() == turn || (p.moves.len() == turn + 1 && terminal == Terminal::NimueEmptySet);
        if ends_here {
            *result = Some(Ok(to_trace(p, terminal)));
        } else {
            query_seen = Some(p.moves[turn].clone());
        }
        Flow::Stop
    });
    if result.is_some() {
        return;
    }
    let mv = match query_seen {
        Some(mv) => mv,
        None => {
            *result = Some(Err(GameError::RepliesExhausted { turn }));
            return;
        }
    };
    let reply = match script.get(turn) {
        Some(r) => r.clone(),
        None => {
            *result = Some(Err(GameError::RepliesExhausted { turn }));
            return;
        }
    };
    if !mv.nimue_set.contains(&reply) {
        *result = Some(Err(GameError::IllegalReply { turn, reply }));
        return;
    }
    let n = mv.query.clone();
    let choice = mv.nimue_choice;
    play.moves.push(Move { merlin: Some(reply.clone()), ..mv });
    play.replies.push(reply.clone());
    play.history.extend([n, nat(choice as u64), reply]);
    explore_scripted(ex, play, nimue, script, result);
}

#[cfg(test)]
mod tests;
