//! `anm`: verify and replay reduction-game witnesses, run the checker
//! decider, and compute nuclei on finite frames.
//!
//! Exit status: 0 = Win / decided / computed, 2 = Lose (or a failed frame
//! check), 3 = Unknown (bounds exhausted), 1 = usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use anm_core::decide::{decide_checker, decision_to_json, CheckerVerdict, DecideBounds, MTableParams};
use anm_core::frames::{
    basic_nuclei, brute_least_above, cot, cot_both, enumerate_nuclei, frame_to_json, is_nucleus, nucleus_ops,
    nucleus_table_json, parse_frame, regular_elements, smallest_nucleus_above, CotMethod, FiniteFrame, FrameError,
    Nucleus, NucleusOp,
};
use anm_core::game::{
    for_each_play, run_play, solve_nimue, trace_from_json, trace_to_json, trace_to_text, verify_winning,
    ArthurStrategy, GameBounds, GameTrace, GameVerdict, LeafKind, NimueStrategy,
};
use anm_core::oracles::json::{nat_to_json, parse_oracle};
use anm_core::oracles::{FiniteOracle, PromiseProblem};
use anm_core::vm::asm::parse_program_or_code;
use anm_core::vm::{nat, Budget};
use anm_core::witnesses::programs::membership_program;
use anm_core::witnesses::{registry, registry_entry, witness_promise, PromiseWitness};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_LOSE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "anm", version, about = "Arthur–Nimue–Merlin reduction games and nuclei on finite frames")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustively verify a named witness or a user strategy.
    Verify(VerifyArgs),
    /// Replay a recorded Merlin reply sequence against a strategy.
    Play(PlayArgs),
    /// Classify a pair for the checker problem of a promise problem.
    Decide(DecideArgs),
    /// Compute frame and nucleus quantities.
    Frame(FrameArgs),
    /// List the built-in witnesses.
    Registry(RegistryArgs),
}

/// Where the strategy comes from: a registry name, or oracle files plus an Arthur program.
#[derive(Args, Debug)]
struct StrategySource {
    /// Built-in witness name (see `anm registry`).
    #[arg(long, conflicts_with_all = ["oracle", "arthur"])]
    witness: Option<String>,
    /// Size of the truncated universe for omniscient-style witnesses.
    #[arg(long, default_value_t = 6)]
    universe: u64,
    /// Oracle files: the reduced oracle f, then the queried oracle g.
    #[arg(long, num_args = 1)]
    oracle: Vec<PathBuf>,
    /// Arthur's program: assembly text or a decimal code (Nimue is solved by search).
    #[arg(long)]
    arthur: Option<PathBuf>,
    /// Maximum number of query rounds.
    #[arg(long)]
    depth: Option<usize>,
    /// Steps per Arthur turn.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: StrategySource,
    /// Write the counterexample (or, on a win, the first play) as trace JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlayArgs {
    #[command(flatten)]
    source: StrategySource,
    /// Recorded trace JSON; its initial configuration and Merlin replies are replayed.
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Args, Debug)]
struct DecideArgs {
    /// The pair `x,y` to classify.
    #[arg(long, value_parser = parse_pair)]
    pair: (u64, u64),
    /// Elements of P (default: evens below 10).
    #[arg(long, value_delimiter = ',', conflicts_with = "oracle")]
    p: Option<Vec<u64>>,
    /// Elements of Q (default: odds below 10).
    #[arg(long, value_delimiter = ',', conflicts_with = "oracle")]
    q: Option<Vec<u64>>,
    /// Decoding oracle file: points with value 0 form P, with value 1 form Q.
    #[arg(long)]
    oracle: Option<PathBuf>,
    /// σ program (assembly or code); default: the decided-coding witness for (P, Q).
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Largest strategy-fragment length tried.
    #[arg(long, default_value_t = 6)]
    fragment_max: usize,
    /// Steps per σ evaluation.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FrameOp {
    /// The elements and their order.
    Elements,
    /// The ¬¬-stable elements.
    Regular,
    /// Identity, top, closed/open nuclei and double negation.
    Basic,
    /// All nuclei.
    Nuclei,
    /// Check the nucleus laws on `--j`.
    IsNucleus,
    /// Least nucleus above `--map`.
    SmallestAbove,
    Meet,
    Join,
    Heyting,
    /// `cot(--j)`.
    Cot,
    /// Seeded comparison of the closed forms against brute force.
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Formula,
    Brute,
    Both,
}

#[derive(Args, Debug)]
struct FrameArgs {
    #[arg(long, value_enum)]
    op: FrameOp,
    /// Frame file; default: the five-element frame of `{p, q < t}`.
    #[arg(long, conflicts_with = "fixture")]
    frame: Option<PathBuf>,
    /// Built-in frame: `five`, `sierpinski`, `chain:N` or `boolean:N`.
    #[arg(long)]
    fixture: Option<String>,
    /// A nucleus: `identity`, `top`, `double_negation`, `closed:E`, `open:E`, or a table `e0,e1,…`.
    #[arg(long, default_value = "identity")]
    j: String,
    /// Second nucleus for meet/join/heyting.
    #[arg(long, default_value = "identity")]
    k: String,
    /// A map table `e0,e1,…` (element names or indices) for smallest-above.
    #[arg(long)]
    map: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    /// Seed for `check`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random maps tried by `check`.
    #[arg(long, default_value_t = 64)]
    cases: usize,
}

#[derive(Args, Debug)]
struct RegistryArgs {
    /// Universe used when building entries to report their provenance and bounds.
    #[arg(long, default_value_t = 6)]
    universe: u64,
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (x, y) = s.split_once(',').ok_or("expected `x,y`")?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(x)?, num(y)?))
}

/// A report plus the exit status it implies.
struct Report {
    status: u8,
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("JSON values serialize")),
                Format::Text => print!("{}", r.text),
            }
            ExitCode::from(r.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Play(a) => play(a),
        Command::Decide(a) => decide(a),
        Command::Frame(a) => frame(a),
        Command::Registry(a) => list_registry(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = read(path)?;
    serde_json::from_str(&text).with_context(|| format!("{}: malformed JSON", path.display()))
}

fn budget(steps: u64) -> Result<Budget> {
    Budget::new(steps).map_err(|e| anyhow!("--budget: {e}"))
}

fn verdict_status(kind: LeafKind) -> u8 {
    match kind {
        LeafKind::Win => EXIT_OK,
        LeafKind::Lose => EXIT_LOSE,
        LeafKind::Unknown => EXIT_UNKNOWN,
    }
}

fn verdict_name(kind: LeafKind) -> &'static str {
    match kind {
        LeafKind::Win => "Win",
        LeafKind::Lose => "Lose",
        LeafKind::Unknown => "Unknown",
    }
}

/// A strategy with the instance it is played on.
struct Loaded {
    label: String,
    provenance: Option<&'static str>,
    source: FiniteOracle,
    target: FiniteOracle,
    arthur: ArthurStrategy,
    nimue: NimueStrategy,
    bounds: GameBounds,
}

fn load(src: &StrategySource) -> Result<Loaded> {
    if let Some(name) = &src.witness {
        let entry = registry_entry(name)?;
        let w = entry.build(src.universe).with_context(|| format!("building witness `{name}`"))?;
        let mut bounds = w.bounds.game();
        if let Some(d) = src.depth {
            bounds.depth = d;
        }
        if let Some(b) = src.budget {
            bounds.budget = budget(b)?;
        }
        return Ok(Loaded {
            label: name.clone(),
            provenance: Some(w.provenance),
            source: w.source,
            target: w.target,
            arthur: w.arthur,
            nimue: w.nimue,
            bounds,
        });
    }
    let [f, g] = src.oracle.as_slice() else {
        bail!("give --witness NAME, or two --oracle files (f then g) with --arthur");
    };
    let arthur_path = src.arthur.as_ref().ok_or_else(|| anyhow!("--arthur is required with --oracle"))?;
    let parse = |p: &PathBuf| parse_oracle(&read(p)?).with_context(|| format!("{}", p.display()));
    let (source, target) = (parse(f)?, parse(g)?);
    let program = parse_program_or_code(&read(arthur_path)?).with_context(|| format!("{}", arthur_path.display()))?;
    let arthur = ArthurStrategy::new(program);
    let bounds = GameBounds::new(src.depth.unwrap_or(8), budget(src.budget.unwrap_or(200_000))?);
    let (_, nimue) = solve_nimue(&source, &target, &arthur, bounds);
    Ok(Loaded {
        label: format!("{} ⪯ {}", f.display(), g.display()),
        provenance: None,
        source,
        target,
        arthur,
        nimue,
        bounds,
    })
}

fn first_play(l: &Loaded) -> Option<GameTrace> {
    let mut first = None;
    let nimue = |v: &anm_core::game::NimueView<'_>| l.nimue.choice(v.key);
    for_each_play(&l.source, &l.target, &l.arthur, &nimue, l.bounds, &mut |t| {
        first = Some(t.clone());
        false
    });
    first
}

fn verify(a: &VerifyArgs) -> Result<Report> {
    let l = load(&a.source)?;
    let verdict = verify_winning(&l.source, &l.target, &l.arthur, &l.nimue, l.bounds);
    let shown = match &verdict {
        GameVerdict::Win => first_play(&l),
        GameVerdict::Lose(t) => Some((**t).clone()),
        GameVerdict::Unknown(fr) => fr.first.as_deref().cloned(),
    };
    if let (Some(path), Some(t)) = (&a.trace, &shown) {
        let text = serde_json::to_string_pretty(&trace_to_json(t))?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    let kind = verdict.kind();
    let mut text = format!("{}: {verdict}\n", l.label);
    if let Some(p) = l.provenance {
        text += &format!("construction: {p}\n");
    }
    text += &format!("depth {}, budget {} steps\n", l.bounds.depth, l.bounds.budget.max_steps());
    if kind != LeafKind::Win {
        if let Some(t) = &shown {
            text += &trace_to_text(t);
        }
    }
    let json = json!({
        "command": "verify",
        "strategy": l.label,
        "provenance": l.provenance,
        "depth": l.bounds.depth,
        "budget": l.bounds.budget.max_steps(),
        "verdict": verdict_name(kind),
        "trace": if kind == LeafKind::Win { Value::Null } else { shown.as_ref().map(trace_to_json).into() },
    });
    Ok(Report { status: verdict_status(kind), json, text })
}

fn play(a: &PlayArgs) -> Result<Report> {
    let l = load(&a.source)?;
    let recorded = trace_from_json(&read_json(&a.trace)?).with_context(|| format!("{}", a.trace.display()))?;
    let replies = recorded.merlin_replies();
    let t =
        run_play(&l.source, &l.target, &l.arthur, &l.nimue, (&recorded.m, recorded.secret_index), &replies, l.bounds)
            .with_context(|| format!("replaying {}", a.trace.display()))?;
    let kind = t.terminal.kind();
    let matches = t == recorded;
    let text = format!("{}{}\nmatches recording: {matches}\n", trace_to_text(&t), verdict_name(kind));
    let json = json!({
        "command": "play",
        "strategy": l.label,
        "verdict": verdict_name(kind),
        "matches_recording": matches,
        "trace": trace_to_json(&t),
    });
    Ok(Report { status: verdict_status(kind), json, text })
}

fn decide(a: &DecideArgs) -> Result<Report> {
    let (p, q) = match &a.oracle {
        Some(path) => {
            let o = parse_oracle(&read(path)?).with_context(|| format!("{}", path.display()))?;
            let side = |v: u64| -> Vec<u64> {
                o.points()
                    .iter()
                    .filter(|n| o.value(n) == Some(&nat(v)))
                    .filter_map(|n| u64::try_from(n).ok())
                    .collect()
            };
            (side(0), side(1))
        }
        None => (
            a.p.clone().unwrap_or_else(|| (0..10).step_by(2).collect()),
            a.q.clone().unwrap_or_else(|| (1..10).step_by(2).collect()),
        ),
    };
    let pp = PromiseProblem::from_u64(&p, &q).context("P and Q")?;
    let (pv, qv) = match (p.iter().min(), q.iter().min()) {
        (Some(&x), Some(&y)) => (nat(x), nat(y)),
        _ => bail!("P and Q must both be nonempty"),
    };
    let sigma = match &a.sigma {
        Some(path) => {
            ArthurStrategy::new(parse_program_or_code(&read(path)?).with_context(|| format!("{}", path.display()))?)
        }
        None => {
            witness_promise(&PromiseWitness::DecidedCoding { pp: pp.clone(), decoder: membership_program(&p) })?.arthur
        }
    };
    let (x, y) = (nat(a.pair.0), nat(a.pair.1));
    let bounds = DecideBounds { fragment_max: a.fragment_max, budget: budget(a.budget)? };
    let d = decide_checker(&sigma, &pp, &pv, &qv, (&x, &y), bounds)?;
    let params = MTableParams::new(&pp, x, y, pv, qv)?;
    let status = if d.verdict == CheckerVerdict::Unknown { EXIT_UNKNOWN } else { EXIT_OK };
    let mut text = format!("({}, {}): {} (fragments up to length {})\n", a.pair.0, a.pair.1, d.verdict, d.explored);
    if let Some((who, f)) = &d.witness {
        text += &format!("winning {who:?} fragment: {}\n", f.to_json());
    }
    let mut json = decision_to_json(&d, &params);
    json["command"] = json!("decide");
    Ok(Report { status, json, text })
}

fn load_frame(a: &FrameArgs) -> Result<FiniteFrame> {
    if let Some(path) = &a.frame {
        return parse_frame(&read(path)?).with_context(|| format!("{}", path.display()));
    }
    let fixture = a.fixture.as_deref().unwrap_or("five");
    let sized = |s: &str| -> Result<usize> {
        let n: usize = s.parse().with_context(|| format!("fixture size `{s}`"))?;
        Ok(n)
    };
    Ok(match fixture.split_once(':') {
        None if fixture == "five" => FiniteFrame::five_element(),
        None if fixture == "sierpinski" => FiniteFrame::sierpinski(),
        Some(("chain", n)) => {
            let n = sized(n)?;
            if n == 0 {
                bail!("chain:0 has no elements");
            }
            FiniteFrame::chain(n)
        }
        Some(("boolean", n)) => {
            let n = sized(n)?;
            if n > 4 {
                bail!("boolean:{n} is too large (at most 4 atoms)");
            }
            FiniteFrame::boolean(n)
        }
        _ => bail!("unknown fixture `{fixture}` (five, sierpinski, chain:N, boolean:N)"),
    })
}

fn element(f: &FiniteFrame, s: &str) -> Result<usize> {
    if let Some(e) = f.element(s) {
        return Ok(e);
    }
    match s.parse::<usize>() {
        Ok(i) if i < f.len() => Ok(i),
        _ => bail!("no element `{s}`"),
    }
}

fn table(f: &FiniteFrame, s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|e| element(f, e.trim())).collect()
}

fn nucleus_arg(f: &FiniteFrame, s: &str) -> Result<Nucleus> {
    let b = basic_nuclei(f);
    Ok(match s.split_once(':') {
        None if s == "identity" => b.identity,
        None if s == "top" => b.top,
        None if s == "double_negation" => b.double_negation,
        Some(("closed", e)) => b.closed[element(f, e)?].clone(),
        Some(("open", e)) => b.open[element(f, e)?].clone(),
        _ => anm_core::frames::nucleus(f, table(f, s)?)?,
    })
}

fn nucleus_text(f: &FiniteFrame, n: &Nucleus) -> String {
    let cells: Vec<String> = f.elements().map(|u| format!("{} ↦ {}", f.name(u), f.name(n.apply(u)))).collect();
    cells.join(", ")
}

fn computed(json: Value, text: String) -> Report {
    Report { status: EXIT_OK, json, text }
}

fn frame(a: &FrameArgs) -> Result<Report> {
    let f = load_frame(a)?;
    let names = f.names();
    let header = json!({ "command": "frame", "op": format!("{:?}", a.op).to_lowercase(), "frame": frame_to_json(&f) });
    let with = |extra: Value| -> Value {
        let mut v = header.clone();
        for (k, x) in extra.as_object().expect("object").iter() {
            v[k] = x.clone();
        }
        v
    };
    Ok(match a.op {
        FrameOp::Elements => {
            let mut text = String::new();
            for u in f.elements() {
                let above: Vec<&str> = f.elements().filter(|&v| v != u && f.le(u, v)).map(|v| f.name(v)).collect();
                text += &format!("{} ≤ {}\n", f.name(u), above.join(" "));
            }
            computed(with(json!({})), text)
        }
        FrameOp::Regular => {
            let r: Vec<&str> = regular_elements(&f).into_iter().map(|w| names[w].as_str()).collect();
            computed(with(json!({ "regular": r })), format!("regular: {}\n", r.join(" ")))
        }
        FrameOp::Basic => {
            let b = basic_nuclei(&f);
            let mut list: Vec<(String, Nucleus)> = vec![
                ("identity".into(), b.identity),
                ("top".into(), b.top),
                ("double_negation".into(), b.double_negation),
            ];
            for u in f.elements() {
                list.push((format!("closed:{}", f.name(u)), b.closed[u].clone()));
                list.push((format!("open:{}", f.name(u)), b.open[u].clone()));
            }
            let text = list.iter().map(|(n, j)| format!("{n}: {}\n", nucleus_text(&f, j))).collect();
            let json: Vec<Value> =
                list.iter().map(|(n, j)| json!({ "name": n, "table": nucleus_table_json(&f, j) })).collect();
            computed(with(json!({ "nuclei": json })), text)
        }
        FrameOp::Nuclei => {
            let all = enumerate_nuclei(&f)?;
            let text = all.iter().map(|j| format!("{}\n", nucleus_text(&f, j))).collect::<String>()
                + &format!("{} nuclei\n", all.len());
            let json: Vec<Value> = all.iter().map(|j| nucleus_table_json(&f, j)).collect();
            computed(with(json!({ "count": all.len(), "nuclei": json })), text)
        }
        FrameOp::IsNucleus => {
            let map = match a.j.contains(',') {
                true => table(&f, &a.j)?,
                false => nucleus_arg(&f, &a.j)?.map,
            };
            let verdict = is_nucleus(&f, &map)?;
            let (ok, why) = match verdict {
                Ok(()) => (true, None),
                Err(v) => (false, Some(v.to_string())),
            };
            let text = match &why {
                None => "nucleus\n".to_string(),
                Some(w) => format!("not a nucleus: {w}\n"),
            };
            let json = with(json!({ "is_nucleus": ok, "violation": why }));
            Report { status: if ok { EXIT_OK } else { EXIT_LOSE }, json, text }
        }
        FrameOp::SmallestAbove => {
            let map = table(&f, a.map.as_deref().ok_or_else(|| anyhow!("--map is required"))?)?;
            let n = smallest_nucleus_above(&f, &map)?;
            computed(with(json!({ "nucleus": nucleus_table_json(&f, &n) })), format!("{}\n", nucleus_text(&f, &n)))
        }
        FrameOp::Meet | FrameOp::Join | FrameOp::Heyting => {
            let op = match a.op {
                FrameOp::Meet => NucleusOp::Meet,
                FrameOp::Join => NucleusOp::Join,
                _ => NucleusOp::Heyting,
            };
            let (j, k) = (nucleus_arg(&f, &a.j)?, nucleus_arg(&f, &a.k)?);
            let n = nucleus_ops(op, &j, &k, &f)?;
            computed(with(json!({ "nucleus": nucleus_table_json(&f, &n) })), format!("{}\n", nucleus_text(&f, &n)))
        }
        FrameOp::Cot => cot_report(&f, a, with)?,
        FrameOp::Check => check_report(&f, a, with)?,
    })
}

fn cot_report(f: &FiniteFrame, a: &FrameArgs, with: impl Fn(Value) -> Value) -> Result<Report> {
    let j = nucleus_arg(f, &a.j)?;
    let single = |m: CotMethod| -> Result<Report> {
        let n = cot(f, &j, m)?;
        Ok(computed(with(json!({ "cot": nucleus_table_json(f, &n) })), format!("{}\n", nucleus_text(f, &n))))
    };
    match a.method {
        MethodArg::Formula => single(CotMethod::Formula),
        MethodArg::Brute => single(CotMethod::Brute),
        MethodArg::Both => {
            let c = cot_both(f, &j)?;
            let text = format!(
                "formula: {}\nbrute:   {}\nagree: {}\n",
                nucleus_text(f, &c.formula),
                nucleus_text(f, &c.brute),
                c.agree()
            );
            let json = with(json!({
                "formula": nucleus_table_json(f, &c.formula),
                "brute": nucleus_table_json(f, &c.brute),
                "agree": c.agree(),
            }));
            Ok(Report { status: if c.agree() { EXIT_OK } else { EXIT_LOSE }, json, text })
        }
    }
}

/// Seeded comparison: least nuclei above random internally monotone maps,
/// nucleus joins of random pairs, and `cot` on every nucleus with `j(⊥) = ⊥`.
fn check_report(f: &FiniteFrame, a: &FrameArgs, with: impl Fn(Value) -> Value) -> Result<Report> {
    let all = enumerate_nuclei(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut mismatches = Vec::new();
    for _ in 0..a.cases {
        let (j, k) = (&all[rng.gen_range(0..all.len())], &all[rng.gen_range(0..all.len())]);
        let c = f.elements().nth(rng.gen_range(0..f.len())).expect("nonempty");
        // u ↦ j(u) ∨ (c ∧ k(u)) is internally monotone
        let map: Vec<usize> = f.elements().map(|u| f.join(j.apply(u), f.meet(c, k.apply(u)))).collect();
        match (smallest_nucleus_above(f, &map), brute_least_above(f, &map)) {
            (Ok(x), Ok(y)) if x == y => {}
            (x, y) => mismatches.push(format!("least above {map:?}: {x:?} vs {y:?}")),
        }
        let join = nucleus_ops(NucleusOp::Join, j, k, f)?;
        let lub = anm_core::frames::least_nucleus_where(f, |n| f.pointwise_le(j, n) && f.pointwise_le(k, n))?;
        if join != lub {
            mismatches.push(format!("join of {:?} and {:?}", j.map, k.map));
        }
    }
    let mut cot_agree = 0;
    let mut cot_total = 0;
    for j in all.iter().filter(|j| j.apply(f.bottom()) == f.bottom()) {
        cot_total += 1;
        match cot_both(f, j) {
            Ok(c) if c.agree() => cot_agree += 1,
            Ok(c) => {
                mismatches.push(format!("cot of {:?}: formula {:?}, brute {:?}", j.map, c.formula.map, c.brute.map))
            }
            Err(FrameError::TooLarge { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let ok = mismatches.is_empty();
    let text = format!(
        "{} nuclei; {} random cases (seed {}); cot agreement {cot_agree}/{cot_total}; {}\n{}",
        all.len(),
        a.cases,
        a.seed,
        if ok { "all match" } else { "MISMATCH" },
        mismatches.iter().map(|m| format!("  {m}\n")).collect::<String>()
    );
    let json = with(json!({
        "nuclei": all.len(),
        "seed": a.seed,
        "cases": a.cases,
        "cot_agree": cot_agree,
        "cot_total": cot_total,
        "mismatches": mismatches,
    }));
    Ok(Report { status: if ok { EXIT_OK } else { EXIT_LOSE }, json, text })
}

fn list_registry(a: &RegistryArgs) -> Result<Report> {
    let mut text = String::new();
    let mut rows = Vec::new();
    for e in registry() {
        let w = e.build(a.universe).with_context(|| format!("building witness `{}`", e.name))?;
        text += &format!("{:<20} {:<40} {}\n", e.name, e.instance, w.provenance);
        rows.push(json!({
            "name": e.name,
            "instance": e.instance,
            "provenance": w.provenance,
            "depth": w.bounds.depth,
            "budget": w.bounds.budget.max_steps(),
            "source_points": w.source.points().iter().map(nat_to_json).collect::<Vec<_>>(),
        }));
    }
    Ok(computed(json!({ "command": "registry", "universe": a.universe, "witnesses": rows }), text))
}
