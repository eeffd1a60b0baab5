use super::*;
use crate::oracles::{named_basic, NamedBasic};
use crate::vm::asm::parse;
use crate::vm::builtin::{halt_const, oracle_echo};
use crate::vm::transform::as_arthur;
use proptest::prelude::*;

fn bounds(depth: usize) -> GameBounds {
    GameBounds::new(depth, Budget::steps(20_000))
}

fn echo() -> ArthurStrategy {
    ArthurStrategy::new(as_arthur(&oracle_echo()).unwrap())
}

fn declare(u: u64) -> ArthurStrategy {
    let text = format!("li r1 1\nli r2 {u}\npair r0 r1 r2\nhalt r0");
    ArthurStrategy::new(parse(&text).unwrap())
}

fn first_choice(f: &FiniteOracle, g: &FiniteOracle, a: &ArthurStrategy, depth: usize) -> NimueStrategy {
    tabulate_nimue(f, g, a, &|_| Some(0), bounds(depth))
}

#[test]
fn right_declaration_wins() {
    let f = FiniteOracle::t0_u(&[3]);
    let a = echo();
    let n = first_choice(&f, &f, &a, 3);
    assert_eq!(verify_winning(&f, &f, &a, &n, bounds(3)), GameVerdict::Win);
    let t = run_play(&f, &f, &a, &n, (&nat(0), 0), &[nat(3)], bounds(3)).unwrap();
    assert_eq!(t.terminal, Terminal::Declared { arthur: pair(&nat(1), &nat(3)), value: nat(3), success: true });
    assert_eq!(t.moves.len(), 1);
}

#[test]
fn wrong_declaration_loses() {
    let f = FiniteOracle::t0_u(&[3]);
    match verify_winning(&f, &f, &declare(0), &NimueStrategy::empty(), bounds(2)) {
        GameVerdict::Lose(t) => {
            assert_eq!(t.terminal.kind(), LeafKind::Lose);
            assert!(matches!(t.terminal, Terminal::Declared { success: false, .. }));
        }
        other => panic!("{other}"),
    }
}

#[test]
fn query_with_no_sets_loses() {
    let f = FiniteOracle::t0_u(&[3]);
    let g = FiniteOracle::t1_u(&[None]);
    let a = echo();
    match verify_winning(&f, &g, &a, &NimueStrategy::empty(), bounds(3)) {
        GameVerdict::Lose(t) => {
            assert_eq!(t.terminal, Terminal::QueryEmptyFamily { arthur: pair(&nat(0), &nat(0)), n: nat(0) })
        }
        other => panic!("{other}"),
    }
}

#[test]
fn nimue_empty_set_wins() {
    let f = FiniteOracle::t0_u(&[3]);
    let g = FiniteOracle::t3(vec![Family::new([NatSet::new()])]);
    let a = echo();
    let n = first_choice(&f, &g, &a, 3);
    assert_eq!(verify_winning(&f, &g, &a, &n, bounds(3)), GameVerdict::Win);
    let t = run_play(&f, &g, &a, &n, (&nat(0), 0), &[], bounds(3)).unwrap();
    assert_eq!(t.terminal, Terminal::NimueEmptySet);
}

#[test]
fn malformed_move_loses() {
    let f = FiniteOracle::t0_u(&[3]);
    let a = ArthurStrategy::new(parse("li r1 2\npair r0 r1 r1\nhalt r0").unwrap());
    match verify_winning(&f, &f, &a, &NimueStrategy::empty(), bounds(3)) {
        GameVerdict::Lose(t) => assert!(matches!(t.terminal, Terminal::ArthurMalformed { .. })),
        other => panic!("{other}"),
    }
}

#[test]
fn missing_nimue_entry_loses() {
    let f = FiniteOracle::t0_u(&[3]);
    match verify_winning(&f, &f, &echo(), &NimueStrategy::empty(), bounds(3)) {
        GameVerdict::Lose(t) => assert_eq!(t.terminal, Terminal::NimueMissing { n: nat(0) }),
        other => panic!("{other}"),
    }
}

#[test]
fn bounds_exhaustion_is_unknown() {
    let f = FiniteOracle::t0_u(&[3]);
    let a = echo();
    let n = first_choice(&f, &f, &a, 3);
    assert!(verify_winning(&f, &f, &a, &n, bounds(1)).is_unknown());
    let slow = ArthurStrategy::new(crate::vm::builtin::loop_program());
    match verify_winning(&f, &f, &slow, &n, bounds(3)) {
        GameVerdict::Unknown(fr) => assert_eq!(fr.timeouts, 1),
        other => panic!("{other}"),
    }
}

#[test]
fn constant_declaration_loses_on_a_secret_without_it() {
    let f = FiniteOracle::t3(vec![Family::of(&[&[0]]), Family::of(&[&[1]])]);
    match verify_winning(&f, &f, &declare(0), &NimueStrategy::empty(), bounds(2)) {
        GameVerdict::Lose(t) => assert_eq!(t.secret, [nat(1)].into()),
        other => panic!("{other}"),
    }
}

#[test]
fn merlin_branches_are_explored() {
    // f(0) = {{0,1}}, g(0) = {{0,1}}: echo wins whatever Merlin answers
    let f = FiniteOracle::t3(vec![Family::of(&[&[0, 1]])]);
    let a = echo();
    let n = first_choice(&f, &f, &a, 3);
    assert_eq!(verify_winning(&f, &f, &a, &n, bounds(3)), GameVerdict::Win);
    // against g(0) = {{0,2}} Merlin's reply 2 defeats echo
    let g = FiniteOracle::t3(vec![Family::of(&[&[0, 2]])]);
    let n = first_choice(&f, &g, &a, 3);
    match verify_winning(&f, &g, &a, &n, bounds(3)) {
        GameVerdict::Lose(t) => assert_eq!(t.merlin_replies(), vec![nat(2)]),
        other => panic!("{other}"),
    }
}

#[test]
fn illegal_and_missing_replies_are_rejected() {
    let f = FiniteOracle::t0_u(&[3]);
    let a = echo();
    let n = first_choice(&f, &f, &a, 3);
    assert_eq!(
        run_play(&f, &f, &a, &n, (&nat(0), 0), &[nat(4)], bounds(3)),
        Err(GameError::IllegalReply { turn: 0, reply: nat(4) })
    );
    assert_eq!(run_play(&f, &f, &a, &n, (&nat(0), 0), &[], bounds(3)), Err(GameError::RepliesExhausted { turn: 0 }));
    assert!(matches!(run_play(&f, &f, &a, &n, (&nat(5), 0), &[], bounds(3)), Err(GameError::BadInit { .. })));
}

#[test]
fn solver_finds_nimue_moves() {
    // Nimue must pick the set containing the secret's element
    let f = named_basic(&NamedBasic::Bit, 2).unwrap();
    let g = named_basic(&NamedBasic::Bit, 2).unwrap();
    let a = echo();
    let (kind, table) = solve_nimue(&f, &g, &a, bounds(3));
    assert_eq!(kind, LeafKind::Win);
    assert_eq!(verify_winning(&f, &g, &a, &table, bounds(3)), GameVerdict::Win);
    // declaring 0 cannot be rescued
    let (kind, _) = solve_nimue(&f, &g, &declare(0), bounds(3));
    assert_eq!(kind, LeafKind::Lose);
}

#[test]
fn t1_checks() {
    let f = FiniteOracle::t1_u(&[Some(2), Some(1), None]);
    assert_eq!(check_t1_reduction(&oracle_echo(), &f, &f, Budget::steps(100)), GameVerdict::Win);
    match check_t1_reduction(&halt_const(0), &FiniteOracle::t1_u(&[None, Some(1)]), &f, Budget::steps(100)) {
        GameVerdict::Lose(t) => assert_eq!(t.m, nat(1)),
        other => panic!("{other}"),
    }
    let nowhere = FiniteOracle::t1_u(&[None, None]);
    assert_eq!(check_t1_reduction(&halt_const(0), &nowhere, &f, Budget::steps(100)), GameVerdict::Win);
    // faulting on an undefined point is a loss
    let g = FiniteOracle::t1_u(&[None]);
    assert!(check_t1_reduction(&oracle_echo(), &FiniteOracle::t1_u(&[Some(0)]), &g, Budget::steps(100)).is_lose());
}

#[test]
fn degree_zero_checks() {
    let b = Budget::steps(100);
    let f = FiniteOracle::basic(Family::of(&[&[0], &[0, 1]]));
    assert_eq!(check_degree_zero(&f, &halt_const(0), b), GameVerdict::Win);
    let bit = named_basic(&NamedBasic::Bit, 2).unwrap();
    for k in 0..4 {
        assert!(check_degree_zero(&bit, &halt_const(k), b).is_lose());
    }
    let empty = FiniteOracle::t3(vec![Family::empty(), Family::empty()]);
    assert_eq!(check_degree_zero(&empty, &crate::vm::builtin::loop_program(), b), GameVerdict::Win);
}

#[test]
fn jg_fixtures() {
    let bit = named_basic(&NamedBasic::Bit, 2).unwrap();
    let u01: NatSet = [nat(0), nat(1)].into();
    let a = echo();
    let fu = FiniteOracle::basic(Family::new([u01.clone()]));
    let n = first_choice(&fu, &bit, &a, 3);
    assert_eq!(jg_membership(&a, &n, &u01, &bit, bounds(3)), GameVerdict::Win);
    // U = ∅: nothing can be declared
    for s in [echo(), declare(0), declare(1)] {
        let n = first_choice(&FiniteOracle::basic(Family::new([NatSet::new()])), &bit, &s, 3);
        assert!(!jg_membership(&s, &n, &NatSet::new(), &bit, bounds(3)).is_win());
    }
    // g = top: Nimue plays ∅
    let top = named_basic(&NamedBasic::Top, 2).unwrap();
    let n = first_choice(&FiniteOracle::basic(Family::new([NatSet::new()])), &top, &a, 3);
    assert_eq!(jg_membership(&a, &n, &NatSet::new(), &top, bounds(3)), GameVerdict::Win);
}

#[test]
fn jg_table_and_transpose() {
    let bit = named_basic(&NamedBasic::Bit, 2).unwrap();
    let strategies: Vec<(ArthurStrategy, NimueStrategy)> = [echo(), declare(0), declare(1)]
        .into_iter()
        .map(|a| {
            // Nimue always picks the set {0}
            let n = tabulate_nimue(&FiniteOracle::basic(Family::of(&[&[0]])), &bit, &a, &|_| Some(0), bounds(3));
            (a, n)
        })
        .collect();
    let j = jg_table(&strategies, &bit, 2, bounds(3));
    assert_eq!(j.len(), 4);
    // declare(0) works exactly for U ∋ 0
    for (u, ms) in &j {
        assert_eq!(ms.contains(&nat(1)), u.contains(&nat(0)));
        assert!(!ms.contains(&nat(2)) || u.contains(&nat(1)));
    }
    let t = checks::j_natural_table(&j);
    let universe = checks::subsets(2);
    assert_eq!(checks::j_from_natural(&t, &universe), j);
    for m in 0..3 {
        for u in &universe {
            assert_eq!(j[u].contains(&nat(m)), j_natural(&j, &nat(m)).contains(u));
        }
    }
}

#[test]
fn trace_json_round_trips() {
    let f = FiniteOracle::t3(vec![Family::of(&[&[0, 1]])]);
    let g = FiniteOracle::t3(vec![Family::of(&[&[0, 2]])]);
    let a = echo();
    let n = first_choice(&f, &g, &a, 3);
    let t = match verify_winning(&f, &g, &a, &n, bounds(3)) {
        GameVerdict::Lose(t) => *t,
        other => panic!("{other}"),
    };
    let doc = trace_to_json(&t);
    assert_eq!(doc["verdict"], "Lose");
    assert_eq!(trace_from_json(&doc).unwrap(), t);
    assert!(trace_to_text(&t).contains("wrong final value"));
}

fn small_t3() -> impl Strategy<Value = FiniteOracle> {
    let set = proptest::collection::btree_set(0u64..3, 0..3).prop_map(|s| s.into_iter().map(nat).collect::<NatSet>());
    let fam = proptest::collection::vec(set, 0..3).prop_map(Family::new);
    proptest::collection::vec(fam, 1..3).prop_map(FiniteOracle::t3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn losses_replay_and_bounds_are_monotone(f in small_t3(), g in small_t3(), pick in 0usize..3) {
        let a = echo();
        let n = tabulate_nimue(&f, &g, &a, &|v| Some(pick % v.options.len()), bounds(4));
        let small = verify_winning(&f, &g, &a, &n, GameBounds::new(1, Budget::steps(2_000)));
        let large = verify_winning(&f, &g, &a, &n, bounds(4));
        if small.is_win() {
            prop_assert!(large.is_win());
        }
        if let GameVerdict::Lose(t) = &small {
            prop_assert!(large.is_lose());
            let replay = run_play(&f, &g, &a, &n, (&t.m, t.secret_index), &t.merlin_replies(), GameBounds::new(1, Budget::steps(2_000))).unwrap();
            prop_assert_eq!(&replay, t.as_ref());
        }
        if let GameVerdict::Lose(t) = &large {
            let replay = run_play(&f, &g, &a, &n, (&t.m, t.secret_index), &t.merlin_replies(), bounds(4)).unwrap();
            prop_assert_eq!(replay.terminal.kind(), LeafKind::Lose);
        }
    }
}
