use std::collections::BTreeSet;

use omega_pushdown::automata::{Action, Configuration, State};
use omega_pushdown::catalog::{self, Entry};
use omega_pushdown::games::{
    eve_wins_play, solve_bounded, successors, winning_set_slice, words_up_to, Bounds, CycleKind,
    DeadEnd, GameInstance, PlayLasso, Player, Solver, Verdict,
};
use omega_pushdown::omega::RunLimits;
use omega_pushdown::words::{eraser_evaluate, lasso, word, FiniteWord, Symbol};
use proptest::prelude::*;

fn sy(s: &str) -> Symbol {
    Symbol::new(s)
}

fn st(s: &str) -> State {
    State::new(s)
}

fn config(q: &str, u: &str) -> Configuration {
    Configuration::new(q, FiniteWord::new(vec![sy("⊥")]).concat(&word(u)))
}

fn eraser_game() -> GameInstance {
    match catalog::lookup("game:eraser:anbn").unwrap() {
        Entry::Game(g) => g,
        _ => unreachable!(),
    }
}

fn push(q: &str, z: &str) -> Action {
    Action::Push(st(q), sy(z))
}

#[test]
fn successor_examples() {
    let g = eraser_game();
    assert_eq!(
        successors(&g.process, &config("q", "a b")),
        vec![config("p", "a b #")]
    );

    let p = catalog::abc_process();
    let next: BTreeSet<Configuration> = successors(&p, &config("q", "a b c")).into_iter().collect();
    assert_eq!(
        next,
        BTreeSet::from([config("q'", "a b"), config("q''", "a b c")])
    );
    assert!(successors(&p, &config("q", "a")).is_empty());
}

#[test]
fn play_examples() {
    let g = eraser_game();
    let pl = PlayLasso {
        start: config("q", "a b"),
        prefix_moves: vec![push("p", "#")],
        cycle_moves: vec![push("p", "#")],
        kind: CycleKind::Ascending(word("#")),
    };
    assert!(pl.is_consistent(&g.process));
    assert!(eve_wins_play(&pl, &g.condition).unwrap());

    let g_or = catalog::build_game_abc_or();
    let pl = PlayLasso {
        start: config("q", "a b c c"),
        prefix_moves: vec![Action::Pop(st("q'")), Action::Pop(st("q'")), push("p", "#")],
        cycle_moves: vec![push("p", "#")],
        kind: CycleKind::Ascending(word("#")),
    };
    assert!(pl.is_consistent(&g_or.process));
    assert!(pl.stack_limit().unwrap().same_word(&lasso("⊥ a b ( # )")));

    let stationary = PlayLasso {
        start: config("q", "a b"),
        prefix_moves: vec![],
        cycle_moves: vec![Action::Skip(st("q"))],
        kind: CycleKind::Stationary,
    };
    assert!(!eve_wins_play(&stationary, &g.condition).unwrap());
}

#[test]
fn solve_examples() {
    let b = Bounds::for_width(6);
    assert_eq!(
        solve_bounded(&catalog::build_game_abc_or(), &config("q", "a b c"), &b).unwrap(),
        Verdict::EveWins
    );
    assert_eq!(
        solve_bounded(&catalog::build_game_abc_and(), &config("q", "a a b c"), &b).unwrap(),
        Verdict::AdamWins
    );
    let zero = Bounds { depth: 0, ..b };
    assert!(matches!(
        solve_bounded(&catalog::build_game_abc_or(), &config("q", "a b c"), &zero).unwrap(),
        Verdict::Unknown(_)
    ));
}

#[test]
fn dead_end_modes() {
    let g = catalog::build_game_abc_or();
    let b = Bounds::for_width(2);
    // Eve is stuck at q on top a.
    assert_eq!(
        solve_bounded(&g, &config("q", "a"), &b).unwrap(),
        Verdict::AdamWins
    );
    let g_and = catalog::build_game_abc_and();
    assert_eq!(
        solve_bounded(&g_and, &config("q", "a"), &b).unwrap(),
        Verdict::EveWins
    );
    let literal = Bounds {
        dead_end: DeadEnd::EveLosesFinite,
        ..b
    };
    assert_eq!(
        solve_bounded(&g_and, &config("q", "a"), &literal).unwrap(),
        Verdict::AdamWins
    );
}

#[test]
fn eraser_slice_examples() {
    let g = eraser_game();
    let letters = [sy("a"), sy("b"), Symbol::eraser()];
    let words = words_up_to(&letters, 6);
    let slice = Solver::new(&g, RunLimits::default())
        .unwrap()
        .slice(&st("q"), &words, &Bounds::for_width(6))
        .unwrap();
    for u in ["a b", "a a b b", "a b ← ← a b"] {
        assert!(slice.contains(&word(u)), "{u}");
    }
    assert!(!slice.contains(&FiniteWord::empty()));
    let want: BTreeSet<FiniteWord> = words
        .into_iter()
        .filter(|u| catalog::oracle_language("anbn", &eraser_evaluate(u)).unwrap())
        .collect();
    assert_eq!(slice, want);
}

#[test]
fn and_slice_inside_abc() {
    let g = catalog::build_game_abc_and();
    let slice = winning_set_slice(&g, &st("q"), 6).unwrap();
    let abc: BTreeSet<FiniteWord> = slice.into_iter().filter(is_abc).collect();
    assert_eq!(abc, BTreeSet::from([word("a b c"), word("a a b b c c")]));
}

fn is_abc(u: &FiniteWord) -> bool {
    let s: String = u.letters().iter().map(|x| x.as_str()).collect();
    let t = s.trim_start_matches('a');
    let t2 = t.trim_start_matches('b');
    let t3 = t2.trim_start_matches('c');
    t.len() < s.len() && t2.len() < t.len() && t3.len() < t2.len() && t3.is_empty()
}

#[test]
fn eraser_partition_is_irrelevant() {
    let g = eraser_game();
    let mut swapped = g.process.clone();
    swapped.set_owner("p", Player::Adam);
    swapped.set_owner("q", Player::Adam);
    let h = GameInstance::new(swapped, g.condition.clone()).unwrap();
    let letters = [sy("a"), sy("b"), Symbol::eraser()];
    let words = words_up_to(&letters, 4);
    let b = Bounds::for_width(4);
    let lim = RunLimits::default();
    assert_eq!(
        Solver::new(&g, lim)
            .unwrap()
            .slice(&st("q"), &words, &b)
            .unwrap(),
        Solver::new(&h, lim)
            .unwrap()
            .slice(&st("q"), &words, &b)
            .unwrap()
    );
}

fn letter() -> impl Strategy<Value = Symbol> {
    prop_oneof![Just(sy("a")), Just(sy("b")), Just(sy("c"))]
}

fn eraser_letter() -> impl Strategy<Value = Symbol> {
    prop_oneof![Just(sy("a")), Just(sy("b")), Just(Symbol::eraser())]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    /// The solver decides every catalog start configuration within default bounds.
    #[test]
    fn catalog_games_are_determined(u in prop::collection::vec(letter(), 0..6)) {
        let u = FiniteWord::new(u);
        let start = Configuration::new("q", FiniteWord::new(vec![sy("⊥")]).concat(&u));
        let b = Bounds::for_width(u.len());
        let v_or = solve_bounded(&catalog::build_game_abc_or(), &start, &b).unwrap();
        let v_and = solve_bounded(&catalog::build_game_abc_and(), &start, &b).unwrap();
        prop_assert!(!matches!(v_or, Verdict::Unknown(_)));
        prop_assert!(!matches!(v_and, Verdict::Unknown(_)));
    }

    /// A pumping play replays to its entry with the net word appended twice.
    #[test]
    fn ascending_plays_replay(u in prop::collection::vec(eraser_letter(), 0..5), k in 1usize..4) {
        let g = eraser_game();
        let start = Configuration::new("q", FiniteWord::new(vec![sy("⊥")]).concat(&FiniteWord::new(u)));
        let net = FiniteWord::new(vec![sy("#"); k]);
        let pl = PlayLasso {
            start,
            prefix_moves: vec![push("p", "#")],
            cycle_moves: vec![push("p", "#"); k],
            kind: CycleKind::Ascending(net.clone()),
        };
        prop_assert!(pl.is_consistent(&g.process));
        let entry = pl.entry();
        let twice = pl.cycle_moves.iter().chain(&pl.cycle_moves).fold(entry.clone(), |c, a| c.apply(a));
        prop_assert_eq!(twice.state, entry.state);
        prop_assert_eq!(twice.stack, entry.stack.concat(&net).concat(&net));
    }
}
