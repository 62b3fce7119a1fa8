//! The concrete processes, automata and languages of the workbench, each
//! addressable by an identifier such as `game:abc-or` or `lang:V`.

mod oracles;

pub use oracles::{language, oracle_language, LanguageKind, NamedLanguage, OracleWord, LANGUAGES};

use std::collections::BTreeSet;

use crate::automata::{classify_pda, complete_with_sink, Acceptance, Action, Coloring, Pda, State};
use crate::error::{Error, Result};
use crate::games::{GameInstance, Player, PushdownProcess};
use crate::sample::Shape;
use crate::triangle::TriangleChain;
use crate::words::{Symbol, ERASER};

fn st(name: &str) -> State {
    State::new(name)
}

fn sy(name: &str) -> Symbol {
    Symbol::new(name)
}

fn skip(q: &str) -> Action {
    Action::Skip(st(q))
}

fn pop(q: &str) -> Action {
    Action::Pop(st(q))
}

fn push(q: &str, x: &str) -> Action {
    Action::Push(st(q), sy(x))
}

fn machine(states: &[&str], input: &[&str], stack: &[&str], bottom: &str, initial: &str) -> Pda {
    Pda::new(
        states.iter().map(|q| st(q)),
        input.iter().map(|a| sy(a)),
        stack.iter().map(|x| sy(x)),
        sy(bottom),
        st(initial),
    )
}

fn add(p: &mut Pda, q: &str, input: &str, top: &str, action: Action) {
    p.rule(q, Some(&sy(input)), top, action);
}

/// Adds `q --input/top--> action` for every top in `tops`.
fn add_all(p: &mut Pda, q: &str, input: &str, tops: &[&str], action: Action) {
    for top in tops {
        add(p, q, input, top, action.clone());
    }
}

fn parity_with_accepting(p: &Pda, accepting: &[&str]) -> Acceptance {
    Acceptance::Parity(
        p.states()
            .iter()
            .map(|q| {
                (
                    q.clone(),
                    if accepting.contains(&q.as_str()) {
                        0
                    } else {
                        1
                    },
                )
            })
            .collect::<Coloring>(),
    )
}

/// A real-time recognizer of `{a^n b^n | n ≥ 1}` by final state, made total by a sink.
pub fn anbn_recognizer() -> (Pda, BTreeSet<State>) {
    let mut p = machine(
        &["p0", "pa", "pb", "pf", "z"],
        &["a", "b"],
        &["X", "Y"],
        "⊥2",
        "p0",
    );
    add(&mut p, "p0", "a", "⊥2", push("pa", "Y"));
    add_all(&mut p, "pa", "a", &["X", "Y"], push("pa", "X"));
    for q in ["pa", "pb"] {
        add(&mut p, q, "b", "X", pop("pb"));
        add(&mut p, q, "b", "Y", pop("pf"));
    }
    complete_with_sink(&mut p, &st("z"));
    (p, BTreeSet::from([st("pf")]))
}

/// The first chain automaton of the eraser game over `sigma`: it copies the
/// eraser evaluation of `⊥·u` onto its stack and then pushes every `#`.
/// Any input outside `⊥·(Σ ∪ {←})*·#^ω ∪ ⊥·(Σ ∪ {←})^ω` freezes the stack.
pub fn eraser_a1(sigma: &BTreeSet<Symbol>) -> Pda {
    let eraser = Symbol::eraser();
    let input = sigma
        .iter()
        .cloned()
        .chain([sy("⊥"), eraser.clone(), sy("#")]);
    let stack = sigma.iter().cloned().chain([sy("#")]);
    let mut p = Pda::new(
        [st("i"), st("s"), st("h"), st("z")],
        input,
        stack,
        sy("⊥1"),
        st("i"),
    );
    p.rule("i", Some(&sy("⊥")), "⊥1", skip("s"));
    let tops: Vec<Symbol> = sigma.iter().cloned().chain([sy("⊥1")]).collect();
    for top in &tops {
        for c in sigma {
            p.rule("s", Some(c), top, Action::Push(st("s"), c.clone()));
        }
        p.rule("s", Some(&sy("#")), top, push("h", "#"));
    }
    for c in sigma {
        p.rule("s", Some(&eraser), c, pop("s"));
    }
    p.rule("s", Some(&eraser), "⊥1", skip("s"));
    p.rule("h", Some(&sy("#")), "#", push("h", "#"));
    complete_with_sink(&mut p, &st("z"));
    p
}

/// The terminal automaton of the eraser game: it accepts `⊥1·L·#^ω` by
/// simulating `lrec` between `⊥1` and the first `#`, remembering whether a
/// final state occurred since the last letter.
pub fn eraser_a2(lrec: &Pda, finals: &BTreeSet<State>) -> Result<(Pda, Acceptance)> {
    if !classify_pda(lrec).deterministic {
        return Err(Error::NotDeterministic);
    }
    let flagged = |q: &State, f: bool| q.tagged(if f { "f" } else { "n" });
    let states = lrec
        .states()
        .iter()
        .flat_map(|q| [flagged(q, true), flagged(q, false)])
        .chain([st("start"), st("acc"), st("rej")]);
    let input = lrec
        .input_alphabet()
        .iter()
        .cloned()
        .chain([sy("⊥1"), sy("#")]);
    let mut p = Pda::new(
        states,
        input,
        lrec.stack_alphabet().iter().cloned(),
        lrec.bottom().clone(),
        st("start"),
    );
    let q0 = lrec.initial();
    p.rule(
        "start",
        Some(&sy("⊥1")),
        lrec.bottom(),
        Action::Skip(flagged(q0, finals.contains(q0))),
    );
    for (key, actions) in lrec.delta() {
        let Some(action) = actions.first() else {
            continue;
        };
        for f in [true, false] {
            let t = action.target();
            let reached = finals.contains(t) || (key.input.is_none() && f);
            let lifted = match action {
                Action::Skip(_) => Action::Skip(flagged(t, reached)),
                Action::Pop(_) => Action::Pop(flagged(t, reached)),
                Action::Push(_, x) => Action::Push(flagged(t, reached), x.clone()),
            };
            p.rule(flagged(&key.state, f), key.input.as_ref(), &key.top, lifted);
        }
    }
    for q in lrec.states() {
        for z in lrec.stack_alphabet() {
            if lrec.has_lambda(q, z) {
                continue;
            }
            p.rule(flagged(q, true), Some(&sy("#")), z, skip("acc"));
            p.rule(flagged(q, false), Some(&sy("#")), z, skip("rej"));
        }
    }
    for z in lrec.stack_alphabet() {
        p.rule("acc", Some(&sy("#")), z, skip("acc"));
    }
    complete_with_sink(&mut p, &st("rej"));
    let acc = parity_with_accepting(&p, &["acc"]);
    Ok((p, acc))
}

/// The process of the eraser game: from `q` it pushes `#` on any top other
/// than `#`, then pushes `#` forever.
pub fn eraser_process(sigma: &BTreeSet<Symbol>) -> PushdownProcess {
    let stack = sigma.iter().cloned().chain([Symbol::eraser(), sy("#")]);
    let mut p = PushdownProcess::new([st("p"), st("q")], stack, sy("⊥"));
    for c in sigma.iter().cloned().chain([sy("⊥"), Symbol::eraser()]) {
        p.rule("q", c, push("p", "#"));
    }
    p.rule("p", "#", push("p", "#"));
    p.set_owner("p", Player::Eve);
    p.set_owner("q", Player::Eve);
    p
}

fn chain_of(chain: Vec<Pda>, terminal: Pda, acceptance: Acceptance) -> TriangleChain {
    let real_time = chain
        .iter()
        .chain(std::iter::once(&terminal))
        .all(|p| classify_pda(p).real_time);
    TriangleChain::new(chain, terminal, acceptance, real_time)
}

/// The game whose winning slice at `q` is `{u | u^↞ ∈ L(lrec)}`.
pub fn build_game_eraser(lrec: &Pda, finals: &BTreeSet<State>) -> Result<GameInstance> {
    let sigma = lrec.input_alphabet().clone();
    let (a2, acc) = eraser_a2(lrec, finals)?;
    GameInstance::new(
        eraser_process(&sigma),
        chain_of(vec![eraser_a1(&sigma)], a2, acc),
    )
}

pub fn abc_process() -> PushdownProcess {
    let mut p = PushdownProcess::new(
        ["q", "q'", "q''", "p"].map(st),
        ["a", "b", "c", "#"].map(sy),
        sy("⊥"),
    );
    p.rule("q", "c", pop("q'"));
    p.rule("q", "c", skip("q''"));
    p.rule("q'", "c", pop("q'"));
    p.rule("q'", "b", push("p", "#"));
    p.rule("q''", "c", push("p", "#"));
    p.rule("p", "#", push("p", "#"));
    p.set_owner("q", Player::Eve);
    for q in ["q'", "q''", "p"] {
        p.set_owner(q, Player::Adam);
    }
    p
}

/// Pushes `a`s and `b`s, pops one `b` per `c`, and pushes `#` after a `b`
/// block or after a `c` block that emptied it; anything else freezes.
pub fn abc_a1() -> Pda {
    let mut p = machine(
        &["i", "a0", "a1", "b1", "c1", "h", "z"],
        &["⊥", "a", "b", "c", "#"],
        &["a", "b", "#"],
        "⊥1",
        "i",
    );
    add(&mut p, "i", "⊥", "⊥1", skip("a0"));
    add(&mut p, "a0", "a", "⊥1", push("a1", "a"));
    add(&mut p, "a1", "a", "a", push("a1", "a"));
    add(&mut p, "a1", "b", "a", push("b1", "b"));
    add(&mut p, "b1", "b", "b", push("b1", "b"));
    add(&mut p, "b1", "#", "b", push("h", "#"));
    add(&mut p, "b1", "c", "b", pop("c1"));
    add(&mut p, "c1", "c", "b", pop("c1"));
    add(&mut p, "c1", "#", "a", push("h", "#"));
    add(&mut p, "h", "#", "#", push("h", "#"));
    complete_with_sink(&mut p, &st("z"));
    p
}

/// Accepts `⊥1·a^n·b^n·#^ω` and `⊥1·a^n·#^ω` for n ≥ 1.
pub fn abc_a2() -> (Pda, Acceptance) {
    let mut p = machine(
        &["i", "a0", "a1", "b1", "acc", "r"],
        &["⊥1", "a", "b", "#"],
        &["X"],
        "⊥2",
        "i",
    );
    add(&mut p, "i", "⊥1", "⊥2", skip("a0"));
    add(&mut p, "a0", "a", "⊥2", push("a1", "X"));
    add(&mut p, "a1", "a", "X", push("a1", "X"));
    add(&mut p, "a1", "b", "X", pop("b1"));
    add(&mut p, "a1", "#", "X", skip("acc"));
    add(&mut p, "b1", "b", "X", pop("b1"));
    add(&mut p, "b1", "#", "⊥2", skip("acc"));
    add_all(&mut p, "acc", "#", &["⊥2", "X"], skip("acc"));
    complete_with_sink(&mut p, &st("r"));
    let acc = parity_with_accepting(&p, &["acc"]);
    (p, acc)
}

pub fn abc_chain() -> TriangleChain {
    let (a2, acc) = abc_a2();
    chain_of(vec![abc_a1()], a2, acc)
}

pub fn build_game_abc_or() -> GameInstance {
    GameInstance::new(abc_process(), abc_chain()).expect("the catalog game is valid")
}

/// The game of `build_game_abc_or` with the partition swapped.
pub fn build_game_abc_and() -> GameInstance {
    GameInstance::new(abc_process().swapped(), abc_chain()).expect("the catalog game is valid")
}

/// The deterministic parity automata for the ω-languages `L1` to `L4` over
/// `{a, b, c, d}`; `i` ranges over 1..=4.
pub fn abcd_automaton(i: usize) -> Result<(Pda, Acceptance)> {
    let input = ["a", "b", "c", "d"];
    let mut p = match i {
        1 => {
            let mut p = machine(&["A0", "A", "B", "C", "D", "z"], &input, &["X"], "⊥", "A0");
            add(&mut p, "A0", "a", "⊥", push("A", "X"));
            add(&mut p, "A", "a", "X", push("A", "X"));
            add(&mut p, "A", "b", "X", pop("B"));
            add(&mut p, "B", "b", "X", pop("B"));
            add(&mut p, "B", "c", "⊥", skip("C"));
            p
        }
        2 => {
            let mut p = machine(&["A0", "A", "B", "C", "D", "z"], &input, &["X"], "⊥", "A0");
            add(&mut p, "A0", "a", "⊥", skip("A"));
            add(&mut p, "A", "a", "⊥", skip("A"));
            add(&mut p, "A", "b", "⊥", push("B", "X"));
            add(&mut p, "B", "b", "X", push("B", "X"));
            add(&mut p, "B", "c", "X", pop("C"));
            add(&mut p, "C", "c", "X", pop("C"));
            add(&mut p, "C", "d", "⊥", skip("D"));
            p
        }
        3 => {
            let mut p = machine(
                &["A0", "A", "B", "Bx", "C", "D", "z"],
                &input,
                &["X"],
                "⊥",
                "A0",
            );
            add(&mut p, "A0", "a", "⊥", push("A", "X"));
            add(&mut p, "A", "a", "X", push("A", "X"));
            add(&mut p, "A", "b", "X", pop("B"));
            add(&mut p, "B", "b", "X", pop("B"));
            add(&mut p, "B", "b", "⊥", skip("Bx"));
            add(&mut p, "B", "c", "X", skip("C"));
            add(&mut p, "Bx", "b", "⊥", skip("Bx"));
            add(&mut p, "Bx", "c", "⊥", skip("C"));
            p
        }
        4 => {
            let mut p = machine(
                &["A0", "A", "B", "C", "Cx", "D", "z"],
                &input,
                &["X"],
                "⊥",
                "A0",
            );
            add(&mut p, "A0", "a", "⊥", skip("A"));
            add(&mut p, "A", "a", "⊥", skip("A"));
            add(&mut p, "A", "b", "⊥", push("B", "X"));
            add(&mut p, "B", "b", "X", push("B", "X"));
            add(&mut p, "B", "c", "X", pop("C"));
            add(&mut p, "C", "c", "X", pop("C"));
            add(&mut p, "C", "c", "⊥", skip("Cx"));
            add(&mut p, "C", "d", "X", skip("D"));
            add(&mut p, "Cx", "c", "⊥", skip("Cx"));
            add(&mut p, "Cx", "d", "⊥", skip("D"));
            p
        }
        _ => return Err(Error::UnknownName(format!("pda:L{i}"))),
    };
    // The `c` block and the `d` tail do not look at the stack.
    let tops = ["⊥", "X"];
    if i == 1 || i == 3 {
        add_all(&mut p, "C", "c", &tops, skip("C"));
        add_all(&mut p, "C", "d", &tops, skip("D"));
    }
    add_all(&mut p, "D", "d", &tops, skip("D"));
    complete_with_sink(&mut p, &st("z"));
    let acc = parity_with_accepting(&p, &["D"]);
    Ok((p, acc))
}

/// A deterministic catalog automaton with everything the test batteries need.
#[derive(Clone, Debug)]
pub struct CatalogAutomaton {
    pub id: String,
    pub pda: Pda,
    pub acceptance: Option<Acceptance>,
    /// The oracle language of the automaton, when it has one.
    pub language: Option<&'static str>,
    pub real_time: bool,
    /// Where structured sample inputs come from.
    pub shape: Shape,
}

fn shape(blocks: &[(&[&str], usize, usize)], cycle: &[&str]) -> Shape {
    Shape {
        blocks: blocks
            .iter()
            .map(|(letters, lo, hi)| (letters.iter().map(|a| sy(a)).collect(), *lo, *hi))
            .collect(),
        cycle: cycle.iter().map(|a| sy(a)).collect(),
    }
}

fn ab() -> BTreeSet<Symbol> {
    BTreeSet::from([sy("a"), sy("b")])
}

/// Every deterministic automaton of the catalog.
pub fn automata() -> Vec<CatalogAutomaton> {
    let (lrec, finals) = anbn_recognizer();
    let (e2, e2acc) = eraser_a2(&lrec, &finals).expect("the recognizer is deterministic");
    let (p2, p2acc) = abc_a2();
    let mut out = vec![
        CatalogAutomaton {
            id: "pda:anbn".into(),
            pda: lrec,
            acceptance: Some(Acceptance::FinalStates(finals)),
            language: Some("anbn"),
            real_time: true,
            shape: shape(&[(&["a"], 0, 5), (&["b"], 0, 5)], &["a", "b"]),
        },
        CatalogAutomaton {
            id: "game:eraser:anbn.a1".into(),
            pda: eraser_a1(&ab()),
            acceptance: None,
            language: None,
            real_time: true,
            shape: shape(
                &[(&["⊥"], 1, 1), (&["a", "b", ERASER], 0, 6), (&["#"], 0, 2)],
                &["#"],
            ),
        },
        CatalogAutomaton {
            id: "game:eraser:anbn.a2".into(),
            pda: e2,
            acceptance: Some(e2acc),
            language: Some("anbn#"),
            real_time: true,
            shape: shape(
                &[
                    (&["⊥1"], 1, 1),
                    (&["a"], 0, 4),
                    (&["b"], 0, 4),
                    (&["#"], 0, 2),
                ],
                &["#"],
            ),
        },
        CatalogAutomaton {
            id: "game:abc-or.a1".into(),
            pda: abc_a1(),
            acceptance: None,
            language: None,
            real_time: true,
            shape: shape(
                &[
                    (&["⊥"], 1, 1),
                    (&["a"], 0, 3),
                    (&["b"], 0, 3),
                    (&["c"], 0, 4),
                    (&["#"], 0, 2),
                ],
                &["#", "a", "b", "c"],
            ),
        },
        CatalogAutomaton {
            id: "game:abc-or.a2".into(),
            pda: p2,
            acceptance: Some(p2acc),
            language: Some("anbn|an#"),
            real_time: true,
            shape: shape(
                &[
                    (&["⊥1"], 1, 1),
                    (&["a"], 0, 4),
                    (&["b"], 0, 4),
                    (&["#"], 0, 2),
                ],
                &["#", "a", "b"],
            ),
        },
    ];
    for i in 1..=4 {
        let (pda, acc) = abcd_automaton(i).expect("1..=4 are catalog indices");
        out.push(CatalogAutomaton {
            id: format!("pda:L{i}"),
            pda,
            acceptance: Some(acc),
            language: Some(["L1", "L2", "L3", "L4"][i - 1]),
            real_time: true,
            shape: shape(
                &[
                    (&["a"], 0, 4),
                    (&["b"], 0, 4),
                    (&["c"], 0, 4),
                    (&["d"], 0, 2),
                ],
                &["d", "c"],
            ),
        });
    }
    out
}

/// Anything the catalog can hand out by identifier.
#[derive(Clone, Debug)]
pub enum Entry {
    Game(GameInstance),
    Chain(TriangleChain),
    Process(PushdownProcess),
    Automaton(Pda, Option<Acceptance>),
    Language(&'static NamedLanguage),
}

const GAMES: &[&str] = &["game:eraser:anbn", "game:abc-or", "game:abc-and"];

fn game(id: &str) -> Option<GameInstance> {
    match id {
        "game:eraser:anbn" => {
            let (lrec, finals) = anbn_recognizer();
            Some(build_game_eraser(&lrec, &finals).expect("the recognizer is deterministic"))
        }
        "game:abc-or" => Some(build_game_abc_or()),
        "game:abc-and" => Some(build_game_abc_and()),
        _ => None,
    }
}

/// Every identifier `lookup` resolves.
pub fn ids() -> Vec<String> {
    let mut out = Vec::new();
    for g in GAMES {
        out.push(g.to_string());
        for part in ["chain", "process", "a1", "a2"] {
            out.push(format!("{g}.{part}"));
        }
    }
    out.push("pda:anbn".into());
    out.extend((1..=4).map(|i| format!("pda:L{i}")));
    out.extend(LANGUAGES.iter().map(|l| format!("lang:{}", l.name)));
    out
}

pub fn lookup(id: &str) -> Result<Entry> {
    let unknown = || Error::UnknownName(id.to_string());
    if let Some(name) = id.strip_prefix("lang:") {
        return language(name).map(Entry::Language).map_err(|_| unknown());
    }
    if let Some(g) = game(id) {
        return Ok(Entry::Game(g));
    }
    if let Some((base, part)) = id.rsplit_once('.') {
        let g = game(base).ok_or_else(unknown)?;
        let c = g.condition;
        return match part {
            "chain" => Ok(Entry::Chain(c)),
            "process" => Ok(Entry::Process(g.process)),
            "a1" => Ok(Entry::Automaton(c.chain[0].clone(), None)),
            "a2" => Ok(Entry::Automaton(c.terminal, Some(c.acceptance))),
            _ => Err(unknown()),
        };
    }
    automata()
        .into_iter()
        .find(|a| a.id == id)
        .map(|a| Entry::Automaton(a.pda, a.acceptance))
        .ok_or_else(unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_finite, validate_acceptance, validate_pda, Configuration};
    use crate::games::successors;
    use crate::words::{word, FiniteWord};

    #[test]
    fn every_automaton_is_valid_and_classified() {
        for a in automata() {
            assert!(validate_pda(&a.pda).is_empty(), "{}", a.id);
            if let Some(acc) = &a.acceptance {
                assert!(validate_acceptance(&a.pda, acc).is_empty(), "{}", a.id);
            }
            let class = classify_pda(&a.pda);
            assert!(class.deterministic, "{}", a.id);
            assert_eq!(class.real_time, a.real_time, "{}", a.id);
        }
    }

    #[test]
    fn every_id_resolves() {
        for id in ids() {
            lookup(&id).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
        assert!(matches!(lookup("game:nope"), Err(Error::UnknownName(_))));
        assert!(matches!(
            lookup("game:abc-or.a3"),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn recognizer_accepts_anbn() {
        let (p, f) = anbn_recognizer();
        assert!(accepts_finite(&p, &f, &word("aabb")));
        assert!(!accepts_finite(&p, &f, &word("aab")));
        assert!(!accepts_finite(&p, &f, &word("abab")));
        assert!(!accepts_finite(&p, &f, &word("")));
    }

    #[test]
    fn eraser_process_alphabet() {
        let g = lookup("game:eraser:anbn.process").unwrap();
        let Entry::Process(p) = g else { panic!() };
        let expected: BTreeSet<Symbol> = ["a", "b", "⊥", ERASER, "#"].map(sy).into();
        assert_eq!(p.stack_alphabet(), &expected);
        let c = Configuration::new("q", FiniteWord::new(vec![sy("⊥")]).concat(&word("ab")));
        assert_eq!(
            successors(&p, &c),
            vec![Configuration::new(
                "p",
                FiniteWord::new(vec![sy("⊥")]).concat(&word("ab#"))
            )]
        );
    }

    #[test]
    fn abc_partition_and_rules() {
        let g_or = build_game_abc_or();
        let g_and = build_game_abc_and();
        assert_eq!(g_or.process.owner(&st("q")), Player::Eve);
        assert_eq!(g_or.process.owner(&st("q'")), Player::Adam);
        assert_eq!(g_and.process.owner(&st("q")), Player::Adam);
        assert_eq!(g_or.process.delta(), g_and.process.delta());
        assert_eq!(g_or.condition, g_and.condition);
        let rules = |q: &str, z: &str| {
            g_or.process
                .actions(&st(q), &sy(z))
                .cloned()
                .collect::<Vec<_>>()
        };
        assert_eq!(rules("q'", "b"), vec![push("p", "#")]);
        assert_eq!(rules("p", "#"), vec![push("p", "#")]);
        let total: usize = g_or.process.delta().values().map(BTreeSet::len).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn eraser_a2_rejects_nondeterministic_input() {
        let (mut p, f) = anbn_recognizer();
        p.rule("p0", Some(&sy("a")), "⊥2", skip("z"));
        assert!(matches!(eraser_a2(&p, &f), Err(Error::NotDeterministic)));
    }
}
