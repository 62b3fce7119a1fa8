use std::collections::BTreeSet;

use omega_pushdown::automata::{classify_pda, Acceptance, Coloring, Pda, State};
use omega_pushdown::catalog::{self, Entry};
use omega_pushdown::omega::{analyze_run, RunLimits};
use omega_pushdown::sample::LassoSampler;
use omega_pushdown::triangle::{
    chain_validate, complement_chain, decompose_unique, lift_accepting, pad_transform,
    seg_member_l, seg_member_u, seg_report, triangle_member, TriangleChain,
};
use omega_pushdown::words::{
    eraser_evaluate, lasso, project_erase, word, FiniteWord, LassoWord, Symbol, WordLimit,
};

fn sy(s: &str) -> Symbol {
    Symbol::new(s)
}

fn st(s: &str) -> State {
    State::new(s)
}

fn eraser_a1() -> Pda {
    catalog::eraser_a1(&BTreeSet::from([sy("a"), sy("b")]))
}

fn eraser_chain() -> TriangleChain {
    match catalog::lookup("game:eraser:anbn.chain").unwrap() {
        Entry::Chain(c) => c,
        _ => unreachable!(),
    }
}

fn l(sigma: &str) -> bool {
    seg_member_l(
        &eraser_a1(),
        &st("s"),
        &st("s"),
        &sy("a"),
        &sy("b"),
        &word(sigma),
    )
    .unwrap()
}

fn u(sigma: &str) -> bool {
    seg_member_u(
        &eraser_a1(),
        &st("s"),
        &st("s"),
        &sy("a"),
        &sy("b"),
        &word(sigma),
    )
    .unwrap()
}

/// Accepts every lasso over `letters`.
fn accept_all(letters: &[&str]) -> (Pda, Acceptance) {
    let mut p = Pda::new(
        [st("t")],
        letters.iter().map(|a| sy(a)),
        [],
        sy("⊥9"),
        st("t"),
    );
    for a in letters {
        p.rule(
            st("t"),
            Some(&sy(a)),
            sy("⊥9"),
            omega_pushdown::automata::Action::Skip(st("t")),
        );
    }
    let col: Coloring = [(st("t"), 0)].into();
    (p, Acceptance::Parity(col))
}

#[test]
fn chain_validation() {
    let c = eraser_chain();
    assert!(chain_validate(&c).is_empty());
    assert!(c.real_time);
    let (t, acc) = accept_all(&["x"]);
    let bad = TriangleChain::new(vec![eraser_a1()], t, acc, true);
    assert!(!chain_validate(&bad).is_empty());
}

#[test]
fn membership_examples() {
    let (t, acc) = accept_all(&["a", "b"]);
    let empty = TriangleChain::new(vec![], t, acc, true);
    assert!(triangle_member(&empty, &lasso("a b ( b a )")).unwrap());

    assert!(triangle_member(&eraser_chain(), &lasso("⊥ a b ← ← a b ( # )")).unwrap());
    let c = catalog::abc_chain();
    assert!(triangle_member(&c, &lasso("⊥ a a b b b c c c ( # )")).unwrap());
    assert!(!triangle_member(&c, &lasso("⊥ a a b b b c c c c ( # )")).unwrap());
}

#[test]
fn membership_follows_the_erased_language() {
    let c = eraser_chain();
    for n in 0..=5 {
        let letters: Vec<Symbol> = ["a", "b", "←"].iter().map(|a| sy(a)).collect();
        for u in omega_pushdown::games::words_up_to(&letters, n) {
            let spoke = FiniteWord::new(vec![sy("⊥")]).concat(&u);
            let w = LassoWord::new(spoke, word("#")).unwrap();
            let e = eraser_evaluate(&u);
            let want = catalog::oracle_language("anbn", &e).unwrap();
            assert_eq!(triangle_member(&c, &w).unwrap(), want, "{w}");
        }
    }
}

#[test]
fn segment_examples() {
    assert!(l("b") && u("b"));
    assert!(l("b←b") && u("b←b"));
    assert!(!l("←") && !u("←"));
    assert!(l("bb←") && !u("bb←"));
}

#[test]
fn segment_inclusion_on_all_short_words() {
    let p = eraser_a1();
    let letters: Vec<Symbol> = p.input_alphabet().iter().cloned().collect();
    let words = omega_pushdown::games::words_up_to(&letters, 4);
    for q in ["s", "h"] {
        for a in p.stack_alphabet() {
            for b in p.stack_alphabet().iter().filter(|b| *b != p.bottom()) {
                for sigma in &words {
                    let r = seg_report(&p, &st(q), &st(q), a, b, sigma).unwrap();
                    assert!(!r.in_u || r.in_l, "{q} {a} {b} {sigma}");
                    assert!(!r.c_decisive || (r.in_l && r.condition_b && !r.condition_c));
                }
            }
        }
    }
}

#[test]
fn decomposition_examples() {
    let p = eraser_a1();
    let lim = RunLimits::default();
    let d = decompose_unique(&p, &lasso("⊥ a b ( # )"), 3, &lim).unwrap();
    assert_eq!(d.segments.len(), 3);
    assert!(d.unique() && d.all_segments_in_u());
    let joined = d
        .segments
        .iter()
        .fold(FiniteWord::empty(), |acc, s| acc.concat(&s.word));
    assert_eq!(joined, d.prefix);

    let d = decompose_unique(&p, &lasso("⊥ a b ← ← a b ( # )"), 2, &lim).unwrap();
    assert!(d.unique());
    let erased: usize = d.segments.iter().map(|s| s.word.len()).sum();
    assert_eq!(erased, d.prefix.len());
    assert!(d.segments[0]
        .word
        .letters()
        .iter()
        .any(|s| s.as_str() == "←"));

    assert!(decompose_unique(&p, &lasso("⊥ a ⊥ ( # )"), 2, &lim).is_err());
}

#[test]
fn decomposition_segments_map_stack_prefixes() {
    let p = eraser_a1();
    let w = lasso("⊥ a b ← a a ( # )");
    let run = analyze_run(&p, &w).unwrap();
    let WordLimit::Infinite(limit) = run.stack_limit else {
        panic!("expected an infinite limit")
    };
    let d = decompose_unique(&p, &w, 4, &RunLimits::default()).unwrap();
    for (j, s) in d.segments.iter().enumerate() {
        assert_eq!(&s.a, limit.letter(j));
        assert_eq!(&s.b, limit.letter(j + 1));
    }
}

#[test]
fn pad_transform_examples() {
    let a1 = eraser_a1();
    let padded = pad_transform(&a1).unwrap();
    let class = classify_pda(&padded.pda);
    assert!(class.deterministic && !class.real_time);

    let w = lasso("⊥ a ⊥ ( # )");
    assert!(!analyze_run(&a1, &w).unwrap().strictly_unbounded);
    let run = analyze_run(&padded.pda, &w).unwrap();
    let WordLimit::Infinite(limit) = &run.stack_limit else {
        panic!("expected an infinite limit")
    };
    assert_eq!(
        limit.normalize().cycle(),
        &FiniteWord::new(vec![padded.copies[&sy("a")].clone()])
    );
    assert!(project_erase(limit, &padded.drop).same_word(&WordLimit::Finite(word("⊥1 a"))));

    let w = lasso("⊥ a b ( # )");
    let orig = analyze_run(&a1, &w).unwrap().stack_limit;
    let padded_limit = analyze_run(&padded.pda, &w).unwrap().stack_limit;
    assert!(padded_limit.erase(&padded.drop).same_word(&orig));
}

#[test]
fn lift_accepting_examples() {
    let c = eraser_chain();
    let drop: BTreeSet<Symbol> = [sy("#'"), sy("a'"), sy("b'"), sy("⊥1'")].into();
    let (lifted, acc) = lift_accepting(&c.terminal, &c.acceptance, &drop).unwrap();
    let member = |w: &str| omega_pushdown::omega::accepts_omega(&lifted, &acc, &lasso(w)).unwrap();
    assert!(member("⊥1 a b ( b' )"));
    assert!(member("⊥1 a' a b b' ( # #' )"));
    assert!(!member("⊥1 a a b ( # #' )"));
}

#[test]
fn complement_examples() {
    let (t, acc) = accept_all(&["a", "b"]);
    let empty = TriangleChain::new(vec![], t, acc, true);
    let comp = complement_chain(&empty).unwrap();
    assert!(!triangle_member(&comp, &lasso("a ( b )")).unwrap());

    let comp = complement_chain(&eraser_chain()).unwrap();
    assert!(triangle_member(&comp, &lasso("⊥ b a ( # )")).unwrap());
    assert!(!triangle_member(&comp, &lasso("⊥ a b ( # )")).unwrap());
}

#[test]
fn complement_is_an_involution_on_samples() {
    for c in [eraser_chain(), catalog::abc_chain()] {
        let twice = complement_chain(&complement_chain(&c).unwrap()).unwrap();
        let alphabet: Vec<Symbol> = c.head().input_alphabet().iter().cloned().collect();
        for w in LassoSampler::new(7, alphabet, None, 10).take(150) {
            assert_eq!(
                triangle_member(&twice, &w).unwrap(),
                triangle_member(&c, &w).unwrap(),
                "{w}"
            );
        }
    }
}
