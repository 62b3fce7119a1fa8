use std::collections::{BTreeSet, VecDeque};

use omega_pushdown::automata::{
    accepts_finite, classify_pda, step_config, validate_pda, Acceptance, Configuration,
    DeterministicPda, Pda, State,
};
use omega_pushdown::catalog;
use omega_pushdown::omega::{analyze_run_colored, RunLimits};
use omega_pushdown::words::{
    eraser_evaluate, prefix_of, project_erase, FiniteWord, LassoWord, Symbol, WordLimit,
};
use proptest::prelude::*;

fn sy(s: &str) -> Symbol {
    Symbol::new(s)
}

fn over(
    letters: &'static [&'static str],
    len: std::ops::Range<usize>,
) -> impl Strategy<Value = FiniteWord> {
    prop::collection::vec(prop::sample::select(letters), len)
        .prop_map(|v| FiniteWord::new(v.into_iter().map(sy).collect()))
}

fn lasso_over(letters: &'static [&'static str]) -> impl Strategy<Value = LassoWord> {
    (over(letters, 0..6), over(letters, 1..5)).prop_map(|(s, c)| LassoWord::new(s, c).unwrap())
}

/// A second eraser evaluator: a stack of letters, one pop per eraser.
fn erase_by_stack(u: &FiniteWord) -> FiniteWord {
    let mut out = Vec::new();
    for s in u.letters() {
        if *s == Symbol::eraser() {
            out.pop();
        } else {
            out.push(s.clone());
        }
    }
    FiniteWord::new(out)
}

/// Breadth-first acceptance with a bound on stack height and a visited set.
fn bfs_accepts(p: &Pda, finals: &BTreeSet<State>, x: &FiniteWord, max_height: usize) -> bool {
    let start = (p.initial_configuration(), 0usize);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((c, i)) = queue.pop_front() {
        if i == x.len() && finals.contains(&c.state) {
            return true;
        }
        let mut next: Vec<(Configuration, usize)> = step_config(p, &c, None)
            .into_iter()
            .map(|d| (d, i))
            .collect();
        if i < x.len() {
            next.extend(
                step_config(p, &c, Some(&x.letters()[i]))
                    .into_iter()
                    .map(|d| (d, i + 1)),
            );
        }
        for n in next {
            if n.0.height() <= max_height && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    false
}

const AB: &[&str] = &["a", "b"];
const ABE: &[&str] = &["a", "b", "←"];
const PRIMED: &[&str] = &["a", "b", "a'", "b'"];

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eraser_is_identity_without_erasers(u in over(AB, 0..10)) {
        prop_assert_eq!(eraser_evaluate(&u), u);
    }

    #[test]
    fn eraser_agrees_with_a_stack_evaluator(u in over(ABE, 0..12)) {
        let e = eraser_evaluate(&u);
        prop_assert!(e.len() <= u.len());
        prop_assert_eq!(e, erase_by_stack(&u));
    }

    #[test]
    fn projection_is_a_morphism(u in over(PRIMED, 0..8), v in over(PRIMED, 0..8)) {
        let drop: BTreeSet<Symbol> = [sy("a'"), sy("b'")].into();
        prop_assert_eq!(project_erase(&u, &BTreeSet::new()), WordLimit::Finite(u.clone()));
        prop_assert_eq!(u.concat(&v).erase(&drop), u.erase(&drop).concat(&v.erase(&drop)));
    }

    #[test]
    fn normalization_is_canonical(x in lasso_over(AB), y in lasso_over(AB)) {
        let nx = x.normalize();
        prop_assert_eq!(nx.normalize(), nx.clone());
        prop_assert!(nx.cycle().len() <= x.cycle().len() && nx.spoke().len() <= x.spoke().len());
        let bound = x.spoke().len().max(y.spoke().len()) + x.cycle().len() + y.cycle().len();
        let agree = x.prefix(bound) == y.prefix(bound);
        prop_assert_eq!(nx == y.normalize(), agree);
        prop_assert_eq!(x.same_word(&y), agree);
    }

    #[test]
    fn prefix_order(u in over(AB, 0..5), v in over(AB, 0..5), w in over(AB, 0..5)) {
        prop_assert!(prefix_of(&u, &u));
        let uv = u.concat(&v);
        let uvw = uv.concat(&w);
        prop_assert!(prefix_of(&u, &uv) && prefix_of(&uv, &uvw) && prefix_of(&u, &uvw));
    }

    #[test]
    fn deterministic_steps_keep_the_bottom(u in over(&["⊥", "a", "b", "←", "#"], 0..10)) {
        let p = catalog::eraser_a1(&[sy("a"), sy("b")].into());
        let mut c = p.initial_configuration();
        for s in u.letters() {
            let lam = step_config(&p, &c, None);
            let next = step_config(&p, &c, Some(s));
            prop_assert!(lam.is_empty() || next.is_empty());
            prop_assert!(lam.len() <= 1 && next.len() <= 1);
            match next.into_iter().next() {
                Some(n) => c = n,
                None => break,
            }
            prop_assert!(c.is_well_formed(p.bottom()));
        }
    }

    #[test]
    fn run_analysis_invariants(w in lasso_over(&["a", "b", "c", "d"]), i in 1usize..=4) {
        let (p, acc) = catalog::abcd_automaton(i).unwrap();
        let Acceptance::Parity(col) = &acc else { unreachable!() };
        let run = analyze_run_colored(&p, &w, col).unwrap();
        let complete = run.completeness == omega_pushdown::omega::Completeness::Complete;
        prop_assert_eq!(run.strictly_unbounded, run.stack_limit.is_infinite());
        prop_assert_eq!(run.strictly_unbounded, complete && !run.pumped_word.is_empty());
        if complete {
            prop_assert_eq!(run.min_inf_color, run.inf_states.iter().map(|q| col[q]).min());
        } else {
            prop_assert!(run.inf_states.is_empty() && run.min_inf_color.is_none());
        }
    }
}

#[test]
fn catalog_automata_are_valid_and_classified() {
    for a in catalog::automata() {
        assert!(validate_pda(&a.pda).is_empty(), "{}", a.id);
        let c = classify_pda(&a.pda);
        assert!(c.deterministic, "{}", a.id);
        assert_eq!(c.real_time, a.real_time, "{}", a.id);
    }
}

#[test]
fn finite_acceptance_matches_search_and_oracle() {
    let (p, finals) = catalog::anbn_recognizer();
    let letters = [sy("a"), sy("b")];
    for u in omega_pushdown::games::words_up_to(&letters, 8) {
        let got = accepts_finite(&p, &finals, &u);
        assert_eq!(got, bfs_accepts(&p, &finals, &u, u.len() + 4), "{u}");
        assert_eq!(got, catalog::oracle_language("anbn", &u).unwrap(), "{u}");
    }
}

#[test]
fn omega_automata_match_their_oracles() {
    let letters: Vec<Symbol> = ["a", "b", "c", "d"].map(sy).into();
    let spokes = omega_pushdown::games::words_up_to(&letters, 7);
    let cycles = omega_pushdown::games::words_up_to(&letters, 2);
    let limits = RunLimits::default();
    for i in 1..=4 {
        let (p, acc) = catalog::abcd_automaton(i).unwrap();
        let m = DeterministicPda::compile(&p).unwrap();
        let name = format!("L{i}");
        for s in &spokes {
            for c in cycles
                .iter()
                .filter(|c| !c.is_empty() && s.len() + c.len() <= 8)
            {
                let w = LassoWord::new(s.clone(), c.clone()).unwrap();
                let got = m.accepts_omega(&acc, &w, &limits).unwrap();
                assert_eq!(
                    got,
                    catalog::oracle_language(&name, &w).unwrap(),
                    "{name} {w}"
                );
            }
        }
    }
}
