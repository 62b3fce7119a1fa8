//! Complementation of triangle chains: padding the head automaton so its stack
//! is always strictly unbounded, and lifting the rest of the chain to the
//! padded alphabet.

use std::collections::{BTreeMap, BTreeSet};

use super::{chain_validate, TriangleChain};
use crate::automata::{Acceptance, Action, Coloring, DeterministicPda, Pda, State};
use crate::error::{Error, Result};
use crate::omega::{check_continuity, Completeness, Continuity, RunLimits};
use crate::words::{LassoWord, Symbol, WordLimit};

/// Muller conditions are lifted by enumerating subsets; larger automata are refused.
const MULLER_STATE_CAP: usize = 12;

/// Primed copies of `gamma` with the smallest uniform number of apostrophes
/// that keeps them clear of `gamma` and `avoid`.
pub fn prime_copies(
    gamma: &BTreeSet<Symbol>,
    avoid: &BTreeSet<Symbol>,
) -> BTreeMap<Symbol, Symbol> {
    (1..)
        .map(|k| {
            gamma
                .iter()
                .map(|g| (g.clone(), g.primed(k)))
                .collect::<BTreeMap<_, _>>()
        })
        .find(|copies| {
            copies
                .values()
                .all(|c| !gamma.contains(c) && !avoid.contains(c))
        })
        .expect("some number of apostrophes is fresh")
}

fn fresh_symbol(base: &str, taken: &BTreeSet<Symbol>) -> Symbol {
    (0..)
        .map(|k| Symbol::new(base).primed(k))
        .find(|s| !taken.contains(s))
        .expect("some number of apostrophes is fresh")
}

fn fresh_state(base: &str, taken: &BTreeSet<State>) -> State {
    (0..)
        .map(|k| State::new(&format!("{base}{}", "'".repeat(k))))
        .find(|q| !taken.contains(q))
        .expect("some number of apostrophes is fresh")
}

fn retarget(action: &Action, target: State) -> Action {
    match action {
        Action::Skip(_) => Action::Skip(target),
        Action::Pop(_) => Action::Pop(target),
        Action::Push(_, s) => Action::Push(target, s.clone()),
    }
}

fn require_deterministic(p: &Pda) -> Result<()> {
    DeterministicPda::compile(p).map(|_| ())
}

/// A padded automaton and the copy symbols to erase from its stack limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padded {
    pub pda: Pda,
    /// Original stack symbol to its copy.
    pub copies: BTreeMap<Symbol, Symbol>,
    pub drop: BTreeSet<Symbol>,
}

/// Simulates `a1` while pushing a copy of the current top before every
/// simulated step; a simulated pop removes the whole `Z·Z'^n` block.
pub fn pad_transform(a1: &Pda) -> Result<Padded> {
    require_deterministic(a1)?;
    let gamma = a1.stack_alphabet().clone();
    let copies = prime_copies(&gamma, a1.input_alphabet());
    let drop: BTreeSet<Symbol> = copies.values().cloned().collect();
    let base: BTreeMap<&Symbol, &Symbol> = copies
        .iter()
        .map(|(g, c)| (c, g))
        .chain(gamma.iter().map(|g| (g, g)))
        .collect();
    let pad = |q: &State| q.tagged("pad");
    let sim = |q: &State| q.tagged("sim");
    let pop = |q: &State| q.tagged("pop");
    let states = a1.states().iter().flat_map(|q| [pad(q), sim(q), pop(q)]);
    let mut out = Pda::new(
        states,
        a1.input_alphabet().iter().cloned(),
        gamma.iter().chain(&drop).cloned(),
        a1.bottom().clone(),
        pad(a1.initial()),
    );
    for q in a1.states() {
        for (x, g) in &base {
            out.rule(pad(q), None, *x, Action::Push(sim(q), copies[*g].clone()));
        }
        for c in &drop {
            out.rule(pop(q), None, c, Action::Pop(pop(q)));
        }
        for z in gamma.iter().filter(|z| *z != a1.bottom()) {
            out.rule(pop(q), None, z, Action::Pop(pad(q)));
        }
    }
    for (key, actions) in a1.delta() {
        for action in actions {
            let t = action.target();
            let lifted = match action {
                Action::Skip(_) => Action::Skip(pad(t)),
                Action::Push(_, s) => Action::Push(pad(t), s.clone()),
                Action::Pop(_) => Action::Pop(pop(t)),
            };
            out.rule(
                sim(&key.state),
                key.input.as_ref(),
                &copies[&key.top],
                lifted,
            );
        }
    }
    Ok(Padded {
        pda: out,
        copies,
        drop,
    })
}

fn to_parity(p: &Pda, acc: &Acceptance) -> Option<Coloring> {
    match acc {
        Acceptance::Parity(col) => Some(col.clone()),
        Acceptance::Buchi(f) => Some(
            p.states()
                .iter()
                .map(|q| (q.clone(), if f.contains(q) { 0 } else { 1 }))
                .collect(),
        ),
        _ => None,
    }
}

fn subsets<T: Clone + Ord>(items: &[T]) -> impl Iterator<Item = BTreeSet<T>> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| x.clone())
            .collect()
    })
}

/// The acceptor over `input ∪ drop` accepting `α` iff erasing `drop` from `α`
/// leaves a finite word or an ω-word accepted by `(a3, acc)`.
pub fn lift_accepting(
    a3: &Pda,
    acc: &Acceptance,
    drop: &BTreeSet<Symbol>,
) -> Result<(Pda, Acceptance)> {
    require_deterministic(a3)?;
    if let Acceptance::FinalStates(_) = acc {
        return Err(Error::NotAnOmegaCondition("final"));
    }
    if matches!(acc, Acceptance::Muller(_)) && a3.states().len() > MULLER_STATE_CAP {
        return Err(Error::Unsupported(format!(
            "lifting a Muller condition over more than {MULLER_STATE_CAP} states"
        )));
    }
    let run = |q: &State| q.tagged("n");
    let pad = |q: &State| q.tagged("p");
    let names: BTreeSet<State> = a3.states().iter().flat_map(|q| [run(q), pad(q)]).collect();
    let dead = fresh_state("⊘", &names);
    let dead_pad = dead.tagged("p");
    let input: Vec<Symbol> = a3.input_alphabet().iter().cloned().collect();
    let mut out = Pda::new(
        names.iter().cloned(),
        input.iter().chain(drop).cloned(),
        a3.stack_alphabet().iter().cloned(),
        a3.bottom().clone(),
        run(a3.initial()),
    );
    for (key, actions) in a3.delta() {
        for action in actions {
            out.rule(
                run(&key.state),
                key.input.as_ref(),
                &key.top,
                retarget(action, run(action.target())),
            );
        }
    }
    let mut needs_dead = false;
    for q in a3.states() {
        for z in a3.stack_alphabet() {
            if a3.has_lambda(q, z) {
                continue;
            }
            for d in drop {
                out.rule(run(q), Some(d), z, Action::Skip(pad(q)));
                out.rule(pad(q), Some(d), z, Action::Skip(pad(q)));
            }
            for a in &input {
                let action = match a3.actions(q, Some(a), z).first() {
                    Some(action) => retarget(action, run(action.target())),
                    None => {
                        needs_dead = true;
                        out.rule(run(q), Some(a), z, Action::Skip(dead.clone()));
                        Action::Skip(dead.clone())
                    }
                };
                out.rule(pad(q), Some(a), z, action);
            }
        }
    }
    if needs_dead {
        out.add_state(dead.clone());
        out.add_state(dead_pad.clone());
        for z in a3.stack_alphabet() {
            for a in &input {
                out.rule(&dead, Some(a), z, Action::Skip(dead.clone()));
                out.rule(&dead_pad, Some(a), z, Action::Skip(dead.clone()));
            }
            for d in drop {
                out.rule(&dead, Some(d), z, Action::Skip(dead_pad.clone()));
                out.rule(&dead_pad, Some(d), z, Action::Skip(dead_pad.clone()));
            }
        }
    }
    let lifted = match (to_parity(a3, acc), acc) {
        (Some(col), _) => {
            // Smallest even color above every color of `a3`; at least 2.
            let c_pad = col.values().max().map_or(1, |m| m + 1);
            let c_pad = c_pad + c_pad % 2;
            let mut lifted: Coloring = a3
                .states()
                .iter()
                .flat_map(|q| [(run(q), col[q]), (pad(q), c_pad)])
                .collect();
            if needs_dead {
                lifted.insert(dead.clone(), c_pad - 1);
                lifted.insert(dead_pad.clone(), c_pad);
            }
            Acceptance::Parity(lifted)
        }
        (None, Acceptance::Muller(family)) => {
            let mut lifted: BTreeSet<BTreeSet<State>> = BTreeSet::new();
            for set in family {
                let pads: Vec<State> = set.iter().map(pad).collect();
                for extra in subsets(&pads) {
                    lifted.insert(set.iter().map(run).chain(extra).collect());
                }
            }
            for q in a3.states() {
                lifted.insert(BTreeSet::from([pad(q)]));
            }
            if needs_dead {
                lifted.insert(BTreeSet::from([dead_pad.clone()]));
            }
            Acceptance::Muller(lifted)
        }
        _ => unreachable!("final-state conditions were rejected above"),
    };
    Ok((out, lifted))
}

/// Lifts an intermediate chain automaton `b` to the input `input ∪ drop`.
///
/// Letters of `drop` push a fresh junk symbol `J`; the next kept letter pops
/// the junk block and is then processed as `b` would. When only finitely many
/// kept letters occur the stack limit is `σ·J^ω`, otherwise it is the limit of
/// `b` on the erased word. Returns the automaton and `J`.
pub fn lift_mid(b: &Pda, drop: &BTreeSet<Symbol>) -> Result<(Pda, Symbol)> {
    require_deterministic(b)?;
    let taken: BTreeSet<Symbol> = b
        .stack_alphabet()
        .iter()
        .chain(b.input_alphabet())
        .chain(drop)
        .cloned()
        .collect();
    let junk = fresh_symbol("J", &taken);
    let run = |q: &State| q.tagged("n");
    let pend = |q: &State, a: &Symbol| q.tagged(&format!("pend.{a}"));
    let input: Vec<Symbol> = b.input_alphabet().iter().cloned().collect();
    let states = b
        .states()
        .iter()
        .flat_map(|q| std::iter::once(run(q)).chain(input.iter().map(move |a| pend(q, a))));
    let mut out = Pda::new(
        states,
        input.iter().chain(drop).cloned(),
        b.stack_alphabet()
            .iter()
            .chain(std::iter::once(&junk))
            .cloned(),
        b.bottom().clone(),
        run(b.initial()),
    );
    for (key, actions) in b.delta() {
        for action in actions {
            out.rule(
                run(&key.state),
                key.input.as_ref(),
                &key.top,
                retarget(action, run(action.target())),
            );
        }
    }
    for q in b.states() {
        for d in drop {
            out.rule(run(q), Some(d), &junk, Action::Push(run(q), junk.clone()));
        }
        for a in &input {
            out.rule(run(q), Some(a), &junk, Action::Pop(pend(q, a)));
            out.rule(pend(q, a), None, &junk, Action::Pop(pend(q, a)));
        }
        for z in b.stack_alphabet() {
            if let Some(action) = b.actions(q, None, z).first() {
                for a in &input {
                    out.rule(
                        pend(q, a),
                        None,
                        z,
                        retarget(action, pend(action.target(), a)),
                    );
                }
                continue;
            }
            for d in drop {
                out.rule(run(q), Some(d), z, Action::Push(run(q), junk.clone()));
            }
            for a in &input {
                if let Some(action) = b.actions(q, Some(a), z).first() {
                    out.rule(pend(q, a), None, z, retarget(action, run(action.target())));
                }
            }
        }
    }
    Ok((out, junk))
}

/// Lifts a whole chain so it reads words over its input plus `drop`, accepting
/// exactly the words whose erasure is finite or belongs to the chain's language.
pub fn lift_chain(c: &TriangleChain, drop: &BTreeSet<Symbol>) -> Result<TriangleChain> {
    let Some((head, rest)) = c.chain.split_first() else {
        let (terminal, acceptance) = lift_accepting(&c.terminal, &c.acceptance, drop)?;
        return Ok(TriangleChain::new(vec![], terminal, acceptance, false));
    };
    let (lifted, junk) = lift_mid(head, drop)?;
    let tail = TriangleChain::new(
        rest.to_vec(),
        c.terminal.clone(),
        c.acceptance.clone(),
        c.real_time,
    );
    let mut lifted_tail = lift_chain(&tail, &BTreeSet::from([junk]))?;
    lifted_tail.chain.insert(0, lifted);
    Ok(lifted_tail)
}

fn complement_acceptance(p: &Pda, acc: &Acceptance) -> Result<Acceptance> {
    if let Some(col) = to_parity(p, acc) {
        return Ok(Acceptance::Parity(
            col.into_iter().map(|(q, c)| (q, c + 1)).collect(),
        ));
    }
    match acc {
        Acceptance::Muller(family) => {
            if p.states().len() > MULLER_STATE_CAP {
                return Err(Error::Unsupported(format!(
                    "complementing a Muller condition over more than {MULLER_STATE_CAP} states"
                )));
            }
            let states: Vec<State> = p.states().iter().cloned().collect();
            Ok(Acceptance::Muller(
                subsets(&states)
                    .filter(|s| !s.is_empty() && !family.contains(s))
                    .collect(),
            ))
        }
        _ => Err(Error::NotAnOmegaCondition("final")),
    }
}

/// A chain whose language is the complement of `c`'s, assuming every
/// automaton of `c` has the continuity property.
pub fn complement_chain(c: &TriangleChain) -> Result<TriangleChain> {
    let diags = chain_validate(c);
    if !diags.is_empty() {
        return Err(Error::InvalidChain(diags));
    }
    let Some((head, rest)) = c.chain.split_first() else {
        return Ok(TriangleChain::new(
            vec![],
            c.terminal.clone(),
            complement_acceptance(&c.terminal, &c.acceptance)?,
            c.real_time,
        ));
    };
    let tail = TriangleChain::new(
        rest.to_vec(),
        c.terminal.clone(),
        c.acceptance.clone(),
        c.real_time,
    );
    let tail_complement = complement_chain(&tail)?;
    let padded = pad_transform(head)?;
    let mut out = lift_chain(&tail_complement, &padded.drop)?;
    out.chain.insert(0, padded.pda);
    out.real_time = false;
    Ok(out)
}

/// Sample-based check of the continuity precondition of complementation.
#[derive(Clone, Debug)]
pub struct ContinuityGate {
    pub samples: Vec<LassoWord>,
    /// Single-letter substitutions tried per sample on the head automaton.
    pub max_variants: usize,
    pub limits: RunLimits,
}

impl ContinuityGate {
    /// Finds an incomplete run of some chain automaton on the samples or on
    /// the stack limits they induce. Returns the level and the offending word.
    pub fn counterexample(
        &self,
        c: &TriangleChain,
    ) -> Result<Option<(usize, LassoWord, Completeness)>> {
        if let Continuity::CounterexampleFound {
            witness,
            completeness,
        } = check_continuity(c.head(), &self.samples, self.max_variants, &self.limits)?
        {
            return Ok(Some((0, witness, completeness)));
        }
        let all: Vec<DeterministicPda> = c
            .chain
            .iter()
            .chain(std::iter::once(&c.terminal))
            .map(DeterministicPda::compile)
            .collect::<Result<_>>()?;
        for w in &self.samples {
            let mut word = w.clone();
            for (level, m) in all.iter().enumerate() {
                let run = m.analyze(&word, None, &self.limits)?;
                if run.completeness != Completeness::Complete {
                    return Ok(Some((level, word, run.completeness)));
                }
                match run.stack_limit {
                    WordLimit::Infinite(limit) => word = limit,
                    WordLimit::Finite(_) => break,
                }
            }
        }
        Ok(None)
    }
}

/// `complement_chain` guarded by a continuity check on samples.
pub fn complement_chain_with(c: &TriangleChain, gate: &ContinuityGate) -> Result<TriangleChain> {
    if let Some((level, w, completeness)) = gate.counterexample(c)? {
        return Err(Error::Unsupported(format!(
            "continuity fails at level {level}: run on {w} is {completeness}"
        )));
    }
    complement_chain(c)
}
