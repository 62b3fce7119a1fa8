//! Deterministic runs on lasso inputs: periodicity, stack limits and ω-acceptance.
//!
//! A time `t` of a run is a low point while no later explored time has a
//! lower stack. Two low points with the same state, top symbol and input
//! phase bracket a period: the stack below the first one is frozen and the
//! deterministic future only depends on that key.

use std::collections::{BTreeSet, HashMap};

use crate::automata::machine::apply_op;
use crate::automata::{Acceptance, Coloring, DeterministicPda, Pda, State};
use crate::error::{Error, Result};
use crate::words::{FiniteWord, LassoWord, WordLimit};

pub const DEFAULT_STEP_CEILING: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunLimits {
    pub step_ceiling: usize,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            step_ceiling: DEFAULT_STEP_CEILING,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Completeness {
    /// The run is infinite and reads the whole input.
    Complete,
    /// From some point on the run only performs λ-moves.
    LambdaDivergent,
    /// The run reaches a configuration without applicable transition.
    Blocked,
}

impl std::fmt::Display for Completeness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Completeness::Complete => "complete",
            Completeness::LambdaDivergent => "lambda-divergent",
            Completeness::Blocked => "blocked",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunAnalysis {
    pub completeness: Completeness,
    /// Steps before the detected period starts (or before the run blocks).
    pub transient_steps: usize,
    /// Length of the detected period; zero for blocked runs.
    pub period_steps: usize,
    /// Net stack word appended per period.
    pub pumped_word: FiniteWord,
    pub stack_limit: WordLimit,
    pub strictly_unbounded: bool,
    /// `In(r)`; empty unless the run is complete.
    pub inf_states: BTreeSet<State>,
    /// `sc(r)` under the supplied coloring, for complete runs.
    pub min_inf_color: Option<u32>,
    /// Input letters consumed up to the end of the first detected period.
    pub consumed: usize,
}

/// State, top symbol and input phase.
type Key = (u32, u32, usize);

/// Index-level result of the low-point engine.
#[derive(Clone, Debug)]
pub(crate) struct RawRun {
    pub completeness: Completeness,
    pub t1: usize,
    pub t2: usize,
    pub h1: usize,
    /// Stack at time `t2` (or at the blocking time).
    pub stack: Vec<u32>,
    /// States at times `0..=t2` (`0..=t` when blocked).
    pub states: Vec<u32>,
    pub consumed: usize,
}

impl DeterministicPda {
    pub(crate) fn run_raw(
        &self,
        spoke: &[u32],
        cycle: &[u32],
        limits: &RunLimits,
    ) -> Result<RawRun> {
        let phase = |pos: usize| {
            if pos < spoke.len() {
                pos
            } else {
                spoke.len() + (pos - spoke.len()) % cycle.len()
            }
        };
        let letter = |pos: usize| {
            if pos < spoke.len() {
                spoke[pos]
            } else {
                cycle[(pos - spoke.len()) % cycle.len()]
            }
        };
        let mut state = self.initial();
        let mut stack = vec![self.bottom()];
        let mut pos = 0usize;
        let mut states = Vec::new();
        // (time, height, key, consumed)
        let mut lows: Vec<(usize, usize, Key, usize)> = Vec::new();
        let mut index: HashMap<Key, usize> = HashMap::new();
        for t in 0.. {
            let h = stack.len();
            while lows.last().is_some_and(|low| low.1 > h) {
                let low = lows.pop().expect("checked nonempty");
                index.remove(&low.2);
            }
            let top = *stack.last().expect("the bottom symbol is never popped");
            let key = (state, top, phase(pos));
            states.push(state);
            if let Some(&i) = index.get(&key) {
                let (t1, h1, _, pos1) = lows[i];
                let completeness = if pos > pos1 {
                    Completeness::Complete
                } else {
                    Completeness::LambdaDivergent
                };
                return Ok(RawRun {
                    completeness,
                    t1,
                    t2: t,
                    h1,
                    stack,
                    states,
                    consumed: pos,
                });
            }
            index.insert(key, lows.len());
            lows.push((t, h, key, pos));
            if t >= limits.step_ceiling {
                return Err(Error::StepCeiling(limits.step_ceiling));
            }
            let step = match self.lambda(state, top) {
                Some(step) => Some(step),
                None => {
                    let step = self.lookup(state, letter(pos), top);
                    if step.is_some() {
                        pos += 1;
                    }
                    step
                }
            };
            let Some(step) = step else {
                return Ok(RawRun {
                    completeness: Completeness::Blocked,
                    t1: t,
                    t2: t,
                    h1: h,
                    stack,
                    states,
                    consumed: pos,
                });
            };
            apply_op(step.op, &mut stack);
            state = step.target;
        }
        unreachable!("the run loop only exits by returning")
    }

    /// Analyzes the unique run on `w`.
    pub fn analyze(
        &self,
        w: &LassoWord,
        coloring: Option<&Coloring>,
        limits: &RunLimits,
    ) -> Result<RunAnalysis> {
        let spoke = self.encode_input(w.spoke())?;
        let cycle = self.encode_input(w.cycle())?;
        let raw = self.run_raw(&spoke, &cycle, limits)?;
        let word = |s: &[u32]| FiniteWord::new(self.decode_stack(s));
        if raw.completeness == Completeness::Blocked {
            return Ok(RunAnalysis {
                completeness: Completeness::Blocked,
                transient_steps: raw.t1,
                period_steps: 0,
                pumped_word: FiniteWord::empty(),
                stack_limit: WordLimit::Finite(word(&raw.stack)),
                strictly_unbounded: false,
                inf_states: BTreeSet::new(),
                min_inf_color: None,
                consumed: raw.consumed,
            });
        }
        let base = word(&raw.stack[..raw.h1]);
        let pumped = word(&raw.stack[raw.h1..]);
        let complete = raw.completeness == Completeness::Complete;
        let strictly_unbounded = complete && !pumped.is_empty();
        let stack_limit = if strictly_unbounded {
            WordLimit::Infinite(LassoWord::new(base, pumped.clone())?.normalize())
        } else {
            WordLimit::Finite(base)
        };
        let inf_states: BTreeSet<State> = if complete {
            raw.states[raw.t1..raw.t2]
                .iter()
                .map(|&q| self.state(q).clone())
                .collect()
        } else {
            BTreeSet::new()
        };
        let min_inf_color = coloring
            .filter(|_| complete)
            .and_then(|col| inf_states.iter().filter_map(|q| col.get(q).copied()).min());
        Ok(RunAnalysis {
            completeness: raw.completeness,
            transient_steps: raw.t1,
            period_steps: raw.t2 - raw.t1,
            pumped_word: pumped,
            stack_limit,
            strictly_unbounded,
            inf_states,
            min_inf_color,
            consumed: raw.consumed,
        })
    }

    pub fn accepts_omega(
        &self,
        cond: &Acceptance,
        w: &LassoWord,
        limits: &RunLimits,
    ) -> Result<bool> {
        let coloring = match cond {
            Acceptance::FinalStates(_) => return Err(Error::NotAnOmegaCondition("final")),
            Acceptance::Parity(col) => Some(col),
            _ => None,
        };
        let run = self.analyze(w, coloring, limits)?;
        Ok(run_accepted(&run, cond))
    }
}

/// Evaluates an ω-condition on an analyzed run; incomplete runs are rejected.
pub fn run_accepted(run: &RunAnalysis, cond: &Acceptance) -> bool {
    if run.completeness != Completeness::Complete {
        return false;
    }
    match cond {
        Acceptance::FinalStates(_) => false,
        Acceptance::Buchi(f) => !run.inf_states.is_disjoint(f),
        Acceptance::Muller(family) => family.contains(&run.inf_states),
        Acceptance::Parity(col) => run
            .inf_states
            .iter()
            .filter_map(|q| col.get(q))
            .min()
            .is_some_and(|c| c % 2 == 0),
    }
}

/// Analyzes the run of `p` on `w`; `p` must be deterministic.
pub fn analyze_run(p: &Pda, w: &LassoWord) -> Result<RunAnalysis> {
    DeterministicPda::compile(p)?.analyze(w, None, &RunLimits::default())
}

pub fn analyze_run_colored(p: &Pda, w: &LassoWord, col: &Coloring) -> Result<RunAnalysis> {
    DeterministicPda::compile(p)?.analyze(w, Some(col), &RunLimits::default())
}

pub fn accepts_omega(p: &Pda, cond: &Acceptance, w: &LassoWord) -> Result<bool> {
    DeterministicPda::compile(p)?.accepts_omega(cond, w, &RunLimits::default())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Continuity {
    ContinuousOnSamples,
    CounterexampleFound {
        witness: LassoWord,
        completeness: Completeness,
    },
}

/// Runs every sample and its single-letter substitutions (at most
/// `max_variants` per sample) looking for an incomplete run.
pub fn check_continuity(
    p: &Pda,
    samples: &[LassoWord],
    max_variants: usize,
    limits: &RunLimits,
) -> Result<Continuity> {
    let m = DeterministicPda::compile(p)?;
    let letters: Vec<_> = p.input_alphabet().iter().cloned().collect();
    for w in samples {
        let spoke = w.spoke().letters();
        let cycle = w.cycle().letters();
        let variants = (0..spoke.len() + cycle.len())
            .flat_map(|i| letters.iter().map(move |a| (i, a)))
            .filter_map(|(i, a)| {
                let mut s = spoke.to_vec();
                let mut c = cycle.to_vec();
                let slot = if i < s.len() {
                    &mut s[i]
                } else {
                    &mut c[i - spoke.len()]
                };
                if slot == a {
                    return None;
                }
                *slot = a.clone();
                LassoWord::new(s.into(), c.into()).ok()
            })
            .take(max_variants);
        for v in std::iter::once(w.clone()).chain(variants) {
            let run = m.analyze(&v, None, limits)?;
            if run.completeness != Completeness::Complete {
                return Ok(Continuity::CounterexampleFound {
                    witness: v,
                    completeness: run.completeness,
                });
            }
        }
    }
    Ok(Continuity::ContinuousOnSamples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Action;
    use crate::words::{lasso, Symbol};

    fn s(n: &str) -> Symbol {
        Symbol::new(n)
    }

    fn q(n: &str) -> State {
        State::new(n)
    }

    /// Pushes every letter it reads.
    fn pusher() -> Pda {
        let mut p = Pda::new([q("s")], [s("a"), s("b")], [s("a"), s("b")], s("⊥"), q("s"));
        for c in ["a", "b"] {
            for z in ["⊥", "a", "b"] {
                p.rule("s", Some(&s(c)), z, Action::Push(q("s"), s(c)));
            }
        }
        p
    }

    #[test]
    fn pushing_run_has_infinite_limit() {
        let run = analyze_run(&pusher(), &lasso("a(ba)")).unwrap();
        assert_eq!(run.completeness, Completeness::Complete);
        assert!(run.strictly_unbounded);
        let WordLimit::Infinite(limit) = &run.stack_limit else {
            panic!("expected an infinite limit")
        };
        assert!(limit.same_word(&lasso("⊥ a ( b a )")));
    }

    #[test]
    fn skipping_run_is_stationary() {
        let mut p = Pda::new([q("s")], [s("a")], [], s("⊥"), q("s"));
        p.rule("s", Some(&s("a")), "⊥", Action::Skip(q("s")));
        let col = Coloring::from([(q("s"), 0)]);
        let run = analyze_run_colored(&p, &lasso("(a)"), &col).unwrap();
        assert_eq!(run.completeness, Completeness::Complete);
        assert!(!run.strictly_unbounded);
        assert!(run.pumped_word.is_empty());
        assert_eq!(
            run.stack_limit,
            WordLimit::Finite(FiniteWord::new(vec![s("⊥")]))
        );
        assert_eq!(run.min_inf_color, Some(0));
        assert!(accepts_omega(&p, &Acceptance::Parity(col), &lasso("a a (a)")).unwrap());
    }

    #[test]
    fn push_pop_oscillation_has_finite_limit() {
        let mut p = Pda::new([q("s"), q("t")], [s("a")], [s("X")], s("⊥"), q("s"));
        p.rule("s", Some(&s("a")), "⊥", Action::Push(q("t"), s("X")));
        p.rule("t", Some(&s("a")), "X", Action::Pop(q("s")));
        let run = analyze_run(&p, &lasso("(a)")).unwrap();
        assert_eq!(run.completeness, Completeness::Complete);
        assert!(!run.strictly_unbounded);
        assert_eq!(run.inf_states, BTreeSet::from([q("s"), q("t")]));
        assert_eq!(run.period_steps, 2);
    }

    #[test]
    fn lambda_self_loop_diverges() {
        let mut p = Pda::new([q("s")], [s("a")], [], s("⊥"), q("s"));
        p.rule("s", None, "⊥", Action::Skip(q("s")));
        let run = analyze_run(&p, &lasso("(a)")).unwrap();
        assert_eq!(run.completeness, Completeness::LambdaDivergent);
        assert!(run.inf_states.is_empty());
        let verdict = check_continuity(&p, &[lasso("(a)")], 4, &RunLimits::default()).unwrap();
        assert!(matches!(verdict, Continuity::CounterexampleFound { .. }));
    }

    #[test]
    fn lambda_pumping_diverges_without_infinite_limit() {
        let mut p = Pda::new([q("s")], [s("a")], [s("X")], s("⊥"), q("s"));
        p.rule("s", None, "⊥", Action::Push(q("s"), s("X")));
        p.rule("s", None, "X", Action::Push(q("s"), s("X")));
        let run = analyze_run(&p, &lasso("(a)")).unwrap();
        assert_eq!(run.completeness, Completeness::LambdaDivergent);
        assert!(!run.strictly_unbounded);
        assert!(!run.stack_limit.is_infinite());
    }

    #[test]
    fn blocked_run_reports_its_last_stack() {
        let mut p = Pda::new([q("s")], [s("a"), s("b")], [s("a")], s("⊥"), q("s"));
        p.rule("s", Some(&s("a")), "⊥", Action::Push(q("s"), s("a")));
        let run = analyze_run(&p, &lasso("a(b)")).unwrap();
        assert_eq!(run.completeness, Completeness::Blocked);
        assert_eq!(run.transient_steps, 1);
        assert_eq!(run.stack_limit.to_string(), "⊥ a");
        let verdict = check_continuity(&p, &[lasso("(a)")], 8, &RunLimits::default()).unwrap();
        assert!(matches!(verdict, Continuity::CounterexampleFound { .. }));
    }

    #[test]
    fn step_ceiling_is_reported() {
        let limits = RunLimits { step_ceiling: 3 };
        let m = DeterministicPda::compile(&pusher()).unwrap();
        let err = m.analyze(&lasso("aaaaaa(b)"), None, &limits).unwrap_err();
        assert_eq!(err, Error::StepCeiling(3));
        assert!(err.is_exhaustion());
    }

    #[test]
    fn final_state_condition_is_not_an_omega_condition() {
        let err = accepts_omega(
            &pusher(),
            &Acceptance::FinalStates(BTreeSet::new()),
            &lasso("(a)"),
        );
        assert_eq!(err.unwrap_err(), Error::NotAnOmegaCondition("final"));
    }

    #[test]
    fn foreign_letters_are_rejected() {
        assert!(matches!(
            analyze_run(&pusher(), &lasso("(c)")),
            Err(Error::ForeignLetter(_))
        ));
    }
}
