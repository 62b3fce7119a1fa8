//! A direct step-by-step simulator over the uncompiled transition relation,
//! used as an oracle for the run analysis.

use std::collections::BTreeSet;

use crate::automata::{step_config, Configuration, Pda, State};
use crate::omega::{Completeness, RunAnalysis};
use crate::words::{LassoWord, Symbol, WordLimit};

/// The first configurations of the run, with the number of letters read before each.
#[derive(Clone, Debug)]
pub struct Trace {
    pub configs: Vec<Configuration>,
    pub consumed: Vec<usize>,
    /// The run stopped because no rule applied.
    pub blocked: bool,
}

/// Simulates `steps` moves of the run of the deterministic `p` on `w`, a λ-move
/// whenever one applies.
pub fn simulate(p: &Pda, w: &LassoWord, steps: usize) -> Trace {
    let mut c = p.initial_configuration();
    let mut pos = 0;
    let mut trace = Trace {
        configs: vec![c.clone()],
        consumed: vec![0],
        blocked: false,
    };
    for _ in 0..steps {
        let mut next = step_config(p, &c, None);
        if next.is_empty() {
            next = step_config(p, &c, Some(w.letter(pos)));
            if !next.is_empty() {
                pos += 1;
            }
        }
        let Some(n) = next.into_iter().next() else {
            trace.blocked = true;
            break;
        };
        c = n;
        trace.configs.push(c.clone());
        trace.consumed.push(pos);
    }
    trace
}

fn common_prefix<'a>(stacks: impl Iterator<Item = &'a [Symbol]>) -> Vec<Symbol> {
    let mut out: Option<&[Symbol]> = None;
    for s in stacks {
        out = Some(match out {
            None => s,
            Some(o) => {
                let n = o.iter().zip(s).take_while(|(x, y)| x == y).count();
                &o[..n]
            }
        });
    }
    out.unwrap_or(&[]).to_vec()
}

fn floor(t: &Trace, from: usize, to: usize) -> usize {
    t.configs[from..=to]
        .iter()
        .map(Configuration::height)
        .min()
        .expect("nonempty window")
}

/// Checks `run` against brute-force simulation of `p` on `w`:
/// the first `k` letters of the stack limit, the recurring states over ten
/// periods, and strict unboundedness through the growth of the height floor.
/// Returns a description of the first mismatch.
pub fn check_analysis(p: &Pda, w: &LassoWord, run: &RunAnalysis, k: usize) -> Result<(), String> {
    let t0 = run.transient_steps;
    let period = run.period_steps;
    if run.completeness == Completeness::Blocked {
        let trace = simulate(p, w, t0 + 1);
        let last = trace.configs.last().expect("nonempty");
        if !trace.blocked || trace.configs.len() != t0 + 1 {
            return Err(format!(
                "engine reports a block after {t0} steps, simulation disagrees"
            ));
        }
        return match &run.stack_limit {
            WordLimit::Finite(s) if *s == last.stack => Ok(()),
            other => Err(format!(
                "blocked limit {other} differs from final stack {}",
                last.stack
            )),
        };
    }
    if period == 0 {
        return Err("a nonblocked run must have a positive period".into());
    }
    let trace = simulate(p, w, t0 + 22 * period);
    if trace.blocked {
        return Err("simulation blocks where the engine found a period".into());
    }
    // The period is certified when the same state, top and input phase
    // recur without the stack dipping in between.
    let (a, b) = (&trace.configs[t0], &trace.configs[t0 + period]);
    let phase = |i: usize| {
        let n = trace.consumed[i];
        let s = w.spoke().len();
        if n < s {
            n
        } else {
            s + (n - s) % w.cycle().len()
        }
    };
    if a.state != b.state
        || a.top() != b.top()
        || phase(t0) != phase(t0 + period)
        || floor(&trace, t0, t0 + period) < a.height()
    {
        return Err(format!(
            "no repetition between steps {t0} and {}",
            t0 + period
        ));
    }
    let advanced = trace.consumed[t0 + period] > trace.consumed[t0];
    let complete = run.completeness == Completeness::Complete;
    if advanced != complete {
        return Err(format!(
            "completeness {} but the period reads {} letters",
            run.completeness,
            trace.consumed[t0 + period] - trace.consumed[t0]
        ));
    }
    let grows =
        floor(&trace, t0 + 12 * period, t0 + 13 * period) >= floor(&trace, t0, t0 + period) + 12;
    if complete && grows != run.strictly_unbounded {
        return Err(format!(
            "strictly unbounded is {}, the height floor says {grows}",
            run.strictly_unbounded
        ));
    }
    let window = if run.strictly_unbounded {
        t0 + 12 * period..=t0 + 22 * period
    } else {
        t0..=t0 + period
    };
    let lcp = common_prefix(trace.configs[window].iter().map(|c| c.stack.letters()));
    let expected: Vec<Symbol> = match &run.stack_limit {
        WordLimit::Infinite(l) => l.prefix(k).into_letters(),
        WordLimit::Finite(s) => s.letters().iter().take(k).cloned().collect(),
    };
    let observed: Vec<Symbol> = lcp.into_iter().take(k).collect();
    if expected != observed {
        return Err(format!(
            "limit prefix {expected:?} but simulation stabilizes {observed:?}"
        ));
    }
    if complete {
        let seen: BTreeSet<State> = trace.configs[t0..t0 + 10 * period]
            .iter()
            .map(|c| c.state.clone())
            .collect();
        if seen != run.inf_states {
            return Err(format!(
                "recurring states {:?} but simulation visits {seen:?}",
                run.inf_states
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Action;
    use crate::omega::analyze_run;
    use crate::words::lasso;

    #[test]
    fn counter_matches_engine() {
        let mut p = Pda::new(
            [State::new("s")],
            [Symbol::new("a"), Symbol::new("b")],
            [Symbol::new("X")],
            Symbol::new("⊥"),
            State::new("s"),
        );
        for top in ["⊥", "X"] {
            p.rule(
                "s",
                Some(&Symbol::new("a")),
                top,
                Action::Push(State::new("s"), Symbol::new("X")),
            );
        }
        p.rule(
            "s",
            Some(&Symbol::new("b")),
            "X",
            Action::Pop(State::new("s")),
        );
        p.rule(
            "s",
            Some(&Symbol::new("b")),
            "⊥",
            Action::Skip(State::new("s")),
        );
        for w in ["(a)", "b(ab)", "aa(aab)", "a(b)", "(ba)", "aaa(abb)"] {
            let w = lasso(w);
            let run = analyze_run(&p, &w).unwrap();
            check_analysis(&p, &w, &run, 12).unwrap_or_else(|e| panic!("{w}: {e}"));
        }
    }
}
