//! Languages `L(A1 ▷ … ▷ An ▷ An+1)` defined by iterated stack limits.

mod complement;
mod segments;

pub use complement::{
    complement_chain, complement_chain_with, lift_accepting, lift_chain, lift_mid, pad_transform,
    prime_copies, ContinuityGate, Padded,
};
pub(crate) use segments::SegmentRun;
pub use segments::{
    decompose_unique, seg_member_l, seg_member_u, seg_report, Decomposition, Segment, SegmentReport,
};

use crate::automata::{
    classify_pda, validate_acceptance, validate_pda, Acceptance, DeterministicPda, Pda,
};
use crate::error::{Error, Result};
use crate::omega::{run_accepted, RunAnalysis, RunLimits};
use crate::words::{LassoWord, WordLimit};

/// A chain of deterministic automata followed by an ω-acceptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleChain {
    pub chain: Vec<Pda>,
    pub terminal: Pda,
    pub acceptance: Acceptance,
    /// Claims membership in the real-time class: every automaton is λ-free.
    pub real_time: bool,
}

impl TriangleChain {
    pub fn new(chain: Vec<Pda>, terminal: Pda, acceptance: Acceptance, real_time: bool) -> Self {
        TriangleChain {
            chain,
            terminal,
            acceptance,
            real_time,
        }
    }

    pub fn compile(&self) -> Result<CompiledChain> {
        self.compile_with(RunLimits::default())
    }

    pub fn compile_with(&self, limits: RunLimits) -> Result<CompiledChain> {
        let diags = chain_validate(self);
        if !diags.is_empty() {
            return Err(Error::InvalidChain(diags));
        }
        Ok(CompiledChain {
            machines: self
                .chain
                .iter()
                .map(DeterministicPda::compile)
                .collect::<Result<_>>()?,
            terminal: DeterministicPda::compile(&self.terminal)?,
            acceptance: self.acceptance.clone(),
            limits,
        })
    }

    /// The automaton reading the chain's input.
    pub fn head(&self) -> &Pda {
        self.chain.first().unwrap_or(&self.terminal)
    }
}

/// Reports chaining, determinism, validity and real-time violations.
pub fn chain_validate(c: &TriangleChain) -> Vec<String> {
    let mut out = Vec::new();
    let all: Vec<&Pda> = c.chain.iter().chain(std::iter::once(&c.terminal)).collect();
    for (i, p) in all.iter().enumerate() {
        let name = if i < c.chain.len() {
            format!("automaton {}", i + 1)
        } else {
            "terminal".to_string()
        };
        out.extend(validate_pda(p).into_iter().map(|d| format!("{name}: {d}")));
        let class = classify_pda(p);
        if !class.deterministic {
            out.push(format!("{name}: not deterministic"));
        }
        if c.real_time && !class.real_time {
            out.push(format!("{name}: has λ-transitions in a real-time chain"));
        }
        if let Some(next) = all.get(i + 1) {
            if p.stack_alphabet() != next.input_alphabet() {
                out.push(format!(
                    "{name}: stack alphabet differs from the input alphabet of the next automaton"
                ));
            }
        }
    }
    if !c.acceptance.is_omega() {
        out.push("terminal: acceptance must be buchi, muller or parity".to_string());
    }
    out.extend(
        validate_acceptance(&c.terminal, &c.acceptance)
            .into_iter()
            .map(|d| format!("terminal: {d}")),
    );
    out
}

/// A validated chain with compiled transition tables.
#[derive(Clone, Debug)]
pub struct CompiledChain {
    machines: Vec<DeterministicPda>,
    terminal: DeterministicPda,
    acceptance: Acceptance,
    limits: RunLimits,
}

/// Outcome of a membership query, level by level.
#[derive(Clone, Debug)]
pub struct MembershipTrace {
    pub member: bool,
    /// Analyses of the chain automata that were run, in order.
    pub levels: Vec<RunAnalysis>,
    /// The terminal run, when every chain level was strictly unbounded.
    pub terminal: Option<RunAnalysis>,
}

impl CompiledChain {
    pub fn member(&self, w: &LassoWord) -> Result<bool> {
        Ok(self.trace(w)?.member)
    }

    pub fn trace(&self, w: &LassoWord) -> Result<MembershipTrace> {
        let mut levels = Vec::new();
        let mut word = w.clone();
        for m in &self.machines {
            let run = m.analyze(&word, None, &self.limits)?;
            let next = match &run.stack_limit {
                WordLimit::Infinite(limit) if run.strictly_unbounded => Some(limit.clone()),
                _ => None,
            };
            levels.push(run);
            match next {
                Some(limit) => word = limit,
                None => {
                    return Ok(MembershipTrace {
                        member: false,
                        levels,
                        terminal: None,
                    })
                }
            }
        }
        let coloring = match &self.acceptance {
            Acceptance::Parity(col) => Some(col),
            _ => None,
        };
        let run = self.terminal.analyze(&word, coloring, &self.limits)?;
        Ok(MembershipTrace {
            member: run_accepted(&run, &self.acceptance),
            levels,
            terminal: Some(run),
        })
    }

    pub fn limits(&self) -> &RunLimits {
        &self.limits
    }
}

pub fn triangle_member(c: &TriangleChain, w: &LassoWord) -> Result<bool> {
    c.compile()?.member(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Action, Coloring, State};
    use crate::words::{lasso, Symbol};

    fn accept_all() -> (Pda, Acceptance) {
        let mut p = Pda::new(
            [State::new("s")],
            [Symbol::new("a"), Symbol::new("b")],
            [],
            Symbol::new("⊥"),
            State::new("s"),
        );
        for c in ["a", "b"] {
            p.rule(
                "s",
                Some(&Symbol::new(c)),
                "⊥",
                Action::Skip(State::new("s")),
            );
        }
        (
            p,
            Acceptance::Parity(Coloring::from([(State::new("s"), 0)])),
        )
    }

    #[test]
    fn empty_chain_uses_the_terminal() {
        let (p, acc) = accept_all();
        let c = TriangleChain::new(vec![], p, acc, true);
        assert!(chain_validate(&c).is_empty());
        assert!(triangle_member(&c, &lasso("ab(ba)")).unwrap());
    }

    #[test]
    fn mismatched_alphabets_are_diagnosed() {
        let (p, acc) = accept_all();
        let c = TriangleChain::new(vec![p.clone()], p, acc, true);
        let diags = chain_validate(&c);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].contains("stack alphabet"));
        assert!(matches!(c.compile(), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn nondeterministic_elements_are_diagnosed() {
        let (mut p, acc) = accept_all();
        p.rule("s", None, "⊥", Action::Skip(State::new("s")));
        let c = TriangleChain::new(vec![], p, acc, false);
        assert_eq!(
            chain_validate(&c),
            vec!["terminal: not deterministic".to_string()]
        );
    }

    #[test]
    fn final_state_terminal_is_rejected() {
        let (p, _) = accept_all();
        let c = TriangleChain::new(vec![], p, Acceptance::FinalStates(Default::default()), true);
        assert_eq!(chain_validate(&c).len(), 1);
    }
}
