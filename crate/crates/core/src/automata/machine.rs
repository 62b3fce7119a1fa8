//! Index-compiled transition table for deterministic automata.

use std::collections::HashMap;

use super::{classify_pda, validate_pda, Action, Pda, State};
use crate::error::{Error, Result};
use crate::words::Symbol;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Op {
    Skip,
    Pop,
    Push(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Step {
    pub target: u32,
    pub op: Op,
}

/// A deterministic automaton with states and symbols replaced by dense indices.
///
/// Input slot 0 is λ; input letter `i` lives in slot `i + 1`.
#[derive(Clone, Debug)]
pub struct DeterministicPda {
    pda: Pda,
    states: Vec<State>,
    symbols: Vec<Symbol>,
    letters: Vec<Symbol>,
    state_ix: HashMap<State, u32>,
    symbol_ix: HashMap<Symbol, u32>,
    letter_ix: HashMap<Symbol, u32>,
    table: Vec<Option<Step>>,
}

impl DeterministicPda {
    pub fn compile(p: &Pda) -> Result<DeterministicPda> {
        let diags = validate_pda(p);
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        if !classify_pda(p).deterministic {
            return Err(Error::NotDeterministic);
        }
        let states: Vec<State> = p.states().iter().cloned().collect();
        let symbols: Vec<Symbol> = p.stack_alphabet().iter().cloned().collect();
        let letters: Vec<Symbol> = p.input_alphabet().iter().cloned().collect();
        let state_ix: HashMap<State, u32> = index_of(&states);
        let symbol_ix: HashMap<Symbol, u32> = index_of(&symbols);
        let letter_ix: HashMap<Symbol, u32> = index_of(&letters);
        let slots = letters.len() + 1;
        let mut table = vec![None; states.len() * slots * symbols.len()];
        for (key, actions) in p.delta() {
            let Some(action) = actions.iter().next() else {
                continue;
            };
            let slot = key.input.as_ref().map_or(0, |a| letter_ix[a] as usize + 1);
            let at = (state_ix[&key.state] as usize * slots + slot) * symbols.len()
                + symbol_ix[&key.top] as usize;
            let op = match action {
                Action::Skip(_) => Op::Skip,
                Action::Pop(_) => Op::Pop,
                Action::Push(_, s) => Op::Push(symbol_ix[s]),
            };
            table[at] = Some(Step {
                target: state_ix[action.target()],
                op,
            });
        }
        Ok(DeterministicPda {
            pda: p.clone(),
            states,
            symbols,
            letters,
            state_ix,
            symbol_ix,
            letter_ix,
            table,
        })
    }

    pub fn pda(&self) -> &Pda {
        &self.pda
    }

    pub fn initial(&self) -> u32 {
        self.state_ix[self.pda.initial()]
    }

    pub fn bottom(&self) -> u32 {
        self.symbol_ix[self.pda.bottom()]
    }

    pub fn state(&self, i: u32) -> &State {
        &self.states[i as usize]
    }

    pub fn symbol(&self, i: u32) -> &Symbol {
        &self.symbols[i as usize]
    }

    pub fn state_index_of(&self, q: &State) -> Option<u32> {
        self.state_ix.get(q).copied()
    }

    pub fn symbol_index_of(&self, s: &Symbol) -> Option<u32> {
        self.symbol_ix.get(s).copied()
    }

    /// The input slot of `letter`, or `None` when it is not an input letter.
    pub fn letter_slot(&self, letter: &Symbol) -> Option<u32> {
        self.letter_ix.get(letter).map(|i| i + 1)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn lookup(&self, state: u32, slot: u32, top: u32) -> Option<Step> {
        let slots = self.letters.len() + 1;
        self.table[(state as usize * slots + slot as usize) * self.symbols.len() + top as usize]
    }

    pub fn lambda(&self, state: u32, top: u32) -> Option<Step> {
        self.lookup(state, 0, top)
    }

    /// Translates a word of symbol names; fails on a letter outside the input alphabet.
    pub fn encode_input(&self, letters: &[Symbol]) -> Result<Vec<u32>> {
        letters
            .iter()
            .map(|a| {
                self.letter_slot(a)
                    .ok_or_else(|| Error::ForeignLetter(a.to_string()))
            })
            .collect()
    }

    pub fn decode_stack(&self, stack: &[u32]) -> Vec<Symbol> {
        stack.iter().map(|&s| self.symbol(s).clone()).collect()
    }
}

fn index_of<T: Clone + Eq + std::hash::Hash>(v: &[T]) -> HashMap<T, u32> {
    v.iter()
        .cloned()
        .enumerate()
        .map(|(i, x)| (x, i as u32))
        .collect()
}

/// Applies a compiled step to an index stack.
pub(crate) fn apply_op(op: Op, stack: &mut Vec<u32>) {
    match op {
        Op::Skip => {}
        Op::Pop => {
            stack.pop();
        }
        Op::Push(s) => stack.push(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compile_rejects_nondeterminism() {
        let mut p = Pda::new(
            [State::new("s")],
            [Symbol::new("a")],
            [],
            Symbol::new("⊥"),
            State::new("s"),
        );
        p.rule(
            "s",
            Some(&Symbol::new("a")),
            "⊥",
            Action::Skip(State::new("s")),
        );
        assert!(DeterministicPda::compile(&p).is_ok());
        p.rule("s", None, "⊥", Action::Skip(State::new("s")));
        assert_eq!(
            DeterministicPda::compile(&p).unwrap_err(),
            Error::NotDeterministic
        );
    }

    #[test]
    fn lookup_matches_rules() {
        let mut p = Pda::new(
            [State::new("s"), State::new("t")],
            [Symbol::new("a"), Symbol::new("b")],
            [Symbol::new("X")],
            Symbol::new("⊥"),
            State::new("s"),
        );
        p.rule(
            "s",
            Some(&Symbol::new("b")),
            "⊥",
            Action::Push(State::new("t"), Symbol::new("X")),
        );
        p.rule("t", None, "X", Action::Pop(State::new("s")));
        let m = DeterministicPda::compile(&p).unwrap();
        let s = m.state_index_of(&State::new("s")).unwrap();
        let t = m.state_index_of(&State::new("t")).unwrap();
        let x = m.symbol_index_of(&Symbol::new("X")).unwrap();
        let b = m.letter_slot(&Symbol::new("b")).unwrap();
        assert_eq!(
            m.lookup(s, b, m.bottom()),
            Some(Step {
                target: t,
                op: Op::Push(x)
            })
        );
        assert_eq!(
            m.lambda(t, x),
            Some(Step {
                target: s,
                op: Op::Pop
            })
        );
        assert_eq!(m.lookup(s, 1, m.bottom()), None);
        assert!(m.encode_input(&[Symbol::new("c")]).is_err());
    }
}
