//! Seeded generators of lasso words for the randomized test batteries.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::words::{FiniteWord, LassoWord, Symbol};

/// A family of structured inputs: consecutive blocks, each a word over its
/// letters with a length in `lo..=hi`, then a short cycle over `cycle`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shape {
    pub blocks: Vec<(Vec<Symbol>, usize, usize)>,
    pub cycle: Vec<Symbol>,
}

#[derive(Clone, Debug)]
pub struct LassoSampler {
    rng: ChaCha8Rng,
    alphabet: Vec<Symbol>,
    shape: Option<Shape>,
    /// Bound on `|spoke| + |cycle|`.
    max_total: usize,
}

impl LassoSampler {
    pub fn new(
        seed: u64,
        alphabet: impl IntoIterator<Item = Symbol>,
        shape: Option<Shape>,
        max_total: usize,
    ) -> Self {
        assert!(max_total >= 1, "a lasso needs at least one cycle letter");
        let alphabet: Vec<Symbol> = alphabet.into_iter().collect();
        assert!(!alphabet.is_empty(), "cannot sample over an empty alphabet");
        LassoSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            alphabet,
            shape,
            max_total,
        }
    }

    fn letters(&mut self, from: &[Symbol], n: usize) -> Vec<Symbol> {
        (0..n)
            .map(|_| from.choose(&mut self.rng).expect("nonempty").clone())
            .collect()
    }

    /// Uniform lengths, uniform letters.
    pub fn uniform(&mut self) -> LassoWord {
        let cycle_len = self.rng.gen_range(1..=self.max_total.min(4));
        let spoke_len = self.rng.gen_range(0..=self.max_total - cycle_len);
        let alphabet = self.alphabet.clone();
        let spoke = self.letters(&alphabet, spoke_len);
        let cycle = self.letters(&alphabet, cycle_len);
        LassoWord::new(spoke.into(), cycle.into()).expect("the cycle is nonempty")
    }

    /// A word of the shape, with the spoke truncated to respect the size bound.
    pub fn structured(&mut self) -> LassoWord {
        let Some(shape) = self.shape.clone() else {
            return self.uniform();
        };
        let mut spoke = Vec::new();
        for (letters, lo, hi) in &shape.blocks {
            let n = self.rng.gen_range(*lo..=*hi);
            spoke.extend(self.letters(letters, n));
        }
        let cycle_len = self.rng.gen_range(1..=2.min(self.max_total));
        let cycle = self.letters(&shape.cycle, cycle_len);
        spoke.truncate(self.max_total - cycle.len());
        LassoWord::new(spoke.into(), cycle.into()).expect("the cycle is nonempty")
    }

    /// A structured word with one letter replaced at random.
    pub fn mutated(&mut self) -> LassoWord {
        let w = self.structured();
        let mut spoke = w.spoke().to_vec();
        let mut cycle = w.cycle().to_vec();
        let i = self.rng.gen_range(0..spoke.len() + cycle.len());
        let letter = self
            .alphabet
            .choose(&mut self.rng)
            .expect("nonempty")
            .clone();
        if i < spoke.len() {
            spoke[i] = letter;
        } else {
            cycle[i - spoke.len()] = letter;
        }
        LassoWord::new(FiniteWord::new(spoke), FiniteWord::new(cycle))
            .expect("the cycle is nonempty")
    }

    /// Half structured, a quarter mutated, a quarter uniform.
    pub fn sample(&mut self) -> LassoWord {
        match self.rng.gen_range(0..4) {
            0 | 1 => self.structured(),
            2 => self.mutated(),
            _ => self.uniform(),
        }
    }

    pub fn take(&mut self, n: usize) -> Vec<LassoWord> {
        (0..n).map(|_| self.sample()).collect()
    }
}
