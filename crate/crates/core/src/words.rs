//! Finite words, ultimately periodic ω-words and the operations on them.
//!
//! Every infinite word handled by the workbench is a lasso `spoke·cycle^ω`.
//! The literal syntax is `spoke ( cycle )`; when a literal contains
//! whitespace its tokens are whitespace separated, otherwise every character
//! (together with trailing apostrophes) is one symbol.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// The distinguished eraser letter.
pub const ERASER: &str = "←";

const RESERVED_CHARS: &[char] = &[',', '(', ')', '{', '}', '[', ']', ':', '='];
const RESERVED_TOKENS: &[&str] = &["_", "λ", "->", "|"];

pub(crate) fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c))
        && !RESERVED_TOKENS.contains(&name)
        && !name.starts_with("//")
        && !name.contains("->");
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidName(name.to_string()))
    }
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(std::sync::Arc<str>);

        impl $name {
            /// Panics when `name` is not a valid token; use `try_new` for untrusted input.
            pub fn new(name: &str) -> Self {
                Self::try_new(name).unwrap_or_else(|e| panic!("{e}"))
            }

            pub fn try_new(name: &str) -> $crate::error::Result<Self> {
                $crate::words::check_name(name)?;
                Ok(Self(std::sync::Arc::from(name)))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }

            /// Appends a tag, producing the structured names used by generated automata.
            pub fn tagged(&self, tag: &str) -> Self {
                Self::new(&format!("{}/{}", self.0, tag))
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::fmt::Debug for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                Self::new(name)
            }
        }

        impl From<&$name> for $name {
            fn from(name: &$name) -> Self {
                name.clone()
            }
        }
    };
}

pub(crate) use name_type;

name_type!(
    /// A letter of an input or stack alphabet.
    Symbol
);

impl Symbol {
    pub fn eraser() -> Self {
        Symbol::new(ERASER)
    }

    /// The copy of this symbol carrying `n` extra apostrophes.
    pub fn primed(&self, n: usize) -> Self {
        Symbol::new(&format!("{}{}", self.0, "'".repeat(n)))
    }

    pub fn is_primed(&self) -> bool {
        self.0.ends_with('\'')
    }
}

/// A finite word; the empty word is written `λ`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord(Vec<Symbol>);

impl FiniteWord {
    pub fn new(letters: Vec<Symbol>) -> Self {
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    /// `self ⊑ other` for finite words.
    pub fn is_prefix_of(&self, other: &FiniteWord) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self ⊑ w` for a lasso, unrolling the cycle as far as needed.
    pub fn is_prefix_of_lasso(&self, w: &LassoWord) -> bool {
        self.0.iter().enumerate().all(|(i, s)| w.letter(i) == s)
    }

    /// Deletes every occurrence of a symbol in `drop`.
    pub fn erase(&self, drop: &BTreeSet<Symbol>) -> FiniteWord {
        self.0
            .iter()
            .filter(|s| !drop.contains(*s))
            .cloned()
            .collect()
    }

    /// Parses a finite-word literal; `λ` and the empty string denote the empty word.
    pub fn parse(literal: &str) -> Result<FiniteWord> {
        let tokens = tokenize(literal)?;
        if tokens.iter().any(|t| t == "(" || t == ")") {
            return Err(Error::WordLiteral {
                literal: literal.to_string(),
                message: "parentheses are only allowed in lasso literals".into(),
            });
        }
        if tokens.len() == 1 && tokens[0] == "λ" {
            return Ok(FiniteWord::empty());
        }
        tokens
            .iter()
            .map(|t| Symbol::try_new(t))
            .collect::<Result<Vec<_>>>()
            .map(FiniteWord)
    }
}

impl Deref for FiniteWord {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl FromIterator<Symbol> for FiniteWord {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        FiniteWord(iter.into_iter().collect())
    }
}

impl From<Vec<Symbol>> for FiniteWord {
    fn from(v: Vec<Symbol>) -> Self {
        FiniteWord(v)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("λ");
        }
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Symbol]) -> fmt::Result {
    for (i, s) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(s.as_str())?;
    }
    Ok(())
}

/// The ultimately periodic word `spoke·cycle·cycle·…`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    spoke: FiniteWord,
    cycle: FiniteWord,
}

impl LassoWord {
    pub fn new(spoke: FiniteWord, cycle: FiniteWord) -> Result<LassoWord> {
        if cycle.is_empty() {
            return Err(Error::WordLiteral {
                literal: format!("{spoke} ( )"),
                message: "the cycle of a lasso must be nonempty".into(),
            });
        }
        Ok(LassoWord { spoke, cycle })
    }

    pub fn spoke(&self) -> &FiniteWord {
        &self.spoke
    }

    pub fn cycle(&self) -> &FiniteWord {
        &self.cycle
    }

    /// The `i`-th letter, 0-based.
    pub fn letter(&self, i: usize) -> &Symbol {
        if i < self.spoke.len() {
            &self.spoke[i]
        } else {
            &self.cycle[(i - self.spoke.len()) % self.cycle.len()]
        }
    }

    /// The prefix of length `n`.
    pub fn prefix(&self, n: usize) -> FiniteWord {
        (0..n).map(|i| self.letter(i).clone()).collect()
    }

    /// All letters occurring in the word.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.spoke
            .iter()
            .chain(self.cycle.iter())
            .cloned()
            .collect()
    }

    /// Canonical representative: primitive cycle, then shortest spoke.
    pub fn normalize(&self) -> LassoWord {
        let mut cycle = primitive_root(&self.cycle);
        let mut spoke = self.spoke.0.clone();
        while spoke.last().is_some() && spoke.last() == cycle.last() {
            spoke.pop();
            cycle.rotate_right(1);
        }
        LassoWord {
            spoke: FiniteWord(spoke),
            cycle: FiniteWord(cycle),
        }
    }

    /// ω-word equality.
    pub fn same_word(&self, other: &LassoWord) -> bool {
        self.normalize() == other.normalize()
    }

    /// Deletes the symbols in `drop`; the result is finite when the cycle is erased.
    pub fn erase(&self, drop: &BTreeSet<Symbol>) -> WordLimit {
        let spoke = self.spoke.erase(drop);
        let cycle = self.cycle.erase(drop);
        if cycle.is_empty() {
            WordLimit::Finite(spoke)
        } else {
            WordLimit::Infinite(LassoWord { spoke, cycle })
        }
    }

    pub fn parse(literal: &str) -> Result<LassoWord> {
        let err = |message: &str| Error::WordLiteral {
            literal: literal.to_string(),
            message: message.to_string(),
        };
        let tokens = tokenize(literal)?;
        let open = tokens
            .iter()
            .position(|t| t == "(")
            .ok_or_else(|| err("missing '('"))?;
        if tokens.last().map(String::as_str) != Some(")") {
            return Err(err("a lasso literal must end with ')'"));
        }
        let inner = &tokens[open + 1..tokens.len() - 1];
        if tokens[..open]
            .iter()
            .chain(inner)
            .any(|t| t == "(" || t == ")")
        {
            return Err(err("unbalanced parentheses"));
        }
        let word = |ts: &[String]| -> Result<FiniteWord> {
            ts.iter()
                .filter(|t| *t != "λ")
                .map(|t| Symbol::try_new(t))
                .collect::<Result<Vec<_>>>()
                .map(FiniteWord)
        };
        let cycle = word(inner)?;
        if cycle.is_empty() {
            return Err(err("the cycle of a lasso must be nonempty"));
        }
        Ok(LassoWord {
            spoke: word(&tokens[..open])?,
            cycle,
        })
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.spoke.is_empty() {
            write_letters(f, &self.spoke)?;
            f.write_str(" ")?;
        }
        f.write_str("( ")?;
        write_letters(f, &self.cycle)?;
        f.write_str(" )")
    }
}

impl fmt::Debug for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

fn primitive_root(w: &[Symbol]) -> Vec<Symbol> {
    let n = w.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| w[i] == w[i - p]))
        .map(|p| w[..p].to_vec())
        .unwrap_or_default()
}

fn tokenize(literal: &str) -> Result<Vec<String>> {
    let literal = literal.trim();
    let mut tokens = Vec::new();
    if literal.chars().any(char::is_whitespace) {
        for chunk in literal.split_whitespace() {
            let mut cur = String::new();
            for c in chunk.chars() {
                if c == '(' || c == ')' {
                    if !cur.is_empty() {
                        tokens.push(std::mem::take(&mut cur));
                    }
                    tokens.push(c.to_string());
                } else {
                    cur.push(c);
                }
            }
            if !cur.is_empty() {
                tokens.push(cur);
            }
        }
    } else {
        for c in literal.chars() {
            if c == '\'' {
                match tokens.last_mut() {
                    Some(t) if t != "(" && t != ")" => t.push(c),
                    _ => {
                        return Err(Error::WordLiteral {
                            literal: literal.to_string(),
                            message: "dangling apostrophe".into(),
                        })
                    }
                }
            } else {
                tokens.push(c.to_string());
            }
        }
    }
    Ok(tokens)
}

/// A borrowed finite or infinite word, for operations accepting either.
#[derive(Clone, Copy, Debug)]
pub enum WordRef<'a> {
    Finite(&'a FiniteWord),
    Lasso(&'a LassoWord),
}

impl<'a> From<&'a FiniteWord> for WordRef<'a> {
    fn from(w: &'a FiniteWord) -> Self {
        WordRef::Finite(w)
    }
}

impl<'a> From<&'a LassoWord> for WordRef<'a> {
    fn from(w: &'a LassoWord) -> Self {
        WordRef::Lasso(w)
    }
}

/// The limit of a sequence of finite words: finite, or an ultimately periodic ω-word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum WordLimit {
    Finite(FiniteWord),
    Infinite(LassoWord),
}

impl WordLimit {
    pub fn is_infinite(&self) -> bool {
        matches!(self, WordLimit::Infinite(_))
    }

    /// Equality of the denoted words (lassos compared as ω-words).
    pub fn same_word(&self, other: &WordLimit) -> bool {
        match (self, other) {
            (WordLimit::Finite(a), WordLimit::Finite(b)) => a == b,
            (WordLimit::Infinite(a), WordLimit::Infinite(b)) => a.same_word(b),
            _ => false,
        }
    }

    pub fn erase(&self, drop: &BTreeSet<Symbol>) -> WordLimit {
        match self {
            WordLimit::Finite(w) => WordLimit::Finite(w.erase(drop)),
            WordLimit::Infinite(w) => w.erase(drop),
        }
    }
}

impl fmt::Display for WordLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordLimit::Finite(w) => write!(f, "{w}"),
            WordLimit::Infinite(w) => write!(f, "{w}"),
        }
    }
}

/// `u ⊑ w`.
pub fn prefix_of<'a>(u: &FiniteWord, w: impl Into<WordRef<'a>>) -> bool {
    match w.into() {
        WordRef::Finite(w) => u.is_prefix_of(w),
        WordRef::Lasso(w) => u.is_prefix_of_lasso(w),
    }
}

/// Evaluates every eraser letter as a backspace, left to right.
pub fn eraser_evaluate(u: &FiniteWord) -> FiniteWord {
    eraser_evaluate_with(u, &Symbol::eraser())
}

pub fn eraser_evaluate_with(u: &FiniteWord, eraser: &Symbol) -> FiniteWord {
    let mut out = Vec::with_capacity(u.len());
    for s in u.iter() {
        if s == eraser {
            out.pop();
        } else {
            out.push(s.clone());
        }
    }
    FiniteWord(out)
}

/// Membership in `V^∼ = { x | x^↞ ∈ V }`.
pub fn tilde_member(oracle: impl Fn(&FiniteWord) -> bool, u: &FiniteWord) -> bool {
    oracle(&eraser_evaluate(u))
}

pub fn project_erase<'a>(w: impl Into<WordRef<'a>>, drop: &BTreeSet<Symbol>) -> WordLimit {
    match w.into() {
        WordRef::Finite(w) => WordLimit::Finite(w.erase(drop)),
        WordRef::Lasso(w) => w.erase(drop),
    }
}

pub fn lasso_normalize(w: &LassoWord) -> LassoWord {
    w.normalize()
}

/// Convenience constructor: `word("a b c")` or `word("abc")`. Panics on a bad literal.
pub fn word(literal: &str) -> FiniteWord {
    FiniteWord::parse(literal).unwrap_or_else(|e| panic!("{e}"))
}

/// Convenience constructor: `lasso("⊥ a ( # )")`. Panics on a bad literal.
pub fn lasso(literal: &str) -> LassoWord {
    LassoWord::parse(literal).unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> BTreeSet<Symbol> {
        names.iter().map(|n| Symbol::new(n)).collect()
    }

    #[test]
    fn prefix_examples() {
        assert!(prefix_of(&word("ab"), &word("abc")));
        assert!(prefix_of(&FiniteWord::empty(), &word("abc")));
        assert!(prefix_of(&FiniteWord::empty(), &lasso("(a)")));
        assert!(prefix_of(&word("abab"), &lasso("a(ba)")));
        assert!(!prefix_of(&word("abb"), &lasso("a(ba)")));
    }

    #[test]
    fn eraser_examples() {
        assert_eq!(eraser_evaluate(&FiniteWord::empty()), FiniteWord::empty());
        assert_eq!(eraser_evaluate(&word("ab←")), word("a"));
        assert_eq!(eraser_evaluate(&word("←←a")), word("a"));
        assert_eq!(eraser_evaluate(&word("ab←←ab")), word("ab"));
        assert_eq!(eraser_evaluate(&word("aabb←←ab")), word("aaab"));
    }

    #[test]
    fn tilde_examples() {
        let anbn = |w: &FiniteWord| {
            let n = w.len() / 2;
            n >= 1
                && w.len() == 2 * n
                && w[..n].iter().all(|s| s.as_str() == "a")
                && w[n..].iter().all(|s| s.as_str() == "b")
        };
        assert!(tilde_member(anbn, &word("ab←←ab")));
        assert!(!tilde_member(anbn, &word("aabb←←ab")));
        assert!(!tilde_member(anbn, &word("ba")));
    }

    #[test]
    fn projection_examples() {
        let primed = set(&["a'", "b'"]);
        assert_eq!(
            project_erase(&word("a a' b b'"), &primed),
            WordLimit::Finite(word("ab"))
        );
        assert_eq!(
            project_erase(&lasso("a ( b' )"), &primed),
            WordLimit::Finite(word("a"))
        );
        let lim = project_erase(&lasso("a' ( a b' )"), &primed);
        assert!(lim.same_word(&WordLimit::Infinite(lasso("(a)"))));
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(lasso("ab(abab)").normalize(), lasso("(ab)"));
        assert_eq!(lasso("(aa)").normalize(), lasso("(a)"));
        assert_eq!(lasso("a(a)").normalize(), lasso("(a)"));
        assert_eq!(lasso("xab(ab)").normalize(), lasso("x(ab)"));
        assert_eq!(lasso("b(ab)").normalize(), lasso("(ba)"));
    }

    #[test]
    fn literal_syntax() {
        let w = lasso("⊥ a b ( # )");
        assert_eq!(w.spoke(), &word("⊥ a b"));
        assert_eq!(w.cycle(), &word("#"));
        assert_eq!(w.to_string(), "⊥ a b ( # )");
        assert_eq!(lasso("( # )").spoke().len(), 0);
        assert_eq!(lasso("⊥1 a (#)").spoke().len(), 2);
        assert_eq!(
            word("a'b").letters(),
            &[Symbol::new("a'"), Symbol::new("b")]
        );
        assert_eq!(word("λ"), FiniteWord::empty());
        assert_eq!(FiniteWord::empty().to_string(), "λ");
        assert!(LassoWord::parse("ab").is_err());
        assert!(LassoWord::parse("a()").is_err());
        assert!(LassoWord::parse("a(b)c").is_err());
        assert!(FiniteWord::parse("a(b)").is_err());
        assert!(Symbol::try_new("a,b").is_err());
        assert!(Symbol::try_new("_").is_err());
    }
}
