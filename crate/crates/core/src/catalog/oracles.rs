//! Reference languages decided by counting and pattern matching alone.

use crate::error::{Error, Result};
use crate::words::{eraser_evaluate, FiniteWord, LassoWord, Symbol};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LanguageKind {
    Finitary,
    Omega,
}

#[derive(Clone, Copy, Debug)]
pub enum OracleWord<'a> {
    Finite(&'a FiniteWord),
    Omega(&'a LassoWord),
}

impl<'a> From<&'a FiniteWord> for OracleWord<'a> {
    fn from(w: &'a FiniteWord) -> Self {
        OracleWord::Finite(w)
    }
}

impl<'a> From<&'a LassoWord> for OracleWord<'a> {
    fn from(w: &'a LassoWord) -> Self {
        OracleWord::Omega(w)
    }
}

#[derive(Clone, Copy, Debug)]
enum Rule {
    Finite(fn(&FiniteWord) -> bool),
    Omega(fn(&LassoWord) -> bool),
}

/// A language with a membership predicate that involves no automaton.
#[derive(Clone, Copy, Debug)]
pub struct NamedLanguage {
    pub name: &'static str,
    pub description: &'static str,
    rule: Rule,
}

impl NamedLanguage {
    pub fn kind(&self) -> LanguageKind {
        match self.rule {
            Rule::Finite(_) => LanguageKind::Finitary,
            Rule::Omega(_) => LanguageKind::Omega,
        }
    }

    pub fn contains<'a>(&self, w: impl Into<OracleWord<'a>>) -> Result<bool> {
        match (self.rule, w.into()) {
            (Rule::Finite(f), OracleWord::Finite(w)) => Ok(f(w)),
            (Rule::Omega(f), OracleWord::Omega(w)) => Ok(f(w)),
            _ => Err(Error::Unsupported(format!(
                "{} does not take words of that kind",
                self.name
            ))),
        }
    }
}

/// Run lengths of `w` when it has the shape `l0^n0 l1^n1 …` exactly, with every block nonempty.
fn blocks(w: &[Symbol], letters: &[&str]) -> Option<Vec<usize>> {
    let mut counts = vec![0; letters.len()];
    let mut at = 0;
    for s in w {
        while at < letters.len() && s.as_str() != letters[at] {
            if counts[at] == 0 {
                return None;
            }
            at += 1;
        }
        if at == letters.len() {
            return None;
        }
        counts[at] += 1;
    }
    (counts.iter().all(|&n| n > 0)).then_some(counts)
}

/// `(n, m, p)` when `w = a^n b^m c^p d^ω` with n, m, p ≥ 1.
fn abc_d(w: &LassoWord) -> Option<(usize, usize, usize)> {
    let w = w.normalize();
    if w.cycle().len() != 1 || w.cycle()[0].as_str() != "d" {
        return None;
    }
    let c = blocks(w.spoke(), &["a", "b", "c"])?;
    Some((c[0], c[1], c[2]))
}

/// The finite prefix `x` when `w = ⊥1 · x · #^ω` and `x` contains no `#` or `⊥1`.
fn marked(w: &LassoWord) -> Option<&[Symbol]> {
    if w.cycle().len() != 1 || w.cycle()[0].as_str() != "#" {
        return None;
    }
    let spoke = w.spoke();
    let (first, rest) = spoke.split_first()?;
    if first.as_str() != "⊥1" {
        return None;
    }
    let end = rest
        .iter()
        .rposition(|s| s.as_str() != "#")
        .map_or(0, |i| i + 1);
    let x = &rest[..end];
    (!x.iter().any(|s| s.as_str() == "#" || s.as_str() == "⊥1")).then_some(x)
}

fn anbn(w: &[Symbol]) -> bool {
    matches!(blocks(w, &["a", "b"]).as_deref(), Some([n, m]) if n == m)
}

fn an(w: &[Symbol]) -> bool {
    blocks(w, &["a"]).is_some()
}

fn anbn_tilde(w: &FiniteWord) -> bool {
    anbn(&eraser_evaluate(w))
}

fn v(w: &FiniteWord) -> bool {
    matches!(blocks(w, &["a", "b", "c"]).as_deref(), Some([n, m, p]) if n == m || m == p)
}

fn anbncn(w: &FiniteWord) -> bool {
    matches!(blocks(w, &["a", "b", "c"]).as_deref(), Some([n, m, p]) if n == m && m == p)
}

fn l1(w: &LassoWord) -> bool {
    matches!(abc_d(w), Some((n, m, _)) if n == m)
}

fn l2(w: &LassoWord) -> bool {
    matches!(abc_d(w), Some((_, m, p)) if m == p)
}

fn l3(w: &LassoWord) -> bool {
    matches!(abc_d(w), Some((n, m, _)) if n != m)
}

fn l4(w: &LassoWord) -> bool {
    matches!(abc_d(w), Some((_, m, p)) if m != p)
}

fn l5(w: &LassoWord) -> bool {
    w.alphabet()
        .iter()
        .all(|s| ["a", "b", "c", "d"].contains(&s.as_str()))
        && !l3(w)
        && !l4(w)
}

fn l1_and_l2(w: &LassoWord) -> bool {
    matches!(abc_d(w), Some((n, m, p)) if n == m && m == p)
}

fn marked_anbn(w: &LassoWord) -> bool {
    marked(w).is_some_and(anbn)
}

fn marked_anbn_or_an(w: &LassoWord) -> bool {
    marked(w).is_some_and(|x| anbn(x) || an(x))
}

pub const LANGUAGES: &[NamedLanguage] = &[
    NamedLanguage {
        name: "anbn",
        description: "a^n b^n, n ≥ 1",
        rule: Rule::Finite(|w| anbn(w)),
    },
    NamedLanguage {
        name: "anbn~",
        description: "words over a, b, ← whose eraser evaluation is in anbn",
        rule: Rule::Finite(anbn_tilde),
    },
    NamedLanguage {
        name: "V",
        description: "a^n b^m c^p, n, m, p ≥ 1, n = m or m = p",
        rule: Rule::Finite(v),
    },
    NamedLanguage {
        name: "anbncn",
        description: "a^n b^n c^n, n ≥ 1",
        rule: Rule::Finite(anbncn),
    },
    NamedLanguage {
        name: "L1",
        description: "a^n b^m c^p d^ω, n, m, p ≥ 1, n = m",
        rule: Rule::Omega(l1),
    },
    NamedLanguage {
        name: "L2",
        description: "a^n b^m c^p d^ω, n, m, p ≥ 1, m = p",
        rule: Rule::Omega(l2),
    },
    NamedLanguage {
        name: "L3",
        description: "a^n b^m c^p d^ω, n, m, p ≥ 1, n ≠ m",
        rule: Rule::Omega(l3),
    },
    NamedLanguage {
        name: "L4",
        description: "a^n b^m c^p d^ω, n, m, p ≥ 1, m ≠ p",
        rule: Rule::Omega(l4),
    },
    NamedLanguage {
        name: "L5",
        description: "ω-words over a, b, c, d in neither L3 nor L4",
        rule: Rule::Omega(l5),
    },
    NamedLanguage {
        name: "L1∩L2",
        description: "a^n b^n c^n d^ω, n ≥ 1",
        rule: Rule::Omega(l1_and_l2),
    },
    NamedLanguage {
        name: "anbn#",
        description: "⊥1 a^n b^n #^ω, n ≥ 1",
        rule: Rule::Omega(marked_anbn),
    },
    NamedLanguage {
        name: "anbn|an#",
        description: "⊥1 a^n b^n #^ω or ⊥1 a^n #^ω, n ≥ 1",
        rule: Rule::Omega(marked_anbn_or_an),
    },
];

pub fn language(name: &str) -> Result<&'static NamedLanguage> {
    LANGUAGES
        .iter()
        .find(|l| l.name == name)
        .ok_or_else(|| Error::UnknownName(format!("lang:{name}")))
}

/// Membership by name; errors on unknown names and on a word of the wrong kind.
pub fn oracle_language<'a>(name: &str, w: impl Into<OracleWord<'a>>) -> Result<bool> {
    language(name)?.contains(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{lasso, word};

    #[test]
    fn reference_examples() {
        assert!(oracle_language("V", &word("aabbc")).unwrap());
        assert!(oracle_language("L1∩L2", &lasso("abc(d)")).unwrap());
        assert!(!oracle_language("anbncn", &word("aabbc")).unwrap());
    }

    #[test]
    fn blocks_require_every_letter() {
        assert!(!oracle_language("V", &word("bbc")).unwrap());
        assert!(!oracle_language("V", &word("abca")).unwrap());
        assert!(!oracle_language("anbn", &word("")).unwrap());
        assert!(oracle_language("anbn~", &word("ab←←ab")).unwrap());
    }

    #[test]
    fn omega_shapes_are_normalized() {
        assert!(oracle_language("L1", &lasso("aabbcd(dd)")).unwrap());
        assert!(!oracle_language("L1", &lasso("aabbc(cd)")).unwrap());
        assert!(oracle_language("L5", &lasso("a(b)")).unwrap());
        assert!(!oracle_language("L5", &lasso("a(e)")).unwrap());
    }

    #[test]
    fn marked_limits() {
        let w = LassoWord::new(
            FiniteWord::new(vec![Symbol::new("⊥1")]).concat(&word("aab")),
            word("#"),
        )
        .unwrap();
        assert!(!oracle_language("anbn#", &w).unwrap());
        assert!(!oracle_language("anbn|an#", &w).unwrap());
        let w = LassoWord::new(
            FiniteWord::new(vec![Symbol::new("⊥1")]).concat(&word("aa#")),
            word("#"),
        )
        .unwrap();
        assert!(oracle_language("anbn|an#", &w).unwrap());
    }

    #[test]
    fn wrong_kind_and_unknown_name() {
        assert!(oracle_language("L1", &word("abcd")).is_err());
        assert!(matches!(
            oracle_language("nope", &word("a")),
            Err(Error::UnknownName(_))
        ));
    }
}
