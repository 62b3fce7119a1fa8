//! Pushdown automata: definitions, validity, classification and finite-word semantics.

pub(crate) mod machine;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

pub use machine::{DeterministicPda, Op, Step};

use crate::words::{name_type, FiniteWord, Symbol};

name_type!(
    /// A control state.
    State
);

/// One transition action; the target state comes first as in `push(q, γ)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Action {
    Skip(State),
    Pop(State),
    Push(State, Symbol),
}

impl Action {
    pub fn target(&self) -> &State {
        match self {
            Action::Skip(q) | Action::Pop(q) | Action::Push(q, _) => q,
        }
    }

    /// Applies the action to a stack whose top has already been matched.
    pub fn apply(&self, stack: &mut Vec<Symbol>) {
        match self {
            Action::Skip(_) => {}
            Action::Pop(_) => {
                stack.pop();
            }
            Action::Push(_, s) => stack.push(s.clone()),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Skip(q) => write!(f, "skip({q})"),
            Action::Pop(q) => write!(f, "pop({q})"),
            Action::Push(q, s) => write!(f, "push({q}, {s})"),
        }
    }
}

/// A key of the transition relation; `input == None` is a λ-move.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RuleKey {
    pub state: State,
    pub input: Option<Symbol>,
    pub top: Symbol,
}

impl fmt::Display for RuleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let input = self.input.as_ref().map_or("_", Symbol::as_str);
        write!(f, "{} , {} , {}", self.state, input, self.top)
    }
}

/// `(Q, Γ, A, ⊥, q_in, δ)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pda {
    states: BTreeSet<State>,
    input: BTreeSet<Symbol>,
    stack: BTreeSet<Symbol>,
    bottom: Symbol,
    initial: State,
    delta: BTreeMap<RuleKey, BTreeSet<Action>>,
}

impl Pda {
    /// An automaton without transitions. The bottom symbol is added to the stack alphabet.
    pub fn new(
        states: impl IntoIterator<Item = State>,
        input: impl IntoIterator<Item = Symbol>,
        stack: impl IntoIterator<Item = Symbol>,
        bottom: Symbol,
        initial: State,
    ) -> Pda {
        let mut stack: BTreeSet<Symbol> = stack.into_iter().collect();
        stack.insert(bottom.clone());
        Pda {
            states: states.into_iter().collect(),
            input: input.into_iter().collect(),
            stack,
            bottom,
            initial,
            delta: BTreeMap::new(),
        }
    }

    pub fn add_rule(&mut self, key: RuleKey, action: Action) {
        self.delta.entry(key).or_default().insert(action);
    }

    /// Shorthand for `add_rule`; `input == None` adds a λ-move.
    pub fn rule(
        &mut self,
        state: impl Into<State>,
        input: Option<&Symbol>,
        top: impl Into<Symbol>,
        action: Action,
    ) {
        self.add_rule(
            RuleKey {
                state: state.into(),
                input: input.cloned(),
                top: top.into(),
            },
            action,
        );
    }

    pub fn add_state(&mut self, q: State) {
        self.states.insert(q);
    }

    pub fn states(&self) -> &BTreeSet<State> {
        &self.states
    }

    pub fn input_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.input
    }

    pub fn stack_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.stack
    }

    pub fn bottom(&self) -> &Symbol {
        &self.bottom
    }

    pub fn initial(&self) -> &State {
        &self.initial
    }

    pub fn delta(&self) -> &BTreeMap<RuleKey, BTreeSet<Action>> {
        &self.delta
    }

    /// `δ(q, a, Z)`; `input == None` asks for λ-moves.
    pub fn actions(&self, state: &State, input: Option<&Symbol>, top: &Symbol) -> Vec<&Action> {
        let key = RuleKey {
            state: state.clone(),
            input: input.cloned(),
            top: top.clone(),
        };
        self.delta
            .get(&key)
            .map(|set| set.iter().collect())
            .unwrap_or_default()
    }

    pub fn has_lambda(&self, state: &State, top: &Symbol) -> bool {
        !self.actions(state, None, top).is_empty()
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            state: self.initial.clone(),
            stack: FiniteWord::new(vec![self.bottom.clone()]),
        }
    }

    pub fn rule_count(&self) -> usize {
        self.delta.values().map(BTreeSet::len).sum()
    }
}

/// Colors of a parity condition.
pub type Coloring = BTreeMap<State, u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Acceptance {
    FinalStates(BTreeSet<State>),
    Buchi(BTreeSet<State>),
    Muller(BTreeSet<BTreeSet<State>>),
    Parity(Coloring),
}

impl Acceptance {
    pub fn kind(&self) -> &'static str {
        match self {
            Acceptance::FinalStates(_) => "final",
            Acceptance::Buchi(_) => "buchi",
            Acceptance::Muller(_) => "muller",
            Acceptance::Parity(_) => "parity",
        }
    }

    pub fn is_omega(&self) -> bool {
        !matches!(self, Acceptance::FinalStates(_))
    }

    fn referenced_states(&self) -> Vec<&State> {
        match self {
            Acceptance::FinalStates(f) | Acceptance::Buchi(f) => f.iter().collect(),
            Acceptance::Muller(family) => family.iter().flatten().collect(),
            Acceptance::Parity(col) => col.keys().collect(),
        }
    }
}

/// `(q, σ)` with the top of the stack rightmost.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Configuration {
    pub state: State,
    pub stack: FiniteWord,
}

impl Configuration {
    pub fn new(state: impl Into<State>, stack: FiniteWord) -> Self {
        Configuration {
            state: state.into(),
            stack,
        }
    }

    pub fn top(&self) -> Option<&Symbol> {
        self.stack.last()
    }

    pub fn height(&self) -> usize {
        self.stack.len()
    }

    /// Nonempty, starts with `bottom`, and `bottom` occurs nowhere else.
    pub fn is_well_formed(&self, bottom: &Symbol) -> bool {
        self.stack.first() == Some(bottom) && !self.stack[1..].contains(bottom)
    }

    /// The successor under `action`, which must have been selected for this top.
    pub fn apply(&self, action: &Action) -> Configuration {
        let mut stack = self.stack.letters().to_vec();
        action.apply(&mut stack);
        Configuration {
            state: action.target().clone(),
            stack: FiniteWord::new(stack),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.state, self.stack)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DiagnosticKind {
    PopOnBottom,
    PushesBottom,
    PushOutsideStack(Symbol),
    InputOutsideAlphabet(Symbol),
    TopOutsideStack(Symbol),
    UnknownSourceState(State),
    UnknownTargetState(State),
    UnknownInitialState(State),
    BottomOutsideStack(Symbol),
    AcceptanceUnknownState(State),
    MissingColor(State),
    MissingOwner(State),
}

/// A validity violation, with the offending δ key when there is one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub key: Option<RuleKey>,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DiagnosticKind::*;
        let what = match &self.kind {
            PopOnBottom => "pop on the bottom symbol".to_string(),
            PushesBottom => "pushes the bottom symbol".to_string(),
            PushOutsideStack(s) => format!("pushes {s}, which is not a stack symbol"),
            InputOutsideAlphabet(s) => format!("input {s} is not in the input alphabet"),
            TopOutsideStack(s) => format!("top {s} is not a stack symbol"),
            UnknownSourceState(q) => format!("source state {q} is undeclared"),
            UnknownTargetState(q) => format!("target state {q} is undeclared"),
            UnknownInitialState(q) => format!("initial state {q} is undeclared"),
            BottomOutsideStack(s) => format!("bottom {s} is not a stack symbol"),
            AcceptanceUnknownState(q) => format!("acceptance refers to undeclared state {q}"),
            MissingColor(q) => format!("state {q} has no color"),
            MissingOwner(q) => format!("state {q} has no owner"),
        };
        match &self.key {
            Some(k) => write!(f, "[{k}] {what}"),
            None => f.write_str(&what),
        }
    }
}

/// Reports every invariant violation of `p`; empty means valid.
pub fn validate_pda(p: &Pda) -> Vec<Diagnostic> {
    use DiagnosticKind::*;
    let mut out = Vec::new();
    let mut global = |kind| out.push(Diagnostic { key: None, kind });
    if !p.states.contains(&p.initial) {
        global(UnknownInitialState(p.initial.clone()));
    }
    if !p.stack.contains(&p.bottom) {
        global(BottomOutsideStack(p.bottom.clone()));
    }
    for (key, actions) in &p.delta {
        let mut diag = |kind| {
            out.push(Diagnostic {
                key: Some(key.clone()),
                kind,
            })
        };
        if !p.states.contains(&key.state) {
            diag(UnknownSourceState(key.state.clone()));
        }
        if let Some(a) = &key.input {
            if !p.input.contains(a) {
                diag(InputOutsideAlphabet(a.clone()));
            }
        }
        if !p.stack.contains(&key.top) {
            diag(TopOutsideStack(key.top.clone()));
        }
        for action in actions {
            if !p.states.contains(action.target()) {
                diag(UnknownTargetState(action.target().clone()));
            }
            match action {
                Action::Pop(_) if key.top == p.bottom => diag(PopOnBottom),
                Action::Push(_, s) if *s == p.bottom => diag(PushesBottom),
                Action::Push(_, s) if !p.stack.contains(s) => diag(PushOutsideStack(s.clone())),
                _ => {}
            }
        }
    }
    out
}

/// Checks that `acc` only mentions states of `p` and, for parity, colors every state.
pub fn validate_acceptance(p: &Pda, acc: &Acceptance) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = acc
        .referenced_states()
        .into_iter()
        .filter(|q| !p.states.contains(*q))
        .map(|q| Diagnostic {
            key: None,
            kind: DiagnosticKind::AcceptanceUnknownState(q.clone()),
        })
        .collect();
    if let Acceptance::Parity(col) = acc {
        out.extend(
            p.states
                .iter()
                .filter(|q| !col.contains_key(*q))
                .map(|q| Diagnostic {
                    key: None,
                    kind: DiagnosticKind::MissingColor(q.clone()),
                }),
        );
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Classification {
    pub deterministic: bool,
    pub real_time: bool,
}

pub fn classify_pda(p: &Pda) -> Classification {
    let live = || p.delta.iter().filter(|(_, set)| !set.is_empty());
    let lettered: HashSet<(&State, &Symbol)> = live()
        .filter(|(k, _)| k.input.is_some())
        .map(|(k, _)| (&k.state, &k.top))
        .collect();
    let singletons = p.delta.values().all(|set| set.len() <= 1);
    let lambda_exclusive = live()
        .filter(|(k, _)| k.input.is_none())
        .all(|(k, _)| !lettered.contains(&(&k.state, &k.top)));
    Classification {
        deterministic: singletons && lambda_exclusive,
        real_time: live().all(|(k, _)| k.input.is_some()),
    }
}

/// Applies every action of `δ(state, letter, top)`; empty when the configuration is dead.
pub fn step_config(p: &Pda, c: &Configuration, letter: Option<&Symbol>) -> BTreeSet<Configuration> {
    let Some(top) = c.top() else {
        return BTreeSet::new();
    };
    p.actions(&c.state, letter, top)
        .into_iter()
        .map(|a| c.apply(a))
        .collect()
}

/// Exploration limits for λ-moves in finite-word acceptance.
#[derive(Clone, Copy, Debug, Default)]
pub struct LambdaBudget {
    /// Maximal net stack growth between two input letters; `None` uses `|Q|·|Γ| + 1`.
    pub max_growth: Option<usize>,
}

impl LambdaBudget {
    pub fn growth_for(&self, p: &Pda) -> usize {
        self.max_growth
            .unwrap_or(p.states.len() * p.stack.len() + 1)
    }
}

/// The λ-closure of `configs`: every configuration reachable by λ-moves, pruning
/// revisits and branches that grow the stack by more than the budget.
pub fn lambda_closure(
    p: &Pda,
    configs: impl IntoIterator<Item = Configuration>,
    budget: &LambdaBudget,
) -> BTreeSet<Configuration> {
    let growth = budget.growth_for(p);
    let mut seen: HashSet<Configuration> = HashSet::new();
    let mut frontier: Vec<(Configuration, usize)> = Vec::new();
    for c in configs {
        let base = c.height();
        if seen.insert(c.clone()) {
            frontier.push((c, base));
        }
    }
    while let Some((c, base)) = frontier.pop() {
        for next in step_config(p, &c, None) {
            if next.height() > base + growth {
                continue;
            }
            if seen.insert(next.clone()) {
                frontier.push((next, base));
            }
        }
    }
    seen.into_iter().collect()
}

/// `x ∈ L^f(p, F)`: some run on `x`, with λ-moves interleaved, ends in a state of `F`.
pub fn accepts_finite(p: &Pda, finals: &BTreeSet<State>, x: &FiniteWord) -> bool {
    accepts_finite_with(p, finals, x, &LambdaBudget::default())
}

pub fn accepts_finite_with(
    p: &Pda,
    finals: &BTreeSet<State>,
    x: &FiniteWord,
    budget: &LambdaBudget,
) -> bool {
    let mut current = lambda_closure(p, [p.initial_configuration()], budget);
    for letter in x.iter() {
        let stepped: Vec<Configuration> = current
            .iter()
            .flat_map(|c| step_config(p, c, Some(letter)))
            .collect();
        if stepped.is_empty() {
            return false;
        }
        current = lambda_closure(p, stepped, budget);
    }
    current.iter().any(|c| finals.contains(&c.state))
}

/// Fills every `(state, letter, top)` that has neither a letter rule nor a λ-rule
/// with `skip(sink)`, so the automaton never blocks.
pub fn complete_with_sink(p: &mut Pda, sink: &State) {
    p.states.insert(sink.clone());
    let states: Vec<State> = p.states.iter().cloned().collect();
    let input: Vec<Symbol> = p.input.iter().cloned().collect();
    let stack: Vec<Symbol> = p.stack.iter().cloned().collect();
    for q in &states {
        for z in &stack {
            if p.has_lambda(q, z) {
                continue;
            }
            for a in &input {
                if p.actions(q, Some(a), z).is_empty() {
                    p.rule(q, Some(a), z, Action::Skip(sink.clone()));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::word;

    fn s(n: &str) -> Symbol {
        Symbol::new(n)
    }

    fn q(n: &str) -> State {
        State::new(n)
    }

    /// Single state eraser over {a, b, ←}.
    fn eraser() -> Pda {
        let mut p = Pda::new(
            [q("s")],
            [s("a"), s("b"), s("←")],
            [s("a"), s("b")],
            s("⊥1"),
            q("s"),
        );
        for c in ["a", "b"] {
            for z in ["⊥1", "a", "b"] {
                p.rule("s", Some(&s(c)), z, Action::Push(q("s"), s(c)));
            }
            p.rule("s", Some(&s("←")), c, Action::Pop(q("s")));
        }
        p.rule("s", Some(&s("←")), "⊥1", Action::Skip(q("s")));
        p
    }

    #[test]
    fn eraser_is_valid_deterministic_real_time() {
        let p = eraser();
        assert!(validate_pda(&p).is_empty());
        assert_eq!(
            classify_pda(&p),
            Classification {
                deterministic: true,
                real_time: true
            }
        );
    }

    #[test]
    fn pop_on_bottom_and_push_bottom_are_diagnosed() {
        let mut p = eraser();
        p.rule("s", Some(&s("a")), "⊥1", Action::Pop(q("s")));
        let d = validate_pda(&p);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::PopOnBottom);

        let mut p = eraser();
        p.rule("s", Some(&s("b")), "a", Action::Push(q("s"), s("⊥1")));
        let d = validate_pda(&p);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::PushesBottom);
    }

    #[test]
    fn undeclared_names_are_diagnosed() {
        let mut p = eraser();
        p.rule("t", Some(&s("z")), "y", Action::Push(q("u"), s("w")));
        let kinds: Vec<_> = validate_pda(&p).into_iter().map(|d| d.kind).collect();
        assert!(kinds.contains(&DiagnosticKind::UnknownSourceState(q("t"))));
        assert!(kinds.contains(&DiagnosticKind::InputOutsideAlphabet(s("z"))));
        assert!(kinds.contains(&DiagnosticKind::TopOutsideStack(s("y"))));
        assert!(kinds.contains(&DiagnosticKind::UnknownTargetState(q("u"))));
        assert!(kinds.contains(&DiagnosticKind::PushOutsideStack(s("w"))));
    }

    #[test]
    fn nondeterminism_is_detected() {
        let mut p = eraser();
        p.rule("s", Some(&s("a")), "a", Action::Skip(q("s")));
        assert!(!classify_pda(&p).deterministic);

        let mut p = eraser();
        p.rule("s", None, "a", Action::Skip(q("s")));
        let c = classify_pda(&p);
        assert!(!c.deterministic);
        assert!(!c.real_time);
    }

    #[test]
    fn lambda_rule_alone_is_deterministic() {
        let mut p = Pda::new([q("s"), q("t")], [s("a")], [], s("⊥"), q("s"));
        p.rule("s", None, "⊥", Action::Skip(q("t")));
        p.rule("t", Some(&s("a")), "⊥", Action::Skip(q("t")));
        assert_eq!(
            classify_pda(&p),
            Classification {
                deterministic: true,
                real_time: false
            }
        );
    }

    #[test]
    fn step_examples() {
        let p = eraser();
        let c = Configuration::new("s", word("⊥1 a"));
        let next = step_config(&p, &c, Some(&s("←")));
        let floor = FiniteWord::new(vec![s("⊥1")]);
        assert_eq!(
            next,
            BTreeSet::from([Configuration::new("s", floor.clone())])
        );
        let c = Configuration::new("s", floor);
        let next = step_config(&p, &c, Some(&s("a")));
        assert_eq!(
            next,
            BTreeSet::from([Configuration::new("s", word("⊥1 a"))])
        );
        assert!(step_config(&p, &c, Some(&s("#"))).is_empty());
        assert!(step_config(&p, &c, None).is_empty());
    }

    #[test]
    fn trailing_lambda_moves_count_for_final_states() {
        let mut p = Pda::new([q("s"), q("f")], [s("a")], [s("X")], s("⊥"), q("s"));
        p.rule("s", Some(&s("a")), "⊥", Action::Push(q("s"), s("X")));
        p.rule("s", None, "X", Action::Pop(q("f")));
        let finals = BTreeSet::from([q("f")]);
        assert!(accepts_finite(&p, &finals, &word("a")));
        assert!(!accepts_finite(&p, &finals, &FiniteWord::empty()));
    }

    #[test]
    fn pumping_lambda_loop_terminates() {
        let mut p = Pda::new([q("s"), q("f")], [s("a")], [s("X")], s("⊥"), q("s"));
        p.rule("s", None, "⊥", Action::Push(q("s"), s("X")));
        p.rule("s", None, "X", Action::Push(q("s"), s("X")));
        p.rule("s", None, "X", Action::Skip(q("f")));
        let finals = BTreeSet::from([q("f")]);
        assert!(accepts_finite(&p, &finals, &FiniteWord::empty()));
        assert!(!accepts_finite(&p, &finals, &word("a")));
    }

    #[test]
    fn sink_completion_never_overrides_lambda_keys() {
        let mut p = Pda::new([q("s"), q("t")], [s("a")], [], s("⊥"), q("s"));
        p.rule("s", None, "⊥", Action::Skip(q("t")));
        complete_with_sink(&mut p, &q("z"));
        assert!(p.actions(&q("s"), Some(&s("a")), &s("⊥")).is_empty());
        assert_eq!(p.actions(&q("t"), Some(&s("a")), &s("⊥")).len(), 1);
        assert!(classify_pda(&p).deterministic);
    }
}
