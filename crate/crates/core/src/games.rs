//! Pushdown processes, games with stack-limit winning conditions, and a
//! bounded solver for games whose plays are forced after a few moves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::automata::{Action, Configuration, Diagnostic, DiagnosticKind, RuleKey, State};
use crate::error::{Error, Result};
use crate::omega::RunLimits;
use crate::triangle::{CompiledChain, TriangleChain};
use crate::words::{FiniteWord, LassoWord, Symbol};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eve => "Eve",
            Player::Adam => "Adam",
        })
    }
}

/// A pushdown automaton without input, with every state owned by a player.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PushdownProcess {
    states: BTreeSet<State>,
    stack: BTreeSet<Symbol>,
    bottom: Symbol,
    delta: BTreeMap<(State, Symbol), BTreeSet<Action>>,
    owner: BTreeMap<State, Player>,
}

impl PushdownProcess {
    pub fn new(
        states: impl IntoIterator<Item = State>,
        stack: impl IntoIterator<Item = Symbol>,
        bottom: Symbol,
    ) -> Self {
        let mut stack: BTreeSet<Symbol> = stack.into_iter().collect();
        stack.insert(bottom.clone());
        PushdownProcess {
            states: states.into_iter().collect(),
            stack,
            bottom,
            delta: BTreeMap::new(),
            owner: BTreeMap::new(),
        }
    }

    pub fn rule(&mut self, state: impl Into<State>, top: impl Into<Symbol>, action: Action) {
        self.delta
            .entry((state.into(), top.into()))
            .or_default()
            .insert(action);
    }

    pub fn set_owner(&mut self, state: impl Into<State>, player: Player) {
        self.owner.insert(state.into(), player);
    }

    pub fn states(&self) -> &BTreeSet<State> {
        &self.states
    }

    pub fn stack_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.stack
    }

    pub fn bottom(&self) -> &Symbol {
        &self.bottom
    }

    pub fn delta(&self) -> &BTreeMap<(State, Symbol), BTreeSet<Action>> {
        &self.delta
    }

    pub fn owners(&self) -> &BTreeMap<State, Player> {
        &self.owner
    }

    /// The owner of `q`; unowned states belong to Eve until validation rejects them.
    pub fn owner(&self, q: &State) -> Player {
        self.owner.get(q).copied().unwrap_or(Player::Eve)
    }

    /// The same process with every owner swapped.
    pub fn swapped(&self) -> PushdownProcess {
        let mut out = self.clone();
        for p in out.owner.values_mut() {
            *p = p.opponent();
        }
        out
    }

    pub fn actions(&self, q: &State, top: &Symbol) -> impl Iterator<Item = &Action> {
        self.delta
            .get(&(q.clone(), top.clone()))
            .into_iter()
            .flatten()
    }
}

pub fn validate_process(p: &PushdownProcess) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for q in &p.states {
        if !p.owner.contains_key(q) {
            out.push(Diagnostic {
                key: None,
                kind: DiagnosticKind::MissingOwner(q.clone()),
            });
        }
    }
    for q in p.owner.keys().filter(|q| !p.states.contains(*q)) {
        out.push(Diagnostic {
            key: None,
            kind: DiagnosticKind::UnknownSourceState(q.clone()),
        });
    }
    for ((q, top), actions) in &p.delta {
        let key = RuleKey {
            state: q.clone(),
            input: None,
            top: top.clone(),
        };
        let mut diag = |kind| {
            out.push(Diagnostic {
                key: Some(key.clone()),
                kind,
            })
        };
        if !p.states.contains(q) {
            diag(DiagnosticKind::UnknownSourceState(q.clone()));
        }
        if !p.stack.contains(top) {
            diag(DiagnosticKind::TopOutsideStack(top.clone()));
        }
        for action in actions {
            if !p.states.contains(action.target()) {
                diag(DiagnosticKind::UnknownTargetState(action.target().clone()));
            }
            match action {
                Action::Pop(_) if *top == p.bottom => diag(DiagnosticKind::PopOnBottom),
                Action::Push(_, s) if *s == p.bottom => diag(DiagnosticKind::PushesBottom),
                Action::Push(_, s) if !p.stack.contains(s) => {
                    diag(DiagnosticKind::PushOutsideStack(s.clone()))
                }
                _ => {}
            }
        }
    }
    out
}

/// One successor per applicable action; empty at a dead end.
pub fn successors(p: &PushdownProcess, c: &Configuration) -> Vec<Configuration> {
    let Some(top) = c.top() else {
        return Vec::new();
    };
    p.actions(&c.state, top).map(|a| c.apply(a)).collect()
}

/// A pushdown process judged by a triangle-chain winning condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameInstance {
    pub process: PushdownProcess,
    pub condition: TriangleChain,
}

impl GameInstance {
    pub fn new(process: PushdownProcess, condition: TriangleChain) -> Result<GameInstance> {
        let diags = validate_process(&process);
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        if condition.head().input_alphabet() != process.stack_alphabet() {
            return Err(Error::InvalidChain(vec![
                "the condition does not read the process stack alphabet".to_string(),
            ]));
        }
        Ok(GameInstance { process, condition })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CycleKind {
    /// The cycle returns to the identical configuration.
    Stationary,
    /// The cycle returns to the same state and top with `net` appended.
    Ascending(FiniteWord),
}

/// A finitely represented infinite play.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlayLasso {
    pub start: Configuration,
    pub prefix_moves: Vec<Action>,
    pub cycle_moves: Vec<Action>,
    pub kind: CycleKind,
}

impl PlayLasso {
    /// Replays the prefix, returning the cycle entry configuration.
    pub fn entry(&self) -> Configuration {
        self.prefix_moves
            .iter()
            .fold(self.start.clone(), |c, a| c.apply(a))
    }

    /// The limit of the stack contents, when it is infinite.
    pub fn stack_limit(&self) -> Option<LassoWord> {
        match &self.kind {
            CycleKind::Stationary => None,
            CycleKind::Ascending(net) => LassoWord::new(self.entry().stack, net.clone()).ok(),
        }
    }

    /// Replays prefix and cycle and checks the lasso shape.
    pub fn is_consistent(&self, p: &PushdownProcess) -> bool {
        let mut c = self.start.clone();
        for a in &self.prefix_moves {
            match step_with(p, &c, a) {
                Some(next) => c = next,
                None => return false,
            }
        }
        let entry = c.clone();
        for a in &self.cycle_moves {
            match step_with(p, &c, a) {
                Some(next) if next.height() >= entry.height() => c = next,
                _ => return false,
            }
        }
        match &self.kind {
            CycleKind::Stationary => c == entry,
            CycleKind::Ascending(net) => {
                !net.is_empty() && c.state == entry.state && c.stack == entry.stack.concat(net)
            }
        }
    }
}

fn step_with(p: &PushdownProcess, c: &Configuration, a: &Action) -> Option<Configuration> {
    let top = c.top()?;
    p.actions(&c.state, top).any(|b| b == a).then(|| c.apply(a))
}

/// `Ω`: the stack is strictly unbounded and its limit is in the chain's language.
pub fn eve_wins_play(pl: &PlayLasso, cond: &TriangleChain) -> Result<bool> {
    eve_wins_play_compiled(pl, &cond.compile()?)
}

fn eve_wins_play_compiled(pl: &PlayLasso, cond: &CompiledChain) -> Result<bool> {
    match pl.stack_limit() {
        Some(limit) => cond.member(&limit),
        None => Ok(false),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    EveWins,
    AdamWins,
    Unknown(String),
}

impl Verdict {
    fn winner(p: Player) -> Verdict {
        match p {
            Player::Eve => Verdict::EveWins,
            Player::Adam => Verdict::AdamWins,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::EveWins => f.write_str("EveWins"),
            Verdict::AdamWins => f.write_str("AdamWins"),
            Verdict::Unknown(reason) => write!(f, "Unknown({reason})"),
        }
    }
}

/// Who wins a finite play that stops at a dead end.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum DeadEnd {
    /// The player who cannot move loses.
    #[default]
    MoverLoses,
    /// Only infinite plays can satisfy the winning condition, so Eve loses.
    EveLosesFinite,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Bounds {
    /// Maximal number of moves along an explored play.
    pub depth: usize,
    /// Maximal absolute stack height.
    pub height: usize,
    pub dead_end: DeadEnd,
}

impl Bounds {
    /// The default bounds for starting configurations `(q, ⊥·u)` with `|u| ≤ n`.
    pub fn for_width(n: usize) -> Bounds {
        Bounds {
            depth: 4 * (n + 4),
            height: n + 8,
            dead_end: DeadEnd::MoverLoses,
        }
    }
}

/// A game with its condition compiled, ready for repeated queries.
#[derive(Clone, Debug)]
pub struct Solver<'g> {
    game: &'g GameInstance,
    condition: CompiledChain,
}

impl<'g> Solver<'g> {
    pub fn new(game: &'g GameInstance, limits: RunLimits) -> Result<Solver<'g>> {
        Ok(Solver {
            game,
            condition: game.condition.compile_with(limits)?,
        })
    }

    /// Explores the play tree from `start`; Eve nodes are disjunctions and
    /// Adam nodes conjunctions. Plays close at a repeated configuration or an
    /// ascending repeat of state and top.
    pub fn solve(&self, start: &Configuration, bounds: &Bounds) -> Result<Verdict> {
        if bounds.depth == 0 {
            return Ok(Verdict::Unknown(
                "depth bound 0 leaves no exploration budget".into(),
            ));
        }
        let mut path = vec![start.clone()];
        let mut moves = Vec::new();
        self.explore(&mut path, &mut moves, bounds)
    }

    fn explore(
        &self,
        path: &mut Vec<Configuration>,
        moves: &mut Vec<Action>,
        bounds: &Bounds,
    ) -> Result<Verdict> {
        let p = &self.game.process;
        let here = path.last().expect("paths are nonempty").clone();
        match self.closure(path, moves) {
            Ok(Some(play)) => {
                let won = eve_wins_play_compiled(&play, &self.condition)?;
                return Ok(if won {
                    Verdict::EveWins
                } else {
                    Verdict::AdamWins
                });
            }
            Ok(None) => {}
            Err(Error::BoundExhausted { reason, .. }) => return Ok(Verdict::Unknown(reason)),
            Err(e) => return Err(e),
        }
        if here.height() > bounds.height {
            return Ok(Verdict::Unknown(format!(
                "stack height exceeds {}",
                bounds.height
            )));
        }
        let top = here
            .top()
            .expect("configurations keep the bottom symbol")
            .clone();
        let actions: Vec<Action> = p.actions(&here.state, &top).cloned().collect();
        let mover = p.owner(&here.state);
        if actions.is_empty() {
            return Ok(match bounds.dead_end {
                DeadEnd::MoverLoses => Verdict::winner(mover.opponent()),
                DeadEnd::EveLosesFinite => Verdict::AdamWins,
            });
        }
        if moves.len() >= bounds.depth {
            return Ok(Verdict::Unknown(format!(
                "play longer than {} moves",
                bounds.depth
            )));
        }
        let mut unknown = None;
        for a in actions {
            path.push(here.apply(&a));
            moves.push(a);
            let v = self.explore(path, moves, bounds)?;
            path.pop();
            moves.pop();
            match v {
                Verdict::Unknown(reason) => unknown = Some(reason),
                v if v == Verdict::winner(mover) => return Ok(v),
                _ => {}
            }
        }
        Ok(match unknown {
            Some(reason) => Verdict::Unknown(reason),
            None => Verdict::winner(mover.opponent()),
        })
    }

    /// Closes the current path into a play when its last configuration repeats
    /// an earlier one or ascends from it. The repeated segment must be forced.
    fn closure(&self, path: &[Configuration], moves: &[Action]) -> Result<Option<PlayLasso>> {
        let p = &self.game.process;
        let here = path.last().expect("paths are nonempty");
        let n = path.len() - 1;
        for i in (0..n).rev() {
            let entry = &path[i];
            if entry.state != here.state || entry.top() != here.top() {
                continue;
            }
            let h = entry.height();
            if path[i..].iter().any(|c| c.height() < h) {
                continue;
            }
            let kind = if here.stack == entry.stack {
                CycleKind::Stationary
            } else if here.height() > h {
                CycleKind::Ascending(here.stack[h..].to_vec().into())
            } else {
                continue;
            };
            if path[i..n].iter().any(|c| successors(p, c).len() != 1) {
                return Err(Error::BoundExhausted {
                    word: here.to_string(),
                    reason: "a repeated segment contains a choice".into(),
                });
            }
            return Ok(Some(PlayLasso {
                start: path[0].clone(),
                prefix_moves: moves[..i].to_vec(),
                cycle_moves: moves[i..].to_vec(),
                kind,
            }));
        }
        Ok(None)
    }

    /// `{ u ∈ candidates : (q, ⊥·u) is won by Eve }`; any unknown verdict aborts.
    pub fn slice(
        &self,
        q: &State,
        candidates: &[FiniteWord],
        bounds: &Bounds,
    ) -> Result<BTreeSet<FiniteWord>> {
        let bottom = self.game.process.bottom().clone();
        let mut out = BTreeSet::new();
        for u in candidates {
            let stack = FiniteWord::new(vec![bottom.clone()]).concat(u);
            let start = Configuration::new(q, stack);
            match self.solve(&start, bounds) {
                Ok(Verdict::EveWins) => {
                    out.insert(u.clone());
                }
                Ok(Verdict::AdamWins) => {}
                Ok(Verdict::Unknown(reason)) => {
                    return Err(Error::BoundExhausted {
                        word: u.to_string(),
                        reason,
                    })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

pub fn solve_bounded(g: &GameInstance, start: &Configuration, bounds: &Bounds) -> Result<Verdict> {
    Solver::new(g, RunLimits::default())?.solve(start, bounds)
}

/// All words over `letters` of length at most `n`, shortest first.
pub fn words_up_to(letters: &[Symbol], n: usize) -> Vec<FiniteWord> {
    let mut out = vec![FiniteWord::empty()];
    let mut layer = vec![FiniteWord::empty()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |a| {
                    let mut w = w.clone();
                    w.push(a.clone());
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// The winning slice at `q` over every stack word of length at most `n`
/// (the bottom symbol excluded), with the default bounds for `n`.
pub fn winning_set_slice(g: &GameInstance, q: &State, n: usize) -> Result<BTreeSet<FiniteWord>> {
    let letters: Vec<Symbol> = g
        .process
        .stack_alphabet()
        .iter()
        .filter(|s| *s != g.process.bottom())
        .cloned()
        .collect();
    Solver::new(g, RunLimits::default())?.slice(q, &words_up_to(&letters, n), &Bounds::for_width(n))
}
