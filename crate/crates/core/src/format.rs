//! Line-based text formats for automata, processes, chains and games.
//!
//! ```text
//! states: p0 p1
//! input: a b
//! stack: X
//! bottom: ⊥
//! initial: p0
//! acceptance: parity p0=1 p1=0
//! p0 , a , ⊥ -> push(p1, X)
//! p1 , _ , X -> pop(p1)
//! ```
//!
//! Processes drop `input:` and `acceptance:`, take `owner: q -> Eve|Adam`
//! lines and rules `q , Z -> action`. Chains and games are bundles of
//! `[process]`, `[chain]`, `[automaton]` and `[terminal]` sections.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::automata::{Acceptance, Action, Configuration, Pda, State};
use crate::error::{Error, Result};
use crate::games::{GameInstance, Player, PushdownProcess};
use crate::triangle::TriangleChain;
use crate::words::{FiniteWord, Symbol};

/// Any object the text formats describe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Document {
    Automaton(Pda, Option<Acceptance>),
    Process(PushdownProcess),
    Chain(TriangleChain),
    Game(GameInstance),
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Drops a `//` comment that starts at a token boundary.
fn strip_comment(text: &str) -> &str {
    let mut prev_space = true;
    for (i, c) in text.char_indices() {
        if prev_space && text[i..].starts_with("//") {
            return &text[..i];
        }
        prev_space = c.is_whitespace();
    }
    text
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            text: strip_comment(l).trim(),
        })
        .filter(|l| !l.text.is_empty())
        .collect()
}

fn name<T>(line: usize, token: &str, make: fn(&str) -> Result<T>) -> Result<T> {
    make(token.trim()).map_err(|e| parse_err(line, e.to_string()))
}

fn state(line: usize, token: &str) -> Result<State> {
    name(line, token, State::try_new)
}

fn symbol(line: usize, token: &str) -> Result<Symbol> {
    name(line, token, Symbol::try_new)
}

fn names<T: Ord>(line: usize, rest: &str, make: fn(&str) -> Result<T>) -> Result<BTreeSet<T>> {
    rest.split_whitespace()
        .map(|t| name(line, t, make))
        .collect()
}

fn action(line: usize, text: &str) -> Result<Action> {
    let text = text.trim();
    let bad = || parse_err(line, format!("malformed action '{text}'"));
    let (op, args) = text.split_once('(').ok_or_else(bad)?;
    let args = args.trim().strip_suffix(')').ok_or_else(bad)?;
    let args: Vec<&str> = args.split(',').map(str::trim).collect();
    match (op.trim(), args.as_slice()) {
        ("push", [q, x]) => Ok(Action::Push(state(line, q)?, symbol(line, x)?)),
        ("pop", [q]) => Ok(Action::Pop(state(line, q)?)),
        ("skip", [q]) => Ok(Action::Skip(state(line, q)?)),
        _ => Err(bad()),
    }
}

fn acceptance(line: usize, rest: &str) -> Result<Acceptance> {
    let rest = rest.trim();
    let (kind, body) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    match kind {
        "final" => Ok(Acceptance::FinalStates(names(line, body, State::try_new)?)),
        "buchi" => Ok(Acceptance::Buchi(names(line, body, State::try_new)?)),
        "parity" => body
            .split_whitespace()
            .map(|pair| {
                let (q, c) = pair.split_once('=').ok_or_else(|| {
                    parse_err(line, format!("expected state=color, found '{pair}'"))
                })?;
                let c: u32 = c
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad color '{c}'")))?;
                Ok((state(line, q)?, c))
            })
            .collect::<Result<_>>()
            .map(Acceptance::Parity),
        "muller" => {
            let mut family = BTreeSet::new();
            let mut body = body.trim();
            while !body.is_empty() {
                let inner = body
                    .strip_prefix('{')
                    .ok_or_else(|| parse_err(line, "muller sets are written {q r}"))?;
                let (set, tail) = inner
                    .split_once('}')
                    .ok_or_else(|| parse_err(line, "unclosed muller set"))?;
                family.insert(names(line, set, State::try_new)?);
                body = tail.trim();
            }
            Ok(Acceptance::Muller(family))
        }
        other => Err(parse_err(
            line,
            format!("unknown acceptance kind '{other}'"),
        )),
    }
}

#[derive(Default)]
struct Headers {
    fields: BTreeMap<&'static str, (usize, String)>,
}

impl Headers {
    fn set(&mut self, key: &'static str, line: usize, value: &str) -> Result<()> {
        if self.fields.insert(key, (line, value.to_string())).is_some() {
            return Err(parse_err(line, format!("duplicate '{key}:' line")));
        }
        Ok(())
    }

    fn get(&self, key: &str, at: usize) -> Result<(usize, &str)> {
        self.fields
            .get(key)
            .map(|(l, v)| (*l, v.as_str()))
            .ok_or_else(|| parse_err(at, format!("missing '{key}:' line")))
    }
}

const AUTOMATON_KEYS: [&str; 6] = [
    "states",
    "input",
    "stack",
    "bottom",
    "initial",
    "acceptance",
];
const PROCESS_KEYS: [&str; 3] = ["states", "stack", "bottom"];

/// Splits `key: value` when `key` is one of `keys`.
fn header<'a>(text: &'a str, keys: &[&'static str]) -> Option<(&'static str, &'a str)> {
    let (k, v) = text.split_once(':')?;
    let k = k.trim();
    keys.iter().find(|key| **key == k).map(|key| (*key, v))
}

fn single(line: usize, value: &str, what: &str) -> Result<String> {
    let mut it = value.split_whitespace();
    match (it.next(), it.next()) {
        (Some(v), None) => Ok(v.to_string()),
        _ => Err(parse_err(line, format!("expected exactly one {what}"))),
    }
}

fn parse_automaton(ls: &[Line<'_>], at: usize) -> Result<(Pda, Option<Acceptance>)> {
    let mut h = Headers::default();
    let mut rules = Vec::new();
    for l in ls {
        if let Some((key, value)) = header(l.text, &AUTOMATON_KEYS) {
            h.set(key, l.number, value)?;
        } else if l.text.contains("->") {
            rules.push(l);
        } else {
            return Err(parse_err(
                l.number,
                format!("unknown directive '{}'", l.text),
            ));
        }
    }
    let (sl, states) = h.get("states", at)?;
    let (il, input) = h.get("input", at)?;
    let (kl, stack) = h.get("stack", at)?;
    let (bl, bottom) = h.get("bottom", at)?;
    let (nl, initial) = h.get("initial", at)?;
    let mut p = Pda::new(
        names(sl, states, State::try_new)?,
        names(il, input, Symbol::try_new)?,
        names(kl, stack, Symbol::try_new)?,
        symbol(bl, &single(bl, bottom, "bottom symbol")?)?,
        state(nl, &single(nl, initial, "initial state")?)?,
    );
    for l in rules {
        let (lhs, rhs) = l.text.split_once("->").expect("checked above");
        let parts: Vec<&str> = lhs.split(',').map(str::trim).collect();
        let [q, a, z] = parts.as_slice() else {
            return Err(parse_err(
                l.number,
                "expected 'state , input , top -> action'",
            ));
        };
        let input = if *a == "_" {
            None
        } else {
            Some(symbol(l.number, a)?)
        };
        p.rule(
            state(l.number, q)?,
            input.as_ref(),
            symbol(l.number, z)?,
            action(l.number, rhs)?,
        );
    }
    let acc = match h.fields.get("acceptance") {
        Some((l, v)) => Some(acceptance(*l, v)?),
        None => None,
    };
    Ok((p, acc))
}

fn parse_process(ls: &[Line<'_>], at: usize) -> Result<PushdownProcess> {
    let mut h = Headers::default();
    let mut owners = Vec::new();
    let mut rules = Vec::new();
    for l in ls {
        if let Some((key, value)) = header(l.text, &PROCESS_KEYS) {
            h.set(key, l.number, value)?;
        } else if let Some(rest) = l.text.strip_prefix("owner:") {
            owners.push((l.number, rest));
        } else if l.text.contains("->") {
            rules.push(l);
        } else {
            return Err(parse_err(
                l.number,
                format!("unknown directive '{}'", l.text),
            ));
        }
    }
    let (sl, states) = h.get("states", at)?;
    let (kl, stack) = h.get("stack", at)?;
    let (bl, bottom) = h.get("bottom", at)?;
    let mut p = PushdownProcess::new(
        names(sl, states, State::try_new)?,
        names(kl, stack, Symbol::try_new)?,
        symbol(bl, &single(bl, bottom, "bottom symbol")?)?,
    );
    for (line, rest) in owners {
        let (q, who) = rest
            .split_once("->")
            .ok_or_else(|| parse_err(line, "expected 'owner: q -> Eve|Adam'"))?;
        let who = match who.trim() {
            "Eve" => Player::Eve,
            "Adam" => Player::Adam,
            other => return Err(parse_err(line, format!("unknown player '{other}'"))),
        };
        p.set_owner(state(line, q)?, who);
    }
    for l in rules {
        let (lhs, rhs) = l.text.split_once("->").expect("checked above");
        let parts: Vec<&str> = lhs.split(',').map(str::trim).collect();
        let [q, z] = parts.as_slice() else {
            return Err(parse_err(l.number, "expected 'state , top -> action'"));
        };
        p.rule(
            state(l.number, q)?,
            symbol(l.number, z)?,
            action(l.number, rhs)?,
        );
    }
    Ok(p)
}

struct Section<'a> {
    name: &'a str,
    line: usize,
    body: Vec<Line<'a>>,
}

fn sections<'a>(ls: Vec<Line<'a>>) -> Result<Vec<Section<'a>>> {
    let mut out: Vec<Section<'a>> = Vec::new();
    for l in ls {
        if let Some(name) = l.text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            out.push(Section {
                name: name.trim(),
                line: l.number,
                body: Vec::new(),
            });
        } else {
            match out.last_mut() {
                Some(s) => s.body.push(l),
                None => return Err(parse_err(l.number, "content before the first section")),
            }
        }
    }
    Ok(out)
}

fn parse_chain(secs: &[Section<'_>], at: usize) -> Result<TriangleChain> {
    let mut real_time = None;
    let mut chain = Vec::new();
    let mut terminal = None;
    for s in secs {
        match s.name {
            "chain" => {
                for l in &s.body {
                    let value = l.text.strip_prefix("realtime:").ok_or_else(|| {
                        parse_err(l.number, format!("unknown directive '{}'", l.text))
                    })?;
                    real_time = Some(match value.trim() {
                        "true" => true,
                        "false" => false,
                        other => {
                            return Err(parse_err(
                                l.number,
                                format!("expected true or false, found '{other}'"),
                            ))
                        }
                    });
                }
            }
            "automaton" => {
                if terminal.is_some() {
                    return Err(parse_err(s.line, "[automaton] after [terminal]"));
                }
                let (p, acc) = parse_automaton(&s.body, s.line)?;
                if acc.is_some() {
                    return Err(parse_err(
                        s.line,
                        "chain automata take no acceptance condition",
                    ));
                }
                chain.push(p);
            }
            "terminal" => {
                if terminal.is_some() {
                    return Err(parse_err(s.line, "more than one [terminal]"));
                }
                let (p, acc) = parse_automaton(&s.body, s.line)?;
                let acc = acc
                    .ok_or_else(|| parse_err(s.line, "the terminal needs an 'acceptance:' line"))?;
                terminal = Some((p, acc));
            }
            other => return Err(parse_err(s.line, format!("unknown section [{other}]"))),
        }
    }
    let (terminal, acc) = terminal.ok_or_else(|| parse_err(at, "missing [terminal] section"))?;
    let real_time =
        real_time.ok_or_else(|| parse_err(at, "missing 'realtime:' line in [chain]"))?;
    Ok(TriangleChain::new(chain, terminal, acc, real_time))
}

/// Parses any document; the kind is recognized from its first line.
pub fn parse_document(text: &str) -> Result<Document> {
    let ls = lines(text);
    let Some(first) = ls.first() else {
        return Err(parse_err(1, "empty document"));
    };
    if !first.text.starts_with('[') {
        let is_process = ls.iter().any(|l| l.text.starts_with("owner:"))
            || !ls.iter().any(|l| header(l.text, &["input"]).is_some());
        return if is_process {
            parse_process(&ls, 1).map(Document::Process)
        } else {
            parse_automaton(&ls, 1).map(|(p, a)| Document::Automaton(p, a))
        };
    }
    let secs = sections(ls)?;
    match secs.iter().position(|s| s.name == "process") {
        Some(i) => {
            let process = parse_process(&secs[i].body, secs[i].line)?;
            let rest: Vec<Section<'_>> = secs
                .into_iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, s)| s)
                .collect();
            let condition = parse_chain(&rest, 1)?;
            GameInstance::new(process, condition).map(Document::Game)
        }
        None => parse_chain(&secs, 1).map(Document::Chain),
    }
}

pub fn parse_automaton_text(text: &str) -> Result<(Pda, Option<Acceptance>)> {
    parse_automaton(&lines(text), 1)
}

pub fn parse_process_text(text: &str) -> Result<PushdownProcess> {
    parse_process(&lines(text), 1)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_action(a: &Action) -> String {
    match a {
        Action::Skip(q) => format!("skip({q})"),
        Action::Pop(q) => format!("pop({q})"),
        Action::Push(q, x) => format!("push({q}, {x})"),
    }
}

fn print_acceptance(acc: &Acceptance) -> String {
    match acc {
        Acceptance::FinalStates(f) => format!("final {}", join(f)).trim_end().to_string(),
        Acceptance::Buchi(f) => format!("buchi {}", join(f)).trim_end().to_string(),
        Acceptance::Parity(col) => format!(
            "parity {}",
            join(col.iter().map(|(q, c)| format!("{q}={c}")))
        ),
        Acceptance::Muller(family) => {
            let sets = family.iter().map(|s| format!("{{{}}}", join(s)));
            format!("muller {}", join(sets)).trim_end().to_string()
        }
    }
}

pub fn print_automaton(p: &Pda, acc: Option<&Acceptance>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "states: {}", join(p.states()));
    let _ = writeln!(out, "input: {}", join(p.input_alphabet()));
    let _ = writeln!(out, "stack: {}", join(p.stack_alphabet()));
    let _ = writeln!(out, "bottom: {}", p.bottom());
    let _ = writeln!(out, "initial: {}", p.initial());
    if let Some(acc) = acc {
        let _ = writeln!(out, "acceptance: {}", print_acceptance(acc));
    }
    for (key, actions) in p.delta() {
        let input = key
            .input
            .as_ref()
            .map_or("_".to_string(), Symbol::to_string);
        for a in actions {
            let _ = writeln!(
                out,
                "{} , {input} , {} -> {}",
                key.state,
                key.top,
                print_action(a)
            );
        }
    }
    out
}

pub fn print_process(p: &PushdownProcess) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "states: {}", join(p.states()));
    let _ = writeln!(out, "stack: {}", join(p.stack_alphabet()));
    let _ = writeln!(out, "bottom: {}", p.bottom());
    for (q, who) in p.owners() {
        let _ = writeln!(out, "owner: {q} -> {who}");
    }
    for ((q, z), actions) in p.delta() {
        for a in actions {
            let _ = writeln!(out, "{q} , {z} -> {}", print_action(a));
        }
    }
    out
}

pub fn print_chain(c: &TriangleChain) -> String {
    let mut out = format!("[chain]\nrealtime: {}\n", c.real_time);
    for p in &c.chain {
        out.push_str("\n[automaton]\n");
        out.push_str(&print_automaton(p, None));
    }
    out.push_str("\n[terminal]\n");
    out.push_str(&print_automaton(&c.terminal, Some(&c.acceptance)));
    out
}

pub fn print_game(g: &GameInstance) -> String {
    format!(
        "[process]\n{}\n{}",
        print_process(&g.process),
        print_chain(&g.condition)
    )
}

pub fn print_document(d: &Document) -> String {
    match d {
        Document::Automaton(p, acc) => print_automaton(p, acc.as_ref()),
        Document::Process(p) => print_process(p),
        Document::Chain(c) => print_chain(c),
        Document::Game(g) => print_game(g),
    }
}

/// Parses `q : ⊥ a b`; the stack is a finite-word literal written bottom first.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let (q, stack) = text.split_once(':').ok_or_else(|| Error::WordLiteral {
        literal: text.to_string(),
        message: "a configuration is written 'state : stack'".into(),
    })?;
    Ok(Configuration::new(
        State::try_new(q.trim())?,
        FiniteWord::parse(stack)?,
    ))
}
