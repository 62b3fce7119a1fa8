//! The acceptance battery: nine exact checks on the catalog constructions.

use std::collections::BTreeSet;
use std::fmt;

use crate::automata::{Acceptance, DeterministicPda, Pda, State};
use crate::brute::check_analysis;
use crate::catalog::{self, oracle_language, CatalogAutomaton};
use crate::error::Result;
use crate::games::{words_up_to, Bounds, GameInstance, Solver};
use crate::omega::{Completeness, RunLimits, DEFAULT_STEP_CEILING};
use crate::sample::LassoSampler;
use crate::triangle::{
    complement_chain, decompose_unique, pad_transform, SegmentRun, TriangleChain,
};
use crate::words::{project_erase, tilde_member, FiniteWord, LassoWord, Symbol, WordLimit};

/// A deliberate defect injected to check that the battery notices it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mutant {
    /// Gives the non-context-free game the partition of the ambiguous one.
    SwappedPartition,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SuiteConfig {
    pub step_ceiling: usize,
    pub mutant: Option<Mutant>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            step_ceiling: DEFAULT_STEP_CEILING,
            mutant: None,
        }
    }
}

impl SuiteConfig {
    fn limits(&self) -> RunLimits {
        RunLimits {
            step_ceiling: self.step_ceiling,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Pass(String),
    Fail(String),
    Exhausted(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriterionResult {
    pub number: usize,
    pub title: &'static str,
    pub outcome: Outcome,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Outcome::Pass(_))
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, detail) = match &self.outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => ("FAIL", d),
            Outcome::Exhausted(d) => ("EXHAUSTED", d),
        };
        write!(
            f,
            "criterion {} {tag}: {} ({detail})",
            self.number, self.title
        )
    }
}

/// 0 when everything passed, 1 on any failure, otherwise 3 on bound exhaustion.
pub fn exit_code(results: &[CriterionResult]) -> i32 {
    if results
        .iter()
        .any(|r| matches!(r.outcome, Outcome::Fail(_)))
    {
        1
    } else if results
        .iter()
        .any(|r| matches!(r.outcome, Outcome::Exhausted(_)))
    {
        3
    } else {
        0
    }
}

pub const TITLES: [&str; 9] = [
    "eraser game winning slice",
    "erased-language witnesses",
    "ambiguous slice law",
    "non-context-free slice law",
    "complementation",
    "run engine against simulation",
    "segment languages and unique decomposition",
    "intersection witnesses",
    "padding laws",
];

type Check = fn(&SuiteConfig) -> Result<std::result::Result<String, String>>;

const CHECKS: [Check; 9] = [
    criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8,
    criterion9,
];

pub fn run_criterion(n: usize, cfg: &SuiteConfig) -> CriterionResult {
    let outcome = match CHECKS[n - 1](cfg) {
        Ok(Ok(detail)) => Outcome::Pass(detail),
        Ok(Err(detail)) => Outcome::Fail(detail),
        Err(e) if e.is_exhaustion() => Outcome::Exhausted(e.to_string()),
        Err(e) => Outcome::Fail(format!("error: {e}")),
    };
    CriterionResult {
        number: n,
        title: TITLES[n - 1],
        outcome,
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    (1..=9).map(|n| run_criterion(n, cfg)).collect()
}

fn sy(s: &str) -> Symbol {
    Symbol::new(s)
}

fn letters(s: &[&str]) -> Vec<Symbol> {
    s.iter().map(|x| sy(x)).collect()
}

fn repeat(x: &str, n: usize) -> Vec<Symbol> {
    vec![sy(x); n]
}

fn abc(n: usize, m: usize, p: usize) -> FiniteWord {
    [repeat("a", n), repeat("b", m), repeat("c", p)]
        .concat()
        .into()
}

fn eraser_game() -> GameInstance {
    let (lrec, finals) = catalog::anbn_recognizer();
    catalog::build_game_eraser(&lrec, &finals).expect("the recognizer is deterministic")
}

fn anbn(u: &FiniteWord) -> bool {
    oracle_language("anbn", u).expect("registered finitary language")
}

fn show(set: &BTreeSet<FiniteWord>) -> String {
    let items: Vec<String> = set.iter().take(5).map(|w| format!("'{w}'")).collect();
    format!(
        "{{{}{}}}",
        items.join(", "),
        if set.len() > 5 { ", …" } else { "" }
    )
}

fn compare(
    name: &str,
    got: &BTreeSet<FiniteWord>,
    want: &BTreeSet<FiniteWord>,
) -> std::result::Result<(), String> {
    if got == want {
        return Ok(());
    }
    let extra: BTreeSet<_> = got.difference(want).cloned().collect();
    let missing: BTreeSet<_> = want.difference(got).cloned().collect();
    Err(format!(
        "{name}: unexpected {} missing {}",
        show(&extra),
        show(&missing)
    ))
}

fn criterion1(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let g = eraser_game();
    let candidates = words_up_to(&letters(&["a", "b", "←"]), 6);
    let got = Solver::new(&g, cfg.limits())?.slice(
        &State::new("q"),
        &candidates,
        &Bounds::for_width(6),
    )?;
    let want: BTreeSet<FiniteWord> = candidates
        .iter()
        .filter(|u| tilde_member(anbn, u))
        .cloned()
        .collect();
    Ok(compare("slice", &got, &want)
        .map(|_| format!("{} of {} words win", got.len(), candidates.len())))
}

fn criterion2(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let g = eraser_game();
    let solver = Solver::new(&g, cfg.limits())?;
    for n in 0..=5 {
        let tail = [repeat("←", 2 * n), letters(&["a", "b"])].concat();
        let inside: FiniteWord = [repeat("a", n), repeat("b", n), tail.clone()]
            .concat()
            .into();
        let outside: FiniteWord = [repeat("a", n + 1), repeat("b", n + 1), tail]
            .concat()
            .into();
        if !tilde_member(anbn, &inside) || tilde_member(anbn, &outside) {
            return Ok(Err(format!("eraser evaluation disagrees at n = {n}")));
        }
        let bounds = Bounds::for_width(outside.len());
        let got = solver.slice(&State::new("q"), &[inside.clone(), outside], &bounds)?;
        if got != BTreeSet::from([inside]) {
            return Ok(Err(format!("game slice disagrees at n = {n}")));
        }
    }
    Ok(Ok("n = 0..=5".into()))
}

/// The slice at `q` restricted to `a^n b^m c^p` with 1 ≤ n, m, p ≤ 6.
fn abc_slice(g: &GameInstance, cfg: &SuiteConfig) -> Result<BTreeSet<FiniteWord>> {
    let candidates: Vec<FiniteWord> = (1..=6)
        .flat_map(|n| (1..=6).flat_map(move |m| (1..=6).map(move |p| abc(n, m, p))))
        .collect();
    Solver::new(g, cfg.limits())?.slice(&State::new("q"), &candidates, &Bounds::for_width(18))
}

fn abc_set(pred: impl Fn(usize, usize, usize) -> bool) -> BTreeSet<FiniteWord> {
    let mut out = BTreeSet::new();
    for n in 1..=6 {
        for m in 1..=6 {
            for p in 1..=6 {
                if pred(n, m, p) {
                    out.insert(abc(n, m, p));
                }
            }
        }
    }
    out
}

fn criterion3(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let got = abc_slice(&catalog::build_game_abc_or(), cfg)?;
    let want = abc_set(|n, m, p| n == m || m == p);
    let oracle = abc_set(|n, m, p| oracle_language("V", &abc(n, m, p)).unwrap_or(false));
    if oracle != want {
        return Ok(Err(
            "the counting oracle for V disagrees with the closed form".into(),
        ));
    }
    Ok(compare("slice", &got, &want).map(|_| format!("{} of 216 words win", got.len())))
}

fn criterion4(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let game = match cfg.mutant {
        Some(Mutant::SwappedPartition) => catalog::build_game_abc_or(),
        None => catalog::build_game_abc_and(),
    };
    let got = abc_slice(&game, cfg)?;
    let want = abc_set(|n, m, p| n == m && m == p);
    if want != abc_set(|n, m, p| oracle_language("anbncn", &abc(n, m, p)).unwrap_or(false)) {
        return Ok(Err(
            "the counting oracle for a^n b^n c^n disagrees with the closed form".into(),
        ));
    }
    if let Err(e) = compare("slice", &got, &want) {
        return Ok(Err(e));
    }
    let mutant = GameInstance::new(game.process.swapped(), game.condition.clone())?;
    let swapped = abc_slice(&mutant, cfg)?;
    Ok(compare(
        "swapped partition",
        &swapped,
        &abc_set(|n, m, p| n == m || m == p),
    )
    .map(|_| {
        format!(
            "{} winners, swapped partition gives {}",
            got.len(),
            swapped.len()
        )
    }))
}

fn bottomed(bottom: &str, u: &FiniteWord, cycle: &str) -> LassoWord {
    LassoWord::new(
        FiniteWord::new(vec![sy(bottom)]).concat(u),
        FiniteWord::new(vec![sy(cycle)]),
    )
    .expect("nonempty cycle")
}

fn head_shape(id: &str) -> CatalogAutomaton {
    catalog::automata()
        .into_iter()
        .find(|a| a.id == id)
        .expect("registered catalog automaton")
}

/// Checks that `c` and its complement disagree on every word; returns the
/// number of words and how many belong to `c`.
fn complement_disagrees(
    c: &TriangleChain,
    words: &[LassoWord],
    limits: RunLimits,
) -> Result<std::result::Result<usize, String>> {
    let original = c.compile_with(limits)?;
    let complement = complement_chain(c)?.compile_with(limits)?;
    let mut members = 0;
    for w in words {
        let a = original.member(w)?;
        if a == complement.member(w)? {
            return Ok(Err(format!("both chains answer {a} on {w}")));
        }
        members += a as usize;
    }
    Ok(Ok(members))
}

fn criterion5(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let cases = [
        (
            "game:eraser:anbn.a1",
            eraser_game().condition,
            letters(&["a", "b", "←"]),
        ),
        (
            "game:abc-or.a1",
            catalog::abc_chain(),
            letters(&["a", "b", "c"]),
        ),
    ];
    let mut report = Vec::new();
    for (seed, (head, chain, sigma)) in cases.into_iter().enumerate() {
        let shape = head_shape(head).shape;
        let mut sampler = LassoSampler::new(
            500 + seed as u64,
            chain.head().input_alphabet().iter().cloned(),
            Some(shape),
            10,
        );
        let mut words = sampler.take(1000);
        words.extend(words_up_to(&sigma, 5).iter().map(|u| bottomed("⊥", u, "#")));
        match complement_disagrees(&chain, &words, cfg.limits())? {
            Ok(members) => report.push(format!("{head}: {} words, {members} members", words.len())),
            Err(e) => return Ok(Err(format!("{head}: {e}"))),
        }
    }
    Ok(Ok(report.join("; ")))
}

fn coloring(acc: &Option<Acceptance>) -> Option<&crate::automata::Coloring> {
    match acc {
        Some(Acceptance::Parity(col)) => Some(col),
        _ => None,
    }
}

fn samples(a: &CatalogAutomaton, seed: u64, n: usize) -> Vec<LassoWord> {
    LassoSampler::new(
        seed,
        a.pda.input_alphabet().iter().cloned(),
        Some(a.shape.clone()),
        10,
    )
    .take(n)
}

fn criterion6(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let all = catalog::automata();
    let mut checked = 0;
    for (i, a) in all.iter().enumerate() {
        let m = DeterministicPda::compile(&a.pda)?;
        for w in samples(a, 600 + i as u64, 500) {
            let run = m.analyze(&w, coloring(&a.acceptance), &cfg.limits())?;
            if let Err(e) = check_analysis(&a.pda, &w, &run, 12) {
                return Ok(Err(format!("{} on {w}: {e}", a.id)));
            }
            checked += 1;
        }
    }
    Ok(Ok(format!("{checked} runs over {} automata", all.len())))
}

/// `U ⊆ L` for every `σ` of length at most 6 and every start and target
/// of `p`; returns the number of (σ, q, a, q', b) checked and how many of
/// them are decided by condition (c) alone.
fn segment_inclusion(
    p: &Pda,
    limits: &RunLimits,
) -> Result<std::result::Result<(usize, usize), String>> {
    let m = DeterministicPda::compile(p)?;
    let input: Vec<Symbol> = p.input_alphabet().iter().cloned().collect();
    let (nq, ns) = (m.state_count() as u32, m.symbol_count() as u32);
    let (mut checked, mut decisive) = (0, 0);
    for sigma in words_up_to(&input, 6) {
        let x = m.encode_input(&sigma)?;
        for q in 0..nq {
            for a in 0..ns {
                let run = SegmentRun::new(&m, q, a, &x, limits)?;
                for q2 in 0..nq {
                    for b in 0..ns {
                        let r = run.report(x.len(), q2, b);
                        checked += 1;
                        decisive += r.c_decisive as usize;
                        if r.in_u && !r.in_l {
                            return Ok(Err(format!(
                                "'{sigma}' is in U but not in L for ({}, {}, {}, {})",
                                m.state(q),
                                m.state(q2),
                                m.symbol(a),
                                m.symbol(b)
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(Ok((checked, decisive)))
}

fn criterion7(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let limits = cfg.limits();
    let eraser = head_shape("game:eraser:anbn.a1");
    let (checked, decisive) = match segment_inclusion(&eraser.pda, &limits)? {
        Ok(counts) => counts,
        Err(e) => return Ok(Err(e)),
    };
    let mut decomposed = 0;
    for (i, a) in catalog::automata().iter().enumerate() {
        let mut words = samples(a, 700 + i as u64, 200);
        if a.id == eraser.id {
            words.extend(
                words_up_to(&letters(&["a", "b", "←"]), 4)
                    .iter()
                    .map(|u| bottomed("⊥", u, "#")),
            );
        }
        let m = DeterministicPda::compile(&a.pda)?;
        for w in words {
            let run = m.analyze(&w, None, &limits)?;
            if !(run.completeness == Completeness::Complete && run.strictly_unbounded) {
                continue;
            }
            for k in 1..=4 {
                let d = decompose_unique(&a.pda, &w, k, &limits)?;
                if !d.unique() {
                    return Ok(Err(format!(
                        "{} on {w}, k = {k}: {} segmentations",
                        a.id, d.segmentations
                    )));
                }
                if !d.all_segments_in_u() {
                    return Ok(Err(format!(
                        "{} on {w}, k = {k}: a segment is outside U",
                        a.id
                    )));
                }
                decomposed += 1;
            }
        }
    }
    Ok(Ok(format!(
        "{checked} segment queries ({decisive} decided by condition (c)), {decomposed} decompositions"
    )))
}

fn criterion8(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let limits = cfg.limits();
    let machines: Vec<(DeterministicPda, Acceptance)> = (1..=4)
        .map(|i| {
            let (p, acc) = catalog::abcd_automaton(i)?;
            Ok((DeterministicPda::compile(&p)?, acc))
        })
        .collect::<Result<_>>()?;
    let accepts = |i: usize, w: &LassoWord| {
        machines[i - 1]
            .0
            .accepts_omega(&machines[i - 1].1, w, &limits)
    };
    let mut witnesses = 0;
    for n in 0..=8 {
        for m in 0..=8 {
            for p in 0..=8 {
                let w = LassoWord::new(abc(n, m, p), FiniteWord::new(vec![sy("d")]))
                    .expect("nonempty cycle");
                let both = accepts(1, &w)? && accepts(2, &w)?;
                let equal = n == m && m == p && n >= 1;
                if both != equal || both != oracle_language("L1∩L2", &w)? {
                    return Ok(Err(format!("L1 and L2 on a^{n} b^{m} c^{p} d^ω")));
                }
                let either = accepts(3, &w)? || accepts(4, &w)?;
                if n >= 1 && m >= 1 && p >= 1 && either == (n == m && m == p) {
                    return Ok(Err(format!("L3 or L4 on a^{n} b^{m} c^{p} d^ω")));
                }
                witnesses += both as usize;
            }
        }
    }
    Ok(Ok(format!("729 words, {witnesses} in both")))
}

fn criterion9(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let limits = cfg.limits();
    let mut checked = 0;
    let all = catalog::automata();
    for (i, a) in all.iter().enumerate() {
        let padded = pad_transform(&a.pda)?;
        let original = DeterministicPda::compile(&a.pda)?;
        let lifted = DeterministicPda::compile(&padded.pda)?;
        let mut sampler = LassoSampler::new(
            900 + i as u64,
            a.pda.input_alphabet().iter().cloned(),
            Some(a.shape.clone()),
            10,
        );
        let mut complete = 0;
        for _ in 0..5000 {
            if complete == 500 {
                break;
            }
            let w = sampler.sample();
            let run = original.analyze(&w, None, &limits)?;
            if run.completeness != Completeness::Complete {
                continue;
            }
            complete += 1;
            let pad_run = lifted.analyze(&w, None, &limits)?;
            if pad_run.completeness != Completeness::Complete || !pad_run.strictly_unbounded {
                return Ok(Err(format!(
                    "{} on {w}: padded run is not strictly unbounded",
                    a.id
                )));
            }
            let WordLimit::Infinite(limit) = &pad_run.stack_limit else {
                return Ok(Err(format!("{} on {w}: padded limit is finite", a.id)));
            };
            let projected = project_erase(limit, &padded.drop);
            if !projected.same_word(&run.stack_limit) {
                return Ok(Err(format!(
                    "{} on {w}: projection {projected} differs from {}",
                    a.id, run.stack_limit
                )));
            }
        }
        if complete < 500 {
            return Ok(Err(format!("{}: only {complete} complete samples", a.id)));
        }
        checked += complete;
    }
    Ok(Ok(format!(
        "{checked} complete inputs over {} automata",
        all.len()
    )))
}
