//! Segment languages of a deterministic automaton and unique decomposition of
//! strictly unbounded runs.
//!
//! A segment run starts in `(q, a)` and treats the entry symbol `a` as a
//! floor: popping it kills the run.

use std::collections::HashMap;

use crate::automata::machine::apply_op;
use crate::automata::{DeterministicPda, Pda, State};
use crate::error::{Error, Result};
use crate::omega::{Completeness, RunLimits};
use crate::words::{FiniteWord, LassoWord, Symbol};

#[derive(Clone, Debug)]
struct Conf {
    consumed: usize,
    state: u32,
    /// Stack above and including the entry symbol.
    stack: Vec<u32>,
}

/// The floored run from `(q, a)` over a word, kept as its configuration sequence.
///
/// The run stops when it needs a letter past the end of the word, blocks,
/// pops the entry symbol, or is caught in a λ-loop.
#[derive(Clone, Debug)]
pub(crate) struct SegmentRun {
    confs: Vec<Conf>,
}

impl SegmentRun {
    pub(crate) fn new(
        m: &DeterministicPda,
        q: u32,
        a: u32,
        x: &[u32],
        limits: &RunLimits,
    ) -> Result<SegmentRun> {
        let mut state = q;
        let mut stack = vec![a];
        let mut consumed = 0;
        let mut confs = Vec::new();
        // Low points of the current λ-block: (height, key) with key = (state, top).
        let mut lows: Vec<(usize, (u32, u32), usize)> = Vec::new();
        let mut index: HashMap<(u32, u32), usize> = HashMap::new();
        let mut extra: Option<usize> = None;
        loop {
            if confs.len() > limits.step_ceiling {
                return Err(Error::StepCeiling(limits.step_ceiling));
            }
            confs.push(Conf {
                consumed,
                state,
                stack: stack.clone(),
            });
            let top = *stack.last().expect("segment stacks keep their floor");
            let lambda = m.lambda(state, top);
            if let Some(left) = extra.as_mut() {
                if *left == 0 {
                    return Ok(SegmentRun { confs });
                }
                *left -= 1;
            } else if lambda.is_some() {
                let h = stack.len();
                while lows.last().is_some_and(|l| l.0 > h) {
                    let l = lows.pop().expect("checked nonempty");
                    index.remove(&l.1);
                }
                if let Some(&i) = index.get(&(state, top)) {
                    let (h1, _, t1) = lows[i];
                    let period = confs.len() - 1 - t1;
                    if h == h1 {
                        return Ok(SegmentRun { confs });
                    }
                    // Two more periods lift every later configuration above height 2.
                    extra = Some(2 * period);
                } else {
                    index.insert((state, top), lows.len());
                    lows.push((h, (state, top), confs.len() - 1));
                }
            }
            let step = match lambda {
                Some(step) => step,
                None => {
                    if consumed == x.len() {
                        return Ok(SegmentRun { confs });
                    }
                    let Some(step) = m.lookup(state, x[consumed], top) else {
                        return Ok(SegmentRun { confs });
                    };
                    consumed += 1;
                    lows.clear();
                    index.clear();
                    step
                }
            };
            if stack.len() == 1 && step.op == crate::automata::Op::Pop {
                return Ok(SegmentRun { confs });
            }
            apply_op(step.op, &mut stack);
            state = step.target;
        }
    }

    /// Evaluates the segment conditions for the prefix of length `len` and target `(q2, b)`.
    pub(crate) fn report(&self, len: usize, q2: u32, b: u32) -> SegmentReport {
        let confs = &self.confs;
        let at_target = |c: &Conf| c.state == q2 && c.stack.len() == 2 && c.stack[1] == b;
        let at_ab = |c: &Conf| c.stack.len() == 2 && c.stack[1] == b;
        let block: Vec<usize> = (0..confs.len())
            .filter(|&i| confs[i].consumed == len)
            .collect();
        let l = block.iter().any(|&i| at_target(&confs[i]));
        let b_ok = (0..confs.len())
            .filter(|&i| confs[i].consumed < len && at_ab(&confs[i]))
            .all(|i| {
                confs[i + 1..]
                    .iter()
                    .take_while(|c| c.consumed <= len)
                    .any(|c| c.stack.len() == 1)
            });
        let c_ok = block
            .iter()
            .filter(|&&i| at_ab(&confs[i]) && confs[i].state != q2)
            .all(|&i| {
                let earlier = block.iter().any(|&j| j < i && at_target(&confs[j]));
                let via_floor = block
                    .iter()
                    .filter(|&&j| j > i && confs[j].stack.len() == 1)
                    .any(|&j| block.iter().any(|&k| k > j && at_target(&confs[k])));
                earlier || via_floor
            });
        SegmentReport {
            in_l: l,
            condition_b: b_ok,
            condition_c: c_ok,
            in_u: l && b_ok && c_ok,
            c_decisive: l && b_ok && !c_ok,
        }
    }
}

/// Which segment conditions a word satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentReport {
    /// Condition (a): the run consumes the word and reaches the target configuration.
    pub in_l: bool,
    /// Every strict prefix reaching stack `a·b` is followed by a return to `a`.
    pub condition_b: bool,
    /// Target reached before, or re-reached through the floor after, any other state over `a·b`.
    pub condition_c: bool,
    pub in_u: bool,
    /// Conditions (a) and (b) hold and (c) alone rejects.
    pub c_decisive: bool,
}

struct SegQuery<'a> {
    m: DeterministicPda,
    q: u32,
    q2: u32,
    a: u32,
    b: u32,
    sigma: &'a FiniteWord,
}

fn prepare<'a>(
    p: &Pda,
    q: &State,
    q2: &State,
    a: &Symbol,
    b: &Symbol,
    sigma: &'a FiniteWord,
) -> Result<SegQuery<'a>> {
    let m = DeterministicPda::compile(p)?;
    let unknown = |n: &dyn std::fmt::Display| Error::UnknownName(n.to_string());
    Ok(SegQuery {
        q: m.state_index_of(q).ok_or_else(|| unknown(q))?,
        q2: m.state_index_of(q2).ok_or_else(|| unknown(q2))?,
        a: m.symbol_index_of(a).ok_or_else(|| unknown(a))?,
        b: m.symbol_index_of(b).ok_or_else(|| unknown(b))?,
        m,
        sigma,
    })
}

/// All segment conditions of `σ` for `(q, q2, a, b)`.
pub fn seg_report(
    p: &Pda,
    q: &State,
    q2: &State,
    a: &Symbol,
    b: &Symbol,
    sigma: &FiniteWord,
) -> Result<SegmentReport> {
    let s = prepare(p, q, q2, a, b, sigma)?;
    let x = s.m.encode_input(s.sigma)?;
    let run = SegmentRun::new(&s.m, s.q, s.a, &x, &RunLimits::default())?;
    Ok(run.report(x.len(), s.q2, s.b))
}

/// `σ : (q, a) ↦* (q2, a·b)`.
pub fn seg_member_l(
    p: &Pda,
    q: &State,
    q2: &State,
    a: &Symbol,
    b: &Symbol,
    sigma: &FiniteWord,
) -> Result<bool> {
    Ok(seg_report(p, q, q2, a, b, sigma)?.in_l)
}

/// Membership in the uniquely decomposing sublanguage.
pub fn seg_member_u(
    p: &Pda,
    q: &State,
    q2: &State,
    a: &Symbol,
    b: &Symbol,
    sigma: &FiniteWord,
) -> Result<bool> {
    Ok(seg_report(p, q, q2, a, b, sigma)?.in_u)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub word: FiniteWord,
    pub from: State,
    pub to: State,
    pub a: Symbol,
    pub b: Symbol,
    pub report: SegmentReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub segments: Vec<Segment>,
    /// `n_1 … n_{k+1}`: the first times after which the stack prefix of each length is fixed.
    pub stabilization_times: Vec<usize>,
    /// The input consumed by the segments.
    pub prefix: FiniteWord,
    /// Number of chained segmentations of `prefix` into `k` pieces of the sublanguages.
    pub segmentations: u64,
}

impl Decomposition {
    pub fn unique(&self) -> bool {
        self.segmentations == 1
    }

    pub fn all_segments_in_u(&self) -> bool {
        self.segments.iter().all(|s| s.report.in_u)
    }
}

/// Splits the input consumed until the `k+1`-th stack symbol stabilizes and
/// counts the alternative chained segmentations.
pub fn decompose_unique(
    p: &Pda,
    w: &LassoWord,
    k: usize,
    limits: &RunLimits,
) -> Result<Decomposition> {
    let m = DeterministicPda::compile(p)?;
    let spoke = m.encode_input(w.spoke())?;
    let cycle = m.encode_input(w.cycle())?;
    let raw = m.run_raw(&spoke, &cycle, limits)?;
    let gain = raw.stack.len() - raw.h1;
    if raw.completeness != Completeness::Complete || gain == 0 {
        return Err(Error::NotStrictlyUnbounded);
    }
    let limit = |i: usize| {
        if i < raw.h1 {
            raw.stack[i]
        } else {
            raw.stack[raw.h1 + (i - raw.h1) % gain]
        }
    };
    let period = raw.t2 - raw.t1;
    let rounds = (k + 2).saturating_sub(raw.h1).div_ceil(gain);
    let horizon = raw.t1 + rounds * period;

    // Replay the run, tracking how much of the stack agrees with the limit.
    let letter = |pos: usize| {
        if pos < spoke.len() {
            spoke[pos]
        } else {
            cycle[(pos - spoke.len()) % cycle.len()]
        }
    };
    let mut state = m.initial();
    let mut stack = vec![m.bottom()];
    let mut pos = 0;
    let mut matched = 1;
    let mut trace = Vec::with_capacity(horizon + 1);
    for _ in 0..=horizon {
        trace.push((state, pos, matched));
        let top = *stack.last().expect("the bottom symbol is never popped");
        let step = match m.lambda(state, top) {
            Some(step) => step,
            None => {
                let step = m.lookup(state, letter(pos), top).expect("complete run");
                pos += 1;
                step
            }
        };
        let h = stack.len();
        match step.op {
            crate::automata::Op::Pop => matched = matched.min(h - 1),
            crate::automata::Op::Push(x) if matched == h && limit(h) == x => matched = h + 1,
            _ => {}
        }
        apply_op(step.op, &mut stack);
        state = step.target;
    }
    let times: Vec<usize> = (1..=k + 1)
        .map(|j| {
            trace
                .iter()
                .rposition(|&(_, _, mt)| mt < j)
                .map_or(0, |t| t + 1)
        })
        .collect();
    let prefix_len = trace[times[k]].1;
    let prefix = w.prefix(prefix_len);
    let x = m.encode_input(&prefix)?;
    let mut segments = Vec::with_capacity(k);
    for j in 0..k {
        let (from, start, _) = trace[times[j]];
        let (to, end, _) = trace[times[j + 1]];
        let (a, b) = (limit(j), limit(j + 1));
        let run = SegmentRun::new(&m, from, a, &x[start..end], limits)?;
        segments.push(Segment {
            word: prefix[start..end].to_vec().into(),
            from: m.state(from).clone(),
            to: m.state(to).clone(),
            a: m.symbol(a).clone(),
            b: m.symbol(b).clone(),
            report: run.report(end - start, to, b),
        });
    }
    let segmentations = count_segmentations(&m, &x, k, limits)?;
    Ok(Decomposition {
        segments,
        stabilization_times: times,
        prefix,
        segmentations,
    })
}

/// Counts segmentations of `x` into `k` chained pieces starting from `(q_in, ⊥)`.
fn count_segmentations(
    m: &DeterministicPda,
    x: &[u32],
    k: usize,
    limits: &RunLimits,
) -> Result<u64> {
    let (nq, ns) = (m.state_count() as u32, m.symbol_count() as u32);
    let mut ways: HashMap<(usize, u32, u32), u64> =
        HashMap::from([((0, m.initial(), m.bottom()), 1)]);
    for _ in 0..k {
        let mut next: HashMap<(usize, u32, u32), u64> = HashMap::new();
        for (&(p, q, a), &n) in &ways {
            let run = SegmentRun::new(m, q, a, &x[p..], limits)?;
            for len in 0..=x.len() - p {
                for q2 in 0..nq {
                    for b in 0..ns {
                        if run.report(len, q2, b).in_u {
                            let slot = next.entry((p + len, q2, b)).or_default();
                            *slot = slot.saturating_add(n);
                        }
                    }
                }
            }
        }
        ways = next;
    }
    Ok(ways
        .iter()
        .filter(|(&(p, _, _), _)| p == x.len())
        .map(|(_, &n)| n)
        .fold(0u64, u64::saturating_add))
}
