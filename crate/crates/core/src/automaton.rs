//! Parry's admissibility criterion and the chain follower automaton of the beta-shift.
//!
//! State `j` records that the last `j` digits read equal `ε*_1..ε*_j`. From
//! state `j` a digit `d` is allowed iff `d ≤ ε*_{j+1}`; equality advances
//! (wrapping into the period), strict inequality resets to state 0.

use serde::{Deserialize, Serialize};

use crate::digits::DigitWord;
use crate::error::{depth, domain, Error, Result};
use crate::expansion::BetaParameter;

/// Default largest truncation index tried for non-Parry bases.
pub const DEFAULT_TRUNCATION_DEPTH: usize = 24;

/// Largest word length used by the exhaustive language check.
pub const LANGUAGE_CHECK_LENGTH: usize = 12;

/// Words visited by the build-time language check before it stops early.
const BUILD_CHECK_BUDGET: usize = 1 << 14;

/// Outcome of Parry's lexicographic test on a finite word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// Zero-based start of the first suffix exceeding the `ε*` prefix.
    pub failing_shift: Option<usize>,
}

/// Tests every suffix of `word` against the prefix of `ε*(1,β)` of equal length.
///
/// A suffix equal to that prefix is admissible, since `ε*` never ends in `0^∞`.
/// Comparisons that need digits past the materialized depth raise [`Error::Depth`].
pub fn is_admissible(param: &BetaParameter, word: &[u32]) -> Result<Admissibility> {
    if let Some(&d) = word.iter().find(|&&d| d > param.alphabet_max()) {
        return domain(format!("digit {d} exceeds alphabet bound {}", param.alphabet_max()));
    }
    for start in 0..word.len() {
        for (k, &d) in word[start..].iter().enumerate() {
            let e = match param.one_digit(k) {
                Some(e) => e,
                None => {
                    return depth(format!(
                        "suffix at {start} matches all {} materialized digits of the expansion of one",
                        param.depth()
                    ))
                }
            };
            if d > e {
                return Ok(Admissibility { admissible: false, failing_shift: Some(start) });
            }
            if d < e {
                break;
            }
        }
    }
    Ok(Admissibility { admissible: true, failing_shift: None })
}

/// Result of running a word through the automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    State(usize),
    /// The digit at `position` is not allowed.
    Reject { position: usize },
}

impl RunOutcome {
    pub fn state(self) -> Option<usize> {
        match self {
            RunOutcome::State(s) => Some(s),
            RunOutcome::Reject { .. } => None,
        }
    }
}

/// Debugging export of the transition structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonExport {
    pub states: usize,
    pub allowed_digits: Vec<Vec<u32>>,
    /// `next_state[j][d]` for each allowed digit `d` of state `j`.
    pub next_state: Vec<Vec<usize>>,
}

/// The follower automaton for a purely periodic `ε*(1,β)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParryAutomaton {
    param: BetaParameter,
    preamble: usize,
    period: usize,
    pattern: Vec<u32>,
}

impl ParryAutomaton {
    /// Builds the automaton of an Integer or simple Parry base.
    pub fn build(param: &BetaParameter) -> Result<Self> {
        let period = match param.period() {
            Some(p) => p,
            None => {
                return depth(format!(
                    "expansion of one for beta = {} does not close a period within depth {}",
                    param.literal(),
                    param.depth()
                ))
            }
        };
        let pattern: Vec<u32> = (0..period).map(|i| param.one_digit(i).expect("periodic")).collect();
        if pattern.iter().all(|&d| d == 0) {
            return Err(Error::Spec("period of the expansion of one is all zeros".into()));
        }
        let automaton = ParryAutomaton { param: param.clone(), preamble: 0, period, pattern };
        if automaton.states() <= 16 {
            automaton.check_language(LANGUAGE_CHECK_LENGTH, Some(BUILD_CHECK_BUDGET))?;
        }
        Ok(automaton)
    }

    /// Builds the automaton of `param`, replacing a non-Parry base by its
    /// approximant `β_m` at the largest valid `m ≤ max_m`.
    pub fn build_truncated(param: &BetaParameter, max_m: usize) -> Result<Self> {
        Self::build(&param.parry_or_truncated(max_m)?)
    }

    /// Builds whichever automaton `param` admits with the default truncation depth.
    pub fn for_param(param: &BetaParameter) -> Result<Self> {
        Self::build_truncated(param, DEFAULT_TRUNCATION_DEPTH)
    }

    /// The base the automaton recognizes (an approximant when truncated).
    pub fn param(&self) -> &BetaParameter {
        &self.param
    }

    pub fn is_truncated(&self) -> bool {
        self.param.approximant().is_some()
    }

    pub fn states(&self) -> usize {
        self.preamble + self.period
    }

    pub fn preamble(&self) -> usize {
        self.preamble
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn alphabet_max(&self) -> u32 {
        self.param.alphabet_max()
    }

    /// Largest digit allowed from `state`.
    pub fn max_digit(&self, state: usize) -> u32 {
        self.pattern[state]
    }

    /// Target of `digit` from `state`, `None` if not allowed.
    pub fn step(&self, state: usize, digit: u32) -> Option<usize> {
        let e = self.pattern[state];
        if digit > e {
            None
        } else if digit == e {
            let next = state + 1;
            Some(if next == self.states() { self.preamble } else { next })
        } else {
            Some(0)
        }
    }

    pub fn run(&self, word: &[u32], start: usize) -> Result<RunOutcome> {
        if start >= self.states() {
            return domain(format!("start state {start} out of range 0..{}", self.states()));
        }
        let mut state = start;
        for (position, &d) in word.iter().enumerate() {
            match self.step(state, d) {
                Some(next) => state = next,
                None => return Ok(RunOutcome::Reject { position }),
            }
        }
        Ok(RunOutcome::State(state))
    }

    fn final_state(&self, word: &[u32]) -> Result<usize> {
        match self.run(word, 0)? {
            RunOutcome::State(s) => Ok(s),
            RunOutcome::Reject { position } => domain(format!("word is not admissible at position {position}")),
        }
    }

    /// A word is full iff it drives the automaton back to state 0.
    pub fn is_full(&self, word: &[u32]) -> Result<bool> {
        Ok(self.final_state(word)? == 0)
    }

    /// Appends the fewest zeros that make `word` full.
    pub fn pad_to_full(&self, word: &DigitWord) -> Result<DigitWord> {
        let mut state = self.final_state(word.digits())?;
        let mut out = word.clone();
        let mut steps = 0;
        while state != 0 {
            state = self.step(state, 0).expect("zero is always allowed");
            out.push(0);
            steps += 1;
            if steps > self.states() {
                return Err(Error::Spec("zero padding did not reach state 0".into()));
            }
        }
        Ok(out)
    }

    /// State reached from `state` after reading `zeros` zeros.
    ///
    /// Zeros reach state 0 within `states()` steps and state 0 is then fixed, as `ε*_1 ≥ 1`.
    pub fn after_zeros(&self, mut state: usize, zeros: usize) -> usize {
        for _ in 0..zeros.min(self.states() + 1) {
            state = self.step(state, 0).expect("zero is always allowed");
        }
        state
    }

    pub fn export(&self) -> AutomatonExport {
        let allowed_digits: Vec<Vec<u32>> = (0..self.states()).map(|j| (0..=self.pattern[j]).collect()).collect();
        let next_state = allowed_digits
            .iter()
            .enumerate()
            .map(|(j, ds)| ds.iter().map(|&d| self.step(j, d).expect("allowed")).collect())
            .collect();
        AutomatonExport { states: self.states(), allowed_digits, next_state }
    }

    /// Compares the accepted language with [`is_admissible`] for all lengths `≤ max_len`.
    ///
    /// Both languages are prefix-closed, so a depth-first walk over accepted
    /// words checks every length at once. With a budget the walk stops after
    /// that many words and reports success for the part visited.
    pub fn check_language(&self, max_len: usize, budget: Option<usize>) -> Result<usize> {
        let mut visited = 0usize;
        let mut stack: Vec<(Vec<u32>, usize)> = vec![(Vec::new(), 0)];
        while let Some((word, state)) = stack.pop() {
            if budget.is_some_and(|b| visited >= b) {
                break;
            }
            visited += 1;
            if word.len() == max_len {
                continue;
            }
            for d in 0..=self.alphabet_max() {
                let mut next_word = word.clone();
                next_word.push(d);
                let by_automaton = self.step(state, d);
                let by_criterion = is_admissible(&self.param, &next_word)?.admissible;
                if by_automaton.is_some() != by_criterion {
                    return Err(Error::Spec(format!(
                        "automaton and admissibility criterion disagree on {}",
                        DigitWord::new(next_word)
                    )));
                }
                if let Some(s) = by_automaton {
                    stack.push((next_word, s));
                }
            }
        }
        Ok(visited)
    }
}

/// Zero runs following each digit of `ε*(1,β)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroRunProfile {
    /// `l[n-1] = l_n`, the zero run right after `ε*_n`.
    pub l: Vec<usize>,
    /// Running maxima `M_n`.
    pub running_max: Vec<usize>,
    /// Padding length `M = M_depth + 1`.
    pub padding: usize,
    /// `(max l over depth, depth)`: boundedness observed at this depth only.
    pub b0_flag: (usize, usize),
    /// Whether some run reached the materialized horizon (so its length is a lower bound).
    pub horizon_limited: bool,
}

pub fn zero_run_profile(param: &BetaParameter, depth: usize) -> Result<ZeroRunProfile> {
    if depth == 0 {
        return domain("profile depth must be at least 1");
    }
    if !param.is_periodic() && depth > param.depth() {
        return domain(format!("profile depth {depth} exceeds materialized depth {}", param.depth()));
    }
    let mut l = Vec::with_capacity(depth);
    let mut horizon_limited = false;
    for n in 1..=depth {
        let mut k = 0;
        loop {
            match param.one_digit(n + k) {
                Some(0) => k += 1,
                Some(_) => break,
                None => {
                    horizon_limited = true;
                    break;
                }
            }
        }
        l.push(k);
    }
    let mut running_max = Vec::with_capacity(depth);
    let mut m = 0;
    for &v in &l {
        m = m.max(v);
        running_max.push(m);
    }
    Ok(ZeroRunProfile { padding: m + 1, b0_flag: (m, depth), running_max, l, horizon_limited })
}
