//! Counts of admissible words by final automaton state and digit sum.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::automaton::ParryAutomaton;
use crate::error::{domain, Result};
use crate::scalar::{strict_ceil_above, strict_floor_below, Count, LogCount};

/// Longest word length counted exactly by default.
pub const EXACT_COUNT_LIMIT: usize = 4096;

/// Storage of counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    ExactBigInt,
    LogDomain,
}

impl Backend {
    /// Exact counts up to [`EXACT_COUNT_LIMIT`], log-domain beyond.
    pub fn for_length(n: usize) -> Self {
        if n <= EXACT_COUNT_LIMIT {
            Backend::ExactBigInt
        } else {
            Backend::LogDomain
        }
    }
}

/// A constraint on the digit sum `S_n`, compared as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumConstraint {
    Any,
    Exact(u64),
    /// `P ≤ S_n ≤ Q`.
    Closed(u64, u64),
    /// `P < S_n < Q`.
    Open(u64, u64),
    /// `S_n > P`.
    Above(u64),
    /// `S_n < Q`.
    Below(u64),
}

impl SumConstraint {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SumConstraint::Closed(p, q) if p > q => domain(format!("closed range [{p},{q}] is empty")),
            SumConstraint::Open(p, q) if p > q => domain(format!("open range ({p},{q}) is malformed")),
            _ => Ok(()),
        }
    }

    /// Equivalent inclusive range clipped to `[0, max_sum]`, `None` if empty.
    pub fn inclusive(&self, max_sum: u64) -> Result<Option<(u64, u64)>> {
        self.validate()?;
        let (lo, hi) = match *self {
            SumConstraint::Any => (0, max_sum),
            SumConstraint::Exact(p) => (p, p),
            SumConstraint::Closed(p, q) => (p, q),
            SumConstraint::Open(p, q) => {
                if q <= p + 1 {
                    return Ok(None);
                }
                (p + 1, q - 1)
            }
            SumConstraint::Above(p) => (p + 1, max_sum),
            SumConstraint::Below(0) => return Ok(None),
            SumConstraint::Below(q) => (0, q - 1),
        };
        let hi = hi.min(max_sum);
        Ok(if lo > hi { None } else { Some((lo, hi)) })
    }

    /// Integer constraint for the real range `(lo, hi)` or its one-sided halves.
    pub fn from_real_bounds(lo: Option<&BigRational>, hi: Option<&BigRational>) -> Option<SumConstraint> {
        let lo = lo.map(|x| strict_ceil_above(x).max(0.into()).to_u64().expect("non-negative"));
        let hi = hi.map(strict_floor_below);
        match (lo, hi) {
            (Some(l), Some(h)) => {
                let h = h.to_i64()?;
                (h >= l as i64).then(|| SumConstraint::Closed(l, h as u64))
            }
            (Some(l), None) => Some(if l == 0 { SumConstraint::Any } else { SumConstraint::Above(l - 1) }),
            (None, Some(h)) => {
                let h = h.to_i64()?;
                (h >= 0).then(|| SumConstraint::Below(h as u64 + 1))
            }
            (None, None) => Some(SumConstraint::Any),
        }
    }
}

/// `counts[state][s]`: admissible `n`-words ending in `state` with digit sum `s`.
#[derive(Debug, Clone)]
pub struct SumCountTable<C: Count> {
    n: usize,
    alphabet_max: u32,
    counts: Vec<Vec<C>>,
}

impl<C: Count> SumCountTable<C> {
    pub fn build(automaton: &ParryAutomaton, n: usize) -> Self {
        let states = automaton.states();
        let amax = automaton.alphabet_max() as usize;
        let width = n * amax + 1;
        let mut cur: Vec<Vec<C>> = vec![vec![C::empty(); width]; states];
        let mut next: Vec<Vec<C>> = vec![vec![C::empty(); width]; states];
        cur[0][0] = C::single();
        for step in 0..n {
            let reach = step * amax;
            for row in next.iter_mut() {
                for c in row[..=reach + amax].iter_mut() {
                    *c = C::empty();
                }
            }
            for (j, row) in cur.iter().enumerate() {
                for d in 0..=automaton.max_digit(j) {
                    let target = automaton.step(j, d).expect("digit within pattern");
                    let d = d as usize;
                    for (s, c) in row[..=reach].iter().enumerate() {
                        if !c.is_empty() {
                            next[target][s + d].accumulate(c);
                        }
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        SumCountTable { n, alphabet_max: automaton.alphabet_max(), counts: cur }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> usize {
        self.counts.len()
    }

    pub fn max_sum(&self) -> u64 {
        (self.n as u64) * u64::from(self.alphabet_max)
    }

    pub fn get(&self, state: usize, sum: u64) -> C {
        self.counts
            .get(state)
            .and_then(|row| row.get(sum as usize))
            .cloned()
            .unwrap_or_else(C::empty)
    }

    /// Count over states satisfying `keep` and sums satisfying `constraint`.
    pub fn count_where(&self, constraint: SumConstraint, keep: impl Fn(usize) -> bool) -> Result<C> {
        let mut total = C::empty();
        if let Some((lo, hi)) = constraint.inclusive(self.max_sum())? {
            for (_, row) in self.counts.iter().enumerate().filter(|(j, _)| keep(*j)) {
                for c in &row[lo as usize..=hi as usize] {
                    total.accumulate(c);
                }
            }
        }
        Ok(total)
    }

    pub fn count(&self, constraint: SumConstraint) -> Result<C> {
        self.count_where(constraint, |_| true)
    }

    pub fn total(&self) -> C {
        self.count(SumConstraint::Any).expect("unconstrained count")
    }

    /// Counts per digit sum, summed over states.
    pub fn sum_marginal(&self) -> Vec<C> {
        let mut out = vec![C::empty(); self.max_sum() as usize + 1];
        for row in &self.counts {
            for (s, c) in row.iter().enumerate() {
                out[s].accumulate(c);
            }
        }
        out
    }
}

/// `card Σ_β^n` by a state-only dynamic program.
pub fn count_words(automaton: &ParryAutomaton, n: usize) -> BigUint {
    let states = automaton.states();
    let mut cur = vec![BigUint::zero(); states];
    cur[0] = BigUint::from(1u32);
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); states];
        for (j, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for d in 0..=automaton.max_digit(j) {
                next[automaton.step(j, d).expect("allowed")] += c;
            }
        }
        cur = next;
    }
    cur.into_iter().sum()
}

/// Admissible `n`-words whose digit sum satisfies `constraint`.
pub fn count_with_sum(automaton: &ParryAutomaton, n: usize, constraint: SumConstraint) -> Result<BigUint> {
    constraint.validate()?;
    SumCountTable::<BigUint>::build(automaton, n).count(constraint)
}

/// Log of the count of admissible `n`-words under `constraint`, in the given backend.
pub fn ln_count_with_sum(
    automaton: &ParryAutomaton,
    n: usize,
    constraint: SumConstraint,
    backend: Backend,
) -> Result<f64> {
    Ok(match backend {
        Backend::ExactBigInt => SumCountTable::<BigUint>::build(automaton, n).count(constraint)?.ln(),
        Backend::LogDomain => SumCountTable::<LogCount>::build(automaton, n).count(constraint)?.ln(),
    })
}

/// Words `w` of length `n_digits` under `constraint` such that `w 0^padding` is full.
pub fn count_full_words(
    automaton: &ParryAutomaton,
    n_digits: usize,
    padding: usize,
    constraint: SumConstraint,
) -> Result<BigUint> {
    constraint.validate()?;
    let table = SumCountTable::<BigUint>::build(automaton, n_digits);
    table.count_where(constraint, |j| automaton.after_zeros(j, padding) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::BetaParameter;

    fn automaton(s: &str) -> ParryAutomaton {
        ParryAutomaton::build(&BetaParameter::parse(s, 12).unwrap()).unwrap()
    }

    #[test]
    fn word_counts() {
        assert_eq!(count_words(&automaton("2"), 10), BigUint::from(1024u32));
        let g = automaton("golden");
        let got: Vec<u32> = (1..=8).map(|n| count_words(&g, n).to_u32().unwrap()).collect();
        assert_eq!(got, vec![2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn sum_constrained_counts() {
        let two = automaton("2");
        assert_eq!(count_with_sum(&two, 4, SumConstraint::Exact(2)).unwrap(), BigUint::from(6u32));
        assert_eq!(count_with_sum(&two, 5, SumConstraint::Open(1, 4)).unwrap(), BigUint::from(20u32));
        assert_eq!(count_with_sum(&automaton("golden"), 4, SumConstraint::Exact(2)).unwrap(), BigUint::from(3u32));
        assert!(count_with_sum(&two, 4, SumConstraint::Closed(3, 2)).is_err());
        assert_eq!(count_with_sum(&two, 4, SumConstraint::Exact(9)).unwrap(), BigUint::zero());
    }

    #[test]
    fn full_word_counts() {
        let two = automaton("2");
        assert_eq!(count_full_words(&two, 4, 1, SumConstraint::Exact(2)).unwrap(), BigUint::from(6u32));
        let g = automaton("golden");
        assert_eq!(count_full_words(&g, 3, 2, SumConstraint::Exact(1)).unwrap(), BigUint::from(3u32));
        // 101 is the only admissible 3-word of digit sum 2.
        assert_eq!(count_full_words(&g, 3, 2, SumConstraint::Exact(2)).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn log_domain_agrees_with_exact() {
        let g = automaton("golden");
        let exact = SumCountTable::<BigUint>::build(&g, 300);
        let logd = SumCountTable::<LogCount>::build(&g, 300);
        for c in [SumConstraint::Any, SumConstraint::Closed(50, 90), SumConstraint::Exact(100)] {
            let a = exact.count(c).unwrap().ln();
            let b = logd.count(c).unwrap().ln();
            assert!(((a - b) / a).abs() < 1e-9, "{c:?}: {a} vs {b}");
        }
    }

    #[test]
    fn real_bounds_are_strict() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(
            SumConstraint::from_real_bounds(Some(&r(10, 1)), Some(&r(30, 1))),
            Some(SumConstraint::Closed(11, 29))
        );
        assert_eq!(SumConstraint::from_real_bounds(Some(&r(-1, 2)), Some(&r(1, 2))), Some(SumConstraint::Closed(0, 0)));
        assert_eq!(SumConstraint::from_real_bounds(Some(&r(3, 1)), Some(&r(4, 1))), None);
        assert_eq!(SumConstraint::from_real_bounds(Some(&r(3, 1)), None), Some(SumConstraint::Above(3)));
        assert_eq!(SumConstraint::from_real_bounds(None, Some(&r(3, 1))), Some(SumConstraint::Below(3)));
    }
}
