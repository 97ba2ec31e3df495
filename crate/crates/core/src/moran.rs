//! Moran-type word-set constructions: full word sets with prescribed digit
//! sums, the doubling families `W_n`/`V_n`, digit streams drawn from them,
//! and the homogeneous Moran dimension formula.
//!
//! Every level-1 word is full, so concatenations of them are admissible and
//! full. A level-`(n+1)` word is a pair of level-`n` words whose sums add up
//! to the level-`(n+1)` target.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{zero_run_profile, ParryAutomaton};
use crate::counting::SumConstraint;
use crate::digits::{DigitSource, DigitStream, DigitWord};
use crate::entropy::{lambda_on, LambdaMethod};
use crate::erdos_renyi::ErTrace;
use crate::error::{domain, Error, Result};
use crate::expansion::BetaParameter;
use crate::scalar::{decimal_of, floor_int};

/// Levels checked for the doubling inequality on the sum targets.
pub const DOUBLING_CHECK_LEVELS: u32 = 64;

/// `f[k][j][r]`: `k`-digit words read from state `j` with digit sum `r`
/// after which `padding` zeros lead to state 0.
#[derive(Debug, Clone)]
pub struct FullWordTable {
    automaton: ParryAutomaton,
    n_digits: usize,
    padding: usize,
    f: Vec<Vec<Vec<BigUint>>>,
}

impl FullWordTable {
    pub fn new(automaton: &ParryAutomaton, n_digits: usize, padding: usize) -> Self {
        let states = automaton.states();
        let amax = automaton.alphabet_max() as usize;
        let mut f: Vec<Vec<Vec<BigUint>>> = Vec::with_capacity(n_digits + 1);
        f.push(
            (0..states)
                .map(|j| vec![if automaton.after_zeros(j, padding) == 0 { BigUint::one() } else { BigUint::zero() }])
                .collect(),
        );
        for k in 1..=n_digits {
            let width = k * amax + 1;
            let mut layer = vec![vec![BigUint::zero(); width]; states];
            for (j, row) in layer.iter_mut().enumerate() {
                for d in 0..=automaton.max_digit(j) {
                    let t = automaton.step(j, d).expect("allowed");
                    for (r, c) in f[k - 1][t].iter().enumerate() {
                        if !c.is_zero() {
                            row[r + d as usize] += c;
                        }
                    }
                }
            }
            f.push(layer);
        }
        FullWordTable { automaton: automaton.clone(), n_digits, padding, f }
    }

    pub fn n_digits(&self) -> usize {
        self.n_digits
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    fn completions(&self, k: usize, state: usize, lo: u64, hi: u64) -> BigUint {
        let row = &self.f[k][state];
        if lo as usize >= row.len() || lo > hi {
            return BigUint::zero();
        }
        let hi = (hi as usize).min(row.len() - 1);
        row[lo as usize..=hi].iter().sum()
    }

    fn range(&self, constraint: SumConstraint) -> Result<Option<(u64, u64)>> {
        constraint.inclusive((self.n_digits as u64) * u64::from(self.automaton.alphabet_max()))
    }

    /// Words `(ε_1..ε_N)` under `constraint` with `(ε_1..ε_N, 0^M)` full.
    pub fn count(&self, constraint: SumConstraint) -> Result<BigUint> {
        Ok(match self.range(constraint)? {
            Some((lo, hi)) => self.completions(self.n_digits, 0, lo, hi),
            None => BigUint::zero(),
        })
    }

    /// The first `limit` padded words in lexicographic order.
    pub fn enumerate(&self, constraint: SumConstraint, limit: usize) -> Result<Vec<DigitWord>> {
        let mut out = Vec::new();
        if let Some((lo, hi)) = self.range(constraint)? {
            let mut prefix = Vec::with_capacity(self.n_digits);
            self.walk(&mut prefix, 0, 0, lo, hi, limit, &mut out);
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(&self, prefix: &mut Vec<u32>, state: usize, sum: u64, lo: u64, hi: u64, limit: usize, out: &mut Vec<DigitWord>) {
        if out.len() >= limit {
            return;
        }
        let left = self.n_digits - prefix.len();
        if left == 0 {
            let mut w = prefix.clone();
            w.extend(std::iter::repeat(0).take(self.padding));
            out.push(DigitWord::new(w));
            return;
        }
        for d in 0..=self.automaton.max_digit(state) {
            let s = sum + u64::from(d);
            if s > hi {
                break;
            }
            let t = self.automaton.step(state, d).expect("allowed");
            if self.completions(left - 1, t, lo.saturating_sub(s), hi - s).is_zero() {
                continue;
            }
            prefix.push(d);
            self.walk(prefix, t, s, lo, hi, limit, out);
            prefix.pop();
        }
    }

    /// A uniformly random padded word with digit sum exactly `sum`.
    pub fn sample(&self, sum: u64, rng: &mut ChaCha8Rng) -> Result<Vec<u32>> {
        if self.completions(self.n_digits, 0, sum, sum).is_zero() {
            return Err(Error::Spec(format!("no full word of length {} has digit sum {sum}", self.n_digits)));
        }
        let mut word = Vec::with_capacity(self.n_digits + self.padding);
        let (mut state, mut rest) = (0usize, sum);
        for pos in 0..self.n_digits {
            let left = self.n_digits - pos - 1;
            let options: Vec<(u32, usize, BigUint)> = (0..=self.automaton.max_digit(state).min(rest as u32))
                .map(|d| {
                    let t = self.automaton.step(state, d).expect("allowed");
                    let r = rest - u64::from(d);
                    (d, t, self.completions(left, t, r, r))
                })
                .filter(|(_, _, c)| !c.is_zero())
                .collect();
            let (d, t) = pick(&options, rng, |o| &o.2, |o| (o.0, o.1));
            word.push(d);
            state = t;
            rest -= u64::from(d);
        }
        word.extend(std::iter::repeat(0).take(self.padding));
        Ok(word)
    }
}

/// Chooses an option with probability proportional to its weight.
fn pick<T, R>(options: &[T], rng: &mut ChaCha8Rng, weight: impl Fn(&T) -> &BigUint, out: impl Fn(&T) -> R) -> R {
    let total: BigUint = options.iter().map(&weight).sum();
    let mut x = rng.gen_biguint_below(&total);
    for o in options {
        let w = weight(o);
        if &x < w {
            return out(o);
        }
        x -= w;
    }
    unreachable!("draw below the total weight")
}

/// Result of [`full_moran_words`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullMoranWords {
    #[serde(with = "decimal")]
    pub count: BigUint,
    /// `log card / ((log β)(N+M))`, `None` for an empty set.
    pub dimension: Option<f64>,
    pub words: Vec<DigitWord>,
}

/// Full padded words `(ε_1..ε_N, 0^M)` under a sum constraint, with the set's dimension.
pub fn full_moran_words(
    automaton: &ParryAutomaton,
    n_digits: usize,
    padding: usize,
    constraint: SumConstraint,
    enumerate_limit: usize,
) -> Result<FullMoranWords> {
    if n_digits == 0 {
        return domain("N must be at least 1");
    }
    let table = FullWordTable::new(automaton, n_digits, padding);
    let count = table.count(constraint)?;
    let words = table.enumerate(constraint, enumerate_limit)?;
    let ln_beta = automaton.param().beta().ln();
    let dimension = (!count.is_zero())
        .then(|| crate::scalar::biguint_ln(&count) / (ln_beta * (n_digits + padding) as f64));
    Ok(FullMoranWords { count, dimension, words })
}

/// Parameters of the doubling construction.
#[derive(Debug, Clone)]
pub struct MoranSpec {
    automaton: ParryAutomaton,
    alpha: f64,
    n_digits: usize,
    padding: usize,
    lambda: (i64, i64),
    target_margin_ok: bool,
}

impl MoranSpec {
    /// `padding = None` takes `M` from the zero-run profile of the automaton's base.
    pub fn new(param: &BetaParameter, alpha: f64, n_digits: usize, padding: Option<usize>) -> Result<Self> {
        let automaton = ParryAutomaton::for_param(param)?;
        Self::with_automaton(automaton, alpha, n_digits, padding)
    }

    pub fn with_automaton(automaton: ParryAutomaton, alpha: f64, n_digits: usize, padding: Option<usize>) -> Result<Self> {
        if n_digits == 0 {
            return domain("N must be at least 1");
        }
        let lambda = lambda_on(&automaton, LambdaMethod::MaxMeanCycle)?.exact.expect("cycle mean is exact");
        let lambda_q = BigRational::new(lambda.0.into(), lambda.1.into());
        let a = decimal_of(alpha);
        if !(alpha >= 0.0) || a >= lambda_q {
            return domain(format!("alpha = {alpha} must lie in [0, Λ) with Λ = {}/{}", lambda.0, lambda.1));
        }
        let padding = match padding {
            Some(m) => m,
            None => zero_run_profile(automaton.param(), automaton.states())?.padding,
        };
        let len = BigRational::from_integer(BigInt::from(n_digits + padding));
        let t1 = floor_int(&(&a * &len));
        let target_margin_ok = BigRational::from_integer(t1 + 1) < lambda_q * len;
        let spec = MoranSpec { automaton, alpha, n_digits, padding, lambda, target_margin_ok };
        spec.check_doubling()?;
        Ok(spec)
    }

    pub fn automaton(&self) -> &ParryAutomaton {
        &self.automaton
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_digits(&self) -> usize {
        self.n_digits
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    /// `N + M`.
    pub fn block_length(&self) -> usize {
        self.n_digits + self.padding
    }

    /// `Λ` of the automaton as an exact fraction.
    pub fn lambda(&self) -> (i64, i64) {
        self.lambda
    }

    /// Whether `[α(N+M)] + 1 < Λ(N+M)`.
    pub fn target_margin_ok(&self) -> bool {
        self.target_margin_ok
    }

    /// `[α 2^{level−1} (N+M)]`.
    pub fn target(&self, level: u32) -> BigInt {
        let len = BigInt::from(self.block_length()) << (level as usize - 1);
        floor_int(&(decimal_of(self.alpha) * BigRational::from_integer(len)))
    }

    fn target_u64(&self, level: u32) -> Result<u64> {
        self.target(level)
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("sum target at level {level} does not fit in 64 bits")))
    }

    /// `2[α2ⁿL] < [α2ⁿ⁺¹L] + 1 ≤ 2([α2ⁿL] + 1)` for `n < DOUBLING_CHECK_LEVELS`.
    pub fn check_doubling(&self) -> Result<()> {
        for n in 1..=DOUBLING_CHECK_LEVELS {
            let (a, b) = (self.target(n), self.target(n + 1));
            let two = BigInt::from(2);
            if !(&two * &a < &b + 1 && &b + 1 <= &two * (&a + 1)) {
                return Err(Error::Spec(format!("sum targets fail the doubling inequality at level {n}")));
            }
        }
        Ok(())
    }
}

/// Counts of `W_n` and `V_n` at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordSetLevel {
    pub level: u32,
    pub length: usize,
    pub w_target: u64,
    pub v_target: u64,
    #[serde(with = "decimal")]
    pub w_count: BigUint,
    #[serde(with = "decimal")]
    pub v_count: BigUint,
}

/// Which of the two sets at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetKind {
    W,
    V,
}

/// The levels `1..=L` with exact counts, plus lazy enumeration and sampling.
#[derive(Debug, Clone)]
pub struct MoranLevels {
    spec: MoranSpec,
    level_one: FullWordTable,
    levels: Vec<WordSetLevel>,
}

fn kind_index(kind: SetKind) -> u64 {
    match kind {
        SetKind::W => 0,
        SetKind::V => 1,
    }
}

impl MoranLevels {
    pub fn levels(&self) -> &[WordSetLevel] {
        &self.levels
    }

    pub fn spec(&self) -> &MoranSpec {
        &self.spec
    }

    pub fn level(&self, level: u32) -> &WordSetLevel {
        &self.levels[level as usize - 1]
    }

    pub fn count(&self, level: u32, kind: SetKind) -> &BigUint {
        let l = self.level(level);
        match kind {
            SetKind::W => &l.w_count,
            SetKind::V => &l.v_count,
        }
    }

    fn target_of(&self, level: u32, kind: SetKind) -> u64 {
        self.level(level).w_target + kind_index(kind)
    }

    /// Ordered block pairs `(first, second)` at `level` whose sums reach `kind`'s target at `level + 1`.
    fn pairs(&self, level: u32, kind: SetKind) -> Vec<(SetKind, SetKind, BigUint)> {
        let total = self.level(level + 1).w_target + kind_index(kind);
        let mut out = Vec::new();
        for a in [SetKind::W, SetKind::V] {
            for b in [SetKind::W, SetKind::V] {
                if self.target_of(level, a) + self.target_of(level, b) == total {
                    out.push((a, b, self.count(level, a) * self.count(level, b)));
                }
            }
        }
        out
    }

    /// A uniformly random member of `W_level` or `V_level`.
    pub fn sample(&self, level: u32, kind: SetKind, rng: &mut ChaCha8Rng) -> Result<Vec<u32>> {
        if self.count(level, kind).is_zero() {
            return Err(Error::Spec(format!("{kind:?}_{level} is empty")));
        }
        let mut out = Vec::with_capacity(self.level(level).length);
        self.sample_into(level, kind, rng, &mut out)?;
        Ok(out)
    }

    fn sample_into(&self, level: u32, kind: SetKind, rng: &mut ChaCha8Rng, out: &mut Vec<u32>) -> Result<()> {
        if level == 1 {
            out.extend(self.level_one.sample(self.target_of(1, kind), rng)?);
            return Ok(());
        }
        let options = self.pairs(level - 1, kind);
        let (a, b) = pick(&options, rng, |o| &o.2, |o| (o.0, o.1));
        self.sample_into(level - 1, a, rng, out)?;
        self.sample_into(level - 1, b, rng, out)
    }

    /// The first `limit` members of `W_level` or `V_level` in lexicographic order.
    pub fn enumerate(&self, level: u32, kind: SetKind, limit: usize) -> Result<Vec<DigitWord>> {
        if level == 1 {
            return self.level_one.enumerate(SumConstraint::Exact(self.target_of(1, kind)), limit);
        }
        let below = level - 1;
        let total = self.target_of(level, kind);
        let mut firsts: Vec<(DigitWord, SetKind)> = Vec::new();
        for a in [SetKind::W, SetKind::V] {
            let need = total.checked_sub(self.target_of(below, a));
            let partner = [SetKind::W, SetKind::V].into_iter().find(|&b| Some(self.target_of(below, b)) == need);
            if let Some(b) = partner {
                if !self.count(below, b).is_zero() {
                    firsts.extend(self.enumerate(below, a, limit)?.into_iter().map(|w| (w, b)));
                }
            }
        }
        firsts.sort_by(|x, y| x.0.cmp(&y.0));
        let mut out = Vec::new();
        for (u, b) in firsts {
            if out.len() >= limit {
                break;
            }
            for v in self.enumerate(below, b, limit - out.len())? {
                out.push(u.concat(&v));
            }
        }
        Ok(out)
    }

    /// Splits a level word into blocks of level `sub` and returns their digit sums.
    pub fn block_sums(&self, word: &[u32], sub: u32) -> Vec<u64> {
        word.chunks(self.level(sub).length)
            .map(|c| c.iter().map(|&d| u64::from(d)).sum())
            .collect()
    }
}

/// Computes level counts by convolution of the two blocks.
pub fn build_levels(spec: &MoranSpec, up_to_level: u32) -> Result<MoranLevels> {
    if up_to_level == 0 {
        return domain("at least one level is required");
    }
    spec.check_doubling()?;
    let level_one = FullWordTable::new(&spec.automaton, spec.n_digits, spec.padding);
    let t1 = spec.target_u64(1)?;
    let mut levels = vec![WordSetLevel {
        level: 1,
        length: spec.block_length(),
        w_target: t1,
        v_target: t1 + 1,
        w_count: level_one.count(SumConstraint::Exact(t1))?,
        v_count: level_one.count(SumConstraint::Exact(t1 + 1))?,
    }];
    for level in 2..=up_to_level {
        let prev = levels.last().expect("level one exists");
        let t = spec.target_u64(level)?;
        let count_for = |total: u64| -> BigUint {
            let mut c = BigUint::zero();
            for (sa, ca) in [(prev.w_target, &prev.w_count), (prev.v_target, &prev.v_count)] {
                for (sb, cb) in [(prev.w_target, &prev.w_count), (prev.v_target, &prev.v_count)] {
                    if sa + sb == total {
                        c += ca * cb;
                    }
                }
            }
            c
        };
        let entry = WordSetLevel {
            level,
            length: prev.length * 2,
            w_target: t,
            v_target: t + 1,
            w_count: count_for(t),
            v_count: count_for(t + 1),
        };
        levels.push(entry);
    }
    Ok(MoranLevels { spec: spec.clone(), level_one, levels })
}

/// Block order of an α-Moran stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoranStreamVariant {
    /// `W_1 × W_1 × W_2 × W_3 × …`.
    Plus,
    /// `W_1 × W_2 × W_3 × …`.
    Infinite,
}

impl MoranStreamVariant {
    /// Level of the `i`-th block (zero-based).
    pub fn block_level(self, i: usize) -> u32 {
        match self {
            MoranStreamVariant::Plus => i.max(1) as u32,
            MoranStreamVariant::Infinite => (i + 1) as u32,
        }
    }

    /// Digits emitted by the first `blocks` blocks.
    pub fn prefix_length(self, block_length: usize, blocks: usize) -> usize {
        (0..blocks).map(|i| block_length << (self.block_level(i) - 1)).sum()
    }

    /// Fewest levels after which the stream has at least `digits` digits.
    pub fn levels_for_length(self, block_length: usize, digits: usize) -> u32 {
        let mut blocks = 0;
        while self.prefix_length(block_length, blocks) < digits {
            blocks += 1;
        }
        (0..blocks).map(|i| self.block_level(i)).max().unwrap_or(1)
    }
}

struct MoranSource {
    levels: MoranLevels,
    rng: ChaCha8Rng,
    variant: MoranStreamVariant,
    block: usize,
    buffer: VecDeque<u32>,
}

impl DigitSource for MoranSource {
    fn next_digit(&mut self) -> Result<Option<u32>> {
        if self.buffer.is_empty() {
            let level = self.variant.block_level(self.block);
            if level as usize > self.levels.levels().len() {
                return Ok(None);
            }
            self.block += 1;
            self.buffer.extend(self.levels.sample(level, SetKind::W, &mut self.rng)?);
        }
        Ok(self.buffer.pop_front())
    }
}

/// Concatenated uniform members of `W_1, …, W_{n_levels}` in the variant's block order.
///
/// The stream ends after the last block of level `n_levels`.
pub fn alpha_moran_stream(
    spec: &MoranSpec,
    seed: u64,
    n_levels: u32,
    variant: MoranStreamVariant,
) -> Result<DigitStream> {
    let levels = build_levels(spec, n_levels)?;
    Ok(moran_stream_from_levels(levels, seed, variant))
}

pub fn moran_stream_from_levels(levels: MoranLevels, seed: u64, variant: MoranStreamVariant) -> DigitStream {
    DigitStream::from_source(MoranSource {
        levels,
        rng: ChaCha8Rng::seed_from_u64(seed),
        variant,
        block: 0,
        buffer: VecDeque::new(),
    })
}

/// One checkpoint of the finite-level sandwich on `A_{n,φ(n)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub n: usize,
    pub phi_n: usize,
    /// `K = ⌊φ(n) / (2^r (N+M))⌋`.
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
    pub a: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub r: u32,
    pub rows: Vec<SandwichRow>,
    /// Rows with `K ≥ 3` that violate the sandwich.
    pub violations: usize,
    /// Rows with `K ≥ 3`.
    pub asserted: usize,
    /// `|A − α|` at the last checkpoint.
    pub final_deviation: f64,
    /// `2/(2^r(N+M)) + 1/K` at the last checkpoint (infinite when `K = 0`).
    pub final_bound: f64,
}

/// Evaluates `(K−2)[α2ʳL]/((K+1)2ʳL) ≤ A ≤ (K+1)([α2ʳL]+1)/(K2ʳL)` at each checkpoint.
pub fn er_sandwich_check(spec: &MoranSpec, trace: &ErTrace, r: u32) -> Result<SandwichReport> {
    let scale = spec.block_length() << r;
    let t = spec.target_u64(r + 1)? as f64;
    let mut rows = Vec::with_capacity(trace.rows.len());
    for row in &trace.rows {
        let k = row.phi_n / scale;
        let kf = k as f64;
        let s = scale as f64;
        let lower = (kf - 2.0) * t / ((kf + 1.0) * s);
        let upper = if k == 0 { f64::INFINITY } else { (kf + 1.0) * (t + 1.0) / (kf * s) };
        let holds = lower <= row.a && row.a <= upper;
        rows.push(SandwichRow { n: row.n, phi_n: row.phi_n, k, lower, upper, a: row.a, holds });
    }
    let last = rows.last().ok_or_else(|| Error::Domain("empty trace".into()))?;
    let final_bound = 2.0 / scale as f64 + if last.k == 0 { f64::INFINITY } else { 1.0 / last.k as f64 };
    Ok(SandwichReport {
        r,
        violations: rows.iter().filter(|x| x.k >= 3 && !x.holds).count(),
        asserted: rows.iter().filter(|x| x.k >= 3).count(),
        final_deviation: (last.a - spec.alpha).abs(),
        final_bound,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousMoranDim {
    /// `s_k` for `k = 1..=horizon`.
    pub values: Vec<f64>,
    pub last: f64,
    /// Running minimum over all `k`.
    pub running_min: f64,
    /// Minimum over `k ∈ [horizon/2, horizon]`, the liminf estimate.
    pub tail_min: f64,
}

/// `s = liminf log(N_1⋯N_k) / −log(c_1⋯c_{k+1} N_{k+1})`.
///
/// Sequences shorter than `horizon + 1` repeat their last entry.
pub fn homogeneous_moran_dim(
    n_seq: &[u64],
    c_seq: &[f64],
    horizon: usize,
    delta: Option<f64>,
) -> Result<HomogeneousMoranDim> {
    if n_seq.is_empty() || c_seq.is_empty() || horizon == 0 {
        return domain("sequences must be non-empty and the horizon positive");
    }
    let at = |k: usize| (n_seq[k.min(n_seq.len() - 1)], c_seq[k.min(c_seq.len() - 1)]);
    for k in 0..=horizon {
        let (n, c) = at(k);
        if n < 2 {
            return domain(format!("N_{} = {n} must be at least 2", k + 1));
        }
        if !(c > 0.0 && c < 1.0) {
            return domain(format!("c_{} = {c} must lie in (0, 1)", k + 1));
        }
        if n as f64 * c > 1.0 {
            return domain(format!("N_{0} c_{0} = {1} exceeds 1", k + 1, n as f64 * c));
        }
    }
    if let Some(d) = delta {
        let (n, c) = at(0);
        if n as f64 * c > d {
            return domain(format!("N_1 c_1 = {} exceeds δ = {d}", n as f64 * c));
        }
    }
    let mut ln_n = 0.0;
    let mut ln_c = 0.0;
    let mut values = Vec::with_capacity(horizon);
    for k in 0..horizon {
        let (n, c) = at(k);
        ln_n += (n as f64).ln();
        ln_c += c.ln();
        let (n1, c1) = at(k + 1);
        values.push(ln_n / -(ln_c + c1.ln() + (n1 as f64).ln()));
    }
    let running_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_min = values[(horizon / 2).saturating_sub(1).min(horizon - 1)..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(HomogeneousMoranDim { last: *values.last().expect("horizon >= 1"), running_min, tail_min, values })
}

/// Serializes big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
