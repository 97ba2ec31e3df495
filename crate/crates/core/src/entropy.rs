//! Approximants `β_m`, entropy spectra of digit frequencies, the ergodic
//! digit mean `α*(β)`, the maximal average `Λ(β)` and the assembled
//! Erdős–Rényi dimension spectrum.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::{BigRational, Rational64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{ParryAutomaton, DEFAULT_TRUNCATION_DEPTH};
use crate::counting::{Backend, SumConstraint, SumCountTable};
use crate::digits::DigitSource;
use crate::error::{domain, Error, Result};
use crate::expansion::{BetaParameter, ParryClass, UniformSource};
use crate::scalar::{decimal_of, Count, LogCount};

/// Bisection tolerance for `β_m`.
pub const BETA_M_TOLERANCE: f64 = 1e-13;

/// The root in `(1, β]` of `Σ_{i≤m} ε*_i x^{−i} = 1`.
pub fn solve_beta_m(param: &BetaParameter, m: usize) -> Result<f64> {
    if m == 0 {
        return domain("m must be at least 1");
    }
    let digits: Vec<f64> = (0..m)
        .map(|i| {
            param
                .one_digit(i)
                .map(f64::from)
                .ok_or_else(|| Error::Depth(format!("m = {m} exceeds materialized depth {}", param.depth())))
        })
        .collect::<Result<_>>()?;
    if digits[m - 1] < 1.0 {
        return domain(format!("ε*_{m} = 0, so m is not a valid truncation index"));
    }
    let f = |x: f64| digits.iter().rev().fold(0.0, |acc, &d| (acc + d) / x) - 1.0;
    let (mut lo, mut hi) = (1.0, param.beta());
    if f(lo) <= 0.0 {
        return domain(format!("the root for m = {m} is not above 1"));
    }
    if f(hi) > 1e-12 {
        return Err(Error::Convergence(format!("no sign change on (1, {hi}] for m = {m}")));
    }
    while hi - lo > BETA_M_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which digit-sum window an entropy estimate counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyVariant {
    /// `n(α−δ) < S_n < n(α+δ)`.
    TwoSided,
    /// `S_n > n(α−δ)`.
    Lower,
    /// `S_n < n(α+δ)`.
    Upper,
}

impl EntropyVariant {
    pub fn name(self) -> &'static str {
        match self {
            EntropyVariant::TwoSided => "two-sided",
            EntropyVariant::Lower => "lower",
            EntropyVariant::Upper => "upper",
        }
    }
}

/// One `(n, δ)` point of an estimation schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub n: usize,
    pub delta: f64,
}

/// Estimation schedule; the last step is the reported estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySchedule {
    pub steps: Vec<ScheduleStep>,
    /// Largest truncation index for non-Parry bases.
    pub m_depth: usize,
}

impl Default for EntropySchedule {
    fn default() -> Self {
        let steps = [0.05, 0.02, 0.01, 0.005]
            .iter()
            .map(|&delta: &f64| ScheduleStep { n: 2000usize.max((10.0 / delta).ceil() as usize), delta })
            .collect();
        EntropySchedule { steps, m_depth: DEFAULT_TRUNCATION_DEPTH }
    }
}

impl EntropySchedule {
    pub fn single(n: usize, delta: f64) -> Self {
        EntropySchedule { steps: vec![ScheduleStep { n, delta }], m_depth: DEFAULT_TRUNCATION_DEPTH }
    }

    pub fn final_step(&self) -> Option<ScheduleStep> {
        self.steps.last().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub alpha: f64,
    /// `None` when no word falls in the window.
    pub h_hat: Option<f64>,
    pub n: usize,
    pub delta: f64,
    pub m: usize,
    pub variant: EntropyVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    pub beta: f64,
    /// The base actually counted (`β_m` when truncated).
    pub counted_beta: f64,
    pub truncated: bool,
    pub variant: EntropyVariant,
    /// Rows for every schedule step, in schedule order then grid order.
    pub rows: Vec<EntropyRow>,
}

impl EntropyCurve {
    /// Rows of the final schedule step.
    pub fn final_rows(&self) -> Vec<&EntropyRow> {
        match self.rows.last() {
            Some(last) => {
                let (n, delta) = (last.n, last.delta);
                self.rows.iter().filter(|r| r.n == n && r.delta == delta).collect()
            }
            None => Vec::new(),
        }
    }

    /// Final estimate at `alpha`, if on the grid.
    pub fn value_at(&self, alpha: f64) -> Option<f64> {
        self.final_rows().into_iter().find(|r| r.alpha == alpha).and_then(|r| r.h_hat)
    }
}

fn window(alpha: f64, delta: f64, n: usize, variant: EntropyVariant) -> Option<SumConstraint> {
    let a = decimal_of(alpha);
    let d = decimal_of(delta);
    let n = BigRational::from_integer(n.into());
    let lo = &n * (&a - &d);
    let hi = &n * (&a + &d);
    match variant {
        EntropyVariant::TwoSided => SumConstraint::from_real_bounds(Some(&lo), Some(&hi)),
        EntropyVariant::Lower => SumConstraint::from_real_bounds(Some(&lo), None),
        EntropyVariant::Upper => SumConstraint::from_real_bounds(None, Some(&hi)),
    }
}

fn estimates<C: Count>(
    table: &SumCountTable<C>,
    grid: &[f64],
    delta: f64,
    variant: EntropyVariant,
    ln_beta: f64,
) -> Result<Vec<Option<f64>>> {
    let n = table.n();
    grid.iter()
        .map(|&alpha| {
            let Some(c) = window(alpha, delta, n, variant) else { return Ok(None) };
            let count = table.count(c)?;
            Ok((!count.is_empty()).then(|| count.ln() / (n as f64 * ln_beta)))
        })
        .collect()
}

/// `ĥ(α) = log card{n-words in the α-window} / (n log β)` along a schedule.
pub fn entropy_curve(
    param: &BetaParameter,
    alpha_grid: &[f64],
    schedule: &EntropySchedule,
    variant: EntropyVariant,
) -> Result<EntropyCurve> {
    if schedule.steps.is_empty() {
        return domain("entropy schedule is empty");
    }
    let amax = f64::from(param.alphabet_max());
    if let Some(&a) = alpha_grid.iter().find(|&&a| !(0.0..=amax).contains(&a)) {
        return domain(format!("alpha = {a} is outside [0, {amax}]"));
    }
    for step in &schedule.steps {
        if !(step.delta > 0.0) || step.n == 0 {
            return domain(format!("schedule step n = {}, delta = {} needs n >= 1 and delta > 0", step.n, step.delta));
        }
    }
    let automaton = ParryAutomaton::build_truncated(param, schedule.m_depth)?;
    let m = automaton.period();
    let ln_beta = param.beta().ln();
    let lengths: Vec<usize> = schedule.steps.iter().map(|s| s.n).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let per_length: BTreeMap<usize, Vec<Vec<Option<f64>>>> = lengths
        .par_iter()
        .map(|&n| {
            let deltas: Vec<f64> = schedule.steps.iter().filter(|s| s.n == n).map(|s| s.delta).collect();
            let values = match Backend::for_length(n) {
                Backend::ExactBigInt => {
                    let t = SumCountTable::<BigUint>::build(&automaton, n);
                    deltas.iter().map(|&d| estimates(&t, alpha_grid, d, variant, ln_beta)).collect::<Result<Vec<_>>>()
                }
                Backend::LogDomain => {
                    let t = SumCountTable::<LogCount>::build(&automaton, n);
                    deltas.iter().map(|&d| estimates(&t, alpha_grid, d, variant, ln_beta)).collect::<Result<Vec<_>>>()
                }
            }?;
            Ok((n, values))
        })
        .collect::<Result<_>>()?;
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rows = Vec::with_capacity(schedule.steps.len() * alpha_grid.len());
    for step in &schedule.steps {
        let k = seen.entry(step.n).or_insert(0);
        let values = &per_length[&step.n][*k];
        *k += 1;
        for (&alpha, &h_hat) in alpha_grid.iter().zip(values) {
            rows.push(EntropyRow { alpha, h_hat, n: step.n, delta: step.delta, m, variant });
        }
    }
    Ok(EntropyCurve {
        beta: param.beta(),
        counted_beta: automaton.param().beta(),
        truncated: automaton.is_truncated(),
        variant,
        rows,
    })
}

/// Estimator of the ergodic digit mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaStarMethod {
    /// `(β−1)/2`, integer bases only.
    ClosedForm,
    /// Mean of the digits of a seeded Lebesgue-uniform point.
    Birkhoff { seed: u64, n_digits: usize },
    /// Exact integration against the Parry density truncated to `resolution` orbit terms.
    ParryDensity { resolution: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaStarEstimate {
    pub value: f64,
    /// Batch-means standard error (Birkhoff only).
    pub std_error: Option<f64>,
    /// Deterministic truncation bound (density quadrature only).
    pub error_bound: Option<f64>,
    pub method: AlphaStarMethod,
}

const BIRKHOFF_BATCHES: usize = 100;

pub fn alpha_star(param: &BetaParameter, method: AlphaStarMethod) -> Result<AlphaStarEstimate> {
    match method {
        AlphaStarMethod::ClosedForm => {
            if param.parry_class() != ParryClass::Integer {
                return domain("the closed form applies to integer bases only");
            }
            Ok(AlphaStarEstimate { value: (param.beta() - 1.0) / 2.0, std_error: None, error_bound: None, method })
        }
        AlphaStarMethod::Birkhoff { seed, n_digits } => birkhoff(param, seed, n_digits, method),
        AlphaStarMethod::ParryDensity { resolution } => parry_density(param, resolution, method),
    }
}

fn birkhoff(param: &BetaParameter, seed: u64, n_digits: usize, method: AlphaStarMethod) -> Result<AlphaStarEstimate> {
    if n_digits < 2 * BIRKHOFF_BATCHES {
        return domain(format!("Birkhoff averaging needs at least {} digits", 2 * BIRKHOFF_BATCHES));
    }
    let mut source = UniformSource::new(param.beta(), seed)?;
    let batch = n_digits / BIRKHOFF_BATCHES;
    let mut means = Vec::with_capacity(BIRKHOFF_BATCHES);
    for _ in 0..BIRKHOFF_BATCHES {
        let mut s = 0u64;
        for _ in 0..batch {
            s += u64::from(source.next_digit()?.expect("unbounded source"));
        }
        means.push(s as f64 / batch as f64);
    }
    let b = means.len() as f64;
    let mean = means.iter().sum::<f64>() / b;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (b - 1.0);
    Ok(AlphaStarEstimate { value: mean, std_error: Some((var / b).sqrt()), error_bound: None, method })
}

/// `∫_0^c ⌊βx⌋ dx`.
fn floor_integral(beta: f64, c: f64) -> f64 {
    let u = beta * c;
    let k = u.floor();
    (k * (k - 1.0) / 2.0 + k * (u - k)) / beta
}

fn parry_density(param: &BetaParameter, resolution: usize, method: AlphaStarMethod) -> Result<AlphaStarEstimate> {
    if resolution == 0 {
        return domain("quadrature resolution must be at least 1");
    }
    let beta = param.beta();
    let greedy = param.greedy_one();
    let terms = match param.parry_class() {
        ParryClass::NonSimple => resolution.min(greedy.len()),
        _ => resolution,
    };
    // T^k(1) = (g_{k+1} + T^{k+1}(1)) / β, zero once the greedy expansion terminates.
    let mut orbit = vec![0.0; terms.max(greedy.len()) + 1];
    for k in (0..greedy.len()).rev() {
        orbit[k] = (f64::from(greedy[k]) + orbit[k + 1]) / beta;
    }
    let (mut num, mut den, mut weight) = (0.0, 0.0, 1.0);
    for &t in orbit.iter().take(terms) {
        num += weight * floor_integral(beta, t);
        den += weight * t;
        weight /= beta;
    }
    let value = num / den;
    let tail = weight / (1.0 - 1.0 / beta);
    let horizon = match param.parry_class() {
        ParryClass::NonSimple => beta.powi(-(greedy.len() as i32)) * terms as f64,
        _ => 0.0,
    };
    let amax = f64::from(param.alphabet_max());
    let error_bound = (tail + horizon) * (amax + value) / den;
    Ok(AlphaStarEstimate { value, std_error: None, error_bound: Some(error_bound), method })
}

/// Estimator of the maximal digit average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaMethod {
    MaxMeanCycle,
    BruteForce(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub value: f64,
    /// Exact cycle mean as `(numerator, denominator)` for the cycle method.
    pub exact: Option<(i64, i64)>,
    /// Set when the automaton is a truncation, so the value bounds `Λ(β)` from below.
    pub lower_bound: bool,
    pub method: LambdaMethod,
}

pub fn lambda_max(param: &BetaParameter, method: LambdaMethod) -> Result<LambdaEstimate> {
    let automaton = ParryAutomaton::for_param(param)?;
    lambda_on(&automaton, method)
}

pub fn lambda_on(automaton: &ParryAutomaton, method: LambdaMethod) -> Result<LambdaEstimate> {
    let lower_bound = automaton.is_truncated();
    match method {
        LambdaMethod::MaxMeanCycle => {
            let r = max_mean_cycle(automaton);
            Ok(LambdaEstimate {
                value: *r.numer() as f64 / *r.denom() as f64,
                exact: Some((*r.numer(), *r.denom())),
                lower_bound,
                method,
            })
        }
        LambdaMethod::BruteForce(n) => {
            if n == 0 {
                return domain("brute-force length must be at least 1");
            }
            let states = automaton.states();
            let mut best: Vec<Option<u64>> = vec![None; states];
            best[0] = Some(0);
            for _ in 0..n {
                let mut next = vec![None; states];
                for (j, b) in best.iter().enumerate() {
                    let Some(b) = *b else { continue };
                    for d in 0..=automaton.max_digit(j) {
                        let t = automaton.step(j, d).expect("allowed");
                        let v = b + u64::from(d);
                        if next[t].map_or(true, |x| v > x) {
                            next[t] = Some(v);
                        }
                    }
                }
                best = next;
            }
            let top = best.into_iter().flatten().max().unwrap_or(0);
            Ok(LambdaEstimate { value: top as f64 / n as f64, exact: None, lower_bound, method })
        }
    }
}

/// Karp's maximum mean cycle on the automaton graph with digit weights.
fn max_mean_cycle(automaton: &ParryAutomaton) -> Rational64 {
    let n = automaton.states();
    let mut weight: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
    for (j, row) in weight.iter_mut().enumerate() {
        for d in 0..=automaton.max_digit(j) {
            let t = automaton.step(j, d).expect("allowed");
            let w = i64::from(d);
            if row[t].map_or(true, |x| w > x) {
                row[t] = Some(w);
            }
        }
    }
    let mut dist: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n + 1];
    dist[0][0] = Some(0);
    for k in 1..=n {
        for u in 0..n {
            let Some(du) = dist[k - 1][u] else { continue };
            for v in 0..n {
                if let Some(w) = weight[u][v] {
                    let cand = du + w;
                    if dist[k][v].map_or(true, |x| cand > x) {
                        dist[k][v] = Some(cand);
                    }
                }
            }
        }
    }
    let mut best: Option<Rational64> = None;
    for v in 0..n {
        let Some(dn) = dist[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| dist[k][v].map(|dk| Rational64::new(dn - dk, (n - k) as i64)))
            .min();
        if let Some(w) = worst {
            if best.map_or(true, |b| w > b) {
                best = Some(w);
            }
        }
    }
    best.expect("the automaton graph has a cycle")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub alpha: f64,
    /// Erdős–Rényi level-set dimension; `None` beyond `Λ`.
    pub er: Option<f64>,
    /// Dimension of `{lower average ≥ α}`.
    pub lower_besicovitch: Option<f64>,
    /// Dimension of `{upper average ≤ α}`.
    pub upper_besicovitch: Option<f64>,
    /// Raw entropy estimate at `alpha`.
    pub h_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErSpectrum {
    pub beta: f64,
    pub alpha_star: AlphaStarEstimate,
    pub lambda: LambdaEstimate,
    pub h_at_alpha_star: Option<f64>,
    /// `|ĥ(α*) − 1|`.
    pub continuity_gap: Option<f64>,
    pub rows: Vec<SpectrumRow>,
    pub curve: EntropyCurve,
}

/// The closed form for integer bases, the density quadrature otherwise.
pub fn default_alpha_star_method(param: &BetaParameter) -> AlphaStarMethod {
    match param.parry_class() {
        ParryClass::Integer => AlphaStarMethod::ClosedForm,
        _ => AlphaStarMethod::ParryDensity { resolution: 4096 },
    }
}

/// `ĥ` on `[0, α*]` and 1 on `(α*, Λ]`, with both Besicovitch spectra.
pub fn er_spectrum(
    param: &BetaParameter,
    alpha_grid: &[f64],
    schedule: &EntropySchedule,
    alpha_method: AlphaStarMethod,
) -> Result<ErSpectrum> {
    let a_star = alpha_star(param, alpha_method)?;
    let automaton = ParryAutomaton::build_truncated(param, schedule.m_depth)?;
    let lambda = lambda_on(&automaton, LambdaMethod::MaxMeanCycle)?;
    let mut grid: Vec<f64> = alpha_grid.to_vec();
    let star = a_star.value;
    if !grid.contains(&star) {
        grid.push(star);
    }
    let curve = entropy_curve(param, &grid, schedule, EntropyVariant::TwoSided)?;
    let h_at_alpha_star = curve.value_at(star);
    let rows = alpha_grid
        .iter()
        .map(|&alpha| {
            let h_hat = curve.value_at(alpha);
            let inside = alpha <= lambda.value;
            let (er, lower, upper) = if !inside {
                (None, None, None)
            } else if alpha <= star {
                (h_hat, if alpha < star { Some(1.0) } else { h_hat }, h_hat)
            } else {
                (Some(1.0), h_hat, Some(1.0))
            };
            SpectrumRow { alpha, er, lower_besicovitch: lower, upper_besicovitch: upper, h_hat }
        })
        .collect();
    Ok(ErSpectrum {
        beta: param.beta(),
        continuity_gap: h_at_alpha_star.map(|h| (h - 1.0).abs()),
        alpha_star: a_star,
        lambda,
        h_at_alpha_star,
        rows,
        curve,
    })
}
