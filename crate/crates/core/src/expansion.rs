//! The beta-transformation, greedy digits, the expansion of one and
//! evaluation of digit words.
//!
//! Fast paths run in `f64` with a running error bound. Whenever `beta * y`
//! falls within the guard band (plus accumulated error) of an integer, the
//! orbit is recomputed in exact rational arithmetic from the start, and the
//! digit is certified there. Exact orbits whose size exceeds the configured
//! precision cap raise [`Error::Precision`].

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digits::{DigitSource, DigitStream, DigitWord};
use crate::error::{domain, Error, Result};
use crate::scalar::{decimal_of, exact_of, parse_decimal, ratio_to_f64, rational_bits, OrbitScalar};

/// Default number of materialized digits of the expansion of one.
pub const DEFAULT_DEPTH: usize = 64;
/// Default guard band around branch points.
pub const DEFAULT_GUARD_BAND: f64 = 1e-12;
/// Default cap on the bit size of exact orbit values.
pub const DEFAULT_MAX_PRECISION_BITS: u64 = 1 << 16;

/// Named algebraic bases, resolved to 30 significant digits.
pub const NAMED_BASES: &[(&str, &str)] = &[
    ("golden", "1.61803398874989484820458683437"),
    ("tribonacci", "1.83928675521416113255185256465"),
    ("plastic", "1.32471795724474602596090885448"),
];

/// Precision knobs for digit certification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    pub guard_band: f64,
    pub max_precision_bits: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { guard_band: DEFAULT_GUARD_BAND, max_precision_bits: DEFAULT_MAX_PRECISION_BITS }
    }
}

/// Classification of a base by the orbit of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n")]
pub enum ParryClass {
    /// Integer base; `ε*(1,β) = (β−1)^∞`.
    Integer,
    /// The greedy expansion of one terminates after `n` digits.
    SimpleParry(usize),
    /// No termination observed within the materialized depth.
    NonSimple,
}

/// Records that a parameter is the purely periodic approximant `β_m` of another base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approximant {
    pub source_beta: f64,
    pub m: usize,
}

/// A base `β > 1` together with its quasi-greedy expansion of one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaParameter {
    beta: f64,
    #[serde(skip)]
    exact: BigRational,
    literal: String,
    alphabet_max: u32,
    one_digits: Vec<u32>,
    greedy_one: Vec<u32>,
    parry_class: ParryClass,
    depth: usize,
    approximant: Option<Approximant>,
    precision: Precision,
}

impl BetaParameter {
    /// Parses a decimal literal or a named constant and computes `ε*(1,β)` to `depth`.
    pub fn parse(text: &str, depth: usize) -> Result<Self> {
        Self::parse_with(text, depth, Precision::default())
    }

    pub fn parse_with(text: &str, depth: usize, precision: Precision) -> Result<Self> {
        let trimmed = text.trim();
        let literal = NAMED_BASES
            .iter()
            .find(|(name, _)| name.eq_ignore_ascii_case(trimmed))
            .map(|(_, value)| *value)
            .unwrap_or(trimmed);
        let exact = parse_decimal(literal)?;
        expansion_of_one_exact(exact, literal.to_string(), depth, precision)
    }

    /// Builds from an `f64`, interpreting it by its shortest decimal form.
    pub fn from_f64(beta: f64, depth: usize) -> Result<Self> {
        if !beta.is_finite() {
            return domain("beta must be finite");
        }
        expansion_of_one_exact(decimal_of(beta), format!("{beta}"), depth, Precision::default())
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn literal(&self) -> &str {
        &self.literal
    }

    pub fn alphabet_max(&self) -> u32 {
        self.alphabet_max
    }

    pub fn parry_class(&self) -> ParryClass {
        self.parry_class
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn approximant(&self) -> Option<Approximant> {
        self.approximant
    }

    /// The materialized prefix of `ε*(1,β)`.
    pub fn one_digits(&self) -> &[u32] {
        &self.one_digits
    }

    /// The greedy expansion of one (terminating for simple Parry numbers).
    pub fn greedy_one(&self) -> &[u32] {
        &self.greedy_one
    }

    /// Whether `ε*` is known to be purely periodic (so every digit is available).
    pub fn is_periodic(&self) -> bool {
        self.period().is_some()
    }

    /// Period of the quasi-greedy expansion for Integer and simple Parry bases.
    pub fn period(&self) -> Option<usize> {
        match self.parry_class {
            ParryClass::Integer => Some(1),
            ParryClass::SimpleParry(n) => Some(n),
            ParryClass::NonSimple => None,
        }
    }

    /// Digit `ε*_{i+1}` (zero-based `i`), extended periodically when possible.
    pub fn one_digit(&self, i: usize) -> Option<u32> {
        if let Some(&d) = self.one_digits.get(i) {
            return Some(d);
        }
        self.period().map(|p| self.one_digits[i % p])
    }

    /// Indices `m` (one-based) with `ε*_m ≥ 1` within the materialized depth.
    pub fn valid_truncation_indices(&self) -> Vec<usize> {
        (1..=self.depth).filter(|&m| self.one_digit(m - 1).unwrap_or(0) >= 1).collect()
    }

    /// The purely periodic approximant `β_m` with `ε*(1,β_m) = (ε*_1,…,ε*_{m−1},ε*_m−1)^∞`.
    pub fn truncate(&self, m: usize) -> Result<BetaParameter> {
        let beta_m = crate::entropy::solve_beta_m(self, m)?;
        let mut greedy: Vec<u32> = (0..m).map(|i| self.one_digit(i).expect("m within depth")).collect();
        let mut period = greedy.clone();
        *period.last_mut().expect("m >= 1") -= 1;
        let depth = self.depth.max(m);
        let one_digits: Vec<u32> = (0..depth).map(|i| period[i % m]).collect();
        check_self_maximal(&one_digits)?;
        greedy.truncate(m);
        Ok(BetaParameter {
            beta: beta_m,
            exact: decimal_of(beta_m),
            literal: format!("{beta_m}"),
            alphabet_max: self.alphabet_max,
            one_digits,
            greedy_one: greedy,
            parry_class: ParryClass::SimpleParry(m),
            depth,
            approximant: Some(Approximant { source_beta: self.beta, m }),
            precision: self.precision,
        })
    }

    /// This base if it is exactly Parry, else its approximant at the largest valid `m ≤ max_m`.
    pub fn parry_or_truncated(&self, max_m: usize) -> Result<BetaParameter> {
        if self.is_periodic() {
            return Ok(self.clone());
        }
        let mut last = None;
        for m in self.valid_truncation_indices().into_iter().filter(|&m| m <= max_m).rev() {
            match self.truncate(m) {
                Ok(p) => return Ok(p),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or_else(|| Error::Depth(format!("no truncation index m <= {max_m} with ε*_m >= 1"))))
    }
}

/// `ε*(1,β)` for an exact base value, per the integer convention and the simple-Parry rewrite.
pub fn expansion_of_one(beta: f64, depth: usize) -> Result<BetaParameter> {
    BetaParameter::from_f64(beta, depth)
}

fn expansion_of_one_exact(
    exact: BigRational,
    literal: String,
    depth: usize,
    precision: Precision,
) -> Result<BetaParameter> {
    if depth == 0 {
        return domain("depth must be at least 1");
    }
    if exact <= BigRational::one() {
        return domain(format!("beta must exceed 1, got {literal}"));
    }
    let beta = ratio_to_f64(&exact);
    if exact.is_integer() {
        let b = exact.to_integer().to_u32().ok_or_else(|| Error::Domain("integer base too large".into()))?;
        return Ok(BetaParameter {
            beta,
            exact,
            literal,
            alphabet_max: b - 1,
            one_digits: vec![b - 1; depth],
            greedy_one: vec![b],
            parry_class: ParryClass::Integer,
            depth,
            approximant: None,
            precision,
        });
    }
    let alphabet_max = exact.floor().to_integer().to_u32().ok_or_else(|| Error::Domain("base too large".into()))?;
    let tol = exact_of(precision.guard_band);
    let mut y = BigRational::one();
    let mut greedy = Vec::with_capacity(depth);
    let mut terminated_at = None;
    for i in 1..=depth {
        let z = &exact * &y;
        let nearest = z.round();
        if nearest >= BigRational::one() && (&z - &nearest).abs() < tol {
            greedy.push(nearest.to_integer().to_u32().expect("digit fits"));
            terminated_at = Some(i);
            break;
        }
        let d = z.floor();
        greedy.push(d.to_integer().to_u32().expect("digit fits"));
        y = z - d;
        if rational_bits(&y) > precision.max_precision_bits {
            return Err(Error::Precision(format!(
                "orbit of one exceeds {} bits at digit {i}",
                precision.max_precision_bits
            )));
        }
    }
    let (one_digits, parry_class) = match terminated_at {
        Some(n) => {
            let mut period = greedy.clone();
            period[n - 1] -= 1;
            ((0..depth).map(|i| period[i % n]).collect(), ParryClass::SimpleParry(n))
        }
        None => (greedy.clone(), ParryClass::NonSimple),
    };
    check_self_maximal(&one_digits)?;
    Ok(BetaParameter {
        beta,
        exact,
        literal,
        alphabet_max,
        one_digits,
        greedy_one: greedy,
        parry_class,
        depth,
        approximant: None,
        precision,
    })
}

/// Every shifted suffix of `prefix` is lexicographically ≤ the prefix itself.
pub fn is_self_maximal(prefix: &[u32]) -> bool {
    (1..prefix.len()).all(|i| {
        let suffix = &prefix[i..];
        suffix <= &prefix[..suffix.len()]
    })
}

fn check_self_maximal(prefix: &[u32]) -> Result<()> {
    if is_self_maximal(prefix) {
        Ok(())
    } else {
        Err(Error::Precision("materialized expansion of one is not self-maximal".into()))
    }
}

/// Greedy digits of `x` in base `beta` in any exact or floating scalar.
pub fn greedy_digits<S: OrbitScalar>(beta: &S, x: S, n: usize) -> Result<(DigitWord, S)> {
    if x < S::zero() || x >= S::one() {
        return domain("x must lie in [0,1)");
    }
    let mut y = x;
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let z = beta.clone() * y;
        let d = z
            .floor_digit()
            .ok_or_else(|| Error::Domain("orbit left the unit interval".into()))?;
        digits.push(d);
        y = z - S::from_digit(d);
    }
    Ok((DigitWord::new(digits), y))
}

/// One step of `T_β(x) = βx − ⌊βx⌋` in any scalar.
pub fn beta_map<S: OrbitScalar>(beta: &S, x: S) -> Result<S> {
    let z = beta.clone() * x;
    let d = z.floor_digit().ok_or_else(|| Error::Domain("negative orbit value".into()))?;
    Ok(z - S::from_digit(d))
}

/// `Σ εᵢ β^{−i}` by Horner's rule in any scalar.
pub fn evaluate_with<S: OrbitScalar>(beta: &S, digits: &[u32]) -> S {
    let mut v = S::zero();
    for &d in digits.iter().rev() {
        v = (v + S::from_digit(d)) / beta.clone();
    }
    v
}

fn check_point(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return domain(format!("x = {x} is outside [0,1)"));
    }
    Ok(())
}

/// `T_β(x)`, certified near branch points.
pub fn transform(param: &BetaParameter, x: f64) -> Result<f64> {
    check_point(x)?;
    let z = param.beta * x;
    let dist = (z - z.floor()).min(z.floor() + 1.0 - z);
    let err = beta_error(param) * x + 4.0 * f64::EPSILON * z;
    if dist > param.precision.guard_band + err {
        return Ok(z - z.floor());
    }
    let exact = ratio_to_f64(&beta_map(&param.exact, exact_of(x))?);
    // Values just below one must not round onto one.
    Ok(exact.min(1.0 - f64::EPSILON / 2.0))
}

fn beta_error(param: &BetaParameter) -> f64 {
    ratio_to_f64(&(exact_of(param.beta) - &param.exact).abs())
}

/// The first `n` greedy digits of `x`.
pub fn expand(param: &BetaParameter, x: f64, n: usize) -> Result<DigitWord> {
    check_point(x)?;
    let mut source = PointSource::new(param.clone(), x)?;
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        digits.push(source.next()?);
    }
    Ok(DigitWord::new(digits))
}

/// `Σ_{i ≤ cutoff} εᵢ β^{−i}`.
pub fn evaluate(param: &BetaParameter, word: &DigitWord, cutoff: usize) -> Result<f64> {
    word.check_alphabet(param.alphabet_max)?;
    let take = cutoff.min(word.len());
    Ok(evaluate_with(&param.beta, &word.digits()[..take]))
}

/// Evaluates the first `cutoff` digits drawn from a stream.
pub fn evaluate_stream(param: &BetaParameter, stream: &mut DigitStream, cutoff: usize) -> Result<f64> {
    let word = stream.take_word(cutoff)?;
    evaluate(param, &word, cutoff)
}

/// Lazy greedy digits of a fixed point, certified digit by digit.
pub struct PointSource {
    param: BetaParameter,
    x: f64,
    beta_err: f64,
    y: f64,
    err: f64,
    exact: Option<BigRational>,
    emitted: usize,
}

impl PointSource {
    pub fn new(param: BetaParameter, x: f64) -> Result<Self> {
        check_point(x)?;
        let beta_err = beta_error(&param);
        Ok(PointSource { param, x, beta_err, y: x, err: 0.0, exact: None, emitted: 0 })
    }

    fn next(&mut self) -> Result<u32> {
        if self.exact.is_none() {
            let z = self.param.beta * self.y;
            let floor = z.floor();
            let dist = (z - floor).min(floor + 1.0 - z);
            let bound = self.param.beta * self.err + self.beta_err * self.y + 4.0 * f64::EPSILON * (z + 1.0);
            if dist > self.param.precision.guard_band + bound {
                self.y = z - floor;
                self.err = bound;
                self.emitted += 1;
                return Ok(floor as u32);
            }
            self.replay_exact()?;
        }
        let y = self.exact.take().expect("exact mode");
        let z = &self.param.exact * &y;
        let d = z.floor();
        let digit = d.to_integer().to_u32().expect("digit fits");
        let next = z - d;
        if rational_bits(&next) > self.param.precision.max_precision_bits {
            return Err(Error::Precision(format!(
                "certifying digit {} needs more than {} bits",
                self.emitted + 1,
                self.param.precision.max_precision_bits
            )));
        }
        self.exact = Some(next);
        self.emitted += 1;
        Ok(digit)
    }

    fn replay_exact(&mut self) -> Result<()> {
        let mut y = exact_of(self.x);
        for _ in 0..self.emitted {
            y = beta_map(&self.param.exact, y)?;
        }
        if rational_bits(&y) > self.param.precision.max_precision_bits {
            return Err(Error::Precision(format!(
                "exact orbit exceeds {} bits at digit {}",
                self.param.precision.max_precision_bits, self.emitted
            )));
        }
        self.exact = Some(y);
        Ok(())
    }
}

impl DigitSource for PointSource {
    fn next_digit(&mut self) -> Result<Option<u32>> {
        self.next().map(Some)
    }
}

/// Digits of a Lebesgue-uniform random point, sampled lazily.
///
/// The state is an interval `[lo, lo + width)` on which the current orbit
/// point is conditionally uniform. A straddled branch point is resolved by
/// bisecting with a fair coin, and the interval is kept narrow the same way.
pub struct UniformSource {
    beta: f64,
    lo: f64,
    width: f64,
    rng: ChaCha8Rng,
}

const UNIFORM_WIDTH: f64 = 1.0 / (1u64 << 30) as f64;

impl UniformSource {
    pub fn new(beta: f64, seed: u64) -> Result<Self> {
        if !(beta > 1.0) {
            return domain("beta must exceed 1");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k: u64 = rng.gen_range(0..(1u64 << 30));
        Ok(UniformSource { beta, lo: k as f64 * UNIFORM_WIDTH, width: UNIFORM_WIDTH, rng })
    }

    fn bisect(&mut self) {
        self.width *= 0.5;
        if self.rng.gen::<bool>() {
            self.lo += self.width;
        }
    }

    fn step(&mut self) -> u32 {
        loop {
            let a = self.beta * self.lo;
            let b = self.beta * (self.lo + self.width);
            let k = a.floor();
            if b <= k + 1.0 || self.width < 1e-300 {
                self.lo = a - k;
                self.width = b.min(k + 1.0) - a;
                while self.width > UNIFORM_WIDTH {
                    self.bisect();
                }
                return k as u32;
            }
            self.bisect();
        }
    }
}

impl DigitSource for UniformSource {
    fn next_digit(&mut self) -> Result<Option<u32>> {
        Ok(Some(self.step()))
    }
}

impl DigitStream {
    /// Greedy digits of the point `x`.
    pub fn from_point(param: &BetaParameter, x: f64) -> Result<DigitStream> {
        Ok(DigitStream::from_source(PointSource::new(param.clone(), x)?))
    }

    /// Digits of a seeded Lebesgue-uniform random point.
    pub fn uniform(param: &BetaParameter, seed: u64) -> Result<DigitStream> {
        Ok(DigitStream::from_source(UniformSource::new(param.beta(), seed)?))
    }
}
