//! Erdős–Rényi window maxima `I_{n,φ(n)}`, their averages and diagnostics
//! for slowly varying window lengths.

use serde::{Deserialize, Serialize};

use crate::digits::{DigitStream, DigitWord};
use crate::error::{domain, Result};

/// Largest digit sum over windows of `width` consecutive digits.
pub fn window_max_sum(word: &DigitWord, width: usize) -> Result<u64> {
    if width == 0 || width > word.len() {
        return domain(format!("window width {width} must lie in [1, {}]", word.len()));
    }
    Ok(max_window(&word.prefix_sums(), word.len(), width))
}

fn max_window(prefix: &[u64], n: usize, width: usize) -> u64 {
    (0..=n - width).map(|i| prefix[i + width] - prefix[i]).max().expect("non-empty range")
}

/// The growth function `θ` behind a window length `φ(n) = ⌊θ(n)⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "kebab-case")]
pub enum WindowKind {
    Identity,
    /// `c log n`.
    CLog(f64),
    /// `c log log n`.
    CLogLog(f64),
    /// `c arctan n`.
    CArctan(f64),
    /// `exp((log n)^ν)`.
    ExpLnNu(f64),
    /// `θ(n) = table[n−1]`.
    Custom(Vec<f64>),
}

impl WindowKind {
    /// Multiplicative constant `c` (1 for kinds without one).
    pub fn scale(&self) -> f64 {
        match self {
            WindowKind::CLog(c) | WindowKind::CLogLog(c) | WindowKind::CArctan(c) => *c,
            _ => 1.0,
        }
    }

    /// `θ(n) / c`.
    pub fn base(&self, n: usize) -> Result<f64> {
        let x = n as f64;
        Ok(match self {
            WindowKind::Identity => x,
            WindowKind::CLog(_) => x.ln(),
            WindowKind::CLogLog(_) => x.ln().ln(),
            WindowKind::CArctan(_) => x.atan(),
            WindowKind::ExpLnNu(nu) => x.ln().powf(*nu).exp(),
            WindowKind::Custom(table) => match n.checked_sub(1).and_then(|i| table.get(i)) {
                Some(&v) => v,
                None => return domain(format!("custom window table has no value at n = {n}")),
            },
        })
    }

    pub fn theta(&self, n: usize) -> Result<f64> {
        Ok(self.scale() * self.base(n)?)
    }

    /// Supremum of `θ` when it is bounded.
    pub fn bound(&self) -> Option<f64> {
        match self {
            WindowKind::CArctan(c) => Some(c * std::f64::consts::FRAC_PI_2),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            WindowKind::CLog(c) | WindowKind::CLogLog(c) | WindowKind::CArctan(c) => *c > 0.0 && c.is_finite(),
            WindowKind::ExpLnNu(nu) => *nu > 0.0 && *nu < 1.0,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            domain(format!("invalid window parameters {self:?}"))
        }
    }
}

/// `φ(n) = ⌊θ(n)⌋` clamped to `[1, n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFunction {
    pub kind: WindowKind,
}

impl WindowFunction {
    pub fn new(kind: WindowKind) -> Result<Self> {
        kind.validate()?;
        Ok(WindowFunction { kind })
    }

    /// `(φ(n), clamped)`.
    pub fn phi_with_clamp(&self, n: usize) -> Result<(usize, bool)> {
        if n == 0 {
            return domain("window length is defined for n >= 1");
        }
        let t = self.kind.theta(n)?.floor();
        if t.is_nan() {
            return domain(format!("theta({n}) is not a number"));
        }
        if t < 1.0 {
            Ok((1, true))
        } else if t > n as f64 {
            Ok((n, true))
        } else {
            Ok((t as usize, false))
        }
    }

    pub fn phi(&self, n: usize) -> Result<usize> {
        Ok(self.phi_with_clamp(n)?.0)
    }
}

/// Geometric checkpoints `⌈1.25^k⌉` up to `n_max`, always ending at `n_max`.
pub fn default_checkpoints(n_max: usize) -> Vec<usize> {
    geometric_checkpoints(1, n_max)
}

fn geometric_checkpoints(start: usize, n_max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut x = 1.0f64;
    loop {
        let n = x.ceil() as usize;
        if n > n_max {
            break;
        }
        if n >= start && out.last() != Some(&n) {
            out.push(n);
        }
        x *= 1.25;
    }
    if out.last() != Some(&n_max) && n_max >= start {
        out.push(n_max);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErRow {
    pub n: usize,
    pub phi_n: usize,
    pub clamped: bool,
    /// `I_{n,φ(n)}`.
    pub i: u64,
    /// `A_{n,φ(n)} = I_{n,φ(n)} / φ(n)`.
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErTrace {
    pub rows: Vec<ErRow>,
    /// Infimum of `A` over the second half of the checkpoints.
    pub tail_inf: f64,
    /// Supremum of `A` over the second half of the checkpoints.
    pub tail_sup: f64,
    /// Spread `max − min` of `A` over the last checkpoints.
    pub last_spread: f64,
    /// `A` at the last checkpoint minus `A` at the first of the last checkpoints.
    pub trend: f64,
    /// Checkpoints where `φ` was clamped into `[1, n]`.
    pub clamped_checkpoints: usize,
}

/// Checkpoints used by the spread and trend of a trace.
pub const CONVERGENCE_WINDOW: usize = 5;

/// `A_{n,φ(n)}` of a digit stream at increasing checkpoints.
pub fn er_average_trace(stream: &mut DigitStream, phi: &WindowFunction, checkpoints: &[usize]) -> Result<ErTrace> {
    if checkpoints.is_empty() {
        return domain("no checkpoints");
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return domain("checkpoints must be positive and strictly increasing");
    }
    let mut prefix: Vec<u64> = vec![0];
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        while prefix.len() <= n {
            match stream.next_digit()? {
                Some(d) => prefix.push(prefix.last().expect("non-empty") + u64::from(d)),
                None => return domain(format!("digit stream ended before checkpoint {n}")),
            }
        }
        let (phi_n, clamped) = phi.phi_with_clamp(n)?;
        let i = max_window(&prefix, n, phi_n);
        rows.push(ErRow { n, phi_n, clamped, i, a: i as f64 / phi_n as f64 });
    }
    let tail = &rows[rows.len() / 2..];
    let last = &rows[rows.len().saturating_sub(CONVERGENCE_WINDOW)..];
    let fold = |rs: &[ErRow]| {
        rs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.a), hi.max(r.a)))
    };
    let (tail_inf, tail_sup) = fold(tail);
    let (lo, hi) = fold(last);
    Ok(ErTrace {
        tail_inf,
        tail_sup,
        last_spread: hi - lo,
        trend: last.last().expect("non-empty").a - last[0].a,
        clamped_checkpoints: rows.iter().filter(|r| r.clamped).count(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlowlyVaryingRow {
    pub n: usize,
    /// `n (1 − θ(n−1)/θ(n))`.
    pub ratio: f64,
    /// `log θ(n) / log n`.
    pub log_ratio: f64,
    /// `θ(n) / n`.
    pub linear_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlowlyVaryingReport {
    pub kind: WindowKind,
    pub rows: Vec<SlowlyVaryingRow>,
    /// The ratio trace does not increase over checkpoints in `[n_max/10, n_max]`.
    pub ratio_nonincreasing_last_decade: bool,
    pub log_ratio_decreasing_last_decade: bool,
    pub linear_ratio_decreasing_last_decade: bool,
    /// Supremum of `θ` when it is bounded (so `θ` does not diverge).
    pub bounded_by: Option<f64>,
    /// Ratio trace non-increasing over the last decade and below [`SLOWLY_VARYING_THRESHOLD`] at `n_max`.
    pub passes: bool,
}

/// Final ratio value below which the diagnostic passes.
pub const SLOWLY_VARYING_THRESHOLD: f64 = 0.5;

/// First checkpoint of the diagnostic.
pub const SLOWLY_VARYING_START: usize = 16;

/// Numeric traces of the slowly-varying ratio tests at geometric checkpoints.
///
/// The ratio trace is computed from `θ/c`, so it is identical for every scale `c`.
pub fn slowly_varying_check(kind: &WindowKind, n_max: usize) -> Result<SlowlyVaryingReport> {
    kind.validate()?;
    if n_max < SLOWLY_VARYING_START {
        return domain(format!("n_max must be at least {SLOWLY_VARYING_START}"));
    }
    for n in SLOWLY_VARYING_START - 1..=n_max {
        let t = kind.theta(n)?;
        if !(t > 0.0) {
            return domain(format!("theta({n}) = {t} is not positive"));
        }
    }
    let checkpoints = geometric_checkpoints(SLOWLY_VARYING_START, n_max);
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in &checkpoints {
        let (prev, cur) = (kind.base(n - 1)?, kind.base(n)?);
        let theta = kind.scale() * cur;
        rows.push(SlowlyVaryingRow {
            n,
            ratio: n as f64 * ((cur - prev) / cur),
            log_ratio: theta.ln() / (n as f64).ln(),
            linear_ratio: theta / n as f64,
        });
    }
    let decade: Vec<&SlowlyVaryingRow> = rows.iter().filter(|r| r.n * 10 >= n_max).collect();
    let nonincreasing = |f: fn(&SlowlyVaryingRow) -> f64| decade.windows(2).all(|w| f(w[1]) <= f(w[0]));
    let ratio_ok = nonincreasing(|r| r.ratio);
    let final_ratio = rows.last().expect("at least one checkpoint").ratio;
    Ok(SlowlyVaryingReport {
        kind: kind.clone(),
        ratio_nonincreasing_last_decade: ratio_ok,
        log_ratio_decreasing_last_decade: nonincreasing(|r| r.log_ratio),
        linear_ratio_decreasing_last_decade: nonincreasing(|r| r.linear_ratio),
        bounded_by: kind.bound(),
        passes: ratio_ok && final_ratio < SLOWLY_VARYING_THRESHOLD,
        rows,
    })
}
