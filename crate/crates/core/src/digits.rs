//! Finite digit words and unbounded digit streams.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite word over the digit alphabet `{0, ..., alphabet_max}`.
///
/// The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DigitWord(Vec<u32>);

impl DigitWord {
    pub fn new(digits: Vec<u32>) -> Self {
        DigitWord(digits)
    }

    pub fn empty() -> Self {
        DigitWord(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        DigitWord(vec![0; len])
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Digit sum `S_n`.
    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&d| u64::from(d)).sum()
    }

    /// Prefix sums `S_0 = 0, S_1, ..., S_n`.
    pub fn prefix_sums(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        let mut acc = 0u64;
        out.push(0);
        for &d in &self.0 {
            acc += u64::from(d);
            out.push(acc);
        }
        out
    }

    pub fn push(&mut self, d: u32) {
        self.0.push(d);
    }

    pub fn concat(&self, other: &DigitWord) -> DigitWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        DigitWord(v)
    }

    /// The word with its first digit removed (the shift map on words).
    pub fn shift(&self) -> DigitWord {
        DigitWord(self.0.iter().skip(1).copied().collect())
    }

    pub fn max_digit(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }

    pub fn check_alphabet(&self, alphabet_max: u32) -> Result<()> {
        match self.0.iter().position(|&d| d > alphabet_max) {
            Some(i) => Err(Error::Domain(format!(
                "digit {} at position {} exceeds alphabet bound {}",
                self.0[i], i, alphabet_max
            ))),
            None => Ok(()),
        }
    }
}

impl From<Vec<u32>> for DigitWord {
    fn from(v: Vec<u32>) -> Self {
        DigitWord(v)
    }
}

impl From<&[u32]> for DigitWord {
    fn from(v: &[u32]) -> Self {
        DigitWord(v.to_vec())
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses comma-separated digits (`"1,0,1"`); a string of single digits
/// without separators (`"101"`) is accepted too.
impl FromStr for DigitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DigitWord::empty());
        }
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Domain(format!("bad digit {t:?}")))
        };
        let digits = if s.contains(',') {
            s.split(',').map(parse).collect::<Result<Vec<_>>>()?
        } else {
            s.chars().map(|c| parse(&c.to_string())).collect::<Result<Vec<_>>>()?
        };
        Ok(DigitWord(digits))
    }
}

/// A lazily generated, single-consumer source of digits.
pub trait DigitSource: Send {
    /// The next digit, `Ok(None)` once a finite source is exhausted.
    fn next_digit(&mut self) -> Result<Option<u32>>;
}

/// An unbounded (or finite) deterministic digit generator.
pub struct DigitStream {
    source: Box<dyn DigitSource>,
    emitted: usize,
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitStream").field("emitted", &self.emitted).finish()
    }
}

impl DigitStream {
    pub fn from_source(source: impl DigitSource + 'static) -> Self {
        DigitStream { source: Box::new(source), emitted: 0 }
    }

    /// The word repeated forever.
    pub fn periodic(word: DigitWord) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Domain("periodic stream needs a non-empty word".into()));
        }
        Ok(Self::from_source(Periodic { word, pos: 0 }))
    }

    /// The digits of a finite word, then exhaustion.
    pub fn finite(word: DigitWord) -> Self {
        Self::from_source(Finite { word, pos: 0 })
    }

    pub fn zeros() -> Self {
        Self::from_source(Periodic { word: DigitWord::new(vec![0]), pos: 0 })
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    pub fn next_digit(&mut self) -> Result<Option<u32>> {
        let d = self.source.next_digit()?;
        if d.is_some() {
            self.emitted += 1;
        }
        Ok(d)
    }

    /// Up to `n` further digits (fewer only if the source is finite).
    pub fn take_word(&mut self, n: usize) -> Result<DigitWord> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            match self.next_digit()? {
                Some(d) => out.push(d),
                None => break,
            }
        }
        Ok(DigitWord::new(out))
    }
}

struct Periodic {
    word: DigitWord,
    pos: usize,
}

impl DigitSource for Periodic {
    fn next_digit(&mut self) -> Result<Option<u32>> {
        let d = self.word.digits()[self.pos];
        self.pos = (self.pos + 1) % self.word.len();
        Ok(Some(d))
    }
}

struct Finite {
    word: DigitWord,
    pos: usize,
}

impl DigitSource for Finite {
    fn next_digit(&mut self) -> Result<Option<u32>> {
        let d = self.word.digits().get(self.pos).copied();
        self.pos += 1;
        Ok(d)
    }
}
