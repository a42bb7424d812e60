//! Digits, finite words, eventually periodic addresses, and base pairs.
//!
//! An address `w = w_1 w_2 w_3 ...` over the digit set `{+1, -1, 0}` (written
//! `p`, `m`, `z`) is evaluated in a contraction ratio `x` in `(0, 1)` as the
//! series `s(w, x) = sum_i w_i x^i`. A [`BetaPair`] carries two bases
//! `b1, b2 > 1` and the cached ratios `lambda = 1/b1`, `mu = 1/b2`; projecting
//! an address gives the planar point `(s(w, lambda), s(w, mu))`.

use std::fmt;

use crate::{Error, Result};

/// A single address digit: `p = +1`, `m = -1`, `z = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Digit {
    /// Digit `+1`.
    P,
    /// Digit `-1`.
    M,
    /// Digit `0`.
    Z,
}

impl Digit {
    /// Numeric value of the digit.
    pub fn value(self) -> i32 {
        match self {
            Digit::P => 1,
            Digit::M => -1,
            Digit::Z => 0,
        }
    }

    /// The digit of opposite sign (`z` is its own negation).
    pub fn negate(self) -> Digit {
        match self {
            Digit::P => Digit::M,
            Digit::M => Digit::P,
            Digit::Z => Digit::Z,
        }
    }

    /// Letter used in the text encoding.
    pub fn letter(self) -> char {
        match self {
            Digit::P => 'p',
            Digit::M => 'm',
            Digit::Z => 'z',
        }
    }

    fn from_letter(c: char) -> Option<Digit> {
        match c {
            'p' => Some(Digit::P),
            'm' => Some(Digit::M),
            'z' => Some(Digit::Z),
            _ => None,
        }
    }
}

/// A finite word over `{p, m, z}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteWord(Vec<Digit>);

impl FiniteWord {
    /// Wrap a digit vector.
    pub fn new(digits: Vec<Digit>) -> Self {
        FiniteWord(digits)
    }

    /// The empty word.
    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    /// Parse the text encoding: letters `p`, `m`, `z`, each optionally
    /// followed by `^k` for a run of length `k` (e.g. `pm^3zp^7mz`).
    pub fn parse(s: &str) -> Result<Self> {
        let mut digits = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let d = Digit::from_letter(c)
                .ok_or_else(|| Error::Domain(format!("unexpected character {c:?} in word")))?;
            let mut count = 1usize;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut num = String::new();
                while chars.peek().map_or(false, |c| c.is_ascii_digit()) {
                    num.push(chars.next().unwrap());
                }
                count = num
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad repeat count in {s:?}")))?;
                if count == 0 {
                    return Err(Error::Domain("repeat count must be positive".into()));
                }
            }
            digits.extend(std::iter::repeat(d).take(count));
        }
        Ok(FiniteWord(digits))
    }

    /// Digits of the word.
    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    /// Length of the word.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the word is empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Append a digit.
    pub fn push(&mut self, d: Digit) {
        self.0.push(d);
    }

    /// The digitwise negation.
    pub fn negate(&self) -> Self {
        FiniteWord(self.0.iter().map(|d| d.negate()).collect())
    }

    /// Concatenation `self . other`.
    pub fn concat(&self, other: &FiniteWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    /// The word repeated `k` times.
    pub fn repeat(&self, k: usize) -> Self {
        let mut v = Vec::with_capacity(self.0.len() * k);
        for _ in 0..k {
            v.extend_from_slice(&self.0);
        }
        FiniteWord(v)
    }

    /// Finite partial sum `sum_{i=1}^{n} w_i x^i`.
    pub fn partial_sum(&self, x: f64) -> f64 {
        let mut pow = 1.0;
        let mut s = 0.0;
        for d in &self.0 {
            pow *= x;
            s += d.value() as f64 * pow;
        }
        s
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.0.len() {
            let d = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == d {
                j += 1;
            }
            let run = j - i;
            if run >= 2 {
                write!(f, "{}^{}", d.letter(), run)?;
            } else {
                write!(f, "{}", d.letter())?;
            }
            i = j;
        }
        Ok(())
    }
}

impl serde::Serialize for FiniteWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An eventually periodic address `pre . (per)^infinity` with non-empty period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicAddress {
    preperiod: FiniteWord,
    period: FiniteWord,
}

impl PeriodicAddress {
    /// Build an address; the period must be non-empty.
    pub fn new(preperiod: FiniteWord, period: FiniteWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Domain("address period must be non-empty".into()));
        }
        Ok(PeriodicAddress { preperiod, period })
    }

    /// Address with constant tail `digit^infinity`.
    pub fn eventually_constant(preperiod: FiniteWord, digit: Digit) -> Self {
        PeriodicAddress {
            preperiod,
            period: FiniteWord(vec![digit]),
        }
    }

    /// Parse `PRE(PER)*`, e.g. `pm^2(ppz)*`. The parenthesised period is
    /// mandatory and must terminate the string.
    pub fn parse(s: &str) -> Result<Self> {
        let open = s
            .find('(')
            .ok_or_else(|| Error::Domain(format!("address {s:?} lacks a (period)*")))?;
        let close = s
            .rfind(')')
            .ok_or_else(|| Error::Domain(format!("address {s:?} lacks a closing parenthesis")))?;
        if &s[close + 1..] != "*" || close < open {
            return Err(Error::Domain(format!(
                "address {s:?} must end with (period)*"
            )));
        }
        let pre = FiniteWord::parse(&s[..open])?;
        let per = FiniteWord::parse(&s[open + 1..close])?;
        PeriodicAddress::new(pre, per)
    }

    /// The preperiodic part.
    pub fn preperiod(&self) -> &FiniteWord {
        &self.preperiod
    }

    /// The periodic part.
    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    /// Digit at 1-based position `i`.
    pub fn digit_at(&self, i: usize) -> Digit {
        let i = i - 1;
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod.digits()[i]
        } else {
            self.period.digits()[(i - pre) % self.period.len()]
        }
    }

    /// The digitwise negation.
    pub fn negate(&self) -> Self {
        PeriodicAddress {
            preperiod: self.preperiod.negate(),
            period: self.period.negate(),
        }
    }

    /// Prepend a finite word.
    pub fn with_prefix(&self, prefix: &FiniteWord) -> Self {
        PeriodicAddress {
            preperiod: prefix.concat(&self.preperiod),
            period: self.period.clone(),
        }
    }

    /// Evaluate `sum_i w_i x^i` for a contraction ratio `x` in `(0, 1)`.
    ///
    /// The value depends only on the digit sequence, not on the chosen
    /// preperiod/period representation.
    pub fn eval_series(&self, base: f64) -> Result<f64> {
        if !(base > 0.0 && base < 1.0) {
            return Err(Error::Domain(format!(
                "series base must lie in (0, 1), got {base}"
            )));
        }
        let n = self.preperiod.len() as i32;
        let q = self.period.len() as i32;
        let head = self.preperiod.partial_sum(base);
        let block = self.period.partial_sum(base);
        Ok(head + base.powi(n) * block / (1.0 - base.powi(q)))
    }

    /// Project to the plane: `(s(w, lambda), s(w, mu))`.
    pub fn project(&self, bp: &BetaPair) -> Result<(f64, f64)> {
        Ok((self.eval_series(bp.lambda())?, self.eval_series(bp.mu())?))
    }
}

impl fmt::Display for PeriodicAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})*", self.preperiod, self.period)
    }
}

/// A pair of bases `b1, b2 > 1`, `b1 != b2`, with cached reciprocals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaPair {
    beta1: f64,
    beta2: f64,
    lambda: f64,
    mu: f64,
}

impl BetaPair {
    /// Validate and build a pair.
    pub fn new(beta1: f64, beta2: f64) -> Result<Self> {
        if !(beta1.is_finite() && beta2.is_finite() && beta1 > 1.0 && beta2 > 1.0) {
            return Err(Error::Domain(format!(
                "bases must be finite and exceed 1, got ({beta1}, {beta2})"
            )));
        }
        if beta1 == beta2 {
            return Err(Error::Domain(format!("bases must differ, got {beta1} twice")));
        }
        Ok(BetaPair {
            beta1,
            beta2,
            lambda: 1.0 / beta1,
            mu: 1.0 / beta2,
        })
    }

    /// First base.
    pub fn beta1(self) -> f64 {
        self.beta1
    }

    /// Second base.
    pub fn beta2(self) -> f64 {
        self.beta2
    }

    /// `1 / b1`.
    pub fn lambda(self) -> f64 {
        self.lambda
    }

    /// `1 / b2`.
    pub fn mu(self) -> f64 {
        self.mu
    }

    /// The pair with the two bases exchanged.
    pub fn swapped(self) -> Self {
        BetaPair {
            beta1: self.beta2,
            beta2: self.beta1,
            lambda: self.mu,
            mu: self.lambda,
        }
    }
}
