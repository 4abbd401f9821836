//! Finite-digit product-measure systems (generalized Lüroth series) and exact
//! cylinder-measure arithmetic.
//!
//! A [`DigitSystem`] stores the digit measures `λ_d` as exact rationals, sorted
//! by decreasing measure, so internal digit `0` always carries the largest
//! measure. The measure of a word is the product of its digit measures.
//!
//! Ordering comparisons between word measures are exact. Each system keeps a
//! pairwise-coprime basis `b_1..b_P` with every `λ_d = Π b_j^{e_dj}`, so a word
//! measure is identified by an integer exponent vector: equal vectors mean equal
//! measures, and unequal vectors are ordered by their logarithms unless those are
//! close enough to need a big-integer comparison.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::numeric::ln_rational;

/// Internal digit index. Index 0 is the digit of largest measure.
pub type Digit = u8;

/// Largest supported alphabet.
pub const MAX_DIGITS: usize = Digit::MAX as usize + 1;

/// A finite string of digit indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(SmallVec<[Digit; 16]>);

impl Word {
    pub fn new() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_digits(digits: &[Digit]) -> Self {
        Word(SmallVec::from_slice(digits))
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, d: Digit) {
        self.0.push(d);
    }

    /// `self ‖ d`.
    pub fn child(&self, d: Digit) -> Word {
        let mut w = self.clone();
        w.0.push(d);
        w
    }

    /// `self ‖ other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.0.extend_from_slice(&other.0);
        w
    }

    /// Per-digit counts over an alphabet of `digits` symbols.
    pub fn counts(&self, digits: usize) -> Vec<u64> {
        let mut m = vec![0u64; digits];
        for &d in self.digits() {
            m[d as usize] += 1;
        }
        m
    }

    /// Number of (possibly overlapping) occurrences of `pattern` as a
    /// contiguous subword.
    pub fn occurrences(&self, pattern: &[Digit]) -> u64 {
        if pattern.is_empty() || pattern.len() > self.len() {
            return 0;
        }
        self.0.windows(pattern.len()).filter(|w| *w == pattern).count() as u64
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.digits())
    }
}

impl From<Vec<Digit>> for Word {
    fn from(v: Vec<Digit>) -> Self {
        Word(SmallVec::from_vec(v))
    }
}

impl From<&[Digit]> for Word {
    fn from(v: &[Digit]) -> Self {
        Word::from_digits(v)
    }
}

/// Exact cylinder measure of a word, totally ordered by value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasureKey(BigRational);

impl MeasureKey {
    pub fn one() -> Self {
        MeasureKey(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn ln(&self) -> f64 {
        ln_rational(&self.0)
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for MeasureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A word measure in exponent form over the system's coprime basis, with a
/// cached logarithm for fast ordering.
#[derive(Clone, Debug)]
pub struct Weight {
    log: f64,
    exps: SmallVec<[i32; 4]>,
}

impl Weight {
    /// Natural log of the measure.
    pub fn ln(&self) -> f64 {
        self.log
    }
}

/// A comparison threshold `ε`, kept both exactly and as a logarithm.
#[derive(Clone, Debug)]
pub struct Threshold {
    exact: BigRational,
    log: f64,
}

impl Threshold {
    /// Requires `eps > 0`.
    pub fn new(eps: BigRational) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::EpsilonOutOfRange(eps.to_string()));
        }
        let log = ln_rational(&eps);
        Ok(Threshold { exact: eps, log })
    }

    /// Exact conversion of a finite positive f64.
    pub fn from_f64(eps: f64) -> Result<Self> {
        let exact = BigRational::from_float(eps)
            .filter(|r| r.is_positive())
            .ok_or_else(|| Error::EpsilonOutOfRange(eps.to_string()))?;
        Ok(Threshold { exact, log: eps.ln() })
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn ln(&self) -> f64 {
        self.log
    }
}

/// Parse `p/q`, an integer, or `a^-k` / `a^k` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    if let Some((base, exp)) = t.split_once('^') {
        let base: BigInt = base.trim().parse().map_err(|_| bad())?;
        let exp: i32 = exp.trim().parse().map_err(|_| bad())?;
        if base.is_zero() {
            return Err(bad());
        }
        let p = num_traits::pow(BigRational::from_integer(base), exp.unsigned_abs() as usize);
        return Ok(if exp < 0 { p.recip() } else { p });
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// One entry of the JSON system configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DigitEntry {
    pub symbol: String,
    pub measure: String,
}

/// `{"digits": [{"symbol": "0", "measure": "1/10"}, ...]}`, in user order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub digits: Vec<DigitEntry>,
}

/// A finite digit alphabet with exact positive measures summing to one.
#[derive(Clone, Debug)]
pub struct DigitSystem {
    measures: Vec<BigRational>,
    log_measures: Vec<f64>,
    symbols: Vec<String>,
    /// internal index -> position in the user's input
    user_order: Vec<usize>,
    basis: Vec<BigUint>,
    exponents: Vec<SmallVec<[i32; 4]>>,
}

/// Validate `measures` and build a system with default symbols `"0"`, `"1"`, ...
/// taken from the user order.
pub fn make_system(measures: &[BigRational]) -> Result<DigitSystem> {
    let entries = measures
        .iter()
        .enumerate()
        .map(|(i, m)| (i.to_string(), m.clone()))
        .collect();
    DigitSystem::with_symbols(entries)
}

impl DigitSystem {
    pub fn with_symbols(entries: Vec<(String, BigRational)>) -> Result<Self> {
        let n = entries.len();
        if n < 2 {
            return Err(Error::TooFewDigits(n));
        }
        if n > MAX_DIGITS {
            return Err(Error::TooManyDigits(n));
        }
        for (i, (_, m)) in entries.iter().enumerate() {
            if !m.is_positive() {
                return Err(Error::NonPositiveMeasure { index: i, value: m.to_string() });
            }
        }
        let sum: BigRational = entries.iter().map(|(_, m)| m.clone()).sum();
        if !sum.is_one() {
            return Err(Error::SumNotOne { sum: sum.to_string() });
        }
        for (i, (s, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(t, _)| t == s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        // stable: equal measures keep the user order
        order.sort_by(|&a, &b| entries[b].1.cmp(&entries[a].1));

        let measures: Vec<BigRational> = order.iter().map(|&i| entries[i].1.clone()).collect();
        let symbols = order.iter().map(|&i| entries[i].0.clone()).collect();
        let log_measures = measures.iter().map(ln_rational).collect();

        let basis = coprime_basis(
            measures
                .iter()
                .flat_map(|m| [m.numer().magnitude().clone(), m.denom().magnitude().clone()]),
        );
        let exponents = measures.iter().map(|m| exponent_vector(&basis, m)).collect();

        Ok(DigitSystem { measures, log_measures, symbols, user_order: order, basis, exponents })
    }

    pub fn from_config(cfg: &SystemConfig) -> Result<Self> {
        let entries = cfg
            .digits
            .iter()
            .map(|e| Ok((e.symbol.clone(), parse_rational(&e.measure)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::with_symbols(entries)
    }

    /// The uniform base-`b` system with symbols `0..b` (as decimal strings).
    pub fn uniform(b: usize) -> Result<Self> {
        let m = BigRational::new(BigInt::one(), BigInt::from(b));
        make_system(&vec![m; b])
    }

    /// The configuration in internal (sorted) order.
    pub fn to_config(&self) -> SystemConfig {
        SystemConfig {
            digits: self
                .symbols
                .iter()
                .zip(&self.measures)
                .map(|(s, m)| DigitEntry { symbol: s.clone(), measure: m.to_string() })
                .collect(),
        }
    }

    /// Number of digits `D`.
    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn measures(&self) -> &[BigRational] {
        &self.measures
    }

    pub fn measure(&self, d: Digit) -> &BigRational {
        &self.measures[d as usize]
    }

    pub fn log_measures(&self) -> &[f64] {
        &self.log_measures
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, d: Digit) -> &str {
        &self.symbols[d as usize]
    }

    /// Position of internal digit `d` in the user's input.
    pub fn user_index(&self, d: Digit) -> usize {
        self.user_order[d as usize]
    }

    /// internal index -> user index, for every digit.
    pub fn permutation(&self) -> &[usize] {
        &self.user_order
    }

    pub fn digit_for_symbol(&self, sym: &str) -> Option<Digit> {
        self.symbols.iter().position(|s| s == sym).map(|i| i as Digit)
    }

    /// True when every symbol is a single character, so words print as
    /// contiguous strings.
    pub fn single_char_symbols(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Render a word with user symbols: concatenated when all symbols are one
    /// character, otherwise space separated.
    pub fn format_word(&self, w: &Word) -> String {
        let sep = if self.single_char_symbols() { "" } else { " " };
        w.digits().iter().map(|&d| self.symbol(d)).collect::<Vec<_>>().join(sep)
    }

    /// Inverse of [`format_word`](Self::format_word). Whitespace or commas may
    /// separate symbols; with single-character symbols they may also be packed.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let parts: Vec<&str> = s.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()).collect();
        let mut w = Word::new();
        let lookup = |p: &str| self.digit_for_symbol(p).ok_or_else(|| Error::UnknownSymbol(p.to_string()));
        for p in parts {
            match lookup(p) {
                Ok(d) => w.push(d),
                Err(_) if self.single_char_symbols() && p.chars().count() > 1 => {
                    for c in p.chars() {
                        w.push(lookup(&c.to_string())?);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(w)
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.digits().iter().find(|&&d| d as usize >= self.len()) {
            Some(&d) => Err(Error::DigitOutOfRange { digit: d as usize, digits: self.len() }),
            None => Ok(()),
        }
    }

    // -- exponent-form weights --------------------------------------------

    /// Weight of the empty word (measure 1).
    pub fn unit_weight(&self) -> Weight {
        Weight { log: 0.0, exps: SmallVec::from_elem(0, self.basis.len()) }
    }

    /// Weight of `w ‖ d` given the weight of `w`.
    pub fn extend_weight(&self, w: &Weight, d: Digit) -> Weight {
        let e = &self.exponents[d as usize];
        Weight {
            log: w.log + self.log_measures[d as usize],
            exps: w.exps.iter().zip(e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn word_weight(&self, w: &Word) -> Weight {
        w.digits().iter().fold(self.unit_weight(), |acc, &d| self.extend_weight(&acc, d))
    }

    /// Weight of a count vector `m` (`Π λ_d^{m_d}`).
    pub fn counts_weight(&self, m: &[u64]) -> Weight {
        let mut exps: SmallVec<[i32; 4]> = SmallVec::from_elem(0, self.basis.len());
        let mut log = 0.0;
        for (d, &c) in m.iter().enumerate() {
            log += c as f64 * self.log_measures[d];
            for (x, e) in exps.iter_mut().zip(&self.exponents[d]) {
                *x += c as i32 * e;
            }
        }
        Weight { log, exps }
    }

    /// Exact value of a weight.
    pub fn weight_value(&self, w: &Weight) -> BigRational {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (b, &e) in self.basis.iter().zip(&w.exps) {
            match e.cmp(&0) {
                Ordering::Greater => num *= b.pow(e as u32),
                Ordering::Less => den *= b.pow(e.unsigned_abs()),
                Ordering::Equal => {}
            }
        }
        BigRational::new(num.into(), den.into())
    }

    /// Exact ordering of two weights by measure.
    pub fn cmp_weights(&self, a: &Weight, b: &Weight) -> Ordering {
        if a.exps == b.exps {
            return Ordering::Equal;
        }
        if !near(a.log, b.log) {
            return a.log.partial_cmp(&b.log).unwrap_or(Ordering::Equal);
        }
        let mut lhs = BigUint::one();
        let mut rhs = BigUint::one();
        for ((base, &x), &y) in self.basis.iter().zip(&a.exps).zip(&b.exps) {
            match x.cmp(&y) {
                Ordering::Greater => lhs *= base.pow((x - y) as u32),
                Ordering::Less => rhs *= base.pow((y - x) as u32),
                Ordering::Equal => {}
            }
        }
        lhs.cmp(&rhs)
    }

    /// Exact ordering of a weight against a threshold.
    pub fn cmp_threshold(&self, w: &Weight, t: &Threshold) -> Ordering {
        if !near(w.log, t.log) {
            return w.log.partial_cmp(&t.log).unwrap_or(Ordering::Equal);
        }
        self.weight_value(w).cmp(&t.exact)
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Refine a set of integers into a pairwise-coprime basis that generates each
/// of them multiplicatively.
fn coprime_basis(values: impl Iterator<Item = BigUint>) -> Vec<BigUint> {
    let mut basis: Vec<BigUint> = Vec::new();
    let mut work: Vec<BigUint> = values.filter(|v| !v.is_one() && !v.is_zero()).collect();
    while let Some(x) = work.pop() {
        if x.is_one() {
            continue;
        }
        match basis.iter().position(|b| !b.gcd(&x).is_one()) {
            None => basis.push(x),
            Some(i) => {
                let b = basis.swap_remove(i);
                if b == x {
                    basis.push(b);
                    continue;
                }
                let g = b.gcd(&x);
                work.push(&b / &g);
                work.push(&x / &g);
                work.push(g);
            }
        }
    }
    basis.sort();
    basis
}

fn valuation(n: &mut BigUint, b: &BigUint) -> i32 {
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(b);
        if !r.is_zero() {
            return k;
        }
        *n = q;
        k += 1;
    }
}

fn exponent_vector(basis: &[BigUint], m: &BigRational) -> SmallVec<[i32; 4]> {
    let mut num = m.numer().magnitude().clone();
    let mut den = m.denom().magnitude().clone();
    let e = basis.iter().map(|b| valuation(&mut num, b) - valuation(&mut den, b)).collect();
    debug_assert!(num.is_one() && den.is_one());
    e
}

/// Exact measure `Π λ_{a_i}` of a word; the empty word has measure 1.
pub fn cylinder_measure(sys: &DigitSystem, w: &Word) -> Result<MeasureKey> {
    sys.check_word(w)?;
    let mut acc = BigRational::one();
    for &d in w.digits() {
        acc *= sys.measure(d);
    }
    Ok(MeasureKey(acc))
}

/// `Σ_d m_d · ln λ_d` for a count vector.
pub fn log_measure(sys: &DigitSystem, m: &[i64]) -> Result<f64> {
    if m.len() != sys.len() {
        return Err(Error::DimensionMismatch { expected: sys.len(), found: m.len() });
    }
    if let Some((index, &value)) = m.iter().enumerate().find(|(_, &v)| v < 0) {
        return Err(Error::NegativeCount { index, value });
    }
    Ok(m.iter().zip(sys.log_measures()).map(|(&c, l)| c as f64 * l).sum())
}
