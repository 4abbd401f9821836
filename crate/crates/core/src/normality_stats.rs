//! Block frequencies of a digit-stream prefix and hot-spot ratios.
//!
//! Windows start at positions `0..=N-k` (0-based), so a census of block length
//! `k` over `N ≥ k` digits has `N - k + 1` windows. Frequencies divide by `N`.

use std::collections::BTreeMap;

use crate::enumerator::{DigitStream, EnumerationOptions};
use crate::error::{Error, Result};
use crate::fibred_system::{cylinder_measure, Digit, DigitSystem, MeasureKey, Word};
use crate::numeric::rational_to_f64;
use crate::report::ScanReport;

/// Default cap on the number of report rows (`Σ_{k ≤ K} D^k`).
pub const DEFAULT_ROW_CAP: u128 = 1 << 20;

/// Counts of every observed `k`-block in a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCensus {
    pub n: u64,
    pub k: usize,
    pub counts: BTreeMap<Word, u64>,
}

impl BlockCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Sliding-window counts of the `k`-blocks of `prefix`.
pub fn block_counts(prefix: &[Digit], k: usize) -> BlockCensus {
    let mut counts = BTreeMap::new();
    if k >= 1 {
        for w in prefix.windows(k) {
            *counts.entry(Word::from_digits(w)).or_insert(0) += 1;
        }
    }
    BlockCensus { n: prefix.len() as u64, k, counts }
}

/// Streaming census of all block lengths `1..=K` at once, with dense per-length
/// tables indexed by the base-`D` code of the block.
#[derive(Clone, Debug)]
pub struct CensusCounter {
    digits: usize,
    max_k: usize,
    tables: Vec<Vec<u64>>,
    codes: Vec<usize>,
    moduli: Vec<usize>,
    seen: u64,
}

/// Number of words with `1 ≤ |s| ≤ K` over `D` digits, saturating.
pub fn row_count(digits: usize, max_k: usize) -> u128 {
    (1..=max_k as u32).fold(0u128, |acc, k| acc.saturating_add((digits as u128).saturating_pow(k)))
}

impl CensusCounter {
    pub fn new(digits: usize, max_k: usize, row_cap: u128) -> Result<Self> {
        if max_k == 0 {
            return Err(Error::InvalidArgument("block length K must be at least 1".into()));
        }
        let rows = row_count(digits, max_k);
        if rows > row_cap {
            return Err(Error::BudgetExceeded { requested: rows, cap: row_cap });
        }
        let moduli: Vec<usize> = (1..=max_k as u32).map(|k| digits.pow(k)).collect();
        Ok(CensusCounter {
            digits,
            max_k,
            tables: moduli.iter().map(|&m| vec![0; m]).collect(),
            codes: vec![0; max_k],
            moduli,
            seen: 0,
        })
    }

    pub fn push(&mut self, d: Digit) {
        self.seen += 1;
        for k in 0..self.max_k {
            self.codes[k] = (self.codes[k] * self.digits + d as usize) % self.moduli[k];
            if self.seen > k as u64 {
                self.tables[k][self.codes[k]] += 1;
            }
        }
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    /// Count of a block of length `1..=K`.
    pub fn count(&self, w: &Word) -> u64 {
        let code = w.digits().iter().fold(0usize, |c, &d| c * self.digits + d as usize);
        self.tables[w.len() - 1][code]
    }

    /// Census for one block length, as a map over observed blocks.
    pub fn census(&self, k: usize) -> BlockCensus {
        let counts = self.tables[k - 1]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(code, &c)| (decode(code, k, self.digits), c))
            .collect();
        BlockCensus { n: self.seen, k, counts }
    }
}

fn decode(mut code: usize, k: usize, digits: usize) -> Word {
    let mut v = vec![0 as Digit; k];
    for slot in v.iter_mut().rev() {
        *slot = (code % digits) as Digit;
        code /= digits;
    }
    Word::from(v)
}

/// All words with `1 ≤ |s| ≤ K`, shortest first, lexicographic within a length.
pub fn all_words(digits: usize, max_k: usize) -> Vec<Word> {
    (1..=max_k).flat_map(|k| (0..digits.pow(k as u32)).map(move |c| decode(c, k, digits))).collect()
}

#[derive(Clone, Debug)]
pub struct HotSpotRow {
    pub word: Word,
    pub count: u64,
    pub measure: MeasureKey,
    pub frequency: f64,
    /// `(count / N) / μ(C[s])`
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct HotSpotReport {
    pub n: u64,
    pub k_max: usize,
    pub rows: Vec<HotSpotRow>,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

impl HotSpotReport {
    /// Report from a census snapshot; `N` is the number of digits seen.
    pub fn from_counter(sys: &DigitSystem, counter: &CensusCounter) -> Self {
        let n = counter.seen();
        let rows: Vec<HotSpotRow> = all_words(sys.len(), counter.max_k())
            .into_iter()
            .map(|word| {
                let count = counter.count(&word);
                let measure = cylinder_measure(sys, &word).expect("in range");
                let frequency = count as f64 / n as f64;
                let ratio = frequency / rational_to_f64(measure.value());
                HotSpotRow { word, count, measure, frequency, ratio }
            })
            .collect();
        let max_ratio = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        HotSpotReport { n, k_max: counter.max_k(), rows, max_ratio, min_ratio }
    }

    /// `max_s |freq/μ − 1|`.
    pub fn max_abs_error(&self) -> f64 {
        self.rows.iter().map(|r| (r.ratio - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Hot-spot ratios for every word of length `1..=K` over the first `N` digits
/// of `x_S`.
pub fn hot_spot_report(sys: &DigitSystem, n: u64, max_k: usize, row_cap: u128) -> Result<HotSpotReport> {
    if max_k == 0 || n < max_k as u64 {
        return Err(Error::InvalidArgument(format!("need N >= K >= 1, got N = {n}, K = {max_k}")));
    }
    let mut counter = CensusCounter::new(sys.len(), max_k, row_cap)?;
    for d in DigitStream::new(sys).take(n as usize) {
        counter.push(d);
    }
    Ok(HotSpotReport::from_counter(sys, &counter))
}

/// Hot-spot reports at several prefix lengths of one stream.
pub fn hot_spot_snapshots(
    sys: &DigitSystem,
    ns: &[u64],
    max_k: usize,
    row_cap: u128,
    opts: EnumerationOptions,
) -> Result<Vec<(HotSpotReport, f64)>> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("prefix lengths must be strictly increasing".into()));
    }
    if let Some(&first) = ns.first() {
        if max_k == 0 || first < max_k as u64 {
            return Err(Error::InvalidArgument(format!("need N >= K >= 1, got N = {first}, K = {max_k}")));
        }
    }
    let mut counter = CensusCounter::new(sys.len(), max_k, row_cap)?;
    let mut stream = DigitStream::with_options(sys, opts);
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        while counter.seen() < n {
            counter.push(stream.next().expect("unbounded stream"));
        }
        let eps_n = stream.current_word().map(|(e, _)| rational_to_f64(&sys.weight_value(&e.weight))).unwrap_or(1.0);
        out.push((HotSpotReport::from_counter(sys, &counter), eps_n));
    }
    Ok(out)
}

/// Convergence rows `(N, max |freq/μ − 1|, max ratio, min ratio, ε(N))` where
/// `ε(N)` is the measure of the word containing digit `N`.
pub fn convergence_table(sys: &DigitSystem, ns: &[u64], max_k: usize, row_cap: u128) -> Result<ScanReport> {
    let mut report = ScanReport::new("N", &["max_abs_error", "max_ratio", "min_ratio", "epsilon_n"]);
    for (hs, eps_n) in hot_spot_snapshots(sys, ns, max_k, row_cap, EnumerationOptions::default())? {
        report.push(hs.n.to_string(), vec![hs.max_abs_error(), hs.max_ratio, hs.min_ratio, eps_n]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibred_system::make_system;
    use num_rational::BigRational;

    fn gls3() -> DigitSystem {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        make_system(&[q(1, 2), q(1, 4), q(1, 4)]).unwrap()
    }

    fn w(d: &[Digit]) -> Word {
        Word::from_digits(d)
    }

    #[test]
    fn block_count_examples() {
        let c = block_counts(&[0, 1, 2, 0, 0], 2);
        let expected: BTreeMap<Word, u64> = [(w(&[0, 1]), 1), (w(&[1, 2]), 1), (w(&[2, 0]), 1), (w(&[0, 0]), 1)].into();
        assert_eq!(c.counts, expected);
        assert_eq!(block_counts(&[0, 0, 0], 1).counts, [(w(&[0]), 3)].into());
        assert!(block_counts(&[0], 2).counts.is_empty());
    }

    #[test]
    fn streaming_counter_matches_block_counts() {
        let prefix: Vec<Digit> = DigitStream::new(&gls3()).take(500).collect();
        let mut c = CensusCounter::new(3, 4, DEFAULT_ROW_CAP).unwrap();
        for &d in &prefix {
            c.push(d);
        }
        for k in 1..=4 {
            let census = c.census(k);
            assert_eq!(census, block_counts(&prefix, k));
            assert_eq!(census.total(), 500 - k as u64 + 1);
        }
    }

    #[test]
    fn base10_first_ten() {
        let sys = DigitSystem::uniform(10).unwrap();
        let r = hot_spot_report(&sys, 10, 1, DEFAULT_ROW_CAP).unwrap();
        assert_eq!(r.rows.len(), 10);
        assert!(r.rows.iter().all(|row| (row.ratio - 1.0).abs() < 1e-12));
        assert!((r.max_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gls3_six_digits() {
        let r = hot_spot_report(&gls3(), 6, 1, DEFAULT_ROW_CAP).unwrap();
        let ratios: Vec<f64> = r.rows.iter().map(|row| row.ratio).collect();
        let expected = [4.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        for (a, b) in ratios.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_digit_report() {
        let sys = gls3();
        let r = hot_spot_report(&sys, 1, 1, DEFAULT_ROW_CAP).unwrap();
        assert!((r.max_ratio - 2.0).abs() < 1e-12);
        assert_eq!(r.min_ratio, 0.0);
    }

    #[test]
    fn budget_and_argument_errors() {
        let sys = DigitSystem::uniform(10).unwrap();
        assert!(matches!(hot_spot_report(&sys, 100, 7, 1000), Err(Error::BudgetExceeded { requested: 11_111_110, cap: 1000 })));
        assert!(matches!(hot_spot_report(&sys, 2, 3, DEFAULT_ROW_CAP), Err(Error::InvalidArgument(_))));
        assert!(matches!(convergence_table(&sys, &[10, 5], 1, DEFAULT_ROW_CAP), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn convergence_base10_exact() {
        let sys = DigitSystem::uniform(10).unwrap();
        let t = convergence_table(&sys, &[10], 1, DEFAULT_ROW_CAP).unwrap();
        assert_eq!(t.column("max_abs_error"), vec![0.0]);
        assert!((t.column("epsilon_n")[0] - 0.1).abs() < 1e-15);
    }
}
