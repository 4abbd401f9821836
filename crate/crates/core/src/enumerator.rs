//! Best-first enumeration of all non-empty words in non-increasing measure
//! order, the digit stream of `x_S`, and the threshold counts `A(ε)`,
//! `A#(ε)`, `A(ε; s)`.
//!
//! Words are emitted by key `(measure desc, length asc, lexicographic asc)`.
//! With uniform base-10 measures this is exactly `0, 1, …, 9, 00, 01, …`.
//!
//! The frontier is a binary heap. By default a popped word `w‖d` pushes its
//! first child `w‖d‖0` and its next sibling `w‖(d+1)`; both rank strictly after
//! the popped word, so the heap still yields the global order while holding at
//! most one pending entry per emitted word. [`Expansion::AllChildren`] pushes
//! every child instead and is kept for cross-checking.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibred_system::{Digit, DigitSystem, MeasureKey, Threshold, Weight, Word};

/// Ordering among words of equal measure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Shorter words first, then lexicographic.
    #[default]
    LengthThenLex,
    /// Plain lexicographic order (a proper prefix sorts first).
    Lex,
}

/// How a popped word feeds the frontier.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expansion {
    #[default]
    SiblingChain,
    AllChildren,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    pub tie_break: TieBreak,
    pub expansion: Expansion,
}

struct Entry<'a> {
    sys: &'a DigitSystem,
    tie: TieBreak,
    weight: Weight,
    word: Word,
}

impl Entry<'_> {
    /// `Greater` means "emitted earlier".
    fn priority(&self, other: &Self) -> Ordering {
        self.sys.cmp_weights(&self.weight, &other.weight).then_with(|| match self.tie {
            TieBreak::LengthThenLex => other
                .word
                .len()
                .cmp(&self.word.len())
                .then_with(|| other.word.cmp(&self.word)),
            TieBreak::Lex => other.word.cmp(&self.word),
        })
    }
}

impl PartialEq for Entry<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.priority(other) == Ordering::Equal
    }
}

impl Eq for Entry<'_> {}

impl PartialOrd for Entry<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority(other)
    }
}

/// A word as it leaves the enumeration.
#[derive(Clone, Debug)]
pub struct Emitted {
    pub word: Word,
    pub weight: Weight,
}

/// Enumeration state: the frontier plus emission counters.
///
/// Emitted measures are non-increasing and every non-empty word is emitted
/// exactly once.
pub struct Enumeration<'a> {
    sys: &'a DigitSystem,
    opts: EnumerationOptions,
    frontier: BinaryHeap<Entry<'a>>,
    emitted_count: u64,
    emitted_digit_total: u64,
    high_water: usize,
}

impl<'a> Enumeration<'a> {
    pub fn new(sys: &'a DigitSystem) -> Self {
        Self::with_options(sys, EnumerationOptions::default())
    }

    pub fn with_options(sys: &'a DigitSystem, opts: EnumerationOptions) -> Self {
        let mut e = Enumeration {
            sys,
            opts,
            frontier: BinaryHeap::new(),
            emitted_count: 0,
            emitted_digit_total: 0,
            high_water: 0,
        };
        let root = sys.unit_weight();
        match opts.expansion {
            Expansion::SiblingChain => e.push(&root, &Word::new(), 0),
            Expansion::AllChildren => {
                for d in 0..sys.len() {
                    e.push(&root, &Word::new(), d as Digit);
                }
            }
        }
        e
    }

    fn push(&mut self, parent_weight: &Weight, parent: &Word, d: Digit) {
        self.frontier.push(Entry {
            sys: self.sys,
            tie: self.opts.tie_break,
            weight: self.sys.extend_weight(parent_weight, d),
            word: parent.child(d),
        });
        self.high_water = self.high_water.max(self.frontier.len());
    }

    pub fn system(&self) -> &'a DigitSystem {
        self.sys
    }

    pub fn emitted_count(&self) -> u64 {
        self.emitted_count
    }

    pub fn emitted_digit_total(&self) -> u64 {
        self.emitted_digit_total
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    /// Largest frontier size seen so far.
    pub fn frontier_high_water(&self) -> usize {
        self.high_water
    }

    /// Weight of the next word to be emitted.
    pub fn peek_weight(&self) -> Option<&Weight> {
        self.frontier.peek().map(|e| &e.weight)
    }
}

impl Iterator for Enumeration<'_> {
    type Item = Emitted;

    fn next(&mut self) -> Option<Emitted> {
        let Entry { weight, word, .. } = self.frontier.pop()?;
        let digits = self.sys.len();
        match self.opts.expansion {
            Expansion::SiblingChain => {
                self.push(&weight, &word, 0);
                let (&last, prefix) = word.digits().split_last().expect("non-empty");
                if (last as usize) + 1 < digits {
                    let prefix = Word::from_digits(prefix);
                    let prefix_weight = self.sys.word_weight(&prefix);
                    self.push(&prefix_weight, &prefix, last + 1);
                }
            }
            Expansion::AllChildren => {
                for d in 0..digits {
                    self.push(&weight, &word, d as Digit);
                }
            }
        }
        self.emitted_count += 1;
        self.emitted_digit_total += word.len() as u64;
        Some(Emitted { word, weight })
    }
}

/// The first `n` words of the enumeration.
pub fn enumerate_prefix(sys: &DigitSystem, n: usize) -> Vec<Word> {
    Enumeration::new(sys).take(n).map(|e| e.word).collect()
}

/// Streams the digits `d_1, d_2, …` of `x_S`.
///
/// Positions are 1-based. [`current_word`](Self::current_word) reports the
/// word that contains the most recently yielded digit.
pub struct DigitStream<'a> {
    words: Enumeration<'a>,
    current: Option<Emitted>,
    current_start: u64,
    offset: usize,
    position: u64,
}

impl<'a> DigitStream<'a> {
    pub fn new(sys: &'a DigitSystem) -> Self {
        Self::with_options(sys, EnumerationOptions::default())
    }

    pub fn with_options(sys: &'a DigitSystem, opts: EnumerationOptions) -> Self {
        DigitStream {
            words: Enumeration::with_options(sys, opts),
            current: None,
            current_start: 0,
            offset: 0,
            position: 0,
        }
    }

    /// 1-based position of the last yielded digit (0 before the first).
    pub fn position(&self) -> u64 {
        self.position
    }

    /// Word containing the last yielded digit and its 1-based start position.
    pub fn current_word(&self) -> Option<(&Emitted, u64)> {
        self.current.as_ref().map(|e| (e, self.current_start))
    }

    pub fn enumeration(&self) -> &Enumeration<'a> {
        &self.words
    }
}

impl Iterator for DigitStream<'_> {
    type Item = Digit;

    fn next(&mut self) -> Option<Digit> {
        loop {
            if let Some(cur) = &self.current {
                if let Some(&d) = cur.word.digits().get(self.offset) {
                    self.offset += 1;
                    self.position += 1;
                    return Some(d);
                }
            }
            self.current = Some(self.words.next()?);
            self.current_start = self.position + 1;
            self.offset = 0;
        }
    }
}

/// The digit stream of `x_S` under the default ordering.
pub fn digit_stream(sys: &DigitSystem) -> DigitStream<'_> {
    DigitStream::new(sys)
}

/// Threshold counts over the words of measure at least `ε`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ACounts {
    /// Total digits, `A(ε)`.
    pub a_total: u64,
    /// Number of words, `A#(ε)`.
    pub a_sharp: u64,
    /// Occurrences of the query word, `A(ε; s)`.
    pub a_for_s: Option<u64>,
}

/// Counts for one threshold with several query words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCounts {
    pub a_total: u64,
    pub a_sharp: u64,
    pub a_for: Vec<u64>,
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps > BigRational::one() {
        return Err(Error::EpsilonOutOfRange(eps.to_string()));
    }
    Ok(())
}

/// `A(ε)`, `A#(ε)` and optionally `A(ε; s)` (overlapping occurrences).
pub fn threshold_counts(sys: &DigitSystem, eps: &BigRational, s: Option<&Word>) -> Result<ACounts> {
    let queries: Vec<Word> = s.into_iter().cloned().collect();
    let mut out = threshold_scan(sys, std::slice::from_ref(eps), &queries)?;
    let c = out.pop().expect("one row");
    Ok(ACounts { a_total: c.a_total, a_sharp: c.a_sharp, a_for_s: c.a_for.first().copied() })
}

/// Threshold counts for many `ε` in a single pass over the enumeration.
///
/// The words of measure `≥ ε` form a prefix of the emission order, so one
/// stream answers every threshold. Results follow the input order.
pub fn threshold_scan(sys: &DigitSystem, eps_list: &[BigRational], queries: &[Word]) -> Result<Vec<ThresholdCounts>> {
    for eps in eps_list {
        check_eps(eps)?;
    }
    for q in queries {
        if q.is_empty() {
            return Err(Error::EmptyWord);
        }
        sys.check_word(q)?;
    }
    let mut order: Vec<usize> = (0..eps_list.len()).collect();
    order.sort_by(|&a, &b| eps_list[b].cmp(&eps_list[a]));

    let mut out = vec![ThresholdCounts::default(); eps_list.len()];
    let mut running = ThresholdCounts { a_total: 0, a_sharp: 0, a_for: vec![0; queries.len()] };
    let mut words = Enumeration::new(sys);
    for idx in order {
        let t = Threshold::new(eps_list[idx].clone())?;
        while let Some(w) = words.peek_weight() {
            if sys.cmp_threshold(w, &t) == Ordering::Less {
                break;
            }
            let e = words.next().expect("peeked");
            running.a_total += e.word.len() as u64;
            running.a_sharp += 1;
            for (acc, q) in running.a_for.iter_mut().zip(queries) {
                *acc += e.word.occurrences(q.digits());
            }
        }
        out[idx] = running.clone();
    }
    Ok(out)
}

/// Exact measure of an emitted word.
pub fn emitted_measure(sys: &DigitSystem, e: &Emitted) -> MeasureKey {
    crate::fibred_system::cylinder_measure(sys, &e.word).expect("emitted words are in range")
}
