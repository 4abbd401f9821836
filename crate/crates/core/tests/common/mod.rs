//! Brute-force oracles and generators shared by the integration tests.
//!
//! Every oracle here recomputes from definitions with exact rationals and
//! never calls the library's enumeration or lattice code.
#![allow(dead_code)]

use std::collections::HashMap;

use gls_normal::{make_system, DigitSystem, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn pow2(n: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2u8).pow(n))
}

pub fn gls3() -> DigitSystem {
    make_system(&[q(1, 2), q(1, 4), q(1, 4)]).unwrap()
}

pub fn base(b: usize) -> DigitSystem {
    DigitSystem::uniform(b).unwrap()
}

pub fn system_from_weights(weights: &[u32]) -> DigitSystem {
    let total: u32 = weights.iter().sum();
    let measures: Vec<BigRational> = weights.iter().map(|&w| q(w as i64, total as i64)).collect();
    make_system(&measures).unwrap()
}

/// Systems with 2 to `max_d` digits and measures `w_i / Σ w`.
pub fn arb_weights(max_d: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=12, 2..=max_d)
}

/// `ε = n / d` in `[1/den_max, 1/2]`.
pub fn arb_eps(den_max: i64) -> impl Strategy<Value = BigRational> {
    (2i64..=den_max).prop_flat_map(|d| (1i64..=d / 2).prop_map(move |n| q(n, d)))
}

pub fn word_measure(sys: &DigitSystem, w: &[u8]) -> BigRational {
    w.iter().fold(BigRational::one(), |acc, &d| acc * sys.measure(d))
}

/// Every word of measure `≥ ε`, by depth-first search on exact products.
pub fn words_at_least(sys: &DigitSystem, eps: &BigRational) -> Vec<(Vec<u8>, BigRational)> {
    fn go(sys: &DigitSystem, eps: &BigRational, w: &mut Vec<u8>, m: BigRational, out: &mut Vec<(Vec<u8>, BigRational)>) {
        for d in 0..sys.len() as u8 {
            let next = &m * sys.measure(d);
            if next >= *eps {
                w.push(d);
                out.push((w.clone(), next.clone()));
                go(sys, eps, w, next, out);
                w.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(sys, eps, &mut Vec::new(), BigRational::one(), &mut out);
    out
}

/// Sort key of the default ordering: measure descending, then length, then
/// lexicographic.
pub fn sort_default(words: &mut [(Vec<u8>, BigRational)]) {
    words.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.len().cmp(&b.0.len())).then(a.0.cmp(&b.0)));
}

/// All words strictly heavier than `λ_1^{L+1}`, in the default order. These
/// have length at most `L`, so the list is a complete prefix of the expansion.
pub fn brute_force_prefix(sys: &DigitSystem, max_len: u32) -> Vec<Word> {
    let cut = num_traits::pow(sys.measure(0).clone(), max_len as usize + 1);
    let mut words: Vec<_> = words_at_least(sys, &cut).into_iter().filter(|(_, m)| *m > cut).collect();
    sort_default(&mut words);
    words.into_iter().map(|(w, _)| Word::from_digits(&w)).collect()
}

fn overlapping(hay: &[u8], needle: &[u8]) -> u64 {
    if needle.len() > hay.len() {
        return 0;
    }
    hay.windows(needle.len()).filter(|w| *w == needle).count() as u64
}

/// `(A(ε), A#(ε), [A(ε; s)])` from the explicit word list.
pub fn brute_counts(sys: &DigitSystem, eps: &BigRational, queries: &[Vec<u8>]) -> (u64, u64, Vec<u64>) {
    let words = words_at_least(sys, eps);
    let total = words.iter().map(|(w, _)| w.len() as u64).sum();
    let per = queries.iter().map(|s| words.iter().map(|(w, _)| overlapping(w, s)).sum()).collect();
    (total, words.len() as u64, per)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(Σ m)! / Π m_i!` by full factorials.
pub fn multinomial_by_factorials(m: &[u64]) -> BigUint {
    let top = factorial(m.iter().sum());
    m.iter().fold(top, |acc, &k| acc / factorial(k))
}

/// Lattice points of `T_ε` by scanning the bounding box.
pub fn brute_lattice(sys: &DigitSystem, eps: &BigRational) -> Vec<Vec<u64>> {
    let d = sys.len();
    let bounds: Vec<u64> = (0..d as u8)
        .map(|i| {
            let mut k = 0u64;
            let mut p = sys.measure(i).clone();
            while p >= *eps {
                k += 1;
                p *= sys.measure(i);
            }
            k
        })
        .collect();
    let mut out = Vec::new();
    let mut m = vec![0u64; d];
    loop {
        let prod = (0..d).fold(BigRational::one(), |acc, i| acc * num_traits::pow(sys.measure(i as u8).clone(), m[i] as usize));
        if prod >= *eps {
            out.push(m.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if m[i] < bounds[i] {
                m[i] += 1;
                break;
            }
            m[i] = 0;
        }
    }
}

/// `(S(ε), S#(ε))` from the box scan; zero for `ε > 1`.
pub fn brute_sums(sys: &DigitSystem, eps: &BigRational) -> (BigUint, BigUint) {
    if *eps > BigRational::one() {
        return (BigUint::zero(), BigUint::zero());
    }
    let mut s = BigUint::zero();
    let mut sharp = BigUint::zero();
    for m in brute_lattice(sys, eps) {
        let c = multinomial_by_factorials(&m);
        s += &c * m.iter().sum::<u64>();
        sharp += c;
    }
    (s, sharp)
}

/// Sliding-window counts of every `k`-block.
pub fn naive_census(digits: &[u8], k: usize) -> HashMap<Vec<u8>, u64> {
    let mut out = HashMap::new();
    if digits.len() >= k {
        for w in digits.windows(k) {
            *out.entry(w.to_vec()).or_insert(0) += 1;
        }
    }
    out
}
