//! Multinomial lattice sums over the region
//! `T_ε = { m ∈ Z^D_{≥0} : Π λ_d^{m_d} ≥ ε }`:
//!
//! * `S(ε)  = Σ (Σm) · (Σm)! / Π m_d!`
//! * `S#(ε) = Σ (Σm)! / Π m_d!`
//! * `S(ε; s) = S(ε/λ_s) + S#(ε/λ_s)`
//!
//! Membership is decided exactly. Weights are accumulated on two paths: exact
//! big integers, and log-gamma terms summed with a max shift. The exact path is
//! the reference; the float path reaches far smaller `ε`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibred_system::{cylinder_measure, Digit, DigitSystem, Threshold, Weight, Word};
use crate::numeric::{ln_factorial, ln_rational, log_sum_exp, rational_to_f64};
use crate::report::ScanReport;

/// A lattice point of `T_ε`: per-digit counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountVector(pub Vec<u64>);

impl CountVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Exact integers plus the float path.
    #[default]
    Exact,
    /// Float path only.
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    /// Exact value; `None` in float mode.
    pub value: Option<BigUint>,
    pub float_value: f64,
    /// `ln` of the float value, usable past f64 range.
    pub log_value: f64,
    pub lattice_count: u64,
}

impl SumResult {
    fn zero() -> Self {
        SumResult { value: Some(BigUint::zero()), float_value: 0.0, log_value: f64::NEG_INFINITY, lattice_count: 0 }
    }

    /// `|float/exact − 1|`, when an exact value exists.
    pub fn dual_rel_error(&self) -> Option<f64> {
        let v = self.value.as_ref()?;
        if v.is_zero() {
            return Some(if self.float_value == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Some((self.float_value / v.to_f64()? - 1.0).abs())
    }

    fn add(&self, other: &SumResult) -> SumResult {
        SumResult {
            value: match (&self.value, &other.value) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            float_value: self.float_value + other.float_value,
            log_value: log_sum_exp(&[self.log_value, other.log_value]),
            lattice_count: self.lattice_count.max(other.lattice_count),
        }
    }
}

/// `S(ε)` and `S#(ε)` from one walk over `T_ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSums {
    pub s: SumResult,
    pub s_sharp: SumResult,
}

/// Visit every `m` with `m_d = 0` for `d < first_digit` and
/// `Π λ_d^{m_d} ≥ t`, in lexicographic order of `m`.
pub(crate) fn walk_lattice(sys: &DigitSystem, t: &Threshold, first_digit: usize, mut f: impl FnMut(&[u64])) {
    let mut m = vec![0u64; sys.len()];
    let root = sys.unit_weight();
    if sys.cmp_threshold(&root, t) == Ordering::Less {
        return;
    }
    visit(sys, t, first_digit, &mut m, root, &mut f);
}

fn visit(sys: &DigitSystem, t: &Threshold, d: usize, m: &mut [u64], weight: Weight, f: &mut impl FnMut(&[u64])) {
    if d == m.len() {
        f(m);
        return;
    }
    let mut w = weight;
    loop {
        visit(sys, t, d + 1, m, w.clone(), f);
        let next = sys.extend_weight(&w, d as Digit);
        if sys.cmp_threshold(&next, t) == Ordering::Less {
            break;
        }
        m[d] += 1;
        w = next;
    }
    m[d] = 0;
}

/// `(Σm)! / Π m_d!` exactly.
pub fn multinomial(m: &[u64]) -> BigUint {
    let mut acc = BigUint::one();
    let mut n = 0u64;
    for &c in m {
        for j in 1..=c {
            n += 1;
            acc = acc * n / j;
        }
    }
    acc
}

/// `ln((Σm)! / Π m_d!)` via log-gamma.
pub fn ln_multinomial(m: &[f64]) -> f64 {
    let n: f64 = m.iter().sum();
    ln_factorial(n) - m.iter().map(|&x| ln_factorial(x)).sum::<f64>()
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps > BigRational::one() {
        return Err(Error::EpsilonOutOfRange(eps.to_string()));
    }
    Ok(())
}

/// All integer points of `T_ε`, origin included, in lexicographic order.
pub fn lattice_points_t(sys: &DigitSystem, eps: &BigRational) -> Result<Vec<CountVector>> {
    check_eps(eps)?;
    let t = Threshold::new(eps.clone())?;
    let mut out = Vec::new();
    walk_lattice(sys, &t, 0, |m| out.push(CountVector(m.to_vec())));
    Ok(out)
}

/// `S(ε)` and `S#(ε)` together.
pub fn lattice_sums(sys: &DigitSystem, eps: &BigRational, mode: EvalMode) -> Result<LatticeSums> {
    check_eps(eps)?;
    let t = Threshold::new(eps.clone())?;
    let exact = mode == EvalMode::Exact;
    let (mut s, mut s_sharp) = (BigUint::zero(), BigUint::zero());
    let (mut ln_s, mut ln_sharp) = (Vec::new(), Vec::new());
    let mut count = 0u64;
    walk_lattice(sys, &t, 0, |m| {
        count += 1;
        let n = m.iter().sum::<u64>();
        if exact {
            let mult = multinomial(m);
            s += &mult * n;
            s_sharp += mult;
        }
        let mf: Vec<f64> = m.iter().map(|&c| c as f64).collect();
        let lm = ln_multinomial(&mf);
        ln_sharp.push(lm);
        if n > 0 {
            ln_s.push(lm + (n as f64).ln());
        }
    });
    let finish = |value: Option<BigUint>, terms: &[f64]| {
        let log_value = log_sum_exp(terms);
        SumResult { value, float_value: log_value.exp(), log_value, lattice_count: count }
    };
    Ok(LatticeSums {
        s: finish(exact.then_some(s), &ln_s),
        s_sharp: finish(exact.then_some(s_sharp), &ln_sharp),
    })
}

/// `S(ε)`.
pub fn s_eps(sys: &DigitSystem, eps: &BigRational) -> Result<SumResult> {
    Ok(lattice_sums(sys, eps, EvalMode::Exact)?.s)
}

/// `S#(ε)`.
pub fn s_sharp_eps(sys: &DigitSystem, eps: &BigRational) -> Result<SumResult> {
    Ok(lattice_sums(sys, eps, EvalMode::Exact)?.s_sharp)
}

/// `S(ε/λ_s) + S#(ε/λ_s)`; zero when `ε/λ_s > 1`.
pub fn s_for_string(sys: &DigitSystem, eps: &BigRational, s: &Word, mode: EvalMode) -> Result<SumResult> {
    check_eps(eps)?;
    if s.is_empty() {
        return Err(Error::EmptyWord);
    }
    let lambda_s = cylinder_measure(sys, s)?;
    let scaled = eps / lambda_s.value();
    if scaled > BigRational::one() {
        let mut z = SumResult::zero();
        if mode == EvalMode::Float {
            z.value = None;
        }
        return Ok(z);
    }
    let sums = lattice_sums(sys, &scaled, mode)?;
    Ok(sums.s.add(&sums.s_sharp))
}

/// Rows `(ε, S, S#, S·ε/|ln ε|, S#·ε)`; scaled columns are computed in log
/// space. Rows are evaluated in parallel and reported in input order.
pub fn sbound_ratio_scan(sys: &DigitSystem, eps_list: &[BigRational], mode: EvalMode) -> Result<ScanReport> {
    let rows: Vec<Result<(String, Vec<f64>)>> = eps_list
        .par_iter()
        .map(|eps| {
            let sums = lattice_sums(sys, eps, mode)?;
            let ln_eps = ln_rational(eps);
            let s_scaled = if sums.s.float_value == 0.0 {
                0.0
            } else {
                (sums.s.log_value + ln_eps - ln_eps.abs().ln()).exp()
            };
            let sharp_scaled = (sums.s_sharp.log_value + ln_eps).exp();
            let s_val = sums.s.value.as_ref().and_then(|v| v.to_f64()).unwrap_or(sums.s.float_value);
            let sharp_val = sums.s_sharp.value.as_ref().and_then(|v| v.to_f64()).unwrap_or(sums.s_sharp.float_value);
            Ok((eps.to_string(), vec![rational_to_f64(eps), s_val, sharp_val, s_scaled, sharp_scaled]))
        })
        .collect();
    let mut report = ScanReport::new("epsilon", &["epsilon_value", "S", "S_sharp", "S_eps_over_log", "S_sharp_eps"]);
    for row in rows {
        let (key, values) = row?;
        report.push(key, values);
    }
    Ok(report)
}
