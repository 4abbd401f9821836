//! Sums over the tilted hyperplane segment
//! `H_ε = { x ≥ 0 : Σ x_i ln λ_i = ln ε }`.
//!
//! A "lattice" point has integer tail `(m_2, …, m_D)` and real first
//! coordinate `M`, fixed by the hyperplane equation. Factorials of reals are
//! `x! = Γ(x + 1)`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibred_system::{DigitSystem, Threshold};
use crate::numeric::{ln_factorial, ln_rational, log_sum_exp};
use crate::report::ScanReport;
use crate::simplex_sums::{lattice_sums, walk_lattice, EvalMode};

fn tail_counts(sys: &DigitSystem, m_tail: &[u64]) -> Result<Vec<u64>> {
    if m_tail.len() + 1 != sys.len() {
        return Err(Error::DimensionMismatch { expected: sys.len() - 1, found: m_tail.len() });
    }
    let mut m = vec![0u64];
    m.extend_from_slice(m_tail);
    Ok(m)
}

fn m_from_tail(sys: &DigitSystem, ln_eps: f64, m: &[u64]) -> f64 {
    let tail: f64 = m.iter().zip(sys.log_measures()).skip(1).map(|(&c, l)| c as f64 * l).sum();
    (ln_eps - tail) / sys.log_measures()[0]
}

fn m_real_with(sys: &DigitSystem, t: &Threshold, m_tail: &[u64]) -> Result<f64> {
    let m = tail_counts(sys, m_tail)?;
    let value = m_from_tail(sys, t.ln(), &m);
    if sys.cmp_threshold(&sys.counts_weight(&m), t) == Ordering::Less {
        return Err(Error::OffSegment { m: value });
    }
    Ok(value.max(0.0))
}

/// The real coordinate `M = ln(ε / Π_{i≥2} λ_i^{m_i}) / ln λ_1` closing the
/// hyperplane equation. Membership (`M ≥ 0`) is decided exactly.
pub fn m_real(sys: &DigitSystem, eps: f64, m_tail: &[u64]) -> Result<f64> {
    m_real_with(sys, &Threshold::from_f64(eps)?, m_tail)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneSums {
    pub h: f64,
    pub h_sharp: f64,
    pub ln_h: f64,
    pub ln_h_sharp: f64,
    pub points: u64,
}

fn h_sums_with(sys: &DigitSystem, t: &Threshold) -> HyperplaneSums {
    let ln_eps = t.ln();
    let (mut ln_h, mut ln_sharp) = (Vec::new(), Vec::new());
    walk_lattice(sys, t, 1, |m| {
        let big_m = m_from_tail(sys, ln_eps, m).max(0.0);
        let tail_sum: u64 = m[1..].iter().sum();
        let total = big_m + tail_sum as f64;
        let lm = ln_factorial(total) - ln_factorial(big_m) - m[1..].iter().map(|&c| ln_factorial(c as f64)).sum::<f64>();
        ln_sharp.push(lm);
        ln_h.push(lm + total.ln());
    });
    let ln_h_total = log_sum_exp(&ln_h);
    let ln_sharp_total = log_sum_exp(&ln_sharp);
    HyperplaneSums {
        h: ln_h_total.exp(),
        h_sharp: ln_sharp_total.exp(),
        ln_h: ln_h_total,
        ln_h_sharp: ln_sharp_total,
        points: ln_sharp.len() as u64,
    }
}

/// `H(ε)` and `H#(ε)` for real `0 < ε < 1`. Terms are visited in
/// lexicographic order of the tail and summed with a max shift.
pub fn h_sums(sys: &DigitSystem, eps: f64) -> Result<HyperplaneSums> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange(eps.to_string()));
    }
    Ok(h_sums_with(sys, &Threshold::from_f64(eps)?))
}

/// [`h_sums`] at an exact rational `ε`.
pub fn h_sums_exact(sys: &DigitSystem, eps: &BigRational) -> Result<HyperplaneSums> {
    if !eps.is_positive() || *eps >= BigRational::one() {
        return Err(Error::EpsilonOutOfRange(eps.to_string()));
    }
    Ok(h_sums_with(sys, &Threshold::new(eps.clone())?))
}

/// Stirling decomposition of one `H(ε)` term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDecomposition {
    pub m: f64,
    /// `F = T ln T − M ln M − Σ m_i ln m_i` with `T = M + Σ m_i`.
    pub f: f64,
    /// `G = (T + 1)^{3/2} / sqrt((M + 1) Π (m_i + 1))`.
    pub g: f64,
    /// `T · T! / (M! Π m_i!)`
    pub term: f64,
    /// `term / (G · e^F)`
    pub ratio: f64,
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `F`, `G` and the exact term at one point of `H_ε`.
pub fn term_f_g(sys: &DigitSystem, eps: f64, m_tail: &[u64]) -> Result<TermDecomposition> {
    let big_m = m_real(sys, eps, m_tail)?;
    Ok(decompose(big_m, m_tail))
}

fn decompose(big_m: f64, m_tail: &[u64]) -> TermDecomposition {
    let tail: Vec<f64> = m_tail.iter().map(|&c| c as f64).collect();
    let total = big_m + tail.iter().sum::<f64>();
    let f = xlogx(total) - xlogx(big_m) - tail.iter().map(|&x| xlogx(x)).sum::<f64>();
    let ln_g = 1.5 * (total + 1.0).ln() - 0.5 * ((big_m + 1.0).ln() + tail.iter().map(|x| (x + 1.0).ln()).sum::<f64>());
    let ln_term = total.ln() + ln_factorial(total) - ln_factorial(big_m) - tail.iter().map(|&x| ln_factorial(x)).sum::<f64>();
    TermDecomposition { m: big_m, f, g: ln_g.exp(), term: ln_term.exp(), ratio: (ln_term - ln_g - f).exp() }
}

/// The decomposition at every point of `H_ε`, in lexicographic tail order.
pub fn term_band(sys: &DigitSystem, eps: f64) -> Result<Vec<TermDecomposition>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange(eps.to_string()));
    }
    let t = Threshold::from_f64(eps)?;
    let mut out = Vec::new();
    walk_lattice(sys, &t, 1, |m| {
        let big_m = m_from_tail(sys, t.ln(), m).max(0.0);
        out.push(decompose(big_m, &m[1..]));
    });
    Ok(out)
}

/// Rows `(ε, H·ε/|ln ε|, H#·ε)` over real `ε`.
pub fn hbound_scan(sys: &DigitSystem, eps_list: &[f64]) -> Result<ScanReport> {
    let rows: Vec<Result<(String, Vec<f64>)>> = eps_list
        .par_iter()
        .map(|&eps| {
            let h = h_sums(sys, eps)?;
            let ln_eps = eps.ln();
            Ok((
                format!("{eps:e}"),
                vec![eps, h.h, h.h_sharp, (h.ln_h + ln_eps - ln_eps.abs().ln()).exp(), (h.ln_h_sharp + ln_eps).exp()],
            ))
        })
        .collect();
    let mut report = ScanReport::new("epsilon", &["epsilon_value", "H", "H_sharp", "H_eps_over_log", "H_sharp_eps"]);
    for r in rows {
        let (k, v) = r?;
        report.push(k, v);
    }
    Ok(report)
}

/// A row's values, or the note explaining why it was skipped.
type SandwichRow = std::result::Result<Vec<f64>, String>;

/// Rows `(ε, S/H(ε/λ_1), S/H(ε·λ_2), S#/H#(ε/λ_1), S#/H#(ε·λ_2))`.
/// A row whose shifted `ε` leaves `(0, 1)` is skipped with a note.
pub fn sandwich_check(sys: &DigitSystem, eps_list: &[BigRational], mode: EvalMode) -> Result<ScanReport> {
    let lambda1 = sys.measures()[0].clone();
    let lambda2 = sys.measures()[1].clone();
    let rows: Vec<Result<(String, SandwichRow)>> = eps_list
        .par_iter()
        .map(|eps| {
            let key = eps.to_string();
            let up = eps / &lambda1;
            let down = eps * &lambda2;
            if up >= BigRational::one() {
                return Ok((key, Err(format!("H(eps/lambda_1) undefined: eps/lambda_1 = {up} >= 1"))));
            }
            let sums = lattice_sums(sys, eps, mode)?;
            let h_up = h_sums_exact(sys, &up)?;
            let h_down = h_sums_exact(sys, &down)?;
            let ratio = |a: f64, b: f64| (a - b).exp();
            Ok((
                key,
                Ok(vec![
                    ln_rational(eps).exp(),
                    ratio(sums.s.log_value, h_up.ln_h),
                    ratio(sums.s.log_value, h_down.ln_h),
                    ratio(sums.s_sharp.log_value, h_up.ln_h_sharp),
                    ratio(sums.s_sharp.log_value, h_down.ln_h_sharp),
                ]),
            ))
        })
        .collect();
    let mut report = ScanReport::new(
        "epsilon",
        &["epsilon_value", "S_over_H_up", "S_over_H_down", "S_sharp_over_H_sharp_up", "S_sharp_over_H_sharp_down"],
    );
    for r in rows {
        match r? {
            (k, Ok(v)) => report.push(k, v),
            (k, Err(note)) => report.push_skipped(k, note),
        }
    }
    Ok(report)
}
