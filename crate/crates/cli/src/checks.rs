//! Named invariant checks shared by `laplace --check` and `verify`.

use std::cmp::Ordering;

use gls_normal::asymptotics::*;
use gls_normal::normality_stats::DEFAULT_ROW_CAP;
use gls_normal::{
    block_counts, cylinder_measure, digit_stream, lattice_sums, threshold_scan, CensusCounter, DigitSystem, Enumeration,
    EnumerationOptions, Error, EvalMode, Expansion, Word,
};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliResult;

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub detail: Value,
}

fn result(name: &'static str, passed: bool, summary: String, detail: Value) -> CheckResult {
    CheckResult { name, passed, summary, detail }
}

/// max / min of the positive values; infinite if any value is not positive.
fn spread(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

pub fn maximizer(sys: &DigitSystem, eps: f64, seed: u64) -> CliResult<CheckResult> {
    let la = laplace_maximizer(sys, eps)?;
    let rel = la.fmax_rel_error();
    let grad = gradient_check(sys, eps, 50, seed)?;
    Ok(result(
        "max",
        rel <= 1e-9 && grad <= 1e-7,
        format!("|F(p)/(-ln eps) - 1| = {rel:.2e}, max directional derivative {grad:.2e}"),
        json!({ "eps": eps, "fmax_rel_error": rel, "max_directional_derivative": grad }),
    ))
}

pub fn hessian(sys: &DigitSystem, eps: f64) -> CliResult<CheckResult> {
    let a = laplace_maximizer(sys, eps)?;
    let other = eps.powf(2.0).max(f64::MIN_POSITIVE);
    let b = laplace_maximizer(sys, other)?;
    let n = a.a.len();
    let mut asym = 0f64;
    let mut drift = 0f64;
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((a.a[i][j] - a.a[j][i]).abs());
            drift = drift.max((a.a[i][j] - b.a[i][j]).abs());
        }
    }
    let fd = hessian_fd_error(sys, eps)?;
    let min_eig = a.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(result(
        "hessian",
        asym == 0.0 && drift <= 1e-6 && fd <= 1e-5 && min_eig > 0.0,
        format!("asymmetry {asym:.1e}, drift vs eps^2 {drift:.1e}, fd rel {fd:.1e}, min eigenvalue {min_eig:.6}"),
        json!({ "asymmetry": asym, "eps_drift": drift, "fd_rel_error": fd, "eigenvalues": a.eigenvalues }),
    ))
}

/// Residual at `ε` and at `ε^{3/2}` (given as `ln ε`); the second may not
/// exceed twice the first.
pub fn taylor(sys: &DigitSystem, ln_eps: f64, samples: usize, seed: u64) -> CliResult<CheckResult> {
    let deeper = 1.5 * ln_eps;
    match (taylor_residual_ln(sys, ln_eps, samples, seed), taylor_residual_ln(sys, deeper, samples, seed)) {
        (Ok(a), Ok(b)) => Ok(result(
            "taylor",
            b.residual <= 2.0 * a.residual.max(1e-12) && a.residual_at_center <= 1e-9 * ln_eps.abs().max(1.0),
            format!("residual {:.4} at ln eps={ln_eps:.1}, {:.4} at ln eps={deeper:.1}", a.residual, b.residual),
            json!({ "reports": [a, b] }),
        )),
        (Err(Error::BoxOutsideDomain { min_coordinate }), _) | (_, Err(Error::BoxOutsideDomain { min_coordinate })) => Ok(result(
            "taylor",
            false,
            format!("expansion box leaves the positive orthant at ln eps={ln_eps:.1} (min coordinate {min_coordinate:.3}); try a smaller eps"),
            json!({ "min_coordinate": min_coordinate }),
        )),
        (Err(e), _) | (_, Err(e)) => Err(e.into()),
    }
}

/// Least negative `ln ε` of the form `−50·2^k` at which the Taylor box fits.
pub fn taylor_ln_eps(sys: &DigitSystem) -> f64 {
    (0..24)
        .map(|k| -50.0 * 2f64.powi(k))
        .find(|&l| taylor_residual_ln(sys, l, 0, 0).is_ok() && taylor_residual_ln(sys, 1.5 * l, 0, 0).is_ok())
        .unwrap_or(-50.0 * 2f64.powi(24))
}

pub fn concavity(sys: &DigitSystem, eps: f64, trials: usize, seed: u64) -> CliResult<CheckResult> {
    let r = concavity_check(sys, eps, trials, seed)?;
    Ok(result(
        "concavity",
        r.all_negative(),
        format!("{}/{} sampled second derivatives negative, largest {:.3e}", r.negative, r.trials, r.max_second_derivative),
        serde_json::to_value(&r)?,
    ))
}

pub fn gauss() -> CliResult<CheckResult> {
    let mut rows = Vec::new();
    let mut ok = true;
    for (z, tol) in [(1e4, 1e-2), (1e6, 1e-3)] {
        for c in [0.5, 1.0, 2.0] {
            let g = gaussian_sum_check(z, c)?;
            ok &= g.rel_error < tol;
            rows.push(json!({ "Z": z, "C": c, "sum": g.sum, "reference": g.reference, "rel_error": g.rel_error }));
        }
    }
    Ok(result("gauss", ok, format!("{} (Z, C) pairs within tolerance: {ok}", rows.len()), Value::Array(rows)))
}

/// Every ratio column must stay within a factor 8 over the range.
pub fn sandwich(sys: &DigitSystem, eps: &[BigRational]) -> CliResult<CheckResult> {
    let r = sandwich_check(sys, eps, EvalMode::Exact)?;
    let spreads: Vec<(String, f64)> = r.columns[1..].iter().map(|c| (c.clone(), spread(&r.column(c)))).collect();
    let worst = spreads.iter().map(|(_, s)| *s).fold(0.0, f64::max);
    Ok(result(
        "sandwich",
        worst <= 8.0,
        format!("largest max/min over {} rows: {worst:.4}", r.rows.len()),
        json!({ "spreads": spreads, "scan": r }),
    ))
}

/// Both normalized columns must stay within a factor 4 over the range.
pub fn hbound(sys: &DigitSystem, eps: &[f64]) -> CliResult<CheckResult> {
    let r = hbound_scan(sys, eps)?;
    let a = spread(&r.column("H_eps_over_log"));
    let b = spread(&r.column("H_sharp_eps"));
    Ok(result(
        "hbound",
        a <= 4.0 && b <= 4.0,
        format!("max/min of H*eps/|ln eps| {a:.4}, of H#*eps {b:.4}"),
        json!({ "spread_h": a, "spread_h_sharp": b, "scan": r }),
    ))
}

/// `2^-8, 2^-9, …` down to `2^-60`, stopping early once a single
/// hyperplane sum needs more than `max_points` terms.
pub fn hbound_eps(sys: &DigitSystem, max_points: u64) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for n in 8..=60 {
        let eps = 2f64.powi(-n);
        out.push(eps);
        if h_sums(sys, eps)?.points > max_points {
            break;
        }
    }
    Ok(out)
}

pub fn cauchy_schwarz(seed: u64) -> CheckResult {
    let r = cauchy_schwarz_suite(10_000, seed);
    result(
        "cauchy_schwarz",
        r.passed(),
        format!("{} violations, {} equality cases, {} equality mismatches", r.violations, r.equality_cases, r.equality_mismatches),
        serde_json::to_value(&r).unwrap_or(Value::Null),
    )
}

pub fn gamma_ratio(seed: u64) -> CheckResult {
    let r = gamma_ratio_suite(10_000, seed);
    result(
        "gamma_ratio",
        r.constant <= 2.0,
        format!("single constant over {} draws: {:.4}", r.draws, r.constant),
        serde_json::to_value(&r).unwrap_or(Value::Null),
    )
}

pub fn enumeration(sys: &DigitSystem) -> CliResult<CheckResult> {
    let words: Vec<_> = Enumeration::new(sys).take(20_000).collect();
    let ordered = words.windows(2).all(|p| sys.cmp_weights(&p[0].weight, &p[1].weight) != Ordering::Less);
    let exact_ordered = words[..2000.min(words.len())]
        .windows(2)
        .all(|p| cylinder_measure(sys, &p[0].word).unwrap() >= cylinder_measure(sys, &p[1].word).unwrap());
    let opts = EnumerationOptions { expansion: Expansion::AllChildren, ..Default::default() };
    let same = Enumeration::with_options(sys, opts).take(5000).map(|e| e.word).eq(words.iter().take(5000).map(|e| e.word.clone()));
    Ok(result(
        "enumeration",
        ordered && exact_ordered && same,
        format!("non-increasing measure: {ordered} (exact check on 2000: {exact_ordered}); expansion strategies agree: {same}"),
        json!({ "words": words.len(), "ordered": ordered, "exact_ordered": exact_ordered, "strategies_agree": same }),
    ))
}

fn exact_sums(sys: &DigitSystem, eps: &BigRational) -> CliResult<(BigUint, BigUint)> {
    if *eps > BigRational::one() {
        return Ok((BigUint::zero(), BigUint::zero()));
    }
    let r = lattice_sums(sys, eps, EvalMode::Exact)?;
    Ok((r.s.value.expect("exact"), r.s_sharp.value.expect("exact")))
}

/// Counting identities against the lattice sums, and the first-digit
/// recurrence `S#(ε) = 1 + Σ_d S#(ε/λ_d)`.
pub fn identities(sys: &DigitSystem) -> CliResult<CheckResult> {
    let eps: Vec<BigRational> = (1..=14).map(|k| BigRational::new(1.into(), BigUint::from(2u8).pow(k).into())).collect();
    let d = sys.len().min(4) as u8;
    let mut queries: Vec<Word> = (0..d).map(|a| Word::from_digits(&[a])).collect();
    queries.extend((0..d).flat_map(|a| (0..d).map(move |b| Word::from_digits(&[a, b]))));
    let rows = threshold_scan(sys, &eps, &queries)?;
    let mut failures = Vec::new();
    for (e, row) in eps.iter().zip(&rows) {
        let (s, sharp) = exact_sums(sys, e)?;
        if BigUint::from(row.a_total) != s || BigUint::from(row.a_sharp + 1) != sharp {
            failures.push(format!("eps={e}: A={} S={s}, A#={} S#={sharp}", row.a_total, row.a_sharp));
        }
        for (w, &a) in queries.iter().zip(&row.a_for) {
            let lambda = cylinder_measure(sys, w)?.into_inner();
            let (s2, sharp2) = exact_sums(sys, &(e / lambda))?;
            if BigUint::from(a) != &s2 + &sharp2 {
                failures.push(format!("eps={e} s={}: A={a}, S+S#={}", sys.format_word(w), s2 + sharp2));
            }
        }
        let mut rec = BigUint::one();
        for dgt in 0..sys.len() as u8 {
            rec += exact_sums(sys, &(e / sys.measure(dgt)))?.1;
        }
        if rec != sharp {
            failures.push(format!("eps={e}: recurrence gives {rec}, S#={sharp}"));
        }
    }
    Ok(result(
        "identities",
        failures.is_empty(),
        format!("{} thresholds x {} strings, {} failures", eps.len(), queries.len(), failures.len()),
        json!({ "failures": failures }),
    ))
}

pub fn census(sys: &DigitSystem) -> CliResult<CheckResult> {
    let n = 20_000usize;
    let k_max = if sys.len() <= 10 { 3 } else { 1 };
    let digits: Vec<u8> = digit_stream(sys).take(n).collect();
    let mut counter = CensusCounter::new(sys.len(), k_max, DEFAULT_ROW_CAP)?;
    for &x in &digits {
        counter.push(x);
    }
    let mut ok = true;
    for k in 1..=k_max {
        let c = block_counts(&digits, k);
        ok &= c.total() == (n - k + 1) as u64;
        ok &= c.counts.iter().all(|(w, &v)| counter.count(w) == v);
    }
    Ok(result(
        "census",
        ok,
        format!("window totals and counter agreement for k <= {k_max} over {n} digits: {ok}"),
        json!({ "n": n, "k_max": k_max }),
    ))
}
