mod common;

use common::*;
use gls_normal::asymptotics::*;
use gls_normal::{make_system, DigitSystem, Error};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn eps_from_exponent(e: f64) -> f64 {
    10f64.powf(-e)
}

#[test]
fn base2_hyperplane_closed_forms() {
    let b2 = base(2);
    for n in 1..=30 {
        let h = h_sums(&b2, 2f64.powi(-n)).unwrap();
        let p = 2f64.powi(n);
        assert!((h.h_sharp / p - 1.0).abs() < 1e-9, "n = {n}");
        assert!((h.h / (n as f64 * p) - 1.0).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn gls3_h_sharp_band() {
    let h = h_sums(&gls3(), 2f64.powi(-10)).unwrap();
    let v = h.h_sharp * 2f64.powi(-10);
    assert!((0.5..=2.5).contains(&v), "{v}");
}

#[test]
fn term_to_stirling_ratio_is_uniform() {
    let band = term_band(&base(2), 2f64.powi(-20)).unwrap();
    assert_eq!(band.len(), 21);
    let hi = band.iter().map(|t| t.ratio).fold(0.0, f64::max);
    let lo = band.iter().map(|t| t.ratio).fold(f64::INFINITY, f64::min);
    // Stirling constants bracket the ratio: 1/sqrt(2π)·(something ≤ e²)
    assert!(lo > 0.05 && hi < 2.0, "[{lo}, {hi}]");
}

#[test]
fn taylor_residual_does_not_grow() {
    let b2 = base(2);
    let a = taylor_residual(&b2, 2f64.powi(-20), 1000, DEFAULT_SEED).unwrap();
    let b = taylor_residual(&b2, 2f64.powi(-30), 1000, DEFAULT_SEED).unwrap();
    assert!(b.residual <= 2.0 * a.residual, "{a:?} {b:?}");
    // the box only fits in the orthant once |ln ε|^{1/3} outgrows the spread
    assert!(matches!(taylor_residual(&gls3(), 1e-12, 10, DEFAULT_SEED), Err(Error::BoxOutsideDomain { .. })));
    let g = taylor_residual(&gls3(), 1e-40, 1000, DEFAULT_SEED).unwrap();
    let h = taylor_residual(&gls3(), 1e-60, 1000, DEFAULT_SEED).unwrap();
    assert!(h.residual <= 2.0 * g.residual, "{g:?} {h:?}");
}

/// Along one eigen-direction the remainder is bounded by the cubic term of a
/// one-dimensional Taylor expansion, with `|g'''|` bounded by central
/// differences over the segment.
#[test]
fn taylor_slice_obeys_third_order_bound() {
    let sys = gls3();
    let la = laplace_maximizer(&sys, 1e-60).unwrap();
    let ln_eps = la.ln_eps();
    for j in 0..la.eigenvalues.len() {
        let g = |s: f64| {
            let mut t = vec![0.0; la.eigenvalues.len()];
            t[j] = s;
            f_on_hyperplane(&sys, ln_eps, &from_eigen_coords(&la, &t))
        };
        let width = ln_eps.abs().powf(2.0 / 3.0) / (la.eigenvalues.len() as f64).sqrt();
        let h = 1e-2;
        let third = |s: f64| (g(s + 2.0 * h) - 2.0 * g(s + h) + 2.0 * g(s - h) - g(s - 2.0 * h)) / (2.0 * h * h * h);
        let bound = (0..=40).map(|i| third(-width + 2.0 * width * i as f64 / 40.0).abs()).fold(0.0, f64::max);
        for i in 0..=20 {
            let s = -width + 2.0 * width * i as f64 / 20.0;
            let mut t = vec![0.0; la.eigenvalues.len()];
            t[j] = s;
            let residual = (g(s) - taylor_model(&la, &t)).abs();
            assert!(residual <= 1.5 * bound * s.abs().powi(3) / 6.0 + 1e-9, "j={j} s={s} {residual} vs {bound}");
        }
    }
}

#[test]
fn hyperplane_points_close_the_equation() {
    let sys = gls3();
    let eps = 1e-9;
    for m2 in 0..20 {
        for m3 in 0..20 {
            let prod = 0.25f64.powi(m2 + m3);
            match m_real(&sys, eps, &[m2 as u64, m3 as u64]) {
                Ok(m) => {
                    assert!(prod >= eps);
                    let lhs = m * sys.log_measures()[0] + (m2 + m3) as f64 * sys.log_measures()[1];
                    assert!((lhs - eps.ln()).abs() < 1e-10);
                }
                Err(Error::OffSegment { .. }) => assert!(prod < eps),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn sandwich_base2_limits() {
    let b2 = base(2);
    let r = sandwich_check(&b2, &[pow2(40)], gls_normal::EvalMode::Exact).unwrap();
    let up = r.rows[0].values[r.column_index("S_over_H_up").unwrap()].unwrap();
    let down = r.rows[0].values[r.column_index("S_over_H_down").unwrap()].unwrap();
    // S(2^-n)/H(2^-(n-1)) → 4, S(2^-n)/H(2^-(n+1)) → 1
    let n = 40f64;
    assert!((up - ((n - 1.0) * 2f64.powf(n + 1.0) + 2.0) / ((n - 1.0) * 2f64.powf(n - 1.0))).abs() < 1e-9);
    assert!((down - ((n - 1.0) * 2f64.powf(n + 1.0) + 2.0) / ((n + 1.0) * 2f64.powf(n + 1.0))).abs() < 1e-9);
}

#[test]
fn cauchy_schwarz_and_gamma_suites() {
    let cs = cauchy_schwarz_suite(10_000, DEFAULT_SEED);
    assert!(cs.passed() && cs.equality_cases > 1000, "{cs:?}");
    assert!(gamma_ratio_suite(10_000, DEFAULT_SEED).constant <= 2.0);
}

prop_compose! {
    fn arb_real_system()(w in prop::collection::vec(1u32..=40, 2..=6)) -> DigitSystem {
        system_from_weights(&w)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximizer_identity(sys in arb_real_system(), e in 1.0f64..60.0) {
        let la = laplace_maximizer(&sys, eps_from_exponent(e)).unwrap();
        prop_assert!(la.fmax_rel_error() <= 1e-9);
    }

    #[test]
    fn gradient_vanishes_along_hyperplane(sys in arb_real_system(), e in 3.0f64..60.0, seed in any::<u64>()) {
        prop_assert!(gradient_check(&sys, eps_from_exponent(e), 50, seed).unwrap() <= 1e-7);
    }

    #[test]
    fn hessian_matches_finite_differences(sys in arb_real_system(), e in 3.0f64..60.0) {
        prop_assert!(hessian_fd_error(&sys, eps_from_exponent(e)).unwrap() <= 1e-5);
    }

    #[test]
    fn a_is_positive_definite_and_eps_free(sys in arb_real_system(), e1 in 1.0f64..60.0, e2 in 1.0f64..60.0) {
        let a = laplace_maximizer(&sys, eps_from_exponent(e1)).unwrap();
        let b = laplace_maximizer(&sys, eps_from_exponent(e2)).unwrap();
        prop_assert!(a.eigenvalues.iter().all(|&l| l > 0.0));
        for (ra, rb) in a.a.iter().zip(&b.a) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!((x - y).abs() <= 1e-6 * (1.0 + x.abs()));
            }
        }
        for (i, row) in a.a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                prop_assert_eq!(*v, a.a[j][i]);
            }
        }
    }

    #[test]
    fn concavity_on_random_lines(sys in arb_real_system(), e in 1.0f64..30.0, seed in any::<u64>()) {
        prop_assert!(concavity_check(&sys, eps_from_exponent(e), 200, seed).unwrap().all_negative());
    }

    #[test]
    fn f_tilde_scale_covariant(x in prop::collection::vec(0.0f64..50.0, 1..7), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
        let base = f_tilde(&x);
        prop_assert!((f_tilde(&scaled) - c * base).abs() <= 1e-9 * (1.0 + (c * base).abs() + c * x.iter().sum::<f64>()));
    }

    #[test]
    fn cauchy_schwarz_gap_nonnegative(p in prop::collection::vec(-50i64..50, 1..6), qv in prop::collection::vec(1i64..50, 6)) {
        let pr: Vec<_> = p.iter().map(|&v| q(v, 7)).collect();
        let qr: Vec<_> = qv[..p.len()].iter().map(|&v| q(v, 3)).collect();
        let gap = cauchy_schwarz_gap(&pr, &qr).unwrap();
        prop_assert!(gap >= num_rational::BigRational::zero());
        prop_assert_eq!(gap.is_zero(), all_ratios_equal(&pr, &qr));
        prop_assert!(gap.to_f64().is_some());
    }

    #[test]
    fn gamma_chain_is_ordered(x in 1.001f64..500.0, dy in 0.001f64..500.0, frac in 0.001f64..0.999) {
        let delta = frac * (x - 1.0).min(1.0);
        let c = gamma_ratio_chain(x, x + dy, delta).unwrap();
        prop_assert!(c.ln_minus <= c.ln_mid + 1e-12 && c.ln_mid <= c.ln_plus + 1e-12);
        prop_assert!(c.constant() <= 2.0);
    }
}

#[test]
fn lambda_one_is_the_largest_measure() {
    let sys = make_system(&[q(1, 8), q(3, 8), q(1, 2)]).unwrap();
    let la = laplace_maximizer(&sys, 1e-6).unwrap();
    assert!(la.p[0] > la.p[1] && la.p[1] > la.p[2]);
}
