//! Laplace-method apparatus on `H_ε`: the entropy-like function `F̃`, its
//! maximizer, the Hessian in tail coordinates and the quadratic expansion.
//!
//! Tail coordinates are `y = (x_2, …, x_D)`; the first coordinate is then
//! `x_1(y) = ln ε / ln λ_1 − Σ r_i y_i` with `r_i = ln λ_i / ln λ_1`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibred_system::DigitSystem;
use crate::numeric::rational_to_f64;

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `F̃(x) = T ln T − Σ x_i ln x_i` with `T = Σ x_i` and `0 ln 0 = 0`.
pub fn f_tilde(x: &[f64]) -> f64 {
    let total: f64 = x.iter().sum();
    xlogx(total) - x.iter().map(|&v| xlogx(v)).sum::<f64>()
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(eps.to_string()))
    }
}

fn ratios(sys: &DigitSystem) -> Vec<f64> {
    let logs = sys.log_measures();
    logs[1..].iter().map(|l| l / logs[0]).collect()
}

/// Full coordinate vector for tail `y` on `H_ε`.
pub fn lift(sys: &DigitSystem, ln_eps: f64, y: &[f64]) -> Vec<f64> {
    let logs = sys.log_measures();
    let x1 = (ln_eps - y.iter().zip(&logs[1..]).map(|(a, l)| a * l).sum::<f64>()) / logs[0];
    let mut x = Vec::with_capacity(y.len() + 1);
    x.push(x1);
    x.extend_from_slice(y);
    x
}

/// `F` restricted to `H_ε`, as a function of the tail.
pub fn f_on_hyperplane(sys: &DigitSystem, ln_eps: f64, y: &[f64]) -> f64 {
    f_tilde(&lift(sys, ln_eps, y))
}

/// Closed-form Hessian of `F` in tail coordinates at the point `x` of `H_ε`:
/// `(1 − r_i)(1 − r_j)/T − r_i r_j / x_1 − δ_ij / x_i`.
pub fn hessian_closed_form(sys: &DigitSystem, x: &[f64]) -> DMatrix<f64> {
    let r = ratios(sys);
    let n = r.len();
    let total: f64 = x.iter().sum();
    DMatrix::from_fn(n, n, |i, j| {
        let mut v = (1.0 - r[i]) * (1.0 - r[j]) / total - r[i] * r[j] / x[0];
        if i == j {
            v -= 1.0 / x[i + 1];
        }
        v
    })
}

/// Central finite-difference Hessian of `F` in tail coordinates at `y`.
pub fn hessian_finite_difference(sys: &DigitSystem, ln_eps: f64, y: &[f64], h: f64) -> DMatrix<f64> {
    let n = y.len();
    let f = |di: usize, si: f64, dj: usize, sj: f64| {
        let mut z = y.to_vec();
        z[di] += si * h;
        z[dj] += sj * h;
        f_on_hyperplane(sys, ln_eps, &z)
    };
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = (f(i, 1.0, j, 1.0) - f(i, 1.0, j, -1.0) - f(i, -1.0, j, 1.0) + f(i, -1.0, j, -1.0)) / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceAnalysis {
    /// `ε` itself; 0 when it underflows
    pub eps: f64,
    pub ln_eps: f64,
    /// `L = ln ε / Σ λ_i ln λ_i`
    pub l: f64,
    /// maximizer `p = λ L`
    pub p: Vec<f64>,
    pub f_at_p: f64,
    /// tail-coordinate Hessian of `F` at `p`
    pub hessian: Vec<Vec<f64>>,
    /// `A = ln ε · hessian`
    pub a: Vec<Vec<f64>>,
    /// eigenvalues of `A`, ascending
    pub eigenvalues: Vec<f64>,
    /// matching unit eigenvectors, one per row
    pub eigenvectors: Vec<Vec<f64>>,
}

impl LaplaceAnalysis {
    pub fn ln_eps(&self) -> f64 {
        self.ln_eps
    }

    pub fn a_matrix(&self) -> DMatrix<f64> {
        let n = self.a.len();
        DMatrix::from_fn(n, n, |i, j| self.a[i][j])
    }

    pub fn p_tail(&self) -> &[f64] {
        &self.p[1..]
    }

    /// `|F̃(p) / (−ln ε) − 1|`
    pub fn fmax_rel_error(&self) -> f64 {
        (self.f_at_p / -self.ln_eps() - 1.0).abs()
    }
}

pub fn laplace_maximizer(sys: &DigitSystem, eps: f64) -> Result<LaplaceAnalysis> {
    check_eps(eps)?;
    laplace_maximizer_ln(sys, eps.ln())
}

/// [`laplace_maximizer`] from `ln ε`, for thresholds below the `f64` range.
pub fn laplace_maximizer_ln(sys: &DigitSystem, ln_eps: f64) -> Result<LaplaceAnalysis> {
    if !(ln_eps < 0.0 && ln_eps.is_finite()) {
        return Err(Error::EpsilonOutOfRange(format!("exp({ln_eps})")));
    }
    let entropy: f64 = sys.log_measures().iter().zip(sys.measures()).map(|(l, m)| rational_to_f64(m) * l).sum();
    let l = ln_eps / entropy;
    let p: Vec<f64> = sys.measures().iter().map(|m| rational_to_f64(m) * l).collect();
    let hess = hessian_closed_form(sys, &p);
    let a = &hess * ln_eps;
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    Ok(LaplaceAnalysis {
        eps: ln_eps.exp(),
        ln_eps,
        l,
        f_at_p: f_tilde(&p),
        p,
        hessian: to_rows(&hess),
        a: to_rows(&a),
        eigenvalues: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        eigenvectors: order.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect(),
    })
}

/// A random unit direction in the full coordinate space with
/// `Σ a_i ln λ_i = 0`.
pub fn hyperplane_direction<R: Rng>(sys: &DigitSystem, rng: &mut R) -> Vec<f64> {
    let logs = sys.log_measures();
    let norm2: f64 = logs.iter().map(|l| l * l).sum();
    loop {
        let mut a: Vec<f64> = (0..logs.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let proj = a.iter().zip(logs).map(|(x, l)| x * l).sum::<f64>() / norm2;
        for (x, l) in a.iter_mut().zip(logs) {
            *x -= proj * l;
        }
        let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return a.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Largest central-difference directional first derivative of `F̃` at `p`
/// over `directions` random hyperplane-parallel unit directions.
pub fn gradient_check(sys: &DigitSystem, eps: f64, directions: usize, seed: u64) -> Result<f64> {
    let la = laplace_maximizer(sys, eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-4 * la.p.iter().copied().fold(f64::INFINITY, f64::min);
    let mut worst = 0f64;
    for _ in 0..directions {
        let a = hyperplane_direction(sys, &mut rng);
        let shifted = |s: f64| -> Vec<f64> { la.p.iter().zip(&a).map(|(p, d)| p + s * d).collect() };
        let d = (f_tilde(&shifted(h)) - f_tilde(&shifted(-h))) / (2.0 * h);
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// Closed-form vs finite-difference Hessian at the maximizer, as
/// `max |closed − fd| / max |closed|`.
pub fn hessian_fd_error(sys: &DigitSystem, eps: f64) -> Result<f64> {
    let la = laplace_maximizer(sys, eps)?;
    let closed = hessian_closed_form(sys, &la.p);
    // balances truncation (fourth derivative ~ 1/x_min^3) against roundoff in F
    let x_min = la.p.iter().copied().fold(f64::INFINITY, f64::min);
    let h = (f64::EPSILON * la.f_at_p.abs() * x_min.powi(3)).powf(0.25).min(0.1 * x_min);
    let fd = hessian_finite_difference(sys, la.ln_eps(), la.p_tail(), h);
    Ok((&closed - &fd).amax() / closed.amax())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub ln_eps: f64,
    pub half_width: f64,
    pub samples: usize,
    pub seed: u64,
    /// `max |F(x) − (−ln ε + ½ Σ (l_i / ln ε) t_i²)|` over the samples
    pub residual: f64,
    pub residual_at_center: f64,
}

/// The quadratic model of `F` at eigen-coordinates `t` around `p`.
pub fn taylor_model(la: &LaplaceAnalysis, t: &[f64]) -> f64 {
    let ln_eps = la.ln_eps();
    -ln_eps + 0.5 * la.eigenvalues.iter().zip(t).map(|(l, ti)| l / ln_eps * ti * ti).sum::<f64>()
}

/// Tail point `p_tail + U t`.
pub fn from_eigen_coords(la: &LaplaceAnalysis, t: &[f64]) -> Vec<f64> {
    let mut y = la.p_tail().to_vec();
    for (v, ti) in la.eigenvectors.iter().zip(t) {
        for (yi, vi) in y.iter_mut().zip(v) {
            *yi += ti * vi;
        }
    }
    y
}

/// Samples the box `|t_i| ≤ |ln ε|^{2/3} / sqrt(D − 1)` and reports the
/// largest deviation of `F` from its quadratic model.
pub fn taylor_residual(sys: &DigitSystem, eps: f64, samples: usize, seed: u64) -> Result<TaylorReport> {
    check_eps(eps)?;
    taylor_residual_ln(sys, eps.ln(), samples, seed)
}

/// [`taylor_residual`] from `ln ε`.
pub fn taylor_residual_ln(sys: &DigitSystem, ln_eps: f64, samples: usize, seed: u64) -> Result<TaylorReport> {
    let la = laplace_maximizer_ln(sys, ln_eps)?;
    let n = la.eigenvalues.len();
    let half_width = la.ln_eps().abs().powf(2.0 / 3.0) / (n as f64).sqrt();
    // exact extremes of each coordinate over the box: y_i moves by (U t)_i and
    // x_1 by −r·(U t)
    let r = ratios(sys);
    let tail_reach = |i: usize| half_width * la.eigenvectors.iter().map(|v| v[i].abs()).sum::<f64>();
    let first_reach = half_width * la.eigenvectors.iter().map(|v| v.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>().abs()).sum::<f64>();
    let min_tail = (0..n).map(|i| la.p[i + 1] - tail_reach(i)).fold(f64::INFINITY, f64::min);
    let min_first = la.p[0] - first_reach;
    let min_coordinate = min_tail.min(min_first);
    if min_coordinate <= 0.0 {
        return Err(Error::BoxOutsideDomain { min_coordinate });
    }
    let residual_at = |t: &[f64]| (f_on_hyperplane(sys, ln_eps, &from_eigen_coords(&la, t)) - taylor_model(&la, t)).abs();
    let residual_at_center = residual_at(&vec![0.0; n]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residual = residual_at_center;
    for _ in 0..samples {
        let t: Vec<f64> = (0..n).map(|_| rng.random_range(-half_width..=half_width)).collect();
        residual = residual.max(residual_at(&t));
    }
    Ok(TaylorReport { ln_eps, half_width, samples, seed, residual, residual_at_center })
}
