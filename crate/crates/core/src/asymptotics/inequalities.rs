//! Randomized numeric checks of the auxiliary inequalities: concavity of
//! `F̃` along lines parallel to `H_ε`, the Cauchy–Schwarz form, the Gaussian
//! lattice sum and the gamma-ratio chain.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::fibred_system::DigitSystem;

use super::laplace::hyperplane_direction;

/// Second derivative of `F̃` at `x` along `a`:
/// `(Σ a_i)² / Σ x_i − Σ a_i² / x_i`.
///
/// `a` must be non-zero and satisfy `Σ a_i ln λ_i = 0`.
pub fn second_directional_derivative(sys: &DigitSystem, x: &[f64], a: &[f64]) -> Result<f64> {
    let logs = sys.log_measures();
    if x.len() != logs.len() || a.len() != logs.len() {
        return Err(Error::DimensionMismatch { expected: logs.len(), found: if x.len() != logs.len() { x.len() } else { a.len() } });
    }
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let residual = a.iter().zip(logs).map(|(v, l)| v * l).sum::<f64>();
    let scale = norm * logs.iter().map(|l| l * l).sum::<f64>().sqrt();
    if residual.abs() > 1e-9 * scale {
        return Err(Error::NotParallel { residual });
    }
    let sa: f64 = a.iter().sum();
    let sx: f64 = x.iter().sum();
    Ok(sa * sa / sx - a.iter().zip(x).map(|(v, xi)| v * v / xi).sum::<f64>())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub trials: usize,
    pub seed: u64,
    pub negative: usize,
    /// largest (closest to zero) sampled second derivative
    pub max_second_derivative: f64,
}

impl ConcavityReport {
    pub fn all_negative(&self) -> bool {
        self.negative == self.trials
    }
}

/// Random point of `H_ε` in the open positive orthant.
fn hyperplane_point<R: Rng>(sys: &DigitSystem, ln_eps: f64, rng: &mut R) -> Vec<f64> {
    let logs = sys.log_measures();
    let u: Vec<f64> = (0..logs.len()).map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-3).collect();
    let s = ln_eps / u.iter().zip(logs).map(|(a, l)| a * l).sum::<f64>();
    u.into_iter().map(|a| a * s).collect()
}

pub fn concavity_check(sys: &DigitSystem, eps: f64, trials: usize, seed: u64) -> Result<ConcavityReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange(eps.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut negative = 0;
    let mut max_second_derivative = f64::NEG_INFINITY;
    for _ in 0..trials {
        let x = hyperplane_point(sys, eps.ln(), &mut rng);
        let a = hyperplane_direction(sys, &mut rng);
        let d2 = second_directional_derivative(sys, &x, &a)?;
        if d2 < 0.0 {
            negative += 1;
        }
        max_second_derivative = max_second_derivative.max(d2);
    }
    Ok(ConcavityReport { trials, seed, negative, max_second_derivative })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSum {
    pub sum: f64,
    pub reference: f64,
    pub rel_error: f64,
}

/// `Σ_{|k| ≤ Z^{2/3}} exp(−C k² / Z)` against `sqrt(π Z / C)`.
pub fn gaussian_sum_check(z: f64, c: f64) -> Result<GaussianSum> {
    if !(z > 0.0 && c > 0.0) {
        return Err(Error::InvalidArgument(format!("Z and C must be positive, got Z={z}, C={c}")));
    }
    let k_max = z.powf(2.0 / 3.0).floor() as i64;
    // small terms first
    let mut sum = 0.0;
    for k in (1..=k_max).rev() {
        let k = k as f64;
        sum += 2.0 * (-c * k * k / z).exp();
    }
    sum += 1.0;
    let reference = (std::f64::consts::PI * z / c).sqrt();
    Ok(GaussianSum { sum, reference, rel_error: (sum / reference - 1.0).abs() })
}

/// `Σ p_i² / q_i − (Σ p_i)² / Σ q_i`, non-negative for `q_i > 0`.
pub fn cauchy_schwarz_gap(p: &[BigRational], q: &[BigRational]) -> Result<BigRational> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    if p.is_empty() {
        return Err(Error::InvalidArgument("empty vectors".into()));
    }
    if let Some(i) = q.iter().position(|v| !v.is_positive()) {
        return Err(Error::NonPositiveMeasure { index: i, value: q[i].to_string() });
    }
    let sp: BigRational = p.iter().sum();
    let sq: BigRational = q.iter().sum();
    let rhs: BigRational = p.iter().zip(q).map(|(a, b)| a * a / b).sum();
    Ok(rhs - &sp * &sp / sq)
}

pub fn all_ratios_equal(p: &[BigRational], q: &[BigRational]) -> bool {
    let r = &p[0] / &q[0];
    p.iter().zip(q).all(|(a, b)| a / b == r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchySchwarzReport {
    pub draws: usize,
    pub seed: u64,
    pub violations: usize,
    pub equality_cases: usize,
    /// draws where `gap == 0` disagreed with "all ratios equal"
    pub equality_mismatches: usize,
}

impl CauchySchwarzReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.equality_mismatches == 0
    }
}

fn small_rational<R: Rng>(rng: &mut R, signed: bool) -> BigRational {
    let lo = if signed { -30 } else { 1 };
    BigRational::new(BigInt::from(rng.random_range(lo..=30i64)), BigInt::from(rng.random_range(1..=12i64)))
}

/// Exact randomized check; a quarter of the draws use proportional vectors
/// so the equality case is exercised.
pub fn cauchy_schwarz_suite(draws: usize, seed: u64) -> CauchySchwarzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CauchySchwarzReport { draws, seed, violations: 0, equality_cases: 0, equality_mismatches: 0 };
    for _ in 0..draws {
        let n = rng.random_range(1..=6usize);
        let q: Vec<BigRational> = (0..n).map(|_| small_rational(&mut rng, false)).collect();
        let p: Vec<BigRational> = if rng.random_range(0..4) == 0 {
            let c = small_rational(&mut rng, true);
            q.iter().map(|v| v * &c).collect()
        } else {
            (0..n).map(|_| small_rational(&mut rng, true)).collect()
        };
        let gap = cauchy_schwarz_gap(&p, &q).expect("valid draw");
        if gap.is_negative() {
            report.violations += 1;
        }
        let equal = all_ratios_equal(&p, &q);
        if equal {
            report.equality_cases += 1;
        }
        if gap.is_zero() != equal {
            report.equality_mismatches += 1;
        }
    }
    report
}

/// The three ratios `Γ(y−δ)/Γ(x−δ)`, `Γ(y)/Γ(x)`, `Γ(y+δ)/Γ(x+δ)` in logs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaRatioChain {
    pub ln_minus: f64,
    pub ln_mid: f64,
    pub ln_plus: f64,
    /// `max((x+δ)/x, x/(x−δ))`
    pub shift_ratio: f64,
}

impl GammaRatioChain {
    /// Smallest `c ≥ 1` with `R− ≤ c R`, `R ≤ c R+` and `x ± δ` within a
    /// factor `c` of `x`.
    pub fn constant(&self) -> f64 {
        (self.ln_minus - self.ln_mid).exp().max((self.ln_mid - self.ln_plus).exp()).max(self.shift_ratio).max(1.0)
    }
}

/// Requires `1 < x < y` and `0 < δ < min(1, x − 1)`.
pub fn gamma_ratio_chain(x: f64, y: f64, delta: f64) -> Result<GammaRatioChain> {
    if !(1.0 < x && x < y && delta > 0.0 && delta < (x - 1.0).min(1.0)) {
        return Err(Error::InvalidArgument(format!("need 1 < x < y and 0 < delta < min(1, x-1); got x={x}, y={y}, delta={delta}")));
    }
    let r = |s: f64| ln_gamma(y + s) - ln_gamma(x + s);
    Ok(GammaRatioChain {
        ln_minus: r(-delta),
        ln_mid: r(0.0),
        ln_plus: r(delta),
        shift_ratio: ((x + delta) / x).max(x / (x - delta)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaRatioReport {
    pub draws: usize,
    pub seed: u64,
    /// the single constant covering every draw
    pub constant: f64,
}

pub fn gamma_ratio_suite(draws: usize, seed: u64) -> GammaRatioReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constant = 1f64;
    let mut n = 0;
    while n < draws {
        let x = 1.0 + 10f64.powf(rng.random_range(-3.0..3.0));
        let y = x + 10f64.powf(rng.random_range(-3.0..3.0));
        let delta = rng.random::<f64>() * (x - 1.0).min(1.0);
        if let Ok(chain) = gamma_ratio_chain(x, y, delta) {
            constant = constant.max(chain.constant());
            n += 1;
        }
    }
    GammaRatioReport { draws, seed, constant }
}
