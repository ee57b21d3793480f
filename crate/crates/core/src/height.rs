//! The sub-critical height process.
//!
//! Given the clique size `K_n` and the clique values `Y` (the law above
//! `sqrt(a_n)`), the `n - K_n` follower values `Z` are i.i.d. below
//! `sqrt(a_n)`. `H_n(x)` counts the followers above
//! `tau_n(x) = a_n / Y_(ceil(x K_n))`, the `Y` being sorted increasingly.

use crate::accum::CoMoments;
use crate::dist::TailModel;
use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::hardgraph::binomial;
use crate::rng::{derive_seed, label_key, replicate_rng};
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

/// Mean clique size below which sampling is refused.
pub const MIN_SIGMA2: f64 = 1.0;
/// Mean clique size below which results carry a warning.
pub const WARN_SIGMA2: f64 = 10.0;

/// One replicate of `(K_n, Y, Z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedSample {
    pub n: u64,
    pub a_n: f64,
    pub k_n: u64,
    /// Clique values, increasing.
    pub y: Vec<f64>,
    /// Follower values, in draw order.
    pub z: Vec<f64>,
    /// `n tail(sqrt(a_n))`.
    pub sigma2: f64,
    /// Number of times `K_n = 0` was redrawn.
    pub k_redraws: u32,
}

impl ConditionedSample {
    pub fn low_sigma2(&self) -> bool {
        self.sigma2 < WARN_SIGMA2
    }
}

fn check_subcritical(model: &TailModel, n: u64, a_n: f64) -> Result<f64> {
    if !(a_n >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "a_n",
            value: a_n,
        });
    }
    let sigma2 = n as f64 * model.tail(a_n.sqrt());
    if sigma2 < MIN_SIGMA2 {
        return Err(Error::NotSubCritical { sigma2 });
    }
    Ok(sigma2)
}

/// `K_n ~ Binomial(n, tail(sqrt(a_n)))`, redrawn while zero, and the clique
/// values sorted increasingly.
fn sample_clique<R: Rng + ?Sized>(model: &TailModel, n: u64, a_n: f64, rng: &mut R) -> (u64, Vec<f64>, u32) {
    let root = a_n.sqrt();
    let p = model.tail(root);
    let mut redraws = 0;
    let mut k = binomial(n, p, rng);
    while k == 0 {
        redraws += 1;
        k = binomial(n, p, rng);
    }
    let mut y: Vec<f64> = (0..k).map(|_| model.sample_above(root, rng)).collect();
    y.sort_by(f64::total_cmp);
    (k, y, redraws)
}

pub fn sample_conditioned(model: &TailModel, n: u64, a_n: f64, seed: u64) -> Result<ConditionedSample> {
    sample_conditioned_with(model, n, a_n, &mut replicate_rng(seed, 0))
}

pub fn sample_conditioned_with<R: Rng + ?Sized>(
    model: &TailModel,
    n: u64,
    a_n: f64,
    rng: &mut R,
) -> Result<ConditionedSample> {
    let sigma2 = check_subcritical(model, n, a_n)?;
    let (k_n, y, k_redraws) = sample_clique(model, n, a_n, rng);
    let root = a_n.sqrt();
    let z = (0..n - k_n).map(|_| model.sample_below(root, rng)).collect();
    Ok(ConditionedSample {
        n,
        a_n,
        k_n,
        y,
        z,
        sigma2,
        k_redraws,
    })
}

/// Draws fresh follower values, keeping `(K_n, Y)`.
pub fn resample_z<R: Rng + ?Sized>(cs: &ConditionedSample, model: &TailModel, rng: &mut R) -> ConditionedSample {
    let root = cs.a_n.sqrt();
    ConditionedSample {
        z: (0..cs.z.len()).map(|_| model.sample_below(root, rng)).collect(),
        ..cs.clone()
    }
}

/// `a_n / y[ceil(x k)]` for increasing `y` (1-based rank).
pub fn tau(x: f64, y_increasing: &[f64], a_n: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfRange { name: "x", value: x });
    }
    if y_increasing.is_empty() {
        return Err(Error::InvalidInput("tau needs a non-empty clique"));
    }
    Ok(a_n / y_increasing[rank(x, y_increasing.len())])
}

/// 0-based index of `ceil(x k)`, clamped to `[0, k-1]`.
fn rank(x: f64, k: usize) -> usize {
    ((x * k as f64).ceil() as usize).clamp(1, k) - 1
}

fn check_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::InvalidInput("grid points must lie in (0, 1)"));
    }
    if x_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("grid must be strictly increasing"));
    }
    Ok(())
}

/// Height function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightSeries {
    pub x_grid: Vec<f64>,
    pub h: Vec<u64>,
    pub tau: Vec<f64>,
    /// `(H_n(x) - sigma2 (theta_n(1-x) - 1)) / sigma_n`.
    pub centered: Vec<f64>,
}

/// Computes `H_n` on an increasing grid by sorting `z` once.
pub fn height_series(cs: &ConditionedSample, model: &TailModel, x_grid: &[f64]) -> Result<HeightSeries> {
    check_grid(x_grid)?;
    let mut z = cs.z.clone();
    z.sort_by(f64::total_cmp);
    let taus: Vec<f64> = x_grid
        .iter()
        .map(|&x| tau(x, &cs.y, cs.a_n))
        .collect::<Result<_>>()?;
    let h: Vec<u64> = taus
        .iter()
        .map(|&t| (z.len() - z.partition_point(|&v| v <= t)) as u64)
        .collect();
    Ok(series_from_counts(cs.sigma2, model, cs.a_n, x_grid, h, taus))
}

fn series_from_counts(
    sigma2: f64,
    model: &TailModel,
    a_n: f64,
    x_grid: &[f64],
    h: Vec<u64>,
    tau: Vec<f64>,
) -> HeightSeries {
    let sigma = sigma2.sqrt();
    let centered = x_grid
        .iter()
        .zip(&h)
        .map(|(&x, &hv)| (hv as f64 - sigma2 * (theta_n_unchecked(1.0 - x, model, a_n) - 1.0)) / sigma)
        .collect();
    HeightSeries {
        x_grid: x_grid.to_vec(),
        h,
        tau,
        centered,
    }
}

/// Heights drawn as multinomial counts of `n - k` follower values over the
/// threshold cells, without drawing the values themselves.
fn binned_heights<R: Rng + ?Sized>(
    model: &TailModel,
    followers: u64,
    a_n: f64,
    taus: &[f64],
    rng: &mut R,
) -> Vec<u64> {
    let root = a_n.sqrt();
    let below = model.cdf(root);
    let top = model.tail(root);
    let mut remaining = followers;
    let mut mass = 1.0f64;
    let mut prev = top;
    let mut acc = 0u64;
    let mut out = Vec::with_capacity(taus.len());
    for &t in taus {
        let cur = model.tail(t);
        let p = ((cur - prev) / below).max(0.0);
        let c = if remaining > 0 && mass > 0.0 {
            binomial(remaining, (p / mass).min(1.0), rng)
        } else {
            0
        };
        remaining -= c;
        mass -= p;
        prev = cur;
        acc += c;
        out.push(acc);
    }
    out
}

/// `tail(sqrt(a) F_W^{-1}(x)) / tail(sqrt(a))`.
///
/// Exact Pareto: `1/x` above `a^(-alpha/2)` and `a^(alpha/2)` below.
pub fn theta_n(x: f64, model: &TailModel, a_n: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::OutOfRange { name: "x", value: x });
    }
    Ok(theta_n_unchecked(x, model, a_n))
}

fn theta_n_unchecked(x: f64, model: &TailModel, a_n: f64) -> f64 {
    let root = a_n.sqrt();
    let t = model.tail(root);
    if x >= 1.0 {
        return 1.0;
    }
    if model.is_exact_pareto() {
        return if x > t { 1.0 / x } else { 1.0 / t };
    }
    model.tail(a_n / model.quantile(x * t)) / t
}

/// Conditional exceedance probability of one follower, from the model.
fn p_hat(model: &TailModel, a_n: f64, tau: f64) -> f64 {
    let root = a_n.sqrt();
    (model.tail(tau) - model.tail(root)) / model.cdf(root)
}

/// Deterministic centring probability.
fn p_det(model: &TailModel, a_n: f64, x: f64) -> f64 {
    let root = a_n.sqrt();
    model.tail(root) / model.cdf(root) * (theta_n_unchecked(1.0 - x, model, a_n) - 1.0)
}

/// The two fluctuation components of `H_n - (n - K_n) p_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `H_n - (n - K_n) p_hat_n`.
    pub h1bar: Vec<f64>,
    /// `(n - K_n)(p_hat_n - p_n)`.
    pub h2bar: Vec<f64>,
    /// `H_n - (n - K_n) p_n`, computed directly.
    pub total: Vec<f64>,
}

impl Decomposition {
    /// Largest relative violation of `h1bar + h2bar = total`.
    pub fn identity_error(&self) -> f64 {
        self.h1bar
            .iter()
            .zip(&self.h2bar)
            .zip(&self.total)
            .map(|((a, b), t)| (a + b - t).abs() / t.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

pub fn decompose(cs: &ConditionedSample, model: &TailModel, series: &HeightSeries) -> Decomposition {
    decompose_counts(model, cs.n, cs.k_n, cs.a_n, series)
}

fn decompose_counts(model: &TailModel, n: u64, k: u64, a_n: f64, series: &HeightSeries) -> Decomposition {
    let m = (n - k) as f64;
    let mut out = Decomposition {
        h1bar: Vec::with_capacity(series.h.len()),
        h2bar: Vec::with_capacity(series.h.len()),
        total: Vec::with_capacity(series.h.len()),
    };
    for ((&x, &h), &t) in series.x_grid.iter().zip(&series.h).zip(&series.tau) {
        let ph = p_hat(model, a_n, t);
        let p = p_det(model, a_n, x);
        let h = h as f64;
        out.h1bar.push(h - m * ph);
        out.h2bar.push(m * (ph - p));
        out.total.push(h - m * p);
    }
    out
}

/// How follower counts are produced per replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeightMode {
    /// Multinomial counts over the threshold cells; `O(K_n + grid)`.
    #[default]
    Binned,
    /// All `n - K_n` follower values drawn and counted; `O(n)`.
    Explicit,
}

/// Covariance targets.
pub fn target_cov_g(x: f64, y: f64) -> f64 {
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    lo * (1.0 - hi) / ((1.0 - x).powi(2) * (1.0 - y).powi(2))
}

pub fn target_cov_b(x: f64, y: f64) -> f64 {
    let lo = x.min(y);
    lo / (1.0 - lo)
}

pub fn target_cov_total(x: f64, y: f64) -> f64 {
    target_cov_b(x, y) + target_cov_g(x, y)
}

fn matrix(x_grid: &[f64], f: fn(f64, f64) -> f64) -> Vec<f64> {
    let d = x_grid.len();
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            m[i * d + j] = f(x_grid[i], x_grid[j]);
        }
    }
    m
}

/// Mean and covariance of the normalized fluctuation and its components.
/// Matrices are row-major `d x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationSummary {
    pub x_grid: Vec<f64>,
    pub n: u64,
    pub reps: u64,
    pub sigma2: f64,
    pub emp_mean: Vec<f64>,
    pub emp_cov: Vec<f64>,
    pub target_cov: Vec<f64>,
    /// `h1bar / sigma_n`.
    pub h1_mean: Vec<f64>,
    pub h1_cov: Vec<f64>,
    pub h1_target: Vec<f64>,
    /// `h2bar n / ((n - K_n) sigma_n) = n (p_hat - p) / sigma_n`.
    pub h2_mean: Vec<f64>,
    pub h2_cov: Vec<f64>,
    pub h2_target: Vec<f64>,
    /// Mean of `H_n(x) / sigma2`.
    pub mean_h_over_sigma2: Vec<f64>,
    pub max_identity_error: f64,
    pub low_reps: bool,
}

/// Minimum replicate count below which summaries carry a warning.
pub const MIN_REPS: u64 = 1000;

/// Monte Carlo fluctuation summary over `reps` independent replicates.
#[allow(clippy::too_many_arguments)]
pub fn fluctuation_summary<E: Executor + ?Sized>(
    exec: &E,
    mode: HeightMode,
    model: &TailModel,
    n: u64,
    a_n: f64,
    x_grid: &[f64],
    reps: u64,
    seed: u64,
) -> Result<FluctuationSummary> {
    check_grid(x_grid)?;
    let sigma2 = check_subcritical(model, n, a_n)?;
    let d = x_grid.len();
    let sigma = sigma2.sqrt();
    let stream = derive_seed(seed, label_key("fluctuation"));
    let parts = exec.chunks(reps, |range| {
        let mut total = CoMoments::new(d);
        let mut c1 = CoMoments::new(d);
        let mut c2 = CoMoments::new(d);
        let mut heights = CoMoments::new(d);
        let mut worst = 0.0f64;
        let mut row = vec![0.0; d];
        for r in range {
            let mut rng = replicate_rng(stream, r);
            let (k, series) = replicate_series(mode, model, n, a_n, sigma2, x_grid, &mut rng);
            let dec = decompose_counts(model, n, k, a_n, &series);
            worst = worst.max(dec.identity_error());
            total.push(&series.centered);
            for (v, h) in row.iter_mut().zip(&dec.h1bar) {
                *v = h / sigma;
            }
            c1.push(&row);
            let scale = n as f64 / ((n - k) as f64 * sigma);
            for (v, h) in row.iter_mut().zip(&dec.h2bar) {
                *v = h * scale;
            }
            c2.push(&row);
            for (v, &h) in row.iter_mut().zip(&series.h) {
                *v = h as f64 / sigma2;
            }
            heights.push(&row);
        }
        (total, c1, c2, heights, worst)
    });
    let mut total = CoMoments::new(d);
    let mut c1 = CoMoments::new(d);
    let mut c2 = CoMoments::new(d);
    let mut heights = CoMoments::new(d);
    let mut worst = 0.0f64;
    for (t, a, b, h, w) in &parts {
        total.merge(t);
        c1.merge(a);
        c2.merge(b);
        heights.merge(h);
        worst = worst.max(*w);
    }
    Ok(FluctuationSummary {
        x_grid: x_grid.to_vec(),
        n,
        reps,
        sigma2,
        emp_cov: total.covariance(),
        emp_mean: total.mean,
        target_cov: matrix(x_grid, target_cov_total),
        h1_cov: c1.covariance(),
        h1_mean: c1.mean,
        h1_target: matrix(x_grid, target_cov_b),
        h2_cov: c2.covariance(),
        h2_mean: c2.mean,
        h2_target: matrix(x_grid, target_cov_g),
        mean_h_over_sigma2: heights.mean,
        max_identity_error: worst,
        low_reps: reps < MIN_REPS,
    })
}

fn replicate_series<R: Rng + ?Sized>(
    mode: HeightMode,
    model: &TailModel,
    n: u64,
    a_n: f64,
    sigma2: f64,
    x_grid: &[f64],
    rng: &mut R,
) -> (u64, HeightSeries) {
    let (k, y, _) = sample_clique(model, n, a_n, rng);
    let taus: Vec<f64> = x_grid.iter().map(|&x| a_n / y[rank(x, y.len())]).collect();
    let h = match mode {
        HeightMode::Binned => binned_heights(model, n - k, a_n, &taus, rng),
        HeightMode::Explicit => {
            let root = a_n.sqrt();
            let mut z: Vec<f64> = (0..n - k).map(|_| model.sample_below(root, rng)).collect();
            z.sort_by(f64::total_cmp);
            taus.iter()
                .map(|&t| (z.len() - z.partition_point(|&v| v <= t)) as u64)
                .collect()
        }
    };
    (k, series_from_counts(sigma2, model, a_n, x_grid, h, taus))
}

/// Covariance check of the uniform quantile process of the clique.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileBridgeReport {
    pub x_grid: Vec<f64>,
    pub reps: u64,
    /// Covariance of `sqrt(K_n) (Q_n(x) - x)`, row-major.
    pub emp_cov: Vec<f64>,
    /// `min(x, y)(1 - max(x, y))`.
    pub target_cov: Vec<f64>,
    /// Fraction of replicates with `max_x |Q_n(x) - x| < 5 / sqrt(K_n)`.
    pub within_band: f64,
}

/// `Q_n(x) = F_W(W_(ceil(x K):K))` with `W = sqrt(a_n) / Y`, and `Q_n(1) = 1`.
pub fn uniform_quantile(model: &TailModel, a_n: f64, y_increasing: &[f64], x: f64) -> f64 {
    if x >= 1.0 {
        return 1.0;
    }
    let k = y_increasing.len();
    // the ceil(xK)-th smallest W is the (K + 1 - ceil(xK))-th smallest Y
    let y = y_increasing[k - 1 - rank(x, k)];
    model.tail(y) / model.tail(a_n.sqrt())
}

pub fn quantile_bridge_check<E: Executor + ?Sized>(
    exec: &E,
    model: &TailModel,
    n: u64,
    a_n: f64,
    x_grid: &[f64],
    reps: u64,
    seed: u64,
) -> Result<QuantileBridgeReport> {
    check_grid(x_grid)?;
    check_subcritical(model, n, a_n)?;
    let d = x_grid.len();
    let stream = derive_seed(seed, label_key("quantile-bridge"));
    let parts = exec.chunks(reps, |range| {
        let mut acc = CoMoments::new(d);
        let mut inside = 0u64;
        let mut row = vec![0.0; d];
        for r in range {
            let (k, y, _) = sample_clique(model, n, a_n, &mut replicate_rng(stream, r));
            let sk = (k as f64).sqrt();
            let mut gap = 0.0f64;
            for (v, &x) in row.iter_mut().zip(x_grid) {
                let q = uniform_quantile(model, a_n, &y, x);
                gap = gap.max((q - x).abs());
                *v = sk * (q - x);
            }
            if gap < 5.0 / sk {
                inside += 1;
            }
            acc.push(&row);
        }
        (acc, inside)
    });
    let mut acc = CoMoments::new(d);
    let mut inside = 0;
    for (a, c) in &parts {
        acc.merge(a);
        inside += c;
    }
    Ok(QuantileBridgeReport {
        x_grid: x_grid.to_vec(),
        reps,
        emp_cov: acc.covariance(),
        target_cov: matrix(x_grid, |x, y| x.min(y) * (1.0 - x.max(y))),
        within_band: inside as f64 / reps.max(1) as f64,
    })
}

/// One point of the boundary profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub x: f64,
    /// `1 + mean(H_n(1 - x)) / sigma2`.
    pub h_hat: f64,
    pub se: f64,
    /// `1 / x`.
    pub h: f64,
}

impl BoundaryPoint {
    pub fn ratio(&self) -> f64 {
        self.h_hat / self.h
    }
}

/// Estimates the boundary `h(x) = 1/x` on grid points in `(0, 1]`.
#[allow(clippy::too_many_arguments)]
pub fn boundary_profile<E: Executor + ?Sized>(
    exec: &E,
    mode: HeightMode,
    model: &TailModel,
    n: u64,
    a_n: f64,
    x_grid: &[f64],
    reps: u64,
    seed: u64,
) -> Result<Vec<BoundaryPoint>> {
    if x_grid.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::InvalidInput("boundary grid points must lie in (0, 1]"));
    }
    let sigma2 = check_subcritical(model, n, a_n)?;
    // heights at 1 - x for x < 1, sorted for the height grid
    let mut inner: Vec<f64> = x_grid.iter().filter(|&&x| x < 1.0).map(|&x| 1.0 - x).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    let stream = derive_seed(seed, label_key("boundary"));
    let d = inner.len();
    let parts = exec.chunks(reps, |range| {
        let mut acc = CoMoments::new(d);
        let mut row = vec![0.0; d];
        for r in range {
            let mut rng = replicate_rng(stream, r);
            let (_, s) = replicate_series(mode, model, n, a_n, sigma2, &inner, &mut rng);
            for (v, &h) in row.iter_mut().zip(&s.h) {
                *v = h as f64 / sigma2;
            }
            acc.push(&row);
        }
        acc
    });
    let mut acc = CoMoments::new(d);
    for p in &parts {
        acc.merge(p);
    }
    let cov = acc.covariance();
    let nr = reps.max(1) as f64;
    Ok(x_grid
        .iter()
        .map(|&x| {
            let (mean, se) = match inner.iter().position(|&u| (u - (1.0 - x)).abs() < 1e-15) {
                Some(i) if x < 1.0 => (acc.mean[i], (cov[i * d + i] / nr).sqrt()),
                _ => (0.0, 0.0),
            };
            BoundaryPoint {
                x,
                h_hat: 1.0 + mean,
                se,
                h: 1.0 / x,
            }
        })
        .collect())
}

/// [`fluctuation_summary`] on the calling thread in binned mode.
pub fn fluctuation_summary_serial(
    model: &TailModel,
    n: u64,
    a_n: f64,
    x_grid: &[f64],
    reps: u64,
    seed: u64,
) -> Result<FluctuationSummary> {
    fluctuation_summary(&Serial, HeightMode::Binned, model, n, a_n, x_grid, reps, seed)
}
