//! Heavy-tailed laws, scaling sequences and regime classification.

use crate::error::{positive, Error, Result};
use crate::hardgraph::WeightedSample;
use crate::quad;
use crate::rng::{open_unit, replicate_rng};
use alloc::vec::Vec;
use rand::Rng;

/// Slowly varying factor `L` of a regularly varying tail `x^(-alpha) L(x)`.
pub type SlowlyVarying = fn(f64) -> f64;

#[derive(Debug, Clone, Copy)]
pub enum Family {
    /// Tail `x^(-alpha)` on `[1, inf)`.
    ExactPareto,
    /// Tail `x^(-alpha) L(x) / L(1)` on `[1, inf)`, capped at 1. The caller
    /// is responsible for the result being non-increasing.
    GenericRv(SlowlyVarying),
}

/// A law on `[1, inf)` with a regularly varying tail.
#[derive(Debug, Clone, Copy)]
pub struct TailModel {
    alpha: f64,
    family: Family,
}

/// Exact-Pareto model with tail index `alpha`.
pub fn tail_model_pareto(alpha: f64) -> Result<TailModel> {
    TailModel::pareto(alpha)
}

impl TailModel {
    pub fn pareto(alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha: positive("alpha", alpha)?,
            family: Family::ExactPareto,
        })
    }

    pub fn generic(alpha: f64, slowly_varying: SlowlyVarying) -> Result<Self> {
        let l1 = slowly_varying(1.0);
        if !(l1 > 0.0 && l1.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "L(1)",
                value: l1,
            });
        }
        Ok(Self {
            alpha: positive("alpha", alpha)?,
            family: Family::GenericRv(slowly_varying),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_exact_pareto(&self) -> bool {
        matches!(self.family, Family::ExactPareto)
    }

    /// `P(X > x)`.
    pub fn tail(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 1.0;
        }
        match self.family {
            Family::ExactPareto => x.powf(-self.alpha),
            Family::GenericRv(l) => (x.powf(-self.alpha) * l(x) / l(1.0)).clamp(0.0, 1.0),
        }
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.tail(x)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        match self.family {
            Family::ExactPareto => self.alpha * x.powf(-self.alpha - 1.0),
            Family::GenericRv(_) => {
                let h = 1e-5 * x;
                let lo = (x - h).max(1.0);
                ((self.tail(lo) - self.tail(x + h)) / (x + h - lo)).max(0.0)
            }
        }
    }

    /// Smallest `x >= 1` with `tail(x) <= u`, for `u` in `(0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 1.0;
        }
        if u <= 0.0 {
            return f64::INFINITY;
        }
        match self.family {
            Family::ExactPareto => u.powf(-1.0 / self.alpha),
            Family::GenericRv(_) => self.invert_tail(u),
        }
    }

    fn invert_tail(&self, u: f64) -> f64 {
        let mut lo = 1.0f64;
        let mut hi = (2.0 * u.powf(-1.0 / self.alpha)).max(2.0);
        let mut guard = 0;
        while self.tail(hi) > u && guard < 200 {
            lo = hi;
            hi *= 2.0;
            guard += 1;
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if mid <= lo || mid >= hi {
                break;
            }
            if self.tail(mid) > u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Inverse-transform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(open_unit(rng))
    }

    /// Draw from the law of `X` given `X > t`.
    pub fn sample_above<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        self.quantile(open_unit(rng) * self.tail(t)).max(t)
    }

    /// Draw from the law of `X` given `X <= t`.
    pub fn sample_below<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        let v = 1.0 - open_unit(rng) * self.cdf(t);
        self.quantile(v).min(t)
    }

    /// Draw from the law of `X` given `lo < X <= hi`.
    pub fn sample_between<R: Rng + ?Sized>(&self, lo: f64, hi: f64, rng: &mut R) -> f64 {
        let (tl, th) = (self.tail(lo), self.tail(hi));
        let v = th + open_unit(rng) * (tl - th);
        self.quantile(v).clamp(lo, hi)
    }

    /// `E[X | X <= b]` for `b > 1`.
    pub fn mean_below(&self, b: f64) -> f64 {
        let mass = self.cdf(b);
        if mass <= 0.0 {
            return 1.0;
        }
        let partial = match self.family {
            Family::ExactPareto if (self.alpha - 1.0).abs() > 1e-12 => {
                self.alpha / (self.alpha - 1.0) * (1.0 - b.powf(1.0 - self.alpha))
            }
            Family::ExactPareto => b.ln(),
            // E[X; X <= b] = 1 + int_1^b tail - b tail(b)
            Family::GenericRv(_) => {
                let integral = quad::integrate(|x| self.tail(x), 1.0, b, 1e-12 * b).value;
                1.0 + integral - b * self.tail(b)
            }
        };
        partial / mass
    }

    /// `P(X1 X2 > a)` for independent copies. Returns 1 for `a < 1`.
    pub fn product_tail(&self, a: f64) -> f64 {
        if a <= 1.0 {
            return 1.0;
        }
        match self.family {
            Family::ExactPareto => a.powf(-self.alpha) * (1.0 + self.alpha * a.ln()),
            Family::GenericRv(_) => {
                // P = tail(a) + int_{tail(a)}^1 tail(a / Q(u)) du
                let ta = self.tail(a);
                let r = quad::integrate(|u| self.tail(a / self.quantile(u)), ta, 1.0, 1e-11);
                (ta + r.value).clamp(0.0, 1.0)
            }
        }
    }
}

/// Law of the maximum of `count` independent copies of a model.
#[derive(Debug, Clone, Copy)]
pub struct MaxLaw {
    pub model: TailModel,
    pub count: u64,
}

impl MaxLaw {
    pub fn new(model: TailModel, count: u64) -> Self {
        Self { model, count }
    }

    pub fn tail(&self, x: f64) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let t = self.model.tail(x);
        if t >= 1.0 {
            return 1.0;
        }
        -(self.count as f64 * (-t).ln_1p()).exp_m1()
    }

    pub fn quantile(&self, u: f64) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let single = -((-u).ln_1p() / self.count as f64).exp_m1();
        self.model.quantile(single)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(open_unit(rng))
    }

    pub fn sample_above<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        self.quantile(open_unit(rng) * self.tail(t)).max(t)
    }

    pub fn sample_below<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let v = 1.0 - open_unit(rng) * (1.0 - self.tail(t));
        self.quantile(v).min(t)
    }
}

/// `n` i.i.d. draws by inverse transform; bit-identical for equal inputs.
pub fn sample_iid(model: &TailModel, n: usize, seed: u64) -> Result<WeightedSample> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = replicate_rng(seed, 0);
    let values: Vec<f64> = (0..n).map(|_| model.sample(&mut rng)).collect();
    Ok(WeightedSample::new_unchecked(values))
}

/// `a_n = (n^gamma ln n)^(1/alpha)`.
pub fn scaling_a_n(alpha: f64, gamma: f64, n: u64) -> Result<f64> {
    positive("alpha", alpha)?;
    positive("gamma", gamma)?;
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let n = n as f64;
    Ok((n.powf(gamma) * n.ln()).powf(1.0 / alpha))
}

/// A threshold sequence `a_n`.
#[derive(Debug, Clone, Copy)]
pub enum ScalingSequence {
    /// `a_n^alpha = n^gamma ln n`.
    LogPower { alpha: f64, gamma: f64 },
    /// `a_n = scale * n^exponent`; `exponent = 2/alpha` is the critical scale.
    Power { exponent: f64, scale: f64 },
    /// Arbitrary user sequence.
    Custom(fn(u64) -> f64),
}

impl ScalingSequence {
    pub fn log_power(alpha: f64, gamma: f64) -> Self {
        Self::LogPower { alpha, gamma }
    }

    /// The pure critical scale `n^(2/alpha)`, without the logarithm.
    pub fn critical(alpha: f64) -> Self {
        Self::Power {
            exponent: 2.0 / alpha,
            scale: 1.0,
        }
    }

    pub fn a_n(&self, n: u64) -> Result<f64> {
        match *self {
            Self::LogPower { alpha, gamma } => scaling_a_n(alpha, gamma, n),
            Self::Power { exponent, scale } => {
                if n < 1 {
                    return Err(Error::OutOfRange { name: "n", value: 0.0 });
                }
                Ok(scale * (n as f64).powf(exponent))
            }
            Self::Custom(f) => {
                let a = f(n);
                positive("a_n", a)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    SubCritical,
    Critical,
    SuperCritical,
    /// No clear trend in `n tail(sqrt(a_n))`.
    Indeterminate,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::SubCritical => "sub_critical",
            Regime::Critical => "critical",
            Regime::SuperCritical => "super_critical",
            Regime::Indeterminate => "indeterminate",
        }
    }
}

/// Mean clique size `n tail(sqrt(a_n))`.
pub fn mean_clique_size(model: &TailModel, n: u64, a_n: f64) -> f64 {
    n as f64 * model.tail(a_n.sqrt())
}

/// Classifies the regime of `(model, a_n)`.
///
/// The log-power rule on an exact Pareto is decided analytically (`gamma < 2`
/// sub-critical, otherwise super-critical since `n tail(sqrt(a_n))` decays
/// like `(ln n)^(-1/2)` at `gamma = 2`). Everything else is classified from
/// the trend of `n tail(sqrt(a_n))` over `n = 2^10, ..., 2^20`: a total
/// log-change below 0.05 is critical, otherwise a monotone increase is
/// sub-critical and a monotone decrease super-critical.
pub fn classify_regime(model: &TailModel, seq: &ScalingSequence) -> Result<Regime> {
    if let (Family::ExactPareto, ScalingSequence::LogPower { gamma, .. }) = (model.family, seq) {
        positive("gamma", *gamma)?;
        return Ok(if *gamma < 2.0 {
            Regime::SubCritical
        } else {
            Regime::SuperCritical
        });
    }
    let mut logs = Vec::with_capacity(11);
    for k in 10..=20u32 {
        let n = 1u64 << k;
        let v = mean_clique_size(model, n, seq.a_n(n)?);
        logs.push(if v > 0.0 { v.ln() } else { f64::NEG_INFINITY });
    }
    Ok(classify_trend(&logs))
}

fn classify_trend(logs: &[f64]) -> Regime {
    const FLAT: f64 = 0.05;
    const SLACK: f64 = 1e-12;
    let first = logs[0];
    let spread = logs.iter().map(|l| (l - first).abs()).fold(0.0, f64::max);
    if spread.is_finite() && spread < FLAT {
        return Regime::Critical;
    }
    let up = logs.windows(2).all(|w| w[1] >= w[0] - SLACK);
    let down = logs.windows(2).all(|w| w[1] <= w[0] + SLACK);
    match (up, down) {
        (true, false) => Regime::SubCritical,
        (false, true) => Regime::SuperCritical,
        _ => Regime::Indeterminate,
    }
}

/// Classification for the log-power rule on an exact Pareto.
pub fn classify_log_rule(alpha: f64, gamma: f64) -> Result<Regime> {
    classify_regime(&TailModel::pareto(alpha)?, &ScalingSequence::log_power(alpha, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleKind {
    /// Root of `n tail(sqrt(a)) = 1`.
    Single,
    /// Root of `n P(X1 X2 > sqrt(a)) = 1`.
    Product,
}

/// Critical scale `a*` by bisection in `log a`, starting from `[1, n^(4/alpha)]`.
pub fn critical_scale(model: &TailModel, n: u64, kind: ScaleKind) -> Result<f64> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let nf = n as f64;
    let excess = |a: f64| {
        let t = match kind {
            ScaleKind::Single => model.tail(a.sqrt()),
            ScaleKind::Product => model.product_tail(a.sqrt()),
        };
        nf * t - 1.0
    };
    let lo0 = 1.0f64;
    let mut hi = nf.powf(4.0 / model.alpha());
    let mut expansions = 0;
    while excess(hi) > 0.0 {
        expansions += 1;
        if expansions > 60 || !hi.is_finite() {
            return Err(Error::NoConvergence { lo: lo0, hi });
        }
        hi *= nf;
    }
    let (mut lo, mut hi) = (lo0.ln(), hi.ln());
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid.exp()) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = (0.5 * (lo + hi)).exp();
    if (hi - lo) > 1e-10 {
        return Err(Error::NoConvergence {
            lo: lo.exp(),
            hi: hi.exp(),
        });
    }
    Ok(root)
}
