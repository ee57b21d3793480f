//! Motif probabilities, expected counts, super-critical clique statistics
//! and tail diagnostics for product weights.
//!
//! Motif events concern designated vertices `1, 2[, 3]` of an `n`-sample.
//! Given the designated values and the maximum `M` of the other `n - k`
//! values, every event is decidable, since vertex `i` is non-isolated iff
//! `X_i` times the largest other value exceeds `a_n`.
//!
//! The default estimator samples exactly from the law conditioned on an
//! activation set `D` that contains the event and is a disjoint union of
//! boxes, each box fixing every variable to lie above, below or anywhere
//! relative to `sqrt(a_n)`. `P(D)` is known in closed form, so
//! `P(D) * mean(indicator)` is unbiased and resolves events of order
//! `1e-7` with `1e6` replicates.

use crate::accum::{CoMoments, Moments};
use crate::dist::{scaling_a_n, MaxLaw, TailModel};
use crate::error::{positive, Error, Result};
use crate::exec::{collect_moments, count_successes, Executor, Serial};
use crate::hardgraph::{k_vector, multinomial_groups, binomial, KVector, WeightedSample};
use crate::quad;
use crate::rng::{derive_seed, label_key, open_unit, replicate_rng};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use rand::Rng;

/// Designated-vertex events. Vertex labels are 1-based as in the formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MotifEvent {
    /// `B_12`.
    EdgePresent,
    /// `A_1 A_2 B_12^c`.
    EdgeVacant2,
    /// `A_1 A_2 A_3` with no edge among them.
    VacantTriangle,
    /// `A_1 A_2 A_3 B_12 B_13^c B_23^c`.
    OneEdgeTriple,
    /// `A_1 A_2 A_3 B_12 B_23 B_13^c`, centred at vertex 2.
    TwoStar,
    /// `B_12 B_23`: a two-star or a triangle.
    Path2,
    /// `B_12 B_13 B_23`.
    Triangle,
    /// `A_1`.
    NonIsolatedVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Any,
    Above,
    Below,
}

/// One box of an activation set: sides for `X_1, X_2, X_3` and for `M`.
#[derive(Debug, Clone, Copy)]
struct Activation([Side; 3], Side);

use Side::{Above as Hi, Any, Below as Lo};

impl MotifEvent {
    pub const ALL: [MotifEvent; 8] = [
        MotifEvent::EdgePresent,
        MotifEvent::EdgeVacant2,
        MotifEvent::VacantTriangle,
        MotifEvent::OneEdgeTriple,
        MotifEvent::TwoStar,
        MotifEvent::Path2,
        MotifEvent::Triangle,
        MotifEvent::NonIsolatedVertex,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MotifEvent::EdgePresent => "edge_present",
            MotifEvent::EdgeVacant2 => "edge_vacant2",
            MotifEvent::VacantTriangle => "vacant_triangle",
            MotifEvent::OneEdgeTriple => "one_edge_triple",
            MotifEvent::TwoStar => "two_star",
            MotifEvent::Path2 => "path2",
            MotifEvent::Triangle => "triangle",
            MotifEvent::NonIsolatedVertex => "non_isolated_vertex",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|e| e.name() == name)
    }

    /// Number of designated vertices.
    pub fn arity(&self) -> usize {
        match self {
            MotifEvent::NonIsolatedVertex => 1,
            MotifEvent::EdgePresent | MotifEvent::EdgeVacant2 => 2,
            _ => 3,
        }
    }

    /// Whether the event holds for designated values `x` (length
    /// [`arity`](Self::arity)) when the other values have maximum `m`.
    pub fn holds(&self, x: &[f64], m: f64, a: f64) -> bool {
        let e = |i: usize, j: usize| x[i] * x[j] > a;
        let live = |i: usize| {
            let other = x
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(m, |acc, (_, &v)| acc.max(v));
            x[i] * other > a
        };
        match self {
            MotifEvent::EdgePresent => e(0, 1),
            MotifEvent::EdgeVacant2 => live(0) && live(1) && !e(0, 1),
            MotifEvent::VacantTriangle => {
                live(0) && live(1) && live(2) && !e(0, 1) && !e(0, 2) && !e(1, 2)
            }
            MotifEvent::OneEdgeTriple => live(2) && e(0, 1) && !e(0, 2) && !e(1, 2),
            MotifEvent::TwoStar => e(0, 1) && e(1, 2) && !e(0, 2),
            MotifEvent::Path2 => e(0, 1) && e(1, 2),
            MotifEvent::Triangle => e(0, 1) && e(0, 2) && e(1, 2),
            MotifEvent::NonIsolatedVertex => live(0),
        }
    }

    /// Disjoint boxes whose union contains the event.
    ///
    /// An edge needs one endpoint above `sqrt(a)`. A designated vertex that
    /// is non-isolated without designated neighbours and lies below
    /// `sqrt(a)`, or whose designated partner lies above it, needs
    /// `M > sqrt(a)`.
    fn activation(&self) -> &'static [Activation] {
        match self {
            MotifEvent::EdgePresent => &[
                Activation([Hi, Any, Any], Any),
                Activation([Lo, Hi, Any], Any),
            ],
            MotifEvent::EdgeVacant2 | MotifEvent::VacantTriangle => {
                &[Activation([Any, Any, Any], Hi)]
            }
            MotifEvent::OneEdgeTriple => &[
                Activation([Hi, Any, Any], Hi),
                Activation([Lo, Hi, Any], Hi),
            ],
            MotifEvent::TwoStar | MotifEvent::Path2 => &[
                Activation([Any, Hi, Any], Any),
                Activation([Hi, Lo, Hi], Any),
            ],
            MotifEvent::Triangle => &[
                Activation([Hi, Hi, Any], Any),
                Activation([Hi, Lo, Hi], Any),
                Activation([Lo, Hi, Hi], Any),
            ],
            MotifEvent::NonIsolatedVertex => &[
                Activation([Hi, Any, Any], Any),
                Activation([Lo, Any, Any], Hi),
            ],
        }
    }
}

/// Region of validity of a leading-order formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptote {
    /// Leading-order value, or `0` when only an order bound is known.
    pub value: f64,
    pub region: &'static str,
    /// `Some(s)` when the probability is only known to be `o(s)`.
    pub lower_order_than: Option<f64>,
}

impl Asymptote {
    fn leading(value: f64, region: &'static str) -> Self {
        Self {
            value,
            region,
            lower_order_than: None,
        }
    }
}

fn is_one(gamma: f64) -> bool {
    (gamma - 1.0).abs() < 1e-12
}

/// Leading-order value of a motif probability for the log-power scaling.
pub fn motif_asymptote(event: MotifEvent, alpha: f64, gamma: f64, n: u64) -> Result<Asymptote> {
    positive("alpha", alpha)?;
    positive("gamma", gamma)?;
    if n < 3 {
        return Err(Error::UnsupportedRegion("asymptotic formulas need n >= 3"));
    }
    let nf = n as f64;
    let ln = nf.ln();
    let lnln = ln.ln();
    let ng = nf.powf(gamma);
    let a = match event {
        MotifEvent::EdgePresent => Asymptote::leading(gamma / ng, "gamma > 0"),
        MotifEvent::EdgeVacant2 | MotifEvent::VacantTriangle => {
            let c = if event == MotifEvent::EdgeVacant2 { 2.0 } else { 1.5 };
            if gamma >= 1.0 {
                Asymptote::leading(c / (nf.powf(gamma - 1.0) * ln), "gamma >= 1")
            } else {
                Asymptote::leading(1.0, "gamma in (0,1)")
            }
        }
        MotifEvent::OneEdgeTriple => {
            if is_one(gamma) {
                Asymptote::leading(lnln / (nf * ln), "gamma = 1")
            } else if gamma > 1.0 {
                Asymptote::leading((gamma - 1.0) / nf.powf(2.0 * gamma - 1.0), "gamma > 1")
            } else {
                Asymptote::leading(gamma / ng, "gamma in (0,1)")
            }
        }
        MotifEvent::TwoStar | MotifEvent::Path2 => {
            Asymptote::leading(2.0 / (ng * ln), "gamma > 0")
        }
        MotifEvent::Triangle => Asymptote {
            value: 0.0,
            region: "lower order than 1/(n^gamma ln n)",
            lower_order_than: Some(1.0 / (ng * ln)),
        },
        MotifEvent::NonIsolatedVertex => {
            let v = vertices_asymptote(gamma, n);
            Asymptote::leading(v.value / nf, v.region)
        }
    };
    Ok(a)
}

/// How motif probabilities are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MotifMethod {
    /// Exact sampling conditioned on the activation set; `O(1)` per replicate.
    #[default]
    Conditioned,
    /// A full fresh sample per replicate; `O(n)` per replicate.
    Explicit,
}

/// Minimum replicate count below which reports carry a warning.
pub const MIN_REPS: u64 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub event: MotifEvent,
    pub n: u64,
    pub gamma: f64,
    pub alpha: f64,
    pub reps: u64,
    pub mc_mean: f64,
    pub mc_se: f64,
    pub asymptote: f64,
    /// `mc_mean / asymptote`, `NaN` when the asymptote is not positive.
    pub ratio: f64,
    pub region: &'static str,
    /// Set when `reps` is below [`MIN_REPS`].
    pub low_reps: bool,
}

/// [`motif_mc_with`] on the calling thread with the conditioned estimator.
pub fn motif_mc(
    event: MotifEvent,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<EstimateReport> {
    motif_mc_with(&Serial, MotifMethod::Conditioned, event, alpha, gamma, n, reps, seed)
}

/// Monte Carlo estimate of a motif probability with its standard error.
#[allow(clippy::too_many_arguments)]
pub fn motif_mc_with<E: Executor + ?Sized>(
    exec: &E,
    method: MotifMethod,
    event: MotifEvent,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<EstimateReport> {
    let model = TailModel::pareto(alpha)?;
    let k = event.arity();
    if n < k.max(2) as u64 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            value: 0.0,
        });
    }
    let a = scaling_a_n(alpha, gamma, n)?;
    let stream = derive_seed(seed, label_key(event.name()));
    let (mean, se) = match method {
        MotifMethod::Conditioned => {
            let plan = ConditionedPlan::new(&model, event, n, a);
            let hits = count_successes(exec, reps, |r| {
                let mut rng = replicate_rng(stream, r);
                plan.draw(&mut rng)
            });
            let q = hits as f64 / reps as f64;
            (plan.mass * q, plan.mass * (q * (1.0 - q) / reps as f64).sqrt())
        }
        MotifMethod::Explicit => {
            let hits = count_successes(exec, reps, |r| {
                let mut rng = replicate_rng(stream, r);
                let mut x = [0.0f64; 3];
                for v in x.iter_mut().take(k) {
                    *v = model.sample(&mut rng);
                }
                let m = (k as u64..n).map(|_| model.sample(&mut rng)).fold(0.0, f64::max);
                event.holds(&x[..k], m, a)
            });
            let q = hits as f64 / reps as f64;
            (q, (q * (1.0 - q) / reps as f64).sqrt())
        }
    };
    let (asymptote, region) = match motif_asymptote(event, alpha, gamma, n) {
        Ok(v) => (v.value, v.region),
        Err(_) => (f64::NAN, "unsupported"),
    };
    Ok(EstimateReport {
        event,
        n,
        gamma,
        alpha,
        reps,
        mc_mean: mean,
        mc_se: se,
        asymptote,
        ratio: if asymptote > 0.0 { mean / asymptote } else { f64::NAN },
        region,
        low_reps: reps < MIN_REPS,
    })
}

/// Box probabilities and samplers for one event.
struct ConditionedPlan<'a> {
    model: TailModel,
    max_law: MaxLaw,
    root: f64,
    a: f64,
    event: MotifEvent,
    boxes: &'a [Activation],
    /// Cumulative box probabilities.
    cumulative: Vec<f64>,
    mass: f64,
}

impl ConditionedPlan<'static> {
    fn new(model: &TailModel, event: MotifEvent, n: u64, a: f64) -> Self {
        let k = event.arity();
        let root = a.sqrt();
        let p = model.tail(root);
        let max_law = MaxLaw::new(*model, n - k as u64);
        let pm = max_law.tail(root);
        let prob = |s: Side, up: f64| match s {
            Side::Any => 1.0,
            Side::Above => up,
            Side::Below => 1.0 - up,
        };
        let boxes = event.activation();
        let mut cumulative = Vec::with_capacity(boxes.len());
        let mut mass = 0.0;
        for b in boxes {
            let px: f64 = b.0.iter().take(k).map(|&s| prob(s, p)).product();
            mass += px * prob(b.1, pm);
            cumulative.push(mass);
        }
        Self {
            model: *model,
            max_law,
            root,
            a,
            event,
            boxes,
            cumulative,
            mass,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        if self.mass <= 0.0 {
            return false;
        }
        let u = open_unit(rng) * self.mass;
        let idx = self
            .cumulative
            .iter()
            .position(|&c| u <= c)
            .unwrap_or(self.boxes.len() - 1);
        let b = self.boxes[idx];
        let k = self.event.arity();
        let mut x = [0.0f64; 3];
        for (v, &s) in x.iter_mut().zip(&b.0).take(k) {
            *v = match s {
                Side::Any => self.model.sample(rng),
                Side::Above => self.model.sample_above(self.root, rng),
                Side::Below => self.model.sample_below(self.root, rng),
            };
        }
        let m = match b.1 {
            Side::Any => self.max_law.sample(rng),
            Side::Above => self.max_law.sample_above(self.root, rng),
            Side::Below => self.max_law.sample_below(self.root, rng),
        };
        self.event.holds(&x[..k], m, self.a)
    }
}

/// Evaluation mode for expected counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    Exact,
    Asymptotic,
    MonteCarlo { reps: u64, seed: u64 },
}

fn check_count_args(alpha: f64, gamma: f64, n: u64) -> Result<(TailModel, f64)> {
    let model = TailModel::pareto(alpha)?;
    let a = scaling_a_n(alpha, gamma, n)?;
    Ok((model, a))
}

/// `E|E_n|`.
pub fn expected_edges(alpha: f64, gamma: f64, n: u64, mode: CountMode) -> Result<f64> {
    let (model, a) = check_count_args(alpha, gamma, n)?;
    let nf = n as f64;
    Ok(match mode {
        CountMode::Exact => 0.5 * nf * (nf - 1.0) * model.product_tail(a),
        CountMode::Asymptotic => 0.5 * gamma * nf.powf(2.0 - gamma),
        CountMode::MonteCarlo { reps, seed } => {
            expected_edges_mc(&Serial, alpha, gamma, n, reps, seed)?.mean
        }
    })
}

/// Edge counts of full samples; mean and standard error.
pub fn expected_edges_mc<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<Moments> {
    let (model, a) = check_count_args(alpha, gamma, n)?;
    let stream = derive_seed(seed, label_key("edges"));
    Ok(collect_moments(exec, reps, |r| {
        let s = fresh_sample(&model, n, stream, r);
        k_vector(&s, a).map(|kv| kv.edge_count() as f64).unwrap_or(0.0)
    }))
}

fn fresh_sample(model: &TailModel, n: u64, stream: u64, rep: u64) -> WeightedSample {
    let mut rng = replicate_rng(stream, rep);
    WeightedSample::new_unchecked((0..n).map(|_| model.sample(&mut rng)).collect())
}

fn vertices_asymptote(gamma: f64, n: u64) -> Asymptote {
    let nf = n as f64;
    if gamma > 2.0 {
        Asymptote::leading(0.0, "gamma > 2")
    } else if is_one(gamma) {
        let ln = nf.ln();
        Asymptote::leading(nf * ln.ln() / ln, "gamma = 1")
    } else if gamma > 1.0 {
        Asymptote::leading((gamma - 1.0) * nf.powf(2.0 - gamma), "gamma in (1,2]")
    } else {
        Asymptote::leading(nf, "gamma in (0,1)")
    }
}

/// `E|V_n|`.
pub fn expected_vertices(alpha: f64, gamma: f64, n: u64, mode: CountMode) -> Result<f64> {
    let (model, a) = check_count_args(alpha, gamma, n)?;
    Ok(match mode {
        CountMode::Exact => n as f64 * non_isolation_probability(&model, n, a),
        CountMode::Asymptotic => {
            if n < 3 {
                return Err(Error::UnsupportedRegion("asymptotic formulas need n >= 3"));
            }
            vertices_asymptote(gamma, n).value
        }
        CountMode::MonteCarlo { reps, seed } => {
            expected_vertices_mc(&Serial, alpha, gamma, n, reps, seed)?.mean
        }
    })
}

/// `P(X_1 max_{j > 1} X_j > a)` by quadrature over the quantile scale:
/// `tail(a) + int_{tail(a)}^1 P(max > a / Q(u)) du`.
pub fn non_isolation_probability(model: &TailModel, n: u64, a: f64) -> f64 {
    let law = MaxLaw::new(*model, n - 1);
    let lo = model.tail(a);
    if lo >= 1.0 {
        return 1.0;
    }
    let mut points = Vec::new();
    let mut u = lo.max(1e-300);
    points.push(lo);
    while u * 4.0 < 1.0 {
        u *= 4.0;
        points.push(u);
    }
    points.push(1.0);
    let r = quad::integrate_pieces(|u| law.tail(a / model.quantile(u)), &points, 1e-14);
    (lo + r.value).min(1.0)
}

/// Non-isolated vertex counts of full samples, via the two largest values.
pub fn expected_vertices_mc<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<Moments> {
    let (model, a) = check_count_args(alpha, gamma, n)?;
    let stream = derive_seed(seed, label_key("vertices"));
    Ok(collect_moments(exec, reps, |r| {
        let s = fresh_sample(&model, n, stream, r);
        non_isolated_count(s.values(), a) as f64
    }))
}

/// Number of `i` with `x_i max_{j != i} x_j > a`.
pub fn non_isolated_count(x: &[f64], a: f64) -> usize {
    let (mut top, mut second, mut at) = (0.0f64, 0.0f64, usize::MAX);
    for (i, &v) in x.iter().enumerate() {
        if v > top {
            second = top;
            top = v;
            at = i;
        } else if v > second {
            second = v;
        }
    }
    x.iter()
        .enumerate()
        .filter(|&(i, &v)| v * if i == at { second } else { top } > a)
        .count()
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub(crate) fn scaled_proportion(hits: u64, reps: u64, scale: f64) -> Self {
        let q = if reps == 0 { 0.0 } else { hits as f64 / reps as f64 };
        Self {
            mean: scale * q,
            se: scale * (q * (1.0 - q) / reps.max(1) as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupercriticalReport {
    pub alpha: f64,
    pub gamma: f64,
    pub n: u64,
    pub reps: u64,
    pub a_n: f64,
    /// `tail(sqrt(a_n))`, the Binomial success probability of `K_{n,0}`.
    pub p_clique: f64,
    pub p_any_clique: f64,
    pub p_one_clique: f64,
    /// `n^(1 - gamma/2) / sqrt(ln n)`.
    pub clique_asymptote: f64,
    /// `P(K_{n,0} = 1, lone clique vertex non-isolated)`.
    pub star: Estimate,
    /// `P(K_{n,0} = 1, K_{n,1} = 1)`.
    pub star_one_follower: Estimate,
    /// `(gamma/2 - 1) n^(2 - gamma)`.
    pub star_asymptote: f64,
    /// Replicates, all conditioned on `K_{n,0} >= 1`, with at least one edge.
    pub nonempty: u64,
    /// `(vertex count, clique size)` frequencies among non-empty graphs,
    /// most frequent first.
    pub configurations: Vec<((u64, u64), u64)>,
}

impl SupercriticalReport {
    pub fn modal_configuration(&self) -> Option<(u64, u64)> {
        self.configurations.first().map(|c| c.0)
    }
}

/// Exact `P(K >= 1)` and `P(K = 1)` for `K ~ Binomial(n, p)`.
pub fn binomial_clique_probabilities(n: u64, p: f64) -> (f64, f64) {
    let nf = n as f64;
    let log_q = (-p).ln_1p();
    let any = -(nf * log_q).exp_m1();
    let one = nf * p * ((nf - 1.0) * log_q).exp();
    (any, one)
}

/// Samples the K-vector conditioned on `K_0 >= 1`.
///
/// The index of the first clique vertex is a geometric variable truncated
/// to `1..=n`; the remaining `n - G` values are unconstrained.
pub fn sample_kvector_nonempty_clique<R: Rng + ?Sized>(
    model: &TailModel,
    n: u64,
    a: f64,
    rng: &mut R,
) -> KVector {
    let root = a.sqrt();
    let p = model.tail(root);
    let (any, _) = binomial_clique_probabilities(n, p);
    let log_q = (-p).ln_1p();
    let g = if log_q == 0.0 {
        1
    } else {
        let v = (-(open_unit(rng) * any)).ln_1p() / log_q;
        (v.ceil() as u64).clamp(1, n)
    };
    let k0 = 1 + binomial(n - g, p, rng);
    let mut clique: Vec<f64> = (0..k0).map(|_| model.sample_above(root, rng)).collect();
    clique.sort_by(|a, b| b.total_cmp(a));
    let followers = multinomial_groups(model, n - k0, a, &clique, rng);
    KVector { k0, followers }
}

/// Clique statistics in the super-critical regime `gamma > 2`.
pub fn supercritical_clique_stats<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<SupercriticalReport> {
    if !(gamma > 2.0) {
        return Err(Error::UnsupportedRegion("super-critical statistics need gamma > 2"));
    }
    let model = TailModel::pareto(alpha)?;
    let a = scaling_a_n(alpha, gamma, n)?;
    let p = model.tail(a.sqrt());
    let (any, one) = binomial_clique_probabilities(n, p);
    let stream = derive_seed(seed, label_key("supercritical"));
    let parts = exec.chunks(reps, |range| {
        let mut star = 0u64;
        let mut star_one = 0u64;
        let mut configs: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for r in range {
            let kv = sample_kvector_nonempty_clique(&model, n, a, &mut replicate_rng(stream, r));
            let followers = kv.follower_total();
            if kv.k0 == 1 && followers >= 1 {
                star += 1;
                if followers == 1 {
                    star_one += 1;
                }
            }
            let v = kv.vertex_count();
            if v > 0 {
                *configs.entry((v, kv.k0)).or_insert(0) += 1;
            }
        }
        (star, star_one, configs)
    });
    let mut star = 0;
    let mut star_one = 0;
    let mut configs: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for (s, s1, c) in parts {
        star += s;
        star_one += s1;
        for (key, count) in c {
            *configs.entry(key).or_insert(0) += count;
        }
    }
    let nonempty = configs.values().sum();
    let mut configurations: Vec<((u64, u64), u64)> = configs.into_iter().collect();
    configurations.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    let nf = n as f64;
    Ok(SupercriticalReport {
        alpha,
        gamma,
        n,
        reps,
        a_n: a,
        p_clique: p,
        p_any_clique: any,
        p_one_clique: one,
        clique_asymptote: nf.powf(1.0 - gamma / 2.0) / nf.ln().sqrt(),
        star: Estimate::scaled_proportion(star, reps, any),
        star_one_follower: Estimate::scaled_proportion(star_one, reps, any),
        star_asymptote: (gamma / 2.0 - 1.0) * nf.powf(2.0 - gamma),
        nonempty,
        configurations,
    })
}

/// Plain Monte Carlo estimate of `P(X_1 X_2 > a)` from `reps` pair draws.
pub fn product_tail_mc<E: Executor + ?Sized>(
    exec: &E,
    model: &TailModel,
    a: f64,
    reps: u64,
    seed: u64,
) -> Estimate {
    let stream = derive_seed(seed, label_key("product-tail"));
    let hits = count_successes(exec, reps, |r| {
        let mut rng = replicate_rng(stream, r);
        model.sample(&mut rng) * model.sample(&mut rng) > a
    });
    Estimate::scaled_proportion(hits, reps, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnticlusterPoint {
    pub x: f64,
    /// `P(X_1 X_2 > x)`.
    pub pair: Estimate,
    /// `P(X_1 X_2 > x, X_1 X_3 > x)`.
    pub joint: Estimate,
    /// `P(X_1 X_3 > x | X_1 X_2 > x)` with a delta-method standard error.
    pub ratio: Estimate,
    /// Closed-form `P(X_1 X_2 > x)`.
    pub pair_exact: f64,
    /// `x^alpha P(X_1 X_2 > x, X_1 X_3 > x)`.
    pub joint_scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnticlusterReport {
    pub alpha: f64,
    pub reps: u64,
    pub points: Vec<AnticlusterPoint>,
    /// Least-squares slope of `ln ratio` against `ln ln x` over grid points
    /// with `x > 1`; `NaN` with fewer than two such points.
    pub log_slope: f64,
}

/// Tail diagnostics for the product kernel on an exact Pareto law.
///
/// Given `X_1`, the pair and joint indicators have conditional means
/// `tail(x / X_1)` and `tail(x / X_1)^2`. `X_1` itself is drawn from a
/// Pareto law with the heavier index `min(alpha, 1 / ln x)` and reweighted
/// by the likelihood ratio, which keeps the relative error bounded as `x`
/// grows.
pub fn anticlustering_diagnostics<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    x_grid: &[f64],
    reps: u64,
    seed: u64,
) -> Result<AnticlusterReport> {
    let model = TailModel::pareto(alpha)?;
    if x_grid.iter().any(|&x| !(x >= 1.0) || !x.is_finite()) {
        return Err(Error::InvalidInput("grid values must be finite and >= 1"));
    }
    let mut points = Vec::with_capacity(x_grid.len());
    for (gi, &x) in x_grid.iter().enumerate() {
        let beta = if x > 1.0 { alpha.min(1.0 / x.ln()) } else { alpha };
        let stream = derive_seed(seed, label_key("anticlustering") ^ gi as u64);
        let parts = exec.chunks(reps, |range| {
            let mut acc = CoMoments::new(2);
            for r in range {
                let mut rng = replicate_rng(stream, r);
                let x1 = open_unit(&mut rng).powf(-1.0 / beta);
                let w = alpha / beta * x1.powf(beta - alpha);
                let h = model.tail(x / x1);
                acc.push(&[w * h, w * h * h]);
            }
            acc
        });
        let mut acc = CoMoments::new(2);
        for p in &parts {
            acc.merge(p);
        }
        let cov = acc.covariance();
        let nr = reps.max(1) as f64;
        let (mp, mj) = (acc.mean[0], acc.mean[1]);
        let (vp, vj, cpj) = (cov[0] / nr, cov[3] / nr, cov[1] / nr);
        let ratio = if mp > 0.0 { mj / mp } else { f64::NAN };
        let ratio_var = if mp > 0.0 {
            (vj - 2.0 * ratio * cpj + ratio * ratio * vp) / (mp * mp)
        } else {
            f64::NAN
        };
        points.push(AnticlusterPoint {
            x,
            pair: Estimate {
                mean: mp,
                se: vp.max(0.0).sqrt(),
            },
            joint: Estimate {
                mean: mj,
                se: vj.max(0.0).sqrt(),
            },
            ratio: Estimate {
                mean: ratio,
                se: ratio_var.max(0.0).sqrt(),
            },
            pair_exact: model.product_tail(x),
            joint_scaled: mj * x.powf(alpha),
        });
    }
    let log_slope = slope(
        points
            .iter()
            .filter(|p| p.x > 1.0 && p.ratio.mean > 0.0)
            .map(|p| (p.x.ln().ln(), p.ratio.mean.ln())),
    );
    Ok(AnticlusterReport {
        alpha,
        reps,
        points,
        log_slope,
    })
}

/// Ordinary least-squares slope; `NaN` for fewer than two points.
pub fn slope<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> f64 {
    let pts: Vec<(f64, f64)> = pairs.into_iter().collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        f64::NAN
    }
}
