//! Random graphs with Bernoulli edges: vertices `i, j` are joined with
//! probability `min(1, X_i X_j / a)`, so every hard edge is present and the
//! remaining pairs are kept at random.

use crate::dist::{scaling_a_n, TailModel};
use crate::error::{Error, Result};
use crate::exec::{collect_moments, count_successes, Executor};
use crate::hardgraph::{binomial, WeightedSample};
use crate::rng::{derive_seed, label_key, open_unit, replicate_rng, PairStreams};
use crate::stats::{Estimate, MIN_REPS};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use rand::Rng;

/// Largest vertex count for operations that visit every pair.
pub const FULL_BUILD_LIMIT: usize = 4000;

/// Fewer conditioning events than this mark a report as unreliable.
pub const MIN_EVENTS: u64 = 100;

#[inline]
pub fn edge_probability(xi: f64, xj: f64, a: f64) -> f64 {
    (xi * xj / a).min(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliGraph {
    pub sample: WeightedSample,
    pub a_n: f64,
    /// Sorted pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
    pub seed: u64,
}

impl BernoulliGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges with `X_i X_j > a`.
    pub fn hard_edges(&self) -> Vec<(usize, usize)> {
        let x = self.sample.values();
        self.edges
            .iter()
            .copied()
            .filter(|&(i, j)| x[i] * x[j] > self.a_n)
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = alloc::vec![0; self.sample.len()];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }
}

fn check_full_size(n: usize) -> Result<()> {
    if n > FULL_BUILD_LIMIT {
        return Err(Error::TooLarge {
            what: "full Bernoulli graph",
            size: n,
            limit: FULL_BUILD_LIMIT,
        });
    }
    Ok(())
}

/// Visits the pairs of `x` in row order, drawing the uniform of pair
/// `(i, j)` from the `(seed, i, j)` stream, and calls `on_edge` for every
/// edge until it returns `false`.
fn for_each_edge(x: &[f64], a: f64, seed: u64, mut on_edge: impl FnMut(usize, usize) -> bool) {
    let streams = PairStreams::new(seed);
    for i in 0..x.len() {
        if i + 1 == x.len() {
            break;
        }
        let mut row = streams.row(i, i + 1);
        for j in i + 1..x.len() {
            let u: f64 = row.random();
            if u < edge_probability(x[i], x[j], a) && !on_edge(i, j) {
                return;
            }
        }
    }
}

pub fn build_bernoulli_graph(sample: &WeightedSample, a: f64, seed: u64) -> Result<BernoulliGraph> {
    crate::error::positive("a_n", a)?;
    check_full_size(sample.len())?;
    let mut edges = Vec::new();
    for_each_edge(sample.values(), a, seed, |i, j| {
        edges.push((i, j));
        true
    });
    Ok(BernoulliGraph {
        sample: sample.clone(),
        a_n: a,
        edges,
        seed,
    })
}

/// Monte Carlo probability with its reference asymptote.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliReport {
    pub alpha: f64,
    pub gamma: f64,
    pub n: u64,
    pub reps: u64,
    pub a_n: f64,
    pub estimate: Estimate,
    pub asymptote: f64,
    /// `estimate / asymptote`.
    pub ratio: f64,
    pub region: &'static str,
    pub low_reps: bool,
}

/// `(alpha / (alpha - 1))^2`, the product of the two truncated means in the limit.
pub fn mean_product_constant(alpha: f64) -> f64 {
    let c = alpha / (alpha - 1.0);
    c * c
}

/// How a replicate decides whether vertex 1 has a neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowMode {
    /// Given `X_1 = x`, the degree is `Binomial(n - 1, x E[Z] / a)` where
    /// `Z` has the law below `sqrt(a)`; one draw per replicate.
    #[default]
    Marginalized,
    /// Draws the other `n - 1` values and the pair coins of vertex 1.
    ExplicitRow,
}

fn super_critical_pareto(alpha: f64, gamma: f64, n: u64) -> Result<(TailModel, f64)> {
    if !(gamma > 2.0) {
        return Err(Error::UnsupportedRegion("Bernoulli extension needs gamma > 2"));
    }
    if !(alpha > 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
        });
    }
    Ok((TailModel::pareto(alpha)?, scaling_a_n(alpha, gamma, n)?))
}

/// `P(vertex 1 is non-isolated | no clique vertex)`.
pub fn mc_nonisolated_given_no_clique<E: Executor + ?Sized>(
    exec: &E,
    mode: RowMode,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<BernoulliReport> {
    let (model, a) = super_critical_pareto(alpha, gamma, n)?;
    let root = a.sqrt();
    let mean = model.mean_below(root);
    let others = (n - 1) as f64;
    let stream = derive_seed(seed, label_key("bernoulli-nonisolated"));
    let hits = count_successes(exec, reps, |r| {
        let mut rng = replicate_rng(stream, r);
        let x1 = model.sample_below(root, &mut rng);
        match mode {
            RowMode::Marginalized => {
                let q = x1 * mean / a;
                let p = -(others * (-q).ln_1p()).exp_m1();
                open_unit(&mut rng) <= p
            }
            RowMode::ExplicitRow => (1..n).any(|_| {
                let z = model.sample_below(root, &mut rng);
                rng.random::<f64>() < edge_probability(x1, z, a)
            }),
        }
    });
    let estimate = Estimate::scaled_proportion(hits, reps, 1.0);
    let (asymptote, region) = if gamma / alpha < 1.0 {
        (1.0, "gamma/alpha < 1: non-isolated")
    } else {
        (
            mean_product_constant(alpha) * n as f64 / a,
            "gamma/alpha >= 1: isolated",
        )
    };
    Ok(BernoulliReport {
        alpha,
        gamma,
        n,
        reps,
        a_n: a,
        ratio: estimate.mean / asymptote,
        estimate,
        asymptote,
        region,
        low_reps: reps < MIN_REPS,
    })
}

/// `P(no edges | no clique vertex)` by building every replicate in full.
/// The asymptote field holds the union bound `1 - C n^2 / a`.
pub fn mc_empty_graph<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<BernoulliReport> {
    let (model, a) = scaling_checked(alpha, gamma, n)?;
    Ok(empty_graph_report(exec, &model, a, gamma, n, reps, seed))
}

fn scaling_checked(alpha: f64, gamma: f64, n: u64) -> Result<(TailModel, f64)> {
    check_full_size(n as usize)?;
    if !(alpha > 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
        });
    }
    Ok((TailModel::pareto(alpha)?, scaling_a_n(alpha, gamma, n)?))
}

/// As [`mc_empty_graph`] with an explicit threshold.
pub fn mc_empty_graph_at<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    a: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<BernoulliReport> {
    check_full_size(n as usize)?;
    crate::error::positive("a_n", a)?;
    let model = TailModel::pareto(alpha)?;
    Ok(empty_graph_report(exec, &model, a, f64::NAN, n, reps, seed))
}

fn empty_graph_report<E: Executor + ?Sized>(
    exec: &E,
    model: &TailModel,
    a: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> BernoulliReport {
    let alpha = model.alpha();
    let root = a.sqrt();
    let stream = derive_seed(seed, label_key("bernoulli-empty"));
    let hits = count_successes(exec, reps, |r| {
        let mut rng = replicate_rng(stream, r);
        let x: Vec<f64> = (0..n).map(|_| model.sample_below(root, &mut rng)).collect();
        let mut empty = true;
        for_each_edge(&x, a, derive_seed(stream, r), |_, _| {
            empty = false;
            false
        });
        empty
    });
    let estimate = Estimate::scaled_proportion(hits, reps, 1.0);
    let nf = n as f64;
    let asymptote = 1.0 - mean_product_constant(alpha) * nf * nf / a;
    let region = if gamma / alpha >= 2.0 {
        "gamma/alpha >= 2: empty"
    } else {
        "trend only"
    };
    BernoulliReport {
        alpha,
        gamma,
        n,
        reps,
        a_n: a,
        ratio: estimate.mean / asymptote,
        estimate,
        asymptote,
        region,
        low_reps: reps < MIN_REPS,
    }
}

/// Follower counts of a lone clique vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LoneCliqueReport {
    pub alpha: f64,
    pub gamma: f64,
    pub n: u64,
    pub reps: u64,
    pub a_n: f64,
    /// Exact `P(K_0 = 1)`.
    pub p_lone_clique: f64,
    /// `P(K_0 = 1, clique vertex non-isolated)`.
    pub p_lone_nonisolated: Estimate,
    pub asymptote: f64,
    /// Replicates whose clique vertex has at least one follower.
    pub events: u64,
    /// `(follower count, frequency)` in increasing count order.
    pub follower_counts: Vec<(u64, u64)>,
    /// Fewer than [`MIN_EVENTS`] events.
    pub insufficient: bool,
    pub region: &'static str,
}

impl LoneCliqueReport {
    pub fn modal_count(&self) -> Option<u64> {
        self.follower_counts
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|&(c, _)| c)
    }

    /// Share of events with exactly one follower.
    pub fn single_follower_share(&self) -> f64 {
        let one = self
            .follower_counts
            .iter()
            .find(|&&(c, _)| c == 1)
            .map_or(0, |&(_, f)| f);
        one as f64 / self.events as f64
    }
}

/// `E[min(1, x Z / a)]` for `Z` with the law below `sqrt(a)`.
fn link_probability(model: &TailModel, x: f64, a: f64) -> f64 {
    let root = a.sqrt();
    let cut = a / x;
    if cut <= 1.0 {
        return 1.0;
    }
    let below = model.cdf(root);
    if cut >= root {
        return (x / a * model.mean_below(root)).min(1.0);
    }
    let partial = model.cdf(cut) * model.mean_below(cut) * x / a;
    ((partial + model.cdf(root) - model.cdf(cut)) / below).min(1.0)
}

/// Replicates are drawn conditionally on `K_0 = 1`: the clique value has the
/// law above `sqrt(a)` and its follower count is `Binomial(n - 1, pi)` with
/// `pi = E[min(1, X Z / a)]`.
pub fn lone_clique_follower_stats<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    gamma: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<LoneCliqueReport> {
    let (model, a) = super_critical_pareto(alpha, gamma, n)?;
    let root = a.sqrt();
    let p = model.tail(root);
    let nf = n as f64;
    let p_lone = nf * p * ((nf - 1.0) * (-p).ln_1p()).exp();
    let stream = derive_seed(seed, label_key("bernoulli-lone-clique"));
    let parts = exec.chunks(reps, |range| {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for r in range {
            let mut rng = replicate_rng(stream, r);
            let x = model.sample_above(root, &mut rng);
            let k = binomial(n - 1, link_probability(&model, x, a), &mut rng);
            if k > 0 {
                *counts.entry(k).or_insert(0) += 1;
            }
        }
        counts
    });
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for part in parts {
        for (k, f) in part {
            *counts.entry(k).or_insert(0) += f;
        }
    }
    let events: u64 = counts.values().sum();
    let (asymptote, region) = if gamma / alpha < 2.0 {
        (nf / a.powf(alpha / 2.0), "gamma/alpha < 2")
    } else {
        (
            mean_product_constant(alpha) * nf * nf / a.powf((alpha + 1.0) / 2.0),
            "gamma/alpha >= 2",
        )
    };
    Ok(LoneCliqueReport {
        alpha,
        gamma,
        n,
        reps,
        a_n: a,
        p_lone_clique: p_lone,
        p_lone_nonisolated: Estimate::scaled_proportion(events, reps, p_lone),
        asymptote,
        events,
        follower_counts: counts.into_iter().collect(),
        insufficient: events < MIN_EVENTS,
        region,
    })
}

/// `(xy)^(1 - alpha')`, the limiting partial integral of the rescaled graphon.
pub fn partial_integral_target(alpha_prime: f64, x: f64, y: f64) -> f64 {
    (x * y).powf(1.0 - alpha_prime)
}

/// `(1 - alpha')^2 (xy)^(-alpha')`, the limiting rescaled graphon.
pub fn rescaled_limit_graphon(alpha_prime: f64, x: f64, y: f64) -> f64 {
    (1.0 - alpha_prime) * (1.0 - alpha_prime) * (x * y).powf(-alpha_prime)
}

/// Share of edge endpoints `(i, j)` (ordered pairs, vertices ranked by
/// decreasing value from 1) with `i <= ceil(xn)` and `j <= ceil(yn)`, in a
/// Bernoulli graph with `alpha = 1/alpha'` and `a = n^(2 alpha' - beta)`.
/// Normalizing by the edge count makes the `x = y = 1` value exactly 1.
pub fn rescaled_graphon_partial_integral(
    alpha_prime: f64,
    beta: f64,
    n: usize,
    x: f64,
    y: f64,
    seed: u64,
) -> Result<f64> {
    if !(alpha_prime > 0.0 && alpha_prime < 1.0) {
        return Err(Error::OutOfRange {
            name: "alpha_prime",
            value: alpha_prime,
        });
    }
    if !(beta > 0.0 && beta < 2.0 * alpha_prime) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
        });
    }
    for (name, v) in [("x", x), ("y", y)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    check_full_size(n)?;
    let model = TailModel::pareto(1.0 / alpha_prime)?;
    let a = (n as f64).powf(2.0 * alpha_prime - beta);
    let sample = crate::dist::sample_iid(&model, n, seed)?;
    let g = build_bernoulli_graph(&sample, a, derive_seed(seed, label_key("rescaled-graphon")))?;
    if g.edges.is_empty() {
        return Err(Error::ZeroGraphon);
    }
    let mut rank = alloc::vec![0usize; n];
    for (r, &i) in sample.order_desc().iter().enumerate() {
        rank[i] = r + 1;
    }
    let bx = (x * n as f64).ceil() as usize;
    let by = (y * n as f64).ceil() as usize;
    let inside = |u: usize, v: usize| (rank[u] <= bx && rank[v] <= by) as usize;
    let hits: usize = g.edges.iter().map(|&(i, j)| inside(i, j) + inside(j, i)).sum();
    Ok(hits as f64 / (2 * g.edges.len()) as f64)
}

/// Mean number of Bernoulli-graph edges over `reps` fresh samples, kept for
/// calibration against `n^2 E[min(1, X_1 X_2 / a)] / 2`.
pub fn mean_edge_count<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    a: f64,
    n: usize,
    reps: u64,
    seed: u64,
) -> Result<Estimate> {
    check_full_size(n)?;
    let model = TailModel::pareto(alpha)?;
    let stream = derive_seed(seed, label_key("bernoulli-edges"));
    let m = collect_moments(exec, reps, |r| {
        let mut rng = replicate_rng(stream, r);
        let x: Vec<f64> = (0..n).map(|_| model.sample(&mut rng)).collect();
        let mut count = 0u64;
        for_each_edge(&x, a, derive_seed(stream, r), |_, _| {
            count += 1;
            true
        });
        count as f64
    });
    Ok(Estimate {
        mean: m.mean,
        se: m.std_error(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::hardgraph::build_hard_graph;
    use crate::quad::integrate;

    #[test]
    fn edge_probability_examples() {
        assert_eq!(edge_probability(3.0, 5.0, 30.0), 0.5);
        assert_eq!(edge_probability(6.0, 6.0, 30.0), 1.0);
        assert_eq!(edge_probability(1.0, 1.0, 100.0), 0.01);
    }

    #[test]
    fn hard_edges_are_always_present() {
        let m = TailModel::pareto(1.5).unwrap();
        for seed in 0..20 {
            let s = crate::dist::sample_iid(&m, 150, seed).unwrap();
            let hard = build_hard_graph(&s, 40.0).unwrap();
            let g = build_bernoulli_graph(&s, 40.0, seed).unwrap();
            assert_eq!(g.hard_edges(), hard.edges);
            assert!(g.edge_count() >= hard.edge_count());
        }
    }

    #[test]
    fn pair_draws_do_not_depend_on_row_order() {
        let s = WeightedSample::new(alloc::vec![2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let g = build_bernoulli_graph(&s, 40.0, 9).unwrap();
        let streams = PairStreams::new(9);
        let x = s.values();
        for i in 0..5 {
            for j in i + 1..5 {
                let present = streams.uniform(j, i) < edge_probability(x[i], x[j], 40.0);
                assert_eq!(present, g.edges.contains(&(i, j)));
            }
        }
    }

    #[test]
    fn size_guard() {
        let s = WeightedSample::new(alloc::vec![1.0; FULL_BUILD_LIMIT + 1]).unwrap();
        assert!(matches!(build_bernoulli_graph(&s, 10.0, 0), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn disjoint_pairs_are_uncorrelated() {
        let s = WeightedSample::new(alloc::vec![3.0, 5.0, 5.0, 6.0]).unwrap();
        let reps = 20_000;
        let mut co = crate::accum::CoMoments::new(2);
        for seed in 0..reps {
            let g = build_bernoulli_graph(&s, 30.0, seed).unwrap();
            let e01 = g.edges.contains(&(0, 1)) as u8 as f64;
            let e23 = g.edges.contains(&(2, 3)) as u8 as f64;
            co.push(&[e01, e23]);
        }
        let c = co.covariance();
        assert!((co.mean[0] - 0.5).abs() < 4.0 * (0.25f64 / reps as f64).sqrt());
        assert!((co.mean[1] - 1.0).abs() < 1e-15);
        // independent Bernoulli products: SE of the covariance ~ sd0 sd1 / sqrt(reps)
        let se = (c[0] * c[3]).sqrt().max(0.25) / (reps as f64).sqrt();
        assert!(c[1].abs() < 3.0 * se);
        let s2 = WeightedSample::new(alloc::vec![3.0, 5.0, 4.0, 4.0]).unwrap();
        let mut co = crate::accum::CoMoments::new(2);
        for seed in 0..reps {
            let g = build_bernoulli_graph(&s2, 30.0, seed).unwrap();
            co.push(&[g.edges.contains(&(0, 1)) as u8 as f64, g.edges.contains(&(2, 3)) as u8 as f64]);
        }
        let c = co.covariance();
        let se = (c[0] * c[3]).sqrt() / (reps as f64).sqrt();
        assert!(c[1].abs() < 3.0 * se, "cov {} se {}", c[1], se);
    }

    #[test]
    fn mean_product_constant_at_two() {
        assert_eq!(mean_product_constant(2.0), 4.0);
    }

    #[test]
    fn region_and_parameter_errors() {
        assert!(matches!(
            mc_nonisolated_given_no_clique(&Serial, RowMode::Marginalized, 2.0, 2.0, 100, 10, 0),
            Err(Error::UnsupportedRegion(_))
        ));
        assert!(lone_clique_follower_stats(&Serial, 2.0, 1.5, 100, 10, 0).is_err());
        assert!(mc_empty_graph(&Serial, 2.0, 5.0, 5000, 10, 0).is_err());
        assert!(rescaled_graphon_partial_integral(0.5, 1.0, 100, 0.5, 0.5, 0).is_err());
        assert!(rescaled_graphon_partial_integral(1.5, 0.5, 100, 0.5, 0.5, 0).is_err());
    }

    /// `P(X_1 non-isolated | no clique)` by quadrature over `x_1`.
    fn nonisolation_oracle(alpha: f64, a: f64, n: u64) -> f64 {
        let root = a.sqrt();
        let mass = 1.0 - root.powf(-alpha);
        // E[Z | Z <= root] for Pareto(alpha)
        let mean = alpha / (alpha - 1.0) * (1.0 - root.powf(1.0 - alpha)) / mass;
        let f = |x: f64| {
            let q = x * mean / a;
            alpha * x.powf(-alpha - 1.0) * (1.0 - (1.0 - q).powf((n - 1) as f64))
        };
        integrate(f, 1.0, root, 1e-13).value / mass
    }

    #[test]
    fn nonisolation_modes_match_quadrature() {
        let (alpha, gamma, n) = (2.0, 3.0, 300);
        let a = scaling_a_n(alpha, gamma, n).unwrap();
        let want = nonisolation_oracle(alpha, a, n);
        for mode in [RowMode::Marginalized, RowMode::ExplicitRow] {
            let r = mc_nonisolated_given_no_clique(&Serial, mode, alpha, gamma, n, 200_000, 4).unwrap();
            let z = (r.estimate.mean - want) / r.estimate.se;
            assert!(z.abs() < 4.0, "{mode:?}: {} vs {want}", r.estimate.mean);
        }
    }

    #[test]
    fn nonisolation_decreases_in_gamma() {
        let mut last: Option<Estimate> = None;
        for gamma in [2.5, 3.0, 3.5] {
            let r = mc_nonisolated_given_no_clique(&Serial, RowMode::Marginalized, 2.0, gamma, 10_000, 100_000, 1)
                .unwrap();
            if let Some(prev) = last {
                let sep = prev.mean - r.estimate.mean;
                assert!(sep > 3.0 * (prev.se.powi(2) + r.estimate.se.powi(2)).sqrt());
            }
            last = Some(r.estimate);
        }
    }

    #[test]
    fn empty_graph_with_two_vertices_matches_quadrature() {
        let (alpha, a) = (2.0f64, 3.0f64);
        let root = a.sqrt();
        let mass = 1.0 - root.powf(-alpha);
        let pdf = |x: f64| alpha * x.powf(-alpha - 1.0) / mass;
        let inner = |x1: f64| integrate(|x2| pdf(x2) * (x1 * x2 / a).min(1.0), 1.0, root, 1e-13).value;
        let want = 1.0 - integrate(|x1| pdf(x1) * inner(x1), 1.0, root, 1e-12).value;
        let r = mc_empty_graph_at(&Serial, alpha, a, 2, 100_000, 3).unwrap();
        assert!((r.estimate.mean - want).abs() < 3.0 * r.estimate.se, "{} vs {want}", r.estimate.mean);
    }

    #[test]
    fn empty_graph_bound_in_the_empty_region() {
        let (alpha, gamma, n) = (2.0, 4.5, 2000);
        let r = mc_empty_graph(&Serial, alpha, gamma, n, 200, 5).unwrap();
        let nf = n as f64;
        let bound = 1.0 - 2.0 * mean_product_constant(alpha) * nf * nf / r.a_n;
        assert!(r.estimate.mean >= bound, "{} < {bound}", r.estimate.mean);
        let far = mc_empty_graph_at(&Serial, alpha, 1e30, 50, 200, 5).unwrap();
        assert_eq!(far.estimate.mean, 1.0);
    }

    #[test]
    fn lone_clique_transition() {
        let high = lone_clique_follower_stats(&Serial, 2.0, 4.5, 10_000, 200_000, 1).unwrap();
        assert!(!high.insufficient);
        assert_eq!(high.modal_count(), Some(1));
        let low = lone_clique_follower_stats(&Serial, 2.0, 3.0, 10_000, 20_000, 1).unwrap();
        assert!(!low.insufficient);
        assert!(low.single_follower_share() < 0.5);
        // the non-isolated lone clique probability tracks n / a^(alpha/2) below the transition
        assert!(low.p_lone_nonisolated.mean / low.asymptote > 0.5);
        assert!(low.p_lone_nonisolated.mean / low.asymptote < 2.0);
    }

    #[test]
    fn link_probability_limits() {
        let m = TailModel::pareto(2.0).unwrap();
        assert_eq!(link_probability(&m, 100.0, 50.0), 1.0);
        // x below sqrt(a): Z x <= a always, so the mean is linear in x
        let a = 1e4;
        let want = 50.0 / a * m.mean_below(100.0);
        assert!((link_probability(&m, 50.0, a) - want).abs() < 1e-15);
        // continuity at the kink x = sqrt(a)
        let l = link_probability(&m, 100.0 - 1e-9, a);
        let r = link_probability(&m, 100.0 + 1e-9, a);
        assert!((l - r).abs() < 1e-9);
    }

    #[test]
    fn rescaled_partial_integral() {
        let whole = rescaled_graphon_partial_integral(0.5, 0.5, 2000, 1.0, 1.0, 7).unwrap();
        assert!((whole - 1.0).abs() < 1e-15);
        assert_eq!(partial_integral_target(0.5, 0.25, 0.25), 0.25);
        assert_eq!(rescaled_limit_graphon(0.5, 0.25, 0.25), 1.0);
        let part = rescaled_graphon_partial_integral(0.5, 0.5, 2000, 0.5, 0.5, 7).unwrap();
        assert!(part > 0.25 && part < 1.0);
    }
}
