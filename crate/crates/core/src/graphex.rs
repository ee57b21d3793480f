//! The critical-regime limit graph built from a Poisson point process with
//! intensity `dt x alpha x^(-alpha-1) dx` on `(0, inf) x [1, inf)` and the
//! graphon `W(x, y) = 1{xy > x0}`.
//!
//! Only the points that can carry an edge are ever drawn: the clique points
//! above `sqrt(x0)` and, per follower interval, a Poisson number of points
//! between the clamped interval ends.

use crate::dist::{ScalingSequence, TailModel};
use crate::error::{positive, Error, Result};
use crate::exec::Executor;
use crate::hardgraph::{binomial, KVector};
use crate::rng::{derive_seed, label_key, open_unit, replicate_rng};
use crate::stats::Estimate;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphexGraph {
    pub t: f64,
    pub x0: f64,
    pub alpha: f64,
    /// Strictly decreasing, all above `sqrt(x0)`.
    pub clique_values: Vec<f64>,
    pub clique_times: Vec<f64>,
    /// `(K_1, ..., K_{K_0})`.
    pub follower_counts: Vec<u64>,
    pub follower_values: Vec<Vec<f64>>,
    pub follower_times: Vec<Vec<f64>>,
}

impl GraphexGraph {
    pub fn k0(&self) -> usize {
        self.clique_values.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.to_kvector().edge_count()
    }

    pub fn to_kvector(&self) -> KVector {
        to_kvector(self)
    }
}

pub fn to_kvector(g: &GraphexGraph) -> KVector {
    KVector {
        k0: g.k0() as u64,
        followers: g.follower_counts.clone(),
    }
}

fn check_params(t: f64, x0: f64, alpha: f64) -> Result<()> {
    positive("t", t)?;
    positive("alpha", alpha)?;
    if !(x0 > 1.0) || !x0.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x0",
            value: x0,
        });
    }
    Ok(())
}

pub(crate) fn poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if !(lambda > 0.0) {
        return 0;
    }
    Poisson::new(lambda).map(|p| p.sample(rng) as u64).unwrap_or(0)
}

/// Follower interval ends `(L_j, R_j]` for `j = 1..=K_0`, before clamping.
fn interval_ends(clique_desc: &[f64], x0: f64) -> Vec<(f64, f64)> {
    let k0 = clique_desc.len();
    let mut upper = x0.sqrt();
    (0..k0)
        .map(|j| {
            let lower = x0 / clique_desc[k0 - 1 - j];
            let ends = (lower, upper);
            upper = lower;
            ends
        })
        .collect()
}

fn clamped_mass(l: f64, r: f64, alpha: f64) -> f64 {
    (l.max(1.0).powf(-alpha) - r.max(1.0).powf(-alpha)).max(0.0)
}

/// Poisson intensities of the follower groups.
pub fn interval_intensities(clique_values: &[f64], t: f64, x0: f64, alpha: f64) -> Result<Vec<f64>> {
    check_params(t, x0, alpha)?;
    let root = x0.sqrt();
    if clique_values.iter().any(|&v| !(v > root)) {
        return Err(Error::InvalidInput("clique values must exceed sqrt(x0)"));
    }
    if clique_values.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidInput("clique values must be strictly decreasing"));
    }
    Ok(interval_ends(clique_values, x0)
        .into_iter()
        .map(|(l, r)| t * clamped_mass(l, r, alpha))
        .collect())
}

/// Samples the limit graph at horizon `t`.
pub fn sample_graphex(t: f64, x0: f64, alpha: f64, seed: u64) -> Result<GraphexGraph> {
    sample_graphex_with(t, x0, alpha, &mut replicate_rng(seed, 0))
}

pub fn sample_graphex_with<R: Rng + ?Sized>(
    t: f64,
    x0: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<GraphexGraph> {
    check_params(t, x0, alpha)?;
    let root = x0.sqrt();
    let k0 = poisson(t * root.powf(-alpha), rng) as usize;
    let mut clique_values = Vec::with_capacity(k0);
    loop {
        clique_values.clear();
        clique_values.extend((0..k0).map(|_| root * open_unit(rng).powf(-1.0 / alpha)));
        clique_values.sort_by(|a, b| b.total_cmp(a));
        if clique_values.windows(2).all(|w| w[0] > w[1]) {
            break;
        }
    }
    let clique_times = (0..k0).map(|_| t * open_unit(rng)).collect();
    let mut follower_counts = Vec::with_capacity(k0);
    let mut follower_values = Vec::with_capacity(k0);
    let mut follower_times = Vec::with_capacity(k0);
    for (l, r) in interval_ends(&clique_values, x0) {
        let (lo, hi) = (l.max(1.0), r.max(1.0));
        let count = poisson(t * clamped_mass(l, r, alpha), rng);
        let (tl, th) = (lo.powf(-alpha), hi.powf(-alpha));
        let values: Vec<f64> = (0..count)
            .map(|_| {
                let u = th + (tl - th) * open_unit(rng);
                u.powf(-1.0 / alpha).clamp(lo, hi)
            })
            .collect();
        let times: Vec<f64> = (0..count).map(|_| t * open_unit(rng)).collect();
        follower_counts.push(count);
        follower_values.push(values);
        follower_times.push(times);
    }
    Ok(GraphexGraph {
        t,
        x0,
        alpha,
        clique_values,
        clique_times,
        follower_counts,
        follower_values,
        follower_times,
    })
}

/// Restriction to the points with time at most `s`, with follower groups
/// recomputed against the surviving clique.
pub fn nested_subgraph(g: &GraphexGraph, s: f64) -> Result<GraphexGraph> {
    if !(0.0..=g.t).contains(&s) {
        return Err(Error::OutOfRange { name: "s", value: s });
    }
    let (clique_values, clique_times): (Vec<f64>, Vec<f64>) = g
        .clique_values
        .iter()
        .zip(&g.clique_times)
        .filter(|(_, &time)| time <= s)
        .map(|(&v, &time)| (v, time))
        .unzip();
    let k0 = clique_values.len();
    let mut follower_values = vec![Vec::new(); k0];
    let mut follower_times = vec![Vec::new(); k0];
    for (vals, times) in g.follower_values.iter().zip(&g.follower_times) {
        for (&z, &time) in vals.iter().zip(times) {
            if time > s {
                continue;
            }
            let m = clique_values.partition_point(|&y| z * y > g.x0);
            if m > 0 {
                follower_values[k0 - m].push(z);
                follower_times[k0 - m].push(time);
            }
        }
    }
    let follower_counts = follower_values.iter().map(|v| v.len() as u64).collect();
    Ok(GraphexGraph {
        t: s,
        x0: g.x0,
        alpha: g.alpha,
        clique_values,
        clique_times,
        follower_counts,
        follower_values,
        follower_times,
    })
}

/// `P(N = k)` for `N ~ Poisson(lambda)`.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    let log_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    (k as f64 * lambda.ln() - lambda - log_fact).exp()
}

/// Empirical clique-size frequency against its Poisson limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmfPoint {
    pub k: u64,
    pub estimate: Estimate,
    pub poisson: f64,
}

fn tabulate<E, F>(exec: &E, kmax: u64, reps: u64, lambda: f64, draw: F) -> Vec<PmfPoint>
where
    E: Executor + ?Sized,
    F: Fn(u64) -> u64 + Sync + Send,
{
    let width = kmax as usize + 1;
    let mut counts = vec![0u64; width];
    for part in exec.chunks(reps, |range| {
        let mut c = vec![0u64; width];
        for r in range {
            let k = draw(r);
            if k <= kmax {
                c[k as usize] += 1;
            }
        }
        c
    }) {
        for (total, c) in counts.iter_mut().zip(part) {
            *total += c;
        }
    }
    let nr = reps.max(1) as f64;
    counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let q = c as f64 / nr;
            PmfPoint {
                k: k as u64,
                estimate: Estimate {
                    mean: q,
                    se: (q * (1.0 - q) / nr).sqrt(),
                },
                poisson: poisson_pmf(lambda, k as u64),
            }
        })
        .collect()
}

/// Frequencies of `K_{n,0}` at threshold `x0 n^(2/alpha)` for `k = 0..=kmax`.
/// Each replicate is one `Binomial(n, tail(sqrt(x0 a_n)))` draw.
pub fn critical_clique_pmf<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    x0: f64,
    n: u64,
    kmax: u64,
    reps: u64,
    seed: u64,
) -> Result<Vec<PmfPoint>> {
    check_params(1.0, x0, alpha)?;
    let model = TailModel::pareto(alpha)?;
    let a = x0 * ScalingSequence::critical(alpha).a_n(n)?;
    let p = model.tail(a.sqrt());
    let stream = derive_seed(seed, label_key("critical-clique"));
    Ok(tabulate(exec, kmax, reps, x0.powf(-alpha / 2.0), |r| {
        binomial(n, p, &mut replicate_rng(stream, r))
    }))
}

/// Frequencies of `K_0` in the limit graph at horizon `t`.
pub fn graphex_clique_pmf<E: Executor + ?Sized>(
    exec: &E,
    t: f64,
    x0: f64,
    alpha: f64,
    kmax: u64,
    reps: u64,
    seed: u64,
) -> Result<Vec<PmfPoint>> {
    check_params(t, x0, alpha)?;
    let stream = derive_seed(seed, label_key("graphex-clique"));
    Ok(tabulate(exec, kmax, reps, t * x0.powf(-alpha / 2.0), |r| {
        sample_graphex_with(t, x0, alpha, &mut replicate_rng(stream, r))
            .map(|g| g.k0() as u64)
            .unwrap_or(0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accum::Moments;

    #[test]
    fn poisson_pmf_values() {
        assert!((poisson_pmf(0.25, 0) - (-0.25f64).exp()).abs() < 1e-15);
        assert!((poisson_pmf(0.25, 2) - 0.03125 * (-0.25f64).exp()).abs() < 1e-15);
        let total: f64 = (0..40).map(|k| poisson_pmf(3.0, k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn both_clique_laws_approach_the_poisson_limit() {
        use crate::exec::Serial;
        let discrete = critical_clique_pmf(&Serial, 2.0, 4.0, 100_000, 3, 20_000, 1).unwrap();
        let limit = graphex_clique_pmf(&Serial, 1.0, 4.0, 2.0, 3, 20_000, 2).unwrap();
        for p in discrete.iter().chain(&limit) {
            assert!((p.estimate.mean - p.poisson).abs() < 4.0 * p.estimate.se.max(1e-4), "{p:?}");
        }
    }

    #[test]
    fn intensities_example() {
        let lam = interval_intensities(&[4.0, 3.0], 1.0, 4.0, 1.0).unwrap();
        assert!((lam[0] - 0.25).abs() < 1e-15);
        assert!((lam[1] - 0.25).abs() < 1e-15);
        let below = interval_intensities(&[100.0, 90.0, 80.0], 1.0, 4.0, 1.0).unwrap();
        assert!((below[0] - 0.5).abs() < 1e-15);
        assert_eq!(&below[1..], &[0.0, 0.0]);
        assert!(interval_intensities(&[3.0, 4.0], 1.0, 4.0, 1.0).is_err());
        assert!(interval_intensities(&[1.5], 1.0, 4.0, 1.0).is_err());
    }

    #[test]
    fn intensities_telescope() {
        let mut rng = replicate_rng(5, 0);
        for _ in 0..200 {
            let g = sample_graphex_with(3.0, 6.0, 1.3, &mut rng).unwrap();
            if g.k0() == 0 {
                continue;
            }
            let lam = interval_intensities(&g.clique_values, 3.0, 6.0, 1.3).unwrap();
            let total: f64 = lam.iter().sum();
            let expect = 3.0 * ((6.0 / g.clique_values[0]).max(1.0).powf(-1.3) - 6.0f64.powf(-0.65));
            assert!((total - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn clique_size_has_poisson_mean() {
        let (t, x0, alpha) = (2.0f64, 4.0f64, 2.0f64);
        let mean = t * x0.powf(-alpha / 2.0);
        assert!((mean - 0.5f64).abs() < 1e-15);
        let mut m = Moments::default();
        for r in 0..100_000 {
            let g = sample_graphex_with(t, x0, alpha, &mut replicate_rng(17, r)).unwrap();
            m.push(g.k0() as f64);
        }
        assert!((m.mean - mean).abs() < 3.0 * m.std_error());
    }

    #[test]
    fn huge_threshold_gives_empty_graph() {
        let g = sample_graphex(1.0, 1e300, 2.0, 3).unwrap();
        assert_eq!(g.to_kvector(), KVector::empty());
    }

    #[test]
    fn parameters_are_validated() {
        assert!(sample_graphex(1.0, 1.0, 2.0, 0).is_err());
        assert!(sample_graphex(0.0, 2.0, 2.0, 0).is_err());
        assert!(sample_graphex(1.0, 2.0, -1.0, 0).is_err());
    }

    #[test]
    fn nested_endpoints_and_monotonicity() {
        for r in 0..1000 {
            let g = sample_graphex_with(5.0, 2.0, 1.0, &mut replicate_rng(23, r)).unwrap();
            assert_eq!(nested_subgraph(&g, 0.0).unwrap().to_kvector(), KVector::empty());
            let full = nested_subgraph(&g, 5.0).unwrap();
            assert_eq!(full.to_kvector(), g.to_kvector());
            let mut prev = 0;
            for s in [0.5, 1.0, 2.0, 3.5, 5.0] {
                let e = nested_subgraph(&g, s).unwrap().edge_count();
                assert!(e >= prev);
                prev = e;
            }
        }
        let g = sample_graphex(1.0, 2.0, 1.0, 0).unwrap();
        assert!(nested_subgraph(&g, 1.5).is_err());
    }

    #[test]
    fn nested_restriction_has_the_law_of_a_fresh_sample() {
        // mean edge count at horizon 1 via restriction from horizon 3
        let reps = 40_000;
        let mut restricted = Moments::default();
        let mut fresh = Moments::default();
        for r in 0..reps {
            let g = sample_graphex_with(3.0, 3.0, 1.2, &mut replicate_rng(41, r)).unwrap();
            restricted.push(nested_subgraph(&g, 1.0).unwrap().edge_count() as f64);
            let h = sample_graphex_with(1.0, 3.0, 1.2, &mut replicate_rng(43, r)).unwrap();
            fresh.push(h.edge_count() as f64);
        }
        let se = (restricted.std_error().powi(2) + fresh.std_error().powi(2)).sqrt();
        assert!((restricted.mean - fresh.mean).abs() < 4.0 * se);
    }

    #[test]
    fn follower_values_sit_in_their_intervals() {
        let mut rng = replicate_rng(8, 0);
        for _ in 0..300 {
            let g = sample_graphex_with(10.0, 5.0, 0.8, &mut rng).unwrap();
            let k0 = g.k0();
            for (j, vals) in g.follower_values.iter().enumerate() {
                for &z in vals {
                    let m = g.clique_values.partition_point(|&y| z * y > g.x0);
                    assert_eq!(k0 - m, j);
                }
            }
        }
    }
}
