//! The hard-edge graph `{i ~ j : X_i X_j > a_n}` and its clique/follower
//! decomposition.
//!
//! Clique membership is tested as `x * x > a_n` rather than against a
//! rounded square root. Floating-point multiplication is monotone, so two
//! clique values always form an edge and a follower's neighbours are always
//! a prefix of the decreasingly sorted clique, exactly as in the real-number
//! model.

use crate::dist::TailModel;
use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// The weights `X_1, ..., X_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    values: Vec<f64>,
}

impl WeightedSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&x| !(x >= 1.0) || !x.is_finite()) {
            return Err(Error::InvalidInput("sample values must be finite and >= 1"));
        }
        Ok(Self { values })
    }

    pub(crate) fn new_unchecked(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Original indices ordered by decreasing value, ties by index.
    pub fn order_desc(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&i, &j| desc(self.values[i], self.values[j]).then(i.cmp(&j)));
        idx
    }
}

fn desc(a: f64, b: f64) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

/// Graph on the non-isolated vertices, labelled by original 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardGraph {
    pub n_original: usize,
    /// Sorted indices of vertices with degree at least one.
    pub vertices: Vec<usize>,
    /// Sorted pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl HardGraph {
    pub fn from_edges(n_original: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut vertices: Vec<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        Self {
            n_original,
            vertices,
            edges,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Adjacency lists indexed by original label.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_original];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_original];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }
}

fn check_threshold(a_n: f64) -> Result<()> {
    if a_n >= 1.0 && a_n.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "a_n",
            value: a_n,
        })
    }
}

/// Builds the hard-edge graph in `O(n log n + |E| log |E|)`.
pub fn build_hard_graph(sample: &WeightedSample, a_n: f64) -> Result<HardGraph> {
    check_threshold(a_n)?;
    let x = sample.values();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[i].partial_cmp(&x[j]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    let sorted: Vec<f64> = order.iter().map(|&i| x[i]).collect();
    let mut edges = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let xi = x[i];
        let first = sorted.partition_point(|&v| xi * v <= a_n);
        for (q, &j) in order.iter().enumerate().skip(first) {
            if q != pos && i < j {
                edges.push((i, j));
            }
        }
    }
    Ok(HardGraph::from_edges(x.len(), edges))
}

/// Largest sample accepted by [`brute_force_graph`].
pub const BRUTE_FORCE_LIMIT: usize = 10_000;

/// All-pairs construction; the test oracle for [`build_hard_graph`].
pub fn brute_force_graph(sample: &WeightedSample, a_n: f64) -> Result<HardGraph> {
    check_threshold(a_n)?;
    let x = sample.values();
    if x.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force graph",
            size: x.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut edges = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x[i] * x[j] > a_n {
                edges.push((i, j));
            }
        }
    }
    Ok(HardGraph::from_edges(x.len(), edges))
}

/// Clique size and follower group sizes `(K_0; K_1, ..., K_{K_0})`.
///
/// Group `j` (1-based) holds the followers adjacent to exactly the top
/// `K_0 + 1 - j` clique vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct KVector {
    pub k0: u64,
    pub followers: Vec<u64>,
}

impl KVector {
    pub fn new(k0: u64, followers: Vec<u64>) -> Result<Self> {
        if followers.len() as u64 != k0 {
            return Err(Error::InvalidInput("follower vector length must equal k0"));
        }
        Ok(Self { k0, followers })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn follower_total(&self) -> u64 {
        self.followers.iter().sum()
    }

    /// Number of non-isolated vertices. A lone clique vertex without
    /// followers has no edge and is not counted.
    pub fn vertex_count(&self) -> u64 {
        let f = self.follower_total();
        if self.k0 == 1 && f == 0 {
            0
        } else {
            self.k0 + f
        }
    }

    pub fn edge_count(&self) -> u64 {
        edge_count(self)
    }
}

/// `C(k0, 2) + sum_j (k0 + 1 - j) K_j`.
pub fn edge_count(kv: &KVector) -> u64 {
    let k0 = kv.k0;
    let clique = k0 * k0.saturating_sub(1) / 2;
    let links: u64 = kv
        .followers
        .iter()
        .enumerate()
        .map(|(idx, &kj)| (k0 - idx as u64) * kj)
        .sum();
    clique + links
}

/// Clique/follower decomposition of the hard graph of `sample`.
pub fn k_vector(sample: &WeightedSample, a_n: f64) -> Result<KVector> {
    check_threshold(a_n)?;
    let x = sample.values();
    let mut clique: Vec<f64> = x.iter().copied().filter(|&v| v * v > a_n).collect();
    clique.sort_by(|a, b| desc(*a, *b));
    let k0 = clique.len();
    let mut followers = vec![0u64; k0];
    for &z in x.iter().filter(|&&v| v * v <= a_n) {
        // number of clique vertices adjacent to z (a prefix)
        let m = clique.partition_point(|&y| z * y > a_n);
        if m > 0 {
            followers[k0 - m] += 1;
        }
    }
    Ok(KVector {
        k0: k0 as u64,
        followers,
    })
}

/// Canonically labelled graph of a K-vector: clique `0..k0`, then the
/// followers group by group.
pub fn assemble_from_kvector(kv: &KVector) -> HardGraph {
    let k0 = kv.k0 as usize;
    let n = k0 + kv.follower_total() as usize;
    let mut edges = Vec::with_capacity(edge_count(kv) as usize);
    for i in 0..k0 {
        for j in i + 1..k0 {
            edges.push((i, j));
        }
    }
    let mut next = k0;
    for (idx, &kj) in kv.followers.iter().enumerate() {
        let reach = k0 - idx;
        for _ in 0..kj {
            for c in 0..reach {
                edges.push((c, next));
            }
            next += 1;
        }
    }
    HardGraph::from_edges(n, edges)
}

/// Samples the K-vector of an `n`-sample directly, in `O(K_0 log K_0)`.
///
/// `K_0 ~ Binomial(n, tail(sqrt(a_n)))`, the clique values are drawn from the
/// law above `sqrt(a_n)`, and the `n - K_0` follower values fall into the
/// group intervals `(a_n / Y_{K_0+1-j}, a_n / Y_{K_0+2-j}]` with multinomial
/// counts. This has the same law as [`k_vector`] applied to a fresh sample.
pub fn sample_kvector<R: Rng + ?Sized>(
    model: &TailModel,
    n: u64,
    a_n: f64,
    rng: &mut R,
) -> Result<KVector> {
    check_threshold(a_n)?;
    let root = a_n.sqrt();
    let k0 = binomial(n, model.tail(root), rng);
    let mut clique: Vec<f64> = (0..k0).map(|_| model.sample_above(root, rng)).collect();
    clique.sort_by(|a, b| desc(*a, *b));
    let followers = multinomial_groups(model, n - k0, a_n, &clique, rng);
    Ok(KVector { k0, followers })
}

/// Multinomial follower group counts for `m` values below `sqrt(a_n)` given
/// the decreasingly sorted clique values.
pub(crate) fn multinomial_groups<R: Rng + ?Sized>(
    model: &TailModel,
    m: u64,
    a_n: f64,
    clique_desc: &[f64],
    rng: &mut R,
) -> Vec<u64> {
    let k0 = clique_desc.len();
    let root = a_n.sqrt();
    let below = model.cdf(root);
    let mut out = vec![0u64; k0];
    if below <= 0.0 {
        return out;
    }
    let mut remaining = m;
    let mut mass = 1.0f64;
    let mut upper = root;
    for (j, slot) in out.iter_mut().enumerate() {
        if remaining == 0 {
            break;
        }
        // group j+1 lower end: a_n / Y_{k0-j} (1-based decreasing order)
        let lower = a_n / clique_desc[k0 - 1 - j];
        let p = ((model.tail(lower) - model.tail(upper)) / below).max(0.0);
        let cond = if mass > 0.0 { (p / mass).min(1.0) } else { 0.0 };
        let c = binomial(remaining, cond, rng);
        *slot = c;
        remaining -= c;
        mass -= p;
        upper = lower;
    }
    out
}

pub(crate) fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).map(|b| b.sample(rng)).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::sample_iid;
    use crate::rng::replicate_rng;

    fn sample(v: &[f64]) -> WeightedSample {
        WeightedSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn tie_at_threshold_is_not_an_edge() {
        let g = build_hard_graph(&sample(&[10.0, 5.0, 1.2, 1.1]), 12.0).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.vertices, vec![0, 1]);
    }

    #[test]
    fn small_examples() {
        let s = sample(&[10.0, 5.0, 1.3, 1.1]);
        let g = build_hard_graph(&s, 12.0).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (0, 2)]);
        assert_eq!(g.vertices, vec![0, 1, 2]);
        assert_eq!(brute_force_graph(&s, 12.0).unwrap(), g);
        let empty = build_hard_graph(&sample(&[1.0, 1.0, 1.0]), 12.0).unwrap();
        assert!(empty.edges.is_empty() && empty.vertices.is_empty());
        let single = brute_force_graph(&sample(&[50.0]), 12.0).unwrap();
        assert!(single.edges.is_empty());
    }

    #[test]
    fn brute_force_refuses_large_samples() {
        let s = WeightedSample::new(vec![1.0; BRUTE_FORCE_LIMIT + 1]).unwrap();
        assert!(matches!(brute_force_graph(&s, 4.0), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn threshold_below_one_is_rejected() {
        assert!(build_hard_graph(&sample(&[2.0]), 0.5).is_err());
        assert!(WeightedSample::new(vec![0.5]).is_err());
    }

    #[test]
    fn kvector_example() {
        let kv = k_vector(&sample(&[10.0, 5.0, 1.3, 1.1]), 12.0).unwrap();
        assert_eq!(kv, KVector::new(2, vec![0, 1]).unwrap());
        assert_eq!(edge_count(&kv), 2);
        let none = k_vector(&sample(&[2.0, 3.0, 1.0]), 12.0).unwrap();
        assert_eq!(none, KVector::empty());
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(edge_count(&KVector::new(3, vec![2, 0, 1]).unwrap()), 10);
        assert_eq!(edge_count(&KVector::empty()), 0);
        assert_eq!(edge_count(&KVector::new(2, vec![0, 1]).unwrap()), 2);
        assert!(KVector::new(2, vec![1]).is_err());
    }

    #[test]
    fn assemble_examples() {
        let g = assemble_from_kvector(&KVector::new(2, vec![0, 1]).unwrap());
        assert_eq!(g.edges, vec![(0, 1), (0, 2)]);
        assert_eq!(g.vertex_count(), 3);
        let star = assemble_from_kvector(&KVector::new(1, vec![1]).unwrap());
        assert_eq!(star.edges, vec![(0, 1)]);
        let lone = KVector::new(1, vec![0]).unwrap();
        assert_eq!(assemble_from_kvector(&lone).vertex_count(), 0);
        assert_eq!(lone.vertex_count(), 0);
    }

    #[test]
    fn follower_group_reaches_top_segment() {
        let kv = KVector::new(4, vec![1, 2, 0, 3]).unwrap();
        let g = assemble_from_kvector(&kv);
        let adj = g.adjacency();
        let mut next = 4;
        for (idx, &kj) in kv.followers.iter().enumerate() {
            for _ in 0..kj {
                assert_eq!(adj[next], (0..4 - idx).collect::<Vec<_>>());
                next += 1;
            }
        }
    }

    #[test]
    fn kvector_matches_graph_on_random_instances() {
        let m = crate::dist::tail_model_pareto(1.5).unwrap();
        for seed in 0..100 {
            let s = sample_iid(&m, 200, seed).unwrap();
            let a = crate::dist::scaling_a_n(1.5, 1.2, 200).unwrap();
            let g = build_hard_graph(&s, a).unwrap();
            let kv = k_vector(&s, a).unwrap();
            assert_eq!(edge_count(&kv) as usize, g.edge_count(), "seed {seed}");
            assert_eq!(kv.vertex_count() as usize, g.vertex_count(), "seed {seed}");
            assert_eq!(g, brute_force_graph(&s, a).unwrap());
        }
    }

    #[test]
    fn direct_kvector_sampler_has_the_right_mean_edge_count() {
        let m = crate::dist::tail_model_pareto(2.0).unwrap();
        let n = 500u64;
        let a = crate::dist::scaling_a_n(2.0, 1.2, n).unwrap();
        let reps = 4000u64;
        let mut direct = crate::accum::Moments::default();
        let mut full = crate::accum::Moments::default();
        for r in 0..reps {
            let mut rng = replicate_rng(99, r);
            direct.push(sample_kvector(&m, n, a, &mut rng).unwrap().edge_count() as f64);
            let s = sample_iid(&m, n as usize, 10_000 + r).unwrap();
            full.push(k_vector(&s, a).unwrap().edge_count() as f64);
        }
        let exact = (n * (n - 1) / 2) as f64 * m.product_tail(a);
        for est in [&direct, &full] {
            assert!(
                (est.mean - exact).abs() < 4.0 * est.std_error(),
                "mean {} exact {} se {}",
                est.mean,
                exact,
                est.std_error()
            );
        }
    }
}
