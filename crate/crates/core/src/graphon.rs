//! Step graphons: empirical graphons of hard graphs, the rescaled and
//! stretched normalizations, the clique-stretched window, cut norms and an
//! aligned cut distance.

use crate::accum::Moments;
use crate::dist::{scaling_a_n, TailModel};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::hardgraph::{build_hard_graph, HardGraph, WeightedSample};
use crate::rng::{derive_seed, label_key, replicate_rng};
use crate::stats::Estimate;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

/// A `k x k` step function on `[0, side]^2`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphonGrid {
    k: usize,
    side: f64,
    values: Vec<f64>,
}

const SYMMETRY_TOL: f64 = 1e-9;

impl GraphonGrid {
    /// Validates shape, finiteness and symmetry. Signed values are allowed,
    /// since differences of graphons are grids too.
    pub fn new(k: usize, side: f64, values: Vec<f64>) -> Result<Self> {
        if k == 0 || values.len() != k * k {
            return Err(Error::InvalidInput("grid needs k >= 1 and k*k values"));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "side",
                value: side,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("grid values must be finite"));
        }
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (values[i * k + j], values[j * k + i]);
                if (a - b).abs() > SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidInput("grid must be symmetric"));
                }
            }
        }
        Ok(Self { k, side, values })
    }

    pub fn zeros(k: usize, side: f64) -> Result<Self> {
        Self::new(k, side, vec![0.0; k * k])
    }

    pub fn constant(k: usize, side: f64, value: f64) -> Result<Self> {
        Self::new(k, side, vec![value; k * k])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k + j]
    }

    pub fn cell_measure(&self) -> f64 {
        let w = self.side / self.k as f64;
        w * w
    }

    pub fn is_signed(&self) -> bool {
        self.values.iter().any(|&v| v < 0.0)
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.cell_measure()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.abs().powf(p)).sum();
        (s * self.cell_measure()).powf(1.0 / p)
    }

    /// Cell centre coordinates of row/column `i`.
    pub fn centre(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.side / self.k as f64
    }

    /// Same rows and columns permuted by `perm` (new index -> old index).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let k = self.k;
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = self.values[perm[i] * k + perm[j]];
            }
        }
        Self {
            k,
            side: self.side,
            values,
        }
    }

    /// Each cell split into `factor x factor` equal cells.
    pub fn refined(&self, factor: usize) -> Self {
        let k = self.k * factor;
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = self.values[(i / factor) * self.k + j / factor];
            }
        }
        Self {
            k,
            side: self.side,
            values,
        }
    }

    fn difference(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Self {
            k: self.k,
            side: self.side,
            values,
        }
    }
}

/// Vertex order used to lay out an empirical graphon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexOrder {
    /// Decreasing weight, ties by index.
    #[default]
    ByValueDesc,
    ByIndex,
}

/// A grid built from a graph, with construction flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltGraphon {
    pub grid: GraphonGrid,
    /// The graph had no edges.
    pub empty: bool,
    /// The window extends beyond the last vertex.
    pub truncated: bool,
}

/// Rank of every original vertex under `order`.
fn ranks(sample: &WeightedSample, order: VertexOrder) -> Vec<usize> {
    let n = sample.len();
    match order {
        VertexOrder::ByIndex => (0..n).collect(),
        VertexOrder::ByValueDesc => {
            let mut rank = vec![0; n];
            for (r, &i) in sample.order_desc().iter().enumerate() {
                rank[i] = r;
            }
            rank
        }
    }
}

/// Cells (and overlap lengths) covered by `[lo, hi)` on a grid of `k` cells
/// of width `w`.
fn cover(lo: f64, hi: f64, w: f64, k: usize, out: &mut Vec<(usize, f64)>) {
    out.clear();
    if hi <= lo {
        return;
    }
    let first = ((lo / w).floor() as usize).min(k);
    for c in first..k {
        let (c_lo, c_hi) = (c as f64 * w, (c + 1) as f64 * w);
        if c_lo >= hi {
            break;
        }
        let len = hi.min(c_hi) - lo.max(c_lo);
        if len > 0.0 {
            out.push((c, len));
        }
    }
}

/// Averages the adjacency step function, with vertex `r` (by rank)
/// occupying `[r u, (r+1) u)`, over a `k x k` grid on `[0, side]^2`.
fn rasterize(g: &HardGraph, rank: &[usize], unit: f64, side: f64, k: usize) -> Result<GraphonGrid> {
    let w = side / k as f64;
    let mut values = vec![0.0; k * k];
    let mut cu = Vec::new();
    let mut cv = Vec::new();
    for &(u, v) in &g.edges {
        let (ru, rv) = (rank[u] as f64, rank[v] as f64);
        cover(ru * unit, ((ru + 1.0) * unit).min(side), w, k, &mut cu);
        if cu.is_empty() {
            continue;
        }
        cover(rv * unit, ((rv + 1.0) * unit).min(side), w, k, &mut cv);
        for &(a, la) in &cu {
            for &(b, lb) in &cv {
                values[a * k + b] += la * lb;
                values[b * k + a] += la * lb;
            }
        }
    }
    let area = w * w;
    for v in values.iter_mut() {
        *v /= area;
    }
    GraphonGrid::new(k, side, values)
}

/// Empirical graphon on `[0, 1]^2`: vertex `r` occupies `[r/n, (r+1)/n)`.
pub fn empirical_graphon(
    g: &HardGraph,
    sample: &WeightedSample,
    order: VertexOrder,
    k: usize,
) -> Result<BuiltGraphon> {
    let n = g.n_original;
    if sample.len() != n {
        return Err(Error::InvalidInput("sample and graph sizes differ"));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidInput("resolution must satisfy 1 <= k <= n"));
    }
    let grid = rasterize(g, &ranks(sample, order), 1.0 / n as f64, 1.0, k)?;
    Ok(BuiltGraphon {
        grid,
        empty: g.edges.is_empty(),
        truncated: false,
    })
}

/// `W / ||W||_1`.
pub fn rescale_l1(w: &GraphonGrid) -> Result<GraphonGrid> {
    let l1 = w.l1_norm();
    if !(l1 > 0.0) {
        return Err(Error::ZeroGraphon);
    }
    Ok(GraphonGrid {
        k: w.k,
        side: w.side,
        values: w.values.iter().map(|v| v / l1).collect(),
    })
}

/// `W(||W||_1^(1/2) x, ||W||_1^(1/2) y)`: same values on `[0, side / ||W||_1^(1/2)]^2`.
pub fn stretch(w: &GraphonGrid) -> Result<GraphonGrid> {
    let l1 = w.l1_norm();
    if !(l1 > 0.0) {
        return Err(Error::ZeroGraphon);
    }
    Ok(GraphonGrid {
        k: w.k,
        side: w.side / l1.sqrt(),
        values: w.values.clone(),
    })
}

/// `W_n(ek0 x, ek0 y)` on `[0, window]^2`, where `W_n` is the unscaled
/// `{0, 1}` adjacency function on `[0, n]^2` with vertices by decreasing value.
pub fn stretch_by_clique(
    g: &HardGraph,
    sample: &WeightedSample,
    ek0: f64,
    window: f64,
    k: usize,
) -> Result<BuiltGraphon> {
    if !(ek0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "ek0",
            value: ek0,
        });
    }
    if !(window > 0.0) || k == 0 {
        return Err(Error::InvalidInput("window and resolution must be positive"));
    }
    if sample.len() != g.n_original {
        return Err(Error::InvalidInput("sample and graph sizes differ"));
    }
    let grid = rasterize(g, &ranks(sample, VertexOrder::ByValueDesc), 1.0 / ek0, window, k)?;
    Ok(BuiltGraphon {
        grid,
        empty: g.edges.is_empty(),
        truncated: window * ek0 > g.n_original as f64,
    })
}

/// Fraction of cells whose value differs from `target` at the cell centre
/// by more than one half.
pub fn mismatch_fraction(w: &GraphonGrid, target: impl Fn(f64, f64) -> f64) -> f64 {
    let k = w.k;
    let mut bad = 0usize;
    for i in 0..k {
        for j in 0..k {
            if (w.get(i, j) - target(w.centre(i), w.centre(j))).abs() > 0.5 {
                bad += 1;
            }
        }
    }
    bad as f64 / (k * k) as f64
}

/// The limit indicator `1{xy <= 1}`.
pub fn hyperbola_indicator(x: f64, y: f64) -> f64 {
    if x * y <= 1.0 {
        1.0
    } else {
        0.0
    }
}

/// Clique-stretched graphons of independent samples compared with `1{xy <= 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchStudy {
    pub alpha: f64,
    pub gamma: f64,
    pub n: u64,
    pub reps: u64,
    /// `n a_n^(-alpha/2)`.
    pub ek0: f64,
    /// Mean and standard error of the per-sample mismatch fraction.
    pub mismatch: Estimate,
    /// Cell-wise mean of the stretched grids.
    pub mean_grid: GraphonGrid,
    pub mean_grid_mismatch: f64,
    /// The stretched grid of replicate 0.
    pub first: BuiltGraphon,
    /// Some window reached past the last vertex.
    pub truncated: bool,
}

/// Mismatch of [`stretch_by_clique`] over `reps` Pareto samples under the
/// log-power scaling.
#[allow(clippy::too_many_arguments)]
pub fn clique_stretch_mismatch<E: Executor + ?Sized>(
    exec: &E,
    alpha: f64,
    gamma: f64,
    n: u64,
    window: f64,
    k: usize,
    reps: u64,
    seed: u64,
) -> Result<MismatchStudy> {
    if reps == 0 {
        return Err(Error::InvalidParameter { name: "reps", value: 0.0 });
    }
    let model = TailModel::pareto(alpha)?;
    let a = scaling_a_n(alpha, gamma, n)?;
    let ek0 = n as f64 * a.powf(-alpha / 2.0);
    let stream = derive_seed(seed, label_key("clique-stretch"));
    let one = |r: u64| -> Result<BuiltGraphon> {
        let mut rng = replicate_rng(stream, r);
        let s = WeightedSample::new((0..n).map(|_| model.sample(&mut rng)).collect())?;
        let g = build_hard_graph(&s, a)?;
        stretch_by_clique(&g, &s, ek0, window, k)
    };
    let parts = exec.chunks(reps, |range| -> Result<(Moments, Vec<f64>, bool)> {
        let mut m = Moments::default();
        let mut sum = vec![0.0; k * k];
        let mut truncated = false;
        for r in range {
            let w = one(r)?;
            m.push(mismatch_fraction(&w.grid, hyperbola_indicator));
            for (acc, v) in sum.iter_mut().zip(w.grid.values()) {
                *acc += v;
            }
            truncated |= w.truncated;
        }
        Ok((m, sum, truncated))
    });
    let mut moments = Moments::default();
    let mut sum = vec![0.0; k * k];
    let mut truncated = false;
    for part in parts {
        let (m, s, t) = part?;
        moments.merge(&m);
        for (acc, v) in sum.iter_mut().zip(s) {
            *acc += v;
        }
        truncated |= t;
    }
    for v in sum.iter_mut() {
        *v /= reps as f64;
    }
    let mean_grid = GraphonGrid::new(k, window, sum)?;
    Ok(MismatchStudy {
        alpha,
        gamma,
        n,
        reps,
        ek0,
        mismatch: Estimate {
            mean: moments.mean,
            se: moments.std_error(),
        },
        mean_grid_mismatch: mismatch_fraction(&mean_grid, hyperbola_indicator),
        mean_grid,
        first: one(0)?,
        truncated,
    })
}

/// Largest resolution accepted by [`cut_norm_exact`].
pub const EXACT_CUT_LIMIT: usize = 16;

/// `max_{S,T} |sum_{S x T} W| * cell measure`, by enumerating row sets in
/// Gray-code order; the best column set for fixed rows takes all positive
/// (or all negative) column sums.
pub fn cut_norm_exact(w: &GraphonGrid) -> Result<f64> {
    let k = w.k;
    if k > EXACT_CUT_LIMIT {
        return Err(Error::TooLarge {
            what: "exact cut norm (use the heuristic)",
            size: k,
            limit: EXACT_CUT_LIMIT,
        });
    }
    let mut col = vec![0.0f64; k];
    let mut best = 0.0f64;
    for step in 1u32..(1u32 << k) {
        // Gray code: flip the row at the lowest set bit of `step`
        let row = step.trailing_zeros() as usize;
        let adding = ((step ^ (step >> 1)) >> row) & 1 == 1;
        let sign = if adding { 1.0 } else { -1.0 };
        for (j, c) in col.iter_mut().enumerate() {
            *c += sign * w.values[row * k + j];
        }
        best = best.max(best_columns(&col));
    }
    Ok(best * w.cell_measure())
}

fn best_columns(col: &[f64]) -> f64 {
    let (pos, neg) = col.iter().fold((0.0, 0.0), |(p, n), &c| {
        if c > 0.0 {
            (p + c, n)
        } else {
            (p, n - c)
        }
    });
    f64::max(pos, neg)
}

/// Result of the local search, with the best value after each restart.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSearch {
    pub value: f64,
    pub trace: Vec<f64>,
}

/// Lower bound on the cut norm by alternating maximization from random
/// row sets: the best column set for the rows, then the best row set for
/// the columns, until neither improves. Both signs are searched.
pub fn cut_norm_heuristic(w: &GraphonGrid, restarts: usize, seed: u64) -> CutSearch {
    let k = w.k;
    let mut best = 0.0f64;
    let mut trace = Vec::with_capacity(restarts);
    for r in 0..restarts.max(1) {
        let mut rng = replicate_rng(seed, r as u64);
        let start: Vec<bool> = (0..k).map(|_| rng.random::<bool>()).collect();
        for sign in [1.0, -1.0] {
            best = best.max(ascend(w, &start, sign));
        }
        trace.push(best * w.cell_measure());
    }
    CutSearch {
        value: best * w.cell_measure(),
        trace,
    }
}

/// Alternating ascent of `sign * sum_{S x T} W` from row set `rows`.
fn ascend(w: &GraphonGrid, rows: &[bool], sign: f64) -> f64 {
    let k = w.k;
    let mut s = rows.to_vec();
    let mut t = vec![false; k];
    let mut current = f64::NEG_INFINITY;
    loop {
        // columns given rows
        let mut total = 0.0;
        for j in 0..k {
            let c: f64 = (0..k).filter(|&i| s[i]).map(|i| sign * w.values[i * k + j]).sum();
            t[j] = c > 0.0;
            if t[j] {
                total += c;
            }
        }
        // rows given columns
        let mut next = 0.0;
        for i in 0..k {
            let r: f64 = (0..k).filter(|&j| t[j]).map(|j| sign * w.values[i * k + j]).sum();
            s[i] = r > 0.0;
            if s[i] {
                next += r;
            }
        }
        let value = total.max(next);
        if value <= current + 1e-15 * value.abs().max(1.0) {
            return current.max(value);
        }
        current = value;
    }
}

/// Largest common refinement accepted by [`aligned_cut_distance`].
pub const ALIGN_LIMIT: usize = 4096;
const ALIGN_RESTARTS: usize = 32;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rows and columns ordered by decreasing degree, ties by index.
fn degree_aligned(w: &GraphonGrid) -> GraphonGrid {
    let k = w.k;
    let deg: Vec<f64> = (0..k).map(|i| w.values[i * k..(i + 1) * k].iter().sum()).collect();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.sort_by(|&a, &b| deg[b].total_cmp(&deg[a]).then(a.cmp(&b)));
    w.permuted(&perm)
}

/// Cut norm of `w1 - w2` after degree-sorted alignment on the common
/// refinement of both resolutions. No infimum over relabellings is taken,
/// so this bounds the cut distance from above; above
/// [`EXACT_CUT_LIMIT`] the cut norm itself comes from the local search.
pub fn aligned_cut_distance(w1: &GraphonGrid, w2: &GraphonGrid) -> Result<f64> {
    if (w1.side - w2.side).abs() > 1e-12 * w1.side.max(w2.side) {
        return Err(Error::SideMismatch(w1.side, w2.side));
    }
    let l = w1.k / gcd(w1.k, w2.k) * w2.k;
    if l > ALIGN_LIMIT {
        return Err(Error::TooLarge {
            what: "common refinement",
            size: l,
            limit: ALIGN_LIMIT,
        });
    }
    let a = degree_aligned(w1).refined(l / w1.k);
    let b = degree_aligned(w2).refined(l / w2.k);
    let diff = a.difference(&b);
    if l <= EXACT_CUT_LIMIT {
        cut_norm_exact(&diff)
    } else {
        Ok(cut_norm_heuristic(&diff, ALIGN_RESTARTS, 0).value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardgraph::build_hard_graph;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_grid(k: usize, seed: u64, signed: bool) -> GraphonGrid {
        let mut rng = replicate_rng(seed, 0);
        let mut v = vec![0.0; k * k];
        for i in 0..k {
            for j in i..k {
                let x: f64 = rng.random();
                let x = if signed { 2.0 * x - 1.0 } else { x };
                v[i * k + j] = x;
                v[j * k + i] = x;
            }
        }
        GraphonGrid::new(k, 1.0, v).unwrap()
    }

    #[test]
    fn empirical_examples() {
        let s = WeightedSample::new(vec![5.0, 5.0]).unwrap();
        let g = build_hard_graph(&s, 10.0).unwrap();
        let w = empirical_graphon(&g, &s, VertexOrder::ByIndex, 2).unwrap();
        assert_eq!(w.grid.values(), &[0.0, 1.0, 1.0, 0.0]);
        let s3 = WeightedSample::new(vec![5.0, 5.0, 5.0]).unwrap();
        let k3 = build_hard_graph(&s3, 10.0).unwrap();
        let w3 = empirical_graphon(&k3, &s3, VertexOrder::ByValueDesc, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 1.0 };
                assert!((w3.grid.get(i, j) - want).abs() < 1e-12);
            }
        }
        let none = build_hard_graph(&s3, 100.0).unwrap();
        let z = empirical_graphon(&none, &s3, VertexOrder::ByIndex, 3).unwrap();
        assert!(z.empty && z.grid.l1_norm() == 0.0);
        assert!(empirical_graphon(&none, &s3, VertexOrder::ByIndex, 4).is_err());
    }

    #[test]
    fn l1_counts_edges_at_full_resolution() {
        let m = crate::dist::tail_model_pareto(1.5).unwrap();
        for seed in 0..20 {
            let s = crate::dist::sample_iid(&m, 60, seed).unwrap();
            let g = build_hard_graph(&s, 20.0).unwrap();
            let w = empirical_graphon(&g, &s, VertexOrder::ByIndex, 60).unwrap();
            let expect = 2.0 * g.edge_count() as f64 / 3600.0;
            assert!((w.grid.l1_norm() - expect).abs() < 1e-12);
            // coarser grids keep the mass
            let c = empirical_graphon(&g, &s, VertexOrder::ByValueDesc, 7).unwrap();
            assert!((c.grid.l1_norm() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn rescale_and_stretch() {
        let half = GraphonGrid::constant(3, 1.0, 0.5).unwrap();
        let r = rescale_l1(&half).unwrap();
        assert!(r.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
        assert!((rescale_l1(&r).unwrap().l1_norm() - 1.0).abs() < 1e-15);
        let quarter = GraphonGrid::constant(2, 1.0, 0.25).unwrap();
        let s = stretch(&quarter).unwrap();
        assert!((s.side() - 2.0).abs() < 1e-15);
        assert!((s.l1_norm() - 1.0).abs() < 1e-15);
        let one = GraphonGrid::constant(2, 1.0, 1.0).unwrap();
        assert_eq!(stretch(&one).unwrap(), one);
        let zero = GraphonGrid::zeros(2, 1.0).unwrap();
        assert_eq!(rescale_l1(&zero), Err(Error::ZeroGraphon));
        assert_eq!(stretch(&zero), Err(Error::ZeroGraphon));
    }

    #[test]
    fn asymmetric_grids_are_rejected() {
        assert!(GraphonGrid::new(2, 1.0, vec![0.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn cut_norm_examples() {
        let w = GraphonGrid::new(2, 1.0, vec![0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!((cut_norm_exact(&w).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(cut_norm_exact(&GraphonGrid::zeros(4, 1.0).unwrap()).unwrap(), 0.0);
        let one = GraphonGrid::constant(5, 1.0, 1.0).unwrap();
        assert!((cut_norm_exact(&one).unwrap() - 1.0).abs() < 1e-12);
        assert!(cut_norm_exact(&GraphonGrid::zeros(17, 1.0).unwrap()).is_err());
        assert_eq!(cut_norm_heuristic(&GraphonGrid::zeros(5, 1.0).unwrap(), 4, 0).value, 0.0);
    }

    #[test]
    fn gray_code_matches_plain_enumeration() {
        for seed in 0..10 {
            let w = random_grid(6, seed, true);
            let k = 6;
            let mut best = 0.0f64;
            for s in 0u32..64 {
                for t in 0u32..64 {
                    let mut sum = 0.0;
                    for i in 0..k {
                        for j in 0..k {
                            if s >> i & 1 == 1 && t >> j & 1 == 1 {
                                sum += w.get(i, j);
                            }
                        }
                    }
                    best = best.max(f64::abs(sum));
                }
            }
            let exact = cut_norm_exact(&w).unwrap();
            assert!((exact - best * w.cell_measure()).abs() < 1e-12);
        }
    }

    #[test]
    fn heuristic_trace_is_monotone() {
        let w = random_grid(10, 3, true);
        let s = cut_norm_heuristic(&w, 16, 1);
        assert!(s.trace.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(*s.trace.last().unwrap(), s.value);
        assert!(s.value <= cut_norm_exact(&w).unwrap() + 1e-12);
    }

    #[test]
    fn aligned_distance_properties() {
        let a = random_grid(4, 1, false);
        let b = random_grid(8, 2, false);
        assert_eq!(aligned_cut_distance(&a, &a).unwrap(), 0.0);
        let d1 = aligned_cut_distance(&a, &b).unwrap();
        let d2 = aligned_cut_distance(&b, &a).unwrap();
        assert!((d1 - d2).abs() < 1e-12);
        let c = GraphonGrid::zeros(4, 2.0).unwrap();
        assert!(matches!(aligned_cut_distance(&a, &c), Err(Error::SideMismatch(..))));
    }

    #[test]
    fn aligned_distance_triangle_inequality() {
        for t in 0..100 {
            let a = random_grid(4, 3 * t, false);
            let b = random_grid(4, 3 * t + 1, false);
            let c = random_grid(8, 3 * t + 2, false);
            // the three pairwise distances share one alignment per grid
            let ab = aligned_cut_distance(&a, &b).unwrap();
            let bc = aligned_cut_distance(&b, &c).unwrap();
            let ac = aligned_cut_distance(&a, &c).unwrap();
            assert!(ac <= ab + bc + 1e-12, "{ac} > {ab} + {bc}");
        }
    }

    #[test]
    fn clique_stretch_window() {
        let m = crate::dist::tail_model_pareto(1.5).unwrap();
        let s = crate::dist::sample_iid(&m, 1000, 1).unwrap();
        let a = crate::dist::scaling_a_n(1.5, 1.5, 1000).unwrap();
        let g = build_hard_graph(&s, a).unwrap();
        let ek0 = 1000.0 * a.powf(-0.75);
        let w = stretch_by_clique(&g, &s, ek0, 3.0, 30).unwrap();
        assert_eq!(w.grid.side(), 3.0);
        assert!(!w.truncated);
        let t = stretch_by_clique(&g, &s, ek0, 1e4, 30).unwrap();
        assert!(t.truncated);
        assert_eq!(hyperbola_indicator(0.5, 2.0), 1.0);
        assert_eq!(hyperbola_indicator(2.0, 2.0), 0.0);
    }

    proptest! {
        #[test]
        fn cut_norm_is_at_most_l1(seed in 0u64..1000, k in 1usize..9) {
            let w = random_grid(k, seed, true);
            prop_assert!(cut_norm_exact(&w).unwrap() <= w.l1_norm() + 1e-12);
        }

        #[test]
        fn cut_norm_is_permutation_invariant(seed in 0u64..1000, k in 2usize..9, shift in 0usize..8) {
            let w = random_grid(k, seed, true);
            let perm: Vec<usize> = (0..k).map(|i| (i * 5 + shift) % k).collect();
            let mut seen = perm.clone();
            seen.sort_unstable();
            seen.dedup();
            prop_assume!(seen.len() == k);
            let a = cut_norm_exact(&w).unwrap();
            let b = cut_norm_exact(&w.permuted(&perm)).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn normalizations_have_unit_l1(seed in 0u64..1000, k in 1usize..9, scale in 0.01f64..10.0) {
            let w = random_grid(k, seed, false);
            let w = GraphonGrid::new(k, scale, w.values().to_vec()).unwrap();
            prop_assume!(w.l1_norm() > 0.0);
            prop_assert!((rescale_l1(&w).unwrap().l1_norm() - 1.0).abs() < 1e-12);
            prop_assert!((stretch(&w).unwrap().l1_norm() - 1.0).abs() < 1e-12);
        }
    }
}
