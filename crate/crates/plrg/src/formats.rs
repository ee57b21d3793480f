//! Plain-text formats.
//!
//! * Edge list: a header `n_original m`, then `m` lines `i j` with 0-based
//!   indices.
//! * K-vector: one line `k0 K1 ... Kk0`.
//! * Grid: a header `k side`, then `k` lines of `k` space-separated values.
//! * Fluctuation CSV: `x,y,emp_cov,target_cov,n,reps`, one row per grid pair.

use plrg_core::graphon::GraphonGrid;
use plrg_core::hardgraph::{HardGraph, KVector};
use plrg_core::height::FluctuationSummary;
use serde::Serialize;
use std::io::{BufRead, Write};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] plrg_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with their 1-based numbers.
fn lines<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, String), FormatError>> {
    r.lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(FormatError::from))
        .filter(|l| !matches!(l, Ok((_, s)) if s.trim().is_empty()))
}

fn fields<T: FromStr>(line: usize, text: &str) -> Result<Vec<T>, FormatError> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad token {t:?}"))))
        .collect()
}

pub fn write_edge_list<W: Write>(mut w: W, n_original: usize, edges: &[(usize, usize)]) -> std::io::Result<()> {
    writeln!(w, "{} {}", n_original, edges.len())?;
    for &(i, j) in edges {
        writeln!(w, "{i} {j}")?;
    }
    Ok(())
}

pub fn write_graph<W: Write>(w: W, g: &HardGraph) -> std::io::Result<()> {
    write_edge_list(w, g.n_original, &g.edges)
}

pub fn read_graph<R: BufRead>(r: R) -> Result<HardGraph, FormatError> {
    let mut it = lines(r);
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "missing header"))??;
    let head: Vec<usize> = fields(hl, &header)?;
    let [n, m] = head[..] else {
        return Err(parse_err(hl, "header must be `n_original m`"));
    };
    let mut edges = Vec::with_capacity(m);
    for item in it {
        let (ln, text) = item?;
        let pair: Vec<usize> = fields(ln, &text)?;
        let [i, j] = pair[..] else {
            return Err(parse_err(ln, "edge must be `i j`"));
        };
        if i >= n || j >= n || i == j {
            return Err(parse_err(ln, format!("invalid edge {i} {j} for n = {n}")));
        }
        edges.push((i, j));
    }
    if edges.len() != m {
        return Err(parse_err(0, format!("header promises {m} edges, found {}", edges.len())));
    }
    Ok(HardGraph::from_edges(n, edges))
}

pub fn write_kvector<W: Write>(mut w: W, kv: &KVector) -> std::io::Result<()> {
    let mut line = kv.k0.to_string();
    for k in &kv.followers {
        line.push(' ');
        line.push_str(&k.to_string());
    }
    writeln!(w, "{line}")
}

pub fn read_kvector<R: BufRead>(r: R) -> Result<KVector, FormatError> {
    let (ln, text) = lines(r).next().ok_or_else(|| parse_err(1, "empty input"))??;
    let v: Vec<u64> = fields(ln, &text)?;
    let (&k0, followers) = v.split_first().ok_or_else(|| parse_err(ln, "empty K-vector"))?;
    Ok(KVector::new(k0, followers.to_vec())?)
}

pub fn write_grid<W: Write>(mut w: W, g: &GraphonGrid) -> std::io::Result<()> {
    writeln!(w, "{} {}", g.k(), g.side())?;
    for row in g.values().chunks(g.k()) {
        let text: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(w, "{}", text.join(" "))?;
    }
    Ok(())
}

/// Reads a grid; asymmetric matrices are rejected.
pub fn read_grid<R: BufRead>(r: R) -> Result<GraphonGrid, FormatError> {
    let mut it = lines(r);
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "missing header"))??;
    let mut parts = header.split_whitespace();
    let (Some(k), Some(side), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(parse_err(hl, "header must be `k side`"));
    };
    let k: usize = k.parse().map_err(|_| parse_err(hl, "bad k"))?;
    let side: f64 = side.parse().map_err(|_| parse_err(hl, "bad side"))?;
    let mut values = Vec::with_capacity(k * k);
    for item in it {
        let (ln, text) = item?;
        let row: Vec<f64> = fields(ln, &text)?;
        if row.len() != k {
            return Err(parse_err(ln, format!("expected {k} values, found {}", row.len())));
        }
        values.extend(row);
    }
    if values.len() != k * k {
        return Err(parse_err(0, format!("expected {k} rows")));
    }
    Ok(GraphonGrid::new(k, side, values)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct CovarianceRow {
    pub x: f64,
    pub y: f64,
    pub emp_cov: f64,
    pub target_cov: f64,
    pub n: u64,
    pub reps: u64,
}

pub fn covariance_rows(s: &FluctuationSummary) -> Vec<CovarianceRow> {
    let g = &s.x_grid;
    let d = g.len();
    let mut rows = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            rows.push(CovarianceRow {
                x: g[i],
                y: g[j],
                emp_cov: s.emp_cov[i * d + j],
                target_cov: s.target_cov[i * d + j],
                n: s.n,
                reps: s.reps,
            });
        }
    }
    rows
}

pub fn write_fluctuation_csv<W: Write>(w: W, s: &FluctuationSummary) -> Result<(), FormatError> {
    let mut out = csv::Writer::from_writer(w);
    for row in covariance_rows(s) {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use plrg_core::dist::sample_iid;
    use plrg_core::hardgraph::{build_hard_graph, k_vector};
    use plrg_core::TailModel;

    #[test]
    fn graph_round_trip() {
        let s = sample_iid(&TailModel::pareto(1.5).unwrap(), 300, 4).unwrap();
        let g = build_hard_graph(&s, 50.0).unwrap();
        let mut buf = Vec::new();
        write_graph(&mut buf, &g).unwrap();
        assert!(buf.starts_with(format!("300 {}\n", g.edge_count()).as_bytes()));
        assert_eq!(read_graph(&buf[..]).unwrap(), g);
        let kv = k_vector(&s, 50.0).unwrap();
        let mut line = Vec::new();
        write_kvector(&mut line, &kv).unwrap();
        assert_eq!(read_kvector(&line[..]).unwrap(), kv);
    }

    #[test]
    fn kvector_line_layout() {
        let kv = KVector::new(3, vec![4, 1, 0]).unwrap();
        let mut line = Vec::new();
        write_kvector(&mut line, &kv).unwrap();
        assert_eq!(line, b"3 4 1 0\n");
        assert!(read_kvector(&b"2 1\n"[..]).is_err());
    }

    #[test]
    fn malformed_edge_lists_are_rejected() {
        assert!(read_graph(&b"3 1\n0 3\n"[..]).is_err());
        assert!(read_graph(&b"3 2\n0 1\n"[..]).is_err());
        assert!(read_graph(&b"3 1\n1 1\n"[..]).is_err());
        assert!(read_graph(&b"3\n"[..]).is_err());
        assert_eq!(read_graph(&b"3 0\n"[..]).unwrap().edge_count(), 0);
    }

    #[test]
    fn grid_round_trip_and_symmetry_check() {
        let g = GraphonGrid::new(2, 1.5, vec![0.25, 1.0 / 3.0, 1.0 / 3.0, 0.0]).unwrap();
        let mut buf = Vec::new();
        write_grid(&mut buf, &g).unwrap();
        assert_eq!(read_grid(&buf[..]).unwrap(), g);
        assert!(read_grid(&b"2 1\n0 1\n0 0\n"[..]).is_err());
        assert!(read_grid(&b"2 1\n0 1\n"[..]).is_err());
    }
}
