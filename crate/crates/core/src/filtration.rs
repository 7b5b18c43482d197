//! The random edge filtration of the complete graph `K_n`.
//!
//! Every unordered pair of vertices gets an independent uniform appearance
//! time in `(0, 1]`. Thresholding at `p` gives the Erdős–Rényi graph
//! `G(n, p)`, and all thresholds share one coupled sample.
//!
//! Vertices are 1-based throughout the public API: `[n] = {1, ..., n}`.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::util::{fmt_f64, mix_seed, parse_f64};

/// Edge appearance times for all `n(n-1)/2` pairs of `[n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFiltration {
    n: usize,
    /// Upper-triangle pairs in lexicographic `(u, v)` order.
    weights: Vec<f64>,
}

#[inline]
fn pair_offset(n: usize, a: usize, b: usize) -> usize {
    // 0-based a < b
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

impl EdgeFiltration {
    /// Samples a filtration with i.i.d. uniform `(0, 1]` weights.
    ///
    /// The generator is ChaCha20 seeded with `mix_seed(master_seed,
    /// sample_index)`; weights are drawn in lexicographic pair order and an
    /// exact zero is redrawn.
    pub fn sample(n: usize, master_seed: u64, sample_index: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(mix_seed(master_seed, sample_index));
        let m = n * (n - 1) / 2;
        let mut weights = Vec::with_capacity(m);
        for _ in 0..m {
            let w = loop {
                let x: f64 = rng.gen();
                if x > 0.0 {
                    break x;
                }
            };
            weights.push(w);
        }
        Ok(EdgeFiltration { n, weights })
    }

    /// Builds a filtration from weights in lexicographic pair order.
    pub fn from_weights(n: usize, weights: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let m = n * (n - 1) / 2;
        if weights.len() != m {
            return Err(Error::invalid(format!(
                "expected {m} weights for n={n}, got {}",
                weights.len()
            )));
        }
        if let Some(bad) = weights.iter().find(|w| !(**w > 0.0 && **w <= 1.0)) {
            return Err(Error::invalid(format!("weight {bad} outside (0, 1]")));
        }
        Ok(EdgeFiltration { n, weights })
    }

    /// Builds a filtration by evaluating `f(u, v)` for every pair `u < v`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut weights = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 1..=n {
            for v in u + 1..=n {
                weights.push(f(u, v));
            }
        }
        Self::from_weights(n, weights)
    }

    /// Convenience for handcrafted instances: every pair gets `default`
    /// except those listed in `edges` as `(u, v, weight)`.
    pub fn from_edges(n: usize, default: f64, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut ef = Self::from_fn(n, |_, _| default)?;
        for &(u, v, w) in edges {
            ef.set_weight(u, v, w)?;
        }
        Ok(ef)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    /// Raw weights in lexicographic pair order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::invalid(format!("no self-loop weight ({u}, {v})")));
        }
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return Err(Error::invalid(format!(
                "pair ({u}, {v}) outside [1, {}]",
                self.n
            )));
        }
        Ok(())
    }

    /// Weight of the pair `{u, v}`; errors on out-of-range or equal vertices.
    pub fn try_weight(&self, u: usize, v: usize) -> Result<f64> {
        self.check_pair(u, v)?;
        Ok(self.weight(u, v))
    }

    /// Weight of the pair `{u, v}` (symmetric).
    ///
    /// Panics if `u == v` or either vertex is outside `[1, n]`.
    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        assert!(u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n);
        let (a, b) = if u < v {
            (u - 1, v - 1)
        } else {
            (v - 1, u - 1)
        };
        self.weights[pair_offset(self.n, a, b)]
    }

    /// 0-based, unchecked-order variant used by the hot loops.
    #[inline]
    pub(crate) fn weight0(&self, a: usize, b: usize) -> f64 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.weights[pair_offset(self.n, a, b)]
    }

    pub fn set_weight(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        self.check_pair(u, v)?;
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::invalid(format!("weight {w} outside (0, 1]")));
        }
        let (a, b) = if u < v {
            (u - 1, v - 1)
        } else {
            (v - 1, u - 1)
        };
        self.weights[pair_offset(self.n, a, b)] = w;
        Ok(())
    }

    /// Iterates `(u, v, weight)` for `u < v` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (1..=n)
            .flat_map(move |u| (u + 1..=n).map(move |v| (u, v)))
            .zip(self.weights.iter().copied())
            .map(|((u, v), w)| (u, v, w))
    }

    /// Relabels vertices: vertex `u` of `self` becomes `perm[u - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n + 1];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p == 0 || p > n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::invalid("perm is not a permutation of [n]"));
        }
        let mut out = self.clone();
        for (u, v, w) in self.pairs() {
            out.set_weight(perm[u - 1], perm[v - 1], w)?;
        }
        Ok(out)
    }

    /// Multiplies every weight by `c` in `(0, 1]`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::invalid(format!("scale {c} outside (0, 1]")));
        }
        Self::from_weights(self.n, self.weights.iter().map(|w| w * c).collect())
    }

    /// The graph `{e : p_e <= p}` on vertex set `[n]`.
    pub fn snapshot(&self, p: f64) -> Result<GraphSnapshot> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("threshold {p} outside [0, 1]")));
        }
        let mut adjacency = vec![Vec::new(); self.n];
        for (u, v, w) in self.pairs() {
            if w <= p {
                adjacency[u - 1].push(v);
                adjacency[v - 1].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(GraphSnapshot {
            n: self.n,
            p,
            adjacency,
        })
    }

    /// CSV with header `u,v,weight`, 1-based vertices, rows sorted by
    /// `(u, v)` and 17 significant digits.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("u,v,weight\n");
        for (u, v, w) in self.pairs() {
            let _ = writeln!(out, "{u},{v},{}", fmt_f64(w));
        }
        out
    }

    /// Parses the CSV produced by [`to_csv_string`](Self::to_csv_string).
    /// `n` is the largest vertex label seen; every pair must appear once.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse {
            context: format!("filtration csv line {line}"),
            message,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "u,v,weight" => {}
            _ => return Err(perr(1, "expected header `u,v,weight`".into())),
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(perr(
                    i + 1,
                    format!("expected 3 columns, got {}", cols.len()),
                ));
            }
            let u: usize = cols[0]
                .trim()
                .parse()
                .map_err(|e| perr(i + 1, format!("bad u: {e}")))?;
            let v: usize = cols[1]
                .trim()
                .parse()
                .map_err(|e| perr(i + 1, format!("bad v: {e}")))?;
            let w = parse_f64(cols[2]).ok_or_else(|| perr(i + 1, "bad weight".into()))?;
            rows.push((u, v, w));
        }
        let n = rows.iter().map(|r| r.0.max(r.1)).max().unwrap_or(1);
        if rows.len() != n * (n - 1) / 2 {
            return Err(perr(
                0,
                format!("expected {} rows for n={n}", n * (n - 1) / 2),
            ));
        }
        let mut ef = Self::from_fn(n, |_, _| 1.0)?;
        let mut seen = vec![false; rows.len()];
        for (u, v, w) in rows {
            ef.set_weight(u, v, w)?;
            let (a, b) = if u < v {
                (u - 1, v - 1)
            } else {
                (v - 1, u - 1)
            };
            let idx = pair_offset(n, a, b);
            if std::mem::replace(&mut seen[idx], true) {
                return Err(perr(0, format!("duplicate pair ({u}, {v})")));
            }
        }
        Ok(ef)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text)
    }
}

/// The simple graph `G(n, p) = {e : p_e <= p}` materialized from a filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSnapshot {
    n: usize,
    p: f64,
    /// Sorted 1-based neighbor lists, indexed by `vertex - 1`.
    adjacency: Vec<Vec<usize>>,
}

impl GraphSnapshot {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> f64 {
        self.p
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u - 1]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adjacency[u - 1].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.adjacency.iter().enumerate() {
            let u = i + 1;
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }
}
