//! Flag (clique) complex filtrations of a weighted complete graph.
//!
//! A clique enters at the largest weight among its edges; vertices enter at
//! time 0. Simplices are kept in the canonical order
//! `(value, dim, combinatorial index)`, which puts every face before its
//! cofaces and makes reduction output reproducible under ties.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::filtration::EdgeFiltration;
use crate::util::fmt_f64;

/// Table of binomial coefficients `C(m, j)` for `m <= n`, `j <= k`.
#[derive(Debug, Clone)]
pub struct Binomials {
    k: usize,
    table: Vec<u64>,
}

impl Binomials {
    pub fn new(n: usize, k: usize) -> Self {
        let mut table = vec![0u64; (n + 1) * (k + 1)];
        for m in 0..=n {
            table[m * (k + 1)] = 1;
            for j in 1..=k.min(m) {
                let a = table[(m - 1) * (k + 1) + j - 1];
                let b = if j < m {
                    table[(m - 1) * (k + 1) + j]
                } else {
                    0
                };
                table[m * (k + 1) + j] = a.saturating_add(b);
            }
        }
        Binomials { k, table }
    }

    #[inline]
    pub fn get(&self, m: usize, j: usize) -> u64 {
        if j > self.k {
            return crate::util::binomial(m as u64, j as u64);
        }
        self.table
            .get(m * (self.k + 1) + j)
            .copied()
            .unwrap_or_else(|| crate::util::binomial(m as u64, j as u64))
    }
}

/// A simplex on 1-based vertices, stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    /// Sorts the input; rejects empty input, zero labels and repeats.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.is_empty() {
            return Err(Error::invalid("simplex needs at least one vertex"));
        }
        if vertices[0] == 0 {
            return Err(Error::invalid("vertex labels are 1-based"));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("repeated vertex in simplex"));
        }
        Ok(Simplex { vertices })
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Rank in the combinatorial number system among simplices of the same
    /// dimension: `sum_i C(v_i - 1, i + 1)`.
    pub fn combinatorial_index(&self) -> u64 {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| crate::util::binomial((v - 1) as u64, (i + 1) as u64))
            .sum()
    }

    pub(crate) fn index_with(&self, binom: &Binomials) -> u64 {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| binom.get(v - 1, i + 1))
            .sum()
    }

    /// Inverse of [`combinatorial_index`](Self::combinatorial_index).
    pub fn from_combinatorial_index(mut index: u64, dim: usize) -> Self {
        let mut vertices = vec![0usize; dim + 1];
        for i in (0..=dim).rev() {
            let k = (i + 1) as u64;
            // largest c with C(c, k) <= index
            let mut c = k - 1;
            while crate::util::binomial(c + 1, k) <= index {
                c += 1;
            }
            index -= crate::util::binomial(c, k);
            vertices[i] = c as usize + 1;
        }
        Simplex { vertices }
    }

    /// Codimension-one faces, each with the vertex at `position` removed.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let d = self.vertices.len();
        (0..if d > 1 { d } else { 0 }).map(move |skip| {
            let vs = self
                .vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            Simplex { vertices: vs }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplex {
    pub simplex: Simplex,
    pub value: f64,
    /// Cached [`Simplex::combinatorial_index`].
    pub index: u64,
}

impl FilteredSimplex {
    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }

    pub(crate) fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.dim().cmp(&other.dim()))
            .then(self.index.cmp(&other.index))
    }
}

/// All cliques with `dim <= max_dim` and `value <= w_cap`, in canonical order.
#[derive(Debug, Clone)]
pub struct FlagFiltration {
    n: usize,
    max_dim: usize,
    w_cap: f64,
    simplices: Vec<FilteredSimplex>,
}

/// Filtration value of `s`: 0 for a vertex, else its largest edge weight.
pub fn simplex_value(ef: &EdgeFiltration, s: &Simplex) -> Result<f64> {
    let vs = s.vertices();
    if let Some(&bad) = vs.iter().find(|&&v| v == 0 || v > ef.n()) {
        return Err(Error::invalid(format!(
            "vertex {bad} outside [1, {}]",
            ef.n()
        )));
    }
    let mut value = 0.0f64;
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            value = value.max(ef.weight(u, v));
        }
    }
    Ok(value)
}

/// Initial weight cap `min(1, ((k/2 + 1 + eps) ln n / n)^(1/(k+1)))`.
///
/// Above this time degree-`k` rational homology of the clique complex
/// vanishes with high probability.
pub fn adaptive_cap(n: usize, k: usize, eps: f64) -> f64 {
    let nf = n as f64;
    let kf = k as f64;
    let base = (kf / 2.0 + 1.0 + eps) * nf.ln() / nf;
    base.powf(1.0 / (kf + 1.0)).min(1.0)
}

fn intersect_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

impl FlagFiltration {
    /// Enumerates cliques by ordered expansion: a clique is only extended by
    /// common neighbors with a larger label, so each is produced once.
    pub fn build(ef: &EdgeFiltration, max_dim: usize, w_cap: f64) -> Result<Self> {
        if !(w_cap > 0.0 && w_cap <= 1.0) {
            return Err(Error::invalid(format!("w_cap {w_cap} outside (0, 1]")));
        }
        let n = ef.n();
        // higher neighbors within the cap, 0-based
        let mut up: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v, w) in ef.pairs() {
            if w <= w_cap {
                up[u - 1].push((v - 1) as u32);
            }
        }
        let binom = Binomials::new(n, max_dim + 1);
        let mut simplices = Vec::new();
        let mut verts: Vec<u32> = Vec::with_capacity(max_dim + 1);

        struct Ctx<'a> {
            ef: &'a EdgeFiltration,
            up: &'a [Vec<u32>],
            binom: &'a Binomials,
            max_dim: usize,
        }

        fn emit(ctx: &Ctx, verts: &[u32], value: f64, out: &mut Vec<FilteredSimplex>) {
            let vertices: Vec<usize> = verts.iter().map(|&v| v as usize + 1).collect();
            let simplex = Simplex::from_sorted(vertices);
            let index = simplex.index_with(ctx.binom);
            out.push(FilteredSimplex {
                simplex,
                value,
                index,
            });
        }

        fn expand(
            ctx: &Ctx,
            verts: &mut Vec<u32>,
            value: f64,
            candidates: &[u32],
            out: &mut Vec<FilteredSimplex>,
        ) {
            emit(ctx, verts, value, out);
            if verts.len() > ctx.max_dim {
                return;
            }
            let mut next = Vec::new();
            for (pos, &c) in candidates.iter().enumerate() {
                let cv = verts
                    .iter()
                    .map(|&x| ctx.ef.weight0(x as usize, c as usize))
                    .fold(value, f64::max);
                intersect_sorted(&candidates[pos + 1..], &ctx.up[c as usize], &mut next);
                verts.push(c);
                let owned = std::mem::take(&mut next);
                expand(ctx, verts, cv, &owned, out);
                next = owned;
                verts.pop();
            }
        }

        let ctx = Ctx {
            ef,
            up: &up,
            binom: &binom,
            max_dim,
        };
        for (v, higher) in up.iter().enumerate() {
            verts.clear();
            verts.push(v as u32);
            expand(&ctx, &mut verts, 0.0, higher, &mut simplices);
        }
        simplices.sort_by(FilteredSimplex::canonical_cmp);
        Ok(FlagFiltration {
            n,
            max_dim,
            w_cap,
            simplices,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn w_cap(&self) -> f64 {
        self.w_cap
    }

    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of simplices of each dimension `0..=max_dim`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim + 1];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        counts
    }

    /// One simplex per line as `value v0 v1 ... vd`, in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.simplices {
            out.push_str(&fmt_f64(s.value));
            for v in s.simplex.vertices() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> EdgeFiltration {
        EdgeFiltration::from_edges(
            4,
            1.0,
            &[
                (1, 2, 0.1),
                (2, 3, 0.2),
                (3, 4, 0.3),
                (1, 4, 0.4),
                (1, 3, 0.8),
                (2, 4, 0.9),
            ],
        )
        .unwrap()
    }

    fn listing(ff: &FlagFiltration) -> Vec<(f64, Vec<usize>)> {
        ff.simplices()
            .iter()
            .map(|s| (s.value, s.simplex.vertices().to_vec()))
            .collect()
    }

    #[test]
    fn triangle_values_follow_max_rule() {
        let ef =
            EdgeFiltration::from_edges(3, 1.0, &[(1, 2, 0.1), (1, 3, 0.2), (2, 3, 0.8)]).unwrap();
        let ff = FlagFiltration::build(&ef, 2, 1.0).unwrap();
        assert_eq!(
            listing(&ff),
            vec![
                (0.0, vec![1]),
                (0.0, vec![2]),
                (0.0, vec![3]),
                (0.1, vec![1, 2]),
                (0.2, vec![1, 3]),
                (0.8, vec![2, 3]),
                (0.8, vec![1, 2, 3]),
            ]
        );
        let capped = FlagFiltration::build(&ef, 2, 0.5).unwrap();
        assert_eq!(
            listing(&capped),
            vec![
                (0.0, vec![1]),
                (0.0, vec![2]),
                (0.0, vec![3]),
                (0.1, vec![1, 2]),
                (0.2, vec![1, 3]),
            ]
        );
    }

    #[test]
    fn square_triangles() {
        let ff = FlagFiltration::build(&square(), 2, 1.0).unwrap();
        let tris: Vec<_> = listing(&ff)
            .into_iter()
            .filter(|(_, v)| v.len() == 3)
            .collect();
        assert_eq!(
            tris,
            vec![
                (0.8, vec![1, 2, 3]),
                (0.8, vec![1, 3, 4]),
                (0.9, vec![1, 2, 4]),
                (0.9, vec![2, 3, 4]),
            ]
        );
        assert_eq!(ff.counts_by_dim(), vec![4, 6, 4]);
    }

    #[test]
    fn simplex_value_rule() {
        let ef = square();
        assert_eq!(
            simplex_value(&ef, &Simplex::new(vec![4]).unwrap()).unwrap(),
            0.0
        );
        assert_eq!(
            simplex_value(&ef, &Simplex::new(vec![2, 1]).unwrap()).unwrap(),
            0.1
        );
        assert_eq!(
            simplex_value(&ef, &Simplex::new(vec![1, 2, 3]).unwrap()).unwrap(),
            0.8
        );
        assert!(simplex_value(&ef, &Simplex::new(vec![1, 5]).unwrap()).is_err());
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert!(Simplex::new(vec![0, 1]).is_err());
    }

    #[test]
    fn adaptive_cap_values() {
        // (1.6 ln 2 / 2)^(1/2) is below 1; clamping needs a larger base
        assert!((adaptive_cap(2, 1, 0.1) - 0.744_659_482_211_806_8).abs() < 1e-15);
        assert_eq!(adaptive_cap(2, 1, 2.0), 1.0);
        assert_eq!(adaptive_cap(3, 4, 0.1), 1.0);
        // ((1.6 ln 250) / 250)^(1/2)
        let expect = (1.6f64 * 250f64.ln() / 250.0).sqrt();
        assert!((adaptive_cap(250, 1, 0.1) - expect).abs() < 1e-15);
        assert!((adaptive_cap(250, 1, 0.1) - 0.1880).abs() < 5e-5);
        let mut prev = adaptive_cap(50, 2, 0.5);
        for n in (60..2000).step_by(10) {
            let c = adaptive_cap(n, 2, 0.5);
            assert!(c < prev);
            prev = c;
        }
    }

    #[test]
    fn combinatorial_index_is_a_bijection() {
        let n = 9;
        for dim in 0..4 {
            let mut seen = Vec::new();
            for idx in 0..crate::util::binomial(n, dim as u64 + 1) {
                let s = Simplex::from_combinatorial_index(idx, dim);
                assert_eq!(s.combinatorial_index(), idx);
                assert_eq!(s.dim(), dim);
                assert!(*s.vertices().last().unwrap() <= n as usize);
                seen.push(s);
            }
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len() as u64, crate::util::binomial(n, dim as u64 + 1));
        }
    }

    #[test]
    fn text_export() {
        let ff = FlagFiltration::build(&square(), 1, 1.0).unwrap();
        let text = ff.to_text();
        let first_edge = text.lines().nth(4).unwrap();
        assert_eq!(first_edge, format!("{} 1 2", fmt_f64(0.1)));
        assert_eq!(text.lines().count(), 10);
    }

    #[test]
    fn bad_cap_rejected() {
        assert!(FlagFiltration::build(&square(), 2, 0.0).is_err());
        assert!(FlagFiltration::build(&square(), 2, 1.5).is_err());
    }
}
