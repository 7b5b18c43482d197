//! Persistence diagrams of flag filtrations over a prime field.
//!
//! [`compute_persistence`] reduces the coboundary matrix one degree at a
//! time with clearing, which is what keeps the higher-dimensional cases
//! tractable. [`naive_reduction_oracle`] is the plain left-to-right
//! reduction of the full boundary matrix and exists to check it.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::flag::{Binomials, FlagFiltration};
use crate::util::fmt_f64;

/// Death time of a persistence pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Death {
    Finite(f64),
    /// Still alive when the weight cap was reached; the true death is
    /// somewhere above the cap.
    EssentialAtCap,
    /// Never dies in the full filtration.
    Essential,
}

impl Death {
    fn rank(&self) -> u8 {
        match self {
            Death::Finite(_) => 0,
            Death::EssentialAtCap => 1,
            Death::Essential => 2,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Death::Finite(d) => Some(*d),
            _ => None,
        }
    }

    /// True if the class is still alive at time `t` (`t` at most the cap).
    fn after(&self, t: f64) -> bool {
        match self {
            Death::Finite(d) => *d > t,
            _ => true,
        }
    }

    pub fn cmp_total(&self, other: &Death) -> Ordering {
        match (self, other) {
            (Death::Finite(a), Death::Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    pub death: Death,
}

impl PersistencePair {
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.birth.total_cmp(&other.birth))
            .then(self.death.cmp_total(&other.death))
    }

    /// `death / birth` for finite pairs.
    pub fn ratio(&self) -> Option<f64> {
        self.death.finite().map(|d| d / self.birth)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    n: usize,
    k_max: usize,
    w_cap: f64,
    characteristic: u32,
    /// Pairs per degree `0..=k_max`, sorted by `(birth, death)`.
    pairs: Vec<Vec<PersistencePair>>,
}

impl PersistenceDiagram {
    fn from_pairs(
        ff: &FlagFiltration,
        k_max: usize,
        field: PrimeField,
        raw: Vec<PersistencePair>,
    ) -> Self {
        let mut pairs = vec![Vec::new(); k_max + 1];
        for p in raw {
            // zero-persistence pairs carry no information
            if let Death::Finite(d) = p.death {
                if d == p.birth {
                    continue;
                }
            }
            pairs[p.dim].push(p);
        }
        for list in &mut pairs {
            list.sort_by(PersistencePair::cmp_total);
        }
        PersistenceDiagram {
            n: ff.n(),
            k_max,
            w_cap: ff.w_cap(),
            characteristic: field.characteristic(),
            pairs,
        }
    }

    /// Assembles a diagram from explicit pairs, e.g. one loaded from disk.
    pub fn from_parts(
        n: usize,
        k_max: usize,
        w_cap: f64,
        characteristic: u32,
        pairs: Vec<PersistencePair>,
    ) -> Result<Self> {
        PrimeField::new(characteristic)?;
        if !(w_cap > 0.0 && w_cap <= 1.0) {
            return Err(Error::invalid(format!("w_cap {w_cap} outside (0, 1]")));
        }
        let mut per_degree = vec![Vec::new(); k_max + 1];
        for p in pairs {
            if p.dim > k_max {
                return Err(Error::invalid(format!(
                    "pair in degree {} > k_max {k_max}",
                    p.dim
                )));
            }
            if let Death::Finite(d) = p.death {
                if !(d > p.birth) {
                    return Err(Error::invalid(format!(
                        "pair ({}, {d}) does not have birth < death",
                        p.birth
                    )));
                }
            }
            per_degree[p.dim].push(p);
        }
        for list in &mut per_degree {
            list.sort_by(PersistencePair::cmp_total);
        }
        Ok(PersistenceDiagram {
            n,
            k_max,
            w_cap,
            characteristic,
            pairs: per_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn w_cap(&self) -> f64 {
        self.w_cap
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    /// Pairs in degree `k` (empty if `k > k_max`).
    pub fn pairs(&self, k: usize) -> &[PersistencePair] {
        self.pairs.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = &[PersistencePair]> {
        self.pairs.iter().map(Vec::as_slice)
    }

    /// Number of classes in degree `k` alive at the cap.
    pub fn unpaired_at_cap(&self, k: usize) -> usize {
        self.pairs(k)
            .iter()
            .filter(|p| p.death == Death::EssentialAtCap)
            .count()
    }

    /// First degree in `1..=k_max` holding a class alive at the cap.
    pub fn first_degree_alive_at_cap(&self) -> Option<usize> {
        (1..=self.k_max).find(|&k| self.unpaired_at_cap(k) > 0)
    }

    pub(crate) fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.k_max {
            return Err(Error::invalid(format!(
                "degree {k} not computed (k_max = {})",
                self.k_max
            )));
        }
        Ok(())
    }

    pub(crate) fn check_threshold(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.w_cap) {
            return Err(Error::invalid(format!(
                "threshold {t} outside [0, w_cap = {}]",
                self.w_cap
            )));
        }
        Ok(())
    }

    /// Betti number `#{pairs in degree k : birth <= t < death}`.
    pub fn betti_at(&self, k: usize, t: f64) -> Result<usize> {
        self.check_degree(k)?;
        self.check_threshold(t)?;
        Ok(self
            .pairs(k)
            .iter()
            .filter(|p| p.birth <= t && p.death.after(t))
            .count())
    }

    /// Counts pairs in degree `k` with `birth <= p1` and death after `p2`.
    pub(crate) fn count_spanning(&self, k: usize, p1: f64, p2: f64) -> usize {
        self.pairs(k)
            .iter()
            .filter(|p| p.birth <= p1 && p.death.after(p2))
            .count()
    }

    /// CSV with header `dim,birth,death`; `inf` marks essential classes and
    /// `cap` classes alive at the weight cap.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for p in self.pairs.iter().flatten() {
            let death = match p.death {
                Death::Finite(d) => fmt_f64(d),
                Death::EssentialAtCap => "cap".to_string(),
                Death::Essential => "inf".to_string(),
            };
            let _ = writeln!(out, "{},{},{death}", p.dim, fmt_f64(p.birth));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

fn validate(ff: &FlagFiltration, k_max: usize, characteristic: u32) -> Result<PrimeField> {
    let field = PrimeField::new(characteristic)?;
    if k_max + 1 > ff.max_dim() {
        return Err(Error::invalid(format!(
            "k_max + 1 = {} exceeds filtration max_dim {}",
            k_max + 1,
            ff.max_dim()
        )));
    }
    Ok(field)
}

fn unpaired_death(ff: &FlagFiltration, dim: usize, position: usize) -> Death {
    // the first vertex carries the one component that never dies
    if (dim == 0 && position == 0) || ff.w_cap() >= 1.0 {
        Death::Essential
    } else {
        Death::EssentialAtCap
    }
}

/// Sparse column: `(row position, coefficient)` sorted by position.
type Column = Vec<(u32, u32)>;

/// Coboundary lookup for a flag filtration: neighbor lists within the cap
/// plus, per dimension, a sorted `(combinatorial index, position)` table.
struct CoboundaryIndex<'a> {
    ff: &'a FlagFiltration,
    neighbors: Vec<Vec<u32>>,
    by_dim: Vec<Vec<(u64, u32)>>,
    binom: Binomials,
}

impl<'a> CoboundaryIndex<'a> {
    fn new(ff: &'a FlagFiltration, top_dim: usize) -> Self {
        let n = ff.n();
        let mut neighbors = vec![Vec::new(); n];
        let mut by_dim = vec![Vec::new(); top_dim + 1];
        for (pos, s) in ff.simplices().iter().enumerate() {
            let d = s.dim();
            if d == 1 {
                let v = s.simplex.vertices();
                neighbors[v[0] - 1].push(v[1] as u32 - 1);
                neighbors[v[1] - 1].push(v[0] as u32 - 1);
            }
            if d <= top_dim {
                by_dim[d].push((s.index, pos as u32));
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        for table in &mut by_dim {
            table.sort_unstable();
        }
        CoboundaryIndex {
            ff,
            neighbors,
            by_dim,
            binom: Binomials::new(n, top_dim + 1),
        }
    }

    fn position(&self, dim: usize, index: u64) -> u32 {
        let table = &self.by_dim[dim];
        let at = table
            .binary_search_by(|e| e.0.cmp(&index))
            .expect("cofacet of a capped clique lies in the filtration");
        table[at].1
    }

    /// Coboundary of the simplex at `pos`, sorted by position.
    fn coboundary(
        &self,
        field: PrimeField,
        pos: usize,
        common: &mut Vec<u32>,
        scratch: &mut Vec<u32>,
    ) -> Column {
        let s = &self.ff.simplices()[pos];
        let vs = s.simplex.vertices();
        let d = vs.len() - 1;
        common.clear();
        common.extend_from_slice(&self.neighbors[vs[0] - 1]);
        for &v in &vs[1..] {
            let other = &self.neighbors[v - 1];
            scratch.clear();
            let (mut i, mut j) = (0, 0);
            while i < common.len() && j < other.len() {
                match common[i].cmp(&other[j]) {
                    Ordering::Less => i += 1,
                    Ordering::Greater => j += 1,
                    Ordering::Equal => {
                        scratch.push(common[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
            std::mem::swap(common, scratch);
        }
        let mut col: Column = Vec::with_capacity(common.len());
        for &w0 in common.iter() {
            let w = w0 as usize + 1;
            // insertion slot of w among the sorted vertices
            let slot = vs.partition_point(|&x| x < w);
            let mut index = 0u64;
            for (i, &v) in vs.iter().enumerate() {
                let rank = if i < slot { i + 1 } else { i + 2 };
                index += self.binom.get(v - 1, rank);
            }
            index += self.binom.get(w - 1, slot + 1);
            let cofacet = self.position(d + 1, index);
            col.push((cofacet, field.from_sign(slot % 2 == 1)));
        }
        col.sort_unstable_by_key(|e| e.0);
        col
    }
}

/// Persistence diagram of `ff` in degrees `0..=k_max` over `Z/characteristic`.
///
/// Classes of degree `1..=k_max` still alive at `ff.w_cap()` (when the cap
/// is below 1) are reported with [`Death::EssentialAtCap`] so the caller
/// can raise the cap and recompute.
///
/// Works on the coboundary matrix, degree by degree and in reverse
/// filtration order. Simplices that killed a class one degree lower are
/// cleared. Only the reducing cochains are stored; a column's reduced
/// coboundary is accumulated in a dense scratch vector and discarded once
/// its pivot is known.
pub fn compute_persistence(
    ff: &FlagFiltration,
    k_max: usize,
    characteristic: u32,
) -> Result<PersistenceDiagram> {
    let field = validate(ff, k_max, characteristic)?;
    let simplices = ff.simplices();
    let index = CoboundaryIndex::new(ff, k_max + 1);
    let total = simplices.len();

    let mut raw = Vec::new();
    let mut cleared = vec![false; total];
    let mut row_of = vec![u32::MAX; total];
    let mut common = Vec::new();
    let mut scratch = Vec::new();

    for dim in 0..=k_max {
        let members: Vec<usize> = (0..total).filter(|&p| simplices[p].dim() == dim).collect();
        let rows: Vec<usize> = (0..total)
            .filter(|&p| simplices[p].dim() == dim + 1)
            .collect();
        for (i, &p) in rows.iter().enumerate() {
            row_of[p] = i as u32;
        }
        // coboundaries with rows renumbered 0..rows.len() in filtration order
        let cob: Vec<Column> = members
            .iter()
            .map(|&p| {
                let mut col = index.coboundary(field, p, &mut common, &mut scratch);
                for e in &mut col {
                    e.0 = row_of[e.0 as usize];
                }
                col
            })
            .collect();
        let mut owner = vec![u32::MAX; rows.len()];
        let mut acc = DenseColumn::new(rows.len());
        // reducing cochain (local simplex index, coefficient) and the
        // coefficient of its pivot
        let mut cochains: Vec<(Column, u32)> = Vec::new();

        for (local, &pos) in members.iter().enumerate().rev() {
            if cleared[pos] {
                continue;
            }
            let mut cochain: Column = vec![(local as u32, 1)];
            let pivot = match cob[local].first() {
                None => None,
                // the common case: the smallest cofacet is still free
                Some(&(row, coef)) if owner[row as usize] == u32::MAX => Some((row, coef)),
                Some(&(first, _)) => {
                    acc.add_scaled(field, 1, &cob[local]);
                    let mut from = first;
                    let pivot = loop {
                        let Some((row, coef)) = acc.first_nonzero(from) else {
                            break None;
                        };
                        let slot = owner[row as usize];
                        if slot == u32::MAX {
                            break Some((row, coef));
                        }
                        let (other, other_coef) = &cochains[slot as usize];
                        let factor = field.neg(field.mul(coef, field.inv(*other_coef)));
                        for &(s, a) in other {
                            let m = field.mul(factor, a);
                            cochain.push((s, m));
                            acc.add_scaled(field, m, &cob[s as usize]);
                        }
                        from = row;
                    };
                    acc.reset();
                    pivot
                }
            };
            let birth = simplices[pos].value;
            match pivot {
                Some((row, coef)) => {
                    let row_pos = rows[row as usize];
                    owner[row as usize] = cochains.len() as u32;
                    cleared[row_pos] = true;
                    raw.push(PersistencePair {
                        dim,
                        birth,
                        death: Death::Finite(simplices[row_pos].value),
                    });
                    cochains.push((compress(field, cochain), coef));
                }
                None => raw.push(PersistencePair {
                    dim,
                    birth,
                    death: unpaired_death(ff, dim, pos),
                }),
            }
        }
    }
    Ok(PersistenceDiagram::from_pairs(ff, k_max, field, raw))
}

/// Dense working column with a bitset of nonzero rows.
///
/// During one column's reduction the pivot only moves down (every column
/// added has its own pivot at the current one), so the search for the next
/// pivot resumes where the last one stopped.
struct DenseColumn {
    coef: Vec<u32>,
    nonzero: Vec<u64>,
    touched: Vec<u32>,
}

impl DenseColumn {
    fn new(len: usize) -> Self {
        DenseColumn {
            coef: vec![0; len],
            nonzero: vec![0; len.div_ceil(64)],
            touched: Vec::new(),
        }
    }

    fn add_scaled(&mut self, field: PrimeField, factor: u32, col: &[(u32, u32)]) {
        for &(row, c) in col {
            let r = row as usize;
            let v = field.add(self.coef[r], field.mul(factor, c));
            self.coef[r] = v;
            if v == 0 {
                self.nonzero[r / 64] &= !(1u64 << (r % 64));
            } else {
                self.nonzero[r / 64] |= 1u64 << (r % 64);
            }
            self.touched.push(row);
        }
    }

    fn first_nonzero(&self, from: u32) -> Option<(u32, u32)> {
        let from = from as usize;
        let mut word = from / 64;
        let mut bits = *self.nonzero.get(word)? & (!0u64 << (from % 64));
        loop {
            if bits != 0 {
                let r = word * 64 + bits.trailing_zeros() as usize;
                return Some((r as u32, self.coef[r]));
            }
            word += 1;
            bits = *self.nonzero.get(word)?;
        }
    }

    fn reset(&mut self) {
        for &row in &self.touched {
            let r = row as usize;
            self.coef[r] = 0;
            self.nonzero[r / 64] = 0;
        }
        self.touched.clear();
    }
}

/// Sorts a cochain by index and merges repeated entries.
fn compress(field: PrimeField, mut col: Column) -> Column {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Column = Vec::with_capacity(col.len());
    for (s, c) in col {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 = field.add(last.1, c),
            _ => out.push((s, c)),
        }
        if out.last().is_some_and(|e| e.1 == 0) {
            out.pop();
        }
    }
    out
}

/// Textbook persistence: reduce the full boundary matrix column by column,
/// left to right, with dense columns and no clearing or cohomology.
pub fn naive_reduction_oracle(
    ff: &FlagFiltration,
    k_max: usize,
    characteristic: u32,
) -> Result<PersistenceDiagram> {
    let field = validate(ff, k_max, characteristic)?;
    let simplices: Vec<_> = ff
        .simplices()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.dim() <= k_max + 1)
        .collect();
    let m = simplices.len();
    let position: HashMap<Vec<usize>, usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, (_, s))| (s.simplex.vertices().to_vec(), i))
        .collect();

    let mut matrix: Vec<Vec<u32>> = Vec::with_capacity(m);
    for (_, s) in &simplices {
        let mut col = vec![0u32; m];
        for (j, face) in s.simplex.facets().enumerate() {
            let row = position[face.vertices()];
            col[row] = field.from_sign(j % 2 == 1);
        }
        matrix.push(col);
    }

    let low = |col: &[u32]| col.iter().rposition(|&c| c != 0);
    let mut low_of: Vec<Option<usize>> = vec![None; m];
    let mut column_with_low: Vec<Option<usize>> = vec![None; m];
    for j in 0..m {
        while let Some(l) = low(&matrix[j]) {
            let Some(i) = column_with_low[l] else { break };
            let factor = field.mul(matrix[j][l], field.inv(matrix[i][l]));
            let neg = field.neg(factor);
            let (left, right) = matrix.split_at_mut(j);
            for (dst, &src) in right[0].iter_mut().zip(&left[i]) {
                *dst = field.add(*dst, field.mul(neg, src));
            }
        }
        if let Some(l) = low(&matrix[j]) {
            column_with_low[l] = Some(j);
            low_of[j] = Some(l);
        }
    }

    let mut raw = Vec::new();
    let mut is_negative = vec![false; m];
    for j in 0..m {
        if let Some(i) = low_of[j] {
            is_negative[j] = true;
            let (_, birth_simplex) = simplices[i];
            let (_, death_simplex) = simplices[j];
            raw.push(PersistencePair {
                dim: birth_simplex.dim(),
                birth: birth_simplex.value,
                death: Death::Finite(death_simplex.value),
            });
        }
    }
    for i in 0..m {
        let (orig_pos, s) = simplices[i];
        if s.dim() <= k_max && !is_negative[i] && column_with_low[i].is_none() {
            raw.push(PersistencePair {
                dim: s.dim(),
                birth: s.value,
                death: unpaired_death(ff, s.dim(), orig_pos),
            });
        }
    }
    Ok(PersistenceDiagram::from_pairs(ff, k_max, field, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::EdgeFiltration;

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

    fn both(
        ef: &EdgeFiltration,
        k_max: usize,
        cap: f64,
    ) -> (PersistenceDiagram, PersistenceDiagram) {
        let ff = FlagFiltration::build(ef, k_max + 1, cap).unwrap();
        (
            compute_persistence(&ff, k_max, 2).unwrap(),
            naive_reduction_oracle(&ff, k_max, 2).unwrap(),
        )
    }

    #[test]
    fn square_has_one_cycle() {
        let (fast, slow) = both(&square(), 1, 1.0);
        let expect = vec![PersistencePair {
            dim: 1,
            birth: 0.4,
            death: Death::Finite(0.8),
        }];
        assert_eq!(fast.pairs(1), expect.as_slice());
        assert_eq!(slow.pairs(1), expect.as_slice());
        assert_eq!(fast, slow);
        assert_eq!(fast.betti_at(1, 0.5).unwrap(), 1);
        assert_eq!(fast.betti_at(1, 0.9).unwrap(), 0);
        assert_eq!(fast.betti_at(0, 1.0).unwrap(), 1);
    }

    #[test]
    fn triangle_cycle_is_discarded() {
        let ef =
            EdgeFiltration::from_edges(3, 1.0, &[(1, 2, 0.3), (1, 3, 0.6), (2, 3, 0.7)]).unwrap();
        let (fast, slow) = both(&ef, 1, 1.0);
        assert!(fast.pairs(1).is_empty());
        assert!(slow.pairs(1).is_empty());
    }

    #[test]
    fn single_vertex() {
        let ef = EdgeFiltration::sample(1, 0, 0).unwrap();
        let (fast, slow) = both(&ef, 2, 1.0);
        for dg in [&fast, &slow] {
            assert_eq!(
                dg.pairs(0),
                &[PersistencePair {
                    dim: 0,
                    birth: 0.0,
                    death: Death::Essential
                }]
            );
            assert!(dg.pairs(1).is_empty() && dg.pairs(2).is_empty());
        }
    }

    #[test]
    fn two_vertices_merge() {
        let ef = EdgeFiltration::from_weights(2, vec![0.5]).unwrap();
        let (fast, slow) = both(&ef, 0, 1.0);
        assert_eq!(fast, slow);
        let deaths: Vec<_> = fast.pairs(0).iter().map(|p| p.death).collect();
        assert_eq!(deaths, vec![Death::Finite(0.5), Death::Essential]);
    }

    #[test]
    fn cap_marks_live_classes() {
        // square capped between birth and death of its cycle
        let (fast, slow) = both(&square(), 1, 0.5);
        assert_eq!(fast, slow);
        assert_eq!(fast.unpaired_at_cap(1), 1);
        assert_eq!(fast.first_degree_alive_at_cap(), Some(1));
        assert!(fast.betti_at(1, 0.6).is_err());
        assert_eq!(fast.betti_at(1, 0.5).unwrap(), 1);
    }

    #[test]
    fn parameter_errors() {
        let ff = FlagFiltration::build(&square(), 2, 1.0).unwrap();
        assert!(compute_persistence(&ff, 1, 4).is_err());
        assert!(compute_persistence(&ff, 2, 2).is_err());
        assert!(naive_reduction_oracle(&ff, 2, 2).is_err());
        assert!(compute_persistence(&ff, 1, 3).is_ok());
    }

    #[test]
    fn csv_export() {
        let (dg, _) = both(&square(), 1, 0.5);
        let text = dg.to_csv_string();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "dim,birth,death");
        assert!(lines.contains(&format!("1,{},cap", fmt_f64(0.4)).as_str()));
        assert!(lines.contains(&format!("0,{},inf", fmt_f64(0.0)).as_str()));
    }

    #[test]
    fn random_small_instances_match_oracle() {
        for seed in 0..30 {
            let ef = EdgeFiltration::sample(7, 1234, seed).unwrap();
            for ch in [2, 3, 5] {
                let ff = FlagFiltration::build(&ef, 3, 1.0).unwrap();
                assert_eq!(
                    compute_persistence(&ff, 2, ch).unwrap(),
                    naive_reduction_oracle(&ff, 2, ch).unwrap()
                );
                let capped = FlagFiltration::build(&ef, 3, 0.45).unwrap();
                assert_eq!(
                    compute_persistence(&capped, 2, ch).unwrap(),
                    naive_reduction_oracle(&capped, 2, ch).unwrap()
                );
            }
        }
    }
}
