//! Cross-polytope witness cycles that persist across a window `[p1, p2]`.
//!
//! A `(2k+2)`-set `Y` is split by label into its `k+1` smallest vertices
//! `U = (u_1, ..., u_{k+1})` and `k+1` largest `V = (v_1, ..., v_{k+1})`.
//! It is a `(p1, p2)` special persistent cycle when
//!
//! 1. every pair in `Y` other than the antipodal pairs `(u_i, v_i)` has
//!    weight `<= p1`,
//! 2. every antipodal pair has weight `> p2`, and
//! 3. no vertex outside `Y` has weight `<= p2` to every `u_i`.
//!
//! Such a set spans the boundary of a `(k+1)`-cross-polytope by time `p1`,
//! and `U` is a maximal face at time `p2`, so the cycle survives to `p2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::EdgeFiltration;
use crate::persistence::PersistenceDiagram;
use crate::stats::{max_persistence, rank_invariant, RankQuery};
use crate::util::ln_binomial;

/// Largest `n` accepted by [`count_special_cycles_brute`].
pub const BRUTE_FORCE_MAX_N: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCycleWitness {
    /// `u_1 < ... < u_{k+1}`, 1-based.
    pub u: Vec<usize>,
    /// `v_1 < ... < v_{k+1}`, 1-based, all larger than `u_{k+1}`.
    pub v: Vec<usize>,
    pub p1: f64,
    pub p2: f64,
}

impl SpecialCycleWitness {
    /// The full vertex set `Y = U ∪ V`, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        self.u.iter().chain(&self.v).copied().collect()
    }

    /// Rechecks conditions (1)-(3) edge by edge, plus the stronger claim that
    /// `U` has no common neighbor at `p2` anywhere (inside `Y` included).
    /// Returns a description of the first failure.
    pub fn verify(&self, ef: &EdgeFiltration) -> std::result::Result<(), String> {
        let k1 = self.u.len();
        if k1 == 0 || self.v.len() != k1 {
            return Err("U and V must have equal nonzero size".into());
        }
        let y = self.vertices();
        if y.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("Y = {y:?} is not strictly increasing"));
        }
        for a in 0..y.len() {
            for b in a + 1..y.len() {
                let antipodal = a < k1 && b == a + k1;
                let w = ef.weight(y[a], y[b]);
                if antipodal && !(w > self.p2) {
                    return Err(format!(
                        "antipodal pair ({}, {}) has weight {w} <= p2",
                        y[a], y[b]
                    ));
                }
                if !antipodal && !(w <= self.p1) {
                    return Err(format!("pair ({}, {}) has weight {w} > p1", y[a], y[b]));
                }
            }
        }
        for w in 1..=ef.n() {
            if self.u.contains(&w) {
                continue;
            }
            if self.u.iter().all(|&u| ef.weight(u, w) <= self.p2) {
                return Err(format!("vertex {w} is a common neighbor of U at p2"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCycleCount {
    pub k: usize,
    pub p1: f64,
    pub p2: f64,
    pub count: u64,
    /// Filled only when witnesses were requested, sorted by `Y`.
    pub witnesses: Option<Vec<SpecialCycleWitness>>,
}

fn validate(k: usize, p1: f64, p2: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("special cycles need k >= 1"));
    }
    if !(p1 > 0.0 && p1 <= p2 && p2 <= 1.0) {
        return Err(Error::invalid(format!(
            "special cycles need 0 < p1 <= p2 <= 1, got ({p1}, {p2})"
        )));
    }
    Ok(())
}

/// Adjacency bit matrix at a fixed threshold.
struct BitGraph {
    words: usize,
    bits: Vec<u64>,
}

impl BitGraph {
    fn new(ef: &EdgeFiltration, p: f64) -> Self {
        let n = ef.n();
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        for (u, v, w) in ef.pairs() {
            if w <= p {
                let (a, b) = (u - 1, v - 1);
                bits[a * words + b / 64] |= 1 << (b % 64);
                bits[b * words + a / 64] |= 1 << (a % 64);
            }
        }
        BitGraph { words, bits }
    }

    #[inline]
    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    #[inline]
    fn has(&self, a: usize, b: usize) -> bool {
        self.row(a)[b / 64] >> (b % 64) & 1 == 1
    }
}

struct Search<'a> {
    k1: usize,
    n: usize,
    at_p1: &'a BitGraph,
    at_p2: &'a BitGraph,
    p1: f64,
    p2: f64,
    count: u64,
    witnesses: Option<Vec<SpecialCycleWitness>>,
}

impl Search<'_> {
    /// Grows `U` as a clique at `p1` with increasing labels.
    fn grow_u(&mut self, u: &mut Vec<usize>) {
        if u.len() == self.k1 {
            self.complete_v(u);
            return;
        }
        let start = u.last().map_or(0, |&x| x + 1);
        // leave room for the rest of U and all of V
        let room = self.k1 - u.len() - 1 + self.k1;
        for c in start..self.n.saturating_sub(room) {
            if u.iter().all(|&x| self.at_p1.has(x, c)) {
                u.push(c);
                self.grow_u(u);
                u.pop();
            }
        }
    }

    fn complete_v(&mut self, u: &[usize]) {
        // U must have no common neighbor at p2; inside Y this already
        // follows from the antipodal non-edges, so check it globally
        let words = self.at_p2.words;
        let mut common = self.at_p2.row(u[0]).to_vec();
        for &x in &u[1..] {
            for (c, r) in common.iter_mut().zip(self.at_p2.row(x)) {
                *c &= r;
            }
        }
        debug_assert_eq!(common.len(), words);
        if common.iter().any(|&w| w != 0) {
            return;
        }
        let top = *u.last().unwrap();
        let slots: Vec<Vec<usize>> = (0..self.k1)
            .map(|i| {
                (top + 1..self.n)
                    .filter(|&v| {
                        !self.at_p2.has(u[i], v)
                            && u.iter()
                                .enumerate()
                                .all(|(j, &x)| j == i || self.at_p1.has(x, v))
                    })
                    .collect()
            })
            .collect();
        if slots.iter().any(Vec::is_empty) {
            return;
        }
        let mut v = Vec::with_capacity(self.k1);
        self.fill_v(u, &slots, &mut v);
    }

    fn fill_v(&mut self, u: &[usize], slots: &[Vec<usize>], v: &mut Vec<usize>) {
        let i = v.len();
        if i == self.k1 {
            self.count += 1;
            if let Some(list) = self.witnesses.as_mut() {
                list.push(SpecialCycleWitness {
                    u: u.iter().map(|x| x + 1).collect(),
                    v: v.iter().map(|x| x + 1).collect(),
                    p1: self.p1,
                    p2: self.p2,
                });
            }
            return;
        }
        let lower = v.last().map_or(0, |&x| x + 1);
        for &c in &slots[i] {
            if c < lower {
                continue;
            }
            if v.iter().all(|&x| self.at_p1.has(x, c)) {
                v.push(c);
                self.fill_v(u, slots, v);
                v.pop();
            }
        }
    }
}

/// Counts `(p1, p2)` special persistent cycles of dimension `k` exactly.
///
/// Candidate `U` sets are cliques at `p1` grown in label order and dropped
/// as soon as they have a common neighbor at `p2`; surviving ones are
/// completed slot by slot into `V`.
pub fn count_special_cycles(
    ef: &EdgeFiltration,
    k: usize,
    p1: f64,
    p2: f64,
    collect_witnesses: bool,
) -> Result<SpecialCycleCount> {
    validate(k, p1, p2)?;
    let k1 = k + 1;
    let mut result = SpecialCycleCount {
        k,
        p1,
        p2,
        count: 0,
        witnesses: collect_witnesses.then(Vec::new),
    };
    if ef.n() < 2 * k1 {
        return Ok(result);
    }
    let at_p1 = BitGraph::new(ef, p1);
    let at_p2 = BitGraph::new(ef, p2);
    let mut search = Search {
        k1,
        n: ef.n(),
        at_p1: &at_p1,
        at_p2: &at_p2,
        p1,
        p2,
        count: 0,
        witnesses: result.witnesses.take(),
    };
    search.grow_u(&mut Vec::with_capacity(k1));
    result.count = search.count;
    result.witnesses = search.witnesses;
    Ok(result)
}

/// Oracle: tests every `(2k+2)`-subset of `[n]` against the three
/// conditions of the module docs, literally. Only for `n <= BRUTE_FORCE_MAX_N`.
pub fn count_special_cycles_brute(ef: &EdgeFiltration, k: usize, p1: f64, p2: f64) -> Result<u64> {
    validate(k, p1, p2)?;
    let n = ef.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::invalid(format!(
            "brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let size = 2 * k + 2;
    if n < size {
        return Ok(0);
    }
    let k1 = k + 1;
    let mut count = 0;
    let mut y: Vec<usize> = (1..=size).collect();
    loop {
        let (u, v) = y.split_at(k1);
        let cond1 = (0..size)
            .all(|a| (a + 1..size).all(|b| (a < k1 && b == a + k1) || ef.weight(y[a], y[b]) <= p1));
        let cond2 = (0..k1).all(|i| ef.weight(u[i], v[i]) > p2);
        let cond3 = (1..=n)
            .filter(|w| !y.contains(w))
            .all(|w| !u.iter().all(|&x| ef.weight(x, w) <= p2));
        if cond1 && cond2 && cond3 {
            count += 1;
        }
        // next combination in lexicographic order
        let mut i = size;
        while i > 0 && y[i - 1] == n - size + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        y[i - 1] += 1;
        for j in i..size {
            y[j] = y[j - 1] + 1;
        }
    }
    Ok(count)
}

/// `E(N_k) = C(n, 2k+2) p1^(2k(k+1)) (1-p2)^(k+1) (1-p2^(k+1))^(n-2k-2)`,
/// evaluated in log space.
pub fn expected_special_cycles(n: usize, k: usize, p1: f64, p2: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("special cycles need k >= 1"));
    }
    if !(0.0 <= p1 && p1 <= p2 && p2 <= 1.0) {
        return Err(Error::invalid(format!(
            "expected count needs 0 <= p1 <= p2 <= 1, got ({p1}, {p2})"
        )));
    }
    let size = 2 * k + 2;
    if n < size || p1 == 0.0 || p2 == 1.0 {
        return Ok(0.0);
    }
    let kf = k as f64;
    let ln = ln_binomial(n as u64, size as u64)
        + 2.0 * kf * (kf + 1.0) * p1.ln()
        + (kf + 1.0) * (-p2).ln_1p()
        + (n - size) as f64 * (-p2.powi(k as i32 + 1)).ln_1p();
    Ok(ln.exp())
}

/// Outcome of checking that witnesses imply persistence in the diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub k: usize,
    pub p1: f64,
    pub p2: f64,
    pub count: u64,
    pub rank: usize,
    /// `M_k` of the diagram, if the degree is nonempty.
    pub m_k: Option<f64>,
    pub violations: Vec<String>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `N_k(p1, p2) > 0` forces a degree-`k` class born by `p1` and
/// alive after `p2` in `dg`, hence `M_k >= p2 / p1`. Every witness is also
/// rechecked edge by edge.
pub fn witness_implies_persistence(
    ef: &EdgeFiltration,
    k: usize,
    p1: f64,
    p2: f64,
    dg: &PersistenceDiagram,
) -> Result<WitnessReport> {
    validate(k, p1, p2)?;
    if dg.n() != ef.n() {
        return Err(Error::invalid("diagram and filtration disagree on n"));
    }
    if dg.w_cap() < p2 {
        return Err(Error::CapInsufficient {
            degree: k,
            cap: dg.w_cap(),
            unpaired: 0,
        });
    }
    let mp = max_persistence(dg, k)?;
    let rank = rank_invariant(dg, RankQuery::new(k, p1, p2)?)?;
    let found = count_special_cycles(ef, k, p1, p2, true)?;
    let mut violations = Vec::new();
    for w in found.witnesses.iter().flatten() {
        if let Err(why) = w.verify(ef) {
            violations.push(format!("witness {:?}: {why}", w.vertices()));
        }
    }
    if found.count > 0 {
        let first = found
            .witnesses
            .as_ref()
            .and_then(|w| w.first())
            .map(|w| w.vertices());
        if rank == 0 {
            violations.push(format!(
                "N_k = {} but rank of H_{k}({p1}) -> H_{k}({p2}) is 0; witness {first:?}",
                found.count
            ));
        }
        if mp.m_k().is_none_or(|m| m < p2 / p1) {
            violations.push(format!(
                "N_k = {} but M_k = {:?} < p2/p1 = {}; witness {first:?}",
                found.count,
                mp.m_k(),
                p2 / p1
            ));
        }
    }
    Ok(WitnessReport {
        k,
        p1,
        p2,
        count: found.count,
        rank,
        m_k: mp.m_k(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::FlagFiltration;
    use crate::persistence::compute_persistence;

    /// 4-cycle 1-2-3-4 at 0.1 with antipodal pairs 13, 24 at 0.95; vertices
    /// 1 and 2 are far (0.95) from 5 and 6.
    fn handcrafted() -> EdgeFiltration {
        let mut edges = vec![
            (1, 2, 0.1),
            (2, 3, 0.1),
            (3, 4, 0.1),
            (1, 4, 0.1),
            (1, 3, 0.95),
            (2, 4, 0.95),
        ];
        for a in [1, 2] {
            for b in [5, 6] {
                edges.push((a, b, 0.95));
            }
        }
        EdgeFiltration::from_edges(6, 0.5, &edges).unwrap()
    }

    #[test]
    fn handcrafted_single_witness() {
        let ef = handcrafted();
        let r = count_special_cycles(&ef, 1, 0.2, 0.9, true).unwrap();
        assert_eq!(r.count, 1);
        let w = &r.witnesses.unwrap()[0];
        assert_eq!((w.u.clone(), w.v.clone()), (vec![1, 2], vec![3, 4]));
        assert!(w.verify(&ef).is_ok());
        assert_eq!(count_special_cycles_brute(&ef, 1, 0.2, 0.9).unwrap(), 1);
    }

    #[test]
    fn common_neighbor_kills_witness() {
        let mut ef = handcrafted();
        ef.set_weight(5, 1, 0.5).unwrap();
        ef.set_weight(5, 2, 0.5).unwrap();
        assert_eq!(
            count_special_cycles(&ef, 1, 0.2, 0.9, false).unwrap().count,
            0
        );
        assert_eq!(count_special_cycles_brute(&ef, 1, 0.2, 0.9).unwrap(), 0);
    }

    #[test]
    fn too_few_vertices() {
        let ef = EdgeFiltration::sample(5, 1, 0).unwrap();
        assert_eq!(
            count_special_cycles(&ef, 2, 0.5, 0.6, false).unwrap().count,
            0
        );
        assert_eq!(count_special_cycles_brute(&ef, 2, 0.5, 0.6).unwrap(), 0);
        assert_eq!(expected_special_cycles(5, 2, 0.5, 0.6).unwrap(), 0.0);
    }

    #[test]
    fn parameter_errors() {
        let ef = handcrafted();
        assert!(count_special_cycles(&ef, 1, 0.5, 0.4, false).is_err());
        assert!(count_special_cycles(&ef, 0, 0.1, 0.4, false).is_err());
        assert!(count_special_cycles(&ef, 1, 0.0, 0.4, false).is_err());
        let big = EdgeFiltration::sample(31, 1, 0).unwrap();
        assert!(count_special_cycles_brute(&big, 1, 0.1, 0.2).is_err());
    }

    #[test]
    fn expected_count_formula() {
        assert_eq!(expected_special_cycles(30, 1, 0.0, 0.3).unwrap(), 0.0);
        assert_eq!(expected_special_cycles(30, 1, 0.2, 1.0).unwrap(), 0.0);
        let direct = 27405.0 * 0.15f64.powi(4) * 0.7f64.powi(2) * 0.91f64.powi(26);
        let e = expected_special_cycles(30, 1, 0.15, 0.3).unwrap();
        assert!((e - direct).abs() < 1e-12 * direct);
        assert!((e - 0.585).abs() < 5e-4);
        // no underflow where the direct product would vanish
        let tiny = expected_special_cycles(10_000, 3, 1e-40, 1e-30).unwrap();
        assert!(tiny == 0.0 || tiny.is_finite());
        assert!(expected_special_cycles(30, 1, 0.3, 0.2).is_err());
    }

    #[test]
    fn handcrafted_implies_persistence() {
        let ef = handcrafted();
        let ff = FlagFiltration::build(&ef, 2, 1.0).unwrap();
        let dg = compute_persistence(&ff, 1, 2).unwrap();
        let report = witness_implies_persistence(&ef, 1, 0.2, 0.9, &dg).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.count, 1);
        assert!(report.rank >= 1);
        assert!(report.m_k.unwrap() >= 0.9 / 0.2);
    }

    #[test]
    fn vacuous_report() {
        let ef = EdgeFiltration::from_fn(6, |_, _| 0.5).unwrap();
        let ff = FlagFiltration::build(&ef, 2, 1.0).unwrap();
        let dg = compute_persistence(&ff, 1, 2).unwrap();
        let report = witness_implies_persistence(&ef, 1, 0.2, 0.9, &dg).unwrap();
        assert_eq!(report.count, 0);
        assert!(report.passed());
    }

    #[test]
    fn small_cap_rejected() {
        let ef = handcrafted();
        let ff = FlagFiltration::build(&ef, 2, 0.5).unwrap();
        let dg = compute_persistence(&ff, 1, 2).unwrap();
        assert!(matches!(
            witness_implies_persistence(&ef, 1, 0.2, 0.9, &dg),
            Err(Error::CapInsufficient { .. })
        ));
    }
}
