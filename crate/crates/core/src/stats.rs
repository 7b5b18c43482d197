//! Statistics of persistence diagrams: maximal multiplicative persistence,
//! its normalizations, rank invariants and reference scales.
//!
//! All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag::adaptive_cap;
use crate::persistence::{Death, PersistenceDiagram};
use crate::util::ln_binomial;

/// The pair attaining the largest `death / birth` ratio in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxPersistence {
    /// `M_k = death / birth` of the witness.
    pub m_k: f64,
    /// `ln M_k / ln n`.
    pub m_tilde: f64,
    /// `M_k / f_k(n)`.
    pub ratio_f: f64,
    pub birth: f64,
    pub death: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxPersistenceResult {
    pub k: usize,
    /// `None` when the degree-`k` diagram is empty.
    pub value: Option<MaxPersistence>,
}

impl MaxPersistenceResult {
    pub fn m_k(&self) -> Option<f64> {
        self.value.map(|v| v.m_k)
    }

    pub fn m_tilde(&self) -> Option<f64> {
        self.value.map(|v| v.m_tilde)
    }
}

/// Maximal multiplicative persistence `max death/birth` in degree `k >= 1`.
///
/// Ties on the ratio go to the smallest birth. Fails with
/// [`Error::CapInsufficient`] if a degree-`k` class is alive at the cap.
pub fn max_persistence(dg: &PersistenceDiagram, k: usize) -> Result<MaxPersistenceResult> {
    if k == 0 {
        return Err(Error::invalid(
            "degree 0 classes are born at time 0; ratios are undefined",
        ));
    }
    dg.check_degree(k)?;
    let unpaired = dg.unpaired_at_cap(k);
    if unpaired > 0 {
        return Err(Error::CapInsufficient {
            degree: k,
            cap: dg.w_cap(),
            unpaired,
        });
    }
    let mut best: Option<(f64, f64, f64)> = None;
    // pairs are sorted by birth, so strict `>` keeps the smallest birth on ties
    for p in dg.pairs(k) {
        let Death::Finite(death) = p.death else {
            continue;
        };
        let ratio = death / p.birth;
        if best.is_none_or(|(r, _, _)| ratio > r) {
            best = Some((ratio, p.birth, death));
        }
    }
    let value = match best {
        None => None,
        Some((m_k, birth, death)) => {
            let n = dg.n();
            Some(MaxPersistence {
                m_k,
                m_tilde: m_k.ln() / (n as f64).ln(),
                ratio_f: m_k / f_k(n, k)?,
                birth,
                death,
            })
        }
    };
    Ok(MaxPersistenceResult { k, value })
}

/// Reference scale `f_k(n) = n^(1/(k(k+1))) (ln n)^(1/(k+1))`.
pub fn f_k(n: usize, k: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid(format!("f_k needs n >= 2, got {n}")));
    }
    if k == 0 {
        return Err(Error::invalid("f_k needs k >= 1"));
    }
    let nf = n as f64;
    let kf = k as f64;
    Ok(nf.powf(1.0 / (kf * (kf + 1.0))) * nf.ln().powf(1.0 / (kf + 1.0)))
}

/// A query `(k, p1, p2)` for the rank of `H_k(X(p1)) -> H_k(X(p2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankQuery {
    pub k: usize,
    pub p1: f64,
    pub p2: f64,
}

impl RankQuery {
    pub fn new(k: usize, p1: f64, p2: f64) -> Result<Self> {
        if !(0.0 <= p1 && p1 <= p2) {
            return Err(Error::invalid(format!(
                "rank query needs 0 <= p1 <= p2, got ({p1}, {p2})"
            )));
        }
        Ok(RankQuery { k, p1, p2 })
    }
}

/// Rank of the inclusion-induced map, read off the diagram as the number of
/// degree-`k` pairs born by `p1` and dying after `p2`.
pub fn rank_invariant(dg: &PersistenceDiagram, q: RankQuery) -> Result<usize> {
    if !(0.0 <= q.p1 && q.p1 <= q.p2) {
        return Err(Error::invalid(format!(
            "rank query needs 0 <= p1 <= p2, got ({}, {})",
            q.p1, q.p2
        )));
    }
    dg.check_degree(q.k)?;
    dg.check_threshold(q.p2)?;
    Ok(dg.count_spanning(q.k, q.p1, q.p2))
}

/// Leading-order expected Betti number `C(n, k+1) p^C(k+1, 2)`.
pub fn expected_betti(n: usize, k: usize, p: f64) -> Result<f64> {
    if n < k + 2 {
        return Err(Error::invalid(format!(
            "expected_betti needs n >= k + 2, got n={n}, k={k}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!(
            "expected_betti needs 0 < p < 1, got {p}"
        )));
    }
    let edges = ((k + 1) * k / 2) as f64;
    Ok((ln_binomial(n as u64, k as u64 + 1) + edges * p.ln()).exp())
}

/// `(n^(-1/k), ((k/2 + 1 + eps) ln n / n)^(1/(k+1)))`: the birth and death
/// scales bracketing the window where degree-`k` homology lives.
pub fn thresholds(n: usize, k: usize, eps: f64) -> Result<(f64, f64)> {
    if n < 2 || k == 0 {
        return Err(Error::invalid(format!(
            "thresholds need n >= 2 and k >= 1, got n={n}, k={k}"
        )));
    }
    let birth = (n as f64).powf(-1.0 / k as f64);
    Ok((birth, adaptive_cap(n, k, eps)))
}

/// `points` values from `lo` to `hi` with a constant ratio (inclusive).
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo <= hi) || points == 0 {
        return Err(Error::invalid(format!(
            "geometric grid needs 0 < lo <= hi and points >= 1, got ({lo}, {hi}, {points})"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi / lo).ln() / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| lo * (step * i as f64).exp()).collect();
    grid[points - 1] = hi;
    Ok(grid)
}

/// Mean, median and (sample) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let count = values.len();
    let mean = values.iter().sum::<f64>() / count as f64;
    let var = if count > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if count % 2 == 1 {
        sorted[count / 2]
    } else {
        0.5 * (sorted[count / 2 - 1] + sorted[count / 2])
    };
    Some(Summary {
        count,
        mean,
        median,
        std: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::EdgeFiltration;
    use crate::flag::FlagFiltration;
    use crate::persistence::compute_persistence;

    fn square_diagram() -> PersistenceDiagram {
        let ef = EdgeFiltration::from_edges(
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
        .unwrap();
        compute_persistence(&FlagFiltration::build(&ef, 2, 1.0).unwrap(), 1, 2).unwrap()
    }

    #[test]
    fn square_max_persistence() {
        let r = max_persistence(&square_diagram(), 1).unwrap();
        let v = r.value.unwrap();
        assert_eq!(v.m_k, 2.0);
        assert_eq!((v.birth, v.death), (0.4, 0.8));
        assert!((v.m_tilde - 0.5).abs() < 1e-15);
        assert!(max_persistence(&square_diagram(), 0).is_err());
        assert!(max_persistence(&square_diagram(), 2).is_err());
    }

    #[test]
    fn two_point_diagram() {
        use crate::persistence::PersistencePair;
        let pair = |b, d| PersistencePair {
            dim: 1,
            birth: b,
            death: Death::Finite(d),
        };
        let dg =
            PersistenceDiagram::from_parts(10, 1, 1.0, 2, vec![pair(0.1, 0.2), pair(0.2, 0.9)])
                .unwrap();
        let v = max_persistence(&dg, 1).unwrap().value.unwrap();
        assert!((v.m_k - 4.5).abs() < 1e-15);
        assert_eq!((v.birth, v.death), (0.2, 0.9));

        // rank invariant shrinks as the window widens
        let r = |a, b| rank_invariant(&dg, RankQuery::new(1, a, b).unwrap()).unwrap();
        assert_eq!(r(0.2, 0.5), 1);
        assert!(r(0.2, 0.5) >= r(0.15, 0.5));
        assert!(r(0.2, 0.5) >= r(0.2, 0.95));
        assert_eq!(r(0.15, 0.15), 1);

        // equal ratios resolve to the earlier birth
        let tie =
            PersistenceDiagram::from_parts(10, 1, 1.0, 2, vec![pair(0.2, 0.4), pair(0.1, 0.2)])
                .unwrap();
        let v = max_persistence(&tie, 1).unwrap().value.unwrap();
        assert_eq!(v.birth, 0.1);
    }

    #[test]
    fn empty_degree_is_none() {
        let ef = EdgeFiltration::from_weights(3, vec![0.1, 0.2, 0.3]).unwrap();
        let dg = compute_persistence(&FlagFiltration::build(&ef, 2, 1.0).unwrap(), 1, 2).unwrap();
        assert_eq!(max_persistence(&dg, 1).unwrap().value, None);
    }

    #[test]
    fn cap_insufficient() {
        let ef = EdgeFiltration::from_edges(
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
        .unwrap();
        let dg = compute_persistence(&FlagFiltration::build(&ef, 2, 0.5).unwrap(), 1, 2).unwrap();
        assert!(matches!(
            max_persistence(&dg, 1),
            Err(Error::CapInsufficient {
                degree: 1,
                unpaired: 1,
                ..
            })
        ));
    }

    #[test]
    fn f_k_values() {
        let f = f_k(250, 1).unwrap();
        assert!((f - (250.0 * 250f64.ln()).sqrt()).abs() < 1e-12);
        assert!((f - 37.15).abs() < 5e-3);
        for n in [2usize, 10, 1000, 123_456] {
            let f = f_k(n, 1).unwrap();
            let nf = n as f64;
            assert!((f * f - nf * nf.ln()).abs() <= 1e-12 * nf * nf.ln());
        }
        for k in 1..4 {
            let mut prev = f_k(3, k).unwrap();
            for n in 4..500 {
                let cur = f_k(n, k).unwrap();
                assert!(cur > prev);
                prev = cur;
            }
        }
        assert!(f_k(1, 1).is_err());
    }

    #[test]
    fn rank_invariant_square() {
        let dg = square_diagram();
        let q = |a, b| rank_invariant(&dg, RankQuery::new(1, a, b).unwrap()).unwrap();
        assert_eq!(q(0.5, 0.7), 1);
        assert_eq!(q(0.5, 0.9), 0);
        assert_eq!(q(0.5, 0.5), dg.betti_at(1, 0.5).unwrap());
        assert!(RankQuery::new(1, 0.6, 0.5).is_err());
    }

    #[test]
    fn expected_betti_values() {
        assert!((expected_betti(100, 1, 0.05).unwrap() - 247.5).abs() < 1e-9);
        assert!((expected_betti(10, 2, 0.5).unwrap() - 15.0).abs() < 1e-12);
        assert!(expected_betti(100, 1, 1e-300).unwrap() < 1e-290);
        assert!(expected_betti(3, 2, 0.5).is_err());
        assert!(expected_betti(10, 1, 1.0).is_err());
    }

    #[test]
    fn threshold_scales() {
        let (b, _) = thresholds(100, 1, 0.5).unwrap();
        assert!((b - 0.01).abs() < 1e-15);
        let (_, d) = thresholds(250, 1, 0.5).unwrap();
        assert!((d - (2.0 * 250f64.ln() / 250.0).sqrt()).abs() < 1e-15);
        assert!((d - 0.210).abs() < 5e-4);
        for k in 1..=3 {
            for n in 50..=500 {
                let (b, d) = thresholds(n, k, 0.5).unwrap();
                assert!(b < d, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn grid_and_summary() {
        let g = geometric_grid(0.01, 1.0, 3).unwrap();
        assert!((g[1] - 0.1).abs() < 1e-15);
        assert_eq!(g[2], 1.0);
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.median, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(summarize(&[]).is_none());
    }
}
