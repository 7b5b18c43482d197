//! Seeded, parallel experiment sweeps and their CSV/JSON outputs.
//!
//! Sample `i` is a pure function of `(master_seed, i)`: the worker count
//! only changes how fast results arrive, never what they are. Results are
//! folded in sample-index order, and wall-clock times stay out of every
//! written file so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::EdgeFiltration;
use crate::flag::{adaptive_cap, FlagFiltration};
use crate::persistence::{compute_persistence, PersistenceDiagram};
use crate::special::{count_special_cycles, expected_special_cycles, witness_implies_persistence};
use crate::stats::{
    expected_betti, geometric_grid, max_persistence, rank_invariant, summarize, thresholds,
    MaxPersistenceResult, RankQuery, Summary,
};
use crate::util::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    MaxPersistence,
    SpecialCycles,
    RankSweep,
    BettiCurve,
}

/// How the weight cap is chosen and raised when classes survive it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapPolicy {
    /// `eps` passed to [`adaptive_cap`] for the first attempt.
    pub initial_eps: f64,
    /// Factor applied to the cap on each retry (the cap never exceeds 1).
    pub escalation: f64,
    pub max_retries: u32,
}

impl Default for CapPolicy {
    fn default() -> Self {
        CapPolicy {
            initial_eps: 0.5,
            escalation: 1.5,
            max_retries: 16,
        }
    }
}

/// Bounds `L_k <= M_k <= U_k` checked per sample for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub master_seed: u64,
    /// `eps` for the threshold window used to build default grids.
    pub eps: f64,
    /// Explicit `(p1, p2)` pairs; when absent a geometric grid between the
    /// threshold scales is used.
    pub grid: Option<Vec<(f64, f64)>>,
    /// Points in the default geometric grid.
    pub grid_points: usize,
    pub cap_policy: CapPolicy,
    pub characteristic: u32,
    pub bins: usize,
    /// Output directory; nothing is written when absent.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 lets the thread pool decide.
    pub workers: usize,
    pub band: Option<Band>,
    /// For special-cycle runs: also compute persistence and check that
    /// every witness forces a long-lived class.
    pub verify_witnesses: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::MaxPersistence,
            n: 100,
            k: 1,
            samples: 100,
            master_seed: 0,
            eps: 0.5,
            grid: None,
            grid_points: 8,
            cap_policy: CapPolicy::default(),
            characteristic: 2,
            bins: 30,
            out_dir: None,
            workers: 0,
            band: None,
            verify_witnesses: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.samples == 0 {
            return Err(Error::invalid("samples must be at least 1"));
        }
        if self.bins == 0 {
            return Err(Error::invalid("bins must be at least 1"));
        }
        if self.grid_points == 0 {
            return Err(Error::invalid("grid_points must be at least 1"));
        }
        let cp = &self.cap_policy;
        if !(cp.initial_eps > 0.0) || !(cp.escalation > 1.0) {
            return Err(Error::invalid(
                "cap policy needs initial_eps > 0 and escalation > 1",
            ));
        }
        if !(self.eps > 0.0) {
            return Err(Error::invalid("eps must be positive"));
        }
        crate::field::PrimeField::new(self.characteristic)?;
        if let Some(grid) = &self.grid {
            if grid.is_empty() {
                return Err(Error::invalid("grid must not be empty"));
            }
            for &(p1, p2) in grid {
                if !(p1 > 0.0 && p1 <= p2 && p2 <= 1.0) {
                    return Err(Error::invalid(format!(
                        "grid pair ({p1}, {p2}) needs 0 < p1 <= p2 <= 1"
                    )));
                }
            }
        }
        if self.kind != ExperimentKind::MaxPersistence && self.n < 2 {
            return Err(Error::invalid("sweeps need n >= 2"));
        }
        if let Some(b) = self.band {
            if !(b.lower <= b.upper) {
                return Err(Error::invalid("band needs lower <= upper"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Geometric grid between the birth and death scales of degree `k`.
    pub fn threshold_grid(&self) -> Result<Vec<f64>> {
        let (lo, hi) = thresholds(self.n, self.k, self.eps)?;
        geometric_grid(lo, hi.max(lo), self.grid_points)
    }

    /// The `(p1, p2)` pairs swept by special-cycle and rank runs.
    pub fn window_pairs(&self) -> Result<Vec<(f64, f64)>> {
        if let Some(grid) = &self.grid {
            return Ok(grid.clone());
        }
        let g = self.threshold_grid()?;
        let mut pairs = Vec::new();
        for i in 0..g.len() {
            for j in i..g.len() {
                pairs.push((g[i], g[j]));
            }
        }
        Ok(pairs)
    }

    /// Thresholds for Betti curves: the explicit grid's `p1` values, or
    /// the default geometric grid.
    pub fn curve_thresholds(&self) -> Result<Vec<f64>> {
        match &self.grid {
            Some(grid) => Ok(grid.iter().map(|p| p.0).collect()),
            None => self.threshold_grid(),
        }
    }

    /// Lowest cap the sweep needs so every queried threshold is covered.
    fn min_cap(&self) -> Result<f64> {
        Ok(match self.kind {
            ExperimentKind::MaxPersistence => 0.0,
            ExperimentKind::SpecialCycles if !self.verify_witnesses => 0.0,
            ExperimentKind::SpecialCycles | ExperimentKind::RankSweep => {
                self.window_pairs()?.iter().map(|p| p.1).fold(0.0, f64::max)
            }
            ExperimentKind::BettiCurve => {
                self.curve_thresholds()?.iter().copied().fold(0.0, f64::max)
            }
        })
    }
}

/// A diagram computed under a cap policy, with the cap that sufficed.
#[derive(Debug, Clone)]
pub struct CappedDiagram {
    pub diagram: PersistenceDiagram,
    pub cap: f64,
    pub retries: u32,
}

/// Computes persistence in degrees `0..=k_max`, starting from
/// `adaptive_cap(n, k_max, initial_eps)` (at least `min_cap`) and raising
/// the cap by `escalation` until no class of degree `1..=k_max` is alive
/// at it. Returns `Ok(Err(last_cap))` if retries run out first.
pub fn persistence_with_cap_policy(
    ef: &EdgeFiltration,
    k_max: usize,
    characteristic: u32,
    policy: &CapPolicy,
    min_cap: f64,
) -> Result<std::result::Result<CappedDiagram, (f64, u32)>> {
    let n = ef.n();
    let mut cap = if n < 2 {
        1.0
    } else {
        adaptive_cap(n, k_max, policy.initial_eps)
    };
    cap = cap.max(min_cap).min(1.0);
    if !(cap > 0.0) {
        cap = 1.0;
    }
    let mut retries = 0;
    loop {
        let ff = FlagFiltration::build(ef, k_max + 1, cap)?;
        let diagram = compute_persistence(&ff, k_max, characteristic)?;
        if diagram.first_degree_alive_at_cap().is_none() {
            return Ok(Ok(CappedDiagram {
                diagram,
                cap,
                retries,
            }));
        }
        if retries >= policy.max_retries || cap >= 1.0 {
            return Ok(Err((cap, retries)));
        }
        cap = (cap * policy.escalation).min(1.0);
        retries += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStatus {
    Ok,
    CapFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub sample_index: u64,
    pub status: SampleStatus,
    /// Degrees `1..=k`, for runs that compute persistence.
    pub max_persistence: Vec<MaxPersistenceResult>,
    /// `N_k` per window pair (special-cycle runs).
    pub special_counts: Vec<u64>,
    /// Witness checks that failed (special-cycle runs with verification).
    pub witness_violations: Vec<String>,
    /// Rank invariant per window pair (rank sweeps).
    pub ranks: Vec<usize>,
    /// `beta_k` per curve threshold (Betti curves).
    pub betti: Vec<usize>,
    /// Cap in force for the final diagram; `None` without persistence.
    pub cap: Option<f64>,
    pub retries: u32,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SampleResult {
    fn new(sample_index: u64) -> Self {
        SampleResult {
            sample_index,
            status: SampleStatus::Ok,
            max_persistence: Vec::new(),
            special_counts: Vec::new(),
            witness_violations: Vec::new(),
            ranks: Vec::new(),
            betti: Vec::new(),
            cap: None,
            retries: 0,
            wall_time: Duration::ZERO,
        }
    }

    /// Degree-`k` result, if computed.
    pub fn degree(&self, k: usize) -> Option<&MaxPersistenceResult> {
        self.max_persistence.iter().find(|r| r.k == k)
    }
}

/// Runs the pipeline for one sample.
pub fn run_sample(cfg: &ExperimentConfig, sample_index: u64) -> Result<SampleResult> {
    let start = Instant::now();
    let ef = EdgeFiltration::sample(cfg.n, cfg.master_seed, sample_index)?;
    let mut out = SampleResult::new(sample_index);
    let needs_persistence = match cfg.kind {
        ExperimentKind::SpecialCycles => cfg.verify_witnesses,
        _ => true,
    };
    let diagram = if needs_persistence {
        match persistence_with_cap_policy(
            &ef,
            cfg.k,
            cfg.characteristic,
            &cfg.cap_policy,
            cfg.min_cap()?,
        )? {
            Ok(c) => {
                out.cap = Some(c.cap);
                out.retries = c.retries;
                Some(c.diagram)
            }
            Err((cap, retries)) => {
                out.status = SampleStatus::CapFailed;
                out.cap = Some(cap);
                out.retries = retries;
                out.wall_time = start.elapsed();
                return Ok(out);
            }
        }
    } else {
        None
    };

    match cfg.kind {
        ExperimentKind::MaxPersistence => {
            let dg = diagram.as_ref().expect("persistence computed");
            for k in 1..=cfg.k {
                out.max_persistence.push(max_persistence(dg, k)?);
            }
        }
        ExperimentKind::SpecialCycles => {
            for (p1, p2) in cfg.window_pairs()? {
                match &diagram {
                    Some(dg) => {
                        let report = witness_implies_persistence(&ef, cfg.k, p1, p2, dg)?;
                        out.special_counts.push(report.count);
                        out.witness_violations.extend(
                            report
                                .violations
                                .into_iter()
                                .map(|v| format!("({}, {}): {v}", fmt_f64(p1), fmt_f64(p2))),
                        );
                    }
                    None => {
                        out.special_counts
                            .push(count_special_cycles(&ef, cfg.k, p1, p2, false)?.count);
                    }
                }
            }
        }
        ExperimentKind::RankSweep => {
            let dg = diagram.as_ref().expect("persistence computed");
            for (p1, p2) in cfg.window_pairs()? {
                out.ranks
                    .push(rank_invariant(dg, RankQuery::new(cfg.k, p1, p2)?)?);
            }
        }
        ExperimentKind::BettiCurve => {
            let dg = diagram.as_ref().expect("persistence computed");
            for t in cfg.curve_thresholds()? {
                out.betti.push(dg.betti_at(cfg.k, t)?);
            }
        }
    }
    out.wall_time = start.elapsed();
    Ok(out)
}

/// Runs all samples on a pool of `cfg.workers` threads, in index order.
pub fn run_samples(cfg: &ExperimentConfig) -> Result<Vec<SampleResult>> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if cfg.workers > 0 {
        builder = builder.num_threads(cfg.workers);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| run_sample(cfg, i))
            .collect()
    })
}

/// Equal-width histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// CSV with header `bin_lo,bin_hi,count`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{c}",
                fmt_f64(self.edges[i]),
                fmt_f64(self.edges[i + 1])
            );
        }
        out
    }
}

/// Bins `values` into `bins` equal-width bins over `[min, max]`.
///
/// Bins are right-open except the last, which is closed. When all values
/// are equal the range is widened to `v ± 4·EPSILON·max(|v|, 1)`, which
/// puts all the mass in a single bin.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyHistogram);
    }
    if bins == 0 {
        return Err(Error::invalid("bins must be at least 1"));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite histogram value {bad}")));
    }
    let mut lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        let pad = 4.0 * f64::EPSILON * lo.abs().max(1.0);
        lo -= pad;
        hi += pad;
    }
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    edges[bins] = hi;
    let mut counts = vec![0u64; bins];
    for &v in values {
        let mut b = (((v - lo) / width) as usize).min(bins - 1);
        // keep the assignment consistent with the printed edges
        while b > 0 && v < edges[b] {
            b -= 1;
        }
        while b + 1 < bins && v >= edges[b + 1] {
            b += 1;
        }
        counts[b] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Aggregates for a max-persistence run (degree `k` of the config).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxPersistenceSummary {
    pub k: usize,
    /// `1 / (k (k + 1))`, the limit of `M̃_k`.
    pub reference_m_tilde: f64,
    pub none_tally: u64,
    pub m_k: Option<Summary>,
    pub m_tilde: Option<Summary>,
    pub ratio_f: Option<Summary>,
    pub histogram_m_tilde: Option<Histogram>,
    pub histogram_ratio_f: Option<Histogram>,
    /// Fraction of defined samples with `L_k <= M_k <= U_k`.
    pub band_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub p1: f64,
    pub p2: f64,
    pub samples: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub var: f64,
    /// Closed-form expectation where one exists.
    pub expected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub t: f64,
    pub samples: u64,
    pub mean: f64,
    pub expected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    /// The run's config with `out_dir` and `workers` cleared.
    pub config: ExperimentConfig,
    pub samples: u64,
    pub completed: u64,
    pub cap_failed: u64,
    pub max_retries_used: u32,
    pub max_persistence: Option<MaxPersistenceSummary>,
    pub windows: Vec<WindowSummary>,
    pub curve: Vec<CurveSummary>,
    pub witness_violations: u64,
}

fn mean_var(values: &[f64]) -> (f64, f64) {
    let s = values.len() as f64;
    let mean = values.iter().sum::<f64>() / s;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Deterministic fold of per-sample results (which must be in index order).
pub fn aggregate(cfg: &ExperimentConfig, results: &[SampleResult]) -> Result<ExperimentSummary> {
    let ok: Vec<&SampleResult> = results
        .iter()
        .filter(|r| r.status == SampleStatus::Ok)
        .collect();
    let completed = ok.len() as u64;
    let mut summary = ExperimentSummary {
        // where and how the run executed must not leak into its outputs
        config: ExperimentConfig {
            out_dir: None,
            workers: 0,
            ..cfg.clone()
        },
        samples: results.len() as u64,
        completed,
        cap_failed: results.len() as u64 - completed,
        max_retries_used: results.iter().map(|r| r.retries).max().unwrap_or(0),
        max_persistence: None,
        windows: Vec::new(),
        curve: Vec::new(),
        witness_violations: ok.iter().map(|r| r.witness_violations.len() as u64).sum(),
    };
    match cfg.kind {
        ExperimentKind::MaxPersistence => {
            let k = cfg.k;
            let values: Vec<_> = ok.iter().filter_map(|r| r.degree(k)?.value).collect();
            let none_tally = completed - values.len() as u64;
            let m_k: Vec<f64> = values.iter().map(|v| v.m_k).collect();
            let m_tilde: Vec<f64> = values.iter().map(|v| v.m_tilde).collect();
            let ratio_f: Vec<f64> = values.iter().map(|v| v.ratio_f).collect();
            let hist = |xs: &[f64]| -> Result<Option<Histogram>> {
                if xs.is_empty() {
                    Ok(None)
                } else {
                    histogram(xs, cfg.bins).map(Some)
                }
            };
            let band_fraction = match (cfg.band, m_k.is_empty()) {
                (Some(b), false) => Some(
                    m_k.iter()
                        .filter(|&&m| b.lower <= m && m <= b.upper)
                        .count() as f64
                        / m_k.len() as f64,
                ),
                _ => None,
            };
            summary.max_persistence = Some(MaxPersistenceSummary {
                k,
                reference_m_tilde: 1.0 / (k * (k + 1)) as f64,
                none_tally,
                m_k: summarize(&m_k),
                m_tilde: summarize(&m_tilde),
                ratio_f: summarize(&ratio_f),
                histogram_m_tilde: hist(&m_tilde)?,
                histogram_ratio_f: hist(&ratio_f)?,
                band_fraction,
            });
        }
        ExperimentKind::SpecialCycles | ExperimentKind::RankSweep => {
            let pairs = cfg.window_pairs()?;
            if completed > 0 {
                for (i, &(p1, p2)) in pairs.iter().enumerate() {
                    let xs: Vec<f64> = ok
                        .iter()
                        .map(|r| match cfg.kind {
                            ExperimentKind::SpecialCycles => r.special_counts[i] as f64,
                            _ => r.ranks[i] as f64,
                        })
                        .collect();
                    let (mean, var) = mean_var(&xs);
                    let expected = match cfg.kind {
                        ExperimentKind::SpecialCycles => {
                            Some(expected_special_cycles(cfg.n, cfg.k, p1, p2)?)
                        }
                        _ => None,
                    };
                    summary.windows.push(WindowSummary {
                        p1,
                        p2,
                        samples: completed,
                        mean,
                        var,
                        expected,
                    });
                }
            }
        }
        ExperimentKind::BettiCurve => {
            if completed > 0 {
                for (i, t) in cfg.curve_thresholds()?.into_iter().enumerate() {
                    let xs: Vec<f64> = ok.iter().map(|r| r.betti[i] as f64).collect();
                    let (mean, _) = mean_var(&xs);
                    summary.curve.push(CurveSummary {
                        t,
                        samples: completed,
                        mean,
                        expected: expected_betti(cfg.n, cfg.k, t).ok(),
                    });
                }
            }
        }
    }
    Ok(summary)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn opt(x: Option<f64>) -> String {
    fmt_f64(x.unwrap_or(f64::NAN))
}

/// Per-sample max-persistence CSV:
/// `sample_index,n,k,M_k,M_tilde,ratio_f,birth,death`, `nan` for empty
/// diagrams, one row per computed degree.
pub fn max_persistence_csv(cfg: &ExperimentConfig, results: &[SampleResult]) -> String {
    let mut out = String::from("sample_index,n,k,M_k,M_tilde,ratio_f,birth,death\n");
    for r in results.iter().filter(|r| r.status == SampleStatus::Ok) {
        for m in &r.max_persistence {
            let v = m.value;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.sample_index,
                cfg.n,
                m.k,
                opt(v.map(|v| v.m_k)),
                opt(v.map(|v| v.m_tilde)),
                opt(v.map(|v| v.ratio_f)),
                opt(v.map(|v| v.birth)),
                opt(v.map(|v| v.death)),
            );
        }
    }
    out
}

/// Writes every output file of a run into `dir` and returns their paths.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    results: &[SampleResult],
    summary: &ExperimentSummary,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let mut status = String::from("sample_index,status,cap,retries\n");
    for r in results {
        let tag = match r.status {
            SampleStatus::Ok => "ok",
            SampleStatus::CapFailed => "cap-failed",
        };
        let _ = writeln!(
            status,
            "{},{tag},{},{}",
            r.sample_index,
            opt(r.cap),
            r.retries
        );
    }
    written.push(write_file(dir, "status.csv", &status)?);

    let ok = results.iter().filter(|r| r.status == SampleStatus::Ok);
    match cfg.kind {
        ExperimentKind::MaxPersistence => {
            written.push(write_file(
                dir,
                "samples.csv",
                &max_persistence_csv(cfg, results),
            )?);
            if let Some(mp) = &summary.max_persistence {
                if let Some(h) = &mp.histogram_m_tilde {
                    written.push(write_file(
                        dir,
                        "histogram_m_tilde.csv",
                        &h.to_csv_string(),
                    )?);
                }
                if let Some(h) = &mp.histogram_ratio_f {
                    written.push(write_file(
                        dir,
                        "histogram_ratio_f.csv",
                        &h.to_csv_string(),
                    )?);
                }
            }
        }
        ExperimentKind::SpecialCycles => {
            let pairs = cfg.window_pairs()?;
            let mut rows = String::from("n,k,p1,p2,sample_index,N_k\n");
            for r in ok {
                for (&(p1, p2), c) in pairs.iter().zip(&r.special_counts) {
                    let _ = writeln!(
                        rows,
                        "{},{},{},{},{},{c}",
                        cfg.n,
                        cfg.k,
                        fmt_f64(p1),
                        fmt_f64(p2),
                        r.sample_index
                    );
                }
            }
            written.push(write_file(dir, "special_samples.csv", &rows)?);
            let mut sum = String::from("n,k,p1,p2,samples,mean_N,var_N,expected_N\n");
            for w in &summary.windows {
                let _ = writeln!(
                    sum,
                    "{},{},{},{},{},{},{},{}",
                    cfg.n,
                    cfg.k,
                    fmt_f64(w.p1),
                    fmt_f64(w.p2),
                    w.samples,
                    fmt_f64(w.mean),
                    fmt_f64(w.var),
                    opt(w.expected)
                );
            }
            written.push(write_file(dir, "special_summary.csv", &sum)?);
        }
        ExperimentKind::RankSweep => {
            let pairs = cfg.window_pairs()?;
            let mut rows = String::from("sample_index,n,k,p1,p2,rank\n");
            for r in ok {
                for (&(p1, p2), rank) in pairs.iter().zip(&r.ranks) {
                    let _ = writeln!(
                        rows,
                        "{},{},{},{},{},{rank}",
                        r.sample_index,
                        cfg.n,
                        cfg.k,
                        fmt_f64(p1),
                        fmt_f64(p2)
                    );
                }
            }
            written.push(write_file(dir, "rank_samples.csv", &rows)?);
            let mut sum = String::from("n,k,p1,p2,samples,mean_rank,var_rank\n");
            for w in &summary.windows {
                let _ = writeln!(
                    sum,
                    "{},{},{},{},{},{},{}",
                    cfg.n,
                    cfg.k,
                    fmt_f64(w.p1),
                    fmt_f64(w.p2),
                    w.samples,
                    fmt_f64(w.mean),
                    fmt_f64(w.var)
                );
            }
            written.push(write_file(dir, "rank_summary.csv", &sum)?);
        }
        ExperimentKind::BettiCurve => {
            let ts = cfg.curve_thresholds()?;
            let mut rows = String::from("sample_index,n,k,t,betti\n");
            for r in ok {
                for (&t, b) in ts.iter().zip(&r.betti) {
                    let _ = writeln!(
                        rows,
                        "{},{},{},{},{b}",
                        r.sample_index,
                        cfg.n,
                        cfg.k,
                        fmt_f64(t)
                    );
                }
            }
            written.push(write_file(dir, "betti_samples.csv", &rows)?);
            let mut sum = String::from("n,k,t,samples,mean_betti,expected_betti\n");
            for c in &summary.curve {
                let _ = writeln!(
                    sum,
                    "{},{},{},{},{},{}",
                    cfg.n,
                    cfg.k,
                    fmt_f64(c.t),
                    c.samples,
                    fmt_f64(c.mean),
                    opt(c.expected)
                );
            }
            written.push(write_file(dir, "betti_summary.csv", &sum)?);
        }
    }
    let json = serde_json::to_string_pretty(summary)?;
    written.push(write_file(dir, "summary.json", &(json + "\n"))?);
    Ok(written)
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub results: Vec<SampleResult>,
    pub summary: ExperimentSummary,
    pub files: Vec<PathBuf>,
    pub elapsed: Duration,
}

/// Runs, aggregates and (when `cfg.out_dir` is set) writes a full sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let results = run_samples(cfg)?;
    let summary = aggregate(cfg, &results)?;
    let files = match &cfg.out_dir {
        Some(dir) => write_outputs(cfg, &results, &summary, dir)?,
        None => Vec::new(),
    };
    Ok(ExperimentOutput {
        results,
        summary,
        files,
        elapsed: start.elapsed(),
    })
}
