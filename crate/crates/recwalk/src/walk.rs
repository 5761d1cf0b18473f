//! Discrete-time walk simulation: one streaming pass computes every record
//! statistic the limit theorems talk about.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::SpitzerSeries;
use crate::step::{LatticeStepLaw, StepLaw};
use crate::stream::StreamFactory;
use crate::summary::EmpiricalSummary;
use crate::{Error, Result};

/// What to record along a walk beyond the always-on counters.
#[derive(Debug, Clone, Default)]
pub struct WalkConfig {
    /// Thresholds for sigma-records; a sigma of 0 reproduces weak records.
    pub sigmas: Vec<f64>,
    /// `(x1, x2)`: start the walk at `x1` and count weak records whose value
    /// is at least `x2`. The start counts iff `x1 >= x2`.
    pub threshold: Option<(f64, f64)>,
    /// Keep the ladder epoch/height lists (off in bulk Monte Carlo).
    pub collect_ladders: bool,
}

impl WalkConfig {
    pub fn with_sigmas(sigmas: Vec<f64>) -> Self {
        Self {
            sigmas,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigmas.iter().any(|&s| s.is_nan() || s < 0.0) {
            return Err(Error::InvalidParameter(
                "sigma thresholds must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Per-path record statistics. The start point counts as the first weak,
/// strong and sigma-record, so `1 <= r_strong <= r_weak <= n + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStats {
    pub n: usize,
    /// Weak records (new value >= running maximum), start included.
    pub r_weak: u64,
    /// Strong records (strictly above the running maximum), start included.
    pub r_strong: u64,
    /// Weak sigma-record counts, parallel to the configured sigmas.
    pub r_sigma: Vec<u64>,
    /// Running maximum `M_n` (including the start).
    pub max_val: f64,
    /// Count of `S_i >= 0` over i = 1..n.
    pub n_nonneg: u64,
    /// Count of `S_i > 0` over i = 1..n.
    pub n_pos: u64,
    /// Last position attaining the maximum, `L_{n,n}`.
    pub last_max_pos: usize,
    /// First position attaining the maximum, `L_{n,0}`.
    pub first_max_pos: usize,
    /// Waiting times between consecutive weak records (when collected).
    pub ladder_epochs: Vec<usize>,
    /// Increments between consecutive weak-record values (when collected).
    pub ladder_heights: Vec<f64>,
    /// Thresholded record count, when a threshold was configured.
    pub r_thresholded: Option<u64>,
}

/// Streaming accumulator behind [`run_walk`]; also reused by the brute-force
/// enumerator, which snapshots it per tree depth.
#[derive(Debug, Clone)]
pub struct RecordCounters {
    sigmas: Vec<f64>,
    sigma_last: Vec<f64>,
    threshold: Option<f64>,
    collect_ladders: bool,
    n: usize,
    s: f64,
    max_val: f64,
    r_weak: u64,
    r_strong: u64,
    r_sigma: Vec<u64>,
    n_nonneg: u64,
    n_pos: u64,
    last_max_pos: usize,
    first_max_pos: usize,
    r_thresholded: u64,
    last_record_pos: usize,
    last_record_val: f64,
    ladder_epochs: Vec<usize>,
    ladder_heights: Vec<f64>,
}

impl RecordCounters {
    pub fn new(config: &WalkConfig) -> Self {
        let (start, threshold) = match config.threshold {
            Some((x1, x2)) => (x1, Some(x2)),
            None => (0.0, None),
        };
        let k = config.sigmas.len();
        Self {
            sigmas: config.sigmas.clone(),
            sigma_last: vec![start; k],
            threshold,
            collect_ladders: config.collect_ladders,
            n: 0,
            s: start,
            max_val: start,
            r_weak: 1,
            r_strong: 1,
            r_sigma: vec![1; k],
            n_nonneg: 0,
            n_pos: 0,
            last_max_pos: 0,
            first_max_pos: 0,
            r_thresholded: u64::from(threshold.is_some_and(|x2| start >= x2)),
            last_record_pos: 0,
            last_record_val: start,
            ladder_epochs: Vec::new(),
            ladder_heights: Vec::new(),
        }
    }

    #[inline]
    pub fn push(&mut self, step: f64) {
        self.n += 1;
        self.s += step;
        let s = self.s;
        if s >= self.max_val {
            // Weak record; strong iff strictly above the old maximum.
            if s > self.max_val {
                self.r_strong += 1;
                self.first_max_pos = self.n;
            }
            self.r_weak += 1;
            self.last_max_pos = self.n;
            self.max_val = s;
            if let Some(x2) = self.threshold {
                if s >= x2 {
                    self.r_thresholded += 1;
                }
            }
            if self.collect_ladders {
                self.ladder_epochs.push(self.n - self.last_record_pos);
                self.ladder_heights.push(s - self.last_record_val);
                self.last_record_pos = self.n;
                self.last_record_val = s;
            }
        }
        if s >= 0.0 {
            self.n_nonneg += 1;
            if s > 0.0 {
                self.n_pos += 1;
            }
        }
        for j in 0..self.sigmas.len() {
            if s - self.sigma_last[j] >= self.sigmas[j] {
                self.r_sigma[j] += 1;
                self.sigma_last[j] = s;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn position(&self) -> f64 {
        self.s
    }

    pub fn weak_records(&self) -> u64 {
        self.r_weak
    }

    pub fn strong_records(&self) -> u64 {
        self.r_strong
    }

    pub fn max_val(&self) -> f64 {
        self.max_val
    }

    pub fn n_nonneg(&self) -> u64 {
        self.n_nonneg
    }

    pub fn n_pos(&self) -> u64 {
        self.n_pos
    }

    pub fn last_max_pos(&self) -> usize {
        self.last_max_pos
    }

    pub fn first_max_pos(&self) -> usize {
        self.first_max_pos
    }

    pub fn into_stats(self) -> TrajectoryStats {
        TrajectoryStats {
            n: self.n,
            r_weak: self.r_weak,
            r_strong: self.r_strong,
            r_sigma: self.r_sigma,
            max_val: self.max_val,
            n_nonneg: self.n_nonneg,
            n_pos: self.n_pos,
            last_max_pos: self.last_max_pos,
            first_max_pos: self.first_max_pos,
            ladder_epochs: self.ladder_epochs,
            ladder_heights: self.ladder_heights,
            r_thresholded: self.threshold.map(|_| self.r_thresholded),
        }
    }
}

/// Simulates one walk of `n` steps and returns all counters. Lattice walks
/// stay exact: integer partial sums are represented without rounding in f64.
pub fn run_walk(
    law: &StepLaw,
    n: usize,
    config: &WalkConfig,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<TrajectoryStats> {
    config.validate()?;
    let mut acc = RecordCounters::new(config);
    for _ in 0..n {
        acc.push(law.sample(rng));
    }
    Ok(acc.into_stats())
}

/// Computes statistics for an explicit step sequence (test and oracle use).
pub fn stats_of_steps(steps: &[f64], config: &WalkConfig) -> Result<TrajectoryStats> {
    config.validate()?;
    let mut acc = RecordCounters::new(config);
    for &x in steps {
        acc.push(x);
    }
    Ok(acc.into_stats())
}

/// Which per-path number a Monte Carlo run collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    WeakRecords,
    StrongRecords,
    /// Index into the configured sigma list.
    SigmaRecords(usize),
    MaxValue,
    NonnegCount,
    PosCount,
    LastMaxPos,
    FirstMaxPos,
    ThresholdedRecords,
}

impl Statistic {
    pub fn extract(&self, stats: &TrajectoryStats) -> f64 {
        match *self {
            Self::WeakRecords => stats.r_weak as f64,
            Self::StrongRecords => stats.r_strong as f64,
            Self::SigmaRecords(j) => stats.r_sigma[j] as f64,
            Self::MaxValue => stats.max_val,
            Self::NonnegCount => stats.n_nonneg as f64,
            Self::PosCount => stats.n_pos as f64,
            Self::LastMaxPos => stats.last_max_pos as f64,
            Self::FirstMaxPos => stats.first_max_pos as f64,
            Self::ThresholdedRecords => stats.r_thresholded.unwrap_or(0) as f64,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Self::WeakRecords => "r_weak".into(),
            Self::StrongRecords => "r_strong".into(),
            Self::SigmaRecords(j) => format!("r_sigma_{j}"),
            Self::MaxValue => "max_val".into(),
            Self::NonnegCount => "n_nonneg".into(),
            Self::PosCount => "n_pos".into(),
            Self::LastMaxPos => "last_max_pos".into(),
            Self::FirstMaxPos => "first_max_pos".into(),
            Self::ThresholdedRecords => "r_thresholded".into(),
        }
    }
}

/// Runs `reps` independent walks; replicate `r` draws from stream `r`, so
/// the output is a function of `(config, seed)` only, no matter how the
/// replicates are scheduled across threads.
pub fn monte_carlo(
    law: &StepLaw,
    n: usize,
    config: &WalkConfig,
    statistic: Statistic,
    reps: usize,
    factory: &StreamFactory,
) -> Result<EmpiricalSummary> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be >= 1".into()));
    }
    config.validate()?;
    if let Statistic::SigmaRecords(j) = statistic {
        if j >= config.sigmas.len() {
            return Err(Error::InvalidParameter(format!(
                "sigma statistic index {j} out of range ({} sigmas configured)",
                config.sigmas.len()
            )));
        }
    }
    let values: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = factory.stream(r);
            let mut acc = RecordCounters::new(config);
            for _ in 0..n {
                acc.push(law.sample(&mut rng));
            }
            statistic.extract(&acc.into_stats())
        })
        .collect();
    Ok(EmpiricalSummary::new(statistic.name(), values))
}

/// Histogram of final record counts for a walk drifting to -inf.
#[derive(Debug, Clone, Serialize)]
pub struct RInfinityEmpirical {
    /// `counts[m - 1]` = number of replicates with `R_inf = m`.
    pub counts: Vec<u64>,
    pub reps: usize,
    /// Truncation horizon every replicate ran to.
    pub cap: usize,
    /// Certified upper bound on P(some record happens after the cap).
    pub missed_record_bound: f64,
    /// Set when the 1e-4 certification target was not reachable.
    pub truncation_warning: bool,
}

/// Simulates `R_inf` by truncating walks at a certified cap: the expected
/// number of records after step c is `sum_{n>c} a_n`, bounded through the
/// series plus the Hoeffding tail, and the cap is the smallest c bringing
/// that below 1e-4.
pub fn empirical_r_infinity(
    law: &LatticeStepLaw,
    series: &SpitzerSeries,
    reps: usize,
    factory: &StreamFactory,
) -> Result<RInfinityEmpirical> {
    if series.drift != crate::exact::DriftClass::DriftsDown {
        return Err(Error::Precondition(
            "R_inf simulation requires a walk drifting to -inf".into(),
        ));
    }
    let horizon = series.horizon;
    // P(record at n) = a_n <= q_n, and q_n <= r^n beyond the horizon by the
    // same Hoeffding certificate as the defect tail, so
    // sum_{n > N} a_n <= (N + 1) * sum_q_over_k_tail.
    let beyond_horizon = series.sum_q_over_k_tail * (horizon as f64 + 1.0);
    // suffix_at[c - 1] bounds the expected number of records after step c.
    let mut suffix_at = vec![0.0; horizon];
    let mut suffix = beyond_horizon;
    for n in (1..=horizon).rev() {
        suffix_at[n - 1] = suffix;
        suffix += series.a[n];
    }
    let target = 1e-4;
    let cap = (1..=horizon)
        .find(|&c| suffix_at[c - 1] < target)
        .unwrap_or(horizon);
    let missed_record_bound = suffix_at[cap - 1];
    let truncation_warning = !missed_record_bound.is_finite() || missed_record_bound >= target;

    let law = StepLaw::Lattice(law.clone());
    let config = WalkConfig::default();
    let per_rep: Vec<u64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = factory.stream(r);
            let mut acc = RecordCounters::new(&config);
            for _ in 0..cap {
                acc.push(law.sample(&mut rng));
            }
            acc.weak_records()
        })
        .collect();
    let max_r = per_rep.iter().copied().max().unwrap_or(1) as usize;
    let mut counts = vec![0u64; max_r];
    for r in per_rep {
        counts[r as usize - 1] += 1;
    }
    Ok(RInfinityEmpirical {
        counts,
        reps,
        cap,
        missed_record_bound,
        truncation_warning,
    })
}
