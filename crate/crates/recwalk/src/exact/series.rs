//! Spitzer-series computations: exceedance probabilities, last-maximum
//! coefficients, ladder-epoch law, defect certificates, `C_rho`, and the
//! geometric laws of `R_inf` and `M_inf`.

use crate::step::{kahan_sum, LatticeStepLaw};
use crate::{Error, Result};

/// Convolution cells the exceedance DP may touch before refusing.
const CELL_CAP: u128 = 16_000_000_000;

/// Tolerance below which a lattice mean counts as zero (oscillating walk).
const MEAN_TOL: f64 = 1e-9;

/// A certified enclosure `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Drift trichotomy of a random walk. For bounded lattice steps the sign of
/// the mean decides it: negative mean walks drift to -inf (and Hoeffding
/// certifies the `sum q_k / k` tail), positive mean walks drift to +inf,
/// zero-mean non-degenerate walks oscillate and both series diverge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftClass {
    Oscillates,
    DriftsUp,
    DriftsDown,
}

/// The raw ingredient of every identity here: `q_k = P(S_k >= 0)` and its
/// strict sibling `P(S_k > 0)`, indexed so that `q[k]` is the value at k
/// (`q[0] = 1`).
#[derive(Debug, Clone)]
pub struct Exceedance {
    pub q: Vec<f64>,
    pub q_strict: Vec<f64>,
}

/// Exact convolution of the step pmf over the window `[k*lo, k*hi]`.
pub fn exceedance_probs(law: &LatticeStepLaw, horizon: usize) -> Result<Exceedance> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let lo = law.support_lo();
    let width = (law.support_hi() - lo) as usize;
    let cells = (horizon as u128) * (horizon as u128) * (width as u128 + 1);
    if cells > CELL_CAP {
        return Err(Error::ResourceCap(format!(
            "exceedance DP would touch {cells} cells (cap {CELL_CAP}); shrink the horizon or the support"
        )));
    }

    let support: Vec<(usize, f64)> = law
        .pmf()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(j, &p)| (j, p))
        .collect();

    let mut q = vec![1.0; horizon + 1];
    let mut q_strict = vec![1.0; horizon + 1];
    q_strict[0] = 0.0; // S_0 = 0 is not strictly positive

    // dist[i] = P(S_k = k*lo + i)
    let mut dist = vec![1.0f64];
    let mut next: Vec<f64> = Vec::new();
    for k in 1..=horizon {
        next.clear();
        next.resize(dist.len() + width, 0.0);
        for &(j, p) in &support {
            for (i, &m) in dist.iter().enumerate() {
                next[i + j] += m * p;
            }
        }
        std::mem::swap(&mut dist, &mut next);
        let offset = k as i64 * lo;
        // First index with position >= 0.
        let start = (-offset).max(0) as usize;
        if start >= dist.len() {
            q[k] = 0.0;
            q_strict[k] = 0.0;
            continue;
        }
        let nonneg = kahan_sum(dist[start..].iter().copied());
        q[k] = nonneg.min(1.0);
        let atom = if offset <= 0 { dist[start] } else { 0.0 };
        q_strict[k] = (nonneg - atom).clamp(0.0, 1.0);
    }
    Ok(Exceedance { q, q_strict })
}

/// Coefficients of `exp(sum_k q_k y^k / k)`: `a_n = P(L_{n,n} = n)`, the
/// probability that the walk sits at its running maximum at step n. Uses
/// the log-derivative recurrence `n a_n = sum_{k=1}^{n} q_k a_{n-k}`.
pub fn spitzer_exp(q: &[f64]) -> Vec<f64> {
    let n_max = q.len() - 1;
    let mut a = vec![0.0; n_max + 1];
    a[0] = 1.0;
    for n in 1..=n_max {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += q[k] * a[n - k];
        }
        a[n] = acc / n as f64;
    }
    a
}

/// Ladder-epoch pmf `t_n = P(T1 = n)` from
/// `E(y^T1) = 1 - exp(-sum_k q_k y^k / k)`: with `d` the coefficients of the
/// exponential, `n d_n = -sum_{k=1}^{n} q_k d_{n-k}` and `t_n = -d_n`.
pub fn ladder_epoch_pmf(q: &[f64]) -> Vec<f64> {
    let n_max = q.len() - 1;
    let mut d = vec![0.0; n_max + 1];
    d[0] = 1.0;
    for n in 1..=n_max {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += q[k] * d[n - k];
        }
        d[n] = -acc / n as f64;
    }
    let mut t = d;
    t[0] = 0.0;
    for v in t.iter_mut().skip(1) {
        *v = -*v;
    }
    t
}

/// The exact-computation backbone for one lattice law:
/// exceedance arrays, last-maximum coefficients (weak and strict), the
/// ladder-epoch pmf for weak and strong records, and certified defect and
/// mean-waiting-time enclosures.
#[derive(Debug, Clone)]
pub struct SpitzerSeries {
    pub horizon: usize,
    /// `q[k] = P(S_k >= 0)`.
    pub q: Vec<f64>,
    /// `P(S_k > 0)`.
    pub q_strict: Vec<f64>,
    /// `a[n] = P(L_{n,n} = n)`, weak records.
    pub a: Vec<f64>,
    /// `P(L_{n,0} = n)`, strong records (first maximum at n).
    pub a_strict: Vec<f64>,
    /// `t[n] = P(T1 = n)`, waiting time for the next weak record.
    pub t: Vec<f64>,
    /// Waiting time for the next strong record.
    pub t_strict: Vec<f64>,
    pub drift: DriftClass,
    pub mean: f64,
    /// `P(T1 = inf) = exp(-sum q_k/k)`; `[0,0]` unless the walk drifts down.
    pub defect: Interval,
    /// Strong-record defect `exp(-sum P(S_k > 0)/k)`.
    pub defect_strict: Interval,
    /// Partial sum `sum_{k<=N} q_k/k` plus a certified bound on its tail.
    pub sum_q_over_k: f64,
    pub sum_q_over_k_tail: f64,
    /// Same for `sum P(S_k < 0)/k`, which controls `E(T1)` for walks
    /// drifting up.
    pub sum_neg_over_k: f64,
    pub sum_neg_over_k_tail: f64,
}

impl SpitzerSeries {
    pub fn compute(law: &LatticeStepLaw, horizon: usize) -> Result<Self> {
        let Exceedance { q, q_strict } = exceedance_probs(law, horizon)?;
        let a = spitzer_exp(&q);
        let a_strict = spitzer_exp(&q_strict);
        let t = ladder_epoch_pmf(&q);
        let t_strict = ladder_epoch_pmf(&q_strict);

        let mean = law.mean();
        let drift = if mean.abs() <= MEAN_TOL {
            DriftClass::Oscillates
        } else if mean > 0.0 {
            DriftClass::DriftsUp
        } else {
            DriftClass::DriftsDown
        };
        // Hoeffding: for bounded steps, P(S_k - k mean >= k |mean|) <= r^k.
        let width = (law.support_hi() - law.support_lo()) as f64;
        let rate = (-2.0 * mean * mean / (width * width)).exp();
        let geom_tail = |n: usize| -> f64 {
            if rate >= 1.0 - 1e-15 {
                f64::INFINITY
            } else {
                rate.powi(n as i32 + 1) / ((n as f64 + 1.0) * (1.0 - rate))
            }
        };

        let sum_q_over_k = kahan_sum((1..=horizon).map(|k| q[k] / k as f64));
        let sum_strict_over_k = kahan_sum((1..=horizon).map(|k| q_strict[k] / k as f64));
        let sum_neg_over_k = kahan_sum((1..=horizon).map(|k| (1.0 - q[k]) / k as f64));

        let (defect, defect_strict, sum_q_over_k_tail) = match drift {
            DriftClass::DriftsDown => {
                let tail = geom_tail(horizon);
                let defect = Interval {
                    lo: (-(sum_q_over_k + tail)).exp(),
                    hi: (-sum_q_over_k).exp(),
                };
                let defect_strict = Interval {
                    lo: (-(sum_strict_over_k + tail)).exp(),
                    hi: (-sum_strict_over_k).exp(),
                };
                (defect, defect_strict, tail)
            }
            // Oscillating and upward-drifting walks renew forever:
            // sum q_k/k diverges, so the defect is exactly zero.
            _ => (Interval::point(0.0), Interval::point(0.0), f64::INFINITY),
        };
        let sum_neg_over_k_tail = match drift {
            DriftClass::DriftsUp => geom_tail(horizon),
            _ => f64::INFINITY,
        };

        Ok(Self {
            horizon,
            q,
            q_strict,
            a,
            a_strict,
            t,
            t_strict,
            drift,
            mean,
            defect,
            defect_strict,
            sum_q_over_k,
            sum_q_over_k_tail,
            sum_neg_over_k,
            sum_neg_over_k_tail,
        })
    }

    /// `E(T1) = exp(sum_k P(S_k < 0)/k)`, finite exactly when the walk
    /// drifts to +inf.
    pub fn expected_ladder_epoch(&self) -> Option<Interval> {
        match self.drift {
            DriftClass::DriftsUp => Some(Interval {
                lo: self.sum_neg_over_k.exp(),
                hi: (self.sum_neg_over_k + self.sum_neg_over_k_tail).exp(),
            }),
            _ => None,
        }
    }

    /// Mass accounting: `sum_{n<=N} t_n + defect` should not exceed 1.
    pub fn epoch_mass(&self) -> f64 {
        kahan_sum(self.t.iter().copied()) + self.defect.mid()
    }
}

/// Estimates the Spitzer parameter `rho = lim P(S_n >= 0)` from the tail of
/// the computed `q` array (mean over the last half of the horizon).
pub fn estimate_rho(q: &[f64]) -> f64 {
    let n = q.len() - 1;
    let from = (n / 2).max(1);
    kahan_sum(q[from..=n].iter().copied()) / (n - from + 1) as f64
}

/// Value of the slowly varying factor with a crude remainder bound.
#[derive(Debug, Clone, Copy)]
pub struct CRhoValue {
    pub value: f64,
    /// Bound on the truncated series tail's effect on `log C`.
    pub log_remainder: f64,
    /// Set when `|q_k - rho|` shows no decay over the horizon, which
    /// usually means the supplied `rho` is wrong.
    pub no_decay_warning: bool,
}

/// `C_rho` at series argument `x` in `[0, 1)`:
/// `exp(sum_k x^k (q_k - rho)/k)`.
pub fn c_rho_at(q: &[f64], rho: f64, x: f64) -> Result<CRhoValue> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "series argument {x} outside [0,1)"
        )));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho {rho} outside [0,1]")));
    }
    let n = q.len() - 1;
    let mut log_c = 0.0;
    let mut comp = 0.0;
    let mut xk = 1.0;
    for (k, &qk) in q.iter().enumerate().skip(1) {
        xk *= x;
        let term = xk * (qk - rho) / k as f64;
        let y = term - comp;
        let t = log_c + y;
        comp = (t - log_c) - y;
        log_c = t;
    }
    // |tail| <= sup_{k>N} |q_k - rho| * x^{N+1} / ((N+1)(1-x)).
    let window = (n / 10).max(1);
    let head_dev = q[1..=window.min(n)]
        .iter()
        .map(|&v| (v - rho).abs())
        .fold(0.0, f64::max);
    let tail_dev = q[n.saturating_sub(window).max(1)..=n]
        .iter()
        .map(|&v| (v - rho).abs())
        .fold(0.0, f64::max);
    let log_remainder = tail_dev * xk * x / ((n as f64 + 1.0) * (1.0 - x));
    let no_decay_warning = tail_dev > 0.8 * head_dev && tail_dev > 1e-3;
    Ok(CRhoValue {
        value: log_c.exp(),
        log_remainder,
        no_decay_warning,
    })
}

/// `C_rho(1 - 1/n)`, the normalization the limit theorems use.
pub fn c_rho(q: &[f64], rho: f64, n: f64) -> Result<CRhoValue> {
    if n < 1.0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    c_rho_at(q, rho, 1.0 - 1.0 / n)
}

/// Geometric law of the final record count `R_inf` for a walk drifting to
/// -inf: `P(R_inf = m) = p (1-p)^{m-1}` with `p = exp(-sum q_k/k)` and
/// `E(R_inf) = 1/p`.
#[derive(Debug, Clone, Copy)]
pub struct RInfinityLaw {
    pub parameter: Interval,
    pub mean: Interval,
}

pub fn r_infinity_law(series: &SpitzerSeries) -> Result<RInfinityLaw> {
    if series.drift != DriftClass::DriftsDown {
        return Err(Error::Precondition(
            "R_inf is almost surely infinite unless the walk drifts to -inf (sum q_k/k diverges)"
                .into(),
        ));
    }
    let p = series.defect;
    Ok(RInfinityLaw {
        parameter: p,
        mean: Interval {
            lo: 1.0 / p.hi,
            hi: 1.0 / p.lo,
        },
    })
}

/// Law of the final maximum `M_inf` for a right-continuous walk drifting to
/// -inf: `P(M_inf = m) = p (1-p)^m` on {0, 1, ...} with
/// `p = exp(-sum P(S_k > 0)/k)`, so `E(M_inf) = 1/p - 1`. (Each strong
/// record lifts the maximum by exactly one, hence `M_inf = strong count - 1`.)
#[derive(Debug, Clone, Copy)]
pub struct MInfinityLaw {
    pub p_zero: Interval,
    pub mean: Interval,
}

pub fn m_infinity_law(series: &SpitzerSeries, law: &LatticeStepLaw) -> Result<MInfinityLaw> {
    if !law.is_right_continuous() {
        return Err(Error::Precondition(
            "M_inf geometry requires a right-continuous lattice law (support_hi = 1)".into(),
        ));
    }
    if series.drift != DriftClass::DriftsDown {
        return Err(Error::Precondition(
            "M_inf is almost surely infinite unless the walk drifts to -inf".into(),
        ));
    }
    let p = series.defect_strict;
    Ok(MInfinityLaw {
        p_zero: p,
        mean: Interval {
            lo: 1.0 / p.hi - 1.0,
            hi: 1.0 / p.lo - 1.0,
        },
    })
}
