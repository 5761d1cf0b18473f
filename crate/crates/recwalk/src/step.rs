//! Walk-increment and waiting-time distributions.
//!
//! Lattice laws carry an explicit pmf on a bounded integer window and are
//! the input of the exact engine; the continuous families are all symmetric
//! about 0, which pins `P(S_k >= 0) = 1/2` for every k. Waiting laws feed
//! the continuous-time walks.

use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Longest lattice support the constructors will materialize. Heavy-tailed
/// families whose truncation point exceeds this are rejected rather than
/// silently degraded.
pub const MAX_SUPPORT_LEN: usize = 1 << 25;

/// Mass a truncated family may discard before renormalization.
pub const DEFAULT_TRUNCATION_EPS: f64 = 1e-12;

/// An integer-valued step law with bounded support.
///
/// `pmf[i]` is the probability of the increment `support_lo + i`. After
/// construction the pmf sums to 1 (renormalized); `truncation_mass` records
/// the mass discarded when an infinite-support family was truncated.
#[derive(Debug)]
pub struct LatticeStepLaw {
    support_lo: i64,
    pmf: Vec<f64>,
    truncation_mass: f64,
    sampler: OnceLock<Sampler>,
}

impl Clone for LatticeStepLaw {
    fn clone(&self) -> Self {
        Self {
            support_lo: self.support_lo,
            pmf: self.pmf.clone(),
            truncation_mass: self.truncation_mass,
            sampler: OnceLock::new(),
        }
    }
}

impl LatticeStepLaw {
    /// Builds a lattice law from an explicit pmf starting at `support_lo`.
    /// The pmf is renormalized; it must be nonnegative, close to mass 1
    /// (within 1e-6), and put positive mass on at least two points.
    pub fn from_pmf(support_lo: i64, pmf: Vec<f64>) -> Result<Self> {
        let total = kahan_sum(pmf.iter().copied());
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "pmf mass {total} is not close to 1"
            )));
        }
        Self::from_pmf_truncated(support_lo, pmf, 0.0)
    }

    fn from_pmf_truncated(
        support_lo: i64,
        mut pmf: Vec<f64>,
        truncation_mass: f64,
    ) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidParameter("empty pmf".into()));
        }
        if pmf.len() > MAX_SUPPORT_LEN {
            return Err(Error::ResourceCap(format!(
                "lattice support of {} points exceeds the cap of {}",
                pmf.len(),
                MAX_SUPPORT_LEN
            )));
        }
        if pmf.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidParameter(
                "pmf must be nonnegative and finite".into(),
            ));
        }
        let total = kahan_sum(pmf.iter().copied());
        if !(total > 0.5 && total <= 1.0 + 1e-9) {
            return Err(Error::InvalidParameter(format!(
                "retained pmf mass {total} outside (0.5, 1]"
            )));
        }
        let positive = pmf.iter().filter(|&&p| p > 0.0).count();
        if positive < 2 {
            return Err(Error::InvalidParameter(
                "degenerate law: fewer than two support points with positive mass".into(),
            ));
        }
        // Trim zero tails so support_lo/hi describe the actual support.
        let first = pmf.iter().position(|&p| p > 0.0).unwrap();
        let last = pmf.iter().rposition(|&p| p > 0.0).unwrap();
        let lo = support_lo + first as i64;
        pmf = pmf[first..=last].to_vec();
        let inv = 1.0 / total;
        for p in &mut pmf {
            *p *= inv;
        }
        Ok(Self {
            support_lo: lo,
            pmf,
            truncation_mass,
            sampler: OnceLock::new(),
        })
    }

    /// The canonical two-point test walk: `P(X=+1) = p`, `P(X=-1) = 1-p`.
    /// Oscillates iff p = 1/2, otherwise drifts with mean `2p - 1`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bernoulli walk needs p in (0,1), got {p}"
            )));
        }
        Self::from_pmf(-1, vec![1.0 - p, 0.0, p])
    }

    /// Zero-mean left-continuous family with generating function
    /// `phi(s) = s + gamma/(1+beta) (1-s)^(1+beta)`: `p_{-1} = gamma/(1+beta)`,
    /// `p_0 = 1 - gamma`, and `p_k` for k >= 1 from the binomial expansion of
    /// `(1-s)^(1+beta)`. The unbounded positive support is truncated at the
    /// smallest K with residual mass < `eps` and renormalized.
    pub fn left_continuous(beta: f64, gamma: f64, eps: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0 && gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "left-continuous family needs beta, gamma in (0,1), got ({beta}, {gamma})"
            )));
        }
        if !(eps > 0.0 && eps <= DEFAULT_TRUNCATION_EPS) {
            return Err(Error::InvalidParameter(format!(
                "truncation eps must lie in (0, {DEFAULT_TRUNCATION_EPS}], got {eps}"
            )));
        }
        let mut coeffs = LeftContinuousCoeffs::new(beta, gamma);
        let mut pmf = Vec::new();
        let mut cum = 0.0;
        let mut comp = 0.0; // Kahan carry
        loop {
            let p = coeffs.next_pk();
            let y = p - comp;
            let t = cum + y;
            comp = (t - cum) - y;
            cum = t;
            pmf.push(p);
            if 1.0 - cum < eps {
                break;
            }
            if pmf.len() >= MAX_SUPPORT_LEN {
                return Err(Error::ResourceCap(format!(
                    "left_continuous(beta={beta}, gamma={gamma}) needs more than {MAX_SUPPORT_LEN} \
                     support points to reach residual mass {eps}; heavier tails (small beta) are \
                     only available through left_continuous_with_cap"
                )));
            }
        }
        Self::from_pmf_truncated(-1, pmf, 1.0 - cum)
    }

    /// The left-continuous family truncated at an explicit upper support
    /// point `support_hi >= 1` (renormalized). Used where a small exact
    /// convolution window matters more than tail fidelity.
    pub fn left_continuous_with_cap(beta: f64, gamma: f64, support_hi: i64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0 && gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "left-continuous family needs beta, gamma in (0,1), got ({beta}, {gamma})"
            )));
        }
        if support_hi < 1 {
            return Err(Error::InvalidParameter("support cap must be >= 1".into()));
        }
        let len = usize::try_from(support_hi + 2)
            .map_err(|_| Error::InvalidParameter("support cap out of range".into()))?;
        if len > MAX_SUPPORT_LEN {
            return Err(Error::ResourceCap(format!(
                "support cap {support_hi} exceeds {MAX_SUPPORT_LEN}"
            )));
        }
        let mut coeffs = LeftContinuousCoeffs::new(beta, gamma);
        let pmf: Vec<f64> = (0..len).map(|_| coeffs.next_pk()).collect();
        let cum = kahan_sum(pmf.iter().copied());
        Self::from_pmf_truncated(-1, pmf, 1.0 - cum)
    }

    pub fn support_lo(&self) -> i64 {
        self.support_lo
    }

    pub fn support_hi(&self) -> i64 {
        self.support_lo + self.pmf.len() as i64 - 1
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// P(X = v), zero off the stored window.
    pub fn prob(&self, v: i64) -> f64 {
        let idx = v - self.support_lo;
        if idx < 0 || idx >= self.pmf.len() as i64 {
            0.0
        } else {
            self.pmf[idx as usize]
        }
    }

    pub fn truncation_mass(&self) -> f64 {
        self.truncation_mass
    }

    pub fn mean(&self) -> f64 {
        kahan_sum(
            self.pmf
                .iter()
                .enumerate()
                .map(|(i, &p)| (self.support_lo + i as i64) as f64 * p),
        )
    }

    /// P(X >= 0), the one-step exceedance probability.
    pub fn prob_nonneg(&self) -> f64 {
        let skip = (-self.support_lo).max(0) as usize;
        kahan_sum(self.pmf.iter().skip(skip).copied())
    }

    /// Right-continuous means the support tops out at +1 with positive mass
    /// there; each strong record then lifts the running maximum by exactly 1.
    pub fn is_right_continuous(&self) -> bool {
        self.support_hi() == 1 && self.prob(1) > 0.0
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> i64 {
        let sampler = self.sampler.get_or_init(|| Sampler::new(&self.pmf));
        self.support_lo + sampler.sample(rng) as i64
    }
}

/// Index sampler over the pmf. Small supports use one alias table; long
/// heavy-tailed supports split into an in-cache head alias plus a rare
/// binary-searched tail, since an alias table spanning 1e7+ entries would
/// miss cache on every draw.
#[derive(Debug)]
enum Sampler {
    Alias(AliasTable),
    Hybrid {
        head: AliasTable,
        head_len: usize,
        /// Cumulative sums of the tail pmf (entries head_len..).
        tail_cum: Vec<f64>,
    },
}

const HYBRID_HEAD_LEN: usize = 8192;

impl Sampler {
    fn new(pmf: &[f64]) -> Self {
        if pmf.len() <= 2 * HYBRID_HEAD_LEN {
            return Self::Alias(AliasTable::new(pmf));
        }
        let head_len = HYBRID_HEAD_LEN;
        let mut tail_cum = Vec::with_capacity(pmf.len() - head_len);
        let mut acc = 0.0;
        for &p in &pmf[head_len..] {
            acc += p;
            tail_cum.push(acc);
        }
        let mut head_pmf = pmf[..head_len].to_vec();
        head_pmf.push(acc); // one synthetic bucket holding the whole tail
        Self::Hybrid {
            head: AliasTable::new(&head_pmf),
            head_len,
            tail_cum,
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            Self::Alias(alias) => alias.sample(rng) as usize,
            Self::Hybrid {
                head,
                head_len,
                tail_cum,
            } => {
                let i = head.sample(rng) as usize;
                if i < *head_len {
                    return i;
                }
                let total = *tail_cum.last().unwrap();
                let u: f64 = rng.random::<f64>() * total;
                let idx = tail_cum
                    .partition_point(|&c| c <= u)
                    .min(tail_cum.len() - 1);
                head_len + idx
            }
        }
    }
}

struct LeftContinuousCoeffs {
    beta: f64,
    scale: f64, // gamma / (1 + beta)
    gamma: f64,
    binom: f64, // (-1)^j binom(1+beta, j)
    j: u64,
}

impl LeftContinuousCoeffs {
    fn new(beta: f64, gamma: f64) -> Self {
        Self {
            beta,
            scale: gamma / (1.0 + beta),
            gamma,
            binom: 1.0,
            j: 0,
        }
    }

    /// Emits p_{-1}, p_0, p_1, ... in order.
    fn next_pk(&mut self) -> f64 {
        let j = self.j;
        let c = if j == 1 {
            // coefficient of s^1 in phi: 1 - gamma
            1.0 - self.gamma
        } else {
            self.scale * self.binom
        };
        // advance (-1)^j binom(1+beta, j)
        self.binom *= (j as f64 - 1.0 - self.beta) / (j as f64 + 1.0);
        self.j += 1;
        c
    }
}

/// Continuous step laws, all symmetric about 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuousStepLaw {
    Gaussian { sigma: f64 },
    UniformSymmetric { half_width: f64 },
    Cauchy { scale: f64 },
}

impl ContinuousStepLaw {
    pub fn validate(&self) -> Result<()> {
        let s = match *self {
            Self::Gaussian { sigma } => sigma,
            Self::UniformSymmetric { half_width } => half_width,
            Self::Cauchy { scale } => scale,
        };
        if s > 0.0 && s.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "scale must be positive, got {s}"
            )))
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Self::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma * z
            }
            Self::UniformSymmetric { half_width } => {
                let u: f64 = rng.random();
                half_width * (2.0 * u - 1.0)
            }
            Self::Cauchy { scale } => {
                let u: f64 = rng.sample(rand::distr::Open01);
                scale * (std::f64::consts::PI * (u - 0.5)).tan()
            }
        }
    }
}

/// A walk increment law, lattice or continuous.
#[derive(Debug, Clone)]
pub enum StepLaw {
    Lattice(LatticeStepLaw),
    Continuous(ContinuousStepLaw),
}

impl StepLaw {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::Lattice(l) => l.sample(rng) as f64,
            Self::Continuous(c) => c.sample(rng),
        }
    }

    pub fn as_lattice(&self) -> Result<&LatticeStepLaw> {
        match self {
            Self::Lattice(l) => Ok(l),
            Self::Continuous(_) => Err(Error::Precondition(
                "operation requires a lattice step law".into(),
            )),
        }
    }
}

impl From<LatticeStepLaw> for StepLaw {
    fn from(l: LatticeStepLaw) -> Self {
        Self::Lattice(l)
    }
}

impl From<ContinuousStepLaw> for StepLaw {
    fn from(c: ContinuousStepLaw) -> Self {
        Self::Continuous(c)
    }
}

/// Waiting-time laws for continuous-time walks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitingLaw {
    /// Pure Pareto tail: `1 - G(x) = (x / scale)^(-alpha)` for x >= scale,
    /// with `alpha` in (0,1), so the slowly varying tail factor is constant.
    Pareto {
        alpha: f64,
        scale: f64,
    },
    Exponential {
        scale: f64,
    },
    Deterministic {
        value: f64,
    },
}

impl WaitingLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Pareto { alpha, scale } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "pareto waiting law needs alpha in (0,1), got {alpha}"
                    )));
                }
                if scale.is_nan() || scale <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "pareto scale must be positive".into(),
                    ));
                }
            }
            Self::Exponential { scale } | Self::Deterministic { value: scale } => {
                if scale.is_nan() || scale <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "waiting scale must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Inverse-CDF transform of a uniform `u` in (0, 1].
    pub fn from_uniform(&self, u: f64) -> f64 {
        match *self {
            Self::Pareto { alpha, scale } => scale * u.powf(-1.0 / alpha),
            Self::Exponential { scale } => -scale * u.ln(),
            Self::Deterministic { value } => value,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::Deterministic { value } => *value,
            _ => {
                let u: f64 = rng.sample(rand::distr::OpenClosed01);
                self.from_uniform(u)
            }
        }
    }
}

/// JSON description of a step law, as used in experiment configs:
/// `{"kind":"bernoulli","p":0.5}`, `{"kind":"left_continuous","beta":0.5,"gamma":0.5}`,
/// `{"kind":"gaussian","sigma":1.0}`, ...
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSpec {
    Bernoulli {
        p: f64,
    },
    LeftContinuous {
        beta: f64,
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support_cap: Option<i64>,
    },
    Lattice {
        support_lo: i64,
        pmf: Vec<f64>,
    },
    Gaussian {
        sigma: f64,
    },
    Uniform {
        half_width: f64,
    },
    Cauchy {
        scale: f64,
    },
}

impl StepSpec {
    pub fn build(&self) -> Result<StepLaw> {
        match self {
            Self::Bernoulli { p } => Ok(LatticeStepLaw::bernoulli(*p)?.into()),
            Self::LeftContinuous {
                beta,
                gamma,
                eps,
                support_cap,
            } => {
                let law = match support_cap {
                    Some(cap) => LatticeStepLaw::left_continuous_with_cap(*beta, *gamma, *cap)?,
                    None => LatticeStepLaw::left_continuous(
                        *beta,
                        *gamma,
                        eps.unwrap_or(DEFAULT_TRUNCATION_EPS),
                    )?,
                };
                Ok(law.into())
            }
            Self::Lattice { support_lo, pmf } => {
                Ok(LatticeStepLaw::from_pmf(*support_lo, pmf.clone())?.into())
            }
            Self::Gaussian { sigma } => {
                let law = ContinuousStepLaw::Gaussian { sigma: *sigma };
                law.validate()?;
                Ok(law.into())
            }
            Self::Uniform { half_width } => {
                let law = ContinuousStepLaw::UniformSymmetric {
                    half_width: *half_width,
                };
                law.validate()?;
                Ok(law.into())
            }
            Self::Cauchy { scale } => {
                let law = ContinuousStepLaw::Cauchy { scale: *scale };
                law.validate()?;
                Ok(law.into())
            }
        }
    }
}

/// JSON description of a waiting law: `{"kind":"pareto","alpha":0.6,"scale":1.0}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaitSpec {
    Pareto { alpha: f64, scale: f64 },
    Exponential { scale: f64 },
    Deterministic { value: f64 },
}

impl WaitSpec {
    pub fn build(&self) -> Result<WaitingLaw> {
        let law = match *self {
            Self::Pareto { alpha, scale } => WaitingLaw::Pareto { alpha, scale },
            Self::Exponential { scale } => WaitingLaw::Exponential { scale },
            Self::Deterministic { value } => WaitingLaw::Deterministic { value },
        };
        law.validate()?;
        Ok(law)
    }
}

/// Walker's alias table over `0..pmf.len()`.
#[derive(Debug)]
struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    fn new(pmf: &[f64]) -> Self {
        let n = pmf.len();
        assert!(n > 0 && n <= u32::MAX as usize);
        let total: f64 = kahan_sum(pmf.iter().copied());
        let scale = n as f64 / total;
        let mut prob: Vec<f64> = pmf.iter().map(|&p| p * scale).collect();
        let mut alias: Vec<u32> = (0..n as u32).collect();
        let mut small: Vec<u32> = Vec::new();
        let mut large: Vec<u32> = Vec::new();
        for (i, &p) in prob.iter().enumerate() {
            if p < 1.0 {
                small.push(i as u32);
            } else {
                large.push(i as u32);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s as usize] = l;
            let leftover = prob[l as usize] + prob[s as usize] - 1.0;
            prob[l as usize] = leftover;
            if leftover < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Anything left on either worklist is 1.0 up to roundoff.
        for &i in small.iter().chain(large.iter()) {
            prob[i as usize] = 1.0;
        }
        Self { prob, alias }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u32 {
        let i = rng.random_range(0..self.prob.len());
        let coin: f64 = rng.random();
        if coin < self.prob[i] {
            i as u32
        } else {
            self.alias[i]
        }
    }
}

pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::StreamFactory;

    #[test]
    fn bernoulli_pmf() {
        let law = LatticeStepLaw::bernoulli(0.5).unwrap();
        assert_eq!(law.support_lo(), -1);
        assert_eq!(law.support_hi(), 1);
        assert_eq!(law.prob(-1), 0.5);
        assert_eq!(law.prob(1), 0.5);
        assert_eq!(law.truncation_mass(), 0.0);

        let drift_down = LatticeStepLaw::bernoulli(1.0 / 3.0).unwrap();
        assert!((drift_down.prob(1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((drift_down.mean() + 1.0 / 3.0).abs() < 1e-15);

        let drift_up = LatticeStepLaw::bernoulli(2.0 / 3.0).unwrap();
        assert!((drift_up.mean() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_rejects_degenerate() {
        assert!(LatticeStepLaw::bernoulli(0.0).is_err());
        assert!(LatticeStepLaw::bernoulli(1.0).is_err());
    }

    #[test]
    fn from_pmf_rejects_single_atom() {
        assert!(LatticeStepLaw::from_pmf(0, vec![1.0]).is_err());
        assert!(LatticeStepLaw::from_pmf(-1, vec![0.0, 1.0, 0.0]).is_err());
    }

    /// Oracle for the left-continuous coefficients: numeric Taylor expansion
    /// of phi(s) = s + gamma/(1+beta) (1-s)^(1+beta) at s = 0, independent of
    /// the binomial recurrence used by the constructor.
    fn phi(beta: f64, gamma: f64, s: f64) -> f64 {
        s + gamma / (1.0 + beta) * (1.0 - s).powf(1.0 + beta)
    }

    #[test]
    fn left_continuous_head_matches_taylor_oracle() {
        let (beta, gamma) = (0.5, 0.5);
        let law = LatticeStepLaw::left_continuous_with_cap(beta, gamma, 64).unwrap();
        // Values below are the renormalized pmf; undo the renormalization to
        // compare against raw phi coefficients.
        let retained = 1.0 - law.truncation_mass();

        // p_{-1} = phi(0) = gamma/(1+beta) = 1/3.
        let p_m1 = law.prob(-1) * retained;
        assert!((p_m1 - phi(beta, gamma, 0.0)).abs() < 1e-12);
        assert!((p_m1 - 1.0 / 3.0).abs() < 1e-12);

        // p_0 = phi'(0), p_1 = phi''(0)/2 by central differences.
        let h = 1e-5;
        let d1 = (phi(beta, gamma, h) - phi(beta, gamma, -h)) / (2.0 * h);
        let d2 =
            (phi(beta, gamma, h) - 2.0 * phi(beta, gamma, 0.0) + phi(beta, gamma, -h)) / (h * h);
        assert!((law.prob(0) * retained - d1).abs() < 1e-9);
        assert!((law.prob(1) * retained - d2 / 2.0).abs() < 1e-6);
        assert!((law.prob(0) * retained - 0.5).abs() < 1e-12);
        assert!((law.prob(1) * retained - 0.125).abs() < 1e-12);
    }

    #[test]
    fn left_continuous_nonnegative_grid() {
        // beta = 0.2 at eps = 1e-12 would need ~2e9 support points, so the
        // grid uses a capped support; nonnegativity of the coefficients does
        // not depend on where the tail is cut.
        for &beta in &[0.2, 0.5, 0.8] {
            for &gamma in &[0.2, 0.5, 0.8] {
                let law = LatticeStepLaw::left_continuous_with_cap(beta, gamma, 100_000).unwrap();
                assert!(
                    law.pmf().iter().all(|&p| p >= 0.0),
                    "negative pmf for beta={beta} gamma={gamma}"
                );
            }
        }
    }

    #[test]
    fn left_continuous_mean_is_nearly_zero() {
        let law = LatticeStepLaw::left_continuous(0.5, 0.5, 1e-12).unwrap();
        assert!(law.truncation_mass() < 1e-12);
        // The untruncated family has mean exactly 0 (phi'(1) = 1). Cutting
        // the tail at K removes sum_{k>K} k p_k ~ 0.28/sqrt(K) of positive
        // mean, which dominates the eps-sized mass perturbation.
        let k = law.support_hi() as f64;
        let tail_mean_bound = 0.35 / k.sqrt();
        assert!(
            law.mean().abs() < tail_mean_bound,
            "mean {} outside bound {}",
            law.mean(),
            tail_mean_bound
        );
    }

    #[test]
    fn left_continuous_small_beta_hits_cap() {
        match LatticeStepLaw::left_continuous(0.2, 0.5, 1e-12) {
            Err(Error::ResourceCap(_)) => {}
            other => panic!("expected resource cap error, got {other:?}"),
        }
    }

    #[test]
    fn lattice_sampling_stays_on_support() {
        let f = StreamFactory::new(11);
        let law = LatticeStepLaw::bernoulli(0.5).unwrap();
        let mut rng = f.stream(0);
        for _ in 0..1000 {
            let v = law.sample(&mut rng);
            assert!(v == -1 || v == 1);
        }

        let lc = LatticeStepLaw::left_continuous_with_cap(0.5, 0.5, 32).unwrap();
        let mut rng = f.stream(1);
        for _ in 0..1000 {
            assert!(lc.sample(&mut rng) >= -1);
        }
    }

    #[test]
    fn alias_table_matches_pmf_frequencies() {
        let law = LatticeStepLaw::from_pmf(-2, vec![0.3, 0.0, 0.3, 0.4]).unwrap();
        let mut rng = StreamFactory::new(5).stream(0);
        let n = 200_000;
        let mut counts = [0u64; 4];
        for _ in 0..n {
            counts[(law.sample(&mut rng) + 2) as usize] += 1;
        }
        for (v, &expected) in [0.3, 0.0, 0.3, 0.4].iter().enumerate() {
            let freq = counts[v] as f64 / n as f64;
            let se = (expected * (1.0 - expected) / n as f64).sqrt();
            assert!(
                (freq - expected).abs() <= 4.0 * se + 1e-12,
                "value {v}: freq {freq} vs {expected}"
            );
        }
    }

    #[test]
    fn hybrid_sampler_matches_head_frequencies() {
        // Support long enough to trigger the hybrid head/tail split.
        let law = LatticeStepLaw::left_continuous_with_cap(0.5, 0.5, 40_000).unwrap();
        let mut rng = StreamFactory::new(23).stream(0);
        let n = 400_000usize;
        let mut head = [0u64; 3];
        let mut tail_hits = 0u64;
        for _ in 0..n {
            let v = law.sample(&mut rng);
            if let -1..=1 = v {
                head[(v + 1) as usize] += 1;
            }
            if v > 8192 {
                tail_hits += 1;
            }
        }
        for (i, expected) in [law.prob(-1), law.prob(0), law.prob(1)]
            .into_iter()
            .enumerate()
        {
            let freq = head[i] as f64 / n as f64;
            let se = (expected * (1.0 - expected) / n as f64).sqrt();
            assert!(
                (freq - expected).abs() <= 4.0 * se,
                "value {i}: {freq} vs {expected}"
            );
        }
        // Tail past the head buffer must be reachable.
        let tail_mass: f64 = ((8192 + 1)..=40_000).map(|k| law.prob(k)).sum();
        let expected_hits = tail_mass * n as f64;
        assert!(
            (tail_hits as f64) < 6.0 * expected_hits.max(3.0),
            "tail hits {tail_hits} vs expectation {expected_hits}"
        );
    }

    #[test]
    fn gaussian_sample_mean_clt_bound() {
        let law = ContinuousStepLaw::Gaussian { sigma: 1.0 };
        let mut rng = StreamFactory::new(9).stream(0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| law.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4e-3, "sample mean {mean}");
    }

    #[test]
    fn pareto_inverse_cdf_values() {
        let law = WaitingLaw::Pareto {
            alpha: 0.5,
            scale: 1.0,
        };
        assert!((law.from_uniform(1.0) - 1.0).abs() < 1e-15);
        // Solve 1 - G(x) = 0.25 by hand: x^{-1/2} = 1/4 => x = 16.
        assert!((law.from_uniform(0.25) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn pareto_rejects_alpha_at_one() {
        assert!(WaitingLaw::Pareto {
            alpha: 1.0,
            scale: 1.0
        }
        .validate()
        .is_err());
        assert!(WaitingLaw::Pareto {
            alpha: 0.6,
            scale: 1.0
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn pareto_empirical_tail() {
        let law = WaitingLaw::Pareto {
            alpha: 0.7,
            scale: 2.0,
        };
        let mut rng = StreamFactory::new(13).stream(0);
        let n = 1_000_000usize;
        let draws: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        for &x in &[4.0, 20.0] {
            let expected = (x / 2.0_f64).powf(-0.7);
            let frac = draws.iter().filter(|&&d| d > x).count() as f64 / n as f64;
            let se = (expected * (1.0 - expected) / n as f64).sqrt();
            assert!(
                (frac - expected).abs() <= 3.0 * se,
                "tail at {x}: {frac} vs {expected}"
            );
        }
    }

    #[test]
    fn step_spec_round_trip() {
        let spec: StepSpec = serde_json::from_str(r#"{"kind":"bernoulli","p":0.5}"#).unwrap();
        assert_eq!(spec, StepSpec::Bernoulli { p: 0.5 });
        let law = spec.build().unwrap();
        assert!(matches!(law, StepLaw::Lattice(_)));

        let spec: StepSpec = serde_json::from_str(r#"{"kind":"gaussian","sigma":1.0}"#).unwrap();
        assert!(matches!(spec.build().unwrap(), StepLaw::Continuous(_)));

        let wait: WaitSpec =
            serde_json::from_str(r#"{"kind":"pareto","alpha":0.6,"scale":1.0}"#).unwrap();
        assert_eq!(
            wait.build().unwrap(),
            WaitingLaw::Pareto {
                alpha: 0.6,
                scale: 1.0
            }
        );
    }
}
