//! Continuous-time random walks: i.i.d. jumps at i.i.d. renewal epochs,
//! with the record count `R~_t` observed at a ladder of horizons. The
//! implementation identity is `R~_t = R_{N(t)}` with
//! `N(t) = max{k : Y_1 + ... + Y_k <= t}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::step::{StepLaw, WaitingLaw};
use crate::stream::StreamFactory;
use crate::walk::{RecordCounters, WalkConfig};
use crate::{Error, Result};

/// One continuous-time experiment. Steps and waits are sampled from
/// independent streams (`2r` and `2r + 1` for replicate r).
#[derive(Debug, Clone)]
pub struct CtrwConfig {
    pub step: StepLaw,
    pub wait: WaitingLaw,
    /// Observation times, strictly increasing.
    pub horizons: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
}

impl CtrwConfig {
    fn validate(&self) -> Result<()> {
        self.wait.validate()?;
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be >= 1".into()));
        }
        if self.horizons.is_empty() {
            return Err(Error::InvalidParameter("need at least one horizon".into()));
        }
        if self.horizons.iter().any(|&t| t.is_nan() || t < 0.0) {
            return Err(Error::InvalidParameter("horizons must be >= 0".into()));
        }
        if self.horizons.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "horizons must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Record counts per horizon: `counts[h][r]` is `R~` of replicate r at
/// `horizons[h]`.
#[derive(Debug, Clone, Serialize)]
pub struct CtrwSamples {
    pub horizons: Vec<f64>,
    pub counts: Vec<Vec<u64>>,
}

impl CtrwSamples {
    pub fn values_at(&self, h: usize) -> Vec<f64> {
        self.counts[h].iter().map(|&c| c as f64).collect()
    }
}

fn run_replicate(config: &CtrwConfig, factory: &StreamFactory, r: u64) -> Vec<u64> {
    let mut steps = factory.stream(2 * r);
    let mut waits = factory.stream(2 * r + 1);
    let mut acc = RecordCounters::new(&WalkConfig::default());
    let mut clock = 0.0f64;
    let mut pending = config.wait.sample(&mut waits);
    let mut out = Vec::with_capacity(config.horizons.len());
    for &t in &config.horizons {
        // Jumps land at arrival times `clock + pending <= t`.
        while clock + pending <= t {
            clock += pending;
            acc.push(config.step.sample(&mut steps));
            pending = config.wait.sample(&mut waits);
        }
        out.push(acc.weak_records());
    }
    out
}

/// Simulates `R~` at every horizon for every replicate.
pub fn simulate_ctrw(config: &CtrwConfig) -> Result<CtrwSamples> {
    config.validate()?;
    let factory = StreamFactory::new(config.seed);
    let per_rep: Vec<Vec<u64>> = (0..config.reps as u64)
        .into_par_iter()
        .map(|r| run_replicate(config, &factory, r))
        .collect();
    let mut counts = vec![vec![0u64; config.reps]; config.horizons.len()];
    for (r, row) in per_rep.iter().enumerate() {
        for (h, &c) in row.iter().enumerate() {
            counts[h][r] = c;
        }
    }
    Ok(CtrwSamples {
        horizons: config.horizons.clone(),
        counts,
    })
}

/// Renewal counts `N(t)` at each horizon from the wait stream alone.
pub fn renewal_counts(
    wait: &WaitingLaw,
    horizons: &[f64],
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<u64> {
    let mut clock = 0.0f64;
    let mut pending = wait.sample(rng);
    let mut n = 0u64;
    let mut out = Vec::with_capacity(horizons.len());
    for &t in horizons {
        while clock + pending <= t {
            clock += pending;
            n += 1;
            pending = wait.sample(rng);
        }
        out.push(n);
    }
    out
}

/// Re-derives every replicate through the composition `R~_t = R_{N(t)}`,
/// recounting `N(t)` from the wait stream and the records from the step
/// stream separately. Returns the number of (replicate, horizon) cells
/// that disagree with `samples` — 0 when the composition identity holds.
pub fn composition_mismatches(config: &CtrwConfig, samples: &CtrwSamples) -> Result<usize> {
    config.validate()?;
    let factory = StreamFactory::new(config.seed);
    let mismatches: usize = (0..config.reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut waits = factory.stream(2 * r + 1);
            let ns = renewal_counts(&config.wait, &config.horizons, &mut waits);
            let mut steps = factory.stream(2 * r);
            let mut acc = RecordCounters::new(&WalkConfig::default());
            let mut done = 0u64;
            let mut bad = 0usize;
            for (h, &n_jumps) in ns.iter().enumerate() {
                while done < n_jumps {
                    acc.push(config.step.sample(&mut steps));
                    done += 1;
                }
                if acc.weak_records() != samples.counts[h][r as usize] {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    Ok(mismatches)
}

/// Scaling diagnostics between two horizons, against the inverse-stable
/// limit of index `alpha * rho`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingDiagnostics {
    pub t_ratio: f64,
    /// `E[R~_{t2}] / E[R~_{t1}]`.
    pub mean_ratio: f64,
    /// `(t2/t1)^(alpha rho)`, the pure-power target.
    pub mean_ratio_target: f64,
    /// `E[R~^2]/E[R~]^2` at the two horizons.
    pub moment_ratio: (f64, f64),
    /// `2 Gamma(1 + a)^2 / Gamma(1 + 2a)` at `a = alpha rho`,
    /// normalization-free.
    pub moment_ratio_target: f64,
}

pub fn scaling_check(
    samples: &CtrwSamples,
    h1: usize,
    h2: usize,
    alpha_rho: f64,
) -> Result<ScalingDiagnostics> {
    if h1 >= samples.horizons.len() || h2 >= samples.horizons.len() || h1 >= h2 {
        return Err(Error::InvalidParameter(
            "need two horizon indices h1 < h2".into(),
        ));
    }
    let (t1, t2) = (samples.horizons[h1], samples.horizons[h2]);
    if t2 / t1 < 10.0 {
        return Err(Error::Precondition(format!(
            "horizon ratio {} below 10; scaling exponents are unreadable that close",
            t2 / t1
        )));
    }
    let mr = |h: usize| -> (f64, f64) {
        let vals = &samples.counts[h];
        let n = vals.len() as f64;
        let mean = vals.iter().map(|&v| v as f64).sum::<f64>() / n;
        let second = vals.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>() / n;
        (mean, second / (mean * mean))
    };
    let (m1, r1) = mr(h1);
    let (m2, r2) = mr(h2);
    Ok(ScalingDiagnostics {
        t_ratio: t2 / t1,
        mean_ratio: m2 / m1,
        mean_ratio_target: (t2 / t1).powf(alpha_rho),
        moment_ratio: (r1, r2),
        moment_ratio_target: crate::mittag_leffler::ml_moment_ratio(alpha_rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step::{ContinuousStepLaw, LatticeStepLaw};
    use crate::walk::run_walk;

    fn gaussian() -> StepLaw {
        StepLaw::Continuous(ContinuousStepLaw::Gaussian { sigma: 1.0 })
    }

    #[test]
    fn unit_waits_reduce_to_discrete_time() {
        let config = CtrwConfig {
            step: gaussian(),
            wait: WaitingLaw::Deterministic { value: 1.0 },
            horizons: vec![0.5, 3.0, 10.0, 64.7],
            reps: 8,
            seed: 31,
        };
        let samples = simulate_ctrw(&config).unwrap();
        let factory = StreamFactory::new(31);
        for r in 0..config.reps {
            for (h, &t) in config.horizons.iter().enumerate() {
                let n = t.floor() as usize;
                let mut rng = factory.stream(2 * r as u64);
                let st = run_walk(&gaussian(), n, &WalkConfig::default(), &mut rng).unwrap();
                assert_eq!(samples.counts[h][r], st.r_weak, "rep {r} horizon {t}");
            }
        }
    }

    #[test]
    fn horizon_before_first_jump_sees_only_the_start() {
        let config = CtrwConfig {
            step: gaussian(),
            wait: WaitingLaw::Deterministic { value: 5.0 },
            horizons: vec![1.0, 4.9],
            reps: 3,
            seed: 1,
        };
        let samples = simulate_ctrw(&config).unwrap();
        for r in 0..3 {
            assert_eq!(samples.counts[0][r], 1);
            assert_eq!(samples.counts[1][r], 1);
        }
    }

    #[test]
    fn records_nondecreasing_in_time() {
        let config = CtrwConfig {
            step: StepLaw::Lattice(LatticeStepLaw::bernoulli(0.5).unwrap()),
            wait: WaitingLaw::Pareto {
                alpha: 0.6,
                scale: 1.0,
            },
            horizons: vec![10.0, 100.0, 1000.0],
            reps: 400,
            seed: 77,
        };
        let samples = simulate_ctrw(&config).unwrap();
        for r in 0..config.reps {
            assert!(samples.counts[0][r] <= samples.counts[1][r]);
            assert!(samples.counts[1][r] <= samples.counts[2][r]);
        }
    }

    #[test]
    fn composition_identity_exact() {
        let config = CtrwConfig {
            step: gaussian(),
            wait: WaitingLaw::Pareto {
                alpha: 0.6,
                scale: 1.0,
            },
            horizons: vec![50.0, 500.0],
            reps: 500,
            seed: 123,
        };
        let samples = simulate_ctrw(&config).unwrap();
        assert_eq!(composition_mismatches(&config, &samples).unwrap(), 0);
    }

    #[test]
    fn unit_waits_recover_discrete_moment_ratio() {
        // alpha -> 1 (deterministic waits) with continuous symmetric steps:
        // the discrete rho = 1/2 shape, moment ratio pi/2.
        let config = CtrwConfig {
            step: gaussian(),
            wait: WaitingLaw::Deterministic { value: 1.0 },
            horizons: vec![200.0, 4000.0],
            reps: 4000,
            seed: 9,
        };
        let samples = simulate_ctrw(&config).unwrap();
        let diag = scaling_check(&samples, 0, 1, 0.5).unwrap();
        let target = std::f64::consts::FRAC_PI_2;
        assert!(
            (diag.moment_ratio.1 / target - 1.0).abs() < 0.10,
            "ratio {:?}",
            diag.moment_ratio
        );
        // Mean growth ~ sqrt(t) over a factor-20 horizon span.
        assert!((diag.mean_ratio / diag.mean_ratio_target - 1.0).abs() < 0.10);
    }

    #[test]
    fn scaling_check_guards() {
        let samples = CtrwSamples {
            horizons: vec![10.0, 50.0],
            counts: vec![vec![1; 4], vec![2; 4]],
        };
        assert!(scaling_check(&samples, 0, 1, 0.3).is_err()); // ratio 5 < 10
        assert!(scaling_check(&samples, 1, 0, 0.3).is_err());
    }

    #[test]
    fn rejects_unsorted_horizons() {
        let config = CtrwConfig {
            step: gaussian(),
            wait: WaitingLaw::Pareto {
                alpha: 0.6,
                scale: 1.0,
            },
            horizons: vec![10.0, 10.0],
            reps: 1,
            seed: 0,
        };
        assert!(simulate_ctrw(&config).is_err());
    }
}
