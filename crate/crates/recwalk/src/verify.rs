//! The verification suite: every headline identity and limit law as a
//! reproducible pass/fail criterion. Each criterion runs from a seed and
//! yields interval checks whose outcome is a pure function of
//! `(criterion, seed)` — byte-identical across runs and worker counts.
//!
//! Criteria 1-3, 7, 9, 10 are exact (enumeration and convolution oracles,
//! seconds); 4-6, 8, 11, 12 are Monte Carlo at 1e4-1e5 replicates
//! (minutes); 13 replays every stochastic criterion and demands identical
//! bytes.

use rayon::prelude::*;
use serde::Serialize;

use crate::ctrw::{composition_mismatches, scaling_check, simulate_ctrw, CtrwConfig};
use crate::deviations::{lil_constant, lil_normalizer, mdp_rate, RateProfile};
use crate::exact::renewal::{ladder_height_pmf, renewal_cdf_pow, renewal_function};
use crate::exact::series::{c_rho, c_rho_at, exceedance_probs, ladder_epoch_pmf, spitzer_exp};
use crate::exact::{brute, r_infinity_law, SpitzerSeries};
use crate::mittag_leffler::{ks_distance, ml_cdf_half, ml_moment_ratio};
use crate::step::{ContinuousStepLaw, LatticeStepLaw, StepLaw, WaitingLaw};
use crate::stream::StreamFactory;
use crate::walk::{empirical_r_infinity, monte_carlo, RecordCounters, Statistic, WalkConfig};
use crate::{Error, Result};

/// One bounded check: passes iff `lo <= observed <= hi` (and finite).
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckLine {
    pub label: String,
    pub observed: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

impl CheckLine {
    fn interval(label: impl Into<String>, observed: f64, lo: f64, hi: f64) -> Self {
        let pass = observed.is_finite() && observed >= lo && observed <= hi;
        Self {
            label: label.into(),
            observed,
            lo,
            hi,
            pass,
        }
    }

    /// `observed` within `rel` of a positive `target`.
    fn within_rel(label: impl Into<String>, observed: f64, target: f64, rel: f64) -> Self {
        Self::interval(label, observed, target * (1.0 - rel), target * (1.0 + rel))
    }

    /// `observed` at most `cap` (lower bound 0).
    fn at_most(label: impl Into<String>, observed: f64, cap: f64) -> Self {
        Self::interval(label, observed, 0.0, cap)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
}

impl CriterionReport {
    fn new(id: u32, checks: Vec<CheckLine>) -> Self {
        Self {
            id,
            name: criterion_name(id),
            passed: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    /// One human-readable line per check, `PASS`/`FAIL` first.
    pub fn render(&self) -> String {
        fn fmt(v: f64) -> String {
            if v == 0.0 || (1e-3..1e6).contains(&v.abs()) {
                format!("{v:.6}")
            } else {
                format!("{v:.3e}")
            }
        }
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} criterion {:>2} [{}] {}: {} in [{}, {}]\n",
                if c.pass { "PASS" } else { "FAIL" },
                self.id,
                self.name,
                c.label,
                fmt(c.observed),
                fmt(c.lo),
                fmt(c.hi)
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
    pub all_pass: bool,
}

pub const CRITERION_COUNT: u32 = 13;
/// Enumeration/convolution criteria (seconds).
pub const FAST_IDS: &[u32] = &[1, 2, 3, 7, 9, 10];
/// Monte Carlo criteria (minutes).
pub const FULL_IDS: &[u32] = &[4, 5, 6, 8, 11, 12, 13];

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "spitzer",
        2 => "sparre-andersen",
        3 => "record-count-law",
        4 => "weak-convergence-half",
        5 => "example3-normalization",
        6 => "geometric-r-infinity",
        7 => "last-max-asymptotic",
        8 => "sigma-records",
        9 => "ldp",
        10 => "mdp",
        11 => "lil",
        12 => "ctrw",
        13 => "determinism",
        _ => "unknown",
    }
}

/// Resolves a suite selector: `all`, `fast`, `full`, a criterion name, or a
/// numeric id.
pub fn suite_ids(selector: &str) -> Result<Vec<u32>> {
    match selector {
        "all" => Ok((1..=CRITERION_COUNT).collect()),
        "fast" => Ok(FAST_IDS.to_vec()),
        "full" => Ok(FULL_IDS.to_vec()),
        other => {
            if let Ok(id) = other.parse::<u32>() {
                if (1..=CRITERION_COUNT).contains(&id) {
                    return Ok(vec![id]);
                }
            }
            for id in 1..=CRITERION_COUNT {
                if criterion_name(id) == other {
                    return Ok(vec![id]);
                }
            }
            Err(Error::InvalidParameter(format!(
                "unknown suite '{other}'; expected all/fast/full, a criterion name, or 1..=13"
            )))
        }
    }
}

pub fn run_suite(ids: &[u32], seed: u64) -> Result<SuiteReport> {
    let mut criteria = Vec::with_capacity(ids.len());
    for &id in ids {
        criteria.push(run_criterion(id, seed)?);
    }
    let all_pass = criteria.iter().all(|c| c.passed);
    Ok(SuiteReport {
        seed,
        criteria,
        all_pass,
    })
}

pub fn run_criterion(id: u32, seed: u64) -> Result<CriterionReport> {
    let checks = match id {
        1 => spitzer_exact()?,
        2 => sparre_andersen_exact()?,
        3 => record_count_law()?,
        4 => weak_convergence_half(seed)?,
        5 => example3_normalization(seed)?,
        6 => geometric_r_infinity(seed)?,
        7 => last_max_asymptotic()?,
        8 => sigma_records(seed)?,
        9 => ldp_slopes()?,
        10 => mdp_band()?,
        11 => lil_bracket(seed)?,
        12 => ctrw_scaling(seed)?,
        13 => determinism(seed)?,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "criterion id {id} outside 1..={CRITERION_COUNT}"
            )))
        }
    };
    Ok(CriterionReport::new(id, checks))
}

/// Distinct criteria draw from distinct stream spaces even under one seed.
fn factory_for(id: u64, seed: u64) -> StreamFactory {
    StreamFactory::new(seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// The lattice laws every exact identity is checked on: a symmetric walk,
/// a drift-down walk, the capped heavy-tail family, and an asymmetric
/// three-point law with a wider down-step.
fn exact_law_set() -> Result<Vec<(&'static str, LatticeStepLaw)>> {
    Ok(vec![
        ("bernoulli(1/2)", LatticeStepLaw::bernoulli(0.5)?),
        ("bernoulli(1/3)", LatticeStepLaw::bernoulli(1.0 / 3.0)?),
        (
            "left-continuous capped",
            LatticeStepLaw::left_continuous_with_cap(0.5, 0.5, 1)?,
        ),
        (
            "three-point",
            LatticeStepLaw::from_pmf(-2, vec![0.3, 0.3, 0.4])?,
        ),
    ])
}

/// Criterion 1: series exponentiation of `q` reproduces the brute-force
/// last-maximum probabilities for every law and every n <= 14.
fn spitzer_exact() -> Result<Vec<CheckLine>> {
    let n_max = 14;
    let mut checks = Vec::new();
    for (name, law) in exact_law_set()? {
        let e = exceedance_probs(&law, n_max)?;
        let a = spitzer_exp(&e.q);
        let probs = brute::prefix_event_probs(&law, n_max, |s| s.last_max_pos() == s.n())?;
        let worst = a
            .iter()
            .zip(probs.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        checks.push(CheckLine::at_most(
            format!("max |a_n - brute| over n<=14, {name}"),
            worst,
            1e-10,
        ));
    }
    Ok(checks)
}

/// Criterion 2: the positional identities
/// `P(L_{n,n} = n) = P(N_n = n)` and `P(L_{n,0} = n) = P(N_n^+ = n)`
/// hold exactly under brute-force enumeration.
fn sparre_andersen_exact() -> Result<Vec<CheckLine>> {
    let n_max = 14;
    let mut checks = Vec::new();
    for (name, law) in exact_law_set()? {
        let mut last_max = vec![0.0; n_max + 1];
        let mut all_nonneg = vec![0.0; n_max + 1];
        let mut first_max = vec![0.0; n_max + 1];
        let mut all_pos = vec![0.0; n_max + 1];
        brute::enumerate_prefixes(&law, n_max, &WalkConfig::default(), |s, w| {
            let n = s.n();
            if s.last_max_pos() == n {
                last_max[n] += w;
            }
            if s.n_nonneg() == n as u64 {
                all_nonneg[n] += w;
            }
            if s.first_max_pos() == n {
                first_max[n] += w;
            }
            if s.n_pos() == n as u64 {
                all_pos[n] += w;
            }
        })?;
        let weak = last_max
            .iter()
            .zip(all_nonneg.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let strict = first_max
            .iter()
            .zip(all_pos.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        checks.push(CheckLine::at_most(
            format!("max |P(L_nn=n) - P(N_n=n)|, {name}"),
            weak,
            1e-12,
        ));
        checks.push(CheckLine::at_most(
            format!("max |P(L_n0=n) - P(N_n+=n)|, {name}"),
            strict,
            1e-12,
        ));
    }
    Ok(checks)
}

/// Criterion 3: the renewal convolution of the ladder-epoch law gives the
/// full pmf of the record count, weak (via q) and strong (via strict q).
fn record_count_law() -> Result<Vec<CheckLine>> {
    let n_max = 12;
    let mut checks = Vec::new();
    for (name, law) in exact_law_set()? {
        let e = exceedance_probs(&law, n_max)?;
        let t = ladder_epoch_pmf(&e.q);
        let t_strict = ladder_epoch_pmf(&e.q_strict);

        // pmf_by_depth[n][m] = P(count = m) at depth n, from one pass.
        let mut weak_pmf = vec![vec![0.0f64; n_max + 2]; n_max + 1];
        let mut strong_pmf = vec![vec![0.0f64; n_max + 2]; n_max + 1];
        brute::enumerate_prefixes(&law, n_max, &WalkConfig::default(), |s, w| {
            weak_pmf[s.n()][s.weak_records() as usize] += w;
            strong_pmf[s.n()][s.strong_records() as usize] += w;
        })?;

        let mut worst_weak = 0.0f64;
        let mut worst_strong = 0.0f64;
        for n in 0..=n_max {
            let exact_weak = crate::exact::record_count_distribution(&t, n)?;
            let exact_strong = crate::exact::record_count_distribution(&t_strict, n)?;
            for m in 1..=n + 1 {
                worst_weak = worst_weak.max((exact_weak[m] - weak_pmf[n][m]).abs());
                worst_strong = worst_strong.max((exact_strong[m] - strong_pmf[n][m]).abs());
            }
        }
        checks.push(CheckLine::at_most(
            format!("max |P(R_n=m) - brute| over n<=12, {name}"),
            worst_weak,
            1e-10,
        ));
        checks.push(CheckLine::at_most(
            format!("max strong-record pmf diff over n<=12, {name}"),
            worst_strong,
            1e-10,
        ));
    }
    Ok(checks)
}

/// Criterion 4: continuous symmetric steps at n = 1e4: `R_n / sqrt(n)`
/// against the half-normal |N(0,2)| limit, by KS distance and the
/// normalization-free moment ratio.
fn weak_convergence_half(seed: u64) -> Result<Vec<CheckLine>> {
    let factory = factory_for(4, seed);
    let n = 10_000;
    let reps = 100_000;
    let law = StepLaw::Continuous(ContinuousStepLaw::Gaussian { sigma: 1.0 });
    let summary = monte_carlo(
        &law,
        n,
        &WalkConfig::default(),
        Statistic::WeakRecords,
        reps,
        &factory,
    )?;
    let scale = (n as f64).sqrt();
    let scaled: Vec<f64> = summary.values.iter().map(|v| v / scale).collect();
    let ks = ks_distance(&scaled, ml_cdf_half);
    let ratio = summary.moment_ratio();
    Ok(vec![
        CheckLine::at_most("KS(R_n/sqrt(n), half-normal)", ks, 0.02),
        CheckLine::within_rel(
            "moment ratio vs pi/2",
            ratio,
            std::f64::consts::FRAC_PI_2,
            0.03,
        ),
    ])
}

/// Criterion 5: the zero-mean heavy-tail family at beta = gamma = 1/2.
///
/// The family is skip-free downward with heavy up-jumps of index
/// `1 + beta`, so its stable limit is spectrally positive and
/// `rho = lim P(S_n >= 0) = beta/(1+beta) = 1/3`, with slowly varying
/// constant `C = ((1+beta)/gamma)^(1/(1+beta)) = 3^(2/3)`: the descent
/// epoch transform solves `omega = y phi(omega)`, giving
/// `1 - omega ~ ((1+beta)/gamma)^(1/(1+beta)) (1-y)^(1/(1+beta))`, and
/// Wiener-Hopf (`exp(-sum q_k y^k/k) (1-omega) = 1-y`) fixes both
/// constants. The exact exceedance series of the capped family agrees.
/// The tempting mirrored pair `rho = 1/(1+beta)`, `C = ((1+beta)/gamma)^
/// (beta/(1+beta))` — right for the reflected, spectrally negative walk —
/// does not normalize this one; the last check keeps that visible.
fn example3_normalization(seed: u64) -> Result<Vec<CheckLine>> {
    let factory = factory_for(5, seed);
    let n = 100_000;
    let reps = 10_000;
    let law = StepLaw::Lattice(LatticeStepLaw::left_continuous(0.5, 0.5, 1e-12)?);
    let summary = monte_carlo(
        &law,
        n,
        &WalkConfig::default(),
        Statistic::WeakRecords,
        reps,
        &factory,
    )?;

    let rho = 1.0 / 3.0;
    let c = 3f64.powf(2.0 / 3.0);
    let mean_scaled = summary.mean() / (c * (n as f64).powf(rho));
    let target_mean = 1.0 / libm::tgamma(1.0 + rho);
    let target_ratio = ml_moment_ratio(rho);

    // The superseded parameterization, kept visible: rho' = 2/3, C' = 3^(1/3).
    let mirrored =
        summary.mean() / (3f64.cbrt() * (n as f64).powf(2.0 / 3.0)) * libm::tgamma(5.0 / 3.0);

    Ok(vec![
        CheckLine::within_rel(
            "E[R_n/(C n^(1/3))] vs 1/Gamma(4/3), rho=1/3, C=3^(2/3)",
            mean_scaled,
            target_mean,
            0.10,
        ),
        CheckLine::within_rel(
            "moment ratio vs rho=1/3 target",
            summary.moment_ratio(),
            target_ratio,
            0.05,
        ),
        CheckLine::at_most(
            "mirrored (rho=2/3, C=3^(1/3)) statistic stays far below 1",
            mirrored,
            0.5,
        ),
    ])
}

/// Criterion 6: drift-down walk final record count against the geometric
/// law with parameter `exp(-sum q_k/k)`, by total variation and mean.
fn geometric_r_infinity(seed: u64) -> Result<Vec<CheckLine>> {
    let factory = factory_for(6, seed);
    let law = LatticeStepLaw::bernoulli(1.0 / 3.0)?;
    let series = SpitzerSeries::compute(&law, 2000)?;
    let geom = r_infinity_law(&series)?;
    let emp = empirical_r_infinity(&law, &series, 100_000, &factory)?;

    let p = geom.parameter.mid();
    let reps = emp.reps as f64;
    // Total variation against the geometric pmf on {1, 2, ...}.
    let mut tv = 0.0;
    let mut geom_mass = 0.0;
    let mut m = 1usize;
    let mut geom_pm = p;
    while geom_pm > 1e-15 || m <= emp.counts.len() {
        let emp_pm = emp.counts.get(m - 1).map_or(0.0, |&c| c as f64 / reps);
        tv += (emp_pm - geom_pm).abs();
        geom_mass += geom_pm;
        geom_pm *= 1.0 - p;
        m += 1;
        if m > 10_000 {
            break;
        }
    }
    tv = 0.5 * (tv + (1.0 - geom_mass).max(0.0));

    let emp_mean: f64 = emp
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (i as f64 + 1.0) * c as f64)
        .sum::<f64>()
        / reps;

    Ok(vec![
        CheckLine::at_most(
            "certified missed-record bound",
            emp.missed_record_bound,
            1e-4,
        ),
        CheckLine::at_most("TV(empirical R_inf, geometric)", tv, 0.01),
        CheckLine::within_rel(
            "mean R_inf vs exp(sum q_k/k)",
            emp_mean,
            geom.mean.mid(),
            0.02,
        ),
    ])
}

/// Criterion 7: the exact asymptotic of the last-maximum probability:
/// `a_n Gamma(rho) / (n^(rho-1) C_rho(1-1/n))` is within 5% of 1 at
/// n = 1e4 for the symmetric two-point walk. No sampling.
fn last_max_asymptotic() -> Result<Vec<CheckLine>> {
    let law = LatticeStepLaw::bernoulli(0.5)?;
    let horizon = 30_000;
    let n = 10_000usize;
    let e = exceedance_probs(&law, horizon)?;
    let a = spitzer_exp(&e.q[..=n]);
    let c = c_rho(&e.q, 0.5, n as f64)?;
    let ratio = a[n] * libm::tgamma(0.5) / ((n as f64).powf(-0.5) * c.value);
    Ok(vec![CheckLine::interval(
        "a_n Gamma(1/2) / (n^(-1/2) C(1-1/n)) at n=1e4",
        ratio,
        0.95,
        1.05,
    )])
}

/// Criterion 8: sigma-records at sigma = 3/2 (a continuity point of V).
/// The statistic follows the sigma-record limit law: `V(sigma) R^sigma_n`,
/// normalized by the walk's slowly varying factor — for the symmetric
/// two-point walk `C_{1/2}(1-1/n) -> sqrt(2)`, so a bare `/sqrt(n)` would
/// sit a factor ~1.4 above the Mittag-Leffler mean.
fn sigma_records(seed: u64) -> Result<Vec<CheckLine>> {
    let factory = factory_for(8, seed);
    let law = LatticeStepLaw::bernoulli(0.5)?;
    let n = 10_000usize;
    let reps = 100_000usize;
    let sigma = 1.5;

    let e = exceedance_probs(&law, 20_000)?;
    let c = c_rho(&e.q, 0.5, n as f64)?;
    let z = ladder_height_pmf(&law, 20_000, 1)?;
    let v = renewal_function(&z, sigma)?;

    let step_law = StepLaw::Lattice(law);
    let config = WalkConfig::with_sigmas(vec![0.0, sigma]);
    let results: Vec<(u64, bool)> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = factory.stream(r);
            let mut acc = RecordCounters::new(&config);
            for _ in 0..n {
                acc.push(step_law.sample(&mut rng));
            }
            let stats = acc.into_stats();
            (stats.r_sigma[1], stats.r_sigma[0] == stats.r_weak)
        })
        .collect();
    let mean_sigma = results.iter().map(|&(r, _)| r as f64).sum::<f64>() / reps as f64;
    let mismatches = results.iter().filter(|&&(_, ok)| !ok).count();

    let normalized = v.value * mean_sigma / (c.value * (n as f64).sqrt());
    let target = 2.0 / std::f64::consts::PI.sqrt();
    Ok(vec![
        CheckLine::within_rel(
            "E[V(1.5) R^sigma_n / (C sqrt(n))] vs 2/sqrt(pi)",
            normalized,
            target,
            0.10,
        ),
        CheckLine::at_most(
            "paths where sigma=0 count != weak count",
            mismatches as f64,
            0.0,
        ),
    ])
}

/// Criterion 9: exact tail slopes `-(1/n) log P(R_n >= yn)` converge to the
/// Legendre rate: to `log 2` at y = 1, and to `y Lambda*(1/y)` at y = 3/4.
/// Pure convolution, no sampling.
fn ldp_slopes() -> Result<Vec<CheckLine>> {
    let law = LatticeStepLaw::bernoulli(0.5)?;
    let series = SpitzerSeries::compute(&law, 1600)?;
    let profile = RateProfile::new(&law, series, 0.5)?;
    let grid = [100usize, 400, 1600];

    let s1 = profile.exact_tail_logslope(1.0, &grid)?;
    let ln2 = std::f64::consts::LN_2;
    let mono1 = (s1[1].slope - s1[0].slope).min(s1[2].slope - s1[1].slope);
    let gap1 = (ln2 - s1[2].slope) / ln2;

    let rate = profile.ldp_rate(0.75)?;
    let s2 = profile.exact_tail_logslope(0.75, &grid)?;
    let gaps: Vec<f64> = s2.iter().map(|s| (rate - s.slope).abs() / rate).collect();
    let mono2 = (gaps[0] - gaps[1]).min(gaps[1] - gaps[2]);

    Ok(vec![
        CheckLine::interval(
            "y=1: slope increments (monotone toward log 2)",
            mono1,
            0.0,
            f64::INFINITY,
        ),
        CheckLine::interval(
            "y=1: final relative gap to log 2 at n=1600",
            gap1,
            0.0,
            0.10,
        ),
        CheckLine::interval(
            "y=3/4: gap decrements (approach to rate)",
            mono2,
            0.0,
            f64::INFINITY,
        ),
        CheckLine::interval(
            "y=3/4: final relative gap to y Lambda*(4/3)",
            gaps[2],
            0.0,
            0.15,
        ),
    ])
}

/// Criterion 10: the moderate-deviation rate formula against its direct
/// substitutions, plus an exact-tail sanity band at n = 1e4 with
/// `a(n) = sqrt(log n)` — a factor-2 bracket, not a sharp limit: the MDP
/// speed is `log n`, which no desk-scale n resolves sharply.
fn mdp_band() -> Result<Vec<CheckLine>> {
    let mut checks = vec![
        CheckLine::at_most(
            "|mdp_rate(1/2, 1) - 1/4|",
            (mdp_rate(0.5, 1.0)? - 0.25).abs(),
            1e-12,
        ),
        CheckLine::at_most(
            "|mdp_rate(0, 1) - 1|",
            (mdp_rate(0.0, 1.0)? - 1.0).abs(),
            1e-12,
        ),
    ];

    let law = LatticeStepLaw::bernoulli(0.5)?;
    let n = 10_000usize;
    let e = exceedance_probs(&law, n)?;
    let t = ladder_epoch_pmf(&e.q);
    let ln_n = (n as f64).ln();
    let a_n = ln_n.sqrt(); // a(n)^{1/(1-rho)} = log n
    let c = c_rho_at(&e.q, 0.5, 1.0 - ln_n / n as f64)?;
    for y in [1.0, 2.0] {
        let rate = mdp_rate(0.5, y)?;
        let m = (y * c.value * (n as f64).sqrt() * a_n).ceil() as usize;
        let p = renewal_cdf_pow(&t, n, m - 1)?;
        let slope = -p.ln() / ln_n;
        checks.push(CheckLine::interval(
            format!("exact tail exponent / mdp rate at y={y}"),
            slope / rate,
            0.5,
            2.0,
        ));
    }
    Ok(checks)
}

/// Criterion 11: the iterated-logarithm constant (exact arithmetic) and a
/// wide empirical bracket on the running-max statistic. At n = 1e7 the
/// loglog is only ~2.1, so sanity is claimable but the sharp limsup is not.
/// The running max is taken over n >= 1e3: the limsup is an asymptotic
/// statement, and below that the statistic mostly reads small-n noise
/// against a still-flat normalizer.
fn lil_bracket(seed: u64) -> Result<Vec<CheckLine>> {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let constant_err = (lil_constant(0.5)? - sqrt_pi).abs();

    let factory = factory_for(11, seed);
    let walks = 20u64;
    let n = 10_000_000usize;
    let n_floor = 1000usize;
    let per_walk: Vec<f64> = (0..walks)
        .into_par_iter()
        .map(|w| {
            let gaussian = ContinuousStepLaw::Gaussian { sigma: 1.0 };
            let mut rng = factory.stream(w);
            let mut s = 0.0f64;
            let mut max_val = 0.0f64;
            let mut records = 1u64;
            let mut stat = 0.0f64;
            for i in 1..=n {
                s += gaussian.sample(&mut rng);
                let mut fresh = false;
                if s >= max_val {
                    max_val = s;
                    records += 1;
                    fresh = true;
                }
                // Between records the statistic only decays (the normalizer
                // grows), so record epochs plus the floor itself carry the
                // exact running maximum.
                if (fresh && i >= n_floor) || i == n_floor {
                    let norm = lil_normalizer(0.5, |_| 1.0, i as f64).expect("n >= 16");
                    stat = stat.max(records as f64 / norm);
                }
            }
            stat
        })
        .collect();
    let overall = per_walk.iter().copied().fold(0.0, f64::max);

    Ok(vec![
        CheckLine::at_most("|lil_constant(1/2) - sqrt(pi)|", constant_err, 1e-12),
        CheckLine::interval(
            "running-max statistic over 20 walks of 1e7 steps",
            overall,
            0.5 * sqrt_pi,
            2.5 * sqrt_pi,
        ),
    ])
}

/// Criterion 12: continuous-time walks with Pareto(0.6) waits and
/// symmetric continuous steps: record counts scale with exponent
/// `alpha rho = 0.3` across a decade of horizons, the moment ratio matches
/// the index-0.3 target, and the renewal composition is exact.
fn ctrw_scaling(seed: u64) -> Result<Vec<CheckLine>> {
    let factory = factory_for(12, seed);
    let config = CtrwConfig {
        step: StepLaw::Continuous(ContinuousStepLaw::Gaussian { sigma: 1.0 }),
        wait: WaitingLaw::Pareto {
            alpha: 0.6,
            scale: 1.0,
        },
        horizons: vec![1e4, 1e5],
        reps: 10_000,
        seed: factory.seed(),
    };
    let samples = simulate_ctrw(&config)?;
    let alpha_rho = 0.6 * 0.5;
    let diag = scaling_check(&samples, 0, 1, alpha_rho)?;
    let mismatches = composition_mismatches(&config, &samples)?;
    let monotone_violations = (0..config.reps)
        .filter(|&r| samples.counts[1][r] < samples.counts[0][r])
        .count();

    Ok(vec![
        CheckLine::within_rel(
            "mean ratio over a decade vs 10^0.3",
            diag.mean_ratio,
            diag.mean_ratio_target,
            0.15,
        ),
        CheckLine::within_rel(
            "moment ratio at t=1e4 vs index-0.3 target",
            diag.moment_ratio.0,
            diag.moment_ratio_target,
            0.07,
        ),
        CheckLine::within_rel(
            "moment ratio at t=1e5 vs index-0.3 target",
            diag.moment_ratio.1,
            diag.moment_ratio_target,
            0.07,
        ),
        CheckLine::at_most("composition identity mismatches", mismatches as f64, 0.0),
        CheckLine::at_most(
            "replicates with decreasing records",
            monotone_violations as f64,
            0.0,
        ),
    ])
}

/// Criterion 13: every stochastic criterion, re-run under the same seed,
/// serializes to byte-identical JSON.
fn determinism(seed: u64) -> Result<Vec<CheckLine>> {
    let mut checks = Vec::new();
    for &id in &[4u32, 5, 6, 8, 11, 12] {
        let first = serde_json::to_string(&run_criterion(id, seed)?)
            .expect("report serialization is infallible");
        let second = serde_json::to_string(&run_criterion(id, seed)?)
            .expect("report serialization is infallible");
        checks.push(CheckLine::at_most(
            format!(
                "byte-diff of repeated criterion {id} [{}]",
                criterion_name(id)
            ),
            u64::from(first != second) as f64,
            0.0,
        ));
    }
    Ok(checks)
}
