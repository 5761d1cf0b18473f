//! Renewal convolutions of the ladder-epoch law: the exact distribution of
//! the record count `R_n`, its (possibly astronomically small) upper tails,
//! the ladder-height absorption DP, and the renewal function `V`.

use crate::step::{kahan_sum, LatticeStepLaw};
use crate::{Error, Result};

/// Record epochs are partial sums `W_j = T_1 + ... + T_j`, and
/// `P(R_n >= m) = P(W_{m-1} <= n)`. This computes
/// `log P(W_j <= n)` for `j = 0..=jmax` by convolving the (defective)
/// ladder-epoch pmf stage by stage, renormalizing the truncated vector at
/// every stage and accumulating the lost mass in log space. The rescaling
/// keeps tails like `2^{-1599}` exact to relative rounding where a plain
/// f64 convolution would underflow to zero.
pub fn renewal_log_cdfs(t: &[f64], n: usize, jmax: usize) -> Result<Vec<f64>> {
    if t.len() < n + 1 {
        return Err(Error::Precondition(format!(
            "ladder-epoch pmf horizon {} is shorter than n = {n}",
            t.len() - 1
        )));
    }
    let mut out = vec![f64::NEG_INFINITY; jmax + 1];
    out[0] = 0.0; // W_0 = 0
                  // w holds the conditional law of W_j on [j, n], scaled to total mass 1.
    let mut w = vec![0.0f64; n + 1];
    w[0] = 1.0;
    let mut next = vec![0.0f64; n + 1];
    let mut lo = 0usize;
    let mut log_mass = 0.0f64;
    for slot in out.iter_mut().skip(1) {
        let new_lo = lo + 1; // T >= 1, so W_j >= j
        if new_lo > n {
            break; // P(W_j <= n) = 0 for all remaining j
        }
        for i in new_lo..=n {
            let mut acc = 0.0;
            for idx in lo..i {
                acc += w[idx] * t[i - idx];
            }
            next[i] = acc;
        }
        let mass = kahan_sum(next[new_lo..=n].iter().copied());
        if mass <= 0.0 {
            break;
        }
        let inv = 1.0 / mass;
        for v in next[new_lo..=n].iter_mut() {
            *v *= inv;
        }
        log_mass += mass.ln();
        *slot = log_mass;
        std::mem::swap(&mut w, &mut next);
        lo = new_lo;
    }
    Ok(out)
}

/// `log P(R_n >= m)`, exact up to rounding, safe for tails far below the
/// f64 underflow threshold. `m = 1` gives 0 (there is always the record at
/// the start).
pub fn record_tail_log(t: &[f64], n: usize, m: usize) -> Result<f64> {
    if m <= 1 {
        return Ok(0.0);
    }
    let cdfs = renewal_log_cdfs(t, n, m - 1)?;
    Ok(cdfs[m - 1])
}

/// The full pmf of the record count: `pmf[m] = P(R_n = m)` for
/// `m = 1..=n+1` (index 0 unused). Entries whose true value is below the
/// f64 underflow threshold come back as 0; use [`record_tail_log`] for
/// extreme tails.
pub fn record_count_distribution(t: &[f64], n: usize) -> Result<Vec<f64>> {
    let log_cdfs = renewal_log_cdfs(t, n, n + 1)?;
    let mut pmf = vec![0.0; n + 2];
    for m in 1..=n + 1 {
        let upper = log_cdfs[m - 1].exp();
        let lower = if m <= n { log_cdfs[m].exp() } else { 0.0 };
        pmf[m] = (upper - lower).max(0.0);
    }
    Ok(pmf)
}

/// `P(W_m <= n)` through plain truncated polynomial powers of the epoch
/// generating function (binary exponentiation). Cheaper than the stagewise
/// path when `m << n`; only trustworthy while the answer stays well above
/// the underflow floor, which the caller should check.
pub fn renewal_cdf_pow(t: &[f64], n: usize, m: usize) -> Result<f64> {
    if t.len() < n + 1 {
        return Err(Error::Precondition(format!(
            "ladder-epoch pmf horizon {} is shorter than n = {n}",
            t.len() - 1
        )));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let mut base = t[..=n].to_vec();
    base[0] = 0.0;
    let mut acc: Option<Vec<f64>> = None;
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => poly_mul_trunc(&a, &base, n),
            });
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul_trunc(&base, &base, n);
        }
    }
    Ok(kahan_sum(acc.unwrap().iter().copied()))
}

fn poly_mul_trunc(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        let top = n - i;
        for (j, &bj) in b.iter().enumerate().take(top + 1) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Ladder-height law from the absorption DP: `z_pmf[h] = P(Z1 = h, T1 <= N)`
/// for `h = 0..=support_hi`, plus the mass still wandering below zero at the
/// DP horizon (`continuation`). For walks drifting to -inf the continuation
/// converges to the defect `P(T1 = inf)`; for oscillating walks it decays
/// like `N^{-1/2}` and is reported so callers can budget for it.
#[derive(Debug, Clone)]
pub struct LadderHeightLaw {
    pub z_pmf: Vec<f64>,
    pub continuation: f64,
    pub horizon: usize,
}

impl LadderHeightLaw {
    /// Mass resolved into heights so far.
    pub fn absorbed_mass(&self) -> f64 {
        kahan_sum(self.z_pmf.iter().copied())
    }

    /// Flags a horizon too short to pin the law to `tol`.
    pub fn continuation_exceeds(&self, tol: f64) -> bool {
        self.continuation > tol
    }
}

/// Runs the strictly-negative-states DP: mass starts at 0, every step either
/// absorbs at a nonnegative height (the first weak ladder point) or keeps
/// wandering below zero. `max_h` must cover the law's top step since an
/// absorption can overshoot to at most `support_hi`.
pub fn ladder_height_pmf(
    law: &LatticeStepLaw,
    horizon: usize,
    max_h: i64,
) -> Result<LadderHeightLaw> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let hi = law.support_hi();
    let lo = law.support_lo();
    if max_h < hi {
        return Err(Error::InvalidParameter(format!(
            "max_h = {max_h} cannot be below support_hi = {hi}; overshoot reaches support_hi"
        )));
    }
    if lo >= 0 {
        return Err(Error::Precondition(
            "law never steps below zero; T1 = 1 and Z1 = X1 trivially".into(),
        ));
    }
    let depth_cells = (horizon as u128) * (horizon as u128) * ((-lo) as u128);
    if depth_cells > 16_000_000_000 {
        return Err(Error::ResourceCap(format!(
            "ladder DP would touch {depth_cells} cells"
        )));
    }

    let support: Vec<(i64, f64)> = law
        .pmf()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| (lo + i as i64, p))
        .collect();

    let mut z_pmf = vec![0.0f64; hi as usize + 1];
    // neg[i] = mass at position -(i+1); window grows |lo| per step.
    let mut neg: Vec<f64> = Vec::new();
    let mut next: Vec<f64> = Vec::new();

    // Step 1 from the origin.
    for &(v, p) in &support {
        if v >= 0 {
            z_pmf[v as usize] += p;
        } else {
            let idx = (-v - 1) as usize;
            if neg.len() <= idx {
                neg.resize(idx + 1, 0.0);
            }
            neg[idx] += p;
        }
    }

    for _step in 2..=horizon {
        let depth = neg.len();
        next.clear();
        next.resize(depth + (-lo) as usize, 0.0);
        for (i, &m) in neg.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            let pos = -(i as i64) - 1;
            for &(v, p) in &support {
                let dest = pos + v;
                if dest >= 0 {
                    z_pmf[dest as usize] += m * p;
                } else {
                    next[(-dest - 1) as usize] += m * p;
                }
            }
        }
        std::mem::swap(&mut neg, &mut next);
    }

    let continuation = kahan_sum(neg.iter().copied());
    Ok(LadderHeightLaw {
        z_pmf,
        continuation,
        horizon,
    })
}

/// Value of the renewal function with a certified truncation bound.
#[derive(Debug, Clone, Copy)]
pub struct RenewalValue {
    pub value: f64,
    pub remainder_bound: f64,
    pub terms: usize,
}

/// `V(x) = sum_n P(H_n <= x)` where `H_n` is the n-fold sum of ladder
/// heights, computed by direct convolution of the (defective) height pmf.
/// Terms satisfy `P(H_n <= x) <= P(Z <= x)^n`, which is strictly below 1
/// for a defective law, so truncation at term < 1e-12 carries a geometric
/// remainder bound. `V(x) = 0` for x < 0 and `V >= 1` otherwise.
pub fn renewal_function(z: &LadderHeightLaw, x: f64) -> Result<RenewalValue> {
    if x < 0.0 {
        return Ok(RenewalValue {
            value: 0.0,
            remainder_bound: 0.0,
            terms: 0,
        });
    }
    let cap = (x.floor() as usize).min(z.z_pmf.len() * 64 + 64);
    let zc: Vec<f64> = (0..=cap.min(z.z_pmf.len().saturating_sub(1)))
        .map(|h| z.z_pmf[h])
        .collect();
    let theta = kahan_sum(zc.iter().copied());
    if theta >= 1.0 - 1e-14 {
        return Err(Error::Precondition(
            "height mass at or below x is 1; the renewal series does not converge".into(),
        ));
    }

    let mut h = vec![0.0f64; cap + 1];
    h[0] = 1.0;
    let mut value = 1.0; // n = 0 term
    let mut term = 1.0;
    let mut terms = 1usize;
    let tol = 1e-12;
    while term >= tol {
        // h <- h * z truncated at cap
        let mut nh = vec![0.0f64; cap + 1];
        for (i, &m) in h.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (j, &p) in zc.iter().enumerate() {
                if i + j <= cap {
                    nh[i + j] += m * p;
                }
            }
        }
        h = nh;
        term = kahan_sum(h.iter().copied());
        value += term;
        terms += 1;
        if terms > 5_000_000 {
            return Err(Error::ResourceCap(
                "renewal series did not reach 1e-12".into(),
            ));
        }
    }
    let remainder_bound = term * theta / (1.0 - theta);
    Ok(RenewalValue {
        value,
        remainder_bound,
        terms,
    })
}
