//! Rate machinery for record counts: the cumulant function of the ladder
//! epoch, its Legendre transform, large- and moderate-deviation rates, and
//! the iterated-logarithm constant and normalizer — all cross-checkable
//! against exact tails from the renewal convolutions.

use crate::exact::renewal::record_tail_log;
use crate::exact::series::{DriftClass, SpitzerSeries};
use crate::step::LatticeStepLaw;
use crate::{Error, Result};

/// Rate-function evaluator for one walk. `rho` is the Spitzer parameter
/// (`lim P(S_n >= 0)`): 1 for walks drifting up, 0 drifting down, and the
/// interior value for oscillating walks. It anchors the analytic part of
/// the series near `lambda = 0`, where raw truncation would be hopeless.
#[derive(Debug, Clone)]
pub struct RateProfile {
    pub series: SpitzerSeries,
    pub rho: f64,
    /// `P(X_1 >= 0)`, the y = 1 endpoint of the Legendre transform.
    pub p_step_nonneg: f64,
}

impl RateProfile {
    pub fn new(law: &LatticeStepLaw, series: SpitzerSeries, rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("rho {rho} outside [0,1]")));
        }
        Ok(Self {
            series,
            rho,
            p_step_nonneg: law.prob_nonneg(),
        })
    }

    pub fn drift(&self) -> DriftClass {
        self.series.drift
    }

    /// `E(T1)` where finite (walks drifting up), as a certified enclosure.
    pub fn expected_epoch(&self) -> Option<crate::exact::Interval> {
        self.series.expected_ladder_epoch()
    }

    /// `sum_k e^{lambda k} q_k / k`, split as
    /// `-rho log(1 - e^lambda) + sum_k (q_k - rho) e^{lambda k} / k`
    /// so the divergent part near `lambda = 0` is carried analytically.
    fn epoch_log_series(&self, lambda: f64) -> f64 {
        if lambda >= 0.0 && self.rho > 0.0 {
            return f64::INFINITY;
        }
        let analytic = if self.rho == 0.0 {
            0.0
        } else {
            -self.rho * log1m_exp(lambda)
        };
        let el = lambda.exp();
        let mut xk = 1.0;
        let mut sum = 0.0;
        for (k, &qk) in self.series.q.iter().enumerate().skip(1) {
            xk *= el;
            if xk < 1e-18 * k as f64 {
                break;
            }
            sum += (qk - self.rho) * xk / k as f64;
        }
        analytic + sum
    }

    /// `sum_k e^{lambda k} q_k = rho e^lambda / (1 - e^lambda) + sum (q_k - rho) e^{lambda k}`.
    fn epoch_weight_series(&self, lambda: f64) -> f64 {
        let one_minus_el = -f64::exp_m1(lambda);
        if one_minus_el <= 0.0 {
            return f64::INFINITY;
        }
        let el = lambda.exp();
        let analytic = self.rho * el / one_minus_el;
        let mut xk = 1.0;
        let mut sum = 0.0;
        for &qk in self.series.q.iter().skip(1) {
            xk *= el;
            if xk < 1e-18 {
                break;
            }
            sum += (qk - self.rho) * xk;
        }
        analytic + sum
    }

    /// Cumulant function of the ladder epoch on `lambda <= 0`:
    /// `Lambda(lambda) = log E(e^{lambda T1}) = log[1 - exp(-sum_k e^{lambda k} q_k / k)]`.
    pub fn lambda(&self, lam: f64) -> Result<f64> {
        if lam > 0.0 {
            return Err(Error::Precondition(
                "Lambda is only defined for lambda <= 0 (E e^{lambda T1} may diverge above)".into(),
            ));
        }
        if lam == 0.0 && self.series.defect.hi > 0.0 {
            return Err(Error::Precondition(
                "Lambda(0) requires a defect-free walk (T1 finite almost surely)".into(),
            ));
        }
        let s = self.epoch_log_series(lam);
        if s.is_infinite() {
            return Ok(0.0);
        }
        Ok(log1m_exp(-s))
    }

    /// `Lambda'(lambda) = S1(lambda) D / (1 - D)` with `D = exp(-sum)`;
    /// increases from 1 (lambda -> -inf) to `E(T1)` (lambda -> 0-).
    pub fn lambda_prime(&self, lam: f64) -> Result<f64> {
        if lam >= 0.0 {
            return Err(Error::Precondition("Lambda' needs lambda < 0".into()));
        }
        let s = self.epoch_log_series(lam);
        // D/(1-D) with D = e^{-s}; the denominator via expm1 keeps full
        // precision where D is within 1e-9 of 1.
        Ok(self.epoch_weight_series(lam) * (-s).exp() / -f64::exp_m1(-s))
    }

    /// Legendre transform `Lambda*(y) = sup_{lambda <= 0} (lambda y - Lambda(lambda))`:
    /// `+inf` below 1, `-log P(X1 >= 0)` at 1, and the stationary value from
    /// monotone bisection of `Lambda'(lambda) = y` above 1. For walks
    /// drifting up, `y >= E(T1)` collapses to 0 at the LLN point.
    pub fn legendre(&self, y: f64) -> Result<LegendreValue> {
        if y.is_nan() || y <= 0.0 {
            return Err(Error::InvalidParameter(
                "Legendre transform needs y > 0".into(),
            ));
        }
        if y < 1.0 {
            return Ok(LegendreValue {
                value: f64::INFINITY,
                lambda_star: None,
                residual: 0.0,
                degenerate_lln: false,
            });
        }
        if y == 1.0 {
            return Ok(LegendreValue {
                value: -self.p_step_nonneg.ln(),
                lambda_star: None,
                residual: 0.0,
                degenerate_lln: false,
            });
        }
        if self.drift() == DriftClass::DriftsUp {
            let et1 = self
                .expected_epoch()
                .expect("drift-up has finite E(T1)")
                .mid();
            if y >= et1 {
                return Ok(LegendreValue {
                    value: 0.0,
                    lambda_star: None,
                    residual: 0.0,
                    degenerate_lln: true,
                });
            }
        }
        let mut lo = -60.0;
        let mut hi = -1e-12;
        if self.lambda_prime(hi)? <= y {
            // y sits above the resolvable range; the supremum is pinned at
            // the right edge of the domain.
            let val = hi * y - self.lambda(hi)?;
            return Ok(LegendreValue {
                value: val,
                lambda_star: Some(hi),
                residual: (self.lambda_prime(hi)? - y).abs(),
                degenerate_lln: false,
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.lambda_prime(mid)? < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda_star = 0.5 * (lo + hi);
        Ok(LegendreValue {
            value: lambda_star * y - self.lambda(lambda_star)?,
            lambda_star: Some(lambda_star),
            residual: (self.lambda_prime(lambda_star)? - y).abs(),
            degenerate_lln: false,
        })
    }

    /// Large-deviation rate of the record count:
    /// `lim (1/n) log P(R_n >= ny) = -y Lambda*(1/y)` for y in (0, 1].
    /// Refused for walks drifting down (R_inf is finite there) and, for
    /// walks drifting up, below the LLN point `1/E(T1)`.
    pub fn ldp_rate(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y <= 1.0) {
            return Err(Error::InvalidParameter("LDP rate needs y in (0, 1]".into()));
        }
        match self.drift() {
            DriftClass::DriftsDown => Err(Error::Precondition(
                "the walk drifts to -inf: R_inf is finite and the LDP is vacuous".into(),
            )),
            DriftClass::DriftsUp => {
                let et1 = self.expected_epoch().expect("finite").mid();
                if y <= 1.0 / et1 {
                    return Err(Error::Precondition(format!(
                        "y = {y} is at or below the LLN point 1/E(T1) = {:.6}",
                        1.0 / et1
                    )));
                }
                Ok(y * self.legendre(1.0 / y)?.value)
            }
            DriftClass::Oscillates => Ok(y * self.legendre(1.0 / y)?.value),
        }
    }

    /// Exact finite-n tail slopes `-(1/n) log P(R_n >= ceil(y n))`, the
    /// quantities that converge to [`Self::ldp_rate`]. No sampling; pure
    /// renewal convolution of the ladder-epoch law.
    pub fn exact_tail_logslope(&self, y: f64, n_grid: &[usize]) -> Result<Vec<TailSlope>> {
        if self.drift() == DriftClass::DriftsDown {
            return Err(Error::Precondition(
                "exact tail slopes are vacuous for walks drifting to -inf".into(),
            ));
        }
        if !(y > 0.0 && y <= 1.0) {
            return Err(Error::InvalidParameter(
                "tail slope needs y in (0, 1]".into(),
            ));
        }
        let mut out = Vec::with_capacity(n_grid.len());
        for &n in n_grid {
            if n > self.series.horizon {
                return Err(Error::Precondition(format!(
                    "n = {n} beyond the series horizon {}",
                    self.series.horizon
                )));
            }
            let m = (y * n as f64).ceil() as usize;
            let log_tail = record_tail_log(&self.series.t, n, m)?;
            out.push(TailSlope {
                n,
                m,
                log_tail,
                slope: -log_tail / n as f64,
            });
        }
        Ok(out)
    }
}

/// `log(1 - e^x)` for x < 0, full precision at both ends: via `expm1` when
/// `1 - e^x` is small, via `ln_1p` when `e^x` is small.
fn log1m_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-f64::exp_m1(x)).ln()
    } else {
        f64::ln_1p(-x.exp())
    }
}

/// Result of the Legendre transform at one point.
#[derive(Debug, Clone, Copy)]
pub struct LegendreValue {
    pub value: f64,
    pub lambda_star: Option<f64>,
    /// `|Lambda'(lambda*) - y|` at the bisection solution.
    pub residual: f64,
    /// Set when the rate degenerates to 0 at the law-of-large-numbers point
    /// (`y >= E(T1)` for walks drifting up).
    pub degenerate_lln: bool,
}

/// One exact tail evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TailSlope {
    pub n: usize,
    pub m: usize,
    pub log_tail: f64,
    pub slope: f64,
}

/// Moderate-deviation rate `(1 - rho) (rho^rho y)^{1/(1-rho)}` for rho in
/// [0, 1) and y > 0 (with the convention `0^0 = 1`).
pub fn mdp_rate(rho: f64, y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "mdp rate needs rho in [0,1), got {rho}"
        )));
    }
    if y < 0.0 {
        return Err(Error::InvalidParameter("mdp rate needs y >= 0".into()));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let rho_pow = if rho == 0.0 { 1.0 } else { rho.powf(rho) };
    Ok((1.0 - rho) * (rho_pow * y).powf(1.0 / (1.0 - rho)))
}

/// Iterated-logarithm limsup constant `Gamma(rho+1) / (rho^rho (1-rho)^{1-rho})`.
pub fn lil_constant(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lil constant needs rho in (0,1), got {rho}"
        )));
    }
    Ok(libm::tgamma(rho + 1.0) / (rho.powf(rho) * (1.0 - rho).powf(1.0 - rho)))
}

/// The normalizer `f(n / loglog f(n)) * loglog f(n)` with
/// `f(x) = x^rho C_rho(1 - 1/x) / Gamma(rho + 1)`, evaluated by literal
/// composition. `c_at(x)` must supply the slowly varying factor at real
/// arguments (identically 1 for continuous symmetric laws).
pub fn lil_normalizer<C: Fn(f64) -> f64>(rho: f64, c_at: C, n: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(
            "lil normalizer needs rho in (0,1)".into(),
        ));
    }
    if n < 16.0 {
        return Err(Error::Precondition(format!(
            "lil normalizer needs n >= 16 for the nested loglog, got {n}"
        )));
    }
    let f = |x: f64| x.powf(rho) * c_at(x) / libm::tgamma(rho + 1.0);
    let fn_val = f(n);
    if fn_val <= std::f64::consts::E {
        return Err(Error::Precondition(format!(
            "f(n) = {fn_val} <= e; loglog f(n) is not positive yet"
        )));
    }
    let ll = fn_val.ln().ln();
    Ok(f(n / ll) * ll)
}
