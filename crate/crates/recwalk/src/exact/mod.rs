//! Exact (floating-point) record laws for lattice walks.
//!
//! Everything here is driven by the exceedance probabilities
//! `q_k = P(S_k >= 0)`, computed by convolution over the step pmf:
//!
//! * [`series`] turns `q` into the last-maximum probabilities `a_n`
//!   (series exponentiation), the ladder-epoch pmf `t_n = P(T1 = n)`
//!   (series log/negation), defect and drift certificates, the slowly
//!   varying factor `C_rho`, and the geometric laws of `R_inf` / `M_inf`.
//! * [`renewal`] convolves the ladder-epoch pmf into the full law of the
//!   record count `R_n` (with an underflow-safe log-tail path), and runs
//!   the ladder-height absorption DP that feeds the renewal function `V`.
//! * [`brute`] enumerates every weighted path of a small lattice walk; it
//!   is the universal oracle the identities are tested against.

pub mod brute;
pub mod renewal;
pub mod series;

pub use renewal::{
    ladder_height_pmf, record_count_distribution, renewal_function, LadderHeightLaw,
};
pub use series::{
    c_rho, c_rho_at, estimate_rho, exceedance_probs, ladder_epoch_pmf, m_infinity_law,
    r_infinity_law, spitzer_exp, DriftClass, Exceedance, Interval, SpitzerSeries,
};
