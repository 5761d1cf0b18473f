//! Record statistics of random walks.
//!
//! The crate has two halves that check each other:
//!
//! * an **exact engine** ([`exact`]) that turns the exceedance probabilities
//!   `q_k = P(S_k >= 0)` of a lattice walk into closed-form record laws
//!   (last-maximum probabilities, ladder-epoch distributions, the full law
//!   of the record count `R_n`, geometric `R_inf` laws, ladder heights and
//!   the renewal function `V`), and
//! * a **simulation engine** ([`walk`], [`ctrw`]) that streams walks and
//!   counts every record statistic in one pass, with reproducible
//!   counter-based random streams ([`stream`]).
//!
//! [`mittag_leffler`] supplies the limit-law targets (moments, moment
//! ratios, CDF evaluators) and [`deviations`] the large/moderate-deviation
//! rate machinery and the iterated-logarithm normalizer. [`verify`] wires
//! everything into a reproducible pass/fail report.

pub mod ctrw;
pub mod deviations;
pub mod exact;
pub mod mittag_leffler;
pub mod step;
pub mod stream;
pub mod summary;
pub mod verify;
pub mod walk;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A constructor or operation was given parameters outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A documented precondition of an operation does not hold for the
    /// given inputs (e.g. LDP rates requested for a walk drifting to -inf).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The request is structurally fine but exceeds a configured resource
    /// cap (enumeration size, convolution cells, support length).
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Caps the worker pool used for replicate parallelism. Only effective
/// before the first parallel call; returns false afterwards. Results never
/// depend on the worker count — only wall time does.
pub fn set_worker_threads(n: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .is_ok()
}
