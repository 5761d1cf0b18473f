//! Weighted enumeration of every path of a small lattice walk — the
//! universal small-n oracle the closed-form identities are tested against.

use std::collections::BTreeMap;

use crate::step::LatticeStepLaw;
use crate::walk::{RecordCounters, WalkConfig};
use crate::{Error, Result};

/// Leaves an enumeration may touch before being refused.
pub const MAX_PATHS: f64 = 1e8;

fn check_size(law: &LatticeStepLaw, n: usize) -> Result<Vec<(f64, f64)>> {
    let support: Vec<(f64, f64)> = law
        .pmf()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| ((law.support_lo() + i as i64) as f64, p))
        .collect();
    let leaves = (support.len() as f64).powi(n as i32);
    if leaves > MAX_PATHS {
        return Err(Error::ResourceCap(format!(
            "{}^{n} = {leaves:.3e} paths exceed the {MAX_PATHS:.0e} enumeration cap",
            support.len()
        )));
    }
    Ok(support)
}

/// Walks the whole depth-`n` path tree, calling `visit(counters, weight)`
/// at every node (every prefix of every path, the root included). The
/// weight of a node is the probability of its step prefix, so summing
/// `weight * indicator(depth == d, ...)` over visits gives exact
/// depth-d probabilities for all d <= n in a single pass.
pub fn enumerate_prefixes<F>(
    law: &LatticeStepLaw,
    n: usize,
    config: &WalkConfig,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&RecordCounters, f64),
{
    let support = check_size(law, n)?;
    config.validate()?;
    let root = RecordCounters::new(config);
    visit(&root, 1.0);
    if n == 0 {
        return Ok(());
    }
    // Iterative DFS with per-depth counter snapshots.
    let mut states: Vec<RecordCounters> = vec![root; n + 1];
    let mut weights = vec![1.0f64; n + 1];
    let mut choice = vec![0usize; n + 1];
    let mut depth = 0usize;
    loop {
        if depth < n && choice[depth] < support.len() {
            let (step, p) = support[choice[depth]];
            choice[depth] += 1;
            let (lower, upper) = states.split_at_mut(depth + 1);
            upper[0].clone_from(&lower[depth]);
            upper[0].push(step);
            weights[depth + 1] = weights[depth] * p;
            depth += 1;
            choice[depth] = 0;
            visit(&states[depth], weights[depth]);
        } else if depth == 0 {
            break;
        } else {
            depth -= 1;
        }
    }
    Ok(())
}

/// Exact pmf of an integer-valued statistic of the depth-`n` paths.
pub fn statistic_pmf<F>(
    law: &LatticeStepLaw,
    n: usize,
    config: &WalkConfig,
    f: F,
) -> Result<BTreeMap<i64, f64>>
where
    F: Fn(&RecordCounters) -> i64,
{
    let mut pmf = BTreeMap::new();
    enumerate_prefixes(law, n, config, |state, w| {
        if state.n() == n {
            *pmf.entry(f(state)).or_insert(0.0) += w;
        }
    })?;
    Ok(pmf)
}

/// Exact `P(event)` at every depth `d = 0..=n` in one pass.
pub fn prefix_event_probs<F>(law: &LatticeStepLaw, n: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(&RecordCounters) -> bool,
{
    let mut probs = vec![0.0; n + 1];
    enumerate_prefixes(law, n, &WalkConfig::default(), |state, w| {
        if f(state) {
            probs[state.n()] += w;
        }
    })?;
    Ok(probs)
}
