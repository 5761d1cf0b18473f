//! Path-level invariants of the walk engine, checked against a naive
//! quadratic reference implementation that recomputes every statistic
//! straight from the definitions, plus the distributional identities the
//! streaming counters must respect.

use proptest::prelude::*;

use recwalk::step::{ContinuousStepLaw, LatticeStepLaw, StepLaw};
use recwalk::stream::StreamFactory;
use recwalk::walk::{
    monte_carlo, run_walk, stats_of_steps, Statistic, TrajectoryStats, WalkConfig,
};

/// Straight-from-the-definitions recomputation, O(n^2) and proud of it.
fn naive_stats(steps: &[f64], sigmas: &[f64], threshold: Option<(f64, f64)>) -> TrajectoryStats {
    let start = threshold.map_or(0.0, |(x1, _)| x1);
    let mut s = vec![start];
    for &x in steps {
        s.push(s.last().unwrap() + x);
    }
    let n = steps.len();

    let is_weak_record = |i: usize| -> bool { (0..i).all(|j| s[i] >= s[j]) }; // i = 0 vacuously true
    let is_strong_record = |i: usize| -> bool { (0..i).all(|j| s[i] > s[j]) };

    let record_positions: Vec<usize> = (0..=n).filter(|&i| is_weak_record(i)).collect();
    let r_weak = record_positions.len() as u64;
    let r_strong = (0..=n).filter(|&i| is_strong_record(i)).count() as u64;

    let max_val = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let first_max_pos = (0..=n).find(|&i| s[i] == max_val).unwrap();
    let last_max_pos = (0..=n).rev().find(|&i| s[i] == max_val).unwrap();

    let n_nonneg = (1..=n).filter(|&i| s[i] >= 0.0).count() as u64;
    let n_pos = (1..=n).filter(|&i| s[i] > 0.0).count() as u64;

    let mut ladder_epochs = Vec::new();
    let mut ladder_heights = Vec::new();
    for w in record_positions.windows(2) {
        ladder_epochs.push(w[1] - w[0]);
        ladder_heights.push(s[w[1]] - s[w[0]]);
    }

    let r_sigma = sigmas
        .iter()
        .map(|&sigma| {
            let mut count = 1u64;
            let mut last = start;
            for &si in &s[1..] {
                if si - last >= sigma {
                    count += 1;
                    last = si;
                }
            }
            count
        })
        .collect();

    let r_thresholded =
        threshold.map(|(_, x2)| record_positions.iter().filter(|&&i| s[i] >= x2).count() as u64);

    TrajectoryStats {
        n,
        r_weak,
        r_strong,
        r_sigma,
        max_val,
        n_nonneg,
        n_pos,
        last_max_pos,
        first_max_pos,
        ladder_epochs,
        ladder_heights,
        r_thresholded,
    }
}

fn lattice_steps() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-3i64..=3).prop_map(|v| v as f64), 0..60)
}

fn continuous_steps() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 0..60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn streaming_counters_match_naive_reference(
        steps in lattice_steps(),
        s1 in 0.0f64..4.0,
        s2 in 0.0f64..4.0,
    ) {
        let sigmas = vec![0.0, s1.min(s2), s1.max(s2)];
        let config = WalkConfig { sigmas: sigmas.clone(), threshold: None, collect_ladders: true };
        let fast = stats_of_steps(&steps, &config).unwrap();
        let slow = naive_stats(&steps, &sigmas, None);
        prop_assert_eq!(&fast, &slow);

        // Structural invariants on top of agreement.
        prop_assert!(1 <= fast.r_strong);
        prop_assert!(fast.r_strong <= fast.r_weak);
        prop_assert!(fast.r_weak <= steps.len() as u64 + 1);
        prop_assert_eq!(fast.r_sigma[0], fast.r_weak);
        prop_assert!(fast.r_sigma[1] >= fast.r_sigma[2], "sigma counts must be nonincreasing");
        prop_assert_eq!(fast.r_weak, 1 + fast.ladder_epochs.len() as u64);
        prop_assert!(fast.ladder_epochs.iter().sum::<usize>() <= steps.len());
        prop_assert!(fast.ladder_heights.iter().all(|&h| h >= 0.0));
        let height_sum: f64 = fast.ladder_heights.iter().sum();
        prop_assert!((height_sum - fast.max_val).abs() < 1e-9);
        prop_assert!(fast.last_max_pos >= fast.first_max_pos);
        // Last-maximum event: L_{n,n} = n iff the endpoint sits at the max.
        let endpoint: f64 = steps.iter().sum();
        prop_assert_eq!(fast.last_max_pos == fast.n, endpoint == fast.max_val);
    }

    #[test]
    fn continuous_paths_match_naive_reference(steps in continuous_steps()) {
        let config = WalkConfig { sigmas: vec![0.0, 1.0], threshold: None, collect_ladders: true };
        let fast = stats_of_steps(&steps, &config).unwrap();
        let slow = naive_stats(&steps, &[0.0, 1.0], None);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn thresholded_counts_match_naive_reference(
        steps in lattice_steps(),
        x1 in -3.0f64..3.0,
        x2 in -3.0f64..3.0,
    ) {
        let config = WalkConfig { sigmas: vec![], threshold: Some((x1, x2)), collect_ladders: false };
        let fast = stats_of_steps(&steps, &config).unwrap();
        let slow = naive_stats(&steps, &[], Some((x1, x2)));
        prop_assert_eq!(fast.r_thresholded, slow.r_thresholded);
        // (x, x) reproduces the plain weak count from a shifted start.
        let config = WalkConfig { sigmas: vec![], threshold: Some((x1, x1)), collect_ladders: false };
        let shifted = stats_of_steps(&steps, &config).unwrap();
        prop_assert_eq!(shifted.r_thresholded, Some(shifted.r_weak));
    }

    /// For right-continuous lattice laws (top step exactly +1), every
    /// strong record lifts the maximum by 1, so M_n = strong count - 1 on
    /// every path.
    #[test]
    fn right_continuous_max_equals_strong_records(
        p_up in 0.05f64..0.95,
        lo in -3i64..=-1,
        n in 0usize..400,
        seed in 0u64..1000,
    ) {
        let width = (1 - lo) as usize + 1;
        let mut pmf = vec![(1.0 - p_up) / (width as f64 - 1.0); width];
        *pmf.last_mut().unwrap() = p_up;
        let law = LatticeStepLaw::from_pmf(lo, pmf).unwrap();
        prop_assume!(law.is_right_continuous());
        let mut rng = StreamFactory::new(seed).stream(0);
        let stats = run_walk(&StepLaw::Lattice(law), n, &WalkConfig::default(), &mut rng).unwrap();
        prop_assert_eq!(stats.max_val as u64, stats.r_strong - 1);
    }
}

/// Continuous symmetric families have `P(S_k >= 0) = 1/2` for every k.
#[test]
fn continuous_symmetric_exceedance_is_half() {
    let laws = [
        ContinuousStepLaw::Gaussian { sigma: 1.0 },
        ContinuousStepLaw::UniformSymmetric { half_width: 2.0 },
        ContinuousStepLaw::Cauchy { scale: 1.0 },
    ];
    let reps = 100_000usize;
    let se = 3.0 * (0.25f64 / reps as f64).sqrt();
    for (i, law) in laws.into_iter().enumerate() {
        let factory = StreamFactory::new(1000 + i as u64);
        for (j, k) in [1usize, 10, 100].into_iter().enumerate() {
            let mut nonneg = 0usize;
            for r in 0..reps {
                let mut rng = factory.stream((j * reps + r) as u64);
                let mut s = 0.0;
                for _ in 0..k {
                    s += law.sample(&mut rng);
                }
                if s >= 0.0 {
                    nonneg += 1;
                }
            }
            let freq = nonneg as f64 / reps as f64;
            assert!(
                (freq - 0.5).abs() <= se,
                "law {i}, k={k}: P(S_k >= 0) estimate {freq}"
            );
        }
    }
}

/// Distributional Sparre Andersen check at Monte Carlo level: the
/// frequency of {L_{n,n} = n} matches the frequency of {N_n = n} (and the
/// strict pair) within 3 standard errors. The exact version is criterion 2.
#[test]
fn sparre_andersen_frequencies_match() {
    let n = 20usize;
    let reps = 100_000usize;
    for (s, law) in [
        LatticeStepLaw::bernoulli(0.5).unwrap(),
        LatticeStepLaw::from_pmf(-2, vec![0.3, 0.3, 0.4]).unwrap(),
    ]
    .into_iter()
    .enumerate()
    {
        let factory = StreamFactory::new(500 + s as u64);
        let law = StepLaw::Lattice(law);
        let config = WalkConfig::default();
        let mut last_max = 0u64;
        let mut all_nonneg = 0u64;
        let mut first_max = 0u64;
        let mut all_pos = 0u64;
        for r in 0..reps {
            let mut rng = factory.stream(r as u64);
            let stats = run_walk(&law, n, &config, &mut rng).unwrap();
            last_max += u64::from(stats.last_max_pos == n);
            all_nonneg += u64::from(stats.n_nonneg == n as u64);
            first_max += u64::from(stats.first_max_pos == n);
            all_pos += u64::from(stats.n_pos == n as u64);
        }
        let freq = |c: u64| c as f64 / reps as f64;
        let bound = |p: f64| 3.0 * (2.0 * p * (1.0 - p) / reps as f64).sqrt();
        let (f1, f2) = (freq(last_max), freq(all_nonneg));
        assert!((f1 - f2).abs() <= bound(f1), "weak pair: {f1} vs {f2}");
        let (g1, g2) = (freq(first_max), freq(all_pos));
        assert!(
            (g1 - g2).abs() <= bound(g1.max(0.01)),
            "strict pair: {g1} vs {g2}"
        );
    }
}

/// Summaries merge associatively by replicate blocks: splitting the
/// replicate range and concatenating reproduces the single run.
#[test]
fn summary_merge_matches_single_run() {
    let law = StepLaw::Lattice(LatticeStepLaw::bernoulli(0.5).unwrap());
    let factory = StreamFactory::new(99);
    let config = WalkConfig::default();
    let whole = monte_carlo(&law, 64, &config, Statistic::WeakRecords, 300, &factory).unwrap();
    // Replicates r in 200..300 are streams 200..300; reproduce by hand.
    let mut tail_vals = Vec::new();
    for r in 200..300u64 {
        let mut rng = factory.stream(r);
        let st = run_walk(&law, 64, &config, &mut rng).unwrap();
        tail_vals.push(st.r_weak as f64);
    }
    assert_eq!(&whole.values[200..300], &tail_vals[..]);
}
