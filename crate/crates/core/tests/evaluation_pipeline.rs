use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};

use runsize_core::evaluation::{aggregate_accuracy, evaluate_triplet, GroundTruthSet, TripletKey, VerdictBand};
use runsize_core::{EstimatorConfig, OutlierMethod, RunSample};

fn ground_truth(values: Vec<f64>, instance_id: u32) -> GroundTruthSet {
    let key = TripletKey {
        problem_id: "synthetic".into(),
        instance_id,
        dimension: 10,
    };
    GroundTruthSet::new("alg", key, RunSample::new(values).unwrap()).unwrap()
}

#[test]
fn symmetric_ground_truth_is_mostly_judged_accurate() {
    let dist = Normal::new(20.0, 2.0).unwrap();
    let cfg = EstimatorConfig::new(0.05, OutlierMethod::ModifiedZ);
    let mut accurate = 0;
    for trial in 0..200u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(trial));
        let gt = ground_truth((0..50).map(|_| dist.sample(&mut rng)).collect(), trial + 1);
        let rec = evaluate_triplet(&gt, &cfg, 1000, 9000 + u64::from(trial), 0).unwrap();
        assert!((5..=50).contains(&rec.n));
        if rec.verdict_band == VerdictBand::True {
            accurate += 1;
        }
    }
    // Early stops at n < 10 account for nearly all misses: the bootstrap
    // resamples 50 values whatever n is, so a 5-run mean can sit outside
    // an interval sized for 50. The long-run rate for this setup is about 87%.
    assert!(accurate >= 170, "accurate {accurate}/200");
}

#[test]
fn larger_tau_never_needs_more_runs() {
    let dist = LogNormal::new(0.0, 1.0).unwrap();
    let taus = [0.05, 0.10, 0.15, 0.20];
    for trial in 0..100u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + u64::from(trial));
        let gt = ground_truth((0..50).map(|_| dist.sample(&mut rng)).collect(), trial + 1);
        for m in OutlierMethod::ALL {
            let ns: Vec<usize> = taus
                .iter()
                .map(|&t| evaluate_triplet(&gt, &EstimatorConfig::new(t, m), 100, 1, 0).unwrap().n)
                .collect();
            assert!(ns.windows(2).all(|w| w[0] >= w[1]), "{m}: {ns:?}");
        }
    }
}

#[test]
fn aggregated_rows_are_cumulative_percentages() {
    let dist = LogNormal::new(1.0, 1.2).unwrap();
    let mut records = Vec::new();
    for trial in 0..40u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(trial));
        let gt = ground_truth((0..50).map(|_| dist.sample(&mut rng)).collect(), trial + 1);
        for tau in [0.05, 0.2] {
            for rep in 0..3 {
                let cfg = EstimatorConfig::new(tau, OutlierMethod::Iqr);
                records.push(evaluate_triplet(&gt, &cfg, 200, u64::from(trial * 10 + rep), rep).unwrap());
            }
        }
    }
    let table = aggregate_accuracy(&records).unwrap();
    assert_eq!(table.rows.len(), 2);
    for row in &table.rows {
        assert!(row.percentages.windows(2).all(|w| w[0] <= w[1] + 1e-9), "{row:?}");
        assert!(row.percentages.iter().all(|p| (0.0..=100.0).contains(p)));
    }
}
