use fuzzids::dataset::{split_indices, LabeledDataset, SplitSpec};
use fuzzids::evaluate::{auc, confusion, roc_curve};
use fuzzids::fuzzy_select::{fuzzy_importance, triangular_membership, TriangularParams};
use fuzzids::models::{ClassifierConfig, ModelKind, TrainedModel};
use fuzzids::preprocess::{fit_scaler, transform};
use fuzzids::Matrix;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = TriangularParams> {
    (-5.0..5.0f64, 0.01..3.0f64, 0.01..3.0f64)
        .prop_map(|(a, l, r)| TriangularParams::new(a, a + l, a + l + r).unwrap())
}

fn dataset(max_rows: usize, max_cols: usize) -> impl Strategy<Value = LabeledDataset> {
    (2..=max_rows, 1..=max_cols).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(prop::collection::vec(-100.0..100.0f64, d), n),
            prop::collection::vec(0..2u32, n),
        )
            .prop_map(|(rows, labels)| {
                LabeledDataset::from_matrix("prop", &Matrix::from_rows(&rows).unwrap(), labels, 2).unwrap()
            })
    })
}

fn pairwise_auc(truth: &[bool], scores: &[f64]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, _) in truth.iter().enumerate().filter(|(_, &t)| t) {
        for (j, _) in truth.iter().enumerate().filter(|(_, &t)| !t) {
            pairs += 1.0;
            wins += match scores[i].total_cmp(&scores[j]) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Less => 0.0,
            };
        }
    }
    wins / pairs
}

proptest! {
    #[test]
    fn membership_is_bounded(p in params(), x in -20.0..20.0f64) {
        let mu = triangular_membership(x, &p);
        prop_assert!((0.0..=1.0).contains(&mu));
        if x <= p.a || x >= p.c {
            prop_assert_eq!(mu, 0.0);
        }
    }

    #[test]
    fn ranking_is_a_sorted_permutation(ds in dataset(30, 8)) {
        let r = fuzzy_importance(&ds, &TriangularParams::default()).unwrap();
        let mut seen = r.order.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..ds.n_features()).collect::<Vec<_>>());
        for w in r.order.windows(2) {
            let (s0, s1) = (r.scores[w[0]], r.scores[w[1]]);
            prop_assert!(s0 > s1 || (s0 == s1 && w[0] < w[1]));
        }
    }

    #[test]
    fn auc_matches_pairwise_count(
        raw in prop::collection::vec((any::<bool>(), 0..20u8), 2..120)
    ) {
        let mut truth: Vec<bool> = raw.iter().map(|r| r.0).collect();
        truth[0] = true;
        truth[1] = false;
        let scores: Vec<f64> = raw.iter().map(|r| f64::from(r.1) / 4.0).collect();
        let a = auc(&roc_curve(&truth, &scores).unwrap());
        prop_assert!((a - pairwise_auc(&truth, &scores)).abs() < 1e-12);
    }

    #[test]
    fn confusion_totals_match(
        pairs in prop::collection::vec((0..4u32, 0..4u32), 0..200)
    ) {
        let (t, p): (Vec<u32>, Vec<u32>) = pairs.iter().copied().unzip();
        let cm = confusion(&t, &p, 4).unwrap();
        prop_assert_eq!(cm.total(), pairs.len() as u64);
        prop_assert_eq!(cm.trace(), pairs.iter().filter(|(a, b)| a == b).count() as u64);
        for k in 0..4 {
            prop_assert_eq!(cm.support(k), t.iter().filter(|&&c| c == k as u32).count() as u64);
        }
    }

    #[test]
    fn scaled_training_data_stays_in_unit_interval(ds in dataset(30, 5)) {
        let state = fit_scaler(&ds).unwrap();
        let (out, report) = transform(&state, &ds).unwrap();
        prop_assert_eq!(report.total_clamped(), 0);
        let x = out.to_matrix().unwrap();
        for i in 0..x.rows() {
            prop_assert!(x.row(i).iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn split_partitions_rows(
        labels in prop::collection::vec(0..3u32, 10..200),
        frac in 0.1..0.5f64,
        seed in any::<u64>(),
    ) {
        let spec = SplitSpec::new(1.0 - frac, frac, seed).unwrap();
        let s = split_indices(&labels, 3, &spec).unwrap();
        let mut all: Vec<usize> = s.train.iter().chain(&s.validation).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        prop_assert_eq!(split_indices(&labels, 3, &spec).unwrap(), s);
    }

    #[test]
    fn gaussian_nb_ignores_constant_shift(ds in dataset(40, 4), shift in -50i32..50) {
        let x = ds.to_matrix().unwrap();
        let shifted: Vec<Vec<f64>> = (0..x.rows())
            .map(|i| x.row(i).iter().map(|v| v + f64::from(shift)).collect())
            .collect();
        let moved = LabeledDataset::from_matrix(
            "prop", &Matrix::from_rows(&shifted).unwrap(), ds.labels().to_vec(), 2,
        ).unwrap();
        let cfg = ClassifierConfig::defaults(ModelKind::Nb);
        let a = TrainedModel::fit(&ds, &cfg).unwrap().score(&ds).unwrap();
        let b = TrainedModel::fit(&moved, &cfg).unwrap().score(&moved).unwrap();
        for i in 0..a.rows() {
            for (p, q) in a.row(i).iter().zip(b.row(i)) {
                prop_assert!((p - q).abs() < 1e-6, "row {}: {} vs {}", i, p, q);
            }
        }
    }

    #[test]
    fn unlimited_tree_fits_consistent_data(ds in dataset(40, 3)) {
        let model = TrainedModel::fit(&ds, &ClassifierConfig::defaults(ModelKind::Dt)).unwrap();
        prop_assert_eq!(model.predict(&ds).unwrap(), ds.labels().to_vec());
    }
}

#[test]
fn forests_repeat_under_a_fixed_seed() {
    let ds = fuzzids::synthetic::random_classification(120, 6, 3, 5).unwrap();
    for kind in [ModelKind::Rf, ModelKind::Et, ModelKind::Gbt, ModelKind::Svm] {
        let cfg = ClassifierConfig::defaults(kind).with_seed(11);
        let a = TrainedModel::fit(&ds, &cfg).unwrap();
        let b = TrainedModel::fit(&ds, &cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap(), "{kind}");
    }
}
