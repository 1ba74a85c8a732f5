//! Seeded synthetic datasets for benchmarks and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dataset::LabeledDataset;
use crate::error::Result;
use crate::matrix::Matrix;
use crate::rng::{component_rng, Domain};

const XOR_CENTERS: [([f64; 2], u32); 4] = [
    ([0.25, 0.25], 0),
    ([0.75, 0.75], 0),
    ([0.25, 0.75], 1),
    ([0.75, 0.25], 1),
];

/// `n` points in the unit square, spread evenly over four clusters placed
/// like an XOR truth table: class 0 at the (low, low) and (high, high)
/// corners, class 1 at the mixed ones. Points fall uniformly within
/// `spread` of their center in each coordinate.
pub fn xor_clusters(n: usize, spread: f64, seed: u64, stream: u64) -> Result<LabeledDataset> {
    let mut rng = component_rng(seed, Domain::Synthetic, stream);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (center, label) = XOR_CENTERS[i % 4];
        rows.push(
            center
                .iter()
                .map(|c| c + rng.random_range(-spread..=spread))
                .collect::<Vec<f64>>(),
        );
        labels.push(label);
    }
    LabeledDataset::from_matrix("xor", &Matrix::from_rows(&rows)?, labels, 2)
}

/// The 200-point train and test sets used to compare model families.
pub fn xor_benchmark(seed: u64) -> Result<(LabeledDataset, LabeledDataset)> {
    Ok((xor_clusters(200, 0.15, seed, 0)?, xor_clusters(200, 0.15, seed, 1)?))
}

/// A dataset whose fuzzy ranking is known in advance: `n_informative` of
/// `n_features` columns sit near the peak `b = 0.5` (uniform on
/// `[0.4, 0.6]`), the rest near the feet (uniform on `[0, 0.1]` or
/// `[0.9, 1]`). Returns the dataset and the sorted indices of the peaked
/// columns. Labels are random.
pub fn peaked_features(
    n_rows: usize,
    n_features: usize,
    n_informative: usize,
    seed: u64,
) -> Result<(LabeledDataset, Vec<usize>)> {
    let mut rng = component_rng(seed, Domain::Synthetic, 2);
    let mut columns: Vec<usize> = (0..n_features).collect();
    columns.shuffle(&mut rng);
    let mut peaked: Vec<usize> = columns[..n_informative.min(n_features)].to_vec();
    peaked.sort_unstable();
    let mut x = Matrix::zeros(n_rows, n_features);
    for i in 0..n_rows {
        for j in 0..n_features {
            let v = if peaked.binary_search(&j).is_ok() {
                rng.random_range(0.4..=0.6)
            } else if rng.random_bool(0.5) {
                rng.random_range(0.0..=0.1)
            } else {
                rng.random_range(0.9..=1.0)
            };
            x.set(i, j, v);
        }
    }
    let labels = (0..n_rows).map(|_| rng.random_range(0..2)).collect();
    Ok((LabeledDataset::from_matrix("peaked", &x, labels, 2)?, peaked))
}

/// Uniform features in `[0, 1]` with labels from a random linear rule plus
/// 10% label noise. Every class id below `n_classes` appears at least once
/// when `n_rows >= n_classes`.
pub fn random_classification(
    n_rows: usize,
    n_features: usize,
    n_classes: usize,
    seed: u64,
) -> Result<LabeledDataset> {
    let mut rng = component_rng(seed, Domain::Synthetic, 3);
    let w: Vec<f64> = (0..n_features).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let mut x = Matrix::zeros(n_rows, n_features);
    let mut proj = Vec::with_capacity(n_rows);
    for i in 0..n_rows {
        let mut s = 0.0;
        for (j, wj) in w.iter().enumerate() {
            let v = rng.random_range(0.0..=1.0);
            x.set(i, j, v);
            s += wj * v;
        }
        proj.push(s);
    }
    let mut order: Vec<usize> = (0..n_rows).collect();
    order.sort_by(|&a, &b| proj[a].total_cmp(&proj[b]));
    let mut labels = vec![0u32; n_rows];
    for (rank, &i) in order.iter().enumerate() {
        labels[i] = (rank * n_classes / n_rows.max(1)) as u32;
    }
    for label in labels.iter_mut() {
        if rng.random_bool(0.1) {
            *label = rng.random_range(0..n_classes as u32);
        }
    }
    LabeledDataset::from_matrix("random", &x, labels, n_classes)
}
