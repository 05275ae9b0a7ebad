//! A fast stand-in for real model training: k-nearest-neighbor
//! classification of a synthetic two-blob dataset, scored by stratified
//! cross-validation. The objective value is `1 - mean accuracy`, so lower is
//! better and 0 would be a perfect classifier.
//!
//! Everything here is seeded and deterministic: the same seed always yields
//! the same dataset, folds, and scores, which is what lets whole-run logs be
//! compared bit for bit.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::objective::{Objective, ObjectiveError};
use crate::space::Assignment;

/// A fixed classification dataset: one feature row and one label per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<u8>,
}

impl Dataset {
    /// Feature rows, one per sample.
    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    /// Class labels, aligned with [`Dataset::features`].
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Whether the dataset has no samples.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of features per sample.
    pub fn width(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }
}

/// One standard normal draw (Box-Muller). Routing the transcendentals
/// through `libm` keeps the generated data bit-identical across `std` and
/// `no_std` builds.
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..=1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

/// Two Gaussian blobs with perfectly balanced labels.
///
/// Class 1 is shifted by `separation / sqrt(features)` along every axis, so
/// `separation` is the distance between the class means regardless of
/// dimensionality. Features are standardized to zero mean and unit variance
/// afterwards. Labels alternate 0, 1, 0, 1, ... so every prefix is balanced
/// too.
pub fn generate_dataset(seed: u64, samples: usize, features: usize, separation: f64) -> Dataset {
    assert!(samples >= 2, "need at least two samples");
    assert!(features >= 1, "need at least one feature");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = separation / libm::sqrt(features as f64);
    let mut rows = Vec::with_capacity(samples);
    let mut labels = Vec::with_capacity(samples);
    for i in 0..samples {
        let label = (i % 2) as u8;
        let offset = if label == 1 { shift } else { 0.0 };
        let row: Vec<f64> = (0..features).map(|_| standard_normal(&mut rng) + offset).collect();
        rows.push(row);
        labels.push(label);
    }
    for j in 0..features {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / samples as f64;
        let variance =
            rows.iter().map(|r| (r[j] - mean) * (r[j] - mean)).sum::<f64>() / samples as f64;
        let sd = if variance > 0.0 { libm::sqrt(variance) } else { 1.0 };
        for row in &mut rows {
            row[j] = (row[j] - mean) / sd;
        }
    }
    Dataset { features: rows, labels }
}

/// Split sample indices into `folds` groups with per-class balance: each
/// class's indices are shuffled (seeded) and dealt round-robin, so class
/// proportions match across folds as closely as integer counts allow.
/// Every index lands in exactly one fold.
pub fn stratified_folds(labels: &[u8], folds: usize, seed: u64) -> Vec<Vec<usize>> {
    assert!(folds >= 2, "need at least two folds");
    assert!(labels.len() >= folds, "need at least one sample per fold");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<u8> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut out = vec![Vec::new(); folds];
    for class in classes {
        let mut indices: Vec<usize> =
            (0..labels.len()).filter(|&i| labels[i] == class).collect();
        indices.shuffle(&mut rng);
        for (j, index) in indices.into_iter().enumerate() {
            out[j % folds].push(index);
        }
    }
    for fold in &mut out {
        fold.sort_unstable();
    }
    out
}

/// Anything that can label held-out samples after seeing training samples.
pub trait Classifier: Sync {
    /// Predict a label for every index in `test`, training on `train`.
    fn predict(&self, data: &Dataset, train: &[usize], test: &[usize]) -> Vec<u8>;
}

/// Mean accuracy over held-out folds.
///
/// Each fold is scored with the union of the other folds as training data.
/// Folds are scored concurrently when built with `std`, but accuracies are
/// combined in fold order, so the result does not depend on the build.
pub fn cross_validate(data: &Dataset, classifier: &dyn Classifier, folds: &[Vec<usize>]) -> f64 {
    assert!(folds.len() >= 2, "need at least two folds");
    assert!(folds.iter().all(|f| !f.is_empty()), "every fold needs samples");
    let accuracies: Vec<f64>;
    #[cfg(feature = "std")]
    {
        accuracies = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..folds.len())
                .map(|held_out| scope.spawn(move || score_fold(data, classifier, folds, held_out)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("classifier panicked")).collect()
        });
    }
    #[cfg(not(feature = "std"))]
    {
        accuracies = (0..folds.len())
            .map(|held_out| score_fold(data, classifier, folds, held_out))
            .collect();
    }
    accuracies.iter().sum::<f64>() / folds.len() as f64
}

/// Accuracy on fold `held_out`, training on everything else.
fn score_fold(
    data: &Dataset,
    classifier: &dyn Classifier,
    folds: &[Vec<usize>],
    held_out: usize,
) -> f64 {
    let test = &folds[held_out];
    let mut in_test = vec![false; data.len()];
    for &i in test {
        in_test[i] = true;
    }
    let train: Vec<usize> = (0..data.len()).filter(|&i| !in_test[i]).collect();
    let predicted = classifier.predict(data, &train, test);
    let correct =
        predicted.iter().zip(test).filter(|(p, &i)| **p == data.labels[i]).count();
    correct as f64 / test.len() as f64
}

/// k-nearest-neighbor classifier with a Minkowski distance.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnClassifier {
    neighbors: usize,
    weighted: bool,
    minkowski: f64,
}

impl KnnClassifier {
    /// `neighbors` votes per prediction, optionally weighted by inverse
    /// distance, under the Minkowski `p`-distance (`p = 1` Manhattan,
    /// `p = 2` Euclidean).
    pub fn new(neighbors: usize, weighted: bool, minkowski: f64) -> Self {
        assert!(neighbors >= 1, "need at least one neighbor");
        assert!(minkowski >= 1.0, "Minkowski order must be at least 1");
        Self { neighbors, weighted, minkowski }
    }

    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let p = self.minkowski;
        if p == 1.0 {
            a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
        } else if p == 2.0 {
            libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
        } else {
            let total: f64 = a.iter().zip(b).map(|(x, y)| libm::pow((x - y).abs(), p)).sum();
            libm::pow(total, 1.0 / p)
        }
    }
}

impl Classifier for KnnClassifier {
    fn predict(&self, data: &Dataset, train: &[usize], test: &[usize]) -> Vec<u8> {
        assert!(!train.is_empty(), "need training samples");
        test.iter()
            .map(|&t| {
                let mut nearest: Vec<(f64, usize)> = train
                    .iter()
                    .map(|&i| (self.distance(&data.features[t], &data.features[i]), i))
                    .collect();
                // Ties in distance break toward the lower sample index.
                nearest.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
                let k = self.neighbors.min(nearest.len());
                let mut votes: Vec<(u8, f64)> = Vec::new();
                for &(d, i) in &nearest[..k] {
                    let weight = if self.weighted { 1.0 / d.max(1e-12) } else { 1.0 };
                    let label = data.labels[i];
                    match votes.iter_mut().find(|(l, _)| *l == label) {
                        Some((_, total)) => *total += weight,
                        None => votes.push((label, weight)),
                    }
                }
                votes.sort_by_key(|&(label, _)| label);
                let mut best = votes[0];
                for &vote in &votes[1..] {
                    if vote.1 > best.1 {
                        best = vote;
                    }
                }
                best.0
            })
            .collect()
    }
}

/// Cross-validated k-NN error as an optimizable objective.
///
/// Reads three parameters from each assignment: integer `k` (neighbor
/// count), categorical `weighting` (`uniform` or `distance`), and continuous
/// `p` (Minkowski order). Returns `1 - mean accuracy`.
pub struct KnnCv {
    data: Dataset,
    folds: Vec<Vec<usize>>,
}

impl KnnCv {
    /// Cross-validate over `data` with `folds` stratified folds drawn from
    /// `fold_seed`.
    pub fn new(data: Dataset, folds: usize, fold_seed: u64) -> Self {
        let folds = stratified_folds(&data.labels, folds, fold_seed);
        Self { data, folds }
    }

    /// The benchmark instance used by the command line and the acceptance
    /// suite: 300 samples, 5 features, class means 2.5 apart, 3 folds, all
    /// from seed 42.
    pub fn bundled() -> Self {
        Self::new(generate_dataset(42, 300, 5, 2.5), 3, 42)
    }

    /// The dataset being classified.
    pub fn data(&self) -> &Dataset {
        &self.data
    }

    /// The fold partition, one index list per fold.
    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }
}

impl Objective for KnnCv {
    fn evaluate(&self, assignment: &Assignment) -> Result<f64, ObjectiveError> {
        let k = assignment
            .int("k")
            .ok_or_else(|| ObjectiveError::new("missing integer parameter `k`"))?;
        let weighting = assignment
            .choice("weighting")
            .ok_or_else(|| ObjectiveError::new("missing categorical parameter `weighting`"))?;
        let p = assignment
            .float("p")
            .ok_or_else(|| ObjectiveError::new("missing continuous parameter `p`"))?;
        if k < 1 {
            return Err(ObjectiveError::new(format!("k must be positive, got {k}")));
        }
        let weighted = match weighting {
            "uniform" => false,
            "distance" => true,
            other => {
                return Err(ObjectiveError::new(format!("unknown weighting `{other}`")));
            }
        };
        if p.is_nan() || p < 1.0 {
            return Err(ObjectiveError::new(format!("p must be at least 1, got {p}")));
        }
        let classifier = KnnClassifier::new(k as usize, weighted, p);
        Ok(1.0 - cross_validate(&self.data, &classifier, &self.folds))
    }

    fn description(&self) -> &str {
        "knn_cv"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::ParamValue;
    use approx::assert_relative_eq;

    #[test]
    fn dataset_is_balanced_and_standardized() {
        let data = generate_dataset(42, 300, 5, 2.5);
        assert_eq!(data.len(), 300);
        assert_eq!(data.width(), 5);
        assert_eq!(data.labels().iter().filter(|&&l| l == 0).count(), 150);
        assert_eq!(data.labels().iter().filter(|&&l| l == 1).count(), 150);
        for j in 0..5 {
            let mean: f64 = data.features().iter().map(|r| r[j]).sum::<f64>() / 300.0;
            let var: f64 =
                data.features().iter().map(|r| (r[j] - mean) * (r[j] - mean)).sum::<f64>() / 300.0;
            assert_relative_eq!(mean, 0.0, epsilon = 1e-9);
            assert_relative_eq!(var, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn dataset_generation_is_seed_deterministic() {
        let a = generate_dataset(7, 60, 3, 1.5);
        let b = generate_dataset(7, 60, 3, 1.5);
        let c = generate_dataset(8, 60, 3, 1.5);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn folds_partition_samples_and_keep_classes_balanced() {
        let data = generate_dataset(42, 300, 5, 2.5);
        let folds = stratified_folds(data.labels(), 3, 42);
        assert_eq!(folds.len(), 3);
        let mut seen = vec![false; 300];
        for fold in &folds {
            assert_eq!(fold.len(), 100);
            let ones = fold.iter().filter(|&&i| data.labels()[i] == 1).count();
            assert_eq!(ones, 50, "fold is not class-balanced");
            for &i in fold {
                assert!(!seen[i], "index {i} appears twice");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(folds, stratified_folds(data.labels(), 3, 42));
    }

    #[test]
    fn constant_classifier_scores_exactly_half_on_balanced_data() {
        struct AlwaysZero;
        impl Classifier for AlwaysZero {
            fn predict(&self, _: &Dataset, _: &[usize], test: &[usize]) -> Vec<u8> {
                vec![0; test.len()]
            }
        }
        let data = generate_dataset(42, 300, 5, 2.5);
        let folds = stratified_folds(data.labels(), 3, 42);
        assert_eq!(cross_validate(&data, &AlwaysZero, &folds), 0.5);
    }

    #[test]
    fn knn_votes_break_ties_toward_the_smaller_label() {
        // Two training points per class at equal distance from the query:
        // k = 2 with uniform weights ties 1 vs 1, so label 0 must win.
        let data = Dataset {
            features: vec![
                vec![-1.0],
                vec![1.0],
                vec![-2.0],
                vec![2.0],
                vec![0.0],
            ],
            labels: vec![0, 1, 0, 1, 0],
        };
        let knn = KnnClassifier::new(2, false, 2.0);
        assert_eq!(knn.predict(&data, &[0, 1], &[4]), vec![0]);
    }

    #[test]
    fn overlapping_blobs_score_near_chance_and_separated_blobs_near_perfect() {
        let knn = KnnClassifier::new(1, false, 2.0);
        let noise = generate_dataset(3, 200, 4, 0.0);
        let folds = stratified_folds(noise.labels(), 4, 3);
        let chance = cross_validate(&noise, &knn, &folds);
        assert!((chance - 0.5).abs() < 0.15, "chance-level accuracy was {chance}");
        let split = generate_dataset(3, 200, 4, 6.0);
        let folds = stratified_folds(split.labels(), 4, 3);
        let clean = cross_validate(&split, &knn, &folds);
        assert!(clean > 0.95, "well-separated accuracy was only {clean}");
    }

    #[test]
    fn knn_cv_objective_reads_named_parameters() {
        let objective = KnnCv::bundled();
        let assignment = Assignment::new(vec![
            ("k".into(), ParamValue::Int(5)),
            ("weighting".into(), ParamValue::Choice("uniform".into())),
            ("p".into(), ParamValue::Float(2.0)),
        ]);
        let error = objective.evaluate(&assignment).unwrap();
        assert!((0.0..=1.0).contains(&error), "error rate {error} out of range");
        // The bundled blobs overlap but are clearly learnable.
        assert!(error < 0.35, "error rate {error} is no better than chance");
        assert_eq!(objective.evaluate(&assignment).unwrap(), error);

        let bad = Assignment::new(vec![
            ("k".into(), ParamValue::Int(5)),
            ("weighting".into(), ParamValue::Choice("cosine".into())),
            ("p".into(), ParamValue::Float(2.0)),
        ]);
        assert!(objective.evaluate(&bad).is_err());
        let missing = Assignment::new(vec![("k".into(), ParamValue::Int(5))]);
        assert!(objective.evaluate(&missing).is_err());
    }

    #[test]
    fn weighting_and_distance_order_change_predictions() {
        let data = generate_dataset(42, 300, 5, 2.5);
        let folds = stratified_folds(data.labels(), 3, 42);
        let uniform = cross_validate(&data, &KnnClassifier::new(9, false, 2.0), &folds);
        let weighted = cross_validate(&data, &KnnClassifier::new(9, true, 2.0), &folds);
        let manhattan = cross_validate(&data, &KnnClassifier::new(9, false, 1.0), &folds);
        // Not a strict requirement of the method, but on this dataset the
        // variants do disagree; if they ever collapse the benchmark would be
        // pointless for tuning.
        assert!(uniform != weighted || uniform != manhattan);
    }
}
