//! Random-baseline adjustment.
//!
//! Any clustering measure can be made size-aware by comparing it against
//! random clusterings with the same cluster-size profile: the documents of
//! the solution are shuffled and dealt into consecutive blocks matching the
//! solution's exact cluster sizes. The adjusted score is the raw score minus
//! the mean score of those baselines, so a clustering that does no better
//! than chance — for its own size profile — scores zero.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{CategoryId, Clustering, DocId, GroundTruth};

/// Errors raised by baseline adjustment.
#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("baseline adjustment needs at least one sample")]
    NoSamples,
    #[error("unknown category: {category}")]
    UnknownCategory { category: String },
}

/// A measure value together with its random-baseline statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustedScore {
    /// The measure evaluated on the solution itself.
    pub raw: f64,
    /// Mean of the measure over the baseline samples.
    pub baseline_mean: f64,
    /// Population standard deviation over the baseline samples.
    pub baseline_std: f64,
    /// `raw - baseline_mean`.
    pub adjusted: f64,
    /// Number of baseline samples.
    pub samples: usize,
}

impl AdjustedScore {
    /// Whether the adjusted score is statistically indistinguishable from
    /// zero at the given number of standard deviations.
    ///
    /// If the solution is itself uninformative, its raw score is one more
    /// draw from the same distribution as the baselines, so the difference
    /// `raw - baseline_mean` has variance `σ²·(1 + 1/R)` — the solution
    /// draw contributes `σ²` and the estimated mean `σ²/R`. A small
    /// absolute slack covers exact-zero spreads.
    pub fn consistent_with_zero(&self, sigmas: f64) -> bool {
        let spread = self.baseline_std * (1.0 + 1.0 / self.samples as f64).sqrt();
        self.adjusted.abs() <= sigmas * spread + 1e-12
    }
}

/// Draws one random baseline for `solution`: its documents are shuffled
/// (ChaCha8 keyed by `seed`) and dealt, in sorted-cluster-id order, into
/// consecutive blocks matching the solution's cluster sizes. The original
/// cluster ids are reused, so the result differs from the solution only in
/// which documents each cluster holds.
pub fn generate_baseline(solution: &Clustering, seed: u64) -> Clustering {
    let mut docs: Vec<&DocId> = solution.doc_ids().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    docs.shuffle(&mut rng);
    let mut assignments = Vec::with_capacity(docs.len());
    let mut shuffled = docs.into_iter();
    for (cluster, members) in solution.clusters() {
        for _ in 0..members.len() {
            let doc = shuffled.next().expect("shuffle preserves the document count");
            assignments.push((doc.clone(), cluster.clone()));
        }
    }
    Clustering::from_assignments(assignments)
        .expect("a reshuffle of a valid clustering is itself valid")
}

/// Evaluates `measure` on the solution and on `samples` random baselines
/// (sample `i` uses seed `seed + i`), and returns the raw, baseline, and
/// adjusted statistics. Baselines are evaluated in parallel but combined in
/// sample order, so results are independent of thread scheduling.
pub fn adjust<F>(
    solution: &Clustering,
    seed: u64,
    samples: usize,
    measure: F,
) -> crate::Result<AdjustedScore>
where
    F: Fn(&Clustering) -> crate::Result<f64> + Sync,
{
    if samples == 0 {
        return Err(BaselineError::NoSamples.into());
    }
    let raw = measure(solution)?;
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let baseline = generate_baseline(solution, seed.wrapping_add(i as u64));
            measure(&baseline)
        })
        .collect::<crate::Result<_>>()?;
    let (baseline_mean, baseline_std) = mean_std(&values);
    Ok(AdjustedScore {
        raw,
        baseline_mean,
        baseline_std,
        adjusted: raw - baseline_mean,
        samples,
    })
}

/// Probability that a uniformly random document carries `category`:
/// `|category| / N`. This is the chance a baseline cluster member lands in
/// that category, which makes it a useful reference point next to baseline
/// means (e.g. the largest category's fraction is the expected purity of an
/// uninformatively large cluster).
pub fn expected_category_fraction(
    truth: &GroundTruth,
    category: &CategoryId,
) -> Result<f64, BaselineError> {
    let members = truth.members(category).ok_or_else(|| {
        BaselineError::UnknownCategory { category: category.as_str().to_string() }
    })?;
    Ok(members.len() as f64 / truth.num_docs() as f64)
}

/// Population mean and standard deviation. When every sample coincides the
/// mean is returned bit-for-bit: size profiles that force each baseline to
/// equal the solution (one cluster, or all singletons) must adjust to
/// exactly zero, which naive summation would miss by a rounding error.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return (first, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, variance.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CategoryId, ClusterId};
    use approx::assert_abs_diff_eq;

    fn doc(s: &str) -> DocId {
        DocId::new(s).unwrap()
    }

    fn clustering(pairs: &[(&str, &str)]) -> Clustering {
        Clustering::from_assignments(
            pairs.iter().map(|(d, c)| (doc(d), ClusterId::new(*c).unwrap())),
        )
        .unwrap()
    }

    fn two_block_solution() -> Clustering {
        let pairs: Vec<(String, &str)> = (0..20)
            .map(|i| (format!("d{i:02}"), if i < 10 { "w1" } else { "w2" }))
            .collect();
        clustering(&pairs.iter().map(|(d, c)| (d.as_str(), *c)).collect::<Vec<_>>())
    }

    fn assignment_pairs(clustering: &Clustering) -> Vec<(String, String)> {
        clustering
            .assignments()
            .map(|(d, c)| (d.as_str().to_string(), c.as_str().to_string()))
            .collect()
    }

    #[test]
    fn baseline_preserves_documents_profile_and_cluster_ids() {
        let solution = two_block_solution();
        let baseline = generate_baseline(&solution, 42);
        assert_eq!(baseline.num_docs(), solution.num_docs());
        assert_eq!(baseline.size_profile(), solution.size_profile());
        assert_eq!(
            baseline.clusters().map(|(id, _)| id).collect::<Vec<_>>(),
            solution.clusters().map(|(id, _)| id).collect::<Vec<_>>(),
        );
        assert_eq!(
            baseline.doc_ids().collect::<Vec<_>>(),
            solution.doc_ids().collect::<Vec<_>>(),
        );
    }

    #[test]
    fn baseline_is_deterministic_per_seed_and_varies_across_seeds() {
        let solution = two_block_solution();
        let a = generate_baseline(&solution, 7);
        let b = generate_baseline(&solution, 7);
        assert_eq!(assignment_pairs(&a), assignment_pairs(&b));
        let c = generate_baseline(&solution, 8);
        assert_ne!(assignment_pairs(&a), assignment_pairs(&c));
    }

    #[test]
    fn baseline_depends_only_on_documents_and_size_profile() {
        // Two solutions with swapped memberships but identical documents,
        // cluster ids, and sizes draw identical baselines.
        let a = clustering(&[("d1", "x"), ("d2", "x"), ("d3", "y"), ("d4", "y")]);
        let b = clustering(&[("d1", "y"), ("d2", "y"), ("d3", "x"), ("d4", "x")]);
        assert_eq!(
            assignment_pairs(&generate_baseline(&a, 3)),
            assignment_pairs(&generate_baseline(&b, 3)),
        );
    }

    #[test]
    fn adjust_reports_raw_mean_and_difference() {
        let solution = two_block_solution();
        // Size of the cluster holding d00 — sensitive to the shuffle when
        // evaluated on unequal profiles, constant (10) here.
        let measure = |c: &Clustering| -> crate::Result<f64> {
            let cluster = c.cluster_of(&doc("d00")).unwrap();
            Ok(c.members(cluster).unwrap().len() as f64)
        };
        let score = adjust(&solution, 11, 4, measure).unwrap();
        assert_abs_diff_eq!(score.raw, 10.0);
        assert_abs_diff_eq!(score.baseline_mean, 10.0);
        assert_abs_diff_eq!(score.adjusted, 0.0);
        assert_abs_diff_eq!(score.baseline_std, 0.0);
        assert_eq!(score.samples, 4);
    }

    #[test]
    fn adjust_uses_consecutive_seeds_per_sample() {
        let solution = clustering(&[
            ("d1", "w1"),
            ("d2", "w1"),
            ("d3", "w1"),
            ("d4", "w2"),
            ("d5", "w3"),
            ("d6", "w3"),
        ]);
        let measure = |c: &Clustering| -> crate::Result<f64> {
            let cluster = c.cluster_of(&doc("d1")).unwrap();
            Ok(c.members(cluster).unwrap().len() as f64)
        };
        let expected: f64 = [13u64, 14]
            .iter()
            .map(|&s| measure(&generate_baseline(&solution, s)).unwrap())
            .sum::<f64>()
            / 2.0;
        let score = adjust(&solution, 13, 2, measure).unwrap();
        assert_abs_diff_eq!(score.baseline_mean, expected);
        assert_abs_diff_eq!(score.raw, 3.0);
    }

    #[test]
    fn identical_baseline_values_adjust_to_exactly_zero() {
        // 0.1 summed ten times and divided by ten is not 0.1 in floating
        // point; the mean must take the all-equal shortcut.
        let solution = clustering(&[("d1", "w1"), ("d2", "w1"), ("d3", "w1")]);
        let score = adjust(&solution, 0, 10, |_| Ok(0.1)).unwrap();
        assert_eq!(score.baseline_mean, 0.1);
        assert_eq!(score.adjusted, 0.0);
        assert_eq!(score.baseline_std, 0.0);
    }

    #[test]
    fn adjust_requires_at_least_one_sample() {
        let solution = clustering(&[("d1", "w1")]);
        let err = adjust(&solution, 0, 0, |_| Ok(1.0)).unwrap_err();
        assert!(matches!(err, crate::Error::Baseline(BaselineError::NoSamples)));
    }

    #[test]
    fn adjust_propagates_measure_failures() {
        let solution = clustering(&[("d1", "w1"), ("d2", "w2")]);
        let err = adjust(&solution, 0, 2, |_| {
            Err(crate::extrinsic::MeasureError::SingleCategory.into())
        })
        .unwrap_err();
        assert!(matches!(err, crate::Error::Measure(_)));
    }

    #[test]
    fn mean_std_computes_population_statistics() {
        let (mean, std) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_abs_diff_eq!(mean, 2.5);
        assert_abs_diff_eq!(std, 1.25f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn single_sample_has_zero_spread() {
        let (mean, std) = mean_std(&[0.7]);
        assert_eq!(mean, 0.7);
        assert_eq!(std, 0.0);
    }

    #[test]
    fn consistent_with_zero_scales_spread_for_the_extra_draw() {
        let score = AdjustedScore {
            raw: 0.55,
            baseline_mean: 0.5,
            baseline_std: 0.1,
            adjusted: 0.05,
            samples: 10,
        };
        // Threshold at 4σ: 4 · 0.1 · √1.1 ≈ 0.4195.
        assert!(score.consistent_with_zero(4.0));
        let strong = AdjustedScore { adjusted: 0.5, ..score };
        assert!(!strong.consistent_with_zero(4.0));
    }

    #[test]
    fn consistent_with_zero_handles_exact_zero_spread() {
        let exact = AdjustedScore {
            raw: 1.0,
            baseline_mean: 1.0,
            baseline_std: 0.0,
            adjusted: 0.0,
            samples: 5,
        };
        assert!(exact.consistent_with_zero(4.0));
        let off = AdjustedScore { adjusted: 1e-6, ..exact };
        assert!(!off.consistent_with_zero(4.0));
    }

    fn category(s: &str) -> CategoryId {
        CategoryId::new(s).unwrap()
    }

    #[test]
    fn expected_category_fraction_is_category_share_of_documents() {
        // Categories of sizes 1, 2, 3 over 6 documents.
        let labels = [
            ("d1", "A"),
            ("d2", "B"),
            ("d3", "B"),
            ("d4", "C"),
            ("d5", "C"),
            ("d6", "C"),
        ];
        let truth = GroundTruth::from_labels(
            labels.iter().map(|(d, c)| (doc(d), category(c))),
        )
        .unwrap();
        assert_abs_diff_eq!(expected_category_fraction(&truth, &category("A")).unwrap(), 1.0 / 6.0);
        assert_abs_diff_eq!(expected_category_fraction(&truth, &category("B")).unwrap(), 2.0 / 6.0);
        assert_abs_diff_eq!(expected_category_fraction(&truth, &category("C")).unwrap(), 0.5);
    }

    #[test]
    fn expected_category_fraction_is_one_for_a_single_category() {
        let truth = GroundTruth::from_labels([
            (doc("d1"), category("A")),
            (doc("d2"), category("A")),
        ])
        .unwrap();
        assert_abs_diff_eq!(expected_category_fraction(&truth, &category("A")).unwrap(), 1.0);
    }

    #[test]
    fn expected_category_fraction_rejects_unknown_categories() {
        let truth = GroundTruth::from_labels([(doc("d1"), category("A"))]).unwrap();
        let err = expected_category_fraction(&truth, &category("missing")).unwrap_err();
        assert!(err.to_string().contains("unknown category"), "got: {err}");
    }
}
