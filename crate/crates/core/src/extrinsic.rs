//! Extrinsic cluster-quality measures over a contingency table: per-cluster
//! purity and normalized entropy, set-wide pairwise F1 and normalized mutual
//! information, and micro/macro averaging of per-cluster scores.

use thiserror::Error;

use crate::model::{ClusterId, ContingencyTable};

/// Errors raised by the extrinsic measures.
#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("cluster {cluster} has no labeled documents")]
    EmptyClusterRow { cluster: ClusterId },
    #[error("entropy undefined for a single category")]
    SingleCategory,
}

/// Per-cluster scores paired with the labeled cluster sizes used as weights
/// for micro averaging. Entries follow the table's row order (ascending
/// cluster id).
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterScoreVector {
    entries: Vec<(ClusterId, f64, u64)>,
}

impl ClusterScoreVector {
    fn new(table: &ContingencyTable, scores: Vec<f64>) -> Self {
        let entries = table
            .cluster_ids()
            .iter()
            .zip(scores)
            .zip(table.row_sums())
            .map(|((id, score), &weight)| (id.clone(), score, weight))
            .collect();
        Self { entries }
    }

    /// `(cluster, score, weight)` triples in ascending cluster order.
    pub fn entries(&self) -> &[(ClusterId, f64, u64)] {
        &self.entries
    }

    pub fn score_of(&self, cluster: &ClusterId) -> Option<f64> {
        self.entries.iter().find(|(id, _, _)| id == cluster).map(|(_, s, _)| *s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Size-weighted mean of per-cluster scores: every document counts equally.
pub fn micro_average(scores: &ClusterScoreVector) -> f64 {
    let total: u64 = scores.entries().iter().map(|(_, _, w)| w).sum();
    let weighted: f64 = scores.entries().iter().map(|(_, s, w)| s * *w as f64).sum();
    weighted / total as f64
}

/// Unweighted mean of per-cluster scores: every cluster counts equally.
pub fn macro_average(scores: &ClusterScoreVector) -> f64 {
    let sum: f64 = scores.entries().iter().map(|(_, s, _)| s).sum();
    sum / scores.len() as f64
}

/// Purity of each cluster: the fraction of its labeled documents belonging
/// to its single best-represented category,
/// `purity(w_k) = max_j n_kj / |w_k|`.
pub fn purity_per_cluster(table: &ContingencyTable) -> Result<ClusterScoreVector, MeasureError> {
    let mut scores = Vec::with_capacity(table.num_clusters());
    for k in 0..table.num_clusters() {
        let size = table.row_sums()[k];
        if size == 0 {
            return Err(MeasureError::EmptyClusterRow { cluster: table.cluster_ids()[k].clone() });
        }
        let best = table.row(k).iter().copied().max().unwrap_or(0);
        scores.push(best as f64 / size as f64);
    }
    Ok(ClusterScoreVector::new(table, scores))
}

/// Normalized category entropy of each cluster,
/// `entropy(w_k) = -(1/ln J) Σ_j (n_kj/|w_k|) ln(n_kj/|w_k|)`
/// with `0·ln 0 = 0`: 0 for a single-category cluster, 1 for a cluster
/// spread uniformly over all `J` categories. Requires `J ≥ 2`, otherwise the
/// normalizer `1/ln J` is undefined.
pub fn entropy_per_cluster(table: &ContingencyTable) -> Result<ClusterScoreVector, MeasureError> {
    let j = table.num_categories();
    if j < 2 {
        return Err(MeasureError::SingleCategory);
    }
    let norm = (j as f64).ln();
    let mut scores = Vec::with_capacity(table.num_clusters());
    for k in 0..table.num_clusters() {
        let size = table.row_sums()[k];
        if size == 0 {
            return Err(MeasureError::EmptyClusterRow { cluster: table.cluster_ids()[k].clone() });
        }
        let mut h = 0.0;
        for &n in table.row(k) {
            if n > 0 {
                let p = n as f64 / size as f64;
                h -= p * p.ln();
            }
        }
        scores.push(h / norm);
    }
    Ok(ClusterScoreVector::new(table, scores))
}

/// Agreement counts over unordered document pairs: a pair is a true positive
/// when both documents share a cluster and a category, a false positive when
/// they share only the cluster, a false negative when they share only the
/// category, and a true negative otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub true_negatives: u64,
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

impl PairCounts {
    pub fn from_table(table: &ContingencyTable) -> Self {
        let cells: Vec<u64> =
            (0..table.num_clusters()).flat_map(|k| table.row(k).iter().copied()).collect();
        Self::from_marginals(&cells, table.row_sums(), table.col_sums())
    }

    /// Computes pair counts from raw cell counts (row-major) and their
    /// marginals: `tp = Σ C(n_kj, 2)`, same-cluster pairs come from row sums
    /// and same-category pairs from column sums.
    pub fn from_marginals(cells: &[u64], row_sums: &[u64], col_sums: &[u64]) -> Self {
        let tp: u64 = cells.iter().map(|&n| choose2(n)).sum();
        let same_cluster: u64 = row_sums.iter().map(|&n| choose2(n)).sum();
        let same_category: u64 = col_sums.iter().map(|&n| choose2(n)).sum();
        let n: u64 = row_sums.iter().sum();
        let fp = same_cluster - tp;
        let fn_ = same_category - tp;
        let tn = choose2(n) - tp - fp - fn_;
        Self { true_positives: tp, false_positives: fp, false_negatives: fn_, true_negatives: tn }
    }

    /// Total number of unordered pairs, `C(N, 2)`.
    pub fn total(&self) -> u64 {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }

    /// True when every pair is a true negative, which makes F1 degenerate.
    pub fn is_degenerate(&self) -> bool {
        self.true_positives + self.false_positives + self.false_negatives == 0
    }
}

/// Pairwise F1 over unordered document pairs,
/// `F1 = 2·tp / (2·tp + fn + fp)`.
///
/// When no pair shares a cluster or a category (`tp + fp + fn = 0`) the
/// ratio is undefined and the score is 0 by convention; callers can detect
/// the case through [`PairCounts::is_degenerate`].
pub fn pairwise_f1(table: &ContingencyTable) -> f64 {
    let pairs = PairCounts::from_table(table);
    if pairs.is_degenerate() {
        return 0.0;
    }
    let tp = pairs.true_positives as f64;
    2.0 * tp / (2.0 * tp + pairs.false_negatives as f64 + pairs.false_positives as f64)
}

/// Normalized mutual information between the cluster and category
/// partitions, `NMI = I(Ω; C) / ((H(Ω) + H(C)) / 2)` in natural logarithms.
///
/// The arithmetic-mean normalizer keeps the score in `[0, 1]`. When both
/// partitions are single-block (`H(Ω) + H(C) = 0`) the partitions are
/// identical and the score is 1 by convention.
pub fn nmi(table: &ContingencyTable) -> f64 {
    let n = table.total() as f64;
    let h_clusters = entropy_of(table.row_sums(), n);
    let h_categories = entropy_of(table.col_sums(), n);
    if h_clusters + h_categories == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for k in 0..table.num_clusters() {
        let row_sum = table.row_sums()[k] as f64;
        for (j, &cell) in table.row(k).iter().enumerate() {
            if cell > 0 {
                let joint = cell as f64 / n;
                mi += joint * (cell as f64 * n / (row_sum * table.col_sums()[j] as f64)).ln();
            }
        }
    }
    (mi / ((h_clusters + h_categories) / 2.0)).clamp(0.0, 1.0)
}

fn entropy_of(sums: &[u64], n: f64) -> f64 {
    let mut h = 0.0;
    for &s in sums {
        if s > 0 {
            let p = s as f64 / n;
            h -= p * p.ln();
        }
    }
    h
}
