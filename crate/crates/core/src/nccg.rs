//! NCCG (normalized cumulated cluster gain): how well a clustering
//! concentrates each topic's relevant documents into few clusters.
//!
//! For one topic, clusters are ranked by the number of relevant documents
//! they contain; the descending per-cluster counts form a gain vector whose
//! cumulated sum yields a split score. The score is normalized between the
//! worst achievable split (relevant documents spread as evenly as the
//! cluster count allows) at 0 and full concentration at 1.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{Clustering, DocId, RelevanceJudgments, TopicId};

/// Errors raised by the NCCG computations.
#[derive(Debug, Error)]
pub enum NccgError {
    #[error("topic has no relevant documents present in the clustering")]
    NoClusteredRelevant,
    #[error("no scorable topics: every topic has an empty or unclustered relevant set")]
    NoScorableTopics,
}

/// Why a topic was left out of the NCCG mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// The judgments list the topic but mark no document as relevant.
    NoRelevantDocuments,
    /// Relevant documents exist but none appears in the clustering.
    NoneClustered,
}

/// Descending per-cluster relevant-document counts for one topic.
///
/// The vector has fixed length `L = min(K, n_r)` where `K` is the cluster
/// count and `n_r` the number of relevant documents found in the clustering;
/// at most `n_r` clusters can contain a relevant document, so padding to `L`
/// only ever appends zeros. The entries always sum to `n_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainVector {
    values: Vec<u64>,
    relevant: u64,
}

impl GainVector {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Number of relevant documents present in the clustering (`n_r`).
    pub fn relevant_count(&self) -> u64 {
        self.relevant
    }
}

/// Score triple for one topic.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicScore {
    pub topic: TopicId,
    pub split: f64,
    pub min_split: f64,
    pub nccg: f64,
}

/// NCCG over all topics of a judgment set, with per-topic detail and the
/// bookkeeping needed to report skipped topics and dropped documents.
#[derive(Debug, Clone, PartialEq)]
pub struct NccgEvaluation {
    /// Mean NCCG over the scored topics.
    pub mean: f64,
    /// Per-topic scores in ascending topic order (scored topics only).
    pub topics: Vec<TopicScore>,
    /// Topics excluded from the mean, with the reason.
    pub skipped: Vec<(TopicId, SkipReason)>,
    /// Relevant documents dropped because the clustering does not contain
    /// them, summed over all topics.
    pub missing_relevant: u64,
}

/// Builds the gain vector of one topic: relevant documents are counted per
/// cluster, sorted descending, and padded with zeros to length
/// `min(K, n_r)`. Relevant documents missing from the clustering are
/// dropped (they reduce `n_r`); if none remains the topic is unscorable.
pub fn gain_vector(
    clustering: &Clustering,
    relevant: &BTreeSet<DocId>,
) -> Result<GainVector, NccgError> {
    let mut per_cluster: BTreeMap<&crate::model::ClusterId, u64> = BTreeMap::new();
    let mut found = 0u64;
    for doc in relevant {
        if let Some(cluster) = clustering.cluster_of(doc) {
            *per_cluster.entry(cluster).or_insert(0) += 1;
            found += 1;
        }
    }
    if found == 0 {
        return Err(NccgError::NoClusteredRelevant);
    }
    let len = clustering.num_clusters().min(found as usize);
    let mut values: Vec<u64> = per_cluster.values().copied().collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert!(values.len() <= len);
    values.resize(len, 0);
    Ok(GainVector { values, relevant: found })
}

/// Sum of the cumulated gain vector divided by `n_r²`.
///
/// The numerator is computed exactly in integers — entry `i` (0-based)
/// appears in `L - i` cumulated sums — so equal gain vectors always produce
/// bit-identical scores.
pub fn split_score(gain: &GainVector) -> f64 {
    let len = gain.values.len() as u64;
    let numerator: u64 =
        gain.values.iter().enumerate().map(|(i, &v)| (len - i as u64) * v).sum();
    numerator as f64 / (gain.relevant * gain.relevant) as f64
}

/// Split score of the worst achievable gain vector: `relevant` documents
/// spread as evenly as `num_clusters` allows. With `K ≥ n_r` this is the
/// all-ones vector and the score reduces to `(n_r + 1) / (2·n_r)`.
pub fn min_split_score(relevant: u64, num_clusters: usize) -> f64 {
    let len = (num_clusters as u64).min(relevant);
    let base = relevant / len;
    let remainder = relevant % len;
    let values: Vec<u64> =
        (0..len).map(|i| if i < remainder { base + 1 } else { base }).collect();
    split_score(&GainVector { values, relevant })
}

/// NCCG of one topic: `(split - min_split) / (1 - min_split)`.
///
/// A single clustered relevant document (`n_r = 1`) makes the denominator
/// vanish — every arrangement is simultaneously best and worst — and scores
/// 1 by convention.
pub fn nccg_topic(
    topic: &TopicId,
    clustering: &Clustering,
    relevant: &BTreeSet<DocId>,
) -> Result<TopicScore, NccgError> {
    let gain = gain_vector(clustering, relevant)?;
    if gain.relevant_count() == 1 {
        return Ok(TopicScore { topic: topic.clone(), split: 1.0, min_split: 1.0, nccg: 1.0 });
    }
    let split = split_score(&gain);
    let min_split = min_split_score(gain.relevant_count(), clustering.num_clusters());
    let nccg = (split - min_split) / (1.0 - min_split);
    Ok(TopicScore { topic: topic.clone(), split, min_split, nccg })
}

/// Scores every topic and returns the full evaluation: the mean over
/// scorable topics, per-topic detail, skipped topics, and the count of
/// relevant documents missing from the clustering.
pub fn evaluate(
    clustering: &Clustering,
    judgments: &RelevanceJudgments,
) -> Result<NccgEvaluation, NccgError> {
    let mut topics = Vec::new();
    let mut skipped = Vec::new();
    let mut missing_relevant = 0u64;
    for (topic, relevant) in judgments.topics() {
        if relevant.is_empty() {
            skipped.push((topic.clone(), SkipReason::NoRelevantDocuments));
            continue;
        }
        let clustered =
            relevant.iter().filter(|doc| clustering.contains_doc(doc)).count() as u64;
        missing_relevant += relevant.len() as u64 - clustered;
        if clustered == 0 {
            skipped.push((topic.clone(), SkipReason::NoneClustered));
            continue;
        }
        topics.push(nccg_topic(topic, clustering, relevant)?);
    }
    if topics.is_empty() {
        return Err(NccgError::NoScorableTopics);
    }
    let mean = topics.iter().map(|t| t.nccg).sum::<f64>() / topics.len() as f64;
    Ok(NccgEvaluation { mean, topics, skipped, missing_relevant })
}

/// Mean NCCG over all scorable topics.
pub fn nccg_mean(
    clustering: &Clustering,
    judgments: &RelevanceJudgments,
) -> Result<f64, NccgError> {
    evaluate(clustering, judgments).map(|e| e.mean)
}
