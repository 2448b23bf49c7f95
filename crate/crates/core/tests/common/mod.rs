//! Shared fixtures and independent reference implementations for the
//! integration suites.
//!
//! Every oracle below recomputes its measure from first principles —
//! explicit enumeration of document pairs, probability tables built by
//! walking the documents, literal cumulated-gain sums — deliberately
//! avoiding the library's own contingency-table and gain-vector code paths,
//! so that agreement between the two is evidence rather than tautology.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cluster_judge_core::model::{CategoryId, ClusterId, DocId, TopicId};
use cluster_judge_core::synth;
use cluster_judge_core::{Clustering, GroundTruth};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Constructors from plain index vectors
// ---------------------------------------------------------------------------

/// Documents `0..n` as model ids, shared by every index-vector constructor
/// so a clustering and a ground truth built from equal-length vectors talk
/// about the same documents.
pub fn docs_of(n: usize) -> Vec<DocId> {
    synth::doc_ids(n)
}

/// Builds a clustering over documents `0..len` from per-document cluster
/// indices.
pub fn clustering_of(assignment: &[usize]) -> Clustering {
    let docs = docs_of(assignment.len());
    Clustering::from_assignments(assignment.iter().enumerate().map(|(i, &c)| {
        (docs[i].clone(), ClusterId::new(format!("k{c}")).expect("generated ids are valid"))
    }))
    .expect("distinct documents and valid ids")
}

/// Builds a ground truth over documents `0..len` from per-document category
/// indices.
pub fn truth_of(labels: &[usize]) -> GroundTruth {
    let docs = docs_of(labels.len());
    GroundTruth::from_labels(labels.iter().enumerate().map(|(i, &j)| {
        (docs[i].clone(), CategoryId::new(format!("g{j}")).expect("generated ids are valid"))
    }))
    .expect("distinct documents and valid ids")
}

/// The documents at `indices` (all within `0..n`) as a relevance set.
pub fn relevant_of(n: usize, indices: &[usize]) -> BTreeSet<DocId> {
    let docs = docs_of(n);
    indices.iter().map(|&i| docs[i].clone()).collect()
}

/// A throwaway topic id for single-topic scoring calls.
pub fn topic() -> TopicId {
    TopicId::new("t0").expect("valid id")
}

// ---------------------------------------------------------------------------
// Extrinsic oracles: count directly over documents, never through
// ContingencyTable
// ---------------------------------------------------------------------------

fn group_by_cluster(assignment: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (doc, &cluster) in assignment.iter().enumerate() {
        groups.entry(cluster).or_default().push(doc);
    }
    groups
}

fn majority_fraction(members: &[usize], labels: &[usize]) -> f64 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &doc in members {
        *counts.entry(labels[doc]).or_default() += 1;
    }
    let max = counts.values().copied().max().expect("clusters are non-empty");
    max as f64 / members.len() as f64
}

/// Size-weighted mean of per-cluster majority fractions.
pub fn oracle_purity_micro(assignment: &[usize], labels: &[usize]) -> f64 {
    let groups = group_by_cluster(assignment);
    let weighted: f64 = groups
        .values()
        .map(|members| majority_fraction(members, labels) * members.len() as f64)
        .sum();
    weighted / assignment.len() as f64
}

/// Unweighted mean of per-cluster majority fractions.
pub fn oracle_purity_macro(assignment: &[usize], labels: &[usize]) -> f64 {
    let groups = group_by_cluster(assignment);
    let total: f64 = groups.values().map(|members| majority_fraction(members, labels)).sum();
    total / groups.len() as f64
}

fn category_entropy(members: &[usize], labels: &[usize], norm: f64) -> f64 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &doc in members {
        *counts.entry(labels[doc]).or_default() += 1;
    }
    let size = members.len() as f64;
    let mut h = 0.0;
    for &count in counts.values() {
        let p = count as f64 / size;
        h -= p * p.ln();
    }
    h / norm
}

fn distinct(labels: &[usize]) -> usize {
    labels.iter().collect::<BTreeSet<_>>().len()
}

/// Size-weighted mean of per-cluster category entropies, each normalized by
/// `ln J` where `J` is the number of distinct categories.
pub fn oracle_entropy_micro(assignment: &[usize], labels: &[usize]) -> f64 {
    let norm = (distinct(labels) as f64).ln();
    let groups = group_by_cluster(assignment);
    let weighted: f64 = groups
        .values()
        .map(|members| category_entropy(members, labels, norm) * members.len() as f64)
        .sum();
    weighted / assignment.len() as f64
}

/// Unweighted mean of per-cluster normalized category entropies.
pub fn oracle_entropy_macro(assignment: &[usize], labels: &[usize]) -> f64 {
    let norm = (distinct(labels) as f64).ln();
    let groups = group_by_cluster(assignment);
    let total: f64 =
        groups.values().map(|members| category_entropy(members, labels, norm)).sum();
    total / groups.len() as f64
}

/// Pairwise F1 by walking every unordered document pair.
pub fn oracle_f1(assignment: &[usize], labels: &[usize]) -> f64 {
    let n = assignment.len();
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            let same_cluster = assignment[a] == assignment[b];
            let same_category = labels[a] == labels[b];
            match (same_cluster, same_category) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    if tp + fp + fn_ == 0 {
        return 0.0;
    }
    2.0 * tp as f64 / (2.0 * tp as f64 + fp as f64 + fn_ as f64)
}

/// The same pair walk, returning the raw counts for exact comparisons.
/// Order: true positives, false positives, false negatives, true negatives.
pub fn oracle_pair_counts(assignment: &[usize], labels: &[usize]) -> (u64, u64, u64, u64) {
    let n = assignment.len();
    let mut counts = (0u64, 0u64, 0u64, 0u64);
    for a in 0..n {
        for b in a + 1..n {
            match (assignment[a] == assignment[b], labels[a] == labels[b]) {
                (true, true) => counts.0 += 1,
                (true, false) => counts.1 += 1,
                (false, true) => counts.2 += 1,
                (false, false) => counts.3 += 1,
            }
        }
    }
    counts
}

/// NMI from probability estimates built by walking the documents:
/// `I(Ω;C) / ((H(Ω) + H(C)) / 2)`, 1 when both entropies vanish, clamped to
/// the unit interval.
pub fn oracle_nmi(assignment: &[usize], labels: &[usize]) -> f64 {
    let n = assignment.len() as f64;
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut by_cluster: BTreeMap<usize, usize> = BTreeMap::new();
    let mut by_category: BTreeMap<usize, usize> = BTreeMap::new();
    for (&k, &j) in assignment.iter().zip(labels.iter()) {
        *joint.entry((k, j)).or_default() += 1;
        *by_cluster.entry(k).or_default() += 1;
        *by_category.entry(j).or_default() += 1;
    }
    let entropy = |counts: &BTreeMap<usize, usize>| -> f64 {
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let h_clusters = entropy(&by_cluster);
    let h_categories = entropy(&by_category);
    if h_clusters + h_categories == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for (&(k, j), &c) in &joint {
        let p = c as f64 / n;
        let pk = by_cluster[&k] as f64 / n;
        let qj = by_category[&j] as f64 / n;
        mi += p * (p / (pk * qj)).ln();
    }
    (mi / ((h_clusters + h_categories) / 2.0)).clamp(0.0, 1.0)
}

// ---------------------------------------------------------------------------
// NCCG oracle: literal cumulated-gain arithmetic
// ---------------------------------------------------------------------------

/// Sum of the cumulated gain vector over `n_r²`, computed by the literal
/// running-sum loop. All intermediate values are small exact integers, so
/// this performs the same single division as the library and the results
/// are comparable bit for bit.
fn oracle_split(values: &[u64], n_r: u64) -> f64 {
    let mut running = 0u64;
    let mut total = 0u64;
    for &v in values {
        running += v;
        total += running;
    }
    total as f64 / (n_r * n_r) as f64
}

/// NCCG from per-cluster relevant counts (positive entries only) and the
/// total number of clusters: descending counts padded to `min(K, n_r)`
/// entries, normalized between the evenly-spread worst case and 1.
pub fn oracle_nccg_from_counts(positive_counts: &[u64], num_clusters: usize) -> f64 {
    let n_r: u64 = positive_counts.iter().sum();
    assert!(n_r >= 1, "at least one relevant document must be clustered");
    assert!(positive_counts.len() <= num_clusters, "more gain entries than clusters");
    if n_r == 1 {
        return 1.0;
    }
    let len = (num_clusters as u64).min(n_r) as usize;
    let mut gain: Vec<u64> = positive_counts.to_vec();
    gain.sort_unstable_by(|a, b| b.cmp(a));
    gain.resize(len, 0);
    let split = oracle_split(&gain, n_r);
    let base = n_r / len as u64;
    let remainder = n_r % len as u64;
    let worst: Vec<u64> = (0..len as u64)
        .map(|i| if i < remainder { base + 1 } else { base })
        .collect();
    let min_split = oracle_split(&worst, n_r);
    (split - min_split) / (1.0 - min_split)
}

/// NCCG of one topic over an index-vector clustering. `relevant` lists
/// document indices; every document is clustered, so `n_r = relevant.len()`.
pub fn oracle_nccg(assignment: &[usize], relevant: &[usize]) -> f64 {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &doc in relevant {
        *counts.entry(assignment[doc]).or_default() += 1;
    }
    let num_clusters = assignment.iter().collect::<BTreeSet<_>>().len();
    let positive: Vec<u64> = counts.values().copied().collect();
    oracle_nccg_from_counts(&positive, num_clusters)
}

// ---------------------------------------------------------------------------
// Enumeration and random instances
// ---------------------------------------------------------------------------

/// Every partition of `n` items, encoded as restricted growth strings:
/// entry `i` is the block index of item `i`, `a[0] = 0`, and each entry is
/// at most one greater than the maximum before it.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(a: &mut Vec<usize>, position: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if position == a.len() {
            out.push(a.clone());
            return;
        }
        for block in 0..=max_used + 1 {
            a[position] = block;
            extend(a, position + 1, max_used.max(block), out);
        }
    }
    assert!(n >= 1, "partitions of zero items are not enumerated");
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    extend(&mut a, 1, 0, &mut out);
    out
}

/// Every non-empty subset of `0..n` with at most `max_size` elements, as
/// sorted index vectors.
pub fn subsets_up_to(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    assert!(n <= 16, "bitmask enumeration is meant for small n");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > max_size {
            continue;
        }
        out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
    }
    out
}

/// A random clustering/labeling pair over `2..=max_docs` documents. Labels
/// are redrawn until at least two categories appear, so entropy's `ln J`
/// normalizer is positive.
pub fn random_extrinsic_instance(
    rng: &mut ChaCha8Rng,
    max_docs: usize,
) -> (Vec<usize>, Vec<usize>) {
    let n = rng.gen_range(2..=max_docs);
    let k = rng.gen_range(1..=n);
    let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    loop {
        let j = rng.gen_range(2..=n);
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..j)).collect();
        if distinct(&labels) >= 2 {
            return (assignment, labels);
        }
    }
}

/// A random clustering plus a random non-empty relevant set over
/// `2..=max_docs` documents.
pub fn random_nccg_instance(
    rng: &mut ChaCha8Rng,
    max_docs: usize,
) -> (Vec<usize>, Vec<usize>) {
    let n = rng.gen_range(2..=max_docs);
    let k = rng.gen_range(1..=n);
    let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let n_r = rng.gen_range(1..=n);
    let relevant = rand::seq::index::sample(rng, n, n_r).into_vec();
    (assignment, relevant)
}
