//! Synthetic fixtures: deterministic generators for clusterings, ground
//! truths, relevance judgments, and topic-mixture corpora. These drive the
//! command-line `generate` command and the statistical test suites; every
//! generator is a pure function of its arguments and seed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{
    CategoryId, ClusterId, Clustering, DocId, GroundTruth, RelevanceJudgments, TermId, TopicId,
};
use crate::vsm::SparseCorpus;

/// `n` document ids `d000…`, zero-padded so lexicographic order equals
/// numeric order.
pub fn doc_ids(n: usize) -> Vec<DocId> {
    let width = if n <= 1 { 1 } else { (n - 1).to_string().len() };
    (0..n)
        .map(|i| DocId::new(format!("d{i:0width$}")).expect("generated ids are valid"))
        .collect()
}

fn cluster_id(prefix: &str, index: usize, width: usize) -> ClusterId {
    ClusterId::new(format!("{prefix}{index:0width$}")).expect("generated ids are valid")
}

fn width_for(count: usize) -> usize {
    if count <= 1 {
        1
    } else {
        (count - 1).to_string().len()
    }
}

/// Every document in its own cluster.
pub fn all_singletons(docs: &[DocId]) -> Clustering {
    assert!(!docs.is_empty(), "need at least one document");
    let width = width_for(docs.len());
    Clustering::from_assignments(
        docs.iter().enumerate().map(|(i, d)| (d.clone(), cluster_id("s", i, width))),
    )
    .expect("documents are distinct")
}

/// One giant cluster holding `max(1, round(fraction · N))` documents (the
/// first ones in id order) and the rest as singletons.
pub fn giant_with_singletons(docs: &[DocId], fraction: f64) -> Clustering {
    assert!(!docs.is_empty(), "need at least one document");
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "giant fraction must be in (0, 1], got {fraction}"
    );
    let giant = ((fraction * docs.len() as f64).round() as usize).clamp(1, docs.len());
    let width = width_for(docs.len());
    let giant_id = ClusterId::new("giant").unwrap();
    Clustering::from_assignments(docs.iter().enumerate().map(|(i, d)| {
        let cluster = if i < giant { giant_id.clone() } else { cluster_id("s", i, width) };
        (d.clone(), cluster)
    }))
    .expect("documents are distinct")
}

/// Assigns every document independently and uniformly to one of `k`
/// cluster ids. Cluster sizes fluctuate multinomially and ids that receive
/// no document simply do not appear.
pub fn uniform_random_k(docs: &[DocId], k: usize, seed: u64) -> Clustering {
    assert!(!docs.is_empty(), "need at least one document");
    assert!(k >= 1, "need at least one cluster");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = width_for(k);
    Clustering::from_assignments(
        docs.iter()
            .map(|d| (d.clone(), cluster_id("u", rng.gen_range(0..k), width))),
    )
    .expect("documents are distinct")
}

/// Shuffles the documents and deals them into `k` consecutive blocks of
/// near-equal size (differing by at most one).
pub fn random_equal_blocks(docs: &[DocId], k: usize, seed: u64) -> Clustering {
    assert!(!docs.is_empty(), "need at least one document");
    assert!(k >= 1 && k <= docs.len(), "need 1 <= k <= {}, got {k}", docs.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled: Vec<&DocId> = docs.iter().collect();
    shuffled.shuffle(&mut rng);
    let base = docs.len() / k;
    let remainder = docs.len() % k;
    let width = width_for(k);
    let mut assignments = Vec::with_capacity(docs.len());
    let mut next = shuffled.into_iter();
    for c in 0..k {
        let size = if c < remainder { base + 1 } else { base };
        for _ in 0..size {
            assignments.push((next.next().unwrap().clone(), cluster_id("b", c, width)));
        }
    }
    Clustering::from_assignments(assignments).expect("documents are distinct")
}

/// Ground truth with `categories` labels dealt round-robin, so category
/// sizes differ by at most one.
pub fn equal_categories(docs: &[DocId], categories: usize) -> GroundTruth {
    assert!(!docs.is_empty(), "need at least one document");
    assert!(categories >= 1, "need at least one category");
    let width = width_for(categories);
    GroundTruth::from_labels(docs.iter().enumerate().map(|(i, d)| {
        let c = CategoryId::new(format!("c{:0width$}", i % categories))
            .expect("generated ids are valid");
        (d.clone(), c)
    }))
    .expect("documents are distinct")
}

/// `topics` topics, each judging `relevant_per_topic` distinct documents
/// relevant, drawn uniformly.
pub fn random_judgments(
    docs: &[DocId],
    topics: usize,
    relevant_per_topic: usize,
    seed: u64,
) -> RelevanceJudgments {
    assert!(!docs.is_empty(), "need at least one document");
    assert!(topics >= 1, "need at least one topic");
    assert!(
        relevant_per_topic >= 1 && relevant_per_topic <= docs.len(),
        "need 1 <= relevant_per_topic <= {}, got {relevant_per_topic}",
        docs.len()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = width_for(topics);
    let mut judgments = RelevanceJudgments::new();
    for t in 0..topics {
        let topic = TopicId::new(format!("t{t:0width$}")).expect("generated ids are valid");
        for d in rand::seq::index::sample(&mut rng, docs.len(), relevant_per_topic) {
            judgments.observe(topic.clone(), docs[d].clone(), 1);
        }
    }
    judgments
}

/// A topic-mixture corpus: documents are dealt round-robin over `topics`
/// categories, and each document draws `terms_per_doc` tokens from its
/// topic's private vocabulary — skewed towards low term indices for a
/// Zipf-like profile — except that, when `shared_vocab > 0`, roughly one
/// token in five comes from a topic-neutral shared vocabulary. With
/// `shared_vocab = 0` the topics are vocabulary-disjoint, so cross-topic
/// cosine similarity is exactly zero. Returns the corpus and the matching
/// category ground truth.
pub fn topic_corpus(
    docs: usize,
    topics: usize,
    vocab_per_topic: usize,
    terms_per_doc: usize,
    shared_vocab: usize,
    seed: u64,
) -> (SparseCorpus, GroundTruth) {
    assert!(docs >= 1, "need at least one document");
    assert!(topics >= 1 && topics <= docs, "need 1 <= topics <= {docs}, got {topics}");
    assert!(vocab_per_topic >= 1, "need a non-empty topic vocabulary");
    assert!(terms_per_doc >= 1, "documents must contain at least one token");
    let ids = doc_ids(docs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topic_width = width_for(topics);
    let vocab_width = width_for(vocab_per_topic);
    let shared_width = width_for(shared_vocab.max(1));
    let mut counts: BTreeMap<DocId, BTreeMap<TermId, u64>> = BTreeMap::new();
    let mut labels = Vec::with_capacity(docs);
    for (i, doc) in ids.iter().enumerate() {
        let topic = i % topics;
        let mut row: BTreeMap<TermId, u64> = BTreeMap::new();
        for _ in 0..terms_per_doc {
            let term = if shared_vocab > 0 && rng.gen::<f64>() < 0.2 {
                let j = skewed_index(&mut rng, shared_vocab);
                TermId::new(format!("shared{j:0shared_width$}"))
            } else {
                let j = skewed_index(&mut rng, vocab_per_topic);
                TermId::new(format!("v{topic:0topic_width$}x{j:0vocab_width$}"))
            };
            *row.entry(term.expect("generated ids are valid")).or_insert(0) += 1;
        }
        counts.insert(doc.clone(), row);
        labels.push((
            doc.clone(),
            CategoryId::new(format!("c{topic:0topic_width$}")).expect("generated ids are valid"),
        ));
    }
    let corpus = SparseCorpus::from_counts(counts);
    let truth = GroundTruth::from_labels(labels).expect("documents are distinct");
    (corpus, truth)
}

/// Uniform draw squared: favors low indices, giving frequent head terms
/// and a long tail.
fn skewed_index(rng: &mut ChaCha8Rng, len: usize) -> usize {
    let u: f64 = rng.gen();
    ((u * u * len as f64) as usize).min(len - 1)
}
