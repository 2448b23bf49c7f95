//! Sparse vector-space model and spherical k-means.
//!
//! Documents live in a high-dimensional, sparse document-by-term matrix.
//! Raw counts can be reweighted (tf-idf or BM25), compared by cosine
//! similarity on unit-normalized vectors, and clustered with a seeded
//! spherical k-means. The intrinsic quality score `rmse` is the
//! root-mean-square cosine of documents to their cluster centroids (higher
//! is better); `k_sweep` traces it, baseline-adjusted, across cluster
//! counts.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::baseline::{self, AdjustedScore};
use crate::model::{ClusterId, Clustering, DocId, TermId};

/// Errors raised by vector-space operations.
#[derive(Debug, Error)]
pub enum VsmError {
    #[error("document {doc} has no nonzero weights after weighting")]
    AllZeroDocument { doc: String },
    #[error("cosine is undefined for a zero vector")]
    ZeroVector,
    #[error("k must be between 1 and {docs}, got {k}")]
    InvalidK { k: usize, docs: usize },
    #[error("max_iter must be at least 1")]
    InvalidMaxIter,
    #[error("bm25 requires k1 > 0, got {k1}")]
    InvalidK1 { k1: f64 },
    #[error("bm25 requires 0 <= b <= 1, got {b}")]
    InvalidB { b: f64 },
    #[error("document {doc} appears in the clustering but not in the corpus")]
    UnknownDocument { doc: String },
    #[error("corpus document {doc} is missing from the clustering")]
    UnclusteredDocument { doc: String },
}

/// A sparse document-by-term matrix with non-negative cell values.
///
/// Documents and terms are kept in ascending id order and rows store
/// `(term index, value)` pairs sorted by term index. Document lengths are
/// the raw token counts captured at construction; they survive reweighting
/// because BM25 normalizes by the original lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCorpus {
    docs: Vec<DocId>,
    terms: Vec<TermId>,
    rows: Vec<Vec<(u32, f64)>>,
    doc_len: Vec<f64>,
    doc_index: BTreeMap<DocId, usize>,
}

impl SparseCorpus {
    /// Builds a corpus from per-document term counts.
    pub fn from_counts(counts: BTreeMap<DocId, BTreeMap<TermId, u64>>) -> SparseCorpus {
        let mut term_index: BTreeMap<&TermId, u32> = BTreeMap::new();
        for doc_terms in counts.values() {
            for term in doc_terms.keys() {
                let next = term_index.len() as u32;
                term_index.entry(term).or_insert(next);
            }
        }
        // BTreeMap insertion order is not sorted order; rebuild the indices
        // so that index order equals term id order.
        let terms: Vec<TermId> = term_index.keys().map(|t| (*t).clone()).collect();
        let term_index: BTreeMap<&TermId, u32> =
            terms.iter().enumerate().map(|(i, t)| (t, i as u32)).collect();
        assert!(terms.len() <= u32::MAX as usize, "term vocabulary exceeds u32 indices");

        let mut docs = Vec::with_capacity(counts.len());
        let mut rows = Vec::with_capacity(counts.len());
        let mut doc_len = Vec::with_capacity(counts.len());
        for (doc, doc_terms) in &counts {
            let row: Vec<(u32, f64)> =
                doc_terms.iter().map(|(t, &c)| (term_index[t], c as f64)).collect();
            doc_len.push(doc_terms.values().sum::<u64>() as f64);
            docs.push(doc.clone());
            rows.push(row);
        }
        let doc_index = docs.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        SparseCorpus { docs, terms, rows, doc_len, doc_index }
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn doc_ids(&self) -> &[DocId] {
        &self.docs
    }

    pub fn term_ids(&self) -> &[TermId] {
        &self.terms
    }

    /// Row of a document by id.
    pub fn vector(&self, doc: &DocId) -> Option<&[(u32, f64)]> {
        self.doc_index.get(doc).map(|&i| self.rows[i].as_slice())
    }

    /// Position of a document in row order.
    pub fn index_of(&self, doc: &DocId) -> Option<usize> {
        self.doc_index.get(doc).copied()
    }

    pub fn row(&self, index: usize) -> &[(u32, f64)] {
        &self.rows[index]
    }

    pub fn doc_id(&self, index: usize) -> &DocId {
        &self.docs[index]
    }

    /// Raw token count of a document, fixed at construction time.
    pub fn doc_len(&self, index: usize) -> f64 {
        self.doc_len[index]
    }

    /// Mean raw document length.
    pub fn avg_doc_len(&self) -> f64 {
        if self.doc_len.is_empty() {
            0.0
        } else {
            self.doc_len.iter().sum::<f64>() / self.doc_len.len() as f64
        }
    }

    /// Number of documents containing each term.
    fn document_frequencies(&self) -> Vec<u64> {
        let mut df = vec![0u64; self.terms.len()];
        for row in &self.rows {
            for &(t, _) in row {
                df[t as usize] += 1;
            }
        }
        df
    }

    /// Replaces every row via `weight(doc index, term index, value)`,
    /// dropping cells that weight to zero. A document left with no nonzero
    /// cells is an error: downstream cosine math needs nonzero vectors.
    fn reweighted(
        &self,
        weight: impl Fn(usize, u32, f64) -> f64,
    ) -> Result<SparseCorpus, VsmError> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for (d, row) in self.rows.iter().enumerate() {
            let new_row: Vec<(u32, f64)> = row
                .iter()
                .map(|&(t, v)| (t, weight(d, t, v)))
                .filter(|&(_, w)| w != 0.0)
                .collect();
            if new_row.is_empty() {
                return Err(VsmError::AllZeroDocument {
                    doc: self.docs[d].as_str().to_string(),
                });
            }
            rows.push(new_row);
        }
        Ok(SparseCorpus {
            docs: self.docs.clone(),
            terms: self.terms.clone(),
            rows,
            doc_len: self.doc_len.clone(),
            doc_index: self.doc_index.clone(),
        })
    }
}

/// tf-idf weighting: `cell(d,t) = tf(d,t) · ln(N / df(t))`. A term present
/// in every document weights to zero and its cells are dropped.
pub fn tfidf_weight(corpus: &SparseCorpus) -> Result<SparseCorpus, VsmError> {
    let n = corpus.num_docs() as f64;
    let df = corpus.document_frequencies();
    corpus.reweighted(|_, t, tf| tf * (n / df[t as usize] as f64).ln())
}

/// BM25 weighting:
/// `cell(d,t) = max(0, ln((N−df+0.5)/(df+0.5))) · tf·(k1+1) / (tf + k1·(1−b+b·dl/avdl))`.
/// Negative idf is clamped to zero, so very common terms drop out.
pub fn bm25_weight(corpus: &SparseCorpus, k1: f64, b: f64) -> Result<SparseCorpus, VsmError> {
    if !k1.is_finite() || k1 <= 0.0 {
        return Err(VsmError::InvalidK1 { k1 });
    }
    if !b.is_finite() || !(0.0..=1.0).contains(&b) {
        return Err(VsmError::InvalidB { b });
    }
    let n = corpus.num_docs() as f64;
    let df = corpus.document_frequencies();
    let avdl = corpus.avg_doc_len();
    let idf: Vec<f64> = df
        .iter()
        .map(|&d| ((n - d as f64 + 0.5) / (d as f64 + 0.5)).ln().max(0.0))
        .collect();
    corpus.reweighted(|d, t, tf| {
        let norm = 1.0 - b + b * corpus.doc_len(d) / avdl;
        idf[t as usize] * tf * (k1 + 1.0) / (tf + k1 * norm)
    })
}

/// Cosine similarity of two sparse vectors with non-negative weights:
/// the inner product after unit normalization, clamped into `[0, 1]` to
/// absorb rounding. Zero vectors have no direction and are rejected.
pub fn cosine(a: &[(u32, f64)], b: &[(u32, f64)]) -> Result<f64, VsmError> {
    let norm_a = norm(a);
    let norm_b = norm(b);
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(VsmError::ZeroVector);
    }
    Ok((dot(a, b) / (norm_a * norm_b)).clamp(0.0, 1.0))
}

fn norm(v: &[(u32, f64)]) -> f64 {
    v.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
}

fn dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut sum) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                sum += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

/// Unit-length cluster centroid over the term space.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroid(Vec<(u32, f64)>);

impl Centroid {
    pub fn values(&self) -> &[(u32, f64)] {
        &self.0
    }
}

/// Outcome of a k-means run.
#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub clustering: Clustering,
    /// One unit centroid per cluster, in cluster-id order.
    pub centroids: Vec<Centroid>,
    /// Assignment passes performed (≤ `max_iter`).
    pub iterations: usize,
    /// True only when a full pass changed no assignment.
    pub converged: bool,
    /// Mean document-to-assigned-centroid cosine after each centroid
    /// update; non-decreasing by construction.
    pub mean_cosine_history: Vec<f64>,
}

/// Spherical k-means: centroids start from `k` distinct uniformly random
/// documents, then passes alternate between assigning every document to
/// the centroid of maximal cosine (ties to the lowest cluster index) and
/// recomputing centroids as unit-normalized cluster means, until a pass
/// changes nothing or `max_iter` passes have run. A cluster left empty by
/// an assignment pass is repaired by moving in the document with the lowest
/// cosine to its own centroid (ties to the lowest document index), which
/// then reseeds that cluster's centroid.
///
/// Results depend only on `(corpus, k, seed, max_iter)` — never on thread
/// scheduling: per-document and per-cluster arithmetic runs in fixed index
/// order.
pub fn kmeans(
    corpus: &SparseCorpus,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<KMeansResult, VsmError> {
    let n = corpus.num_docs();
    if k < 1 || k > n {
        return Err(VsmError::InvalidK { k, docs: n });
    }
    if max_iter < 1 {
        return Err(VsmError::InvalidMaxIter);
    }
    let units = unit_rows(corpus)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, n, k);
    let mut centroids: Vec<Vec<(u32, f64)>> = picks.iter().map(|d| units[d].clone()).collect();

    let mut assignment: Vec<u32> = Vec::new();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    for pass in 1..=max_iter {
        iterations = pass;
        let (mut next, best_cos) = assign_all(&units, &centroids, corpus.num_terms());
        repair_empty_clusters(&mut next, &best_cos, k);
        if next == assignment {
            converged = true;
            break;
        }
        assignment = next;
        centroids = update_centroids(&units, &assignment, k, corpus.num_terms());
        history.push(mean_assigned_cosine(&units, &centroids, &assignment));
    }

    let width = (k - 1).to_string().len();
    let clustering = Clustering::from_assignments(assignment.iter().enumerate().map(|(d, &c)| {
        let id = ClusterId::new(format!("w{c:0width$}")).expect("generated cluster ids are valid");
        (corpus.doc_id(d).clone(), id)
    }))
    .expect("every document is assigned exactly once");
    let centroids = centroids.into_iter().map(Centroid).collect();
    Ok(KMeansResult { clustering, centroids, iterations, converged, mean_cosine_history: history })
}

/// Unit-normalized document rows; a row with no cells has no direction.
fn unit_rows(corpus: &SparseCorpus) -> Result<Vec<Vec<(u32, f64)>>, VsmError> {
    (0..corpus.num_docs())
        .map(|d| {
            let row = corpus.row(d);
            let norm = norm(row);
            if norm == 0.0 {
                return Err(VsmError::AllZeroDocument {
                    doc: corpus.doc_id(d).as_str().to_string(),
                });
            }
            Ok(row.iter().map(|&(t, w)| (t, w / norm)).collect())
        })
        .collect()
}

/// One assignment pass: each document goes to the centroid of maximal
/// cosine, ties to the lowest cluster index. Documents are scored in
/// parallel through an inverted index over centroid terms; each document's
/// accumulation runs in its own term order, so scores are independent of
/// thread count.
fn assign_all(
    units: &[Vec<(u32, f64)>],
    centroids: &[Vec<(u32, f64)>],
    num_terms: usize,
) -> (Vec<u32>, Vec<f64>) {
    let k = centroids.len();
    let mut inverted: Vec<Vec<(u32, f64)>> = vec![Vec::new(); num_terms];
    for (c, centroid) in centroids.iter().enumerate() {
        for &(t, w) in centroid {
            inverted[t as usize].push((c as u32, w));
        }
    }
    let scored: Vec<(u32, f64)> = (0..units.len())
        .into_par_iter()
        .map_init(
            || vec![0.0f64; k],
            |scores, d| {
                for &(t, w) in &units[d] {
                    for &(c, cw) in &inverted[t as usize] {
                        scores[c as usize] += w * cw;
                    }
                }
                let mut best = 0;
                for c in 1..k {
                    if scores[c] > scores[best] {
                        best = c;
                    }
                }
                let best_score = scores[best];
                for &(t, _) in &units[d] {
                    for &(c, _) in &inverted[t as usize] {
                        scores[c as usize] = 0.0;
                    }
                }
                (best as u32, best_score)
            },
        )
        .collect();
    scored.into_iter().unzip()
}

/// Moves documents into empty clusters: for each empty cluster (ascending),
/// the document with the lowest cosine to its assigned centroid — among
/// documents whose cluster keeps at least one other member — is reassigned
/// and will reseed the cluster's centroid at the next update. While any
/// cluster is empty some cluster has two or more members, so a candidate
/// always exists.
fn repair_empty_clusters(assignment: &mut [u32], best_cos: &[f64], k: usize) {
    let mut sizes = vec![0usize; k];
    for &a in assignment.iter() {
        sizes[a as usize] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut candidate: Option<usize> = None;
        for d in 0..assignment.len() {
            if sizes[assignment[d] as usize] < 2 {
                continue;
            }
            let better = match candidate {
                None => true,
                Some(current) => best_cos[d] < best_cos[current],
            };
            if better {
                candidate = Some(d);
            }
        }
        let moved = candidate.expect("an empty cluster implies another cluster has two members");
        sizes[assignment[moved] as usize] -= 1;
        assignment[moved] = empty as u32;
        sizes[empty] = 1;
    }
}

/// Unit-normalized mean of a member set, accumulated in ascending document
/// then term order into a reusable dense buffer.
fn centroid_of_members(
    units: &[Vec<(u32, f64)>],
    members: &[usize],
    buffer: &mut [f64],
) -> Vec<(u32, f64)> {
    let mut touched: Vec<u32> = Vec::new();
    for &d in members {
        for &(t, w) in &units[d] {
            let cell = &mut buffer[t as usize];
            if *cell == 0.0 {
                touched.push(t);
            }
            *cell += w;
        }
    }
    touched.sort_unstable();
    let norm = touched.iter().map(|&t| buffer[t as usize].powi(2)).sum::<f64>().sqrt();
    let centroid: Vec<(u32, f64)> =
        touched.iter().map(|&t| (t, buffer[t as usize] / norm)).collect();
    for &t in &touched {
        buffer[t as usize] = 0.0;
    }
    centroid
}

fn update_centroids(
    units: &[Vec<(u32, f64)>],
    assignment: &[u32],
    k: usize,
    num_terms: usize,
) -> Vec<Vec<(u32, f64)>> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (d, &a) in assignment.iter().enumerate() {
        members[a as usize].push(d);
    }
    members
        .par_iter()
        .map_init(|| vec![0.0f64; num_terms], |buffer, docs| centroid_of_members(units, docs, buffer))
        .collect()
}

/// Mean cosine of documents to their assigned centroids, summed in
/// document order.
fn mean_assigned_cosine(
    units: &[Vec<(u32, f64)>],
    centroids: &[Vec<(u32, f64)>],
    assignment: &[u32],
) -> f64 {
    let dots: Vec<f64> = (0..units.len())
        .into_par_iter()
        .map(|d| dot(&units[d], &centroids[assignment[d] as usize]))
        .collect();
    dots.iter().sum::<f64>() / units.len() as f64
}

/// Root-mean-square cosine of every document to the unit-mean centroid of
/// its cluster: `sqrt((1/N) Σ_d cos(d, centroid(cluster(d)))²)`, in
/// `[0, 1]`, higher is better. Centroids are recomputed from the given
/// clustering, so the score is evaluated identically however the
/// clustering was produced. The corpus and clustering must cover exactly
/// the same documents.
pub fn rmse(corpus: &SparseCorpus, clustering: &Clustering) -> Result<f64, VsmError> {
    for doc in corpus.doc_ids() {
        if !clustering.contains_doc(doc) {
            return Err(VsmError::UnclusteredDocument { doc: doc.as_str().to_string() });
        }
    }
    if clustering.num_docs() != corpus.num_docs() {
        let extra = clustering
            .doc_ids()
            .find(|d| corpus.index_of(d).is_none())
            .expect("a clustering larger than the corpus names a document outside it");
        return Err(VsmError::UnknownDocument { doc: extra.as_str().to_string() });
    }
    let units = unit_rows(corpus)?;
    let n = corpus.num_docs();
    let mut cluster_of = vec![0u32; n];
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(clustering.num_clusters());
    for (c, (_, docs)) in clustering.clusters().enumerate() {
        let mut indices = Vec::with_capacity(docs.len());
        for doc in docs {
            let d = corpus.index_of(doc).expect("coverage was checked above");
            cluster_of[d] = c as u32;
            indices.push(d);
        }
        members.push(indices);
    }
    let centroids: Vec<Vec<(u32, f64)>> = members
        .par_iter()
        .map_init(|| vec![0.0f64; corpus.num_terms()], |buffer, docs| {
            centroid_of_members(&units, docs, buffer)
        })
        .collect();
    let mut sum = 0.0;
    for d in 0..n {
        let cos = dot(&units[d], &centroids[cluster_of[d] as usize]).clamp(0.0, 1.0);
        sum += cos * cos;
    }
    Ok((sum / n as f64).sqrt())
}

/// One point of a k sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub k: usize,
    pub score: AdjustedScore,
}

/// Runs k-means at every `k` (point `i` seeds its run with `seed + i`) and
/// reports the baseline-adjusted `rmse` of each result; baselines reuse
/// the corpus with centroids recomputed from their shuffled members. At
/// `k = 1` and `k = N` every baseline is the same partition as the
/// solution, so the adjusted score is exactly zero.
pub fn k_sweep(
    corpus: &SparseCorpus,
    ks: &[usize],
    seed: u64,
    samples: usize,
    max_iter: usize,
) -> crate::Result<Vec<SweepPoint>> {
    let mut points = Vec::with_capacity(ks.len());
    for (i, &k) in ks.iter().enumerate() {
        let result = kmeans(corpus, k, seed.wrapping_add(i as u64), max_iter)?;
        let score = baseline::adjust(&result.clustering, seed, samples, |c| {
            rmse(corpus, c).map_err(crate::Error::from)
        })?;
        points.push(SweepPoint { k, score });
    }
    Ok(points)
}
