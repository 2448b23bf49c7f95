//! Core data model: documents, clusterings, ground-truth labels, relevance
//! judgments, and the cluster-by-category contingency table that the
//! extrinsic measures consume.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Errors raised while constructing or combining model values.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid {kind} id {token:?}: ids must be non-empty and contain no whitespace")]
    InvalidId { kind: &'static str, token: String },
    #[error("document {doc} is assigned to more than one cluster")]
    DuplicateAssignment { doc: DocId },
    #[error("document {doc} is labeled more than once")]
    DuplicateLabel { doc: DocId },
    #[error("clustering contains no documents")]
    EmptyClustering,
    #[error("ground truth contains no documents")]
    EmptyTruth,
    #[error("no jointly covered documents: the clustering and the ground truth share no document ids")]
    NoJointlyCoveredDocuments,
    #[error("contingency table must have at least one row and one column")]
    EmptyTable,
    #[error("contingency table rows must all have the same length")]
    RaggedTable,
    #[error("contingency table ids must match the count matrix shape")]
    TableShapeMismatch,
}

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident, $kind:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            /// Validates and wraps a raw token: ids are opaque strings that
            /// must be non-empty and contain no whitespace.
            pub fn new(token: impl Into<String>) -> Result<Self, ModelError> {
                let token = token.into();
                if token.is_empty() || token.chars().any(char::is_whitespace) {
                    return Err(ModelError::InvalidId { kind: $kind, token });
                }
                Ok(Self(token))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

id_type!(
    /// Identifies one document.
    DocId,
    "document"
);
id_type!(
    /// Identifies one cluster of a clustering.
    ClusterId,
    "cluster"
);
id_type!(
    /// Identifies one ground-truth category.
    CategoryId,
    "category"
);
id_type!(
    /// Identifies one relevance-judgment topic.
    TopicId,
    "topic"
);
id_type!(
    /// Identifies one vocabulary term.
    TermId,
    "term"
);

/// A hard clustering: every document belongs to exactly one cluster, no
/// cluster is empty, and the clusters jointly cover the document set.
///
/// Both the per-document assignment and the derived cluster membership view
/// are kept in sorted maps so that every iteration order — and therefore
/// every downstream computation — is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    assignments: BTreeMap<DocId, ClusterId>,
    clusters: BTreeMap<ClusterId, BTreeSet<DocId>>,
}

impl Clustering {
    /// Builds a clustering from `(document, cluster)` pairs.
    ///
    /// Fails if a document appears twice (hard clusterings admit exactly one
    /// cluster per document) or if no pairs are given.
    pub fn from_assignments<I>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (DocId, ClusterId)>,
    {
        let mut assignments: BTreeMap<DocId, ClusterId> = BTreeMap::new();
        let mut clusters: BTreeMap<ClusterId, BTreeSet<DocId>> = BTreeMap::new();
        for (doc, cluster) in pairs {
            if assignments.contains_key(&doc) {
                return Err(ModelError::DuplicateAssignment { doc });
            }
            assignments.insert(doc.clone(), cluster.clone());
            clusters.entry(cluster).or_default().insert(doc);
        }
        if assignments.is_empty() {
            return Err(ModelError::EmptyClustering);
        }
        Ok(Self { assignments, clusters })
    }

    pub fn num_docs(&self) -> usize {
        self.assignments.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn contains_doc(&self, doc: &DocId) -> bool {
        self.assignments.contains_key(doc)
    }

    pub fn cluster_of(&self, doc: &DocId) -> Option<&ClusterId> {
        self.assignments.get(doc)
    }

    pub fn members(&self, cluster: &ClusterId) -> Option<&BTreeSet<DocId>> {
        self.clusters.get(cluster)
    }

    /// Documents in ascending id order.
    pub fn doc_ids(&self) -> impl Iterator<Item = &DocId> {
        self.assignments.keys()
    }

    /// `(document, cluster)` pairs in ascending document order.
    pub fn assignments(&self) -> impl Iterator<Item = (&DocId, &ClusterId)> {
        self.assignments.iter()
    }

    /// `(cluster, members)` pairs in ascending cluster order.
    pub fn clusters(&self) -> impl Iterator<Item = (&ClusterId, &BTreeSet<DocId>)> {
        self.clusters.iter()
    }

    /// Cluster sizes in descending order. The profile sums to the number of
    /// documents and is what random baselines must reproduce exactly.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.clusters.values().map(BTreeSet::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Ground-truth labeling: each document carries exactly one category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: BTreeMap<DocId, CategoryId>,
    categories: BTreeMap<CategoryId, BTreeSet<DocId>>,
}

impl GroundTruth {
    /// Builds a labeling from `(document, category)` pairs; documents may
    /// not be labeled twice and at least one pair is required.
    pub fn from_labels<I>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (DocId, CategoryId)>,
    {
        let mut labels: BTreeMap<DocId, CategoryId> = BTreeMap::new();
        let mut categories: BTreeMap<CategoryId, BTreeSet<DocId>> = BTreeMap::new();
        for (doc, category) in pairs {
            if labels.contains_key(&doc) {
                return Err(ModelError::DuplicateLabel { doc });
            }
            labels.insert(doc.clone(), category.clone());
            categories.entry(category).or_default().insert(doc);
        }
        if labels.is_empty() {
            return Err(ModelError::EmptyTruth);
        }
        Ok(Self { labels, categories })
    }

    pub fn num_docs(&self) -> usize {
        self.labels.len()
    }

    pub fn num_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn label_of(&self, doc: &DocId) -> Option<&CategoryId> {
        self.labels.get(doc)
    }

    pub fn members(&self, category: &CategoryId) -> Option<&BTreeSet<DocId>> {
        self.categories.get(category)
    }

    /// `(document, category)` pairs in ascending document order.
    pub fn labels(&self) -> impl Iterator<Item = (&DocId, &CategoryId)> {
        self.labels.iter()
    }

    /// `(category, members)` pairs in ascending category order.
    pub fn categories(&self) -> impl Iterator<Item = (&CategoryId, &BTreeSet<DocId>)> {
        self.categories.iter()
    }
}

/// Binary relevance judgments grouped per topic.
///
/// Topics whose judged documents were all non-relevant are retained with an
/// empty relevant set so downstream consumers can report them as skipped
/// instead of silently forgetting them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelevanceJudgments {
    topics: BTreeMap<TopicId, BTreeSet<DocId>>,
}

impl RelevanceJudgments {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds judgments directly from per-topic relevant sets.
    pub fn from_topics(topics: BTreeMap<TopicId, BTreeSet<DocId>>) -> Self {
        Self { topics }
    }

    /// Records one judgment line. A document is relevant when any of its
    /// judgments for the topic is positive, which is equivalent to keeping
    /// the maximum relevance over duplicate `(topic, document)` pairs and
    /// binarizing at `relevance > 0`.
    pub fn observe(&mut self, topic: TopicId, doc: DocId, relevance: u64) {
        let relevant = self.topics.entry(topic).or_default();
        if relevance > 0 {
            relevant.insert(doc);
        }
    }

    pub fn num_topics(&self) -> usize {
        self.topics.len()
    }

    pub fn relevant(&self, topic: &TopicId) -> Option<&BTreeSet<DocId>> {
        self.topics.get(topic)
    }

    /// `(topic, relevant documents)` pairs in ascending topic order.
    pub fn topics(&self) -> impl Iterator<Item = (&TopicId, &BTreeSet<DocId>)> {
        self.topics.iter()
    }
}

/// Cluster-by-category co-occurrence counts over the documents covered by
/// both a clustering and a ground truth.
///
/// Rows are clusters and columns are categories, each sorted by id, so cell
/// `(k, j)` counts the documents of cluster `k` labeled with category `j`.
/// Documents present in only one of the two inputs are excluded from the
/// counts and surfaced through the coverage diagnostics; clusters and
/// categories with no jointly covered document contribute no row or column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    cluster_ids: Vec<ClusterId>,
    category_ids: Vec<CategoryId>,
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
    only_in_clustering: usize,
    only_in_truth: usize,
}

impl ContingencyTable {
    /// Builds a table from explicit counts. Mostly useful when counts come
    /// from an external source; [`build_contingency`] is the usual path.
    pub fn from_counts(
        cluster_ids: Vec<ClusterId>,
        category_ids: Vec<CategoryId>,
        counts: Vec<Vec<u64>>,
    ) -> Result<Self, ModelError> {
        if counts.is_empty() || counts[0].is_empty() {
            return Err(ModelError::EmptyTable);
        }
        if counts.iter().any(|row| row.len() != counts[0].len()) {
            return Err(ModelError::RaggedTable);
        }
        if cluster_ids.len() != counts.len() || category_ids.len() != counts[0].len() {
            return Err(ModelError::TableShapeMismatch);
        }
        let row_sums: Vec<u64> = counts.iter().map(|row| row.iter().sum()).collect();
        let col_sums: Vec<u64> = (0..counts[0].len())
            .map(|j| counts.iter().map(|row| row[j]).sum())
            .collect();
        let total = row_sums.iter().sum();
        Ok(Self {
            cluster_ids,
            category_ids,
            counts,
            row_sums,
            col_sums,
            total,
            only_in_clustering: 0,
            only_in_truth: 0,
        })
    }

    pub fn num_clusters(&self) -> usize {
        self.cluster_ids.len()
    }

    pub fn num_categories(&self) -> usize {
        self.category_ids.len()
    }

    pub fn cluster_ids(&self) -> &[ClusterId] {
        &self.cluster_ids
    }

    pub fn category_ids(&self) -> &[CategoryId] {
        &self.category_ids
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.counts[row][col]
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.counts[row]
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    /// Number of jointly covered documents.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Documents that appear in the clustering but carry no label.
    pub fn only_in_clustering(&self) -> usize {
        self.only_in_clustering
    }

    /// Labeled documents that appear in no cluster.
    pub fn only_in_truth(&self) -> usize {
        self.only_in_truth
    }
}

/// Counts cluster/category co-occurrences over the documents shared by the
/// clustering and the ground truth.
///
/// Row and column order follow ascending cluster and category ids, making
/// the table — and everything derived from it — deterministic. Fails when
/// the two inputs share no documents at all.
pub fn build_contingency(
    clustering: &Clustering,
    truth: &GroundTruth,
) -> Result<ContingencyTable, ModelError> {
    let mut cells: BTreeMap<(&ClusterId, &CategoryId), u64> = BTreeMap::new();
    let mut covered = 0usize;
    for (doc, cluster) in clustering.assignments() {
        if let Some(category) = truth.label_of(doc) {
            *cells.entry((cluster, category)).or_insert(0) += 1;
            covered += 1;
        }
    }
    if covered == 0 {
        return Err(ModelError::NoJointlyCoveredDocuments);
    }

    let cluster_ids: Vec<ClusterId> = cells
        .keys()
        .map(|(c, _)| (*c).clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let category_ids: Vec<CategoryId> = cells
        .keys()
        .map(|(_, g)| (*g).clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let col_index: BTreeMap<&CategoryId, usize> =
        category_ids.iter().enumerate().map(|(j, id)| (id, j)).collect();
    let row_index: BTreeMap<&ClusterId, usize> =
        cluster_ids.iter().enumerate().map(|(k, id)| (id, k)).collect();

    let mut counts = vec![vec![0u64; category_ids.len()]; cluster_ids.len()];
    for ((cluster, category), n) in &cells {
        counts[row_index[cluster]][col_index[category]] = *n;
    }

    let mut table = ContingencyTable::from_counts(cluster_ids, category_ids, counts)?;
    table.only_in_clustering = clustering.num_docs() - covered;
    table.only_in_truth = truth.num_docs() - covered;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(s: &str) -> DocId {
        DocId::new(s).unwrap()
    }

    fn clu(s: &str) -> ClusterId {
        ClusterId::new(s).unwrap()
    }

    fn cat(s: &str) -> CategoryId {
        CategoryId::new(s).unwrap()
    }

    fn clustering(pairs: &[(&str, &str)]) -> Clustering {
        Clustering::from_assignments(pairs.iter().map(|(d, c)| (doc(d), clu(c)))).unwrap()
    }

    fn truth(pairs: &[(&str, &str)]) -> GroundTruth {
        GroundTruth::from_labels(pairs.iter().map(|(d, c)| (doc(d), cat(c)))).unwrap()
    }

    #[test]
    fn ids_reject_empty_and_whitespace_tokens() {
        assert!(DocId::new("d1").is_ok());
        assert!(DocId::new("").is_err());
        assert!(DocId::new("a b").is_err());
        assert!(ClusterId::new("w\t1").is_err());
        let err = DocId::new("").unwrap_err();
        assert!(err.to_string().contains("document"));
    }

    #[test]
    fn clustering_rejects_duplicate_documents() {
        let err = Clustering::from_assignments(vec![
            (doc("d1"), clu("w1")),
            (doc("d1"), clu("w2")),
        ])
        .unwrap_err();
        assert!(matches!(err, ModelError::DuplicateAssignment { .. }));
    }

    #[test]
    fn clustering_rejects_empty_input() {
        let err = Clustering::from_assignments(std::iter::empty()).unwrap_err();
        assert!(matches!(err, ModelError::EmptyClustering));
    }

    #[test]
    fn clustering_derives_cluster_membership() {
        let c = clustering(&[("d1", "w1"), ("d2", "w1"), ("d3", "w2")]);
        assert_eq!(c.num_docs(), 3);
        assert_eq!(c.num_clusters(), 2);
        assert_eq!(c.cluster_of(&doc("d2")), Some(&clu("w1")));
        assert_eq!(c.members(&clu("w1")).unwrap().len(), 2);
    }

    #[test]
    fn size_profile_is_descending_and_sums_to_n() {
        let c = clustering(&[
            ("d1", "w1"),
            ("d2", "w2"),
            ("d3", "w2"),
            ("d4", "w3"),
            ("d5", "w3"),
            ("d6", "w3"),
        ]);
        let profile = c.size_profile();
        assert_eq!(profile, vec![3, 2, 1]);
        assert_eq!(profile.iter().sum::<usize>(), c.num_docs());
    }

    #[test]
    fn ground_truth_rejects_multiple_labels_per_document() {
        let err = GroundTruth::from_labels(vec![(doc("d1"), cat("A")), (doc("d1"), cat("A"))])
            .unwrap_err();
        assert!(matches!(err, ModelError::DuplicateLabel { .. }));
    }

    #[test]
    fn judgments_keep_maximum_relevance_over_duplicates() {
        let mut j = RelevanceJudgments::new();
        let t = TopicId::new("t1").unwrap();
        j.observe(t.clone(), doc("d1"), 0);
        j.observe(t.clone(), doc("d1"), 2);
        j.observe(t.clone(), doc("d1"), 0);
        j.observe(t.clone(), doc("d2"), 0);
        let relevant = j.relevant(&t).unwrap();
        assert!(relevant.contains(&doc("d1")));
        assert!(!relevant.contains(&doc("d2")));
    }

    #[test]
    fn judgments_retain_topics_without_relevant_documents() {
        let mut j = RelevanceJudgments::new();
        j.observe(TopicId::new("t9").unwrap(), doc("d1"), 0);
        assert_eq!(j.num_topics(), 1);
        assert!(j.relevant(&TopicId::new("t9").unwrap()).unwrap().is_empty());
    }

    #[test]
    fn contingency_counts_match_hand_example() {
        let c = clustering(&[("d1", "w1"), ("d2", "w1"), ("d3", "w2")]);
        let t = truth(&[("d1", "A"), ("d2", "B"), ("d3", "B")]);
        let table = build_contingency(&c, &t).unwrap();
        assert_eq!(table.cluster_ids(), &[clu("w1"), clu("w2")]);
        assert_eq!(table.category_ids(), &[cat("A"), cat("B")]);
        assert_eq!(table.row(0), &[1, 1]);
        assert_eq!(table.row(1), &[0, 1]);
        assert_eq!(table.row_sums(), &[2, 1]);
        assert_eq!(table.col_sums(), &[1, 2]);
        assert_eq!(table.total(), 3);
    }

    #[test]
    fn contingency_requires_joint_coverage() {
        let c = clustering(&[("d1", "w1")]);
        let t = truth(&[("d2", "A")]);
        let err = build_contingency(&c, &t).unwrap_err();
        assert!(err.to_string().contains("no jointly covered documents"));
    }

    #[test]
    fn contingency_reports_partial_coverage() {
        let c = clustering(&[("d1", "w1"), ("d2", "w1"), ("dx", "w2")]);
        let t = truth(&[("d1", "A"), ("d2", "B"), ("dy", "B")]);
        let table = build_contingency(&c, &t).unwrap();
        assert_eq!(table.total(), 2);
        assert_eq!(table.only_in_clustering(), 1);
        assert_eq!(table.only_in_truth(), 1);
        // dx's cluster has no labeled documents, so it contributes no row.
        assert_eq!(table.num_clusters(), 1);
    }

    #[test]
    fn contingency_row_sums_are_labeled_cluster_sizes() {
        let c = clustering(&[("d1", "w1"), ("d2", "w1"), ("d3", "w2"), ("d4", "w2")]);
        let t = truth(&[("d1", "A"), ("d2", "A"), ("d3", "B")]);
        let table = build_contingency(&c, &t).unwrap();
        assert_eq!(table.row_sums(), &[2, 1]);
        assert_eq!(table.total(), 3);
    }

    #[test]
    fn from_counts_validates_shape() {
        assert!(matches!(
            ContingencyTable::from_counts(vec![], vec![], vec![]),
            Err(ModelError::EmptyTable)
        ));
        let ragged = ContingencyTable::from_counts(
            vec![clu("w1"), clu("w2")],
            vec![cat("A"), cat("B")],
            vec![vec![1, 2], vec![3]],
        );
        assert!(matches!(ragged, Err(ModelError::RaggedTable)));
        let mismatch = ContingencyTable::from_counts(
            vec![clu("w1")],
            vec![cat("A"), cat("B")],
            vec![vec![1, 2], vec![3, 4]],
        );
        assert!(matches!(mismatch, Err(ModelError::TableShapeMismatch)));
    }

    #[test]
    fn contingency_is_invariant_under_cluster_relabeling() {
        let a = clustering(&[("d1", "x"), ("d2", "x"), ("d3", "y"), ("d4", "z")]);
        let b = clustering(&[("d1", "p"), ("d2", "p"), ("d3", "q"), ("d4", "r")]);
        let t = truth(&[("d1", "A"), ("d2", "B"), ("d3", "B"), ("d4", "A")]);
        let ta = build_contingency(&a, &t).unwrap();
        let tb = build_contingency(&b, &t).unwrap();
        let mut cells_a: Vec<Vec<u64>> = (0..ta.num_clusters()).map(|k| ta.row(k).to_vec()).collect();
        let mut cells_b: Vec<Vec<u64>> = (0..tb.num_clusters()).map(|k| tb.row(k).to_vec()).collect();
        cells_a.sort();
        cells_b.sort();
        assert_eq!(cells_a, cells_b);
    }
}
