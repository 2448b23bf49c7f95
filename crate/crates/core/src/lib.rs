//! Cluster-quality evaluation with random-baseline adjustment.
//!
//! Clustering measures are easy to fool: putting every document in its own
//! cluster maxes out purity, and one giant cluster maxes out
//! relevance-concentration scores, without either clustering doing any
//! useful work. This crate scores a clustering in absolute terms *and*
//! against random clusterings with exactly the same cluster-size profile,
//! reporting the divergence — so a clustering that does no better than a
//! content-ignoring shuffle of identical shape scores zero, and worse ones
//! score negative.
//!
//! The toolkit provides:
//!
//! - extrinsic measures against labeled ground truth — purity, normalized
//!   entropy, pairwise F1, and NMI, each with micro and macro averaging
//!   ([`extrinsic`]);
//! - a relevance-concentration measure over per-topic judgments, NCCG
//!   ([`nccg`]);
//! - an intrinsic cosine-distortion measure over a sparse vector-space
//!   model with tf-idf/BM25 weighting and seeded spherical k-means
//!   ([`vsm`]);
//! - the size-matched random-baseline machinery shared by all of them
//!   ([`baseline`]);
//! - text formats for clusterings, labels, relevance judgments, and
//!   term-count corpora ([`formats`]), synthetic fixture generators
//!   ([`synth`]), and deterministic JSON/CSV reports ([`report`]).
//!
//! Every randomized step takes an explicit 64-bit seed and drives a ChaCha8
//! generator; identical inputs and seeds produce bit-identical results,
//! independent of thread count.

pub mod baseline;
pub mod extrinsic;
pub mod formats;
pub mod model;
pub mod nccg;
pub mod report;
pub mod synth;
pub mod vsm;

use thiserror::Error;

/// Any error this crate can produce, one variant per module.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Parse(#[from] formats::ParseError),
    #[error(transparent)]
    Measure(#[from] extrinsic::MeasureError),
    #[error(transparent)]
    Nccg(#[from] nccg::NccgError),
    #[error(transparent)]
    Baseline(#[from] baseline::BaselineError),
    #[error(transparent)]
    Vsm(#[from] vsm::VsmError),
    #[error(transparent)]
    Report(#[from] report::ReportError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use baseline::AdjustedScore;
pub use model::{
    build_contingency, CategoryId, ClusterId, Clustering, ContingencyTable, DocId, GroundTruth,
    RelevanceJudgments, TermId, TopicId,
};
pub use report::{EvalReport, ReportFormat, ReportRow};
pub use vsm::{Centroid, KMeansResult, SparseCorpus, SweepPoint};
