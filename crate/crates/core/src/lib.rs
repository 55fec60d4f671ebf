//! Clustering for gene-expression matrices: K-Means, ISODATA, AGMFI
//! (ISODATA with an automatically generated merge factor), CCIA seeding and
//! silhouette quality scoring.

pub mod adaptive;
pub mod error;
pub mod io;
pub mod kmeans;
pub mod matrix;
pub mod quality;
pub mod seeding;
pub mod synthetic;

pub use adaptive::{
    agmfi, auto_merge_factor, eiagmfi, isodata, merge_clusters, split_cluster, AdaptiveEvent,
    AgmfiParams, IsodataParams,
};
pub use error::{Error, Result};
pub use io::{load_delimited, parse_delimited, write_delimited, LoadOptions};
pub use kmeans::{
    euclidean_distance, kmeans, nearest_centroid, recompute_centroids, Assignment, CentroidSet,
    ClusteringResult, Init, KMeansParams,
};
pub use matrix::{drop_missing_rows, zscore_normalize, ExpressionMatrix, RawMatrix, RawRow};
pub use quality::{quality_score, silhouette, QualityReport};
pub use seeding::{ccia_groups, ccia_seed, SeedGroups};
pub use synthetic::{generate_synthetic, SyntheticSpec};
