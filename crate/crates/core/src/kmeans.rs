//! Euclidean geometry, Lloyd-style K-Means and the centroid/assignment types
//! shared by every clustering algorithm in the crate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adaptive::AdaptiveEvent;
use crate::error::{Error, Result};
use crate::matrix::ExpressionMatrix;
use crate::seeding::ccia_seed;

/// K centers of dimension m, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    centers: Vec<f64>,
    k: usize,
    m: usize,
}

impl CentroidSet {
    pub fn new(centers: Vec<f64>, m: usize) -> Result<Self> {
        if m == 0 || centers.is_empty() || !centers.len().is_multiple_of(m) {
            return Err(Error::Shape(format!(
                "{} values do not form centers of dimension {m}",
                centers.len()
            )));
        }
        if let Some(pos) = centers.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / m,
                column: pos % m,
            });
        }
        Ok(Self {
            k: centers.len() / m,
            centers,
            m,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut centers = Vec::with_capacity(rows.len() * m);
        for row in rows {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            centers.extend_from_slice(row);
        }
        Self::new(centers, m)
    }

    /// Centers copied from the given data rows.
    pub fn from_data_rows(data: &ExpressionMatrix, rows: &[usize]) -> Result<Self> {
        let centers = rows
            .iter()
            .flat_map(|&i| data.row(i).iter().copied())
            .collect();
        Self::new(centers, data.m())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.m..(i + 1) * self.m]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.centers.chunks_exact(self.m)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.centers
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn set_center(&mut self, i: usize, center: &[f64]) {
        self.centers[i * self.m..(i + 1) * self.m].copy_from_slice(center);
    }
}

/// Cluster index for every data row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<usize>,
    k: usize,
}

impl Assignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::LabelOutOfRange { label: bad, k });
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == cluster).then_some(i))
            .collect()
    }

    pub fn nonempty_count(&self) -> usize {
        self.sizes().iter().filter(|&&s| s > 0).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub assignment: Assignment,
    pub centroids: CentroidSet,
    /// Sum of squared point-to-center distances after each assignment step
    /// of the final Lloyd pass.
    pub objective_history: Vec<f64>,
    /// Lloyd iterations, summed over all passes for adaptive algorithms.
    pub iterations: usize,
    pub final_k: usize,
    /// Discard, split and merge operations, in the order performed.
    pub events: Vec<AdaptiveEvent>,
}

impl ClusteringResult {
    pub fn objective(&self) -> f64 {
        self.objective_history.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansParams {
    pub max_iter: usize,
    /// Stop once no centroid moves farther than this.
    pub tol: f64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-8,
        }
    }
}

impl KMeansParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidParameter("tol must be >= 0".into()));
        }
        Ok(())
    }
}

/// How the first centroids are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// K distinct data rows sampled without replacement.
    Random {
        seed: u64,
    },
    /// Deterministic closest-pair group seeding.
    Ccia,
    Centroids(CentroidSet),
}

impl Init {
    pub fn resolve(&self, data: &ExpressionMatrix, k: usize) -> Result<CentroidSet> {
        check_k(k, data.n())?;
        let centers = match self {
            Init::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let rows = rand::seq::index::sample(&mut rng, data.n(), k).into_vec();
                CentroidSet::from_data_rows(data, &rows)?
            }
            Init::Ccia => ccia_seed(data, k)?,
            Init::Centroids(c) => {
                if c.k() != k {
                    return Err(Error::InvalidParameter(format!(
                        "initial centroid set has {} centers, expected {k}",
                        c.k()
                    )));
                }
                c.clone()
            }
        };
        if centers.m() != data.m() {
            return Err(Error::DimensionMismatch {
                expected: data.m(),
                found: centers.m(),
            });
        }
        Ok(centers)
    }
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(())
}

pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(squared_distance(x, y).sqrt())
}

#[inline]
pub(crate) fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Index of the closest center and the distance to it. Ties go to the lowest
/// index.
pub fn nearest_centroid(point: &[f64], centroids: &CentroidSet) -> Result<(usize, f64)> {
    if point.len() != centroids.m() {
        return Err(Error::DimensionMismatch {
            expected: centroids.m(),
            found: point.len(),
        });
    }
    let (idx, d2) = nearest_squared(point, centroids);
    Ok((idx, d2.sqrt()))
}

#[inline]
fn nearest_squared(point: &[f64], centroids: &CentroidSet) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centroids.iter().enumerate() {
        let d2 = squared_distance(point, center);
        if d2 < best.1 {
            best = (c, d2);
        }
    }
    best
}

/// Nearest-center assignment for every row, with squared distances.
pub fn assign_nearest(
    data: &ExpressionMatrix,
    centroids: &CentroidSet,
) -> Result<(Assignment, Vec<f64>)> {
    if data.m() != centroids.m() {
        return Err(Error::DimensionMismatch {
            expected: data.m(),
            found: centroids.m(),
        });
    }
    let (labels, dists): (Vec<_>, Vec<_>) = data
        .rows()
        .map(|row| nearest_squared(row, centroids))
        .unzip();
    Ok((
        Assignment {
            labels,
            k: centroids.k(),
        },
        dists,
    ))
}

/// Sum of squared distances from each row to its assigned center.
pub fn sum_squared_error(
    data: &ExpressionMatrix,
    assignment: &Assignment,
    centroids: &CentroidSet,
) -> f64 {
    data.rows()
        .zip(assignment.labels())
        .map(|(row, &l)| squared_distance(row, centroids.center(l)))
        .sum()
}

/// Arithmetic mean of each cluster. Fails on an empty cluster.
pub fn recompute_centroids(
    data: &ExpressionMatrix,
    assignment: &Assignment,
    k: usize,
) -> Result<CentroidSet> {
    if assignment.len() != data.n() {
        return Err(Error::DimensionMismatch {
            expected: data.n(),
            found: assignment.len(),
        });
    }
    if let Some(&bad) = assignment.labels().iter().find(|&&l| l >= k) {
        return Err(Error::LabelOutOfRange { label: bad, k });
    }
    let (sums, counts) = cluster_sums(data, assignment.labels(), k);
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(Error::EmptyCluster { cluster: empty });
    }
    CentroidSet::new(divide_sums(sums, &counts, data.m()), data.m())
}

fn cluster_sums(data: &ExpressionMatrix, labels: &[usize], k: usize) -> (Vec<f64>, Vec<usize>) {
    let m = data.m();
    let mut sums = vec![0.0; k * m];
    let mut counts = vec![0usize; k];
    for (row, &l) in data.rows().zip(labels) {
        counts[l] += 1;
        for (acc, v) in sums[l * m..(l + 1) * m].iter_mut().zip(row) {
            *acc += v;
        }
    }
    (sums, counts)
}

fn divide_sums(mut sums: Vec<f64>, counts: &[usize], m: usize) -> Vec<f64> {
    for (chunk, &c) in sums.chunks_exact_mut(m).zip(counts) {
        if c > 0 {
            let c = c as f64;
            chunk.iter_mut().for_each(|v| *v /= c);
        }
    }
    sums
}

/// Means of the clusters; empty clusters keep their previous center.
fn update_centroids(
    data: &ExpressionMatrix,
    assignment: &Assignment,
    previous: &CentroidSet,
) -> CentroidSet {
    let m = data.m();
    let (sums, counts) = cluster_sums(data, assignment.labels(), previous.k());
    let mut centers = divide_sums(sums, &counts, m);
    for (c, &count) in counts.iter().enumerate() {
        if count == 0 {
            centers[c * m..(c + 1) * m].copy_from_slice(previous.center(c));
        }
    }
    CentroidSet {
        centers,
        k: previous.k(),
        m,
    }
}

/// Moves each empty cluster's center onto the point farthest from its
/// current center, taking that point from a cluster with at least two
/// members. Clusters stay empty when every candidate already sits on its
/// center. Returns whether anything moved.
fn repair_empty_clusters(
    data: &ExpressionMatrix,
    centroids: &mut CentroidSet,
    assignment: &mut Assignment,
    dists: &mut [f64],
) -> bool {
    let mut sizes = assignment.sizes();
    let mut repaired = false;
    for c in 0..centroids.k() {
        if sizes[c] > 0 {
            continue;
        }
        let mut farthest: Option<(usize, f64)> = None;
        for (i, (&l, &d2)) in assignment.labels.iter().zip(dists.iter()).enumerate() {
            if sizes[l] >= 2 && d2 > 0.0 && farthest.is_none_or(|(_, best)| d2 > best) {
                farthest = Some((i, d2));
            }
        }
        let Some((i, _)) = farthest else { continue };
        centroids.set_center(c, data.row(i));
        sizes[assignment.labels[i]] -= 1;
        sizes[c] = 1;
        assignment.labels[i] = c;
        dists[i] = 0.0;
        repaired = true;
    }
    repaired
}

pub fn kmeans(
    data: &ExpressionMatrix,
    k: usize,
    init: &Init,
    params: &KMeansParams,
) -> Result<ClusteringResult> {
    params.validate()?;
    let centers = init.resolve(data, k)?;
    lloyd(data, centers, params)
}

/// Lloyd iterations from explicit starting centers. Stops when the
/// assignment repeats, when no center moves more than `tol`, or after
/// `max_iter` update steps.
pub(crate) fn lloyd(
    data: &ExpressionMatrix,
    mut centroids: CentroidSet,
    params: &KMeansParams,
) -> Result<ClusteringResult> {
    let (mut assignment, mut dists) = assign_nearest(data, &centroids)?;
    repair_empty_clusters(data, &mut centroids, &mut assignment, &mut dists);
    let mut history = vec![dists.iter().sum::<f64>()];
    let mut iterations = 0;

    while iterations < params.max_iter {
        iterations += 1;
        let updated = update_centroids(data, &assignment, &centroids);
        let shift = centroids
            .iter()
            .zip(updated.iter())
            .map(|(a, b)| squared_distance(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = updated;

        let (mut next, mut next_dists) = assign_nearest(data, &centroids)?;
        let repaired = repair_empty_clusters(data, &mut centroids, &mut next, &mut next_dists);
        history.push(next_dists.iter().sum::<f64>());
        let changed = next != assignment;
        assignment = next;
        dists = next_dists;
        if !repaired && (!changed || shift < params.tol) {
            break;
        }
    }
    debug_assert_eq!(dists.len(), data.n());

    let final_k = centroids.k();
    Ok(ClusteringResult {
        assignment,
        centroids,
        objective_history: history,
        iterations,
        final_k,
        events: Vec::new(),
    })
}

/// Drops clusters without members and relabels the rest densely, keeping
/// their relative order.
pub(crate) fn drop_empty_clusters(
    assignment: &Assignment,
    centroids: &CentroidSet,
) -> (Assignment, CentroidSet) {
    let sizes = assignment.sizes();
    if sizes.iter().all(|&s| s > 0) {
        return (assignment.clone(), centroids.clone());
    }
    let mut remap = vec![usize::MAX; sizes.len()];
    let mut centers = Vec::new();
    let mut next = 0;
    for (c, &s) in sizes.iter().enumerate() {
        if s > 0 {
            remap[c] = next;
            next += 1;
            centers.extend_from_slice(centroids.center(c));
        }
    }
    let labels = assignment.labels().iter().map(|&l| remap[l]).collect();
    (
        Assignment { labels, k: next },
        CentroidSet {
            centers,
            k: next,
            m: centroids.m(),
        },
    )
}
