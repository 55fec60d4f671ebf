//! Clustering with a data-driven cluster count: ISODATA with user
//! thresholds, and AGMFI, which derives its merge threshold from the current
//! centroid geometry and alternates merge and split phases around K-Means
//! passes. EIAGMFI is AGMFI seeded by CCIA.

use crate::error::{Error, Result};
use crate::kmeans::{
    assign_nearest, check_k, drop_empty_clusters, euclidean_distance, lloyd, squared_distance,
    Assignment, CentroidSet, ClusteringResult, Init, KMeansParams,
};
use crate::matrix::ExpressionMatrix;
use crate::seeding::ccia_seed;

/// One structural change made by an adaptive run. Cluster indices refer to
/// the numbering at the moment the change was made.
#[derive(Debug, Clone, PartialEq)]
pub enum AdaptiveEvent {
    Discarded {
        iteration: usize,
        cluster: usize,
        size: usize,
    },
    Split {
        iteration: usize,
        cluster: usize,
        dimension: usize,
        std: f64,
    },
    Merged {
        iteration: usize,
        first: usize,
        second: usize,
        distance: f64,
        threshold: f64,
    },
}

impl AdaptiveEvent {
    pub fn is_split(&self) -> bool {
        matches!(self, AdaptiveEvent::Split { .. })
    }

    pub fn is_merge(&self) -> bool {
        matches!(self, AdaptiveEvent::Merged { .. })
    }

    pub fn is_discard(&self) -> bool {
        matches!(self, AdaptiveEvent::Discarded { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsodataParams {
    pub k_init: usize,
    /// Clusters with fewer members are discarded.
    pub theta_n: usize,
    /// Split when some per-dimension standard deviation exceeds this.
    pub theta_s: f64,
    /// Merge centroid pairs closer than this.
    pub theta_c: f64,
    pub max_iter: usize,
    pub lloyd: KMeansParams,
}

impl Default for IsodataParams {
    fn default() -> Self {
        Self {
            k_init: 10,
            theta_n: 2,
            theta_s: 1.0,
            theta_c: 1.0,
            max_iter: 20,
            lloyd: KMeansParams::default(),
        }
    }
}

impl IsodataParams {
    pub fn validate(&self) -> Result<()> {
        if self.k_init == 0 {
            return Err(Error::InvalidParameter("k_init must be >= 1".into()));
        }
        if self.theta_n == 0 {
            return Err(Error::InvalidParameter("theta_n must be >= 1".into()));
        }
        if self.theta_s.is_nan() || self.theta_s <= 0.0 {
            return Err(Error::InvalidParameter("theta_s must be > 0".into()));
        }
        if self.theta_c.is_nan() || self.theta_c < 0.0 {
            return Err(Error::InvalidParameter("theta_c must be >= 0".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        self.lloyd.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgmfiParams {
    pub k_init: usize,
    /// Clusters with fewer members are discarded.
    pub min_cluster_size: usize,
    /// Outer merge/split iterations.
    pub max_iter: usize,
    /// A cluster splits when its standard deviation along some dimension
    /// exceeds this multiple of the whole dataset's deviation there.
    pub split_factor: f64,
    /// Merge threshold as a multiple of the mean pairwise centroid distance.
    pub merge_multiplier: f64,
    pub lloyd: KMeansParams,
}

impl Default for AgmfiParams {
    fn default() -> Self {
        Self {
            k_init: 10,
            min_cluster_size: 2,
            max_iter: 20,
            split_factor: 1.0,
            merge_multiplier: 0.5,
            lloyd: KMeansParams::default(),
        }
    }
}

impl AgmfiParams {
    pub fn validate(&self) -> Result<()> {
        if self.k_init == 0 {
            return Err(Error::InvalidParameter("k_init must be >= 1".into()));
        }
        if self.min_cluster_size == 0 {
            return Err(Error::InvalidParameter(
                "min_cluster_size must be >= 1".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if self.split_factor.is_nan() || self.split_factor <= 0.0 {
            return Err(Error::InvalidParameter("split_factor must be > 0".into()));
        }
        if self.merge_multiplier.is_nan() || self.merge_multiplier < 0.0 {
            return Err(Error::InvalidParameter(
                "merge_multiplier must be >= 0".into(),
            ));
        }
        self.lloyd.validate()
    }
}

/// Population standard deviation of the members along every dimension.
pub fn member_std(data: &ExpressionMatrix, members: &[usize]) -> Vec<f64> {
    let m = data.m();
    let len = members.len() as f64;
    let mut mean = vec![0.0; m];
    for &i in members {
        for (acc, v) in mean.iter_mut().zip(data.row(i)) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= len);
    let mut var = vec![0.0; m];
    for &i in members {
        for ((acc, v), mu) in var.iter_mut().zip(data.row(i)).zip(&mean) {
            *acc += (v - mu) * (v - mu);
        }
    }
    var.into_iter().map(|s| (s / len).sqrt()).collect()
}

/// Dimension of largest spread, lowest index on ties.
fn widest_dimension(stds: &[f64]) -> (usize, f64) {
    stds.iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (j, s)| {
            if s > best.1 {
                (j, s)
            } else {
                best
            }
        })
}

/// Two child centers at `center ± 0.5·σ` along the member dimension with
/// the largest standard deviation σ.
pub fn split_cluster(
    data: &ExpressionMatrix,
    members: &[usize],
    center: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if members.len() < 2 {
        return Err(Error::TooFewMembers(members.len()));
    }
    if center.len() != data.m() {
        return Err(Error::DimensionMismatch {
            expected: data.m(),
            found: center.len(),
        });
    }
    let (j, sigma) = widest_dimension(&member_std(data, members));
    Ok(split_along(center, j, sigma))
}

fn split_along(center: &[f64], dimension: usize, sigma: f64) -> (Vec<f64>, Vec<f64>) {
    let mut low = center.to_vec();
    let mut high = center.to_vec();
    low[dimension] -= 0.5 * sigma;
    high[dimension] += 0.5 * sigma;
    (low, high)
}

/// Replaces centers `i` and `j` by their size-weighted mean, stored at the
/// lower of the two indices. Other centers keep their relative order.
pub fn merge_clusters(
    centroids: &CentroidSet,
    i: usize,
    j: usize,
    sizes: &[usize],
) -> Result<CentroidSet> {
    let k = centroids.k();
    if i == j || i >= k || j >= k {
        return Err(Error::InvalidMerge { i, j, k });
    }
    if sizes.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: sizes.len(),
        });
    }
    if k < 2 {
        return Err(Error::TooFewClusters {
            needed: 2,
            found: k,
        });
    }
    let mut rows = centroids.to_rows();
    let merged = weighted_mean(&rows[i], sizes[i], &rows[j], sizes[j]);
    let (lo, hi) = (i.min(j), i.max(j));
    rows[lo] = merged;
    rows.remove(hi);
    CentroidSet::from_rows(&rows)
}

fn weighted_mean(a: &[f64], wa: usize, b: &[f64], wb: usize) -> Vec<f64> {
    let (wa, wb) = if wa + wb == 0 {
        (1.0, 1.0)
    } else {
        (wa as f64, wb as f64)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (wa * x + wb * y) / (wa + wb))
        .collect()
}

/// Mean of all pairwise centroid distances.
pub fn auto_merge_factor(centroids: &CentroidSet) -> Result<f64> {
    let k = centroids.k();
    if k < 2 {
        return Err(Error::TooFewClusters {
            needed: 2,
            found: k,
        });
    }
    let mut total = 0.0;
    for a in 0..k {
        for b in a + 1..k {
            total += euclidean_distance(centroids.center(a), centroids.center(b))?;
        }
    }
    Ok(total / (k * (k - 1) / 2) as f64)
}

/// Mutable per-iteration view of the clustering.
struct Working {
    centers: Vec<Vec<f64>>,
    sizes: Vec<usize>,
    assignment: Assignment,
    /// Centers created by a split during the current iteration.
    fresh: Vec<bool>,
}

impl Working {
    fn from_result(result: &ClusteringResult) -> Self {
        let k = result.centroids.k();
        Self {
            centers: result.centroids.to_rows(),
            sizes: result.assignment.sizes(),
            assignment: result.assignment.clone(),
            fresh: vec![false; k],
        }
    }

    fn k(&self) -> usize {
        self.centers.len()
    }

    fn centroid_set(&self) -> Result<CentroidSet> {
        CentroidSet::from_rows(&self.centers)
    }

    /// Removes clusters smaller than `min_size` and reassigns their points
    /// to the nearest survivor.
    fn discard_small(
        &mut self,
        data: &ExpressionMatrix,
        min_size: usize,
        iteration: usize,
        events: &mut Vec<AdaptiveEvent>,
    ) -> Result<()> {
        if self.sizes.iter().all(|&s| s >= min_size) {
            return Ok(());
        }
        let mut kept = Vec::new();
        for (c, center) in self.centers.iter().enumerate() {
            if self.sizes[c] >= min_size {
                kept.push(center.clone());
            } else {
                events.push(AdaptiveEvent::Discarded {
                    iteration,
                    cluster: c,
                    size: self.sizes[c],
                });
            }
        }
        if kept.is_empty() {
            return Err(Error::AllClustersDiscarded);
        }
        self.centers = kept;
        self.fresh = vec![false; self.centers.len()];
        let (assignment, _) = assign_nearest(data, &self.centroid_set()?)?;
        self.sizes = assignment.sizes();
        self.assignment = assignment;
        Ok(())
    }

    /// Merges the currently closest eligible pair while it is closer than
    /// `threshold`, at most `max_merges` times. Returns the merge count.
    fn merge_close(
        &mut self,
        threshold: f64,
        max_merges: usize,
        iteration: usize,
        events: &mut Vec<AdaptiveEvent>,
    ) -> usize {
        let mut merges = 0;
        while merges < max_merges && self.k() >= 2 {
            let mut best: Option<(usize, usize, f64)> = None;
            for a in 0..self.k() {
                if self.fresh[a] {
                    continue;
                }
                for b in a + 1..self.k() {
                    if self.fresh[b] {
                        continue;
                    }
                    let d2 = squared_distance(&self.centers[a], &self.centers[b]);
                    if best.is_none_or(|(_, _, bd)| d2 < bd) {
                        best = Some((a, b, d2));
                    }
                }
            }
            let Some((a, b, d2)) = best else { break };
            let distance = d2.sqrt();
            if distance >= threshold || distance.is_nan() {
                break;
            }
            let merged = weighted_mean(
                &self.centers[a],
                self.sizes[a],
                &self.centers[b],
                self.sizes[b],
            );
            events.push(AdaptiveEvent::Merged {
                iteration,
                first: a,
                second: b,
                distance,
                threshold,
            });
            self.centers[a] = merged;
            self.sizes[a] += self.sizes[b];
            self.centers.remove(b);
            self.sizes.remove(b);
            self.fresh.remove(b);
            merges += 1;
        }
        merges
    }

    /// Splits every cluster accepted by `should_split` along its widest
    /// dimension, as long as the cluster count stays within `max_k`.
    fn split_wide<F>(
        &mut self,
        data: &ExpressionMatrix,
        min_members: usize,
        max_k: usize,
        iteration: usize,
        events: &mut Vec<AdaptiveEvent>,
        should_split: F,
    ) where
        F: Fn(&[f64]) -> bool,
    {
        let mut live_k = self.k();
        let mut centers = Vec::with_capacity(2 * self.k());
        let mut sizes = Vec::with_capacity(2 * self.k());
        let mut fresh = Vec::with_capacity(2 * self.k());
        for (c, center) in self.centers.iter().enumerate() {
            let size = self.sizes[c];
            if live_k < max_k && size >= min_members.max(2) {
                let members = self.assignment.members(c);
                let stds = member_std(data, &members);
                if should_split(&stds) {
                    let (dimension, std) = widest_dimension(&stds);
                    let (low, high) = split_along(center, dimension, std);
                    events.push(AdaptiveEvent::Split {
                        iteration,
                        cluster: c,
                        dimension,
                        std,
                    });
                    centers.push(low);
                    centers.push(high);
                    sizes.push(size / 2);
                    sizes.push(size - size / 2);
                    fresh.push(true);
                    fresh.push(true);
                    live_k += 1;
                    continue;
                }
            }
            centers.push(center.clone());
            sizes.push(size);
            fresh.push(false);
        }
        self.centers = centers;
        self.sizes = sizes;
        self.fresh = fresh;
    }
}

fn finish(
    mut result: ClusteringResult,
    events: Vec<AdaptiveEvent>,
    iterations: usize,
) -> ClusteringResult {
    let (assignment, centroids) = drop_empty_clusters(&result.assignment, &result.centroids);
    result.final_k = centroids.k();
    result.assignment = assignment;
    result.centroids = centroids;
    result.events = events;
    result.iterations = iterations;
    result
}

/// ISODATA: K-Means to stability, then per iteration discard clusters below
/// `theta_n`, split clusters wider than `theta_s` (if they hold at least
/// `2·theta_n` points), and merge centroid pairs closer than `theta_c` (at
/// most ⌊K/2⌋ merges, split children excluded). Stops after an iteration
/// with no structural change.
pub fn isodata(
    data: &ExpressionMatrix,
    params: &IsodataParams,
    init: &Init,
) -> Result<ClusteringResult> {
    params.validate()?;
    check_k(params.k_init, data.n())?;
    let start = init.resolve(data, params.k_init)?;
    let mut result = lloyd(data, start, &params.lloyd)?;
    let mut iterations = result.iterations;
    let mut events = Vec::new();

    for t in 1..=params.max_iter {
        let before = events.len();
        let mut w = Working::from_result(&result);
        w.discard_small(data, params.theta_n, t, &mut events)?;
        let theta_s = params.theta_s;
        w.split_wide(
            data,
            2 * params.theta_n,
            usize::MAX,
            t,
            &mut events,
            |stds| widest_dimension(stds).1 > theta_s,
        );
        let max_merges = w.k() / 2;
        w.merge_close(params.theta_c, max_merges, t, &mut events);

        if events.len() == before {
            break;
        }
        result = lloyd(data, w.centroid_set()?, &params.lloyd)?;
        iterations += result.iterations;
    }
    Ok(finish(result, events, iterations))
}

/// AGMFI. After an initial K-Means pass, each outer iteration t computes the
/// merge factor `C = merge_multiplier · mean pairwise centroid distance`,
/// discards clusters below `min_cluster_size`, then merges pairs closer than
/// C on even t (at most ⌊K/2⌋) or splits clusters whose spread along some
/// dimension exceeds `split_factor` times the dataset's spread there on odd
/// t, and re-runs K-Means from the resulting centers. Splits never push the
/// count above `2·k_init`. Stops once a merge phase and a split phase in a
/// row change nothing.
pub fn agmfi(
    data: &ExpressionMatrix,
    params: &AgmfiParams,
    init: &Init,
) -> Result<ClusteringResult> {
    params.validate()?;
    check_k(params.k_init, data.n())?;
    let start = init.resolve(data, params.k_init)?;
    let mut result = lloyd(data, start, &params.lloyd)?;
    let mut iterations = result.iterations;
    let mut events = Vec::new();
    let data_std = data.column_std();
    let max_k = 2 * params.k_init;
    let mut quiet = 0;

    for t in 1..=params.max_iter {
        let before = events.len();
        let merge_factor = if result.centroids.k() >= 2 {
            params.merge_multiplier * auto_merge_factor(&result.centroids)?
        } else {
            0.0
        };
        let mut w = Working::from_result(&result);
        w.discard_small(data, params.min_cluster_size, t, &mut events)?;
        if t % 2 == 0 {
            let max_merges = w.k() / 2;
            w.merge_close(merge_factor, max_merges, t, &mut events);
        } else {
            let factor = params.split_factor;
            w.split_wide(
                data,
                2 * params.min_cluster_size,
                max_k,
                t,
                &mut events,
                |stds| stds.iter().zip(&data_std).any(|(s, d)| *s > factor * d),
            );
        }

        if events.len() == before {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
            continue;
        }
        quiet = 0;
        result = lloyd(data, w.centroid_set()?, &params.lloyd)?;
        iterations += result.iterations;
    }
    Ok(finish(result, events, iterations))
}

/// AGMFI seeded with CCIA centroids instead of random rows.
pub fn eiagmfi(data: &ExpressionMatrix, params: &AgmfiParams) -> Result<ClusteringResult> {
    params.validate()?;
    let seeds = ccia_seed(data, params.k_init)?;
    agmfi(data, params, &Init::Centroids(seeds))
}
