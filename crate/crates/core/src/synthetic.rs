//! Seeded Gaussian-blob benchmark data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::kmeans::{euclidean_distance, Assignment};
use crate::matrix::ExpressionMatrix;

/// Parameters of an isotropic Gaussian mixture with equal-size components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub k_true: usize,
    pub points_per_cluster: usize,
    pub dims: usize,
    /// Minimum distance between any two generating centers.
    pub separation: f64,
    /// Per-coordinate standard deviation inside a cluster.
    pub spread: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    /// 5 clusters of 60 genes over 17 conditions, 8 spreads apart.
    fn default() -> Self {
        Self {
            k_true: 5,
            points_per_cluster: 60,
            dims: 17,
            separation: 8.0,
            spread: 1.0,
            seed: 0,
        }
    }
}

const ATTEMPTS_PER_SCALE: usize = 1000;

/// Generates the mixture and its ground-truth labels. Rows are grouped by
/// cluster and labelled `g0`, `g1`, ...; the output depends only on `spec`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<(ExpressionMatrix, Assignment)> {
    let centers = generating_centers(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x005e_ed0f_da7a);
    let n = spec.k_true * spec.points_per_cluster;
    let mut data = Vec::with_capacity(n * spec.dims);
    let mut labels = Vec::with_capacity(n);
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..spec.points_per_cluster {
            for &mu in center {
                let z: f64 = rng.sample(StandardNormal);
                data.push(mu + spec.spread * z);
            }
            labels.push(c);
        }
    }
    let names = (0..n).map(|i| format!("g{i}")).collect();
    let mat = ExpressionMatrix::new(names, data, spec.dims)?;
    Ok((mat, Assignment::new(labels, spec.k_true)?))
}

/// Generating centers, drawn uniformly from a cube by rejection so every
/// pair is at least `separation` apart. The cube starts at a side where a
/// random pair lands about 1.5 separations apart and grows 10% whenever
/// placement stalls.
pub fn generating_centers(spec: &SyntheticSpec) -> Result<Vec<Vec<f64>>> {
    if spec.k_true == 0 || spec.points_per_cluster == 0 || spec.dims == 0 {
        return Err(Error::InvalidParameter(
            "cluster count, cluster size and dimension must all be >= 1".into(),
        ));
    }
    if !(spec.separation > 0.0 && spec.separation.is_finite()) {
        return Err(Error::InvalidParameter("separation must be > 0".into()));
    }
    if !(spec.spread > 0.0 && spec.spread.is_finite()) {
        return Err(Error::InvalidParameter("spread must be > 0".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // E|x - y| for uniform points in a unit cube is about sqrt(dims / 6).
    let mut side = 1.5 * spec.separation / (spec.dims as f64 / 6.0).sqrt();
    'scale: loop {
        let mut centers: Vec<Vec<f64>> = Vec::with_capacity(spec.k_true);
        let mut attempts = 0;
        while centers.len() < spec.k_true {
            if attempts == ATTEMPTS_PER_SCALE {
                side *= 1.1;
                continue 'scale;
            }
            attempts += 1;
            let candidate: Vec<f64> = (0..spec.dims)
                .map(|_| rng.random_range(0.0..side))
                .collect();
            let far_enough = centers
                .iter()
                .all(|c| euclidean_distance(c, &candidate).unwrap() >= spec.separation);
            if far_enough {
                centers.push(candidate);
                attempts = 0;
            }
        }
        return Ok(centers);
    }
}
