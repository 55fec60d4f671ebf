//! Silhouette validation and the ×100 quality score used in comparison
//! tables.

use crate::error::{Error, Result};
use crate::kmeans::{squared_distance, Assignment};
use crate::matrix::ExpressionMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    /// Silhouette of every point, in [-1, 1].
    pub per_point: Vec<f64>,
    /// Mean silhouette per cluster; 0 for clusters without members.
    pub per_cluster_mean: Vec<f64>,
    /// Mean of `per_point`.
    pub overall: f64,
    /// `100 × overall`.
    pub scaled_score: f64,
}

/// Silhouette of every point: `(b - a) / max(a, b)`, where `a` is the mean
/// distance to the other members of its own cluster and `b` the smallest
/// mean distance to another nonempty cluster. Points in singleton clusters
/// score 0.
pub fn silhouette(data: &ExpressionMatrix, assignment: &Assignment) -> Result<QualityReport> {
    let n = data.n();
    if assignment.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: assignment.len(),
        });
    }
    let k = assignment.k();
    let sizes = assignment.sizes();
    let nonempty = sizes.iter().filter(|&&s| s > 0).count();
    if nonempty < 2 {
        return Err(Error::TooFewClusters {
            needed: 2,
            found: nonempty,
        });
    }
    let labels = assignment.labels();

    // sums[i * k + c]: total distance from point i to the members of c
    let mut sums = vec![0.0; n * k];
    for i in 0..n {
        let xi = data.row(i);
        for j in i + 1..n {
            let d = squared_distance(xi, data.row(j)).sqrt();
            sums[i * k + labels[j]] += d;
            sums[j * k + labels[i]] += d;
        }
    }

    let per_point: Vec<f64> = (0..n)
        .map(|i| {
            let own = labels[i];
            if sizes[own] <= 1 {
                return 0.0;
            }
            let row = &sums[i * k..(i + 1) * k];
            let a = row[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| row[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let scale = a.max(b);
            if scale > 0.0 {
                ((b - a) / scale).clamp(-1.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();

    let mut cluster_sum = vec![0.0; k];
    for (&s, &l) in per_point.iter().zip(labels) {
        cluster_sum[l] += s;
    }
    let per_cluster_mean = cluster_sum
        .iter()
        .zip(&sizes)
        .map(|(&s, &size)| if size > 0 { s / size as f64 } else { 0.0 })
        .collect();
    let overall = per_point.iter().sum::<f64>() / n as f64;
    Ok(QualityReport {
        per_point,
        per_cluster_mean,
        overall,
        scaled_score: 100.0 * overall,
    })
}

pub fn quality_score(report: &QualityReport) -> f64 {
    report.scaled_score
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_blobs() {
        let data = ExpressionMatrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
            .unwrap();
        let a = Assignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let r = silhouette(&data, &a).unwrap();
        let b = (10.0 + 101f64.sqrt()) / 2.0;
        let expected = (b - 1.0) / b;
        for s in &r.per_point {
            assert!((s - expected).abs() < 1e-12);
        }
        assert!((expected - 0.9002).abs() < 1e-4);
        assert!((r.overall - expected).abs() < 1e-12);
        assert!((quality_score(&r) - 100.0 * expected).abs() < 1e-9);
    }

    #[test]
    fn singleton_scores_zero() {
        let data = ExpressionMatrix::from_rows(&[[0.0], [1.0], [50.0]]).unwrap();
        let a = Assignment::new(vec![0, 0, 1], 2).unwrap();
        let r = silhouette(&data, &a).unwrap();
        assert_eq!(r.per_point[2], 0.0);
        assert_eq!(r.per_cluster_mean[1], 0.0);
    }

    #[test]
    fn needs_two_clusters() {
        let data = ExpressionMatrix::from_rows(&[[0.0], [1.0]]).unwrap();
        let a = Assignment::new(vec![1, 1], 3).unwrap();
        assert!(matches!(
            silhouette(&data, &a),
            Err(Error::TooFewClusters { found: 1, .. })
        ));
    }

    #[test]
    fn scaling_examples() {
        let report = |overall: f64| QualityReport {
            per_point: vec![],
            per_cluster_mean: vec![],
            overall,
            scaled_score: 100.0 * overall,
        };
        assert_eq!(quality_score(&report(0.5)), 50.0);
        assert!((quality_score(&report(-0.17162)) + 17.162).abs() < 1e-12);
        assert_eq!(quality_score(&report(0.0)), 0.0);
    }
}
