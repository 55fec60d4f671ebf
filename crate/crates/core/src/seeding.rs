//! Cluster Centre Initialization Algorithm (CCIA): deterministic seeding
//! from groups grown around globally closest pairs.
//!
//! Each group starts from the closest pair still in the pool and absorbs
//! the pooled point nearest to any of its members until it holds
//! `ceil(0.75 * n / k)` points, or stops early when the pool must keep two
//! points for each group not yet founded. The seeds are the group means.
//! Grouped points only shape the seeds; the clustering that follows still
//! uses every row.

use crate::error::{Error, Result};
use crate::kmeans::{squared_distance, CentroidSet};
use crate::matrix::ExpressionMatrix;

/// Row indices of each seed group, in creation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedGroups {
    pub groups: Vec<Vec<usize>>,
    /// Rows removed from the pool across all groups.
    pub consumed: usize,
}

/// Size each group grows to before the next one is founded.
pub fn group_target(n: usize, k: usize) -> usize {
    // ceil(0.75 * n / k) without going through floating point
    (3 * n).div_ceil(4 * k)
}

pub fn ccia_groups(data: &ExpressionMatrix, k: usize) -> Result<SeedGroups> {
    let n = data.n();
    if k == 0 {
        return Err(Error::InvalidK { k, n });
    }
    if n < 2 * k {
        return Err(Error::InsufficientPoints { n, k });
    }
    let target = group_target(n, k);
    let mut in_pool = vec![true; n];
    let mut remaining = n;
    let mut groups = Vec::with_capacity(k);
    // Squared single-linkage distance from each pooled point to the group
    // currently being grown.
    let mut to_group = vec![f64::INFINITY; n];

    for g in 0..k {
        // keep a founding pair for every group still to come
        let reserve = 2 * (k - g - 1);
        let founders = match remaining {
            0 => return Err(Error::InsufficientPoints { n, k }),
            1 => vec![in_pool.iter().position(|&p| p).unwrap()],
            _ => {
                let (i, j) = closest_pair(data, &in_pool);
                vec![i, j]
            }
        };
        let mut group = Vec::with_capacity(target.max(founders.len()));
        to_group.iter_mut().for_each(|d| *d = f64::INFINITY);
        for &f in &founders {
            in_pool[f] = false;
            remaining -= 1;
            group.push(f);
            absorb_distances(data, &in_pool, &mut to_group, f);
        }
        while group.len() < target && remaining > reserve {
            let next = nearest_pooled(&in_pool, &to_group);
            in_pool[next] = false;
            remaining -= 1;
            group.push(next);
            absorb_distances(data, &in_pool, &mut to_group, next);
        }
        groups.push(group);
    }

    Ok(SeedGroups {
        groups,
        consumed: n - remaining,
    })
}

pub fn ccia_seed(data: &ExpressionMatrix, k: usize) -> Result<CentroidSet> {
    let groups = ccia_groups(data, k)?;
    group_means(data, &groups)
}

pub fn group_means(data: &ExpressionMatrix, groups: &SeedGroups) -> Result<CentroidSet> {
    let m = data.m();
    let mut centers = Vec::with_capacity(groups.groups.len() * m);
    for group in &groups.groups {
        let mut mean = vec![0.0; m];
        for &i in group {
            for (acc, v) in mean.iter_mut().zip(data.row(i)) {
                *acc += v;
            }
        }
        let len = group.len() as f64;
        centers.extend(mean.into_iter().map(|s| s / len));
    }
    CentroidSet::new(centers, m)
}

/// Closest pooled pair; ties resolve to the lexicographically lowest (i, j).
fn closest_pair(data: &ExpressionMatrix, in_pool: &[bool]) -> (usize, usize) {
    let pooled: Vec<usize> = (0..in_pool.len()).filter(|&i| in_pool[i]).collect();
    let mut best = (pooled[0], pooled[1], f64::INFINITY);
    for (a, &i) in pooled.iter().enumerate() {
        let xi = data.row(i);
        for &j in &pooled[a + 1..] {
            let d2 = squared_distance(xi, data.row(j));
            if d2 < best.2 {
                best = (i, j, d2);
            }
        }
    }
    (best.0, best.1)
}

fn absorb_distances(
    data: &ExpressionMatrix,
    in_pool: &[bool],
    to_group: &mut [f64],
    member: usize,
) {
    let x = data.row(member);
    for (i, d) in to_group.iter_mut().enumerate() {
        if in_pool[i] {
            *d = d.min(squared_distance(x, data.row(i)));
        }
    }
}

fn nearest_pooled(in_pool: &[bool], to_group: &[f64]) -> usize {
    let mut best = (usize::MAX, f64::INFINITY);
    for (i, &d) in to_group.iter().enumerate() {
        if in_pool[i] && (best.0 == usize::MAX || d < best.1) {
            best = (i, d);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_blobs() -> ExpressionMatrix {
        ExpressionMatrix::from_rows(&[
            [0.0, 0.0],
            [0.0, 1.0],
            [10.0, 0.0],
            [10.0, 1.0],
            [5.0, 5.0],
            [5.0, 6.0],
        ])
        .unwrap()
    }

    #[test]
    fn target_is_rounded_up() {
        assert_eq!(group_target(6, 3), 2);
        assert_eq!(group_target(300, 10), 23);
        assert_eq!(group_target(10, 1), 8);
        assert_eq!(group_target(14, 5), 3);
    }

    #[test]
    fn three_blobs_give_natural_pairs() {
        let data = three_blobs();
        let g = ccia_groups(&data, 3).unwrap();
        // All three pairs are at distance 1; lexicographic tie-break founds
        // them in row order.
        assert_eq!(g.groups, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(g.consumed, 6);
        let c = ccia_seed(&data, 3).unwrap();
        assert_eq!(
            c.to_rows(),
            vec![vec![0.0, 0.5], vec![10.0, 0.5], vec![5.0, 5.5]]
        );
    }

    #[test]
    fn single_group_takes_three_quarters() {
        let data =
            ExpressionMatrix::from_rows(&[[0.0], [1.0], [3.0], [6.0], [10.0], [15.0]]).unwrap();
        let g = ccia_groups(&data, 1).unwrap();
        // target ceil(4.5) = 5: pair {0,1}, then 3, 6, 10 by single linkage
        assert_eq!(g.groups, vec![vec![0, 1, 2, 3, 4]]);
        let c = ccia_seed(&data, 1).unwrap();
        assert_eq!(c.center(0), &[4.0]);
    }

    #[test]
    fn doubled_points_found_zero_distance_pairs() {
        let data = ExpressionMatrix::from_rows(&[[0.0], [5.0], [0.0], [5.0]]).unwrap();
        let g = ccia_groups(&data, 2).unwrap();
        assert_eq!(g.groups, vec![vec![0, 2], vec![1, 3]]);
        let c = ccia_seed(&data, 2).unwrap();
        assert_eq!(c.to_rows(), vec![vec![0.0], vec![5.0]]);
    }

    #[test]
    fn too_few_points() {
        let data = three_blobs();
        assert!(matches!(
            ccia_seed(&data, 4),
            Err(Error::InsufficientPoints { n: 6, k: 4 })
        ));
        assert!(matches!(ccia_seed(&data, 0), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn pool_never_runs_dry_when_n_at_least_2k() {
        for n in 2..80usize {
            let rows: Vec<[f64; 1]> = (0..n).map(|i| [((i * 37) % 101) as f64]).collect();
            let data = ExpressionMatrix::from_rows(&rows).unwrap();
            for k in 1..=n / 2 {
                let g = ccia_groups(&data, k).unwrap();
                assert_eq!(g.groups.len(), k);
                assert!(g.consumed <= n);
            }
        }
    }
}
