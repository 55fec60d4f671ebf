#![allow(dead_code, clippy::needless_range_loop)]

//! Reference implementations written independently of the library code
//! paths they check.

use genecluster::ExpressionMatrix;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

pub fn rows(mat: &ExpressionMatrix) -> Vec<Vec<f64>> {
    (0..mat.n()).map(|i| mat.row(i).to_vec()).collect()
}

/// O(n²·K) silhouette straight from the definition.
pub fn naive_silhouette(points: &[Vec<f64>], labels: &[usize], k: usize) -> Vec<f64> {
    let n = points.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut mean_to = vec![None; k];
        for c in 0..k {
            let mut total = 0.0;
            let mut count = 0usize;
            for j in 0..n {
                if j != i && labels[j] == c {
                    total += dist(&points[i], &points[j]);
                    count += 1;
                }
            }
            if count > 0 {
                mean_to[c] = Some(total / count as f64);
            }
        }
        let own = labels[i];
        let own_size = labels.iter().filter(|&&l| l == own).count();
        if own_size == 1 {
            out.push(0.0);
            continue;
        }
        let a = mean_to[own].unwrap();
        let mut b = f64::INFINITY;
        for c in 0..k {
            if c != own {
                if let Some(v) = mean_to[c] {
                    if v < b {
                        b = v;
                    }
                }
            }
        }
        let s = if a.max(b) == 0.0 {
            0.0
        } else {
            (b - a) / a.max(b)
        };
        out.push(s);
    }
    out
}

pub fn brute_means(points: &[Vec<f64>], labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let m = points[0].len();
    (0..k)
        .map(|c| {
            let members: Vec<&Vec<f64>> = points
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == c)
                .map(|(p, _)| p)
                .collect();
            (0..m)
                .map(|j| members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64)
                .collect()
        })
        .collect()
}

/// Closest-pair group seeding transcribed step by step: a shrinking working
/// set, full pair rescans and single-linkage point-to-group distance.
pub fn literal_ccia(points: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let n = points.len();
    let target = (0.75 * n as f64 / k as f64).ceil() as usize;
    let mut pool: Vec<usize> = (0..n).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for _ in 0..k {
        let mut best = (0, 1, f64::INFINITY);
        for a in 0..pool.len() {
            for b in a + 1..pool.len() {
                let d = dist(&points[pool[a]], &points[pool[b]]);
                if d < best.2 {
                    best = (a, b, d);
                }
            }
        }
        let mut group = vec![pool[best.0], pool[best.1]];
        pool.remove(best.1);
        pool.remove(best.0);
        while group.len() < target && !pool.is_empty() {
            let mut pick = (0, f64::INFINITY);
            for (a, &p) in pool.iter().enumerate() {
                let d = group
                    .iter()
                    .map(|&g| dist(&points[p], &points[g]))
                    .fold(f64::INFINITY, f64::min);
                if d < pick.1 {
                    pick = (a, d);
                }
            }
            group.push(pool.remove(pick.0));
        }
        groups.push(group);
    }
    groups
        .iter()
        .map(|g| {
            let labels = vec![0; g.len()];
            let pts: Vec<Vec<f64>> = g.iter().map(|&i| points[i].clone()).collect();
            brute_means(&pts, &labels, 1).remove(0)
        })
        .collect()
}

/// Deterministic pseudo-random values in [-1, 1) for fixture data.
pub fn lcg_points(n: usize, m: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    (0..n).map(|_| (0..m).map(|_| next()).collect()).collect()
}
