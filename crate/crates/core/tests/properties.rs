mod common;

use common::*;
use genecluster::*;
use proptest::prelude::*;

fn matrix(
    n: std::ops::Range<usize>,
    m: std::ops::Range<usize>,
) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (n, m)
        .prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec(-50.0..50.0f64, m), n))
}

fn well_separated(seed: u64) -> (ExpressionMatrix, Vec<Vec<f64>>, SyntheticSpec) {
    let spec = SyntheticSpec {
        k_true: 4,
        points_per_cluster: 40,
        dims: 5,
        separation: 20.0,
        spread: 1.0,
        seed,
    };
    let (data, _) = generate_synthetic(&spec).unwrap();
    let centers = genecluster::synthetic::generating_centers(&spec).unwrap();
    (data, centers, spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zscore_rows_are_standardized(rows in matrix(1..20, 2..12)) {
        let data = ExpressionMatrix::from_rows(&rows).unwrap();
        prop_assume!(rows.iter().all(|r| r.iter().any(|v| *v != r[0])));
        let z = zscore_normalize(&data).unwrap();
        for row in z.rows() {
            let m = row.len() as f64;
            let mean = row.iter().sum::<f64>() / m;
            let std = (row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m).sqrt();
            prop_assert!(mean.abs() < 1e-12);
            prop_assert!((std - 1.0).abs() < 1e-12);
        }
        let twice = zscore_normalize(&z).unwrap();
        for (a, b) in z.data().iter().zip(twice.data()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn drop_missing_keeps_order(mask in prop::collection::vec(any::<bool>(), 1..30)) {
        let rows: Vec<RawRow> = mask
            .iter()
            .enumerate()
            .map(|(i, &missing)| RawRow {
                label: format!("g{i}"),
                values: vec![Some(i as f64), if missing { None } else { Some(1.0) }],
            })
            .collect();
        let raw = RawMatrix::new(rows, 2).unwrap();
        match drop_missing_rows(&raw) {
            Ok(mat) => {
                let expected: Vec<String> = mask
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| !m)
                    .map(|(i, _)| format!("g{i}"))
                    .collect();
                prop_assert_eq!(mat.labels(), &expected[..]);
                prop_assert!(mat.n() <= raw.n());
            }
            Err(Error::AllRowsDropped) => prop_assert!(mask.iter().all(|&m| m)),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn distance_is_a_metric(x in prop::collection::vec(-10.0..10.0f64, 4), y in prop::collection::vec(-10.0..10.0f64, 4)) {
        let d = euclidean_distance(&x, &y).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d, euclidean_distance(&y, &x).unwrap());
        prop_assert_eq!(euclidean_distance(&x, &x).unwrap(), 0.0);
        prop_assert!((d - dist(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn kmeans_invariants(rows in matrix(3..60, 1..5), k in 1usize..6, seed in any::<u64>()) {
        let data = ExpressionMatrix::from_rows(&rows).unwrap();
        prop_assume!(k <= data.n());
        let params = KMeansParams::default();
        let r = kmeans(&data, k, &Init::Random { seed }, &params).unwrap();
        for w in r.objective_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
        prop_assert_eq!(r.final_k, k);
        prop_assert_eq!(r.centroids.k(), k);
        if r.iterations < params.max_iter {
            for (i, row) in data.rows().enumerate() {
                let (_, best) = nearest_centroid(row, &r.centroids).unwrap();
                let assigned = euclidean_distance(row, r.centroids.center(r.assignment.labels()[i])).unwrap();
                prop_assert!(assigned <= best + 1e-9);
            }
        }
        let again = kmeans(&data, k, &Init::Random { seed }, &params).unwrap();
        prop_assert_eq!(r, again);
    }

    #[test]
    fn kmeans_is_row_order_independent(rows in matrix(4..30, 1..4), shift in 1usize..29) {
        let data = ExpressionMatrix::from_rows(&rows).unwrap();
        let n = data.n();
        let k = 3.min(n);
        let init = Init::Centroids(CentroidSet::from_rows(&rows[..k]).unwrap());
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = ExpressionMatrix::from_rows(&perm.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>()).unwrap();
        let a = kmeans(&data, k, &init, &KMeansParams::default()).unwrap();
        let b = kmeans(&permuted, k, &init, &KMeansParams::default()).unwrap();
        for (pos, &orig) in perm.iter().enumerate() {
            prop_assert_eq!(b.assignment.labels()[pos], a.assignment.labels()[orig]);
        }
    }

    #[test]
    fn ccia_is_deterministic_and_disjoint(rows in matrix(2..40, 1..4), k in 1usize..8) {
        let data = ExpressionMatrix::from_rows(&rows).unwrap();
        prop_assume!(data.n() >= 2 * k);
        let g = ccia_groups(&data, k).unwrap();
        prop_assert_eq!(g.groups.len(), k);
        let mut seen = vec![false; data.n()];
        let mut total = 0;
        for group in &g.groups {
            prop_assert!(!group.is_empty());
            for &i in group {
                prop_assert!(!seen[i]);
                seen[i] = true;
                total += 1;
            }
        }
        prop_assert!(total <= data.n());
        prop_assert_eq!(total, g.consumed);
        let a = ccia_seed(&data, k).unwrap();
        let b = ccia_seed(&data, k).unwrap();
        prop_assert_eq!(a.k(), k);
        prop_assert!(a.as_flat().iter().zip(b.as_flat()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn merge_factor_tracks_rigid_motion(rows in matrix(2..8, 1..4), offset in -100.0..100.0f64, scale in 0.1..10.0f64) {
        let c = CentroidSet::from_rows(&rows).unwrap();
        let base = auto_merge_factor(&c).unwrap();
        let moved: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v + offset).collect()).collect();
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
        let moved = auto_merge_factor(&CentroidSet::from_rows(&moved).unwrap()).unwrap();
        let scaled = auto_merge_factor(&CentroidSet::from_rows(&scaled).unwrap()).unwrap();
        prop_assert!((moved - base).abs() < 1e-9 * (1.0 + base));
        prop_assert!((scaled - scale * base).abs() < 1e-9 * (1.0 + scale * base));
    }

    #[test]
    fn silhouette_is_isometry_invariant(
        rows in matrix(4..40, 2..3),
        labels_seed in any::<u64>(),
        angle in 0.0..std::f64::consts::TAU,
        dx in -20.0..20.0f64,
    ) {
        let n = rows.len();
        let labels: Vec<usize> = (0..n).map(|i| ((labels_seed >> (i % 60)) as usize + i) % 3).collect();
        let a = Assignment::new(labels.clone(), 3).unwrap();
        prop_assume!(a.nonempty_count() >= 2);
        let base = silhouette(&ExpressionMatrix::from_rows(&rows).unwrap(), &a).unwrap();
        for s in &base.per_point {
            prop_assert!((-1.0..=1.0).contains(s));
        }
        let (sin, cos) = angle.sin_cos();
        let rotated: Vec<Vec<f64>> = rows.iter().map(|r| vec![cos * r[0] - sin * r[1] + dx, sin * r[0] + cos * r[1] - dx]).collect();
        let swapped: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[1], r[0]]).collect();
        for moved in [rotated, swapped] {
            let other = silhouette(&ExpressionMatrix::from_rows(&moved).unwrap(), &a).unwrap();
            for (x, y) in base.per_point.iter().zip(&other.per_point) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
        // relabel 0 -> 2 -> 1 -> 0
        let relabel = [2usize, 0, 1];
        let moved_labels = Assignment::new(labels.iter().map(|&l| relabel[l]).collect(), 3).unwrap();
        let other = silhouette(&ExpressionMatrix::from_rows(&rows).unwrap(), &moved_labels).unwrap();
        prop_assert_eq!(&base.per_point, &other.per_point);
        for (c, &to) in relabel.iter().enumerate() {
            prop_assert_eq!(base.per_cluster_mean[c], other.per_cluster_mean[to]);
        }
    }

    #[test]
    fn adaptive_results_are_well_formed(rows in matrix(8..50, 1..4), k in 1usize..5, seed in any::<u64>()) {
        let data = ExpressionMatrix::from_rows(&rows).unwrap();
        let agmfi_params = AgmfiParams { k_init: k, min_cluster_size: 1, ..AgmfiParams::default() };
        let iso_params = IsodataParams { k_init: k, theta_n: 1, theta_s: 20.0, theta_c: 5.0, ..IsodataParams::default() };
        let results = [
            agmfi(&data, &agmfi_params, &Init::Random { seed }).unwrap(),
            isodata(&data, &iso_params, &Init::Random { seed }).unwrap(),
        ];
        for (which, r) in results.iter().enumerate() {
            prop_assert!(r.final_k >= 1);
            prop_assert_eq!(r.final_k, r.centroids.k());
            prop_assert_eq!(r.assignment.k(), r.final_k);
            prop_assert!(r.assignment.sizes().iter().all(|&s| s > 0));
            for w in r.objective_history.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-9);
            }
            if which == 0 {
                prop_assert!(r.final_k <= 2 * k);
            }
        }
    }
}

#[test]
fn isodata_without_split_or_merge_equals_kmeans() {
    for seed in 0..20 {
        let spec = SyntheticSpec {
            k_true: 3,
            points_per_cluster: 15,
            dims: 4,
            seed,
            ..SyntheticSpec::default()
        };
        let (data, _) = generate_synthetic(&spec).unwrap();
        let params = IsodataParams {
            k_init: 6,
            theta_n: 1,
            theta_s: f64::INFINITY,
            theta_c: 0.0,
            ..IsodataParams::default()
        };
        let init = Init::Random { seed };
        let iso = isodata(&data, &params, &init).unwrap();
        let km = kmeans(&data, 6, &init, &params.lloyd).unwrap();
        assert_eq!(iso, km);
    }
}

#[test]
fn ccia_centroids_land_near_true_centers() {
    for seed in 0..10 {
        let (data, centers, spec) = well_separated(seed);
        let seeds = ccia_seed(&data, spec.k_true).unwrap();
        for c in seeds.iter() {
            let nearest = centers
                .iter()
                .map(|t| euclidean_distance(c, t).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 2.0 * spec.spread, "seed {seed}: {nearest}");
        }
    }
}

#[test]
fn random_partitions_of_uniform_data_score_near_zero() {
    for seed in 0..20u64 {
        let pts = lcg_points(200, 2, seed);
        let data = ExpressionMatrix::from_rows(&pts).unwrap();
        let labels: Vec<usize> = (0..200)
            .map(|i| ((i as u64 * 2654435761 + seed * 97) >> 7) as usize % 2)
            .collect();
        let a = Assignment::new(labels.clone(), 2).unwrap();
        let r = silhouette(&data, &a).unwrap();
        assert!(r.overall.abs() < 0.15, "seed {seed}: {}", r.overall);
        let naive = naive_silhouette(&pts, &labels, 2);
        let naive_mean = naive.iter().sum::<f64>() / 200.0;
        assert!((r.overall - naive_mean).abs() < 1e-9);
    }
}

#[test]
fn silhouette_rises_with_separation() {
    let base = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.5, 0.5]];
    let a = Assignment::new(vec![0, 0, 0, 0, 1, 1, 1, 1], 2).unwrap();
    let mut last = f64::NEG_INFINITY;
    for gap in [2.0, 4.0, 8.0, 16.0, 64.0, 1024.0] {
        let pts: Vec<[f64; 2]> = base
            .iter()
            .copied()
            .chain(base.iter().map(|p| [p[0] + gap, p[1]]))
            .collect();
        let r = silhouette(&ExpressionMatrix::from_rows(&pts).unwrap(), &a).unwrap();
        assert!(r.overall > last);
        last = r.overall;
    }
    assert!(last > 0.99);
}
