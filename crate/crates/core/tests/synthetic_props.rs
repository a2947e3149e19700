use std::collections::BTreeMap;

use hotvis::geometry::Point;
use hotvis::layout::Layout;
use hotvis::paths::extract_causal_paths;
use hotvis::synthetic::{cluster_path_stats, generate_cluster_graph, intra_inter_distance_ratio, ClusterModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn generator_over_represents_within_cluster_paths() {
    let data = generate_cluster_graph(&ClusterModelParams::new(30, 4, 2000, 1)).unwrap();
    let pc = extract_causal_paths(&data.graph, 1, 2).unwrap();
    let stats = cluster_path_stats(&pc, &data.clusters).unwrap();
    assert!(data.swaps_performed > 0);
    assert!(stats.normalized_ratio() > 1.5, "{stats:?}");
}

#[test]
fn shuffled_timestamps_remove_cluster_signal() {
    let ratios: Vec<f64> = (0..100)
        .map(|seed| {
            let data = generate_cluster_graph(&ClusterModelParams::new(30, 4, 2000, seed)).unwrap();
            let shuffled = data.graph.shuffle_timestamps(seed ^ 0x5eed);
            let pc = extract_causal_paths(&shuffled, 1, 2).unwrap();
            cluster_path_stats(&pc, &data.clusters).unwrap().normalized_ratio()
        })
        .collect();
    let (mean, se) = mean_and_se(&ratios);
    assert!((mean - 1.0).abs() <= 2.0 * se, "mean {mean}, se {se}");
}

#[test]
fn random_positions_have_unit_distance_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let ratios: Vec<f64> = (0..100)
        .map(|seed| {
            let data = generate_cluster_graph(&ClusterModelParams::new(30, 4, 200, seed)).unwrap();
            let positions: BTreeMap<String, Point> = data
                .clusters
                .keys()
                .map(|v| (v.clone(), Point::new(rng.gen(), rng.gen())))
                .collect();
            intra_inter_distance_ratio(&Layout::new(positions, None), &data.clusters).unwrap()
        })
        .collect();
    let (mean, _) = mean_and_se(&ratios);
    assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
}

#[test]
fn generation_is_seeded() {
    let p = ClusterModelParams::new(30, 4, 500, 9);
    let (a, b) = (generate_cluster_graph(&p).unwrap(), generate_cluster_graph(&p).unwrap());
    assert_eq!(a.graph.edges(), b.graph.edges());
    assert_eq!(a.clusters, b.clusters);
}
