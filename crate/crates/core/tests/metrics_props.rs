mod common;

use std::collections::BTreeSet;

use hotvis::eval::roc_curve;
use hotvis::geometry::Point;
use hotvis::layout::{compute_layout, first_order_layout, Layout, LayoutConfig};
use hotvis::metrics::{
    causal_path_dispersion, closeness_eccentricity, edge_crossing, temporal_closeness,
};
use hotvis::paths::{extract_causal_paths, window_trajectories, PathCollection};
use proptest::prelude::*;

use common::{brute_force_cross, mann_whitney_auc, temporal_graph_strategy};

fn layout_from(points: &[(f64, f64)]) -> Layout {
    Layout::new(
        points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (format!("v{i}"), Point::new(x, y)))
            .collect(),
        None,
    )
}

fn brute_force_crossings(points: &[(f64, f64)], edges: &[(usize, usize)]) -> u64 {
    let unique: BTreeSet<(usize, usize)> = edges
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    let unique: Vec<_> = unique.into_iter().collect();
    let mut n = 0;
    for i in 0..unique.len() {
        for j in i + 1..unique.len() {
            let (a, b) = unique[i];
            let (c, d) = unique[j];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if brute_force_cross(points[a], points[b], points[c], points[d]) {
                n += 1;
            }
        }
    }
    n
}

fn grid_point() -> impl Strategy<Value = (f64, f64)> {
    // a coarse grid makes collinear and touching configurations common
    prop_oneof![
        (0i32..6, 0i32..6).prop_map(|(x, y)| (x as f64 / 8.0, y as f64 / 8.0)),
        (-1.0f64..1.0, -1.0f64..1.0),
    ]
}

fn similarity(p: Point, angle: f64, scale: f64, shift: Point) -> Point {
    let (s, c) = angle.sin_cos();
    Point::new(c * p.x - s * p.y, s * p.x + c * p.y) * scale + shift
}

fn path_collection() -> impl Strategy<Value = PathCollection> {
    prop::collection::vec((prop::collection::vec(0usize..8, 2..5), 1u64..6), 1..12).prop_map(|trajs| {
        let named: Vec<(Vec<String>, u64)> = trajs
            .into_iter()
            .map(|(nodes, f)| (nodes.into_iter().map(|v| format!("v{v}")).collect(), f))
            .collect();
        window_trajectories(&named, 3).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn crossings_match_brute_force(
        points in prop::collection::vec(grid_point(), 4..14),
        raw in prop::collection::vec((any::<usize>(), any::<usize>()), 1..30),
    ) {
        let n = points.len();
        let edges: Vec<(usize, usize)> = raw.iter().map(|&(a, b)| (a % n, b % n)).collect();
        let named: Vec<(String, String)> = edges.iter().map(|&(a, b)| (format!("v{a}"), format!("v{b}"))).collect();
        let got = edge_crossing(&layout_from(&points), &named).unwrap();
        prop_assert_eq!(got, brute_force_crossings(&points, &edges));
    }

    #[test]
    fn dispersion_and_eccentricity_are_similarity_invariant(
        pc in path_collection(),
        coords in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        angle in 0.0f64..6.3,
        scale in 0.1f64..10.0,
        shift in (-5.0f64..5.0, -5.0f64..5.0),
        gamma in 1.0f64..100.0,
    ) {
        prop_assume!(pc.vertices().len() >= 2);
        let names = pc.vertices().names();
        let base = Layout::new(
            names.iter().zip(&coords).map(|(n, &(x, y))| (n.clone(), Point::new(x, y))).collect(),
            None,
        );
        let moved = Layout::new(
            base.positions()
                .iter()
                .map(|(n, &p)| (n.clone(), similarity(p, angle, scale, Point::new(shift.0, shift.1))))
                .collect(),
            None,
        );
        let cc = temporal_closeness(&pc);
        let s0 = causal_path_dispersion(&base, &pc).unwrap();
        let s1 = causal_path_dispersion(&moved, &pc).unwrap();
        prop_assert!((s0 - s1).abs() <= 1e-9 * s0.max(1.0));
        let d0 = closeness_eccentricity(&base, &cc, gamma).unwrap();
        let d1 = closeness_eccentricity(&moved, &cc, gamma).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-9 * d0.max(1.0));
    }

    #[test]
    fn closeness_ignores_uniform_duplication(pc in path_collection(), m in 2u64..7) {
        let scaled = PathCollection::from_counts(
            pc.vertices().clone(),
            pc.max_length(),
            pc.delta(),
            pc.iter().map(|(p, c)| (p.to_vec(), c * m)),
        ).unwrap();
        let a = temporal_closeness(&pc);
        let b = temporal_closeness(&scaled);
        for (v, x) in &a {
            prop_assert!((x - b[v]).abs() <= 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn auc_is_the_mann_whitney_statistic(
        scores in prop::collection::vec((0u8..6, any::<bool>()), 2..40),
    ) {
        let scored: Vec<(f64, bool)> = scores.iter().map(|&(s, l)| (s as f64, l)).collect();
        let pos = scored.iter().filter(|s| s.1).count();
        prop_assume!(pos > 0 && pos < scored.len());
        let roc = roc_curve(&scored).unwrap();
        prop_assert!((roc.auc - mann_whitney_auc(&scored)).abs() < 1e-12);
        prop_assert!(roc.points.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zero_alphas_reproduce_the_first_order_layout(
        g in temporal_graph_strategy(8, 20, 10),
        seed in any::<u64>(),
        uniform in any::<bool>(),
    ) {
        let pc = extract_causal_paths(&g, 2, 3).unwrap();
        let mut cfg = LayoutConfig::default().with_seed(seed).with_iterations(200);
        cfg.uniform_path_weights = uniform;
        let plain = first_order_layout(&g.aggregate(), &cfg).unwrap();
        let hot = compute_layout(&pc, &cfg.clone().with_max_order(3).with_alpha(2, 0.0).with_alpha(3, 0.0)).unwrap();
        for (v, p) in plain.positions() {
            let q = hot.position(v).unwrap();
            prop_assert_eq!(p.x.to_bits(), q.x.to_bits());
            prop_assert_eq!(p.y.to_bits(), q.y.to_bits());
        }
    }

    #[test]
    fn layouts_are_reproducible_and_finite(g in temporal_graph_strategy(8, 20, 10), seed in any::<u64>()) {
        let pc = extract_causal_paths(&g, 1, 2).unwrap();
        let cfg = LayoutConfig::default().with_seed(seed).with_max_order(2).with_iterations(200);
        let a = compute_layout(&pc, &cfg).unwrap();
        let b = compute_layout(&pc, &cfg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.len(), g.vertex_count());
        prop_assert!(a.positions().values().all(|p| p.is_finite()));
    }
}

#[test]
fn touching_and_collinear_cases() {
    let pts = [(0.0, 0.0), (1.0, 0.0), (0.5, 0.0), (2.0, 0.0), (0.5, -1.0), (0.5, 1.0)];
    let layout = layout_from(&pts);
    let pairs = |e: &[(usize, usize)]| -> Vec<(String, String)> {
        e.iter().map(|&(a, b)| (format!("v{a}"), format!("v{b}"))).collect()
    };
    // collinear overlap of positive length
    assert_eq!(edge_crossing(&layout, &pairs(&[(0, 1), (2, 3)])).unwrap(), 1);
    // T-junction: endpoint on the other segment's interior
    assert_eq!(edge_crossing(&layout, &pairs(&[(0, 1), (2, 5)])).unwrap(), 0);
    // proper crossing
    assert_eq!(edge_crossing(&layout, &pairs(&[(0, 1), (4, 5)])).unwrap(), 1);
}
