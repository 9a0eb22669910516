use colorpath::gen::random_temporal_graph;
use colorpath::reduction::{build_instance, StaticGraph};
use colorpath::{PathViolation, TemporalEdge, TemporalPath};
use proptest::prelude::*;

#[test]
fn reduced_instance_first_timestamp() {
    let inst = build_instance(&StaticGraph::new(2, [(1, 2)]).unwrap()).unwrap();
    let g = &inst.graph;
    assert_eq!(
        g.edges_at(1),
        &[TemporalEdge {
            u: inst.vertex(1, 0),
            v: inst.vertex(1, 1),
            t: 1
        }]
    );
    let p = TemporalPath::new(vec![inst.vertex(1, 0), inst.vertex(1, 1), inst.vertex(1, 2)], vec![1, 2]).unwrap();
    assert!(g.validate_path(&p).is_ok());
}

#[test]
fn shared_edge_color_is_not_colorful() {
    // v_{1,2} and v_{2,1} both carry the color of source edge {1, 2}
    let inst = build_instance(&StaticGraph::new(2, [(1, 2)]).unwrap()).unwrap();
    let g = &inst.graph;
    assert_eq!(g.colors()[inst.vertex(1, 2) as usize], g.colors()[inst.vertex(2, 1) as usize]);
    assert!(g.is_colorful(&inst.segment_path(1)).unwrap());
    // colors do not depend on edges, so any vertex sequence will do
    let both = TemporalPath::new(vec![inst.vertex(1, 2), inst.vertex(2, 1)], vec![3]).unwrap();
    assert_eq!(g.path_colors(&both).unwrap().len(), 1);
    assert!(!g.is_colorful(&both).unwrap());
}

fn random_path(g: &colorpath::ColoredTemporalGraph, seed: u64) -> TemporalPath {
    let mut p = TemporalPath::single((seed % g.n_vertices() as u64) as u32);
    let mut pick = seed;
    loop {
        let after = p.last_time().unwrap_or(i64::MIN);
        let options: Vec<_> = g
            .adjacency(p.last())
            .iter()
            .filter(|&&(w, t)| t > after && !p.vertices().contains(&w))
            .collect();
        if options.is_empty() || p.len() >= 6 {
            return p;
        }
        pick = pick.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let &(w, t) = options[(pick >> 33) as usize % options.len()];
        p.push(w, t);
    }
}

proptest! {
    #[test]
    fn edges_at_partitions_the_edge_set(seed in any::<u64>(), m in 0usize..80) {
        let g = random_temporal_graph(12, m, 4, 20, seed);
        let mut all = Vec::new();
        for t in g.domain().t_min..=g.domain().t_max {
            for e in g.edges_at(t) {
                prop_assert_eq!(e.t, t);
                all.push(*e);
            }
        }
        prop_assert_eq!(all.as_slice(), g.edges());
    }

    #[test]
    fn neighbors_after_before_the_domain_lists_every_incidence(seed in any::<u64>(), v in 0u32..12) {
        let g = random_temporal_graph(12, 40, 4, 20, seed);
        let listed = g.neighbors_after(v, g.domain().t_min - 1).unwrap();
        let mut expected: Vec<_> = g
            .edges()
            .iter()
            .filter_map(|e| {
                if e.u == v { Some((e.v, e.t)) } else if e.v == v { Some((e.u, e.t)) } else { None }
            })
            .collect();
        expected.sort_by_key(|&(w, t)| (t, w));
        prop_assert_eq!(listed, expected.as_slice());
    }

    #[test]
    fn breaking_one_time_step_is_rejected(seed in any::<u64>()) {
        let g = random_temporal_graph(10, 60, 5, 30, seed);
        let p = random_path(&g, seed);
        prop_assert!(g.validate_path(&p).is_ok());
        let (vs, ts) = p.into_parts();
        for i in 1..ts.len() {
            let mut bad = ts.clone();
            bad[i] = bad[i - 1];
            let q = TemporalPath::new(vs.clone(), bad).unwrap();
            let rejected = g.validate_path(&q).is_err();
            prop_assert!(rejected);
            if g.has_edge(vs[i], vs[i + 1], ts[i - 1]) {
                prop_assert!(
                    matches!(g.validate_path(&q), Err(PathViolation::TimeConstraint { index, .. }) if index == i),
                    "{:?}", g.validate_path(&q)
                );
            }
        }
    }

    #[test]
    fn color_count_bounded_by_length(seed in any::<u64>(), k in 1usize..6) {
        let g = random_temporal_graph(10, 60, k, 30, seed);
        let p = random_path(&g, seed);
        let c = g.path_colors(&p).unwrap().len();
        prop_assert!(c <= p.len());
        prop_assert_eq!(c == p.len(), g.is_colorful(&p).unwrap());
    }
}
