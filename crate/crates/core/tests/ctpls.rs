use std::collections::BTreeSet;

use colorpath::ctpls::{
    apply_move, ctpls_with, greedy_build, ls1_sweep, ls2_sweep, segment_domain, LsMove, MoveKind,
};
use colorpath::exact::{exact_max_colorful_path, ExactLimits};
use colorpath::gen::random_temporal_graph;
use colorpath::{ctpls, ColoredTemporalGraph, CtplsOptions, TemporalPath, TimeDomain, Timestamp, VertexId};
use proptest::prelude::*;

/// All `(a, b, t)` incidences, both directions, straight from the edge list.
fn incidences(g: &ColoredTemporalGraph) -> Vec<(VertexId, VertexId, Timestamp)> {
    g.edges()
        .iter()
        .flat_map(|e| [(e.u, e.v, e.t), (e.v, e.u, e.t)])
        .collect()
}

fn times_between(g: &ColoredTemporalGraph, a: VertexId, b: VertexId, lo: Timestamp, hi: Timestamp) -> Vec<Timestamp> {
    let mut ts: Vec<_> = incidences(g)
        .into_iter()
        .filter(|&(x, y, t)| x == a && y == b && lo < t && t < hi)
        .map(|(_, _, t)| t)
        .collect();
    ts.sort_unstable();
    ts
}

fn colors_without(g: &ColoredTemporalGraph, path: &TemporalPath, skip: Option<usize>) -> BTreeSet<u32> {
    path.vertices()
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != skip)
        .map(|(_, &v)| g.colors()[v as usize])
        .collect()
}

fn open_window(times: &[Timestamp], before: Option<usize>, after: usize) -> (Timestamp, Timestamp) {
    (
        before.map_or(Timestamp::MIN, |i| times[i]),
        times.get(after).copied().unwrap_or(Timestamp::MAX),
    )
}

/// First LS1 move in scan order, by exhaustive search: the lowest edge
/// index with any move, then the candidate with the earliest first contact
/// from `u` (ties by id), using that contact and the earliest exit to `v`.
fn first_ls1_by_brute_force(g: &ColoredTemporalGraph, path: &TemporalPath) -> Option<LsMove> {
    let vs = path.vertices();
    let ts = path.times();
    let used = colors_without(g, path, None);
    for i in 0..ts.len() {
        let (u, v) = (vs[i], vs[i + 1]);
        let (lo, hi) = open_window(ts, i.checked_sub(1), i + 1);
        let mut best: Option<(Timestamp, VertexId, Timestamp)> = None;
        for x in 0..g.n_vertices() as VertexId {
            if vs.contains(&x) || used.contains(&g.colors()[x as usize]) {
                continue;
            }
            let t1s = times_between(g, u, x, lo, hi);
            let feasible = t1s
                .iter()
                .any(|&t1| !times_between(g, x, v, t1, hi).is_empty());
            if feasible {
                let t1 = t1s[0];
                let t2 = times_between(g, x, v, t1, hi)[0];
                if best.map_or(true, |b| (t1, x) < (b.0, b.1)) {
                    best = Some((t1, x, t2));
                }
            }
        }
        if let Some((t1, x, t2)) = best {
            return Some(LsMove {
                kind: MoveKind::Ls1,
                position: i,
                inserted: vec![x],
                new_times: vec![t1, t2],
            });
        }
    }
    None
}

/// First LS2 move in scan order, by exhaustive search over every `(y, z)`
/// pair and every timestamp combination.
fn first_ls2_by_brute_force(g: &ColoredTemporalGraph, path: &TemporalPath) -> Option<LsMove> {
    let vs = path.vertices();
    let ts = path.times();
    let n = g.n_vertices() as VertexId;
    for i in 0..vs.len() {
        let used = colors_without(g, path, Some(i));
        let fresh = |v: VertexId| !vs.contains(&v) && !used.contains(&g.colors()[v as usize]);
        let u = i.checked_sub(1).map(|j| vs[j]);
        let w = vs.get(i + 1).copied();
        let (lo, hi) = open_window(ts, i.checked_sub(2), i + 1);
        // (sort key, y, z, times)
        let mut best: Option<(Vec<i64>, VertexId, VertexId, Vec<Timestamp>)> = None;
        let mut offer = |key: Vec<i64>, y: VertexId, z: VertexId, times: Vec<Timestamp>| {
            if best.as_ref().map_or(true, |b| key < b.0) {
                best = Some((key, y, z, times));
            }
        };
        for y in 0..n {
            for z in 0..n {
                if y == z || !fresh(y) || !fresh(z) || g.colors()[y as usize] == g.colors()[z as usize] {
                    continue;
                }
                match (u, w) {
                    (Some(u), Some(w)) => {
                        let Some(&t1) = times_between(g, u, y, lo, hi).first() else { continue };
                        let feasible = times_between(g, u, y, lo, hi).iter().any(|&a| {
                            times_between(g, y, z, a, hi)
                                .iter()
                                .any(|&b| !times_between(g, z, w, b, hi).is_empty())
                        });
                        if !feasible {
                            continue;
                        }
                        let Some(&t2) = times_between(g, y, z, t1, hi).first() else { continue };
                        let Some(&t3) = times_between(g, z, w, t2, hi).first() else { continue };
                        offer(vec![t1, y as i64, t2, z as i64], y, z, vec![t1, t2, t3]);
                    }
                    (Some(u), None) => {
                        let Some(&t1) = times_between(g, u, y, lo, hi).first() else { continue };
                        let Some(&t2) = times_between(g, y, z, t1, hi).first() else { continue };
                        offer(vec![t1, y as i64, t2, z as i64], y, z, vec![t1, t2]);
                    }
                    (None, Some(w)) => {
                        let Some(&t2) = times_between(g, z, w, lo, hi).last() else { continue };
                        let Some(&t1) = times_between(g, y, z, lo, t2).first() else { continue };
                        offer(vec![-t2, -(z as i64), t1, y as i64], y, z, vec![t1, t2]);
                    }
                    (None, None) => {
                        let Some(&t) = times_between(g, y, z, Timestamp::MIN, Timestamp::MAX).first() else {
                            continue;
                        };
                        if y < z {
                            offer(vec![t, y as i64, z as i64], y, z, vec![t]);
                        }
                    }
                }
            }
        }
        if let Some((_, y, z, times)) = best {
            return Some(LsMove {
                kind: MoveKind::Ls2,
                position: i,
                inserted: vec![y, z],
                new_times: times,
            });
        }
    }
    None
}

fn greedy_path(g: &ColoredTemporalGraph) -> TemporalPath {
    greedy_build(g, &segment_domain(g.domain(), g.n_colors())).path
}

/// Random walk from a random start: a valid colorful path that usually
/// leaves room for local search.
fn short_path(g: &ColoredTemporalGraph, seed: u64) -> TemporalPath {
    let start = (seed % g.n_vertices() as u64) as VertexId;
    let mut p = TemporalPath::single(start);
    let mut colors: BTreeSet<u32> = [g.colors()[start as usize]].into();
    for k in 0..2 {
        let after = p.last_time().unwrap_or(Timestamp::MIN);
        let next = g
            .adjacency(p.last())
            .iter()
            .filter(|&&(w, t)| t > after && !p.vertices().contains(&w) && !colors.contains(&g.colors()[w as usize]))
            .nth(((seed >> 8) as usize + k) % 2);
        match next {
            Some(&(w, t)) => {
                p.push(w, t);
                colors.insert(g.colors()[w as usize]);
            }
            None => break,
        }
    }
    p
}

#[test]
fn ls1_first_move_matches_brute_force() {
    let mut checked = 0;
    for seed in 0..400 {
        let g = random_temporal_graph(6, 14, 6, 12, seed);
        for p in [greedy_path(&g), short_path(&g, seed)] {
            let oracle = first_ls1_by_brute_force(&g, &p);
            let sweep = ls1_sweep(&g, &p);
            assert_eq!(sweep.moves.first(), oracle.as_ref(), "seed {seed}, path {p}");
            if oracle.is_some() {
                checked += 1;
                let after = apply_move(&p, &sweep.moves[0]).unwrap();
                assert_eq!(after.len(), p.len() + 1);
                g.validate_path(&after).unwrap();
            }
        }
    }
    assert!(checked > 20, "only {checked} instances had an LS1 move");
}

#[test]
fn ls2_first_move_matches_brute_force() {
    let mut checked = 0;
    for seed in 0..300 {
        let g = random_temporal_graph(8, 18, 8, 14, seed);
        for p in [greedy_path(&g), short_path(&g, seed)] {
            let oracle = first_ls2_by_brute_force(&g, &p);
            let sweep = ls2_sweep(&g, &p);
            assert_eq!(sweep.moves.first(), oracle.as_ref(), "seed {seed}, path {p}");
            if oracle.is_some() {
                checked += 1;
                let after = apply_move(&p, &sweep.moves[0]).unwrap();
                assert_eq!(after.len(), p.len() + 1);
                g.validate_path(&after).unwrap();
                assert!(g.is_colorful(&after).unwrap());
            }
        }
    }
    assert!(checked > 20, "only {checked} instances had an LS2 move");
}

#[test]
fn five_vertex_greedy_is_optimal() {
    let mut b = colorpath::GraphBuilder::new(5);
    for (u, v, t) in [(0, 1, 1), (1, 2, 4), (2, 3, 7), (1, 4, 8)] {
        b.add_edge(u, v, t).unwrap();
    }
    let g = b
        .colors(vec![0, 1, 2, 3, 4])
        .unwrap()
        .domain(TimeDomain::new(1, 10).unwrap())
        .build()
        .unwrap();
    assert_eq!(greedy_path(&g).vertices(), &[0, 1, 2, 3]);
    let opt = exact_max_colorful_path(&g, &ExactLimits::default()).unwrap();
    assert_eq!(opt.path.len(), 4);
}

#[test]
fn output_never_beats_the_optimum() {
    for seed in 0..200 {
        let g = random_temporal_graph(9, 14, 6, 10, seed);
        let r = ctpls(&g);
        g.validate_path(&r.path).unwrap();
        assert!(g.is_colorful(&r.path).unwrap());
        let opt = exact_max_colorful_path(&g, &ExactLimits::default()).unwrap();
        assert!(r.color_count() <= opt.path.len(), "seed {seed}");
    }
}

proptest! {
    #[test]
    fn segmentation_covers_the_domain(lo in -50i64..50, span in 1i64..200, k in 1usize..250) {
        let d = TimeDomain::new(lo, lo + span - 1).unwrap();
        let seg = segment_domain(d, k);
        prop_assert_eq!(seg.len(), k);
        let present: Vec<_> = seg.intervals.iter().flatten().collect();
        prop_assert_eq!(present[0].lo, d.t_min);
        prop_assert_eq!(present.last().unwrap().hi, d.t_max);
        for w in present.windows(2) {
            prop_assert_eq!(w[0].hi + 1, w[1].lo);
        }
        prop_assert_eq!(seg.saturated, k as i64 > span);
        for t in d.t_min..=d.t_max {
            let i = seg.locate(t).unwrap();
            prop_assert!(seg.intervals[i].unwrap().contains(t));
        }
    }

    #[test]
    fn ctpls_is_sound_and_deterministic(
        n in 2usize..20,
        m in 0usize..60,
        k in 1usize..10,
        horizon in 1i64..30,
        seed in any::<u64>(),
    ) {
        let g = random_temporal_graph(n, m, k, horizon, seed);
        let r = ctpls_with(&g, CtplsOptions { verify_moves: true });
        prop_assert!(g.validate_path(&r.path).is_ok());
        prop_assert!(g.is_colorful(&r.path).unwrap());
        prop_assert!(r.path.len() >= r.trace.greedy_len);
        prop_assert!(r.path.len() <= k);
        prop_assert_eq!(r.trace.violations, 0);
        prop_assert_eq!(r.path.len(), r.trace.greedy_len + r.trace.ls1_moves + r.trace.ls2_moves);
        let again = ctpls(&g);
        prop_assert_eq!(again.path, r.path);
    }
}
