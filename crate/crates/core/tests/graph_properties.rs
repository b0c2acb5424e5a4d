//! Graph algorithms against brute-force subset enumeration.

use mcisel::graphs::{UndirectedGraph, VertexSet, VertexSetFamily};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn graph_from_mask(n: usize, mask: u64) -> UndirectedGraph {
    let mut g = UndirectedGraph::empty(&labels(n)).unwrap();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

fn adjacent(g: &UndirectedGraph, u: usize, v: usize) -> bool {
    g.neighbors(u).contains(v)
}

/// All maximal sets whose pairs satisfy `related`, by scanning every subset.
fn brute_maximal(g: &UndirectedGraph, related: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let ok = |mask: u64| {
        (0..n).all(|u| (u + 1..n).all(|v| mask >> u & 1 == 0 || mask >> v & 1 == 0 || related(u, v)))
    };
    let good: Vec<u64> = (0..1u64 << n).filter(|&m| m != 0 && ok(m)).collect();
    let mut out: Vec<Vec<usize>> = good
        .iter()
        .filter(|&&m| !good.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

fn as_vecs(f: &VertexSetFamily) -> Vec<Vec<usize>> {
    f.iter().map(|s| s.iter().collect()).collect()
}

fn check_family_shape(f: &VertexSetFamily, n: usize) {
    assert!(f.is_antichain());
    assert_eq!(f.union(), VertexSet::full(n));
    let sorted: Vec<_> = {
        let mut v = f.sets().to_vec();
        v.sort();
        v
    };
    assert_eq!(sorted, f.sets());
}

#[test]
fn exhaustive_small_graphs() {
    for n in 1..=5 {
        let pairs = n * (n - 1) / 2;
        for mask in 0..1u64 << pairs {
            let g = graph_from_mask(n, mask);
            let cliques = g.maximal_cliques();
            let mis = g.maximal_independent_sets();
            assert_eq!(as_vecs(&cliques), brute_maximal(&g, |u, v| adjacent(&g, u, v)), "n={n} mask={mask}");
            assert_eq!(as_vecs(&mis), brute_maximal(&g, |u, v| !adjacent(&g, u, v)), "n={n} mask={mask}");
            assert_eq!(mis, g.complement().maximal_cliques());
            check_family_shape(&cliques, n);
            check_family_shape(&mis, n);
            assert_eq!(UndirectedGraph::from_amis(&labels(n), &mis).unwrap(), g);
        }
    }
}

#[test]
fn random_eight_vertex_bijection() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let density: f64 = rng.gen_range(0.1..0.9);
        let mut g = UndirectedGraph::empty(&labels(8)).unwrap();
        for u in 0..8 {
            for v in u + 1..8 {
                if rng.gen_bool(density) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let mis = g.maximal_independent_sets();
        check_family_shape(&mis, 8);
        assert_eq!(UndirectedGraph::from_amis(&labels(8), &mis).unwrap(), g);
    }
}

/// Chordless cycle of length ≥ 4 exists, found by brute force over vertex sequences.
fn has_chordless_cycle(g: &UndirectedGraph) -> bool {
    let n = g.vertex_count();
    fn extend(g: &UndirectedGraph, path: &mut Vec<usize>, n: usize) -> bool {
        let last = *path.last().unwrap();
        let first = path[0];
        if path.len() >= 4 && adjacent(g, last, first) {
            // chordless: only consecutive vertices adjacent
            let k = path.len();
            let chordless = (0..k).all(|i| {
                (i + 1..k).all(|j| {
                    let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                    consecutive == adjacent(g, path[i], path[j])
                })
            });
            if chordless {
                return true;
            }
        }
        for next in 0..n {
            if next > first && !path.contains(&next) && adjacent(g, last, next) {
                // prune: a chord to an earlier interior vertex can never be undone
                let interior = path.get(1..path.len() - 1).unwrap_or(&[]);
                if interior.iter().any(|&p| adjacent(g, p, next)) {
                    continue;
                }
                path.push(next);
                if extend(g, path, n) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    (0..n).any(|s| extend(g, &mut vec![s], n))
}

#[test]
fn chordality_matches_cycle_search() {
    for n in 1..=6 {
        let pairs = n * (n - 1) / 2;
        let step = if n == 6 { 7 } else { 1 };
        for mask in (0..1u64 << pairs).step_by(step) {
            let g = graph_from_mask(n, mask);
            assert_eq!(g.is_chordal(), !has_chordless_cycle(&g), "n={n} mask={mask}");
        }
    }
}

#[test]
fn reinis_graph_has_chordless_four_cycle() {
    let g = UndirectedGraph::from_edges(
        &["A", "B", "C", "D", "E", "F"],
        &[("A", "C"), ("A", "D"), ("A", "E"), ("D", "E"), ("B", "C"), ("B", "E")],
    )
    .unwrap();
    assert!(has_chordless_cycle(&g));
    assert!(!g.is_chordal());
}

fn arb_graph() -> impl Strategy<Value = UndirectedGraph> {
    (1usize..=10).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mask = bits.iter().enumerate().fold(0u64, |m, (i, b)| m | (*b as u64) << i);
            graph_from_mask(n, mask)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn duality_and_bijection(g in arb_graph()) {
        let n = g.vertex_count();
        let mis = g.maximal_independent_sets();
        prop_assert_eq!(&mis, &g.complement().maximal_cliques());
        prop_assert_eq!(as_vecs(&mis), brute_maximal(&g, |u, v| !adjacent(&g, u, v)));
        prop_assert_eq!(UndirectedGraph::from_amis(&labels(n), &mis).unwrap(), g.clone());
        prop_assert_eq!(g.complement().complement(), g.clone());
        for s in mis.iter() {
            prop_assert!(g.is_independent(s));
        }
    }

    #[test]
    fn dot_lists_every_edge_once(g in arb_graph()) {
        let dot = g.to_dot();
        prop_assert!(dot.starts_with("graph G {\n"), "bad header");
        prop_assert!(dot.ends_with("}\n"), "bad footer");
        prop_assert_eq!(dot.matches(" -- ").count(), g.edge_count());
        prop_assert_eq!(dot.lines().count(), 2 + g.vertex_count() + g.edge_count());
    }
}
