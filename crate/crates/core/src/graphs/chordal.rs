use super::VertexSet;

/// Maximum-cardinality search, then the fill-in check on the resulting order.
///
/// MCS visits the unvisited vertex with the most visited neighbours (lowest index on ties). The
/// reverse visit order is a perfect elimination ordering iff the graph is chordal, which holds
/// iff for every vertex `v` the earlier-visited neighbours other than the latest one, `u`, are
/// all adjacent to `u`.
pub(super) fn is_chordal(adj: &[VertexSet]) -> bool {
    let n = adj.len();
    let mut weight = vec![0usize; n];
    let mut visited = VertexSet::EMPTY;
    let mut position = vec![0usize; n];
    let mut order = Vec::with_capacity(n);

    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !visited.contains(v))
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unvisited vertex remains");
        for w in adj[v].difference(visited).iter() {
            weight[w] += 1;
        }
        visited = visited.with(v);
        position[v] = step;
        order.push(v);
    }

    let mut seen = VertexSet::EMPTY;
    for &v in &order {
        let earlier = adj[v].intersection(seen);
        if let Some(latest) = earlier.iter().max_by_key(|&u| position[u]) {
            if !earlier.without(latest).is_subset(adj[latest]) {
                return false;
            }
        }
        seen = seen.with(v);
    }
    true
}
