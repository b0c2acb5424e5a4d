//! Undirected graphs over labelled vertices.
//!
//! Independent sets of a graph are the cliques of its complement, so maximal independent sets
//! are enumerated with the same pivoting Bron–Kerbosch routine as maximal cliques. The family of
//! all maximal independent sets determines the graph: `u` and `v` are adjacent exactly when no
//! member holds both ([`UndirectedGraph::from_amis`]).

mod chordal;
mod set;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use set::{canonical_antichain, VertexSet, MAX_VERTICES};

/// A simple undirected graph: no self-loops, no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirectedGraph {
    vertices: Vec<String>,
    adjacency: Vec<VertexSet>,
}

/// A canonically ordered collection of vertex sets.
///
/// Members are kept sorted ([`VertexSet`]'s lexicographic order) and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSetFamily {
    sets: Vec<VertexSet>,
}

impl VertexSetFamily {
    pub fn new(sets: impl IntoIterator<Item = VertexSet>) -> Self {
        let mut sets: Vec<VertexSet> = sets.into_iter().collect();
        sets.sort();
        sets.dedup();
        VertexSetFamily { sets }
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.sets.iter().copied()
    }

    /// No member is a strict subset of another.
    pub fn is_antichain(&self) -> bool {
        self.sets
            .iter()
            .all(|a| !self.sets.iter().any(|b| a.is_strict_subset(*b)))
    }

    pub fn union(&self) -> VertexSet {
        self.sets.iter().fold(VertexSet::EMPTY, |acc, s| acc.union(*s))
    }
}

impl FromIterator<VertexSet> for VertexSetFamily {
    fn from_iter<I: IntoIterator<Item = VertexSet>>(iter: I) -> Self {
        VertexSetFamily::new(iter)
    }
}

impl UndirectedGraph {
    /// Graph with the given vertices and no edges.
    pub fn empty<S: AsRef<str>>(vertices: &[S]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices { max: MAX_VERTICES, found: vertices.len() });
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let adjacency = vec![VertexSet::EMPTY; vertices.len()];
        Ok(UndirectedGraph { vertices, adjacency })
    }

    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(&str, &str)]) -> Result<Self> {
        let mut g = Self::empty(vertices)?;
        for (u, v) in edges {
            let (u, v) = (g.index_of(u)?, g.index_of(v)?);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertices.len())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    /// Adds `u -- v`. Re-adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertices.len();
        for w in [u, v] {
            if w >= n {
                return Err(Error::UnknownVertex(w.to_string()));
            }
        }
        if u == v {
            return Err(Error::SelfLoop(self.vertices[u].clone()));
        }
        self.adjacency[u] = self.adjacency[u].with(v);
        self.adjacency[v] = self.adjacency[v].with(u);
        Ok(())
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertices.len())
            .flat_map(|u| self.adjacency[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// No two members of `set` are adjacent.
    pub fn is_independent(&self, set: VertexSet) -> bool {
        set.iter().all(|v| self.adjacency[v].intersection(set).is_empty())
    }

    pub fn is_clique(&self, set: VertexSet) -> bool {
        set.iter().all(|v| set.without(v).is_subset(self.adjacency[v]))
    }

    pub fn complement(&self) -> UndirectedGraph {
        let all = self.all_vertices();
        let adjacency = self
            .adjacency
            .iter()
            .enumerate()
            .map(|(v, a)| all.difference(*a).without(v))
            .collect();
        UndirectedGraph { vertices: self.vertices.clone(), adjacency }
    }

    /// All maximal cliques, isolated vertices included as singletons.
    pub fn maximal_cliques(&self) -> VertexSetFamily {
        let mut out = Vec::new();
        if !self.vertices.is_empty() {
            bron_kerbosch(&self.adjacency, VertexSet::EMPTY, self.all_vertices(), VertexSet::EMPTY, &mut out);
        }
        VertexSetFamily::new(out)
    }

    pub fn maximal_independent_sets(&self) -> VertexSetFamily {
        self.complement().maximal_cliques()
    }

    /// Rebuilds the graph whose maximal independent sets are `amis`: `u -- v` iff no member
    /// contains both.
    pub fn from_amis<S: AsRef<str>>(vertices: &[S], amis: &VertexSetFamily) -> Result<Self> {
        let mut g = Self::empty(vertices)?;
        let n = g.vertex_count();
        let covered = amis.union();
        if let Some(v) = (0..n).find(|&v| !covered.contains(v)) {
            return Err(Error::UncoveredVertex(g.vertices[v].clone()));
        }
        for u in 0..n {
            for v in u + 1..n {
                let pair = VertexSet::pair(u, v);
                if !amis.iter().any(|s| pair.is_subset(s)) {
                    g.add_edge(u, v)?;
                }
            }
        }
        Ok(g)
    }

    /// True iff every cycle of length at least four has a chord.
    pub fn is_chordal(&self) -> bool {
        chordal::is_chordal(&self.adjacency)
    }

    /// GraphViz rendering with vertices in declared order and edges sorted.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  {};", dot_id(v));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {} -- {};", dot_id(&self.vertices[u]), dot_id(&self.vertices[v]));
        }
        out.push_str("}\n");
        out
    }

    /// Labels of `set`, in vertex order.
    pub fn labels(&self, set: VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.vertices[v].as_str()).collect()
    }
}

fn dot_id(label: &str) -> String {
    let plain = label
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain {
        label.to_string()
    } else {
        format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Tomita-style pivoting: the pivot maximises `|P ∩ N(u)|` over `P ∪ X`, first vertex on ties.
fn bron_kerbosch(adj: &[VertexSet], r: VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Vec<VertexSet>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = p
        .union(x)
        .iter()
        .max_by_key(|&u| (p.intersection(adj[u]).len(), std::cmp::Reverse(u)))
        .expect("P is non-empty");
    for v in p.difference(adj[pivot]).iter() {
        bron_kerbosch(adj, r.with(v), p.intersection(adj[v]), x.intersection(adj[v]), out);
        p = p.without(v);
        x = x.with(v);
    }
}
