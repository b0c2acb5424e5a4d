//! Forward structure selection driven by mutual-conditional-independence tests.
//!
//! State is a graph plus two lists of factor subsets: `temp_amis`, the sets still waiting for an
//! MCI test, and `amis`, the sets that passed one. The front set of `temp_amis` is tested; if it
//! passes it moves to `amis`, otherwise the most significant edge inside it is committed and
//! every pending set containing both endpoints is split into its two endpoint-deleted children.
//! The run ends when `temp_amis` is empty, at which point `amis` should be exactly the maximal
//! independent sets of the learned graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{UndirectedGraph, VertexSet, VertexSetFamily};
use crate::inference::{check_alpha, deviance_difference};
use crate::loglinear::{ipf_fit, FitResult, GeneratingClass, IpfSettings};
use crate::mci::{mci_test_with_fit, MciTestRecord};
use crate::tabular::ContingencyTable;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Unordered factor pair, stored with the lower ordinal first.
pub type Edge = (usize, usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeCandidate {
    pub edge: Edge,
    /// Current generating class plus the bare two-factor term.
    pub candidate_gc: GeneratingClass,
    pub fit_g2: f64,
    pub fit_df: usize,
    pub delta_g2: f64,
    pub delta_df: usize,
    pub p_value: f64,
}

/// Scored candidates for one failed set, in enumeration order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSearch {
    pub set: VertexSet,
    pub base_gc: GeneratingClass,
    pub base_g2: f64,
    pub base_df: usize,
    pub candidates: Vec<EdgeCandidate>,
    /// Smallest p-value at or below alpha, if any.
    pub chosen: Option<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneReason {
    /// Contained in (or equal to) the named AMIS member.
    SubsumedByAmis { by: VertexSet },
    /// Already pending in `temp_amis`.
    DuplicatePending,
    /// An AMIS member that is a strict subset of a newly accepted set.
    SupersededInAmis { by: VertexSet },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetList {
    Pending,
    Amis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    MciTest(MciTestRecord),
    EdgeSearch(EdgeSearch),
    EdgeCommitted { edge: Edge, model: GeneratingClass, g2: f64, df: usize },
    SetSplit { list: SetList, parent: VertexSet, children: Vec<VertexSet> },
    SetPruned { set: VertexSet, reason: PruneReason },
    SetAccepted { set: VertexSet },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionState {
    pub current_graph: UndirectedGraph,
    pub current_gc: GeneratingClass,
    pub temp_amis: Vec<VertexSet>,
    pub amis: Vec<VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub factors: Vec<String>,
    pub labels: Vec<String>,
    pub steps: Vec<Step>,
    pub final_state: SelectionState,
    pub warnings: Vec<String>,
}

impl SelectionState {
    /// Empty graph, complete independence, everything pending as one set.
    pub fn initial<S: AsRef<str>>(factors: &[S]) -> Result<Self> {
        let current_graph = UndirectedGraph::empty(factors)?;
        let n = current_graph.vertex_count();
        Ok(SelectionState {
            current_gc: GeneratingClass::independence(n),
            temp_amis: vec![current_graph.all_vertices()],
            current_graph,
            amis: Vec::new(),
        })
    }

    /// Checks the step-boundary invariants, returning a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.current_gc != GeneratingClass::graphical(&self.current_graph) {
            return Err("current model is not the clique model of the current graph".into());
        }
        for (name, list) in [("temp_amis", &self.temp_amis), ("amis", &self.amis)] {
            if let Some(s) = list.iter().find(|s| !self.current_graph.is_independent(**s)) {
                return Err(format!("{name} member {s:?} is not independent"));
            }
        }
        for (i, s) in self.temp_amis.iter().enumerate() {
            if self.temp_amis[..i].contains(s) {
                return Err(format!("temp_amis holds {s:?} twice"));
            }
        }
        if !VertexSetFamily::new(self.amis.iter().copied()).is_antichain()
            || VertexSetFamily::new(self.amis.iter().copied()).len() != self.amis.len()
        {
            return Err("amis is not an antichain".into());
        }
        Ok(())
    }

    /// Final AMIS, canonically ordered.
    pub fn amis_family(&self) -> VertexSetFamily {
        VertexSetFamily::new(self.amis.iter().copied())
    }
}

/// Starting state for a table.
pub fn initial_state(table: &ContingencyTable) -> SelectionState {
    SelectionState::initial(&table.factor_names()).expect("table factors are valid vertices")
}

/// Scores every non-edge pair inside `s` by the deviance drop from adding its two-factor term
/// to the current model.
pub fn most_significant_edge(
    table: &ContingencyTable,
    state: &SelectionState,
    s: VertexSet,
    alpha: f64,
    ipf: IpfSettings,
) -> Result<EdgeSearch> {
    check_alpha(alpha)?;
    let labels = table.abbreviations();
    let base = converged_fit(table, &state.current_gc, ipf, &labels)?;
    let pairs: Vec<Edge> = s
        .iter()
        .flat_map(|u| s.iter().filter(move |&v| v > u).map(move |v| (u, v)))
        .filter(|&(u, v)| !state.current_graph.has_edge(u, v))
        .collect();

    let candidates = pairs
        .par_iter()
        .map(|&(u, v)| {
            let gc = state.current_gc.with_term(VertexSet::pair(u, v));
            let fit = converged_fit(table, &gc, ipf, &labels)?;
            let test = deviance_difference(&base, &fit, alpha)?;
            Ok(EdgeCandidate {
                edge: (u, v),
                candidate_gc: gc,
                fit_g2: fit.g2,
                fit_df: fit.df,
                delta_g2: test.statistic,
                delta_df: test.df,
                p_value: test.p_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let chosen = candidates
        .iter()
        .filter(|c| c.p_value <= alpha)
        .min_by(|a, b| {
            a.p_value
                .total_cmp(&b.p_value)
                .then(b.delta_g2.total_cmp(&a.delta_g2))
                .then(a.edge.cmp(&b.edge))
        })
        .map(|c| c.edge);

    Ok(EdgeSearch {
        set: s,
        base_gc: state.current_gc.clone(),
        base_g2: base.g2,
        base_df: base.df,
        candidates,
        chosen,
    })
}

/// Adds `edge`, recomputes the clique model and splits every set holding both endpoints.
///
/// Pending sets are replaced in place by their children (sorted), dropping children already
/// inside an AMIS member or already pending. An AMIS member holding both endpoints is split the
/// same way inside `amis`.
pub fn commit_edge(state: &SelectionState, edge: Edge) -> Result<(SelectionState, Vec<Step>)> {
    let (u, v) = if edge.0 <= edge.1 { edge } else { (edge.1, edge.0) };
    let mut graph = state.current_graph.clone();
    if u >= graph.vertex_count() || v >= graph.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
    }
    if graph.has_edge(u, v) {
        let names = graph.vertices();
        return Err(Error::EdgePresent(names[u].clone(), names[v].clone()));
    }
    graph.add_edge(u, v)?;
    let pair = VertexSet::pair(u, v);
    let mut events = Vec::new();

    let mut amis: Vec<VertexSet> = Vec::with_capacity(state.amis.len() + 1);
    for (i, &a) in state.amis.iter().enumerate() {
        if !pair.is_subset(a) {
            amis.push(a);
            continue;
        }
        let children = split(a, u, v);
        events.push(Step::SetSplit { list: SetList::Amis, parent: a, children: children.clone() });
        for c in children {
            let others = amis.iter().chain(&state.amis[i + 1..]).copied();
            match others.filter(|o| !pair.is_subset(*o)).find(|o| c.is_subset(*o)) {
                Some(by) => events.push(Step::SetPruned { set: c, reason: PruneReason::SubsumedByAmis { by } }),
                None => amis.push(c),
            }
        }
    }

    let mut temp: Vec<VertexSet> = Vec::with_capacity(state.temp_amis.len() + 1);
    for (i, &t) in state.temp_amis.iter().enumerate() {
        if !pair.is_subset(t) {
            temp.push(t);
            continue;
        }
        let children = split(t, u, v);
        events.push(Step::SetSplit { list: SetList::Pending, parent: t, children: children.clone() });
        for c in children {
            if let Some(&by) = amis.iter().find(|a| c.is_subset(**a)) {
                events.push(Step::SetPruned { set: c, reason: PruneReason::SubsumedByAmis { by } });
                continue;
            }
            let later_survivors = state.temp_amis[i + 1..].iter().filter(|t| !pair.is_subset(**t));
            if temp.contains(&c) || later_survivors.clone().any(|t| *t == c) {
                events.push(Step::SetPruned { set: c, reason: PruneReason::DuplicatePending });
                continue;
            }
            temp.push(c);
        }
    }

    let next = SelectionState {
        current_gc: GeneratingClass::graphical(&graph),
        current_graph: graph,
        temp_amis: temp,
        amis,
    };
    Ok((next, events))
}

fn split(t: VertexSet, u: usize, v: usize) -> Vec<VertexSet> {
    let mut children = vec![t.without(u), t.without(v)];
    children.sort();
    children
}

/// Moves `s` from `temp_amis` to `amis`, keeping `amis` an antichain.
pub fn accept_set(state: &SelectionState, s: VertexSet) -> (SelectionState, Vec<Step>) {
    let mut next = state.clone();
    let mut events = vec![Step::SetAccepted { set: s }];
    if let Some(pos) = next.temp_amis.iter().position(|t| *t == s) {
        next.temp_amis.remove(pos);
    }
    if let Some(&by) = next.amis.iter().find(|a| s.is_subset(**a)) {
        if by != s {
            events.push(Step::SetPruned { set: s, reason: PruneReason::SubsumedByAmis { by } });
        }
        return (next, events);
    }
    next.amis.retain(|a| {
        let superseded = a.is_strict_subset(s);
        if superseded {
            events.push(Step::SetPruned { set: *a, reason: PruneReason::SupersededInAmis { by: s } });
        }
        !superseded
    });
    next.amis.push(s);
    (next, events)
}

/// Runs the full selection loop.
pub fn forward_select(table: &ContingencyTable, alpha: f64, ipf: IpfSettings) -> Result<SelectionTrace> {
    if table.num_factors() < 2 {
        return Err(Error::TooFewFactors(2));
    }
    check_alpha(alpha)?;
    let labels = table.abbreviations();
    let mut state = initial_state(table);
    let mut steps = Vec::new();
    let mut warnings = Vec::new();

    while let Some(&s) = state.temp_amis.first() {
        let (record, _) = mci_test_with_fit(table, s, alpha, ipf)?;
        let supported = record.outcome.supported;
        steps.push(Step::MciTest(record));
        if supported {
            let (next, events) = accept_set(&state, s);
            steps.extend(events);
            state = next;
            continue;
        }

        let search = most_significant_edge(table, &state, s, alpha, ipf)?;
        let chosen = search.chosen;
        steps.push(Step::EdgeSearch(search));
        let Some(edge) = chosen else {
            warnings.push(format!(
                "MCI test rejected {} but no edge inside it reaches alpha {alpha}; accepted as independent",
                render_set(s, &labels)
            ));
            let (next, events) = accept_set(&state, s);
            steps.extend(events);
            state = next;
            continue;
        };

        let (next, events) = commit_edge(&state, edge)?;
        let fit = converged_fit(table, &next.current_gc, ipf, &labels)?;
        steps.push(Step::EdgeCommitted { edge, model: next.current_gc.clone(), g2: fit.g2, df: fit.df });
        for e in &events {
            if let Step::SetSplit { list: SetList::Amis, parent, .. } = e {
                warnings.push(format!(
                    "edge {}--{} falls inside accepted set {}; the set was split",
                    labels[edge.0],
                    labels[edge.1],
                    render_set(*parent, &labels)
                ));
            }
        }
        steps.extend(events);
        state = next;
    }

    let expected = state.current_graph.maximal_independent_sets();
    if state.amis_family() != expected {
        warnings.push(format!(
            "final AMIS {} differs from the maximal independent sets {} of the final graph",
            render_family(&state.amis_family(), &labels),
            render_family(&expected, &labels)
        ));
    }

    Ok(SelectionTrace {
        factors: table.factor_names().into_iter().map(String::from).collect(),
        labels,
        steps,
        final_state: state,
        warnings,
    })
}

impl SelectionTrace {
    /// Re-applies every committed edge and accepted set to the initial state.
    pub fn replay(&self) -> Result<SelectionState> {
        let mut state = SelectionState::initial(&self.factors)?;
        for step in &self.steps {
            match step {
                Step::EdgeCommitted { edge, .. } => state = commit_edge(&state, *edge)?.0,
                Step::SetAccepted { set } => state = accept_set(&state, *set).0,
                _ => {}
            }
        }
        Ok(state)
    }

    pub fn final_model(&self) -> &GeneratingClass {
        &self.final_state.current_gc
    }

    pub fn final_amis(&self) -> VertexSetFamily {
        self.final_state.amis_family()
    }

    /// `[AC][ADE]...` using the table's short labels.
    pub fn render_model(&self) -> String {
        self.final_model().render(&self.labels)
    }
}

fn converged_fit<S: AsRef<str>>(
    table: &ContingencyTable,
    gc: &GeneratingClass,
    ipf: IpfSettings,
    labels: &[S],
) -> Result<FitResult> {
    let fit = ipf_fit(table, gc, ipf)?;
    if fit.converged {
        Ok(fit)
    } else {
        Err(Error::NotConverged(gc.render(labels)))
    }
}

/// `{A,B,F}`.
pub fn render_set<S: AsRef<str>>(s: VertexSet, labels: &[S]) -> String {
    let names: Vec<&str> = s.iter().map(|k| labels[k].as_ref()).collect();
    format!("{{{}}}", names.join(","))
}

/// Space-separated [`render_set`] over a family.
pub fn render_family<S: AsRef<str>>(f: &VertexSetFamily, labels: &[S]) -> String {
    f.iter().map(|s| render_set(s, labels)).collect::<Vec<_>>().join(" ")
}
