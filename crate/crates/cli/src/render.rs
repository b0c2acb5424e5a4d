//! Plain-text rendering. Every statistic is printed with four decimals.

use std::fmt::Write as _;

use mcisel::selection::{accept_set, commit_edge, render_family, render_set, PruneReason, SelectionState, SetList, Step};
use mcisel::{FitResult, MciTestRecord, SelectionTrace, VertexSet};

pub fn num(x: f64) -> String {
    format!("{x:.4}")
}

pub fn fit(out: &mut String, fit: &FitResult, labels: &[String]) {
    let _ = writeln!(out, "model: {}", fit.model.render(labels));
    let _ = writeln!(out, "df: {}", fit.df);
    let _ = writeln!(out, "G2: {}", num(fit.g2));
    let _ = writeln!(out, "X2: {}", num(fit.x2));
    let _ = writeln!(out, "p-value: {}", num(fit.p_value));
    let _ = writeln!(out, "iterations: {}", fit.iterations);
    let _ = writeln!(out, "converged: {}", fit.converged);
}

pub fn mci(out: &mut String, rec: &MciTestRecord, labels: &[String]) {
    let _ = writeln!(out, "tested: {}", render_set(rec.tested_set, labels));
    let _ = writeln!(out, "conditioning: {}", render_set(rec.conditioning_set, labels));
    let _ = writeln!(out, "model: {}", rec.gc.render(labels));
    let _ = writeln!(out, "G2: {}", num(rec.outcome.statistic));
    let _ = writeln!(out, "df: {}", rec.outcome.df);
    let _ = writeln!(out, "p-value: {}", num(rec.outcome.p_value));
    let _ = writeln!(out, "supported: {}", rec.outcome.supported);
}

fn edge(labels: &[String], (u, v): (usize, usize)) -> String {
    if labels.iter().all(|l| l.chars().count() == 1) {
        format!("{}{}", labels[u], labels[v])
    } else {
        format!("{}--{}", labels[u], labels[v])
    }
}

fn sets(list: &[VertexSet], labels: &[String]) -> String {
    if list.is_empty() {
        return "{}".into();
    }
    list.iter().map(|s| render_set(*s, labels)).collect::<Vec<_>>().join(" ")
}

/// Step log, then warnings, the final AMIS and the final model (last line).
///
/// With `snapshots`, the pending and accepted lists are printed after every transition.
pub fn trace(out: &mut String, trace: &SelectionTrace, snapshots: bool) {
    let labels = &trace.labels;
    if labels != &trace.factors {
        let legend: Vec<String> = labels.iter().zip(&trace.factors).map(|(l, f)| format!("{l}={f}")).collect();
        let _ = writeln!(out, "factors: {}", legend.join(" "));
    }
    let mut state = SelectionState::initial(&trace.factors).expect("trace factors are valid");
    for step in &trace.steps {
        let mut transition = false;
        match step {
            Step::MciTest(rec) => {
                let o = &rec.outcome;
                let verdict = if o.supported { "supported" } else { "rejected" };
                let _ = writeln!(
                    out,
                    "test {}: G2 {} df {} p {} -> {verdict}",
                    render_set(rec.tested_set, labels),
                    num(o.statistic),
                    o.df,
                    num(o.p_value)
                );
            }
            Step::EdgeSearch(search) => {
                let _ = writeln!(
                    out,
                    "  edges in {} against {} (df {}, G2 {})",
                    render_set(search.set, labels),
                    search.base_gc.render(labels),
                    search.base_df,
                    num(search.base_g2)
                );
                let width = search.candidates.iter().map(|c| c.candidate_gc.render(labels).len()).max().unwrap_or(5).max(5);
                let _ = writeln!(out, "    {:<6}{:<width$}  {:>4}  {:>10}  {:>4}  {:>10}  {:>8}", "edge", "model", "df", "G2", "ddf", "dG2", "p-value");
                for c in &search.candidates {
                    let _ = writeln!(
                        out,
                        "    {:<6}{:<width$}  {:>4}  {:>10}  {:>4}  {:>10}  {:>8}",
                        edge(labels, c.edge),
                        c.candidate_gc.render(labels),
                        c.fit_df,
                        num(c.fit_g2),
                        c.delta_df,
                        num(c.delta_g2),
                        num(c.p_value)
                    );
                }
                if search.chosen.is_none() {
                    let _ = writeln!(out, "  no significant edge");
                }
            }
            Step::EdgeCommitted { edge: e, model, g2, df } => {
                let _ = writeln!(out, "  add {} -> {} (df {df}, G2 {})", edge(labels, *e), model.render(labels), num(*g2));
                state = commit_edge(&state, *e).map(|(s, _)| s).unwrap_or(state);
                transition = true;
            }
            Step::SetSplit { list, parent, children } => {
                let which = match list {
                    SetList::Pending => "split",
                    SetList::Amis => "split accepted",
                };
                let _ = writeln!(out, "  {which} {} -> {}", render_set(*parent, labels), sets(children, labels));
            }
            Step::SetPruned { set, reason } => {
                let why = match reason {
                    PruneReason::SubsumedByAmis { by } => format!("inside accepted {}", render_set(*by, labels)),
                    PruneReason::DuplicatePending => "already pending".into(),
                    PruneReason::SupersededInAmis { by } => format!("superseded by {}", render_set(*by, labels)),
                };
                let _ = writeln!(out, "  drop {}: {why}", render_set(*set, labels));
            }
            Step::SetAccepted { set } => {
                let _ = writeln!(out, "  accept {}", render_set(*set, labels));
                state = accept_set(&state, *set).0;
                transition = true;
            }
        }
        if snapshots && transition {
            let _ = writeln!(out, "    model: {}", state.current_gc.render(labels));
            let _ = writeln!(out, "    pending: {}", sets(&state.temp_amis, labels));
            let _ = writeln!(out, "    accepted: {}", sets(&state.amis, labels));
        }
    }
    for w in &trace.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "amis: {}", render_family(&trace.final_amis(), labels));
    let _ = writeln!(out, "model: {}", trace.render_model());
}
