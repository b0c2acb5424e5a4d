//! JSON documents emitted by `--format json`. Sets are written as arrays of factor names.

use mcisel::selection::{EdgeCandidate, PruneReason, SetList, Step};
use mcisel::{FitResult, GeneratingClass, MciTestRecord, SelectionTrace, VertexSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitDoc {
    pub model: String,
    pub df: usize,
    pub g2: f64,
    pub x2: f64,
    pub p_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub max_margin_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MciDoc {
    pub tested_set: Vec<String>,
    pub conditioning_set: Vec<String>,
    pub model: String,
    pub g2: f64,
    pub df: usize,
    pub p_value: f64,
    pub supported: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateDoc {
    pub edge: [String; 2],
    pub model: String,
    pub df: usize,
    pub g2: f64,
    pub delta_df: usize,
    pub delta_g2: f64,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepDoc {
    MciTest(MciDoc),
    EdgeSearch {
        set: Vec<String>,
        base_model: String,
        base_df: usize,
        base_g2: f64,
        candidates: Vec<CandidateDoc>,
        chosen: Option<[String; 2]>,
    },
    EdgeCommitted { edge: [String; 2], model: String, df: usize, g2: f64 },
    SetSplit { list: String, parent: Vec<String>, children: Vec<Vec<String>> },
    SetPruned { set: Vec<String>, reason: String, by: Option<Vec<String>> },
    SetAccepted { set: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub factors: Vec<String>,
    pub steps: Vec<StepDoc>,
    pub final_model: String,
    pub amis: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

/// Factor names plus the short labels used in bracket notation.
pub struct Names<'a> {
    pub factors: &'a [String],
    pub labels: &'a [String],
}

impl Names<'_> {
    pub fn set(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|k| self.factors[k].clone()).collect()
    }

    pub fn edge(&self, (u, v): (usize, usize)) -> [String; 2] {
        [self.factors[u].clone(), self.factors[v].clone()]
    }

    pub fn model(&self, gc: &GeneratingClass) -> String {
        gc.render(self.labels)
    }
}

impl FitDoc {
    pub fn new(fit: &FitResult, names: &Names) -> Self {
        FitDoc {
            model: names.model(&fit.model),
            df: fit.df,
            g2: fit.g2,
            x2: fit.x2,
            p_value: fit.p_value,
            iterations: fit.iterations,
            converged: fit.converged,
            max_margin_error: fit.max_margin_error,
        }
    }
}

impl MciDoc {
    pub fn new(rec: &MciTestRecord, names: &Names) -> Self {
        MciDoc {
            tested_set: names.set(rec.tested_set),
            conditioning_set: names.set(rec.conditioning_set),
            model: names.model(&rec.gc),
            g2: rec.outcome.statistic,
            df: rec.outcome.df,
            p_value: rec.outcome.p_value,
            supported: rec.outcome.supported,
        }
    }
}

fn candidate(c: &EdgeCandidate, names: &Names) -> CandidateDoc {
    CandidateDoc {
        edge: names.edge(c.edge),
        model: names.model(&c.candidate_gc),
        df: c.fit_df,
        g2: c.fit_g2,
        delta_df: c.delta_df,
        delta_g2: c.delta_g2,
        p_value: c.p_value,
    }
}

impl StepDoc {
    pub fn new(step: &Step, names: &Names) -> Self {
        match step {
            Step::MciTest(rec) => StepDoc::MciTest(MciDoc::new(rec, names)),
            Step::EdgeSearch(search) => StepDoc::EdgeSearch {
                set: names.set(search.set),
                base_model: names.model(&search.base_gc),
                base_df: search.base_df,
                base_g2: search.base_g2,
                candidates: search.candidates.iter().map(|c| candidate(c, names)).collect(),
                chosen: search.chosen.map(|e| names.edge(e)),
            },
            Step::EdgeCommitted { edge, model, g2, df } => StepDoc::EdgeCommitted {
                edge: names.edge(*edge),
                model: names.model(model),
                df: *df,
                g2: *g2,
            },
            Step::SetSplit { list, parent, children } => StepDoc::SetSplit {
                list: match list {
                    SetList::Pending => "pending".into(),
                    SetList::Amis => "amis".into(),
                },
                parent: names.set(*parent),
                children: children.iter().map(|c| names.set(*c)).collect(),
            },
            Step::SetPruned { set, reason } => {
                let (reason, by) = match reason {
                    PruneReason::SubsumedByAmis { by } => ("subsumed_by_amis", Some(names.set(*by))),
                    PruneReason::DuplicatePending => ("duplicate_pending", None),
                    PruneReason::SupersededInAmis { by } => ("superseded_in_amis", Some(names.set(*by))),
                };
                StepDoc::SetPruned { set: names.set(*set), reason: reason.into(), by }
            }
            Step::SetAccepted { set } => StepDoc::SetAccepted { set: names.set(*set) },
        }
    }
}

impl TraceDoc {
    pub fn new(trace: &SelectionTrace) -> Self {
        let names = Names { factors: &trace.factors, labels: &trace.labels };
        TraceDoc {
            factors: trace.factors.clone(),
            steps: trace.steps.iter().map(|s| StepDoc::new(s, &names)).collect(),
            final_model: trace.render_model(),
            amis: trace.final_amis().iter().map(|s| names.set(s)).collect(),
            warnings: trace.warnings.clone(),
        }
    }
}
