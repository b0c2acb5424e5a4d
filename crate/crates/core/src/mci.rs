//! Mutual conditional independence of a factor subset given all remaining factors.
//!
//! Factors in `s` are mutually independent given the complement `c` exactly when the joint
//! distribution factorizes over the terms `{x} ∪ c` for `x ∈ s`, so the test is a
//! goodness-of-fit test of that generating class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::VertexSet;
use crate::inference::{goodness_of_fit, TestOutcome};
use crate::loglinear::{ipf_fit, FitResult, GeneratingClass, IpfSettings};
use crate::tabular::ContingencyTable;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MciTestRecord {
    pub tested_set: VertexSet,
    pub conditioning_set: VertexSet,
    pub gc: GeneratingClass,
    pub outcome: TestOutcome,
}

/// One term `{x} ∪ (all \ s)` per `x ∈ s`.
pub fn mci_generating_class(num_factors: usize, s: VertexSet) -> Result<GeneratingClass> {
    let all = VertexSet::full(num_factors);
    if s.is_empty() {
        return Err(Error::EmptyFactorSet);
    }
    if !s.is_subset(all) {
        let bad = s.difference(all).first().unwrap_or_default();
        return Err(Error::UnknownFactor(format!("#{bad}")));
    }
    let rest = all.difference(s);
    Ok(GeneratingClass::new(s.iter().map(|x| rest.with(x))))
}

/// Same, with the set given by factor names.
pub fn mci_generating_class_named<S: AsRef<str>>(table: &ContingencyTable, names: &[S]) -> Result<GeneratingClass> {
    if names.is_empty() {
        return Err(Error::EmptyFactorSet);
    }
    mci_generating_class(table.num_factors(), table.factor_set(names)?)
}

/// Fits the MCI model for `s` and tests it against the saturated model.
pub fn mci_test(table: &ContingencyTable, s: VertexSet, alpha: f64, ipf: IpfSettings) -> Result<MciTestRecord> {
    Ok(mci_test_with_fit(table, s, alpha, ipf)?.0)
}

pub(crate) fn mci_test_with_fit(
    table: &ContingencyTable,
    s: VertexSet,
    alpha: f64,
    ipf: IpfSettings,
) -> Result<(MciTestRecord, FitResult)> {
    let gc = mci_generating_class(table.num_factors(), s)?;
    let fit = ipf_fit(table, &gc, ipf)?;
    if !fit.converged {
        return Err(Error::NotConverged(gc.render(&table.abbreviations())));
    }
    let outcome = goodness_of_fit(&fit, alpha)?;
    let record = MciTestRecord {
        tested_set: s,
        conditioning_set: table.all_factors().difference(s),
        gc,
        outcome,
    };
    Ok((record, fit))
}
