//! Hierarchical log-linear models: generating classes, parameter counts and IPF fitting.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{canonical_antichain, UndirectedGraph, VertexSet, VertexSetFamily};
use crate::inference::chisq_sf;
use crate::tabular::{ContingencyTable, MarginMap};

/// The maximal interaction terms of a hierarchical model, as a canonical antichain.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<VertexSet>", from = "Vec<VertexSet>")]
pub struct GeneratingClass {
    terms: Vec<VertexSet>,
}

impl GeneratingClass {
    /// Canonicalizes: drops empty, duplicate and subsumed terms, sorts the rest.
    pub fn new(terms: impl IntoIterator<Item = VertexSet>) -> Self {
        GeneratingClass { terms: canonical_antichain(terms.into_iter().filter(|t| !t.is_empty())) }
    }

    /// Complete independence over `n` factors.
    pub fn independence(n: usize) -> Self {
        Self::new((0..n).map(VertexSet::singleton))
    }

    pub fn saturated(n: usize) -> Self {
        Self::new([VertexSet::full(n)])
    }

    /// The graphical model of `g`: its maximal cliques.
    pub fn graphical(g: &UndirectedGraph) -> Self {
        Self::new(g.maximal_cliques().iter())
    }

    pub fn terms(&self) -> &[VertexSet] {
        &self.terms
    }

    pub fn factors(&self) -> VertexSet {
        self.terms.iter().fold(VertexSet::EMPTY, |acc, t| acc.union(*t))
    }

    /// Adds a term and re-canonicalizes.
    #[must_use]
    pub fn with_term(&self, term: VertexSet) -> Self {
        Self::new(self.terms.iter().copied().chain([term]))
    }

    /// Every subset of every term, the empty set included, in canonical order.
    pub fn downward_closure(&self) -> Vec<VertexSet> {
        let mut all: Vec<VertexSet> = self.terms.iter().flat_map(|t| t.subsets()).collect();
        all.sort();
        all.dedup();
        all
    }

    /// Free parameters: over the closure, the product of `(levels - 1)` per factor.
    pub fn num_parameters(&self, cardinalities: &[usize]) -> usize {
        self.downward_closure()
            .into_iter()
            .map(|s| s.iter().map(|k| cardinalities[k] - 1).product::<usize>())
            .sum()
    }

    /// Residual degrees of freedom against the saturated model. Sampling zeros are ignored.
    pub fn df(&self, cardinalities: &[usize]) -> usize {
        let cells: usize = cardinalities.iter().product();
        cells.saturating_sub(self.num_parameters(cardinalities))
    }

    /// True when every term of `other` lies inside some term of `self`.
    pub fn contains_model(&self, other: &GeneratingClass) -> bool {
        other.terms.iter().all(|t| self.terms.iter().any(|u| t.is_subset(*u)))
    }

    /// Checks the class against a table with `n` factors: every term in range, every factor
    /// covered.
    pub fn validate(&self, n: usize) -> Result<()> {
        let full = VertexSet::full(n);
        if self.terms.is_empty() {
            return Err(Error::InvalidModel(self.to_string(), "no terms".into()));
        }
        if !self.factors().is_subset(full) {
            return Err(Error::InvalidModel(self.to_string(), format!("refers to factors beyond the {n} in the table")));
        }
        if self.factors() != full {
            let missing = full.difference(self.factors());
            return Err(Error::InvalidModel(self.to_string(), format!("factors {missing:?} not covered")));
        }
        Ok(())
    }

    /// Bracket notation, e.g. `[AC][ADE][BC][BE][F]`. Terms are comma-separated inside brackets
    /// when any label is longer than one character.
    pub fn render<S: AsRef<str>>(&self, labels: &[S]) -> String {
        let sep = if labels.iter().any(|l| l.as_ref().chars().count() != 1) { "," } else { "" };
        self.terms
            .iter()
            .map(|t| {
                let names: Vec<&str> = t.iter().map(|k| labels[k].as_ref()).collect();
                format!("[{}]", names.join(sep))
            })
            .collect()
    }

    /// Parses bracket notation against a table's factor names and abbreviations.
    ///
    /// Inside a bracket, a comma-separated list is read as names (or abbreviations); a token
    /// without commas that exactly matches a name or abbreviation is that factor; anything else
    /// is read character by character as single-character abbreviations.
    pub fn parse(text: &str, table: &ContingencyTable) -> Result<Self> {
        let names = table.factor_names();
        let abbrevs = table.abbreviations();
        let lookup = |token: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| *n == token)
                .or_else(|| abbrevs.iter().position(|a| a == token))
                .ok_or_else(|| Error::UnknownFactor(token.to_string()))
        };
        let err = |msg: &str| Error::ModelParse(text.to_string(), msg.to_string());

        let mut terms = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(err("empty model"));
        }
        while !rest.is_empty() {
            let body = rest.strip_prefix('[').ok_or_else(|| err("expected `[`"))?;
            let close = body.find(']').ok_or_else(|| err("unclosed `[`"))?;
            let inner = body[..close].trim();
            if inner.is_empty() {
                return Err(err("empty term"));
            }
            let mut term = VertexSet::EMPTY;
            if inner.contains(',') {
                for tok in inner.split(',') {
                    term = term.with(lookup(tok.trim())?);
                }
            } else if let Ok(k) = lookup(inner) {
                term = term.with(k);
            } else {
                for c in inner.chars() {
                    term = term.with(lookup(&c.to_string())?);
                }
            }
            terms.push(term);
            rest = body[close + 1..].trim_start();
        }
        let gc = Self::new(terms);
        gc.validate(table.num_factors())?;
        Ok(gc)
    }
}

impl From<Vec<VertexSet>> for GeneratingClass {
    fn from(terms: Vec<VertexSet>) -> Self {
        Self::new(terms)
    }
}

impl From<GeneratingClass> for Vec<VertexSet> {
    fn from(gc: GeneratingClass) -> Self {
        gc.terms
    }
}

impl From<&VertexSetFamily> for GeneratingClass {
    fn from(f: &VertexSetFamily) -> Self {
        Self::new(f.iter())
    }
}

/// Renders with positional letters `A`, `B`, ...
impl fmt::Display for GeneratingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.factors().iter().last().map_or(0, |k| k + 1);
        let labels: Vec<String> = (0..n)
            .map(|i| if i < 26 { char::from(b'A' + i as u8).to_string() } else { format!("X{i}") })
            .collect();
        f.write_str(&self.render(&labels))
    }
}

impl fmt::Debug for GeneratingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratingClass({self})")
    }
}

/// Terms equal to `maximal_cliques(g)`.
pub fn graphical_model_of(g: &UndirectedGraph) -> GeneratingClass {
    GeneratingClass::graphical(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpfSettings {
    /// Largest tolerated absolute margin discrepancy.
    pub tol: f64,
    /// Maximum number of full sweeps over the generating class.
    pub max_iter: usize,
}

impl Default for IpfSettings {
    fn default() -> Self {
        IpfSettings { tol: 1e-10, max_iter: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: GeneratingClass,
    pub expected: ContingencyTable,
    /// Deviance `2 Σ O ln(O/E)`.
    pub g2: f64,
    /// Pearson `Σ (O-E)²/E`.
    pub x2: f64,
    pub df: usize,
    pub p_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub max_margin_error: f64,
}

/// Fits `gc` to `observed` by iterative proportional fitting from a uniform start.
///
/// Non-convergence is reported through `converged`, not as an error.
pub fn ipf_fit(observed: &ContingencyTable, gc: &GeneratingClass, settings: IpfSettings) -> Result<FitResult> {
    if settings.tol.is_nan() || settings.tol <= 0.0 || settings.max_iter == 0 {
        return Err(Error::InvalidIpfSettings);
    }
    gc.validate(observed.num_factors())?;

    let cards = observed.cardinalities();
    let obs = observed.counts();
    let margins: Vec<(MarginMap, Vec<f64>)> = gc
        .terms()
        .iter()
        .map(|&t| {
            let map = MarginMap::new(&cards, t);
            let target = map.sum(obs);
            (map, target)
        })
        .collect();

    let mut expected = vec![observed.total() / obs.len() as f64; obs.len()];
    let mut ratio = Vec::new();
    let mut iterations = 0;
    let mut max_error = f64::INFINITY;
    while iterations < settings.max_iter {
        iterations += 1;
        for (map, target) in &margins {
            let current = map.sum(&expected);
            ratio.clear();
            ratio.extend(target.iter().zip(&current).map(|(o, e)| if *e > 0.0 { o / e } else { 0.0 }));
            for (e, &t) in expected.iter_mut().zip(map.targets()) {
                *e *= ratio[t];
            }
        }
        max_error = margin_error(&margins, &expected);
        if max_error <= settings.tol {
            break;
        }
    }

    let (g2, x2) = statistics(obs, &expected);
    let converged = max_error <= settings.tol && g2.is_finite();
    let df = gc.df(&cards);
    let p_value = if df == 0 { 1.0 } else { chisq_sf(g2, df).unwrap_or(0.0) };
    Ok(FitResult {
        model: gc.clone(),
        expected: observed.with_counts(expected),
        g2,
        x2,
        df,
        p_value,
        iterations,
        converged,
        max_margin_error: max_error,
    })
}

fn margin_error(margins: &[(MarginMap, Vec<f64>)], expected: &[f64]) -> f64 {
    margins
        .iter()
        .flat_map(|(map, target)| {
            let current = map.sum(expected);
            debug_assert_eq!(current.len(), map.size());
            target.iter().zip(current).map(|(o, e)| (o - e).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// `(G², X²)`. Cells with `O = 0` add nothing to G²; `E = 0` with `O > 0` makes G² infinite.
fn statistics(obs: &[f64], expected: &[f64]) -> (f64, f64) {
    let mut g2 = 0.0;
    let mut x2 = 0.0;
    for (&o, &e) in obs.iter().zip(expected) {
        if o > 0.0 {
            g2 += if e > 0.0 { o * (o / e).ln() } else { f64::INFINITY };
        }
        if e > 0.0 {
            x2 += (o - e) * (o - e) / e;
        }
    }
    ((2.0 * g2).max(0.0), x2)
}
