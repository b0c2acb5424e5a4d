//! Dense contingency tables.
//!
//! Cells are laid out in mixed-radix order with the last factor varying fastest. Counts are
//! `f64` so the same type carries observed and fitted tables.

use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{VertexSet, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub levels: Vec<String>,
}

impl Factor {
    pub fn new<S: Into<String>>(name: impl Into<String>, levels: impl IntoIterator<Item = S>) -> Self {
        Factor { name: name.into(), levels: levels.into_iter().map(Into::into).collect() }
    }

    pub fn cardinality(&self) -> usize {
        self.levels.len()
    }
}

/// One level ordinal per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellIndex(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    factors: Vec<Factor>,
    counts: Vec<f64>,
}

impl ContingencyTable {
    pub fn new(factors: Vec<Factor>, counts: Vec<f64>) -> Result<Self> {
        Self::validate_factors(&factors)?;
        let expected: usize = factors.iter().map(Factor::cardinality).product();
        if counts.len() != expected {
            return Err(Error::CountLength { expected, found: counts.len() });
        }
        if let Some(&c) = counts.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::NegativeCount { line: 0, value: c });
        }
        if counts.iter().sum::<f64>() <= 0.0 {
            return Err(Error::ZeroTotal);
        }
        Ok(ContingencyTable { factors, counts })
    }

    fn validate_factors(factors: &[Factor]) -> Result<()> {
        if factors.is_empty() {
            return Err(Error::TooFewFactors(1));
        }
        if factors.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices { max: MAX_VERTICES, found: factors.len() });
        }
        for (i, f) in factors.iter().enumerate() {
            if factors[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::DuplicateFactor(f.name.clone()));
            }
            if f.levels.len() < 2 {
                return Err(Error::TooFewLevels(f.name.clone()));
            }
            for (j, l) in f.levels.iter().enumerate() {
                if f.levels[..j].contains(l) {
                    return Err(Error::DuplicateLevel { factor: f.name.clone(), level: l.clone() });
                }
            }
        }
        Ok(())
    }

    /// Same factors, different counts. Used for fitted tables, which may contain zeros but
    /// never negative values.
    pub(crate) fn with_counts(&self, counts: Vec<f64>) -> Self {
        debug_assert_eq!(counts.len(), self.counts.len());
        ContingencyTable { factors: self.factors.clone(), counts }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor_names(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn num_cells(&self) -> usize {
        self.counts.len()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::cardinality).collect()
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn all_factors(&self) -> VertexSet {
        VertexSet::full(self.factors.len())
    }

    pub fn factor_index(&self, name: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    pub fn factor_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names.iter().try_fold(VertexSet::EMPTY, |acc, n| Ok(acc.with(self.factor_index(n.as_ref())?)))
    }

    /// Short labels for bracket notation: the names themselves when every name is a single
    /// character, otherwise `A`, `B`, ... by position (names again past 26 factors).
    pub fn abbreviations(&self) -> Vec<String> {
        let single = self.factors.iter().all(|f| f.name.chars().count() == 1);
        if single || self.factors.len() > 26 {
            self.factors.iter().map(|f| f.name.clone()).collect()
        } else {
            (0..self.factors.len()).map(|i| char::from(b'A' + i as u8).to_string()).collect()
        }
    }

    /// Mixed-radix strides, last factor fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factors.len()];
        for k in (0..self.factors.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.factors[k + 1].cardinality();
        }
        strides
    }

    pub fn cell_to_linear(&self, cell: &CellIndex) -> Result<usize> {
        if cell.0.len() != self.factors.len() {
            return Err(Error::DimensionMismatch { expected: self.factors.len(), found: cell.0.len() });
        }
        let mut idx = 0;
        for (f, &ord) in self.factors.iter().zip(&cell.0) {
            if ord >= f.cardinality() {
                return Err(Error::OrdinalOutOfRange {
                    factor: f.name.clone(),
                    ordinal: ord,
                    levels: f.cardinality(),
                });
            }
            idx = idx * f.cardinality() + ord;
        }
        Ok(idx)
    }

    pub fn linear_to_cell(&self, mut index: usize) -> Option<CellIndex> {
        if index >= self.counts.len() {
            return None;
        }
        let mut levels = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            levels[k] = index % f.cardinality();
            index /= f.cardinality();
        }
        Some(CellIndex(levels))
    }

    pub fn count(&self, cell: &CellIndex) -> Result<f64> {
        Ok(self.counts[self.cell_to_linear(cell)?])
    }

    /// Sums over every factor not named in `keep`. Kept factors retain table order.
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<ContingencyTable> {
        if keep.is_empty() {
            return Err(Error::EmptyFactorSet);
        }
        let set = self.factor_set(keep)?;
        Ok(self.marginalize_set(set))
    }

    /// Margin over a non-empty factor set.
    pub fn marginalize_set(&self, keep: VertexSet) -> ContingencyTable {
        assert!(!keep.is_empty(), "margin needs at least one factor");
        let map = MarginMap::new(&self.cardinalities(), keep);
        let counts = map.sum(&self.counts);
        let factors = keep.iter().map(|k| self.factors[k].clone()).collect();
        ContingencyTable { factors, counts }
    }

    /// Counts CSV: one header row of factor names and `count`, then one row per cell.
    pub fn parse_counts_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
        let header: Vec<&str> = header.split(',').map(str::trim).collect();
        if header.len() < 2 || header.last() != Some(&"count") {
            return Err(Error::BadHeader);
        }
        let names = &header[..header.len() - 1];
        if names.iter().any(|n| n.is_empty()) {
            return Err(Error::BadHeader);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateFactor(n.to_string()));
            }
        }
        let p = names.len();

        let mut levels: Vec<Vec<String>> = vec![Vec::new(); p];
        let mut rows: Vec<(usize, Vec<usize>, f64)> = Vec::new();
        for (line, raw) in lines {
            let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
            if fields.len() != p + 1 {
                return Err(Error::FieldCount { line, expected: p + 1, found: fields.len() });
            }
            let mut ords = Vec::with_capacity(p);
            for (k, label) in fields[..p].iter().enumerate() {
                if label.is_empty() {
                    return Err(Error::EmptyLabel { line });
                }
                let ord = match levels[k].iter().position(|l| l == label) {
                    Some(o) => o,
                    None => {
                        levels[k].push(label.to_string());
                        levels[k].len() - 1
                    }
                };
                ords.push(ord);
            }
            let value = fields[p];
            let count: f64 = value
                .parse()
                .ok()
                .filter(|c: &f64| c.is_finite())
                .ok_or_else(|| Error::InvalidCount { line, value: value.to_string() })?;
            if count < 0.0 {
                return Err(Error::NegativeCount { line, value: count });
            }
            rows.push((line, ords, count));
        }

        let factors: Vec<Factor> = names
            .iter()
            .zip(levels)
            .map(|(n, l)| Factor { name: n.to_string(), levels: l })
            .collect();
        if let Some(f) = factors.iter().find(|f| f.levels.len() < 2) {
            return Err(Error::TooFewLevels(f.name.clone()));
        }
        if factors.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices { max: MAX_VERTICES, found: factors.len() });
        }

        let size: usize = factors.iter().map(Factor::cardinality).product();
        let mut counts = vec![0.0; size];
        let mut seen = vec![false; size];
        for (line, ords, count) in rows {
            let idx = ords.iter().zip(&factors).fold(0, |acc, (&o, f)| acc * f.cardinality() + o);
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::DuplicateCell { line });
            }
            counts[idx] = count;
        }
        ContingencyTable::new(factors, counts)
    }

    pub fn read_counts_csv<R: Read>(mut reader: R) -> std::io::Result<Result<Self>> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Ok(Self::parse_counts_csv(&text))
    }

    /// Writes every cell, zeros included, in linear order.
    pub fn to_counts_csv(&self) -> String {
        let mut out = String::new();
        for f in &self.factors {
            out.push_str(&f.name);
            out.push(',');
        }
        out.push_str("count\n");
        for (i, c) in self.counts.iter().enumerate() {
            let cell = self.linear_to_cell(i).expect("index in range");
            for (f, &o) in self.factors.iter().zip(&cell.0) {
                out.push_str(&f.levels[o]);
                out.push(',');
            }
            let _ = writeln!(out, "{c}");
        }
        out
    }
}

/// Precomputed cell → margin-cell mapping for one factor subset.
#[derive(Clone, Debug)]
pub(crate) struct MarginMap {
    targets: Vec<usize>,
    size: usize,
}

impl MarginMap {
    pub(crate) fn new(cardinalities: &[usize], keep: VertexSet) -> Self {
        let total: usize = cardinalities.iter().product();
        // Margin strides, last kept factor fastest.
        let mut margin_stride = vec![0usize; cardinalities.len()];
        let mut size = 1;
        for k in (0..cardinalities.len()).rev() {
            if keep.contains(k) {
                margin_stride[k] = size;
                size *= cardinalities[k];
            }
        }
        let mut targets = Vec::with_capacity(total);
        let mut digits = vec![0usize; cardinalities.len()];
        let mut target = 0usize;
        for _ in 0..total {
            targets.push(target);
            for k in (0..cardinalities.len()).rev() {
                digits[k] += 1;
                target += margin_stride[k];
                if digits[k] < cardinalities[k] {
                    break;
                }
                target -= margin_stride[k] * digits[k];
                digits[k] = 0;
            }
        }
        MarginMap { targets, size }
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub(crate) fn sum(&self, counts: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.size];
        for (c, &t) in counts.iter().zip(&self.targets) {
            out[t] += c;
        }
        out
    }
}
