//! Empirical detection of stabilizing Betti degrees across widths.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::BettiTable;

pub const DEFAULT_MIN_CONSECUTIVE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityStatus {
    Stable,
    NotYetStable,
}

impl fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityStatus::Stable => "Stable",
            StabilityStatus::NotYetStable => "NotYetStable",
        })
    }
}

/// The verdict for one homological degree `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationEntry {
    pub p: usize,
    /// `max j` with `β_{n,p,j} ≠ 0` over all scanned widths.
    pub max_degree: Option<i64>,
    /// Nonzero degrees at the largest scanned width, increasing.
    pub degrees: Vec<i64>,
    /// First width from which the degree set is constant through the
    /// largest scanned width.
    pub onset_width: Option<usize>,
    pub status: StabilityStatus,
    pub widths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub min_consecutive: usize,
    pub entries: Vec<StabilizationEntry>,
}

fn degree_set(table: &BettiTable, n: usize, p: usize) -> BTreeSet<i64> {
    table.row(n, p).into_keys().collect()
}

/// Stable iff the set of nonzero degrees at `p` is identical across the last
/// `min_consecutive` scanned widths, which must be consecutive integers.
pub fn detect(table: &BettiTable, p: usize, min_consecutive: usize) -> Result<StabilizationEntry> {
    let widths = table.widths();
    let Some(&last) = widths.last() else {
        return Err(Error::InsufficientData("the Betti table has no widths".into()));
    };
    let target = degree_set(table, last, p);
    // walk back over consecutive widths carrying the same degree set
    let mut onset = last;
    let mut run = 1;
    for w in widths.iter().rev().skip(1) {
        if *w + 1 != onset || degree_set(table, *w, p) != target {
            break;
        }
        onset = *w;
        run += 1;
    }
    let max_degree = widths
        .iter()
        .filter_map(|&n| table.row(n, p).keys().next_back().copied())
        .max();
    let stable = widths.len() > 1 && run >= min_consecutive;
    Ok(StabilizationEntry {
        p,
        max_degree,
        degrees: target.into_iter().collect(),
        onset_width: stable.then_some(onset),
        status: if stable {
            StabilityStatus::Stable
        } else {
            StabilityStatus::NotYetStable
        },
        widths,
    })
}

pub fn detect_all(
    table: &BettiTable,
    ps: impl IntoIterator<Item = usize>,
    min_consecutive: usize,
) -> Result<StabilizationReport> {
    let entries = ps
        .into_iter()
        .map(|p| detect(table, p, min_consecutive))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizationReport {
        min_consecutive,
        entries,
    })
}
