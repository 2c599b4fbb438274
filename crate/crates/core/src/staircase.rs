//! Monotone threshold rows and the greedy merge that builds them.
//!
//! A row maps a count exponent `j` to the smallest length at which (roughly)
//! `q^j` paths are available. Rows are step functions with few distinct
//! values, so they are stored run-length encoded: finite on a prefix
//! `0..finite_len`, `+inf` afterwards.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Range;

use num_rational::BigRational;
use num_traits::Zero;

use crate::numeric::{DyadicBase, Extended};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Run {
    value: BigRational,
    end: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Row {
    runs: Vec<Run>,
}

impl Row {
    /// The all-`+inf` row.
    pub fn unreachable() -> Row {
        Row::default()
    }

    /// The source row: one path of length 0, nothing more.
    pub fn source() -> Row {
        Row {
            runs: vec![Run {
                value: BigRational::zero(),
                end: 1,
            }],
        }
    }

    /// Builds a row from dense values. Everything after the first `+inf`
    /// must be `+inf` as well; `-inf` is not representable.
    pub fn from_values(values: &[Extended]) -> Row {
        let mut row = Row::default();
        let mut closed = false;
        for (j, v) in values.iter().enumerate() {
            match v {
                Extended::Finite(x) => {
                    assert!(!closed, "finite entry after +inf at index {j}");
                    row.push_run(x.clone(), j + 1);
                }
                Extended::Infinity => closed = true,
                Extended::NegInfinity => panic!("-inf entry at index {j}"),
            }
        }
        row
    }

    /// Number of leading finite entries.
    pub fn finite_len(&self) -> usize {
        self.runs.last().map_or(0, |r| r.end)
    }

    pub fn value(&self, j: usize) -> Option<&BigRational> {
        self.run_at(j).map(|(_, v)| v)
    }

    pub fn get(&self, j: usize) -> Extended {
        self.value(j)
            .map_or(Extended::Infinity, |v| Extended::Finite(v.clone()))
    }

    /// Maximal constant stretches `(indices, value)` of the finite prefix.
    pub fn runs(&self) -> impl Iterator<Item = (Range<usize>, &BigRational)> + '_ {
        let mut start = 0;
        self.runs.iter().map(move |r| {
            let range = start..r.end;
            start = r.end;
            (range, &r.value)
        })
    }

    pub fn to_dense(&self, len: usize) -> Vec<Extended> {
        (0..len).map(|j| self.get(j)).collect()
    }

    /// Largest `j` with `row[j] <= x`, for a monotone row.
    pub fn last_index_at_most(&self, x: &BigRational) -> Option<usize> {
        let k = self.runs.partition_point(|r| &r.value <= x);
        (k > 0).then(|| self.runs[k - 1].end - 1)
    }

    pub fn is_monotone(&self) -> bool {
        self.runs.windows(2).all(|w| w[0].value <= w[1].value)
    }

    /// Pointwise `self <= other` over all indices, `+inf` included.
    pub fn pointwise_le(&self, other: &Row) -> bool {
        let len = self.finite_len().max(other.finite_len());
        (0..len).all(|j| self.get(j) <= other.get(j))
    }

    /// End (exclusive) and value of the run containing `j`.
    fn run_at(&self, j: usize) -> Option<(usize, &BigRational)> {
        let k = self.runs.partition_point(|r| r.end <= j);
        self.runs.get(k).map(|r| (r.end, &r.value))
    }

    fn push_run(&mut self, value: BigRational, end: usize) {
        match self.runs.last_mut() {
            Some(last) if last.value == value => last.end = end,
            _ => self.runs.push(Run { value, end }),
        }
    }
}

/// One incoming edge as seen by the greedy merge: the predecessor's row and
/// the length the edge adds.
pub(crate) struct Feed<'a> {
    pub row: &'a Row,
    pub added: &'a BigRational,
}

/// Merges predecessor rows into the row of their common head.
///
/// Every feed starts unused. The feed whose next level is cheapest
/// (predecessor value plus added length; ties go to the lower feed index)
/// moves up one level, and the accumulator `A = sum of q^level` over used
/// feeds grows. Entry `j` receives the current maximum the first time
/// `A > q^(j-1)`. Runs of equal predecessor values are consumed in one
/// step: with fixed tie-breaking the same feed would be picked repeatedly and
/// every threshold crossed on the way would get the same value.
pub(crate) fn greedy_row(feeds: &[Feed<'_>], base: DyadicBase, s_max: usize) -> Row {
    let mut levels: Vec<Option<usize>> = vec![None; feeds.len()];
    let mut heap = BinaryHeap::new();
    for (i, f) in feeds.iter().enumerate() {
        if let Some(v) = f.row.value(0) {
            heap.push(Reverse((v + f.added, i)));
        }
    }
    let mut out = Row::default();
    let mut used = Vec::with_capacity(feeds.len());
    while let Some(Reverse((key, i))) = heap.pop() {
        let feed = &feeds[i];
        let next = levels[i].map_or(0, |k| k + 1);
        let (run_end, _) = feed.row.run_at(next).expect("queued levels are finite");
        let level = (run_end - 1).min(s_max);
        levels[i] = Some(level);

        used.clear();
        used.extend(levels.iter().flatten());
        let reach = base.ceil_log_sum(&used).min(s_max);
        if reach + 1 > out.finite_len() {
            debug_assert!(out.runs.last().is_none_or(|r| r.value <= key));
            out.push_run(key, reach + 1);
        }
        if out.finite_len() > s_max {
            break;
        }
        if level < s_max {
            if let Some(v) = feed.row.value(level + 1) {
                heap.push(Reverse((v + feed.added, i)));
            }
        }
    }
    out
}
