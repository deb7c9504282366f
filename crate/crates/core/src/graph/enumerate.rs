//! Exhaustive enumeration of small connected graphs.
//!
//! Every upper-triangle bit pattern is visited in increasing numeric order;
//! bit `k` of a pattern is the `k`-th vertex pair in graph6 (column-major)
//! order. With dedup enabled only the lexicographically smallest labelling
//! of each isomorphism class is kept, so the output of a pattern range does
//! not depend on how the full range was partitioned.

use std::ops::Range;

use super::{Graph, GraphError};

pub const MAX_ENUMERATION_ORDER: usize = 7;

/// Number of upper-triangle bit patterns on `n` vertices.
pub fn pattern_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

pub fn enumerate_connected(n: usize, dedup: bool) -> Result<ConnectedGraphs, GraphError> {
    enumerate_connected_range(n, dedup, 0..pattern_count(n.min(MAX_ENUMERATION_ORDER)))
}

/// Restricts enumeration to the patterns in `patterns`, clipped to the
/// valid range for `n`.
pub fn enumerate_connected_range(
    n: usize,
    dedup: bool,
    patterns: Range<u64>,
) -> Result<ConnectedGraphs, GraphError> {
    if !(1..=MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(GraphError::OrderOutOfRange {
            n,
            min: 1,
            max: MAX_ENUMERATION_ORDER,
        });
    }
    let end = patterns.end.min(pattern_count(n));
    Ok(ConnectedGraphs {
        n,
        dedup,
        next: patterns.start.min(end),
        end,
    })
}

#[derive(Debug, Clone)]
pub struct ConnectedGraphs {
    n: usize,
    dedup: bool,
    next: u64,
    end: u64,
}

type Rows = [u8; MAX_ENUMERATION_ORDER];

fn rows_from_pattern(n: usize, pattern: u64) -> Rows {
    let mut rows = [0u8; MAX_ENUMERATION_ORDER];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if pattern >> k & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    rows
}

fn rows_connected(n: usize, rows: &Rows) -> bool {
    let full = ((1u16 << n) - 1) as u8;
    let mut reach = 1u8;
    loop {
        let mut grown = reach;
        let mut pending = reach;
        while pending != 0 {
            let v = pending.trailing_zeros() as usize;
            pending &= pending - 1;
            grown |= rows[v];
        }
        if grown == reach {
            return reach == full;
        }
        reach = grown;
    }
}

/// True iff no relabelling yields a lexicographically smaller pair string.
fn is_canonical(n: usize, rows: &Rows) -> bool {
    let mut perm = [0usize; MAX_ENUMERATION_ORDER];
    let mut used = 0u8;
    !smaller_exists(n, rows, 0, &mut perm, &mut used)
}

fn smaller_exists(n: usize, rows: &Rows, depth: usize, perm: &mut [usize], used: &mut u8) -> bool {
    if depth == n {
        return false;
    }
    for candidate in 0..n {
        if *used >> candidate & 1 == 1 {
            continue;
        }
        // column `depth` of the relabelled graph against the original column
        let mut order = std::cmp::Ordering::Equal;
        for (i, &pi) in perm.iter().enumerate().take(depth) {
            let relabelled = rows[pi] >> candidate & 1;
            let original = rows[i] >> depth & 1;
            if relabelled != original {
                order = relabelled.cmp(&original);
                break;
            }
        }
        match order {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => continue,
            std::cmp::Ordering::Equal => {
                perm[depth] = candidate;
                *used |= 1 << candidate;
                let found = smaller_exists(n, rows, depth + 1, perm, used);
                *used &= !(1 << candidate);
                if found {
                    return true;
                }
            }
        }
    }
    false
}

fn graph_from_rows(n: usize, rows: &Rows) -> Graph {
    Graph::from_edges(
        n,
        (0..n).flat_map(|u| {
            (u + 1..n)
                .filter(move |&v| rows[u] >> v & 1 == 1)
                .map(move |v| (u, v))
        }),
    )
    .expect("enumerated pattern is a valid graph")
}

impl Iterator for ConnectedGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next < self.end {
            let pattern = self.next;
            self.next += 1;
            let rows = rows_from_pattern(self.n, pattern);
            if rows_connected(self.n, &rows) && (!self.dedup || is_canonical(self.n, &rows)) {
                return Some(graph_from_rows(self.n, &rows));
            }
        }
        None
    }
}
