//! Literal checkers for the r-limit and r-fundamental definitions.
//!
//! These scan the prefix element by element (and pair by pair) exactly as the
//! definitions read, with `for all k > 0` replaced by a finite descending grid
//! of `k` values. They are slow on purpose and exist to cross-check the
//! envelope formulas in [`crate::sequence_limits`].

use serde::{Deserialize, Serialize};

use crate::sequence_limits::SequenceWindow;

/// Share of the prefix that may precede the tail. The tail a definition
/// asks for must start no later than this point to count as attained.
pub const TAIL_ATTAINMENT: f64 = 0.9;

/// Largest number of elements the pairwise check compares directly.
pub const PAIRWISE_CAP: usize = 2000;

pub fn default_k_grid() -> Vec<f64> {
    vec![1.0, 1e-1, 1e-2, 1e-3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub holds: bool,
    /// When `holds`: first sequence index of a tail satisfying the condition
    /// for the finest `k`. Otherwise: index of a violating element inside the
    /// last `1 - TAIL_ATTAINMENT` of the prefix.
    pub witness_index: Option<usize>,
    pub k_grid: Vec<f64>,
}

fn attained(seq: &SequenceWindow, tail_start_pos: usize) -> bool {
    tail_start_pos as f64 <= TAIL_ATTAINMENT * seq.len() as f64
}

fn checked_grid(k_grid: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = k_grid.iter().copied().filter(|k| *k > 0.0).collect();
    if grid.is_empty() {
        grid = default_k_grid();
    }
    grid.sort_by(|a, b| b.total_cmp(a));
    grid
}

/// Is `a` an r-limit of the prefix? For every `k` finds the last element with
/// `|a - a_i| > r + k`; the tail after it must start within the first 90%.
pub fn is_r_limit_direct(seq: &SequenceWindow, a: f64, r: f64, k_grid: &[f64]) -> OracleVerdict {
    let grid = checked_grid(k_grid);
    let values = seq.values();
    let mut witness = None;
    for &k in &grid {
        let last_violation = values.iter().rposition(|&v| (a - v).abs() > r + k);
        let tail_start = last_violation.map_or(0, |p| p + 1);
        if !attained(seq, tail_start) {
            return OracleVerdict {
                holds: false,
                witness_index: last_violation.map(|p| seq.index_of(p)),
                k_grid: grid,
            };
        }
        witness = Some(seq.index_of(tail_start));
    }
    OracleVerdict {
        holds: true,
        witness_index: witness,
        k_grid: grid,
    }
}

/// Positions compared by the pairwise check, newest first.
fn pairwise_positions(len: usize) -> Vec<usize> {
    let tail = len - (TAIL_ATTAINMENT * len as f64).floor() as usize;
    if len <= PAIRWISE_CAP {
        (0..len).rev().collect()
    } else if tail <= PAIRWISE_CAP {
        (len - PAIRWISE_CAP..len).rev().collect()
    } else {
        // even subsample of the required tail
        let start = len - tail;
        (0..PAIRWISE_CAP)
            .map(|j| start + j * (tail - 1) / (PAIRWISE_CAP - 1))
            .rev()
            .collect()
    }
}

/// Is the prefix r-fundamental? Checks `|a_i - a_j| <= 2r + k` over all pairs
/// of the tail, scanning backwards until the first violating pair.
pub fn is_r_fundamental_direct(seq: &SequenceWindow, r: f64, k_grid: &[f64]) -> OracleVerdict {
    let grid = checked_grid(k_grid);
    let values = seq.values();
    let positions = pairwise_positions(values.len());

    // finest k first; a looser bound resumes the scan where the stricter stopped
    let mut scanned = 0usize;
    let mut finest_tail: Option<usize> = None;
    for &k in grid.iter().rev() {
        let bound = 2.0 * r + k;
        let mut violation = None;
        while scanned < positions.len() {
            let p = positions[scanned];
            let clash = positions[..scanned]
                .iter()
                .any(|&q| (values[p] - values[q]).abs() > bound);
            if clash {
                violation = Some(p);
                break;
            }
            scanned += 1;
        }
        let tail_start = match violation {
            Some(p) => p + 1,
            None => positions.last().copied().unwrap_or(0),
        };
        if !attained(seq, tail_start) {
            return OracleVerdict {
                holds: false,
                witness_index: violation.map(|p| seq.index_of(p)),
                k_grid: grid,
            };
        }
        finest_tail.get_or_insert(tail_start);
    }
    OracleVerdict {
        holds: true,
        witness_index: finest_tail.map(|p| seq.index_of(p)),
        k_grid: grid,
    }
}

/// Weak r-derivative check along one approach sequence: the caller supplies
/// the difference quotients, and `b` must be an r-limit of them.
pub fn weak_quotient_limit_direct(
    quotients: &SequenceWindow,
    b: f64,
    r: f64,
    k_grid: &[f64],
) -> OracleVerdict {
    is_r_limit_direct(quotients, b, r, k_grid)
}
