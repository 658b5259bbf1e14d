//! Exact minimum-weight logical search by support enumeration.
//!
//! An X-type support is a logical iff it has zero syndrome against the
//! Z-checks and lies outside the X-check span (and dually for Z). Supports are
//! packed into `u128`, so these routines need `n <= 128`.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CssCode;
use crate::gf2::{BitMatrix, MaskBasis};
use crate::pauli::PauliKind;

/// Result of a bounded distance computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Distance {
    Exact(usize),
    /// No logical of weight `<=` the bound exists.
    Exceeds(usize),
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::Exceeds(_) => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::Exceeds(w) => write!(f, "> {w}"),
        }
    }
}

/// A logical operator found during enumeration, with its A/B weight split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalWeightEntry {
    pub kind: PauliKind,
    pub w_a: usize,
    pub w_b: usize,
    pub support: Vec<usize>,
}

/// Precomputed data for enumerating one logical type.
pub(crate) struct LogicalSearch {
    n: usize,
    /// Syndrome of a single qubit against the opposite-type checks.
    columns: Vec<u128>,
    same_span: MaskBasis,
}

impl LogicalSearch {
    pub(crate) fn new(opposite: &BitMatrix, same: &BitMatrix) -> Self {
        let n = opposite.num_cols();
        assert!(n <= 128, "support enumeration needs n <= 128, got {n}");
        // Syndromes live in a u128, one bit per independent opposite check.
        let indep = opposite.independent_rows();
        assert!(indep.num_rows() <= 128);
        let mut columns = vec![0u128; n];
        for (r, row) in indep.rows().iter().enumerate() {
            for q in row.ones() {
                columns[q] |= 1u128 << r;
            }
        }
        Self {
            n,
            columns,
            same_span: MaskBasis::new(same.rows().iter().map(|r| r.to_u128())),
        }
    }

    fn for_code(code: &CssCode, kind: PauliKind) -> Self {
        Self::new(code.checks(kind.dual()), code.checks(kind))
    }

    #[inline]
    fn is_logical(&self, syndrome: u128, support: u128) -> bool {
        syndrome == 0 && !self.same_span.contains(support)
    }

    /// Is there a logical of exactly weight `w` whose lowest qubit is below
    /// `first_below`?
    pub(crate) fn exists_with_weight(&self, w: usize, first_below: usize) -> bool {
        if w == 0 || w > self.n {
            return false;
        }
        let found = AtomicBool::new(false);
        let prefixes: Vec<(usize, Option<usize>)> = (0..first_below.min(self.n))
            .flat_map(|f| {
                if w == 1 {
                    vec![(f, None)]
                } else {
                    (f + 1..self.n).map(|s| (f, Some(s))).collect()
                }
            })
            .collect();
        prefixes.par_iter().any(|&(f, second)| {
            let (syn, mask, start, left) = match second {
                None => (self.columns[f], 1u128 << f, f + 1, 0),
                Some(s) => (
                    self.columns[f] ^ self.columns[s],
                    (1u128 << f) | (1u128 << s),
                    s + 1,
                    w - 2,
                ),
            };
            self.dfs_any(syn, mask, start, left, &found)
        })
    }

    fn dfs_any(&self, syn: u128, mask: u128, start: usize, left: usize, stop: &AtomicBool) -> bool {
        if left == 0 {
            if self.is_logical(syn, mask) {
                stop.store(true, Ordering::Relaxed);
                return true;
            }
            return false;
        }
        if stop.load(Ordering::Relaxed) {
            return false;
        }
        for q in start..=self.n - left {
            if self.dfs_any(syn ^ self.columns[q], mask | (1u128 << q), q + 1, left - 1, stop) {
                return true;
            }
        }
        false
    }

    /// Every logical support of weight exactly `w`.
    pub(crate) fn all_with_weight(&self, w: usize) -> Vec<u128> {
        let mut out = Vec::new();
        self.dfs_all(0, 0, 0, w, &mut out);
        out
    }

    fn dfs_all(&self, syn: u128, mask: u128, start: usize, left: usize, out: &mut Vec<u128>) {
        if left == 0 {
            if mask != 0 && self.is_logical(syn, mask) {
                out.push(mask);
            }
            return;
        }
        for q in start..=self.n.saturating_sub(left) {
            self.dfs_all(syn ^ self.columns[q], mask | (1u128 << q), q + 1, left - 1, out);
        }
    }
}

impl CssCode {
    /// Minimum logical weight of each type, up to `w_max`.
    ///
    /// Shifting every qubit by `k` is an automorphism, so the lowest qubit of
    /// some minimum-weight logical can be taken in `0..k`.
    pub fn distance_by_type(&self, w_max: usize) -> (Distance, Distance) {
        let per_type = |kind| {
            let search = LogicalSearch::for_code(self, kind);
            (1..=w_max)
                .find(|&w| search.exists_with_weight(w, self.k()))
                .map_or(Distance::Exceeds(w_max), Distance::Exact)
        };
        (per_type(PauliKind::X), per_type(PauliKind::Z))
    }

    /// Exact code distance `min(d_X, d_Z)`, or `Exceeds(w_max)`.
    pub fn distance(&self, w_max: usize) -> Distance {
        let sx = LogicalSearch::for_code(self, PauliKind::X);
        let sz = LogicalSearch::for_code(self, PauliKind::Z);
        (1..=w_max)
            .find(|&w| sx.exists_with_weight(w, self.k()) || sz.exists_with_weight(w, self.k()))
            .map_or(Distance::Exceeds(w_max), Distance::Exact)
    }

    /// True iff some logical has weight below `bound`. Scans low weights first.
    pub fn has_logical_below(&self, bound: usize) -> bool {
        matches!(self.distance(bound.saturating_sub(1)), Distance::Exact(_))
    }

    /// Every pure-type logical of weight `<= w`, with its sublattice split.
    pub fn logical_weight_profile(&self, w: usize) -> Vec<LogicalWeightEntry> {
        let mut out = Vec::new();
        for kind in [PauliKind::X, PauliKind::Z] {
            let search = LogicalSearch::for_code(self, kind);
            for weight in 1..=w {
                for mask in search.all_with_weight(weight) {
                    let support: Vec<usize> = (0..self.n()).filter(|&q| (mask >> q) & 1 == 1).collect();
                    let w_a = support.iter().filter(|&&q| self.is_a(q)).count();
                    out.push(LogicalWeightEntry {
                        kind,
                        w_a,
                        w_b: support.len() - w_a,
                        support,
                    });
                }
            }
        }
        out
    }
}
