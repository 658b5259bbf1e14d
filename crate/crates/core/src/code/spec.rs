use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BccError, Result};

/// A k = 2 code given by its qubit count and the odd offsets of its CZ graph.
///
/// Qubit `m` is on sublattice A when even and B when odd; even `m` and odd
/// `m'` share an edge iff `m' - m mod n` is in the offset set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct BccSpec {
    n: usize,
    offsets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    n: i64,
    #[serde(rename = "S")]
    offsets: Vec<i64>,
}

impl TryFrom<RawSpec> for BccSpec {
    type Error = BccError;
    fn try_from(raw: RawSpec) -> Result<Self> {
        if raw.n < 0 {
            return Err(BccError::InvalidSpec(format!("n = {} is negative", raw.n)));
        }
        BccSpec::new(raw.n as usize, &raw.offsets)
    }
}

impl From<BccSpec> for RawSpec {
    fn from(s: BccSpec) -> Self {
        RawSpec {
            n: s.n as i64,
            offsets: s.offsets.iter().map(|&o| o as i64).collect(),
        }
    }
}

impl BccSpec {
    /// Offsets may be negative; they are reduced mod `n` and sorted.
    pub fn new(n: usize, offsets: &[i64]) -> Result<Self> {
        if n < 4 || n % 2 == 1 {
            return Err(BccError::InvalidSpec(format!("n must be even and at least 4, got {n}")));
        }
        if offsets.is_empty() {
            return Err(BccError::InvalidSpec("offset set is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for &s in offsets {
            let r = s.rem_euclid(n as i64) as usize;
            if r % 2 == 0 {
                return Err(BccError::InvalidSpec(format!("offset {s} is not odd mod {n}")));
            }
            if !seen.insert(r) {
                return Err(BccError::InvalidSpec(format!("offset {s} repeats {r} mod {n}")));
            }
        }
        Ok(Self {
            n,
            offsets: seen.into_iter().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cycle length `n / 2`.
    pub fn n0(&self) -> usize {
        self.n / 2
    }

    /// Normalized offsets in ascending order.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn degree(&self) -> usize {
        self.offsets.len()
    }

    pub fn contains_offset(&self, s: usize) -> bool {
        self.offsets.binary_search(&(s % self.n)).is_ok()
    }

    /// Edges `(even, odd)`, ordered by ascending offset then ascending even end.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        self.offsets
            .iter()
            .flat_map(|&s| (0..n).step_by(2).map(move |m| (m, (m + s) % n)))
            .collect()
    }

    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let n = self.n;
        if q % 2 == 0 {
            self.offsets.iter().map(|&s| (q + s) % n).collect()
        } else {
            self.offsets.iter().map(|&s| (q + n - s) % n).collect()
        }
    }
}

impl fmt::Display for BccSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.offsets.iter().map(|o| o.to_string()).collect();
        write!(f, "n={}, S=[{}]", self.n, s.join(","))
    }
}

/// General cyclic bipartite graph over `k` columns of length `n0`.
///
/// Qubit `(m, j)` (with `1 <= j <= k`) has single index `m * k + (j - 1)`.
/// An edge offset `(j, j', l)` connects `(m, j)` to `(m + l, j')` for all `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralBccSpec {
    n0: usize,
    k: usize,
    a_columns: BTreeSet<usize>,
    edge_offsets: BTreeSet<(usize, usize, usize)>,
}

impl GeneralBccSpec {
    pub fn new(
        n0: usize,
        k: usize,
        a_columns: impl IntoIterator<Item = usize>,
        edge_offsets: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        if n0 == 0 || k < 2 {
            return Err(BccError::InvalidSpec(format!(
                "need n0 >= 1 and k >= 2, got n0={n0}, k={k}"
            )));
        }
        let a_columns: BTreeSet<usize> = a_columns.into_iter().collect();
        if a_columns.is_empty() {
            return Err(BccError::InvalidSpec("A column set is empty".into()));
        }
        if a_columns.iter().any(|&j| j == 0 || j > k) {
            return Err(BccError::InvalidSpec("A columns must lie in 1..=k".into()));
        }
        if a_columns.len() == k {
            return Err(BccError::InvalidSpec("B column set is empty".into()));
        }
        let mut edges = BTreeSet::new();
        for (j, jp, l) in edge_offsets {
            if !a_columns.contains(&j) || jp == 0 || jp > k || a_columns.contains(&jp) {
                return Err(BccError::InvalidSpec(format!(
                    "edge offset ({j}, {jp}, {l}) must run from an A column to a B column"
                )));
            }
            edges.insert((j, jp, l % n0));
        }
        if edges.is_empty() {
            return Err(BccError::InvalidSpec("no edges".into()));
        }
        Ok(Self {
            n0,
            k,
            a_columns,
            edge_offsets: edges,
        })
    }

    /// The k = 2 spec equivalent to `spec` under the single-index labeling.
    pub fn from_bcc(spec: &BccSpec) -> Self {
        let n0 = spec.n0();
        let edges = spec.offsets().iter().map(|&s| (1, 2, ((s - 1) / 2) % n0));
        Self::new(n0, 2, [1], edges).expect("valid BccSpec maps to a valid general spec")
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n0 * self.k
    }

    pub fn index(&self, m: usize, j: usize) -> usize {
        (m % self.n0) * self.k + (j - 1)
    }

    pub fn is_a_column(&self, j: usize) -> bool {
        self.a_columns.contains(&j)
    }

    pub fn edge_offsets(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.edge_offsets
    }

    /// Distinct undirected edges as `(a_qubit, b_qubit)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self
            .edge_offsets
            .iter()
            .flat_map(|&(j, jp, l)| (0..self.n0).map(move |m| (self.index(m, j), self.index(m + l, jp))))
            .collect();
        set.into_iter().collect()
    }
}
