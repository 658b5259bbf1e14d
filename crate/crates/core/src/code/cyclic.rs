//! Non-bipartite cyclic cluster codes on `n/2` qubits.

use std::collections::BTreeSet;

use super::{BccSpec, Distance};
use crate::error::{BccError, Result};
use crate::gf2::{BitMatrix, MaskBasis};
use crate::pauli::PauliOperator;

/// Maps an offset set on `n` qubits (with `n/2` odd) to a CZ offset set on
/// `n/2` qubits: add `n/2`, halve mod `n` taking the even root, reduce mod
/// `n/2`, and drop zero.
pub fn cyclic_cluster_transform(spec: &BccSpec) -> Result<(usize, Vec<usize>)> {
    let n = spec.n();
    let half = n / 2;
    if half % 2 == 0 {
        return Err(BccError::Precondition(format!("n/2 must be odd, got n = {n}")));
    }
    let mut t = BTreeSet::new();
    for &s in spec.offsets() {
        let v = (s + half) % n;
        debug_assert!(v % 2 == 0);
        // the two solutions of 2y = v (mod n) differ by the odd number n/2
        let y = if (v / 2) % 2 == 0 { v / 2 } else { v / 2 + half };
        let r = y % half;
        if r != 0 {
            t.insert(r);
        }
    }
    Ok((half, t.into_iter().collect()))
}

/// Code prepared by `|+>^n` followed by CZ between `i` and `i + t` for `t` in
/// the offset set. Its stabilizers are `U X_i X_{i+1} U†`.
#[derive(Clone, Debug)]
pub struct CyclicClusterCode {
    n: usize,
    offsets: Vec<usize>,
}

impl CyclicClusterCode {
    /// Offsets are reduced mod `n`; the set must be nonempty, avoid zero and be
    /// closed under negation.
    pub fn new(n: usize, offsets: &[i64]) -> Result<Self> {
        if n < 2 {
            return Err(BccError::InvalidSpec(format!("need at least 2 qubits, got {n}")));
        }
        let set: BTreeSet<usize> = offsets.iter().map(|&t| t.rem_euclid(n as i64) as usize).collect();
        if set.is_empty() {
            return Err(BccError::InvalidSpec("offset set is empty".into()));
        }
        if set.contains(&0) {
            return Err(BccError::InvalidSpec("offset 0 would be a self-loop".into()));
        }
        if let Some(t) = set.iter().find(|&&t| !set.contains(&(n - t))) {
            return Err(BccError::InvalidSpec(format!(
                "offset set is not symmetric: {t} without {}",
                n - t
            )));
        }
        Ok(Self {
            n,
            offsets: set.into_iter().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Cluster-state stabilizers `X_i ∏_t Z_{i+t}`.
    pub fn cluster_stabilizers(&self) -> Vec<PauliOperator> {
        (0..self.n)
            .map(|i| {
                let x = PauliOperator::x_type(self.n, [i]);
                let z = PauliOperator::z_type(self.n, self.offsets.iter().map(|t| (i + t) % self.n));
                x.mul(&z)
            })
            .collect()
    }

    /// Code generators `g_i g_{i+1}`.
    pub fn generators(&self) -> Vec<PauliOperator> {
        let g = self.cluster_stabilizers();
        (0..self.n).map(|i| g[i].mul(&g[(i + 1) % self.n])).collect()
    }

    pub fn symplectic_generators(&self) -> BitMatrix {
        BitMatrix::from_rows(
            2 * self.n,
            self.generators().iter().map(PauliOperator::symplectic).collect(),
        )
    }

    pub fn logical_count(&self) -> usize {
        self.n - self.symplectic_generators().rank()
    }

    /// Minimum weight of a Pauli that commutes with every generator without
    /// being a stabilizer. Needs `n <= 64`.
    pub fn distance(&self, w_max: usize) -> Distance {
        let n = self.n;
        assert!(n <= 64, "cyclic cluster distance supports n <= 64");
        let gens = self.generators();
        let indep =
            BitMatrix::from_rows(2 * n, gens.iter().map(PauliOperator::symplectic).collect()).independent_rows();
        let span = MaskBasis::new(indep.rows().iter().map(|r| {
            let p = PauliOperator::from_symplectic(r);
            p.x_support().to_u128() | (p.z_support().to_u128() << 64)
        }));
        // syndrome columns for X, Z, Y on each qubit
        let mut cols = vec![[0u128; 3]; n];
        for (r, row) in indep.rows().iter().enumerate() {
            let p = PauliOperator::from_symplectic(row);
            for q in 0..n {
                if p.z_support().get(q) {
                    cols[q][0] |= 1 << r;
                }
                if p.x_support().get(q) {
                    cols[q][1] |= 1 << r;
                }
            }
        }
        for c in &mut cols {
            c[2] = c[0] ^ c[1];
        }
        let search = PauliSearch { n, cols, span };
        (1..=w_max.min(n))
            .find(|&w| search.exists(w))
            .map_or(Distance::Exceeds(w_max), Distance::Exact)
    }
}

struct PauliSearch {
    n: usize,
    cols: Vec<[u128; 3]>,
    span: MaskBasis,
}

impl PauliSearch {
    /// Shift by one qubit is an automorphism, so qubit 0 is in the support.
    fn exists(&self, w: usize) -> bool {
        (0..3).any(|t| self.dfs(self.cols[0][t], Self::bits(0, t), 1, w - 1))
    }

    fn bits(q: usize, t: usize) -> u128 {
        match t {
            0 => 1u128 << q,
            1 => 1u128 << (q + 64),
            _ => (1u128 << q) | (1u128 << (q + 64)),
        }
    }

    fn dfs(&self, syn: u128, pauli: u128, start: usize, left: usize) -> bool {
        if left == 0 {
            return syn == 0 && !self.span.contains(pauli);
        }
        (start..=self.n - left)
            .any(|q| (0..3).any(|t| self.dfs(syn ^ self.cols[q][t], pauli | Self::bits(q, t), q + 1, left - 1)))
    }
}

/// The cyclic `[[5,1,3]]` code with generators `XZZXI` and its shifts.
pub fn five_qubit_code() -> Vec<PauliOperator> {
    let base = ['X', 'Z', 'Z', 'X', 'I'];
    (0..5)
        .map(|s| {
            let p: String = (0..5).map(|q| base[(q + 5 - s) % 5]).collect();
            p.parse().expect("valid Pauli string")
        })
        .collect()
}
