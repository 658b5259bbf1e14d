//! Bipartite cyclic cluster codes.
//!
//! A code is the CSS code whose state is prepared by initializing every qubit
//! in `|+>`, applying CZ along the edges of a cyclic bipartite graph and then
//! a Hadamard on the B sublattice. Pushing the initial-state stabilizers
//! `X_a X_b` (a, b in the same column) through the CZ layer gives the
//! generators: `{a, b}` plus the symmetric difference of their neighborhoods.

mod cyclic;
mod distance;
mod families;
mod spec;

use std::collections::BTreeSet;

use crate::error::{BccError, Result};
use crate::gf2::{BitMatrix, BitVector, Echelon, MaskBasis};
use crate::pauli::{PauliKind, PauliOperator};

pub use cyclic::{cyclic_cluster_transform, five_qubit_code, CyclicClusterCode};
pub use distance::{Distance, LogicalWeightEntry};
pub(crate) use families::gcd;
pub use families::{
    complement_offsets, multiplier_permutation, prepared_logical_state, rotated_toric_offsets,
    rotated_toric_plaquettes, PreparedState,
};
pub use spec::{BccSpec, GeneralBccSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeSpec {
    Offsets(BccSpec),
    General(GeneralBccSpec),
}

/// A logical pair `(X̄, Z̄)`.
pub type LogicalPair = (PauliOperator, PauliOperator);

#[derive(Clone, Debug)]
pub struct CssCode {
    spec: CodeSpec,
    n: usize,
    k: usize,
    in_a: Vec<bool>,
    adjacency: Vec<Vec<usize>>,
    hx: BitMatrix,
    hz: BitMatrix,
    logicals: Vec<LogicalPair>,
}

/// Generator support for the pushed pair `X_a X_b` (or `Z_a Z_b`).
fn pushed_pair(n: usize, adjacency: &[Vec<usize>], a: usize, b: usize) -> BitVector {
    let mut v = BitVector::from_indices(n, [a, b]);
    for &q in adjacency[a].iter().chain(&adjacency[b]) {
        v.flip(q);
    }
    v
}

impl CssCode {
    /// The k = 2 code of an offset set.
    pub fn from_offsets(spec: &BccSpec) -> Self {
        let n = spec.n();
        let adjacency = (0..n).map(|q| spec.neighbors(q)).collect();
        let in_a = (0..n).map(|q| q % 2 == 0).collect();
        Self::build(CodeSpec::Offsets(spec.clone()), n, 2, in_a, adjacency)
    }

    pub fn from_general_spec(spec: &GeneralBccSpec) -> Self {
        let n = spec.n();
        let k = spec.k();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in spec.edges() {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let in_a = (0..n).map(|q| spec.is_a_column(q % k + 1)).collect();
        Self::build(CodeSpec::General(spec.clone()), n, k, in_a, adjacency)
    }

    fn build(spec: CodeSpec, n: usize, k: usize, in_a: Vec<bool>, adjacency: Vec<Vec<usize>>) -> Self {
        let mut hx = BitMatrix::zeros(0, n);
        let mut hz = BitMatrix::zeros(0, n);
        for q in 0..n {
            let row = pushed_pair(n, &adjacency, q, (q + k) % n);
            if in_a[q] {
                hx.push_row(row);
            } else {
                hz.push_row(row);
            }
        }
        let mut code = Self {
            spec,
            n,
            k,
            in_a,
            adjacency,
            hx,
            hz,
            logicals: Vec::new(),
        };
        code.logicals = match code.product_logicals() {
            Ok(l) => l,
            Err(_) => code.symplectic_logical_basis(),
        };
        code
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// The offset spec, for codes built from one.
    pub fn bcc_spec(&self) -> Option<&BccSpec> {
        match &self.spec {
            CodeSpec::Offsets(s) => Some(s),
            CodeSpec::General(_) => None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of columns; also the cyclic shift that is a code automorphism.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn checks(&self, kind: PauliKind) -> &BitMatrix {
        match kind {
            PauliKind::X => &self.hx,
            PauliKind::Z => &self.hz,
        }
    }

    pub fn logicals(&self) -> &[LogicalPair] {
        &self.logicals
    }

    pub fn is_a(&self, q: usize) -> bool {
        self.in_a[q]
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// All generators, X-type rows first.
    pub fn generators(&self) -> Vec<PauliOperator> {
        self.hx
            .rows()
            .iter()
            .map(|r| PauliOperator::of_kind(PauliKind::X, r.clone()))
            .chain(
                self.hz
                    .rows()
                    .iter()
                    .map(|r| PauliOperator::of_kind(PauliKind::Z, r.clone())),
            )
            .collect()
    }

    /// Generators as a `2n`-column symplectic matrix.
    pub fn symplectic_generators(&self) -> BitMatrix {
        BitMatrix::from_rows(2 * self.n, self.generators().iter().map(|g| g.symplectic()).collect())
    }

    /// `n - rank` of the stacked generators.
    pub fn logical_count(&self) -> usize {
        self.n - self.hx.rank() - self.hz.rank()
    }

    /// True iff every X-check overlaps every Z-check evenly.
    pub fn checks_commute(&self) -> bool {
        self.hx.rows().iter().all(|x| self.hz.rows().iter().all(|z| !x.dot(z)))
    }

    /// Is `p` an element of the stabilizer group (ignoring sign)?
    pub fn is_stabilizer(&self, p: &PauliOperator) -> bool {
        Echelon::new(&self.hx).contains(p.x_support()) && Echelon::new(&self.hz).contains(p.z_support())
    }

    /// Does `p` commute with every generator?
    pub fn commutes_with_all(&self, p: &PauliOperator) -> bool {
        self.hz.mul_vec(p.x_support()).is_zero() && self.hx.mul_vec(p.z_support()).is_zero()
    }

    /// Commutes with the stabilizers without being one of them.
    pub fn is_nontrivial_logical(&self, p: &PauliOperator) -> bool {
        self.commutes_with_all(p) && !self.is_stabilizer(p)
    }

    /// Whole-sublattice products `(∏_A X, ∏_A Z)` and `(∏_B X, ∏_B Z)`.
    ///
    /// These anticommute pairwise only when the cycle length is odd.
    pub fn product_logicals(&self) -> Result<Vec<LogicalPair>> {
        if self.k != 2 {
            return Err(BccError::Precondition("product logicals need k = 2".into()));
        }
        let n0 = self.n / 2;
        if n0 % 2 == 0 {
            return Err(BccError::Precondition(format!(
                "product logicals need odd n0, got n0 = {n0}"
            )));
        }
        let a: Vec<usize> = (0..self.n).filter(|&q| self.in_a[q]).collect();
        let b: Vec<usize> = (0..self.n).filter(|&q| !self.in_a[q]).collect();
        Ok(vec![
            (
                PauliOperator::x_type(self.n, a.iter().copied()),
                PauliOperator::z_type(self.n, a.iter().copied()),
            ),
            (
                PauliOperator::x_type(self.n, b.iter().copied()),
                PauliOperator::z_type(self.n, b.iter().copied()),
            ),
        ])
    }

    /// A symplectic basis of the logical operators, found by quotienting the
    /// check kernels by the opposite check spans and pairing the results.
    pub fn symplectic_logical_basis(&self) -> Vec<LogicalPair> {
        let xs = quotient_basis(&self.hz.kernel_basis(), &self.hx);
        let zs = quotient_basis(&self.hx.kernel_basis(), &self.hz);
        debug_assert_eq!(xs.len(), zs.len());
        let k = xs.len();
        // pairing[i][j] = x_i · z_j; replacing z by (pairing⁻¹)ᵀ z diagonalizes it
        let pairing = BitMatrix::from_rows(
            k,
            xs.iter()
                .map(|x| BitVector::from_bools(&zs.iter().map(|z| x.dot(z)).collect::<Vec<_>>()))
                .collect(),
        );
        let inv = invert(&pairing).expect("logical pairing matrix is invertible");
        let zs: Vec<BitVector> = (0..k)
            .map(|j| {
                let mut z = BitVector::zeros(self.n);
                for (l, zl) in zs.iter().enumerate() {
                    if inv.row(l).get(j) {
                        z.xor_assign(zl);
                    }
                }
                z
            })
            .collect();
        xs.into_iter()
            .zip(zs)
            .map(|(x, z)| {
                (
                    PauliOperator::of_kind(PauliKind::X, x),
                    PauliOperator::of_kind(PauliKind::Z, z),
                )
            })
            .collect()
    }

    /// `U† X_m U` for `m` in A (X-type) or `U† Z_m U` for `m` in B (Z-type),
    /// written in the CSS frame: the qubit plus all of its neighbors.
    pub fn pushed_single_logical(&self, m: usize) -> Result<PauliOperator> {
        if m >= self.n {
            return Err(BccError::Precondition(format!(
                "qubit {m} out of range for n = {}",
                self.n
            )));
        }
        let support = self.adjacency[m].iter().copied().chain([m]);
        Ok(if self.in_a[m] {
            PauliOperator::x_type(self.n, support)
        } else {
            PauliOperator::z_type(self.n, support)
        })
    }

    /// True iff relabeling qubit `q` as `perm[q]` (then exchanging X and Z
    /// when `then_hadamard`) maps the stabilizer group onto itself.
    pub fn is_automorphism(&self, perm: &[usize], then_hadamard: bool) -> bool {
        if !is_permutation(perm, self.n) {
            return false;
        }
        let ex = Echelon::new(&self.hx);
        let ez = Echelon::new(&self.hz);
        let image = |row: &BitVector| BitVector::from_indices(self.n, row.ones().map(|q| perm[q]));
        let (x_target, z_target) = if then_hadamard { (&ez, &ex) } else { (&ex, &ez) };
        self.hx.rows().iter().all(|r| x_target.contains(&image(r)))
            && self.hz.rows().iter().all(|r| z_target.contains(&image(r)))
    }

    /// Shift of every qubit by one column period.
    pub fn shift_permutation(&self) -> Vec<usize> {
        (0..self.n).map(|q| (q + self.k) % self.n).collect()
    }

    /// True iff the X-check and Z-check row spaces coincide.
    pub fn self_orthogonal(&self) -> bool {
        self.hx.same_rowspace(&self.hz)
    }

    /// Stabilizer-group elements of a single type with weight in `1..=w`.
    ///
    /// Small groups are enumerated in full; larger ones fall back to pushed
    /// pairs `U X_a X_b U†` over same-column `a, b` and their pairwise products.
    pub fn low_weight_stabilizers(&self, w: usize) -> Vec<PauliOperator> {
        assert!(self.n <= 128, "low-weight stabilizer enumeration supports n <= 128");
        let mut out = Vec::new();
        for kind in [PauliKind::X, PauliKind::Z] {
            let checks = self.checks(kind);
            let masks: BTreeSet<u128> = if checks.num_rows() <= 30 {
                MaskBasis::new(checks.rows().iter().map(BitVector::to_u128))
                    .span()
                    .into_iter()
                    .collect()
            } else {
                let want_a = kind == PauliKind::X;
                let qubits: Vec<usize> = (0..self.n).filter(|&q| self.in_a[q] == want_a).collect();
                let mut pairs = Vec::new();
                for (i, &a) in qubits.iter().enumerate() {
                    for &b in &qubits[i + 1..] {
                        if a % self.k == b % self.k {
                            pairs.push(pushed_pair(self.n, &self.adjacency, a, b).to_u128());
                        }
                    }
                }
                let mut all: BTreeSet<u128> = pairs.iter().copied().collect();
                for (i, &p) in pairs.iter().enumerate() {
                    for &q in &pairs[i + 1..] {
                        all.insert(p ^ q);
                    }
                }
                all
            };
            for m in masks {
                let wt = m.count_ones() as usize;
                if wt >= 1 && wt <= w {
                    out.push(PauliOperator::of_kind(kind, BitVector::from_u128(self.n, m)));
                }
            }
        }
        out
    }

    /// Smallest weight of a nonzero stabilizer element, if one of weight
    /// `<= w` exists.
    pub fn min_stabilizer_weight(&self, w: usize) -> Option<usize> {
        self.low_weight_stabilizers(w).iter().map(PauliOperator::weight).min()
    }
}

fn quotient_basis(candidates: &BitMatrix, modulo: &BitMatrix) -> Vec<BitVector> {
    let mut ech = Echelon::new(modulo);
    candidates
        .rows()
        .iter()
        .filter(|v| ech.insert((*v).clone()))
        .cloned()
        .collect()
}

/// Inverse of a square GF(2) matrix.
fn invert(m: &BitMatrix) -> Option<BitMatrix> {
    let k = m.num_rows();
    let mut rows: Vec<(BitVector, BitVector)> = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), BitVector::from_indices(k, [i])))
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| rows[r].0.get(col))?;
        rows.swap(col, piv);
        let (pr, pi) = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && row.0.get(col) {
                row.0.xor_assign(&pr);
                row.1.xor_assign(&pi);
            }
        }
    }
    Some(BitMatrix::from_rows(k, rows.into_iter().map(|(_, inv)| inv).collect()))
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    true
}

/// The sublattice-swapping relabeling `m -> c - m` (c odd) that, followed by
/// a transversal Hadamard, is a code automorphism.
///
/// Scans `c = 1, 3, ...` and returns the first candidate preserving the edge
/// set of the CZ graph.
pub fn hadamard_swap_permutation(spec: &BccSpec) -> Result<Vec<usize>> {
    let n = spec.n();
    let edges: BTreeSet<(usize, usize)> = spec.edges().into_iter().collect();
    for c in (1..n).step_by(2) {
        let perm: Vec<usize> = (0..n).map(|m| (c + n - m) % n).collect();
        let preserved = edges.iter().all(|&(e, o)| {
            let (a, b) = (perm[e], perm[o]);
            let (even, odd) = if a % 2 == 0 { (a, b) } else { (b, a) };
            edges.contains(&(even, odd))
        });
        if preserved {
            return Ok(perm);
        }
    }
    Err(BccError::Verification(format!(
        "no sublattice-swapping relabeling preserves the graph of {spec}"
    )))
}
