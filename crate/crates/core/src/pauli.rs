//! Hermitian Pauli operators with a ±1 sign.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BccError, Result};
use crate::gf2::BitVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliKind {
    X,
    Z,
}

impl PauliKind {
    pub fn dual(self) -> Self {
        match self {
            PauliKind::X => PauliKind::Z,
            PauliKind::Z => PauliKind::X,
        }
    }
}

impl fmt::Display for PauliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliKind::X => "X",
            PauliKind::Z => "Z",
        })
    }
}

/// `sign · ⊗ P_q` where qubit `q` carries I, X, Z or Y according to its
/// `(x, z)` bits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    x: BitVector,
    z: BitVector,
    negative: bool,
}

/// Exponent of `i` in the product of single-qubit Paulis `(x1,z1)·(x2,z2)`,
/// as counts of `+i` and `-i` factors over a word.
#[inline]
pub(crate) fn phase_counts(x1: u64, z1: u64, x2: u64, z2: u64) -> (u32, u32) {
    let plus = (x1 & z1 & z2 & !x2) | (x1 & !z1 & z2 & x2) | (!x1 & z1 & x2 & !z2);
    let minus = (x1 & z1 & x2 & !z2) | (x1 & !z1 & z2 & !x2) | (!x1 & z1 & x2 & z2);
    (plus.count_ones(), minus.count_ones())
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
            negative: false,
        }
    }

    pub fn new(x: BitVector, z: BitVector, negative: bool) -> Self {
        assert_eq!(x.len(), z.len());
        Self { x, z, negative }
    }

    pub fn x_type(n: usize, support: impl IntoIterator<Item = usize>) -> Self {
        Self::new(BitVector::from_indices(n, support), BitVector::zeros(n), false)
    }

    pub fn z_type(n: usize, support: impl IntoIterator<Item = usize>) -> Self {
        Self::new(BitVector::zeros(n), BitVector::from_indices(n, support), false)
    }

    pub fn of_kind(kind: PauliKind, support: BitVector) -> Self {
        let zeros = BitVector::zeros(support.len());
        match kind {
            PauliKind::X => Self::new(support, zeros, false),
            PauliKind::Z => Self::new(zeros, support, false),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_support(&self) -> &BitVector {
        &self.x
    }

    pub fn z_support(&self) -> &BitVector {
        &self.z
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negative = !p.negative;
        p
    }

    pub fn support(&self) -> BitVector {
        self.x.or(&self.z)
    }

    pub fn weight(&self) -> usize {
        self.support().weight()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Pure X or pure Z, if the operator is one of those.
    pub fn kind(&self) -> Option<PauliKind> {
        match (self.x.is_zero(), self.z.is_zero()) {
            (false, true) => Some(PauliKind::X),
            (true, false) => Some(PauliKind::Z),
            _ => None,
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// The product `self · other`. Panics if the two anticommute, since the
    /// result would not be Hermitian.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(
            self.commutes_with(other),
            "product of anticommuting Paulis is not Hermitian"
        );
        let mut plus = 0u32;
        let mut minus = 0u32;
        for i in 0..self.x.words().len() {
            let (p, m) = phase_counts(
                self.x.words()[i],
                self.z.words()[i],
                other.x.words()[i],
                other.z.words()[i],
            );
            plus += p;
            minus += m;
        }
        let exp = (plus + 4 * 64 * self.x.words().len() as u32 - minus) % 4;
        debug_assert!(exp % 2 == 0);
        Self {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            negative: self.negative ^ other.negative ^ (exp == 2),
        }
    }

    /// Relabels qubit `q` as `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.num_qubits());
        let n = self.num_qubits();
        Self {
            x: BitVector::from_indices(n, self.x.ones().map(|q| perm[q])),
            z: BitVector::from_indices(n, self.z.ones().map(|q| perm[q])),
            negative: self.negative,
        }
    }

    /// Conjugation by transversal Hadamard: X ↔ Z, Y → −Y.
    pub fn hadamard_transformed(&self) -> Self {
        let ys = self.x.and(&self.z).weight();
        Self {
            x: self.z.clone(),
            z: self.x.clone(),
            negative: self.negative ^ (ys % 2 == 1),
        }
    }

    /// Weight restricted to qubits with the given parity (0 = even, 1 = odd).
    pub fn weight_on_parity(&self, parity: usize) -> usize {
        self.support().ones().filter(|q| q % 2 == parity).count()
    }

    /// Symplectic vector `x ‖ z` of length `2n`.
    pub fn symplectic(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    pub fn from_symplectic(v: &BitVector) -> Self {
        let n = v.len() / 2;
        Self::new(v.slice(0, n), v.slice(n, n), false)
    }

    /// Dense string over {I, X, Y, Z} without a sign.
    pub fn to_dense_string(&self) -> String {
        (0..self.num_qubits())
            .map(|q| match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }

    /// Sparse form such as `X0 X2 Z3`.
    pub fn to_sparse_string(&self) -> String {
        let s = self.to_dense_string();
        let terms: Vec<String> = s
            .chars()
            .enumerate()
            .filter(|&(_, c)| c != 'I')
            .map(|(q, c)| format!("{c}{q}"))
            .collect();
        if terms.is_empty() {
            "I".to_string()
        } else {
            terms.join(" ")
        }
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.to_dense_string())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = BccError;

    /// Parses `[+|-]` followed by one of `IXYZ` per qubit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let n = body.chars().count();
        let mut x = BitVector::zeros(n);
        let mut z = BitVector::zeros(n);
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' | '_' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                }
                other => {
                    return Err(BccError::Parse {
                        line: 1,
                        msg: format!("unexpected Pauli character {other:?}"),
                    })
                }
            }
        }
        Ok(Self::new(x, z, negative))
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn commutation() {
        assert!(!p("X").commutes_with(&p("Z")));
        assert!(p("XX").commutes_with(&p("ZZ")));
        assert!(!p("XY").commutes_with(&p("XZ")));
    }

    #[test]
    fn products_track_sign() {
        // XX · ZZ = (XZ)(XZ) = (-iY)(-iY) = -YY
        assert_eq!(p("XX").mul(&p("ZZ")), p("-YY"));
        assert_eq!(p("YY").mul(&p("XX")), p("-ZZ"));
        assert_eq!(p("ZXZ").mul(&p("ZXZ")), p("III"));
    }

    #[test]
    fn hadamard_flips_y_sign() {
        assert_eq!(p("XYZ").hadamard_transformed(), p("-ZYX"));
    }

    #[test]
    fn string_round_trip() {
        for s in ["+XIZY", "-IIII", "+Z"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XIZY").to_sparse_string(), "X0 Z2 Y3");
        assert!("XQ".parse::<PauliOperator>().is_err());
    }
}
