use std::fmt;

use serde::{Deserialize, Serialize};

use super::BccSpec;
use crate::error::{BccError, Result};
use crate::pauli::PauliOperator;

fn require_odd_d(d: usize) -> Result<()> {
    if d < 3 || d % 2 == 0 {
        return Err(BccError::InvalidSpec(format!("d must be odd and at least 3, got {d}")));
    }
    Ok(())
}

/// Offsets of the rotated toric code `[[d²+1, 2, d]]`:
/// `±(d + i(d-1))` for `0 <= i < (d-1)/2`, closed by the self-negative
/// element `(d²+1)/2`.
pub fn rotated_toric_offsets(d: usize) -> Result<BccSpec> {
    require_odd_d(d)?;
    let n = d * d + 1;
    let mut offsets = Vec::new();
    for i in 0..(d - 1) / 2 {
        let s = (d + i * (d - 1)) as i64;
        offsets.push(-s);
        offsets.push(s);
    }
    offsets.push((n / 2) as i64);
    BccSpec::new(n, &offsets)
}

/// Weight-4 plaquettes `Z_m Z_{m+1} Z_{m+d} Z_{m+d+1}` for even `m`.
pub fn rotated_toric_plaquettes(d: usize) -> Result<Vec<PauliOperator>> {
    require_odd_d(d)?;
    let n = d * d + 1;
    Ok((0..n)
        .step_by(2)
        .map(|m| PauliOperator::z_type(n, [m, m + 1, m + d, m + d + 1].map(|q| q % n)))
        .collect())
}

/// `m -> c·m mod n`. Fails unless `c` is a unit mod `n`.
pub fn multiplier_permutation(n: usize, c: usize) -> Result<Vec<usize>> {
    if gcd(c % n, n) != 1 {
        return Err(BccError::Precondition(format!("{c} is not a unit mod {n}")));
    }
    Ok((0..n).map(|m| (m * c) % n).collect())
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The odd residues `{1, 3, ..., n-1}` not in the offset set.
pub fn complement_offsets(spec: &BccSpec) -> Result<BccSpec> {
    let rest: Vec<i64> = (1..spec.n())
        .step_by(2)
        .filter(|&s| !spec.contains_offset(s))
        .map(|s| s as i64)
        .collect();
    if rest.is_empty() {
        return Err(BccError::InvalidSpec(format!(
            "{spec} uses every odd offset; complement is empty"
        )));
    }
    BccSpec::new(spec.n(), &rest)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PreparedState {
    /// Logical `|+0>`: stabilized by `X̄₁` and `Z̄₂`.
    PlusZero,
    /// Logical Bell pair: stabilized by `X̄₁X̄₂` and `Z̄₁Z̄₂`.
    BellPair,
}

impl fmt::Display for PreparedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreparedState::PlusZero => "PlusZero",
            PreparedState::BellPair => "BellPair",
        })
    }
}

/// Even offset count prepares `|+0>`, odd prepares a Bell pair.
pub fn prepared_logical_state(spec: &BccSpec) -> PreparedState {
    if spec.degree() % 2 == 0 {
        PreparedState::PlusZero
    } else {
        PreparedState::BellPair
    }
}
