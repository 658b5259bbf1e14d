use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::frame::propagate;
use super::noise::{all_single_faults, Fault, FaultAction};
use crate::circuit::{bell_experiment, Basis, Op, Scheme};
use crate::code::{BccSpec, CssCode};
use crate::error::{BccError, Result};
use crate::gf2::{BitMatrix, MaskBasis};
use crate::pauli::{PauliKind, PauliOperator};

/// Weight of each type of a block's residual error after minimizing over
/// the stabilizer group of the final two-block state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualWeight {
    pub x: usize,
    pub z: usize,
}

impl ResidualWeight {
    pub fn max(&self) -> usize {
        self.x.max(self.z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleFaultOutcome {
    pub fault: Fault,
    /// Some ancilla outcome flipped.
    pub detected: bool,
    /// Residual on block 1 and block 2 just before the data readout.
    pub residual: [ResidualWeight; 2],
}

fn stabilizer_span(checks: &BitMatrix) -> Result<Vec<u128>> {
    let basis = MaskBasis::new(checks.rows().iter().map(|r| r.to_u128()));
    if basis.rank() > 24 {
        return Err(BccError::Precondition(format!(
            "stabilizer span of rank {} is too large to enumerate",
            basis.rank()
        )));
    }
    Ok(basis.span())
}

fn min_coset_weight(e: u128, span: &[u128]) -> usize {
    span.iter()
        .map(|s| (e ^ s).count_ones() as usize)
        .min()
        .unwrap_or(e.count_ones() as usize)
}

/// Per-block weights of `(e1, e2)` minimized over code stabilizers on each
/// block and over the joint logical stabilizers `extra`. Among elements of
/// `extra`, the one with the smallest larger weight wins.
fn residual_pair(e: (u128, u128), span: &[u128], extra: &[(u128, u128)]) -> (usize, usize) {
    extra
        .iter()
        .map(|&(g1, g2)| (min_coset_weight(e.0 ^ g1, span), min_coset_weight(e.1 ^ g2, span)))
        .min_by_key(|&(a, b)| (a.max(b), a + b))
        .expect("extra contains the identity")
}

/// Products of per-block logicals of one type that stabilize (up to sign)
/// the two-block state right before the data readout.
fn joint_logical_stabilizers(
    tableau: &super::Tableau,
    logicals: &[PauliOperator],
    n: usize,
    kind: PauliKind,
) -> Vec<(u128, u128)> {
    let total = tableau.num_qubits();
    let k = logicals.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (2 * k)) {
        let mut parts = [0u128; 2];
        for (i, l) in logicals.iter().enumerate() {
            let support = match kind {
                PauliKind::X => l.x_support(),
                PauliKind::Z => l.z_support(),
            }
            .to_u128();
            for (b, part) in parts.iter_mut().enumerate() {
                if mask >> (b * k + i) & 1 == 1 {
                    *part ^= support;
                }
            }
        }
        let support = (0..n)
            .filter(|&q| parts[0] >> q & 1 == 1)
            .chain((0..n).filter(|&q| parts[1] >> q & 1 == 1).map(|q| q + n));
        let p = match kind {
            PauliKind::X => PauliOperator::x_type(total, support),
            PauliKind::Z => PauliOperator::z_type(total, support),
        };
        if tableau.stabilizes_up_to_sign(&p) && !out.contains(&(parts[0], parts[1])) {
            out.push((parts[0], parts[1]));
        }
    }
    out
}

/// Injects every single fault of the Bell experiment (Z readout) and reports
/// whether an ancilla fired and the residual error left on each block.
/// A flipped data readout counts as an X error on that qubit.
pub fn single_fault_exhaustion(spec: &BccSpec, scheme: Scheme) -> Result<Vec<SingleFaultOutcome>> {
    let code = CssCode::from_offsets(spec);
    if code.n() > 128 {
        return Err(BccError::Precondition("exhaustion supports n <= 128".into()));
    }
    let (circuit, layout) = bell_experiment(spec, scheme, Basis::Z)?;
    let x_span = stabilizer_span(code.hx())?;
    let z_span = stabilizer_span(code.hz())?;
    let n = code.n();
    let slot_qubit: Vec<Option<usize>> = {
        let mut v = vec![None; circuit.num_measurements()];
        for (b, slots) in layout.data_slots.iter().enumerate() {
            for (q, &s) in slots.iter().enumerate() {
                v[s] = Some(b * n + q);
            }
        }
        v
    };
    let slot_of_op: Vec<Option<usize>> = {
        let mut next = 0;
        circuit
            .ops()
            .iter()
            .map(|op: &Op| {
                op.is_measurement().then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let before_readout = {
        let ops = circuit.ops();
        let keep = ops.len() - 2 * n;
        debug_assert!(ops[keep..].iter().all(Op::is_measurement));
        let mut c = crate::circuit::Circuit::new(circuit.num_qubits());
        c.extend(ops[..keep].iter().copied());
        c
    };
    let state = super::simulate(&before_readout, &[])?.tableau;
    let xl: Vec<_> = code.logicals().iter().map(|l| l.0.clone()).collect();
    let zl: Vec<_> = code.logicals().iter().map(|l| l.1.clone()).collect();
    let extra_x = joint_logical_stabilizers(&state, &xl, n, PauliKind::X);
    let extra_z = joint_logical_stabilizers(&state, &zl, n, PauliKind::Z);
    let faults = all_single_faults(&circuit);
    Ok(faults
        .into_par_iter()
        .map(|fault| {
            let frame = propagate(&circuit, std::slice::from_ref(&fault));
            let detected = layout.ancilla_slots.iter().any(|&s| frame.flips.get(s));
            let mut x = frame.x.clone();
            if fault.action == FaultAction::FlipMeasurement {
                if let Some(q) = slot_of_op[fault.op_index].and_then(|s| slot_qubit[s]) {
                    x.flip(q);
                }
            }
            let block = |v: &crate::gf2::BitVector, b: usize| v.slice(b * n, n).to_u128();
            let rx = residual_pair((block(&x, 0), block(&x, 1)), &x_span, &extra_x);
            let rz = residual_pair((block(&frame.z, 0), block(&frame.z, 1)), &z_span, &extra_z);
            let residual = [ResidualWeight { x: rx.0, z: rz.0 }, ResidualWeight { x: rx.1, z: rz.1 }];
            SingleFaultOutcome {
                fault,
                detected,
                residual,
            }
        })
        .collect())
}
