//! Stabilizer simulation, Pauli-frame sampling, decoding and Monte Carlo
//! estimation of logical error rates for the Bell experiment.

mod decoder;
mod exhaust;
mod frame;
mod noise;
mod run;
mod tableau;

pub use decoder::{decode_block, BlockDecoder};
pub use exhaust::{single_fault_exhaustion, ResidualWeight, SingleFaultOutcome};
pub use frame::{propagate, sample_frames, FrameResult, FrameSampler};
pub use noise::{
    all_single_faults, noise_locations, Fault, FaultAction, LocationKind, NoiseLocation, NoiseModel, SinglePauli,
};
pub use run::{
    log_spaced, run_experiment, scaling_exponent, sweep, wilson_interval, Experiment, ExperimentStats, Sweep,
    SweepRecord,
};
pub use tableau::{constant_value, is_constant, SignExpr, Tableau};

use crate::circuit::Circuit;
use crate::error::Result;
use crate::gf2::BitVector;

/// Final tableau and symbolic outcome of every measurement slot.
#[derive(Clone, Debug)]
pub struct TableauRun {
    pub tableau: Tableau,
    pub outcomes: Vec<SignExpr>,
}

impl TableauRun {
    /// XOR of the outcome expressions of `slots`.
    pub fn parity(&self, slots: impl IntoIterator<Item = usize>) -> SignExpr {
        let mut e = self.tableau.constant(false);
        for s in slots {
            e.xor_assign(&self.outcomes[s]);
        }
        e
    }
}

#[derive(Clone, Debug)]
pub struct NoiselessRun {
    pub tableau: Tableau,
    pub outcomes: Vec<SignExpr>,
    /// Outcomes with every random variable set to 0.
    pub bits: BitVector,
    /// True iff no measurement had a random outcome.
    pub deterministic: bool,
}

impl NoiselessRun {
    pub fn parity(&self, slots: impl IntoIterator<Item = usize>) -> SignExpr {
        let mut e = self.tableau.constant(false);
        for s in slots {
            e.xor_assign(&self.outcomes[s]);
        }
        e
    }

    /// Value of the parity of `slots` if it is deterministic.
    pub fn deterministic_parity(&self, slots: impl IntoIterator<Item = usize>) -> Option<bool> {
        let e = self.parity(slots);
        is_constant(&e).then(|| constant_value(&e))
    }

    /// Slot sets whose parities form a basis of the deterministic parities.
    pub fn deterministic_parity_basis(&self) -> Vec<Vec<usize>> {
        // eliminate the variable part of each outcome; dependent combinations
        // are exactly the deterministic parities
        let mut rows: Vec<(BitVector, Vec<usize>)> = self
            .outcomes
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut v = e.clone();
                v.set(0, false);
                (v, vec![i])
            })
            .collect();
        let mut out = Vec::new();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for i in 0..rows.len() {
            for &(p, r) in &pivots {
                if rows[i].0.get(p) {
                    let (pv, ps) = rows[r].clone();
                    rows[i].0.xor_assign(&pv);
                    for s in ps {
                        if let Some(k) = rows[i].1.iter().position(|&x| x == s) {
                            rows[i].1.remove(k);
                        } else {
                            rows[i].1.push(s);
                        }
                    }
                }
            }
            match rows[i].0.first_one() {
                Some(p) => pivots.push((p, i)),
                None => out.push(rows[i].1.clone()),
            }
        }
        out
    }
}

/// Runs `c` with `faults` injected after their instructions.
pub fn simulate(c: &Circuit, faults: &[Fault]) -> Result<TableauRun> {
    c.validate()?;
    let max_vars = c.num_measurements() + c.count(|op| op.is_init());
    let mut t = Tableau::new(c.num_qubits(), max_vars);
    let mut by_op: Vec<Vec<&FaultAction>> = vec![Vec::new(); c.ops().len()];
    for f in faults {
        by_op[f.op_index].push(&f.action);
    }
    let mut outcomes = Vec::with_capacity(c.num_measurements());
    for (i, &op) in c.ops().iter().enumerate() {
        if let Some(e) = t.apply(op) {
            outcomes.push(e);
        }
        for action in &by_op[i] {
            match action {
                FaultAction::Pauli(ps) => {
                    for &(q, p) in ps {
                        t.pauli(q, p);
                    }
                }
                FaultAction::FlipMeasurement => {
                    assert!(op.is_measurement(), "measurement flip attached to {op}");
                    outcomes.last_mut().expect("measured").flip(0);
                }
            }
        }
    }
    Ok(TableauRun { tableau: t, outcomes })
}

pub fn simulate_noiseless(c: &Circuit) -> Result<NoiselessRun> {
    let run = simulate(c, &[])?;
    let bits = BitVector::from_bools(&run.outcomes.iter().map(constant_value).collect::<Vec<_>>());
    let deterministic = run.outcomes.iter().all(is_constant);
    Ok(NoiselessRun {
        tableau: run.tableau,
        outcomes: run.outcomes,
        bits,
        deterministic,
    })
}

#[cfg(test)]
mod tests;
