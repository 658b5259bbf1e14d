use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Op};
use crate::error::{BccError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SinglePauli {
    X,
    Y,
    Z,
}

impl SinglePauli {
    /// `1 -> X`, `2 -> Y`, `3 -> Z`; zero is the identity.
    pub fn from_index(i: usize) -> Option<SinglePauli> {
        match i {
            1 => Some(SinglePauli::X),
            2 => Some(SinglePauli::Y),
            3 => Some(SinglePauli::Z),
            _ => None,
        }
    }

    /// `(x, z)` components.
    pub fn bits(self) -> (bool, bool) {
        match self {
            SinglePauli::X => (true, false),
            SinglePauli::Y => (true, true),
            SinglePauli::Z => (false, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaultAction {
    /// Pauli applied right after the instruction.
    Pauli(Vec<(usize, SinglePauli)>),
    /// The recorded outcome of a measurement instruction is inverted.
    FlipMeasurement,
}

/// A fault attached to the instruction at `op_index`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fault {
    pub op_index: usize,
    pub action: FaultAction,
}

/// Circuit-level depolarizing noise with strength `p` and per-location
/// multipliers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub gate1: f64,
    pub gate2: f64,
    pub init: f64,
    pub measure: f64,
}

impl NoiseModel {
    pub fn depolarizing(p: f64) -> Self {
        Self {
            p,
            gate1: 1.0,
            gate2: 1.0,
            init: 1.0,
            measure: 1.0,
        }
    }

    pub fn noiseless() -> Self {
        Self::depolarizing(0.0)
    }

    pub fn with_p(&self, p: f64) -> Self {
        Self { p, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, m) in [
            ("gate1", self.gate1),
            ("gate2", self.gate2),
            ("init", self.init),
            ("measure", self.measure),
        ] {
            let q = self.p * m;
            if !(0.0..=1.0).contains(&q) || q.is_nan() {
                return Err(BccError::InvalidSpec(format!(
                    "{name} fault probability {q} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn probability(&self, kind: LocationKind) -> f64 {
        self.p
            * match kind {
                LocationKind::Init => self.init,
                LocationKind::Gate1 => self.gate1,
                LocationKind::Gate2 => self.gate2,
                LocationKind::Measure => self.measure,
            }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocationKind {
    Init,
    Gate1,
    Gate2,
    Measure,
}

/// One place a fault can occur, with the total probability of any fault there.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseLocation {
    pub op_index: usize,
    pub op: Op,
    pub kind: LocationKind,
    pub probability: f64,
}

impl NoiseLocation {
    pub fn num_choices(&self) -> usize {
        match self.kind {
            LocationKind::Init | LocationKind::Measure => 1,
            LocationKind::Gate1 => 3,
            LocationKind::Gate2 => 15,
        }
    }

    /// The `choice`-th equally likely fault.
    pub fn fault(&self, choice: usize) -> Fault {
        assert!(choice < self.num_choices());
        let action = match (self.kind, self.op) {
            (LocationKind::Measure, _) => FaultAction::FlipMeasurement,
            (LocationKind::Init, Op::InitZero(q)) => FaultAction::Pauli(vec![(q, SinglePauli::X)]),
            (LocationKind::Init, Op::InitPlus(q)) => FaultAction::Pauli(vec![(q, SinglePauli::Z)]),
            (LocationKind::Gate1, Op::H(q)) => {
                FaultAction::Pauli(vec![(q, SinglePauli::from_index(choice + 1).expect("1..=3"))])
            }
            (LocationKind::Gate2, op) => {
                let qs = op.qubits();
                let idx = choice + 1;
                let mut paulis = Vec::new();
                if let Some(p) = SinglePauli::from_index(idx / 4) {
                    paulis.push((qs[0], p));
                }
                if let Some(p) = SinglePauli::from_index(idx % 4) {
                    paulis.push((qs[1], p));
                }
                FaultAction::Pauli(paulis)
            }
            (kind, op) => unreachable!("location kind {kind:?} does not match {op}"),
        };
        Fault {
            op_index: self.op_index,
            action,
        }
    }

    pub fn faults(&self) -> impl Iterator<Item = Fault> + '_ {
        (0..self.num_choices()).map(|c| self.fault(c))
    }
}

/// Every fault location of `c`, in instruction order. Idle qubits are noiseless.
pub fn noise_locations(c: &Circuit, noise: &NoiseModel) -> Vec<NoiseLocation> {
    c.ops()
        .iter()
        .enumerate()
        .map(|(i, &op)| {
            let kind = match op {
                Op::InitPlus(_) | Op::InitZero(_) => LocationKind::Init,
                Op::H(_) => LocationKind::Gate1,
                Op::Cz(..) | Op::Cnot { .. } => LocationKind::Gate2,
                Op::MeasureZ(_) | Op::MeasureX(_) => LocationKind::Measure,
            };
            NoiseLocation {
                op_index: i,
                op,
                kind,
                probability: noise.probability(kind),
            }
        })
        .collect()
}

/// All single faults of `c`, one per location and Pauli choice.
pub fn all_single_faults(c: &Circuit) -> Vec<Fault> {
    noise_locations(c, &NoiseModel::noiseless())
        .iter()
        .flat_map(|l| l.faults().collect::<Vec<_>>())
        .collect()
}
