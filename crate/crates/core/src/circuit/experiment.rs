use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::prep::{zero_plus_block, BlockPrep};
use super::{Basis, Circuit, Op};
use crate::code::BccSpec;
use crate::error::{BccError, Result};

/// Ancilla gadget that flags X errors on data qubits during the CZ layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    None,
    /// One `|0>` ancilla per data qubit, CNOT-coupled.
    PerBlockAncilla,
    /// One `|0>` ancilla per code position, shared by both blocks.
    SharedAncilla,
    /// `n/2` entangled `|+>` ancillas, CZ-coupled, ring `m <-> m + step`.
    EntangledAncilla {
        step: usize,
    },
}

impl Scheme {
    pub const DEFAULT_STEP: usize = 3;

    pub fn ancilla_count(&self, n: usize) -> usize {
        match self {
            Scheme::None => 0,
            Scheme::PerBlockAncilla => 2 * n,
            Scheme::SharedAncilla => n,
            Scheme::EntangledAncilla { .. } => n / 2,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::None => f.write_str("none"),
            Scheme::PerBlockAncilla => f.write_str("per-block"),
            Scheme::SharedAncilla => f.write_str("shared"),
            Scheme::EntangledAncilla { step } => write!(f, "entangled:{step}"),
        }
    }
}

impl FromStr for Scheme {
    type Err = BccError;

    /// `none`, `per-block`, `shared`, `entangled` or `entangled:STEP`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || BccError::InvalidSpec(format!("unknown scheme {s:?}"));
        match s {
            "none" => Ok(Scheme::None),
            "per-block" | "perblock" => Ok(Scheme::PerBlockAncilla),
            "shared" => Ok(Scheme::SharedAncilla),
            "entangled" => Ok(Scheme::EntangledAncilla {
                step: Self::DEFAULT_STEP,
            }),
            _ => {
                let step = s.strip_prefix("entangled:").ok_or_else(bad)?;
                Ok(Scheme::EntangledAncilla {
                    step: step.parse().map_err(|_| bad())?,
                })
            }
        }
    }
}

/// Qubit layout of the two-block Bell experiment.
#[derive(Clone, Debug)]
pub struct ExperimentLayout {
    pub n: usize,
    pub scheme: Scheme,
    pub block1: Range<usize>,
    pub block2: Range<usize>,
    pub ancillas: Range<usize>,
    /// Ancilla coupled to each data qubit `0..2n`.
    pub ancilla_of: Vec<Option<usize>>,
    pub ancilla_slots: Vec<usize>,
    /// Measurement slot of code qubit `q` in each block.
    pub data_slots: [Vec<usize>; 2],
    /// Block 1 prepares `|+0>`, block 2 `|0+>`.
    pub blocks: [BlockPrep; 2],
}

impl ExperimentLayout {
    pub fn num_qubits(&self) -> usize {
        self.ancillas.end
    }

    pub fn block_range(&self, b: usize) -> Range<usize> {
        if b == 0 {
            self.block1.clone()
        } else {
            self.block2.clone()
        }
    }
}

fn check_scheme(spec: &BccSpec, scheme: Scheme) -> Result<()> {
    if let Scheme::EntangledAncilla { step } = scheme {
        let half = spec.n() / 2;
        if step % half == 0 {
            return Err(BccError::Precondition(format!(
                "entangling step {step} is trivial modulo {half} ancillas"
            )));
        }
    }
    Ok(())
}

/// Two blocks prepared as `|+0>` and `|0+>` with the detection gadget
/// bracketing both CZ layers, then a transversal CNOT from block 1 to block 2
/// and a readout of every data qubit in `basis`.
pub fn bell_experiment(spec: &BccSpec, scheme: Scheme, basis: Basis) -> Result<(Circuit, ExperimentLayout)> {
    check_scheme(spec, scheme)?;
    let n = spec.n();
    let plus_zero = BlockPrep::standard(spec);
    let zero_plus = zero_plus_block(spec)?;
    let anc0 = 2 * n;
    let n_anc = scheme.ancilla_count(n);
    let ancilla_of: Vec<Option<usize>> = (0..2 * n)
        .map(|q| match scheme {
            Scheme::None => None,
            Scheme::PerBlockAncilla => Some(anc0 + q),
            Scheme::SharedAncilla => Some(anc0 + q % n),
            Scheme::EntangledAncilla { .. } => Some(anc0 + q % (n / 2)),
        })
        .collect();
    let ring: Vec<Op> = match scheme {
        Scheme::EntangledAncilla { step } => {
            let mut seen = std::collections::BTreeSet::new();
            (0..n_anc)
                .filter_map(|m| {
                    let o = (m + step) % n_anc;
                    let e = (m.min(o), m.max(o));
                    seen.insert(e).then_some(Op::Cz(anc0 + e.0, anc0 + e.1))
                })
                .collect()
        }
        _ => Vec::new(),
    };
    let detect: Vec<Op> = ancilla_of
        .iter()
        .enumerate()
        .filter_map(|(q, a)| {
            a.map(|a| match scheme {
                Scheme::EntangledAncilla { .. } => Op::Cz(q, a),
                _ => Op::Cnot { control: q, target: a },
            })
        })
        .collect();
    let shift = |ops: Vec<Op>, by: usize| ops.into_iter().map(move |op| op.map_qubits(|q| q + by));

    let mut c = Circuit::new(anc0 + n_anc);
    c.extend(shift(plus_zero.init_ops(), 0));
    c.extend(shift(zero_plus.init_ops(), n));
    for a in anc0..anc0 + n_anc {
        c.push(match scheme {
            Scheme::EntangledAncilla { .. } => Op::InitPlus(a),
            _ => Op::InitZero(a),
        });
    }
    c.extend(ring.iter().copied());
    c.extend(detect.iter().copied());
    c.extend(shift(plus_zero.cz_ops(), 0));
    c.extend(shift(zero_plus.cz_ops(), n));
    c.extend(detect.iter().copied());
    c.extend(ring.iter().copied());
    let mut ancilla_slots = Vec::with_capacity(n_anc);
    for a in anc0..anc0 + n_anc {
        let op = match scheme {
            Scheme::EntangledAncilla { .. } => Op::MeasureX(a),
            _ => Op::MeasureZ(a),
        };
        ancilla_slots.extend(c.push(op));
    }
    c.extend(shift(plus_zero.hadamard_ops(), 0));
    c.extend(shift(zero_plus.hadamard_ops(), n));
    c.extend((0..n).map(|q| Op::Cnot {
        control: q,
        target: n + q,
    }));
    let mut data_slots = [Vec::with_capacity(n), Vec::with_capacity(n)];
    for (b, slots) in data_slots.iter_mut().enumerate() {
        for q in 0..n {
            let op = match basis {
                Basis::Z => Op::MeasureZ(b * n + q),
                Basis::X => Op::MeasureX(b * n + q),
            };
            slots.extend(c.push(op));
        }
    }
    c.validate()?;
    let layout = ExperimentLayout {
        n,
        scheme,
        block1: 0..n,
        block2: n..2 * n,
        ancillas: anc0..anc0 + n_anc,
        ancilla_of,
        ancilla_slots,
        data_slots,
        blocks: [plus_zero, zero_plus],
    };
    Ok((c, layout))
}
