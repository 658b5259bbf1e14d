//! Clifford circuit representation and a line-oriented text format.

mod experiment;
mod prep;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BccError, Result};

pub use experiment::{bell_experiment, ExperimentLayout, Scheme};
pub use prep::{prep_circuit, prep_zero_plus_circuit, BlockPrep, HadamardSide};

/// Measurement or readout basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::X => "X",
            Basis::Z => "Z",
        })
    }
}

impl FromStr for Basis {
    type Err = BccError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Basis::X),
            "Z" | "z" => Ok(Basis::Z),
            other => Err(BccError::InvalidSpec(format!("unknown basis {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    InitPlus(usize),
    InitZero(usize),
    H(usize),
    Cz(usize, usize),
    Cnot {
        control: usize,
        target: usize,
    },
    /// Measurement results are recorded into consecutive bit slots.
    MeasureZ(usize),
    MeasureX(usize),
}

impl Op {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Op::InitPlus(q) | Op::InitZero(q) | Op::H(q) | Op::MeasureZ(q) | Op::MeasureX(q) => vec![q],
            Op::Cz(a, b) => vec![a, b],
            Op::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Op::MeasureZ(_) | Op::MeasureX(_))
    }

    pub fn is_init(&self) -> bool {
        matches!(self, Op::InitPlus(_) | Op::InitZero(_))
    }

    /// Same op with every qubit index passed through `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Op {
        match *self {
            Op::InitPlus(q) => Op::InitPlus(f(q)),
            Op::InitZero(q) => Op::InitZero(f(q)),
            Op::H(q) => Op::H(f(q)),
            Op::Cz(a, b) => Op::Cz(f(a), f(b)),
            Op::Cnot { control, target } => Op::Cnot {
                control: f(control),
                target: f(target),
            },
            Op::MeasureZ(q) => Op::MeasureZ(f(q)),
            Op::MeasureX(q) => Op::MeasureX(f(q)),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Op::InitPlus(q) => write!(f, "INIT+ {q}"),
            Op::InitZero(q) => write!(f, "INIT0 {q}"),
            Op::H(q) => write!(f, "H {q}"),
            Op::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Op::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Op::MeasureZ(q) => write!(f, "MZ {q}"),
            Op::MeasureX(q) => write!(f, "MX {q}"),
        }
    }
}

/// An ordered list of Clifford instructions on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<Op>,
    measurements: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            ops: Vec::new(),
            measurements: 0,
        }
    }

    /// Appends `op` and returns its measurement slot, if it is a measurement.
    pub fn push(&mut self, op: Op) -> Option<usize> {
        for q in op.qubits() {
            assert!(
                q < self.num_qubits,
                "qubit {q} out of range for {} qubits",
                self.num_qubits
            );
        }
        self.ops.push(op);
        if op.is_measurement() {
            self.measurements += 1;
            Some(self.measurements - 1)
        } else {
            None
        }
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = Op>) {
        for op in ops {
            self.push(op);
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn num_measurements(&self) -> usize {
        self.measurements
    }

    pub fn count(&self, pred: impl Fn(&Op) -> bool) -> usize {
        self.ops.iter().filter(|op| pred(op)).count()
    }

    /// Checks that each qubit is initialized before use, is not used after
    /// being measured, and that two-qubit gates act on distinct qubits.
    pub fn validate(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum State {
            Fresh,
            Live,
            Measured,
        }
        let mut state = vec![State::Fresh; self.num_qubits];
        for (i, op) in self.ops.iter().enumerate() {
            let qs = op.qubits();
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(BccError::InvalidCircuit(format!(
                    "op {i} ({op}) acts twice on qubit {}",
                    qs[0]
                )));
            }
            for q in qs {
                if q >= self.num_qubits {
                    return Err(BccError::InvalidCircuit(format!(
                        "op {i} ({op}) uses qubit {q} out of range"
                    )));
                }
                match (state[q], op.is_init()) {
                    (State::Measured, _) => {
                        return Err(BccError::InvalidCircuit(format!(
                            "op {i} ({op}) follows measurement of qubit {q}"
                        )))
                    }
                    (State::Fresh, false) => {
                        return Err(BccError::InvalidCircuit(format!(
                            "op {i} ({op}) uses qubit {q} before initialization"
                        )))
                    }
                    _ => {}
                }
                state[q] = if op.is_measurement() {
                    State::Measured
                } else {
                    State::Live
                };
            }
        }
        Ok(())
    }

    /// Relabels qubit `q` as `f(q)` in every instruction.
    pub fn relabeled(&self, num_qubits: usize, f: impl Fn(usize) -> usize) -> Circuit {
        let mut c = Circuit::new(num_qubits);
        c.extend(self.ops.iter().map(|op| op.map_qubits(&f)));
        c
    }

    /// One instruction per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for op in &self.ops {
            s.push_str(&op.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Blank lines and `#` comments are ignored; the
    /// qubit count is one more than the largest index used.
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut ops = Vec::new();
        let mut max_q = None::<usize>;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| BccError::Parse { line: lineno + 1, msg };
            let mut tokens = line.split_whitespace();
            let name = tokens.next().expect("non-empty line");
            let args: Vec<usize> = tokens
                .map(|t| t.parse::<usize>().map_err(|_| err(format!("bad qubit index {t:?}"))))
                .collect::<Result<_>>()?;
            let arity = |k: usize| -> Result<()> {
                if args.len() == k {
                    Ok(())
                } else {
                    Err(err(format!("{name} takes {k} qubit(s), got {}", args.len())))
                }
            };
            let op = match name {
                "INIT+" => arity(1).map(|_| Op::InitPlus(args[0]))?,
                "INIT0" => arity(1).map(|_| Op::InitZero(args[0]))?,
                "H" => arity(1).map(|_| Op::H(args[0]))?,
                "CZ" => arity(2).map(|_| Op::Cz(args[0], args[1]))?,
                "CNOT" => arity(2).map(|_| Op::Cnot {
                    control: args[0],
                    target: args[1],
                })?,
                "MZ" => arity(1).map(|_| Op::MeasureZ(args[0]))?,
                "MX" => arity(1).map(|_| Op::MeasureX(args[0]))?,
                other => return Err(err(format!("unknown instruction {other:?}"))),
            };
            for &q in &args {
                max_q = Some(max_q.map_or(q, |m| m.max(q)));
            }
            ops.push(op);
        }
        let mut c = Circuit::new(max_q.map_or(0, |m| m + 1));
        c.extend(ops);
        Ok(c)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
