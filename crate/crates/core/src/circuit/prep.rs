use serde::{Deserialize, Serialize};

use super::{Circuit, Op};
use crate::code::{is_permutation, BccSpec, CssCode};
use crate::error::{BccError, Result};
use crate::pauli::PauliOperator;
use crate::stabsim::simulate_noiseless;

/// Sublattice that receives the final Hadamard layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HadamardSide {
    /// Even qubits.
    A,
    /// Odd qubits.
    B,
}

impl HadamardSide {
    pub fn other(self) -> Self {
        match self {
            HadamardSide::A => HadamardSide::B,
            HadamardSide::B => HadamardSide::A,
        }
    }

    fn contains(self, q: usize) -> bool {
        match self {
            HadamardSide::A => q % 2 == 0,
            HadamardSide::B => q % 2 == 1,
        }
    }
}

/// One code block: `|+>` everywhere, the CZ layer, Hadamards on one
/// sublattice, with qubit `q` of that circuit placed on qubit `relabel[q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPrep {
    spec: BccSpec,
    hadamard_on: HadamardSide,
    relabel: Vec<usize>,
    /// True when the verified output is logical `|0+>` rather than `|+0>`.
    zero_plus: bool,
}

impl BlockPrep {
    /// The plain circuit with Hadamards on B.
    pub fn standard(spec: &BccSpec) -> Self {
        Self {
            spec: spec.clone(),
            hadamard_on: HadamardSide::B,
            relabel: (0..spec.n()).collect(),
            zero_plus: false,
        }
    }

    pub fn spec(&self) -> &BccSpec {
        &self.spec
    }

    pub fn hadamard_on(&self) -> HadamardSide {
        self.hadamard_on
    }

    pub fn relabel(&self) -> &[usize] {
        &self.relabel
    }

    pub fn is_zero_plus(&self) -> bool {
        self.zero_plus
    }

    pub fn init_ops(&self) -> Vec<Op> {
        (0..self.spec.n()).map(|q| Op::InitPlus(self.relabel[q])).collect()
    }

    /// The CZ layer `U`, ordered by ascending offset then ascending position.
    pub fn cz_ops(&self) -> Vec<Op> {
        self.spec
            .edges()
            .into_iter()
            .map(|(a, b)| Op::Cz(self.relabel[a], self.relabel[b]))
            .collect()
    }

    pub fn hadamard_ops(&self) -> Vec<Op> {
        (0..self.spec.n())
            .filter(|&q| self.hadamard_on.contains(q))
            .map(|q| Op::H(self.relabel[q]))
            .collect()
    }

    pub fn to_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.spec.n());
        c.extend(self.init_ops());
        c.extend(self.cz_ops());
        c.extend(self.hadamard_ops());
        c
    }

    /// The same circuit with the Hadamard layer on the other sublattice,
    /// followed by a relabeling chosen so that the output lies in the same
    /// code with the two logical qubits' bases exchanged. Candidates are the
    /// identity and the affine maps `m -> c·m + 2t`; each is checked by
    /// noiseless tableau simulation.
    pub fn swapped(&self) -> Result<BlockPrep> {
        let n = self.spec.n();
        let code = CssCode::from_offsets(&self.spec);
        for sigma in relabel_candidates(n) {
            if !code.is_automorphism(&sigma, true) {
                continue;
            }
            let candidate = BlockPrep {
                spec: self.spec.clone(),
                hadamard_on: self.hadamard_on.other(),
                relabel: self.relabel.iter().map(|&q| sigma[q]).collect(),
                zero_plus: !self.zero_plus,
            };
            if candidate.verify(&code).is_ok() {
                return Ok(candidate);
            }
        }
        Err(BccError::Verification(format!(
            "no relabeling candidate yields the swapped logical state for {}",
            self.spec
        )))
    }

    /// The logical operators this block is meant to be a +1 (up to sign)
    /// eigenstate of.
    pub fn expected_logicals(&self, code: &CssCode) -> [PauliOperator; 2] {
        let l = code.logicals();
        if self.zero_plus {
            [l[0].1.clone(), l[1].0.clone()]
        } else {
            [l[0].0.clone(), l[1].1.clone()]
        }
    }

    /// Checks by tableau simulation that every code generator stabilizes the
    /// output with sign +1 and the expected logicals stabilize it up to sign.
    pub fn verify(&self, code: &CssCode) -> Result<()> {
        if !is_permutation(&self.relabel, self.spec.n()) {
            return Err(BccError::Verification("relabeling is not a permutation".into()));
        }
        let run = simulate_noiseless(&self.to_circuit())?;
        if let Some(g) = code.generators().iter().find(|g| !run.tableau.stabilizes(g)) {
            return Err(BccError::Verification(format!(
                "output not stabilized by generator {}",
                g.to_sparse_string()
            )));
        }
        if let Some(l) = self
            .expected_logicals(code)
            .iter()
            .find(|l| !run.tableau.stabilizes_up_to_sign(l))
        {
            return Err(BccError::Verification(format!(
                "output not stabilized by logical {}",
                l.to_sparse_string()
            )));
        }
        Ok(())
    }
}

/// Sublattice-preserving relabelings: identity first, then `m -> c·m + 2t`
/// for odd units `c` and shifts `2t`.
fn relabel_candidates(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let identity = std::iter::once((0..n).collect::<Vec<_>>());
    let affine = (1..n)
        .step_by(2)
        .filter(move |&c| crate::code::gcd(c, n) == 1)
        .flat_map(move |c| {
            (0..n)
                .step_by(2)
                .map(move |t| (0..n).map(|m| (c * m + t) % n).collect::<Vec<_>>())
        });
    identity.chain(affine)
}

/// `|+>` on all qubits, CZ for every edge, then H on the odd sublattice.
pub fn prep_circuit(spec: &BccSpec) -> Circuit {
    BlockPrep::standard(spec).to_circuit()
}

/// A circuit of the same shape preparing logical `|0+>` in the same code.
/// Requires an even offset count.
pub fn prep_zero_plus_circuit(spec: &BccSpec) -> Result<Circuit> {
    zero_plus_block(spec).map(|b| b.to_circuit())
}

pub(crate) fn zero_plus_block(spec: &BccSpec) -> Result<BlockPrep> {
    if spec.degree() % 2 == 1 {
        return Err(BccError::Precondition(format!(
            "{spec} has an odd offset count and prepares a Bell pair, not |+0>"
        )));
    }
    BlockPrep::standard(spec).swapped()
}
