use std::collections::HashMap;

use crate::circuit::Basis;
use crate::code::CssCode;
use crate::error::{BccError, Result};
use crate::gf2::{BitVector, MaskBasis};

/// Minimum-weight lookup decoder for a transversal readout of one block.
///
/// In the Z basis the Z-type generators are checked and `Z̄₁` is read; in the
/// X basis the X-type generators and `X̄₁`.
#[derive(Clone, Debug)]
pub struct BlockDecoder {
    n: usize,
    columns: Vec<u128>,
    logical: u128,
    w_max: usize,
    table: HashMap<u128, u128>,
}

impl BlockDecoder {
    pub fn new(code: &CssCode, basis: Basis, w_max: usize) -> Result<Self> {
        let n = code.n();
        if n > 128 {
            return Err(BccError::Precondition(format!("decoder supports n <= 128, got {n}")));
        }
        let (checks, logical) = match basis {
            Basis::Z => (code.hz(), code.logicals()[0].1.z_support()),
            Basis::X => (code.hx(), code.logicals()[0].0.x_support()),
        };
        let rows = checks.independent_rows();
        if rows.num_rows() > 128 {
            return Err(BccError::Precondition("too many independent checks".into()));
        }
        let mut columns = vec![0u128; n];
        for (r, row) in rows.rows().iter().enumerate() {
            for q in row.ones() {
                columns[q] |= 1 << r;
            }
        }
        let reachable = MaskBasis::new(columns.iter().copied()).rank();
        let mut d = Self {
            n,
            columns,
            logical: logical.to_u128(),
            w_max,
            table: HashMap::new(),
        };
        d.fill(reachable);
        Ok(d)
    }

    /// Enumerates errors by increasing weight until every reachable syndrome
    /// has its first (minimum-weight) explanation.
    fn fill(&mut self, rank: usize) {
        let full = 1usize.checked_shl(rank as u32).unwrap_or(usize::MAX);
        for w in 0..=self.w_max.min(self.n) {
            let mut idx: Vec<usize> = (0..w).collect();
            loop {
                let err = idx.iter().fold(0u128, |m, &q| m | 1 << q);
                let s = self.syndrome(err);
                self.table.entry(s).or_insert(err);
                if self.table.len() >= full {
                    return;
                }
                // next combination in lexicographic order
                let mut i = w;
                while i > 0 && idx[i - 1] == self.n - w + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..w {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
    }

    pub fn syndrome(&self, bits: u128) -> u128 {
        let mut s = 0;
        let mut b = bits;
        while b != 0 {
            s ^= self.columns[b.trailing_zeros() as usize];
            b &= b - 1;
        }
        s
    }

    /// Minimum-weight flip set reproducing the syndrome of `bits`.
    pub fn correction(&self, bits: u128) -> Result<u128> {
        self.table
            .get(&self.syndrome(bits))
            .copied()
            .ok_or(BccError::DecodeFail { w_max: self.w_max })
    }

    /// Logical parity of `bits` after correction.
    pub fn decode(&self, bits: u128) -> Result<bool> {
        let c = self.correction(bits)?;
        Ok(((bits ^ c) & self.logical).count_ones() % 2 == 1)
    }
}

/// Decodes one block's measured bits; see [`BlockDecoder`].
pub fn decode_block(bits: &BitVector, code: &CssCode, basis: Basis, w_max: usize) -> Result<bool> {
    if bits.len() != code.n() {
        return Err(BccError::DimensionMismatch {
            expected: code.n(),
            found: bits.len(),
        });
    }
    BlockDecoder::new(code, basis, w_max)?.decode(bits.to_u128())
}
