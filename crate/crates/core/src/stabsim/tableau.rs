//! Aaronson–Gottesman stabilizer tableau with symbolic signs.
//!
//! Each random measurement introduces a fresh variable. Row signs are affine
//! functions of those variables over GF(2), stored as a bit-vector whose bit
//! 0 is the constant term. A measurement outcome, or a parity of outcomes, is
//! deterministic iff its expression has no variable bits.

use crate::circuit::Op;
use crate::gf2::BitVector;
use crate::pauli::{phase_counts, PauliOperator};

use super::noise::SinglePauli;

/// Affine GF(2) expression over measurement variables; bit 0 is the constant.
pub type SignExpr = BitVector;

pub fn is_constant(e: &SignExpr) -> bool {
    e.ones().all(|i| i == 0)
}

pub fn constant_value(e: &SignExpr) -> bool {
    e.get(0)
}

#[derive(Clone, Debug)]
pub struct Tableau {
    n: usize,
    words: usize,
    /// Rows `0..n` are destabilizers, `n..2n` stabilizers.
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<SignExpr>,
    vars: usize,
    next_var: usize,
}

impl Tableau {
    /// `|0...0>` on `n` qubits with room for `max_vars` random outcomes.
    pub fn new(n: usize, max_vars: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut t = Self {
            n,
            words,
            xs: vec![0; 2 * n * words],
            zs: vec![0; 2 * n * words],
            signs: vec![BitVector::zeros(max_vars + 1); 2 * n],
            vars: max_vars,
            next_var: 1,
        };
        for q in 0..n {
            t.xs[q * words + q / 64] |= 1 << (q % 64);
            t.zs[(n + q) * words + q / 64] |= 1 << (q % 64);
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_vars_used(&self) -> usize {
        self.next_var - 1
    }

    pub fn constant(&self, value: bool) -> SignExpr {
        let mut e = BitVector::zeros(self.vars + 1);
        e.set(0, value);
        e
    }

    #[inline]
    fn bit(words: &[u64], stride: usize, row: usize, q: usize) -> bool {
        (words[row * stride + q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    fn xbit(&self, row: usize, q: usize) -> bool {
        Self::bit(&self.xs, self.words, row, q)
    }

    #[inline]
    fn zbit(&self, row: usize, q: usize) -> bool {
        Self::bit(&self.zs, self.words, row, q)
    }

    fn row_x(&self, row: usize) -> &[u64] {
        &self.xs[row * self.words..(row + 1) * self.words]
    }

    fn row_z(&self, row: usize) -> &[u64] {
        &self.zs[row * self.words..(row + 1) * self.words]
    }

    /// Stabilizer row `i` as an unsigned Pauli.
    pub fn stabilizer(&self, i: usize) -> PauliOperator {
        self.row_pauli(self.n + i)
    }

    pub fn stabilizer_sign(&self, i: usize) -> &SignExpr {
        &self.signs[self.n + i]
    }

    fn row_pauli(&self, row: usize) -> PauliOperator {
        let x = BitVector::from_indices(self.n, (0..self.n).filter(|&q| self.xbit(row, q)));
        let z = BitVector::from_indices(self.n, (0..self.n).filter(|&q| self.zbit(row, q)));
        PauliOperator::new(x, z, false)
    }

    /// Multiplies row `src` into row `dst`.
    fn rowsum(&mut self, dst: usize, src: usize) {
        let (mut plus, mut minus) = (0u32, 0u32);
        let w = self.words;
        for k in 0..w {
            let (p, m) = phase_counts(
                self.xs[src * w + k],
                self.zs[src * w + k],
                self.xs[dst * w + k],
                self.zs[dst * w + k],
            );
            plus += p;
            minus += m;
        }
        let src_sign = self.signs[src].clone();
        let dst_sign = &mut self.signs[dst];
        dst_sign.xor_assign(&src_sign);
        if (plus + 4 * 64 * w as u32 - minus) % 4 == 2 {
            dst_sign.flip(0);
        }
        for k in 0..w {
            self.xs[dst * w + k] ^= self.xs[src * w + k];
            self.zs[dst * w + k] ^= self.zs[src * w + k];
        }
    }

    pub fn h(&mut self, q: usize) {
        let (wi, b) = (q / 64, q % 64);
        let w = self.words;
        for r in 0..2 * self.n {
            let x = (self.xs[r * w + wi] >> b) & 1;
            let z = (self.zs[r * w + wi] >> b) & 1;
            if x & z == 1 {
                self.signs[r].flip(0);
            }
            if x != z {
                self.xs[r * w + wi] ^= 1 << b;
                self.zs[r * w + wi] ^= 1 << b;
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let w = self.words;
        for r in 0..2 * self.n {
            let xc = Self::bit(&self.xs, w, r, c);
            let zc = Self::bit(&self.zs, w, r, c);
            let xt = Self::bit(&self.xs, w, r, t);
            let zt = Self::bit(&self.zs, w, r, t);
            if xc && zt && (xt == zc) {
                self.signs[r].flip(0);
            }
            if xc {
                self.xs[r * w + t / 64] ^= 1 << (t % 64);
            }
            if zt {
                self.zs[r * w + c / 64] ^= 1 << (c % 64);
            }
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        let w = self.words;
        for r in 0..2 * self.n {
            let xa = Self::bit(&self.xs, w, r, a);
            let za = Self::bit(&self.zs, w, r, a);
            let xb = Self::bit(&self.xs, w, r, b);
            let zb = Self::bit(&self.zs, w, r, b);
            if xa && xb && (za != zb) {
                self.signs[r].flip(0);
            }
            if xb {
                self.zs[r * w + a / 64] ^= 1 << (a % 64);
            }
            if xa {
                self.zs[r * w + b / 64] ^= 1 << (b % 64);
            }
        }
    }

    /// Applies a Pauli gate, flipping the signs of anticommuting rows.
    pub fn pauli(&mut self, q: usize, p: SinglePauli) {
        let w = self.words;
        for r in 0..2 * self.n {
            let x = Self::bit(&self.xs, w, r, q);
            let z = Self::bit(&self.zs, w, r, q);
            let anti = match p {
                SinglePauli::X => z,
                SinglePauli::Z => x,
                SinglePauli::Y => x != z,
            };
            if anti {
                self.signs[r].flip(0);
            }
        }
    }

    /// Measures Z on `q` and returns the outcome expression.
    pub fn measure_z(&mut self, q: usize) -> SignExpr {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&r| self.xbit(r, q)) {
            for r in 0..2 * n {
                if r != p && self.xbit(r, q) {
                    self.rowsum(r, p);
                }
            }
            let w = self.words;
            let (src, dst) = (p * w, (p - n) * w);
            for k in 0..w {
                self.xs[dst + k] = self.xs[src + k];
                self.zs[dst + k] = self.zs[src + k];
                self.xs[src + k] = 0;
                self.zs[src + k] = 0;
            }
            self.signs[p - n] = self.signs[p].clone();
            self.zs[src + q / 64] |= 1 << (q % 64);
            assert!(self.next_var <= self.vars, "tableau ran out of outcome variables");
            let mut e = BitVector::zeros(self.vars + 1);
            e.set(self.next_var, true);
            self.next_var += 1;
            self.signs[p] = e.clone();
            e
        } else {
            // deterministic: accumulate into a scratch row appended at the end
            let w = self.words;
            self.xs.extend(std::iter::repeat_n(0, w));
            self.zs.extend(std::iter::repeat_n(0, w));
            self.signs.push(BitVector::zeros(self.vars + 1));
            let scratch = 2 * n;
            for i in 0..n {
                if self.xbit(i, q) {
                    self.rowsum(scratch, i + n);
                }
            }
            let e = self.signs.pop().expect("scratch row");
            self.xs.truncate(2 * n * w);
            self.zs.truncate(2 * n * w);
            e
        }
    }

    pub fn measure_x(&mut self, q: usize) -> SignExpr {
        self.h(q);
        let e = self.measure_z(q);
        self.h(q);
        e
    }

    /// Resets `q` to `|0>`: measure, then undo a 1 outcome with X.
    pub fn reset_z(&mut self, q: usize) {
        let e = self.measure_z(q);
        if e.is_zero() {
            return;
        }
        let n = self.n;
        for r in n..2 * n {
            if self.zbit(r, q) {
                self.signs[r].xor_assign(&e);
            }
        }
    }

    /// If `p` (up to sign) is in the stabilizer group, the expression `e`
    /// with `(-1)^e · p_unsigned` in the group.
    pub fn stabilizer_expr(&self, p: &PauliOperator) -> Option<SignExpr> {
        assert_eq!(p.num_qubits(), self.n);
        let n = self.n;
        let anticommutes = |row: usize| {
            let mut parity = 0u32;
            for (k, (&x, &z)) in self.row_x(row).iter().zip(self.row_z(row)).enumerate() {
                let px = p.x_support().words().get(k).copied().unwrap_or(0);
                let pz = p.z_support().words().get(k).copied().unwrap_or(0);
                parity ^= ((x & pz) ^ (z & px)).count_ones();
            }
            parity & 1 == 1
        };
        if (n..2 * n).any(anticommutes) {
            return None;
        }
        let mut acc = self.clone();
        let w = acc.words;
        acc.xs.extend(std::iter::repeat_n(0, w));
        acc.zs.extend(std::iter::repeat_n(0, w));
        acc.signs.push(BitVector::zeros(acc.vars + 1));
        for i in 0..n {
            if anticommutes(i) {
                acc.rowsum(2 * n, n + i);
            }
        }
        let got = acc.row_pauli(2 * n);
        if got.x_support() != p.x_support() || got.z_support() != p.z_support() {
            return None;
        }
        let mut e = acc.signs[2 * n].clone();
        if p.is_negative() {
            e.flip(0);
        }
        Some(e)
    }

    /// True iff the state is a +1 eigenstate of `p` (sign included).
    pub fn stabilizes(&self, p: &PauliOperator) -> bool {
        self.stabilizer_expr(p).is_some_and(|e| e.is_zero())
    }

    /// True iff `p` or `-p` is in the stabilizer group.
    pub fn stabilizes_up_to_sign(&self, p: &PauliOperator) -> bool {
        self.stabilizer_expr(p).is_some_and(|e| is_constant(&e))
    }

    /// Checks the symplectic pattern: destabilizer `i` anticommutes with
    /// stabilizer `i` only, and all other pairs commute.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        let commute = |a: usize, b: usize| {
            let mut parity = 0u32;
            for k in 0..self.words {
                parity ^= ((self.row_x(a)[k] & self.row_z(b)[k]) ^ (self.row_z(a)[k] & self.row_x(b)[k])).count_ones();
            }
            parity & 1 == 0
        };
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let should_anti = j == i + n;
                if commute(i, j) == should_anti {
                    return false;
                }
            }
        }
        true
    }
}

impl Tableau {
    /// Applies one instruction; measurements return their outcome expression.
    pub fn apply(&mut self, op: Op) -> Option<SignExpr> {
        match op {
            Op::InitZero(q) => self.reset_z(q),
            Op::InitPlus(q) => {
                self.reset_z(q);
                self.h(q);
            }
            Op::H(q) => self.h(q),
            Op::Cz(a, b) => self.cz(a, b),
            Op::Cnot { control, target } => self.cnot(control, target),
            Op::MeasureZ(q) => return Some(self.measure_z(q)),
            Op::MeasureX(q) => return Some(self.measure_x(q)),
        }
        None
    }
}
