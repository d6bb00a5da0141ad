//! Prime-field building blocks: dense polynomials over F_p (used to pick the
//! defining modulus) and square matrices over F_p (used for linear maps).

use alloc::vec;
use alloc::vec::Vec;

#[inline]
pub(crate) fn inv_p(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    crate::arith::pow_mod(a as u128, (p - 2) as u128, p as u128) as u64
}

/// Polynomials over F_p as coefficient vectors, constant term first, with
/// no trailing zeros (the zero polynomial is empty).
pub(crate) mod poly {
    use super::*;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, slot) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *slot = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo `m`; `m` must be nonzero.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_p(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            if c != 0 {
                let shift = top - dm;
                for (i, &mi) in m.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            exp >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's test: `m` (monic, degree n) is irreducible iff
    /// t^{p^n} ≡ t and gcd(t^{p^{n/r}} - t, m) = 1 for every prime r | n.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let n = m.len() - 1;
        if n == 0 {
            return false;
        }
        if m[0] == 0 {
            return n == 1;
        }
        let t = [0u64, 1];
        // frob[k] = t^{p^k} mod m
        let mut frob = Vec::with_capacity(n + 1);
        let mut cur = rem(&t, m, p);
        frob.push(cur.clone());
        for _ in 0..n {
            cur = pow_mod(&cur, p, m, p);
            frob.push(cur.clone());
        }
        if frob[n] != rem(&t, m, p) {
            return false;
        }
        for (r, _) in crate::arith::factor(n as u64) {
            let k = n / r as usize;
            let diff = sub(&frob[k], &t, p);
            let g = gcd(m, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Square matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    n: usize,
    p: u64,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zero(n: usize, p: u64) -> Self {
        FpMatrix {
            n,
            p,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zero(n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix whose column `j` is `cols[j]`.
    pub fn from_columns(p: u64, cols: &[Vec<u32>]) -> Self {
        let n = cols.len();
        let mut m = Self::zero(n, p);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate().take(n) {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        let n = self.n;
        let p = self.p;
        let mut out = FpMatrix::zero(n, p);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        (0..self.n)
            .map(|i| {
                let s = (0..self.n).fold(0u64, |acc, j| {
                    (acc + self.get(i, j) as u64 * v[j] as u64) % self.p
                });
                s as u32
            })
            .collect()
    }

    /// Row-reduces a copy and returns it together with the rank.
    fn echelon(&self) -> (FpMatrix, usize) {
        let mut m = self.clone();
        let (n, p) = (self.n, self.p);
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(piv, rank);
            let inv = inv_p(m.get(rank, col) as u64, p);
            m.scale_row(rank, inv);
            for r in 0..n {
                if r != rank {
                    let f = m.get(r, col) as u64;
                    if f != 0 {
                        m.add_row_multiple(r, rank, p - f);
                    }
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        let (n, p) = (self.n, self.p);
        // Augmented [A | I], reduced in place.
        let mut a = self.clone();
        let mut inv = FpMatrix::identity(n, p);
        for col in 0..n {
            let piv = (col..n).find(|&r| a.get(r, col) != 0)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let s = inv_p(a.get(col, col) as u64, p);
            a.scale_row(col, s);
            inv.scale_row(col, s);
            for r in 0..n {
                if r != col {
                    let f = a.get(r, col) as u64;
                    if f != 0 {
                        a.add_row_multiple(r, col, p - f);
                        inv.add_row_multiple(r, col, p - f);
                    }
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.data.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: u64) {
        for j in 0..self.n {
            let idx = r * self.n + j;
            self.data[idx] = (self.data[idx] as u64 * s % self.p) as u32;
        }
    }

    /// row[dst] += f * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: u64) {
        for j in 0..self.n {
            let v = self.data[src * self.n + j] as u64;
            let idx = dst * self.n + j;
            self.data[idx] = ((self.data[idx] as u64 + f * v) % self.p) as u32;
        }
    }
}
