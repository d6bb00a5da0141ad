//! Arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^l} ⊂ F_{q^{2l}}, q = p^h.
//!
//! The top field F_{p^n}, n = 2lh, is realized as F_p[t]/(m(t)) where m is the
//! first monic irreducible of degree n in lexicographic order of its
//! coefficient tuple (c_0, c_1, ..., c_{n-1}). Elements are coordinate vectors
//! in the power basis 1, t, ..., t^{n-1}. Frobenius powers x ↦ x^{p^e} are
//! F_p-linear and are applied through precomputed matrices.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use once_cell::race::OnceBox;

use crate::arith;
use crate::error::{Error, Result};
use crate::fp::poly;

/// Largest supported extension degree n = 2lh.
pub const MAX_DEGREE: usize = 32;

/// Fields above this order refuse to build a discrete-log table.
pub const DLOG_LIMIT: u64 = 1 << 40;

/// An element of F_{p^n}: its coordinates in the power basis.
///
/// Coordinates past the field degree are always zero, so the derived
/// ordering is the lexicographic order on (c_0, c_1, ...).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    c: [u16; MAX_DEGREE],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { c: [0; MAX_DEGREE] };

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u16 {
        self.c[i]
    }

    /// The first `n` coordinates.
    pub fn coeffs(&self, n: usize) -> &[u16] {
        &self.c[..n]
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.c.iter().rposition(|&x| x != 0).map_or(1, |i| i + 1);
        f.debug_list().entries(&self.c[..len]).finish()
    }
}

/// Baby-step table for discrete logarithms to base γ.
struct Bsgs {
    step: u64,
    /// (index of γ^j, j), sorted by index.
    baby: Vec<(u64, u64)>,
    /// γ^{-step}
    giant: FieldElement,
}

/// A concrete realization of F_{q^{2l}} with its tower data.
pub struct FieldSpec {
    p: u32,
    h: u32,
    l: u32,
    n: usize,
    order: u64,
    modulus: Vec<u16>,
    /// (p - m_i) mod p for the non-leading modulus coefficients.
    neg_modulus: Vec<u64>,
    gamma: FieldElement,
    /// frob[e][k] = (t^k)^{p^e}
    frob: Vec<Vec<FieldElement>>,
    pow_p: Vec<u64>,
    group_factors: Vec<(u64, u32)>,
    dlog: OnceBox<Bsgs>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("l", &self.l)
            .field("modulus", &self.modulus)
            .field("gamma", &self.gamma)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.h == other.h
            && self.l == other.l
            && self.modulus == other.modulus
            && self.gamma == other.gamma
    }
}

impl Eq for FieldSpec {}

/// Builds F_{q^{2l}} with q = p^h using the deterministic modulus and
/// primitive element.
pub fn make_field(p: u64, h: u32, l: u32) -> Result<Arc<FieldSpec>> {
    let n = check_shape(p, h, l)?;
    let modulus = first_irreducible(p, n);
    let mut spec = FieldSpec::skeleton(p as u32, h, l, modulus);
    spec.gamma = spec.first_primitive();
    Ok(Arc::new(spec))
}

fn check_shape(p: u64, h: u32, l: u32) -> Result<usize> {
    if p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if h == 0 || l == 0 {
        return Err(Error::InvalidField("h and l must be positive".to_string()));
    }
    let degree = 2 * h as u64 * l as u64;
    let overflow = Error::DegreeOverflow { p, degree };
    if degree > MAX_DEGREE as u64 || p >= 1 << 16 {
        return Err(overflow);
    }
    arith::checked_pow(p, degree as u32).ok_or(overflow)?;
    Ok(degree as usize)
}

/// First monic irreducible of degree `n` in lexicographic order of
/// (c_0, ..., c_{n-1}). Every candidate with c_0 = 0 is divisible by t, so the
/// scan starts at c_0 = 1.
fn first_irreducible(p: u64, n: usize) -> Vec<u16> {
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    coeffs[0] = 1;
    loop {
        if poly::is_irreducible(&coeffs, p) {
            return coeffs.iter().map(|&c| c as u16).collect();
        }
        // increment with c_{n-1} fastest
        let mut i = n - 1;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            // An irreducible exists for every degree, so c_0 never wraps.
            i -= 1;
        }
    }
}

impl FieldSpec {
    /// Builds a field from an explicit modulus (constant term first, monic,
    /// `n + 1` entries) and primitive element, validating both.
    pub fn with_modulus(p: u64, h: u32, l: u32, modulus: &[u64], gamma: &[u64]) -> Result<Arc<FieldSpec>> {
        let n = check_shape(p, h, l)?;
        if modulus.len() != n + 1 || modulus[n] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {n} with residues below {p}"
            )));
        }
        if !poly::is_irreducible(modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".to_string()));
        }
        let mut spec = FieldSpec::skeleton(p as u32, h, l, modulus.iter().map(|&c| c as u16).collect());
        let g = spec.from_residues(gamma)?;
        if !spec.is_primitive(&g) {
            return Err(Error::InvalidField("gamma is not primitive".to_string()));
        }
        spec.gamma = g;
        Ok(Arc::new(spec))
    }

    fn skeleton(p: u32, h: u32, l: u32, modulus: Vec<u16>) -> FieldSpec {
        let n = modulus.len() - 1;
        let pu = p as u64;
        let neg_modulus = modulus[..n].iter().map(|&m| (pu - m as u64) % pu).collect();
        let pow_p: Vec<u64> = (0..=n as u32).map(|i| pu.pow(i)).collect();
        let order = pow_p[n];
        let half = pu.pow(n as u32 / 2);
        let group_factors = arith::merge_factors(&arith::factor(half - 1), &arith::factor(half + 1));
        let mut spec = FieldSpec {
            p,
            h,
            l,
            n,
            order,
            modulus,
            neg_modulus,
            gamma: FieldElement::ZERO,
            frob: Vec::new(),
            pow_p,
            group_factors,
            dlog: OnceBox::new(),
        };
        let basis: Vec<FieldElement> = (0..n).map(|k| spec.basis(k)).collect();
        let mut frob = vec![basis];
        if n > 1 {
            let first: Vec<FieldElement> = (0..n).map(|k| spec.pow(&spec.basis(k), pu)).collect();
            frob.push(first);
            for e in 2..n {
                let prev = &frob[e - 1];
                let next = prev.iter().map(|x| apply_columns(n, pu, &frob[1], x)).collect();
                frob.push(next);
            }
        }
        spec.frob = frob;
        spec
    }

    fn first_primitive(&self) -> FieldElement {
        let n = self.n;
        let p = self.p as u16;
        let mut x = FieldElement::ZERO;
        loop {
            let mut i = n - 1;
            loop {
                x.c[i] += 1;
                if x.c[i] < p {
                    break;
                }
                x.c[i] = 0;
                i -= 1;
            }
            if self.is_primitive(&x) {
                return x;
            }
        }
    }

    pub fn is_primitive(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return false;
        }
        let m = self.order - 1;
        self.group_factors
            .iter()
            .all(|&(r, _)| self.pow(x, m / r) != self.one())
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// q = p^h
    pub fn q(&self) -> u64 {
        self.pow_p[self.h as usize]
    }

    /// Extension degree n = 2lh over F_p.
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Field order p^n.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    /// The fixed primitive element γ.
    pub fn gamma(&self) -> FieldElement {
        self.gamma
    }

    /// Exponent of the Frobenius x ↦ x^{q^k} in p-units, reduced mod n.
    pub fn q_exp(&self, k: i64) -> usize {
        (k * self.h as i64).rem_euclid(self.n as i64) as usize
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    /// The image of an integer in F_p ⊂ F_{p^n}.
    pub fn scalar(&self, c: i64) -> FieldElement {
        let mut x = FieldElement::ZERO;
        x.c[0] = c.rem_euclid(self.p as i64) as u16;
        x
    }

    /// Inverse of 2 in F_p.
    pub fn half(&self) -> FieldElement {
        self.scalar((self.p as i64 + 1) / 2)
    }

    /// The basis element t^k.
    pub fn basis(&self, k: usize) -> FieldElement {
        let mut x = FieldElement::ZERO;
        x.c[k] = 1;
        x
    }

    pub fn from_residues(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.n || coeffs.iter().any(|&c| c >= self.p as u64) {
            return Err(Error::InvalidField(format!(
                "element needs {} residues below {}",
                self.n, self.p
            )));
        }
        let mut x = FieldElement::ZERO;
        for (slot, &c) in x.c.iter_mut().zip(coeffs) {
            *slot = c as u16;
        }
        Ok(x)
    }

    pub fn residues(&self, x: &FieldElement) -> Vec<u64> {
        x.coeffs(self.n).iter().map(|&c| c as u64).collect()
    }

    /// Base-p little-endian rank of the coordinate vector.
    pub fn index_of(&self, x: &FieldElement) -> u64 {
        (0..self.n).rev().fold(0u64, |acc, i| acc * self.p as u64 + x.c[i] as u64)
    }

    /// Inverse of [`index_of`](Self::index_of); `idx` is taken mod p^n.
    pub fn element(&self, mut idx: u64) -> FieldElement {
        let mut x = FieldElement::ZERO;
        idx %= self.order;
        for slot in x.c.iter_mut().take(self.n) {
            *slot = (idx % self.p as u64) as u16;
            idx /= self.p as u64;
        }
        x
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p as u16;
        let mut out = FieldElement::ZERO;
        for i in 0..self.n {
            let s = a.c[i] + b.c[i];
            out.c[i] = if s >= p { s - p } else { s };
        }
        out
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p as u16;
        let mut out = FieldElement::ZERO;
        for i in 0..self.n {
            out.c[i] = if a.c[i] == 0 { 0 } else { p - a.c[i] };
        }
        out
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    /// Multiplication by an integer residue.
    pub fn scale(&self, a: &FieldElement, c: u64) -> FieldElement {
        let p = self.p as u64;
        let c = c % p;
        let mut out = FieldElement::ZERO;
        for i in 0..self.n {
            out.c[i] = (a.c[i] as u64 * c % p) as u16;
        }
        out
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let p = self.p as u64;
        let mut acc = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            let x = a.c[i] as u64;
            if x == 0 {
                continue;
            }
            for j in 0..n {
                acc[i + j] += x * b.c[j] as u64;
            }
        }
        // t^n = -(m_0 + ... + m_{n-1} t^{n-1})
        for k in (n..2 * n - 1).rev() {
            let c = acc[k] % p;
            if c == 0 {
                continue;
            }
            for (i, &m) in self.neg_modulus.iter().enumerate() {
                acc[k - n + i] += c * m;
            }
        }
        let mut out = FieldElement::ZERO;
        for i in 0..n {
            out.c[i] = (acc[i] % p) as u16;
        }
        out
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElement, mut k: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = *a;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        result
    }

    /// a^k for a possibly negative exponent, read modulo p^n - 1. `a` must be
    /// nonzero unless `k` is positive.
    pub fn pow_signed(&self, a: &FieldElement, k: i128) -> FieldElement {
        if k > 0 && a.is_zero() {
            return FieldElement::ZERO;
        }
        let m = (self.order - 1) as i128;
        self.pow(a, k.rem_euclid(m) as u64)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// x^{p^e}, with `e` read modulo n.
    pub fn frobenius(&self, x: &FieldElement, e: i64) -> FieldElement {
        let e = e.rem_euclid(self.n as i64) as usize;
        if e == 0 {
            return *x;
        }
        apply_columns(self.n, self.p as u64, &self.frob[e], x)
    }

    /// Images of the power basis under x ↦ x^{p^e}.
    pub fn frobenius_columns(&self, e: usize) -> &[FieldElement] {
        &self.frob[e % self.n]
    }

    /// x ↦ x^{q^k}
    pub fn frobenius_q(&self, x: &FieldElement, k: i64) -> FieldElement {
        self.frobenius(x, self.q_exp(k) as i64)
    }

    /// Tr(x) = x + x^{q^l}, the trace onto F_{q^l}.
    pub fn trace_to_half(&self, x: &FieldElement) -> FieldElement {
        self.add(x, &self.frobenius_q(x, self.l as i64))
    }

    /// Whether `x` lies in the subfield of order p^e (`e` divides n).
    pub fn in_subfield(&self, x: &FieldElement, e: usize) -> bool {
        self.frobenius(x, e as i64) == *x
    }

    pub fn in_fq(&self, x: &FieldElement) -> bool {
        self.in_subfield(x, self.h as usize)
    }

    pub fn in_half(&self, x: &FieldElement) -> bool {
        self.in_subfield(x, (self.l * self.h) as usize)
    }

    pub fn is_square(&self, x: &FieldElement) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.pow(x, (self.order - 1) / 2) == self.one())
    }

    /// Discrete logarithm to base γ by baby-step/giant-step.
    pub fn discrete_log(&self, x: &FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.order > DLOG_LIMIT {
            return Err(Error::SizeGuard {
                what: "discrete log",
                needed: self.order as u128,
                limit: DLOG_LIMIT as u128,
            });
        }
        let table = self.dlog.get_or_init(|| alloc::boxed::Box::new(self.build_bsgs()));
        let mut y = *x;
        for i in 0..table.step {
            let key = self.index_of(&y);
            if let Ok(pos) = table.baby.binary_search_by_key(&key, |&(k, _)| k) {
                let j = table.baby[pos].1;
                return Ok((i * table.step + j) % (self.order - 1));
            }
            y = self.mul(&y, &table.giant);
        }
        unreachable!("γ is primitive, every nonzero element has a logarithm")
    }

    fn build_bsgs(&self) -> Bsgs {
        let group = self.order - 1;
        let mut step = group.isqrt();
        while step * step < group {
            step += 1;
        }
        let mut baby = Vec::with_capacity(step as usize);
        let mut cur = self.one();
        for j in 0..step {
            baby.push((self.index_of(&cur), j));
            cur = self.mul(&cur, &self.gamma);
        }
        baby.sort_unstable();
        let giant = self.pow(&self.gamma, group - step % group);
        Bsgs { step, baby, giant }
    }

    /// γ^k
    pub fn gamma_pow(&self, k: u64) -> FieldElement {
        self.pow(&self.gamma, k % (self.order - 1))
    }

    /// b₀ = γ^s with s the least solution of
    /// log β' - log β + (q^d + 1) s ≡ 0 (mod q^l + 1), so that
    /// β' β^{-1} b₀^{q^d+1} ∈ F_{q^l}.
    pub fn solve_b0(&self, beta_log: u64, beta_prime_log: u64, d: u64) -> Result<FieldElement> {
        self.check_pair(d)?;
        if beta_log.is_multiple_of(2) || beta_prime_log.is_multiple_of(2) {
            return Err(Error::InvalidParams("β and β' must be nonsquares".to_string()));
        }
        let q = self.q() as u128;
        let m = q.pow(self.l) + 1;
        let coef = arith::pow_mod(q, d as u128, m) + 1;
        let group = (self.order - 1) as u128;
        let rhs = (beta_log as u128 % group + group - beta_prime_log as u128 % group) % m;
        let s = arith::solve_linear_congruence(coef, rhs, m)
            .ok_or_else(|| Error::NoSolution("b0 congruence".to_string()))?;
        let b0 = self.gamma_pow(s as u64);
        let beta = self.gamma_pow(beta_log);
        let beta_prime = self.gamma_pow(beta_prime_log);
        let b0_norm = self.mul(&b0, &self.frobenius_q(&b0, d as i64));
        let z = self.mul(&self.div(&beta_prime, &beta)?, &b0_norm);
        if !self.in_half(&z) {
            return Err(Error::NoSolution("b0 fails the F_{q^l} membership check".to_string()));
        }
        Ok(b0)
    }

    /// b₁ = γ^s with s the least solution of
    /// (1 - q^{2l-d}) log β + (q^{2l-d} + 1) s ≡ 0 (mod q^l + 1).
    pub fn solve_b1(&self, beta_log: u64, d: u64) -> Result<FieldElement> {
        self.check_pair(d)?;
        if beta_log.is_multiple_of(2) {
            return Err(Error::InvalidParams("β must be a nonsquare".to_string()));
        }
        let q = self.q() as u128;
        let l = self.l as i64;
        let k = (2 * l - d as i64).rem_euclid(2 * l);
        let m = q.pow(self.l) + 1;
        let qk = arith::pow_mod(q, k as u128, m);
        let rhs = arith::mul_mod((qk + m - 1) % m, beta_log as u128, m);
        let s = arith::solve_linear_congruence(qk + 1, rhs, m)
            .ok_or_else(|| Error::NoSolution("b1 congruence".to_string()))?;
        let b1 = self.gamma_pow(s as u64);
        let beta = self.gamma_pow(beta_log);
        let beta_part = self.div(&beta, &self.frobenius_q(&beta, k))?;
        let z = self.mul(&beta_part, &self.mul(&b1, &self.frobenius_q(&b1, k)));
        if !self.in_half(&z) {
            return Err(Error::NoSolution("b1 fails the F_{q^l} membership check".to_string()));
        }
        Ok(b1)
    }

    fn check_pair(&self, d: u64) -> Result<()> {
        let l = self.l as u64;
        if d == 0 || arith::gcd(l, d) != 1 || (l + d).is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "need gcd(l, d) = 1 and l + d odd (l = {l}, d = {d})"
            )));
        }
        Ok(())
    }

    /// β := γ and ω := γ^{(q^l+1)/2}.
    pub fn canonical_constants(&self) -> CanonicalConstants {
        let ql = self.q().pow(self.l);
        CanonicalConstants {
            beta: self.gamma,
            beta_log: 1,
            omega: self.gamma_pow(ql.div_ceil(2)),
            omega_log: ql.div_ceil(2),
        }
    }
}

/// Σ_k x_k · cols[k], the action of an F_p-linear map given by the images of
/// the power basis.
fn apply_columns(n: usize, p: u64, cols: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = [0u64; MAX_DEGREE];
    for (k, col) in cols.iter().enumerate().take(n) {
        let xk = x.c[k] as u64;
        if xk == 0 {
            continue;
        }
        for i in 0..n {
            acc[i] += xk * col.c[i] as u64;
        }
    }
    let mut out = FieldElement::ZERO;
    for i in 0..n {
        out.c[i] = (acc[i] % p) as u16;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalConstants {
    /// A nonsquare of F_{q^{2l}}.
    pub beta: FieldElement,
    pub beta_log: u64,
    /// Nonzero with ω + ω^{q^l} = 0.
    pub omega: FieldElement,
    pub omega_log: u64,
}
