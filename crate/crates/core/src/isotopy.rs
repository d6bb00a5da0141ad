//! Isotopism certificates (M, N, L) with L(x ∗ y) = M(x) ∗' N(y).
//!
//! A certificate is checked as an identity of bilinear forms:
//! L ∘ B_src = B_dst ∘ (M × N), plus invertibility of the three maps. A second,
//! independent route evaluates both sides on all basis pairs.

use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith;
use crate::bh::{BhParams, Semifield};
use crate::biform::{agree_on_basis_pairs, BiForm};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linmap::{same_field, PLinearMap};
use crate::nuclei;
use crate::par;

/// Cap on the number of b values tried per exponent in the monomial search.
pub const MONOMIAL_SEARCH_GUARD: u64 = 1 << 20;

/// Cap on the number of candidates of the two-term search.
pub const BINOMIAL_SEARCH_GUARD: u128 = 1 << 26;

/// Which multiplications the certificate relates: the presemifield products
/// ∗ or the semifield isotopes ⋆.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Presemifield,
    Semifield,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotopismCert {
    src: BhParams,
    dst: BhParams,
    m: PLinearMap,
    n: PLinearMap,
    l: PLinearMap,
    strong: bool,
    level: Level,
}

impl IsotopismCert {
    /// Unverified triple; `strong` is set from M = N.
    pub fn new(src: BhParams, dst: BhParams, m: PLinearMap, n: PLinearMap, l: PLinearMap, level: Level) -> Self {
        let strong = m == n;
        IsotopismCert {
            src,
            dst,
            m,
            n,
            l,
            strong,
            level,
        }
    }

    /// Unverified triple with an externally declared strong flag, as read
    /// from a file. `verify` rejects a flag that disagrees with M = N.
    pub fn from_parts(
        src: BhParams,
        dst: BhParams,
        m: PLinearMap,
        n: PLinearMap,
        l: PLinearMap,
        strong: bool,
        level: Level,
    ) -> Self {
        IsotopismCert {
            src,
            dst,
            m,
            n,
            l,
            strong,
            level,
        }
    }

    pub fn src(&self) -> &BhParams {
        &self.src
    }

    pub fn dst(&self) -> &BhParams {
        &self.dst
    }

    pub fn m(&self) -> &PLinearMap {
        &self.m
    }

    pub fn n(&self) -> &PLinearMap {
        &self.n
    }

    pub fn l(&self) -> &PLinearMap {
        &self.l
    }

    pub fn strong(&self) -> bool {
        self.strong
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.src.spec()
    }

    fn check_fields(&self) -> Result<()> {
        let f = self.src.spec();
        let all = [self.dst.spec(), self.m.spec(), self.n.spec(), self.l.spec()];
        if all.iter().all(|g| same_field(f, g)) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    fn forms(&self) -> Result<(BiForm, BiForm)> {
        Ok(match self.level {
            Level::Presemifield => (self.src.form(), self.dst.form()),
            Level::Semifield => (
                Semifield::new(&self.src)?.form().clone(),
                Semifield::new(&self.dst)?.form().clone(),
            ),
        })
    }

    /// Exact check: the strong flag matches, M, N, L are permutations and
    /// L ∘ B_src = B_dst ∘ (M × N) as forms.
    pub fn verify(&self) -> Result<bool> {
        self.check_fields()?;
        if self.strong != (self.m == self.n) {
            return Ok(false);
        }
        if !self.l.is_permutation() || !self.n.is_permutation() {
            return Ok(false);
        }
        if !self.strong && !self.m.is_permutation() {
            return Ok(false);
        }
        let (bs, bd) = self.forms()?;
        Ok(bs.apply_left(&self.l)? == bd.substitute(&self.m, &self.n)?)
    }

    /// Same identity, checked by evaluating both products on the n² basis
    /// pairs straight from their defining formulas.
    pub fn verify_basis_pairs(&self) -> Result<bool> {
        self.check_fields()?;
        let f = self.spec().clone();
        let perms = self.l.is_permutation() && self.m.is_permutation() && self.n.is_permutation();
        if !perms || self.strong != (self.m == self.n) {
            return Ok(false);
        }
        let ok = match self.level {
            Level::Presemifield => agree_on_basis_pairs(
                |x, y| self.l.eval(&self.src.mul(x, y)),
                |x, y| self.dst.mul(&self.m.eval(x), &self.n.eval(y)),
                &f,
            ),
            Level::Semifield => {
                let s = Semifield::new(&self.src)?;
                let t = Semifield::new(&self.dst)?;
                agree_on_basis_pairs(
                    |x, y| self.l.eval(&s.mul_direct(x, y)),
                    |x, y| t.mul_direct(&self.m.eval(x), &self.n.eval(y)),
                    &f,
                )
            }
        };
        Ok(ok)
    }

    /// `self`: A → B followed by `next`: B → C gives A → C.
    pub fn compose(&self, next: &IsotopismCert) -> Result<IsotopismCert> {
        self.check_fields()?;
        next.check_fields()?;
        if !same_field(self.spec(), next.spec()) {
            return Err(Error::SpecMismatch);
        }
        if self.dst != next.src || self.level != next.level {
            return Err(Error::InvalidParams(
                "certificates do not chain (target and source differ)".to_string(),
            ));
        }
        Ok(IsotopismCert::new(
            self.src.clone(),
            next.dst.clone(),
            next.m.compose(&self.m),
            next.n.compose(&self.n),
            next.l.compose(&self.l),
            self.level,
        ))
    }

    /// B → A from A → B: (M^{-1}, N^{-1}, L^{-1}).
    pub fn inverse(&self) -> Result<IsotopismCert> {
        self.check_fields()?;
        let n = self.n.invert()?;
        let m = if self.strong { n.clone() } else { self.m.invert()? };
        Ok(IsotopismCert::from_parts(
            self.dst.clone(),
            self.src.clone(),
            m,
            n,
            self.l.invert()?,
            self.strong,
            self.level,
        ))
    }

    /// The equivalent certificate between the presemifields:
    /// (K_dst^{-1} M K_src, K_dst^{-1} N K_src, L).
    pub fn to_presemifield(&self) -> Result<IsotopismCert> {
        if self.level == Level::Presemifield {
            return Ok(self.clone());
        }
        let ks = self.src.k_map()?;
        let kd_inv = self.dst.k_map()?.invert()?;
        let m = kd_inv.compose(&self.m).compose(&ks);
        let n = kd_inv.compose(&self.n).compose(&ks);
        Ok(IsotopismCert::new(
            self.src.clone(),
            self.dst.clone(),
            m,
            n,
            self.l.clone(),
            Level::Presemifield,
        ))
    }
}

fn checked(cert: IsotopismCert, what: &str) -> Result<IsotopismCert> {
    if cert.verify()? {
        Ok(cert)
    } else {
        Err(Error::CertificateRejected(format!("{what} failed verification")))
    }
}

/// ½(A + B) x + ½(A - B) x^{q^l} at Frobenius offset `i` (p-units), i.e.
/// ½A(x + x^{q^l})^{p^i} + ½B(x - x^{q^l})^{p^i}.
fn split_map(f: &Arc<FieldSpec>, a: &FieldElement, b: &FieldElement, i: i64) -> PLinearMap {
    let half = f.half();
    let lh = f.q_exp(f.l() as i64) as i64;
    let mut m = PLinearMap::zero(f);
    m.add_term(f.mul(&half, &f.add(a, b)), i);
    m.add_term(f.mul(&half, &f.sub(a, b)), i + lh);
    m
}

/// Strong isotopism BH(β) → BH(β') for two nonsquares β, β' (same d, ω):
/// N₀ = b₀x, L₀ = ½A(x + x^{q^l}) + ½B(x - x^{q^l}) with A = b₀^{q^l+1},
/// B = β'β^{-1}b₀^{q^d+1}.
pub fn build_beta_change(
    spec: &Arc<FieldSpec>,
    d: u64,
    beta: FieldElement,
    beta_prime: FieldElement,
    omega: FieldElement,
) -> Result<IsotopismCert> {
    let src = BhParams::new(spec.clone(), d, beta, omega)?;
    let dst = BhParams::new(spec.clone(), d, beta_prime, omega)?;
    let f = spec;
    let b0 = f.solve_b0(f.discrete_log(&beta)?, f.discrete_log(&beta_prime)?, d)?;
    let a = f.mul(&b0, &f.frobenius_q(&b0, f.l() as i64));
    let b = f.mul(
        &f.div(&beta_prime, &beta)?,
        &f.mul(&b0, &f.frobenius_q(&b0, d as i64)),
    );
    let l0 = split_map(f, &a, &b, 0);
    let n0 = PLinearMap::monomial(f, b0, 0);
    checked(
        IsotopismCert::new(src, dst, n0.clone(), n0, l0, Level::Presemifield),
        "β-change certificate",
    )
}

/// Strong isotopism BH(ω) → BH(ω') (same d, β): c = ω'/ω lies in F_{q^l}, so
/// N = x and L = ½(x + x^{q^l}) + ½c(x - x^{q^l}).
pub fn build_omega_change(
    spec: &Arc<FieldSpec>,
    d: u64,
    beta: FieldElement,
    omega: FieldElement,
    omega_prime: FieldElement,
) -> Result<IsotopismCert> {
    let src = BhParams::new(spec.clone(), d, beta, omega)?;
    let dst = BhParams::new(spec.clone(), d, beta, omega_prime)?;
    let c = spec.div(&omega_prime, &omega)?;
    let l = split_map(spec, &spec.one(), &c, 0);
    let id = PLinearMap::identity(spec);
    checked(
        IsotopismCert::new(src, dst, id.clone(), id, l, Level::Presemifield),
        "ω-change certificate",
    )
}

/// Strong isotopism BH(q, l, d) → BH(q, l, 2l - d): N₁ = b₁x and
/// L₁ = ½A(x + x^{q^l}) + ½C(x - x^{q^l})^{q^{l-d}} with A = b₁^{q^l+1},
/// C = β^{1-q^{2l-d}} b₁^{q^{2l-d}+1} ω^{1-q^{l-d}}.
pub fn build_d_reflection(params: &BhParams) -> Result<IsotopismCert> {
    let f = params.spec();
    let l = f.l() as i64;
    let d = params.d() as i64;
    let k = (2 * l - d).rem_euclid(2 * l);
    let dst = params.with_d(params.reflected_d())?;
    let beta = params.beta();
    let omega = params.omega();
    let b1 = f.solve_b1(f.discrete_log(beta)?, params.d())?;
    let a = f.mul(&b1, &f.frobenius_q(&b1, l));
    let beta_part = f.div(beta, &f.frobenius_q(beta, k))?;
    let omega_part = f.div(omega, &f.frobenius_q(omega, l - d))?;
    let c = f.mul(&f.mul(&beta_part, &f.mul(&b1, &f.frobenius_q(&b1, k))), &omega_part);

    let half = f.half();
    let ha = f.mul(&half, &a);
    let hc = f.mul(&half, &c);
    let mut l1 = PLinearMap::zero(f);
    l1.add_term(ha, 0);
    l1.add_term(ha, f.q_exp(l) as i64);
    l1.add_term(hc, f.q_exp(l - d) as i64);
    l1.add_term(f.neg(&hc), f.q_exp(2 * l - d) as i64);
    let n1 = PLinearMap::monomial(f, b1, 0);
    checked(
        IsotopismCert::new(params.clone(), dst, n1.clone(), n1, l1, Level::Presemifield),
        "reflection certificate",
    )
}

/// The pieces of the isotopism between S_{l-d} and S_d for q ≡ 1 (mod 4),
/// l even.
#[derive(Clone, Debug)]
pub struct LMinusD {
    /// Semifield-level certificate S_{l-d} → S_d with M(u) = N(u) ⋆_d α.
    pub cert: IsotopismCert,
    /// L'(x) = ξ^{(q-3)/2}(x + x^{q^l}) + ξ^{-1}(x - x^{q^l})^{q^{l-d}}
    pub l_prime: PLinearMap,
    /// N'(x) = x + ξ^{(q-1)/2} x^{q^l}
    pub n_prime: PLinearMap,
    /// ξ ∈ F_{q²} with ξ^q = -ξ.
    pub xi: FieldElement,
    /// α = κ(0, 1) = K_d(ξ), a nonsquare of the middle nucleus.
    pub alpha: FieldElement,
}

/// Non-strong isotopism between the semifields of BH(q, l, l - d) and
/// BH(q, l, d), with β = ω^{-1} on both sides.
pub fn build_l_minus_d(spec: &Arc<FieldSpec>, d: u64) -> Result<IsotopismCert> {
    Ok(build_l_minus_d_parts(spec, d)?.cert)
}

pub fn build_l_minus_d_parts(spec: &Arc<FieldSpec>, d: u64) -> Result<LMinusD> {
    let f = spec;
    let q = f.q();
    let l = f.l() as u64;
    if q % 4 != 1 {
        return Err(Error::WrongResidue);
    }
    if l % 2 == 1 || l <= 2 {
        return Err(Error::OddL);
    }
    if d == 0 || d >= l {
        return Err(Error::InvalidParams(format!("d = {d} outside 0 < d < l")));
    }
    let omega = f.canonical_constants().omega;
    let beta = f.inv(&omega)?;
    let bh_d = BhParams::new(f.clone(), d, beta, omega)?;
    let bh_dp = BhParams::new(f.clone(), l - d, beta, omega)?;

    // ξ of multiplicative order 2(q-1) in F_{q²}: ξ^{q-1} = -1.
    let g2 = f.gamma_pow((f.order() - 1) / (q * q - 1));
    let xi = f.pow(&g2, q.div_ceil(2));
    if f.frobenius_q(&xi, 1) != f.neg(&xi) {
        return Err(Error::NoSolution("ξ^q = -ξ".to_string()));
    }
    let li = l as i64;
    let di = d as i64;
    let lhs_xi = f.div(&f.frobenius_q(&xi, li + di), &xi)?;
    let rhs_beta = f.div(&beta, &f.frobenius_q(&beta, li))?;
    if lhs_xi != rhs_beta {
        return Err(Error::NoSolution("ξ^{q^{l+d}-1} = β^{1-q^l}".to_string()));
    }

    let xi_inv = f.inv(&xi)?;
    let c0 = f.pow_signed(&xi, (q as i128 - 3) / 2);
    let mut l_prime = PLinearMap::zero(f);
    l_prime.add_term(c0, 0);
    l_prime.add_term(c0, f.q_exp(li) as i64);
    l_prime.add_term(xi_inv, f.q_exp(li - di) as i64);
    l_prime.add_term(f.neg(&xi_inv), f.q_exp(2 * li - di) as i64);
    let mut n_prime = PLinearMap::identity(f);
    n_prime.add_term(f.pow(&xi, (q - 1) / 2), f.q_exp(li) as i64);

    // L'((ξx^{q^l}) ∗_d y) = N'(x) ∗_{l-d} N'(y)
    let shift = PLinearMap::monomial(f, xi, f.q_exp(li) as i64);
    let lhs = bh_d.form().substitute(&shift, &PLinearMap::identity(f))?.apply_left(&l_prime)?;
    let rhs = bh_dp.form().substitute(&n_prime, &n_prime)?;
    if lhs != rhs {
        return Err(Error::CertificateRejected(
            "L'((ξx^{q^l}) ∗ y) = N'(x) ∗' N'(y) does not hold".to_string(),
        ));
    }

    let sd = Semifield::new(&bh_d)?;
    let sdp = Semifield::new(&bh_dp)?;
    let alpha = nuclei::kappa(&sd, &xi, &f.zero(), &f.one())?;
    if !nuclei::is_middle_member(&sd, &alpha) {
        return Err(Error::CertificateRejected("κ(0, 1) is not in the middle nucleus".to_string()));
    }
    let norm = nuclei::xi_norm(f, &xi);
    if nuclei::is_square_in_fq(f, &f.neg(&norm)) {
        return Err(Error::CertificateRejected("-ξ^{q^l+1} is a square of F_q".to_string()));
    }

    let l_map = l_prime.invert()?;
    let n_map = sd.k().compose(&n_prime.invert()?).compose(sdp.k_inv());
    let m_map = sd.right_mul_map(&alpha).compose(&n_map);
    let cert = checked(
        IsotopismCert::new(bh_dp, bh_d, m_map, n_map, l_map, Level::Semifield),
        "l - d certificate",
    )?;
    Ok(LMinusD {
        cert,
        l_prime,
        n_prime,
        xi,
        alpha,
    })
}

/// The b with b^{q^d+1} β^{1-p^i} ∈ F_{q^l}, in ascending discrete log. There
/// are 2(q^l - 1) of them for every i.
fn autotopism_scalars(params: &BhParams, i: u64, beta_log: u64) -> Result<Vec<FieldElement>> {
    let f = params.spec();
    let q = f.q() as u128;
    let group = (f.order() - 1) as u128;
    let m = q.pow(f.l()) + 1;
    let coef = arith::pow_mod(q, params.d() as u128, m) + 1;
    let pi = arith::pow_mod(f.p() as u128, i as u128, m);
    let rhs = arith::mul_mod((pi + m - 1) % m, beta_log as u128, m);
    let s0 = arith::solve_linear_congruence(coef, rhs, m)
        .ok_or_else(|| Error::NoSolution("autotopism congruence".to_string()))?;
    let step = m / 2;
    let start = s0 % step;
    let count = group / step;
    let g = f.gamma_pow(step as u64);
    let mut b = f.gamma_pow(start as u64);
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        out.push(b);
        b = f.mul(&b, &g);
    }
    Ok(out)
}

/// (N, N, L) with N = b x^{p^i}: A = b^{q^l+1}, B = b^{q^d+1},
/// C = B ωβ / (ω^{p^i} β^{p^i}), L = ½A(x + x^{q^l})^{p^i} + ½C(x - x^{q^l})^{p^i}.
fn autotopism(params: &BhParams, i: u64, b: &FieldElement) -> Result<IsotopismCert> {
    let f = params.spec();
    let i = i as i64;
    let a = f.mul(b, &f.frobenius_q(b, f.l() as i64));
    let bb = f.mul(b, &f.frobenius_q(b, params.d() as i64));
    let wb = f.mul(params.omega(), params.beta());
    let c = f.mul(&bb, &f.div(&wb, &f.frobenius(&wb, i))?);
    let l = split_map(f, &a, &c, i);
    let n = PLinearMap::monomial(f, *b, i);
    Ok(IsotopismCert::new(
        params.clone(),
        params.clone(),
        n.clone(),
        n,
        l,
        Level::Presemifield,
    ))
}

/// Every strong autotopism (N, N, L) of BH(q, l, d), N = b x^{p^i}, each
/// verified; sorted by i, then by log b.
pub fn enumerate_strong_autotopisms(params: &BhParams) -> Result<Vec<IsotopismCert>> {
    let f = params.spec();
    let beta_log = f.discrete_log(params.beta())?;
    let n = f.degree() as u64;
    let per_i: Vec<Result<Vec<IsotopismCert>>> = par::map_range(0..n, |i| {
        autotopism_scalars(params, i, beta_log)?
            .iter()
            .map(|b| checked(autotopism(params, i, b)?, "strong autotopism"))
            .collect()
    });
    let mut out = Vec::new();
    for r in per_i {
        out.extend(r?);
    }
    Ok(out)
}

/// Solves L ∘ B = R for the coefficients of L. The linear system (one
/// equation per monomial x^{p^u} y^{p^v}) depends only on B, so it is
/// reduced once and reused for every right-hand side.
pub struct LeftSolver {
    form: BiForm,
    n: usize,
    /// Row index of (u, v) in the system, if B ∘ anything can reach it.
    row_of: Vec<Option<usize>>,
    /// (pivot column, row of the reducing transform) pairs.
    pivots: Vec<(usize, Vec<FieldElement>)>,
}

impl LeftSolver {
    pub fn new(form: &BiForm) -> Self {
        let f = form.spec().clone();
        let n = f.degree();
        let mut row_of = vec![None; n * n];
        let mut rows: Vec<Vec<FieldElement>> = Vec::new();
        for e in 0..n {
            for (i, j, c) in form.terms() {
                let key = ((i + e) % n) * n + (j + e) % n;
                let r = *row_of[key].get_or_insert_with(|| {
                    rows.push(vec![FieldElement::ZERO; n]);
                    rows.len() - 1
                });
                let t = f.frobenius(&c, e as i64);
                rows[r][e] = f.add(&rows[r][e], &t);
            }
        }
        let m = rows.len();
        // [A | I] → [RREF | T]
        let mut aug: Vec<Vec<FieldElement>> = rows
            .into_iter()
            .enumerate()
            .map(|(r, mut row)| {
                row.resize(n + m, FieldElement::ZERO);
                row[n + r] = f.one();
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..n {
            let Some(piv) = (top..m).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(piv, top);
            let inv = f.inv(&aug[top][col]).expect("pivot is nonzero");
            for x in aug[top].iter_mut() {
                *x = f.mul(x, &inv);
            }
            for r in 0..m {
                if r == top || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col];
                for k in 0..n + m {
                    if aug[top][k].is_zero() {
                        continue;
                    }
                    let t = f.mul(&factor, &aug[top][k]);
                    aug[r][k] = f.sub(&aug[r][k], &t);
                }
            }
            pivots.push((col, top));
            top += 1;
        }
        let pivots = pivots
            .into_iter()
            .map(|(col, r)| (col, aug[r][n..].to_vec()))
            .collect();
        LeftSolver {
            form: form.clone(),
            n,
            row_of,
            pivots,
        }
    }

    /// The L with L ∘ B = rhs, if one exists.
    pub fn solve(&self, rhs: &BiForm) -> Option<PLinearMap> {
        let f = self.form.spec();
        let mut r = Vec::with_capacity(rhs.len());
        for (u, v, c) in rhs.terms() {
            r.push((self.row_of[u * self.n + v]?, c));
        }
        let mut coeffs = vec![FieldElement::ZERO; self.n];
        for (col, t) in &self.pivots {
            let mut acc = FieldElement::ZERO;
            for (row, c) in &r {
                if !t[*row].is_zero() {
                    acc = f.add(&acc, &f.mul(&t[*row], c));
                }
            }
            coeffs[*col] = acc;
        }
        let l = PLinearMap::new(f.clone(), coeffs).ok()?;
        (self.form.apply_left(&l).ok()? == *rhs).then_some(l)
    }
}

/// All strong isotopisms src → dst with monomial N = b x^{p^i}, b ≠ 0; L is
/// solved from the form identity. Sorted by i, then log b. Empty means no
/// monomial-N strong isotopism exists.
pub fn search_strong_isotopism_monomial(src: &BhParams, dst: &BhParams) -> Result<Vec<IsotopismCert>> {
    let f = src.spec();
    if !same_field(f, dst.spec()) {
        return Err(Error::SpecMismatch);
    }
    let units = f.order() - 1;
    if units > MONOMIAL_SEARCH_GUARD {
        return Err(Error::SizeGuard {
            what: "monomial search",
            needed: units as u128,
            limit: MONOMIAL_SEARCH_GUARD as u128,
        });
    }
    let solver = LeftSolver::new(&src.form());
    let bd = dst.form();
    let gamma = f.gamma();
    let n = f.degree() as u64;
    let per_i: Vec<Result<Vec<IsotopismCert>>> = par::map_range(0..n, |i| {
        let mut hits = Vec::new();
        let mut b = f.one();
        for _ in 0..units {
            let nm = PLinearMap::monomial(f, b, i as i64);
            if let Some(l) = solver.solve(&bd.substitute(&nm, &nm)?) {
                hits.push(checked(
                    IsotopismCert::new(src.clone(), dst.clone(), nm.clone(), nm, l, Level::Presemifield),
                    "monomial search hit",
                )?);
            }
            b = f.mul(&b, &gamma);
        }
        Ok(hits)
    });
    let mut out = Vec::new();
    for r in per_i {
        out.extend(r?);
    }
    Ok(out)
}

/// Candidates of the two-term search: n · (p^n - 1)².
pub fn binomial_search_cost(spec: &FieldSpec) -> u128 {
    let units = (spec.order() - 1) as u128;
    spec.degree() as u128 * units * units
}

/// Strong isotopisms src → dst with N = b_i x^{p^i} + b_j x^{p^j}, both
/// nonzero, j - i = (l + d)h (mod n). Taking i over all residues covers the
/// other admissible gap (l - d)h with the roles of i and j swapped.
pub fn search_strong_isotopism_binomial(
    src: &BhParams,
    dst: &BhParams,
    guard: u128,
) -> Result<Vec<IsotopismCert>> {
    let f = src.spec();
    if !same_field(f, dst.spec()) {
        return Err(Error::SpecMismatch);
    }
    let cost = binomial_search_cost(f);
    if cost > guard {
        return Err(Error::SizeGuard {
            what: "binomial search",
            needed: cost,
            limit: guard,
        });
    }
    let n = f.degree() as u64;
    let units = f.order() - 1;
    let gap = f.q_exp(f.l() as i64 + src.d() as i64) as i64;
    let solver = LeftSolver::new(&src.form());
    let bd = dst.form();
    let gamma = f.gamma();
    let per: Vec<Result<Vec<IsotopismCert>>> = par::map_range(0..n * units, |idx| {
        let i = (idx / units) as i64;
        let bi = f.gamma_pow(idx % units);
        let mut hits = Vec::new();
        let mut bj = f.one();
        for _ in 0..units {
            let mut nm = PLinearMap::monomial(f, bi, i);
            nm.add_term(bj, i + gap);
            if let Some(l) = solver.solve(&bd.substitute(&nm, &nm)?) {
                hits.push(checked(
                    IsotopismCert::new(src.clone(), dst.clone(), nm.clone(), nm, l, Level::Presemifield),
                    "binomial search hit",
                )?);
            }
            bj = f.mul(&bj, &gamma);
        }
        Ok(hits)
    });
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}
