//! Center and middle nucleus of the semifield isotope S_d.
//!
//! For fixed α both sides of (u ⋆ α) ⋆ v = u ⋆ (α ⋆ v) are bilinear in (u, v),
//! so checking the n² pairs of basis elements decides membership.
//!
//! The middle nucleus is parametrized as κ(a, b) = K_d(a + bξ) for a, b ∈ F_q,
//! where ξ satisfies ξ^{q^{l+d}-1} = β^{1-q^l}.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::arith;
use crate::bh::{BhParams, Semifield};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NucleusReport {
    /// Sorted.
    pub center: Vec<FieldElement>,
    /// Sorted.
    pub middle: Vec<FieldElement>,
    /// ((a, b), κ(a, b)) for all a, b ∈ F_q.
    pub kappa_index: Vec<((FieldElement, FieldElement), FieldElement)>,
    pub xi: FieldElement,
    /// Whether the sets were found by scanning every element (as opposed to
    /// the parametrized candidates).
    pub exhaustive: bool,
}

/// ξ = γ^s with s the least solution of (q^{l+d} - 1) s ≡ (1 - q^l) log β
/// (mod q^{2l} - 1).
pub fn solve_xi(params: &BhParams) -> Result<FieldElement> {
    let f = params.spec();
    let q = f.q() as u128;
    let l = f.l() as u128;
    let m = (f.order() - 1) as u128;
    let beta_log = f.discrete_log(params.beta())? as u128;
    let ql = q.pow(l as u32);
    let a = (arith::pow_mod(q, l + params.d() as u128, m) + m - 1) % m;
    let b = arith::mul_mod((m + 1 - ql % m) % m, beta_log, m);
    let s = arith::solve_linear_congruence(a, b, m).ok_or_else(|| Error::NoSolution("ξ congruence".to_string()))?;
    let xi = f.gamma_pow(s as u64);

    let lhs = f.div(&f.frobenius_q(&xi, l as i64 + params.d() as i64), &xi)?;
    let rhs = f.div(params.beta(), &f.frobenius_q(params.beta(), l as i64))?;
    if lhs != rhs {
        return Err(Error::NoSolution("ξ fails its defining identity".to_string()));
    }
    let norm = xi_norm(f, &xi);
    if !f.in_fq(&norm) || is_square_in_fq(f, &norm) {
        return Err(Error::NoSolution("ξ^{q^l+1} is not a nonsquare of F_q".to_string()));
    }
    Ok(xi)
}

/// ξ^{q^l + 1}
pub fn xi_norm(f: &FieldSpec, xi: &FieldElement) -> FieldElement {
    f.mul(xi, &f.frobenius_q(xi, f.l() as i64))
}

/// Squareness inside F_q of a nonzero element of F_q.
pub fn is_square_in_fq(f: &FieldSpec, x: &FieldElement) -> bool {
    f.pow(x, (f.q() - 1) / 2) == f.one()
}

/// All elements of F_q inside F_{q^{2l}}, sorted.
pub fn fq_elements(f: &FieldSpec) -> Vec<FieldElement> {
    let q = f.q();
    let g = f.gamma_pow((f.order() - 1) / (q - 1));
    let mut out = Vec::with_capacity(q as usize);
    out.push(f.zero());
    let mut cur = f.one();
    for _ in 0..q - 1 {
        out.push(cur);
        cur = f.mul(&cur, &g);
    }
    out.sort();
    out
}

/// κ(a, b) = K_d(a + bξ), the α with (x ∗ 1) ⋆ α = (ax + bξx^{q^l}) ∗ 1.
pub fn kappa(sf: &Semifield, xi: &FieldElement, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    let f = sf.spec();
    if !f.in_fq(a) || !f.in_fq(b) {
        return Err(Error::InputNotInFq);
    }
    Ok(sf.k().eval(&f.add(a, &f.mul(b, xi))))
}

pub fn is_middle_member(sf: &Semifield, alpha: &FieldElement) -> bool {
    let f = sf.spec();
    let n = f.degree();
    let basis: Vec<FieldElement> = (0..n).map(|k| f.basis(k)).collect();
    let left: Vec<FieldElement> = basis.iter().map(|u| sf.mul(u, alpha)).collect();
    let right: Vec<FieldElement> = basis.iter().map(|v| sf.mul(alpha, v)).collect();
    (0..n).all(|i| (0..n).all(|j| sf.mul(&left[i], &basis[j]) == sf.mul(&basis[i], &right[j])))
}

/// Left nucleus (the center, ⋆ being commutative).
pub fn is_center_member(sf: &Semifield, alpha: &FieldElement) -> bool {
    let f = sf.spec();
    let n = f.degree();
    let basis: Vec<FieldElement> = (0..n).map(|k| f.basis(k)).collect();
    let left: Vec<FieldElement> = basis.iter().map(|u| sf.mul(alpha, u)).collect();
    (0..n).all(|i| {
        (0..n).all(|j| sf.mul(&left[i], &basis[j]) == sf.mul(alpha, &sf.mul(&basis[i], &basis[j])))
    })
}

fn scan(sf: &Semifield, guard: u64, member: fn(&Semifield, &FieldElement) -> bool) -> Result<Vec<FieldElement>> {
    let f = sf.spec();
    if f.order() > guard {
        return Err(Error::SizeGuard {
            what: "nucleus scan",
            needed: f.order() as u128,
            limit: guard as u128,
        });
    }
    let hits = par::map_range(0..f.order(), |i| {
        let a = f.element(i);
        member(sf, &a).then_some(a)
    });
    let mut out: Vec<FieldElement> = hits.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// Middle nucleus by testing every element.
pub fn middle_nucleus_exhaustive(sf: &Semifield, guard: u64) -> Result<Vec<FieldElement>> {
    scan(sf, guard, is_middle_member)
}

/// Center by testing every element.
pub fn center_exhaustive(sf: &Semifield, guard: u64) -> Result<Vec<FieldElement>> {
    scan(sf, guard, is_center_member)
}

/// {κ(a, b) : a, b ∈ F_q}, each membership verified.
pub fn middle_nucleus_parametrized(
    sf: &Semifield,
    xi: &FieldElement,
) -> Result<Vec<((FieldElement, FieldElement), FieldElement)>> {
    let f = sf.spec();
    let fq = fq_elements(f);
    let mut out = Vec::with_capacity(fq.len() * fq.len());
    for a in &fq {
        for b in &fq {
            let alpha = kappa(sf, xi, a, b)?;
            if !is_middle_member(sf, &alpha) {
                return Err(Error::NoSolution("κ(a, b) outside the middle nucleus".to_string()));
            }
            out.push(((*a, *b), alpha));
        }
    }
    Ok(out)
}

/// {K_d(a) : a ∈ F_q} = F_q ⋆-scaled identity, each membership verified.
pub fn center_parametrized(sf: &Semifield) -> Result<Vec<FieldElement>> {
    let f = sf.spec();
    let mut out = Vec::new();
    for a in fq_elements(f) {
        let c = sf.k().eval(&a);
        if !is_center_member(sf, &c) {
            return Err(Error::NoSolution("K_d(F_q) outside the center".to_string()));
        }
        out.push(c);
    }
    out.sort();
    Ok(out)
}

/// Whether a² - b² ξ^{q^l+1} is a nonsquare of F_q, i.e. whether κ(a, b) is
/// a nonsquare of the middle nucleus.
pub fn is_nonsquare_nm(params: &BhParams, xi: &FieldElement, a: &FieldElement, b: &FieldElement) -> Result<bool> {
    let f = params.spec();
    if !f.in_fq(a) || !f.in_fq(b) {
        return Err(Error::InputNotInFq);
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroInput);
    }
    let disc = f.sub(&f.square(a), &f.mul(&f.square(b), &xi_norm(f, xi)));
    debug_assert!(f.in_fq(&disc));
    if disc.is_zero() {
        return Ok(false);
    }
    Ok(!is_square_in_fq(f, &disc))
}

/// ⋆-squares of a nucleus given as a set.
pub fn star_squares(sf: &Semifield, nucleus: &[FieldElement]) -> BTreeSet<FieldElement> {
    nucleus.iter().map(|g| sf.mul(g, g)).collect()
}

/// Center, middle nucleus and κ index. With `exhaustive_guard` set, both sets
/// come from full scans and are cross-checked against the parametrized ones.
pub fn nucleus_report(params: &BhParams, exhaustive_guard: Option<u64>) -> Result<NucleusReport> {
    let sf = Semifield::new(params)?;
    let xi = solve_xi(params)?;
    let kappa_index = middle_nucleus_parametrized(&sf, &xi)?;
    let mut middle: Vec<FieldElement> = kappa_index.iter().map(|(_, a)| *a).collect();
    middle.sort();
    middle.dedup();
    let mut center = center_parametrized(&sf)?;
    center.dedup();
    let exhaustive = exhaustive_guard.is_some();
    if let Some(guard) = exhaustive_guard {
        let m = middle_nucleus_exhaustive(&sf, guard)?;
        let c = center_exhaustive(&sf, guard)?;
        if m != middle || c != center {
            return Err(Error::NoSolution("exhaustive and parametrized nuclei disagree".to_string()));
        }
    }
    Ok(NucleusReport {
        center,
        middle,
        kappa_index,
        xi,
        exhaustive,
    })
}
