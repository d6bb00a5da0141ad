//! Bilinear forms B(x, y) = Σ c_{ij} x^{p^i} y^{p^j} in canonical form.
//!
//! The monomials x^{p^i} y^{p^j}, 0 ≤ i, j < n, are linearly independent as
//! functions on F_{p^n} × F_{p^n}, so two forms induce the same bilinear map
//! iff their reduced term maps coincide. Exponents are kept mod n and zero
//! coefficients are dropped.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bh::BhParams;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linmap::{same_field, PLinearMap};

#[derive(Clone)]
pub struct BiForm {
    spec: Arc<FieldSpec>,
    terms: BTreeMap<(u32, u32), FieldElement>,
}

impl fmt::Debug for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl PartialEq for BiForm {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.spec, &other.spec) && self.terms == other.terms
    }
}

impl Eq for BiForm {}

impl BiForm {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        BiForm {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Canonicalizes an arbitrary list of terms (i, j, c).
    pub fn from_terms(spec: &Arc<FieldSpec>, terms: impl IntoIterator<Item = (i64, i64, FieldElement)>) -> Self {
        let mut b = Self::zero(spec);
        for (i, j, c) in terms {
            b.add_term(i, j, c);
        }
        b
    }

    /// The six-term form of x ∗_d y:
    /// x^{q^l}y + xy^{q^l} + ωβ(x^{q^d}y + xy^{q^d}) + ωβ^{q^l}(x^{q^{l+d}}y^{q^l} + x^{q^l}y^{q^{l+d}}).
    pub fn from_bh(params: &BhParams) -> Self {
        let f = params.spec();
        let l = f.l() as i64;
        let d = params.d() as i64;
        let ql = f.q_exp(l) as i64;
        let qd = f.q_exp(d) as i64;
        let qld = f.q_exp(l + d) as i64;
        let wb = f.mul(params.omega(), params.beta());
        let wbc = f.mul(params.omega(), &f.frobenius(params.beta(), ql));
        let one = f.one();
        Self::from_terms(
            f,
            [
                (ql, 0, one),
                (0, ql, one),
                (qd, 0, wb),
                (0, qd, wb),
                (qld, ql, wbc),
                (ql, qld, wbc),
            ],
        )
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms (i, j, c) in ascending (i, j) order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, FieldElement)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i as usize, j as usize, c))
    }

    pub fn coeff(&self, i: i64, j: i64) -> FieldElement {
        let n = self.spec.degree() as i64;
        let key = (i.rem_euclid(n) as u32, j.rem_euclid(n) as u32);
        self.terms.get(&key).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let n = self.spec.degree() as i64;
        let key = (i.rem_euclid(n) as u32, j.rem_euclid(n) as u32);
        let f = &self.spec;
        let sum = match self.terms.get(&key) {
            Some(old) => f.add(old, &c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &BiForm) -> BiForm {
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i as i64, j as i64, c);
        }
        out
    }

    pub fn sub(&self, other: &BiForm) -> BiForm {
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i as i64, j as i64, self.spec.neg(&c));
        }
        out
    }

    /// Whether B(x, y) = B(y, x) as forms.
    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(i, j), c)| self.terms.get(&(j, i)) == Some(c))
    }

    pub fn eval(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let f = &self.spec;
        let n = f.degree();
        let mut xs: Vec<Option<FieldElement>> = vec![None; n];
        let mut ys: Vec<Option<FieldElement>> = vec![None; n];
        let mut acc = FieldElement::ZERO;
        for (&(i, j), c) in &self.terms {
            let xi = *xs[i as usize].get_or_insert_with(|| f.frobenius(x, i as i64));
            let yj = *ys[j as usize].get_or_insert_with(|| f.frobenius(y, j as i64));
            acc = f.add(&acc, &f.mul(c, &f.mul(&xi, &yj)));
        }
        acc
    }

    /// The form of (x, y) ↦ m(B(x, y)): term (i, j, c) under coefficient a_e
    /// becomes (i + e, j + e, a_e c^{p^e}).
    pub fn apply_left(&self, m: &PLinearMap) -> Result<BiForm> {
        self.check(m.spec())?;
        let f = &self.spec;
        let mut out = Self::zero(f);
        for (e, a) in m.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (&(i, j), c) in &self.terms {
                let e = e as i64;
                out.add_term(i as i64 + e, j as i64 + e, f.mul(a, &f.frobenius(c, e)));
            }
        }
        Ok(out)
    }

    /// The form of (x, y) ↦ B(mx(x), my(y)).
    pub fn substitute(&self, mx: &PLinearMap, my: &PLinearMap) -> Result<BiForm> {
        self.check(mx.spec())?;
        self.check(my.spec())?;
        let f = &self.spec;
        let mut out = Self::zero(f);
        for (&(i, j), c) in &self.terms {
            let (i, j) = (i as i64, j as i64);
            // (Σ_a u_a x^{p^a})^{p^i} = Σ_a u_a^{p^i} x^{p^{a+i}}
            let xs: Vec<(i64, FieldElement)> = mx
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, u)| !u.is_zero())
                .map(|(a, u)| (a as i64 + i, f.mul(c, &f.frobenius(u, i))))
                .collect();
            let ys: Vec<(i64, FieldElement)> = my
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(b, v)| (b as i64 + j, f.frobenius(v, j)))
                .collect();
            for (ex, cx) in &xs {
                for (ey, cy) in &ys {
                    out.add_term(*ex, *ey, f.mul(cx, cy));
                }
            }
        }
        Ok(out)
    }

    /// x ↦ B(x, y) for fixed y.
    pub fn fix_right(&self, y: &FieldElement) -> PLinearMap {
        let f = &self.spec;
        let mut m = PLinearMap::zero(f);
        for (&(i, j), c) in &self.terms {
            m.add_term(f.mul(c, &f.frobenius(y, j as i64)), i as i64);
        }
        m
    }

    /// y ↦ B(x, y) for fixed x.
    pub fn fix_left(&self, x: &FieldElement) -> PLinearMap {
        let f = &self.spec;
        let mut m = PLinearMap::zero(f);
        for (&(i, j), c) in &self.terms {
            m.add_term(f.mul(c, &f.frobenius(x, i as i64)), j as i64);
        }
        m
    }

    /// Values B(t^a, t^b) on all pairs of power-basis elements.
    pub fn basis_table(&self) -> BasisTable {
        let f = &self.spec;
        let n = f.degree();
        let mut entries = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                entries.push(self.eval(&f.basis(a), &f.basis(b)));
            }
        }
        BasisTable {
            spec: f.clone(),
            entries,
        }
    }

    fn check(&self, other: &Arc<FieldSpec>) -> Result<()> {
        if same_field(&self.spec, other) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }
}

/// A bilinear map given by its values on basis pairs (structure constants).
/// Evaluation is Σ_{a,b} x_a y_b B(t^a, t^b), n^3 operations over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTable {
    spec: Arc<FieldSpec>,
    entries: Vec<FieldElement>,
}

impl BasisTable {
    pub fn get(&self, a: usize, b: usize) -> FieldElement {
        self.entries[a * self.spec.degree() + b]
    }

    pub fn eval(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let f = &self.spec;
        let n = f.degree();
        let p = f.p();
        let mut acc = [0u64; crate::field::MAX_DEGREE];
        for a in 0..n {
            let xa = x.coeff(a) as u64;
            if xa == 0 {
                continue;
            }
            for b in 0..n {
                let yb = y.coeff(b) as u64;
                if yb == 0 {
                    continue;
                }
                let s = xa * yb % p;
                let e = &self.entries[a * n + b];
                for (k, slot) in acc.iter_mut().enumerate().take(n) {
                    *slot += s * e.coeff(k) as u64;
                }
            }
            // keep the accumulators well inside u64
            if p > 1 << 12 {
                for slot in acc.iter_mut().take(n) {
                    *slot %= p;
                }
            }
        }
        let residues: Vec<u64> = acc[..n].iter().map(|v| v % p).collect();
        f.from_residues(&residues).expect("residues are reduced")
    }
}

/// Second route for identity checks: evaluates both forms on all n² basis
/// pairs. Complete by bilinearity.
pub fn agree_on_basis_pairs(
    lhs: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    rhs: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    spec: &FieldSpec,
) -> bool {
    let n = spec.degree();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let (x, y) = (spec.basis(a), spec.basis(b));
            lhs(&x, &y) == rhs(&x, &y)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn rand_form(spec: &Arc<FieldSpec>, seed: u64, terms: usize) -> BiForm {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            s >> 16
        };
        let n = spec.degree() as u64;
        let ts: Vec<(i64, i64, FieldElement)> = (0..terms)
            .map(|_| ((next() % n) as i64, (next() % n) as i64, spec.element(next())))
            .collect();
        BiForm::from_terms(spec, ts)
    }

    fn rand_map(spec: &Arc<FieldSpec>, seed: u64) -> PLinearMap {
        let mut s = seed;
        let coeffs = (0..spec.degree())
            .map(|_| {
                s = s.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                spec.element(s >> 13)
            })
            .collect();
        PLinearMap::new(spec.clone(), coeffs).unwrap()
    }

    #[test]
    fn canonical_form() {
        let f = make_field(3, 1, 2).unwrap();
        let c = f.element(7);
        let b = BiForm::from_terms(&f, [(1, 3, c), (7, 1, c), (1, 1, c), (5, 1, f.neg(&c))]);
        assert_eq!(b.len(), 2);
        assert_eq!(b.coeff(1, 1), f.zero());
        assert_eq!(b.coeff(3, 1), c);
        assert!(b.is_symmetric());
        assert_eq!(BiForm::from_terms(&f, b.terms().map(|(i, j, c)| (i as i64, j as i64, c))), b);
        let z = f.zero();
        let x = f.element(40);
        assert_eq!(b.eval(&z, &x), z);
        assert_eq!(b.eval(&x, &z), z);
        let other = BiForm::from_terms(&f, [(1, 3, c), (3, 1, f.add(&c, &f.one()))]);
        assert_ne!(b, other);
    }

    #[test]
    fn bilinear_in_each_slot() {
        let f = make_field(3, 1, 3).unwrap();
        let b = rand_form(&f, 5, 9);
        for k in 0..10u64 {
            let (x, x2, y) = (f.element(k * 31), f.element(k * 97 + 5), f.element(k * 13 + 1));
            assert_eq!(b.eval(&f.add(&x, &x2), &y), f.add(&b.eval(&x, &y), &b.eval(&x2, &y)));
            assert_eq!(b.eval(&y, &f.add(&x, &x2)), f.add(&b.eval(&y, &x), &b.eval(&y, &x2)));
        }
    }

    #[test]
    fn equality_matches_exhaustive_evaluation() {
        let f = make_field(3, 1, 2).unwrap();
        let pts: Vec<FieldElement> = f.elements().collect();
        for seed in 0..6 {
            let a = rand_form(&f, seed, 5);
            // same map written differently, and a perturbed one
            let same = a.add(&BiForm::from_terms(&f, [(2, 3, f.one())])).sub(&BiForm::from_terms(&f, [(6, 7, f.one())]));
            let different = a.add(&BiForm::from_terms(&f, [(0, 1, f.element(seed + 1))]));
            for other in [&same, &different] {
                let exhaustive = pts.iter().all(|x| pts.iter().all(|y| a.eval(x, y) == other.eval(x, y)));
                assert_eq!(a == *other, exhaustive);
                let basis = agree_on_basis_pairs(|x, y| a.eval(x, y), |x, y| other.eval(x, y), &f);
                assert_eq!(basis, exhaustive);
            }
        }
    }

    #[test]
    fn apply_left_and_substitute_match_pointwise() {
        let f = make_field(3, 1, 3).unwrap();
        let b = rand_form(&f, 17, 6);
        let m = rand_map(&f, 3);
        let (mx, my) = (rand_map(&f, 4), rand_map(&f, 5));
        assert_eq!(b.apply_left(&PLinearMap::identity(&f)).unwrap(), b);
        let id = PLinearMap::identity(&f);
        assert_eq!(b.substitute(&id, &id).unwrap(), b);
        let left = b.apply_left(&m).unwrap();
        let sub = b.substitute(&mx, &my).unwrap();
        for k in 0..25u64 {
            let (x, y) = (f.element(k * 29 + 3), f.element(k * 71 + 11));
            assert_eq!(left.eval(&x, &y), m.eval(&b.eval(&x, &y)));
            assert_eq!(sub.eval(&x, &y), b.eval(&mx.eval(&x), &my.eval(&y)));
        }
        // conjugating by the q^l Frobenius shifts every exponent by lh
        let conj = PLinearMap::monomial(&f, f.one(), 3);
        let shifted = b.apply_left(&conj).unwrap();
        for (i, j, c) in b.terms() {
            assert_eq!(shifted.coeff(i as i64 + 3, j as i64 + 3), f.frobenius(&c, 3));
        }
        // monomial substitution shifts exponent pairs
        let s = b.substitute(&PLinearMap::monomial(&f, f.one(), 1), &PLinearMap::monomial(&f, f.one(), 2)).unwrap();
        for (i, j, c) in b.terms() {
            assert_eq!(s.coeff(i as i64 + 1, j as i64 + 2), c);
        }
    }

    #[test]
    fn partial_maps_and_basis_table() {
        let f = make_field(3, 1, 3).unwrap();
        let b = rand_form(&f, 23, 8);
        let table = b.basis_table();
        for k in 0..20u64 {
            let (x, y) = (f.element(k * 37 + 1), f.element(k * 53 + 2));
            assert_eq!(b.fix_right(&y).eval(&x), b.eval(&x, &y));
            assert_eq!(b.fix_left(&x).eval(&y), b.eval(&x, &y));
            assert_eq!(table.eval(&x, &y), b.eval(&x, &y));
        }
    }
}
