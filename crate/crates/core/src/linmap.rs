//! Linearized polynomials L(x) = Σ_{i<n} c_i x^{p^i} over F_{p^n}.
//!
//! These are exactly the F_p-linear maps of the field. Maps are stored in
//! p-polynomial form; permutation tests and inversion go through the matrix
//! over F_p and back.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::fp::FpMatrix;

#[derive(Clone)]
pub struct PLinearMap {
    spec: Arc<FieldSpec>,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for PLinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &FieldElement)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        f.debug_struct("PLinearMap").field("terms", &terms).finish()
    }
}

impl PartialEq for PLinearMap {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.spec, &other.spec) && self.coeffs == other.coeffs
    }
}

impl Eq for PLinearMap {}

pub(crate) fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PLinearMap {
    pub fn new(spec: Arc<FieldSpec>, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() != spec.degree() {
            return Err(Error::InvalidField(alloc::format!(
                "a linearized map needs {} coefficients",
                spec.degree()
            )));
        }
        Ok(PLinearMap { spec, coeffs })
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        PLinearMap {
            spec: spec.clone(),
            coeffs: vec![FieldElement::ZERO; spec.degree()],
        }
    }

    pub fn identity(spec: &Arc<FieldSpec>) -> Self {
        Self::monomial(spec, spec.one(), 0)
    }

    /// x ↦ c · x^{p^e}
    pub fn monomial(spec: &Arc<FieldSpec>, c: FieldElement, e: i64) -> Self {
        let mut m = Self::zero(spec);
        m.coeffs[e.rem_euclid(spec.degree() as i64) as usize] = c;
        m
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of x^{p^i}, subscript read mod n.
    pub fn coeff(&self, i: i64) -> FieldElement {
        self.coeffs[i.rem_euclid(self.coeffs.len() as i64) as usize]
    }

    /// Adds `c` to the coefficient of x^{p^i}.
    pub fn add_term(&mut self, c: FieldElement, i: i64) {
        let i = i.rem_euclid(self.coeffs.len() as i64) as usize;
        self.coeffs[i] = self.spec.add(&self.coeffs[i], &c);
    }

    pub fn add(&self, other: &PLinearMap) -> PLinearMap {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.spec.add(a, b))
            .collect();
        PLinearMap {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    /// x ↦ c · L(x)
    pub fn scale(&self, c: &FieldElement) -> PLinearMap {
        let coeffs = self.coeffs.iter().map(|a| self.spec.mul(c, a)).collect();
        PLinearMap {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let f = &self.spec;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(FieldElement::ZERO, |acc, (i, c)| {
                f.add(&acc, &f.mul(c, &f.frobenius(x, i as i64)))
            })
    }

    /// Matrix over F_p whose column j is L(t^j).
    pub fn to_matrix(&self) -> FpMatrix {
        let f = &self.spec;
        let n = f.degree();
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let img = self.eval(&f.basis(j));
                img.coeffs(n).iter().map(|&c| c as u32).collect()
            })
            .collect();
        FpMatrix::from_columns(f.p(), &cols)
    }

    /// The map x ↦ self(other(x)).
    pub fn compose(&self, other: &PLinearMap) -> PLinearMap {
        let f = &self.spec;
        let n = f.degree();
        let mut out = vec![FieldElement::ZERO; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                let term = f.mul(a, &f.frobenius(b, i as i64));
                out[k] = f.add(&out[k], &term);
            }
        }
        PLinearMap {
            spec: self.spec.clone(),
            coeffs: out,
        }
    }

    pub fn is_permutation(&self) -> bool {
        self.to_matrix().rank() == self.spec.degree()
    }

    pub fn invert(&self) -> Result<PLinearMap> {
        let inv = self.to_matrix().inverse().ok_or(Error::NotInvertible)?;
        Self::from_matrix(&self.spec, &inv)
    }

    /// The p-polynomial of the F_p-linear map with matrix `m`.
    pub fn from_matrix(spec: &Arc<FieldSpec>, m: &FpMatrix) -> Result<PLinearMap> {
        let n = spec.degree();
        let images: Vec<FieldElement> = (0..n)
            .map(|j| {
                let col: Vec<u64> = m.column(j).iter().map(|&c| c as u64).collect();
                spec.from_residues(&col)
            })
            .collect::<Result<_>>()?;
        Self::from_basis_images(spec, &images)
    }

    /// Interpolates the unique p-polynomial sending t^k to `images[k]` by
    /// solving the Moore system Σ_i c_i (t^k)^{p^i} = images[k].
    pub fn from_basis_images(spec: &Arc<FieldSpec>, images: &[FieldElement]) -> Result<PLinearMap> {
        let n = spec.degree();
        let rows: Vec<Vec<FieldElement>> = (0..n)
            .map(|k| (0..n).map(|i| spec.frobenius_columns(i)[k]).collect())
            .collect();
        let coeffs = solve_square(spec, rows, images.to_vec()).ok_or(Error::NotInvertible)?;
        Ok(PLinearMap {
            spec: spec.clone(),
            coeffs,
        })
    }

    /// The map obtained by a function on basis elements, e.g. a closure built
    /// from other maps or from a multiplication.
    pub fn from_fn(spec: &Arc<FieldSpec>, f: impl Fn(&FieldElement) -> FieldElement) -> Result<PLinearMap> {
        let images: Vec<FieldElement> = (0..spec.degree()).map(|k| f(&spec.basis(k))).collect();
        Self::from_basis_images(spec, &images)
    }
}

/// Gaussian elimination over F_{p^n} for a square system; `None` if singular.
pub(crate) fn solve_square(
    f: &FieldSpec,
    mut rows: Vec<Vec<FieldElement>>,
    mut rhs: Vec<FieldElement>,
) -> Option<Vec<FieldElement>> {
    let n = rows.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(piv, col);
        rhs.swap(piv, col);
        let inv = f.inv(&rows[col][col]).ok()?;
        for x in rows[col].iter_mut() {
            *x = f.mul(x, &inv);
        }
        rhs[col] = f.mul(&rhs[col], &inv);
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col];
            for c in col..n {
                let t = f.mul(&factor, &rows[col][c]);
                rows[r][c] = f.sub(&rows[r][c], &t);
            }
            let t = f.mul(&factor, &rhs[col]);
            rhs[r] = f.sub(&rhs[r], &t);
        }
    }
    Some(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn random_map(spec: &Arc<FieldSpec>, seed: u64) -> PLinearMap {
        let mut s = seed;
        let coeffs = (0..spec.degree())
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                spec.element(s >> 20)
            })
            .collect();
        PLinearMap::new(spec.clone(), coeffs).unwrap()
    }

    #[test]
    fn eval_basics() {
        let f = make_field(3, 1, 3).unwrap();
        let id = PLinearMap::identity(&f);
        let x = f.element(500);
        let y = f.element(77);
        assert_eq!(id.eval(&x), x);
        let conj = PLinearMap::monomial(&f, f.one(), 3);
        assert_eq!(conj.eval(&x), f.frobenius_q(&x, 3));
        let m = random_map(&f, 9);
        assert_eq!(m.eval(&f.add(&x, &y)), f.add(&m.eval(&x), &m.eval(&y)));
    }

    #[test]
    fn matrices() {
        let f = make_field(3, 1, 3).unwrap();
        let n = f.degree();
        assert_eq!(PLinearMap::identity(&f).to_matrix(), FpMatrix::identity(n, 3));
        assert_eq!(PLinearMap::zero(&f).to_matrix(), FpMatrix::zero(n, 3));
        let fr = PLinearMap::monomial(&f, f.one(), 2).to_matrix();
        for j in 0..n {
            let col: Vec<u32> = f.frobenius_columns(2)[j].coeffs(n).iter().map(|&c| c as u32).collect();
            assert_eq!(fr.column(j), col);
        }
        // eval agrees with the matrix-vector product everywhere
        let m = random_map(&f, 3);
        let mat = m.to_matrix();
        for x in f.elements() {
            let v: Vec<u32> = x.coeffs(n).iter().map(|&c| c as u32).collect();
            let img: Vec<u32> = m.eval(&x).coeffs(n).iter().map(|&c| c as u32).collect();
            assert_eq!(mat.mul_vec(&v), img);
        }
    }

    #[test]
    fn composition() {
        let f = make_field(3, 1, 3).unwrap();
        let g = random_map(&f, 11);
        assert_eq!(PLinearMap::identity(&f).compose(&g), g);
        let a = PLinearMap::monomial(&f, f.one(), 4);
        let b = PLinearMap::monomial(&f, f.one(), 5);
        assert_eq!(a.compose(&b), PLinearMap::monomial(&f, f.one(), 3));
        for seed in 0..5 {
            let u = random_map(&f, seed);
            let v = random_map(&f, seed + 100);
            assert_eq!(u.compose(&v).to_matrix(), u.to_matrix().mul(&v.to_matrix()));
        }
    }

    #[test]
    fn permutations_and_inverses() {
        let f = make_field(3, 1, 3).unwrap();
        let id = PLinearMap::identity(&f);
        assert!(id.is_permutation());
        assert!(!PLinearMap::zero(&f).is_permutation());
        let trace = id.add(&PLinearMap::monomial(&f, f.one(), 3));
        assert!(!trace.is_permutation());
        assert_eq!(trace.eval(&f.canonical_constants().omega), f.zero());
        assert_eq!(trace.invert(), Err(Error::NotInvertible));
        assert_eq!(id.invert().unwrap(), id);
        let a = PLinearMap::monomial(&f, f.one(), 2);
        assert_eq!(a.invert().unwrap(), PLinearMap::monomial(&f, f.one(), 4));
        let mut tested = 0;
        for seed in 0..20 {
            let m = random_map(&f, seed);
            if !m.is_permutation() {
                continue;
            }
            let inv = m.invert().unwrap();
            for k in 0..f.degree() {
                assert_eq!(m.eval(&inv.eval(&f.basis(k))), f.basis(k));
            }
            assert_eq!(m.compose(&inv), id);
            assert_eq!(inv.compose(&m), id);
            tested += 1;
        }
        assert!(tested > 5);
    }

    #[test]
    fn rank_test_agrees_with_image_count() {
        let f = make_field(3, 1, 2).unwrap();
        let mut seen = [0usize; 2];
        for seed in 0..40 {
            let mut m = random_map(&f, seed);
            if seed % 3 == 0 {
                // force some singular maps
                m = m.compose(&PLinearMap::identity(&f).add(&PLinearMap::monomial(&f, f.one(), 2)));
            }
            let mut hit = vec![false; f.order() as usize];
            for x in f.elements() {
                hit[f.index_of(&m.eval(&x)) as usize] = true;
            }
            let bijective = hit.iter().all(|&b| b);
            assert_eq!(m.is_permutation(), bijective);
            seen[bijective as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }
}
