//! The Budaghyan-Helleseth presemifield BH(q, l, d) on F_{q^{2l}}:
//!
//! x ∗ y = x^{q^l}y + xy^{q^l} + (β(x^{q^d}y + xy^{q^d}) + β^{q^l}(x^{q^d}y + xy^{q^d})^{q^l}) ω
//!
//! with β a nonsquare and ω ≠ 0, ω + ω^{q^l} = 0. Its semifield isotope uses
//! K_d(x) = x ∗ 1: (K_d(x)) ⋆ (K_d(y)) = x ∗ y, identity K_d(1).

use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith;
use crate::biform::{BasisTable, BiForm};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linmap::PLinearMap;
use crate::par;

/// Default cap on the number of elements of an exhaustively tabulated field.
pub const DEFAULT_TABLE_GUARD: u64 = 1 << 16;

/// Default cap on the number of (x, y) pairs in an exhaustive scan.
pub const DEFAULT_SCAN_GUARD: u128 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BhParams {
    spec: Arc<FieldSpec>,
    d: u64,
    beta: FieldElement,
    omega: FieldElement,
}

impl BhParams {
    pub fn new(spec: Arc<FieldSpec>, d: u64, beta: FieldElement, omega: FieldElement) -> Result<Self> {
        let l = spec.l() as u64;
        let n = spec.degree() as u64;
        if l < 2 {
            return Err(Error::InvalidParams("l must exceed 1".to_string()));
        }
        if d == 0 || d >= n {
            return Err(Error::InvalidParams(format!("d = {d} outside 1..={}", n - 1)));
        }
        if arith::gcd(l, d) != 1 {
            return Err(Error::InvalidParams(format!("gcd(l, d) = gcd({l}, {d}) ≠ 1")));
        }
        if (l + d).is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("l + d = {} is even", l + d)));
        }
        if beta.is_zero() || spec.is_square(&beta)? {
            return Err(Error::InvalidParams("β must be a nonsquare".to_string()));
        }
        if omega.is_zero() || !spec.trace_to_half(&omega).is_zero() {
            return Err(Error::InvalidParams("ω must be nonzero with ω + ω^{q^l} = 0".to_string()));
        }
        Ok(BhParams { spec, d, beta, omega })
    }

    /// Parameters with the canonical β = γ and ω = γ^{(q^l+1)/2}.
    pub fn canonical(spec: &Arc<FieldSpec>, d: u64) -> Result<Self> {
        let k = spec.canonical_constants();
        Self::new(spec.clone(), d, k.beta, k.omega)
    }

    pub fn with_beta(&self, beta: FieldElement) -> Result<Self> {
        Self::new(self.spec.clone(), self.d, beta, self.omega)
    }

    pub fn with_d(&self, d: u64) -> Result<Self> {
        Self::new(self.spec.clone(), d, self.beta, self.omega)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn omega(&self) -> &FieldElement {
        &self.omega
    }

    /// The partner 2l - d (taken mod 2l) of the strong-isotopism reflection.
    pub fn reflected_d(&self) -> u64 {
        let two_l = 2 * self.spec.l() as u64;
        two_l - self.d % two_l
    }

    /// x ∗_d y, evaluated straight from the trace formula.
    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let f = &*self.spec;
        let l = f.l() as i64;
        let d = self.d as i64;
        let xl = f.frobenius_q(x, l);
        let yl = f.frobenius_q(y, l);
        let head = f.add(&f.mul(&xl, y), &f.mul(x, &yl));
        let xd = f.frobenius_q(x, d);
        let yd = f.frobenius_q(y, d);
        let s = f.add(&f.mul(&xd, y), &f.mul(x, &yd));
        let bs = f.mul(&self.beta, &s);
        f.add(&head, &f.mul(&f.trace_to_half(&bs), &self.omega))
    }

    pub fn form(&self) -> BiForm {
        BiForm::from_bh(self)
    }

    /// K_d(x) = x ∗_d 1 as a p-polynomial.
    pub fn k_map(&self) -> Result<PLinearMap> {
        let k = self.form().fix_right(&self.spec.one());
        if !k.is_permutation() {
            return Err(Error::KMapSingular);
        }
        Ok(k)
    }
}

/// The commutative semifield isotope (F, +, ⋆) with u ⋆ v = K^{-1}(u) ∗ K^{-1}(v).
#[derive(Clone, Debug)]
pub struct Semifield {
    params: BhParams,
    k: PLinearMap,
    k_inv: PLinearMap,
    identity: FieldElement,
    form: BiForm,
    table: BasisTable,
}

impl Semifield {
    pub fn new(params: &BhParams) -> Result<Self> {
        let k = params.k_map()?;
        let k_inv = k.invert()?;
        let form = params.form().substitute(&k_inv, &k_inv)?;
        let table = form.basis_table();
        let one = params.spec().one();
        Ok(Semifield {
            identity: params.mul(&one, &one),
            params: params.clone(),
            k,
            k_inv,
            form,
            table,
        })
    }

    pub fn params(&self) -> &BhParams {
        &self.params
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.params.spec()
    }

    pub fn k(&self) -> &PLinearMap {
        &self.k
    }

    pub fn k_inv(&self) -> &PLinearMap {
        &self.k_inv
    }

    /// e = 1 ∗ 1
    pub fn identity(&self) -> FieldElement {
        self.identity
    }

    /// The canonical form of ⋆.
    pub fn form(&self) -> &BiForm {
        &self.form
    }

    /// u ⋆ v via the structure constants of ⋆.
    pub fn mul(&self, u: &FieldElement, v: &FieldElement) -> FieldElement {
        self.table.eval(u, v)
    }

    /// u ⋆ v as K^{-1}(u) ∗ K^{-1}(v).
    pub fn mul_direct(&self, u: &FieldElement, v: &FieldElement) -> FieldElement {
        self.params.mul(&self.k_inv.eval(u), &self.k_inv.eval(v))
    }

    /// u ↦ u ⋆ a
    pub fn right_mul_map(&self, a: &FieldElement) -> PLinearMap {
        self.form.fix_right(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entries {
    Narrow(Vec<u16>),
    Wide(Vec<u32>),
}

/// Full multiplication table over canonical element indices:
/// `get(ix, iy)` is the index of x ∗ y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTable {
    p: u64,
    n: usize,
    order: u64,
    entries: Entries,
}

impl MulTable {
    pub fn build(params: &BhParams, guard: u64) -> Result<Self> {
        let f = params.spec();
        let order = f.order();
        if order > guard {
            return Err(Error::SizeGuard {
                what: "multiplication table",
                needed: order as u128,
                limit: guard as u128,
            });
        }
        let form = params.form();
        let rows = order as usize;
        let entries = if order <= u16::MAX as u64 {
            let mut data = vec![0u16; rows * rows];
            par::for_each_chunk_mut(&mut data, rows, |ix, row| {
                fill_row(f, &form, ix as u64, |iy, v| row[iy] = v as u16)
            });
            Entries::Narrow(data)
        } else {
            let mut data = vec![0u32; rows * rows];
            par::for_each_chunk_mut(&mut data, rows, |ix, row| {
                fill_row(f, &form, ix as u64, |iy, v| row[iy] = v as u32)
            });
            Entries::Wide(data)
        };
        Ok(MulTable {
            p: f.p(),
            n: f.degree(),
            order,
            entries,
        })
    }

    /// Rebuilds a table from raw row-major entries.
    pub fn from_entries(p: u64, n: usize, entries: Vec<u32>) -> Result<Self> {
        let order = p
            .checked_pow(n as u32)
            .filter(|o| (*o as u128) * (*o as u128) == entries.len() as u128)
            .ok_or_else(|| Error::InvalidField("table size does not match p^n".to_string()))?;
        if entries.iter().any(|&e| e as u64 >= order) {
            return Err(Error::InvalidField("table entry out of range".to_string()));
        }
        let entries = if order <= u16::MAX as u64 {
            Entries::Narrow(entries.into_iter().map(|e| e as u16).collect())
        } else {
            Entries::Wide(entries)
        };
        Ok(MulTable { p, n, order, entries })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Whether entries fit in 16 bits.
    pub fn is_narrow(&self) -> bool {
        matches!(self.entries, Entries::Narrow(_))
    }

    #[inline]
    pub fn get(&self, ix: u64, iy: u64) -> u32 {
        let k = (ix * self.order + iy) as usize;
        match &self.entries {
            Entries::Narrow(v) => v[k] as u32,
            Entries::Wide(v) => v[k],
        }
    }

    pub fn row(&self, ix: u64) -> Vec<u32> {
        (0..self.order).map(|iy| self.get(ix, iy)).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<u32> {
        match &self.entries {
            Entries::Narrow(v) => v.iter().map(|&e| e as u32).collect(),
            Entries::Wide(v) => v.clone(),
        }
    }

    pub fn set(&mut self, ix: u64, iy: u64, value: u32) {
        let k = (ix * self.order + iy) as usize;
        match &mut self.entries {
            Entries::Narrow(v) => v[k] = value as u16,
            Entries::Wide(v) => v[k] = value,
        }
    }
}

/// Fills one row x ∗ y for y in index order. The row map y ↦ x ∗ y is
/// F_p-linear with columns c_k = x ∗ t^k. Stepping the index from y to y+1
/// increments digit k and resets digits below it from p-1 to 0, which adds
/// c_0 + ... + c_k in characteristic p.
fn fill_row(f: &FieldSpec, form: &BiForm, ix: u64, mut put: impl FnMut(usize, u64)) {
    let n = f.degree();
    let p = f.p();
    let x = f.element(ix);
    let map = form.fix_left(&x);
    let mut prefix = Vec::with_capacity(n);
    let mut acc = FieldElement::ZERO;
    for k in 0..n {
        acc = f.add(&acc, &map.eval(&f.basis(k)));
        prefix.push(acc);
    }
    let mut digits = vec![0u64; n];
    let mut value = FieldElement::ZERO;
    put(0, 0);
    for iy in 1..f.order() as usize {
        let mut k = 0;
        while digits[k] == p - 1 {
            digits[k] = 0;
            k += 1;
        }
        digits[k] += 1;
        value = f.add(&value, &prefix[k]);
        put(iy, f.index_of(&value));
    }
}

/// Outcome of the exhaustive presemifield scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresemifieldReport {
    pub order: u64,
    pub pairs_scanned: u128,
    /// Pairs (x, y), both nonzero, with x ∗ y = 0.
    pub zero_divisors: u64,
    /// Pairs with x ∗ y ≠ y ∗ x.
    pub asymmetric_pairs: u64,
    pub distributive_samples: u64,
    pub distributive_failures: u64,
}

impl PresemifieldReport {
    pub fn passes(&self) -> bool {
        self.zero_divisors == 0 && self.asymmetric_pairs == 0 && self.distributive_failures == 0
    }
}

/// Exhaustive N² scan of the table: zero divisors and commutativity, plus
/// both distributive laws on sampled triples.
pub fn check_presemifield(params: &BhParams, guard: u64) -> Result<PresemifieldReport> {
    let table = MulTable::build(params, guard)?;
    Ok(check_table(params.spec(), &table, 4096))
}

pub fn check_table(f: &FieldSpec, table: &MulTable, samples: u64) -> PresemifieldReport {
    let order = table.order();
    let counts = par::map_range(0..order, |ix| {
        let mut zero = 0u64;
        let mut asym = 0u64;
        for iy in 0..order {
            let v = table.get(ix, iy);
            if v == 0 && ix != 0 && iy != 0 {
                zero += 1;
            }
            if v != table.get(iy, ix) {
                asym += 1;
            }
        }
        (zero, asym)
    });
    let (zero_divisors, asymmetric_pairs) = counts
        .into_iter()
        .fold((0, 0), |(a, b), (z, s)| (a + z, b + s));
    let idx_add = |a: u32, b: u32| f.index_of(&f.add(&f.element(a as u64), &f.element(b as u64))) as u32;
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % order
    };
    let mut failures = 0;
    for _ in 0..samples {
        let (x, y, z) = (next(), next(), next());
        let yz = idx_add(y as u32, z as u32) as u64;
        let left = table.get(x, yz) == idx_add(table.get(x, y), table.get(x, z));
        let xy = idx_add(x as u32, y as u32) as u64;
        let right = table.get(xy, z) == idx_add(table.get(x, z), table.get(y, z));
        if !(left && right) {
            failures += 1;
        }
    }
    PresemifieldReport {
        order,
        pairs_scanned: order as u128 * order as u128,
        zero_divisors,
        asymmetric_pairs,
        distributive_samples: samples,
        distributive_failures: failures,
    }
}

/// Planarity of f(x) = x ∗ x: x ↦ f(x + a) - f(x) is a bijection for every a ≠ 0.
pub fn check_planarity(params: &BhParams, guard: u64) -> Result<bool> {
    let f = params.spec();
    let order = f.order();
    if order > guard {
        return Err(Error::SizeGuard {
            what: "planarity scan",
            needed: order as u128,
            limit: guard as u128,
        });
    }
    let values: Vec<u64> = par::map_range(0..order, |i| {
        let x = f.element(i);
        f.index_of(&params.mul(&x, &x))
    });
    Ok(is_planar(f, &values))
}

/// Planarity of the function with value table `values` (indexed by element
/// index, holding element indices).
pub fn is_planar(f: &FieldSpec, values: &[u64]) -> bool {
    let order = f.order();
    let elems: Vec<FieldElement> = values.iter().map(|&v| f.element(v)).collect();
    let ok = par::map_range(1..order, |ia| {
        let a = f.element(ia);
        let mut seen = vec![false; order as usize];
        for ix in 0..order {
            let x = f.element(ix);
            let shifted = f.index_of(&f.add(&x, &a)) as usize;
            let diff = f.index_of(&f.sub(&elems[shifted], &elems[ix as usize])) as usize;
            if core::mem::replace(&mut seen[diff], true) {
                return false;
            }
        }
        true
    });
    ok.into_iter().all(|b| b)
}
